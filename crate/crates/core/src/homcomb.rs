//! Morphisms between the indecomposables `C_{k,u,l,v}`: the index sets
//! `Φ` and `Ψ`, the basis maps `φ` and `ψ`, and the irreducible maps leaving
//! a given indecomposable.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Path, PathCombination};
use crate::complex::{ChainMap, PathMatrix, ProjComplex};
use crate::error::{Error, Result};
use crate::indecomposables::{build_complex, Quadruple};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisMapKind {
    Phi,
    Psi,
}

/// Whether `ψ` carries its sign `(-1)^{k+l}`. Dropping it is only useful to
/// check that the verification suites notice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsiSign {
    #[default]
    Signed,
    Unsigned,
}

/// `q2 ∈ Φ_q`.
pub fn in_phi(alg: &Algebra, q: Quadruple, q2: Quadruple) -> bool {
    let Quadruple { k, u, l, v } = q;
    let Quadruple { k: k2, u: u2, l: l2, v: v2 } = q2;
    if !(k2 <= k && k <= k2 + l2 && k2 + l2 <= k + l) {
        return false;
    }
    if alg.succ_pow(u2, (l2 + 1) as i64) != alg.succ_pow(u, (k2 + l2 + 1 - k) as i64) {
        return false;
    }
    if k2 == k && u > u2 {
        return false;
    }
    let e = q.end_vertex(alg);
    if k + l == k2 + l2 && v < e && !(v <= v2 && v2 < e) {
        return false;
    }
    if k2 + l2 == k && q2.has_tail(alg) && v2 >= u {
        return false;
    }
    true
}

fn preceq_l(q: Quadruple, q2: Quadruple) -> bool {
    q.k <= q2.k || (q.k == q2.k + 1 && q2.u < q.u)
}

fn r1(alg: &Algebra, q: Quadruple, q2: Quadruple) -> bool {
    let top = q.top();
    if !(q2.k <= top && top <= q2.top()) {
        return false;
    }
    !q.has_tail(alg) || q2.k < top - 1 || (q2.k == top - 1 && q.v <= q2.u)
}

fn r2(alg: &Algebra, q: Quadruple, q2: Quadruple) -> bool {
    let e2 = q2.end_vertex(alg);
    q.top() == q2.top() + 1 && q.has_tail(alg) && (q2.v < q.v || q2.v == e2) && q.v <= e2
}

/// `q2 ∈ Ψ_q`.
pub fn in_psi(alg: &Algebra, q: Quadruple, q2: Quadruple) -> bool {
    if !preceq_l(q, q2) || !(r1(alg, q, q2) || r2(alg, q, q2)) {
        return false;
    }
    let shift = q.top() - q2.k;
    shift >= 0 && alg.succ_pow(q.u, (q.l + 1) as i64) == alg.succ_pow(q2.u, shift as i64)
}

/// Dimension of `Hom(C_q, C_{q2})` as predicted by `Φ` and `Ψ`.
pub fn hom_dim(alg: &Algebra, q: Quadruple, q2: Quadruple) -> usize {
    usize::from(in_phi(alg, q, q2)) + usize::from(in_psi(alg, q, q2))
}

/// The basis kinds present in `Hom(C_q, C_{q2})`.
pub fn basis_kinds(alg: &Algebra, q: Quadruple, q2: Quadruple) -> Vec<BasisMapKind> {
    let mut out = Vec::new();
    if in_phi(alg, q, q2) {
        out.push(BasisMapKind::Phi);
    }
    if in_psi(alg, q, q2) {
        out.push(BasisMapKind::Psi);
    }
    out
}

/// Accumulates the components of a chain map `C_source -> C_target`.
struct MapBuilder<'a> {
    alg: &'a Algebra,
    source: ProjComplex,
    target: ProjComplex,
    comps: BTreeMap<i32, PathMatrix>,
}

impl<'a> MapBuilder<'a> {
    fn new(alg: &'a Algebra, source: Quadruple, target: Quadruple) -> Result<Self> {
        Ok(MapBuilder {
            alg,
            source: build_complex(alg, source)?,
            target: build_complex(alg, target)?,
            comps: BTreeMap::new(),
        })
    }

    /// Puts `coeff · P_path` from summand `col` of the source to summand
    /// `row` of the target in degree `deg`.
    fn put(&mut self, deg: i32, row: usize, col: usize, path: Path, coeff: Scalar) -> Result<()> {
        let (src, tgt) = (self.source.summands(deg), self.target.summands(deg));
        if col >= src.len() || row >= tgt.len() {
            return Err(Error::InvalidMorphism(format!("no summand for a component in degree {deg}")));
        }
        if path.start != tgt[row] || path.end() != src[col] {
            return Err(Error::InvalidMorphism(format!("{path} does not run from P{} to P{}", src[col], tgt[row])));
        }
        let comb = PathCombination::single(self.alg.id_of(&path)?, coeff);
        let m = self.comps.entry(deg).or_insert_with(|| PathMatrix::zeros(tgt.len(), src.len()));
        m.add_at(row, col, &comb);
        Ok(())
    }

    fn finish(self) -> ChainMap {
        ChainMap::new(self.source, self.target, self.comps)
    }
}

/// `φ_{C', C} : C_source -> C_target`.
pub fn phi_map(alg: &Algebra, target: Quadruple, source: Quadruple) -> Result<ChainMap> {
    if !in_phi(alg, source, target) {
        return Err(Error::Membership(format!("{target} is not in Φ of {source}")));
    }
    let Quadruple { k, u, l, v } = source;
    let (k2, u2, l2) = (target.k, target.u, target.l);
    let mut b = MapBuilder::new(alg, source, target)?;
    let one = Scalar::one();
    let (top, top2) = (source.top(), target.top());
    if top2 == k {
        let w = alg.succ_pow(u2, l2 as i64);
        b.put(k, 0, 0, alg.factor_path(u, w)?, one)?;
        if l == 0 && v < u {
            if !target.has_tail(alg) {
                return Err(Error::InvalidMorphism(format!("{target} has no summand to receive P{v}")));
            }
            let (deg, row) = target.tail_position();
            b.put(deg, row, 0, alg.factor_path(v, target.v)?, one)?;
        }
    } else {
        let w = alg.succ_pow(u2, (k - k2) as i64);
        b.put(k, 0, 0, alg.factor_path(u, w)?, one)?;
        for j in 1..=(top.min(top2) - k) {
            let x = source.chain_vertex(alg, j);
            b.put(k + j, 0, 0, Path::stationary(x), one)?;
        }
        if top == top2 && source.has_tail(alg) {
            let (deg, col) = source.tail_position();
            let (_, row) = target.tail_position();
            b.put(deg, row, col, alg.factor_path(v, target.v)?, one)?;
        }
    }
    Ok(b.finish())
}

/// `ψ_{C', C} : C_source -> C_target`, with sign `(-1)^{k+l}`.
pub fn psi_map(alg: &Algebra, target: Quadruple, source: Quadruple) -> Result<ChainMap> {
    psi_map_with(alg, target, source, PsiSign::Signed)
}

pub fn psi_map_with(alg: &Algebra, target: Quadruple, source: Quadruple, sign: PsiSign) -> Result<ChainMap> {
    if !in_psi(alg, source, target) {
        return Err(Error::Membership(format!("{target} is not in Ψ of {source}")));
    }
    let top = source.top();
    let coeff = match sign {
        PsiSign::Signed if top.rem_euclid(2) == 1 => -Scalar::one(),
        _ => Scalar::one(),
    };
    let mut b = MapBuilder::new(alg, source, target)?;
    let tail = source.has_tail(alg);
    let (tdeg, tcol) = source.tail_position();
    if r1(alg, source, target) {
        let e = source.end_vertex(alg);
        b.put(top, 0, 0, alg.max_path(e)?, coeff)?;
        if tail {
            let w = target.chain_vertex(alg, top - target.k - 1);
            b.put(tdeg, 0, tcol, alg.factor_path(source.v, w)?, coeff)?;
        }
    } else {
        let w = target.end_vertex(alg);
        b.put(tdeg, 0, tcol, alg.factor_path(source.v, w)?, coeff)?;
    }
    Ok(b.finish())
}

pub fn basis_map(alg: &Algebra, kind: BasisMapKind, target: Quadruple, source: Quadruple) -> Result<ChainMap> {
    match kind {
        BasisMapKind::Phi => phi_map(alg, target, source),
        BasisMapKind::Psi => psi_map(alg, target, source),
    }
}

/// Targets of the irreducible maps leaving `C_q`: `C'` always, `C''` when
/// it exists.
pub fn irr_targets_quadruple(alg: &Algebra, q: Quadruple) -> Result<Vec<Quadruple>> {
    q.check(alg)?;
    let (n, m) = (alg.n(), alg.m());
    let Quadruple { k, u, l, v } = q;
    let c1 = if u > 1 {
        Quadruple::new(k - 1, u - 1, l + 1, v)
    } else if (n > 1 && u == 1) || (n == 1 && u == 0) {
        Quadruple::new(k - 1, -m, l + 1, v)
    } else if u == 0 {
        Quadruple::new(k - 1, n - 1, l + 1, v)
    } else if l == 0 && u == v {
        Quadruple::new(k, u + 1, 0, u + 1)
    } else {
        Quadruple::new(k, u + 1, l, v)
    };
    let mut out = vec![c1];
    let lonely = l == 0 && ((u == v && (u == -m || (1..n).contains(&u))) || v + 1 == u);
    if !lonely {
        let c2 = if l == 1 && u < 0 && (v > 0 || v == -1) {
            Quadruple::new(k, u, 0, u)
        } else if l > 0 && v > 0 {
            Quadruple::new(k, u, l - 1, v - 1)
        } else if (l > 0 && v == 0 && m > 0) || (l == 0 && -m < u && u == v && u <= 0) {
            Quadruple::new(k, u, l, -m)
        } else if l > 0 && ((v == 0 && m == 0) || v == -1) {
            Quadruple::new(k, u, l - 1, n - 1)
        } else if (l > 0 && v < -1) || (l == 0 && v + 1 < u) {
            Quadruple::new(k, u, l, v + 1)
        } else {
            return Err(Error::NotInIndexSet(format!("no second irreducible target computed for {q}")));
        };
        out.push(c2);
    }
    Ok(out)
}
