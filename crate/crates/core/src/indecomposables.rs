//! The indecomposable complexes `C_{k,u,l,v}`, their index set and the
//! dictionary with homotopy strings.
//!
//! `C_{k,u,l,v}` is the chain `P_u -> P_{s(u)} -> ... -> P_{s^l(u)}` in
//! degrees `k..=k+l` with differentials `P_{σ}`, plus, when
//! `v < s^l(u)`, an extra summand `P_v` in degree `k+l-1` mapping to the last
//! term by `P_{ς_{v, s^l(u)}}`. In every degree the chain summand comes
//! first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, PathCombination, Vertex};
use crate::complex::{PathMatrix, ProjComplex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quadruple {
    pub k: i32,
    pub u: Vertex,
    pub l: i32,
    pub v: Vertex,
}

impl Quadruple {
    pub const fn new(k: i32, u: Vertex, l: i32, v: Vertex) -> Self {
        Quadruple { k, u, l, v }
    }

    /// `s^l(u)`, the vertex of the last chain term.
    pub fn end_vertex(&self, alg: &Algebra) -> Vertex {
        alg.succ_pow(self.u, self.l as i64)
    }

    /// Whether the extra summand `P_v` is present.
    pub fn has_tail(&self, alg: &Algebra) -> bool {
        self.v < self.end_vertex(alg)
    }

    /// The vertex `s^j(u)` of the chain term in degree `k + j`.
    pub fn chain_vertex(&self, alg: &Algebra, j: i32) -> Vertex {
        alg.succ_pow(self.u, j as i64)
    }

    /// Degree of the last chain term.
    pub fn top(&self) -> i32 {
        self.k + self.l
    }

    /// Position `(degree, summand index)` of the tail summand.
    pub fn tail_position(&self) -> (i32, usize) {
        (self.k + self.l - 1, usize::from(self.l > 0))
    }

    pub fn check(&self, alg: &Algebra) -> Result<()> {
        if in_calc(alg, self.k, self.u, self.l, self.v) {
            Ok(())
        } else {
            Err(Error::NotInIndexSet(self.to_string()))
        }
    }

    /// Human-readable picture `u -> s(u) -> ... -> s^l(u) <- v`.
    pub fn unfolded(&self, alg: &Algebra) -> String {
        let mut out = format!("[deg {}] {}", self.k, self.u);
        for j in 1..=self.l {
            let prev = self.chain_vertex(alg, j - 1);
            out.push_str(&format!(" -{}-> {}", alg.max_path(prev).expect("vertex in range"), self.chain_vertex(alg, j)));
        }
        if self.has_tail(alg) {
            let e = self.end_vertex(alg);
            out.push_str(&format!(" <-{}- {}", alg.factor_path(self.v, e).expect("tail factors"), self.v));
        }
        out
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.k, self.u, self.l, self.v)
    }
}

impl FromStr for Quadruple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected (k,u,l,v), got {s:?}")))?;
        let parts: Vec<i32> = inner
            .split(',')
            .map(|p| p.trim().parse::<i32>().map_err(|_| Error::Parse(format!("bad integer {p:?} in {s:?}"))))
            .collect::<Result<_>>()?;
        match parts[..] {
            [k, u, l, v] => Ok(Quadruple { k, u, l, v }),
            _ => Err(Error::Parse(format!("expected four entries in {s:?}"))),
        }
    }
}

/// Membership in the index set: `v = s^l(u)`, or `v < s^l(u) <= 0`.
pub fn in_calc(alg: &Algebra, _k: i32, u: Vertex, l: i32, v: Vertex) -> bool {
    if l < 0 || !alg.contains(u) || !alg.contains(v) {
        return false;
    }
    let e = alg.succ_pow(u, l as i64);
    v == e || (v < e && e <= 0)
}

/// The complex `C_{k,u,l,v}`.
pub fn build_complex(alg: &Algebra, q: Quadruple) -> Result<ProjComplex> {
    q.check(alg)?;
    let tail = q.has_tail(alg);
    let mut summands: BTreeMap<i32, Vec<Vertex>> = BTreeMap::new();
    for j in 0..=q.l {
        summands.entry(q.k + j).or_default().push(q.chain_vertex(alg, j));
    }
    if tail {
        summands.entry(q.k + q.l - 1).or_default().push(q.v);
    }
    let mut differentials = BTreeMap::new();
    for j in 0..q.l {
        let deg = q.k + j;
        let w = q.chain_vertex(alg, j);
        let mut d = PathMatrix::zeros(summands[&(deg + 1)].len(), summands[&deg].len());
        d.set(0, 0, alg.comb_of(&alg.max_path(w)?)?);
        differentials.insert(deg, d);
    }
    if tail {
        let (deg, col) = q.tail_position();
        let e = q.end_vertex(alg);
        let entry: PathCombination = alg.comb_of(&alg.factor_path(q.v, e)?)?;
        let d = differentials
            .entry(deg)
            .or_insert_with(|| PathMatrix::zeros(summands[&(deg + 1)].len(), summands[&deg].len()));
        d.set(0, col, entry);
    }
    Ok(ProjComplex::new(summands, differentials))
}

/// A finite slice `k ∈ [k_min, k_max]`, `l <= l_max` of the index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadWindow {
    pub k_min: i32,
    pub k_max: i32,
    pub l_max: i32,
}

impl QuadWindow {
    pub fn new(k_min: i32, k_max: i32, l_max: i32) -> Self {
        QuadWindow { k_min, k_max, l_max }
    }

    pub fn contains(&self, q: &Quadruple) -> bool {
        (self.k_min..=self.k_max).contains(&q.k) && (0..=self.l_max).contains(&q.l)
    }
}

/// All quadruples in the window, in lexicographic order of `(k, u, l, v)`.
pub fn enumerate_quadruples(alg: &Algebra, w: QuadWindow) -> Result<Vec<Quadruple>> {
    if w.l_max < 0 {
        return Err(Error::InvalidWindow(format!("l_max = {} is negative", w.l_max)));
    }
    let mut out = Vec::new();
    for k in w.k_min..=w.k_max {
        for u in alg.vertices() {
            for l in 0..=w.l_max {
                for v in alg.vertices() {
                    if in_calc(alg, k, u, l, v) {
                        out.push(Quadruple { k, u, l, v });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `ΣC_{k,u,l,v} ≅ C_{k-1,u,l,v}`.
pub fn suspend_quadruple(q: Quadruple) -> Quadruple {
    Quadruple { k: q.k - 1, ..q }
}

/// Representatives of the homotopy strings up to reversal. Arrow indices
/// `>= n` stand for their remainder mod `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HomotopyString {
    /// The stationary path at `u`.
    Stationary { u: Vertex },
    /// `α_u ⋯ α_{u+l}`.
    Descending { u: Vertex, l: i32 },
    /// `α_u ⋯ α_{u+l} ᾱ_{-1} ⋯ ᾱ_v`.
    Turning { u: Vertex, l: i32, v: Vertex },
}

impl HomotopyString {
    pub fn check(&self, alg: &Algebra) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidString(format!("{self}: {why}")));
        match *self {
            HomotopyString::Stationary { u } => {
                if !alg.contains(u) {
                    return bad("vertex out of range");
                }
            }
            HomotopyString::Descending { u, l } => {
                if !alg.contains(u) || l < 0 {
                    return bad("need u in range and l >= 0");
                }
            }
            HomotopyString::Turning { u, l, v } => {
                if !alg.contains(u) || l < 0 {
                    return bad("need u in range and l >= 0");
                }
                if !(-alg.m()..=-1).contains(&v) {
                    return bad("v must lie on the tail");
                }
                if u + l < 0 || (u + l).rem_euclid(alg.n()) != alg.n() - 1 {
                    return bad("the direct part must end with α_{n-1}");
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for HomotopyString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HomotopyString::Stationary { u } => write!(f, "e{u}"),
            HomotopyString::Descending { u, l } => write!(f, "a{u}..a{}", u + l),
            HomotopyString::Turning { u, l, v } => write!(f, "a{u}..a{}~a-1..a{v}", u + l),
        }
    }
}

impl FromStr for HomotopyString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::Parse(format!("bad homotopy string {s:?}"));
        let int = |t: &str| t.parse::<i32>().map_err(|_| err());
        let range = |t: &str| -> Result<(i32, i32)> {
            let (a, b) = match t.split_once("..") {
                Some((a, b)) => (a, b),
                None => (t, t),
            };
            let a = int(a.strip_prefix('a').ok_or_else(err)?)?;
            let b = int(b.strip_prefix('a').ok_or_else(err)?)?;
            Ok((a, b))
        };
        if let Some(u) = s.strip_prefix('e') {
            return Ok(HomotopyString::Stationary { u: int(u)? });
        }
        match s.split_once('~') {
            None => {
                let (u, e) = range(s)?;
                Ok(HomotopyString::Descending { u, l: e - u })
            }
            Some((direct, inverse)) => {
                let (u, e) = range(direct)?;
                let (start, v) = range(inverse)?;
                if start != -1 {
                    return Err(err());
                }
                Ok(HomotopyString::Turning { u, l: e - u, v })
            }
        }
    }
}

/// The quadruple of `X_{k,θ}`.
pub fn string_to_quadruple(alg: &Algebra, k: i32, theta: HomotopyString) -> Result<Quadruple> {
    theta.check(alg)?;
    let n = alg.n();
    Ok(match theta {
        HomotopyString::Stationary { u } => Quadruple::new(k, u, 0, u),
        HomotopyString::Descending { u, l } if u < 0 && u + l < 0 => Quadruple::new(k + 1, u + l + 1, 0, u),
        HomotopyString::Descending { u, l } if u < 0 => Quadruple::new(k, u, u + l + 1, (u + l + 1).rem_euclid(n)),
        HomotopyString::Descending { u, l } => Quadruple::new(k, u, l + 1, (u + l + 1).rem_euclid(n)),
        HomotopyString::Turning { u, l, v } if u < 0 => Quadruple::new(k, u, u + l + 1, v),
        HomotopyString::Turning { u, l, v } => Quadruple::new(k, u, l + 1, v),
    })
}

/// Inverse of [`string_to_quadruple`].
pub fn quadruple_to_string(alg: &Algebra, q: Quadruple) -> Result<(i32, HomotopyString)> {
    q.check(alg)?;
    let Quadruple { k, u, l, v } = q;
    Ok(if l == 0 && v == u {
        (k, HomotopyString::Stationary { u })
    } else if l == 0 {
        (k - 1, HomotopyString::Descending { u: v, l: u - v - 1 })
    } else {
        let sl = if u < 0 { l - u - 1 } else { l - 1 };
        if q.has_tail(alg) {
            (k, HomotopyString::Turning { u, l: sl, v })
        } else {
            (k, HomotopyString::Descending { u, l: sl })
        }
    })
}

/// All `(k, θ)` whose quadruple falls in the window.
pub fn enumerate_strings(alg: &Algebra, w: QuadWindow) -> Result<Vec<(i32, HomotopyString)>> {
    if w.l_max < 0 {
        return Err(Error::InvalidWindow(format!("l_max = {} is negative", w.l_max)));
    }
    let mut out = Vec::new();
    let lmax = w.l_max + alg.m() + 1;
    for k in w.k_min - 1..=w.k_max {
        let mut candidates = Vec::new();
        for u in alg.vertices() {
            candidates.push(HomotopyString::Stationary { u });
            for l in 0..=lmax {
                candidates.push(HomotopyString::Descending { u, l });
                for v in -alg.m()..=-1 {
                    candidates.push(HomotopyString::Turning { u, l, v });
                }
            }
        }
        for theta in candidates {
            if theta.check(alg).is_ok() && w.contains(&string_to_quadruple(alg, k, theta)?) {
                out.push((k, theta));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Path;
    use crate::complex::validate_complex;

    fn alg(n: i64, m: i64) -> Algebra {
        Algebra::new(n, m).unwrap()
    }

    #[test]
    fn membership() {
        let a = alg(2, 1);
        assert!(in_calc(&a, 0, -1, 0, -1));
        assert!(in_calc(&a, 0, 0, 0, -1));
        assert!(!in_calc(&a, 0, 1, 0, 0));
        assert!(!in_calc(&a, 0, 0, -1, 0));
        assert!(!in_calc(&a, 0, 2, 0, 2));
    }

    #[test]
    fn stalks_and_small_complexes() {
        let a = alg(2, 1);
        for u in a.vertices() {
            assert_eq!(build_complex(&a, Quadruple::new(0, u, 0, u)).unwrap(), ProjComplex::stalk(u, 0));
        }
        let c = build_complex(&a, Quadruple::new(0, 0, 0, -1)).unwrap();
        assert_eq!(c.summands(-1), &[-1]);
        assert_eq!(c.summands(0), &[0]);
        let d = c.differential(-1);
        assert_eq!(d.get(0, 0), &a.comb_of(&Path { start: 0, arrows: vec![-1] }).unwrap());

        let b = alg(1, 0);
        let c = build_complex(&b, Quadruple::new(0, 0, 2, 0)).unwrap();
        validate_complex(&b, &c).unwrap();
        let loop0 = b.comb_of(&Path { start: 0, arrows: vec![0] }).unwrap();
        for deg in 0..=2 {
            assert_eq!(c.summands(deg), &[0]);
        }
        assert_eq!(c.differential(0).get(0, 0), &loop0);
        assert_eq!(c.differential(1).get(0, 0), &loop0);
        assert!(build_complex(&b, Quadruple::new(0, 0, 0, 1)).is_err());
    }

    #[test]
    fn tails_sit_second() {
        let a = alg(2, 2);
        let q = Quadruple::new(0, 1, 1, -2);
        assert!(q.has_tail(&a));
        let c = build_complex(&a, q).unwrap();
        validate_complex(&a, &c).unwrap();
        assert_eq!(c.summands(0), &[1, -2]);
        assert_eq!(c.summands(1), &[0]);
        assert_eq!(q.tail_position(), (0, 1));
    }

    #[test]
    fn every_complex_in_window_is_valid() {
        for (n, m) in [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (3, 2)] {
            let a = alg(n, m);
            for q in enumerate_quadruples(&a, QuadWindow::new(-1, 1, 6)).unwrap() {
                let c = build_complex(&a, q).unwrap();
                validate_complex(&a, &c).unwrap();
                assert_eq!(c.span().unwrap(), (q.k - i32::from(q.l == 0 && q.has_tail(&a)), q.top()));
                assert!(c.is_minimal(&a));
            }
        }
    }

    #[test]
    fn enumeration() {
        let a = alg(1, 0);
        assert_eq!(
            enumerate_quadruples(&a, QuadWindow::new(0, 0, 1)).unwrap(),
            vec![Quadruple::new(0, 0, 0, 0), Quadruple::new(0, 0, 1, 0)]
        );
        let b = alg(2, 1);
        assert_eq!(
            enumerate_quadruples(&b, QuadWindow::new(0, 0, 0)).unwrap(),
            vec![
                Quadruple::new(0, -1, 0, -1),
                Quadruple::new(0, 0, 0, -1),
                Quadruple::new(0, 0, 0, 0),
                Quadruple::new(0, 1, 0, 1)
            ]
        );
        assert!(enumerate_quadruples(&b, QuadWindow::new(1, 0, 3)).unwrap().is_empty());
        assert!(enumerate_quadruples(&b, QuadWindow::new(0, 0, -1)).is_err());
    }

    #[test]
    fn strings() {
        let a = alg(2, 1);
        assert_eq!(
            string_to_quadruple(&a, 3, HomotopyString::Stationary { u: 1 }).unwrap(),
            Quadruple::new(3, 1, 0, 1)
        );
        assert_eq!(
            string_to_quadruple(&a, 0, HomotopyString::Descending { u: -1, l: 0 }).unwrap(),
            Quadruple::new(1, 0, 0, -1)
        );
        assert_eq!(
            string_to_quadruple(&a, 0, HomotopyString::Descending { u: 0, l: 0 }).unwrap(),
            Quadruple::new(0, 0, 1, 1)
        );
        assert!(string_to_quadruple(&a, 0, HomotopyString::Turning { u: 0, l: 0, v: -1 }).is_err());
        assert_eq!(
            string_to_quadruple(&a, 0, HomotopyString::Turning { u: 0, l: 1, v: -1 }).unwrap(),
            Quadruple::new(0, 0, 2, -1)
        );
    }

    #[test]
    fn string_round_trips() {
        for (n, m) in [(1, 0), (1, 2), (2, 1), (3, 2)] {
            let a = alg(n, m);
            for q in enumerate_quadruples(&a, QuadWindow::new(-2, 2, 5)).unwrap() {
                let (k, theta) = quadruple_to_string(&a, q).unwrap();
                assert_eq!(string_to_quadruple(&a, k, theta).unwrap(), q);
                assert_eq!(theta.to_string().parse::<HomotopyString>().unwrap(), theta);
            }
        }
    }

    #[test]
    fn parse_and_print() {
        let q: Quadruple = " (1, -2,3,0) ".parse().unwrap();
        assert_eq!(q, Quadruple::new(1, -2, 3, 0));
        assert_eq!(q.to_string(), "(1,-2,3,0)");
        assert!("(1,2,3)".parse::<Quadruple>().is_err());
        assert!("1,2,3,4".parse::<Quadruple>().is_err());
        assert_eq!("e0".parse::<HomotopyString>().unwrap(), HomotopyString::Stationary { u: 0 });
        assert_eq!("a-1".parse::<HomotopyString>().unwrap(), HomotopyString::Descending { u: -1, l: 0 });
        assert_eq!(
            "a0..a3~a-1..a-2".parse::<HomotopyString>().unwrap(),
            HomotopyString::Turning { u: 0, l: 3, v: -2 }
        );
        assert!("b3".parse::<HomotopyString>().is_err());
    }

    #[test]
    fn suspension_of_indices() {
        let q = Quadruple::new(0, 0, 0, 0);
        assert_eq!(suspend_quadruple(q), Quadruple::new(-1, 0, 0, 0));
        assert_eq!(suspend_quadruple(suspend_quadruple(q)).k, -2);
    }

    #[test]
    fn unfolded_picture() {
        let a = alg(2, 1);
        let s = Quadruple::new(0, 0, 2, -1).unfolded(&a);
        assert!(s.starts_with("[deg 0] 0"));
        assert!(s.ends_with("-1"));
    }
}
