//! The algebras Λ(n,m): the one-cycle quiver Q(n,m), its monomial zero
//! relations and the path combinatorics (σ_u, s, ς_{u,v}) used everywhere
//! else in the crate.
//!
//! Vertices are the integers `-m..=n-1`. The arrow `α_x` ends at `x`; it
//! starts at `x + 1` for `x < n - 1` and at `0` for `x = n - 1`, so the
//! arrows with `x >= 0` form the cycle and the ones with `x < 0` form the tail
//! `0 -> -1 -> ... -> -m`. Any two composable cycle arrows form a zero
//! relation.
//!
//! Paths are written right to left, like composition: `α_{-1} α_0` is the
//! path `1 -> 0 -> -1`. A path of Λ indexes a module map: a path `σ` from
//! `u` to `v` gives `P_σ : P_v -> P_u`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::RangeInclusive;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

pub type Vertex = i32;

/// The parameters `(n, m)`: cycle length and tail length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub n: u32,
    pub m: u32,
}

impl AlgebraSpec {
    pub fn new(n: i64, m: i64) -> Result<Self> {
        if n < 1 || m < 0 || n > 64 || m > 64 {
            return Err(Error::InvalidAlgebra { n, m });
        }
        Ok(AlgebraSpec { n: n as u32, m: m as u32 })
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ({},{})", self.n, self.m)
    }
}

/// A nonzero path of Λ. `arrows` lists arrow indices in written order, so
/// `arrows[0]` is traversed last; an empty list is the stationary path at
/// `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    pub start: Vertex,
    pub arrows: Vec<i32>,
}

impl Path {
    pub fn stationary(v: Vertex) -> Self {
        Path { start: v, arrows: Vec::new() }
    }

    pub fn is_stationary(&self) -> bool {
        self.arrows.is_empty()
    }

    /// End vertex: `α_x` ends at `x`.
    pub fn end(&self) -> Vertex {
        self.arrows.first().copied().unwrap_or(self.start)
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            return write!(f, "e{}", self.start);
        }
        for (j, a) in self.arrows.iter().enumerate() {
            if j > 0 {
                write!(f, "·")?;
            }
            write!(f, "a{a}")?;
        }
        Ok(())
    }
}

/// Handle to a path interned in an [`Algebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathId(pub u16);

/// A formal rational combination of parallel paths. Zero coefficients are
/// never stored; the empty combination is the zero map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PathCombination {
    terms: BTreeMap<PathId, Scalar>,
}

impl PathCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(p: PathId, c: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(p, c);
        out
    }

    pub fn path(p: PathId) -> Self {
        Self::single(p, Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (PathId, Scalar)> + '_ {
        self.terms.iter().map(|(p, c)| (*p, *c))
    }

    pub fn coefficient(&self, p: PathId) -> Scalar {
        self.terms.get(&p).copied().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, p: PathId, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add_assign(&mut self, other: &PathCombination) {
        for (p, c) in other.terms() {
            self.add_term(p, c);
        }
    }

    pub fn scaled(&self, c: Scalar) -> PathCombination {
        if c.is_zero() {
            return Self::zero();
        }
        PathCombination {
            terms: self.terms.iter().map(|(p, x)| (*p, *x * c)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Λ(n,m) together with its (finite) set of nonzero paths, interned so that
/// composition is a table lookup.
#[derive(Clone, Debug)]
pub struct Algebra {
    spec: AlgebraSpec,
    paths: Vec<Path>,
    index: HashMap<Path, PathId>,
    /// `between[(u, v)]`: ids of the paths from `u` to `v`, sorted.
    between: HashMap<(Vertex, Vertex), Vec<PathId>>,
    /// `concat[p][q]` is the id of `p·q` (q first), if nonzero.
    concat: Vec<Vec<Option<PathId>>>,
}

impl Algebra {
    pub fn new(n: i64, m: i64) -> Result<Self> {
        Ok(Self::from_spec(AlgebraSpec::new(n, m)?))
    }

    pub fn from_spec(spec: AlgebraSpec) -> Self {
        let mut alg = Algebra {
            spec,
            paths: Vec::new(),
            index: HashMap::new(),
            between: HashMap::new(),
            concat: Vec::new(),
        };
        let mut all = Vec::new();
        for v in alg.vertices() {
            let mut frontier = vec![Path::stationary(v)];
            while let Some(p) = frontier.pop() {
                for x in alg.out_arrows(p.end()) {
                    if let Some(&y) = p.arrows.first() {
                        if x >= 0 && y >= 0 {
                            continue;
                        }
                    }
                    let mut arrows = Vec::with_capacity(p.arrows.len() + 1);
                    arrows.push(x);
                    arrows.extend_from_slice(&p.arrows);
                    frontier.push(Path { start: p.start, arrows });
                }
                all.push(p);
            }
        }
        all.sort_by(|a, b| (a.start, a.end(), a.len(), &a.arrows).cmp(&(b.start, b.end(), b.len(), &b.arrows)));
        for (j, p) in all.into_iter().enumerate() {
            let id = PathId(j as u16);
            alg.between.entry((p.start, p.end())).or_default().push(id);
            alg.index.insert(p.clone(), id);
            alg.paths.push(p);
        }
        let np = alg.paths.len();
        let mut concat = vec![vec![None; np]; np];
        for (pi, p) in alg.paths.iter().enumerate() {
            for (qi, q) in alg.paths.iter().enumerate() {
                if q.end() != p.start {
                    continue;
                }
                let mut arrows = p.arrows.clone();
                arrows.extend_from_slice(&q.arrows);
                let cand = Path { start: q.start, arrows };
                concat[pi][qi] = alg.index.get(&cand).copied();
            }
        }
        alg.concat = concat;
        alg
    }

    pub fn spec(&self) -> AlgebraSpec {
        self.spec
    }

    pub fn n(&self) -> i32 {
        self.spec.n as i32
    }

    pub fn m(&self) -> i32 {
        self.spec.m as i32
    }

    pub fn vertices(&self) -> RangeInclusive<Vertex> {
        -self.m()..=self.n() - 1
    }

    pub fn contains(&self, u: Vertex) -> bool {
        self.vertices().contains(&u)
    }

    pub fn check_vertex(&self, u: Vertex) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: u, lo: -self.m(), hi: self.n() - 1 })
        }
    }

    /// Source of `α_x`.
    pub fn arrow_source(&self, x: i32) -> Vertex {
        if x == self.n() - 1 {
            0
        } else {
            x + 1
        }
    }

    /// Reduces a cycle-arrow index `w >= 0` to `[0, n-1]`; tail indices are
    /// returned unchanged.
    pub fn normalize_arrow(&self, w: i32) -> i32 {
        if w >= 0 {
            w.rem_euclid(self.n())
        } else {
            w
        }
    }

    fn out_arrows(&self, e: Vertex) -> Vec<i32> {
        let mut out = Vec::with_capacity(2);
        if e - 1 >= -self.m() && e - 1 <= self.n() - 2 {
            out.push(e - 1);
        }
        if e == 0 && !out.contains(&(self.n() - 1)) {
            out.push(self.n() - 1);
        }
        out
    }

    /// The successor map `s`: the start vertex of `σ_u`.
    pub fn successor(&self, u: Vertex) -> Result<Vertex> {
        self.check_vertex(u)?;
        Ok(self.succ(u))
    }

    pub(crate) fn succ(&self, u: Vertex) -> Vertex {
        let n = self.n();
        if n == 1 || u == n - 1 {
            0
        } else if u < 0 {
            1
        } else {
            u + 1
        }
    }

    /// `s^k(u)`, with `s^0` the identity.
    pub fn succ_pow(&self, u: Vertex, k: i64) -> Vertex {
        debug_assert!(k >= 0);
        let mut w = u;
        let mut k = k;
        // After at most one step the orbit lies on the cycle, which has period n.
        if k > 0 && w < 0 {
            w = self.succ(w);
            k -= 1;
        }
        let k = k % self.n() as i64;
        for _ in 0..k {
            w = self.succ(w);
        }
        w
    }

    /// `σ_u`, the maximal path ending at `u`.
    pub fn max_path(&self, u: Vertex) -> Result<Path> {
        self.check_vertex(u)?;
        let arrows: Vec<i32> = if u < 0 { (u..=0).collect() } else { vec![u] };
        Ok(Path { start: self.succ(u), arrows })
    }

    /// `ς_{u,v}`, the path with `σ_u = ς_{u,v} σ_v`.
    pub fn factor_path(&self, u: Vertex, v: Vertex) -> Result<Path> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u > v || self.succ(u) != self.succ(v) {
            return Err(Error::NoFactorPath { u, v });
        }
        Ok(Path { start: v, arrows: (u..v).collect() })
    }

    /// `p·q` (q traversed first): the concatenation, or zero if it runs
    /// through a relation.
    pub fn compose_paths(&self, p: &Path, q: &Path) -> Result<PathCombination> {
        if q.end() != p.start {
            return Err(Error::EndpointMismatch(format!("{q} ends at {}, {p} starts at {}", q.end(), p.start)));
        }
        let pi = self.id_of(p)?;
        let qi = self.id_of(q)?;
        Ok(match self.concat_ids(pi, qi) {
            Some(id) => PathCombination::path(id),
            None => PathCombination::zero(),
        })
    }

    /// Paths from `u` to `v`; they index a basis of the maps `P_v -> P_u`.
    pub fn hom_basis_proj(&self, v: Vertex, u: Vertex) -> Result<Vec<Path>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.paths_between(u, v).iter().map(|id| self.paths[id.0 as usize].clone()).collect())
    }

    pub fn paths_between(&self, u: Vertex, v: Vertex) -> &[PathId] {
        self.between.get(&(u, v)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn path(&self, id: PathId) -> &Path {
        &self.paths[id.0 as usize]
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    pub fn id_of(&self, p: &Path) -> Result<PathId> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| Error::EndpointMismatch(format!("{p} is not a nonzero path of {}", self.spec)))
    }

    pub fn stationary_id(&self, v: Vertex) -> PathId {
        self.index[&Path::stationary(v)]
    }

    #[inline]
    pub fn concat_ids(&self, p: PathId, q: PathId) -> Option<PathId> {
        self.concat[p.0 as usize][q.0 as usize]
    }

    /// `p·q` extended bilinearly.
    pub fn concat_comb(&self, p: &PathCombination, q: &PathCombination) -> PathCombination {
        let mut out = PathCombination::zero();
        for (pi, a) in p.terms() {
            for (qi, b) in q.terms() {
                if let Some(id) = self.concat_ids(pi, qi) {
                    out.add_term(id, a * b);
                }
            }
        }
        out
    }

    /// Composition of module maps `P_outer ∘ P_inner`, which is `P` of the
    /// path `inner·outer`.
    pub fn compose_maps(&self, outer: &PathCombination, inner: &PathCombination) -> PathCombination {
        self.concat_comb(inner, outer)
    }

    pub fn comb_of(&self, p: &Path) -> Result<PathCombination> {
        Ok(PathCombination::path(self.id_of(p)?))
    }

    pub fn format_comb(&self, c: &PathCombination) -> String {
        if c.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (p, x) in c.terms() {
            if x.is_one() {
                parts.push(format!("{}", self.path(p)));
            } else {
                parts.push(format!("{}*{}", x, self.path(p)));
            }
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: i64, m: i64) -> Algebra {
        Algebra::new(n, m).unwrap()
    }

    #[test]
    fn successor_cases() {
        assert_eq!(alg(2, 1).successor(-1).unwrap(), 1);
        assert_eq!(alg(2, 1).successor(1).unwrap(), 0);
        assert_eq!(alg(1, 0).successor(0).unwrap(), 0);
        assert_eq!(alg(3, 2).successor(0).unwrap(), 1);
        assert_eq!(alg(3, 2).successor(1).unwrap(), 2);
        assert!(alg(2, 1).successor(2).is_err());
        assert!(alg(2, 1).successor(-2).is_err());
    }

    #[test]
    fn max_paths() {
        let a = alg(2, 1);
        let s = a.max_path(-1).unwrap();
        assert_eq!(s.arrows, vec![-1, 0]);
        assert_eq!((s.start, s.end()), (1, -1));
        assert_eq!(a.max_path(1).unwrap().arrows, vec![1]);
        let b = alg(1, 0);
        let l = b.max_path(0).unwrap();
        assert_eq!((l.start, l.end(), l.arrows.clone()), (0, 0, vec![0]));
    }

    #[test]
    fn factor_paths() {
        let a = alg(2, 1);
        assert_eq!(a.factor_path(-1, 0).unwrap().arrows, vec![-1]);
        assert!(a.factor_path(0, 0).unwrap().is_stationary());
        assert_eq!(alg(3, 2).factor_path(-2, -1).unwrap().arrows, vec![-2]);
        assert!(a.factor_path(0, -1).is_err());
        assert!(a.factor_path(0, 1).is_err());
    }

    #[test]
    fn composition_and_relations() {
        let a = alg(2, 1);
        let am1 = Path { start: 0, arrows: vec![-1] };
        let a0 = Path { start: 1, arrows: vec![0] };
        let a1 = Path { start: 0, arrows: vec![1] };
        let c = a.compose_paths(&am1, &a0).unwrap();
        assert_eq!(c, a.comb_of(&Path { start: 1, arrows: vec![-1, 0] }).unwrap());
        assert!(a.compose_paths(&a0, &a1).unwrap().is_zero());
        assert!(a.compose_paths(&a1, &a1).is_err());
        let b = alg(1, 0);
        let loop0 = Path { start: 0, arrows: vec![0] };
        assert!(b.compose_paths(&loop0, &loop0).unwrap().is_zero());
    }

    #[test]
    fn hom_bases() {
        let a = alg(2, 1);
        assert_eq!(a.hom_basis_proj(-1, 0).unwrap(), vec![Path { start: 0, arrows: vec![-1] }]);
        assert!(a.hom_basis_proj(1, -1).unwrap().is_empty());
        let b = alg(1, 0);
        let end = b.hom_basis_proj(0, 0).unwrap();
        assert_eq!(end.len(), 2);
    }

    #[test]
    fn successor_is_eventually_periodic() {
        for n in 1..=4 {
            for m in 0..=3 {
                let a = alg(n, m);
                for u in a.vertices() {
                    let su = a.succ(u);
                    assert_eq!(a.succ_pow(su, n), su);
                    let mut w = u;
                    for k in 0..10 {
                        assert_eq!(a.succ_pow(u, k), w);
                        w = a.succ(w);
                    }
                }
            }
        }
    }

    #[test]
    fn factor_times_max_is_max() {
        for n in 1..=3 {
            for m in 0..=3 {
                let a = alg(n, m);
                for u in a.vertices() {
                    for v in a.vertices() {
                        if u <= v && a.succ(u) == a.succ(v) {
                            let f = a.factor_path(u, v).unwrap();
                            let c = a.compose_paths(&f, &a.max_path(v).unwrap()).unwrap();
                            assert_eq!(c, a.comb_of(&a.max_path(u).unwrap()).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn composition_is_associative() {
        for n in 1..=3 {
            for m in 0..=2 {
                let a = alg(n, m);
                let ids: Vec<PathId> = (0..a.path_count()).map(|j| PathId(j as u16)).collect();
                for &p in &ids {
                    for &q in &ids {
                        for &r in &ids {
                            if a.path(q).end() != a.path(p).start || a.path(r).end() != a.path(q).start {
                                continue;
                            }
                            let left = a.concat_ids(p, q).and_then(|pq| a.concat_ids(pq, r));
                            let right = a.concat_ids(q, r).and_then(|qr| a.concat_ids(p, qr));
                            assert_eq!(left, right);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hom_basis_sizes_are_bounded() {
        for n in 1..=3 {
            for m in 0..=3 {
                let a = alg(n, m);
                for u in a.vertices() {
                    for v in a.vertices() {
                        assert!(a.hom_basis_proj(v, u).unwrap().len() as i64 <= m + 2);
                    }
                }
            }
        }
    }

    #[test]
    fn arrow_normalisation() {
        let a = alg(3, 1);
        assert_eq!(a.normalize_arrow(4), 1);
        assert_eq!(a.normalize_arrow(2), 2);
        assert_eq!(a.normalize_arrow(-1), -1);
    }
}
