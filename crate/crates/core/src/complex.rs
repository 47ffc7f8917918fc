//! Bounded complexes of indecomposable projectives and the exact oracle for
//! morphism spaces in the homotopy category.
//!
//! Nothing in here knows about quadruples or the Γ presentation: Hom spaces
//! are computed by brute force, as chain maps modulo null-homotopic maps.
//!
//! Matrix entry `(r, c)` of a map `X -> Y` is a combination of paths from
//! the vertex of summand `r` of `Y` to the vertex of summand `c` of `X`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Path, PathCombination, PathId, Vertex};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::Scalar;

/// A matrix of path combinations, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<PathCombination>,
}

impl PathMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PathMatrix { rows, cols, entries: vec![PathCombination::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<PathCombination>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged path matrix");
        PathMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn identity(alg: &Algebra, vertices: &[Vertex]) -> Self {
        let mut out = Self::zeros(vertices.len(), vertices.len());
        for (j, v) in vertices.iter().enumerate() {
            out.set(j, j, PathCombination::path(alg.stationary_id(*v)));
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &PathCombination {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: PathCombination) {
        self.entries[r * self.cols + c] = x;
    }

    pub fn add_at(&mut self, r: usize, c: usize, x: &PathCombination) {
        self.entries[r * self.cols + c].add_assign(x);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PathCombination::is_zero)
    }

    /// `outer ∘ inner`.
    pub fn compose(alg: &Algebra, outer: &PathMatrix, inner: &PathMatrix) -> PathMatrix {
        assert_eq!(outer.cols, inner.rows, "matrix shapes do not compose");
        let mut out = PathMatrix::zeros(outer.rows, inner.cols);
        for r in 0..outer.rows {
            for j in 0..outer.cols {
                let o = outer.get(r, j);
                if o.is_zero() {
                    continue;
                }
                for c in 0..inner.cols {
                    let i = inner.get(j, c);
                    if !i.is_zero() {
                        let prod = alg.compose_maps(o, i);
                        out.add_at(r, c, &prod);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PathMatrix) -> PathMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            e.add_assign(o);
        }
        out
    }

    pub fn scaled(&self, c: Scalar) -> PathMatrix {
        PathMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scaled(c)).collect(),
        }
    }
}

/// A bounded complex `C^i -> C^{i+1}` of finitely generated projectives.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ProjComplex {
    summands: BTreeMap<i32, Vec<Vertex>>,
    differentials: BTreeMap<i32, PathMatrix>,
}

impl ProjComplex {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn stalk(v: Vertex, degree: i32) -> Self {
        let mut c = Self::zero();
        c.summands.insert(degree, vec![v]);
        c
    }

    /// Builds a complex from summands and differentials. Empty degrees and
    /// zero differentials are dropped; no validation happens here.
    pub fn new(summands: BTreeMap<i32, Vec<Vertex>>, differentials: BTreeMap<i32, PathMatrix>) -> Self {
        let summands: BTreeMap<i32, Vec<Vertex>> = summands.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        let differentials = differentials.into_iter().filter(|(_, d)| !d.is_zero()).collect();
        ProjComplex { summands, differentials }
    }

    pub fn summands(&self, degree: i32) -> &[Vertex] {
        self.summands.get(&degree).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.summands.keys().copied()
    }

    pub fn all_summands(&self) -> &BTreeMap<i32, Vec<Vertex>> {
        &self.summands
    }

    pub fn is_zero_complex(&self) -> bool {
        self.summands.is_empty()
    }

    /// `d^i : C^i -> C^{i+1}` as a (possibly zero) matrix.
    pub fn differential(&self, degree: i32) -> PathMatrix {
        match self.differentials.get(&degree) {
            Some(d) => d.clone(),
            None => PathMatrix::zeros(self.summands(degree + 1).len(), self.summands(degree).len()),
        }
    }

    pub fn differential_ref(&self, degree: i32) -> Option<&PathMatrix> {
        self.differentials.get(&degree)
    }

    pub fn span(&self) -> Option<(i32, i32)> {
        Some((*self.summands.keys().next()?, *self.summands.keys().next_back()?))
    }

    /// Multiset of `(degree, vertex)` summands.
    pub fn summand_profile(&self) -> Vec<(i32, Vertex)> {
        let mut out: Vec<(i32, Vertex)> =
            self.summands.iter().flat_map(|(d, vs)| vs.iter().map(move |v| (*d, *v))).collect();
        out.sort();
        out
    }

    /// No differential entry involves a stationary path, i.e. every
    /// differential lies in the radical.
    pub fn is_minimal(&self, alg: &Algebra) -> bool {
        self.differentials
            .values()
            .all(|d| d.entries.iter().all(|e| e.terms().all(|(p, _)| !alg.path(p).is_stationary())))
    }

    /// Direct sum, summands of `self` first in every degree.
    pub fn direct_sum(&self, other: &ProjComplex) -> ProjComplex {
        let mut summands = self.summands.clone();
        for (d, vs) in &other.summands {
            summands.entry(*d).or_default().extend(vs.iter().copied());
        }
        let mut differentials = BTreeMap::new();
        for &d in summands.keys() {
            let (a0, a1) = (self.summands(d).len(), self.summands(d + 1).len());
            let (b0, b1) = (other.summands(d).len(), other.summands(d + 1).len());
            let mut m = PathMatrix::zeros(a1 + b1, a0 + b0);
            let da = self.differential(d);
            let db = other.differential(d);
            for r in 0..a1 {
                for c in 0..a0 {
                    m.set(r, c, da.get(r, c).clone());
                }
            }
            for r in 0..b1 {
                for c in 0..b0 {
                    m.set(a1 + r, a0 + c, db.get(r, c).clone());
                }
            }
            differentials.insert(d, m);
        }
        ProjComplex::new(summands, differentials)
    }

    pub fn display(&self, alg: &Algebra) -> String {
        let mut out = String::new();
        for (d, vs) in &self.summands {
            let vs: Vec<String> = vs.iter().map(|v| format!("P{v}")).collect();
            out.push_str(&format!("deg {d}: {}\n", vs.join(" ⊕ ")));
            if let Some(m) = self.differentials.get(d) {
                for r in 0..m.rows {
                    let row: Vec<String> = (0..m.cols).map(|c| alg.format_comb(m.get(r, c))).collect();
                    out.push_str(&format!("  d[{r}] = [{}]\n", row.join(", ")));
                }
            }
        }
        out
    }
}

/// Where a complex first fails to be well formed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexViolation {
    pub degree: i32,
    pub reason: String,
}

impl fmt::Display for ComplexViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {}: {}", self.degree, self.reason)
    }
}

/// Checks shapes, entry orientation and `d ∘ d = 0`.
pub fn validate_complex(alg: &Algebra, c: &ProjComplex) -> std::result::Result<(), ComplexViolation> {
    for (d, vs) in &c.summands {
        for v in vs {
            if !alg.contains(*v) {
                return Err(ComplexViolation { degree: *d, reason: format!("vertex {v} out of range") });
            }
        }
    }
    for (&d, m) in &c.differentials {
        let (src, tgt) = (c.summands(d), c.summands(d + 1));
        if m.rows != tgt.len() || m.cols != src.len() {
            return Err(ComplexViolation {
                degree: d,
                reason: format!("differential is {}x{}, expected {}x{}", m.rows, m.cols, tgt.len(), src.len()),
            });
        }
        for r in 0..m.rows {
            for col in 0..m.cols {
                for (p, _) in m.get(r, col).terms() {
                    let path = alg.path(p);
                    if path.start != tgt[r] || path.end() != src[col] {
                        return Err(ComplexViolation {
                            degree: d,
                            reason: format!(
                                "entry ({r},{col}) uses {path} from {} to {}, expected a path from {} to {}",
                                path.start,
                                path.end(),
                                tgt[r],
                                src[col]
                            ),
                        });
                    }
                }
            }
        }
    }
    for (&d, m) in &c.differentials {
        if let Some(next) = c.differentials.get(&(d + 1)) {
            if !PathMatrix::compose(alg, next, m).is_zero() {
                return Err(ComplexViolation { degree: d, reason: "d^{i+1} ∘ d^i is nonzero".into() });
            }
        }
    }
    Ok(())
}

/// `Σ^t C`: `(Σ^t C)^i = C^{i+t}` with differentials multiplied by `(-1)^t`.
pub fn shift(c: &ProjComplex, t: i32) -> ProjComplex {
    let sign = if t.rem_euclid(2) == 0 { Scalar::one() } else { -Scalar::one() };
    ProjComplex {
        summands: c.summands.iter().map(|(d, v)| (d - t, v.clone())).collect(),
        differentials: c.differentials.iter().map(|(d, m)| (d - t, m.scaled(sign))).collect(),
    }
}

/// `C` re-indexed by `t` without the sign change of [`shift`].
pub fn reindex(c: &ProjComplex, t: i32) -> ProjComplex {
    ProjComplex {
        summands: c.summands.iter().map(|(d, v)| (d - t, v.clone())).collect(),
        differentials: c.differentials.iter().map(|(d, m)| (d - t, m.clone())).collect(),
    }
}

/// The isomorphism `Σ^t C -> reindex(C, t)` given by `(-1)^{t·i}` in degree `i`.
pub fn shift_to_reindex(alg: &Algebra, c: &ProjComplex, t: i32) -> ChainMap {
    let source = shift(c, t);
    let target = reindex(c, t);
    let components = source
        .summands
        .iter()
        .map(|(d, vs)| {
            let sign = if (t as i64 * *d as i64).rem_euclid(2) == 0 { Scalar::one() } else { -Scalar::one() };
            (*d, PathMatrix::identity(alg, vs).scaled(sign))
        })
        .collect();
    ChainMap::new(source, target, components)
}

/// A degreewise map of complexes `f^i : C^i -> D^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: ProjComplex,
    pub target: ProjComplex,
    components: BTreeMap<i32, PathMatrix>,
}

impl ChainMap {
    pub fn new(source: ProjComplex, target: ProjComplex, components: BTreeMap<i32, PathMatrix>) -> Self {
        let components = components.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        ChainMap { source, target, components }
    }

    pub fn zero(source: ProjComplex, target: ProjComplex) -> Self {
        ChainMap { source, target, components: BTreeMap::new() }
    }

    pub fn identity(alg: &Algebra, c: &ProjComplex) -> Self {
        let components = c.summands.iter().map(|(d, vs)| (*d, PathMatrix::identity(alg, vs))).collect();
        ChainMap::new(c.clone(), c.clone(), components)
    }

    pub fn component(&self, degree: i32) -> PathMatrix {
        match self.components.get(&degree) {
            Some(m) => m.clone(),
            None => PathMatrix::zeros(self.target.summands(degree).len(), self.source.summands(degree).len()),
        }
    }

    pub fn components(&self) -> &BTreeMap<i32, PathMatrix> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn scaled(&self, c: Scalar) -> ChainMap {
        ChainMap::new(
            self.source.clone(),
            self.target.clone(),
            self.components.iter().map(|(d, m)| (*d, m.scaled(c))).collect(),
        )
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::EndpointMismatch("chain maps with different endpoints cannot be added".into()));
        }
        let mut comps = self.components.clone();
        for (d, m) in &other.components {
            let e = comps.entry(*d).or_insert_with(|| PathMatrix::zeros(m.rows, m.cols));
            *e = e.add(m);
        }
        Ok(ChainMap::new(self.source.clone(), self.target.clone(), comps))
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.add(&other.scaled(-Scalar::one()))
    }

    /// Shape and orientation check followed by `d_D f = f d_C`.
    pub fn check(&self, alg: &Algebra) -> Result<()> {
        for (&d, m) in &self.components {
            let (src, tgt) = (self.source.summands(d), self.target.summands(d));
            if m.rows != tgt.len() || m.cols != src.len() {
                return Err(Error::NotAChainMap(format!("component {d} has the wrong shape")));
            }
            for r in 0..m.rows {
                for c in 0..m.cols {
                    for (p, _) in m.get(r, c).terms() {
                        let path = alg.path(p);
                        if path.start != tgt[r] || path.end() != src[c] {
                            return Err(Error::NotAChainMap(format!("component {d} entry ({r},{c}) misoriented")));
                        }
                    }
                }
            }
        }
        let mut degrees: Vec<i32> = self.source.degrees().chain(self.target.degrees()).collect();
        degrees.sort();
        degrees.dedup();
        for d in degrees {
            let lhs = PathMatrix::compose(alg, &self.target.differential(d), &self.component(d));
            let rhs = PathMatrix::compose(alg, &self.component(d + 1), &self.source.differential(d));
            if lhs != rhs {
                return Err(Error::NotAChainMap(format!("d f != f d in degree {d}")));
            }
        }
        Ok(())
    }
}

/// `g ∘ f`.
pub fn compose_chain_maps(alg: &Algebra, g: &ChainMap, f: &ChainMap) -> Result<ChainMap> {
    if f.target != g.source {
        return Err(Error::EndpointMismatch("target of f differs from source of g".into()));
    }
    let mut comps = BTreeMap::new();
    for (d, fm) in &f.components {
        if let Some(gm) = g.components.get(d) {
            comps.insert(*d, PathMatrix::compose(alg, gm, fm));
        }
    }
    Ok(ChainMap::new(f.source.clone(), g.target.clone(), comps))
}

/// `cone(f)^i = C^{i+1} ⊕ D^i` with differential `[[-d_C, 0], [f, d_D]]`.
pub fn mapping_cone(f: &ChainMap) -> ProjComplex {
    let (c, d) = (&f.source, &f.target);
    let mut degrees: Vec<i32> = c.degrees().map(|x| x - 1).chain(d.degrees()).collect();
    degrees.sort();
    degrees.dedup();
    let mut summands = BTreeMap::new();
    for &i in &degrees {
        let mut vs = c.summands(i + 1).to_vec();
        vs.extend_from_slice(d.summands(i));
        summands.insert(i, vs);
    }
    let mut differentials = BTreeMap::new();
    for &i in &degrees {
        let (c1, d0) = (c.summands(i + 1).len(), d.summands(i).len());
        let (c2, d1) = (c.summands(i + 2).len(), d.summands(i + 1).len());
        let mut m = PathMatrix::zeros(c2 + d1, c1 + d0);
        let dc = c.differential(i + 1).scaled(-Scalar::one());
        let fi = f.component(i + 1);
        let dd = d.differential(i);
        for r in 0..c2 {
            for col in 0..c1 {
                m.set(r, col, dc.get(r, col).clone());
            }
        }
        for r in 0..d1 {
            for col in 0..c1 {
                m.set(c2 + r, col, fi.get(r, col).clone());
            }
            for col in 0..d0 {
                m.set(c2 + r, c1 + col, dd.get(r, col).clone());
            }
        }
        differentials.insert(i, m);
    }
    ProjComplex::new(summands, differentials)
}

/// The projection `cone(f) -> Σ C` onto the first summand.
pub fn cone_projection(alg: &Algebra, f: &ChainMap) -> ChainMap {
    let cone = mapping_cone(f);
    let target = shift(&f.source, 1);
    let mut comps = BTreeMap::new();
    for (&i, vs) in target.all_summands() {
        let mut m = PathMatrix::zeros(vs.len(), cone.summands(i).len());
        for (j, v) in vs.iter().enumerate() {
            m.set(j, j, PathCombination::path(alg.stationary_id(*v)));
        }
        comps.insert(i, m);
    }
    ChainMap::new(cone, target, comps)
}

/// The inclusion `D -> cone(f)` of the second summand.
pub fn cone_inclusion(alg: &Algebra, f: &ChainMap) -> ChainMap {
    let cone = mapping_cone(f);
    let source = f.target.clone();
    let mut comps = BTreeMap::new();
    for (&i, vs) in source.all_summands() {
        let off = f.source.summands(i + 1).len();
        let mut m = PathMatrix::zeros(cone.summands(i).len(), vs.len());
        for (j, v) in vs.iter().enumerate() {
            m.set(off + j, j, PathCombination::path(alg.stationary_id(*v)));
        }
        comps.insert(i, m);
    }
    ChainMap::new(source, cone, comps)
}

/// Coordinates on the space of degree-`offset` maps `C^i -> D^{i+offset}`,
/// ordered by (degree, row, column, path).
struct MapCoords {
    offset: i32,
    blocks: BTreeMap<i32, Block>,
    total: usize,
}

struct Block {
    rows: usize,
    cols: usize,
    /// Start index of entry `(r, c)`, row-major, plus a final sentinel.
    starts: Vec<usize>,
    /// Paths available for entry `(r, c)`.
    paths: Vec<Vec<PathId>>,
}

impl MapCoords {
    fn new(alg: &Algebra, c: &ProjComplex, d: &ProjComplex, offset: i32) -> Self {
        let mut blocks = BTreeMap::new();
        let mut total = 0;
        for (&i, src) in c.all_summands() {
            let tgt = d.summands(i + offset);
            if tgt.is_empty() {
                continue;
            }
            let mut starts = Vec::with_capacity(tgt.len() * src.len() + 1);
            let mut paths = Vec::with_capacity(tgt.len() * src.len());
            for r in tgt {
                for col in src {
                    starts.push(total);
                    let ps = alg.paths_between(*r, *col).to_vec();
                    total += ps.len();
                    paths.push(ps);
                }
            }
            starts.push(total);
            blocks.insert(i, Block { rows: tgt.len(), cols: src.len(), starts, paths });
        }
        MapCoords { offset, blocks, total }
    }

    fn index(&self, degree: i32, r: usize, c: usize, p: PathId) -> usize {
        let b = &self.blocks[&degree];
        let e = r * b.cols + c;
        let pos = b.paths[e].binary_search(&p).expect("path does not fit this matrix entry");
        b.starts[e] + pos
    }

    /// Calls `visit(degree, row, col, path, index)` for every coordinate.
    fn for_each(&self, mut visit: impl FnMut(i32, usize, usize, PathId, usize)) {
        for (&d, b) in &self.blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    let e = r * b.cols + c;
                    for (k, p) in b.paths[e].iter().enumerate() {
                        visit(d, r, c, *p, b.starts[e] + k);
                    }
                }
            }
        }
    }

    fn push_matrix(&self, degree: i32, m: &PathMatrix, scale: Scalar, out: &mut Vec<(usize, Scalar)>) {
        if m.is_zero() {
            return;
        }
        for r in 0..m.rows {
            for c in 0..m.cols {
                for (p, x) in m.get(r, c).terms() {
                    out.push((self.index(degree, r, c, p), x * scale));
                }
            }
        }
    }

    fn vectorize(&self, components: &BTreeMap<i32, PathMatrix>) -> SparseVec {
        let mut out = Vec::new();
        for (d, m) in components {
            if self.blocks.contains_key(d) {
                self.push_matrix(*d, m, Scalar::one(), &mut out);
            } else {
                debug_assert!(m.is_zero());
            }
        }
        linalg::normalize(out)
    }

    fn unvectorize(&self, c: &ProjComplex, d: &ProjComplex, v: &SparseVec) -> BTreeMap<i32, PathMatrix> {
        let mut out: BTreeMap<i32, PathMatrix> = BTreeMap::new();
        let mut lookup: HashMap<usize, Scalar> = v.iter().copied().collect();
        self.for_each(|deg, r, col, p, idx| {
            if let Some(x) = lookup.remove(&idx) {
                let m = out
                    .entry(deg)
                    .or_insert_with(|| PathMatrix::zeros(d.summands(deg + self.offset).len(), c.summands(deg).len()));
                m.add_at(r, col, &PathCombination::single(p, x));
            }
        });
        out
    }
}

fn single_entry(rows: usize, cols: usize, r: usize, c: usize, p: PathId) -> PathMatrix {
    let mut m = PathMatrix::zeros(rows, cols);
    m.set(r, c, PathCombination::path(p));
    m
}

/// `Hom(C, D)` in the homotopy category, with everything needed to reduce
/// further chain maps modulo homotopy.
pub struct HomSolver<'a> {
    alg: &'a Algebra,
    source: ProjComplex,
    target: ProjComplex,
    coords: MapCoords,
    homotopies: Echelon,
    homotopy_images: Vec<SparseVec>,
    basis_vectors: Vec<SparseVec>,
}

/// A basis of `Hom(C, D)` modulo null-homotopic maps.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dimension: usize,
    pub basis: Vec<ChainMap>,
}

impl<'a> HomSolver<'a> {
    pub fn new(alg: &'a Algebra, c: &ProjComplex, d: &ProjComplex) -> Self {
        let coords = MapCoords::new(alg, c, d, 0);
        let mut solver = HomSolver {
            alg,
            source: c.clone(),
            target: d.clone(),
            coords,
            homotopies: Echelon::new(),
            homotopy_images: Vec::new(),
            basis_vectors: Vec::new(),
        };
        if solver.coords.total == 0 {
            return solver;
        }
        let cycles = solver.cycles();
        solver.homotopy_images = solver.boundaries();
        for b in &solver.homotopy_images {
            solver.homotopies.insert(b);
        }
        let mut quotient = solver.homotopies.clone();
        for z in cycles {
            if quotient.insert(&z) {
                solver.basis_vectors.push(z);
            }
        }
        solver
    }

    /// Basis of the chain maps: the kernel of `f ↦ d_D f - f d_C`.
    fn cycles(&self) -> Vec<SparseVec> {
        let (alg, c, d) = (self.alg, &self.source, &self.target);
        let constraints = MapCoords::new(alg, c, d, 1);
        let mut columns: Vec<SparseVec> = Vec::with_capacity(self.coords.total);
        self.coords.for_each(|deg, r, col, p, _| {
            let e = single_entry(d.summands(deg).len(), c.summands(deg).len(), r, col, p);
            let mut v = Vec::new();
            if let Some(dd) = d.differential_ref(deg) {
                constraints.push_matrix(deg, &PathMatrix::compose(alg, dd, &e), Scalar::one(), &mut v);
            }
            if let Some(dc) = c.differential_ref(deg - 1) {
                if constraints.blocks.contains_key(&(deg - 1)) {
                    constraints.push_matrix(deg - 1, &PathMatrix::compose(alg, &e, dc), -Scalar::one(), &mut v);
                }
            }
            columns.push(linalg::normalize(v));
        });
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); constraints.total];
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col {
                rows[*i].push((j, *x));
            }
        }
        let rows: Vec<SparseVec> = rows.into_iter().filter(|r| !r.is_empty()).collect();
        linalg::nullspace(&rows, self.coords.total)
    }

    /// Images `d_D h + h d_C` of the elementary homotopies.
    fn boundaries(&self) -> Vec<SparseVec> {
        let (alg, c, d) = (self.alg, &self.source, &self.target);
        let hcoords = MapCoords::new(alg, c, d, -1);
        let mut out = Vec::with_capacity(hcoords.total);
        hcoords.for_each(|deg, r, col, p, _| {
            let e = single_entry(d.summands(deg - 1).len(), c.summands(deg).len(), r, col, p);
            let mut v = Vec::new();
            if let Some(dd) = d.differential_ref(deg - 1) {
                if self.coords.blocks.contains_key(&deg) {
                    self.coords.push_matrix(deg, &PathMatrix::compose(alg, dd, &e), Scalar::one(), &mut v);
                }
            }
            if let Some(dc) = c.differential_ref(deg - 1) {
                if self.coords.blocks.contains_key(&(deg - 1)) {
                    self.coords.push_matrix(deg - 1, &PathMatrix::compose(alg, &e, dc), Scalar::one(), &mut v);
                }
            }
            let v = linalg::normalize(v);
            if !v.is_empty() {
                out.push(v);
            }
        });
        out
    }

    pub fn dimension(&self) -> usize {
        self.basis_vectors.len()
    }

    pub fn basis(&self) -> Vec<ChainMap> {
        self.basis_vectors.iter().map(|v| self.to_map(v)).collect()
    }

    pub fn space(&self) -> HomSpace {
        HomSpace { dimension: self.dimension(), basis: self.basis() }
    }

    fn to_map(&self, v: &SparseVec) -> ChainMap {
        ChainMap::new(self.source.clone(), self.target.clone(), self.coords.unvectorize(&self.source, &self.target, v))
    }

    fn vector_of(&self, f: &ChainMap) -> Result<SparseVec> {
        if f.source != self.source || f.target != self.target {
            return Err(Error::EndpointMismatch("chain map does not belong to this Hom space".into()));
        }
        Ok(self.coords.vectorize(f.components()))
    }

    /// Whether `f` is null-homotopic. `f` must be a chain map `C -> D`.
    pub fn is_null_homotopic(&self, f: &ChainMap) -> Result<bool> {
        let v = self.vector_of(f)?;
        Ok(self.homotopies.contains(&v))
    }

    /// Coefficients of `f` in the basis, modulo homotopy.
    pub fn decompose(&self, f: &ChainMap) -> Result<Option<Vec<Scalar>>> {
        self.decompose_in(f, &self.basis_vectors)
    }

    /// Coefficients of `f` in an arbitrary family of chain maps `C -> D`,
    /// modulo homotopy; `None` if `f` is not in their span.
    pub fn decompose_onto(&self, f: &ChainMap, family: &[ChainMap]) -> Result<Option<Vec<Scalar>>> {
        let vs: Vec<SparseVec> = family.iter().map(|g| self.vector_of(g)).collect::<Result<_>>()?;
        self.decompose_in(f, &vs)
    }

    fn decompose_in(&self, f: &ChainMap, family: &[SparseVec]) -> Result<Option<Vec<Scalar>>> {
        let v = self.vector_of(f)?;
        let mut cols: Vec<SparseVec> = family.to_vec();
        cols.extend(self.homotopy_images.iter().cloned());
        Ok(linalg::solve_columns(&cols, &v).map(|x| x[..family.len()].to_vec()))
    }

    /// Rank of a family of chain maps modulo homotopy.
    pub fn rank_modulo_homotopy(&self, family: &[ChainMap]) -> Result<usize> {
        let mut e = self.homotopies.clone();
        let base = e.rank();
        for f in family {
            e.insert(&self.vector_of(f)?);
        }
        Ok(e.rank() - base)
    }
}

pub fn hom_space(alg: &Algebra, c: &ProjComplex, d: &ProjComplex) -> HomSpace {
    HomSolver::new(alg, c, d).space()
}

pub fn hom_dimension(alg: &Algebra, c: &ProjComplex, d: &ProjComplex) -> usize {
    HomSolver::new(alg, c, d).dimension()
}

pub fn is_null_homotopic(alg: &Algebra, f: &ChainMap) -> Result<bool> {
    f.check(alg)?;
    HomSolver::new(alg, &f.source, &f.target).is_null_homotopic(f)
}

/// Whether `id_C` is null-homotopic.
pub fn is_contractible(alg: &Algebra, c: &ProjComplex) -> bool {
    let solver = HomSolver::new(alg, c, c);
    solver.is_null_homotopic(&ChainMap::identity(alg, c)).expect("identity belongs to End(C)")
}

/// Outcome of an isomorphism search in the homotopy category.
#[derive(Clone, Debug)]
pub struct IsoCheck {
    pub isomorphic: bool,
    /// Mutually inverse maps `C -> D`, `D -> C` up to homotopy.
    pub witness: Option<(ChainMap, ChainMap)>,
    /// How a negative answer was reached.
    pub reason: &'static str,
}

const ISO_TRIALS: usize = 12;

/// Decides `C ≅ D` in `K^b(proj Λ)`.
///
/// Negative answers are certified when Hom dimensions differ or when both
/// complexes are minimal with different summand profiles (homotopy
/// equivalent minimal complexes are isomorphic). Otherwise maps `f` are
/// sampled from `Hom(C, D)` with seeded random integer coefficients and
/// `g ∘ f ≃ id`, `f ∘ g ≃ id` is solved exactly; isomorphisms form a
/// Zariski-open set, so a miss over all trials is a negative answer with
/// negligible error probability.
pub fn is_isomorphic_k(alg: &Algebra, c: &ProjComplex, d: &ProjComplex) -> IsoCheck {
    let negative = |reason| IsoCheck { isomorphic: false, witness: None, reason };
    if c.is_minimal(alg) && d.is_minimal(alg) && c.summand_profile() != d.summand_profile() {
        return negative("minimal complexes with different summands");
    }
    let cd = HomSolver::new(alg, c, d);
    let dc = HomSolver::new(alg, d, c);
    let cc = HomSolver::new(alg, c, c);
    let dd = HomSolver::new(alg, d, d);
    let dims = [cd.dimension(), dc.dimension(), cc.dimension(), dd.dimension()];
    if dims.iter().any(|x| *x != dims[0]) {
        return negative("Hom dimensions differ");
    }
    if dims[0] == 0 {
        return IsoCheck {
            isomorphic: true,
            witness: Some((ChainMap::zero(c.clone(), d.clone()), ChainMap::zero(d.clone(), c.clone()))),
            reason: "both contractible",
        };
    }
    let fs = cd.basis();
    let gs = dc.basis();
    let id_c = ChainMap::identity(alg, c);
    let id_d = ChainMap::identity(alg, d);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f15);
    for trial in 0..ISO_TRIALS {
        let mut f = ChainMap::zero(c.clone(), d.clone());
        for b in &fs {
            let a: i64 = if trial == 0 { 1 } else { rng.gen_range(-9..=9) };
            f = f.add(&b.scaled(Scalar::from_integer(a))).expect("same endpoints");
        }
        let gf: Vec<ChainMap> =
            gs.iter().map(|g| compose_chain_maps(alg, g, &f).expect("composable")).collect();
        let Some(coeffs) = cc.decompose_onto(&id_c, &gf).expect("endomorphisms of C") else {
            continue;
        };
        let mut g = ChainMap::zero(d.clone(), c.clone());
        for (b, x) in gs.iter().zip(coeffs) {
            g = g.add(&b.scaled(x)).expect("same endpoints");
        }
        let fg = compose_chain_maps(alg, &f, &g).expect("composable");
        if dd.is_null_homotopic(&fg.sub(&id_d).expect("same endpoints")).expect("endomorphism of D") {
            return IsoCheck { isomorphic: true, witness: Some((f, g)), reason: "witness found" };
        }
    }
    negative("no isomorphism found among sampled maps")
}

/// Versioned JSON form of a complex. Degrees are object keys; every
/// differential is a list of rows, each row a list of entries, each entry a
/// list of `[arrows, numerator, denominator]` terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub version: u32,
    pub degrees: BTreeMap<String, Vec<Vertex>>,
    pub differentials: BTreeMap<String, Vec<Vec<Vec<(Vec<i32>, i64, i64)>>>>,
}

pub const COMPLEX_DOCUMENT_VERSION: u32 = 1;

impl ComplexDocument {
    pub fn from_complex(alg: &Algebra, c: &ProjComplex) -> Self {
        let degrees = c.summands.iter().map(|(d, v)| (d.to_string(), v.clone())).collect();
        let differentials = c
            .differentials
            .iter()
            .map(|(d, m)| {
                let rows = (0..m.rows)
                    .map(|r| {
                        (0..m.cols)
                            .map(|col| {
                                m.get(r, col)
                                    .terms()
                                    .map(|(p, x)| (alg.path(p).arrows.clone(), *x.numer(), *x.denom()))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                (d.to_string(), rows)
            })
            .collect();
        ComplexDocument { version: COMPLEX_DOCUMENT_VERSION, degrees, differentials }
    }

    pub fn to_complex(&self, alg: &Algebra) -> Result<ProjComplex> {
        if self.version != COMPLEX_DOCUMENT_VERSION {
            return Err(Error::UnsupportedVersion(self.version));
        }
        let parse_deg = |s: &str| s.parse::<i32>().map_err(|_| Error::Parse(format!("bad degree key {s:?}")));
        let mut summands = BTreeMap::new();
        for (k, v) in &self.degrees {
            for u in v {
                alg.check_vertex(*u)?;
            }
            summands.insert(parse_deg(k)?, v.clone());
        }
        let mut differentials = BTreeMap::new();
        for (k, rows) in &self.differentials {
            let d = parse_deg(k)?;
            let tgt: Vec<Vertex> = summands.get(&(d + 1)).cloned().unwrap_or_default();
            let mut matrix = Vec::with_capacity(rows.len());
            for (r, row) in rows.iter().enumerate() {
                let start = *tgt
                    .get(r)
                    .ok_or_else(|| Error::MalformedComplex(format!("differential {d} has too many rows")))?;
                let mut out_row = Vec::with_capacity(row.len());
                for entry in row {
                    let mut comb = PathCombination::zero();
                    for (arrows, num, den) in entry {
                        if *den == 0 {
                            return Err(Error::Parse("zero denominator".into()));
                        }
                        let id = alg.id_of(&Path { start, arrows: arrows.clone() })?;
                        comb.add_term(id, Scalar::new(*num, *den));
                    }
                    out_row.push(comb);
                }
                matrix.push(out_row);
            }
            if matrix.iter().any(|r| r.len() != matrix[0].len()) {
                return Err(Error::MalformedComplex(format!("differential {d} is ragged")));
            }
            differentials.insert(d, PathMatrix::from_rows(matrix));
        }
        let c = ProjComplex::new(summands, differentials);
        validate_complex(alg, &c).map_err(|v| Error::MalformedComplex(v.to_string()))?;
        Ok(c)
    }
}

pub fn complex_to_json(alg: &Algebra, c: &ProjComplex) -> String {
    serde_json::to_string(&ComplexDocument::from_complex(alg, c)).expect("serializable")
}

pub fn complex_from_json(alg: &Algebra, s: &str) -> Result<ProjComplex> {
    let doc: ComplexDocument = serde_json::from_str(s)?;
    doc.to_complex(alg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: i64, m: i64) -> Algebra {
        Algebra::new(n, m).unwrap()
    }

    fn arrow(a: &Algebra, start: Vertex, arrows: &[i32]) -> PathCombination {
        a.comb_of(&Path { start, arrows: arrows.to_vec() }).unwrap()
    }

    /// P_0 -α0-> P_0 -α0-> P_0 over Λ(1,0), degrees 0..2.
    fn loop_complex(a: &Algebra, len: i32) -> ProjComplex {
        let mut s = BTreeMap::new();
        let mut d = BTreeMap::new();
        for i in 0..=len {
            s.insert(i, vec![0]);
            if i < len {
                d.insert(i, PathMatrix::from_rows(vec![vec![arrow(a, 0, &[0])]]));
            }
        }
        ProjComplex::new(s, d)
    }

    #[test]
    fn validation() {
        let a = alg(1, 0);
        assert!(validate_complex(&a, &ProjComplex::stalk(0, 0)).is_ok());
        assert!(validate_complex(&a, &loop_complex(&a, 2)).is_ok());

        let b = alg(2, 1);
        // The entry of P_1 -> P_0 must be a path from 0 to 1; α_0 runs from 1 to 0.
        let mut s = BTreeMap::new();
        s.insert(0, vec![1]);
        s.insert(1, vec![0]);
        let mut d = BTreeMap::new();
        d.insert(0, PathMatrix::from_rows(vec![vec![arrow(&b, 1, &[0])]]));
        let bad = ProjComplex::new(s, d);
        let v = validate_complex(&b, &bad).unwrap_err();
        assert_eq!(v.degree, 0);
    }

    #[test]
    fn relations_make_d_squared_vanish() {
        let a = alg(2, 0);
        let mut s = BTreeMap::new();
        s.insert(0, vec![0]);
        s.insert(1, vec![1]);
        s.insert(2, vec![0]);
        let mut d = BTreeMap::new();
        d.insert(0, PathMatrix::from_rows(vec![vec![arrow(&a, 1, &[0])]]));
        d.insert(1, PathMatrix::from_rows(vec![vec![arrow(&a, 0, &[1])]]));
        let c = ProjComplex::new(s, d);
        // The composite is α_0 α_1, a zero relation.
        assert!(validate_complex(&a, &c).is_ok());
    }

    #[test]
    fn shifts() {
        let a = alg(1, 0);
        let c = loop_complex(&a, 2);
        let s1 = shift(&ProjComplex::stalk(0, 0), 1);
        assert_eq!(s1, ProjComplex::stalk(0, -1));
        assert_eq!(shift(&c, 0), c);
        assert_eq!(shift(&shift(&c, 1), -1), c);
        assert!(validate_complex(&a, &shift(&c, 3)).is_ok());
        let iso = shift_to_reindex(&a, &c, 1);
        assert!(iso.check(&a).is_ok());
    }

    #[test]
    fn stalk_hom_dimensions() {
        let a = alg(1, 0);
        assert_eq!(hom_dimension(&a, &ProjComplex::stalk(0, 0), &ProjComplex::stalk(0, 0)), 2);
        let b = alg(2, 1);
        assert_eq!(hom_dimension(&b, &ProjComplex::stalk(-1, 0), &ProjComplex::stalk(0, 0)), 1);
        assert_eq!(hom_dimension(&b, &ProjComplex::stalk(1, 0), &ProjComplex::stalk(-1, 0)), 0);
        assert_eq!(hom_dimension(&b, &ProjComplex::stalk(0, 0), &ProjComplex::stalk(0, 1)), 0);
    }

    #[test]
    fn basis_maps_are_chain_maps_and_not_null() {
        let a = alg(1, 0);
        let c = loop_complex(&a, 2);
        let h = HomSolver::new(&a, &c, &c);
        assert!(h.dimension() >= 1);
        for f in h.basis() {
            f.check(&a).unwrap();
            assert!(!h.is_null_homotopic(&f).unwrap());
        }
    }

    #[test]
    fn null_homotopy() {
        let a = alg(1, 0);
        let c = ProjComplex::stalk(0, 0);
        assert!(is_null_homotopic(&a, &ChainMap::zero(c.clone(), c.clone())).unwrap());
        assert!(!is_null_homotopic(&a, &ChainMap::identity(&a, &c)).unwrap());
    }

    #[test]
    fn composition_identities() {
        let a = alg(1, 0);
        let c = loop_complex(&a, 1);
        let h = hom_space(&a, &c, &c);
        let id = ChainMap::identity(&a, &c);
        for f in &h.basis {
            assert_eq!(&compose_chain_maps(&a, &id, f).unwrap(), f);
            let z = ChainMap::zero(c.clone(), c.clone());
            assert!(compose_chain_maps(&a, &z, f).unwrap().is_zero());
        }
        let other = ProjComplex::stalk(0, 5);
        assert!(compose_chain_maps(&a, &ChainMap::identity(&a, &other), &id).is_err());
    }

    #[test]
    fn contractibility() {
        let a = alg(1, 0);
        assert!(is_contractible(&a, &ProjComplex::zero()));
        let mut s = BTreeMap::new();
        s.insert(0, vec![0]);
        s.insert(1, vec![0]);
        let mut d = BTreeMap::new();
        d.insert(0, PathMatrix::identity(&a, &[0]));
        assert!(is_contractible(&a, &ProjComplex::new(s, d)));
        assert!(!is_contractible(&a, &loop_complex(&a, 2)));
        let c = ProjComplex::stalk(0, 0);
        assert!(is_contractible(&a, &mapping_cone(&ChainMap::identity(&a, &c))));
    }

    #[test]
    fn cone_of_zero_is_sum() {
        let a = alg(2, 1);
        let c = ProjComplex::stalk(0, 0);
        let d = ProjComplex::stalk(-1, 0);
        let cone = mapping_cone(&ChainMap::zero(c.clone(), d.clone()));
        let sum = shift(&c, 1).direct_sum(&d);
        assert!(is_isomorphic_k(&a, &cone, &sum).isomorphic);
    }

    #[test]
    fn isomorphism_checks() {
        let a = alg(1, 0);
        let c = loop_complex(&a, 2);
        assert!(is_isomorphic_k(&a, &c, &shift(&c, 0)).isomorphic);
        let b = alg(2, 0);
        let r = is_isomorphic_k(&b, &ProjComplex::stalk(0, 0), &ProjComplex::stalk(1, 0));
        assert!(!r.isomorphic);
        let inc_proj = cone_projection(&a, &ChainMap::identity(&a, &c));
        inc_proj.check(&a).unwrap();
        cone_inclusion(&a, &ChainMap::identity(&a, &c)).check(&a).unwrap();
    }

    #[test]
    fn json_round_trip() {
        let a = alg(1, 1);
        let mut s = BTreeMap::new();
        s.insert(0, vec![-1]);
        s.insert(1, vec![0]);
        let mut d = BTreeMap::new();
        d.insert(0, PathMatrix::from_rows(vec![vec![arrow(&a, 0, &[-1, 0])]]));
        let c = ProjComplex::new(s, d);
        validate_complex(&a, &c).unwrap();
        let js = complex_to_json(&a, &c);
        assert_eq!(js, r#"{"version":1,"degrees":{"0":[-1],"1":[0]},"differentials":{"0":[[[[[-1,0],1,1]]]]}}"#);
        assert_eq!(complex_from_json(&a, &js).unwrap(), c);
        assert!(complex_from_json(&a, r#"{"version":2,"degrees":{},"differentials":{}}"#).is_err());
    }
}
