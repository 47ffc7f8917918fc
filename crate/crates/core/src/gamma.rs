//! The quiver Γ with relations presenting the indecomposables of the
//! homotopy category, and the functor Θ realizing it by complexes.
//!
//! A vertex `(i, a, b)` has at most a two-dimensional space of maps to any
//! other vertex, spanned by `f_{U,V}` and `g_{U,V}`; morphisms are stored
//! as the pair of coefficients `(λ, μ)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Vertex};
use crate::complex::ChainMap;
use crate::error::{Error, Result};
use crate::homcomb::{phi_map, psi_map_with, PsiSign};
use crate::indecomposables::{build_complex, Quadruple};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaVertex {
    pub i: i32,
    pub a: i64,
    pub b: i64,
}

fn delta(x: i32, y: i32) -> bool {
    x == y
}

impl GammaVertex {
    pub const fn new(i: i32, a: i64, b: i64) -> Self {
        GammaVertex { i, a, b }
    }

    /// `b + δ_{i,0} m`, the upper end of the `x` range of `ℱ_V`.
    pub fn b_top(&self, alg: &Algebra) -> i64 {
        self.b + if delta(self.i, 0) { alg.m() as i64 } else { 0 }
    }

    pub fn is_valid(&self, alg: &Algebra) -> bool {
        (0..alg.n()).contains(&self.i) && self.a <= self.b_top(alg)
    }

    pub fn check(&self, alg: &Algebra) -> Result<()> {
        if self.is_valid(alg) {
            Ok(())
        } else {
            Err(Error::InvalidGammaVertex(format!("{self} for {}", alg.spec())))
        }
    }

    /// Whether this is one of the vertices `(i, a, a - δ_{i,0} m)` with a
    /// single irreducible map leaving it.
    pub fn is_boundary(&self, alg: &Algebra) -> bool {
        self.a == self.b_top(alg)
    }
}

impl fmt::Display for GammaVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.a, self.b)
    }
}

impl FromStr for GammaVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected (i,a,b), got {s:?}")))?;
        let parts: Vec<i64> = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {p:?} in {s:?}"))))
            .collect::<Result<_>>()?;
        match parts[..] {
            [i, a, b] => Ok(GammaVertex { i: i32::try_from(i).map_err(|_| Error::Parse(s.into()))?, a, b }),
            _ => Err(Error::Parse(format!("expected three entries in {s:?}"))),
        }
    }
}

/// `U ∈ ℱ_V`.
pub fn in_f(alg: &Algebra, v: GammaVertex, u: GammaVertex) -> bool {
    u.i == v.i && (v.a..=v.b_top(alg)).contains(&u.a) && u.b >= v.b
}

/// `U ∈ 𝒢_V`.
pub fn in_g(alg: &Algebra, v: GammaVertex, u: GammaVertex) -> bool {
    let n = alg.n();
    let x_max = v.a + if delta(v.i, n - 1) { alg.m() as i64 } else { 0 };
    u.i == (v.i + 1).rem_euclid(n) && u.a <= x_max && (v.a..=v.b_top(alg)).contains(&u.b)
}

pub fn gamma_hom_dim(alg: &Algebra, v: GammaVertex, u: GammaVertex) -> usize {
    usize::from(in_f(alg, v, u)) + usize::from(in_g(alg, v, u))
}

/// `λ f_{U,V} + μ g_{U,V}` with the convention that a coefficient of an
/// absent basis element is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaHom {
    pub source: GammaVertex,
    pub target: GammaVertex,
    pub lambda: Scalar,
    pub mu: Scalar,
}

impl GammaHom {
    /// Checks that nonzero coefficients sit on existing basis elements.
    pub fn new(alg: &Algebra, source: GammaVertex, target: GammaVertex, lambda: Scalar, mu: Scalar) -> Result<Self> {
        source.check(alg)?;
        target.check(alg)?;
        if !lambda.is_zero() && !in_f(alg, source, target) {
            return Err(Error::InvalidMorphism(format!("no f from {source} to {target}")));
        }
        if !mu.is_zero() && !in_g(alg, source, target) {
            return Err(Error::InvalidMorphism(format!("no g from {source} to {target}")));
        }
        Ok(GammaHom { source, target, lambda, mu })
    }

    pub fn zero(source: GammaVertex, target: GammaVertex) -> Self {
        GammaHom { source, target, lambda: Scalar::zero(), mu: Scalar::zero() }
    }

    pub fn identity(v: GammaVertex) -> Self {
        GammaHom { source: v, target: v, lambda: Scalar::one(), mu: Scalar::zero() }
    }

    /// `f_{U,V}`, or zero if `U ∉ ℱ_V`.
    pub fn f(alg: &Algebra, source: GammaVertex, target: GammaVertex) -> Self {
        let lambda = if in_f(alg, source, target) { Scalar::one() } else { Scalar::zero() };
        GammaHom { source, target, lambda, mu: Scalar::zero() }
    }

    /// `g_{U,V}`, or zero if `U ∉ 𝒢_V` (this is `g'` when `U ∈ ℱ_V`).
    pub fn g(alg: &Algebra, source: GammaVertex, target: GammaVertex) -> Self {
        let mu = if in_g(alg, source, target) { Scalar::one() } else { Scalar::zero() };
        GammaHom { source, target, lambda: Scalar::zero(), mu }
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_zero() && self.mu.is_zero()
    }

    pub fn scaled(&self, c: Scalar) -> Self {
        GammaHom { lambda: self.lambda * c, mu: self.mu * c, ..*self }
    }

    pub fn add(&self, other: &GammaHom) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::EndpointMismatch(format!("{self} and {other} have different endpoints")));
        }
        Ok(GammaHom { lambda: self.lambda + other.lambda, mu: self.mu + other.mu, ..*self })
    }
}

impl fmt::Display for GammaHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*f + {}*g : {} -> {}", self.lambda, self.mu, self.source, self.target)
    }
}

/// `h2 ∘ h1` in normal form.
pub fn gamma_compose(alg: &Algebra, h2: &GammaHom, h1: &GammaHom) -> Result<GammaHom> {
    if h1.target != h2.source {
        return Err(Error::EndpointMismatch(format!("{} is not {}", h1.target, h2.source)));
    }
    let (v, w) = (h1.source, h2.target);
    let lambda = if in_f(alg, v, w) { h1.lambda * h2.lambda } else { Scalar::zero() };
    let mu = if in_g(alg, v, w) { h1.lambda * h2.mu + h1.mu * h2.lambda } else { Scalar::zero() };
    Ok(GammaHom { source: v, target: w, lambda, mu })
}

/// `ΣV = (i+1, a+1+δ_{i,n-1} m, b+1+δ_{i,0} m)`.
pub fn suspend_vertex(alg: &Algebra, v: GammaVertex) -> GammaVertex {
    let (n, m) = (alg.n(), alg.m() as i64);
    GammaVertex {
        i: (v.i + 1).rem_euclid(n),
        a: v.a + 1 + if v.i == n - 1 { m } else { 0 },
        b: v.b + 1 + if v.i == 0 { m } else { 0 },
    }
}

/// `Σ^{-1}V`.
pub fn desuspend_vertex(alg: &Algebra, v: GammaVertex) -> GammaVertex {
    let (n, m) = (alg.n(), alg.m() as i64);
    let i = (v.i - 1).rem_euclid(n);
    GammaVertex {
        i,
        a: v.a - 1 - if i == n - 1 { m } else { 0 },
        b: v.b - 1 - if i == 0 { m } else { 0 },
    }
}

/// `Σ^t V` for any integer `t`.
pub fn suspend_vertex_by(alg: &Algebra, v: GammaVertex, t: i64) -> GammaVertex {
    let (n, m) = (alg.n() as i64, alg.m() as i64);
    let (q, s) = (t.div_euclid(n), t.rem_euclid(n));
    let mut w = GammaVertex { a: v.a + q * (n + m), b: v.b + q * (n + m), ..v };
    for _ in 0..s {
        w = suspend_vertex(alg, w);
    }
    w
}

/// Σ on morphisms keeps both coefficients; the relations are homogeneous.
pub fn suspend_hom(alg: &Algebra, h: &GammaHom) -> GammaHom {
    GammaHom { source: suspend_vertex(alg, h.source), target: suspend_vertex(alg, h.target), ..*h }
}

/// `λ f_{V,V} + μ g'_{V,V}` with `λ ≠ 0`.
pub fn is_isomorphism(h: &GammaHom) -> bool {
    h.source == h.target && !h.lambda.is_zero()
}

/// Inverse of an automorphism `λ + μ g'`: `λ^{-1} - λ^{-2} μ g'`.
pub fn invert_automorphism(h: &GammaHom) -> Result<GammaHom> {
    if !is_isomorphism(h) {
        return Err(Error::InvalidMorphism(format!("{h} is not invertible")));
    }
    let inv = h.lambda.recip();
    Ok(GammaHom { lambda: inv, mu: -(inv * inv) * h.mu, ..*h })
}

/// The targets of irreducible maps leaving `V`.
pub fn irreducible_targets(alg: &Algebra, v: GammaVertex) -> Vec<GammaVertex> {
    let mut out = vec![GammaVertex { b: v.b + 1, ..v }];
    let up = GammaVertex { a: v.a + 1, ..v };
    if up.is_valid(alg) {
        out.push(up);
    }
    out
}

pub fn is_irreducible(alg: &Algebra, h: &GammaHom) -> bool {
    !h.lambda.is_zero() && irreducible_targets(alg, h.source).contains(&h.target)
}

/// Radical degree: finite for maps with an `f` component, infinite otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RadDegree {
    Finite(u64),
    Infinite,
}

impl fmt::Display for RadDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadDegree::Finite(d) => write!(f, "{d}"),
            RadDegree::Infinite => write!(f, "inf"),
        }
    }
}

/// `(x - a) + (y - b)` when `λ ≠ 0`, else `∞`; the zero map is `∞`.
pub fn radical_degree(h: &GammaHom) -> RadDegree {
    if h.lambda.is_zero() {
        RadDegree::Infinite
    } else {
        RadDegree::Finite(((h.target.a - h.source.a) + (h.target.b - h.source.b)) as u64)
    }
}

/// The vertex of `P_j`.
pub fn projective_vertex(alg: &Algebra, j: Vertex) -> Result<GammaVertex> {
    alg.check_vertex(j)?;
    Ok(if j <= 0 { GammaVertex::new(0, 0, j as i64) } else { GammaVertex::new(j, 0, 0) })
}

/// `Some((j, t))` when `V = Σ^t P_j`.
pub fn is_shifted_projective(alg: &Algebra, v: GammaVertex) -> Option<(Vertex, i64)> {
    let (n, m) = (alg.n() as i64, alg.m() as i64);
    for j in alg.vertices() {
        let mut w = projective_vertex(alg, j).expect("vertex in range");
        for s in 0..n {
            if w.i == v.i && v.a - w.a == v.b - w.b && (v.a - w.a).rem_euclid(n + m) == 0 {
                return Some((j, (v.a - w.a).div_euclid(n + m) * n + s));
            }
            w = suspend_vertex(alg, w);
        }
    }
    None
}

/// Writes `x = p (m+n) + r` with `r ∈ [-n+1, m]`.
fn split(x: i64, n: i64, m: i64) -> (i64, i64) {
    let r = (x + n - 1).rem_euclid(m + n) - (n - 1);
    ((x - r) / (m + n), r)
}

/// The quadruple of the complex `Θ(V)`.
pub fn theta_vertex(alg: &Algebra, v: GammaVertex) -> Result<Quadruple> {
    v.check(alg)?;
    let (n, m) = (alg.n() as i64, alg.m() as i64);
    let i = v.i as i64;
    let (p, r) = split(v.a - i, n, m);
    let (q, t) = split(v.b_top(alg) - i, n, m);
    let quad = |k: i64, u: i64, l: i64, w: i64| Quadruple::new(k as i32, u as i32, l as i32, w as i32);
    Ok(match (r <= 0, t < 0) {
        (true, true) => quad(-q * n - t - i, -t, (q - p) * n + (t - r), -r),
        (true, false) if (q - p) * n - r > 0 => quad(-q * n - i, -m + t, (q - p) * n - r, -r),
        (true, false) => quad(-q * n - i, -m + t, 0, -m + t),
        (false, true) => quad(-q * n - t - i, -t, (q - p) * n + t, -m - 1 + r),
        (false, false) => quad(-q * n - i, -m + t, (q - p) * n, -m - 1 + r),
    })
}

/// The vertex `V` with `Θ(V) = q`.
pub fn theta_preimage(alg: &Algebra, quad: Quadruple) -> Result<GammaVertex> {
    quad.check(alg)?;
    let (n, m) = (alg.n() as i64, alg.m() as i64);
    let (k, u, l, v) = (quad.k as i64, quad.u as i64, quad.l as i64, quad.v as i64);
    let t = if u >= 1 { -u } else { u + m };
    // Stalks P_u with u ≤ 0 come from the degenerate case r = 0, p = q.
    let degenerate = l == 0 && u == v && u <= 0;
    let r = if degenerate || v >= 0 { -v.max(0) } else { v + m + 1 };
    let base = -k - if t < 0 { t } else { 0 };
    let i = base.rem_euclid(n);
    let q = (base - i) / n;
    let span = match (r <= 0, t < 0) {
        _ if degenerate => 0,
        (true, true) => l - t + r,
        (true, false) => l + r,
        (false, true) => l - t,
        (false, false) => l,
    };
    if span.rem_euclid(n) != 0 {
        return Err(Error::NotInIndexSet(quad.to_string()));
    }
    let p = q - span / n;
    let delta0 = if i == 0 { m } else { 0 };
    let gv = GammaVertex { i: i as i32, a: p * (m + n) + r + i, b: q * (m + n) + t + i - delta0 };
    if !gv.is_valid(alg) || theta_vertex(alg, gv)? != quad {
        return Err(Error::NotInIndexSet(quad.to_string()));
    }
    Ok(gv)
}

/// `Θ(h) = λ φ + μ ψ`.
pub fn theta_hom(alg: &Algebra, h: &GammaHom) -> Result<ChainMap> {
    theta_hom_with(alg, h, PsiSign::Signed)
}

pub fn theta_hom_with(alg: &Algebra, h: &GammaHom, sign: PsiSign) -> Result<ChainMap> {
    let qv = theta_vertex(alg, h.source)?;
    let qu = theta_vertex(alg, h.target)?;
    let mut out = ChainMap::zero(build_complex(alg, qv)?, build_complex(alg, qu)?);
    if !h.lambda.is_zero() {
        out = out.add(&phi_map(alg, qu, qv)?.scaled(h.lambda))?;
    }
    if !h.mu.is_zero() {
        out = out.add(&psi_map_with(alg, qu, qv, sign)?.scaled(h.mu))?;
    }
    Ok(out)
}

/// Vertices `(i, a, b)` of Γ with `a ∈ [a_lo, a_hi]`, `b ∈ [b_lo, b_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaWindow {
    pub a_lo: i64,
    pub a_hi: i64,
    pub b_lo: i64,
    pub b_hi: i64,
}

impl GammaWindow {
    pub fn new(a_lo: i64, a_hi: i64, b_lo: i64, b_hi: i64) -> Self {
        GammaWindow { a_lo, a_hi, b_lo, b_hi }
    }

    pub fn square(lo: i64, hi: i64) -> Self {
        Self::new(lo, hi, lo, hi)
    }

    pub fn contains(&self, v: &GammaVertex) -> bool {
        (self.a_lo..=self.a_hi).contains(&v.a) && (self.b_lo..=self.b_hi).contains(&v.b)
    }

    /// Valid vertices in the window, ordered by `(i, a, b)`.
    pub fn vertices(&self, alg: &Algebra) -> Vec<GammaVertex> {
        let mut out = Vec::new();
        for i in 0..alg.n() {
            for a in self.a_lo..=self.a_hi {
                for b in self.b_lo..=self.b_hi {
                    let v = GammaVertex::new(i, a, b);
                    if v.is_valid(alg) {
                        out.push(v);
                    }
                }
            }
        }
        out
    }
}

/// Basis elements of the radical `rad(V, U)`.
pub fn radical_basis(alg: &Algebra, v: GammaVertex, u: GammaVertex) -> Vec<GammaHom> {
    let mut out = Vec::new();
    if u != v && in_f(alg, v, u) {
        out.push(GammaHom::f(alg, v, u));
    }
    if in_g(alg, v, u) {
        out.push(GammaHom::g(alg, v, u));
    }
    out
}

/// Which of `f_{U,V}`, `g_{U,V}` lie in the span of the composites
/// `rad(W, U) ∘ rad(V, W)` over intermediate vertices `W` in `window`.
pub fn radical_square_span(alg: &Algebra, v: GammaVertex, u: GammaVertex, window: &GammaWindow) -> (bool, bool) {
    let mut vecs: Vec<(Scalar, Scalar)> = Vec::new();
    for w in window.vertices(alg) {
        let first = radical_basis(alg, v, w);
        if first.is_empty() {
            continue;
        }
        let second = radical_basis(alg, w, u);
        for h1 in &first {
            for h2 in &second {
                let c = gamma_compose(alg, h2, h1).expect("composable");
                if !c.is_zero() {
                    vecs.push((c.lambda, c.mu));
                }
            }
        }
    }
    let has_f_part = vecs.iter().any(|(l, _)| !l.is_zero());
    let has_g_only = vecs.iter().any(|(l, m)| l.is_zero() && !m.is_zero());
    let independent = vecs.iter().any(|(l1, m1)| vecs.iter().any(|(l2, m2)| *l1 * *m2 != *l2 * *m1));
    let f_in = has_f_part && (independent || has_g_only || !in_g(alg, v, u));
    let g_in = has_g_only || independent;
    (f_in, g_in)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: i64, m: i64) -> Algebra {
        Algebra::new(n, m).unwrap()
    }

    fn gv(i: i32, a: i64, b: i64) -> GammaVertex {
        GammaVertex::new(i, a, b)
    }

    #[test]
    fn memberships() {
        let a = alg(1, 0);
        for v in GammaWindow::square(-2, 2).vertices(&a) {
            assert!(in_f(&a, v, v));
            assert!(in_g(&a, v, v));
            assert_eq!(gamma_hom_dim(&a, v, v), 2);
        }
        let b = alg(2, 1);
        assert!(in_g(&b, gv(0, 0, 0), gv(1, 0, 0)));
        assert_eq!(gamma_hom_dim(&b, gv(0, 0, -1), gv(0, 0, 0)), 1);
        assert_eq!(gamma_hom_dim(&b, gv(0, 0, 0), gv(1, 5, 0)), 0);
    }

    #[test]
    fn composition_rules() {
        let a = alg(1, 0);
        let (v, u, w) = (gv(0, 0, 0), gv(0, 0, 1), gv(0, 1, 1));
        let c = gamma_compose(&a, &GammaHom::f(&a, u, w), &GammaHom::f(&a, v, u)).unwrap();
        assert_eq!(c, GammaHom::f(&a, v, w));
        let gg = gamma_compose(&a, &GammaHom::g(&a, v, v), &GammaHom::g(&a, v, v)).unwrap();
        assert!(gg.is_zero());
        let x = gv(0, 0, 0);
        let y = gv(0, 0, 0);
        let fg = gamma_compose(&a, &GammaHom::f(&a, x, y), &GammaHom::g(&a, x, x)).unwrap();
        let gf = gamma_compose(&a, &GammaHom::g(&a, x, y), &GammaHom::f(&a, x, x)).unwrap();
        assert_eq!(fg, GammaHom::g(&a, x, y));
        assert_eq!(gf, GammaHom::g(&a, x, y));
        assert!(gamma_compose(&a, &GammaHom::identity(w), &GammaHom::identity(v)).is_err());
    }

    #[test]
    fn suspension() {
        let b = alg(2, 1);
        assert_eq!(suspend_vertex(&b, gv(0, 0, -1)), gv(1, 1, 1));
        let a = alg(1, 0);
        assert_eq!(suspend_vertex(&a, gv(0, 3, 5)), gv(0, 4, 6));
        for (n, m) in [(1, 2), (2, 1), (3, 2)] {
            let c = alg(n, m);
            for v in GammaWindow::square(-3, 3).vertices(&c) {
                let s = suspend_vertex(&c, v);
                assert!(s.is_valid(&c));
                assert_eq!(desuspend_vertex(&c, s), v);
                assert_eq!(suspend_vertex_by(&c, v, 1), s);
                assert_eq!(suspend_vertex_by(&c, v, -1), desuspend_vertex(&c, v));
                assert_eq!(suspend_vertex_by(&c, v, 0), v);
            }
        }
    }

    #[test]
    fn isomorphisms_and_irreducibles() {
        let a = alg(1, 0);
        let v = gv(0, 0, 0);
        let q = Scalar::from_integer;
        assert!(is_isomorphism(&GammaHom::identity(v)));
        assert!(is_isomorphism(&GammaHom::new(&a, v, v, q(1), q(5)).unwrap()));
        assert!(!is_isomorphism(&GammaHom::new(&a, v, v, q(0), q(1)).unwrap()));
        let h = GammaHom::new(&a, v, v, q(2), q(3)).unwrap();
        let inv = invert_automorphism(&h).unwrap();
        assert_eq!(gamma_compose(&a, &inv, &h).unwrap(), GammaHom::identity(v));

        let b = alg(2, 1);
        assert_eq!(irreducible_targets(&b, gv(1, 0, 3)).len(), 2);
        assert_eq!(irreducible_targets(&b, gv(0, 2, 1)), vec![gv(0, 2, 2)]);
        assert!(is_irreducible(&b, &GammaHom::f(&b, gv(1, 0, 3), gv(1, 0, 4))));
        assert!(!is_irreducible(&b, &GammaHom::zero(gv(1, 0, 3), gv(1, 0, 4))));
    }

    #[test]
    fn radical_degrees() {
        let a = alg(1, 0);
        assert_eq!(radical_degree(&GammaHom::f(&a, gv(0, 0, 2), gv(0, 1, 4))), RadDegree::Finite(3));
        assert_eq!(radical_degree(&GammaHom::g(&a, gv(0, 0, 0), gv(0, 0, 0))), RadDegree::Infinite);
        assert_eq!(radical_degree(&GammaHom::identity(gv(0, 0, 0))), RadDegree::Finite(0));
        assert_eq!(radical_degree(&GammaHom::zero(gv(0, 0, 0), gv(0, 0, 1))), RadDegree::Infinite);
    }

    #[test]
    fn projectives() {
        let b = alg(2, 1);
        assert_eq!(projective_vertex(&b, -1).unwrap(), gv(0, 0, -1));
        assert_eq!(projective_vertex(&b, 1).unwrap(), gv(1, 0, 0));
        assert!(projective_vertex(&b, 2).is_err());
        assert_eq!(is_shifted_projective(&b, gv(1, 1, 1)), Some((-1, 1)));
        assert_eq!(is_shifted_projective(&b, gv(0, 0, 3)), None);
        for j in b.vertices() {
            for t in -5..=5 {
                let w = suspend_vertex_by(&b, projective_vertex(&b, j).unwrap(), t);
                assert_eq!(is_shifted_projective(&b, w), Some((j, t)));
            }
        }
    }

    #[test]
    fn theta_anchors() {
        for (n, m) in [(1, 0), (1, 2), (2, 1), (3, 2)] {
            let c = alg(n, m);
            let mm = m as i32;
            assert_eq!(theta_vertex(&c, gv(0, 0, -m)).unwrap(), Quadruple::new(0, -mm, 0, -mm));
            for i in 1..n as i32 {
                assert_eq!(theta_vertex(&c, gv(i, 0, 0)).unwrap(), Quadruple::new(0, i, 0, i));
            }
            for j in c.vertices() {
                let p = theta_vertex(&c, projective_vertex(&c, j).unwrap()).unwrap();
                assert_eq!(p, Quadruple::new(0, j, 0, j));
            }
        }
        let a = alg(1, 0);
        for v in GammaWindow::square(-4, 4).vertices(&a) {
            let (x, y) = (v.a as i32, v.b as i32);
            assert_eq!(theta_vertex(&a, v).unwrap(), Quadruple::new(-y, 0, y - x, 0));
        }
    }

    #[test]
    fn theta_round_trip() {
        for (n, m) in [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (3, 2)] {
            let c = alg(n, m);
            for v in GammaWindow::square(-6, 6).vertices(&c) {
                let q = theta_vertex(&c, v).unwrap();
                q.check(&c).unwrap();
                assert_eq!(theta_preimage(&c, q).unwrap(), v);
            }
        }
    }

    #[test]
    fn parse_vertex() {
        assert_eq!("(1, -2,3)".parse::<GammaVertex>().unwrap(), gv(1, -2, 3));
        assert!("(1,2)".parse::<GammaVertex>().is_err());
        assert_eq!(gv(0, -1, 2).to_string(), "(0,-1,2)");
    }
}
