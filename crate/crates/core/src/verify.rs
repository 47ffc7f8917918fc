//! Verification suites cross-checking the combinatorics against the oracle,
//! with a deterministic JSON report.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::complex::{compose_chain_maps, is_isomorphic_k, HomSolver, ProjComplex};
use crate::gamma::{
    gamma_compose, gamma_hom_dim, irreducible_targets, projective_vertex, suspend_vertex, theta_hom_with,
    theta_preimage, theta_vertex, GammaHom, GammaVertex, GammaWindow,
};
use crate::homcomb::{hom_dim, in_phi, in_psi, irr_targets_quadruple, phi_map, psi_map_with, PsiSign};
use crate::indecomposables::{
    build_complex, enumerate_quadruples, enumerate_strings, quadruple_to_string, string_to_quadruple,
    suspend_quadruple, QuadWindow, Quadruple,
};
use crate::rigidity::{
    build_eta, coniso_normal_form, construct_conjugation, standard_triangle, verify_eta, verify_naturality,
    window_vertices, ConisoOutcome, ConnectingIsoData, PseudoIdentityData,
};
use crate::Result;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Dimension,
    Basis,
    Functoriality,
    Suspension,
    Projectives,
    Irreducibles,
    Triangles,
    Rigidity,
    ConnectingIso,
    Classification,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Dimension,
        Suite::Basis,
        Suite::Functoriality,
        Suite::Suspension,
        Suite::Projectives,
        Suite::Irreducibles,
        Suite::Triangles,
        Suite::Rigidity,
        Suite::ConnectingIso,
        Suite::Classification,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Dimension => "dimension",
            Suite::Basis => "basis",
            Suite::Functoriality => "functoriality",
            Suite::Suspension => "suspension",
            Suite::Projectives => "projectives",
            Suite::Irreducibles => "irreducibles",
            Suite::Triangles => "triangles",
            Suite::Rigidity => "rigidity",
            Suite::ConnectingIso => "connecting_iso",
            Suite::Classification => "classification",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub quad_window: QuadWindow,
    pub gamma_window: GammaWindow,
    /// Number of seeded instances for the rigidity and connecting-iso suites.
    pub instances: u64,
    pub seed: u64,
    /// Cross-check against the linear-algebra oracle.
    pub oracle: bool,
    pub psi_sign: PsiSign,
    /// Triangles required for the triangle suite to pass.
    pub min_triangles: usize,
}

impl VerifyConfig {
    pub fn new(quad_window: QuadWindow, gamma_window: GammaWindow) -> Self {
        VerifyConfig { quad_window, gamma_window, instances: 10, seed: 0, oracle: true, psi_sign: PsiSign::Signed, min_triangles: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checked: usize,
    pub failures: usize,
    /// The first failing case in enumeration order.
    pub counterexample: Option<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub n: i32,
    pub m: i32,
    pub config: VerifyConfig,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

fn tally(suite: Suite, outcomes: Vec<Option<String>>) -> SuiteReport {
    let failures = outcomes.iter().filter(|o| o.is_some()).count();
    SuiteReport {
        suite,
        checked: outcomes.len(),
        failures,
        counterexample: outcomes.into_iter().flatten().next(),
        passed: failures == 0,
    }
}

fn check_all<T: Sync>(suite: Suite, items: &[T], f: impl Fn(&T) -> Option<String> + Sync + Send) -> SuiteReport {
    tally(suite, items.par_iter().map(f).collect())
}

fn complex(alg: &Algebra, q: Quadruple) -> ProjComplex {
    build_complex(alg, q).expect("enumerated quadruples are valid")
}

/// Quadruple pairs `(source, target)` of the window.
fn quad_pairs(alg: &Algebra, w: QuadWindow) -> Result<Vec<(Quadruple, Quadruple)>> {
    let qs = enumerate_quadruples(alg, w)?;
    Ok(qs.iter().flat_map(|&x| qs.iter().map(move |&y| (x, y))).collect())
}

/// `hom_dim` equals the oracle dimension and the Γ dimension of the preimages.
pub fn suite_dimension(alg: &Algebra, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let pairs = quad_pairs(alg, cfg.quad_window)?;
    Ok(check_all(Suite::Dimension, &pairs, |&(x, y)| {
        let d = hom_dim(alg, x, y);
        let gamma = match (theta_preimage(alg, x), theta_preimage(alg, y)) {
            (Ok(v), Ok(u)) => gamma_hom_dim(alg, v, u),
            _ => return Some(format!("{x} or {y} has no Γ preimage")),
        };
        if gamma != d {
            return Some(format!("{x} -> {y}: combinatorial {d}, Γ {gamma}"));
        }
        if cfg.oracle {
            let o = HomSolver::new(alg, &complex(alg, x), &complex(alg, y)).dimension();
            if o != d {
                return Some(format!("{x} -> {y}: combinatorial {d}, oracle {o}"));
            }
        }
        None
    }))
}

/// φ and ψ are chain maps, not null-homotopic, and independent when both exist.
pub fn suite_basis(alg: &Algebra, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let pairs: Vec<_> = quad_pairs(alg, cfg.quad_window)?
        .into_iter()
        .filter(|&(x, y)| in_phi(alg, x, y) || in_psi(alg, x, y))
        .collect();
    Ok(check_all(Suite::Basis, &pairs, |&(x, y)| {
        let mut maps = Vec::new();
        if in_phi(alg, x, y) {
            maps.push(("φ", phi_map(alg, y, x)));
        }
        if in_psi(alg, x, y) {
            maps.push(("ψ", psi_map_with(alg, y, x, cfg.psi_sign)));
        }
        let mut built = Vec::new();
        for (name, map) in maps {
            let map = match map {
                Ok(f) => f,
                Err(e) => return Some(format!("{name} {x} -> {y}: {e}")),
            };
            if let Err(e) = map.check(alg) {
                return Some(format!("{name} {x} -> {y}: {e}"));
            }
            built.push(map);
        }
        if cfg.oracle {
            let solver = HomSolver::new(alg, &built[0].source, &built[0].target);
            match solver.rank_modulo_homotopy(&built) {
                Ok(r) if r == built.len() => {}
                Ok(r) => return Some(format!("{x} -> {y}: rank {r} modulo homotopy for {} maps", built.len())),
                Err(e) => return Some(format!("{x} -> {y}: {e}")),
            }
        }
        None
    }))
}

fn gamma_basis(alg: &Algebra, v: GammaVertex, u: GammaVertex) -> Vec<GammaHom> {
    [GammaHom::f(alg, v, u), GammaHom::g(alg, v, u)].into_iter().filter(|h| !h.is_zero()).collect()
}

/// `Θ(h2 ∘ h1) ≃ Θ(h2) ∘ Θ(h1)` for basis morphisms of composable window pairs.
pub fn suite_functoriality(alg: &Algebra, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let vs = cfg.gamma_window.vertices(alg);
    let mut cases = Vec::new();
    for &v in &vs {
        for &u in &vs {
            let first = gamma_basis(alg, v, u);
            if first.is_empty() {
                continue;
            }
            for &w in &vs {
                for h2 in gamma_basis(alg, u, w) {
                    for h1 in &first {
                        cases.push((*h1, h2));
                    }
                }
            }
        }
    }
    let sign = cfg.psi_sign;
    Ok(check_all(Suite::Functoriality, &cases, |(h1, h2)| {
        let run = || -> Result<bool> {
            let lhs = theta_hom_with(alg, &gamma_compose(alg, h2, h1)?, sign)?;
            let rhs = compose_chain_maps(alg, &theta_hom_with(alg, h2, sign)?, &theta_hom_with(alg, h1, sign)?)?;
            let diff = lhs.sub(&rhs)?;
            if !cfg.oracle {
                return Ok(diff.is_zero() || diff.check(alg).is_ok());
            }
            HomSolver::new(alg, &diff.source, &diff.target).is_null_homotopic(&diff)
        };
        match run() {
            Ok(true) => None,
            Ok(false) => Some(format!("Θ({h2} ∘ {h1}) is not homotopic to the composite")),
            Err(e) => Some(format!("{h1} then {h2}: {e}")),
        }
    }))
}

/// `Θ(ΣV)` is the suspension of `Θ(V)`.
pub fn suite_suspension(alg: &Algebra, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let vs = cfg.gamma_window.vertices(alg);
    Ok(check_all(Suite::Suspension, &vs, |&v| {
        let (Ok(a), Ok(b)) = (theta_vertex(alg, suspend_vertex(alg, v)), theta_vertex(alg, v).map(suspend_quadruple))
        else {
            return Some(format!("Θ undefined near {v}"));
        };
        if cfg.oracle {
            let iso = is_isomorphic_k(alg, &complex(alg, b), &complex(alg, a));
            (!iso.isomorphic).then(|| format!("Θ(Σ{v}) = {a} is not ΣΘ({v}) = {b}: {}", iso.reason))
        } else {
            (a != b).then(|| format!("Θ(Σ{v}) = {a} differs from ΣΘ({v}) = {b}"))
        }
    }))
}

/// `Θ` of the projective vertices gives the stalk complexes `P_j`.
pub fn suite_projectives(alg: &Algebra, _cfg: &VerifyConfig) -> Result<SuiteReport> {
    let js: Vec<i32> = alg.vertices().collect();
    Ok(check_all(Suite::Projectives, &js, |&j| {
        let q = projective_vertex(alg, j).and_then(|v| theta_vertex(alg, v));
        let Ok(q) = q else {
            return Some(format!("no projective vertex for {j}"));
        };
        let iso = is_isomorphic_k(alg, &complex(alg, q), &ProjComplex::stalk(j, 0));
        (!iso.isomorphic).then(|| format!("Θ(P_{j}) = {q} is not the stalk P_{j}"))
    }))
}

/// Irreducible targets in Γ match the complex-side tables under `Θ`.
pub fn suite_irreducibles(alg: &Algebra, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let vs = cfg.gamma_window.vertices(alg);
    Ok(check_all(Suite::Irreducibles, &vs, |&v| {
        let run = || -> Result<Option<String>> {
            let q = theta_vertex(alg, v)?;
            let gamma: BTreeSet<Quadruple> =
                irreducible_targets(alg, v).into_iter().map(|u| theta_vertex(alg, u)).collect::<Result<_>>()?;
            let tables: BTreeSet<Quadruple> = irr_targets_quadruple(alg, q)?.into_iter().collect();
            if gamma != tables {
                return Ok(Some(format!("{v}: Γ gives {gamma:?}, tables give {tables:?}")));
            }
            if (tables.len() == 1) != v.is_boundary(alg) {
                return Ok(Some(format!("{v}: unique target mismatch")));
            }
            Ok(None)
        };
        run().unwrap_or_else(|e| Some(format!("{v}: {e}")))
    }))
}

/// Standard triangles certified by the oracle.
pub fn suite_triangles(alg: &Algebra, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let vs = cfg.gamma_window.vertices(alg);
    let mut report = check_all(Suite::Triangles, &vs, |&v| standard_triangle(alg, v).err().map(|e| e.to_string()));
    if report.checked < cfg.min_triangles {
        report.passed = false;
        report.counterexample.get_or_insert_with(|| format!("only {} triangles in the window", report.checked));
    }
    Ok(report)
}

/// Seeded pseudo-identities are conjugate to the identity; the identity
/// itself yields the identity family.
pub fn suite_rigidity(alg: &Algebra, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let w = cfg.gamma_window;
    let seeds: Vec<Option<u64>> = std::iter::once(None).chain((0..cfg.instances).map(|s| Some(cfg.seed + s))).collect();
    let outcomes = seeds
        .iter()
        .map(|seed| {
            let data = match seed {
                None => PseudoIdentityData::identity(alg, w),
                Some(s) => PseudoIdentityData::random(alg, w, *s),
            };
            let label = seed.map_or("identity".to_string(), |s| format!("seed {s}"));
            let phi = match construct_conjugation(alg, &data) {
                Ok(phi) => phi,
                Err(e) => return Some(format!("{label}: {e}")),
            };
            if seed.is_none() && !phi.is_identity() {
                return Some("identity input gave a nontrivial family".into());
            }
            verify_naturality(alg, &phi, &data).err().map(|c| format!("{label}: naturality fails at {}", c.generator))
        })
        .collect();
    Ok(tally(Suite::Rigidity, outcomes))
}

/// Connecting isomorphisms are forced to the identity, or normalized by `η`.
pub fn suite_connecting_iso(alg: &Algebra, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let w = cfg.gamma_window;
    let seeds: Vec<u64> = (0..cfg.instances).map(|s| cfg.seed + s).collect();
    Ok(check_all(Suite::ConnectingIso, &seeds, |&s| {
        let data = ConnectingIsoData::random(alg, w, s);
        let run = || -> Result<Option<String>> {
            Ok(match coniso_normal_form(alg, &data)? {
                ConisoOutcome::Forced { forced, .. } => {
                    let all = window_vertices(alg, &w).len();
                    (forced.len() != all || forced.values().any(|x| *x != crate::Scalar::from_integer(0)))
                        .then(|| format!("seed {s}: μ not forced to 0 on the whole window"))
                }
                ConisoOutcome::NotForced => {
                    let eta = build_eta(alg, &data)?;
                    verify_eta(alg, &data, &eta)?;
                    None
                }
            })
        };
        run().unwrap_or_else(|e| Some(format!("seed {s}: {e}")))
    }))
}

/// Strings biject onto the window and window complexes are pairwise
/// non-isomorphic.
pub fn suite_classification(alg: &Algebra, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let qs = enumerate_quadruples(alg, cfg.quad_window)?;
    let strings = enumerate_strings(alg, cfg.quad_window)?;
    let mut outcomes = Vec::new();
    let mut seen = BTreeSet::new();
    for &(k, s) in &strings {
        let q = string_to_quadruple(alg, k, s)?;
        let back = quadruple_to_string(alg, q)?;
        let fresh = seen.insert(q);
        outcomes.push((!fresh || back != (k, s)).then(|| format!("string {k}:{s} -> {q} is not a bijection")));
    }
    let all: BTreeSet<Quadruple> = qs.iter().copied().collect();
    outcomes.push((seen != all).then(|| format!("strings hit {} of {} quadruples", seen.len(), all.len())));
    if cfg.oracle {
        let complexes: Vec<ProjComplex> = qs.iter().map(|&q| complex(alg, q)).collect();
        let pairs: Vec<(usize, usize)> =
            (0..qs.len()).flat_map(|i| (i + 1..qs.len()).map(move |j| (i, j))).collect();
        outcomes.par_extend(pairs.par_iter().map(|&(i, j)| {
            let iso = is_isomorphic_k(alg, &complexes[i], &complexes[j]);
            iso.isomorphic.then(|| format!("{} ≅ {}", qs[i], qs[j]))
        }));
    }
    Ok(tally(Suite::Classification, outcomes))
}

pub fn run_suite(alg: &Algebra, suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    match suite {
        Suite::Dimension => suite_dimension(alg, cfg),
        Suite::Basis => suite_basis(alg, cfg),
        Suite::Functoriality => suite_functoriality(alg, cfg),
        Suite::Suspension => suite_suspension(alg, cfg),
        Suite::Projectives => suite_projectives(alg, cfg),
        Suite::Irreducibles => suite_irreducibles(alg, cfg),
        Suite::Triangles => suite_triangles(alg, cfg),
        Suite::Rigidity => suite_rigidity(alg, cfg),
        Suite::ConnectingIso => suite_connecting_iso(alg, cfg),
        Suite::Classification => suite_classification(alg, cfg),
    }
}

pub fn verify(alg: &Algebra, suites: &[Suite], cfg: &VerifyConfig) -> Result<VerifyReport> {
    let reports = suites.iter().map(|&s| run_suite(alg, s, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        n: alg.n(),
        m: alg.m(),
        config: *cfg,
        passed: reports.iter().all(|r| r.passed),
        suites: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        let mut cfg = VerifyConfig::new(QuadWindow::new(-1, 1, 2), GammaWindow::square(-1, 1));
        cfg.instances = 2;
        cfg
    }

    #[test]
    fn all_suites_pass_on_small_windows() {
        for (n, m) in [(1, 0), (2, 1)] {
            let alg = Algebra::new(n, m).unwrap();
            let report = verify(&alg, &Suite::ALL, &small()).unwrap();
            for s in &report.suites {
                assert!(s.passed, "({n},{m}) {:?}: {:?}", s.suite, s.counterexample);
            }
        }
    }

    #[test]
    fn unsigned_psi_breaks_functoriality() {
        let alg = Algebra::new(2, 1).unwrap();
        let mut cfg = small();
        cfg.psi_sign = PsiSign::Unsigned;
        let r = suite_functoriality(&alg, &cfg).unwrap();
        assert!(!r.passed);
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn report_is_deterministic() {
        let alg = Algebra::new(1, 1).unwrap();
        let a = serde_json::to_string(&verify(&alg, &[Suite::Rigidity, Suite::Dimension], &small()).unwrap()).unwrap();
        let b = serde_json::to_string(&verify(&alg, &[Suite::Rigidity, Suite::Dimension], &small()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
