use proptest::prelude::*;

use derived_discrete::complex::HomSolver;
use derived_discrete::gamma::{
    desuspend_vertex, gamma_compose, gamma_hom_dim, radical_degree, suspend_hom, suspend_vertex, suspend_vertex_by,
    theta_hom, theta_preimage, theta_vertex, GammaHom, GammaVertex, RadDegree,
};
use derived_discrete::homcomb::hom_dim;
use derived_discrete::indecomposables::{build_complex, suspend_quadruple};
use derived_discrete::{Algebra, Scalar};

fn algebra() -> impl Strategy<Value = Algebra> {
    prop_oneof![Just((1, 0)), Just((1, 1)), Just((1, 2)), Just((2, 0)), Just((2, 1)), Just((3, 2))]
        .prop_map(|(n, m)| Algebra::new(n, m).unwrap())
}

fn vertex(alg: &Algebra) -> impl Strategy<Value = GammaVertex> {
    let (n, m) = (alg.n(), alg.m() as i64);
    (0..n, -6i64..6, 0i64..8).prop_map(move |(i, a, d)| {
        let lift = if i == 0 { m } else { 0 };
        GammaVertex { i, a, b: a - lift + d }
    })
}

fn with_vertices(k: usize) -> impl Strategy<Value = (Algebra, Vec<GammaVertex>)> {
    algebra().prop_flat_map(move |alg| {
        let vs = proptest::collection::vec(vertex(&alg), k);
        (Just(alg), vs)
    })
}

fn coeff() -> impl Strategy<Value = Scalar> {
    (-3i64..=3, 1i64..=2).prop_map(|(p, q)| Scalar::new(p, q))
}

fn hom(alg: &Algebra, v: GammaVertex, u: GammaVertex, l: Scalar, mu: Scalar) -> GammaHom {
    let d = derived_discrete::gamma::in_f(alg, v, u);
    let e = derived_discrete::gamma::in_g(alg, v, u);
    let zero = Scalar::from_integer(0);
    GammaHom::new(alg, v, u, if d { l } else { zero }, if e { mu } else { zero }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn theta_round_trips((alg, vs) in with_vertices(2)) {
        let (v, u) = (vs[0], vs[1]);
        let q = theta_vertex(&alg, v).unwrap();
        prop_assert_eq!(theta_preimage(&alg, q).unwrap(), v);
        if v != u {
            prop_assert_ne!(theta_vertex(&alg, u).unwrap(), q);
        }
    }

    #[test]
    fn dimensions_transport((alg, vs) in with_vertices(2)) {
        let (v, u) = (vs[0], vs[1]);
        let (p, q) = (theta_vertex(&alg, v).unwrap(), theta_vertex(&alg, u).unwrap());
        prop_assert_eq!(gamma_hom_dim(&alg, v, u), hom_dim(&alg, p, q));
    }

    #[test]
    fn suspension_is_invertible((alg, vs) in with_vertices(1), t in -4i64..4) {
        let v = vs[0];
        prop_assert_eq!(desuspend_vertex(&alg, suspend_vertex(&alg, v)), v);
        prop_assert_eq!(suspend_vertex_by(&alg, suspend_vertex_by(&alg, v, t), -t), v);
        let q = theta_vertex(&alg, suspend_vertex(&alg, v)).unwrap();
        prop_assert_eq!(q, suspend_quadruple(theta_vertex(&alg, v).unwrap()));
        let full = suspend_vertex_by(&alg, v, alg.n() as i64);
        let shift = (alg.n() + alg.m()) as i64;
        prop_assert_eq!(full, GammaVertex { i: v.i, a: v.a + shift, b: v.b + shift });
    }

    #[test]
    fn composition_is_associative((alg, vs) in with_vertices(4), cs in proptest::collection::vec(coeff(), 6)) {
        let h1 = hom(&alg, vs[0], vs[1], cs[0], cs[1]);
        let h2 = hom(&alg, vs[1], vs[2], cs[2], cs[3]);
        let h3 = hom(&alg, vs[2], vs[3], cs[4], cs[5]);
        let left = gamma_compose(&alg, &h3, &gamma_compose(&alg, &h2, &h1).unwrap()).unwrap();
        let right = gamma_compose(&alg, &gamma_compose(&alg, &h3, &h2).unwrap(), &h1).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn radical_degree_is_superadditive((alg, vs) in with_vertices(3)) {
        let h1 = hom(&alg, vs[0], vs[1], Scalar::from_integer(1), Scalar::from_integer(1));
        let h2 = hom(&alg, vs[1], vs[2], Scalar::from_integer(1), Scalar::from_integer(1));
        let c = gamma_compose(&alg, &h2, &h1).unwrap();
        match (radical_degree(&h1), radical_degree(&h2), radical_degree(&c)) {
            (_, _, RadDegree::Infinite) => {}
            (RadDegree::Finite(x), RadDegree::Finite(y), RadDegree::Finite(z)) => prop_assert!(z >= x + y),
            (d1, d2, d) => prop_assert!(false, "{d1} + {d2} exceeds {d}"),
        }
    }

    #[test]
    fn suspension_commutes_with_composition((alg, vs) in with_vertices(3), cs in proptest::collection::vec(coeff(), 4)) {
        let h1 = hom(&alg, vs[0], vs[1], cs[0], cs[1]);
        let h2 = hom(&alg, vs[1], vs[2], cs[2], cs[3]);
        let lhs = suspend_hom(&alg, &gamma_compose(&alg, &h2, &h1).unwrap());
        let rhs = gamma_compose(&alg, &suspend_hom(&alg, &h2), &suspend_hom(&alg, &h1)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn theta_is_faithful_on_nonzero_maps((alg, vs) in with_vertices(2), l in coeff(), mu in coeff()) {
        let h = hom(&alg, vs[0], vs[1], l, mu);
        let f = theta_hom(&alg, &h).unwrap();
        let c = build_complex(&alg, theta_vertex(&alg, vs[0]).unwrap()).unwrap();
        let d = build_complex(&alg, theta_vertex(&alg, vs[1]).unwrap()).unwrap();
        let null = HomSolver::new(&alg, &c, &d).is_null_homotopic(&f).unwrap();
        prop_assert_eq!(null, h.is_zero());
    }
}
