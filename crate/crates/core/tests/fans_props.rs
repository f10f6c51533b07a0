mod common;

use common::{arb_simplex_hypersurface, line_in_space};
use proptest::prelude::*;
use tropcycle::cycle::TropicalCycle;
use tropcycle::fan::Fan;
use tropcycle::linalg::Rat;
use tropcycle::stable::stable_intersect;

fn small_rational() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=5).prop_map(|(p, q)| Rat::new(p.into(), q.into()))
}

/// Compatible instance: the fan of P^n with two hypersurfaces whose Newton
/// polytopes are dilated simplices, and a cone of the fan.
fn arb_compatible_pair() -> impl Strategy<Value = (Fan, TropicalCycle, TropicalCycle, usize)> {
    prop_oneof![
        (arb_simplex_hypersurface(2, 3), arb_simplex_hypersurface(2, 3), 0usize..7)
            .prop_map(|(a, b, t)| (Fan::projective_space(2), a.1, b.1, t)),
        (arb_simplex_hypersurface(3, 2), arb_simplex_hypersurface(3, 1), 0usize..15)
            .prop_map(|(a, b, t)| (Fan::projective_space(3), a.1, b.1, t)),
    ]
}

/// A random cycle of dimension `k` in `R^m` for `m <= 3`.
fn test_cycle(m: usize, k: usize, offset: &[i64]) -> TropicalCycle {
    let shift: Vec<Rat> = offset[..m].iter().map(|&x| Rat::from_integer(x.into())).collect();
    match (m, k) {
        (_, 0) => TropicalCycle::new(
            m,
            0,
            vec![tropcycle::cycle::Cell::new(tropcycle::polyhedron::Polyhedron::point(&shift), 1)],
        )
        .unwrap(),
        (m, k) if m == k => TropicalCycle::whole_space(m),
        (2, 1) => TropicalCycle::star_of_rays(&shift, &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![-1, -1], 1)]),
        (3, 1) => line_in_space(&offset[..3]),
        (3, 2) => common::simplex_hypersurface(3, 1, &[0], &[true]).translate(&shift),
        _ => unreachable!("only small dimensions are generated"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn boundary_cycles_are_balanced((fan, s1, s2, t) in arb_compatible_pair()) {
        let t = t % fan.cones().len();
        prop_assert!(fan.is_compatible(&s1.support()));
        for s in [&s1, &s2] {
            prop_assert!(fan.boundary_cycle(s, t).unwrap().is_balanced());
        }
    }

    /// The boundary of a product is the product of the boundaries.
    #[test]
    fn boundary_commutes_with_stable_intersection((fan, s1, s2, t) in arb_compatible_pair()) {
        let t = t % fan.cones().len();
        let product = stable_intersect(&s1, &s2).unwrap();
        prop_assume!(fan.is_compatible(&product.support()));
        let left = fan.boundary_cycle(&product, t).unwrap();
        let right = stable_intersect(&fan.boundary_cycle(&s1, t).unwrap(), &fan.boundary_cycle(&s2, t).unwrap()).unwrap();
        prop_assert!(left.equals(&right), "tau {:?}: {:?} vs {:?}", fan.cone_rays(t), left, right);
    }

    #[test]
    fn boundary_of_recession_fan((fan, s1, _s2, t) in arb_compatible_pair()) {
        let t = t % fan.cones().len();
        let left = fan.boundary_cycle(&s1.recession_fan(), t).unwrap();
        let right = fan.boundary_cycle(&s1, t).unwrap().recession_fan();
        prop_assert!(left.equals(&right));
    }

    /// `deg(γ ·_c Σ) = deg(γ ·_c ρ(Σ))` in every stratum.
    #[test]
    fn recession_degree_check_agrees(
        (fan, s1, _s2, t) in arb_compatible_pair(),
        shift in prop::collection::vec(-3i64..=3, 3),
    ) {
        let t = t % fan.cones().len();
        let m = fan.orbit_dim(t);
        let b = fan.boundary_cycle(&s1, t).unwrap();
        prop_assume!(b.dim() <= m);
        let gamma = test_cycle(m, m - b.dim(), &shift);
        let (a, r) = fan.recession_degree_check(&gamma, &s1, t).unwrap();
        prop_assert_eq!(a, r);
    }

    #[test]
    fn limit_point_is_constant_along_the_ray(
        x in prop::collection::vec(small_rational(), 3),
        v in prop::collection::vec(-3i64..=3, 3),
        mu in small_rational(),
    ) {
        let fan = Fan::projective_space(3);
        let v: Vec<Rat> = v.into_iter().map(|a| Rat::from_integer(a.into())).collect();
        let mu = if mu < Rat::from_integer(0.into()) { -mu } else { mu };
        let moved: Vec<Rat> = x.iter().zip(&v).map(|(a, b)| a + b * &mu).collect();
        prop_assert_eq!(fan.limit_point(&moved, &v).unwrap(), fan.limit_point(&x, &v).unwrap());
    }
}
