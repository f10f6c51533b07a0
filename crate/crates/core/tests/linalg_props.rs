mod common;

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use tropcycle::linalg::{
    hermite_normal_form, integer_kernel, lattice_index, mat_vec_int, primitive_generator, Int, Lattice,
    QuotientFrame, Rat,
};

fn int_rows(rows: &[Vec<i64>]) -> Vec<Vec<Int>> {
    rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
}

fn arb_matrix(max_rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, cols), 1..=max_rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_idempotent(m in arb_matrix(5, 4)) {
        let (h, u) = hermite_normal_form(&int_rows(&m));
        let (h2, _) = hermite_normal_form(&h);
        prop_assert_eq!(&h2, &h);
        // U M = H with U unimodular
        let um: Vec<Vec<Int>> = u
            .iter()
            .map(|urow| (0..4).map(|j| urow.iter().zip(&int_rows(&m)).map(|(a, r)| a * &r[j]).sum()).collect())
            .collect();
        prop_assert_eq!(um, h);
        prop_assert_eq!(common::det(&u).abs(), Int::one());
    }

    /// `[C : A] = [C : B] [B : A]` for a chain `A ⊆ B ⊆ C` of equal rank.
    #[test]
    fn lattice_index_is_multiplicative(
        c in arb_matrix(4, 4),
        b_mult in arb_matrix(4, 4),
        a_mult in arb_matrix(4, 4),
    ) {
        let lc = Lattice::new(4, &int_rows(&c));
        let r = lc.rank();
        // sublattices generated by integer combinations of the basis
        let combine = |basis: &[Vec<Int>], coeffs: &[Vec<i64>]| -> Vec<Vec<Int>> {
            coeffs
                .iter()
                .map(|row| {
                    (0..4)
                        .map(|j| basis.iter().zip(row).map(|(v, &k)| &v[j] * Int::from(k)).sum())
                        .collect()
                })
                .collect()
        };
        let lb = Lattice::new(4, &combine(lc.basis(), &b_mult.iter().map(|v| v[..r].to_vec()).collect::<Vec<_>>()));
        let la = Lattice::new(4, &combine(lb.basis(), &a_mult.iter().map(|v| v[..lb.rank()].to_vec()).collect::<Vec<_>>()));
        prop_assume!(la.rank() == r && lb.rank() == r && r > 0);
        let ab = lattice_index(&la, &lb).unwrap();
        let bc = lattice_index(&lb, &lc).unwrap();
        let ac = lattice_index(&la, &lc).unwrap();
        prop_assert_eq!(&ac, &(&ab * &bc));
        if r == 4 {
            // independent oracle: gcd of maximal minors
            prop_assert_eq!(lattice_index(&la, &Lattice::standard(4)).unwrap(), common::index_in_standard(la.basis(), 4));
        }
    }

    #[test]
    fn primitive_generator_is_scale_invariant(v in prop::collection::vec(-9i64..=9, 1..=4), p in 1i64..20, q in 1i64..20) {
        let v: Vec<Rat> = v.iter().map(|&x| Rat::from_integer(x.into())).collect();
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        let scaled: Vec<Rat> = v.iter().map(|x| x * Rat::new(p.into(), q.into())).collect();
        prop_assert_eq!(primitive_generator(&scaled).unwrap(), primitive_generator(&v).unwrap());
    }

    /// The kernel of the quotient frame of `span(τ)` is `span(τ) ∩ Z^n`.
    #[test]
    fn quotient_frame_kernel_recovers_span(gens in arb_matrix(3, 4)) {
        let g = int_rows(&gens);
        let frame = QuotientFrame::from_int_generators(4, &g);
        let span = Lattice::new(4, &g);
        prop_assert_eq!(frame.target_dim(), 4 - span.rank());
        let kernel = Lattice::new(4, &integer_kernel(frame.matrix(), 4));
        prop_assert_eq!(kernel.rank(), span.rank());
        prop_assert_eq!(&kernel, &span.saturate());
        for v in &g {
            prop_assert!(mat_vec_int(frame.matrix(), v).iter().all(Zero::is_zero));
        }
    }
}
