use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use srlab::acceptance::random_relative_complex;
use srlab::facering::{hilbert_series_coeffs, quotient_presentation, sample_lsop, DEFAULT_LSOP_ATTEMPTS};
use srlab::koszul::{depth, is_algebraically_cm};
use srlab::partition::{degree_window, partition_homology_dims, DoubleComplexSlice, PartitionComplexSpec};
use srlab::verdicts::{
    koszul_top_matches_quotient, reisner_report, schenzel_report, topologically_cm, RunParams, TheoremReport, Verdict,
};
use srlab::{FieldMatrix, PrimeField, RelativeComplex};

fn complex(seed: u64) -> RelativeComplex {
    random_relative_complex(&mut ChaCha8Rng::seed_from_u64(seed), 6)
}

fn field_for(seed: u64) -> PrimeField {
    PrimeField::new([2, 3, 2_147_483_647][(seed % 3) as usize]).unwrap()
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k || n < 0 {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(rows in prop::collection::vec(prop::collection::vec(-5i64..5, 5), 1..6)) {
        let f = PrimeField::default();
        let m = FieldMatrix::from_rows(f, &rows).unwrap();
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.apply(v).iter().all(|&x| x == 0));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn inverses(a in 1u64..2_147_483_647) {
        let f = PrimeField::default();
        prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
    }

    #[test]
    fn cochain_complex_squares_to_zero_and_euler(seed in any::<u64>()) {
        let psi = complex(seed);
        let f = field_for(seed);
        let c = psi.cochain_complex(f);
        prop_assert!(c.validate().is_ok());
        let betti = psi.relative_cohomology_dims(f);
        let chi: i64 = betti.dims.iter().map(|(&i, &b)| if i.rem_euclid(2) == 0 { b as i64 } else { -(b as i64) }).sum();
        if let Ok(fv) = psi.f_h_vectors() {
            let alt: i64 = fv.f.iter().enumerate().map(|(k, &x)| if k % 2 == 1 { x } else { -x }).sum();
            prop_assert_eq!(chi, alt);
            prop_assert_eq!(fv.h.iter().sum::<i64>(), *fv.f.last().unwrap());
        }
    }

    #[test]
    fn hilbert_function_counts_monomials_by_support(seed in any::<u64>()) {
        let psi = complex(seed);
        let coeffs = hilbert_series_coeffs(&psi, 4);
        for (j, &c) in coeffs.iter().enumerate() {
            let expected: i64 = psi
                .faces()
                .map(|f| if j == 0 { i64::from(f.is_empty()) } else { binom(j as i64 - 1, f.len() as i64 - 1) })
                .sum();
            prop_assert_eq!(c, expected);
        }
    }

    #[test]
    fn partition_homology_is_cohomology(seed in any::<u64>()) {
        let psi = complex(seed);
        let f = field_for(seed);
        let b = psi.relative_cohomology_dims(f);
        let h = partition_homology_dims(&psi, degree_window(&psi), f).unwrap();
        for ((i, j), v) in h {
            prop_assert_eq!(v, if j == 0 { b.get(i) } else { 0 });
        }
    }

    #[test]
    fn fine_and_coarse_routes_agree(seed in any::<u64>()) {
        let psi = complex(seed);
        let f = field_for(seed);
        let spec = PartitionComplexSpec::full(&psi);
        prop_assert_eq!(spec.homology_dims(2, f).unwrap(), spec.homology_dims_coarse(2, f).unwrap());
    }

    #[test]
    fn koszul_top_is_the_quotient(seed in any::<u64>()) {
        let psi = complex(seed);
        if let Some((theta, _)) = sample_lsop(&psi, PrimeField::default(), seed, DEFAULT_LSOP_ATTEMPTS) {
            prop_assert!(koszul_top_matches_quotient(&psi, &theta));
            if !psi.is_void() {
                prop_assert!(depth(&psi, &theta).unwrap() <= psi.max_face_card());
            }
        }
    }

    #[test]
    fn reisner_agreement(seed in any::<u64>()) {
        let psi = complex(seed);
        let r = reisner_report(&psi, &RunParams::new(field_for(seed), seed, 3));
        prop_assert_eq!(r.verdict, Verdict::Holds, "{:?}", r);
    }

    #[test]
    fn cm_quotient_is_h(seed in any::<u64>()) {
        let psi = complex(seed);
        let f = PrimeField::default();
        prop_assume!(!psi.is_void() && topologically_cm(&psi, f).is_ok());
        let (theta, _) = sample_lsop(&psi, f, seed, DEFAULT_LSOP_ATTEMPTS).unwrap();
        let q = quotient_presentation(&psi, &theta);
        let h = psi.f_h_vectors().unwrap().h;
        for (j, &hj) in h.iter().enumerate() {
            prop_assert_eq!(q.dim(j) as i64, hj);
        }
        prop_assert_eq!(is_algebraically_cm(&psi, f, seed, 1).cm, Some(true));
    }

    #[test]
    fn total_complex_squares_to_zero(seed in any::<u64>()) {
        let psi = complex(seed);
        prop_assume!(!psi.is_void() && psi.max_face_card() <= 3);
        let (theta, _) = sample_lsop(&psi, PrimeField::default(), seed, DEFAULT_LSOP_ATTEMPTS).unwrap();
        let spec = PartitionComplexSpec::full(&psi);
        for j in 0..=2 {
            let slice = DoubleComplexSlice::assemble(&spec, &theta, j);
            prop_assert!(slice.differentials_commute());
            let (lo, hi) = slice.tot_range();
            for k in lo..hi {
                let d1 = slice.tot_differential(k);
                let d2 = slice.tot_differential(k + 1);
                if d1.cols() > 0 && d2.rows() > 0 {
                    prop_assert!(d2.mul(&d1).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn reports_round_trip(seed in any::<u64>()) {
        let psi = complex(seed);
        let r = schenzel_report(&psi, &RunParams::new(field_for(seed), seed, 2));
        let back: TheoremReport = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(schenzel_report(&psi, &RunParams::new(field_for(seed), seed, 2)), r);
    }
}
