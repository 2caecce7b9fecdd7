use proptest::prelude::*;

use oclearn::geometry::{
    ball_slice_bounds, ball_slice_probability, cap_measure, cap_radius, hamming_distance, peak_density, Codeword,
};

fn sign_vec(m: usize) -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { 1i8 } else { -1 }), m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hamming_triangle(m in 1usize..12, a in sign_vec(12), b in sign_vec(12), c in sign_vec(12)) {
        let (a, b, c) = (
            Codeword::new(a[..m].to_vec()).unwrap(),
            Codeword::new(b[..m].to_vec()).unwrap(),
            Codeword::new(c[..m].to_vec()).unwrap(),
        );
        let ab = hamming_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, hamming_distance(&b, &a).unwrap());
        prop_assert_eq!(hamming_distance(&a, &a).unwrap(), 0);
        prop_assert!(hamming_distance(&a, &c).unwrap() <= ab + hamming_distance(&b, &c).unwrap());
    }

    #[test]
    fn cap_measure_monotone_and_complement(d in 2usize..9, r1 in 0.0f64..std::f64::consts::PI, r2 in 0.0f64..std::f64::consts::PI) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let (vl, vh) = (cap_measure(d, lo).unwrap(), cap_measure(d, hi).unwrap());
        prop_assert!(vl <= vh + 1e-12);
        let flip = cap_measure(d, std::f64::consts::PI - lo).unwrap();
        prop_assert!((flip - (1.0 - vl)).abs() < 1e-8);
    }

    #[test]
    fn slice_within_bounds(d in 1usize..11, t in 1e-4f64..std::f64::consts::FRAC_1_SQRT_2, r in 0.1f64..3.0) {
        let p = ball_slice_probability(d, r, t * r).unwrap();
        let (lo, hi) = ball_slice_bounds(d, r, t * r).unwrap();
        prop_assert!(lo <= p + 1e-12 && p <= hi + 1e-12, "{} not in [{}, {}]", p, lo, hi);
    }

    #[test]
    fn upper_cap_radius_within_lower(d in 2usize..8, b in 0.1f64..0.9, c_lb in 0.5f64..2.0, ratio in 1.0f64..3.0, frac in 0.0f64..0.99) {
        let c_ub = c_lb * ratio;
        let level = frac * peak_density(d, b, c_lb);
        let upper = cap_radius(d, b, c_ub, level).unwrap();
        let lower = cap_radius(d, b, c_lb, level).unwrap();
        prop_assert!(upper >= lower - 1e-12);
    }
}
