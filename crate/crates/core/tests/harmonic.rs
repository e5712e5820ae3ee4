use digitseq_core::harmonic::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Discrepancy by enumerating every candidate interval: closed intervals
/// between two points and open gaps between consecutive endpoints
/// (including 0 and 1).
fn brute_discrepancy(points: &[f64]) -> f64 {
    let n = points.len() as f64;
    let mut best: f64 = 0.0;
    for &r in points {
        for &s in points {
            if r <= s {
                let inside = points.iter().filter(|&&p| r <= p && p <= s).count() as f64;
                best = best.max(inside / n - (s - r));
            }
        }
    }
    let mut ends: Vec<f64> = points.to_vec();
    ends.push(0.0);
    ends.push(1.0);
    for &r in &ends {
        for &s in &ends {
            if r < s {
                let inside = points.iter().filter(|&&p| r < p && p < s).count() as f64;
                best = best.max((s - r) - inside / n);
            }
        }
    }
    best
}

#[test]
fn discrepancy_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let n = rng.gen_range(1..40);
        let pts: Vec<f64> = if rng.gen_bool(0.3) {
            // coarse grid to force ties
            (0..n).map(|_| rng.gen_range(0..8) as f64 / 8.0).collect()
        } else {
            (0..n).map(|_| rng.gen::<f64>()).collect()
        };
        let got = exact_discrepancy(&pts).unwrap();
        let want = brute_discrepancy(&pts);
        assert!((got - want).abs() < 1e-12, "{pts:?}: {got} vs {want}");
    }
}

#[test]
fn discrepancy_of_known_sets() {
    // a single point has discrepancy 1
    assert!((exact_discrepancy(&[0.3]).unwrap() - 1.0).abs() < 1e-15);
    // the centred lattice (2i+1)/2N has discrepancy 1/N
    for n in [1usize, 2, 5, 64] {
        let pts: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64 / (2 * n) as f64).collect();
        assert!((exact_discrepancy(&pts).unwrap() - 1.0 / n as f64).abs() < 1e-12);
    }
    assert!(exact_discrepancy(&[]).is_err());
    assert!(exact_discrepancy(&[1.0]).is_err());
    assert!(exact_discrepancy(&[-0.1]).is_err());
}

#[test]
fn erdos_turan_bound_matches_its_definition() {
    let pts = [0.1, 0.25, 0.7];
    let h = 3;
    let mut want = 1.0 / (h as f64 + 1.0);
    for k in 1..=h {
        let s: Complex64 = pts
            .iter()
            .map(|&x| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 * x))
            .sum();
        want += s.norm() / pts.len() as f64 / k as f64;
    }
    assert!((erdos_turan_bound(&pts, h).unwrap() - want).abs() < 1e-14);
    assert!(erdos_turan_audit(&pts, h).unwrap().holds());
}

#[test]
fn fejer_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..2000 {
        let h = rng.gen_range(0..300);
        let t: f64 = rng.gen_range(-3.0..3.0);
        let a = fejer_majorant(h, t);
        let b = fejer_majorant_squared_form(h, t);
        assert!((a - b).abs() < 1e-11, "H={h} t={t}: {a} vs {b}");
        assert!(a >= -1e-12);
    }
}

#[test]
fn vaaler_inequality_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for h in [1u32, 2, 5, 17, 100, 400] {
        let approx = vaaler_build(h).unwrap();
        assert_eq!(approx.degree(), h);
        for k in 1..=h as i64 {
            let c = approx.coefficient(k);
            assert!((0.0..=1.0).contains(&c));
            assert_eq!(c, approx.coefficient(-k));
        }
        for _ in 0..5000 {
            let t: f64 = rng.gen_range(-2.0..2.0);
            let err = (sawtooth(t) - vaaler_psi_h(&approx, t)).abs();
            assert!(err <= fejer_majorant(h, t) + VAALER_TOLERANCE, "H={h} t={t}");
        }
    }
    assert!(vaaler_build(0).is_err());
}

#[test]
fn sawtooth_values() {
    assert_eq!(sawtooth(0.25), -0.25);
    assert_eq!(sawtooth(0.75), 0.25);
    assert_eq!(sawtooth(-0.25), 0.25);
    assert_eq!(sawtooth(3.0), -0.5);
}

#[test]
fn min_kernel_integral_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30 {
        let a = rng.gen_range(-5.0..5.0);
        let b = a + rng.gen_range(0.0..4.0);
        let big_b = rng.gen_range(2.0..200.0);
        let (integral, bound) = min_kernel_integral_check(a, b, big_b).unwrap();
        let n = 400_000;
        let w = (b - a) / n as f64;
        let mid: f64 = (0..n)
            .map(|i| {
                let x: f64 = a + (i as f64 + 0.5) * w;
                let d = (x - x.round()).abs();
                if d * big_b <= 1.0 { big_b } else { 1.0 / d }
            })
            .sum::<f64>()
            * w;
        assert!((integral - mid).abs() < 1e-3 * (1.0 + mid), "[{a}, {b}] B={big_b}: {integral} vs {mid}");
        assert!(integral <= bound);
    }
    assert!(min_kernel_integral_check(1.0, 0.0, 4.0).is_err());
    assert!(min_kernel_integral_check(0.0, 1.0, 1.0).is_err());
}

#[test]
fn range_extension_inequality_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let x: f64 = rng.gen_range(0.0..100.0);
        let z: f64 = x + rng.gen_range(1.0..60.0);
        let y = rng.gen_range(x..=z);
        let len = (z.floor() - x.floor()) as usize;
        let a: Vec<Complex64> = (0..len)
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..6.3)))
            .collect();
        let r = range_extension_check(&a, x, y, z, 64).unwrap();
        assert!(r.lhs <= r.rhs + r.quadrature_error + 1e-9, "{r:?}");
    }
    assert!(range_extension_check(&[], 2.0, 1.0, 3.0, 8).is_err());
    assert!(range_extension_check(&[Complex64::new(1.0, 0.0)], 0.0, 1.0, 3.0, 8).is_err());
}

proptest! {
    #[test]
    fn erdos_turan_dominates_discrepancy(
        pts in prop::collection::vec(0.0f64..1.0, 1..200),
        h in 1u32..64,
    ) {
        let r = erdos_turan_audit(&pts, h).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
        prop_assert!(r.discrepancy <= 1.0 + 1e-15);
        prop_assert!(r.discrepancy >= 1.0 / (2.0 * pts.len() as f64) - 1e-15);
    }

    #[test]
    fn discrepancy_is_reflection_invariant(pts in prop::collection::vec(0.0f64..1.0, 1..50)) {
        // x ↦ 1 − x permutes the interval families when no point sits at 0
        let reflected: Vec<f64> = pts.iter().filter(|&&p| p > 0.0).map(|&p| 1.0 - p).collect();
        prop_assume!(reflected.len() == pts.len());
        let a = exact_discrepancy(&pts).unwrap();
        let b = exact_discrepancy(&reflected).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}
