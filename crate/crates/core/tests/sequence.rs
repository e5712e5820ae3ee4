use digitseq_core::sequence::*;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn root_floor(n: u64, num: u64, den: u64) -> u64 {
    BigUint::from(n)
        .pow(num as u32)
        .nth_root(den as u32)
        .to_u64()
        .unwrap()
}

fn exact(x: f64) -> BigRational {
    BigRational::from_f64(x).unwrap()
}

fn exact_beatty(n: i64, alpha: f64, beta: f64) -> i64 {
    let v = BigRational::from_integer(BigInt::from(n)) * exact(alpha) + exact(beta);
    v.floor().to_integer().to_i64().unwrap()
}

#[test]
fn ps_floor_matches_integer_roots() {
    for (num, den) in [(3, 2), (4, 3), (21, 20), (71, 50), (13, 10), (5, 4)] {
        let spec = PSSpec::new(num, den).unwrap();
        for n in 0..20_000 {
            assert_eq!(ps_floor(n, &spec), root_floor(n, num, den), "n={n}, c={num}/{den}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(num);
        let top = (9.0e18f64).powf(den as f64 / num as f64) as u64;
        for _ in 0..2000 {
            let n = rng.gen_range(1..top);
            assert_eq!(ps_floor(n, &spec), root_floor(n, num, den), "n={n}, c={num}/{den}");
        }
    }
}

#[test]
fn ps_floor_on_perfect_powers() {
    // n = k^den makes n^c = k^num an integer: the floor sits on the edge
    let spec = PSSpec::new(3, 2).unwrap();
    for k in 1..50_000u64 {
        assert_eq!(ps_floor(k * k, &spec), k * k * k);
        assert_eq!(ps_floor(k * k - 1, &spec), root_floor(k * k - 1, 3, 2));
    }
    // a tiny margin forces most values through the fast path
    let loose = spec.with_fast_path_margin(1e-15).unwrap();
    for n in 1..50_000 {
        assert_eq!(ps_floor(n, &loose), root_floor(n, 3, 2));
    }
}

#[test]
fn ps_block_is_ordered_and_exact() {
    let spec = PSSpec::new(71, 50).unwrap();
    let block = ps_block(1000, 5000, &spec).unwrap();
    assert_eq!(block.len(), 4001);
    for (i, v) in block.iter().enumerate() {
        assert_eq!(*v, root_floor(1000 + i as u64, 71, 50));
    }
}

#[test]
fn beatty_floor_matches_exact_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..200 {
        let alpha = rng.gen_range(0.01..1000.0);
        let beta = rng.gen_range(-1e6..1e6);
        let line = BeattyLine::new(alpha, beta).unwrap();
        for _ in 0..50 {
            let n = rng.gen_range(-1_000_000i64..1_000_000);
            assert_eq!(beatty_floor(n, &line), exact_beatty(n, alpha, beta));
        }
    }
    // exactly representable lines with integer hits
    for (alpha, beta) in [(1.5, 0.5), (0.25, -3.0), (2.0, 0.0), (1.0 / 1024.0, 7.0)] {
        let line = BeattyLine::new(alpha, beta).unwrap();
        for n in -5000..5000 {
            assert_eq!(beatty_floor(n, &line), exact_beatty(n, alpha, beta));
        }
    }
}

#[test]
fn membership_agrees_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let alpha = rng.gen_range(1.0..10.0);
        let beta = rng.gen_range(-5.0..5.0);
        let line = BeattyLine::new(alpha, beta).unwrap();
        let hits: BTreeSet<i64> = (-10..=10_010)
            .map(|n| exact_beatty(n, alpha, beta))
            .collect();
        for m in 0..10_000 {
            assert_eq!(beatty_membership(m, &line).unwrap(), hits.contains(&m), "m={m}, α={alpha}, β={beta}");
        }
    }
    let line = BeattyLine::new(0.5, 0.0).unwrap();
    assert!(beatty_membership(3, &line).is_err());
}

#[test]
fn floor_mismatches_match_exact_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for (num, den) in [(3u64, 2u64), (13, 10)] {
        let spec = PSSpec::new(num, den).unwrap();
        let f = GrowthFunction::power(spec);
        for _ in 0..60 {
            let a: u64 = rng.gen_range(10..2_000_000);
            let k: u64 = rng.gen_range(1..=200);
            let w = tangent_window(&f, a as f64, (a + k) as f64).unwrap();
            let alpha = rng.gen_range(w.alpha_lo..=w.alpha_hi);
            let report = count_floor_mismatches(&f, a, a + k, alpha, 8).unwrap();
            let beta = w.beta(alpha);
            let brute = (a + 1..=a + k)
                .filter(|&n| root_floor(n, num, den) as i64 != exact_beatty(n as i64, alpha, beta))
                .count() as u64;
            assert_eq!(report.mismatch_count, brute, "a={a}, K={k}");
            if report.d < 0.5 {
                assert!(report.within_bound(), "{report:?}");
            }
        }
    }
}

#[test]
fn admissibility_examples() {
    let f = GrowthFunction::power(PSSpec::new(3, 2).unwrap());
    assert!(check_admissible(&f, 2.0, 1e6, 64).unwrap().passed);
    let g = GrowthFunction::power_log(1.3, 1.0).unwrap();
    assert!(check_admissible(&g, 10.0, 1e6, 64).unwrap().passed);
    let linear = GrowthFunction::combination(vec![PowerLogTerm {
        coef: 1.0,
        exponent: 1.0,
        log_power: 0.0,
    }])
    .unwrap();
    assert!(!check_admissible(&linear, 2.0, 1e6, 64).unwrap().passed);
}

#[test]
fn inverse_derivative_sum_stays_comparable_to_a() {
    let f = GrowthFunction::power(PSSpec::new(3, 2).unwrap());
    for a in [1000u64, 4000, 16000, 64000] {
        let s = inverse_derivative_sum(&f, a);
        // ∫_{f(A)}^{f(2A)} (f⁻¹)′ = A, up to O(1) endpoint effects
        assert!((s / a as f64 - 1.0).abs() < 2.0 / a as f64 + 1e-9, "A={a}: {s}");
    }
}

proptest! {
    #[test]
    fn ps_floor_brackets_the_power(n in 1u64..1 << 40, which in 0usize..4) {
        let (num, den) = [(3u64, 2u64), (4, 3), (21, 20), (71, 50)][which];
        let spec = PSSpec::new(num, den).unwrap();
        let m = ps_floor(n, &spec);
        let target = BigUint::from(n).pow(num as u32);
        prop_assert!(BigUint::from(m).pow(den as u32) <= target);
        prop_assert!(BigUint::from(m + 1).pow(den as u32) > target);
    }

    #[test]
    fn ps_floor_is_nondecreasing(n in 1u64..1 << 40) {
        let spec = PSSpec::new(13, 10).unwrap();
        prop_assert!(ps_floor(n, &spec) <= ps_floor(n + 1, &spec));
    }

    #[test]
    fn beatty_floor_is_exact(n in -1i64 << 40..1 << 40, alpha in 1e-3f64..1e3, beta in -1e9f64..1e9) {
        let line = BeattyLine::new(alpha, beta).unwrap();
        prop_assert_eq!(beatty_floor(n, &line), exact_beatty(n, alpha, beta));
    }

    #[test]
    fn growth_inverse_round_trips(c in 1.01f64..1.99, eta in 0.0f64..2.0, x in 3.0f64..1e7) {
        let f = GrowthFunction::power_log(c, eta).unwrap();
        let y = f.eval(x);
        let back = f.inverse(y);
        prop_assert!(((back - x) / x).abs() < 1e-10, "x={} back={}", x, back);
        let d = f.inverse_derivative(y) * f.d1(x);
        prop_assert!((d - 1.0).abs() < 1e-8);
    }

    #[test]
    fn decimal_parsing_is_exact(int in 1u64..100, frac in 0u64..10_000) {
        let s = format!("{int}.{frac:04}");
        let (num, den) = parse_decimal(&s).unwrap();
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        let expected = BigRational::new(BigInt::from(int * 10_000 + frac), BigInt::from(10_000));
        prop_assert_eq!(r, expected);
        prop_assert!(!BigRational::new(BigInt::from(num), BigInt::from(den)).is_negative());
    }
}
