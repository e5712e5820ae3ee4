use digitseq_core::digits::{digit_sum, thue_morse_sign, zeckendorf_digit_sum, DigitBase};
use digitseq_core::expsum::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// Digit sum by repeated division, independent of the library.
fn sq(mut n: u64, q: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % q;
        n /= q;
    }
    s
}

/// `{mθ}` exactly for θ a multiple of 2^-53, as produced by `rng.gen()`.
fn phase(m: i64, theta: f64) -> f64 {
    let k = (theta * TWO53) as i128;
    assert_eq!(k as f64, theta * TWO53, "θ must be a multiple of 2^-53");
    ((m as i128 * k).rem_euclid(1 << 53)) as f64 / TWO53
}

const TWO53: f64 = 9007199254740992.0;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

#[test]
fn window_sum_matches_direct_summation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for phi in [ArithFn::One, ArithFn::ThueMorse, ArithFn::DigitPhase { q: 3, alpha: 0.3 }] {
        for _ in 0..40 {
            let x = rng.gen_range(-50.0..1e5);
            let z = rng.gen_range(0.0..5000.0);
            let theta: f64 = rng.gen();
            let got = window_exp_sum(&phi, x, z, theta).unwrap();
            let mut want = Complex64::new(0.0, 0.0);
            let mut count = 0;
            let mut m = x.floor() as i64 + 1;
            while (m as f64) <= x + z {
                let v = if m < 0 {
                    0.0.into()
                } else {
                    match phi {
                        ArithFn::One => 1.0.into(),
                        ArithFn::ThueMorse => Complex64::new(if sq(m as u64, 2) % 2 == 0 { 1.0 } else { -1.0 }, 0.0),
                        ArithFn::DigitPhase { q, alpha } => cis(alpha * sq(m as u64, q as u64) as f64),
                        _ => unreachable!(),
                    }
                };
                want += v * cis(phase(m, theta));
                count += 1;
                m += 1;
            }
            assert_eq!(got.term_count, count);
            assert!(close(got.value, want, 1e-9), "{phi:?} x={x} z={z}: {} vs {want}", got.value);
        }
    }
    assert!(window_exp_sum(&ArithFn::One, 0.0, -1.0, 0.1).is_err());
    assert_eq!(window_exp_sum(&ArithFn::Zero, 0.0, 100.0, 0.1).unwrap().value, 0.0.into());
}

#[test]
fn dyadic_block_sum_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let lambda = rng.gen_range(0..=12);
        let ell = rng.gen_range(0..1u64 << 20);
        let theta: f64 = rng.gen();
        let start = ell << lambda;
        let direct: Complex64 = (start..start + (1 << lambda))
            .map(|n| thue_morse_sign(n) as f64 * cis(phase(n as i64, theta)))
            .sum();
        let got = tm_dyadic_expsum(ell, lambda, theta);
        assert!(close(got, direct, 1e-9), "ℓ={ell} λ={lambda} θ={theta}");
        // the modulus is the sine product
        assert!((got.norm() - sine_product_magnitude(lambda, theta)).abs() < 1e-9 * got.norm().max(1.0));
    }
}

#[test]
fn interval_bound_dominates_thue_morse_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let x: u64 = rng.gen_range(0..1 << 30);
        let len: u64 = rng.gen_range(1..5000);
        let theta: f64 = rng.gen();
        let s = window_exp_sum(&ArithFn::ThueMorse, x as f64 - 1.0, len as f64, theta).unwrap();
        assert!(s.value.norm() <= tm_interval_bound(len, theta) + 1e-9);
    }
}

#[test]
fn sine_product_integral_matches_midpoint_rule() {
    for lambda in 0..=8u32 {
        let n = 1 << 18;
        let mid: f64 = (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) / n as f64;
                (0..lambda).map(|k| (2f64.powi(k as i32) * PI * t).sin().abs()).product::<f64>()
            })
            .sum::<f64>()
            / n as f64;
        let r = sine_product_integral(lambda).unwrap();
        assert!((r.integral_value - mid).abs() < 1e-6, "λ={lambda}: {} vs {mid}", r.integral_value);
        assert!(r.quadrature_error_estimate < 1e-8);
    }
    // I_1 = 2/π exactly
    assert!((sine_product_integral(1).unwrap().integral_value - 2.0 / PI).abs() < 1e-14);
    assert!(sine_product_integral(MAX_SINE_PRODUCT_LEVEL + 1).is_err());
}

#[test]
fn rho_ratios_settle_in_the_expected_bracket() {
    let report = rho_estimate(14).unwrap();
    let r = report.final_ratio().unwrap();
    assert!((0.655..0.67).contains(&r), "ratio {r}");
    assert!(report.rows[0].ratio.is_none());
    assert!(rho_estimate(0).is_err());
}

#[test]
fn fourier_coefficient_matches_defining_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (q, lambda) in [(2u32, 6u32), (3, 4), (5, 3), (10, 2)] {
        let p = (q as u64).pow(lambda);
        for _ in 0..20 {
            let h: i64 = rng.gen_range(-1000..1000);
            let alpha: f64 = rng.gen();
            let direct: Complex64 = (0..p)
                .map(|u| {
                    let ph = alpha * sq(u, q as u64) as f64 - ((h as f64 * u as f64) / p as f64);
                    cis(ph)
                })
                .sum::<Complex64>()
                / p as f64;
            let got = fourier_coefficient(q, lambda, h, alpha).unwrap();
            assert!((got - direct).norm() < 1e-11, "q={q} λ={lambda} h={h}");
        }
    }
}

#[test]
fn fourier_table_inverts_and_satisfies_parseval() {
    for (q, lambda, alpha) in [(2u32, 8u32, 0.37), (3, 5, 0.123), (5, 3, 0.5)] {
        let t = fourier_table(q, lambda, alpha, 1 << 30).unwrap();
        assert!((t.parseval_sum() - 1.0).abs() < 1e-10);
        assert!(t.bound_violations().is_empty());
        let p = t.period() as i64;
        for n in [-7i64, 0, 1, 5, p - 1, p, 3 * p + 2] {
            let r = n.rem_euclid(p) as u64;
            let want = cis(alpha * sq(r, q as u64) as f64);
            assert!((t.invert(n) - want).norm() < 1e-10, "n={n}");
            assert!((t.invert_conjugate(n) - want.conj()).norm() < 1e-10, "n={n}");
        }
    }
    assert!(fourier_table(2, 30, 0.1, 1 << 30).is_err());
    assert!(fourier_table(2, 20, 0.1, 1024).is_err());
}

#[test]
fn g_recurrence_matches_direct_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut fib = vec![0u64, 1];
    while fib.len() < 26 {
        let k = fib.len();
        fib.push(fib[k - 1] + fib[k - 2]);
    }
    for _ in 0..50 {
        let alpha: f64 = rng.gen();
        let theta: f64 = rng.gen();
        let table = zeckendorf_g_table(25, alpha, theta);
        let mut direct = Complex64::new(0.0, 0.0);
        let mut u = 0u64;
        for k in 0..=25 {
            while u < fib[k] {
                direct += cis(alpha * zeckendorf_digit_sum(u) as f64 + phase(u as i64, theta));
                u += 1;
            }
            assert!(close(table[k], direct, 1e-9), "k={k}: {} vs {direct}", table[k]);
        }
    }
}

#[test]
fn g_growth_respects_the_root_bound() {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    for alpha in [0.25, 1.0 / 3.0, 0.5] {
        let root = char_root_modulus(alpha);
        assert!(root.modulus <= root.bound + 1e-12);
        assert!(root.bound < golden);
        let g = zeckendorf_g(40, alpha, 0.0).value.norm();
        assert!(g.powf(1.0 / 40.0) < root.bound, "α={alpha}");
    }
    assert!((char_root_modulus(0.0).modulus - golden).abs() < 1e-12);
}

#[test]
fn zeckendorf_window_sum_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let x = rng.gen_range(0.0..1e6);
        let z = rng.gen_range(0.0..3000.0);
        let alpha: f64 = rng.gen();
        let theta: f64 = rng.gen();
        let got = zeckendorf_window_expsum(x, z, alpha, theta).unwrap();
        let phi = ArithFn::ZeckendorfPhase { alpha };
        let direct = window_exp_sum(&phi, x, z, theta).unwrap();
        assert_eq!(got.term_count, direct.term_count);
        assert!(close(got.value, direct.value, 1e-9));
    }
}

#[test]
fn joint_sum_matches_naive_and_checks_coprimality() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let x = rng.gen_range(0.0..1e6);
        let z = rng.gen_range(0.0..3000.0);
        let (a, b, t): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
        let got = joint_digit_expsum(x, z, 2, 3, a, b, t).unwrap();
        let lo = x.floor() as u64 + 1;
        let hi = (x + z).floor() as u64;
        let want: Complex64 = (lo..=hi)
            .map(|n| cis(a * sq(n, 2) as f64 + b * sq(n, 3) as f64 + phase(n as i64, t)))
            .sum();
        assert!(close(got.value, want, 1e-9));
    }
    assert!(joint_digit_expsum(0.0, 10.0, 4, 6, 0.1, 0.1, 0.1).is_err());
}

#[test]
fn van_der_corput_inequality_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let len = rng.gen_range(1..300);
        let a: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let r = rng.gen_range(1..50);
        let (lhs, rhs) = van_der_corput(&a, r).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-9, "len={len} R={r}: {lhs} > {rhs}");
    }
    assert!(van_der_corput(&[], 0).is_err());
}

#[test]
fn independence_exponents_are_below_one() {
    let ex = independence_exponents(2, 0.25).unwrap();
    assert!(ex.integral_exponent < 1.0 && ex.sup_exponent < 1.0);
    assert!((ex.integral_exponent - 8.0 / 9.0).abs() < 1e-15);
    assert!(ex.eta > 0.0);
}

#[test]
fn sums_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let a = window_exp_sum(&ArithFn::ThueMorse, 12345.0, 300_000.0, 0.318).unwrap();
                let b = sine_product_integral(16).unwrap();
                let c = fourier_table(3, 7, 0.2, 1 << 30).unwrap();
                (a, b, c)
            })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn digit_phase_uses_the_library_digit_sum() {
    let base = DigitBase::new(7).unwrap();
    for m in 0..1000u64 {
        let v = ArithFn::DigitPhase { q: 7, alpha: 0.1 }.eval(m as i64);
        assert!((v - cis(0.1 * digit_sum(m, base) as f64)).norm() < 1e-14);
    }
    assert_eq!(ArithFn::ThueMorse.eval(-3), 0.0.into());
    assert!(ArithFn::from_name("mobius").is_err());
}

proptest! {
    #[test]
    fn fourier_bound_dominates_coefficients(h in -5000i64..5000, alpha in 0.0f64..1.0, lambda in 1u32..8) {
        let c = fourier_coefficient(3, lambda, h, alpha).unwrap();
        prop_assert!(c.norm() <= fourier_bound(3, lambda, alpha) + 1e-12);
    }

    #[test]
    fn coefficient_is_periodic_in_h(h in -5000i64..5000, alpha in 0.0f64..1.0) {
        let a = fourier_coefficient(2, 6, h, alpha).unwrap();
        let b = fourier_coefficient(2, 6, h + 64, alpha).unwrap();
        prop_assert!((a - b).norm() < 1e-12);
    }
}
