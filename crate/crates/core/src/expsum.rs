//! Exponential-sum kernels: windowed sums of arithmetic functions, the
//! Thue-Morse product formula and its sine-product integral, digit Fourier
//! coefficients, joint two-base sums and the Zeckendorf block sums `G_k`.

use crate::digits::{
    digit_sum, fib_u64, thue_morse_sign, truncated_digit_sum, zeckendorf_decompose,
    zeckendorf_digit_sum, DigitBase, TruncatedDigitSpec, MAX_FIB_INDEX_U64,
};
use crate::error::{Error, Result};
use crate::numeric::{
    e, e_reduced, frac, mul_phase, ordered_chunks, tree_reduce, CompensatedSum, ComplexSum,
};
use crate::quadrature::GaussLegendre;
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A complex arithmetic function bounded by 1. All variants vanish on
/// negative integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ArithFn {
    Zero,
    One,
    /// `(−1)^{s_2(m)}`.
    ThueMorse,
    /// `e(α·s_q(m))`.
    DigitPhase { q: u32, alpha: f64 },
    /// `e(α·s_Z(m))`.
    ZeckendorfPhase { alpha: f64 },
}

impl ArithFn {
    #[inline]
    pub fn eval(&self, m: i64) -> Complex64 {
        if m < 0 {
            return Complex64::new(0.0, 0.0);
        }
        let m = m as u64;
        match *self {
            ArithFn::Zero => Complex64::new(0.0, 0.0),
            ArithFn::One => Complex64::new(1.0, 0.0),
            ArithFn::ThueMorse => Complex64::new(thue_morse_sign(m) as f64, 0.0),
            ArithFn::DigitPhase { q, alpha } => {
                e(mul_phase(digit_sum(m, DigitBase::new(q).expect("base ≥ 2")) as i64, alpha))
            }
            ArithFn::ZeckendorfPhase { alpha } => {
                e(mul_phase(zeckendorf_digit_sum(m) as i64, alpha))
            }
        }
    }

    /// Parses the command-line names `zero`, `one`, `thue-morse`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "zero" => Ok(ArithFn::Zero),
            "one" => Ok(ArithFn::One),
            "thue-morse" => Ok(ArithFn::ThueMorse),
            other => Err(Error::invalid(format!(
                "unknown arithmetic function {other:?} (expected zero, one or thue-morse)"
            ))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ArithFn::Zero => "zero".into(),
            ArithFn::One => "one".into(),
            ArithFn::ThueMorse => "thue-morse".into(),
            ArithFn::DigitPhase { q, alpha } => format!("digit-phase(q={q},alpha={alpha})"),
            ArithFn::ZeckendorfPhase { alpha } => format!("zeckendorf-phase(alpha={alpha})"),
        }
    }
}

/// A compensated exponential sum together with its term count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSumResult {
    pub value: Complex64,
    pub term_count: u64,
    pub summation_error_bound: f64,
}

impl WindowSumResult {
    fn from_sum(s: &ComplexSum) -> Self {
        Self {
            value: s.value(),
            term_count: s.count(),
            summation_error_bound: s.error_bound(),
        }
    }
}

/// Integer range `[⌊x⌋ + 1, ⌊x + z⌋ + 1)` of the window `x < m ≤ x + z`.
pub(crate) fn window_range(x: f64, z: f64) -> Result<(i64, i64)> {
    if !(z >= 0.0) || !x.is_finite() || !z.is_finite() {
        return Err(Error::invalid(format!("window needs finite x and z ≥ 0, got ({x}, {z})")));
    }
    Ok((x.floor() as i64 + 1, (x + z).floor() as i64 + 1))
}

/// Sums `g(m)` for integers `m` in `[lo, hi)` in fixed chunks.
fn chunked_sum<G: Fn(i64) -> Complex64 + Sync>(lo: i64, hi: i64, g: G) -> ComplexSum {
    let parts = ordered_chunks(lo, hi, |a, b| {
        let mut s = ComplexSum::new();
        for m in a..b {
            s.add(g(m));
        }
        s
    });
    tree_reduce(&parts)
}

/// `Σ_{x<m≤x+z} φ(m) e(mθ)`.
pub fn window_exp_sum(phi: &ArithFn, x: f64, z: f64, theta: f64) -> Result<WindowSumResult> {
    let (lo, hi) = window_range(x, z)?;
    let s = chunked_sum(lo, hi, |m| phi.eval(m) * e_reduced(mul_phase(m, theta)));
    Ok(WindowSumResult::from_sum(&s))
}

/// `Σ_{u<2^λ} (−1)^{s_2(u)} e(uθ) = ∏_{k<λ} (1 − e(2^k θ))`.
fn tm_block_product(lambda: u32, theta: f64) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    let mut phase = frac(theta);
    for _ in 0..lambda {
        p *= Complex64::new(1.0, 0.0) - e_reduced(phase);
        phase = frac(2.0 * phase);
    }
    p
}

/// Thue-Morse sum over the dyadic block `[ℓ2^λ, (ℓ+1)2^λ)` by the product
/// formula, with the block's sign `(−1)^{s_2(ℓ)}` and phase `e(ℓ2^λθ)`.
pub fn tm_dyadic_expsum(ell: u64, lambda: u32, theta: f64) -> Complex64 {
    assert!(lambda < 63, "block length 2^{lambda} out of range");
    let start = ell.checked_shl(lambda).expect("block start overflows");
    let sign = thue_morse_sign(ell) as f64;
    tm_block_product(lambda, theta) * e_reduced(mul_phase(start as i64, theta)) * sign
}

/// `2^λ ∏_{k<λ} |sin(2^k π θ)|`.
pub fn sine_product_magnitude(lambda: u32, theta: f64) -> f64 {
    let mut p = 1.0;
    let mut phase = frac(theta);
    for _ in 0..lambda {
        p *= 2.0 * (PI * phase).sin().abs();
        phase = frac(2.0 * phase);
    }
    p
}

/// Upper bound `2 Σ_{λ ≤ log₂|L|} 2^λ ∏_{k<λ} |sin(2^k π θ)|` for a Thue-Morse
/// sum over any interval of length `|L|`, from the dyadic decomposition.
pub fn tm_interval_bound(len: u64, theta: f64) -> f64 {
    if len == 0 {
        return 0.0;
    }
    let top = 63 - len.leading_zeros();
    2.0 * (0..=top).map(|l| sine_product_magnitude(l, theta)).sum::<f64>()
}

/// Largest level accepted by [`sine_product_integral`].
pub const MAX_SINE_PRODUCT_LEVEL: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineProductResult {
    pub lambda: u32,
    /// `I_λ = ∫₀¹ ∏_{k<λ} |sin(2^k π θ)| dθ`.
    pub integral_value: f64,
    /// `|I16 − I8|` accumulated over subintervals.
    pub quadrature_error_estimate: f64,
}

/// `I_λ` by Gauss–Legendre quadrature on the `2^λ` subintervals where
/// every factor keeps its sign; only `[0, 1/2]` is evaluated since the
/// integrand is symmetric under `θ ↦ 1 − θ`.
pub fn sine_product_integral(lambda: u32) -> Result<SineProductResult> {
    if lambda > MAX_SINE_PRODUCT_LEVEL {
        return Err(Error::ResourceGuard {
            what: "sine-product level",
            requested: lambda as u128,
            limit: MAX_SINE_PRODUCT_LEVEL as u128,
        });
    }
    if lambda == 0 {
        return Ok(SineProductResult {
            lambda,
            integral_value: 1.0,
            quadrature_error_estimate: 0.0,
        });
    }
    let (r8, r16) = GaussLegendre::pair_8_16();
    let pieces = 1i64 << (lambda - 1);
    let width = 1.0 / (1u64 << lambda) as f64;
    let integrand = |theta: f64| -> f64 {
        let mut p = 1.0;
        let mut phase = theta;
        for _ in 0..lambda {
            p *= (PI * phase).sin().abs();
            phase = frac(2.0 * phase);
        }
        p
    };
    let parts = ordered_chunks(0, pieces, |a, b| {
        let mut hi_order = CompensatedSum::new();
        let mut diff = CompensatedSum::new();
        for j in a..b {
            let lo = j as f64 * width;
            let v16 = r16.integrate(lo, lo + width, integrand);
            let v8 = r8.integrate(lo, lo + width, integrand);
            hi_order.add(v16);
            diff.add((v16 - v8).abs());
        }
        (hi_order, diff)
    });
    let mut total = CompensatedSum::new();
    let mut err = CompensatedSum::new();
    for (t, d) in &parts {
        total.merge(t);
        err.merge(d);
    }
    Ok(SineProductResult {
        lambda,
        integral_value: 2.0 * total.value(),
        quadrature_error_estimate: 2.0 * err.value() + 2.0 * total.error_bound(),
    })
}

/// One row of the `ρ` estimation table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoRow {
    pub lambda: u32,
    pub integral: f64,
    /// `I_λ / I_{λ−1}`, absent for `λ = 0`.
    pub ratio: Option<f64>,
    /// `I_λ^{1/λ}`, absent for `λ = 0`.
    pub geo_mean: Option<f64>,
    pub quadrature_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoReport {
    pub rows: Vec<RhoRow>,
}

impl RhoReport {
    pub fn final_ratio(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.ratio)
    }

    pub fn final_geo_mean(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.geo_mean)
    }

    /// `1 + log₂ ρ̂` for the final ratio, the exponent of the interval sum.
    pub fn exponent(&self) -> Option<f64> {
        self.final_ratio().map(|r| 1.0 + r.log2())
    }
}

/// Ratios `I_λ/I_{λ−1}` and geometric means `I_λ^{1/λ}` for `λ ≤ λ_max`.
pub fn rho_estimate(lambda_max: u32) -> Result<RhoReport> {
    if lambda_max == 0 {
        return Err(Error::invalid("rho estimation needs lambda_max ≥ 1"));
    }
    let mut rows = Vec::with_capacity(lambda_max as usize + 1);
    let mut prev: Option<f64> = None;
    for lambda in 0..=lambda_max {
        let r = sine_product_integral(lambda)?;
        let v = r.integral_value;
        rows.push(RhoRow {
            lambda,
            integral: v,
            ratio: prev.map(|p| v / p),
            geo_mean: (lambda > 0).then(|| v.powf(1.0 / lambda as f64)),
            quadrature_err: r.quadrature_error_estimate,
        });
        prev = Some(v);
    }
    Ok(RhoReport { rows })
}

/// `c_q = π²/(12 log q) · (1 − 2/(q+1))`.
pub fn fourier_decay_constant(q: u32) -> f64 {
    let qf = q as f64;
    PI * PI / (12.0 * qf.ln()) * (1.0 - 2.0 / (qf + 1.0))
}

/// `e^{π²/48} q^{−c_q ‖(q−1)α‖² λ}`, uniform in `h`.
pub fn fourier_bound(q: u32, lambda: u32, alpha: f64) -> f64 {
    let dist = crate::numeric::dist_to_int((q as f64 - 1.0) * alpha);
    (PI * PI / 48.0).exp()
        * (q as f64).powf(-fourier_decay_constant(q) * dist * dist * lambda as f64)
}

/// `F_{q,λ}(h, α) = q^{−λ} Σ_{u<q^λ} e(α s_{q,λ}(u) − h u q^{−λ})`, by the
/// per-digit factorization `∏_{j<λ} q^{−1} Σ_{d<q} e(αd − h d q^{j−λ})`.
pub fn fourier_coefficient(q: u32, lambda: u32, h: i64, alpha: f64) -> Result<Complex64> {
    DigitBase::new(q)?;
    let qq = q as u64;
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 0..lambda {
        // h·d·q^j / q^λ = h·d / q^{λ−j}
        let span = lambda - j;
        let modulus = qq.checked_pow(span).filter(|&m| m <= 1 << 62);
        let mut s = ComplexSum::new();
        for d in 0..qq {
            let digit = match modulus {
                Some(qm) => crate::numeric::rational_phase(h as i128, d as i128, qm),
                None => frac(h as f64 * d as f64 / (qq as f64).powi(span as i32)),
            };
            s.add(e(mul_phase(d as i64, alpha) - digit));
        }
        prod *= s.value() / qq as f64;
    }
    Ok(prod)
}

/// Upper limit on `q^λ` for a full coefficient table.
pub const MAX_FOURIER_TABLE: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierTable {
    pub q: u32,
    pub lambda: u32,
    pub alpha: f64,
    /// `F_{q,λ}(h, α)` for `0 ≤ h < q^λ`.
    pub coefficients: Vec<Complex64>,
}

impl FourierTable {
    pub fn period(&self) -> u64 {
        self.coefficients.len() as u64
    }

    /// `Σ_h |F(h)|²`, which is 1 by unitarity.
    pub fn parseval_sum(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn bound(&self) -> f64 {
        fourier_bound(self.q, self.lambda, self.alpha)
    }

    /// Indices `h` with `|F(h)|` above the uniform bound.
    pub fn bound_violations(&self) -> Vec<u64> {
        let b = self.bound();
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > b)
            .map(|(h, _)| h as u64)
            .collect()
    }

    /// `Σ_h e(hn/q^λ) F(h)`, which reproduces `e(α s_{q,λ}(n))`.
    pub fn invert(&self, n: i64) -> Complex64 {
        let p = self.period();
        let mut s = ComplexSum::new();
        for (h, c) in self.coefficients.iter().enumerate() {
            s.add(e(crate::numeric::rational_phase(h as i128, n as i128, p)) * c);
        }
        s.value()
    }

    /// `Σ_h e(hn/q^λ) conj(F(−h))`, which reproduces `e(−α s_{q,λ}(n))`.
    pub fn invert_conjugate(&self, n: i64) -> Complex64 {
        let p = self.period();
        let mut s = ComplexSum::new();
        for h in 0..p {
            let neg = ((p - h) % p) as usize;
            s.add(
                e(crate::numeric::rational_phase(h as i128, n as i128, p))
                    * self.coefficients[neg].conj(),
            );
        }
        s.value()
    }
}

pub fn fourier_table(q: u32, lambda: u32, alpha: f64, memory_limit: u64) -> Result<FourierTable> {
    DigitBase::new(q)?;
    let period = (q as u64)
        .checked_pow(lambda)
        .filter(|&p| p <= MAX_FOURIER_TABLE)
        .ok_or(Error::ResourceGuard {
            what: "Fourier table length q^λ",
            requested: (q as u128).saturating_pow(lambda),
            limit: MAX_FOURIER_TABLE as u128,
        })?;
    let bytes = period.saturating_mul(std::mem::size_of::<Complex64>() as u64);
    if bytes > memory_limit {
        return Err(Error::ResourceGuard {
            what: "Fourier table bytes",
            requested: bytes as u128,
            limit: memory_limit as u128,
        });
    }
    use rayon::prelude::*;
    let coefficients = (0..period as i64)
        .into_par_iter()
        .map(|h| fourier_coefficient(q, lambda, h, alpha).expect("base validated"))
        .collect();
    Ok(FourierTable {
        q,
        lambda,
        alpha,
        coefficients,
    })
}

/// `e(α s_{q,λ}(n))`, the function the table represents.
pub fn truncated_digit_phase(n: i64, spec: &TruncatedDigitSpec, alpha: f64) -> Complex64 {
    e(mul_phase(truncated_digit_sum(n, spec) as i64, alpha))
}

/// `Σ_{x<n≤x+z} e(α s_{q1}(n) + β s_{q2}(n) + nθ)` by direct summation.
#[allow(clippy::too_many_arguments)]
pub fn joint_digit_expsum(
    x: f64,
    z: f64,
    q1: u32,
    q2: u32,
    alpha: f64,
    beta: f64,
    theta: f64,
) -> Result<WindowSumResult> {
    let b1 = DigitBase::new(q1)?;
    let b2 = DigitBase::new(q2)?;
    if q1.gcd(&q2) != 1 {
        return Err(Error::Hypothesis {
            name: "gcd(q1, q2) = 1",
            detail: format!("gcd({q1}, {q2}) = {}", q1.gcd(&q2)),
        });
    }
    let (lo, hi) = window_range(x, z)?;
    if lo < 0 {
        return Err(Error::invalid("joint digit sums need a window in the nonnegative integers"));
    }
    let s = chunked_sum(lo, hi, |n| {
        let u = n as u64;
        let ph = frac(
            mul_phase(digit_sum(u, b1) as i64, alpha)
                + mul_phase(digit_sum(u, b2) as i64, beta)
                + mul_phase(n, theta),
        );
        e_reduced(ph)
    });
    Ok(WindowSumResult::from_sum(&s))
}

/// Exponents (as powers of `z`) of the error terms in the two-base
/// van der Corput/Fourier estimate, for the parameter choices of the two
/// parts of the argument. Pure exponent arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceExponents {
    /// `q1^{λ1}q2^{λ2}`, `z^{1/2}R^{1/2}`, `zR^{1/2}q^{−λ/2}`, `zR^{−1/2}` with
    /// `λ_i = 4 log z/(9 log q_i)`, `R = z^{2/9}`.
    pub integral_terms: [f64; 4],
    pub integral_exponent: f64,
    /// `c = c_{q1}‖(q1−1)α‖²`.
    pub decay: f64,
    /// Same four terms (last one `z q1^{λ1(1/2−c)} R^{−1/2}`) with
    /// `λ_i = 2 log z/((4+c) log q_i)`, `R = z^{(2−2c)/(4+c)}`.
    pub sup_terms: [f64; 4],
    pub sup_exponent: f64,
    /// `η(α) = ‖(q1−1)α‖²/(15 log q1)`.
    pub eta: f64,
}

pub fn independence_exponents(q1: u32, alpha: f64) -> Result<IndependenceExponents> {
    DigitBase::new(q1)?;
    // q_i^{λ_i} = z^{4/9} for both bases
    let k = 4.0 / 9.0;
    let r = 2.0 / 9.0;
    let integral_terms = [2.0 * k, 0.5 + 0.5 * r, 1.0 + 0.5 * r - 0.5 * k, 1.0 - 0.5 * r];
    let dist = crate::numeric::dist_to_int((q1 as f64 - 1.0) * alpha);
    let c = fourier_decay_constant(q1) * dist * dist;
    let k2 = 2.0 / (4.0 + c);
    let r2 = (2.0 - 2.0 * c) / (4.0 + c);
    let sup_terms = [
        2.0 * k2,
        0.5 + 0.5 * r2,
        1.0 + 0.5 * r2 - 0.5 * k2,
        1.0 + k2 * (0.5 - c) - 0.5 * r2,
    ];
    let max = |t: &[f64; 4]| t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(IndependenceExponents {
        integral_terms,
        integral_exponent: max(&integral_terms),
        decay: c,
        sup_terms,
        sup_exponent: max(&sup_terms),
        eta: dist * dist / (15.0 * (q1 as f64).ln()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GFibValue {
    pub k: u32,
    pub alpha: f64,
    pub theta: f64,
    /// `G_k(α, θ) = Σ_{u<F_k} e(α s_Z(u) + θu)`.
    pub value: Complex64,
}

/// `G_0 ..= G_{k_max}` by `G_{k+1} = G_k + e(α + θF_k) G_{k−1}`,
/// `G_0 = 0`, `G_1 = 1`.
pub fn zeckendorf_g_table(k_max: u32, alpha: f64, theta: f64) -> Vec<Complex64> {
    assert!(k_max as usize <= MAX_FIB_INDEX_U64, "G_k needs F_k < 2^64");
    let mut g = Vec::with_capacity(k_max as usize + 1);
    g.push(Complex64::new(0.0, 0.0));
    if k_max >= 1 {
        g.push(Complex64::new(1.0, 0.0));
    }
    // {θF_k}: exact product while F_k fits in an i64, then the recurrence
    let mut phase: Vec<f64> = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max as usize {
        let fk = fib_u64(k as u32);
        let ph = if fk <= i64::MAX as u64 {
            mul_phase(fk as i64, theta)
        } else {
            frac(phase[k - 1] + phase[k - 2])
        };
        phase.push(ph);
    }
    for k in 1..k_max as usize {
        let next = g[k] + e(alpha + phase[k]) * g[k - 1];
        g.push(next);
    }
    g
}

pub fn zeckendorf_g(k: u32, alpha: f64, theta: f64) -> GFibValue {
    let table = zeckendorf_g_table(k, alpha, theta);
    GFibValue {
        k,
        alpha,
        theta,
        value: table[k as usize],
    }
}

/// Moduli of the roots `½ ± ½√(1 + 4e(α))` of the `G_k(α, 0)` recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharRoot {
    pub alpha: f64,
    pub modulus: f64,
    /// `½ + ½(17 + 8 cos 2πα)^{1/4}`.
    pub bound: f64,
}

pub fn char_root_modulus(alpha: f64) -> CharRoot {
    let disc = (Complex64::new(1.0, 0.0) + e(alpha) * 4.0).sqrt();
    let half = Complex64::new(0.5, 0.0);
    let r1 = half + disc * 0.5;
    let r2 = half - disc * 0.5;
    let bound = 0.5 + 0.5 * (17.0 + 8.0 * (2.0 * PI * alpha).cos()).powf(0.25);
    CharRoot {
        alpha,
        modulus: r1.norm().max(r2.norm()),
        bound,
    }
}

/// `Σ_{x<n≤x+z} e(α s_Z(n) + nθ)` through the Zeckendorf interval
/// decomposition: a block `[A, A + F_j)` contributes `e(α s_Z(A) + θA) G_j`.
pub fn zeckendorf_window_expsum(x: f64, z: f64, alpha: f64, theta: f64) -> Result<WindowSumResult> {
    let (lo, hi) = window_range(x, z)?;
    if lo < 0 {
        return Err(Error::invalid("Zeckendorf sums need a window in the nonnegative integers"));
    }
    let segments = zeckendorf_decompose(lo as u64, hi as u64)?;
    let top = segments.iter().map(|s| s.scale).max().unwrap_or(1);
    let g = zeckendorf_g_table(top.max(1), alpha, theta);
    let mut s = ComplexSum::new();
    for seg in &segments {
        let lead = e(mul_phase(zeckendorf_digit_sum(seg.offset) as i64, alpha)
            + mul_phase(seg.offset as i64, theta));
        s.add(lead * g[seg.scale as usize]);
    }
    Ok(WindowSumResult {
        value: s.value(),
        term_count: (hi - lo) as u64,
        summation_error_bound: s.error_bound(),
    })
}

/// Both sides of van der Corput's inequality
/// `|Σ a_n|² ≤ ((|I|−1+R)/R) Σ_{|r|<R} (1−|r|/R) Σ_{n,n+r∈I} a_{n+r} conj(a_n)`.
pub fn van_der_corput(a: &[Complex64], r_cutoff: usize) -> Result<(f64, f64)> {
    if r_cutoff == 0 {
        return Err(Error::invalid("van der Corput needs R ≥ 1"));
    }
    let len = a.len();
    let mut total = ComplexSum::new();
    for v in a {
        total.add(*v);
    }
    let lhs = total.value().norm_sqr();
    let rf = r_cutoff as f64;
    let mut inner = ComplexSum::new();
    for r in -(r_cutoff as i64 - 1)..=(r_cutoff as i64 - 1) {
        let w = 1.0 - r.unsigned_abs() as f64 / rf;
        for n in 0..len as i64 {
            let m = n + r;
            if m >= 0 && (m as usize) < len {
                inner.add(a[m as usize] * a[n as usize].conj() * w);
            }
        }
    }
    let rhs = (len as f64 - 1.0 + rf) / rf * inner.value().re;
    Ok((lhs, rhs))
}

/// `∫₀¹ |Σ_m x_m e(mθ)| dθ` for coefficients at consecutive frequencies,
/// by composite Gauss–Legendre quadrature; returns the integral, its
/// quadrature error estimate and `max |x_m|`.
pub fn l1_norm_with_max(coeffs: &[Complex64], panels: usize) -> (f64, f64, f64) {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let poly = |theta: f64| -> f64 {
        let step = e(theta);
        let mut w = Complex64::new(1.0, 0.0);
        let mut s = Complex64::new(0.0, 0.0);
        for c in coeffs {
            s += c * w;
            w *= step;
        }
        s.norm()
    };
    let (value, err) = crate::quadrature::composite(0.0, 1.0, panels.max(1), poly);
    (value, err, max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn window_sum_examples() {
        let r = window_exp_sum(&ArithFn::One, 0.0, 3.0, 0.0).unwrap();
        assert_eq!(r.value, Complex64::new(3.0, 0.0));
        assert_eq!(r.term_count, 3);
        // full period of e(m/7) cancels
        let r = window_exp_sum(&ArithFn::One, 0.0, 7.0, 3.0 / 7.0).unwrap();
        assert!(r.value.norm() < 1e-14);
        assert!(window_exp_sum(&ArithFn::One, 0.0, -1.0, 0.0).is_err());
        let r = window_exp_sum(&ArithFn::Zero, 10.0, 100.0, 0.3).unwrap();
        assert_eq!(r.value.norm(), 0.0);
    }

    #[test]
    fn tm_block_examples() {
        assert!((tm_dyadic_expsum(5, 0, 0.37).norm() - 1.0).abs() < 1e-15);
        for l in 1..10 {
            assert!(tm_dyadic_expsum(3, l, 0.0).norm() < 1e-15);
        }
        assert!((tm_dyadic_expsum(0, 1, 0.5).norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn tm_block_matches_direct_sum_as_complex_value() {
        for (ell, lambda, theta) in [(0u64, 5u32, 0.1234), (7, 6, 0.77), (1234, 8, 0.31415)] {
            let start = ell << lambda;
            let direct = window_exp_sum(
                &ArithFn::ThueMorse,
                start as f64 - 1.0,
                (1u64 << lambda) as f64,
                theta,
            )
            .unwrap()
            .value;
            let prod = tm_dyadic_expsum(ell, lambda, theta);
            assert!(close(direct, prod, 1e-10), "{direct} vs {prod}");
        }
    }

    #[test]
    fn sine_product_small_levels() {
        assert_eq!(sine_product_integral(0).unwrap().integral_value, 1.0);
        let i1 = sine_product_integral(1).unwrap();
        assert!((i1.integral_value - 2.0 / PI).abs() < 1e-14);
        // ∫|sin πθ sin 2πθ| = 2∫₀^{1/2} 2 sin² πθ cos πθ = 4/(3π)
        let i2 = sine_product_integral(2).unwrap();
        assert!((i2.integral_value - 4.0 / (3.0 * PI)).abs() < 1e-14);
        assert!(sine_product_integral(25).is_err());
    }

    #[test]
    fn rho_single_ratio() {
        let r = rho_estimate(1).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!((r.final_ratio().unwrap() - 2.0 / PI).abs() < 1e-14);
        assert!(r.rows[0].ratio.is_none());
    }

    #[test]
    fn fourier_coefficient_examples() {
        assert!(close(fourier_coefficient(5, 0, 0, 0.3).unwrap(), Complex64::new(1.0, 0.0), 0.0));
        assert!(fourier_coefficient(2, 1, 1, 0.0).unwrap().norm() < 1e-15);
        assert!(fourier_coefficient(2, 1, 0, 0.5).unwrap().norm() < 1e-15);
        assert!(fourier_coefficient(1, 1, 0, 0.5).is_err());
    }

    #[test]
    fn fourier_table_guard() {
        assert!(fourier_table(2, 23, 0.1, u64::MAX).is_err());
        assert!(matches!(
            fourier_table(2, 10, 0.1, 100),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn joint_examples() {
        let r = joint_digit_expsum(0.5, 10.2, 2, 3, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(r.value, Complex64::new(10.0, 0.0));
        // α = 1/2 on base 2 is the Thue-Morse sign; dyadic blocks cancel
        for k in 1..12 {
            let r = joint_digit_expsum(-1.0, (1u64 << k) as f64, 2, 3, 0.5, 0.0, 0.0).unwrap();
            assert!(r.value.norm() < 1e-9);
        }
        assert!(matches!(
            joint_digit_expsum(0.0, 10.0, 4, 6, 0.1, 0.1, 0.0),
            Err(Error::Hypothesis { .. })
        ));
    }

    #[test]
    fn independence_exponent_arithmetic() {
        let ex = independence_exponents(2, 1.0 / 3.0).unwrap();
        assert!((ex.integral_exponent - 8.0 / 9.0).abs() < 1e-15);
        assert!((ex.sup_exponent - (1.0 - ex.decay / (4.0 + ex.decay))).abs() < 1e-14);
        assert!(ex.eta <= ex.decay / (4.0 + ex.decay));
    }

    #[test]
    fn g_examples() {
        assert_eq!(zeckendorf_g(2, 0.3, 0.7).value, Complex64::new(1.0, 0.0));
        let g3 = zeckendorf_g(3, 0.3, 0.0).value;
        assert!(close(g3, Complex64::new(1.0, 0.0) + e(0.3), 1e-15));
        for k in 0..60u32 {
            assert_eq!(zeckendorf_g(k, 0.0, 0.0).value.re, fib_u64(k) as f64);
        }
    }

    #[test]
    fn char_root_examples() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let r = char_root_modulus(0.0);
        assert!((r.modulus - phi).abs() < 1e-15);
        assert!((r.bound - phi).abs() < 1e-15);
        let r = char_root_modulus(0.5);
        assert!((r.modulus - 1.0).abs() < 1e-15);
        assert!((r.bound - (0.5 + 0.5 * 3f64.sqrt())).abs() < 1e-15);
        for i in 1..1000 {
            let r = char_root_modulus(i as f64 / 1000.0);
            assert!(r.modulus <= r.bound + 1e-15);
            assert!(r.bound < phi);
        }
    }

    #[test]
    fn zeckendorf_window_examples() {
        let r = zeckendorf_window_expsum(3.5, 17.0, 0.0, 0.0).unwrap();
        assert!(close(r.value, Complex64::new(17.0, 0.0), 1e-12));
        for k in [5u32, 12, 20] {
            let r = zeckendorf_window_expsum(-1.0, fib_u64(k) as f64, 0.3, 0.11).unwrap();
            assert!(close(r.value, zeckendorf_g(k, 0.3, 0.11).value, 1e-9));
        }
    }

    #[test]
    fn van_der_corput_trivial_cases() {
        let ones = vec![Complex64::new(1.0, 0.0); 10];
        let (lhs, rhs) = van_der_corput(&ones, 1).unwrap();
        // R = 1 is Cauchy–Schwarz: |Σa|² ≤ |I| Σ|a|²
        assert_eq!(lhs, 100.0);
        assert_eq!(rhs, 100.0);
        assert!(van_der_corput(&ones, 0).is_err());
    }
}
