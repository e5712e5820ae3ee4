//! End-to-end experiments. Each returns a plain report record; nothing
//! here performs I/O.

use crate::digits::{digit_sum, thue_morse_sign, zeckendorf_digit_sum, DigitBase};
use crate::error::{Error, Result};
use crate::expsum::{fourier_table, ArithFn, MAX_FOURIER_TABLE};
use crate::harmonic::{erdos_turan_audit, fejer_majorant, vaaler_build, ErdosTuranReport};
use crate::numeric::{
    e_reduced, frac, mul_phase, ordered_chunks, tree_reduce, CompensatedSum, ComplexSum,
};
use crate::sequence::{
    beatty_floor, check_admissible, count_floor_mismatches, parse_decimal, ps_floor, BeattyLine,
    GrowthFunction, MismatchReport, PSSpec,
};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Exact rational used for exponent arithmetic.
pub type Rational = Ratio<i128>;

/// Default cap on table allocations, overridden by `DIGITSEQ_MAX_MEMORY`.
pub const DEFAULT_MAX_MEMORY: u64 = 1 << 30;

/// Cap on the number of terms any single direct evaluation may touch.
pub const MAX_DIRECT_TERMS: u64 = 1 << 36;

/// Largest `N` accepted by sequence scans.
pub const MAX_SCAN_LENGTH: u64 = 1 << 40;

/// Byte limit for table allocations: `DIGITSEQ_MAX_MEMORY` if set.
pub fn memory_limit() -> Result<u64> {
    match std::env::var("DIGITSEQ_MAX_MEMORY") {
        Ok(v) => v.trim().parse::<u64>().map_err(|_| {
            Error::invalid(format!("DIGITSEQ_MAX_MEMORY must be a byte count, got {v:?}"))
        }),
        Err(_) => Ok(DEFAULT_MAX_MEMORY),
    }
}

fn guard_terms(what: &'static str, terms: f64) -> Result<()> {
    if !(terms <= MAX_DIRECT_TERMS as f64) {
        return Err(Error::ResourceGuard {
            what,
            requested: if terms.is_finite() { terms as u128 } else { u128::MAX },
            limit: MAX_DIRECT_TERMS as u128,
        });
    }
    Ok(())
}

fn guard_bytes(what: &'static str, bytes: u64) -> Result<()> {
    let limit = memory_limit()?;
    if bytes > limit {
        return Err(Error::ResourceGuard {
            what,
            requested: bytes as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

/// Refuses scans whose values `⌊n^c⌋` would not fit in a u64.
fn guard_scan(x: u64, spec: &PSSpec) -> Result<()> {
    if x > MAX_SCAN_LENGTH {
        return Err(Error::ResourceGuard {
            what: "sequence scan length",
            requested: x as u128,
            limit: MAX_SCAN_LENGTH as u128,
        });
    }
    if (x as f64).powf(spec.exponent()) >= 9.0e18 {
        return Err(Error::invalid(format!("⌊n^c⌋ overflows 64 bits below n = {x} for c = {spec}")));
    }
    Ok(())
}

fn reject_integer_exponent(spec: &PSSpec) -> Result<()> {
    if spec.is_integer() {
        return Err(Error::invalid(format!("integer exponent c = {spec} is excluded")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    #[serde(rename = "A")]
    pub a: u64,
    /// `|S1 − S2| / A`.
    pub lhs_per_a: f64,
    /// `Σ_{A<n≤2A} φ(⌊f(n)⌋)`.
    pub sum1: Complex64,
    /// `Σ_{f(A)<m≤f(2A)} φ(m)(f⁻¹)′(m)`.
    pub sum2: Complex64,
    /// Wall-clock time; the only field that differs between runs.
    pub runtime_ms: f64,
}

impl DeviationReport {
    pub fn without_timing(mut self) -> Self {
        self.runtime_ms = 0.0;
        self
    }
}

/// Substitution-rule deviation at scale `A`, both sums evaluated directly.
pub fn substitution_deviation(phi: &ArithFn, f: &GrowthFunction, a: u64) -> Result<DeviationReport> {
    let start = Instant::now();
    if a < 2 {
        return Err(Error::invalid(format!("deviation needs A ≥ 2, got {a}")));
    }
    let adm = check_admissible(f, a as f64, 2.0 * a as f64, 32)?;
    if !adm.passed {
        return Err(Error::NotAdmissible(adm.violations.join("; ")));
    }
    let top = f.eval(2.0 * a as f64);
    guard_terms("terms up to f(2A)", top)?;
    if top >= 9.0e18 {
        return Err(Error::invalid("f(2A) exceeds 64-bit range"));
    }

    let s1 = tree_reduce(&ordered_chunks(a as i64 + 1, 2 * a as i64 + 1, |lo, hi| {
        let mut s = ComplexSum::new();
        for n in lo..hi {
            s.add(phi.eval(f.floor_at(n as u64) as i64));
        }
        s
    }));
    let m_lo = f.floor_at(a) as i64 + 1;
    let m_hi = f.floor_at(2 * a) as i64 + 1;
    let s2 = tree_reduce(&ordered_chunks(m_lo, m_hi, |lo, hi| {
        let mut s = ComplexSum::new();
        for m in lo..hi {
            let v = phi.eval(m);
            if v != Complex64::new(0.0, 0.0) {
                s.add(v * f.inverse_derivative(m as f64));
            }
        }
        s
    }));
    let (sum1, sum2) = (s1.value(), s2.value());
    Ok(DeviationReport {
        a,
        lhs_per_a: (sum1 - sum2).norm() / a as f64,
        sum1,
        sum2,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// A sampled sup-integral. `value` is a lower estimate of the true
/// quantity; `refinement_delta` is `|value(2T, 2X) − value(T, X)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    /// Outer grid size (θ for J, α for I).
    pub outer_grid_size: u64,
    pub sup_sample_count: u64,
    pub refinement_delta: f64,
}

/// Sample points in `(lo, hi]`: midpoints of `n` equal strata plus points
/// next to both ends.
fn sup_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let width = hi - lo;
    let mut pts: Vec<f64> = (0..n)
        .map(|i| lo + width * (i as f64 + 0.5) / n as f64)
        .collect();
    let first_int = lo.floor() + 1.0;
    for p in [first_int, first_int - 0.5, lo + 0.5, hi - 1.0, hi - 0.5, hi.floor(), hi] {
        if p > lo && p <= hi {
            pts.push(p);
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn check_grids(outer: usize, inner: usize) -> Result<()> {
    if outer < 2 || inner < 2 {
        return Err(Error::invalid(format!("grids must have at least 2 points, got {outer} and {inner}")));
    }
    Ok(())
}

/// Offset of the θ grid. Thue-Morse sums vanish identically at many dyadic
/// rationals, so the grid avoids them.
const THETA_OFFSET: f64 = 0.618_033_988_749_894_9;

/// Number of θ points for `per_unit` points per unit of window length.
fn theta_points(z: f64, per_unit: usize) -> usize {
    ((z.floor() as usize + 1).next_power_of_two()) * per_unit.next_power_of_two()
}

/// `(1/T) Σ_i sup_x (1/z) |Σ_{x<m≤x+z} φ(m) e(mθ_i)|` with
/// `θ_i = (i + s)/T`, one FFT per window.
fn j_on_grid(phi: &ArithFn, xs: &[f64], z: f64, thetas: usize) -> f64 {
    use rustfft::FftPlanner;
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(thetas);
    let shift = THETA_OFFSET / thetas as f64;
    let sup = xs
        .par_iter()
        .map(|&x| {
            // |Σ φ(m₀+j) e((m₀+j)θ)| = |Σ φ(m₀+j) e(jθ)|
            let (lo, hi) = (x.floor() as i64 + 1, (x + z).floor() as i64 + 1);
            let mut buf = vec![Complex64::new(0.0, 0.0); thetas];
            for (j, m) in (lo..hi).enumerate() {
                buf[j] = phi.eval(m) * e_reduced(mul_phase(j as i64, shift));
            }
            fft.process(&mut buf);
            buf.iter().map(|v| v.norm() / z).collect::<Vec<f64>>()
        })
        .reduce(
            || vec![0.0; thetas],
            |mut acc, v| {
                for (a, b) in acc.iter_mut().zip(v) {
                    *a = a.max(b);
                }
                acc
            },
        );
    sup.into_iter().collect::<CompensatedSum>().value() / thetas as f64
}

/// `J(A, z) = ∫₀¹ sup_{f(A)<x≤f(2A)} z⁻¹ |Σ_{x<m≤x+z} φ(m) e(mθ)| dθ`.
///
/// `theta_grid` is the number of θ points per unit of window length
/// (both rounded up to powers of two); the grid actually used is reported
/// as `outer_grid_size`.
pub fn estimate_j(
    phi: &ArithFn,
    f: &GrowthFunction,
    a: u64,
    z: f64,
    theta_grid: usize,
    x_samples: usize,
) -> Result<IntegralEstimate> {
    if !(z >= 1.0) || !z.is_finite() {
        return Err(Error::invalid(format!("window length z must be ≥ 1, got {z}")));
    }
    if a < 1 {
        return Err(Error::invalid("J needs A ≥ 1"));
    }
    check_grids(theta_grid, x_samples)?;
    guard_terms("J window length", z)?;
    let (lo, hi) = (f.eval(a as f64), f.eval(2.0 * a as f64));
    let fine = sup_points(lo, hi, 2 * x_samples);
    let (t, t_fine) = (theta_points(z, theta_grid), theta_points(z, 2 * theta_grid));
    let tf = t_fine as f64;
    guard_terms("J transform work", fine.len() as f64 * tf * tf.log2())?;
    guard_bytes("J transform buffers", (rayon::current_num_threads() as u64 + 2) * t_fine as u64 * 16)?;
    let coarse = sup_points(lo, hi, x_samples);
    let value = j_on_grid(phi, &coarse, z, t);
    let refined = j_on_grid(phi, &fine, z, t_fine);
    Ok(IntegralEstimate {
        value,
        outer_grid_size: t as u64,
        sup_sample_count: coarse.len() as u64,
        refinement_delta: (refined - value).abs(),
    })
}

/// `K⁻¹ |Σ_{0<n≤K} φ(⌊nα+β⌋) − α⁻¹ Σ_{β<m≤β+Kα} φ(m)|`.
fn i_integrand(phi: &ArithFn, k: u64, alpha: f64, beta: f64) -> Result<f64> {
    let line = BeattyLine::new(alpha, beta)?;
    let mut s1 = ComplexSum::new();
    for n in 1..=k as i64 {
        s1.add(phi.eval(beatty_floor(n, &line)));
    }
    let (lo, hi) = (beta.floor() as i64 + 1, (beta + k as f64 * alpha).floor() as i64 + 1);
    let mut s2 = ComplexSum::new();
    for m in lo..hi {
        s2.add(phi.eval(m));
    }
    Ok((s1.value() - s2.value() / alpha).norm() / k as f64)
}

fn i_on_grid(phi: &ArithFn, k: u64, alphas: &[f64], betas: &[f64]) -> Result<f64> {
    let sups: Vec<f64> = alphas
        .par_iter()
        .map(|&alpha| {
            betas.iter().try_fold(0.0f64, |acc, &beta| {
                i_integrand(phi, k, alpha, beta).map(|v| acc.max(v))
            })
        })
        .collect::<Result<_>>()?;
    // trapezoid mean over the α grid
    let g = sups.len();
    let mut s = CompensatedSum::new();
    for (i, v) in sups.iter().enumerate() {
        let w = if i == 0 || i + 1 == g { 0.5 } else { 1.0 };
        s.add(w * v);
    }
    Ok(s.value() / (g - 1) as f64)
}

fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// `I(A, K)`: the mean over `α ∈ [f′(A), f′(2A)]` of the sup over sampled
/// `β ∈ (f(A), f(2A)]` of the Beatty substitution error.
pub fn estimate_i(
    phi: &ArithFn,
    f: &GrowthFunction,
    a: u64,
    k: u64,
    alpha_grid: usize,
    beta_samples: usize,
) -> Result<IntegralEstimate> {
    if k < 1 {
        return Err(Error::invalid("I needs K ≥ 1"));
    }
    if a < 1 {
        return Err(Error::invalid("I needs A ≥ 1"));
    }
    check_grids(alpha_grid, beta_samples)?;
    let (a_lo, a_hi) = (f.d1(a as f64), f.d1(2.0 * a as f64));
    if !(a_lo > 0.0) {
        return Err(Error::NotAdmissible(format!("f′(A) = {a_lo} is not positive")));
    }
    let (b_lo, b_hi) = (f.eval(a as f64), f.eval(2.0 * a as f64));
    let fine_b = sup_points(b_lo, b_hi, 2 * beta_samples);
    guard_terms(
        "I sample evaluations",
        2.0 * alpha_grid as f64 * fine_b.len() as f64 * k as f64 * (1.0 + a_hi),
    )?;
    let coarse_b = sup_points(b_lo, b_hi, beta_samples);
    let value = i_on_grid(phi, k, &uniform_grid(a_lo, a_hi, alpha_grid), &coarse_b)?;
    let refined = i_on_grid(phi, k, &uniform_grid(a_lo, a_hi, 2 * alpha_grid), &fine_b)?;
    Ok(IntegralEstimate {
        value,
        outer_grid_size: alpha_grid as u64,
        sup_sample_count: coarse_b.len() as u64,
        refinement_delta: (refined - value).abs(),
    })
}

/// The window length `z = A^{(2c−1)/(3−a)}`.
pub fn corollary1_window(a_scale: u64, c: f64, a_exp: f64) -> f64 {
    (a_scale as f64).powf((2.0 * c - 1.0) / (3.0 - a_exp))
}

/// Both sides of the main inequality at one scale. The implied constant
/// is unknown, so `ratio` is what gets compared across scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Audit {
    #[serde(rename = "A")]
    pub a: u64,
    pub z: f64,
    pub lhs_per_a: f64,
    pub j_estimate: f64,
    pub j_refinement_delta: f64,
    /// `f″(A)/f′(A)² · z²`.
    pub curvature_term: f64,
    /// `f′(A)(log A)³ · J(A, z)`.
    pub expsum_term: f64,
    pub bracket: f64,
    /// `(LHS/A) / bracket`.
    pub ratio: f64,
}

pub fn audit_theorem1(
    phi: &ArithFn,
    f: &GrowthFunction,
    a: u64,
    z: f64,
    theta_grid: usize,
    x_samples: usize,
) -> Result<Theorem1Audit> {
    let dev = substitution_deviation(phi, f, a)?;
    let j = estimate_j(phi, f, a, z, theta_grid, x_samples)?;
    let af = a as f64;
    let curvature_term = f.d2(af) / f.d1(af).powi(2) * z * z;
    let expsum_term = f.d1(af) * af.ln().powi(3) * j.value;
    let bracket = curvature_term + expsum_term;
    Ok(Theorem1Audit {
        a,
        z,
        lhs_per_a: dev.lhs_per_a,
        j_estimate: j.value,
        j_refinement_delta: j.refinement_delta,
        curvature_term,
        expsum_term,
        bracket,
        ratio: dev.lhs_per_a / bracket,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TmDensityRow {
    pub checkpoint: u64,
    /// `S_M = Σ_{n≤M} (−1)^{s_2(⌊n^c⌋)}`.
    pub partial_sum: i64,
    /// `|S_M| / M`.
    pub abs_mean: f64,
    /// Fraction of `n ≤ M` with sign `+1`.
    pub plus_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmDensityReport {
    pub c: String,
    pub n: u64,
    pub rows: Vec<TmDensityRow>,
    /// Least-squares slope of `log |S_M|/M` against `log M`.
    pub fitted_slope: Option<f64>,
    /// Set when `c > 1.42`, beyond the range where density 1/2 is proven.
    pub outside_proven_range: bool,
}

/// Geometric checkpoints `⌊N / 2^j⌋`, `j = k−1, …, 0`, deduplicated.
fn geometric_checkpoints(n: u64, k: u32) -> Vec<u64> {
    let mut v: Vec<u64> = (0..k)
        .rev()
        .map(|j| if j >= 64 { 0 } else { n >> j })
        .filter(|&m| m >= 1)
        .collect();
    v.dedup();
    v
}

fn fitted_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Thue-Morse signs along `⌊n^c⌋`, `1 < c < 2`.
pub fn tm_density_experiment(spec: &PSSpec, n: u64, checkpoints: u32) -> Result<TmDensityReport> {
    if !(spec.numerator() > spec.denominator() && spec.numerator() < 2 * spec.denominator()) {
        return Err(Error::invalid(format!("Thue-Morse density needs 1 < c < 2, got {spec}")));
    }
    if n < 1 || checkpoints < 1 {
        return Err(Error::invalid("density experiment needs N ≥ 1 and at least one checkpoint"));
    }
    guard_scan(n, spec)?;
    let marks = geometric_checkpoints(n, checkpoints);
    // per chunk: (sum, plus count, partials at checkpoints inside the chunk)
    let chunks = ordered_chunks(1, n as i64 + 1, |lo, hi| {
        let mut sum = 0i64;
        let mut plus = 0u64;
        let mut inside = Vec::new();
        let mut next = marks.partition_point(|&m| (m as i64) < lo);
        for k in lo..hi {
            let s = thue_morse_sign(ps_floor(k as u64, spec));
            sum += s as i64;
            plus += (s > 0) as u64;
            if next < marks.len() && marks[next] as i64 == k {
                inside.push((next, sum, plus));
                next += 1;
            }
        }
        (sum, plus, inside)
    });
    let (mut base_sum, mut base_plus) = (0i64, 0u64);
    let mut rows = Vec::with_capacity(marks.len());
    for (sum, plus, inside) in chunks {
        for (idx, s, p) in inside {
            let m = marks[idx];
            let total = base_sum + s;
            rows.push(TmDensityRow {
                checkpoint: m,
                partial_sum: total,
                abs_mean: total.unsigned_abs() as f64 / m as f64,
                plus_density: (base_plus + p) as f64 / m as f64,
            });
        }
        base_sum += sum;
        base_plus += plus;
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.abs_mean > 0.0 && r.checkpoint >= 2)
        .map(|r| ((r.checkpoint as f64).ln(), r.abs_mean.ln()))
        .collect();
    Ok(TmDensityReport {
        c: spec.to_string(),
        n,
        rows,
        fitted_slope: fitted_log_slope(&pts),
        outside_proven_range: spec.numerator() * 50 > 71 * spec.denominator(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCell {
    pub residues: Vec<u32>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueCountReport {
    pub c: String,
    pub x: u64,
    pub moduli: Vec<u32>,
    /// The residue tuple singled out by the experiment (`l1, l2` or `a`).
    pub target: Vec<u32>,
    /// Every cell of the residue table, in lexicographic order.
    pub cells: Vec<ResidueCell>,
    /// `x / ∏ m_i`.
    pub expected: f64,
    pub max_abs_deviation: f64,
    /// `max |count − expected| / x`.
    pub normalized_deviation: f64,
    /// Hypotheses that do not hold for these parameters.
    pub failed_hypotheses: Vec<String>,
}

impl ResidueCountReport {
    pub fn total(&self) -> u64 {
        self.cells.iter().map(|c| c.count).sum()
    }

    pub fn target_count(&self) -> u64 {
        self.cells
            .iter()
            .find(|c| c.residues == self.target)
            .map_or(0, |c| c.count)
    }
}

fn residue_report(
    spec: &PSSpec,
    x: u64,
    moduli: Vec<u32>,
    target: Vec<u32>,
    classify: impl Fn(u64) -> usize + Sync + Send,
) -> Result<ResidueCountReport> {
    let size: u64 = moduli.iter().map(|&m| m as u64).product();
    guard_bytes("residue table", size.saturating_mul(8 * 64))?;
    guard_scan(x, spec)?;
    let parts = ordered_chunks(1, x as i64 + 1, |lo, hi| {
        let mut counts = vec![0u64; size as usize];
        for n in lo..hi {
            counts[classify(ps_floor(n as u64, spec))] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; size as usize];
    for p in parts {
        for (c, v) in counts.iter_mut().zip(p) {
            *c += v;
        }
    }
    let expected = x as f64 / size as f64;
    let cells: Vec<ResidueCell> = counts
        .into_iter()
        .enumerate()
        .map(|(idx, count)| {
            let mut rem = idx as u64;
            let mut residues = vec![0u32; moduli.len()];
            for (r, &m) in residues.iter_mut().zip(&moduli).rev() {
                *r = (rem % m as u64) as u32;
                rem /= m as u64;
            }
            ResidueCell { residues, count }
        })
        .collect();
    let max_abs_deviation = cells
        .iter()
        .map(|c| (c.count as f64 - expected).abs())
        .fold(0.0, f64::max);
    Ok(ResidueCountReport {
        c: spec.to_string(),
        x,
        moduli,
        target,
        cells,
        expected,
        max_abs_deviation,
        normalized_deviation: if x == 0 { 0.0 } else { max_abs_deviation / x as f64 },
        failed_hypotheses: Vec::new(),
    })
}

/// Hypotheses of the joint-digit theorem that fail for `(q1, q2, m1, m2)`.
pub fn joint_hypothesis_failures(q1: u32, q2: u32, m1: u32, m2: u32) -> Vec<Error> {
    [
        ("(q1, q2) = 1", q1, q2),
        ("(m1, q1 - 1) = 1", m1, q1.saturating_sub(1)),
        ("(m2, q2 - 1) = 1", m2, q2.saturating_sub(1)),
    ]
    .into_iter()
    .filter_map(|(name, a, b)| {
        let g = a.gcd(&b);
        (g != 1).then(|| Error::Hypothesis {
            name,
            detail: format!("gcd({a}, {b}) = {g}"),
        })
    })
    .collect()
}

/// Counts `n ≤ x` by `(s_{q1}(⌊n^c⌋) mod m1, s_{q2}(⌊n^c⌋) mod m2)`,
/// refusing parameters outside the theorem's hypotheses.
#[allow(clippy::too_many_arguments)]
pub fn joint_residue_experiment(
    spec: &PSSpec,
    q1: u32,
    q2: u32,
    m1: u32,
    m2: u32,
    l1: u32,
    l2: u32,
    x: u64,
) -> Result<ResidueCountReport> {
    DigitBase::new(q1)?;
    DigitBase::new(q2)?;
    if let Some(err) = joint_hypothesis_failures(q1, q2, m1, m2).into_iter().next() {
        return Err(err);
    }
    joint_residue_counts(spec, q1, q2, m1, m2, l1, l2, x)
}

/// The same count without the gcd hypotheses; failures are listed in
/// `failed_hypotheses`.
#[allow(clippy::too_many_arguments)]
pub fn joint_residue_counts(
    spec: &PSSpec,
    q1: u32,
    q2: u32,
    m1: u32,
    m2: u32,
    l1: u32,
    l2: u32,
    x: u64,
) -> Result<ResidueCountReport> {
    reject_integer_exponent(spec)?;
    let (b1, b2) = (DigitBase::new(q1)?, DigitBase::new(q2)?);
    if m1 == 0 || m2 == 0 {
        return Err(Error::invalid("moduli must be at least 1"));
    }
    let mut report = residue_report(spec, x, vec![m1, m2], vec![l1 % m1, l2 % m2], move |v| {
        let r1 = digit_sum(v, b1) % m1;
        let r2 = digit_sum(v, b2) % m2;
        (r1 * m2 + r2) as usize
    })?;
    report.failed_hypotheses = joint_hypothesis_failures(q1, q2, m1, m2)
        .into_iter()
        .map(|e| match e {
            Error::Hypothesis { name, .. } => name.to_string(),
            other => other.to_string(),
        })
        .collect();
    Ok(report)
}

/// Counts `n ≤ x` by `s_Z(⌊n^c⌋) mod m`.
pub fn zeckendorf_residue_experiment(
    spec: &PSSpec,
    m: u32,
    a: u32,
    x: u64,
) -> Result<ResidueCountReport> {
    reject_integer_exponent(spec)?;
    if m == 0 {
        return Err(Error::invalid("modulus m must be at least 1"));
    }
    residue_report(spec, x, vec![m], vec![a % m], move |v| {
        (zeckendorf_digit_sum(v) % m) as usize
    })
}

/// Parses a plain decimal string into an exact rational.
pub fn rational_from_decimal(s: &str) -> Result<Rational> {
    let (num, den) = parse_decimal(s)?;
    Ok(Rational::new(num as i128, den as i128))
}

fn rational_string(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentAudit {
    pub a: String,
    pub c: String,
    /// `(2 − (a+1)c) / (3 − a)` as an exact fraction.
    pub eta_max_exact: String,
    pub eta_max: f64,
    /// `max{0, (7 − 5c)/9}`.
    pub threshold: f64,
    /// `η_max > max{0, (7 − 5c)/9}`.
    pub validity: bool,
}

pub fn corollary1_exponent_audit(a: Rational, c: Rational) -> Result<ExponentAudit> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    let two = Rational::from_integer(2);
    if !(a > zero && a <= one) {
        return Err(Error::invalid(format!("exponent a = {} outside (0, 1]", rational_string(&a))));
    }
    if !(c > one && c < two) {
        return Err(Error::invalid(format!("c = {} outside (1, 2)", rational_string(&c))));
    }
    let eta = (two - (a + one) * c) / (Rational::from_integer(3) - a);
    let app1 = (Rational::from_integer(7) - Rational::from_integer(5) * c) / Rational::from_integer(9);
    let threshold = if app1 > zero { app1 } else { zero };
    Ok(ExponentAudit {
        a: rational_string(&a),
        c: rational_string(&c),
        eta_max_exact: rational_string(&eta),
        eta_max: rational_to_f64(&eta),
        threshold: rational_to_f64(&threshold),
        validity: eta > threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierAuditRow {
    pub q: u32,
    pub lambda: u32,
    pub alpha: f64,
    pub max_abs: f64,
    pub bound: f64,
    pub violations: u64,
    /// `|Σ_h |F(h)|² − 1|`.
    pub parseval_error: f64,
}

/// Full coefficient tables for every `q`, `1 ≤ λ ≤ λ_max` and
/// `α = i/alpha_grid`, `0 ≤ i < alpha_grid`.
pub fn fourier_audit(qs: &[u32], lambda_max: u32, alpha_grid: u32) -> Result<Vec<FourierAuditRow>> {
    if alpha_grid == 0 {
        return Err(Error::invalid("alpha grid must be nonempty"));
    }
    let limit = memory_limit()?;
    for &q in qs {
        DigitBase::new(q)?;
        let period = (q as u64).checked_pow(lambda_max).filter(|&p| p <= MAX_FOURIER_TABLE);
        let period = period.ok_or(Error::ResourceGuard {
            what: "Fourier table length q^λ",
            requested: (q as u128).saturating_pow(lambda_max),
            limit: MAX_FOURIER_TABLE as u128,
        })?;
        guard_bytes("Fourier table bytes", period.saturating_mul(std::mem::size_of::<Complex64>() as u64))?;
    }
    let mut rows = Vec::new();
    for &q in qs {
        for lambda in 1..=lambda_max {
            for i in 0..alpha_grid {
                let alpha = i as f64 / alpha_grid as f64;
                let t = fourier_table(q, lambda, alpha, limit)?;
                rows.push(FourierAuditRow {
                    q,
                    lambda,
                    alpha,
                    max_abs: t.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max),
                    bound: t.bound(),
                    violations: t.bound_violations().len() as u64,
                    parseval_error: (t.parseval_sum() - 1.0).abs(),
                });
            }
        }
    }
    Ok(rows)
}

/// Mismatch counts on consecutive windows `(a + iK, a + (i+1)K]` with the
/// tangent slope `α = f′(a + iK)`.
pub fn beatty_mismatch_experiment(
    f: &GrowthFunction,
    a: u64,
    k: u64,
    windows: u32,
    r_cutoff: u64,
) -> Result<Vec<MismatchReport>> {
    if k == 0 {
        return Err(Error::invalid("window length K must be at least 1"));
    }
    guard_terms("mismatch window terms", windows as f64 * k as f64 * (r_cutoff as f64 + 1.0))?;
    (0..windows as u64)
        .into_par_iter()
        .map(|i| {
            let lo = a + i * k;
            count_floor_mismatches(f, lo, lo + k, f.d1(lo as f64), r_cutoff)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VaalerAuditRow {
    pub h: u32,
    pub grid: u64,
    /// `max (|ψ − ψ_H| − κ_H)` over the grid.
    pub max_excess: f64,
    pub min_kappa: f64,
}

pub fn vaaler_audit(hs: &[u32], grid: usize) -> Result<Vec<VaalerAuditRow>> {
    if grid == 0 {
        return Err(Error::invalid("grid must be nonempty"));
    }
    hs.par_iter()
        .map(|&h| {
            let v = vaaler_build(h)?;
            let min_kappa = (0..grid)
                .map(|i| fejer_majorant(h, i as f64 / grid as f64))
                .fold(f64::INFINITY, f64::min);
            Ok(VaalerAuditRow {
                h,
                grid: grid as u64,
                max_excess: v.max_excess(grid),
                min_kappa,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointSetKind {
    Uniform,
    BeattyOrbit,
    Cluster,
    ShiftedLattice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtAuditRow {
    pub set: u64,
    pub kind: PointSetKind,
    #[serde(flatten)]
    pub report: ErdosTuranReport,
}

fn random_point_set(set: u64, points: usize, seed: u64) -> (PointSetKind, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ set.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let kind = match set % 4 {
        0 => PointSetKind::Uniform,
        1 => PointSetKind::BeattyOrbit,
        2 => PointSetKind::Cluster,
        _ => PointSetKind::ShiftedLattice,
    };
    let xs = match kind {
        PointSetKind::Uniform => (0..points).map(|_| rng.gen::<f64>()).collect(),
        PointSetKind::BeattyOrbit => {
            let alpha: f64 = rng.gen_range(1.0..10.0);
            let beta: f64 = rng.gen();
            (1..=points as i64)
                .map(|n| frac(mul_phase(n, alpha) + beta))
                .collect()
        }
        PointSetKind::Cluster => {
            let c: f64 = rng.gen();
            let w: f64 = rng.gen_range(0.001..0.2);
            (0..points).map(|_| frac(c + w * rng.gen::<f64>())).collect()
        }
        PointSetKind::ShiftedLattice => {
            let s: f64 = rng.gen();
            (0..points)
                .map(|i| frac(s + i as f64 / points as f64))
                .collect()
        }
    };
    (kind, xs)
}

/// Constant-1 Erdős–Turán check on `sets` seeded point sets cycling
/// through uniform samples, Beatty orbits `{nα+β}`, clusters and shifted
/// lattices.
pub fn et_audit(sets: u64, points: usize, h_cutoff: u32, seed: u64) -> Result<Vec<EtAuditRow>> {
    if points == 0 {
        return Err(Error::invalid("point sets must be nonempty"));
    }
    guard_terms("Erdős–Turán terms", sets as f64 * points as f64 * h_cutoff as f64)?;
    (0..sets)
        .into_par_iter()
        .map(|set| {
            let (kind, xs) = random_point_set(set, points, seed);
            Ok(EtAuditRow {
                set,
                kind,
                report: erdos_turan_audit(&xs, h_cutoff)?,
            })
        })
        .collect()
}
