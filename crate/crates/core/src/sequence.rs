//! Piatetski-Shapiro floors `⌊n^c⌋`, Beatty lines `⌊nα + β⌋`, and the
//! local replacement of one by the other along tangent lines.

use crate::error::{Error, Result};
use crate::numeric::{dist_to_int, mul_phase, ComplexSum};
use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Default fractional-part margin for the double-precision fast path.
pub const DEFAULT_FAST_PATH_MARGIN: f64 = 1e-8;

/// The exponent `c = c_num / c_den` of a Piatetski-Shapiro sequence, kept as
/// an exact reduced fraction so that `⌊n^c⌋` is decidable in integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PSSpec {
    c_num: u64,
    c_den: u64,
    fast_path_margin: f64,
}

impl PSSpec {
    /// Requires `c ≥ 1`. Integer exponents are accepted here (the floor is
    /// still well defined) but flagged by [`PSSpec::diagnostic`].
    pub fn new(c_num: u64, c_den: u64) -> Result<Self> {
        if c_den == 0 || c_num == 0 {
            return Err(Error::invalid("exponent numerator and denominator must be positive"));
        }
        let g = c_num.gcd(&c_den);
        let (c_num, c_den) = (c_num / g, c_den / g);
        if c_num < c_den {
            return Err(Error::invalid(format!("exponent {c_num}/{c_den} is below 1")));
        }
        Ok(Self {
            c_num,
            c_den,
            fast_path_margin: DEFAULT_FAST_PATH_MARGIN,
        })
    }

    /// Parses a plain decimal string exactly: `"1.42"` becomes `71/50`.
    pub fn from_decimal(s: &str) -> Result<Self> {
        let (num, den) = parse_decimal(s)?;
        Self::new(num, den)
    }

    pub fn with_fast_path_margin(mut self, margin: f64) -> Result<Self> {
        if !(margin > 0.0 && margin < 0.5) {
            return Err(Error::invalid(format!("fast-path margin {margin} outside (0, 1/2)")));
        }
        self.fast_path_margin = margin;
        Ok(self)
    }

    pub fn numerator(&self) -> u64 {
        self.c_num
    }

    pub fn denominator(&self) -> u64 {
        self.c_den
    }

    pub fn exponent(&self) -> f64 {
        self.c_num as f64 / self.c_den as f64
    }

    pub fn fast_path_margin(&self) -> f64 {
        self.fast_path_margin
    }

    pub fn is_integer(&self) -> bool {
        self.c_den == 1
    }

    /// `1 < c < 2`, the range of the main theorems.
    pub fn in_main_range(&self) -> bool {
        self.c_num > self.c_den && self.c_num < 2 * self.c_den
    }

    /// Warning for exponents outside the theorems' hypotheses.
    pub fn diagnostic(&self) -> Option<String> {
        if self.is_integer() {
            Some(format!("integer exponent c = {}: theorems require noninteger c", self.c_num))
        } else if !self.in_main_range() {
            Some(format!("exponent c = {}/{} outside (1, 2)", self.c_num, self.c_den))
        } else {
            None
        }
    }
}

impl std::fmt::Display for PSSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.c_num, self.c_den)
    }
}

/// Exact `(numerator, denominator)` of a nonnegative decimal string, reduced.
pub fn parse_decimal(s: &str) -> Result<(u64, u64)> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a plain nonnegative decimal: {s:?}"));
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: u64 = digits.parse().map_err(|_| bad())?;
    let den = 10u64
        .checked_pow(frac_part.len() as u32)
        .ok_or_else(bad)?;
    let g = num.gcd(&den).max(1);
    Ok((num / g, den / g))
}

/// Exact `⌊n^c⌋`.
///
/// A double-precision estimate is accepted when its fractional part is
/// farther from an integer than the fast-path margin plus the estimate's
/// own error bound; otherwise the floor is decided exactly by comparing
/// `m^{c_den}` with `n^{c_num}` in big integers.
///
/// Panics if `n^c` does not fit in a u64.
pub fn ps_floor(n: u64, spec: &PSSpec) -> u64 {
    if n <= 1 {
        return n;
    }
    if spec.c_den == 1 {
        return n
            .checked_pow(spec.c_num as u32)
            .expect("n^c overflows u64");
    }
    let nf = n as f64;
    let c = spec.exponent();
    let est = nf.powf(c);
    assert!(est < 1.8e19, "n^c overflows u64 (n = {n}, c = {spec})");
    // error of powf plus propagation of the rounding of c itself
    let tol = spec.fast_path_margin + est * (nf.ln() * c + 4.0) * 4.0 * f64::EPSILON;
    let fl = est.floor();
    let f = est - fl;
    if f > tol && 1.0 - f > tol {
        return fl as u64;
    }
    exact_floor(n, spec, fl as u64)
}

/// Floor decided in integers, starting from a candidate `m0`.
fn exact_floor(n: u64, spec: &PSSpec, m0: u64) -> u64 {
    let den = spec.c_den as u32;
    let target = BigUint::from(n).pow(spec.c_num as u32);
    let mut m = m0;
    while m > 0 && BigUint::from(m).pow(den) > target {
        m -= 1;
    }
    while BigUint::from(m + 1).pow(den) <= target {
        m += 1;
    }
    m
}

/// Exact floors for `n_lo ..= n_hi`, in index order. Integer exponents
/// are rejected since the sequence is then degenerate for the experiments.
pub fn ps_block(n_lo: u64, n_hi: u64, spec: &PSSpec) -> Result<Vec<u64>> {
    use rayon::prelude::*;
    if n_lo < 1 || n_lo > n_hi {
        return Err(Error::invalid(format!("block [{n_lo}, {n_hi}] must satisfy 1 ≤ lo ≤ hi")));
    }
    if spec.is_integer() {
        return Err(Error::invalid(format!(
            "integer exponent c = {} rejected for sequence blocks",
            spec.c_num
        )));
    }
    Ok((n_lo..=n_hi).into_par_iter().map(|n| ps_floor(n, spec)).collect())
}

/// A Beatty line `n ↦ nα + β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeattyLine {
    pub alpha: f64,
    pub beta: f64,
}

impl BeattyLine {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::invalid(format!("Beatty line needs finite α > 0, got ({alpha}, {beta})")));
        }
        Ok(Self { alpha, beta })
    }
}

const BEATTY_GUARD: f64 = 1.0 / (1u64 << 40) as f64;

/// `⌊nα + β⌋`; values within 2^-40 (or a few ulps, whichever is larger) of
/// an integer are recomputed with the product and sum carried as
/// double-double.
pub fn beatty_floor(n: i64, line: &BeattyLine) -> i64 {
    let nf = n as f64;
    let v = nf.mul_add(line.alpha, line.beta);
    if dist_to_int(v) > BEATTY_GUARD.max(v.abs() * 4.0 * f64::EPSILON) {
        return v.floor() as i64;
    }
    // hi + lo = n·α + β with ~106-bit accuracy
    let p = nf * line.alpha;
    let p_err = nf.mul_add(line.alpha, -p);
    let s = p + line.beta;
    let bb = s - p;
    let s_err = (p - (s - bb)) + (line.beta - bb);
    let lo = p_err + s_err;
    let fl = s.floor();
    let r = (s - fl) + lo;
    if r < 0.0 {
        fl as i64 - 1
    } else if r >= 1.0 {
        fl as i64 + 1
    } else {
        fl as i64
    }
}

/// Whether `m = ⌊nα + β⌋` for some integer `n`, via
/// `⌊−(m−β)/α⌋ − ⌊−(m+1−β)/α⌋ = 1`. Requires `α ≥ 1`.
pub fn beatty_membership(m: i64, line: &BeattyLine) -> Result<bool> {
    if line.alpha < 1.0 {
        return Err(Error::invalid(format!(
            "membership test needs α ≥ 1, got {}",
            line.alpha
        )));
    }
    let lo = (m as f64 - line.beta) / line.alpha;
    let hi = (m as f64 + 1.0 - line.beta) / line.alpha;
    const EDGE: f64 = 1e-9;
    if dist_to_int(lo) > EDGE * lo.abs().max(1.0) && dist_to_int(hi) > EDGE * hi.abs().max(1.0) {
        return Ok((-lo).floor() - (-hi).floor() == 1.0);
    }
    // a quotient sits on an integer: decide with the guarded floor instead
    let n0 = lo.ceil() as i64;
    Ok((n0 - 1..=n0 + 1).any(|n| beatty_floor(n, line) == m))
}

/// One summand `coef · x^exponent · (ln x)^log_power` of a growth function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLogTerm {
    pub coef: f64,
    pub exponent: f64,
    pub log_power: f64,
}

impl PowerLogTerm {
    fn value(&self, x: f64) -> f64 {
        let l = x.ln();
        self.coef * x.powf(self.exponent) * pow_log(l, self.log_power)
    }

    fn d1(&self, x: f64) -> f64 {
        let (e, h) = (self.exponent, self.log_power);
        let l = x.ln();
        let mut s = e * pow_log(l, h);
        if h != 0.0 {
            s += h * pow_log(l, h - 1.0);
        }
        self.coef * x.powf(e - 1.0) * s
    }

    fn d2(&self, x: f64) -> f64 {
        let (e, h) = (self.exponent, self.log_power);
        let l = x.ln();
        let mut s = e * (e - 1.0) * pow_log(l, h);
        if h != 0.0 {
            s += h * (2.0 * e - 1.0) * pow_log(l, h - 1.0);
            if h != 1.0 {
                s += h * (h - 1.0) * pow_log(l, h - 2.0);
            }
        }
        self.coef * x.powf(e - 2.0) * s
    }
}

#[inline]
fn pow_log(l: f64, h: f64) -> f64 {
    if h == 0.0 {
        1.0
    } else {
        l.powf(h)
    }
}

/// An amplitude function `f` from the closed family generated by
/// `x^c (log x)^η`, with analytic derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFunction {
    terms: Vec<PowerLogTerm>,
    /// Set when `f(x) = x^c` with rational `c`; enables exact floors.
    exact: Option<PSSpec>,
    pub c1: f64,
    pub c2: f64,
    /// Threshold with `f′(A0) ≥ 1`.
    pub a0: f64,
    /// Polynomial growth exponent of `f′`.
    pub delta: f64,
}

impl GrowthFunction {
    /// `f(x) = x^c`.
    pub fn power(spec: PSSpec) -> Self {
        let c = spec.exponent();
        let mut f = Self::from_terms_unchecked(vec![PowerLogTerm {
            coef: 1.0,
            exponent: c,
            log_power: 0.0,
        }]);
        f.exact = Some(spec);
        f
    }

    /// `f(x) = x^c (ln x)^η`, `η ≥ 0`.
    pub fn power_log(c: f64, eta: f64) -> Result<Self> {
        Self::combination(vec![PowerLogTerm {
            coef: 1.0,
            exponent: c,
            log_power: eta,
        }])
    }

    /// Positive linear combination of power-log terms; `f(x) = x` and other
    /// non-convex members can be built, and fail [`check_admissible`].
    pub fn combination(terms: Vec<PowerLogTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("growth function needs at least one term"));
        }
        for t in &terms {
            if !(t.coef > 0.0) || !(t.exponent > 0.0) || !(t.log_power >= 0.0) {
                return Err(Error::invalid(format!("term {t:?} outside the family")));
            }
        }
        Ok(Self::from_terms_unchecked(terms))
    }

    fn from_terms_unchecked(terms: Vec<PowerLogTerm>) -> Self {
        let mut f = GrowthFunction {
            terms,
            exact: None,
            c1: 0.0,
            c2: 0.0,
            a0: 2.0,
            delta: 0.0,
        };
        let (c1, c2) = f.doubling_ratio_range(2.0, 1e9, 200);
        f.c1 = c1;
        f.c2 = c2;
        f.delta = f.terms.iter().map(|t| t.exponent - 1.0).fold(0.0, f64::max);
        let mut a0 = 2.0;
        while f.d1(a0) < 1.0 && a0 < 1e12 {
            a0 *= 1.1;
        }
        f.a0 = a0;
        f
    }

    /// `min` and `max` of `f″(y)/f″(x)` over sampled `x ≤ y ≤ 2x`.
    fn doubling_ratio_range(&self, lo: f64, hi: f64, samples: usize) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let step = (hi / lo).ln() / (samples.max(2) - 1) as f64;
        for i in 0..samples.max(2) {
            let x = lo * (step * i as f64).exp();
            let base = self.d2(x);
            for k in 0..=16 {
                let y = x * (1.0 + k as f64 / 16.0);
                let r = self.d2(y) / base;
                min = min.min(r);
                max = max.max(r);
            }
        }
        (min, max)
    }

    pub fn terms(&self) -> &[PowerLogTerm] {
        &self.terms
    }

    pub fn exact_spec(&self) -> Option<&PSSpec> {
        self.exact.as_ref()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.value(x)).sum()
    }

    pub fn d1(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.d1(x)).sum()
    }

    pub fn d2(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.d2(x)).sum()
    }

    /// `f⁻¹(y)` for `y > 0`.
    pub fn inverse(&self, y: f64) -> f64 {
        if let [t] = self.terms.as_slice() {
            if t.log_power == 0.0 {
                return (y / t.coef).powf(1.0 / t.exponent);
            }
        }
        // bracket then Newton with bisection fallback; f is increasing
        let (mut lo, mut hi) = (f64::MIN_POSITIVE, 1.0);
        while self.eval(hi) < y {
            lo = hi;
            hi *= 2.0;
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let fx = self.eval(x) - y;
            if fx > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let mut next = x - fx / self.d1(x);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 4.0 * f64::EPSILON * x {
                return next;
            }
            x = next;
        }
        x
    }

    /// `(f⁻¹)′(y) = 1 / f′(f⁻¹(y))`.
    pub fn inverse_derivative(&self, y: f64) -> f64 {
        if let [t] = self.terms.as_slice() {
            if t.log_power == 0.0 && t.coef == 1.0 {
                let c = t.exponent;
                return y.powf(1.0 / c - 1.0) / c;
            }
        }
        1.0 / self.d1(self.inverse(y))
    }

    /// `⌊f(n)⌋`, exact when `f` is a rational power.
    pub fn floor_at(&self, n: u64) -> u64 {
        match &self.exact {
            Some(spec) => ps_floor(n, spec),
            None => self.eval(n as f64).floor() as u64,
        }
    }

    /// Upper bound for `f″` on `[a, b]`: endpoint and interior samples.
    pub fn second_derivative_sup(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return self.d2(a).abs();
        }
        let mut m = self.d2(a).abs().max(self.d2(b).abs());
        for i in 1..64 {
            m = m.max(self.d2(a + (b - a) * i as f64 / 64.0).abs());
        }
        m * (1.0 + 1e-12)
    }
}

/// Tangent-line data on `[a, b]`: admissible slopes `[f′(a), f′(b)]` and the
/// intercept map `α ↦ f(a) − aα`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentWindow {
    pub a: f64,
    pub b: f64,
    pub f_a: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    /// Upper bound `M` for `|f″|` on the window.
    pub second_derivative_bound: f64,
}

impl TangentWindow {
    pub fn beta(&self, alpha: f64) -> f64 {
        self.f_a - self.a * alpha
    }

    pub fn contains_slope(&self, alpha: f64) -> bool {
        let tol = 1e-12 * self.alpha_hi.abs().max(1.0);
        alpha >= self.alpha_lo - tol && alpha <= self.alpha_hi + tol
    }

    /// `M(b − a)²`.
    pub fn error_bound(&self) -> f64 {
        self.second_derivative_bound * (self.b - self.a).powi(2)
    }
}

pub fn tangent_window(f: &GrowthFunction, a: f64, b: f64) -> Result<TangentWindow> {
    if !(a > 0.0) || b < a {
        return Err(Error::invalid(format!("tangent window needs 0 < a ≤ b, got [{a}, {b}]")));
    }
    for x in [a, 0.5 * (a + b), b] {
        if !(f.eval(x) > 0.0 && f.d1(x) > 0.0 && f.d2(x) > 0.0) {
            return Err(Error::NotAdmissible(format!("f, f′, f″ not all positive at x = {x}")));
        }
    }
    Ok(TangentWindow {
        a,
        b,
        f_a: f.eval(a),
        alpha_lo: f.d1(a),
        alpha_hi: f.d1(b),
        second_derivative_bound: f.second_derivative_sup(a, b),
    })
}

/// Result of comparing `⌊f(n)⌋` with its Beatty replacement on `(a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MismatchReport {
    pub a: u64,
    pub b: u64,
    pub alpha: f64,
    pub mismatch_count: u64,
    pub lemma_bound: f64,
    /// `M`, an upper bound for `|f″|` on `[a, b]`.
    pub second_derivative_bound: f64,
    /// `M(b − a)²`.
    pub d: f64,
    pub r_cutoff: u64,
}

impl MismatchReport {
    pub fn within_bound(&self) -> bool {
        self.mismatch_count as f64 <= self.lemma_bound
    }
}

/// Counts `n ∈ (a, b]` with `⌊f(n)⌋ ≠ ⌊nα + f(a) − aα⌋` and evaluates
/// `2M(b−a)³ + (b−a)/R + Σ_{r≤R} r⁻¹ |Σ_{a<n≤b} e(nrα)|`.
pub fn count_floor_mismatches(
    f: &GrowthFunction,
    a: u64,
    b: u64,
    alpha: f64,
    r_cutoff: u64,
) -> Result<MismatchReport> {
    if a == 0 || b < a {
        return Err(Error::invalid(format!("window (a, b] needs 1 ≤ a ≤ b, got ({a}, {b}]")));
    }
    if r_cutoff == 0 {
        return Err(Error::invalid("cutoff R must be at least 1"));
    }
    let w = tangent_window(f, a as f64, b as f64)?;
    if !w.contains_slope(alpha) {
        return Err(Error::invalid(format!(
            "slope {alpha} outside f′([a, b]) = [{}, {}]",
            w.alpha_lo, w.alpha_hi
        )));
    }
    let line = BeattyLine {
        alpha,
        beta: w.beta(alpha),
    };
    let mismatch_count = (a + 1..=b)
        .filter(|&n| f.floor_at(n) as i64 != beatty_floor(n as i64, &line))
        .count() as u64;

    let len = (b - a) as f64;
    let m = w.second_derivative_bound;
    let mut bound = 2.0 * m * len.powi(3) + len / r_cutoff as f64;
    for r in 1..=r_cutoff {
        let freq = r as f64 * alpha;
        let mut s = ComplexSum::new();
        for n in a + 1..=b {
            s.add(crate::numeric::e_reduced(mul_phase(n as i64, freq)));
        }
        bound += s.value().norm() / r as f64;
    }
    Ok(MismatchReport {
        a,
        b,
        alpha,
        mismatch_count,
        lemma_bound: bound,
        second_derivative_bound: m,
        d: m * len * len,
        r_cutoff,
    })
}

/// Sampled verification of the growth-function hypotheses and the
/// empirical constants of the derived estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub passed: bool,
    pub violations: Vec<String>,
    /// `min f″(y)/f″(x)` over sampled `x ≤ y ≤ 2x`.
    pub c1_empirical: f64,
    /// `max f″(y)/f″(x)` over the same pairs.
    pub c2_empirical: f64,
    /// `min (y f″(y)) / (x f″(x))` over sampled `x ≤ y`.
    pub almost_monotone_const: f64,
    /// Range of `f′(x) / (x f″(x))`.
    pub derivative_ratio_min: f64,
    /// `max f′(x) / (x f″(x) log x)` for `x ≥ 2`.
    pub derivative_ratio_log_max: f64,
    /// `max f′(2x)/f′(x)`.
    pub doubling_quotient_max: f64,
    /// Log-log slope of `f′` over the range, an estimate of `δ`.
    pub growth_exponent: f64,
    /// Range of `(f(b) − f(a)) / (f′(x)(b − a))` for `x ≤ a < b ≤ 2x`.
    pub mean_value_ratio: (f64, f64),
    /// Range of `(f′(b) − f′(a)) / (f″(x)(b − a))` on the same pairs.
    pub mean_value_ratio_d2: (f64, f64),
}

pub fn check_admissible(
    f: &GrowthFunction,
    x_lo: f64,
    x_hi: f64,
    samples: usize,
) -> Result<AdmissibilityReport> {
    if !(x_lo > 0.0) || !(x_hi > x_lo) || samples < 2 {
        return Err(Error::invalid(format!(
            "admissibility check needs 0 < x_lo < x_hi and samples ≥ 2, got [{x_lo}, {x_hi}], {samples}"
        )));
    }
    let mut violations = Vec::new();
    let step = (x_hi / x_lo).ln() / (samples - 1) as f64;
    let xs: Vec<f64> = (0..samples).map(|i| x_lo * (step * i as f64).exp()).collect();

    let mut positivity = [true; 3];
    let mut monotone = true;
    let mut prev_d1 = f64::NEG_INFINITY;
    for &x in &xs {
        let v = [f.eval(x), f.d1(x), f.d2(x)];
        for (ok, vi) in positivity.iter_mut().zip(v) {
            *ok &= vi > 0.0;
        }
        monotone &= v[1] >= prev_d1;
        prev_d1 = v[1];
    }
    for (ok, name) in positivity.iter().zip(["f", "f′", "f″"]) {
        if !ok {
            violations.push(format!("{name} > 0 fails on [{x_lo}, {x_hi}]"));
        }
    }
    if !monotone {
        violations.push("f′ is not increasing".into());
    }

    let mut c1 = f64::INFINITY;
    let mut c2 = f64::NEG_INFINITY;
    let mut doubling = f64::NEG_INFINITY;
    let mut mv = (f64::INFINITY, f64::NEG_INFINITY);
    let mut mv2 = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in &xs {
        let d2x = f.d2(x);
        if 2.0 * x <= x_hi * (1.0 + 1e-12) {
            doubling = doubling.max(f.d1(2.0 * x) / f.d1(x));
        }
        for k in 0..=8 {
            let y = x * (1.0 + k as f64 / 8.0);
            if y > x_hi * (1.0 + 1e-12) {
                break;
            }
            let r = f.d2(y) / d2x;
            c1 = c1.min(r);
            c2 = c2.max(r);
            if k > 0 {
                let (a, b) = (x * (1.0 + (k - 1) as f64 / 8.0), y);
                let q1 = (f.eval(b) - f.eval(a)) / (f.d1(x) * (b - a));
                let q2 = (f.d1(b) - f.d1(a)) / (d2x * (b - a));
                mv = (mv.0.min(q1), mv.1.max(q1));
                mv2 = (mv2.0.min(q2), mv2.1.max(q2));
            }
        }
    }
    if positivity[2] {
        if c1 < 0.5 {
            violations.push(format!("c1 = {c1} below 1/2 on doubling pairs"));
        }
        if c1 < f.c1 * (1.0 - 1e-9) || c2 > f.c2 * (1.0 + 1e-9) {
            violations.push(format!(
                "declared constants (c1, c2) = ({}, {}) do not bracket observed ({c1}, {c2})",
                f.c1, f.c2
            ));
        }
    }

    // x f″(x) ≪ y f″(y): minimum of the ratio over ordered pairs
    let weighted: Vec<f64> = xs.iter().map(|&x| x * f.d2(x)).collect();
    let mut almost = f64::INFINITY;
    let mut running_max = f64::NEG_INFINITY;
    for &w in &weighted {
        running_max = running_max.max(w);
        almost = almost.min(w / running_max);
    }
    let mut ratio_min = f64::INFINITY;
    let mut ratio_log_max = f64::NEG_INFINITY;
    for &x in &xs {
        let r = f.d1(x) / (x * f.d2(x));
        ratio_min = ratio_min.min(r);
        if x >= 2.0 {
            ratio_log_max = ratio_log_max.max(r / x.ln());
        }
    }
    let growth_exponent = (f.d1(x_hi) / f.d1(x_lo)).ln() / (x_hi / x_lo).ln();

    Ok(AdmissibilityReport {
        passed: violations.is_empty(),
        violations,
        c1_empirical: c1,
        c2_empirical: c2,
        almost_monotone_const: almost,
        derivative_ratio_min: ratio_min,
        derivative_ratio_log_max: ratio_log_max,
        doubling_quotient_max: doubling,
        growth_exponent,
        mean_value_ratio: mv,
        mean_value_ratio_d2: mv2,
    })
}

/// `Σ_{f(A) < m ≤ f(2A)} (f⁻¹)′(m)`, which stays `O(A)`.
pub fn inverse_derivative_sum(f: &GrowthFunction, a: u64) -> f64 {
    let lo = f.floor_at(a);
    let hi = f.floor_at(2 * a);
    let parts = crate::numeric::ordered_chunks(lo as i64 + 1, hi as i64 + 1, |s, t| {
        (s..t)
            .map(|m| f.inverse_derivative(m as f64))
            .collect::<crate::numeric::CompensatedSum>()
    });
    let mut total = crate::numeric::CompensatedSum::new();
    for p in &parts {
        total.merge(p);
    }
    total.value()
}
