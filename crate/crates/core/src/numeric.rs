//! Small floating-point building blocks shared by the kernels: phase
//! reduction, the unit exponential `e(x)`, and compensated summation.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Fractional part `{x}` in `[0, 1)`.
#[inline]
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance to the nearest integer, `‖x‖`.
#[inline]
pub fn dist_to_int(x: f64) -> f64 {
    let f = frac(x);
    f.min(1.0 - f)
}

/// `e(x) = exp(2πix)`, evaluated on the reduced phase.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (TAU * frac(x)).sin_cos();
    Complex64::new(c, s)
}

/// `e(x)` for an already reduced phase in `[0, 1)`.
#[inline]
pub(crate) fn e_reduced(phase: f64) -> Complex64 {
    let (s, c) = (TAU * phase).sin_cos();
    Complex64::new(c, s)
}

const TWO_POW_53: u64 = 1 << 53;

/// `{m·θ}` without losing the low-order bits of the product.
///
/// The product is formed as an unevaluated sum `p + err` (fma two-product),
/// so the reduced phase keeps full double accuracy even when `m·θ ~ 10^9`.
/// Multipliers beyond 2^53 are split into 26-bit limbs.
#[inline]
pub fn mul_phase(m: i64, theta: f64) -> f64 {
    let mag = m.unsigned_abs();
    let f = if mag < TWO_POW_53 {
        two_prod_frac(mag as f64, theta)
    } else {
        let hi = (mag >> 26) as f64;
        let lo = (mag & ((1 << 26) - 1)) as f64;
        frac(two_prod_frac(hi, theta * 67_108_864.0) + two_prod_frac(lo, theta))
    };
    if m < 0 {
        frac(-f)
    } else {
        f
    }
}

#[inline]
fn two_prod_frac(a: f64, b: f64) -> f64 {
    let p = a * b;
    let err = a.mul_add(b, -p);
    frac(frac(p) + err)
}

/// `{m·num/den}` computed exactly in integers.
#[inline]
pub fn rational_phase(m: i128, num: i128, den: u64) -> f64 {
    let den = den as i128;
    ((m * num).rem_euclid(den)) as f64 / den as f64
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
    abs_total: f64,
    count: u64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
        self.abs_total += value.abs();
        self.count += 1;
    }

    /// Folds another partial sum into this one (used by ordered reductions).
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
        // the two adds above counted as terms; restore the true totals
        self.count = self.count - 2 + other.count;
        self.abs_total = self.abs_total - other.sum.abs() - other.compensation.abs()
            + other.abs_total;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Residual estimate `(2u + n·u²)·Σ|x_i|` for the compensated result.
    pub fn error_bound(&self) -> f64 {
        let u = f64::EPSILON / 2.0;
        (2.0 * u + self.count as f64 * u * u) * self.abs_total
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Compensated complex accumulator (independent real and imaginary parts).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &ComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn error_bound(&self) -> f64 {
        self.re.error_bound().hypot(self.im.error_bound())
    }

    pub fn count(&self) -> u64 {
        self.re.count()
    }
}

/// Chunk length for ordered parallel reductions. Fixed so that results do
/// not depend on the size of the thread pool.
pub const REDUCTION_CHUNK: u64 = 1 << 14;

/// Splits `[lo, hi)` into fixed-size chunks, evaluates `chunk` on each in
/// parallel and returns the per-chunk results in index order.
pub fn ordered_chunks<T, F>(lo: i64, hi: i64, chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(i64, i64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if hi <= lo {
        return Vec::new();
    }
    let len = (hi - lo) as u64;
    let n_chunks = len.div_ceil(REDUCTION_CHUNK);
    (0..n_chunks)
        .into_par_iter()
        .map(|i| {
            let a = lo + (i * REDUCTION_CHUNK) as i64;
            let b = (a + REDUCTION_CHUNK as i64).min(hi);
            chunk(a, b)
        })
        .collect()
}

/// Pairwise (fixed-shape tree) reduction of complex partial sums.
pub fn tree_reduce(parts: &[ComplexSum]) -> ComplexSum {
    match parts.len() {
        0 => ComplexSum::new(),
        1 => parts[0],
        n => {
            let (l, r) = parts.split_at(n / 2);
            let mut acc = tree_reduce(l);
            acc.merge(&tree_reduce(r));
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_and_distance() {
        assert_eq!(frac(-0.25), 0.75);
        assert_eq!(frac(3.0), 0.0);
        assert!((dist_to_int(0.9) - 0.1).abs() < 1e-15);
        assert!(frac(-1e-18) < 1.0);
    }

    #[test]
    fn mul_phase_matches_exact_dyadic_product() {
        // θ = k/2^40 is exactly representable, so the exact phase is known
        let k: i128 = 418_934_651_227;
        let theta = k as f64 / (1u64 << 40) as f64;
        for m in [1_i64, 7, 1_000_000_007, 123_456_789_012, -99_999_999_977] {
            let exact = rational_phase(m as i128, k, 1 << 40);
            let got = mul_phase(m, theta);
            let d = (got - exact).abs();
            assert!(d.min(1.0 - d) < 1e-15, "m={m}: {got} vs {exact}");
        }
    }

    #[test]
    fn mul_phase_large_multiplier() {
        let theta = 0.5;
        assert_eq!(mul_phase((1 << 60) + 1, theta), 0.5);
        assert_eq!(mul_phase(1 << 60, theta), 0.0);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let s: CompensatedSum = [1e16, 1.0, -1e16, 1.0].into_iter().collect();
        assert_eq!(s.value(), 2.0);
        let mut a: CompensatedSum = [1e16, 1.0].into_iter().collect();
        let b: CompensatedSum = [-1e16, 1.0].into_iter().collect();
        a.merge(&b);
        assert_eq!(a.value(), 2.0);
        assert_eq!(a.count(), 4);
    }
}
