//! Exact digit arithmetic: base-q digit sums and their truncations, the
//! Thue-Morse sign, Fibonacci/Zeckendorf numeration, and the dyadic and
//! Zeckendorf interval decompositions.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

/// An integer radix `q ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DigitBase(u32);

impl DigitBase {
    pub const BINARY: DigitBase = DigitBase(2);

    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::invalid(format!("digit base must be at least 2, got {q}")));
        }
        Ok(DigitBase(q))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Sum of the base-q digits of `n`.
#[inline]
pub fn digit_sum(n: u64, base: DigitBase) -> u32 {
    let q = base.0 as u64;
    if q == 2 {
        return n.count_ones();
    }
    let mut n = n;
    let mut s = 0u32;
    while n > 0 {
        s += (n % q) as u32;
        n /= q;
    }
    s
}

fn big_digit_sum(n: &BigUint, q: u32) -> u32 {
    n.to_radix_le(q).iter().map(|&d| d as u32).sum()
}

/// Parameters of the truncated digit sum `s_{q,λ}`: the sum of the lowest
/// `λ` base-q digits, extended `q^λ`-periodically to all integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedDigitSpec {
    base: DigitBase,
    lambda: u32,
    /// `q^λ` when it fits in a u64.
    period: Option<u64>,
}

impl TruncatedDigitSpec {
    pub fn new(q: u32, lambda: u32) -> Result<Self> {
        let base = DigitBase::new(q)?;
        let period = (q as u64).checked_pow(lambda);
        Ok(Self {
            base,
            lambda,
            period,
        })
    }

    pub fn base(&self) -> DigitBase {
        self.base
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    /// `q^λ`, or `None` when it exceeds the native range.
    pub fn period(&self) -> Option<u64> {
        self.period
    }

    pub fn period_big(&self) -> BigUint {
        BigUint::from(self.base.0).pow(self.lambda)
    }
}

/// `s_{q,λ}(n) = s_q(n mod q^λ)` with the floored (nonnegative) residue.
pub fn truncated_digit_sum(n: i64, spec: &TruncatedDigitSpec) -> u32 {
    match spec.period {
        Some(p) => {
            let r = (n as i128).rem_euclid(p as i128) as u64;
            digit_sum(r, spec.base)
        }
        // q^λ > u64::MAX: nonnegative n is its own residue
        None if n >= 0 => digit_sum(n as u64, spec.base),
        None => {
            let p = BigInt::from(spec.period_big());
            let r = BigInt::from(n).mod_floor(&p);
            big_digit_sum(r.magnitude(), spec.base.0)
        }
    }
}

/// Thue-Morse sign `(−1)^{s_2(n)}`.
#[inline]
pub fn thue_morse_sign(n: u64) -> i32 {
    1 - 2 * (n.count_ones() & 1) as i32
}

/// Largest index with `F_k < 2^64`.
pub const MAX_FIB_INDEX_U64: usize = 93;

/// `F_0 ..= F_93`, computed once.
pub fn fibonacci_table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0u64, 1];
        while t.len() <= MAX_FIB_INDEX_U64 {
            let k = t.len();
            t.push(t[k - 1] + t[k - 2]);
        }
        t
    })
}

/// Exact Fibonacci number `F_k`, `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(k: u64) -> BigUint {
    if let Some(&f) = fibonacci_table().get(k as usize) {
        return BigUint::from(f);
    }
    // fast doubling: F_{2j} = F_j(2F_{j+1} − F_j), F_{2j+1} = F_j² + F_{j+1}²
    let mut a = BigUint::zero();
    let mut b = BigUint::one();
    for bit in (0..64 - k.leading_zeros()).rev() {
        let two_b = &b << 1usize;
        let c = &a * (&two_b - &a);
        let d = &a * &a + &b * &b;
        if (k >> bit) & 1 == 0 {
            a = c;
            b = d;
        } else {
            b = &c + &d;
            a = d;
        }
    }
    a
}

#[inline]
pub(crate) fn fib_u64(k: u32) -> u64 {
    fibonacci_table()[k as usize]
}

/// Zeckendorf representation: the indices `i ≥ 2` with `ε_i(n) = 1`,
/// strictly increasing and pairwise non-consecutive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ZeckendorfRepr {
    indices: Vec<u32>,
}

impl ZeckendorfRepr {
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// `ε_i(n)`.
    pub fn digit(&self, i: u32) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Lowest index present, if any.
    pub fn lowest(&self) -> Option<u32> {
        self.indices.first().copied()
    }

    pub fn digit_count(&self) -> usize {
        self.indices.len()
    }

    pub fn value(&self) -> u64 {
        self.indices.iter().map(|&i| fib_u64(i)).sum()
    }

    /// Checks the non-consecutive condition; used for externally supplied
    /// index lists.
    pub fn from_indices(indices: Vec<u32>) -> Result<Self> {
        let ok = indices.iter().all(|&i| (2..=MAX_FIB_INDEX_U64 as u32).contains(&i))
            && indices.windows(2).all(|w| w[1] >= w[0] + 2);
        if !ok {
            return Err(Error::invalid(format!(
                "not a Zeckendorf index set: {indices:?}"
            )));
        }
        Ok(Self { indices })
    }
}

/// Greedy Zeckendorf expansion (largest `F_k ≤` remainder first).
pub fn zeckendorf(n: u64) -> ZeckendorfRepr {
    let fib = fibonacci_table();
    let mut rest = n;
    let mut indices = Vec::new();
    let mut k = MAX_FIB_INDEX_U64;
    while rest > 0 {
        while fib[k] > rest {
            k -= 1;
        }
        indices.push(k as u32);
        rest -= fib[k];
        k -= 1;
    }
    indices.reverse();
    ZeckendorfRepr { indices }
}

/// `s_Z(n)`, the number of summands in the Zeckendorf expansion.
#[inline]
pub fn zeckendorf_digit_sum(n: u64) -> u32 {
    let fib = fibonacci_table();
    let mut rest = n;
    let mut count = 0;
    let mut k = MAX_FIB_INDEX_U64;
    while rest > 0 {
        while fib[k] > rest {
            k -= 1;
        }
        rest -= fib[k];
        count += 1;
        k -= 1;
    }
    count
}

/// One block `[offset, offset + len(scale))` of an interval decomposition;
/// `len` is `2^scale` for dyadic and `F_scale` for Zeckendorf decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecompositionSegment {
    pub offset: u64,
    pub scale: u32,
}

impl DecompositionSegment {
    pub fn dyadic_len(&self) -> u64 {
        1u64 << self.scale
    }

    pub fn fibonacci_len(&self) -> u64 {
        fib_u64(self.scale)
    }
}

/// Splits `[a, b)` into aligned dyadic blocks `[ℓ2^j, (ℓ+1)2^j)` with at most
/// two blocks per length. The blocks rise from `a` to the largest aligned
/// power of two inside the interval and then descend to `b`.
pub fn dyadic_decompose(a: u64, b: u64) -> Result<Vec<DecompositionSegment>> {
    if a > b {
        return Err(Error::invalid(format!("empty-reversed interval [{a}, {b})")));
    }
    if a == b {
        return Ok(Vec::new());
    }
    // highest bit where a and b differ; b has it set
    let top = 63 - (a ^ b).leading_zeros();
    let common = a & !((1u64 << top).wrapping_mul(2).wrapping_sub(1));
    let common = if top == 63 { 0 } else { common };
    let lo = a - common;
    let hi = b - common;
    let pivot = 1u64 << top;

    let mut out = Vec::new();
    if lo == 0 {
        out.push(DecompositionSegment {
            offset: common,
            scale: top,
        });
    } else {
        let mut cur = lo;
        while cur < pivot {
            let j = cur.trailing_zeros();
            out.push(DecompositionSegment {
                offset: common + cur,
                scale: j,
            });
            cur += 1 << j;
        }
    }
    let mut cur = pivot;
    for j in (0..top).rev() {
        if (hi >> j) & 1 == 1 {
            out.push(DecompositionSegment {
                offset: common + cur,
                scale: j,
            });
            cur += 1 << j;
        }
    }
    Ok(out)
}

/// Splits `[a, b)` into blocks `[A, A + F_j)` with `ε_i(A) = 0` for
/// `2 ≤ i ≤ j`, at most two blocks per `j`. On each block
/// `s_Z(n) = s_Z(A) + s_Z(n − A)`.
///
/// Construction: strip the Zeckendorf digits common to `a` and `b`, rise
/// from `a` to `F_K` by repeatedly adding `F_{k−1}` where `k` is the lowest
/// index of the current point, then descend through the digits of `b`.
/// Blocks of length one with `ε_2(A) = 1` get scale 1.
pub fn zeckendorf_decompose(a: u64, b: u64) -> Result<Vec<DecompositionSegment>> {
    if a > b {
        return Err(Error::invalid(format!("empty-reversed interval [{a}, {b})")));
    }
    if a == b {
        return Ok(Vec::new());
    }
    let za = zeckendorf(a);
    let zb = zeckendorf(b);
    // K = max{i : ε_i(a) ≠ ε_i(b)}
    let top = (2..=MAX_FIB_INDEX_U64 as u32)
        .rev()
        .find(|&i| za.digit(i) != zb.digit(i))
        .expect("a < b differ in some Zeckendorf digit");
    let common: u64 = zb
        .indices()
        .iter()
        .filter(|&&i| i > top)
        .map(|&i| fib_u64(i))
        .sum();
    let lo = a - common;
    let hi = b - common;
    let pivot = fib_u64(top);

    let mut out = Vec::new();
    if lo == 0 {
        out.push(DecompositionSegment {
            offset: common,
            scale: top,
        });
    } else {
        let mut cur = lo;
        while cur < pivot {
            let k = zeckendorf(cur).lowest().expect("cur > 0");
            let scale = k - 1;
            out.push(DecompositionSegment {
                offset: common + cur,
                scale,
            });
            cur += fib_u64(scale);
        }
        debug_assert_eq!(cur, pivot);
    }
    let zhi = zeckendorf(hi);
    let mut cur = pivot;
    for &j in zhi.indices().iter().rev().filter(|&&j| j < top) {
        out.push(DecompositionSegment {
            offset: common + cur,
            scale: j,
        });
        cur += fib_u64(j);
    }
    debug_assert_eq!(common + cur, b);
    Ok(out)
}

/// Outcome of [`count_carry_mismatches`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarryMismatchCount {
    pub count: u64,
    /// `|I|·|r|/q^λ + |r|`.
    pub bound: f64,
}

/// Counts `n ∈ [x, y)` where the shift by `r` changes the full digit sum
/// differently from the truncated one, i.e. where a carry reaches beyond
/// the lowest `λ` digits.
pub fn count_carry_mismatches(
    x: i64,
    y: i64,
    r: i64,
    spec: &TruncatedDigitSpec,
) -> Result<CarryMismatchCount> {
    if x > y {
        return Err(Error::invalid(format!("reversed interval [{x}, {y})")));
    }
    if x < 0 || x.checked_add(r).map_or(true, |v| v < 0) {
        return Err(Error::invalid(format!(
            "interval [{x}, {y}) shifted by {r} leaves the nonnegative integers"
        )));
    }
    let base = spec.base();
    let mut count = 0u64;
    for n in x..y {
        let m = n + r;
        let full = digit_sum(m as u64, base) as i64 - digit_sum(n as u64, base) as i64;
        let trunc =
            truncated_digit_sum(m, spec) as i64 - truncated_digit_sum(n, spec) as i64;
        if full != trunc {
            count += 1;
        }
    }
    let len = (y - x) as f64;
    let period = spec
        .period()
        .map(|p| p as f64)
        .unwrap_or_else(|| spec.period_big().to_f64().unwrap_or(f64::INFINITY));
    let bound = len * r.unsigned_abs() as f64 / period + r.unsigned_abs() as f64;
    debug_assert!(count as f64 <= bound + 1e-9);
    Ok(CarryMismatchCount { count, bound })
}
