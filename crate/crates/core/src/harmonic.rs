//! Sawtooth approximation, discrepancy bounds and small integral
//! inequalities, each exposed so both sides can be inspected.

use crate::error::{Error, Result};
use crate::numeric::{dist_to_int, e, frac, ComplexSum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// `ψ(x) = {x} − 1/2`.
#[inline]
pub fn sawtooth(x: f64) -> f64 {
    frac(x) - 0.5
}

/// Tolerance of the defining inequality `|ψ − ψ_H| ≤ κ_H`.
pub const VAALER_TOLERANCE: f64 = 1e-12;

/// Grid size used to validate a freshly built approximation.
pub const VAALER_GRID: usize = 10_000;

/// Degree-`H` trigonometric approximation of the sawtooth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VaalerApprox {
    degree: u32,
    /// `a_H(h)` for `h = 1..=H`; `a_H(−h) = a_H(h)`.
    coefficients: Vec<f64>,
}

impl VaalerApprox {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `a_H(h)` for `1 ≤ |h| ≤ H`.
    pub fn coefficient(&self, h: i64) -> f64 {
        let k = h.unsigned_abs() as usize;
        assert!(k >= 1 && k <= self.degree as usize, "h = {h} outside 1 ≤ |h| ≤ H");
        self.coefficients[k - 1]
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Largest `|ψ(t) − ψ_H(t)| − κ_H(t)` over `t = i/grid`.
    pub fn max_excess(&self, grid: usize) -> f64 {
        (0..grid)
            .map(|i| {
                let t = i as f64 / grid as f64;
                (sawtooth(t) - vaaler_psi_h(self, t)).abs() - fejer_majorant(self.degree, t)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Builds the Vaaler coefficients `a_H(h) = πt(1−t)cot(πt) + t`,
/// `t = |h|/(H+1)`, and refuses to return unless the defining inequality
/// holds on a 10^4-point grid.
pub fn vaaler_build(degree: u32) -> Result<VaalerApprox> {
    if degree == 0 {
        return Err(Error::invalid("Vaaler degree H must be at least 1"));
    }
    let n = degree as f64 + 1.0;
    let coefficients = (1..=degree)
        .map(|h| {
            let t = h as f64 / n;
            let a = PI * t * (1.0 - t) / (PI * t).tan() + t;
            a.clamp(0.0, 1.0)
        })
        .collect();
    let approx = VaalerApprox {
        degree,
        coefficients,
    };
    let excess = approx.max_excess(VAALER_GRID);
    if excess > VAALER_TOLERANCE {
        return Err(Error::AuditViolation(format!(
            "Vaaler approximation of degree {degree} exceeds its majorant by {excess:e}"
        )));
    }
    Ok(approx)
}

/// `ψ_H(t) = −(1/π) Σ_{h=1}^{H} (a_H(h)/h) sin(2πht)`.
pub fn vaaler_psi_h(approx: &VaalerApprox, t: f64) -> f64 {
    let s: f64 = approx
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let h = (i + 1) as f64;
            a / h * (TAU * frac(h * frac(t))).sin()
        })
        .sum();
    -s / PI
}

/// `κ_H(t) = (1/(2H+2)) Σ_{|h|≤H} (1 − |h|/(H+1)) e(ht)`, evaluated as a
/// cosine series.
pub fn fejer_majorant(degree: u32, t: f64) -> f64 {
    let n = degree as f64 + 1.0;
    let t = frac(t);
    let s: f64 = (1..=degree)
        .map(|h| {
            let hf = h as f64;
            (1.0 - hf / n) * (TAU * frac(hf * t)).cos()
        })
        .sum();
    (1.0 + 2.0 * s) / (2.0 * n)
}

/// `|Σ_{0≤h<H+1} e(ht)|² / (2(H+1)²)`, the same kernel in squared form.
pub fn fejer_majorant_squared_form(degree: u32, t: f64) -> f64 {
    let n = degree as f64 + 1.0;
    let mut s = ComplexSum::new();
    for h in 0..=degree {
        s.add(e(h as f64 * frac(t)));
    }
    s.value().norm_sqr() / (2.0 * n * n)
}

/// Exact discrepancy `sup_{0≤r≤s<1} |#{n : r ≤ x_n ≤ s}/N − (s − r)|` of a
/// finite point set in `[0, 1)`, from the sorted points.
pub fn exact_discrepancy(points: &[f64]) -> Result<f64> {
    check_points(points)?;
    let mut xs = points.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    // excess: closed [x_i, x_j] holds ≥ j − i + 1 points
    let mut excess = f64::NEG_INFINITY;
    let mut min_prefix = f64::INFINITY;
    for (k, &x) in xs.iter().enumerate() {
        let a = (k + 1) as f64 / n - x;
        min_prefix = min_prefix.min((k as f64) / n - x);
        excess = excess.max(a - min_prefix);
    }
    // deficit: open gaps (y_i, y_j), y_0 = 0, y_{N+1} = 1
    let mut deficit = f64::NEG_INFINITY;
    let mut min_b = 0.0; // y_0 − 0/N
    for (k, &x) in xs.iter().chain(std::iter::once(&1.0)).enumerate() {
        let j = (k + 1) as f64;
        deficit = deficit.max(x - (j - 1.0) / n - min_b);
        if k < xs.len() {
            min_b = f64::min(min_b, x - j / n);
        }
    }
    Ok(excess.max(deficit))
}

fn check_points(points: &[f64]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::invalid("discrepancy of an empty point set"));
    }
    if let Some(p) = points.iter().find(|p| !(0.0..1.0).contains(*p)) {
        return Err(Error::invalid(format!("point {p} outside [0, 1)")));
    }
    Ok(())
}

/// Both sides of the Erdős–Turán inequality with constant 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErdosTuranReport {
    pub points: u64,
    pub h_cutoff: u32,
    pub discrepancy: f64,
    /// `1/(H+1) + Σ_{h≤H} h⁻¹ |N⁻¹ Σ_n e(h x_n)|`.
    pub bound: f64,
}

impl ErdosTuranReport {
    pub fn holds(&self) -> bool {
        self.discrepancy <= self.bound
    }
}

pub fn erdos_turan_bound(points: &[f64], h_cutoff: u32) -> Result<f64> {
    check_points(points)?;
    if h_cutoff == 0 {
        return Err(Error::invalid("Erdős–Turán cutoff H must be at least 1"));
    }
    let n = points.len() as f64;
    let mut bound = 1.0 / (h_cutoff as f64 + 1.0);
    for h in 1..=h_cutoff {
        let mut s = ComplexSum::new();
        for &x in points {
            s.add(e(frac(h as f64 * x)));
        }
        bound += s.value().norm() / n / h as f64;
    }
    Ok(bound)
}

pub fn erdos_turan_audit(points: &[f64], h_cutoff: u32) -> Result<ErdosTuranReport> {
    Ok(ErdosTuranReport {
        points: points.len() as u64,
        h_cutoff,
        discrepancy: exact_discrepancy(points)?,
        bound: erdos_turan_bound(points, h_cutoff)?,
    })
}

/// Antiderivative of `min{B, ‖x‖⁻¹}` from 0.
fn min_kernel_primitive(x: f64, big_b: f64) -> f64 {
    let half = 1.0 + (big_b / 2.0).ln();
    let on_half = |u: f64| {
        if u <= 1.0 / big_b {
            big_b * u
        } else {
            1.0 + (u * big_b).ln()
        }
    };
    let f = frac(x);
    let partial = if f <= 0.5 {
        on_half(f)
    } else {
        2.0 * half - on_half(1.0 - f)
    };
    x.floor() * 2.0 * half + partial
}

/// `∫_a^b min{B, ‖x‖⁻¹} dx` in closed form and the bound `2(b−a+1)(1+log B)`.
pub fn min_kernel_integral_check(a: f64, b: f64, big_b: f64) -> Result<(f64, f64)> {
    if !(a <= b) || !(big_b >= 2.0) {
        return Err(Error::invalid(format!(
            "kernel integral needs a ≤ b and B ≥ 2, got a={a}, b={b}, B={big_b}"
        )));
    }
    let integral = min_kernel_primitive(b, big_b) - min_kernel_primitive(a, big_b);
    let bound = 2.0 * (b - a + 1.0) * (1.0 + big_b.ln());
    Ok((integral, bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeExtension {
    /// `|Σ_{x<n≤y} a_n|`.
    pub lhs: f64,
    /// `∫₀¹ min{y−x+1, ‖ξ‖⁻¹} |Σ_{x<n≤z} a_n e(nξ)| dξ`.
    pub rhs: f64,
    pub quadrature_error: f64,
}

/// Both sides of the range-extension inequality for `a_n` given on the
/// integers of `(x, z]` (`a[0]` is the coefficient of `⌊x⌋ + 1`).
pub fn range_extension_check(
    a: &[Complex64],
    x: f64,
    y: f64,
    z: f64,
    panels: usize,
) -> Result<RangeExtension> {
    if !(x <= y && y <= z) {
        return Err(Error::invalid(format!("range extension needs x ≤ y ≤ z, got {x}, {y}, {z}")));
    }
    let first = x.floor() as i64 + 1;
    let expected = (z.floor() as i64 + 1 - first).max(0) as usize;
    if a.len() != expected {
        return Err(Error::invalid(format!(
            "sequence has {} terms, window (x, z] holds {expected}",
            a.len()
        )));
    }
    let head = (y.floor() as i64 + 1 - first).max(0) as usize;
    let mut partial = ComplexSum::new();
    for v in &a[..head] {
        partial.add(*v);
    }
    let lhs = partial.value().norm();

    let cap = y - x + 1.0;
    let poly = |xi: f64| -> f64 {
        let step = e(xi);
        let mut w = Complex64::new(1.0, 0.0);
        let mut s = Complex64::new(0.0, 0.0);
        for c in a {
            s += c * w;
            w *= step;
        }
        let d = dist_to_int(xi);
        let k = if d * cap <= 1.0 { cap } else { 1.0 / d };
        k * s.norm()
    };
    // split at the kernel's corners so each piece is smooth up to |·|
    let corner = (1.0 / cap).min(0.5);
    let cuts = [0.0, corner, 0.5, 1.0 - corner, 1.0];
    let panels = panels.max(1);
    let mut rhs = 0.0;
    let mut err = 0.0;
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            let (v, e_) = crate::quadrature::composite(w[0], w[1], panels, poly);
            rhs += v;
            err += e_;
        }
    }
    Ok(RangeExtension {
        lhs,
        rhs,
        quadrature_error: err,
    })
}
