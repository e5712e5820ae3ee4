//! Tabular and JSON rendering of experiment reports.

use digitseq_core::expsum::RhoReport;
use digitseq_core::experiment::{
    DeviationReport, EtAuditRow, ExponentAudit, FourierAuditRow, IntegralEstimate,
    ResidueCountReport, Theorem1Audit, TmDensityReport, VaalerAuditRow,
};
use digitseq_core::sequence::MismatchReport;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Decimal rendering with 15 significant digits, trailing zeros dropped;
/// scientific notation outside `1e-5 ≤ |x| < 1e15`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{x:.14e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let fixed = format!("{:.*}", (14 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mant))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

/// Every report the command line can emit. JSON output is the wrapped
/// record itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Rho(RhoReport),
    Fourier(Vec<FourierAuditRow>),
    TmDensity(TmDensityReport),
    Residues(ResidueCountReport),
    Mismatch(Vec<MismatchReport>),
    Deviation(Vec<DeviationReport>),
    Theorem1(Vec<Theorem1Audit>),
    EstimateJ(Vec<EstimateJRow>),
    EstimateI(Vec<EstimateIRow>),
    Exponents(Vec<ExponentAudit>),
    Vaaler(Vec<VaalerAuditRow>),
    ErdosTuran(Vec<EtAuditRow>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateJRow {
    pub z: f64,
    #[serde(flatten)]
    pub estimate: IntegralEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateIRow {
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(flatten)]
    pub estimate: IntegralEstimate,
}

fn residue_string(r: &[u32]) -> String {
    r.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

impl Report {
    pub fn table(&self) -> Table {
        let (columns, rows): (Vec<&'static str>, Vec<Vec<Cell>>) = match self {
            Report::Rho(r) => (
                vec!["lambda", "integral", "ratio", "geo_mean", "quadrature_err"],
                r.rows
                    .iter()
                    .map(|x| {
                        vec![
                            x.lambda.into(),
                            x.integral.into(),
                            x.ratio.into(),
                            x.geo_mean.into(),
                            x.quadrature_err.into(),
                        ]
                    })
                    .collect(),
            ),
            Report::Fourier(rows) => (
                vec!["q", "lambda", "alpha", "max_abs", "bound", "violations", "parseval_error"],
                rows.iter()
                    .map(|x| {
                        vec![
                            x.q.into(),
                            x.lambda.into(),
                            x.alpha.into(),
                            x.max_abs.into(),
                            x.bound.into(),
                            x.violations.into(),
                            x.parseval_error.into(),
                        ]
                    })
                    .collect(),
            ),
            Report::TmDensity(r) => (
                vec!["checkpoint", "partial_sum", "abs_mean", "plus_density"],
                r.rows
                    .iter()
                    .map(|x| {
                        vec![
                            x.checkpoint.into(),
                            x.partial_sum.into(),
                            x.abs_mean.into(),
                            x.plus_density.into(),
                        ]
                    })
                    .collect(),
            ),
            Report::Residues(r) => {
                let mut rows: Vec<Vec<Cell>> = r
                    .cells
                    .iter()
                    .map(|cell| {
                        let dev = (cell.count as f64 - r.expected).abs();
                        vec![
                            "cell".into(),
                            residue_string(&cell.residues).into(),
                            cell.count.into(),
                            r.expected.into(),
                            dev.into(),
                            (if r.x == 0 { 0.0 } else { dev / r.x as f64 }).into(),
                            Cell::Empty,
                        ]
                    })
                    .collect();
                rows.push(vec![
                    "summary".into(),
                    residue_string(&r.target).into(),
                    r.total().into(),
                    (r.x as f64).into(),
                    r.max_abs_deviation.into(),
                    r.normalized_deviation.into(),
                    r.failed_hypotheses.join("; ").into(),
                ]);
                (
                    vec![
                        "row",
                        "residues",
                        "count",
                        "expected",
                        "abs_deviation",
                        "normalized_deviation",
                        "failed_hypotheses",
                    ],
                    rows,
                )
            }
            Report::Mismatch(rows) => (
                vec![
                    "a",
                    "b",
                    "alpha",
                    "mismatch_count",
                    "lemma_bound",
                    "second_derivative_bound",
                    "d",
                    "r_cutoff",
                ],
                rows.iter()
                    .map(|x| {
                        vec![
                            x.a.into(),
                            x.b.into(),
                            x.alpha.into(),
                            x.mismatch_count.into(),
                            x.lemma_bound.into(),
                            x.second_derivative_bound.into(),
                            x.d.into(),
                            x.r_cutoff.into(),
                        ]
                    })
                    .collect(),
            ),
            Report::Deviation(rows) => (
                vec!["A", "lhs_per_A", "sum1_re", "sum1_im", "sum2_re", "sum2_im", "runtime_ms"],
                rows.iter()
                    .map(|x| {
                        vec![
                            x.a.into(),
                            x.lhs_per_a.into(),
                            x.sum1.re.into(),
                            x.sum1.im.into(),
                            x.sum2.re.into(),
                            x.sum2.im.into(),
                            x.runtime_ms.into(),
                        ]
                    })
                    .collect(),
            ),
            Report::Theorem1(rows) => (
                vec![
                    "A",
                    "z",
                    "lhs_per_A",
                    "j_estimate",
                    "j_refinement_delta",
                    "curvature_term",
                    "expsum_term",
                    "bracket",
                    "ratio",
                ],
                rows.iter()
                    .map(|x| {
                        vec![
                            x.a.into(),
                            x.z.into(),
                            x.lhs_per_a.into(),
                            x.j_estimate.into(),
                            x.j_refinement_delta.into(),
                            x.curvature_term.into(),
                            x.expsum_term.into(),
                            x.bracket.into(),
                            x.ratio.into(),
                        ]
                    })
                    .collect(),
            ),
            Report::EstimateJ(rows) => (
                vec!["z", "value", "theta_grid_size", "sup_sample_count", "refinement_delta"],
                rows.iter()
                    .map(|x| {
                        vec![
                            x.z.into(),
                            x.estimate.value.into(),
                            x.estimate.outer_grid_size.into(),
                            x.estimate.sup_sample_count.into(),
                            x.estimate.refinement_delta.into(),
                        ]
                    })
                    .collect(),
            ),
            Report::EstimateI(rows) => (
                vec!["K", "value", "alpha_grid_size", "sup_sample_count", "refinement_delta"],
                rows.iter()
                    .map(|x| {
                        vec![
                            x.k.into(),
                            x.estimate.value.into(),
                            x.estimate.outer_grid_size.into(),
                            x.estimate.sup_sample_count.into(),
                            x.estimate.refinement_delta.into(),
                        ]
                    })
                    .collect(),
            ),
            Report::Exponents(rows) => (
                vec!["a", "c", "eta_max_exact", "eta_max", "threshold", "validity"],
                rows.iter()
                    .map(|x| {
                        vec![
                            x.a.clone().into(),
                            x.c.clone().into(),
                            x.eta_max_exact.clone().into(),
                            x.eta_max.into(),
                            x.threshold.into(),
                            x.validity.into(),
                        ]
                    })
                    .collect(),
            ),
            Report::Vaaler(rows) => (
                vec!["h", "grid", "max_excess", "min_kappa"],
                rows.iter()
                    .map(|x| vec![x.h.into(), x.grid.into(), x.max_excess.into(), x.min_kappa.into()])
                    .collect(),
            ),
            Report::ErdosTuran(rows) => (
                vec!["set", "kind", "points", "h_cutoff", "discrepancy", "bound"],
                rows.iter()
                    .map(|x| {
                        let kind = serde_json::to_value(x.kind)
                            .ok()
                            .and_then(|v| v.as_str().map(str::to_string))
                            .unwrap_or_default();
                        vec![
                            x.set.into(),
                            kind.into(),
                            x.report.points.into(),
                            x.report.h_cutoff.into(),
                            x.report.discrepancy.into(),
                            x.report.bound.into(),
                        ]
                    })
                    .collect(),
            ),
        };
        Table { columns, rows }
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("reports serialize");
        out.push(b'\n');
        out
    }

    pub fn serialize(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.table().to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn write_to(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        out.write_all(&self.serialize(format))
    }
}
