//! Command-line surface for the digitseq experiments: argument parsing,
//! dispatch and exit-status policy. Report rendering lives in [`report`].

pub mod report;

use clap::{Args, Parser, Subcommand};
use digitseq_core::experiment::{self, rational_from_decimal};
use digitseq_core::expsum::{rho_estimate, ArithFn};
use digitseq_core::sequence::{GrowthFunction, PSSpec};
use digitseq_core::Error as CoreError;
use report::{EstimateIRow, EstimateJRow, Format, Report};
use std::path::PathBuf;

/// Fourier coefficients above the bound or Parseval sums further than this
/// from 1 count as violations.
pub const PARSEVAL_TOLERANCE: f64 = 1e-10;

/// Slack allowed in the Vaaler majorant and the sign of `κ_H`.
pub const VAALER_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "digitseq", version, about = "Digit statistics on Piatetski-Shapiro sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads; output does not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct Amplitude {
    /// Exponent `c` as a decimal string, read exactly (`1.42` is 71/50).
    #[arg(long)]
    pub c: String,
    /// Arithmetic function: zero, one or thue-morse.
    #[arg(long, default_value = "thue-morse")]
    pub phi: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sine-product integrals and the decay-rate estimates.
    Rho {
        #[arg(long, default_value_t = 20)]
        lambda_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive check of the digit Fourier-coefficient bound and Parseval.
    FourierAudit {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        q: Vec<u32>,
        #[arg(long, default_value_t = 6)]
        lambda_max: u32,
        #[arg(long, default_value_t = 64)]
        alpha_grid: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Thue-Morse signs along ⌊n^c⌋ at geometric checkpoints.
    TmDensity {
        #[arg(long)]
        c: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 12)]
        checkpoints: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Joint residues of two digit sums along ⌊n^c⌋.
    JointResidues {
        #[arg(long)]
        c: String,
        #[arg(long)]
        q1: u32,
        #[arg(long)]
        q2: u32,
        #[arg(long)]
        m1: u32,
        #[arg(long)]
        m2: u32,
        #[arg(long, default_value_t = 0)]
        l1: u32,
        #[arg(long, default_value_t = 0)]
        l2: u32,
        #[arg(long)]
        x: u64,
        /// Count even when the gcd hypotheses fail; failures are listed in
        /// the summary row.
        #[arg(long)]
        unchecked: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Residues of the Zeckendorf digit sum along ⌊n^c⌋.
    ZeckResidues {
        #[arg(long)]
        c: String,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        a: u32,
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Floor mismatches between ⌊n^c⌋ and its tangent Beatty line.
    BeattyMismatch {
        #[arg(long)]
        c: String,
        /// Left end of the first window.
        #[arg(long)]
        scale: u64,
        /// Window length.
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        windows: u32,
        #[arg(long, default_value_t = 16)]
        r_cutoff: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Substitution-rule deviation at each scale A.
    Deviation {
        #[command(flatten)]
        amp: Amplitude,
        #[arg(long, value_delimiter = ',', required = true)]
        scale: Vec<u64>,
        /// Report wall-clock times instead of 0 in runtime_ms.
        #[arg(long)]
        record_timings: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Both sides of the main inequality and their ratio at each scale A.
    AuditThm1 {
        #[command(flatten)]
        amp: Amplitude,
        #[arg(long, value_delimiter = ',', required = true)]
        scale: Vec<u64>,
        /// Window length; defaults to A^{(2c−1)/(3−a)}.
        #[arg(long)]
        z: Option<f64>,
        /// Exponent `a` used for the default window length.
        #[arg(long, default_value = "0.4076")]
        a_exp: String,
        /// θ points per unit of window length.
        #[arg(long, default_value_t = 4)]
        theta_grid: usize,
        #[arg(long, default_value_t = 64)]
        x_samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sampled estimate of J(A, z) for each z.
    EstimateJ {
        #[command(flatten)]
        amp: Amplitude,
        #[arg(long)]
        scale: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<f64>,
        /// θ points per unit of window length.
        #[arg(long, default_value_t = 4)]
        theta_grid: usize,
        #[arg(long, default_value_t = 64)]
        x_samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sampled estimate of I(A, K) for each K.
    EstimateI {
        #[command(flatten)]
        amp: Amplitude,
        #[arg(long)]
        scale: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u64>,
        #[arg(long, default_value_t = 16)]
        alpha_grid: usize,
        #[arg(long, default_value_t = 16)]
        beta_samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exact exponent arithmetic for each c.
    Exponents {
        #[arg(long, default_value = "0.4076")]
        a: String,
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Sawtooth approximation against its Fejér majorant.
    VaalerAudit {
        #[arg(long, value_delimiter = ',', default_value = "1,5,10,50,200")]
        h: Vec<u32>,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exact discrepancy against the constant-1 Erdős–Turán bound.
    EtAudit {
        #[arg(long, default_value_t = 1000)]
        sets: u64,
        #[arg(long, default_value_t = 256)]
        points: usize,
        #[arg(long, default_value_t = 16)]
        h: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Setup(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::AuditViolation(_)) => 1,
            _ => 2,
        }
    }
}

/// A finished run: the report, plus a description of any audit violation
/// it contains.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub violation: Option<String>,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Rho { common, .. }
            | Command::FourierAudit { common, .. }
            | Command::TmDensity { common, .. }
            | Command::JointResidues { common, .. }
            | Command::ZeckResidues { common, .. }
            | Command::BeattyMismatch { common, .. }
            | Command::Deviation { common, .. }
            | Command::AuditThm1 { common, .. }
            | Command::EstimateJ { common, .. }
            | Command::EstimateI { common, .. }
            | Command::Exponents { common, .. }
            | Command::VaalerAudit { common, .. }
            | Command::EtAudit { common, .. } => common,
        }
    }
}

fn power(c: &str) -> Result<(PSSpec, GrowthFunction), CoreError> {
    let spec = PSSpec::from_decimal(c)?;
    if spec.is_integer() {
        return Err(CoreError::InvalidArgument(format!("c = {spec} must not be an integer")));
    }
    Ok((spec, GrowthFunction::power(spec)))
}

/// Runs one command and builds its report.
pub fn run(command: &Command) -> Result<Outcome, CoreError> {
    let ok = |report| Outcome {
        report,
        violation: None,
    };
    Ok(match command {
        Command::Rho { lambda_max, .. } => ok(Report::Rho(rho_estimate(*lambda_max)?)),
        Command::FourierAudit {
            q,
            lambda_max,
            alpha_grid,
            ..
        } => {
            let rows = experiment::fourier_audit(q, *lambda_max, *alpha_grid)?;
            let bad = rows
                .iter()
                .filter(|r| r.violations > 0 || r.parseval_error > PARSEVAL_TOLERANCE)
                .count();
            Outcome {
                report: Report::Fourier(rows),
                violation: (bad > 0).then(|| format!("{bad} Fourier tables violate the bound or Parseval")),
            }
        }
        Command::TmDensity { c, n, checkpoints, .. } => {
            let spec = PSSpec::from_decimal(c)?;
            let r = experiment::tm_density_experiment(&spec, *n, *checkpoints)?;
            if r.outside_proven_range {
                eprintln!("note: c = {} lies outside the proven range (1, 1.42]", r.c);
            }
            ok(Report::TmDensity(r))
        }
        Command::JointResidues {
            c,
            q1,
            q2,
            m1,
            m2,
            l1,
            l2,
            x,
            unchecked,
            ..
        } => {
            let (spec, _) = power(c)?;
            let r = if *unchecked {
                experiment::joint_residue_counts(&spec, *q1, *q2, *m1, *m2, *l1, *l2, *x)?
            } else {
                experiment::joint_residue_experiment(&spec, *q1, *q2, *m1, *m2, *l1, *l2, *x)?
            };
            ok(Report::Residues(r))
        }
        Command::ZeckResidues { c, m, a, x, .. } => {
            let (spec, _) = power(c)?;
            ok(Report::Residues(experiment::zeckendorf_residue_experiment(&spec, *m, *a, *x)?))
        }
        Command::BeattyMismatch {
            c,
            scale,
            k,
            windows,
            r_cutoff,
            ..
        } => {
            let (_, f) = power(c)?;
            let rows = experiment::beatty_mismatch_experiment(&f, *scale, *k, *windows, *r_cutoff)?;
            let bad = rows.iter().filter(|r| r.d < 0.5 && !r.within_bound()).count();
            Outcome {
                report: Report::Mismatch(rows),
                violation: (bad > 0).then(|| format!("{bad} windows with d < 1/2 exceed the lemma bound")),
            }
        }
        Command::Deviation {
            amp,
            scale,
            record_timings,
            ..
        } => {
            let (_, f) = power(&amp.c)?;
            let phi = ArithFn::from_name(&amp.phi)?;
            let rows = scale
                .iter()
                .map(|&a| {
                    let r = experiment::substitution_deviation(&phi, &f, a)?;
                    eprintln!("deviation A={a}: {:.1} ms", r.runtime_ms);
                    Ok(if *record_timings { r } else { r.without_timing() })
                })
                .collect::<Result<_, CoreError>>()?;
            ok(Report::Deviation(rows))
        }
        Command::AuditThm1 {
            amp,
            scale,
            z,
            a_exp,
            theta_grid,
            x_samples,
            ..
        } => {
            let (spec, f) = power(&amp.c)?;
            let phi = ArithFn::from_name(&amp.phi)?;
            let a_exp = rational_from_decimal(a_exp)?;
            let a_exp = *a_exp.numer() as f64 / *a_exp.denom() as f64;
            let rows = scale
                .iter()
                .map(|&a| {
                    let z = z.unwrap_or_else(|| experiment::corollary1_window(a, spec.exponent(), a_exp));
                    experiment::audit_theorem1(&phi, &f, a, z, *theta_grid, *x_samples)
                })
                .collect::<Result<_, _>>()?;
            ok(Report::Theorem1(rows))
        }
        Command::EstimateJ {
            amp,
            scale,
            z,
            theta_grid,
            x_samples,
            ..
        } => {
            let (_, f) = power(&amp.c)?;
            let phi = ArithFn::from_name(&amp.phi)?;
            let rows = z
                .iter()
                .map(|&z| {
                    experiment::estimate_j(&phi, &f, *scale, z, *theta_grid, *x_samples)
                        .map(|estimate| EstimateJRow { z, estimate })
                })
                .collect::<Result<_, _>>()?;
            ok(Report::EstimateJ(rows))
        }
        Command::EstimateI {
            amp,
            scale,
            k,
            alpha_grid,
            beta_samples,
            ..
        } => {
            let (_, f) = power(&amp.c)?;
            let phi = ArithFn::from_name(&amp.phi)?;
            let rows = k
                .iter()
                .map(|&k| {
                    experiment::estimate_i(&phi, &f, *scale, k, *alpha_grid, *beta_samples)
                        .map(|estimate| EstimateIRow { k, estimate })
                })
                .collect::<Result<_, _>>()?;
            ok(Report::EstimateI(rows))
        }
        Command::Exponents { a, c, .. } => {
            let a = rational_from_decimal(a)?;
            let rows = c
                .iter()
                .map(|c| experiment::corollary1_exponent_audit(a, rational_from_decimal(c)?))
                .collect::<Result<_, _>>()?;
            ok(Report::Exponents(rows))
        }
        Command::VaalerAudit { h, grid, .. } => {
            let rows = experiment::vaaler_audit(h, *grid)?;
            let bad = rows
                .iter()
                .filter(|r| r.max_excess > VAALER_TOLERANCE || r.min_kappa < -VAALER_TOLERANCE)
                .count();
            Outcome {
                report: Report::Vaaler(rows),
                violation: (bad > 0).then(|| format!("{bad} degrees violate the Vaaler majorant")),
            }
        }
        Command::EtAudit {
            sets,
            points,
            h,
            seed,
            ..
        } => {
            let rows = experiment::et_audit(*sets, *points, *h, *seed)?;
            let bad = rows.iter().filter(|r| !r.report.holds()).count();
            Outcome {
                report: Report::ErdosTuran(rows),
                violation: (bad > 0).then(|| format!("{bad} point sets exceed the Erdős–Turán bound")),
            }
        }
    })
}

/// Configures the thread pool, runs the command and writes its report.
/// Returns the exit status.
pub fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let common = cli.command.common();
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(CliError::Setup("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Setup(format!("thread pool: {e}")))?;
    }
    let outcome = run(&cli.command)?;
    write_outcome(&outcome, common)
}

/// Writes the report where `common` says and maps a violation to status 1.
pub fn write_outcome(outcome: &Outcome, common: &Common) -> Result<i32, CliError> {
    let bytes = outcome.report.serialize(common.format);
    match &common.output {
        Some(path) => std::fs::write(path, &bytes).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?
        }
    }
    Ok(match &outcome.violation {
        Some(msg) => {
            eprintln!("audit violation: {msg}");
            1
        }
        None => 0,
    })
}
