//! Command-line interface: analysis of one algebra/metric pair, the
//! nine-type reproduction table, and the coordinate-realization verifier.

use crate::coordinate_realizations::{
    bind_params, check_structure, enlarged_algebra_check, killing_residual, random_pattern_h,
    realization, sample_chart_point,
};
use crate::exact_algebra::Scalar;
use crate::killing_closure::ClosureMode;
use crate::lie_core::{catalog, parse_value, BianchiType};
use crate::report::{analyze, reproduce, AnalysisRequest, MetricChoice, Source};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::PathBuf;
use std::str::FromStr;

/// Isometry analysis of locally homogeneous Riemannian spaces.
#[derive(Parser)]
#[command(name = "homsym", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Full analysis of one algebra/metric pair.
    Analyze(AnalyzeArgs),
    /// Reproduce the per-type summary table and check it.
    Reproduce(ReproduceArgs),
    /// Verify the coordinate realizations of a catalog type.
    VerifyRealizations(VerifyArgs),
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Catalog type I..IX.
    #[arg(long, value_name = "TYPE", conflicts_with = "constants")]
    pub r#type: Option<String>,
    /// Structure-constants file (JSON).
    #[arg(long, value_name = "FILE")]
    pub constants: Option<PathBuf>,
    /// Group parameter for types VI and VII (rational, e.g. -1 or 1/2).
    #[arg(long, value_name = "Q")]
    pub q: Option<String>,
    /// Explicit metric file (JSON); default is the generic pattern.
    #[arg(long, value_name = "FILE")]
    pub metric: Option<PathBuf>,
    /// Close the symmetry system by exact symbolic row reduction.
    #[arg(long, conflicts_with = "sampled")]
    pub symbolic: bool,
    /// Close the symmetry system at random rational sample points (default).
    #[arg(long)]
    pub sampled: bool,
    /// Write the full frame-curvature report (components, Ricci, scalar)
    /// to this file.
    #[arg(long, value_name = "FILE")]
    pub dump_curvature: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct ReproduceArgs {
    /// Render the table as markdown instead of JSON.
    #[arg(long)]
    pub markdown: bool,
    /// Close symbolically instead of at sample points.
    #[arg(long)]
    pub symbolic: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Catalog type I..IX.
    #[arg(long, value_name = "TYPE")]
    pub r#type: String,
    /// Group parameter for types VI and VII.
    #[arg(long, value_name = "Q")]
    pub q: Option<String>,
    /// Number of chart points per check.
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    /// Swap two coframe legs before checking; the run must then fail.
    #[arg(long)]
    pub inject_fault: bool,
    /// Dump the realization tables (s-expression encoding) to a file.
    #[arg(long, value_name = "FILE")]
    pub dump: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args)]
pub struct CommonArgs {
    /// RNG seed; falls back to HOMSYM_SEED, then a fixed constant.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Residual tolerance for numeric checks.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    pub fn seed(&self) -> u64 {
        self.seed
            .or_else(|| {
                std::env::var("HOMSYM_SEED")
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(crate::DEFAULT_SEED)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => println!("{text}"),
        }
        Ok(())
    }
}

/// Exit status mapping: 0 success, 1 verification failure, 2 input error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) | Error::JacobiViolation => 1,
        _ => 2,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Reproduce(args) => run_reproduce(args),
        Command::VerifyRealizations(args) => run_verify(args),
    }
}

fn parse_q(q: &Option<String>) -> Result<Option<Scalar>> {
    q.as_ref().map(|s| parse_value(s)).transpose()
}

fn run_analyze(args: AnalyzeArgs) -> Result<()> {
    let seed = args.common.seed();
    let source = match (&args.r#type, &args.constants) {
        (Some(ty), None) => Source::Catalog {
            ty: BianchiType::from_str(ty)?,
            q: parse_q(&args.q)?,
        },
        (None, Some(path)) => Source::Constants {
            json: std::fs::read_to_string(path)?,
            label: path.display().to_string(),
        },
        _ => {
            return Err(Error::InvalidParameter(
                "exactly one of --type and --constants is required".into(),
            ))
        }
    };
    let metric = match &args.metric {
        None => MetricChoice::Generic,
        Some(path) => MetricChoice::Explicit(crate::report::parse_metric_file(
            &std::fs::read_to_string(path)?,
        )?),
    };
    let mode = if args.symbolic {
        ClosureMode::Symbolic
    } else {
        ClosureMode::Sampled { samples: 3, seed }
    };
    let req = AnalysisRequest {
        source,
        metric,
        mode,
        seed,
        tolerance: args.common.tolerance,
    };
    let report = analyze(&req)?;
    if let Some(path) = &args.dump_curvature {
        std::fs::write(path, crate::report::curvature_dump(&req)?)?;
    }
    args.common
        .emit(&serde_json::to_string_pretty(&report)?)
}

fn run_reproduce(args: ReproduceArgs) -> Result<()> {
    let seed = args.common.seed();
    let mode = if args.symbolic {
        ClosureMode::Symbolic
    } else {
        ClosureMode::Sampled { samples: 3, seed }
    };
    let report = reproduce(mode, seed)?;
    let text = if args.markdown {
        report.to_markdown()
    } else {
        serde_json::to_string_pretty(&report)?
    };
    args.common.emit(&text)?;
    if !report.all_pass {
        return Err(Error::Verification(
            "reproduction table disagrees with the recorded expectations".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    version: String,
    #[serde(rename = "type")]
    type_label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<String>,
    seed: u64,
    points: usize,
    tolerance: f64,
    max_residuals: ResidualSummary,
    pass: bool,
}

#[derive(Serialize)]
struct ResidualSummary {
    xi_bracket: f64,
    x_bracket: f64,
    mixed_bracket: f64,
    duality: f64,
    xi_drag_sigma: f64,
    killing_homogeneity: f64,
    killing_extra: f64,
    enlarged_algebra: f64,
}

#[derive(Serialize)]
struct RealizationDump {
    #[serde(rename = "type")]
    type_label: String,
    xi: Vec<Vec<String>>,
    invariant_frame: Vec<Vec<String>>,
    coframe: Vec<Vec<String>>,
    extra: Vec<Vec<String>>,
}

fn run_verify(args: VerifyArgs) -> Result<()> {
    let seed = args.common.seed();
    let tol = args.common.tolerance;
    let ty = BianchiType::from_str(&args.r#type)?;
    let q = match parse_q(&args.q)? {
        Some(q) => Some(q),
        None => ty.sample_q(),
    };
    let entry = catalog(ty, q)?;
    let mut real = realization(&entry)?;
    if args.inject_fault {
        real.sigma.swap(0, 1);
    }
    if let Some(path) = &args.dump {
        let dump = RealizationDump {
            type_label: ty.to_string(),
            xi: real
                .xi
                .iter()
                .map(|f| f.components.iter().map(|e| e.to_sexpr()).collect())
                .collect(),
            invariant_frame: real
                .inv
                .iter()
                .map(|f| f.components.iter().map(|e| e.to_sexpr()).collect())
                .collect(),
            coframe: real
                .sigma
                .iter()
                .map(|f| f.components.iter().map(|e| e.to_sexpr()).collect())
                .collect(),
            extra: real
                .zetas
                .iter()
                .map(|f| f.components.iter().map(|e| e.to_sexpr()).collect())
                .collect(),
        };
        std::fs::write(path, serde_json::to_string_pretty(&dump)?)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_pattern_h(&entry, &mut rng);
    let params = bind_params(&entry, &h)?;
    let points: Vec<Vec<f64>> = (0..args.points.max(1))
        .map(|_| sample_chart_point(&real, &mut rng))
        .collect();

    let structure = check_structure(&entry, &real, &points, &params)?;
    let mut killing_homogeneity = 0.0_f64;
    let mut killing_extra = 0.0_f64;
    for p in &points {
        for xi in &real.xi {
            killing_homogeneity =
                killing_homogeneity.max(killing_residual(&entry, &real, xi, p, &params)?);
        }
        for z in &real.zetas {
            killing_extra = killing_extra.max(killing_residual(&entry, &real, z, p, &params)?);
        }
    }
    let enlarged = enlarged_algebra_check(&real, &points, &params)?;

    let summary = ResidualSummary {
        xi_bracket: structure.xi_bracket,
        x_bracket: structure.x_bracket,
        mixed_bracket: structure.mixed_bracket,
        duality: structure.duality,
        xi_drag_sigma: structure.xi_drag_sigma,
        killing_homogeneity,
        killing_extra,
        enlarged_algebra: enlarged,
    };
    let worst = structure
        .max()
        .max(killing_homogeneity)
        .max(killing_extra)
        .max(enlarged);
    let pass = worst < tol;
    let report = VerifyReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        type_label: ty.to_string(),
        q: entry.q().map(|v| v.to_string()),
        seed,
        points: points.len(),
        tolerance: tol,
        max_residuals: summary,
        pass,
    };
    args.common.emit(&serde_json::to_string_pretty(&report)?)?;
    if !pass {
        return Err(Error::Verification(format!(
            "realization residual {worst:.3e} exceeds tolerance {tol:.3e}"
        )));
    }
    Ok(())
}
