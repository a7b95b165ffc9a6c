//! Command-line front end: IFS files, the built-in corpus, JSON reports and
//! SVG renderings.

pub mod corpus;
pub mod ifs_file;
pub mod render;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use selfsim_core::config::DEFAULT_PIECE_BUDGET;
use selfsim_core::{Attractor64, Config64, Error, Ifs64, Outcome};

use crate::ifs_file::{parse_ifs_file, IfsError, IfsFile};
use crate::report::{run_analysis, Analysis, Check, DimSelection, Report};

pub const BUDGET_ENV: &str = "SELFSIM_BUDGET";

pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILS: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const INPUT: i32 = 3;
    pub const CONSISTENCY: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "selfsim", version, about = "Dimensions and separation properties of self-similar sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyse a system and write a JSON report.
    Analyze(AnalyzeArgs),
    /// List the built-in systems, or print one as an IFS file.
    Corpus { name: Option<String> },
    /// Print the JSON schema of analysis reports.
    Schema,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// IFS file (JSON).
    #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
    pub ifs: Option<PathBuf>,
    /// Built-in system, e.g. `gasket` or `mattila_proj:0.7`.
    #[arg(long)]
    pub corpus: Option<String>,
    /// Levels examined by the level-wise checks; also the rendered level.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Subdivision depth of oracle queries.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Distance resolution.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Maximum number of pieces materialised (default: $SELFSIM_BUDGET or 200000).
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, value_enum)]
    pub check: Option<Check>,
    #[arg(long, value_enum)]
    pub dim: Option<DimSelection>,
    /// Replace a planar system of homotheties by its projection onto the
    /// line at this angle (radians).
    #[arg(long, allow_negative_numbers = true)]
    pub project: Option<f64>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write an SVG of the pre-fractal levels here.
    #[arg(long)]
    pub render: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ifs(#[from] IfsError),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Analysis(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Analysis(Error::ConsistencyViolation(_)) => exit::CONSISTENCY,
            _ => exit::INPUT,
        }
    }
}

pub struct Execution {
    pub report: Report,
    pub exit_code: i32,
}

/// The system named by `--ifs`/`--corpus`, after `--project`.
pub fn load_system(args: &AnalyzeArgs) -> Result<(String, Ifs64), CliError> {
    let (source, ifs) = match (&args.ifs, &args.corpus) {
        (Some(path), _) => (path.display().to_string(), parse_ifs_file(path)?),
        (None, Some(name)) => {
            let e = corpus::entry(name).ok_or_else(|| {
                CliError::Input(format!("unknown corpus entry {name:?}; known: {}", corpus::NAMES.join(", ")))
            })?;
            (format!("corpus:{name}"), e.ifs)
        }
        (None, None) => return Err(CliError::Input("one of --ifs or --corpus is required".into())),
    };
    match args.project {
        Some(theta) => {
            let p = corpus::project(&ifs, theta).map_err(CliError::Input)?;
            Ok((format!("{source} projected at {theta}"), p))
        }
        None => Ok((source, ifs)),
    }
}

pub fn config_from(args: &AnalyzeArgs, env_budget: Option<&str>) -> Result<Config64, CliError> {
    let mut config = Config64::default();
    if let Some(n) = args.levels {
        if n == 0 {
            return Err(CliError::Input("--levels must be at least 1".into()));
        }
        config.levels = n;
    }
    config.depth = args.depth;
    if let Some(eps) = args.eps {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(CliError::Input(format!("--eps must be positive, got {eps}")));
        }
        config.eps = Some(eps);
    }
    config.budget = match (args.budget, env_budget) {
        (Some(b), _) => b,
        (None, Some(text)) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{BUDGET_ENV} must be a positive integer, got {text:?}")))?,
        (None, None) => DEFAULT_PIECE_BUDGET,
    };
    if config.budget == 0 {
        return Err(CliError::Input("the piece budget must be positive".into()));
    }
    Ok(config)
}

pub fn exit_code_for(outcome: Option<Outcome>) -> i32 {
    match outcome {
        Some(Outcome::Fails) => exit::FAILS,
        Some(Outcome::Inconclusive) => exit::INCONCLUSIVE,
        _ => exit::OK,
    }
}

/// Runs `analyze` without touching standard output.
pub fn analyze(args: &AnalyzeArgs, env_budget: Option<&str>) -> Result<Execution, CliError> {
    let (source, ifs) = load_system(args)?;
    let config = config_from(args, env_budget)?;
    if let Some(path) = &args.render {
        let att = Attractor64::new(ifs.clone())?;
        render::write_render(&att, config.levels, config.budget, path)?;
    }
    let report = run_analysis(&Analysis { source, ifs, config, check: args.check, dim: args.dim })?;
    if let Some(path) = &args.report {
        std::fs::write(path, report.to_json())
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let exit_code = exit_code_for(report.request.outcome);
    Ok(Execution { report, exit_code })
}

/// A few lines for the terminal when the report goes to a file.
pub fn summary(report: &Report) -> String {
    let d = &report.dimensions;
    let mut lines = vec![format!("{}: alpha = {}", report.input.label, d.alpha)];
    if let Some(dim4) = &d.dim4 {
        lines.push(format!("dim4 in [{}, {}]", dim4.lower, dim4.upper));
    }
    if let Some(b) = &d.box_estimate {
        lines.push(format!("box-counting slope {:.4}", b.slope));
    }
    if let Some(s) = &report.separation {
        let o = |v: &selfsim_core::Verdict64| format!("{:?}", v.outcome).to_lowercase();
        lines.push(format!("osc {}, sosc {}, wosc {}", o(&s.osc), o(&s.sosc), o(&s.wosc)));
    }
    if let (Some(c), Some(o)) = (report.request.check, report.request.outcome) {
        lines.push(format!("{c:?}: {o:?}").to_lowercase());
    }
    lines.join("\n")
}

pub fn corpus_listing(name: Option<&str>) -> Result<String, CliError> {
    match name {
        None => Ok(corpus::NAMES.join("\n")),
        Some(n) => corpus::entry(n)
            .map(|e| IfsFile::from_ifs(&e.ifs).to_json())
            .ok_or_else(|| CliError::Input(format!("unknown corpus entry {n:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> AnalyzeArgs {
        let mut argv = vec!["selfsim", "analyze"];
        argv.extend(extra);
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Analyze(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn budget_precedence() {
        assert_eq!(config_from(&args(&["--corpus", "cantor"]), None).unwrap().budget, DEFAULT_PIECE_BUDGET);
        assert_eq!(config_from(&args(&["--corpus", "cantor"]), Some("500")).unwrap().budget, 500);
        assert_eq!(config_from(&args(&["--corpus", "cantor", "--budget", "7"]), Some("500")).unwrap().budget, 7);
        assert!(config_from(&args(&["--corpus", "cantor"]), Some("lots")).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(None), 0);
        assert_eq!(exit_code_for(Some(Outcome::Holds)), 0);
        assert_eq!(exit_code_for(Some(Outcome::Fails)), 1);
        assert_eq!(exit_code_for(Some(Outcome::Inconclusive)), 2);
        assert_eq!(CliError::Input("x".into()).exit_code(), 3);
        assert_eq!(CliError::Analysis(Error::ConsistencyViolation("p".into())).exit_code(), 4);
    }

    #[test]
    fn projection_flag() {
        let (_, a) = load_system(&args(&["--corpus", "mattila", "--project", "0.7"])).unwrap();
        let (_, b) = load_system(&args(&["--corpus", "mattila_proj:0.7"])).unwrap();
        assert_eq!(a.maps(), b.maps());
        assert!(load_system(&args(&["--corpus", "cantor", "--project", "0.7"])).is_err());
    }

    #[test]
    fn flags_are_mutually_exclusive() {
        assert!(Cli::try_parse_from(["selfsim", "analyze"]).is_err());
        assert!(Cli::try_parse_from(["selfsim", "analyze", "--ifs", "a.json", "--corpus", "cantor"]).is_err());
        assert!(Cli::try_parse_from(["selfsim", "analyze", "--corpus", "cantor", "--check", "nope"]).is_err());
    }
}
