mod bank;
mod config;
mod ops;
mod report;

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minl2::polydisc::Normalization;

use config::{Overrides, ScenarioConfig};
use ops::{ExtKind, MinKind, Op, RelKind, RunError};
use report::Row;

/// Minimal weighted L² integrals on the disk, annulus and polydiscs.
#[derive(Parser, Debug)]
#[command(name = "minl2", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug)]
struct Flags {
    /// Scenario config (TOML); same as the positional argument.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for `<id>.csv` and `<id>.jsonl`; CSV goes to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Multiply every quadrature resolution by this factor.
    #[arg(long, global = true)]
    resolution: Option<f64>,
    /// Cap the polynomial degree schedule.
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Relative stopping tolerance of the degree schedule.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Norm convention of the polydisc Hardy space.
    #[arg(long, global = true, value_enum)]
    normalization: Option<NormArg>,
    /// Low-resolution run with widened expectation tolerances.
    #[arg(long, global = true)]
    smoke: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    #[value(name = "paper_p2")]
    PaperP2,
    #[value(name = "p1")]
    P1,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Green function values, capacities and harmonic measure.
    Green {
        #[arg(value_name = "CONFIG")]
        path: Option<PathBuf>,
    },
    /// Minimal integral of one space.
    Minimize {
        #[arg(value_enum)]
        kind: MinKind,
        #[arg(value_name = "CONFIG")]
        path: Option<PathBuf>,
    },
    /// Sublevel curve G(t) and r(t).
    Gcurve {
        #[arg(value_name = "CONFIG")]
        path: Option<PathBuf>,
    },
    /// Concavity verdict of G(−log r).
    Concavity {
        #[arg(value_name = "CONFIG")]
        path: Option<PathBuf>,
    },
    /// Check a main inequality and classify it.
    Relation {
        #[arg(value_enum)]
        which: RelKind,
        #[arg(value_name = "CONFIG")]
        path: Option<PathBuf>,
    },
    /// Bergman kernel against the logarithmic capacity kernel.
    Saitoh {
        #[arg(value_name = "CONFIG")]
        path: Option<PathBuf>,
    },
    /// L² extension bounds.
    Extend {
        #[arg(value_enum)]
        which: ExtKind,
        #[arg(value_name = "CONFIG")]
        path: Option<PathBuf>,
    },
    /// Product formulas on polydiscs.
    SplitCheck {
        #[arg(value_name = "CONFIG")]
        path: Option<PathBuf>,
    },
    /// Run the embedded scenario bank.
    Bank,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let f = &cli.flags;
    let o = Overrides {
        resolution: f.resolution,
        degree: f.degree,
        tolerance: f.tolerance,
        normalization: f.normalization.map(|n| match n {
            NormArg::PaperP2 => Normalization::PaperP2,
            NormArg::P1 => Normalization::P1,
        }),
        smoke: f.smoke,
    };
    let (op, path) = match cli.cmd {
        Cmd::Bank => return bank::run(&o, f.out.as_deref()),
        Cmd::Green { path } => (Op::Green, path),
        Cmd::Minimize { kind, path } => (Op::Minimize(kind), path),
        Cmd::Gcurve { path } => (Op::Gcurve, path),
        Cmd::Concavity { path } => (Op::Concavity, path),
        Cmd::Relation { which, path } => (Op::Relation(which), path),
        Cmd::Saitoh { path } => (Op::Saitoh, path),
        Cmd::Extend { which, path } => (Op::Extend(which), path),
        Cmd::SplitCheck { path } => (Op::SplitCheck, path),
    };
    let Some(path) = path.or_else(|| f.config.clone()) else {
        eprintln!("error: {op} needs a config file");
        return ExitCode::from(2);
    };
    let cfg = match config::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    single(op, &cfg, &o, f.out.as_deref())
}

fn single(op: Op, cfg: &ScenarioConfig, o: &Overrides, out: Option<&Path>) -> ExitCode {
    let rows = match ops::run(op, cfg, o) {
        Ok(r) => r,
        Err(e @ RunError::Config(_)) => {
            eprintln!("error: {}: {e}", cfg.id);
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {}: {e}", cfg.id);
            return ExitCode::from(1);
        }
    };
    if let Err(e) = write_rows(&rows, out, &cfg.id) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(1);
    }
    let failures = failures(cfg, &rows, o.smoke);
    for msg in &failures {
        eprintln!("FAIL {}: {msg}", cfg.id);
    }
    if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Messages of the config's expectations that do not hold.
fn failures(cfg: &ScenarioConfig, rows: &[Row], smoke: bool) -> Vec<String> {
    cfg.expect.iter().filter_map(|e| e.check(rows, smoke)).collect()
}

/// CSV to stdout, or `<stem>.csv` and `<stem>.jsonl` under `out`.
fn write_rows(rows: &[Row], out: Option<&Path>, stem: &str) -> io::Result<()> {
    let Some(dir) = out else {
        return report::write_csv(rows, io::stdout().lock()).map_err(io::Error::other);
    };
    std::fs::create_dir_all(dir)?;
    let csv = BufWriter::new(File::create(dir.join(format!("{stem}.csv")))?);
    report::write_csv(rows, csv).map_err(io::Error::other)?;
    let jsonl = BufWriter::new(File::create(dir.join(format!("{stem}.jsonl")))?);
    report::write_jsonl(rows, jsonl)
}
