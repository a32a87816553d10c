use std::path::Path;
use std::process::ExitCode;

use crate::config::{self, Overrides, ScenarioConfig};
use crate::ops::{self, Op};
use crate::report::Row;

macro_rules! scenarios {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../configs/", $name, ".toml")))),*]
    };
}

/// Embedded scenario configs, run in this order.
pub const SCENARIOS: &[(&str, &str)] = scenarios![
    "green_disk",
    "disk_equality",
    "disk_exponential_gain",
    "disk_linear_gcurve",
    "two_pole_concavity",
    "annulus_strict",
    "saitoh_disk",
    "annulus_q025",
    "bidisc_monomial",
    "bidisc_staircase",
    "split_bidisc",
    "split_annulus_disk",
    "thm21_bidisc",
    "thm21_perturbed",
    "thm31_p1",
    "thm31_paper_p2",
    "cor11_k0",
    "cor11_k1",
    "cor21_bidisc",
];

struct Outcome {
    id: String,
    op: String,
    rows: Vec<Row>,
    failures: Vec<String>,
}

fn parse_all() -> Result<Vec<(Op, ScenarioConfig)>, String> {
    SCENARIOS
        .iter()
        .map(|(name, text)| {
            let cfg = config::parse(text).map_err(|e| format!("{name}: {e}"))?;
            let op = cfg
                .operation
                .as_deref()
                .ok_or_else(|| format!("{name}: missing operation"))?
                .parse::<Op>()
                .map_err(|e| format!("{name}: {e}"))?;
            Ok((op, cfg))
        })
        .collect()
}

fn evaluate(op: Op, cfg: &ScenarioConfig, o: &Overrides) -> Outcome {
    let (rows, failures) = match ops::run(op, cfg, o) {
        Ok(rows) => {
            let f = cfg.expect.iter().filter_map(|e| e.check(&rows, o.smoke)).collect();
            (rows, f)
        }
        Err(e) => (vec![], vec![e.to_string()]),
    };
    Outcome {
        id: cfg.id.clone(),
        op: op.to_string(),
        rows,
        failures,
    }
}

/// Run every embedded scenario; exit 1 when any expectation fails.
pub fn run(o: &Overrides, out: Option<&Path>) -> ExitCode {
    let scenarios = match parse_all() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcomes = minl2::par::map(&scenarios, |(op, cfg)| evaluate(*op, cfg, o));

    println!("{:<24} {:<18} {:>5}  status", "scenario", "operation", "rows");
    for r in &outcomes {
        let status = if r.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{:<24} {:<18} {:>5}  {status}", r.id, r.op, r.rows.len());
    }
    let failed: Vec<&Outcome> = outcomes.iter().filter(|r| !r.failures.is_empty()).collect();
    println!(
        "bank: {} passed, {} failed",
        outcomes.len() - failed.len(),
        failed.len()
    );

    if let Some(dir) = out {
        let rows: Vec<Row> = outcomes.iter().flat_map(|r| r.rows.iter().cloned()).collect();
        if let Err(e) = crate::write_rows(&rows, Some(dir), "bank") {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(1);
        }
    }
    for r in &failed {
        for msg in &r.failures {
            eprintln!("FAIL {}: {msg}", r.id);
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
