use std::fmt;

use clap::ValueEnum;
use minl2::analysis::{
    concavity_report, extension_bound, extremal_disk, g_curve, saitoh_gap, theorem1_relation, RelationReport, Verdict,
};
use minl2::geometry::{Domain, Green};
use minl2::minimizers::{bergman_min, hardy_min, Settings};
use minl2::polydisc::{
    bergman_min_product, cor21_bound, hardy_dm_min, product_split_check, shilov_min, theorem21_relation,
    theorem31_relation, ProductMin,
};
use minl2::tol;

use crate::config::{ConfigError, Overrides, ScenarioConfig};
use crate::report::Row;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MinKind {
    Bergman,
    Hardy,
    Shilov,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RelKind {
    Thm1,
    Thm21,
    Thm31,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExtKind {
    Cor11,
    Cor21,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Green,
    Minimize(MinKind),
    Gcurve,
    Concavity,
    Relation(RelKind),
    Saitoh,
    Extend(ExtKind),
    SplitCheck,
}

fn name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Green => f.write_str("green"),
            Op::Minimize(k) => write!(f, "minimize {}", name(k)),
            Op::Gcurve => f.write_str("gcurve"),
            Op::Concavity => f.write_str("concavity"),
            Op::Relation(k) => write!(f, "relation {}", name(k)),
            Op::Saitoh => f.write_str("saitoh"),
            Op::Extend(k) => write!(f, "extend {}", name(k)),
            Op::SplitCheck => f.write_str("split-check"),
        }
    }
}

impl std::str::FromStr for Op {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Op, ConfigError> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let err = || ConfigError(format!("unknown operation {s:?}"));
        Ok(match parts.as_slice() {
            ["green"] => Op::Green,
            ["gcurve"] => Op::Gcurve,
            ["concavity"] => Op::Concavity,
            ["saitoh"] => Op::Saitoh,
            ["split-check"] => Op::SplitCheck,
            ["minimize", k] => Op::Minimize(MinKind::from_str(k, false).map_err(|_| err())?),
            ["relation", k] => Op::Relation(RelKind::from_str(k, false).map_err(|_| err())?),
            ["extend", k] => Op::Extend(ExtKind::from_str(k, false).map_err(|_| err())?),
            _ => return Err(err()),
        })
    }
}

/// Failure while running a scenario.
#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numeric(minl2::Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config: {e}"),
            RunError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<minl2::Error> for RunError {
    fn from(e: minl2::Error) -> Self {
        RunError::Numeric(e)
    }
}

type Rows = Result<Vec<Row>, RunError>;

/// Run `op` on `cfg`; rows carry the scenario id and operation name.
pub fn run(op: Op, cfg: &ScenarioConfig, o: &Overrides) -> Rows {
    let s = cfg.settings(o)?;
    let mut rows = match op {
        Op::Green => green(cfg),
        Op::Minimize(k) => minimize(k, cfg, &s),
        Op::Gcurve => gcurve(cfg, &s),
        Op::Concavity => concavity(cfg, &s),
        Op::Relation(RelKind::Thm1) => thm1(cfg, &s),
        Op::Relation(RelKind::Thm21) => thm21(cfg, &s),
        Op::Relation(RelKind::Thm31) => thm31(cfg, o, &s),
        Op::Saitoh => saitoh(cfg, &s),
        Op::Extend(ExtKind::Cor11) => cor11(cfg, &s),
        Op::Extend(ExtKind::Cor21) => cor21(cfg, &s),
        Op::SplitCheck => split(cfg, &s),
    }?;
    let op_name = op.to_string();
    for r in &mut rows {
        r.scenario = cfg.id.clone();
        r.operation = op_name.clone();
    }
    if let Some(r) = rows.iter().find(|r| !r.is_finite()) {
        return Err(RunError::Numeric(minl2::Error::InvalidInput(format!(
            "non-finite result in row {}",
            r.quantity
        ))));
    }
    Ok(rows)
}

/// `|Δ|` over the last two schedule steps.
fn step_change(history: &[(usize, f64)]) -> f64 {
    match history {
        [.., a, b] => (b.1 - a.1).abs(),
        _ => 0.0,
    }
}

fn converged_row(converged: bool) -> Row {
    Row::value("converged", if converged { 1.0 } else { 0.0 })
}

fn green(cfg: &ScenarioConfig) -> Rows {
    let d = cfg.domain()?;
    let g = Green::new(d);
    let mut rows = vec![];
    for (i, p) in cfg.pairs.iter().enumerate() {
        rows.push(Row::value(format!("green[{i}]"), g.value(p.z, p.w)?));
    }
    for (i, &z) in cfg.points.iter().enumerate() {
        rows.push(Row::value(format!("capacity[{i}]"), g.capacity(z)?));
        if let Domain::Annulus { .. } = d {
            rows.push(Row::value(format!("omega_inner[{i}]"), g.harmonic_measure_inner(z)));
        }
    }
    Ok(rows)
}

fn product_rows(m: &ProductMin) -> Vec<Row> {
    vec![
        Row::value("minimum", m.value).with_error(step_change(&m.history)),
        Row::value("degree", m.degree as f64),
        converged_row(m.converged),
    ]
}

fn minimize(k: MinKind, cfg: &ScenarioConfig, s: &Settings) -> Rows {
    if cfg.product.is_some() {
        let m = cfg.product_domain()?;
        let ideal = cfg.ideal()?;
        let r = match k {
            MinKind::Bergman => bergman_min_product(&m, &cfg.gain, &ideal, cfg.t, s)?,
            MinKind::Hardy => hardy_dm_min(&m, &ideal, s)?,
            MinKind::Shilov => shilov_min(&m, &ideal, s)?,
        };
        return Ok(product_rows(&r));
    }
    let green = Green::new(cfg.domain()?);
    let (phi, psi, jets) = (cfg.phi()?, cfg.psi()?, cfg.jets()?);
    let r = match k {
        MinKind::Bergman => bergman_min(&green, &phi, &psi, &cfg.gain, &jets, cfg.t, s)?,
        MinKind::Hardy => hardy_min(&green, &phi, &psi, &jets, s)?,
        MinKind::Shilov => {
            return Err(RunError::Config(ConfigError("minimize shilov needs [product]".into())));
        }
    };
    Ok(vec![
        Row::value("minimum", r.value).with_error(step_change(&r.history)),
        Row::value("degree", r.basis.degree as f64),
        converged_row(r.converged),
    ])
}

fn t_grid(cfg: &ScenarioConfig) -> Result<&[f64], ConfigError> {
    if cfg.t_grid.is_empty() {
        return Err(ConfigError("this operation needs t_grid".into()));
    }
    Ok(&cfg.t_grid)
}

fn curve(cfg: &ScenarioConfig, s: &Settings) -> Result<minl2::analysis::GCurve, RunError> {
    let green = Green::new(cfg.domain()?);
    Ok(g_curve(
        &green,
        &cfg.phi()?,
        &cfg.psi()?,
        &cfg.gain,
        &cfg.jets()?,
        t_grid(cfg)?,
        s,
    )?)
}

fn gcurve(cfg: &ScenarioConfig, s: &Settings) -> Rows {
    let c = curve(cfg, s)?;
    let mut rows = vec![];
    for i in 0..c.t.len() {
        rows.push(Row::value(format!("G[{i}]"), c.g[i]));
        rows.push(Row::value(format!("r[{i}]"), c.r[i]));
    }
    rows.push(converged_row(c.converged.iter().all(|&x| x)));
    Ok(rows)
}

fn concavity(cfg: &ScenarioConfig, s: &Settings) -> Rows {
    let c = curve(cfg, s)?;
    let rep = concavity_report(&c, tol::EQUALITY_REL, tol::EQUALITY_REL)?;
    let verdict = if rep.linear {
        Verdict::Equality
    } else if rep.concave {
        Verdict::Strict
    } else {
        Verdict::Violated
    };
    let g0 = c.g.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    Ok(vec![
        Row::value("concavity", rep.max_second_difference / g0).with_verdict(verdict),
        Row::value("max_abs_second_difference", rep.max_abs_second_difference / g0),
        Row::value("strict_nodes", rep.strict_nodes as f64),
        converged_row(c.converged.iter().all(|&x| x)),
    ])
}

fn relation_rows(r: &RelationReport) -> Vec<Row> {
    let mut rows = vec![];
    if let Some(ms) = r.m_s {
        rows.push(Row::bounded("M_S", ms, r.bound, r.verdict));
        rows.push(Row::value("M_face", r.m));
    } else {
        rows.push(Row::bounded("M_H", r.m_h, r.bound, r.verdict));
        rows.push(Row::value("M", r.m));
        rows.push(Row::value("integral", r.integral));
    }
    if r.m_s.is_some() {
        rows.push(Row::value("M_H", r.m_h));
    }
    if let Some(lin) = r.linear {
        rows.push(Row::value("linear", if lin { 1.0 } else { 0.0 }));
    }
    rows.push(converged_row(r.converged));
    rows
}

fn thm1(cfg: &ScenarioConfig, s: &Settings) -> Rows {
    let green = Green::new(cfg.domain()?);
    let (phi, psi, jets) = (cfg.phi()?, cfg.psi()?, cfg.jets()?);
    let r = theorem1_relation(&green, &phi, &psi, &cfg.gain, &jets, s)?;
    let mut rows = relation_rows(&r);
    if cfg.extremal {
        if cfg.domain()? != Domain::Disk {
            return Err(RunError::Config(ConfigError("extremal = true needs the disk".into())));
        }
        let (_, e) = extremal_disk(&phi, &psi, &cfg.gain, &jets, s)?;
        rows.push(Row::value("extremal_jet_residual", e.jet_residual));
        rows.push(Row::value("extremal_area_error", e.area_rel_error()));
        rows.push(Row::value("extremal_boundary_error", e.boundary_rel_error()));
    }
    Ok(rows)
}

fn thm21(cfg: &ScenarioConfig, s: &Settings) -> Rows {
    let m = cfg.product_domain()?;
    let r = theorem21_relation(&m, &cfg.gain, &cfg.ideal()?, &cfg.t_grid, s)?;
    Ok(relation_rows(&r))
}

fn thm31(cfg: &ScenarioConfig, o: &Overrides, s: &Settings) -> Rows {
    let r = theorem31_relation(&cfg.shilov_factors()?, cfg.normalization(o), s)?;
    let mut rows = relation_rows(&r.relation);
    rows.push(Row::value("statements", if r.statements_hold() { 1.0 } else { 0.0 }));
    for (i, st) in r.statements.iter().enumerate() {
        rows.push(Row::value(format!("character_defect[{i}]"), st.character_defect));
    }
    Ok(rows)
}

fn saitoh(cfg: &ScenarioConfig, s: &Settings) -> Rows {
    let d = cfg.domain()?;
    if cfg.points.is_empty() {
        return Err(RunError::Config(ConfigError("saitoh needs points".into())));
    }
    let mut rows = vec![];
    for (i, &z) in cfg.points.iter().enumerate() {
        let r = saitoh_gap(d, z, s)?;
        // resolved when the gap exceeds ten error estimates and the equality threshold
        let floor = (10.0 * r.error_estimate).max(tol::EQUALITY_REL * r.k_hat);
        let verdict = if r.gap.abs() <= floor {
            Verdict::Equality
        } else if r.gap > 0.0 {
            Verdict::Strict
        } else {
            Verdict::Violated
        };
        rows.push(Row::bounded(format!("saitoh[{i}]"), r.pi_b, r.k_hat, verdict).with_error(r.error_estimate));
    }
    Ok(rows)
}

fn cor11(cfg: &ScenarioConfig, s: &Settings) -> Rows {
    let d = cfg.domain()?;
    let jets = cfg.jets()?;
    let mut points = vec![];
    let mut k = vec![];
    let mut a = vec![];
    for p in &jets.points {
        let top = p.taylor.len() - 1;
        if p.taylor[..top].iter().any(|x| x.norm() != 0.0) {
            return Err(RunError::Config(ConfigError(
                "extend cor11 prescribes only the top jet; lower entries must be 0".into(),
            )));
        }
        points.push(p.z);
        k.push(top);
        a.push(p.taylor[top]);
    }
    let r = extension_bound(d, &points, &k, &a, &cfg.log_lambda()?, s)?;
    Ok(vec![
        Row::bounded("M_H", r.m_h, r.rhs_derived, r.derived),
        Row::bounded("M_H_printed", r.m_h, r.rhs_printed, r.printed),
        converged_row(r.converged),
    ])
}

fn cor21(cfg: &ScenarioConfig, s: &Settings) -> Rows {
    let m = cfg.product_domain()?;
    let r = cor21_bound(&m, &cfg.germ()?, s)?;
    Ok(vec![
        Row::bounded("M_H", r.m_h, r.rhs_derived, r.derived),
        Row::bounded("M_H_printed", r.m_h, r.rhs_printed, r.printed),
        converged_row(r.converged),
    ])
}

fn split(cfg: &ScenarioConfig, s: &Settings) -> Rows {
    let m = cfg.product_domain()?;
    let r = product_split_check(&m, &cfg.ideal()?, s)?;
    let side = |name: &str, x: &minl2::polydisc::SplitSide| {
        let v = if x.defect <= tol::EQUALITY_REL {
            Verdict::Equality
        } else {
            Verdict::Violated
        };
        Row {
            bound: Some(x.rhs),
            gap: Some(x.defect),
            verdict: v,
            ..Row::value(name, x.lhs)
        }
    };
    Ok(vec![
        side("shilov", &r.shilov),
        side("face", &r.face),
        side("bergman", &r.bergman),
        converged_row(r.converged),
    ])
}
