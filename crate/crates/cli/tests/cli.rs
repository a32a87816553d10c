use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_minl2"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(format!("{name}.toml"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn minl2")
}

fn run_config(args: &[&str], name: &str) -> Output {
    let p = config(name);
    let mut all: Vec<&str> = args.to_vec();
    all.push(p.to_str().unwrap());
    run(&all)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// CSV rows as column vectors, header dropped.
fn rows(o: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("scenario,operation,quantity,value,bound,gap,verdict,error_estimate")
    );
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn row<'a>(rows: &'a [Vec<String>], quantity: &str) -> &'a [String] {
    rows.iter()
        .find(|r| r[2] == quantity)
        .unwrap_or_else(|| panic!("no row {quantity}"))
}

#[test]
fn thm1_disk_equality() {
    let o = run_config(&["relation", "thm1"], "disk_equality");
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&o);
    let mh = row(&r, "M_H");
    assert_eq!(mh[0], "disk_equality");
    assert_eq!(mh[1], "relation thm1");
    let gap: f64 = mh[5].parse().unwrap();
    assert!(gap.abs() <= 1e-6, "{gap}");
    assert_eq!(mh[6], "equality");
}

#[test]
fn saitoh_annulus_is_strict() {
    let o = run_config(&["saitoh"], "annulus_q025");
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&o);
    let s = row(&r, "saitoh[0]");
    assert_eq!(s[6], "strict");
    assert!(s[5].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn config_flag_matches_positional() {
    let p = config("green_disk");
    let a = run(&["green", p.to_str().unwrap()]);
    let b = run(&["green", "--config", p.to_str().unwrap()]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_config_exits_2() {
    let p = scratch("malformed.toml", "id = \"x\"\ndomain = { kind = \"disk\"\n");
    let o = run(&["green", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("malformed.toml") && err.contains("line 2"), "{err}");
}

#[test]
fn invalid_configs_exit_2() {
    let cases = [
        ("unknown_field.toml", "id = \"x\"\nbogus = 1\n"),
        (
            "outside.toml",
            "id = \"x\"\ndomain = { kind = \"disk\" }\npoints = [[1.5, 0.0]]\n",
        ),
        ("bad_q.toml", "id = \"x\"\ndomain = { kind = \"annulus\", q = 1.5 }\n"),
        ("bad_tol.toml", "id = \"x\"\n[settings]\nrel_tol = -1.0\n"),
    ];
    for (name, text) in cases {
        let p = scratch(name, text);
        let o = run(&["green", p.to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
    // valid TOML that lacks what the operation needs
    let o = run_config(&["minimize", "shilov"], "disk_equality");
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["green"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["minimize", "szego"])), 2);
    let o = run_config(&["relation", "thm31", "--normalization", "p3"], "thm31_p1");
    assert_eq!(code(&o), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn failing_expectation_exits_1() {
    let text = std::fs::read_to_string(config("green_disk"))
        .unwrap()
        .replace("-0.6931471805599453", "-0.7");
    let p = scratch("wrong_green.toml", &text);
    let o = run(&["green", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("FAIL green_disk") && err.contains("green[0]"), "{err}");
    // rows are still reported
    assert_eq!(rows(&o).len(), 2);
}

#[test]
fn normalization_override() {
    // paper_p2 expectations fail once the p1 convention is forced
    let o = run_config(&["relation", "thm31", "--normalization", "p1"], "thm31_paper_p2");
    assert_eq!(code(&o), 1);
    let r = rows(&o);
    assert!((row(&r, "M_S")[3].parse::<f64>().unwrap() - 1.0).abs() < 1e-10);
    let o = run_config(&["relation", "thm31"], "thm31_paper_p2");
    assert_eq!(code(&o), 0);
}

#[test]
fn degree_and_resolution_overrides() {
    let o = run_config(
        &["minimize", "bergman", "--degree", "16", "--resolution", "0.5"],
        "bidisc_monomial",
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&o);
    assert_eq!(row(&r, "degree")[3].parse::<f64>().unwrap(), 16.0);
    assert_eq!(code(&run_config(&["green", "--resolution", "-1"], "green_disk")), 2);
}

#[test]
fn out_dir_is_deterministic() {
    let base = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli_out");
    let (a, b) = (base.join("a"), base.join("b"));
    for d in [&a, &b] {
        let o = run_config(&["concavity", "--out", d.to_str().unwrap()], "two_pole_concavity");
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
    }
    for f in ["two_pole_concavity.csv", "two_pole_concavity.jsonl"] {
        let x = std::fs::read(a.join(f)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let jsonl = std::fs::read_to_string(a.join("two_pole_concavity.jsonl")).unwrap();
    assert!(jsonl
        .lines()
        .all(|l| l.starts_with("{\"scenario\":\"two_pole_concavity\"")));
}

#[test]
fn bank_smoke_passes() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("bank_smoke");
    let o = run(&["bank", "--smoke", "--out", dir.to_str().unwrap()]);
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(code(&o), 0, "{out}\n{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.contains(" 0 failed"), "{out}");
    assert!(dir.join("bank.csv").exists() && dir.join("bank.jsonl").exists());
}
