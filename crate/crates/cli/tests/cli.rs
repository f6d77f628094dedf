//! End-to-end runs of the `proprep` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proprep_cli::opcount::opcount_bench;
use proprep_cli::sweep::{run_sweep, CellOutcome, SweepSpec, SWEEP_HEADER};
use tempfile::TempDir;

fn proprep(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proprep"))
        .current_dir(dir)
        .env_remove("PROPREP_ENUM_CAP")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn generate_select_audit_pipeline() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let gen = proprep(
        d,
        &[
            "gen", "random", "--n", "10", "--m", "6", "--k", "3", "--seed", "4", "-o", "inst.txt",
        ],
    );
    assert_eq!(code(&gen), 0, "{}", String::from_utf8_lossy(&gen.stderr));
    for rule in ["ear", "tgc"] {
        let cov = format!("{rule}.cov");
        let com = format!("{rule}.com");
        let sel = proprep(
            d,
            &[
                "select",
                rule,
                "--instance",
                "inst.txt",
                "--emit-coverage",
                &cov,
                "-o",
                &com,
            ],
        );
        assert_eq!(code(&sel), 0);
        assert!(fs::read_to_string(d.join(&com))
            .unwrap()
            .starts_with("proprep-committee v1"));
        for check in ["pf", "core", "pr", "pr-strong", "cor-single", "stability"] {
            let out = proprep(
                d,
                &[
                    "audit",
                    "--instance",
                    "inst.txt",
                    "--coverage",
                    &cov,
                    "--check",
                    check,
                    "--alpha",
                    "2",
                ],
            );
            assert_eq!(
                code(&out),
                0,
                "{rule} {check}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            let text = stdout(&out);
            assert!(
                text.contains("satisfied true") || (rule == "tgc" && check == "cor-single"),
                "{text}"
            );
        }
    }
    let csv = proprep(
        d,
        &[
            "--format",
            "csv",
            "audit",
            "--instance",
            "inst.txt",
            "--committee",
            "ear.com",
            "--check",
            "pr",
            "--alpha",
            "3/2",
            "--t-range",
            "1..2",
        ],
    );
    let text = stdout(&csv);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("check,alpha,t_range,value,decimal,bound,satisfied,witness")
    );
    assert!(lines.next().unwrap().starts_with("PR,3/2,1..2,"));
}

#[test]
fn single_winner_distortion_carries_its_bound() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    proprep(
        d,
        &[
            "gen", "random", "--n", "7", "--m", "4", "--k", "1", "-o", "i.txt",
        ],
    );
    assert_eq!(
        code(&proprep(
            d,
            &[
                "select",
                "single-winner",
                "--instance",
                "i.txt",
                "-o",
                "w.txt"
            ]
        )),
        0
    );
    let out = proprep(
        d,
        &[
            "audit",
            "--instance",
            "i.txt",
            "--committee",
            "w.txt",
            "--check",
            "distortion",
            "--rule",
            "single-winner",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("bound 44"));
}

const LOPSIDED: &str = "proprep-instance v1\nn 2\nm 2\nk 1\nmetric block\n0 100\n0 100\nend\n";

#[test]
fn violated_bound_exits_with_two() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    fs::write(d.join("i.txt"), LOPSIDED).unwrap();
    fs::write(d.join("c.txt"), "proprep-committee v1\nmembers 2\n").unwrap();
    let out = proprep(
        d,
        &[
            "audit",
            "--instance",
            "i.txt",
            "--committee",
            "c.txt",
            "--check",
            "pf",
            "--rule",
            "ear",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("satisfied false"));
    // without a rule there is no bound to violate
    let out = proprep(
        d,
        &[
            "audit",
            "--instance",
            "i.txt",
            "--committee",
            "c.txt",
            "--check",
            "pf",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("value inf"));
}

#[test]
fn operational_errors_exit_with_one() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    fs::write(d.join("bad.txt"), "proprep-instance v1\nn two\n").unwrap();
    let out = proprep(d, &["select", "ear", "--instance", "bad.txt"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&proprep(d, &["audit", "--no-such-flag"])), 1);
    assert_eq!(
        code(&proprep(d, &["select", "ear", "--instance", "missing.txt"])),
        1
    );
    assert_eq!(code(&proprep(d, &["gen", "diverging", "--alpha", "2"])), 1);
    assert_eq!(code(&proprep(d, &["--help"])), 0);
    // triangle inequality fails: d(c1,c2)=5 > d(c1,v1)+d(v1,c2)=2
    let skewed = "proprep-instance v1\nn 1\nm 2\nk 1\nmetric full\n0 1 1\n1 0 5\n1 5 0\nend\n";
    fs::write(d.join("skewed.txt"), skewed).unwrap();
    let out = proprep(d, &["select", "tgc", "--instance", "skewed.txt"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("d(c1,c2) > d(c1,v1) + d(v1,c2)"));
    // rankings that contradict the distances
    let mixed = "proprep-instance v1\nn 1\nm 2\nk 1\nmetric block\n1 2\nend\nrankings\n2 1\nend\n";
    fs::write(d.join("mixed.txt"), mixed).unwrap();
    let out = proprep(d, &["select", "ear", "--instance", "mixed.txt"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ranks c2 above c1"));
}

#[test]
fn cap_comes_from_flag_or_environment() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    proprep(
        d,
        &[
            "gen", "random", "--n", "9", "--m", "5", "--k", "2", "-o", "i.txt",
        ],
    );
    proprep(d, &["select", "ear", "--instance", "i.txt", "-o", "c.txt"]);
    let args = [
        "audit",
        "--instance",
        "i.txt",
        "--committee",
        "c.txt",
        "--check",
        "pr",
    ];
    assert_eq!(code(&proprep(d, &args)), 0);
    let capped = Command::new(env!("CARGO_BIN_EXE_proprep"))
        .current_dir(d)
        .env("PROPREP_ENUM_CAP", "8")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(code(&capped), 1);
    assert!(String::from_utf8_lossy(&capped.stderr).contains("exceeds the cap of 8"));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--cap", "8"]);
    assert_eq!(code(&proprep(d, &with_flag)), 1);
    // sampling sidesteps the cap and says so
    let mut sampled = args.to_vec();
    sampled.extend(["--cap", "8", "--samples", "200"]);
    let out = proprep(d, &sampled);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("lower bound only"));
}

#[test]
fn separation_instance_round_trips_with_rankings() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let out = proprep(d, &["gen", "separation", "--eps", "1/100"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("rankings"));
    assert!(text.contains("labels v1 v2 v3 v'1 v'2 v'3 c1 c2 c3 c'1 c'2 c'3"));
}

fn spec(body: &str) -> SweepSpec {
    SweepSpec::from_toml(body).unwrap()
}

const RANDOM_PR: &str = r#"
algorithms = ["ear", "tgc"]
checks = ["pr"]
alphas = ["3/2", "2", "3"]

[family]
kind = "random"
n = [8]
m = [5]
k = [2]
seeds = { start = 0, count = 50 }
"#;

#[test]
fn sweep_over_fifty_instances_stays_within_bounds() {
    let result = run_sweep(&spec(RANDOM_PR)).unwrap();
    assert_eq!(result.rows.len(), 50 * 2 * 3);
    for row in &result.rows {
        let CellOutcome::Report(r) = &row.outcome else {
            panic!("{row:?}");
        };
        let bound = r.bound.as_ref().expect("alpha > 1 has a bound");
        assert!(bound.admits(&r.value));
        assert!(bound.margin(&r.value) >= 0.0);
    }
    assert!(!result.violated());
}

#[test]
fn sweep_output_is_reproducible_and_ordered() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let body = format!("{RANDOM_PR}\n").replace("count = 50", "count = 6");
    fs::write(d.join("s.toml"), &body).unwrap();
    let a = proprep(d, &["sweep", "--spec", "s.toml", "--out-dir", "a"]);
    let b = proprep(d, &["sweep", "--spec", "s.toml", "--out-dir", "b"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    for f in ["table.csv", "plot.csv"] {
        assert_eq!(
            fs::read(d.join("a").join(f)).unwrap(),
            fs::read(d.join("b").join(f)).unwrap()
        );
    }
    let table = fs::read_to_string(d.join("a/table.csv")).unwrap();
    let cells: Vec<usize> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(cells, (0..cells.len()).collect::<Vec<_>>());
    let plot = fs::read_to_string(d.join("a/plot.csv")).unwrap();
    // two rules × three α values
    assert_eq!(plot.lines().count(), 1 + 6);
    assert!(plot
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("ear,PR,3/2,1.500000,"));
}

#[test]
fn empty_algorithm_list_gives_header_only() {
    let s = spec(
        "algorithms = []\nchecks = [\"pf\"]\n[family]\nkind = \"refined\"\nn = [8]\nk = [2]\n",
    );
    let result = run_sweep(&s).unwrap();
    assert!(result.rows.is_empty());
    assert_eq!(
        result.render(proprep_cli::Format::Csv),
        SWEEP_HEADER.join(",") + "\n"
    );
}

#[test]
fn cap_errors_are_rows_not_failures() {
    let s = spec(
        r#"
algorithms = ["ear", "single-winner"]
checks = ["pf", "pr", "distortion"]
cap = 10
[family]
kind = "random"
n = [12]
m = [4]
k = [2]
seeds = { count = 1 }
"#,
    );
    let result = run_sweep(&s).unwrap();
    let statuses: Vec<(&str, String, &str)> = result
        .rows
        .iter()
        .map(|r| (r.algorithm.as_str(), r.check.to_string(), r.status()))
        .collect();
    assert_eq!(
        statuses,
        vec![
            ("ear", "PF".into(), "ok"),
            ("ear", "PR".into(), "cap-exceeded"),
            ("ear", "DISTORTION".into(), "n/a"),
            ("single-winner", "PF".into(), "n/a"),
            ("single-winner", "PR".into(), "n/a"),
            ("single-winner", "DISTORTION".into(), "ok"),
        ]
    );
}

#[test]
fn lower_bound_families_sweep() {
    let s = spec(
        r#"
algorithms = ["ear", "tgc"]
checks = ["core"]
alphas = ["2"]
[family]
kind = "two-cluster"
alpha = ["2"]
"#,
    );
    let result = run_sweep(&s).unwrap();
    for row in &result.rows {
        let CellOutcome::Report(r) = &row.outcome else {
            panic!()
        };
        assert!(
            r.value
                >= proprep_core::Measure::Finite(num_rational::BigRational::new(
                    4.into(),
                    3.into()
                ))
        );
    }
}

#[test]
fn opcount_small_grid() {
    let rows = opcount_bench(&[(1, 20), (100, 20), (200, 20), (400, 20)], None, 0).unwrap();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert!(r.within_limit());
        if r.n == 1 {
            assert!(r.events() <= r.m as u64);
        }
    }
    let tmp = TempDir::new().unwrap();
    let out = proprep(
        tmp.path(),
        &["--format", "csv", "bench", "--sizes", "1x10,50x10"],
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.contains(",yes,")));
}
