use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zmc(args: &[&str], cwd: &Path, threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zmc"))
        .args(args)
        .current_dir(cwd)
        .env("ZMC_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn exit_codes_follow_the_check_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let pass = zmc(
        &[
            "identity",
            "verify",
            "--identity",
            "scherk2-decomp",
            "--n",
            "3",
            "--grid=-1:1:5,-1:1:5",
        ],
        d,
        "2",
    );
    assert_eq!(pass.status.code(), Some(0));
    assert!(
        stdout(&pass).starts_with("scherk2-decomp: PASS"),
        "{}",
        stdout(&pass)
    );

    let fail = zmc(
        &[
            "residual",
            "--equation",
            "minimal",
            "--surface",
            "expr:x^2+y^2",
            "--grid=-1:1:3,-1:1:3",
        ],
        d,
        "2",
    );
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).starts_with("minimal-residual: FAIL"));

    let usage = zmc(&["residual", "--no-such-flag"], d, "2");
    assert_eq!(usage.status.code(), Some(2));
    let unknown = zmc(
        &["surface", "eval", "--name", "nope", "--x", "0", "--y", "0"],
        d,
        "2",
    );
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn printed_values_match_the_library() {
    let d = std::env::temp_dir();
    let o = zmc(
        &[
            "surface", "eval", "--name", "scherk2", "--x", "0.3", "--y", "0.2",
        ],
        &d,
        "1",
    );
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert_eq!(v, (0.2f64.cos() / 0.3f64.cos()).ln());

    // Enneper at ζ = 1/2 + i/4
    let o = zmc(&["we", "eval", "--zeta", "0.5+0.25*i"], &d, "1");
    let p: Vec<f64> = stdout(&o)
        .split_whitespace()
        .map(|s| s.parse().unwrap())
        .collect();
    let want = [47.0 / 96.0, -59.0 / 192.0, 0.1875];
    for (a, b) in p.iter().zip(want) {
        assert!((a - b).abs() < 1e-14, "{a} vs {b}");
    }
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut reports = Vec::new();
    for threads in ["1", "3", "8"] {
        let name = format!("r{threads}.json");
        let o = zmc(
            &[
                "identity",
                "verify",
                "--identity",
                "helicoid-decomp",
                "--n",
                "4",
                "--grid=0.5:2.9:23,-1:1:17",
                "--report",
                &name,
            ],
            d,
            threads,
        );
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        reports.push(std::fs::read(d.join(&name)).unwrap());
    }
    assert!(reports.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn report_fields_describe_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = zmc(
        &[
            "residual",
            "--equation",
            "maximal",
            "--surface",
            "scherk2max",
            "--grid=-1:1:4,-1:1:4",
            "--report",
            "m.json",
        ],
        d,
        "2",
    );
    assert_eq!(o.status.code(), Some(0));
    let r = read_json(&d.join("m.json"));
    assert_eq!(r["schema"], 1);
    assert_eq!(r["subject"], "maximal-residual");
    assert_eq!(r["points_checked"], 16);
    assert_eq!(r["pass"], true);
    assert!(r.get("timestamp").is_none());
    assert!(r["max_abs_err"].as_f64().unwrap() < 1e-10);
}

#[test]
fn config_files_supply_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("run.toml"),
        "identity = \"scherk2max-decomp\"\nn = 2\ngrid = \"-1:1:3,-1:1:3\"\nreport = \"cfg.json\"\n",
    )
    .unwrap();
    let o = zmc(
        &["identity", "verify", "--config", "run.toml", "--n", "5"],
        d,
        "1",
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = read_json(&d.join("cfg.json"));
    assert_eq!(r["subject"], "scherk2max-decomp");
    // the command line wins over the file
    assert_eq!(r["parameters"]["n"], 5);
}

#[test]
fn foliate_writes_leaves_and_checks() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = zmc(
        &[
            "foliate",
            "--t",
            "0,1.5",
            "--bands",
            "-1..1",
            "--out",
            "leaves",
            "--resolution",
            "9",
            "--format",
            "both",
            "--check",
        ],
        d,
        "2",
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = d.join("leaves");
    let mut names: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(
        names.contains(&"foliation-continuity.json".to_string()),
        "{names:?}"
    );
    assert!(names.contains(&"foliation-roundtrip.json".to_string()));
    assert_eq!(names.iter().filter(|n| n.ends_with(".obj")).count(), 2 * 3);
    assert_eq!(names.iter().filter(|n| n.ends_with(".csv")).count(), 2 * 3);
    assert_eq!(
        read_json(&out.join("foliation-continuity.json"))["pass"],
        true
    );
}

#[test]
fn split_and_meshes_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = zmc(
        &[
            "we",
            "split",
            "--f",
            "1/(1-w^4/4)",
            "--mode",
            "reduced-R",
            "--weights",
            "0.3,0.7",
            "--verify",
        ],
        d,
        "2",
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.starts_with("part "))
            .count(),
        2
    );

    let bad = zmc(&["we", "split", "--weights", "0.3,0.3"], d, "2");
    assert_eq!(bad.status.code(), Some(1));

    let o = zmc(
        &[
            "tlms",
            "mesh",
            "--grid=0.1:0.9:5,0.1:0.9:5",
            "--out",
            "t.obj",
            "--check",
        ],
        d,
        "2",
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(std::fs::read_to_string(d.join("t.obj"))
        .unwrap()
        .starts_with("v "));

    let o = zmc(
        &[
            "bc",
            "mesh",
            "--grid=0.1:0.9:5,-0.9:-0.1:5",
            "--out",
            "b.csv",
            "--check",
        ],
        d,
        "2",
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(std::fs::read_to_string(d.join("b.csv"))
        .unwrap()
        .starts_with("u_index,"));
}

#[test]
fn parametric_residuals_run_for_every_representation() {
    let d = std::env::temp_dir();
    let runs: [&[&str]; 4] = [
        &[
            "--metric",
            "euclid",
            "--rep",
            "we",
            "--f",
            "1",
            "--g",
            "w",
            "--grid=-0.5:0.5:5,-0.5:0.5:5",
        ],
        &[
            "--metric",
            "l3x",
            "--rep",
            "tlms",
            "--tf",
            "1+u",
            "--tg",
            "2",
            "--r",
            "v+0.3",
            "--grid=0.1:0.9:5,0.1:0.9:5",
        ],
        &[
            "--metric",
            "l3p",
            "--rep",
            "bc",
            "--F",
            "r+r^3/3",
            "--G",
            "s",
            "--grid=0.1:0.9:5,-0.9:-0.1:5",
        ],
        &[
            "--metric",
            "euclid",
            "--rep",
            "surface",
            "--surface",
            "scherk2",
            "--grid=-1:1:5,-1:1:5",
        ],
    ];
    for extra in runs {
        let mut args = vec!["residual", "parametric"];
        args.extend_from_slice(extra);
        let o = zmc(&args, &d, "2");
        assert_eq!(
            o.status.code(),
            Some(0),
            "{extra:?}: {}{}",
            stdout(&o),
            String::from_utf8_lossy(&o.stderr)
        );
    }
}
