use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dbbound::ic_uc::{nocoop_polytope_ic, IcUcParams};
use dbbound::mac_nf::{db_region_nf, MacNfParams};
use dbbound::regions::SweepGrid;
use dbbound::max_sum_rate;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn dbbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbbound"))
        .args(args)
        .env_remove("DBBOUND_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn cfg(rel: &str) -> String {
    configs().join(rel).display().to_string()
}

#[test]
fn bound_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("db.csv");
    let o = dbbound(&[
        "bound", "mac-nf", "--db", "--p1", "1", "--p2", "1", "--sz", "1", "--sz1", "5", "--sz2", "5",
        "-o", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("r1_bits,r2_bits\n"));
    let r = rows(&csv);
    assert_eq!(r.len(), 401);
    let best = r.iter().map(|p| p[0] + p[1]).fold(0.0, f64::max);
    let want = max_sum_rate(&db_region_nf(&MacNfParams::unit(5.0), &SweepGrid::feedback_default()).unwrap()).unwrap();
    assert!((best - want).abs() < 1e-8, "{best} vs {want}");

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("db.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["model"], "mac-nf");
    assert_eq!(meta["bound"], "db");
    assert_eq!(meta["params"]["sz1"]["hex"], "0x1.4p+2");
    assert_eq!(meta["grid"]["corr_step"]["value"], 0.05);
    assert!(meta["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert!(meta["version"].is_string());
}

#[test]
fn totalcoop_is_the_coherent_sum_line() {
    let o = dbbound(&["bound", "mac-uc", "--totalcoop", "--p1", "1", "--p2", "1", "--sz", "1", "--h10", "1", "--h20", "1"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    let line = 0.5 * 5f64.log2();
    assert!((r[0][1] - line).abs() < 1e-8);
    for p in &r {
        assert!((p[0] + p[1] - line).abs() < 1e-8);
    }
}

#[test]
fn ic_cutset_from_config() {
    let o = dbbound(&["bound", "--config", &cfg("ic_uc/strong_h2_cutset.cfg")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 401);
    assert!(r.windows(2).all(|w| w[1][1] <= w[0][1] && w[1][0] > w[0][0]));
}

#[test]
fn nats_and_json_outputs() {
    let bits = rows(&stdout(&dbbound(&["bound", "mac-nf", "--nofb"])));
    let o = dbbound(&["bound", "mac-nf", "--nofb", "--nats"]);
    let s = stdout(&o);
    assert!(s.starts_with("r1_nats,r2_nats\n"));
    let nats = rows(&s);
    for (b, n) in bits.iter().zip(&nats) {
        assert!((n[1] - b[1] * std::f64::consts::LN_2).abs() < 1e-8);
    }
    let j: serde_json::Value =
        serde_json::from_str(&stdout(&dbbound(&["bound", "mac-nf", "--nofb", "--format", "json"]))).unwrap();
    assert_eq!(j["unit"], "bits");
    assert_eq!(j["samples"].as_array().unwrap().len(), 401);
}

#[test]
fn convexify_never_shrinks() {
    let raw = rows(&stdout(&dbbound(&["bound", "--config", &cfg("mac_nf/unit_fb2_db.cfg")])));
    let env = rows(&stdout(&dbbound(&["bound", "--config", &cfg("mac_nf/unit_fb2_db.cfg"), "--convexify"])));
    assert_eq!(raw.len(), env.len());
    assert!(raw.iter().zip(&env).all(|(r, e)| e[1] >= r[1] - 1e-9));
}

#[test]
fn compare_reports_inclusions() {
    let o = dbbound(&["compare", &cfg("mac_nf/unit_fb2_db.cfg"), &cfg("mac_nf/unit_cutset.cfg")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["relation"], "A ⊂ B, strict");
    assert_eq!(r["max_gap_at_sum_point"], true);
    assert!(r["max_gap"].as_f64().unwrap() > 1e-3);

    let same = dbbound(&["compare", &cfg("mac_nf/unit_fb5_db.cfg"), &cfg("mac_nf/unit_fb5_db.cfg")]);
    assert_eq!(same.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&same)).unwrap();
    assert_eq!(r["relation"], "A = B");
    assert_eq!(r["max_gap"], 0.0);

    let noisier = dbbound(&["compare", &cfg("mac_nf/unit_fb10_db.cfg"), &cfg("mac_nf/unit_fb2_db.cfg")]);
    assert_eq!(noisier.status.code(), Some(0));
    let reverse = dbbound(&["compare", &cfg("mac_nf/unit_cutset.cfg"), &cfg("mac_nf/unit_fb2_db.cfg")]);
    assert_eq!(reverse.status.code(), Some(1));
}

#[test]
fn sweep_h_table() {
    let o = dbbound(&["sweep-h", "--config", &cfg("ic_uc/sweep_h.cfg")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.starts_with("h,db_sum_bits,cs_sum_bits\n"));
    let r = rows(&s);
    assert_eq!(r.len(), 61);
    assert!((r[60][0] - 3.0).abs() < 1e-12);
    assert!(r.iter().all(|p| p[1] <= p[2]));
    let p = IcUcParams { a: 0.5, b: 0.5, ..IcUcParams::unit() };
    assert!((r[0][1] - nocoop_polytope_ic(&p).max_sum()).abs() < 1e-8);

    let o = dbbound(&["sweep-h", "--config", &cfg("mac_nf/unit_fb2_db.cfg")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ic-uc"));
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = dbbound(&["verify", "--seed", "17", "-n", "25", "-o", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stderr(&o).contains("seed 17"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 11);

    let o = dbbound(&["verify", "-n", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n must be ≥ 1"));
}

#[test]
fn invalid_configs_exit_2_naming_the_field() {
    let cases: [(&[&str], &str); 5] = [
        (&["bound", "mac-nf", "--db", "--p1", "-1"], "p1"),
        (&["bound", "mac-uc", "--ozarow"], "bound"),
        (&["bound", "mac-nf", "--db", "--sv", "2"], "sv"),
        (&["bound", "ic-uc", "--db", "--grid", "0.3"], "grid"),
        (&["bound", "ic-uc", "--db", "--n1", "abc"], "n1"),
    ];
    for (args, field) in cases {
        let o = dbbound(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(field), "{args:?}: {}", stderr(&o));
    }
    let o = dbbound(&["bound", "--config", "/nonexistent.cfg", "--db"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent.cfg"));
}

#[test]
fn output_independent_of_thread_count_and_rerunnable_from_hex() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, out: &Path, sz1: &str| {
        let args = ["bound", "mac-uc", "--db", "--grid", "0.02", "--sz1", sz1, "-o", out.to_str().unwrap()];
        let o = Command::new(env!("CARGO_BIN_EXE_dbbound"))
            .args(args)
            .env("DBBOUND_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read(out).unwrap()
    };
    let one = run("1", &dir.path().join("1.csv"), "0.3");
    let four = run("4", &dir.path().join("4.csv"), "0.3");
    assert_eq!(one, four);

    // The sidecar's hex spelling of 0.3 reproduces the run exactly.
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("1.csv.meta.json")).unwrap()).unwrap();
    let hex = meta["params"]["sz1"]["hex"].as_str().unwrap().to_string();
    let again = run("2", &dir.path().join("h.csv"), &hex);
    assert_eq!(one, again);

    let o = Command::new(env!("CARGO_BIN_EXE_dbbound"))
        .args(["bound", "mac-nf", "--nofb"])
        .env("DBBOUND_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn every_shipped_config_resolves() {
    let mut n = 0;
    for dir in ["mac_nf", "mac_uc", "ic_uc"] {
        for entry in std::fs::read_dir(configs().join(dir)).unwrap() {
            let path = entry.unwrap().path();
            let text = std::fs::read_to_string(&path).unwrap();
            if !text.contains("bound =") {
                continue;
            }
            let o = dbbound(&["bound", "--config", path.to_str().unwrap(), "--grid", "0.2", "--fine", "51"]);
            assert!(o.status.success(), "{}: {}", path.display(), stderr(&o));
            n += 1;
        }
    }
    assert!(n >= 20);
}
