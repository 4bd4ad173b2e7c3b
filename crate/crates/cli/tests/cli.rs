use std::fs;
use std::process::{Command, Output};

use polwit::{run_sweep, sweep::HEADER, SweepConfig};
use polwit_core::polarimeter::SimulationConfig;

fn polwit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polwit"))
        .args(args)
        .output()
        .expect("spawn polwit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn analytic_sweep_output() {
    let o = polwit(&["sweep", "--analytic-only"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 12);
    for line in &lines[1..] {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 6);
        let p: f64 = f[0].parse().unwrap();
        let w_est: f64 = f[1].parse().unwrap();
        assert!((w_est - (1.0 - 3.0 * p) / 4.0).abs() < 1e-12);
        assert_eq!(f[2], "0");
        assert_eq!(f[1], f[3]);
    }
    assert_eq!(lines[4], "0.3,0.025,0,0.025,0.025,false");
    assert_eq!(lines[5], "0.4,-0.05,0,-0.05,-0.05,true");
}

#[test]
fn sweep_flags_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = polwit(&[
        "sweep",
        "--steps",
        "4",
        "--p-min",
        "0.2",
        "--p-max",
        "0.6",
        "--rate",
        "1000",
        "--duration",
        "5",
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    let ps: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(ps, ["0.2", "0.3", "0.4", "0.5", "0.6"]);
}

#[test]
fn sweep_rejects_bad_flags() {
    let o = polwit(&["sweep", "--steps", "1", "--p-max", "1.5"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("p = 1.5"));
    let o = polwit(&["sweep", "--rate", "0"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("rate"));
}

#[test]
fn seeds_change_sampled_output() {
    let a = stdout(&polwit(&["sweep", "--seed", "42"]));
    let b = stdout(&polwit(&["sweep", "--seed", "43"]));
    assert_ne!(a, b);
    assert_eq!(a, stdout(&polwit(&["sweep", "--seed", "42"])));
}

#[test]
fn state_and_witness_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let o = polwit(&["state", "werner", "0.9", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let o = polwit(&["witness", path.to_str().unwrap()]);
    assert!(o.status.success());
    let report = stdout(&o);
    assert!(report.contains("witness_value = -0.425"), "{report}");
    assert!(report.contains("ppt_min_eigenvalue = -0.425"));
    assert!(report.contains("concurrence = 0.85"));
    assert!(report.contains("witnessed = true"));
    assert!(report.contains("ppt_entangled = true"));

    let patch = polwit(&["state", "patchwork", "0.2"]);
    assert!(patch.status.success());
    let patch_path = dir.path().join("p.json");
    fs::write(&patch_path, &patch.stdout).unwrap();
    let report = stdout(&polwit(&["witness", patch_path.to_str().unwrap()]));
    assert!(report.contains("witnessed = false"));
    assert!(report.contains("ppt_entangled = false"));
    assert!(report.contains("concurrence = 0\n"));
}

#[test]
fn invalid_state_files_exit_with_named_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("garbage", "{ not json", 2, "malformed"),
        (
            "hermitian",
            r#"{"dim":4,"re":[[0.25,0.3,0,0],[0.1,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#,
            3,
            "hermiticity",
        ),
        (
            "trace",
            r#"{"dim":4,"re":[[0.3,0,0,0],[0,0.2,0,0],[0,0,0.2,0],[0,0,0,0.2]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#,
            4,
            "trace",
        ),
        (
            "negative",
            r#"{"dim":4,"re":[[1.1,0,0,0],[0,-0.1,0,0],[0,0,0,0],[0,0,0,0]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#,
            5,
            "positivity",
        ),
    ];
    for (name, body, code, invariant) in cases {
        let path = dir.path().join(format!("{name}.json"));
        fs::write(&path, body).unwrap();
        let o = polwit(&["witness", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(code), "{name}: {}", stderr(&o));
        assert!(stderr(&o).contains(invariant), "{name}: {}", stderr(&o));
    }
}

#[test]
fn state_rejects_out_of_range_parameters() {
    let o = polwit(&["state", "werner", "1.3"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("p = 1.3"));
    let o = polwit(&["state", "patchwork", "-0.1"]);
    assert!(!o.status.success());
}

#[test]
fn sweep_rows_track_the_witness_line() {
    let mut all_within = 0;
    let seeds = 100;
    for seed in 0..seeds {
        let cfg = SweepConfig {
            simulation: SimulationConfig::default().with_seed(seed),
            ..SweepConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 11);
        for r in &rows {
            assert!((r.w_analytic - (1.0 - 3.0 * r.p) / 4.0).abs() < 1e-12);
            assert!((r.ppt_min_eig - (1.0 - 3.0 * r.p) / 4.0).abs() < 1e-10);
            assert!(r.w_err >= 0.0);
        }
        let ok = rows
            .iter()
            .all(|r| (r.w_est - r.w_analytic).abs() <= 5.0 * r.w_err + 1e-12);
        all_within += usize::from(ok);
        assert!(rows[3].w_analytic > 0.0 && rows[4].w_analytic < 0.0);
    }
    assert!(all_within >= 99, "{all_within}/{seeds}");
}
