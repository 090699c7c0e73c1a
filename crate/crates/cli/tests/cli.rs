use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SHORT_RUN: &str = "equation = linear\nn = 10\nt_final = 8pi\nmethod = RM-M\nomega_over_l = 1/2\n";

fn sponge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sponge")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn records(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(Result::unwrap)
        .collect()
}

fn header(path: &Path) -> Vec<String> {
    csv::Reader::from_path(path)
        .unwrap()
        .headers()
        .unwrap()
        .iter()
        .map(String::from)
        .collect()
}

fn field(path: &Path, row: usize, name: &str) -> String {
    let k = header(path).iter().position(|h| h == name).unwrap();
    records(path)[row][k].to_string()
}

#[test]
fn run_writes_results_and_reuses_the_reference_cache() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "a.cfg",
        &format!("{SHORT_RUN}snapshot_every = 10\nfine_n = 20\n"),
    );
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let first = dir.path().join("first");
    let o = sponge(&[
        "run",
        "--config",
        &cfg,
        "--out",
        first.to_str().unwrap(),
        "--cache-dir",
        cache,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("references computed: 2"), "{}", stderr(&o));

    let runs = first.join("run.csv");
    assert_eq!(field(&runs, 0, "status"), "completed");
    assert_eq!(field(&runs, 0, "method"), "RM-M");
    assert!(field(&runs, 0, "e_abc").parse::<f64>().unwrap().is_finite());
    assert!(field(&first.join("run_e_num.csv"), 0, "e_num").parse::<f64>().unwrap() > 0.0);
    let snapshots = first.join("run_snapshots.csv");
    assert_eq!(header(&snapshots), ["schema_version", "t", "x", "V", "u", "E", "p"]);
    assert!(!records(&snapshots).is_empty());

    let second = dir.path().join("second");
    let o = sponge(&[
        "run",
        "--config",
        &cfg,
        "--out",
        second.to_str().unwrap(),
        "--cache-dir",
        cache,
    ]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("references computed: 0"), "{}", stderr(&o));
    for name in ["run.csv", "run_e_num.csv", "run_snapshots.csv"] {
        assert_eq!(read(&first.join(name)), read(&second.join(name)), "{name}");
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "a.cfg", SHORT_RUN);
    let out = dir.path().join("o");
    let o = sponge(&[
        "run",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--no-cache",
        "--method",
        "rm",
        "--omega-over-l",
        "1/4",
        "--profile",
        "A",
        "--n",
        "8",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let runs = out.join("run.csv");
    assert_eq!(field(&runs, 0, "method"), "RM");
    assert_eq!(field(&runs, 0, "omega_over_l"), "0.25");
    assert_eq!(field(&runs, 0, "relax_profile"), "A");
    assert_eq!(field(&runs, 0, "n"), "8");
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();
    let cases = [
        ("unknown key", "n = 10\nspeed = 3\n"),
        ("bad value", "n = ten\n"),
        ("bad method", "method = PML\n"),
        ("sponge without width", "method = SDO\nomega_over_l = 0\n"),
        ("fine grid not a multiple", "n = 10\nfine_n = 15\n"),
    ];
    for (what, text) in cases {
        let cfg = write_config(dir.path(), "bad.cfg", text);
        let o = sponge(&["run", "--config", &cfg, "--out", out]);
        assert_eq!(code(&o), 2, "{what}: {}", stderr(&o));
        assert!(stderr(&o).contains("configuration error"), "{what}: {}", stderr(&o));
    }
    let missing = dir.path().join("missing.cfg");
    assert_eq!(
        code(&sponge(&["run", "--config", missing.to_str().unwrap(), "--out", out])),
        2
    );
    assert_eq!(code(&sponge(&["sweep", "--preset", "table9", "--out", out])), 2);
    assert_eq!(
        code(&sponge(&[
            "sweep", "--preset", "table1", "--out", out, "--method", "NDO"
        ])),
        2
    );
    assert_eq!(
        code(&sponge(&[
            "sweep",
            "--preset",
            "table1",
            "--out",
            out,
            "--profile",
            "C"
        ])),
        2
    );
    assert_eq!(
        code(&sponge(&[
            "sweep",
            "--preset",
            "table1",
            "--out",
            out,
            "--equation",
            "cubic"
        ])),
        2
    );
    assert_eq!(code(&sponge(&["sweep", "--out", out])), 2);
}

#[test]
fn divergence_is_recorded_and_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "stiff.cfg",
        "n = 10\nt_final = 8pi\nmethod = SDO\nomega_over_l = 1/8\nsigma = 1e6\n",
    );
    let out = dir.path().join("o");
    let o = sponge(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--no-cache"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let runs = out.join("run.csv");
    assert_eq!(field(&runs, 0, "status"), "diverged");
    assert_eq!(field(&runs, 0, "e_abc"), "inf");
}

#[test]
fn sweeps_are_independent_of_the_thread_count() {
    let dir = TempDir::new().unwrap();
    let run = |threads: &str| {
        let out = dir.path().join(format!("t{threads}"));
        let o = sponge(&[
            "sweep",
            "--preset",
            "table3",
            "--out",
            out.to_str().unwrap(),
            "--n",
            "10",
            "--equation",
            "linear",
            "--threads",
            threads,
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        out
    };
    let (one, four) = (run("1"), run("4"));
    for name in ["table3.csv", "table3_runs.csv"] {
        assert_eq!(read(&one.join(name)), read(&four.join(name)), "{name}");
    }
    let pivot = one.join("table3.csv");
    assert_eq!(header(&pivot).len(), 2 + 4);
    let omegas: Vec<String> = records(&pivot).iter().map(|r| r[1].to_string()).collect();
    assert_eq!(omegas, ["0.125", "0.25", "0.5", "1"]);
    assert_eq!(records(&one.join("table3_runs.csv")).len(), 16);
    assert_eq!(records(&one.join("table3_timing.csv")).len(), 16);
}

#[test]
fn a_partly_diverged_sweep_still_succeeds() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");
    let o = sponge(&[
        "sweep",
        "--preset",
        "fig_entropy",
        "--n",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary = out.join("fig_entropy_summary.csv");
    let status: Vec<String> = records(&summary).iter().map(|r| r[4].to_string()).collect();
    assert!(
        status.contains(&"diverged".to_string()) && status.contains(&"completed".to_string()),
        "{status:?}"
    );
    assert!(out.join("fig_entropy_slow_only.csv").exists());
}

/// Every column written by the tool is documented in the schema file.
#[test]
fn schema_file_documents_every_column() {
    let schema = read(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/csv_schema.md"));
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "a.cfg",
        &format!("{SHORT_RUN}snapshot_every = 40\nfine_n = 20\n"),
    );
    let out = dir.path().join("o");
    let o = sponge(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--no-cache"]);
    assert_eq!(code(&o), 0);
    let o = sponge(&[
        "sweep",
        "--preset",
        "fig_reflection",
        "--n",
        "8",
        "--sigma",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = sponge(&[
        "sweep",
        "--preset",
        "table3",
        "--n",
        "10",
        "--omega-over-l",
        "1",
        "--equation",
        "linear",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = sponge(&[
        "sweep",
        "--preset",
        "fig_entropy",
        "--n",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut checked = 0;
    for entry in fs::read_dir(&out).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "csv") {
            continue;
        }
        let cols = header(&path);
        assert_eq!(cols[0], "schema_version", "{}", path.display());
        assert!(records(&path).iter().all(|r| &r[0] == "1"));
        // pivot tables name their series after the data; only the leading columns are fixed
        let fixed = if path.file_name().unwrap() == "table3.csv" {
            &cols[..2]
        } else {
            &cols[..]
        };
        for c in fixed {
            assert!(
                schema.contains(&format!("`{c}`")),
                "{c} from {} is not documented",
                path.display()
            );
        }
        checked += 1;
    }
    assert_eq!(checked, 10);
}

#[test]
fn documented_run_outcomes() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str, text: &str| {
        let cfg = write_config(dir.path(), &format!("{name}.cfg"), text);
        let out = dir.path().join(name);
        let o = sponge(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--no-cache"]);
        let runs = out.join("run.csv");
        (
            code(&o),
            field(&runs, 0, "status"),
            field(&runs, 0, "e_abc").parse::<f64>().unwrap(),
        )
    };

    let (exit, status, e) = run(
        "smooth",
        "equation = nonlinear\nn = 50\nmethod = RM\nomega_over_l = 1\n",
    );
    assert_eq!((exit, status.as_str()), (0, "completed"));
    assert!(e.is_finite() && e < 1e-2, "{e}");

    // far-field operators are stiff on the coarsest grid
    let (exit, status, e) = run("coarse", "equation = nonlinear\nn = 10\nmethod = SDO\nsigma = 30\n");
    assert!(status == "diverged" && exit == 3 || e > 1.0, "{status} {e}");

    for method in ["RM", "RM-M-RK", "SDO", "S-SDO", "NDO", "Extrapolation"] {
        let (exit, status, e) = run(
            method,
            &format!("n = 10\nt_final = 8pi\namplitude = 0\nmethod = {method}\n"),
        );
        assert_eq!((exit, status.as_str(), e), (0, "completed", 0.0), "{method}");
    }
}
