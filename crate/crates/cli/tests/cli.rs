use std::fs;
use std::process::{Command, Output};

fn moyal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moyal"))
        .args(args)
        .output()
        .expect("spawn moyal")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn damped_spectrum_at_zero_lambda() {
    let o = moyal(&["spectrum", "--model", "damped", "--n-max", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let es: Vec<f64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["E"].as_f64().unwrap())
        .collect();
    assert_eq!(es, vec![0.5, 1.5, 2.5, 3.5]);
}

#[test]
fn helium_spectrum_lists_first_order() {
    let o = moyal(&[
        "spectrum", "--model", "helium", "--xi", "0.1", "--n-max", "1", "--format", "csv",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("nu,nv,E,E_first_order"));
    let ground: Vec<&str> = lines.next().unwrap().split(',').collect();
    let e: f64 = ground[2].parse().unwrap();
    assert!((e - (1.0 + 0.9f64.sqrt()) / 2.0).abs() < 1e-15);
    assert_eq!(ground[3].parse::<f64>().unwrap(), 0.975);
    assert_eq!(lines.count(), 3);
}

#[test]
fn misplaced_flag_is_a_usage_error() {
    assert_eq!(
        code(&moyal(&[
            "spectrum", "--model", "harmonic", "--lambda", "0.3"
        ])),
        2
    );
    assert_eq!(
        code(&moyal(&["spectrum", "--model", "damped", "--mass", "2"])),
        2
    );
    assert_eq!(
        code(&moyal(&[
            "spectrum", "--model", "damped", "--lambda", "1.0"
        ])),
        2
    );
    assert_eq!(code(&moyal(&["negativity", "--model", "helium"])), 2);
}

#[test]
fn invalid_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_moyal"))
        .args(["spectrum"])
        .env("MOYAL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("w.csv");
    let o = moyal(&[
        "wigner",
        "--nq",
        "16",
        "--np",
        "16",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn wigner_csv_is_normalised() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let o = moyal(&[
        "wigner",
        "--model",
        "damped",
        "--n",
        "2",
        "--lambda",
        "0.4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let integral: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# integral: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((integral - 1.0).abs() < 1e-6, "{integral}");
    assert!(text.lines().any(|l| l == "q,p,W"));
    assert_eq!(
        text.lines().filter(|l| !l.starts_with('#')).count(),
        1 + 201 * 201
    );
}

#[test]
fn helium_writes_both_sectors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("he.json");
    let o = moyal(&[
        "wigner",
        "--model",
        "helium",
        "--xi",
        "0.2",
        "--nu",
        "1",
        "--nq",
        "32",
        "--np",
        "32",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for sector in ["u", "v"] {
        let text = fs::read_to_string(dir.path().join(format!("he_{sector}.json"))).unwrap();
        let _: serde_json::Value = serde_json::from_str(&text).expect("sector file is JSON");
    }

    // no single file to write two sectors to
    assert_eq!(
        code(&moyal(&[
            "wigner", "--model", "helium", "--nq", "16", "--np", "16"
        ])),
        2
    );
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let run = |threads: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_moyal"));
        c.args([
            "negativity",
            "--method",
            "grid",
            "--n-max",
            "2",
            "--lambda",
            "0.3",
            "--tol",
            "1e-5",
        ]);
        if let Some(t) = threads {
            c.env("MOYAL_THREADS", t);
        } else {
            c.env_remove("MOYAL_THREADS");
        }
        let o = c.output().unwrap();
        assert_eq!(code(&o), 0);
        o.stdout
    };
    assert_eq!(run(Some("1")), run(None));
}

#[test]
fn table_check_reports_mismatch() {
    let o = moyal(&["negativity", "--check-table1"]);
    assert_eq!(code(&o), 4);
    let loose = moyal(&["negativity", "--check-table1", "--table-tol", "1e-4"]);
    assert_eq!(code(&loose), 0);
}

#[test]
fn lambda_scan_passes() {
    let o = moyal(&[
        "negativity",
        "--model",
        "damped",
        "--n",
        "2",
        "--lambda-scan",
        "0,0.3,-0.6,0.9",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    assert_eq!(v["grid"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_passes_and_catches_fault() {
    let ok = moyal(&["verify", "--nq", "64", "--format", "json"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    let checks: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!(checks.as_array().unwrap().iter().all(|c| c["pass"] == true));

    let bad = moyal(&["verify", "--nq", "64", "--inject-fault", "damped-sign"]);
    assert_eq!(code(&bad), 5);
}
