use std::process::Command;

use dualgreen::cli::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dualgreen"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    (header, lines.map(|l| l.split(',').map(str::to_owned).collect()).collect())
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn coulomb_spectrum_table() {
    let (code, out, _) = run(&["spectrum", "--system", "coulomb", "--Z", "1", "--lmax", "2", "--nmax", "3", "--points", "4000"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["n", "ell", "E_closed", "E_oracle", "rel_err"]);
    assert_eq!(rows.len(), 12);
    let ground = rows.iter().find(|r| r[0] == "0" && r[1] == "0").unwrap();
    assert_eq!(ground[column(&header, "E_closed")], "-5.000000000000e-01");
    assert!(out.ends_with('\n') && !out.contains('\r'));
}

#[test]
fn confine_family_table() {
    let (code, out, _) = run(&["confine-family", "--a-prime", "1", "--lambda2", "2", "--ell", "1", "--nu", "0..3", "--samples", "10", "--r-max", "10"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 40);
    let (nu, r, v) = (column(&header, "nu"), column(&header, "r"), column(&header, "V_eff"));
    let row = rows.iter().find(|x| x[nu] == "0" && x[r].parse::<f64>().unwrap() == 1.0).unwrap();
    assert!((row[v].parse::<f64>().unwrap() + 1.5).abs() < 1e-12);
    let lam = column(&header, "lambda_a");
    let first: Vec<f64> = (0..4).map(|k| rows.iter().find(|x| x[nu] == k.to_string()).unwrap()[lam].parse().unwrap()).collect();
    assert_eq!(first, [-4.5, -7.5, -10.5, -13.5]);
}

#[test]
fn dual_map_of_hydrogen() {
    let (code, out, _) = run(&["dual-map", "--a", "-1", "--C", "1", "--L", "0.5", "--E", "-0.5", "--lambda", "-1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["map"]["b"], 2.0);
    assert_eq!(v["map"]["eta"], 2.0);
    assert_eq!(v["dual"]["angular_momentum"], 1.0);
    assert_eq!(v["dual"]["terms"][0]["exponent"], 2.0);
    assert_eq!(v["dual"]["energy"], 4.0);
    assert_eq!(v["inverse"]["a"], 2.0);
}

#[test]
fn dual_map_round_trip() {
    let (_, out, _) = run(&["dual-map", "--a", "-0.5", "--C", "1.7", "--L", "1.5", "--E", "-0.3", "--lambda", "-2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let dual = &v["dual"];
    let (b, lb, eb, l_b) = (
        v["map"]["b"].as_f64().unwrap(),
        dual["terms"][0]["coupling"].as_f64().unwrap(),
        dual["energy"].as_f64().unwrap(),
        dual["angular_momentum"].as_f64().unwrap(),
    );
    let c_inv = v["inverse"]["scale"].as_f64().unwrap();
    let (bl, be, bb, bll) = (format!("{lb}"), format!("{eb}"), format!("{b}"), format!("{l_b}"));
    let (code, back, _) = run(&["dual-map", "--a", &bb, "--C", &c_inv.to_string(), "--L", &bll, "--E", &be, "--lambda", &bl]);
    assert_eq!(code, 0);
    let w: serde_json::Value = serde_json::from_str(&back).unwrap();
    let p = &w["dual"];
    let close = |x: &serde_json::Value, y: f64| (x.as_f64().unwrap() - y).abs() < 1e-12 * y.abs().max(1.0);
    assert!(close(&p["terms"][0]["coupling"], -2.0));
    assert!(close(&p["terms"][0]["exponent"], -0.5));
    assert!(close(&p["energy"], -0.3));
    assert!(close(&p["angular_momentum"], 1.5));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["spectrum", "--mass", "-1"]).0, 2);
    assert_eq!(run(&["green-eval", "--E", "0.3"]).0, 2);
    assert_eq!(run(&["dual-map", "--a", "0"]).0, 2);
    assert_eq!(run(&["--bogus"]).0, 2);
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["slice-converge", "--n", "0"]).0, 2);
    // the oscillator pole at E = 3/2 is a numerical failure
    assert_eq!(run(&["green-eval", "--system", "osc", "--E", "1.5"]).0, 3);
    let (code, _, err) = run(&["green-eval", "--E", "0.3"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("dualgreen: "), "{err}");
    let out = bin().args(["spectrum", "--nmax", "0", "--lmax", "0"]).env(THREADS_ENV, "x").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(main_with_args(["dualgreen", "--version"]), 0);
}

#[test]
fn checks_pass() {
    let (code, out, _) = run(&["checks"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), CHECKS.len());
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
    let (code, out, _) = run(&["checks", "--filter", "involution"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for (k, threads) in ["1", "3", "8"].iter().enumerate() {
        let path = dir.path().join(format!("g{k}.csv"));
        let status = bin()
            .args(["confine-family", "--samples", "20", "-o"])
            .arg(&path)
            .env(THREADS_ENV, threads)
            .status()
            .unwrap();
        assert!(status.success());
        texts.push(std::fs::read(&path).unwrap());
    }
    assert!(texts.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn json_format() {
    let (code, out, _) = run(&["green-eval", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "green-eval");
    assert_eq!(v["columns"], serde_json::json!(["r_outer", "r_inner", "E", "G"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 16);
    assert_eq!(run(&["dual-map", "--a", "-1", "--format", "csv"]).0, 2);
}

#[test]
fn csv_number_format() {
    assert_eq!(format_real(-0.5), "-5.000000000000e-01");
    assert_eq!(format_real(1234.5), "1.234500000000e+03");
    assert_eq!(format_real(0.0), "0.000000000000e+00");
    assert_eq!(format_real(1e-120), "1.000000000000e-120");
    let (_, out, _) = run(&["green-eval"]);
    for line in out.lines().skip(1) {
        for cell in line.split(',') {
            let (mant, exp) = cell.split_once('e').unwrap();
            assert_eq!(mant.trim_start_matches('-').len(), 14, "{cell}");
            assert!(exp.starts_with('+') || exp.starts_with('-'));
        }
    }
}

#[test]
fn config_file_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        r#"{"units": {"hbar": 1.0, "mass": 1.0}, "command": "green-eval", "system": "coulomb", "E": -0.3, "r_inner": [1.0], "r_outer": [2.0], "via_dual": true}"#,
    )
    .unwrap();
    let status = bin().arg("--config").arg(&cfg).arg("-o").arg(&out).status().unwrap();
    assert!(status.success());
    let (header, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 1);
    let g: f64 = rows[0][column(&header, "G")].parse().unwrap();
    let direct = dualgreen::green::coulomb_green(2.0, 1.0, 0.5, -0.3, 1.0, 1.0, 1.0).unwrap();
    assert!(((g - direct) / direct).abs() < 1e-10);

    std::fs::write(&cfg, "{not json").unwrap();
    assert_eq!(bin().arg("--config").arg(&cfg).status().unwrap().code(), Some(2));
    assert_eq!(bin().arg("--config").arg(dir.path().join("missing.json")).status().unwrap().code(), Some(2));
    assert_eq!(bin().arg("--config").arg(&cfg).arg("checks").status().unwrap().code(), Some(2));
}

#[test]
fn unwritable_output_is_a_config_error() {
    assert_eq!(run(&["green-eval", "-o", "/nonexistent-dir/out.csv"]).0, 2);
}

#[test]
fn slice_convergence_table() {
    let u = Units::default();
    let args = SliceArgs { omega: 1.0, sigma: 0.5, ell: 0, slices: vec![16, 64], probes: vec![], kernel: Default::default() };
    let errs = slice_errors(&args, &u).unwrap();
    assert_eq!(errs.iter().map(|e| e.0).collect::<Vec<_>>(), [16, 64]);
    assert!(errs[1].1 < errs[0].1 && errs[1].1 < 0.01, "{errs:?}");
    assert_eq!(DEFAULT_PROBES.len(), 5);
}

#[test]
fn green_values_through_the_library() {
    let args = GreenEvalArgs {
        system: SystemKind::Osc,
        energy: 0.8,
        ell: 1,
        dimension: 3,
        charge: 1.0,
        omega: 1.0,
        r_inner: vec![],
        r_outer: vec![],
        via_dual: false,
        quadrature: false,
    };
    let u = Units::default();
    let closed = green_value(&args, &u, 1.4, 0.6).unwrap();
    let quad = green_value(&GreenEvalArgs { quadrature: true, ..args.clone() }, &u, 1.4, 0.6).unwrap();
    let dual = green_value(&GreenEvalArgs { via_dual: true, ..args }, &u, 1.4, 0.6).unwrap();
    assert!(((quad - closed) / closed).abs() < 1e-9);
    assert!(((dual - closed) / closed).abs() < 1e-10);
    assert_eq!(log_log_slope(&[1.0, 2.0, 4.0], &[1.0, 0.25, 0.0625]), -2.0);
}
