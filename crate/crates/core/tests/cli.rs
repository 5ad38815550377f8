use std::process::Command;

fn eqsz(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eqsz")).args(args).output().expect("run eqsz");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn suite_json_has_the_summary_schema() {
    let (code, out, err) = eqsz(&["--model", "su2-cp1", "suite", "diag"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["suite"], "diag");
    assert_eq!(v["pass"], true);
    assert!(v["fits"].as_array().unwrap().iter().all(|f| f["pass"] == true));
    let row = &v["rows"][0];
    for key in ["model", "nu", "k", "quantity", "value", "predicted", "err"] {
        assert!(row.get(key).is_some(), "missing {key}");
    }
    assert!(err.contains("PASS"));
}

#[test]
fn csv_output_is_deterministic() {
    let args = ["--model", "s1-cp2-w112", "--format", "csv", "--seed", "7", "suite", "gaussian"];
    let (c1, a, _) = eqsz(&args);
    let (c2, b, _) = eqsz(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.starts_with("model,nu,k,quantity,value,predicted,err\n"));
    let (_, x, _) = eqsz(&["--seed", "3", "--format", "csv", "suite", "characters"]);
    let (_, y, _) = eqsz(&["--seed", "3", "--format", "csv", "suite", "characters"]);
    assert_eq!(x, y);
}

#[test]
fn out_dir_receives_table_and_plot() {
    let dir = std::env::temp_dir().join(format!("eqsz-cli-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let (code, _, _) = eqsz(&["--model", "t2-cp2", "--format", "csv", "--out", d, "suite", "dims"]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.join("dims.csv")).unwrap();
    assert!(csv.lines().count() > 4);
    assert!(std::fs::read_to_string(dir.join("dims.svg")).unwrap().starts_with("<svg"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    // empty locus: precondition
    assert_eq!(eqsz(&["--model", "t2-cp2", "--nu", "1,-3", "suite", "dims"]).0, 3);
    // default point off the cone over this nu: precondition
    assert_eq!(eqsz(&["--model", "t2-cp2", "--nu", "1,1", "suite", "diag"]).0, 3);
    // configuration errors
    assert_eq!(eqsz(&["--kmin", "0", "suite", "dims"]).0, 4);
    assert_eq!(eqsz(&["--kfactor", "1", "suite", "dims"]).0, 4);
    assert_eq!(eqsz(&["--model", "nope", "suite", "dims"]).0, 4);
    assert_eq!(eqsz(&["suite", "bogus"]).0, 4);
    assert_eq!(eqsz(&["--format", "xml", "suite", "dims"]).0, 4);
}

#[test]
fn info_subcommands() {
    let (code, out, _) = eqsz(&["--model", "su2-cp1", "group-info"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dim"], 3);
    assert_eq!(v["rank"], 1);

    let (_, out, _) = eqsz(&["--model", "s1-cp1-w12", "--kmin", "10", "--kmax", "10", "dim"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][0]["dim"], 6);

    let (_, out, _) = eqsz(&["--model", "su2-cp1", "--nu", "3", "character", "--theta", "0.4"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let w = v["weyl"][0].as_f64().unwrap();
    let k = v["kirillov"][0].as_f64().unwrap();
    assert!((w - k).abs() < 1e-6);
    assert!((w - (1.0 + 2.0 * 0.8f64.cos())).abs() < 1e-12);

    let (_, out, _) = eqsz(&["--model", "su2-cp1", "--nu", "2", "orbit-volume"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["orbit_volume"].as_f64().unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-12);

    let (_, out, _) = eqsz(&["--model", "su2-cp1", "psi-nu"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["psi"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let (code, out, _) = eqsz(&["--model", "s1-cp1-w12", "kernel-eval", "--k", "64", "--x", "0.5,0.5", "--y", "0.9,0.1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["separation"].as_f64().unwrap() > 0.3);
    let (code, _, _) = eqsz(&["--model", "s1-cp1-w12", "kernel-eval", "--k", "4", "--x", "0.5"]);
    assert_eq!(code, 4);
}
