use std::path::PathBuf;
use std::process::{Command, Output};

fn rotor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotor")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

#[test]
fn ellipse_origin_rows() {
    let o = rotor(&["kinematics", "--curve", "ellipse", "--a", "2", "--b", "1", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,D,dD,d2D,rot_speed");
    assert_eq!(lines.len(), 6);
    assert!(out.ends_with('\n') && !out.contains('\r'));
    for line in &lines[1..] {
        for cell in line.split(',') {
            let mantissa = cell.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.len(), 18, "17 significant digits: {cell}");
        }
    }
}

#[test]
fn center_on_curve_is_degenerate() {
    let o = rotor(&["kinematics", "--curve", "circle", "--frame", "point:1,0", "--samples", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("CenterOnCurve at t="), "{}", stderr(&o));
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["kinematics", "--curve", "nope"][..],
        &["kinematics", "--curve", "circle", "--frame", "focus"],
        &["kinematics", "--curve", "circle", "--samples", "1"],
        &["kinematics", "--curve", "circle", "--format", "xml"],
        &["kinematics", "--curve", "circle", "--frame", "point:1"],
        &["kinematics", "--config", "/nonexistent/config.json"],
        &["kinematics", "--samples", "many"],
        &["frobnicate"],
    ] {
        let o = rotor(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn json_matches_csv() {
    let base = ["kinematics", "--curve", "helix", "--frame", "point:-2,-2,-1", "--samples", "7"];
    let csv = stdout(&rotor(&base));
    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&rotor(&json_args))).unwrap();
    let rows = json.as_array().unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header, ["t", "D", "dD", "d2D", "rot_speed", "speed_A", "speed_B", "speed_C"]);
    assert_eq!(rows.len(), 7);
    for (line, row) in lines.zip(rows) {
        let obj = row.as_object().unwrap();
        assert_eq!(obj.len(), header.len());
        for (key, cell) in header.iter().zip(line.split(',')) {
            assert_eq!(obj[*key].as_f64().unwrap(), cell.parse::<f64>().unwrap());
        }
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["kinematics", "--curve", "ellipse", "--a", "3", "--b", "2", "--frame", "local", "--samples", "101"][..],
        &["surface", "--samples", "33"],
        &["ellipse", "--a", "5", "--b", "1"],
        &["reconstruct", "--curve", "helix", "--step", "0.01"],
    ] {
        let (a, b) = (rotor(args), rotor(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn reconstruct_reports_error_and_tolerance() {
    let path = scratch("ellipse.csv");
    let o = rotor(&["reconstruct", "--curve", "ellipse-origin", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let summary = stdout(&o);
    let err: f64 = summary.trim().strip_prefix("max_error=").unwrap().parse().unwrap();
    assert!(err < 1e-6);
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("t,x,y\n"));
    assert_eq!(written.lines().count(), 10_002);
    std::fs::remove_file(path).unwrap();

    let coarse = rotor(&["reconstruct", "--curve", "ellipse-origin", "--step", &(std::f64::consts::TAU / 100.0).to_string()]);
    assert_eq!(coarse.status.code(), Some(1));
    let line = stderr(&coarse);
    let err: f64 = line.lines().next().unwrap().strip_prefix("max_error=").unwrap().parse().unwrap();
    assert!(err > 1e-6);
}

#[test]
fn helix_crossing_a_coordinate_plane_is_degenerate() {
    let config = scratch("helix.json");
    std::fs::write(&config, r#"{"command": "reconstruct", "preset": "helix", "radius": 3, "domain": [0, 6]}"#).unwrap();
    let o = rotor(&["reconstruct", "--config", config.to_str().unwrap()]);
    std::fs::remove_file(config).unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("ProjectionCollapse"), "{}", stderr(&o));
}

#[test]
fn flags_override_config() {
    let config = scratch("override.json");
    std::fs::write(&config, r#"{"curve": "ellipse", "a": 2, "b": 1, "samples": 50, "format": "json"}"#).unwrap();
    let o = rotor(&["kinematics", "--config", config.to_str().unwrap(), "--samples", "3", "--format", "csv"]);
    std::fs::remove_file(config).unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn config_accepts_expression_curves() {
    let config = scratch("expr.json");
    std::fs::write(
        &config,
        r#"{"command": "kinematics", "curve": {"kind": "expr", "expr": {"x": "3 + cos(t)", "y": "sin(2*t)"}, "domain": [0, 1]}, "samples": 3}"#,
    )
    .unwrap();
    let o = rotor(&["kinematics", "--config", config.to_str().unwrap()]);
    std::fs::remove_file(config).unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let first = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(first.starts_with("0.0000000000000000e0,4.0000000000000000e0,"), "{first}");
}

#[test]
fn verify_all_pass_and_filter() {
    let all = rotor(&["verify"]);
    assert_eq!(all.status.code(), Some(0), "{}", stdout(&all));
    assert!(stdout(&all).lines().all(|l| l.starts_with("PASS ")));

    let ellipse = rotor(&["verify", "--filter", "ellipse"]);
    let ids: Vec<String> = stdout(&ellipse).lines().map(|l| l.split(' ').nth(1).unwrap().to_string()).collect();
    assert!(ids.contains(&"focal-values".to_string()) && ids.contains(&"average-speeds".to_string()));
    assert!(!ids.contains(&"first-form".to_string()));
}

#[test]
fn injected_fault_fails_the_limit_check() {
    let o = rotor(&["verify", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("FAIL local-limits ")), "{out}");
    assert!(out.lines().any(|l| l.starts_with("PASS focal-values ")));
}

#[test]
fn hidden_flag_stays_out_of_help() {
    let help = stdout(&rotor(&["verify", "--help"]));
    assert!(help.contains("--filter"));
    assert!(!help.contains("inject"));
}

#[test]
fn fd_step_variable_is_tolerated() {
    let run = |step: &str| {
        Command::new(env!("CARGO_BIN_EXE_rotor"))
            .args(["kinematics", "--curve", "circle", "--frame", "point:3,0", "--samples", "3"])
            .env("ROTOR_FD_STEP", step)
            .output()
            .unwrap()
    };
    assert_eq!(run("1e-4").status.code(), Some(0));
    assert_eq!(run("not-a-number").status.code(), Some(0));
}
