use std::process::{Command, Output};

use serde_json::Value;

fn pm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pm")).args(args).env_remove("PM_MAX_TERMS").output().expect("run pm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = pm(&all);
    (serde_json::from_slice(&o.stdout).expect("json output"), o.status.code().unwrap())
}

#[test]
fn derive_z_squared() {
    let o = pm(&["derive", "--expr", "z^2", "--m", "1", "--n", "0", "--method", "explicit"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2*z*(1-z*w)");
}

#[test]
fn derive_methods_agree_at_a_point() {
    let mut values = Vec::new();
    for method in ["definition", "explicit", "recursion", "laplace"] {
        let (v, code) = json(&["derive", "--expr", "z^2*w/(1-z*w)", "--m", "2", "--n", "1", "--method", method, "--at", "0.25;0.5i"]);
        assert_eq!(code, 0);
        values.push(v["result"].clone());
    }
    assert!(values.windows(2).all(|p| p[0] == p[1]));
}

#[test]
fn star_example() {
    let (v, code) = json(&["star", "--f", "w", "--g", "z", "--hbar", "0.1", "--at", "0.5,0.3333333333", "--tol", "1e-10"]);
    assert_eq!(code, 0);
    assert!((v["value"][0].as_f64().unwrap() - 0.2383079).abs() < 1e-6);
    assert!(v["tail_bound"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn poly_example() {
    let (v, code) = json(&["poly", "--m", "3", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["coefficients"], serde_json::json!([0, 12, 10, 1]));
}

#[test]
fn verify_suites_pass() {
    for (suite, seed) in [("identities", "7"), ("positivity", "0"), ("asymptotics", "0")] {
        let (v, code) = json(&["verify", suite, "--seed", seed]);
        assert_eq!(code, 0, "{suite}");
        assert_eq!(v["passed"], Value::Bool(true));
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "kernels", "--seed", "3", "--format", "csv"];
    assert_eq!(pm(&args).stdout, pm(&args).stdout);
}

#[test]
fn computation_error_is_structured() {
    let (v, code) = json(&["eval", "--expr", "1/(1-z*w)", "--at", "2;0.5"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "pole_at_point");
}

#[test]
fn usage_errors_exit_two() {
    let o = pm(&["derive", "--expr", "z^^2", "--m", "1", "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 2"));
    assert_eq!(pm(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(pm(&["star", "--f", "w", "--g", "z", "--at", "0.1"]).status.code(), Some(2));
}

#[test]
fn budget_from_environment_and_flag() {
    let base = ["star", "--f", "w", "--g", "z", "--hbar", "0.1", "--at", "0.5,0.3", "--mode", "successive"];
    let run = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_pm")).args(args).env("PM_MAX_TERMS", "5").output().unwrap()
    };
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["--max-terms", "300"]).status.code(), Some(0));
}

#[test]
fn sweep_emits_csv() {
    let o = pm(&["star", "--f", "w", "--g", "z", "--at", "0.5,0.3", "--sweep", "hbar=1e-1:1e-3:log:3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "hbar_re,hbar_im,value_re,value_im,tail_bound,terms");
    assert_eq!(lines.len(), 4);
}

#[test]
fn asym_sweep_remainder_shrinks() {
    let o = pm(&["asym", "--f", "w", "--g", "z", "--order", "1", "--at", "0.3;0.2", "--sweep", "hbar=1e-1:1e-3:log:3", "--format", "json"]);
    let rows: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r: Vec<f64> = rows.as_array().unwrap().iter().map(|x| x["remainder"].as_f64().unwrap()).collect();
    assert!(r[0] > 50.0 * r[1] && r[1] > 50.0 * r[2]);
}

#[test]
fn diagonal_products() {
    for cmd in ["star-disk", "star-sphere"] {
        let (v, code) = json(&[cmd, "--f", "w", "--g", "z", "--hbar", "0.1", "--at", "0.3+0.1i"]);
        assert_eq!(code, 0, "{cmd}");
        let a = v["value"][0].as_f64().unwrap();
        let b = v["one_variable_value"][0].as_f64().unwrap();
        assert!((a - b).abs() < 1e-10);
    }
    let (v, code) = json(&["star-disk", "--f", "w", "--g", "z", "--hbar", "0.1", "--at", "1.5"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "invalid_point");
}

#[test]
fn kernel_and_poisson() {
    let (v, code) = json(&["kernel", "--n", "1", "--cutoff", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["rank"]["kernel_dim"], v["rank"]["expected_kernel_dim"]);
    let o = pm(&["poisson", "--f", "z", "--g", "w"]);
    assert_eq!(stdout(&o).trim(), "(1-z*w)^2");
}
