use std::process::{Command, Output};

const QUINTIC: [&str; 4] = ["-a", "1/5,2/5,3/5,4/5", "-b", "1,1,1,1"];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperint"))
        .args(args)
        .env("HYPERINT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn check_quintic_holds() {
    let out = run(&[&["check", "--order", "12", "--json"][..], &QUINTIC].concat());
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["constants"]["c_prime"], "3125");
    assert_eq!(v["verdicts"]["criterion"], "holds");
    assert_eq!(v["verdicts"]["q_integral"]["order"], 12);
    assert_eq!(v["q_prefix"][1], "770");
}

#[test]
fn check_not_n_integral_is_not_applicable() {
    let out = run(&["check", "-a", "1/5,1/3,3/5", "-b", "1/2,1,1", "--order", "5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_half_special_case() {
    let out = run(&["check", "-a", "1/2", "-b", "1", "--order", "10"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("special case α = (1/2), β = (1)"));
}

#[test]
fn check_h_failure_exits_one() {
    let out = run(&["check", "-a", "1/6,1/2,2/3", "-b", "1/3,1,1", "--order", "10", "--json"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["verdicts"]["h_holds"], false);
}

#[test]
fn malformed_input_exits_64() {
    assert_eq!(code(&run(&["check", "-a", "0.5", "-b", "1"])), 64);
    assert_eq!(code(&run(&["check", "-a", "1/0", "-b", "1"])), 64);
    assert_eq!(code(&run(&["check", "-a", "-2", "-b", "1"])), 64);
    assert_eq!(code(&run(&["check", "-a", "1/2"])), 64);
    assert_eq!(code(&run(&["frobnicate"])), 64);
}

#[test]
fn series_listing() {
    let out = run(&[&["series", "--what", "F", "--scale", "auto", "--order", "3"][..], &QUINTIC].concat());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().collect::<Vec<_>>(), ["1", "120", "113400", "168168000"]);
    let out = run(&[&["series", "--order", "0"][..], &QUINTIC].concat());
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn series_exp_s_root_shows_remark_value() {
    let out = run(&["series", "-a", "1/7,1/4,3/7,6/7", "-b", "1,1,1,1", "--what", "expS", "--root", "12", "--order", "2", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["scale"], "19208");
    assert_eq!(v["coefficients"][2], "81541341/2");
}

#[test]
fn series_root_of_non_unit_is_rejected() {
    let out = run(&[&["series", "--what", "S", "--root", "2", "--order", "3"][..], &QUINTIC].concat());
    assert_eq!(code(&out), 64);
}

#[test]
fn verify_commands() {
    let out = run(&[&["verify", "--congruence", "twisted", "-p", "2", "--order", "20"][..], &QUINTIC].concat());
    assert_eq!(code(&out), 0);
    let out = run(&[&["verify", "--congruence", "windowed", "-p", "3", "--k-max", "12", "--json"][..], &QUINTIC].concat());
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["failure_count"], 0);
    let out = run(&[&["verify", "--congruence", "dd", "-p", "3", "--order", "20"][..], &QUINTIC].concat());
    assert_eq!(code(&out), 0);
}

#[test]
fn verify_detects_corruption_with_witness() {
    let out = run(
        &[&["verify", "--congruence", "windowed", "-p", "2", "--s-max", "1", "--k-max", "8", "--m-max", "2", "--perturb", "3", "--json"][..], &QUINTIC]
            .concat(),
    );
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert!(v["failure_count"].as_u64().unwrap() > 0);
    assert!(v["failures"][0]["sum"].is_string());
}

#[test]
fn verify_rejects_oversized_grid_and_unmet_preconditions() {
    let out = run(&[&["verify", "--congruence", "windowed", "-p", "3", "--s-max", "10"][..], &QUINTIC].concat());
    assert_eq!(code(&out), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid too large"));
    let out = run(&["verify", "-a", "1/6,1/2,2/3", "-b", "1/3,1,1", "--congruence", "theorem2", "-p", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn constants_command() {
    let out = run(&["constants", "-a", "1/6,1/2,2/3", "-b", "1/3,1,1", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["constants"]["c_prime"], "144");
    assert_eq!(v["constants"]["lambda"]["2"], -2);
    let out = run(&["constants", "-a", "1/7,2/7,4/7,5/7", "-b", "3/4,1,1,1"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("fails at p = 3"));
}

#[test]
fn reports_replay_to_the_same_verdict() {
    let first = json(&run(&[&["check", "--order", "8", "--json"][..], &QUINTIC].concat()));
    let alpha = first["alpha"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect::<Vec<_>>().join(",");
    let beta = first["beta"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect::<Vec<_>>().join(",");
    let second = json(&run(&["check", "-a", &alpha, "-b", &beta, "--order", "8", "--json"]));
    assert_eq!(first["verdicts"]["criterion"], second["verdicts"]["criterion"]);
    assert_eq!(first["constants"], second["constants"]);
}
