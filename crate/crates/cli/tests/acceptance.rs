//! The acceptance suite: twelve criteria, each with a time budget, one
//! line per criterion. Exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use epi_mackey::{suites, Exec};
use serde_json::Value;

type Outcome = Result<(bool, String), String>;

fn from_suite(r: epi_mackey::Result<suites::SuiteReport>) -> Outcome {
    let r = r.map_err(|e| e.to_string())?;
    let detail = match &r.failure {
        Some(f) => format!("{} cases, first failure: {f}", r.cases),
        None => format!("{} cases", r.cases),
    };
    Ok((r.pass, detail))
}

fn segal_via_binary() -> Outcome {
    let mut rows = 0;
    for p in [2u64, 3, 5, 7] {
        let out = Command::new(env!("CARGO_BIN_EXE_epi-mackey"))
            .args(["--format", "json", "segal", "--p", &p.to_string()])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Ok((false, format!("p = {p}: exit {}", out.status)));
        }
        let json: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        for row in json["rows"].as_array().ok_or("no rows")? {
            let k = row["k"].as_u64().ok_or("no k")?;
            let with_p = row["with_p"].as_u64().ok_or("no with_p")?;
            let expected = if k == 1 || k == p { p } else { 1 };
            if with_p != expected || (k == p && row["raw_image"].as_u64() != Some(0)) {
                return Ok((false, format!("p = {p}, k = {k}: {row}")));
            }
            rows += 1;
        }
    }
    Ok((true, format!("{rows} rows over p in {{2,3,5,7}}")))
}

fn main() -> ExitCode {
    let exec = Exec::default();
    let criteria: Vec<(&str, u64, Box<dyn Fn() -> Outcome>)> = vec![
        ("segal arithmetic for p <= 7", 5, Box::new(segal_via_binary)),
        ("p divides Surj(p, i) for p <= 13", 1, Box::new(|| from_suite(Ok(suites::divisibility(13))))),
        ("surjection counts and k! for k <= 10", 10, Box::new(|| from_suite(Ok(suites::surjection_counts(10, 8))))),
        ("marks are multiplicative, d <= 6, r <= 3", 60, Box::new(move || from_suite(suites::marks_homomorphism(6, 3, exec)))),
        ("C2 sanity", 1, Box::new(|| from_suite(suites::c2_sanity()))),
        ("triple consistency, d <= 5, r <= 2", 120, Box::new(move || from_suite(suites::triple_consistency(5, 2, exec)))),
        ("representables satisfy the axioms, d <= 4, r <= 2", 120, Box::new(move || from_suite(suites::representables(4, 2, exec)))),
        ("pullback universal property in d = 4", 60, Box::new(move || from_suite(suites::universal_property(4, exec)))),
        ("cube criterion matches oracle, d <= 5, r <= 3", 120, Box::new(move || from_suite(suites::cube_oracle(5, 3, 200, exec)))),
        ("pigeonhole arithmetic, d <= 7", 30, Box::new(|| from_suite(suites::pigeonhole(7)))),
        ("atomic and inductive orbitality, d <= 5", 30, Box::new(move || from_suite(suites::orbitality(5, exec)))),
        ("marks triangularity, d <= 6, r <= 3", 10, Box::new(move || from_suite(suites::triangularity(6, 3, exec)))),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let (pass, detail) = match outcome {
            Ok((pass, detail)) => (pass && in_time, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{:>2} {} {name}: {detail}, {:.2?} of {budget} s",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
