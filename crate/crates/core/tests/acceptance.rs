//! Acceptance suite: every criterion, one PASS/FAIL line each, with the
//! pinned thresholds checked against the report details.

use kron_core::selftest::{run_criterion, run_selftest, CriterionResult, SelftestOptions, Suite};
use serde_json::{json, Value};

const SEED: u64 = 1;

fn failures_empty(v: &Value) -> bool {
    v.get("failures").and_then(Value::as_array).is_some_and(Vec::is_empty)
}

/// Thresholds fixed by the criteria themselves, checked independently of
/// each criterion's own verdict.
fn pinned(c: &CriterionResult) -> Result<(), String> {
    let d = &c.details;
    let ok = match c.id {
        1 => {
            d["h0_N_minus_1"] == json!(6)
                && d["h0_N"] == json!(12)
                && d["splitting"] == json!([5, 5])
                && d["twistor_splitting"] == json!({"1": 6})
        }
        2 => {
            let rows = d.as_array().cloned().unwrap_or_default();
            rows.len() == 4
                && rows.iter().zip(3..=6).all(|(r, deg)| {
                    r["d"] == json!(deg) && r["samples"] == json!(100) && failures_empty(r)
                })
        }
        3 => {
            let rows = d.as_array().cloned().unwrap_or_default();
            let want = [(4, 4, 9, 21), (4, 5, 11, 26), (5, 5, 12, 32)];
            rows.len() == 3
                && rows.iter().zip(want).all(|(r, (n, deg, h1, h0))| {
                    r["n"] == json!(n)
                        && r["d"] == json!(deg)
                        && r["samples"] == json!(25)
                        && r["expected_h0_N_minus_1"] == json!(h1)
                        && r["expected_h0_N"] == json!(h0)
                        && failures_empty(r)
                })
        }
        4 => {
            d["splitting"] == json!({"0": 2, "1": 4, "2": 2})
                && d["printed_recursion_values"][0] == json!(10)
                && d["random_curves"] == json!(50)
                && failures_empty(d)
        }
        5 => {
            let rows = d["per_target"].as_array().cloned().unwrap_or_default();
            rows.len() == 20
                && rows.iter().all(|r| {
                    r["slice_rank"] == json!(6) && r["vanishing_subspace_dim"] == json!(6)
                })
        }
        6 => {
            d["equivariance"]["standard"] == json!(true)
                && d["check"]["equivariant"] == json!(true)
                && d["negative_control_rejected"] == json!(true)
        }
        7 => d["sections"] == json!(500) && d["incidence_symbolic"] == json!(true) && failures_empty(d),
        8 => {
            d["real_lines"] == json!(200)
                && d["hand_examples"] == json!(["degenerate", "generic", "generic"])
                && failures_empty(d)
        }
        9 => {
            d["certified"].is_object()
                && d["variants_checked"] == json!(256)
                && d["printed_variant_certified"].is_boolean()
                && d["samples"] == json!(200)
                && failures_empty(d)
        }
        10 => {
            d["signature"] == json!([8, 8])
                && d["length_identity_symbolic"] == json!(true)
                && d["samples"] == json!(200)
                && failures_empty(d)
        }
        11 => {
            let rows = d.as_array().cloned().unwrap_or_default();
            rows.len() == 2 && rows.iter().all(|r| r["identical"] == json!(true))
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("criterion {} details off target: {d}", c.id))
    }
}

#[test]
fn acceptance_criteria() {
    let report = run_selftest(&SelftestOptions::new(SEED));
    assert_eq!(report.criteria.len(), 11);
    let mut problems = Vec::new();
    for c in &report.criteria {
        let pin = pinned(c);
        let status = if c.passed && pin.is_ok() { "PASS" } else { "FAIL" };
        println!("{status} criterion {:>2}: {}", c.id, c.name);
        if !c.passed {
            problems.push(format!("criterion {} reported failure: {}", c.id, c.details));
        }
        if let Err(e) = pin {
            problems.push(e);
        }
    }
    assert!(problems.is_empty(), "{}", problems.join("\n"));
    assert!(report.passed);
}

#[test]
fn corrupted_recursion_fails_criterion_four() {
    let opts = SelftestOptions {
        seed: SEED,
        suite: Suite::Bundles,
        corrupt_recursion: true,
    };
    let report = run_selftest(&opts);
    assert!(!report.passed);
    assert_eq!(report.failed_ids(), vec![4]);
    let c = run_criterion(4, &SelftestOptions::new(SEED)).unwrap();
    assert!(c.passed);
}
