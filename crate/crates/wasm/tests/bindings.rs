use std::f64::consts::PI;

use qlat_wasm::{evaluate_statement, qubit_domains, sequential_measurement};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn sequential_measurement_tracks_analytic_curve() {
    for k in 0..=8 {
        let theta = PI * k as f64 / 8.0;
        let r = parse(sequential_measurement(theta, 20_000, 3));
        let expected = theta.sin().powi(2) / 2.0;
        assert!((r["analytic"].as_f64().unwrap() - expected).abs() < 1e-12);
        let freq = r["frequency"].as_f64().unwrap();
        assert!(
            (freq - expected).abs() < 0.02,
            "θ = {theta}: {freq} vs {expected}"
        );
        let commute = k == 0 || k == 8;
        assert_eq!(r["commute"], commute);
        assert_eq!(r["non_disturbing"], commute);
        assert_eq!(r["simulation_passed"], commute);
    }
}

#[test]
fn sequential_measurement_validates_input() {
    assert!(sequential_measurement(f64::NAN, 10, 0).is_err());
    assert!(sequential_measurement(1.0, 0, 0).is_err());
    assert!(sequential_measurement(1.0, 10_000_000, 0).is_err());
}

#[test]
fn domains_for_state_on_an_atom() {
    // state |0⟩; atoms |0⟩, |1⟩, |+⟩
    let r = parse(qubit_domains(0.0, &[0.0, PI, PI / 2.0]));
    let d = &r["domains"];
    let set = |k: &str| {
        d[k].as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(set("certainly_true"), ["I", "a0"]);
    assert_eq!(set("certainly_false"), ["0", "a1"]);
    assert_eq!(set("predictable"), set("compatible"));
    assert_eq!(set("objective"), set("predictable"));
    assert!(!set("predictable").contains(&"a2".to_string()));
    assert_eq!(d["predictable_is_compatible"]["holds"], true);
}

#[test]
fn statement_evaluation() {
    let atoms = [0.0, PI, PI / 2.0];
    let r = parse(evaluate_statement("(or a0 a1)", 0.0, &atoms));
    assert_eq!(r["evaluation"]["testable"], true);
    let r = parse(evaluate_statement(
        "(or (and a0 a2) (not (and a0 a2)))",
        0.0,
        &atoms,
    ));
    assert_eq!(r["evaluation"]["testable"], false);
    assert!(r["evaluation"]["flag"].is_string());
    assert!(evaluate_statement("(and a0", 0.0, &atoms).is_err());
    assert!(evaluate_statement("(and a0 zz)", 0.0, &atoms).is_err());
}
