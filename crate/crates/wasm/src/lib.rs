//! Browser bindings for three interactive qubit experiments. Every export
//! returns a JSON document, or an error message, so the same functions are
//! callable from JavaScript and from native tests.

use qlat_core::domains::{pivot_residual, DomainReport, PureStateModel};
use qlat_core::lattice::PropertyFamily;
use qlat_core::measurement::{
    relation_k, relation_t_exact, relation_t_mc, sequential_disagreement_probability,
    trial_disagreement_probability, Observable, SeededRng,
};
use qlat_core::numerics::{c64, CMatrix, Hermitian, Ket, Projection};
use qlat_core::semantics::{ev_evaluate, Statement};
use qlat_core::Tolerances;
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_TRIALS: u32 = 200_000;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Spin observable along the direction at polar angle `theta` in the x-z
/// plane: `cos θ σz + sin θ σx`.
fn spin(theta: f64, tol: &Tolerances) -> Result<Observable, String> {
    let (c, s) = (theta.cos(), theta.sin());
    let m = CMatrix::from_row_slice(2, 2, &[c64(c, 0.), c64(s, 0.), c64(s, 0.), c64(-c, 0.)]);
    Ok(Observable::new(Hermitian::new(m, tol).map_err(err)?, tol))
}

/// `cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.
fn bloch_ket(theta: f64) -> Ket {
    Ket::from_real(&[(theta / 2.0).cos(), (theta / 2.0).sin()]).expect("unit vector")
}

fn atom_family(atom_angles: &[f64], tol: &Tolerances) -> Result<PropertyFamily, String> {
    let members: Vec<_> = atom_angles
        .iter()
        .enumerate()
        .map(|(i, t)| (format!("a{i}"), Projection::from_ket(&bloch_ket(*t))))
        .collect();
    PropertyFamily::new(2, members, tol).map_err(err)
}

/// Measures σz, then the spin at angle `theta`, then σz again on Haar random
/// qubit states. Reports the analytic probability that the second σz result
/// differs from the first next to the simulated frequency.
#[wasm_bindgen]
pub fn sequential_measurement(theta: f64, trials: u32, seed: u64) -> Result<String, String> {
    if !theta.is_finite() {
        return Err("theta must be finite".into());
    }
    if trials == 0 || trials > MAX_TRIALS {
        return Err(format!("trials must be in 1..={MAX_TRIALS}"));
    }
    let tol = Tolerances::default();
    let b = spin(0.0, &tol)?;
    let c = spin(theta, &tol)?;
    let mc = relation_t_mc(&b, &c, trials as u64, &tol, &SeededRng::new(seed)).map_err(err)?;
    let analytic = sequential_disagreement_probability(&b, &c).map_err(err)?;
    Ok(json!({
        "theta": theta,
        "trials": mc.trials,
        "analytic": analytic,
        "frequency": mc.bcb_disagreements as f64 / mc.trials as f64,
        "trial_disagreement_probability": trial_disagreement_probability(&b, &c).map_err(err)?,
        "commute": relation_k(&b, &c, &tol).map_err(err)?,
        "non_disturbing": relation_t_exact(&b, &c, &tol).map_err(err)?,
        "simulation_passed": mc.passed,
    })
    .to_string())
}

/// Domains of the qubit state at Bloch angle `state_angle` over the family
/// of atoms at `atom_angles`, labelled `a0, a1, …`, plus `0` and `I`.
#[wasm_bindgen]
pub fn qubit_domains(state_angle: f64, atom_angles: &[f64]) -> Result<String, String> {
    let tol = Tolerances::default();
    let family = atom_family(atom_angles, &tol)?;
    let model = PureStateModel::new(bloch_ket(state_angle));
    let report = DomainReport::compute(&model, &family, &tol).map_err(err)?;
    let pivots = family
        .iter()
        .map(|(_, e)| pivot_residual(e, model.support(), &tol))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    Ok(json!({ "domains": report, "pivot_residuals": pivots }).to_string())
}

/// Verificationist and strong Kleene values of a prefix statement over the
/// same qubit family.
#[wasm_bindgen]
pub fn evaluate_statement(
    statement: &str,
    state_angle: f64,
    atom_angles: &[f64],
) -> Result<String, String> {
    let tol = Tolerances::default();
    let s: Statement = statement.parse().map_err(err)?;
    let family = atom_family(atom_angles, &tol)?;
    let model = PureStateModel::new(bloch_ket(state_angle));
    let ev = ev_evaluate(&s, &model, &family, &tol).map_err(err)?;
    Ok(json!({ "statement": s.to_string(), "evaluation": ev }).to_string())
}
