//! Property domains of a pure state over a finite property family:
//! certainly true, certainly false, predictable, compatible with the
//! support, and objective (measurable without disturbing the support).
//!
//! The predictable side is computed from the lattice order, the compatible
//! side from operator commutators and the objective side from the exact
//! non-disturbance relation, so equalities between them are checked across
//! independent code paths.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::lattice::{join, leq, meet, PropertyFamily};
use crate::measurement::{born_probability, relation_t_exact, Observable};
use crate::numerics::{check_dims, commutator_norm, Ket, Projection, Tolerances};

pub type LabelSet = BTreeSet<String>;

/// `|ψ⟩⟨ψ|`.
pub fn support(psi: &Ket) -> Projection {
    Projection::from_ket(psi)
}

/// A pure state together with its support.
#[derive(Clone, Debug)]
pub struct PureStateModel {
    state: Ket,
    support: Projection,
}

impl PureStateModel {
    pub fn new(state: Ket) -> Self {
        let support = support(&state);
        Self { state, support }
    }

    pub fn state(&self) -> &Ket {
        &self.state
    }

    pub fn support(&self) -> &Projection {
        &self.support
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }
}

fn select(
    model: &PureStateModel,
    family: &PropertyFamily,
    mut keep: impl FnMut(&Projection) -> Result<bool>,
) -> Result<LabelSet> {
    check_dims(family.dim(), model.dim())?;
    let mut out = LabelSet::new();
    for (label, e) in family.iter() {
        if keep(e)? {
            out.insert(label.to_string());
        }
    }
    Ok(out)
}

/// Members `E` with `E_S ≤ E`.
pub fn certainly_true_domain(
    model: &PureStateModel,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<LabelSet> {
    select(model, family, |e| leq(model.support(), e, tol))
}

/// Members `E` with `E ≤ E_S⊥`.
pub fn certainly_false_domain(
    model: &PureStateModel,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<LabelSet> {
    let perp = model.support().complement();
    select(model, family, |e| leq(e, &perp, tol))
}

pub fn predictable_domain(
    model: &PureStateModel,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<LabelSet> {
    let mut out = certainly_true_domain(model, family, tol)?;
    out.extend(certainly_false_domain(model, family, tol)?);
    Ok(out)
}

/// Members whose projection commutes with the support
/// (`‖[E, E_S]‖_F < εop·dim`).
pub fn compatible_domain(
    model: &PureStateModel,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<LabelSet> {
    let bound = tol.op * model.dim() as f64;
    select(model, family, |e| {
        Ok(commutator_norm(e.matrix(), model.support().matrix())? < bound)
    })
}

/// Members whose measurement, as a yes/no observable, and the support's
/// measurement leave each other's results intact.
pub fn objective_domain(
    model: &PureStateModel,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<LabelSet> {
    let es = Observable::dichotomic(model.support());
    select(model, family, |e| {
        relation_t_exact(&Observable::dichotomic(e), &es, tol)
    })
}

/// `‖(E ∧ E_S) ∨ (E ∧ E_S⊥) − E‖_F`; zero exactly when `E` splits along the
/// support.
pub fn pivot_residual(e: &Projection, support: &Projection, tol: &Tolerances) -> Result<f64> {
    let inside = meet(e, support, tol)?;
    let outside = meet(e, &support.complement(), tol)?;
    Ok(join(&inside, &outside, tol)?.distance(e))
}

/// Outcome of the predictable = compatible check.
#[derive(Clone, Debug, Serialize)]
pub struct PredictabilityCheck {
    pub holds: bool,
    pub sets_equal: bool,
    /// For every member: in the compatible domain iff the pivot residual is
    /// below `εop`.
    pub pivot_consistent: bool,
    pub max_member_pivot_residual: f64,
    pub min_nonmember_pivot_residual: Option<f64>,
}

/// Predictable domain equals compatible domain, and the lattice-theoretic
/// splitting identity characterizes compatibility on every member.
pub fn verify_predictable_is_compatible(
    model: &PureStateModel,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<PredictabilityCheck> {
    let predictable = predictable_domain(model, family, tol)?;
    let compatible = compatible_domain(model, family, tol)?;
    let mut max_member: f64 = 0.0;
    let mut min_nonmember: Option<f64> = None;
    let mut pivot_consistent = true;
    for (label, e) in family.iter() {
        let r = pivot_residual(e, model.support(), tol)?;
        if compatible.contains(label) {
            max_member = max_member.max(r);
            pivot_consistent &= r < tol.op;
        } else {
            min_nonmember = Some(min_nonmember.map_or(r, |m| m.min(r)));
            pivot_consistent &= r >= tol.op;
        }
    }
    let sets_equal = predictable == compatible;
    Ok(PredictabilityCheck {
        holds: sets_equal && pivot_consistent,
        sets_equal,
        pivot_consistent,
        max_member_pivot_residual: max_member,
        min_nonmember_pivot_residual: min_nonmember,
    })
}

/// Objective domain equals predictable domain.
pub fn verify_objective_is_predictable(
    model: &PureStateModel,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<bool> {
    Ok(objective_domain(model, family, tol)? == predictable_domain(model, family, tol)?)
}

/// All five domains of one (state, family) instance plus both verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct DomainReport {
    pub labels: Vec<String>,
    pub certainly_true: LabelSet,
    pub certainly_false: LabelSet,
    pub predictable: LabelSet,
    pub compatible: LabelSet,
    pub objective: LabelSet,
    pub predictable_is_compatible: PredictabilityCheck,
    pub objective_is_predictable: bool,
    /// Born probability of each member, in family order.
    pub probabilities: Vec<f64>,
}

impl DomainReport {
    pub fn compute(
        model: &PureStateModel,
        family: &PropertyFamily,
        tol: &Tolerances,
    ) -> Result<Self> {
        let certainly_true = certainly_true_domain(model, family, tol)?;
        let certainly_false = certainly_false_domain(model, family, tol)?;
        let predictable: LabelSet = certainly_true.union(&certainly_false).cloned().collect();
        let compatible = compatible_domain(model, family, tol)?;
        let objective = objective_domain(model, family, tol)?;
        let predictable_is_compatible = verify_predictable_is_compatible(model, family, tol)?;
        let objective_is_predictable = objective == predictable;
        let probabilities = family
            .iter()
            .map(|(_, e)| born_probability(model.state(), e))
            .collect::<Result<_>>()?;
        Ok(Self {
            labels: family.labels().map(str::to_string).collect(),
            certainly_true,
            certainly_false,
            predictable,
            compatible,
            objective,
            predictable_is_compatible,
            objective_is_predictable,
            probabilities,
        })
    }

    pub fn passed(&self) -> bool {
        self.predictable_is_compatible.holds && self.objective_is_predictable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn atom(amps: &[f64]) -> Projection {
        Projection::from_ket(&Ket::from_real(amps).unwrap())
    }

    /// {0, |0⟩⟨0|, |1⟩⟨1|, |+⟩⟨+|, I}
    fn worked_family() -> PropertyFamily {
        PropertyFamily::new(
            2,
            vec![
                ("zero".to_string(), Projection::zero(2)),
                ("p0".to_string(), atom(&[1., 0.])),
                ("p1".to_string(), atom(&[0., 1.])),
                ("plus".to_string(), atom(&[1., 1.])),
                ("id".to_string(), Projection::identity(2)),
            ],
            &tol(),
        )
        .unwrap()
    }

    fn set(xs: &[&str]) -> LabelSet {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn support_examples() {
        let t = tol();
        assert!(support(&Ket::basis(2, 0)).approx_eq(&atom(&[1., 0.]), &t));
        let plus = Ket::from_real(&[1., 1.]).unwrap();
        let half = crate::numerics::CMatrix::from_element(2, 2, c64(0.5, 0.0));
        assert!(crate::numerics::frobenius_distance(support(&plus).matrix(), &half) < t.op);
        let phased = Ket::new(plus.vector() * c64(0.6, 0.8), &t).unwrap();
        assert!(support(&phased).approx_eq(&support(&plus), &t));
        assert!((born_probability(&plus, &support(&plus)).unwrap() - 1.0).abs() < t.prob);
    }

    #[test]
    fn worked_family_domains() {
        let t = tol();
        let f = worked_family();
        let m = PureStateModel::new(Ket::basis(2, 0));
        assert_eq!(
            certainly_true_domain(&m, &f, &t).unwrap(),
            set(&["p0", "id"])
        );
        assert_eq!(
            certainly_false_domain(&m, &f, &t).unwrap(),
            set(&["zero", "p1"])
        );
        let predictable = set(&["zero", "p0", "p1", "id"]);
        assert_eq!(predictable_domain(&m, &f, &t).unwrap(), predictable);
        assert_eq!(compatible_domain(&m, &f, &t).unwrap(), predictable);
        assert_eq!(objective_domain(&m, &f, &t).unwrap(), predictable);
        let check = verify_predictable_is_compatible(&m, &f, &t).unwrap();
        assert!(check.holds);
        // plus splits into 0 ∨ 0 along |0⟩: residual ‖|+⟩⟨+|‖ = 1
        assert!((check.min_nonmember_pivot_residual.unwrap() - 1.0).abs() < 1e-12);
        assert!(verify_objective_is_predictable(&m, &f, &t).unwrap());
    }

    #[test]
    fn trivial_family_is_fully_predictable() {
        let t = tol();
        let f = PropertyFamily::new(3, Vec::new(), &t).unwrap();
        let m = PureStateModel::new(Ket::from_real(&[1., 2., 3.]).unwrap());
        assert_eq!(predictable_domain(&m, &f, &t).unwrap(), set(&["0", "I"]));
        assert!(verify_predictable_is_compatible(&m, &f, &t).unwrap().holds);
        assert!(verify_objective_is_predictable(&m, &f, &t).unwrap());
    }

    #[test]
    fn support_and_complement_always_present() {
        let t = tol();
        let psi = Ket::from_real(&[0.3, -0.4, 0.5]).unwrap();
        let m = PureStateModel::new(psi);
        let f = PropertyFamily::new(
            3,
            vec![
                ("s".to_string(), m.support().clone()),
                ("sperp".to_string(), m.support().complement()),
            ],
            &t,
        )
        .unwrap();
        let r = DomainReport::compute(&m, &f, &t).unwrap();
        assert!(r.certainly_true.contains("s") && r.certainly_true.contains("I"));
        assert!(r.certainly_false.contains("sperp") && r.certainly_false.contains("0"));
        for l in ["s", "sperp", "I", "0"] {
            assert!(r.compatible.contains(l) && r.objective.contains(l));
        }
        assert!(r.passed());
    }

    #[test]
    fn oblique_atom_excluded_everywhere() {
        let t = tol();
        let f = worked_family();
        let m = PureStateModel::new(Ket::basis(2, 0));
        let plus = f.get("plus").unwrap();
        // ‖[|+⟩⟨+|, |0⟩⟨0|]‖_F = ½·√2
        let c = commutator_norm(plus.matrix(), m.support().matrix()).unwrap();
        assert!((c - 0.5 * 2f64.sqrt()).abs() < 1e-12);
        let r = DomainReport::compute(&m, &f, &t).unwrap();
        assert!(!r.compatible.contains("plus"));
        assert!(!r.objective.contains("plus"));
        assert!(!r.predictable.contains("plus"));
    }
}
