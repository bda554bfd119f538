//! Projective (Lüders) measurements and the five compatibility relations.
//!
//! Each relation has an exact operator criterion. Operational
//! non-disturbance is additionally simulated by Monte Carlo, so that the
//! equivalence between "sequential measurements do not disturb each other"
//! and "the operators commute" is checked rather than assumed.

use rand::Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QlatError, Result};
use crate::lattice::leq;
use crate::numerics::{
    check_dims, commutator_norm, frobenius_distance, spectral_decompose, CMatrix, Hermitian, Ket,
    Projection, SpectralComponent, Tolerances,
};
use crate::sampling::haar_ket;
pub use crate::sampling::SeededRng;

/// Required Monte Carlo trials are `MC_FLOOR_FACTOR / q`, where `q` is the
/// per-trial disagreement probability of an incompatible pair. A false pair
/// then survives with probability below `e^-50`.
pub const MC_FLOOR_FACTOR: f64 = 50.0;

/// Upper bound on the trial count raised by the floor.
pub const MC_TRIAL_CAP: u64 = 1_000_000;

/// A Hermitian operator together with its clustered spectral decomposition.
#[derive(Clone, Debug)]
pub struct Observable {
    operator: Hermitian,
    spectrum: Vec<SpectralComponent>,
}

impl Observable {
    pub fn new(operator: Hermitian, tol: &Tolerances) -> Self {
        let spectrum = spectral_decompose(&operator, tol);
        Self { operator, spectrum }
    }

    /// The observable `Σ λ_k P_k` for an explicit resolution of the identity.
    /// Eigenvalues must be strictly ascending.
    pub fn from_spectrum(spectrum: Vec<SpectralComponent>, tol: &Tolerances) -> Result<Self> {
        let first = spectrum
            .first()
            .ok_or_else(|| QlatError::Precondition("empty spectrum".into()))?;
        let d = first.projection.dim();
        let mut op = CMatrix::zeros(d, d);
        let mut total = CMatrix::zeros(d, d);
        for (k, c) in spectrum.iter().enumerate() {
            check_dims(d, c.projection.dim())?;
            if k > 0 && c.eigenvalue <= spectrum[k - 1].eigenvalue {
                return Err(QlatError::Precondition(
                    "spectrum eigenvalues must be strictly ascending".into(),
                ));
            }
            op += c.projection.matrix().scale(c.eigenvalue);
            total += c.projection.matrix();
        }
        let completeness = frobenius_distance(&total, &CMatrix::identity(d, d));
        if completeness >= tol.op * d as f64 {
            return Err(QlatError::Precondition(format!(
                "spectral projections do not sum to identity (residual {completeness:e})"
            )));
        }
        Ok(Self {
            operator: Hermitian::new(op, tol)?,
            spectrum,
        })
    }

    /// A property viewed as a yes/no observable: spectrum `{(0, P⊥), (1, P)}`,
    /// omitting whichever side is the zero projection.
    pub fn dichotomic(p: &Projection) -> Self {
        let mut spectrum = Vec::with_capacity(2);
        let no = p.complement();
        if no.rank() > 0 {
            spectrum.push(SpectralComponent {
                eigenvalue: 0.0,
                projection: no,
            });
        }
        if p.rank() > 0 {
            spectrum.push(SpectralComponent {
                eigenvalue: 1.0,
                projection: p.clone(),
            });
        }
        Self {
            operator: p.as_hermitian(),
            spectrum,
        }
    }

    pub fn operator(&self) -> &Hermitian {
        &self.operator
    }

    pub fn spectrum(&self) -> &[SpectralComponent] {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn outcome_count(&self) -> usize {
        self.spectrum.len()
    }

    fn projections(&self) -> impl Iterator<Item = &CMatrix> {
        self.spectrum.iter().map(|c| c.projection.matrix())
    }
}

/// Result of a single projective measurement.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub eigenvalue: f64,
    pub outcome_index: usize,
    pub probability: f64,
    pub post_state: Ket,
}

/// `⟨ψ|P|ψ⟩`, clamped to `[0, 1]`.
pub fn born_probability(psi: &Ket, p: &Projection) -> Result<f64> {
    check_dims(p.dim(), psi.dim())?;
    let v = psi.vector();
    let value = (v.adjoint() * p.matrix() * v)[(0, 0)].re;
    Ok(value.clamp(0.0, 1.0))
}

/// Samples an outcome by the Born rule and collapses the state onto the
/// outcome's eigenspace. Outcomes with probability below `tol.prob` are
/// never sampled.
pub fn measure<R: Rng + ?Sized>(
    psi: &Ket,
    obs: &Observable,
    tol: &Tolerances,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    check_dims(obs.dim(), psi.dim())?;
    let branches: Vec<_> = obs
        .spectrum
        .iter()
        .map(|c| {
            let v = c.projection.matrix() * psi.vector();
            let p = v.norm_squared();
            (v, p)
        })
        .collect();
    let total: f64 = branches
        .iter()
        .filter(|(_, p)| *p >= tol.prob)
        .map(|(_, p)| p)
        .sum();
    if total <= 0.0 {
        return Err(QlatError::Precondition(
            "state has no weight on the observable's spectrum".into(),
        ));
    }
    let mut u = rng.random::<f64>() * total;
    let mut chosen = None;
    for (k, (_, p)) in branches.iter().enumerate() {
        if *p < tol.prob {
            continue;
        }
        chosen = Some(k);
        if u < *p {
            break;
        }
        u -= p;
    }
    let k = chosen.expect("at least one eligible branch");
    let (v, p) = &branches[k];
    Ok(MeasurementOutcome {
        eigenvalue: obs.spectrum[k].eigenvalue,
        outcome_index: k,
        probability: p.clamp(0.0, 1.0),
        post_state: Ket::normalize(v.clone())?,
    })
}

fn check_pair(b: &Observable, c: &Observable) -> Result<()> {
    check_dims(b.dim(), c.dim())
}

/// `‖[B, C]‖_F`.
pub fn relation_k_residual(b: &Observable, c: &Observable) -> Result<f64> {
    commutator_norm(b.operator.matrix(), c.operator.matrix())
}

/// Commutation: `‖[B, C]‖_F < εop·dim`.
pub fn relation_k(b: &Observable, c: &Observable, tol: &Tolerances) -> Result<bool> {
    Ok(relation_k_residual(b, c)? < tol.op * b.dim() as f64)
}

/// Largest invariance defect `‖(I − P_n) Q_p P_n‖_F`, taken over all outcome
/// pairs and both measurement orders.
pub fn relation_t_residual(b: &Observable, c: &Observable) -> Result<f64> {
    check_pair(b, c)?;
    let d = b.dim();
    let id = CMatrix::identity(d, d);
    let mut worst: f64 = 0.0;
    for pn in b.projections() {
        for qp in c.projections() {
            worst = worst.max(((&id - pn) * qp * pn).norm());
            worst = worst.max(((&id - qp) * pn * qp).norm());
        }
    }
    Ok(worst)
}

/// Every eigenprojection of one observable leaves every eigenspace of the
/// other invariant, in both orders.
pub fn relation_t_exact(b: &Observable, c: &Observable, tol: &Tolerances) -> Result<bool> {
    Ok(relation_t_residual(b, c)? < tol.op)
}

/// Largest `‖Q_p − Σ_n P_n Q_p P_n‖_F`, both directions.
pub fn relation_i_residual(b: &Observable, c: &Observable) -> Result<f64> {
    check_pair(b, c)?;
    let one_way = |x: &Observable, y: &Observable| -> f64 {
        let mut worst: f64 = 0.0;
        for qp in y.projections() {
            let mut pinched = CMatrix::zeros(x.dim(), x.dim());
            for pn in x.projections() {
                pinched += pn * qp * pn;
            }
            worst = worst.max(frobenius_distance(qp, &pinched));
        }
        worst
    };
    Ok(one_way(b, c).max(one_way(c, b)))
}

/// Interposing one measurement leaves the other's outcome statistics
/// unchanged for every state.
pub fn relation_i(b: &Observable, c: &Observable, tol: &Tolerances) -> Result<bool> {
    Ok(relation_i_residual(b, c)? < tol.op * b.dim() as f64)
}

/// Largest `‖P_n Q_p P_n − Q_p P_n Q_p‖_F`.
pub fn relation_s_residual(b: &Observable, c: &Observable) -> Result<f64> {
    check_pair(b, c)?;
    let mut worst: f64 = 0.0;
    for pn in b.projections() {
        for qp in c.projections() {
            worst = worst.max(frobenius_distance(&(pn * qp * pn), &(qp * pn * qp)));
        }
    }
    Ok(worst)
}

/// Sequence probabilities `b then c` and `c then b` agree for every state.
pub fn relation_s(b: &Observable, c: &Observable, tol: &Tolerances) -> Result<bool> {
    Ok(relation_s_residual(b, c)? < tol.op)
}

/// A joint observable whose eigenprojections are the nonzero products
/// `P_n Q_p`, with eigenvalue `n·|C| + p`. Absent when some product fails to
/// be a projection, i.e. when no such joint resolution exists.
pub fn commeasurable(
    b: &Observable,
    c: &Observable,
    tol: &Tolerances,
) -> Result<Option<Observable>> {
    check_pair(b, c)?;
    let nc = c.outcome_count();
    let mut spectrum = Vec::new();
    for (n, pn) in b.projections().enumerate() {
        for (p, qp) in c.projections().enumerate() {
            let Ok(joint) = Projection::new(pn * qp, tol) else {
                return Ok(None);
            };
            if joint.rank() > 0 {
                spectrum.push(SpectralComponent {
                    eigenvalue: (n * nc + p) as f64,
                    projection: joint,
                });
            }
        }
    }
    let Ok(a) = Observable::from_spectrum(spectrum, tol) else {
        return Ok(None);
    };
    Ok(joint_witness_valid(&a, b, c, tol)?.then_some(a))
}

/// Each eigenprojection of `a` lies below exactly one eigenprojection of `b`
/// and exactly one of `c`, so an `a`-outcome fixes a value of both.
pub fn joint_witness_valid(
    a: &Observable,
    b: &Observable,
    c: &Observable,
    tol: &Tolerances,
) -> Result<bool> {
    for comp in a.spectrum() {
        for other in [b, c] {
            let mut hits = 0;
            for oc in other.spectrum() {
                if leq(&comp.projection, &oc.projection, tol)? {
                    hits += 1;
                }
            }
            if hits != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Probability, for a Haar-random initial state, that the sequence
/// `first, second, first` returns a different `first` outcome:
/// `1 − (1/d) Σ_{n,p} ‖P_n Q_p P_n‖_F²`.
pub fn sequential_disagreement_probability(first: &Observable, second: &Observable) -> Result<f64> {
    check_pair(first, second)?;
    let d = first.dim() as f64;
    let mut kept = 0.0;
    for pn in first.projections() {
        for qp in second.projections() {
            kept += (pn * qp * pn).norm_squared();
        }
    }
    Ok((1.0 - kept / d).max(0.0))
}

/// Probability that one Monte Carlo trial (both sequences) shows at least
/// one disagreement.
pub fn trial_disagreement_probability(b: &Observable, c: &Observable) -> Result<f64> {
    let q1 = sequential_disagreement_probability(b, c)?;
    let q2 = sequential_disagreement_probability(c, b)?;
    Ok(1.0 - (1.0 - q1) * (1.0 - q2))
}

/// Outcome of the operational non-disturbance simulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MonteCarloT {
    pub passed: bool,
    pub trials: u64,
    /// Trials in which `B, C, B` changed the `B` outcome.
    pub bcb_disagreements: u64,
    /// Trials in which `C, B, C` changed the `C` outcome.
    pub cbc_disagreements: u64,
}

impl MonteCarloT {
    pub fn disagreements(&self) -> u64 {
        self.bcb_disagreements + self.cbc_disagreements
    }
}

fn sequence_disagrees<R: Rng + ?Sized>(
    first: &Observable,
    second: &Observable,
    tol: &Tolerances,
    rng: &mut R,
) -> Result<bool> {
    let psi = haar_ket(rng, first.dim());
    let a = measure(&psi, first, tol, rng)?;
    let b = measure(&a.post_state, second, tol, rng)?;
    let c = measure(&b.post_state, first, tol, rng)?;
    Ok(a.outcome_index != c.outcome_index)
}

fn run_trial(
    b: &Observable,
    c: &Observable,
    tol: &Tolerances,
    rng: &SeededRng,
    index: u64,
) -> Result<(u64, u64)> {
    let mut stream = rng.stream(index);
    let bcb = sequence_disagrees(b, c, tol, &mut stream)?;
    let cbc = sequence_disagrees(c, b, tol, &mut stream)?;
    Ok((bcb as u64, cbc as u64))
}

/// Simulates `trials` rounds of `B, C, B` and `C, B, C` on Haar-random
/// states. Trial `i` draws from substream `i`, so the counts do not depend
/// on scheduling.
pub fn relation_t_mc(
    b: &Observable,
    c: &Observable,
    trials: u64,
    tol: &Tolerances,
    rng: &SeededRng,
) -> Result<MonteCarloT> {
    check_pair(b, c)?;
    if trials == 0 {
        return Err(QlatError::Precondition("trials must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    let (bcb, cbc) = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(b, c, tol, rng, i))
        .try_reduce(|| (0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1)))?;
    #[cfg(not(feature = "parallel"))]
    let (bcb, cbc) = (0..trials).try_fold((0u64, 0u64), |acc, i| {
        run_trial(b, c, tol, rng, i).map(|x| (acc.0 + x.0, acc.1 + x.1))
    })?;
    Ok(MonteCarloT {
        passed: bcb + cbc == 0,
        trials,
        bcb_disagreements: bcb,
        cbc_disagreements: cbc,
    })
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct RelationResiduals {
    pub k: f64,
    pub t: f64,
    pub i: f64,
    pub s: f64,
}

/// All five relations for one pair, plus whether they coincide.
#[derive(Clone, Debug, Serialize)]
pub struct CompatibilityVerdict {
    pub rel_k: bool,
    pub rel_t_exact: bool,
    pub rel_i: bool,
    pub rel_s: bool,
    pub rel_c: bool,
    pub rel_t_mc: MonteCarloT,
    /// Analytic per-trial disagreement probability (zero for compatible
    /// pairs up to rounding).
    pub trial_disagreement_probability: f64,
    /// Minimum trial count that makes a zero-disagreement run of an
    /// incompatible pair negligible; `None` when the exact relation holds.
    pub mc_floor: Option<u64>,
    /// False only when the floor exceeds [`MC_TRIAL_CAP`].
    pub mc_conclusive: bool,
    pub mc_consistent: bool,
    pub coincide: bool,
    pub residuals: RelationResiduals,
    /// Largest residual among the criteria that failed (0 if none failed).
    pub max_violation: f64,
}

impl CompatibilityVerdict {
    pub fn passed(&self) -> bool {
        self.coincide && self.mc_consistent
    }
}

/// Evaluates K, T (exact and simulated), I, S and commeasurability and
/// reports whether they agree.
///
/// When T fails exactly, the simulation runs at least `⌈50/q⌉` trials
/// (capped at [`MC_TRIAL_CAP`]) so that a zero-disagreement outcome would be
/// an inconsistency, not bad luck.
pub fn verify_compatibility_coincidence(
    b: &Observable,
    c: &Observable,
    tol: &Tolerances,
    trials: u64,
    rng: &SeededRng,
) -> Result<CompatibilityVerdict> {
    let d = b.dim() as f64;
    let residuals = RelationResiduals {
        k: relation_k_residual(b, c)?,
        t: relation_t_residual(b, c)?,
        i: relation_i_residual(b, c)?,
        s: relation_s_residual(b, c)?,
    };
    let rel_k = residuals.k < tol.op * d;
    let rel_t_exact = residuals.t < tol.op;
    let rel_i = residuals.i < tol.op * d;
    let rel_s = residuals.s < tol.op;
    let rel_c = commeasurable(b, c, tol)?.is_some();

    let q = trial_disagreement_probability(b, c)?;
    let (mc_floor, run_trials, mc_conclusive) = if rel_t_exact {
        (None, trials, true)
    } else {
        let floor = if q > 0.0 {
            (MC_FLOOR_FACTOR / q).ceil()
        } else {
            f64::INFINITY
        };
        let conclusive = floor <= MC_TRIAL_CAP as f64;
        let floor = floor.min(MC_TRIAL_CAP as f64) as u64;
        (Some(floor), trials.max(floor), conclusive)
    };
    let rel_t_mc = relation_t_mc(b, c, run_trials, tol, rng)?;
    let mc_consistent = if rel_t_exact {
        rel_t_mc.disagreements() == 0
    } else {
        !mc_conclusive || rel_t_mc.disagreements() > 0
    };

    let coincide = [rel_t_exact, rel_i, rel_s, rel_c]
        .iter()
        .all(|&r| r == rel_k);
    let max_violation = [
        (rel_k, residuals.k),
        (rel_t_exact, residuals.t),
        (rel_i, residuals.i),
        (rel_s, residuals.s),
    ]
    .iter()
    .filter(|(ok, _)| !ok)
    .map(|(_, r)| *r)
    .fold(0.0, f64::max);

    Ok(CompatibilityVerdict {
        rel_k,
        rel_t_exact,
        rel_i,
        rel_s,
        rel_c,
        rel_t_mc,
        trial_disagreement_probability: q,
        mc_floor,
        mc_conclusive,
        mc_consistent,
        coincide,
        residuals,
        max_violation,
    })
}
