//! Seeded verification campaigns and their JSON reports.
//!
//! Instance `i` of a campaign draws all of its randomness from the child
//! seed `SeededRng::new(seed).child(i)`, so instances can run in any order
//! (or concurrently) and the report is a pure function of the config.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::domains::{
    objective_domain, predictable_domain, verify_predictable_is_compatible, DomainReport,
    PureStateModel,
};
use crate::error::{QlatError, Result};
use crate::lattice::{
    check_atomic, check_covering, join, leq, meet, orthomodular_residual, PropertyFamily,
};
use crate::measurement::{
    relation_k, relation_t_residual, verify_compatibility_coincidence, Observable,
};
use crate::numerics::{c64, CMatrix, CVector, Ket, Projection, Tolerances};
use crate::sampling::{
    gaussian_vector, haar_ket, haar_unitary, hermitian_in_basis, random_atom, random_hermitian,
    random_projection, SeededRng, RNG_ALGORITHM,
};
use crate::semantics::{completeness_audit, AuditMode, Statement, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable that overrides the config seed.
pub const SEED_ENV: &str = "QLAT_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    /// Operational non-disturbance vs commutation (and the I, S, C relations).
    Thm321,
    /// Predictable domain vs compatible domain.
    Thm341,
    /// Objective domain vs predictable domain.
    Eq6,
    LatticeLaws,
    CompletenessAudit,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Thm321 => "thm321",
            Experiment::Thm341 => "thm341",
            Experiment::Eq6 => "eq6",
            Experiment::LatticeLaws => "lattice_laws",
            Experiment::CompletenessAudit => "completeness_audit",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = QlatError;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.to_string())).map_err(|_| QlatError::InvalidConfig {
            field: "experiment".into(),
            reason: format!("unknown experiment `{s}`"),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub dim: usize,
    /// When set, instance `i` uses dimension `dim + i mod (max_dim − dim + 1)`.
    pub max_dim: Option<usize>,
    pub instances: usize,
    pub mc_trials: u64,
    pub seed: u64,
    /// Share of generated observable pairs forced to commute.
    pub commuting_fraction: f64,
    /// Number of properties per generated family, counting `0` and `I`.
    pub family_size: usize,
    pub audit_mode: AuditMode,
    pub tolerances: Tolerances,
    pub output_path: String,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Thm321,
            dim: 2,
            max_dim: None,
            instances: 100,
            mc_trials: 1000,
            seed: 0,
            commuting_fraction: 0.5,
            family_size: 10,
            audit_mode: AuditMode::Standard,
            tolerances: Tolerances::default(),
            output_path: "qlat-report.json".into(),
        }
    }
}

fn invalid(field: &str, reason: impl Into<String>) -> QlatError {
    QlatError::InvalidConfig {
        field: field.into(),
        reason: reason.into(),
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." {
                "<document>".to_string()
            } else {
                path
            };
            invalid(&field, e.into_inner().to_string())
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=8).contains(&self.dim) {
            return Err(invalid(
                "dim",
                format!("must be in 2..=8, got {}", self.dim),
            ));
        }
        if let Some(m) = self.max_dim {
            if !(self.dim..=8).contains(&m) {
                return Err(invalid("max_dim", format!("must be in dim..=8, got {m}")));
            }
        }
        if self.instances == 0 {
            return Err(invalid("instances", "must be positive"));
        }
        if self.mc_trials == 0 {
            return Err(invalid("mc_trials", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.commuting_fraction) {
            return Err(invalid(
                "commuting_fraction",
                format!("must be in [0, 1], got {}", self.commuting_fraction),
            ));
        }
        if self.family_size < 2 {
            return Err(invalid("family_size", "must be at least 2"));
        }
        self.tolerances
            .validate()
            .map_err(|e| invalid("tolerances", e.to_string()))
    }

    pub fn dim_for(&self, index: usize) -> usize {
        match self.max_dim {
            Some(m) => self.dim + index % (m - self.dim + 1),
            None => self.dim,
        }
    }
}

fn sample_spectrum<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    if rng.random_bool(0.5) {
        (0..dim)
            .map(|_| rng.sample(rand_distr::StandardNormal))
            .collect()
    } else {
        // small integer alphabet: forces degenerate eigenvalues
        (0..dim)
            .map(|_| rng.random_range(-1i32..=2) as f64)
            .collect()
    }
}

/// A commuting pair: two spectra in one Haar-random eigenbasis.
pub fn commuting_pair<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    tol: &Tolerances,
) -> (Observable, Observable) {
    let u = haar_unitary(rng, dim);
    let b = hermitian_in_basis(&u, &sample_spectrum(rng, dim));
    let c = hermitian_in_basis(&u, &sample_spectrum(rng, dim));
    (Observable::new(b, tol), Observable::new(c, tol))
}

/// A non-commuting pair: either two independent Gaussian Hermitians or, in
/// dimension ≥ 3 with probability ⅓, two operators sharing one eigenvector
/// but otherwise generic. Redrawn on the measure-zero commuting event.
pub fn noncommuting_pair<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    tol: &Tolerances,
) -> (Observable, Observable) {
    loop {
        let (b, c) = if dim >= 3 && rng.random_bool(1.0 / 3.0) {
            let u = haar_unitary(rng, dim);
            let block = |rng: &mut R| {
                let inner = random_hermitian(rng, dim - 1);
                let mut m = CMatrix::zeros(dim, dim);
                m[(0, 0)] = c64(rng.sample(rand_distr::StandardNormal), 0.0);
                m.view_mut((1, 1), (dim - 1, dim - 1))
                    .copy_from(inner.matrix());
                let full = &u * m * u.adjoint();
                crate::numerics::Hermitian::new((&full + full.adjoint()).scale(0.5), tol)
                    .expect("symmetrized")
            };
            (block(rng), block(rng))
        } else {
            (random_hermitian(rng, dim), random_hermitian(rng, dim))
        };
        let (b, c) = (Observable::new(b, tol), Observable::new(c, tol));
        if !relation_k(&b, &c, tol).expect("equal dims") {
            return (b, c);
        }
    }
}

/// Observables in consecutive pairs `(0,1), (2,3), …`; each pair commutes
/// with probability `commuting_fraction`. An odd trailing observable is a
/// Gaussian Hermitian. One Haar-random pure state per observable.
pub fn generate_model<R: Rng + ?Sized>(
    dim: usize,
    n_observables: usize,
    commuting_fraction: f64,
    rng: &mut R,
    tol: &Tolerances,
) -> (Vec<Observable>, Vec<PureStateModel>) {
    let mut obs = Vec::with_capacity(n_observables);
    while obs.len() + 1 < n_observables {
        let (b, c) = if rng.random_bool(commuting_fraction.clamp(0.0, 1.0)) {
            commuting_pair(rng, dim, tol)
        } else {
            noncommuting_pair(rng, dim, tol)
        };
        obs.push(b);
        obs.push(c);
    }
    if obs.len() < n_observables {
        obs.push(Observable::new(random_hermitian(rng, dim), tol));
    }
    let states = (0..n_observables)
        .map(|_| PureStateModel::new(haar_ket(rng, dim)))
        .collect();
    (obs, states)
}

fn vector_perp_to<R: Rng + ?Sized>(rng: &mut R, psi: &Ket) -> CVector {
    let v = gaussian_vector(rng, psi.dim());
    let overlap = (psi.vector().adjoint() * &v)[(0, 0)];
    v - psi.vector() * overlap
}

/// A family of `size` properties (counting `0` and `I`) around a pure state,
/// starting with the support, an oblique atom, a proper subspace containing
/// the state, a proper subspace orthogonal to it, an oblique subspace, the
/// support's complement and a near-aligned atom, then alternating oblique
/// and near-aligned atoms. Members that coincide are dropped.
pub fn random_family<R: Rng + ?Sized>(
    rng: &mut R,
    psi: &Ket,
    size: usize,
    tol: &Tolerances,
) -> Result<PropertyFamily> {
    let d = psi.dim();
    let support = Projection::from_ket(psi);
    let mut members = Vec::new();
    for k in 0..size.saturating_sub(2) {
        let kind = if k < 7 { k } else { 1 + 5 * (k % 2) };
        let p = match kind {
            0 => support.clone(),
            2 if d > 2 => {
                let extra = rng.random_range(1..d - 1);
                let mut vs: Vec<CVector> = (0..extra).map(|_| gaussian_vector(rng, d)).collect();
                vs.push(psi.vector().clone());
                Projection::onto_span(d, &vs, tol)
            }
            3 if d > 2 => {
                let r = rng.random_range(1..d - 1);
                let vs: Vec<CVector> = (0..r).map(|_| vector_perp_to(rng, psi)).collect();
                Projection::onto_span(d, &vs, tol)
            }
            4 => {
                let r = rng.random_range(1..d);
                random_projection(rng, d, r)
            }
            5 => support.complement(),
            6 => {
                let nudge = gaussian_vector(rng, d).scale(1e-2);
                Projection::from_ket(&Ket::normalize(psi.vector() + nudge)?)
            }
            _ => random_atom(rng, d),
        };
        members.push((format!("E{}", k + 1), p));
    }
    PropertyFamily::new(d, members, tol)
}

/// One row of a campaign report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub experiment: Experiment,
    pub dim: usize,
    pub pass: bool,
    /// Largest numerical residual among equalities judged to hold.
    pub residual: f64,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub pass: usize,
    pub fail: usize,
    pub max_residual: f64,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub schema_version: u32,
    pub version: String,
    pub seed: u64,
    pub rng_algorithm: String,
    pub config: ExperimentConfig,
    pub instances: Vec<InstanceRecord>,
    pub aggregate: Aggregate,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.aggregate.fail == 0
    }

    /// The report as JSON with the wall-time field zeroed, for
    /// reproducibility comparisons.
    pub fn canonical_json(&self) -> Result<String> {
        let mut r = self.clone();
        r.aggregate.wall_time_s = 0.0;
        Ok(serde_json::to_string(&r)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

struct Outcome {
    pass: bool,
    residual: f64,
    detail: Value,
}

fn run_thm321(cfg: &ExperimentConfig, dim: usize, rng: &SeededRng) -> Result<Outcome> {
    let tol = &cfg.tolerances;
    let mut stream = rng.stream(0);
    let commuting = stream.random_bool(cfg.commuting_fraction);
    let (b, c) = if commuting {
        commuting_pair(&mut stream, dim, tol)
    } else {
        noncommuting_pair(&mut stream, dim, tol)
    };
    let v = verify_compatibility_coincidence(&b, &c, tol, cfg.mc_trials, &rng.child(1))?;
    let r = &v.residuals;
    let residual = [
        (v.rel_k, r.k),
        (v.rel_t_exact, r.t),
        (v.rel_i, r.i),
        (v.rel_s, r.s),
    ]
    .iter()
    .filter(|(ok, _)| *ok)
    .map(|(_, x)| *x)
    .fold(0.0, f64::max);
    Ok(Outcome {
        pass: v.passed(),
        residual,
        detail: json!({
            "generated_commuting": commuting,
            "b_outcomes": b.outcome_count(),
            "c_outcomes": c.outcome_count(),
            "verdict": v,
        }),
    })
}

fn domain_instance(
    cfg: &ExperimentConfig,
    dim: usize,
    rng: &SeededRng,
) -> Result<(PureStateModel, PropertyFamily)> {
    let mut stream = rng.stream(0);
    let psi = haar_ket(&mut stream, dim);
    let family = random_family(&mut stream, &psi, cfg.family_size, &cfg.tolerances)?;
    Ok((PureStateModel::new(psi), family))
}

fn run_thm341(cfg: &ExperimentConfig, dim: usize, rng: &SeededRng) -> Result<Outcome> {
    let tol = &cfg.tolerances;
    let (model, family) = domain_instance(cfg, dim, rng)?;
    let check = verify_predictable_is_compatible(&model, &family, tol)?;
    let separated = check
        .min_nonmember_pivot_residual
        .is_none_or(|r| r > 10.0 * tol.op);
    let report = DomainReport::compute(&model, &family, tol)?;
    Ok(Outcome {
        pass: check.holds && separated,
        residual: check.max_member_pivot_residual,
        detail: json!({ "check": check, "domains": report }),
    })
}

fn run_eq6(cfg: &ExperimentConfig, dim: usize, rng: &SeededRng) -> Result<Outcome> {
    let tol = &cfg.tolerances;
    let (model, family) = domain_instance(cfg, dim, rng)?;
    let objective = objective_domain(&model, &family, tol)?;
    let predictable = predictable_domain(&model, &family, tol)?;
    let es = Observable::dichotomic(model.support());
    let mut residual: f64 = 0.0;
    for (label, e) in family.iter() {
        if objective.contains(label) {
            residual = residual.max(relation_t_residual(&Observable::dichotomic(e), &es)?);
        }
    }
    Ok(Outcome {
        pass: objective == predictable,
        residual,
        detail: json!({
            "labels": family.labels().collect::<Vec<_>>(),
            "objective": objective,
            "predictable": predictable,
        }),
    })
}

/// Results of the lattice-law battery on one random draw.
#[derive(Clone, Debug, Default, Serialize)]
pub struct LatticeLawCheck {
    pub order: bool,
    pub bounds: bool,
    pub orthomodular: bool,
    pub de_morgan: bool,
    pub commutative: bool,
    pub associative: bool,
    pub absorptive: bool,
    pub covering: bool,
    pub atomic: bool,
    /// Largest distance among the operator equalities checked.
    pub max_residual: f64,
}

impl LatticeLawCheck {
    pub fn all_hold(&self, tol: &Tolerances) -> bool {
        self.order
            && self.bounds
            && self.orthomodular
            && self.de_morgan
            && self.commutative
            && self.associative
            && self.absorptive
            && self.covering
            && self.atomic
            && self.max_residual < tol.op
    }
}

/// Runs every lattice law on a random pair/triple in dimension `dim`.
pub fn lattice_law_check<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    tol: &Tolerances,
) -> Result<LatticeLawCheck> {
    let rand_proj = |rng: &mut R| {
        let r = rng.random_range(0..=dim);
        random_projection(rng, dim, r)
    };
    let p = rand_proj(rng);
    let q = rand_proj(rng);
    let r = rand_proj(rng);
    let mut res: f64 = 0.0;
    let mut track = |d: f64| {
        res = res.max(d);
        d < tol.op
    };

    // comparable chain p ≤ p1 ≤ p2 built by joining random atoms
    let p1 = join(&p, &random_atom(rng, dim), tol)?;
    let p2 = join(&p1, &random_atom(rng, dim), tol)?;
    let order = leq(&p, &p, tol)?
        && leq(&p, &p1, tol)?
        && leq(&p1, &p2, tol)?
        && leq(&p, &p2, tol)?
        && (!(leq(&p, &q, tol)? && leq(&q, &p, tol)?) || p.approx_eq(&q, tol));

    let pq_meet = meet(&p, &q, tol)?;
    let pq_join = join(&p, &q, tol)?;
    let bounds = leq(&pq_meet, &p, tol)?
        && leq(&pq_meet, &q, tol)?
        && leq(&p, &pq_join, tol)?
        && leq(&q, &pq_join, tol)?;

    let om1 = orthomodular_residual(&p, &p1, tol)?;
    let om2 = orthomodular_residual(&p1, &p2, tol)?;
    let orthomodular = match (om1, om2) {
        (Some(a), Some(b)) => track(a) & track(b),
        _ => false,
    };

    let dual = join(&p.complement(), &q.complement(), tol)?.complement();
    let de_morgan = track(pq_meet.distance(&dual));

    let commutative =
        track(pq_meet.distance(&meet(&q, &p, tol)?)) & track(pq_join.distance(&join(&q, &p, tol)?));

    let associative =
        track(meet(&pq_meet, &r, tol)?.distance(&meet(&p, &meet(&q, &r, tol)?, tol)?))
            & track(join(&pq_join, &r, tol)?.distance(&join(&p, &join(&q, &r, tol)?, tol)?));

    let absorptive =
        track(join(&p, &pq_meet, tol)?.distance(&p)) & track(meet(&p, &pq_join, tol)?.distance(&p));

    let atom = random_atom(rng, dim);
    let covering = check_covering(&atom, &p, tol)? && check_covering(&atom, &pq_meet, tol)?;
    let atomic = check_atomic(&p, tol)? && check_atomic(&pq_join, tol)?;

    Ok(LatticeLawCheck {
        order,
        bounds,
        orthomodular,
        de_morgan,
        commutative,
        associative,
        absorptive,
        covering,
        atomic,
        max_residual: res,
    })
}

fn run_lattice_laws(cfg: &ExperimentConfig, dim: usize, rng: &SeededRng) -> Result<Outcome> {
    let check = lattice_law_check(&mut rng.stream(0), dim, &cfg.tolerances)?;
    Ok(Outcome {
        pass: check.all_hold(&cfg.tolerances),
        residual: check.max_residual,
        detail: serde_json::to_value(&check)?,
    })
}

/// Elementary statements for every member plus a few compounds over the
/// first generated labels, including a tautology over two labels.
pub fn audit_statements(family: &PropertyFamily) -> Vec<Statement> {
    let labels: Vec<&str> = family.labels().collect();
    let mut out: Vec<Statement> = labels.iter().map(|l| Statement::elem(*l)).collect();
    let named: Vec<&str> = labels
        .iter()
        .copied()
        .filter(|l| l.starts_with('E'))
        .collect();
    if named.len() >= 2 {
        let (a, b) = (Statement::elem(named[0]), Statement::elem(named[1]));
        let both = Statement::and(a.clone(), b.clone());
        out.push(both.clone());
        out.push(Statement::or(a.clone(), Statement::not(b.clone())));
        out.push(Statement::implies(b, a));
        out.push(Statement::or(both.clone(), Statement::not(both)));
    }
    out
}

fn run_completeness_audit(cfg: &ExperimentConfig, dim: usize, rng: &SeededRng) -> Result<Outcome> {
    let tol = &cfg.tolerances;
    let (model, family) = domain_instance(cfg, dim, rng)?;
    let statements = audit_statements(&family);
    let audit = completeness_audit(&model, &family, &statements, cfg.audit_mode, tol)?;
    let bound = tol.op * dim as f64;
    let mut noncommuting = false;
    for (_, e) in family.iter() {
        noncommuting |=
            crate::numerics::commutator_norm(e.matrix(), model.support().matrix())? >= bound;
    }
    let pass = match cfg.audit_mode {
        AuditMode::Standard => audit.verdict == Verdict::Complete,
        AuditMode::Sr => (audit.verdict == Verdict::Incomplete) == noncommuting,
    };
    Ok(Outcome {
        pass,
        residual: 0.0,
        detail: json!({ "has_noncommuting_member": noncommuting, "audit": audit }),
    })
}

fn run_instance(cfg: &ExperimentConfig, index: usize) -> Result<InstanceRecord> {
    let rng = SeededRng::new(cfg.seed).child(index as u64);
    let dim = cfg.dim_for(index);
    let out = match cfg.experiment {
        Experiment::Thm321 => run_thm321(cfg, dim, &rng)?,
        Experiment::Thm341 => run_thm341(cfg, dim, &rng)?,
        Experiment::Eq6 => run_eq6(cfg, dim, &rng)?,
        Experiment::LatticeLaws => run_lattice_laws(cfg, dim, &rng)?,
        Experiment::CompletenessAudit => run_completeness_audit(cfg, dim, &rng)?,
    };
    Ok(InstanceRecord {
        index,
        experiment: cfg.experiment,
        dim,
        pass: out.pass,
        residual: out.residual,
        detail: out.detail,
    })
}

/// Validates `cfg`, runs every instance and aggregates the results. The
/// report is not written; see [`CampaignReport::write`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = Instant::now();
    #[cfg(feature = "parallel")]
    let mut instances: Vec<InstanceRecord> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| run_instance(cfg, i))
        .collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let mut instances: Vec<InstanceRecord> = (0..cfg.instances)
        .map(|i| run_instance(cfg, i))
        .collect::<Result<_>>()?;
    instances.sort_by_key(|r| r.index);
    let pass = instances.iter().filter(|r| r.pass).count();
    let max_residual = instances.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(CampaignReport {
        schema_version: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").into(),
        seed: cfg.seed,
        rng_algorithm: RNG_ALGORITHM.into(),
        config: cfg.clone(),
        aggregate: Aggregate {
            pass,
            fail: instances.len() - pass,
            max_residual,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
        instances,
    })
}

/// Report for a user-supplied family: the lattice laws on every member pair,
/// and both domain equalities for the support of every atom in the family
/// plus `random_states` Haar states.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyVerification {
    pub schema_version: u32,
    pub labels: Vec<String>,
    pub lattice: Vec<Value>,
    pub domains: Vec<Value>,
    pub aggregate: Aggregate,
}

pub fn verify_family(
    family: &PropertyFamily,
    tol: &Tolerances,
    seed: u64,
    random_states: usize,
) -> Result<FamilyVerification> {
    let start = Instant::now();
    let members: Vec<(&str, &Projection)> = family.iter().collect();
    let mut pass = 0;
    let mut fail = 0;
    let mut max_residual: f64 = 0.0;
    let mut lattice = Vec::new();
    for (i, (lp, p)) in members.iter().enumerate() {
        for (lq, q) in members.iter().skip(i) {
            let pq_meet = meet(p, q, tol)?;
            let dual = join(&p.complement(), &q.complement(), tol)?.complement();
            let de_morgan = pq_meet.distance(&dual);
            let om = orthomodular_residual(p, q, tol)?;
            let mut ok = de_morgan < tol.op && om.is_none_or(|r| r < tol.op);
            ok &= check_atomic(p, tol)?;
            if p.rank() == 1 {
                ok &= check_covering(p, q, tol)?;
            }
            max_residual = max_residual.max(de_morgan).max(om.unwrap_or(0.0));
            if ok {
                pass += 1;
            } else {
                fail += 1;
            }
            lattice.push(json!({
                "pair": [lp, lq],
                "pass": ok,
                "de_morgan_residual": de_morgan,
                "orthomodular_residual": om,
            }));
        }
    }

    let mut states: Vec<Ket> = members
        .iter()
        .filter(|(_, p)| p.rank() == 1)
        .filter_map(|(_, p)| p.range_basis().into_iter().next())
        .filter_map(|v| Ket::normalize(v).ok())
        .collect();
    let mut stream = SeededRng::new(seed).stream(0);
    states.extend((0..random_states).map(|_| haar_ket(&mut stream, family.dim())));
    let mut domains = Vec::new();
    for (k, psi) in states.into_iter().enumerate() {
        let model = PureStateModel::new(psi);
        let report = DomainReport::compute(&model, family, tol)?;
        if report.passed() {
            pass += 1;
        } else {
            fail += 1;
        }
        domains.push(json!({ "state_index": k, "pass": report.passed(), "domains": report }));
    }
    Ok(FamilyVerification {
        schema_version: SCHEMA_VERSION,
        labels: family.labels().map(str::to_string).collect(),
        lattice,
        domains,
        aggregate: Aggregate {
            pass,
            fail,
            max_residual,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    })
}

/// On-disk pure state: amplitudes as `[re, im]` pairs. Normalized on load.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateDocument {
    pub fn to_ket(&self) -> Result<Ket> {
        Ket::normalize(CVector::from_iterator(
            self.amplitudes.len(),
            self.amplitudes.iter().map(|[re, im]| c64(*re, *im)),
        ))
    }
}
