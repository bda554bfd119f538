//! Acceptance gate. Runs every criterion at its pinned tolerance and prints
//! one PASS/FAIL line per criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use qlat_core::campaign::{
    commuting_pair, run_experiment, CampaignReport, Experiment, ExperimentConfig,
};
use qlat_core::domains::PureStateModel;
use qlat_core::lattice::{join, meet, PropertyFamily};
use qlat_core::measurement::{relation_t_exact, relation_t_mc, Observable};
use qlat_core::numerics::{c64, CMatrix, Hermitian, Ket, Projection, Tolerances};
use qlat_core::sampling::SeededRng;
use qlat_core::semantics::{
    completeness_audit, ev_evaluate, tarskian_truth, AuditMode, ClassicalAssignment, EvFlag,
    Statement, TruthValue3, Verdict,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn failures(report: &CampaignReport) -> Vec<usize> {
    report
        .instances
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.index)
        .collect()
}

fn tol() -> Tolerances {
    // εop = 1e-9, εeig = 1e-7, εnorm = 1e-12, εprob = 1e-9
    Tolerances::default()
}

/// Relations K, T, I, S and commeasurability agree on 1000 pairs per
/// dimension 2..=6, half of them constructed to commute. Under 60 s.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    let mut commuting = 0;
    for dim in 2..=6 {
        let cfg = ExperimentConfig {
            experiment: Experiment::Thm321,
            dim,
            instances: 1000,
            mc_trials: 100,
            seed: 321,
            commuting_fraction: 0.5,
            tolerances: tol(),
            ..Default::default()
        };
        let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let bad = failures(&report);
        ensure(bad.is_empty(), || {
            format!("dim {dim}: failing pairs {bad:?}")
        })?;
        for r in &report.instances {
            let v = &r.detail["verdict"];
            ensure(v["coincide"] == true, || {
                format!("dim {dim} #{}: no coincidence", r.index)
            })?;
            commuting += (v["rel_k"] == true) as usize;
        }
        total += report.instances.len();
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("runtime {secs:.1} s exceeds 60 s"))?;
    ensure(commuting > 0 && commuting < total, || {
        format!("degenerate ensemble: {commuting}/{total} commuting")
    })?;
    Ok(format!(
        "{total}/{total} pairs coincide ({commuting} compatible), {secs:.1} s"
    ))
}

/// Zero simulated disagreements for compatible pairs at 10⁴ trials;
/// σz/σx disagreement frequency 0.5 ± 0.02 over 10⁴ trials.
fn criterion_2() -> Outcome {
    let t = tol();
    let mut gen = SeededRng::new(2).stream(0);
    let mut pairs = 0;
    for dim in 2..=6 {
        for k in 0..20u64 {
            let (b, c) = commuting_pair(&mut gen, dim, &t);
            ensure(relation_t_exact(&b, &c, &t).unwrap(), || {
                format!("generated pair dim {dim} #{k} not exactly compatible")
            })?;
            let mc = relation_t_mc(&b, &c, 10_000, &t, &SeededRng::new(1000 + k))
                .map_err(|e| e.to_string())?;
            ensure(mc.disagreements() == 0, || {
                format!("dim {dim} #{k}: {} disagreements", mc.disagreements())
            })?;
            pairs += 1;
        }
    }
    let z = Observable::new(Hermitian::from_real_diagonal(&[1.0, -1.0]), &t);
    let x = Observable::new(
        Hermitian::new(
            CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)]),
            &t,
        )
        .unwrap(),
        &t,
    );
    let mc = relation_t_mc(&z, &x, 10_000, &t, &SeededRng::new(7)).map_err(|e| e.to_string())?;
    let freq = mc.bcb_disagreements as f64 / mc.trials as f64;
    ensure((freq - 0.5).abs() <= 0.02, || {
        format!("σz/σx B-C-B frequency {freq}")
    })?;
    ensure(!mc.passed, || "σz/σx reported compatible".into())?;
    Ok(format!(
        "{pairs} compatible pairs with 0 disagreements; σz/σx frequency {freq:.4}"
    ))
}

fn domain_config(experiment: Experiment) -> ExperimentConfig {
    ExperimentConfig {
        experiment,
        dim: 2,
        max_dim: Some(6),
        instances: 500,
        family_size: 10,
        seed: 341,
        tolerances: tol(),
        ..Default::default()
    }
}

/// Predictable = compatible on 500 (state, family) instances, with the
/// splitting identity exact for members and failing by > 10·εop otherwise.
fn criterion_3() -> Outcome {
    let t = tol();
    let report = run_experiment(&domain_config(Experiment::Thm341)).map_err(|e| e.to_string())?;
    let bad = failures(&report);
    ensure(bad.is_empty(), || format!("failing instances {bad:?}"))?;
    let mut worst_member: f64 = 0.0;
    let mut best_nonmember = f64::INFINITY;
    let mut oblique = 0;
    for r in &report.instances {
        let c = &r.detail["check"];
        ensure(c["sets_equal"] == true, || {
            format!("#{}: sets differ", r.index)
        })?;
        worst_member = worst_member.max(c["max_member_pivot_residual"].as_f64().unwrap());
        if let Some(x) = c["min_nonmember_pivot_residual"].as_f64() {
            best_nonmember = best_nonmember.min(x);
            oblique += 1;
        }
    }
    ensure(worst_member < t.op, || {
        format!("member residual {worst_member:e}")
    })?;
    ensure(best_nonmember > 10.0 * t.op, || {
        format!("non-member residual {best_nonmember:e}")
    })?;
    ensure(oblique == report.instances.len(), || {
        format!("only {oblique} instances contained an incompatible member")
    })?;
    Ok(format!(
        "500/500 equal; member residual ≤ {worst_member:.1e}, non-member ≥ {best_nonmember:.3}"
    ))
}

/// Objective = predictable on the same 500 instances.
fn criterion_4() -> Outcome {
    let report = run_experiment(&domain_config(Experiment::Eq6)).map_err(|e| e.to_string())?;
    let bad = failures(&report);
    ensure(bad.is_empty(), || format!("failing instances {bad:?}"))?;
    Ok(format!(
        "{}/{} equal, max T residual on objective members {:.1e}",
        report.aggregate.pass,
        report.instances.len(),
        report.aggregate.max_residual
    ))
}

/// Lattice laws on 1000 draws per dimension 2..=5, plus the
/// non-distributivity witness in dimension 2.
fn criterion_5() -> Outcome {
    let t = tol();
    let mut worst: f64 = 0.0;
    for dim in 2..=5 {
        let cfg = ExperimentConfig {
            experiment: Experiment::LatticeLaws,
            dim,
            instances: 1000,
            seed: 5,
            tolerances: t,
            ..Default::default()
        };
        let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
        let bad = failures(&report);
        ensure(bad.is_empty(), || {
            format!("dim {dim}: violations at {bad:?}")
        })?;
        worst = worst.max(report.aggregate.max_residual);
    }
    let p = Projection::from_ket(&Ket::basis(2, 0));
    let q = Projection::from_ket(&Ket::basis(2, 1));
    let r = Projection::from_ket(&Ket::from_real(&[1.0, 1.0]).unwrap());
    let lhs = meet(&r, &join(&p, &q, &t).unwrap(), &t).unwrap();
    let rhs = join(&meet(&r, &p, &t).unwrap(), &meet(&r, &q, &t).unwrap(), &t).unwrap();
    ensure(lhs.approx_eq(&r, &t), || "R ∧ (P ∨ Q) ≠ R".into())?;
    ensure(rhs.approx_eq(&Projection::zero(2), &t), || {
        "(R∧P) ∨ (R∧Q) ≠ 0".into()
    })?;
    let gap = lhs.distance(&rhs);
    ensure(gap > t.op, || {
        format!("distributivity not violated (gap {gap:e})")
    })?;
    Ok(format!(
        "4000 draws, 0 violations, max residual {worst:.1e}; distributivity gap {gap:.3}"
    ))
}

fn worked_family(t: &Tolerances) -> PropertyFamily {
    let atom = |a: &[f64]| Projection::from_ket(&Ket::from_real(a).unwrap());
    PropertyFamily::new(
        2,
        vec![
            ("zero".to_string(), Projection::zero(2)),
            ("p0".to_string(), atom(&[1., 0.])),
            ("p1".to_string(), atom(&[0., 1.])),
            ("plus".to_string(), atom(&[1., 1.])),
            ("id".to_string(), Projection::identity(2)),
        ],
        t,
    )
    .unwrap()
}

/// Worked dim-2 family with S = |0⟩: standard complete (4 = 4), SR
/// incomplete with witness |+⟩⟨+|.
fn criterion_6() -> Outcome {
    let t = tol();
    let f = worked_family(&t);
    let m = PureStateModel::new(Ket::basis(2, 0));
    let stmts: Vec<Statement> = f.labels().map(Statement::elem).collect();
    let std =
        completeness_audit(&m, &f, &stmts, AuditMode::Standard, &t).map_err(|e| e.to_string())?;
    ensure(std.verdict == Verdict::Complete, || {
        "standard: incomplete".into()
    })?;
    ensure(
        std.meaningful.len() == 4 && std.predictable.len() == 4,
        || format!("standard sets {:?} / {:?}", std.meaningful, std.predictable),
    )?;
    ensure(std.meaningful == std.predictable, || {
        "meaningful ≠ predictable".into()
    })?;
    let sr = completeness_audit(&m, &f, &stmts, AuditMode::Sr, &t).map_err(|e| e.to_string())?;
    ensure(sr.verdict == Verdict::Incomplete, || "SR: complete".into())?;
    ensure(sr.witness.as_deref() == Some("plus"), || {
        format!("SR witness {:?}", sr.witness)
    })?;
    Ok(format!(
        "standard complete ({} = {}), SR incomplete (5 vs 4, witness {})",
        std.meaningful.len(),
        std.predictable.len(),
        sr.witness.unwrap()
    ))
}

const ATOMS: [&str; 3] = ["a", "b", "c"];

/// Truth-table oracle: bit `k` of the mask is the value under assignment
/// `k`, where atom `i` is true iff bit `i` of `k` is set.
fn atom_mask(i: usize) -> u8 {
    (0..8u8)
        .filter(|k| k >> i & 1 == 1)
        .fold(0, |m, k| m | 1 << k)
}

/// All statements up to the given height, where an elementary statement
/// has height 1; each paired with its oracle mask.
fn enumerate(max_height: usize) -> Vec<(Statement, u8)> {
    let mut pool: Vec<(Statement, u8)> = ATOMS
        .iter()
        .enumerate()
        .map(|(i, a)| (Statement::elem(*a), atom_mask(i)))
        .collect();
    for _ in 1..max_height {
        let prev = pool.clone();
        for (s, m) in &prev {
            pool.push((Statement::not(s.clone()), !m));
        }
        for (a, ma) in &prev {
            for (b, mb) in &prev {
                pool.push((Statement::and(a.clone(), b.clone()), ma & mb));
                pool.push((Statement::or(a.clone(), b.clone()), ma | mb));
                pool.push((Statement::implies(a.clone(), b.clone()), !ma | mb));
            }
        }
        pool.sort_by(|x, y| x.0.cmp(&y.0));
        pool.dedup_by(|x, y| x.0 == y.0);
    }
    pool
}

fn assignments() -> Vec<ClassicalAssignment> {
    (0..8u8)
        .map(|k| {
            ClassicalAssignment::new(
                ATOMS
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a.to_string(), k >> i & 1 == 1)),
            )
        })
        .collect()
}

fn check_against_oracle(s: &Statement, mask: u8, env: &[ClassicalAssignment]) -> bool {
    env.iter()
        .enumerate()
        .all(|(k, a)| tarskian_truth(s, a).unwrap() == (mask >> k & 1 == 1))
}

/// Tarskian evaluation vs truth tables on every statement of height ≤ 4
/// over 3 atoms; the verificationist valuation leaves every compound with
/// non-commuting constituents undefined and flags the tautology-shaped case.
fn criterion_7() -> Outcome {
    let env = assignments();
    // height ≤ 3 explicitly, then height 4 = connective(height ≤ 3, height ≤ 3)
    // built in place by swapping children, to avoid cloning 32.7M trees
    let mut pool = enumerate(3);
    let mut checked = 0u64;
    for (s, m) in &pool {
        ensure(check_against_oracle(s, *m, &env), || {
            format!("mismatch on {s}")
        })?;
        checked += 1;
    }
    let masks: Vec<u8> = pool.iter().map(|(_, m)| *m).collect();
    for (s, m) in &pool {
        ensure(
            check_against_oracle(&Statement::not(s.clone()), !m, &env),
            || format!("mismatch on (not {s})"),
        )?;
        checked += 1;
    }
    type Ctor = fn(Statement, Statement) -> Statement;
    type MaskOp = fn(u8, u8) -> u8;
    let ops: [(Ctor, MaskOp); 3] = [
        (Statement::and, |a, b| a & b),
        (Statement::or, |a, b| a | b),
        (Statement::implies, |a, b| !a | b),
    ];
    let placeholder = Statement::elem("a");
    for (ctor, oracle) in ops {
        for i in 0..pool.len() {
            let left = pool[i].0.clone();
            let mut node = ctor(left, placeholder.clone());
            for j in 0..pool.len() {
                let slot = match &mut node {
                    Statement::And(_, r) | Statement::Or(_, r) | Statement::Implies(_, r) => r,
                    _ => unreachable!(),
                };
                std::mem::swap(slot.as_mut(), &mut pool[j].0);
                let ok = check_against_oracle(&node, oracle(masks[i], masks[j]), &env);
                let slot = match &mut node {
                    Statement::And(_, r) | Statement::Or(_, r) | Statement::Implies(_, r) => r,
                    _ => unreachable!(),
                };
                std::mem::swap(slot.as_mut(), &mut pool[j].0);
                ensure(ok, || format!("mismatch on {node}"))?;
                checked += 1;
            }
        }
    }

    // verificationist filter over the worked family
    let t = tol();
    let f = worked_family(&t);
    let m = PureStateModel::new(Ket::basis(2, 0));
    let labels = ["p0", "p1", "plus"];
    let mut compounds = 0;
    let mut mixed = 0;
    let mut pool2: Vec<Statement> = labels.iter().map(|l| Statement::elem(*l)).collect();
    for _ in 0..2 {
        let prev = pool2.clone();
        for a in &prev {
            pool2.push(Statement::not(a.clone()));
            for b in &prev {
                pool2.push(Statement::and(a.clone(), b.clone()));
                pool2.push(Statement::or(a.clone(), b.clone()));
                pool2.push(Statement::implies(a.clone(), b.clone()));
            }
        }
        pool2.sort();
        pool2.dedup();
    }
    for s in pool2.iter().filter(|s| !s.is_elementary()) {
        compounds += 1;
        let ls = s.labels();
        if ls.contains("plus") && ls.len() > 1 {
            mixed += 1;
            let ev = ev_evaluate(s, &m, &f, &t).map_err(|e| e.to_string())?;
            ensure(ev.normative == TruthValue3::Undefined, || {
                format!("{s} evaluated {:?}", ev.normative)
            })?;
        }
    }
    let tautology: Statement = "(or (and p0 plus) (not (and p0 plus)))".parse().unwrap();
    let ev = ev_evaluate(&tautology, &m, &f, &t).map_err(|e| e.to_string())?;
    ensure(ev.normative == TruthValue3::Undefined, || {
        "tautology defined".into()
    })?;
    ensure(ev.flag == Some(EvFlag::NonTestableTautology), || {
        "tautology not flagged".into()
    })?;
    let audit = completeness_audit(
        &m,
        &f,
        std::slice::from_ref(&tautology),
        AuditMode::Standard,
        &t,
    )
    .map_err(|e| e.to_string())?;
    ensure(audit.flagged == vec![tautology.to_string()], || {
        format!("audit flags {:?}", audit.flagged)
    })?;
    Ok(format!(
        "{checked} statement checks × 8 assignments match; all {mixed} of {compounds} compounds with non-commuting constituents undefined; tautology flagged"
    ))
}

/// Same config, same report (modulo wall time), for every experiment.
fn criterion_8() -> Outcome {
    let mut n = 0;
    for (experiment, mode) in [
        (Experiment::Thm321, AuditMode::Standard),
        (Experiment::Thm341, AuditMode::Standard),
        (Experiment::Eq6, AuditMode::Standard),
        (Experiment::LatticeLaws, AuditMode::Standard),
        (Experiment::CompletenessAudit, AuditMode::Sr),
    ] {
        let cfg = ExperimentConfig {
            experiment,
            dim: 2,
            max_dim: Some(5),
            instances: 40,
            mc_trials: 200,
            seed: 8,
            audit_mode: mode,
            ..Default::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        let a = run_experiment(&ExperimentConfig::from_json(&text).unwrap()).unwrap();
        let b = run_experiment(&ExperimentConfig::from_json(&text).unwrap()).unwrap();
        ensure(
            a.canonical_json().unwrap() == b.canonical_json().unwrap(),
            || format!("{experiment:?}: reports differ"),
        )?;
        n += 1;
    }
    Ok(format!("{n} experiments reproduced bit-identically"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 compatibility relations coincide", criterion_1),
        ("2 operational Monte Carlo consistency", criterion_2),
        ("3 predictable = compatible", criterion_3),
        ("4 objective = predictable", criterion_4),
        ("5 lattice laws + non-distributivity", criterion_5),
        ("6 completeness audit, worked family", criterion_6),
        ("7 Tarskian oracle + verificationist filter", criterion_7),
        ("8 reproducibility", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS  criterion {name}: {msg} [{secs:.1} s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg} [{secs:.1} s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
