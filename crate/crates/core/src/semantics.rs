//! Statements about one physical object, evaluated two ways: the
//! verificationist valuation (three-valued, a statement has a truth value
//! only if it can be checked without disturbing the state) and the Tarskian
//! valuation (classical, total, over a caller-supplied assignment). The
//! completeness audit compares what each valuation deems meaningful with
//! what the quantum state predicts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domains::PureStateModel;
use crate::error::{QlatError, Result};
use crate::lattice::{join, leq, meet, PropertyFamily};
use crate::measurement::{born_probability, relation_t_exact, Observable};
use crate::numerics::{check_dims, commutator_norm, Projection, Tolerances};
use crate::sampling::{haar_ket, SeededRng};

/// A formula over elementary property statements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statement {
    Elementary(String),
    Not(Box<Statement>),
    And(Box<Statement>, Box<Statement>),
    Or(Box<Statement>, Box<Statement>),
    Implies(Box<Statement>, Box<Statement>),
}

impl Statement {
    pub fn elem(label: impl Into<String>) -> Self {
        Statement::Elementary(label.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(s: Statement) -> Self {
        Statement::Not(Box::new(s))
    }

    pub fn and(a: Statement, b: Statement) -> Self {
        Statement::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Statement, b: Statement) -> Self {
        Statement::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Statement, b: Statement) -> Self {
        Statement::Implies(Box::new(a), Box::new(b))
    }

    pub fn is_elementary(&self) -> bool {
        matches!(self, Statement::Elementary(_))
    }

    /// Distinct leaf labels, sorted.
    pub fn labels(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Statement::Elementary(l) => {
                out.insert(l.as_str());
            }
            Statement::Not(a) => a.collect_labels(out),
            Statement::And(a, b) | Statement::Or(a, b) | Statement::Implies(a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
        }
    }

    /// Elementary statements have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Statement::Elementary(_) => 0,
            Statement::Not(a) => 1 + a.depth(),
            Statement::And(a, b) | Statement::Or(a, b) | Statement::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Elementary(l) => write!(f, "{l}"),
            Statement::Not(a) => write!(f, "(not {a})"),
            Statement::And(a, b) => write!(f, "(and {a} {b})"),
            Statement::Or(a, b) => write!(f, "(or {a} {b})"),
            Statement::Implies(a, b) => write!(f, "(implies {a} {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(text: &str) -> Vec<(usize, Token<'_>)> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => {
                out.push((i, Token::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Token::Close));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len()
                    && !bytes[i].is_ascii_whitespace()
                    && bytes[i] != b'('
                    && bytes[i] != b')'
                {
                    i += 1;
                }
                out.push((start, Token::Atom(&text[start..i])));
            }
        }
    }
    out
}

struct Parser<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let pos = self.tokens.get(self.pos).map_or(self.end, |t| t.0);
        Err(QlatError::Parse {
            pos,
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.tokens.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn statement(&mut self) -> Result<Statement> {
        match self.next() {
            Some(Token::Atom(l)) => Ok(Statement::elem(l)),
            Some(Token::Open) => {
                let op = match self.next() {
                    Some(Token::Atom(op)) => op,
                    _ => {
                        self.pos -= 1;
                        return self.err("expected connective after `(`");
                    }
                };
                let s = match op {
                    "not" => Statement::not(self.statement()?),
                    "and" => Statement::and(self.statement()?, self.statement()?),
                    "or" => Statement::or(self.statement()?, self.statement()?),
                    "implies" => Statement::implies(self.statement()?, self.statement()?),
                    other => {
                        self.pos -= 1;
                        return self.err(format!("unknown connective `{other}`"));
                    }
                };
                match self.next() {
                    Some(Token::Close) => Ok(s),
                    _ => {
                        self.pos -= 1;
                        self.err("expected `)`")
                    }
                }
            }
            Some(Token::Close) => {
                self.pos -= 1;
                self.err("unexpected `)`")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

impl FromStr for Statement {
    type Err = QlatError;

    fn from_str(text: &str) -> Result<Self> {
        let mut p = Parser {
            tokens: tokenize(text),
            pos: 0,
            end: text.len(),
        };
        let s = p.statement()?;
        if p.pos < p.tokens.len() {
            return p.err("trailing input");
        }
        Ok(s)
    }
}

/// Parses a statement file: one statement per line; blank lines and lines
/// starting with `#` are skipped.
pub fn parse_statements(text: &str) -> Result<Vec<Statement>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(Statement::from_str)
        .collect()
}

/// Three-valued truth with strong Kleene connectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruthValue3 {
    True,
    False,
    Undefined,
}

impl From<bool> for TruthValue3 {
    fn from(b: bool) -> Self {
        if b {
            TruthValue3::True
        } else {
            TruthValue3::False
        }
    }
}

impl TruthValue3 {
    pub fn negate(self) -> Self {
        match self {
            TruthValue3::True => TruthValue3::False,
            TruthValue3::False => TruthValue3::True,
            TruthValue3::Undefined => TruthValue3::Undefined,
        }
    }

    pub fn and(self, other: Self) -> Self {
        use TruthValue3::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Undefined,
        }
    }

    pub fn or(self, other: Self) -> Self {
        self.negate().and(other.negate()).negate()
    }

    pub fn is_defined(self) -> bool {
        self != TruthValue3::Undefined
    }
}

/// Which properties the object possesses, one boolean per label.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalAssignment(pub BTreeMap<String, bool>);

impl ClassicalAssignment {
    pub fn new(values: impl IntoIterator<Item = (String, bool)>) -> Self {
        Self(values.into_iter().collect())
    }

    pub fn get(&self, label: &str) -> Result<bool> {
        self.0
            .get(label)
            .copied()
            .ok_or_else(|| QlatError::UnknownLabel(label.to_string()))
    }
}

/// Classical, total evaluation. `implies(p, q)` is `(not p) or q`.
pub fn tarskian_truth(s: &Statement, a: &ClassicalAssignment) -> Result<bool> {
    Ok(match s {
        Statement::Elementary(l) => a.get(l)?,
        Statement::Not(x) => !tarskian_truth(x, a)?,
        Statement::And(x, y) => tarskian_truth(x, a)? && tarskian_truth(y, a)?,
        Statement::Or(x, y) => tarskian_truth(x, a)? || tarskian_truth(y, a)?,
        Statement::Implies(x, y) => !tarskian_truth(x, a)? || tarskian_truth(y, a)?,
    })
}

fn resolve<'f>(s: &Statement, family: &'f PropertyFamily) -> Result<Vec<&'f Projection>> {
    s.labels().into_iter().map(|l| family.get(l)).collect()
}

/// The elementary equivalent of `s`, if all its constituents pairwise
/// commute: the connective tree evaluated with `not → I − P`, `and → ∧`,
/// `or → ∨`, `implies(p, q) → p⊥ ∨ q`.
pub fn is_testable(
    s: &Statement,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<Option<Projection>> {
    let parts = resolve(s, family)?;
    let bound = tol.op * family.dim() as f64;
    for (i, p) in parts.iter().enumerate() {
        for q in &parts[i + 1..] {
            if commutator_norm(p.matrix(), q.matrix())? >= bound {
                return Ok(None);
            }
        }
    }
    eval_projection(s, family, tol).map(Some)
}

fn eval_projection(s: &Statement, family: &PropertyFamily, tol: &Tolerances) -> Result<Projection> {
    Ok(match s {
        Statement::Elementary(l) => family.get(l)?.clone(),
        Statement::Not(x) => eval_projection(x, family, tol)?.complement(),
        Statement::And(x, y) => meet(
            &eval_projection(x, family, tol)?,
            &eval_projection(y, family, tol)?,
            tol,
        )?,
        Statement::Or(x, y) => join(
            &eval_projection(x, family, tol)?,
            &eval_projection(y, family, tol)?,
            tol,
        )?,
        Statement::Implies(x, y) => join(
            &eval_projection(x, family, tol)?.complement(),
            &eval_projection(y, family, tol)?,
            tol,
        )?,
    })
}

/// Certainty value of a property in a pure state: true if `E_S ≤ E`, false
/// if `E ≤ E_S⊥`, undefined otherwise.
pub fn certainty(e: &Projection, model: &PureStateModel, tol: &Tolerances) -> Result<TruthValue3> {
    check_dims(e.dim(), model.dim())?;
    if leq(model.support(), e, tol)? {
        Ok(TruthValue3::True)
    } else if leq(e, &model.support().complement(), tol)? {
        Ok(TruthValue3::False)
    } else {
        Ok(TruthValue3::Undefined)
    }
}

/// Why a statement was singled out in an evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvFlag {
    /// Classically valid, yet its constituents cannot be tested together.
    NonTestableTautology,
    /// Classically unsatisfiable, yet its constituents cannot be tested
    /// together.
    NonTestableContradiction,
}

/// Full verificationist evaluation of one statement.
#[derive(Clone, Debug, Serialize)]
pub struct EvValuation {
    /// The value that drives audits: undefined unless the statement is
    /// testable and its elementary equivalent can be measured without
    /// disturbing the support.
    pub normative: TruthValue3,
    /// Componentwise strong Kleene value, for reporting only.
    pub kleene: TruthValue3,
    pub testable: bool,
    /// The elementary equivalent does not disturb the support.
    pub objective: bool,
    pub flag: Option<EvFlag>,
}

/// Brute-force classical status of `s`: `Some(true)` for a tautology,
/// `Some(false)` for a contradiction, `None` otherwise.
pub fn classical_constant(s: &Statement) -> Option<bool> {
    let labels: Vec<&str> = s.labels().into_iter().collect();
    let n = labels.len();
    let mut seen = [false, false];
    for mask in 0u64..(1u64 << n) {
        let a = ClassicalAssignment::new(
            labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.to_string(), mask >> i & 1 == 1)),
        );
        let v = tarskian_truth(s, &a).expect("all labels assigned");
        seen[v as usize] = true;
        if seen[0] && seen[1] {
            return None;
        }
    }
    Some(seen[1])
}

fn kleene(
    s: &Statement,
    model: &PureStateModel,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<TruthValue3> {
    Ok(match s {
        Statement::Elementary(l) => certainty(family.get(l)?, model, tol)?,
        Statement::Not(x) => kleene(x, model, family, tol)?.negate(),
        Statement::And(x, y) => kleene(x, model, family, tol)?.and(kleene(y, model, family, tol)?),
        Statement::Or(x, y) => kleene(x, model, family, tol)?.or(kleene(y, model, family, tol)?),
        Statement::Implies(x, y) => kleene(x, model, family, tol)?
            .negate()
            .or(kleene(y, model, family, tol)?),
    })
}

pub fn ev_evaluate(
    s: &Statement,
    model: &PureStateModel,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<EvValuation> {
    check_dims(family.dim(), model.dim())?;
    let kleene = kleene(s, model, family, tol)?;
    let Some(equivalent) = is_testable(s, family, tol)? else {
        let flag = classical_constant(s).map(|taut| {
            if taut {
                EvFlag::NonTestableTautology
            } else {
                EvFlag::NonTestableContradiction
            }
        });
        return Ok(EvValuation {
            normative: TruthValue3::Undefined,
            kleene,
            testable: false,
            objective: false,
            flag,
        });
    };
    let objective = relation_t_exact(
        &Observable::dichotomic(&equivalent),
        &Observable::dichotomic(model.support()),
        tol,
    )?;
    let normative = if objective {
        certainty(&equivalent, model, tol)?
    } else {
        TruthValue3::Undefined
    };
    Ok(EvValuation {
        normative,
        kleene,
        testable: true,
        objective,
        flag: None,
    })
}

/// Normative verificationist truth value.
pub fn ev_truth(
    s: &Statement,
    model: &PureStateModel,
    family: &PropertyFamily,
    tol: &Tolerances,
) -> Result<TruthValue3> {
    Ok(ev_evaluate(s, model, family, tol)?.normative)
}

/// Checks, on a finite family, that the lattice order coincides with
/// entailment between "certainly possessed" judgements: `E ≤ E′` iff every
/// sampled state that makes `E` certain also makes `E′` certain. The sample
/// is `random_states` Haar states plus a range basis of every member.
pub fn order_isomorphism_check(
    family: &PropertyFamily,
    tol: &Tolerances,
    rng: &SeededRng,
    random_states: usize,
) -> Result<bool> {
    let d = family.dim();
    let mut stream = rng.stream(0);
    let mut states: Vec<_> = (0..random_states)
        .map(|_| haar_ket(&mut stream, d))
        .collect();
    for (_, e) in family.iter() {
        for v in e.range_basis() {
            states.push(crate::numerics::Ket::normalize(v)?);
        }
    }
    let members: Vec<_> = family.iter().collect();
    let certain: Vec<Vec<bool>> = members
        .iter()
        .map(|(_, e)| {
            states
                .iter()
                .map(|psi| Ok(born_probability(psi, e)? >= 1.0 - tol.prob))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    for (i, (_, e)) in members.iter().enumerate() {
        for (j, (_, f)) in members.iter().enumerate() {
            let ordered = leq(e, f, tol)?;
            let entails = (0..states.len()).all(|k| !certain[i][k] || certain[j][k]);
            if ordered != entails {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMode {
    /// Verificationist truth: meaningful = has an EV truth value.
    Standard,
    /// Tarskian truth: every statement is meaningful.
    Sr,
}

impl FromStr for AuditMode {
    type Err = QlatError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(AuditMode::Standard),
            "sr" => Ok(AuditMode::Sr),
            other => Err(QlatError::InvalidConfig {
                field: "mode".into(),
                reason: format!("expected `standard` or `sr`, got `{other}`"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Complete,
    Incomplete,
}

/// Statements are identified by their canonical prefix rendering.
#[derive(Clone, Debug, Serialize)]
pub struct CompletenessAudit {
    pub mode: AuditMode,
    pub statements: Vec<String>,
    pub meaningful: Vec<String>,
    pub predictable: Vec<String>,
    pub verdict: Verdict,
    pub witness: Option<String>,
    /// Non-testable tautologies and contradictions.
    pub flagged: Vec<String>,
}

/// Compares meaningful statements (per the truth theory of `mode`) with the
/// statements whose truth value the state predicts: testable ones whose
/// elementary equivalent is certainly true or certainly false.
pub fn completeness_audit(
    model: &PureStateModel,
    family: &PropertyFamily,
    statements: &[Statement],
    mode: AuditMode,
    tol: &Tolerances,
) -> Result<CompletenessAudit> {
    let mut seen = BTreeSet::new();
    let mut ids = Vec::new();
    let mut meaningful = Vec::new();
    let mut predictable = Vec::new();
    let mut flagged = Vec::new();
    for s in statements {
        let id = s.to_string();
        if !seen.insert(id.clone()) {
            continue;
        }
        let ev = ev_evaluate(s, model, family, tol)?;
        if ev.flag.is_some() {
            flagged.push(id.clone());
        }
        let is_predictable = match is_testable(s, family, tol)? {
            Some(e) => certainty(&e, model, tol)?.is_defined(),
            None => false,
        };
        let is_meaningful = match mode {
            AuditMode::Standard => ev.objective,
            AuditMode::Sr => true,
        };
        if is_meaningful {
            meaningful.push(id.clone());
        }
        if is_predictable {
            predictable.push(id.clone());
        }
        ids.push(id);
    }
    let predictable_set: BTreeSet<&String> = predictable.iter().collect();
    let witness = meaningful
        .iter()
        .find(|id| !predictable_set.contains(id))
        .cloned();
    let verdict = if witness.is_some() {
        Verdict::Incomplete
    } else {
        Verdict::Complete
    };
    Ok(CompletenessAudit {
        mode,
        statements: ids,
        meaningful,
        predictable,
        verdict,
        witness,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Ket;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn atom(amps: &[f64]) -> Projection {
        Projection::from_ket(&Ket::from_real(amps).unwrap())
    }

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

    fn s(text: &str) -> Statement {
        text.parse().unwrap()
    }

    #[test]
    fn parse_and_render() {
        let st = s("(and E1 (not E2))");
        assert_eq!(
            st,
            Statement::and(Statement::elem("E1"), Statement::not(Statement::elem("E2")))
        );
        assert_eq!(st.to_string(), "(and E1 (not E2))");
        assert_eq!(
            s("  (implies a   (or b c))").to_string(),
            "(implies a (or b c))"
        );
        assert_eq!(st.depth(), 2);
        for bad in ["", "(", "(and a)", "(xor a b)", "a b", ")", "(not a b)"] {
            assert!(bad.parse::<Statement>().is_err(), "{bad:?}");
        }
        let list = parse_statements("# header\np0\n\n(not p1)\n").unwrap();
        assert_eq!(list.len(), 2);
    }

    #[test]
    fn tarskian_examples() {
        let both = |a: bool, b: bool| {
            ClassicalAssignment::new([("E1".to_string(), a), ("E2".to_string(), b)])
        };
        assert!(tarskian_truth(&s("E1"), &both(true, false)).unwrap());
        for a in [false, true] {
            for b in [false, true] {
                assert!(!tarskian_truth(&s("(and E1 (not E1))"), &both(a, b)).unwrap());
                assert!(tarskian_truth(&s("(implies E1 (or E1 E2))"), &both(a, b)).unwrap());
            }
        }
        assert!(tarskian_truth(&s("E3"), &both(true, true)).is_err());
    }

    #[test]
    fn kleene_tables() {
        use TruthValue3::*;
        assert_eq!(Undefined.and(False), False);
        assert_eq!(Undefined.or(True), True);
        assert_eq!(Undefined.and(True), Undefined);
        assert_eq!(Undefined.negate(), Undefined);
    }

    #[test]
    fn ev_examples() {
        let t = tol();
        let f = worked_family();
        let m = PureStateModel::new(Ket::basis(2, 0));
        assert_eq!(ev_truth(&s("id"), &m, &f, &t).unwrap(), TruthValue3::True);
        let other = PureStateModel::new(Ket::from_real(&[0.6, 0.8]).unwrap());
        assert_eq!(
            ev_truth(&s("id"), &other, &f, &t).unwrap(),
            TruthValue3::True
        );
        assert_eq!(
            ev_truth(&s("plus"), &m, &f, &t).unwrap(),
            TruthValue3::Undefined
        );
        assert_eq!(
            ev_truth(&s("(and p0 p1)"), &m, &f, &t).unwrap(),
            TruthValue3::False
        );
        assert!(ev_truth(&s("nope"), &m, &f, &t).is_err());
    }

    #[test]
    fn non_testable_compound_is_undefined_even_when_kleene_rescues() {
        let t = tol();
        let f = worked_family();
        let m = PureStateModel::new(Ket::basis(2, 0));
        // p0 is certainly true, so Kleene gives True, but p0 and plus do not commute
        let ev = ev_evaluate(&s("(or p0 plus)"), &m, &f, &t).unwrap();
        assert_eq!(ev.kleene, TruthValue3::True);
        assert_eq!(ev.normative, TruthValue3::Undefined);
        assert!(!ev.testable);
        assert_eq!(ev.flag, None);

        let ev = ev_evaluate(&s("(or plus (not plus))"), &m, &f, &t).unwrap();
        // single constituent: testable, equivalent to I
        assert!(ev.testable);
        assert_eq!(ev.normative, TruthValue3::True);

        let ev = ev_evaluate(&s("(or (and p0 plus) (not (and p0 plus)))"), &m, &f, &t).unwrap();
        assert_eq!(ev.normative, TruthValue3::Undefined);
        assert_eq!(ev.flag, Some(EvFlag::NonTestableTautology));
        let ev = ev_evaluate(&s("(and (and p0 plus) (not p0))"), &m, &f, &t).unwrap();
        assert_eq!(ev.flag, Some(EvFlag::NonTestableContradiction));
    }

    #[test]
    fn testability_examples() {
        let t = tol();
        let f = worked_family();
        let e = is_testable(&s("plus"), &f, &t).unwrap().unwrap();
        assert!(e.approx_eq(f.get("plus").unwrap(), &t));
        let e = is_testable(&s("(and p0 (not p0))"), &f, &t)
            .unwrap()
            .unwrap();
        assert!(e.approx_eq(&Projection::zero(2), &t));
        assert!(is_testable(&s("(and p0 plus)"), &f, &t).unwrap().is_none());
        assert!(matches!(
            is_testable(&s("(and p0 q)"), &f, &t),
            Err(QlatError::UnknownLabel(_))
        ));
        let e = is_testable(&s("(implies p0 p1)"), &f, &t).unwrap().unwrap();
        assert!(e.approx_eq(f.get("p1").unwrap(), &t));
    }

    #[test]
    fn order_isomorphism_on_small_families() {
        let t = tol();
        let rng = SeededRng::new(9);
        let chain = PropertyFamily::new(2, vec![("e".to_string(), atom(&[1., 0.]))], &t).unwrap();
        assert!(order_isomorphism_check(&chain, &t, &rng, 20).unwrap());
        assert!(order_isomorphism_check(&worked_family(), &t, &rng, 20).unwrap());
    }

    #[test]
    fn worked_audit_in_both_modes() {
        let t = tol();
        let f = worked_family();
        let m = PureStateModel::new(Ket::basis(2, 0));
        let stmts: Vec<_> = f.labels().map(Statement::elem).collect();
        let a = completeness_audit(&m, &f, &stmts, AuditMode::Standard, &t).unwrap();
        assert_eq!(a.verdict, Verdict::Complete);
        assert_eq!(a.meaningful, a.predictable);
        assert_eq!(a.meaningful.len(), 4);
        assert!(a.witness.is_none());

        let a = completeness_audit(&m, &f, &stmts, AuditMode::Sr, &t).unwrap();
        assert_eq!(a.verdict, Verdict::Incomplete);
        assert_eq!(a.meaningful.len(), 5);
        assert_eq!(a.predictable.len(), 4);
        assert_eq!(a.witness.as_deref(), Some("plus"));
    }

    #[test]
    fn commuting_family_is_complete_in_both_modes() {
        let t = tol();
        let f = PropertyFamily::new(
            2,
            vec![
                ("p0".to_string(), atom(&[1., 0.])),
                ("p1".to_string(), atom(&[0., 1.])),
            ],
            &t,
        )
        .unwrap();
        let m = PureStateModel::new(Ket::basis(2, 1));
        let stmts: Vec<_> = f.labels().map(Statement::elem).collect();
        for mode in [AuditMode::Standard, AuditMode::Sr] {
            let a = completeness_audit(&m, &f, &stmts, mode, &t).unwrap();
            assert_eq!(a.verdict, Verdict::Complete);
        }
    }
}
