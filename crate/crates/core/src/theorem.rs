//! Instance-level verification of the fixed-point theorems.
//!
//! Each verifier evaluates the premises of one theorem on a concrete finite
//! instance and, only when they all hold, its conclusion. A report whose
//! premises hold but whose conclusion fails is a soundness violation.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    asymptotic_report, check_contractive, check_increasing, fix_asingleton_check,
    semi_progressive_points, CheckReport,
};
use crate::chain::TRIVIAL_FINITE;
use crate::comparison::{classify_phi, ClassifyOptions, ComparisonFn, PhiError, Verdict};
use crate::metric::{FiniteMetricSpace, SelfMap};
use crate::picard::{is_strongly_picard, orbit};
use crate::relation::{s_omega, Relation, RelationError};
use crate::scalar::{format_rational, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TheoremId {
    #[serde(rename = "B-cp-ms")]
    BanachMetric,
    #[serde(rename = "B-cp-bdms")]
    BanachBounded,
    #[serde(rename = "K-asy-rms")]
    KirkAsymptotic,
    #[serde(rename = "AI-fct-rms")]
    AlamImdadFunctional,
    #[serde(rename = "AI-lin-rsms")]
    AlamImdadLinearSymmetric,
    #[serde(rename = "E-cp-ms")]
    Edelstein,
    #[serde(rename = "NL-lin-qoms")]
    NietoLopez,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::BanachMetric,
        TheoremId::BanachBounded,
        TheoremId::KirkAsymptotic,
        TheoremId::AlamImdadFunctional,
        TheoremId::AlamImdadLinearSymmetric,
        TheoremId::Edelstein,
        TheoremId::NietoLopez,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::BanachMetric => "B-cp-ms",
            TheoremId::BanachBounded => "B-cp-bdms",
            TheoremId::KirkAsymptotic => "K-asy-rms",
            TheoremId::AlamImdadFunctional => "AI-fct-rms",
            TheoremId::AlamImdadLinearSymmetric => "AI-lin-rsms",
            TheoremId::Edelstein => "E-cp-ms",
            TheoremId::NietoLopez => "NL-lin-qoms",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| HarnessError::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
    #[error("modulus {value} outside {range}")]
    InvalidModulus { value: String, range: &'static str },
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(String),
    #[error("space has {space} points but the map has {map}")]
    CarrierMismatch { space: usize, map: usize },
    #[error("relation has {relation} points but the space has {space}")]
    RelationCarrierMismatch { space: usize, relation: usize },
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("not a quasi-order: {0}")]
    NotQuasiOrder(RelationError),
    #[error(transparent)]
    Phi(#[from] PhiError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    /// Only heuristic evidence was available and it was inconclusive.
    Unestablished,
    TriviallySatisfied,
}

impl Status {
    pub fn is_satisfied(self) -> bool {
        matches!(self, Status::Holds | Status::TriviallySatisfied)
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Holds
        } else {
            Status::Fails
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Unestablished => "unestablished",
            Status::TriviallySatisfied => TRIVIAL_FINITE,
        })
    }
}

/// One named condition with its verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Item {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Item {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Self { name: name.into(), status, witness: None, detail: None }
    }

    pub fn trivial(name: impl Into<String>) -> Self {
        Self::new(name, Status::TriviallySatisfied)
    }

    fn from_check<D: Scalar>(name: impl Into<String>, check: &CheckReport, space: &FiniteMetricSpace<D>) -> Self {
        Self {
            witness: check.first_witness().map(|w| w.render(space)),
            ..Self::new(name, Status::from_bool(check.holds))
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConclusionVerdict {
    Holds,
    Fails,
    NotEvaluated,
}

impl fmt::Display for ConclusionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConclusionVerdict::Holds => "holds",
            ConclusionVerdict::Fails => "fails",
            ConclusionVerdict::NotEvaluated => "not-evaluated",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    pub verdict: ConclusionVerdict,
    pub parts: Vec<Item>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Soundness {
    #[serde(rename = "consistent")]
    Consistent,
    #[serde(rename = "VIOLATION")]
    Violation,
}

/// A specialization of a more general principle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instantiation {
    pub of: TheoremId,
    pub note: String,
    pub checks: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub premises: Vec<Item>,
    pub premises_hold: bool,
    pub conclusion: Conclusion,
    pub soundness: Soundness,
    /// Side assertions evaluated on the instance regardless of premises.
    pub checks: Vec<Item>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instantiation: Option<Instantiation>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl TheoremReport {
    fn assemble(theorem: TheoremId, premises: Vec<Item>, conclusion: impl FnOnce() -> Vec<Item>) -> Self {
        let premises_hold = premises.iter().all(|p| p.status.is_satisfied());
        let conclusion = if premises_hold {
            let parts = conclusion();
            let verdict = if parts.iter().all(|p| p.status.is_satisfied()) {
                ConclusionVerdict::Holds
            } else {
                ConclusionVerdict::Fails
            };
            Conclusion { verdict, parts }
        } else {
            Conclusion { verdict: ConclusionVerdict::NotEvaluated, parts: Vec::new() }
        };
        let soundness = if premises_hold && conclusion.verdict == ConclusionVerdict::Fails {
            Soundness::Violation
        } else {
            Soundness::Consistent
        };
        Self {
            theorem,
            premises,
            premises_hold,
            conclusion,
            soundness,
            checks: Vec::new(),
            instantiation: None,
            notes: Vec::new(),
            seed: None,
        }
    }

    /// `(premises_hold, conclusion verdict)`
    pub fn verdict(&self) -> (bool, ConclusionVerdict) {
        (self.premises_hold, self.conclusion.verdict)
    }

    pub fn is_violation(&self) -> bool {
        self.soundness == Soundness::Violation
    }

    /// True when premises and conclusion both hold.
    pub fn passed(&self) -> bool {
        self.verdict() == (true, ConclusionVerdict::Holds)
    }

    pub fn first_failed_premise(&self) -> Option<&Item> {
        self.premises.iter().find(|p| !p.status.is_satisfied())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    fn note_finite_interpretation(&mut self) {
        self.notes.push(format!(
            "limit properties (completeness, almost-selfclosedness, left continuity) are {TRIVIAL_FINITE}: \
             convergent sequences are eventually constant"
        ));
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theorem {}", self.theorem)?;
        if let Some(inst) = &self.instantiation {
            writeln!(f, "  instance of {}: {}", inst.of, inst.note)?;
        }
        writeln!(f, "  premises ({}):", if self.premises_hold { "hold" } else { "do not hold" })?;
        for p in &self.premises {
            write_item(f, p)?;
        }
        writeln!(f, "  conclusion: {}", self.conclusion.verdict)?;
        for p in &self.conclusion.parts {
            write_item(f, p)?;
        }
        let checks = self.checks.iter().chain(self.instantiation.iter().flat_map(|i| &i.checks));
        for (k, c) in checks.enumerate() {
            if k == 0 {
                writeln!(f, "  checks:")?;
            }
            write_item(f, c)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        if let Some(seed) = self.seed {
            writeln!(f, "  seed: {seed}")?;
        }
        let soundness = match self.soundness {
            Soundness::Consistent => "consistent",
            Soundness::Violation => "VIOLATION",
        };
        write!(f, "  soundness: {soundness}")
    }
}

fn write_item(f: &mut fmt::Formatter<'_>, item: &Item) -> fmt::Result {
    write!(f, "    [{}] {}", item.status, item.name)?;
    if let Some(w) = &item.witness {
        write!(f, " (witness {w})")?;
    }
    if let Some(d) = &item.detail {
        write!(f, " - {d}")?;
    }
    writeln!(f)
}

fn check_shapes<D: Scalar>(space: &FiniteMetricSpace<D>, t: &SelfMap, rels: &[&Relation]) -> Result<(), HarnessError> {
    if space.len() != t.len() {
        return Err(HarnessError::CarrierMismatch { space: space.len(), map: t.len() });
    }
    for r in rels {
        if r.carrier_size() != space.len() {
            return Err(HarnessError::RelationCarrierMismatch { space: space.len(), relation: r.carrier_size() });
        }
    }
    Ok(())
}

fn zero() -> Rational {
    Rational::from_integer(0.into())
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

fn require_half_open(lambda: &Rational) -> Result<(), HarnessError> {
    if *lambda >= zero() && *lambda < one() {
        Ok(())
    } else {
        Err(HarnessError::InvalidModulus { value: format_rational(lambda), range: "[0, 1)" })
    }
}

fn require_open(lambda: &Rational) -> Result<(), HarnessError> {
    if *lambda > zero() && *lambda < one() {
        Ok(())
    } else {
        Err(HarnessError::InvalidModulus { value: format_rational(lambda), range: "(0, 1)" })
    }
}

fn describe_points<D: Scalar>(space: &FiniteMetricSpace<D>, points: &[usize]) -> String {
    let ids: Vec<&str> = points.iter().map(|&p| space.id(p)).collect();
    format!("{{{}}}", ids.join(","))
}

fn semi_progressive_item<D: Scalar>(name: &str, space: &FiniteMetricSpace<D>, t: &SelfMap, r: &Relation) -> Item {
    let points = semi_progressive_points(t, r);
    Item::new(name, Status::from_bool(!points.is_empty())).with_detail(format!("X(T) = {}", describe_points(space, &points)))
}

fn contractive_item<D: Scalar>(
    name: &str,
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    r: &Relation,
    phi: &ComparisonFn,
) -> Item {
    let report = check_contractive(space, t, r, phi);
    let mut item = Item::from_check(name, &report.relation, space);
    if let Some(crate::analysis::Witness::Pair(x, y)) = report.relation.first_witness() {
        item = item.with_detail(format!(
            "d(Tx,Ty) = {} > φ(d(x,y)) = {}",
            space.dist(t.apply(x), t.apply(y)),
            phi.eval(space.dist(x, y))
        ));
    }
    item
}

/// Conclusion of the relational theorems: every orbit started in `X(T, modulo)`
/// converges to a fixed point, and fixed points are `uniqueness`-asingleton.
fn relational_conclusion<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    modulo: &Relation,
    modulo_name: &str,
    uniqueness: &Relation,
) -> Vec<Item> {
    let picard = is_strongly_picard(t, modulo);
    let fix = fix_asingleton_check(t, uniqueness);
    vec![
        Item::from_check(format!("strongly Picard (modulo (d,{modulo_name}))"), &picard, space),
        Item::from_check("fix-(S^ω)-asingleton", &fix.asingleton, space)
            .with_detail(format!("Fix(T) = {}", describe_points(space, &fix.fixed_points))),
    ]
}

/// Banach contraction principle: a `(d; λ)`-contraction of a complete metric
/// space is global strongly Picard.
pub fn verify_banach<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    lambda: &Rational,
) -> Result<TheoremReport, HarnessError> {
    require_half_open(lambda)?;
    check_shapes(space, t, &[])?;
    let mut report = TheoremReport::assemble(TheoremId::BanachMetric, banach_premises(space, t, lambda), || {
        banach_conclusion(space, t)
    });
    report.note_finite_interpretation();
    Ok(report)
}

fn banach_premises<D: Scalar>(space: &FiniteMetricSpace<D>, t: &SelfMap, lambda: &Rational) -> Vec<Item> {
    let validation = space.validate();
    let mut metric = Item::new("d is a metric", Status::from_bool(validation.is_valid()));
    if let Some(v) = validation.violations.first() {
        metric = metric.with_witness(space.describe(v));
    }
    vec![
        metric,
        Item::trivial("X is d-complete"),
        contractive_item(
            &format!("T is (d;{})-contractive", format_rational(lambda)),
            space,
            t,
            &Relation::full(space.len()),
            &ComparisonFn::Linear(lambda.clone()),
        ),
    ]
}

fn banach_conclusion<D: Scalar>(space: &FiniteMetricSpace<D>, t: &SelfMap) -> Vec<Item> {
    let fixed = t.fixed_points();
    let singleton = Item::new("Fix(T) is a singleton", Status::from_bool(fixed.len() == 1))
        .with_detail(format!("Fix(T) = {}", describe_points(space, &fixed)));
    let target = (fixed.len() == 1).then(|| fixed[0]);
    let stray = (0..t.len()).find(|&x| target.is_none() || orbit(t, x).limit() != target);
    let mut orbits = Item::new("every orbit converges to the fixed point", Status::from_bool(stray.is_none()));
    if let Some(x) = stray {
        orbits = orbits.with_witness(space.id(x));
    }
    vec![singleton, orbits]
}

/// Banach principle on a bounded space. Finite spaces are always bounded;
/// also replays the choice `ε > diam(X)` that makes `[d < ε]` total.
pub fn verify_banach_bounded<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    lambda: &Rational,
) -> Result<TheoremReport, HarnessError> {
    require_half_open(lambda)?;
    check_shapes(space, t, &[])?;
    let diameter = space.diameter();
    let mut premises = vec![Item::new("X is bounded", Status::Holds).with_detail(format!("diam(X) = {diameter}"))];
    premises.extend(banach_premises(space, t, lambda));
    let mut report = TheoremReport::assemble(TheoremId::BanachBounded, premises, || banach_conclusion(space, t));

    let epsilon = diameter.clone() + D::one();
    let relation = crate::special::edelstein_relation(space, &epsilon)?;
    let total = relation == Relation::full(space.len());
    report.checks.push(
        Item::new("[d<ε] = [d<ε]^ω = X×X for ε > diam(X)", Status::from_bool(total && s_omega(&relation) == relation))
            .with_detail(format!("ε = {epsilon}")),
    );
    report.note_finite_interpretation();
    Ok(report)
}

/// Kirk-type asymptotic theorem on a relational metric space.
pub fn verify_kirk<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    r: &Relation,
) -> Result<TheoremReport, HarnessError> {
    check_shapes(space, t, &[r])?;
    r.check_reflexive()?;
    let asymptotic = asymptotic_report(space, t, r);
    let mut asy = Item::new("T is strongly (d,R)-asymptotic", Status::from_bool(asymptotic.strongly_asymptotic));
    if let Some(p) = asymptotic.diverging().next() {
        asy = asy
            .with_witness(format!("({},{})", space.id(p.x), space.id(p.y)))
            .with_detail("orbits never merge; the telescopic sum diverges");
    }
    let premises = vec![
        asy,
        Item::trivial("T is left (d,R)-continuous"),
        Item::trivial("X is (d,R)-complete"),
        Item::trivial("R is d-almost-selfclosed"),
        Item::from_check("T is (R)-increasing", &check_increasing(t, r), space),
        semi_progressive_item("T is (R)-semi-progressive", space, t, r),
    ];
    let omega = s_omega(r);
    let mut report = TheoremReport::assemble(TheoremId::KirkAsymptotic, premises, || {
        relational_conclusion(space, t, r, "R", &omega)
    });
    report.note_finite_interpretation();
    Ok(report)
}

/// Functional contraction principle with a Browder-admissible φ.
pub fn verify_ai_functional<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    r: &Relation,
    phi: &ComparisonFn,
) -> Result<TheoremReport, HarnessError> {
    verify_ai_functional_with(space, t, r, phi, &ClassifyOptions::default())
}

pub fn verify_ai_functional_with<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    r: &Relation,
    phi: &ComparisonFn,
    opts: &ClassifyOptions,
) -> Result<TheoremReport, HarnessError> {
    check_shapes(space, t, &[r])?;
    r.check_reflexive()?;
    let admissibility = classify_phi(phi, opts)?;
    let browder = match admissibility.browder {
        Verdict::Yes => Status::Holds,
        Verdict::NoEvidence => Status::Unestablished,
    };
    let premises = vec![
        Item::new(format!("φ = {phi} is in F0(in,re;Bro)"), browder).with_detail(format!(
            "heuristic: matkowski: {}, browder: {}",
            admissibility.matkowski, admissibility.browder
        )),
        contractive_item("T is (d,R;φ)-contractive", space, t, r, phi),
        Item::trivial("X is (d,R)-complete"),
        Item::trivial("R is d-almost-selfclosed"),
        Item::from_check("T is (R)-increasing", &check_increasing(t, r), space),
        semi_progressive_item("T is (R)-semi-progressive", space, t, r),
    ];
    let omega = s_omega(r);
    let mut report = TheoremReport::assemble(TheoremId::AlamImdadFunctional, premises, || {
        relational_conclusion(space, t, r, "R", &omega)
    });
    report.note_finite_interpretation();
    Ok(report)
}

/// Linear contraction principle on a reflexive symmetric relation `s`.
pub fn verify_ai_linear_rs<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    s: &Relation,
    lambda: &Rational,
) -> Result<TheoremReport, HarnessError> {
    check_shapes(space, t, &[s])?;
    s.check_reflexive()?;
    s.check_symmetric()?;
    require_open(lambda)?;
    let omega = s_omega(s);
    let premises = vec![
        contractive_item(
            &format!("T is (d,S;{})-contractive", format_rational(lambda)),
            space,
            t,
            s,
            &ComparisonFn::Linear(lambda.clone()),
        ),
        Item::trivial("X is (d,S)-complete"),
        Item::trivial("S is d-almost-selfclosed"),
        Item::from_check("T is (S)-increasing", &check_increasing(t, s), space),
        semi_progressive_item("T is (S^ω)-semi-progressive", space, t, &omega),
    ];
    let mut report = TheoremReport::assemble(TheoremId::AlamImdadLinearSymmetric, premises, || {
        relational_conclusion(space, t, &omega, "S^ω", &omega)
    });
    report.note_finite_interpretation();
    Ok(report)
}
