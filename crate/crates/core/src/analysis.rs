//! Predicate checks on `(X, d, R, T)`: contractivity, monotonicity,
//! semi-progressiveness, asymptoticity, fixed-point uniqueness and
//! regularity.
//!
//! Limit properties (completeness, almost-selfclosedness, left continuity)
//! hold automatically on a finite carrier, because a convergent sequence is
//! eventually constant at its limit. They are reported as such instead of
//! being tested.

use crate::chain::TRIVIAL_FINITE;
use crate::comparison::ComparisonFn;
use crate::metric::{FiniteMetricSpace, SelfMap};
use crate::relation::{rs_cover, Relation};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Witness {
    Point(usize),
    Pair(usize, usize),
}

impl Witness {
    pub fn render<D: Scalar>(&self, space: &FiniteMetricSpace<D>) -> String {
        match *self {
            Witness::Point(p) => space.id(p).to_string(),
            Witness::Pair(x, y) => format!("({},{})", space.id(x), space.id(y)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    fn from_witnesses(witnesses: Vec<Witness>) -> Self {
        Self { holds: witnesses.is_empty(), witnesses }
    }

    pub fn first_witness(&self) -> Option<Witness> {
        self.witnesses.first().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractivityReport {
    /// Over the given relation.
    pub relation: CheckReport,
    /// Over its reflexive symmetric cover; always agrees because `d` is
    /// symmetric and `φ(0) = 0`.
    pub symmetric_cover: CheckReport,
}

impl ContractivityReport {
    pub fn holds(&self) -> bool {
        self.relation.holds
    }

    pub fn covers_agree(&self) -> bool {
        self.relation.holds == self.symmetric_cover.holds
    }
}

/// `d(Tx, Ty) <= φ(d(x, y))` for every related pair.
pub fn check_contractive<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    r: &Relation,
    phi: &ComparisonFn,
) -> ContractivityReport {
    let violations = |rel: &Relation| {
        CheckReport::from_witnesses(
            rel.edges()
                .filter(|&(x, y)| *space.dist(t.apply(x), t.apply(y)) > phi.eval(space.dist(x, y)))
                .map(|(x, y)| Witness::Pair(x, y))
                .collect(),
        )
    };
    let report = ContractivityReport { relation: violations(r), symmetric_cover: violations(&rs_cover(r)) };
    debug_assert!(report.covers_agree());
    report
}

/// Convenience for `linear(λ)`.
pub fn check_lambda_contractive<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    r: &Relation,
    lambda: &Rational,
) -> ContractivityReport {
    check_contractive(space, t, r, &ComparisonFn::Linear(lambda.clone()))
}

/// `x r y ⟹ Tx r Ty`.
pub fn check_increasing(t: &SelfMap, r: &Relation) -> CheckReport {
    CheckReport::from_witnesses(
        r.edges()
            .filter(|&(x, y)| !r.contains(t.apply(x), t.apply(y)))
            .map(|(x, y)| Witness::Pair(x, y))
            .collect(),
    )
}

/// `X(T, R) = { x : x R Tx }`.
pub fn semi_progressive_points(t: &SelfMap, r: &Relation) -> Vec<usize> {
    (0..t.len()).filter(|&x| r.contains(x, t.apply(x))).collect()
}

/// Orbit behaviour of one related pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAsymptotics<D = Rational> {
    pub x: usize,
    pub y: usize,
    /// First `n` with `Tⁿx = Tⁿy`.
    pub merge_step: Option<usize>,
    /// `Σₙ d(Tⁿx, Tⁿy)`; `None` means the series diverges.
    pub telescopic_sum: Option<D>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport<D = Rational> {
    pub pairs: Vec<PairAsymptotics<D>>,
    pub strongly_asymptotic: bool,
}

impl<D> AsymptoticReport<D> {
    pub fn diverging(&self) -> impl Iterator<Item = &PairAsymptotics<D>> {
        self.pairs.iter().filter(|p| p.merge_step.is_none())
    }
}

/// On a finite carrier the pair orbit `(Tⁿx, Tⁿy)` is eventually periodic
/// within `n²` steps; if it has not merged by then it never does and the
/// periodic tail keeps a positive distance, so the sum diverges.
pub fn asymptotic_report<D: Scalar>(space: &FiniteMetricSpace<D>, t: &SelfMap, b: &Relation) -> AsymptoticReport<D> {
    let n = t.len();
    let limit = n * n;
    let pairs: Vec<PairAsymptotics<D>> = b
        .edges()
        .map(|(x, y)| {
            let (mut u, mut v) = (x, y);
            let mut sum = D::zero();
            let mut merge_step = None;
            for step in 0..=limit {
                if u == v {
                    merge_step = Some(step);
                    break;
                }
                sum = sum + space.dist(u, v).clone();
                u = t.apply(u);
                v = t.apply(v);
            }
            PairAsymptotics { x, y, merge_step, telescopic_sum: merge_step.map(|_| sum) }
        })
        .collect();
    let strongly_asymptotic = pairs.iter().all(|p| p.merge_step.is_some());
    AsymptoticReport { pairs, strongly_asymptotic }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixReport {
    /// Related fixed points coincide.
    pub asingleton: CheckReport,
    pub fixed_points: Vec<usize>,
}

impl FixReport {
    pub fn singleton(&self) -> bool {
        self.asingleton.holds && !self.fixed_points.is_empty()
    }
}

/// Fix(T) is `b`-asingleton: `z₁ b z₂` with both fixed implies `z₁ = z₂`.
pub fn fix_asingleton_check(t: &SelfMap, b: &Relation) -> FixReport {
    let fixed = t.fixed_points();
    let witnesses = fixed
        .iter()
        .flat_map(|&z1| fixed.iter().map(move |&z2| (z1, z2)))
        .filter(|&(z1, z2)| z1 != z2 && b.contains(z1, z2))
        .map(|(z1, z2)| Witness::Pair(z1, z2))
        .collect();
    FixReport { asingleton: CheckReport::from_witnesses(witnesses), fixed_points: fixed }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport<D = Rational> {
    /// Ascending Cauchy sequences converge.
    pub complete: &'static str,
    /// Ascending convergent sequences have a subsequence related to the limit.
    pub almost_selfclosed: &'static str,
    /// Smallest positive distance; a Cauchy sequence is eventually constant
    /// once its oscillation drops below it. `None` stands for `+∞`.
    pub min_positive_distance: Option<D>,
}

pub fn regularity_report<D: Scalar>(space: &FiniteMetricSpace<D>, _r: &Relation) -> RegularityReport<D> {
    RegularityReport {
        complete: TRIVIAL_FINITE,
        almost_selfclosed: TRIVIAL_FINITE,
        min_positive_distance: space.min_positive_distance(),
    }
}
