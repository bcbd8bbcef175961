//! Seeded random instances and the parallel soundness suite.
//!
//! Instance `i` of a run with master seed `s` is generated from seed `s + i`
//! alone, so any single instance can be regenerated from its report.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::comparison::{CatalogFn, ComparisonFn};
use crate::metric::{FiniteMetricSpace, SelfMap};
use crate::relation::{rs_cover, rt_cover, Relation};
use crate::scalar::{rat, Rational};
use crate::special::{verify_edelstein, verify_nieto_lopez};
use crate::theorem::{
    verify_ai_functional, verify_ai_linear_rs, verify_banach, verify_banach_bounded, verify_kirk, HarnessError,
    TheoremId, TheoremReport,
};

pub const DEFAULT_SEED: u64 = 0x5EED_2024;

/// Master seed, overridable through `RELFIX_SEED`.
pub fn master_seed() -> u64 {
    std::env::var("RELFIX_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub min_points: usize,
    pub max_points: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self { min_points: 1, max_points: 12 }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub seed: u64,
    pub space: FiniteMetricSpace,
    /// Reflexive.
    pub relation: Relation,
    pub map: SelfMap,
    /// Reflexive and transitive.
    pub order: Relation,
    /// In `(0, 1)`.
    pub lambda: Rational,
    /// Positive.
    pub epsilon: Rational,
    pub phi: ComparisonFn,
}

pub fn generate(seed: u64, cfg: &GeneratorConfig) -> GeneratedInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.min_points.max(1)..=cfg.max_points.max(cfg.min_points.max(1)));
    let space = random_space(&mut rng, n);
    let relation = random_relation(&mut rng, n);
    let map = random_map(&mut rng, &space);
    let order = random_order(&mut rng, n);
    let lambda = [rat(1, 4), rat(1, 2), rat(2, 3), rat(3, 4), rat(9, 10), rat(99, 100)]
        .choose(&mut rng)
        .cloned()
        .expect("non-empty");
    let epsilon = random_epsilon(&mut rng, &space);
    let phi = if rng.gen_bool(0.2) {
        ComparisonFn::Catalog(CatalogFn::TOverOnePlusT)
    } else {
        ComparisonFn::Linear(lambda.clone())
    };
    GeneratedInstance { seed, space, relation, map, order, lambda, epsilon, phi }
}

/// Points of the line or of the plane with the `ℓ¹` norm, on a rational grid.
pub fn random_space<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    let denom = *[1i64, 2, 3, 5].choose(rng).expect("non-empty");
    let ids = (0..n).map(|i| format!("p{i}")).collect();
    if rng.gen_bool(0.6) {
        let mut grid: Vec<i64> = (0..(4 * n as i64 + 4)).collect();
        grid.shuffle(rng);
        let coords: Vec<i64> = grid[..n].to_vec();
        FiniteMetricSpace::from_fn(ids, |i, j| rat((coords[i] - coords[j]).abs(), denom))
    } else {
        let side = 2 * n as i64 + 2;
        let mut grid: Vec<(i64, i64)> = (0..side).flat_map(|x| (0..side).map(move |y| (x, y))).collect();
        grid.shuffle(rng);
        let coords: Vec<(i64, i64)> = grid[..n].to_vec();
        FiniteMetricSpace::from_fn(ids, |i, j| {
            let (a, b) = (coords[i], coords[j]);
            rat((a.0 - b.0).abs() + (a.1 - b.1).abs(), denom)
        })
    }
}

/// Reflexive relation, from the identity to the full relation.
pub fn random_relation<R: Rng>(rng: &mut R, n: usize) -> Relation {
    match rng.gen_range(0..10) {
        0 => Relation::identity(n),
        1 => Relation::full(n),
        _ => {
            let p = *[0.1, 0.2, 0.35, 0.6].choose(rng).expect("non-empty");
            Relation::from_fn(n, |i, j| i == j || rng.gen_bool(p))
        }
    }
}

/// Quasi-order: a total order, the discrete order or the closure of a random relation.
pub fn random_order<R: Rng>(rng: &mut R, n: usize) -> Relation {
    match rng.gen_range(0..4) {
        0 => {
            let mut rank: Vec<usize> = (0..n).collect();
            rank.shuffle(rng);
            Relation::from_fn(n, |i, j| rank[i] <= rank[j])
        }
        1 => Relation::identity(n),
        _ => {
            let sparse = Relation::from_fn(n, |i, j| i == j || rng.gen_bool(0.15));
            rt_cover(&sparse)
        }
    }
}

/// Selfmap biased toward eventually constant orbits.
pub fn random_map<R: Rng>(rng: &mut R, space: &FiniteMetricSpace) -> SelfMap {
    let n = space.len();
    let table = match rng.gen_range(0..10) {
        0 | 1 => vec![rng.gen_range(0..n); n],
        2..=4 => {
            // move each point one step closer to a centre
            let centre = rng.gen_range(0..n);
            (0..n)
                .map(|x| {
                    (0..n)
                        .filter(|&y| space.dist(y, centre) < space.dist(x, centre))
                        .max_by(|&a, &b| space.dist(a, centre).cmp(space.dist(b, centre)).then(b.cmp(&a)))
                        .unwrap_or(x)
                })
                .collect()
        }
        5 | 6 => {
            let k = rng.gen_range(1..=n.min(3));
            let mut image: Vec<usize> = (0..n).collect();
            image.shuffle(rng);
            image.truncate(k);
            let mut table: Vec<usize> = (0..n).map(|_| *image.choose(rng).expect("non-empty")).collect();
            table[image[0]] = image[0];
            table
        }
        7 => (0..n).map(|x| if rng.gen_bool(0.5) { x } else { rng.gen_range(0..n) }).collect(),
        _ => (0..n).map(|_| rng.gen_range(0..n)).collect(),
    };
    SelfMap::new(table).expect("images drawn from the carrier")
}

fn random_epsilon<R: Rng>(rng: &mut R, space: &FiniteMetricSpace) -> Rational {
    match space.min_positive_distance() {
        None => rat(1, 1),
        Some(min) => {
            let factor = [rat(1, 2), rat(3, 2), rat(5, 2), rat(4, 1)].choose(rng).cloned().expect("non-empty");
            if rng.gen_bool(0.15) {
                space.diameter() + rat(1, 1)
            } else {
                min * factor
            }
        }
    }
}

/// Runs one theorem on one generated instance.
pub fn run_theorem(theorem: TheoremId, inst: &GeneratedInstance) -> Result<TheoremReport, HarnessError> {
    let (space, t) = (&inst.space, &inst.map);
    let report = match theorem {
        TheoremId::BanachMetric => verify_banach(space, t, &inst.lambda),
        TheoremId::BanachBounded => verify_banach_bounded(space, t, &inst.lambda),
        TheoremId::KirkAsymptotic => verify_kirk(space, t, &inst.relation),
        TheoremId::AlamImdadFunctional => verify_ai_functional(space, t, &inst.relation, &inst.phi),
        TheoremId::AlamImdadLinearSymmetric => verify_ai_linear_rs(space, t, &rs_cover(&inst.relation), &inst.lambda),
        TheoremId::Edelstein => verify_edelstein(space, t, &inst.epsilon, &inst.lambda),
        TheoremId::NietoLopez => verify_nieto_lopez(space, t, &inst.order, &inst.lambda),
    }?;
    Ok(report.with_seed(inst.seed))
}

#[derive(Debug, Clone)]
pub struct SuiteSummary {
    pub theorem: TheoremId,
    pub master_seed: u64,
    pub instances: usize,
    pub premises_held: usize,
    pub conclusions_held: usize,
    pub violations: Vec<TheoremReport>,
    /// `(seed, error)` for instances the harness rejected.
    pub errors: Vec<(u64, String)>,
}

impl SuiteSummary {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.errors.is_empty()
    }
}

/// Verifies `theorem` on instances with seeds `master_seed .. master_seed + count`.
pub fn run_suite(theorem: TheoremId, count: usize, master_seed: u64, cfg: &GeneratorConfig) -> SuiteSummary {
    let results: Vec<(u64, Result<TheoremReport, HarnessError>)> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let seed = master_seed.wrapping_add(i);
            (seed, run_theorem(theorem, &generate(seed, cfg)))
        })
        .collect();
    let mut summary = SuiteSummary {
        theorem,
        master_seed,
        instances: count,
        premises_held: 0,
        conclusions_held: 0,
        violations: Vec::new(),
        errors: Vec::new(),
    };
    for (seed, result) in results {
        match result {
            Ok(report) => {
                summary.premises_held += usize::from(report.premises_hold);
                summary.conclusions_held += usize::from(report.passed());
                if report.is_violation() {
                    summary.violations.push(report);
                }
            }
            Err(e) => summary.errors.push((seed, e.to_string())),
        }
    }
    summary
}
