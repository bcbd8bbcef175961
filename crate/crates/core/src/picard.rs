//! Picard iteration: exact orbits of finite selfmaps and tolerance-driven
//! iteration of real vector maps.

use thiserror::Error;

use crate::analysis::{semi_progressive_points, CheckReport, Witness};
use crate::metric::SelfMap;
use crate::relation::Relation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Converged(usize),
    Cycle { period: usize },
}

/// Orbit `x, Tx, T²x, …` up to (excluding) the first repeated point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicardTrace {
    pub start: usize,
    pub orbit: Vec<usize>,
    pub outcome: Outcome,
    pub steps: usize,
}

impl PicardTrace {
    pub fn limit(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Converged(z) => Some(z),
            Outcome::Cycle { .. } => None,
        }
    }
}

/// Iterates until a point repeats, which happens within `n + 1` steps.
pub fn orbit(t: &SelfMap, x: usize) -> PicardTrace {
    let mut seen = vec![usize::MAX; t.len()];
    let mut orbit = vec![x];
    seen[x] = 0;
    loop {
        let last = orbit[orbit.len() - 1];
        let next = t.apply(last);
        if seen[next] != usize::MAX {
            let outcome = if next == last {
                Outcome::Converged(last)
            } else {
                Outcome::Cycle { period: orbit.len() - seen[next] }
            };
            return PicardTrace { start: x, steps: orbit.len() - 1, orbit, outcome };
        }
        seen[next] = orbit.len();
        orbit.push(next);
    }
}

/// Every orbit started in `X(T, R)` converges to a fixed point. Vacuously
/// true when `X(T, R)` is empty. Witnesses are non-converging starts.
pub fn is_strongly_picard(t: &SelfMap, r: &Relation) -> CheckReport {
    let witnesses: Vec<Witness> = semi_progressive_points(t, r)
        .into_iter()
        .filter(|&x| orbit(t, x).limit().is_none())
        .map(Witness::Point)
        .collect();
    CheckReport { holds: witnesses.is_empty(), witnesses }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Norm {
    #[default]
    Max,
    Euclidean,
}

impl Norm {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Norm::Max => diffs.fold(0.0, f64::max),
            Norm::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PicardError {
    #[error("map produced a non-finite coordinate at iteration {iteration}")]
    NonFiniteValue { iteration: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("max_iter must be at least 1")]
    NoIterations,
    #[error("modulus must lie in [0, 1), got {0}")]
    BadModulus(f64),
    #[error("map changed dimension from {expected} to {got}")]
    DimensionChanged { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptions {
    pub norm: Norm,
    pub tol: f64,
    pub max_iter: usize,
    /// Contraction modulus, enabling the a posteriori error bound.
    pub lambda: Option<f64>,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self { norm: Norm::Max, tol: 1e-12, max_iter: 10_000, lambda: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericStatus {
    Converged,
    MaxIterReached,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericTrace {
    /// `x₀, x₁, …`
    pub iterates: Vec<Vec<f64>>,
    /// `step_norms[k] = d(x_k, x_{k+1})`
    pub step_norms: Vec<f64>,
    /// `bounds[k] = λ/(1-λ) · step_norms[k]`, a bound on `d(x_{k+1}, x*)`
    /// for a λ-contraction.
    pub bounds: Option<Vec<f64>>,
    pub status: NumericStatus,
}

impl NumericTrace {
    pub fn last(&self) -> &[f64] {
        &self.iterates[self.iterates.len() - 1]
    }

    pub fn iterations(&self) -> usize {
        self.step_norms.len()
    }

    pub fn a_posteriori_bound(&self) -> Option<f64> {
        self.bounds.as_ref().and_then(|b| b.last().copied())
    }
}

/// Iterates `map` from `x0` until a step is shorter than `tol` or
/// `max_iter` steps have been taken.
pub fn numeric_picard<F>(map: F, x0: &[f64], opts: &NumericOptions) -> Result<NumericTrace, PicardError>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if !(opts.tol > 0.0) {
        return Err(PicardError::BadTolerance(opts.tol));
    }
    if opts.max_iter == 0 {
        return Err(PicardError::NoIterations);
    }
    if let Some(l) = opts.lambda {
        if !(0.0..1.0).contains(&l) {
            return Err(PicardError::BadModulus(l));
        }
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(PicardError::NonFiniteValue { iteration: 0 });
    }

    let factor = opts.lambda.map(|l| l / (1.0 - l));
    let mut iterates = vec![x0.to_vec()];
    let mut step_norms = Vec::new();
    let mut bounds = factor.map(|_| Vec::new());
    let mut status = NumericStatus::MaxIterReached;
    for iteration in 1..=opts.max_iter {
        let current = &iterates[iterates.len() - 1];
        let next = map(current);
        if next.len() != current.len() {
            return Err(PicardError::DimensionChanged { expected: current.len(), got: next.len() });
        }
        if next.iter().any(|v| !v.is_finite()) {
            return Err(PicardError::NonFiniteValue { iteration });
        }
        let step = opts.norm.distance(current, &next);
        step_norms.push(step);
        if let (Some(b), Some(f)) = (bounds.as_mut(), factor) {
            b.push(f * step);
        }
        iterates.push(next);
        if step < opts.tol {
            status = NumericStatus::Converged;
            break;
        }
    }
    Ok(NumericTrace { iterates, step_norms, bounds, status })
}

/// Named maps for the command line.
pub fn catalog_map(name: &str) -> Option<fn(&[f64]) -> Vec<f64>> {
    fn cos(x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| v.cos()).collect()
    }
    fn half(x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| 0.5 * v).collect()
    }
    fn shift(x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| v + 1.0).collect()
    }
    match name {
        "cos" => Some(cos),
        "half" => Some(half),
        "shift" => Some(shift),
        _ => None,
    }
}

pub const CATALOG_MAPS: &[&str] = &["cos", "half", "shift"];
