//! Comparison functions φ and heuristic admissibility classification.
//!
//! Matkowski and Browder admissibility quantify over every sequence with
//! `t_{n+1} <= φ(t_n)`. For increasing φ the extremal sequence
//! `t_{n+1} = φ(t_n)` dominates all of them, so only that sequence is
//! iterated. A finite horizon can never prove either property; verdicts are
//! `Yes` (evidence found) or `NoEvidence`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhiError {
    #[error("φ is not regressive: φ({t}) = {value} >= {t}")]
    NotRegressive { t: f64, value: f64 },
    #[error("φ is not increasing: φ({s}) = {fs} > φ({t}) = {ft}")]
    NotIncreasing { s: f64, t: f64, fs: f64, ft: f64 },
    #[error("φ(0) = {0}, expected 0")]
    NonZeroAtOrigin(f64),
    #[error("sample points must be positive and finite, got {0}")]
    BadSample(f64),
    #[error("unknown comparison function {0:?} (expected linear:<λ>, t_over_1_plus_t or identity)")]
    Unknown(String),
    #[error("linear modulus must be a non-negative number, got {0:?}")]
    BadModulus(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogFn {
    /// `t / (1 + t)`
    TOverOnePlusT,
    /// `t`
    Identity,
}

impl CatalogFn {
    pub fn name(self) -> &'static str {
        match self {
            CatalogFn::TOverOnePlusT => "t_over_1_plus_t",
            CatalogFn::Identity => "identity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ComparisonFn {
    /// `λ·t`, `λ >= 0`
    Linear(Rational),
    Catalog(CatalogFn),
}

impl ComparisonFn {
    pub fn linear(lambda: Rational) -> Self {
        ComparisonFn::Linear(lambda)
    }

    /// Parses `linear:<λ>` (also `linear(<λ>)`), `t_over_1_plus_t`, `identity`.
    pub fn parse(spec: &str) -> Result<Self, PhiError> {
        let spec = spec.trim();
        let lambda = spec
            .strip_prefix("linear:")
            .or_else(|| spec.strip_prefix("linear(").and_then(|s| s.strip_suffix(')')));
        if let Some(lit) = lambda {
            return match parse_rational(lit) {
                Some(l) if l >= Rational::from_integer(0.into()) => Ok(ComparisonFn::Linear(l)),
                _ => Err(PhiError::BadModulus(lit.to_string())),
            };
        }
        match spec {
            "t_over_1_plus_t" | "t/(1+t)" => Ok(ComparisonFn::Catalog(CatalogFn::TOverOnePlusT)),
            "identity" => Ok(ComparisonFn::Catalog(CatalogFn::Identity)),
            _ => Err(PhiError::Unknown(spec.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ComparisonFn::Linear(l) => format!("linear:{}", format_rational(l)),
            ComparisonFn::Catalog(c) => c.name().to_string(),
        }
    }

    /// Linear modulus, if any.
    pub fn modulus(&self) -> Option<&Rational> {
        match self {
            ComparisonFn::Linear(l) => Some(l),
            ComparisonFn::Catalog(_) => None,
        }
    }

    pub fn eval<D: Scalar>(&self, t: &D) -> D {
        match self {
            ComparisonFn::Linear(l) => D::from_rational(l) * t.clone(),
            ComparisonFn::Catalog(CatalogFn::TOverOnePlusT) => t.clone() / (D::one() + t.clone()),
            ComparisonFn::Catalog(CatalogFn::Identity) => t.clone(),
        }
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.eval(&t)
    }

    /// Checks `φ(0) = 0`, regressivity and monotonicity at `samples`.
    pub fn check_in_re(&self, samples: &[f64]) -> Result<(), PhiError> {
        let at_zero = self.eval_f64(0.0);
        if at_zero != 0.0 {
            return Err(PhiError::NonZeroAtOrigin(at_zero));
        }
        let mut sorted = samples.to_vec();
        if let Some(&bad) = sorted.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(PhiError::BadSample(bad));
        }
        sorted.sort_by(f64::total_cmp);
        for &t in &sorted {
            let value = self.eval_f64(t);
            if value >= t {
                return Err(PhiError::NotRegressive { t, value });
            }
        }
        for w in sorted.windows(2) {
            let (fs, ft) = (self.eval_f64(w[0]), self.eval_f64(w[1]));
            if fs > ft {
                return Err(PhiError::NotIncreasing { s: w[0], t: w[1], fs, ft });
            }
        }
        Ok(())
    }
}

impl fmt::Display for ComparisonFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Yes,
    NoEvidence,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::NoEvidence => "no-evidence",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyOptions {
    pub horizon: usize,
    pub tail_tolerance: f64,
    pub sample_points: Vec<f64>,
    /// Smallest relative descent over the last quarter of the horizon that
    /// still counts as progress towards zero.
    pub stall_threshold: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            horizon: 10_000,
            tail_tolerance: 1e-12,
            sample_points: vec![0.1, 1.0, 10.0, 1000.0],
            stall_threshold: 1e-6,
        }
    }
}

/// What the extremal sequence from one sample point looked like.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleEvidence {
    pub start: f64,
    pub steps: usize,
    pub last: f64,
    pub partial_sum: f64,
    /// Largest `t_{n+1} / t_n` over the last quarter of the orbit.
    pub max_tail_ratio: f64,
    /// `(t_{3N/4} - t_N) / t_N`
    pub relative_descent: f64,
    pub matkowski: Verdict,
    pub browder: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub phi: String,
    pub matkowski: Verdict,
    pub browder: Verdict,
    pub heuristic: bool,
    pub samples: Vec<SampleEvidence>,
}

pub fn classify_phi(phi: &ComparisonFn, opts: &ClassifyOptions) -> Result<Admissibility, PhiError> {
    phi.check_in_re(&opts.sample_points)?;
    let samples: Vec<SampleEvidence> = opts.sample_points.iter().map(|&t| extremal_evidence(phi, t, opts)).collect();
    let all = |pick: fn(&SampleEvidence) -> Verdict| {
        if samples.iter().all(|s| pick(s) == Verdict::Yes) {
            Verdict::Yes
        } else {
            Verdict::NoEvidence
        }
    };
    Ok(Admissibility {
        phi: phi.name(),
        matkowski: all(|s| s.matkowski),
        browder: all(|s| s.browder),
        heuristic: true,
        samples,
    })
}

fn extremal_evidence(phi: &ComparisonFn, start: f64, opts: &ClassifyOptions) -> SampleEvidence {
    let mut orbit = Vec::with_capacity(opts.horizon.min(1 << 16) + 1);
    orbit.push(start);
    let mut t = start;
    // stop at underflow: below MIN_POSITIVE the arithmetic no longer tracks φ
    while orbit.len() <= opts.horizon && t >= f64::MIN_POSITIVE {
        t = phi.eval_f64(t);
        orbit.push(t);
    }
    let last = orbit[orbit.len() - 1];
    let partial_sum: f64 = orbit.iter().sum();

    let normal: Vec<f64> = orbit.iter().copied().take_while(|v| *v >= f64::MIN_POSITIVE).collect();
    let window_len = (normal.len() / 4).max(2).min(normal.len());
    let window = &normal[normal.len() - window_len..];
    let max_tail_ratio = window.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    let relative_descent = match (window.first(), window.last()) {
        (Some(first), Some(end)) if *end > 0.0 => (first - end) / end,
        _ => f64::INFINITY,
    };

    let matkowski = if last <= opts.tail_tolerance || relative_descent > opts.stall_threshold {
        Verdict::Yes
    } else {
        Verdict::NoEvidence
    };

    let underflowed = last < f64::MIN_POSITIVE;
    let window_end = window.last().copied().unwrap_or(0.0);
    let tail_bound = if max_tail_ratio < 1.0 {
        window_end * max_tail_ratio / (1.0 - max_tail_ratio)
    } else {
        f64::INFINITY
    };
    let browder = if (underflowed && max_tail_ratio < 1.0)
        || tail_bound <= opts.tail_tolerance * partial_sum.max(1.0)
    {
        Verdict::Yes
    } else {
        Verdict::NoEvidence
    };

    SampleEvidence {
        start,
        steps: orbit.len() - 1,
        last,
        partial_sum,
        max_tail_ratio,
        relative_descent,
        matkowski,
        browder,
    }
}
