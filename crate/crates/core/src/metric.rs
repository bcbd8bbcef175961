//! Finite metric spaces and selfmaps over them.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("distance matrix has {rows} rows for {points} points")]
    ShapeMismatch { points: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {points}")]
    RaggedRow { row: usize, len: usize, points: usize },
    #[error("duplicate point id {0:?}")]
    DuplicateId(String),
    #[error("carrier must have at least one point")]
    EmptyCarrier,
    #[error("distance matrix is not a metric: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("point {point} maps to {image}, outside a carrier of {n} points")]
    OutOfRange { point: usize, image: usize, n: usize },
    #[error("point {point} maps outside the restricted point set")]
    NotInvariant { point: usize },
}

/// A violated metric axiom with its witness (point indices).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    Negative { i: usize, j: usize },
    NonFinite { i: usize, j: usize },
    NonZeroDiagonal { i: usize },
    Asymmetric { i: usize, j: usize },
    /// `d(i, j) > d(i, k) + d(k, j)`
    Triangle { i: usize, k: usize, j: usize },
    /// `d(i, j) = 0` with `i != j`
    NotSufficient { i: usize, j: usize },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::Negative { .. } => "non-negative",
            Violation::NonFinite { .. } => "finite",
            Violation::NonZeroDiagonal { .. } => "reflexive",
            Violation::Asymmetric { .. } => "symmetric",
            Violation::Triangle { .. } => "triangular",
            Violation::NotSufficient { .. } => "sufficient",
        }
    }

    pub fn witness(&self) -> Vec<usize> {
        match *self {
            Violation::NonZeroDiagonal { i } => vec![i],
            Violation::Negative { i, j }
            | Violation::NonFinite { i, j }
            | Violation::Asymmetric { i, j }
            | Violation::NotSufficient { i, j } => vec![i, j],
            Violation::Triangle { i, k, j } => vec![i, k, j],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Point ids plus a dense distance matrix. Construction only checks the
/// shape; use [`FiniteMetricSpace::validate`] for the axioms.
#[derive(Clone, PartialEq)]
pub struct FiniteMetricSpace<D = Rational> {
    ids: Vec<String>,
    dist: Vec<D>,
}

impl<D: Scalar> FiniteMetricSpace<D> {
    pub fn new(ids: Vec<String>, rows: Vec<Vec<D>>) -> Result<Self, MetricError> {
        let n = ids.len();
        if n == 0 {
            return Err(MetricError::EmptyCarrier);
        }
        if rows.len() != n {
            return Err(MetricError::ShapeMismatch { points: n, rows: rows.len() });
        }
        let mut seen = HashMap::with_capacity(n);
        for (k, id) in ids.iter().enumerate() {
            if seen.insert(id.as_str(), k).is_some() {
                return Err(MetricError::DuplicateId(id.clone()));
            }
        }
        let mut dist = Vec::with_capacity(n * n);
        for (row, entries) in rows.into_iter().enumerate() {
            if entries.len() != n {
                return Err(MetricError::RaggedRow { row, len: entries.len(), points: n });
            }
            dist.extend(entries);
        }
        Ok(Self { ids, dist })
    }

    /// Like [`FiniteMetricSpace::new`] but also rejects matrices that fail
    /// any metric axiom.
    pub fn checked(ids: Vec<String>, rows: Vec<Vec<D>>) -> Result<Self, MetricError> {
        let space = Self::new(ids, rows)?;
        let report = space.validate();
        match report.violations.first() {
            None => Ok(space),
            Some(v) => Err(MetricError::Invalid(space.describe(v))),
        }
    }

    /// Points on the real line with `d(x, y) = |x - y|`, ids `p0, p1, ...`.
    pub fn on_line(coords: &[D]) -> Self {
        let ids = (0..coords.len()).map(|k| format!("p{k}")).collect();
        Self::from_fn(ids, |i, j| abs_diff(&coords[i], &coords[j]))
    }

    pub fn from_fn(ids: Vec<String>, mut f: impl FnMut(usize, usize) -> D) -> Self {
        let n = ids.len();
        let mut dist = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                dist.push(f(i, j));
            }
        }
        Self { ids, dist }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|p| p == id)
    }

    pub fn dist(&self, i: usize, j: usize) -> &D {
        &self.dist[i * self.len() + j]
    }

    pub fn rows(&self) -> Vec<Vec<D>> {
        self.dist.chunks(self.len()).map(<[D]>::to_vec).collect()
    }

    /// Sub-space on `points` (re-indexed by position), keeping the ids.
    pub fn restrict(&self, points: &[usize]) -> Self {
        let ids = points.iter().map(|&p| self.ids[p].clone()).collect();
        Self::from_fn(ids, |i, j| self.dist(points[i], points[j]).clone())
    }

    /// Checks every metric axiom and lists each violation with a witness.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let zero = D::zero();
        let mut violations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let dij = self.dist(i, j);
                if !dij.is_finite() {
                    violations.push(Violation::NonFinite { i, j });
                    continue;
                }
                if *dij < zero {
                    violations.push(Violation::Negative { i, j });
                }
                if i == j {
                    if !dij.is_zero() {
                        violations.push(Violation::NonZeroDiagonal { i });
                    }
                    continue;
                }
                if i < j && dij != self.dist(j, i) {
                    violations.push(Violation::Asymmetric { i, j });
                }
                if i < j && dij.is_zero() {
                    violations.push(Violation::NotSufficient { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if k == i || k == j || i == j {
                        continue;
                    }
                    let via = self.dist(i, k).clone() + self.dist(k, j).clone();
                    if *self.dist(i, j) > via {
                        violations.push(Violation::Triangle { i, k, j });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Renders a violation with point ids.
    pub fn describe(&self, v: &Violation) -> String {
        let ids: Vec<&str> = v.witness().into_iter().map(|k| self.id(k)).collect();
        match v {
            Violation::Triangle { i, k, j } => format!(
                "triangular: d({a},{c}) = {} > d({a},{b}) + d({b},{c}) = {}",
                self.dist(*i, *j),
                self.dist(*i, *k).clone() + self.dist(*k, *j).clone(),
                a = ids[0],
                b = ids[1],
                c = ids[2],
            ),
            Violation::Asymmetric { i, j } => format!(
                "symmetric: d({a},{b}) = {} but d({b},{a}) = {}",
                self.dist(*i, *j),
                self.dist(*j, *i),
                a = ids[0],
                b = ids[1],
            ),
            _ => format!("{}: witness ({})", v.axiom(), ids.join(",")),
        }
    }

    /// Largest pairwise distance; zero on a singleton.
    pub fn diameter(&self) -> D {
        self.dist.iter().fold(D::zero(), |best, d| if *d > best { d.clone() } else { best })
    }

    /// Smallest positive pairwise distance, `None` on a singleton.
    pub fn min_positive_distance(&self) -> Option<D> {
        let zero = D::zero();
        self.dist.iter().filter(|d| **d > zero).fold(None, |best, d| match best {
            Some(b) if b <= *d => Some(b),
            _ => Some(d.clone()),
        })
    }
}

impl<D: Scalar> fmt::Debug for FiniteMetricSpace<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMetricSpace")
            .field("ids", &self.ids)
            .field("dist", &self.rows())
            .finish()
    }
}

pub(crate) fn abs_diff<D: Scalar>(a: &D, b: &D) -> D {
    if a >= b {
        a.clone() - b.clone()
    } else {
        b.clone() - a.clone()
    }
}

/// Total selfmap given by its table: point `i` maps to `table[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelfMap {
    table: Vec<usize>,
}

impl SelfMap {
    pub fn new(table: Vec<usize>) -> Result<Self, MapError> {
        let n = table.len();
        if let Some((point, &image)) = table.iter().enumerate().find(|(_, &t)| t >= n) {
            return Err(MapError::OutOfRange { point, image, n });
        }
        Ok(Self { table })
    }

    pub fn identity(n: usize) -> Self {
        Self { table: (0..n).collect() }
    }

    pub fn constant(n: usize, target: usize) -> Self {
        assert!(target < n, "constant target {target} outside carrier of {n}");
        Self { table: vec![target; n] }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `Fix(T)` in increasing order.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.table[i] == i).collect()
    }

    /// `T^k(i)`.
    pub fn iterate(&self, mut i: usize, k: usize) -> usize {
        for _ in 0..k {
            i = self.table[i];
        }
        i
    }

    pub fn is_invariant(&self, points: &[usize]) -> bool {
        points.iter().all(|&p| points.contains(&self.table[p]))
    }

    /// Restriction to an invariant point set, re-indexed by position.
    pub fn restrict(&self, points: &[usize]) -> Result<SelfMap, MapError> {
        points
            .iter()
            .map(|&p| {
                points
                    .iter()
                    .position(|&q| q == self.table[p])
                    .ok_or(MapError::NotInvariant { point: p })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|table| SelfMap { table })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ids(n: usize) -> Vec<String> {
        ["a", "b", "c", "d"].iter().take(n).map(|s| s.to_string()).collect()
    }

    fn matrix(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect()
    }

    pub(crate) fn line3() -> FiniteMetricSpace {
        FiniteMetricSpace::new(ids(3), matrix(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]])).unwrap()
    }

    #[test]
    fn line_metric_is_valid() {
        assert!(line3().validate().is_valid());
    }

    #[test]
    fn triangle_violation_has_witness() {
        let s = FiniteMetricSpace::new(ids(3), matrix(&[&[0, 1, 5], &[1, 0, 1], &[5, 1, 0]])).unwrap();
        let report = s.validate();
        assert!(report.violations.contains(&Violation::Triangle { i: 0, k: 1, j: 2 }));
        assert!(report.violations.iter().all(|v| matches!(v, Violation::Triangle { .. })));
    }

    #[test]
    fn sufficiency_violation() {
        let s = FiniteMetricSpace::new(ids(2), matrix(&[&[0, 0], &[0, 0]])).unwrap();
        assert_eq!(s.validate().violations, vec![Violation::NotSufficient { i: 0, j: 1 }]);
    }

    #[test]
    fn asymmetry_and_diagonal() {
        let s = FiniteMetricSpace::new(ids(2), matrix(&[&[1, 2], &[3, 0]])).unwrap();
        let v = s.validate().violations;
        assert!(v.contains(&Violation::NonZeroDiagonal { i: 0 }));
        assert!(v.contains(&Violation::Asymmetric { i: 0, j: 1 }));
        assert!(s.describe(&Violation::Asymmetric { i: 0, j: 1 }).contains("d(a,b) = 2 but d(b,a) = 3"));
    }

    #[test]
    fn shape_mismatch() {
        let err = FiniteMetricSpace::new(ids(3), matrix(&[&[0, 1], &[1, 0]])).unwrap_err();
        assert_eq!(err, MetricError::ShapeMismatch { points: 3, rows: 2 });
        let err = FiniteMetricSpace::new(ids(2), matrix(&[&[0, 1], &[1]])).unwrap_err();
        assert!(matches!(err, MetricError::RaggedRow { row: 1, .. }));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = FiniteMetricSpace::new(vec!["a".into(), "a".into()], matrix(&[&[0, 1], &[1, 0]])).unwrap_err();
        assert_eq!(err, MetricError::DuplicateId("a".into()));
    }

    #[test]
    fn diameter_examples() {
        let single = FiniteMetricSpace::new(ids(1), matrix(&[&[0]])).unwrap();
        assert_eq!(single.diameter(), rat(0, 1));
        assert_eq!(line3().diameter(), rat(2, 1));
        let tenths = FiniteMetricSpace::on_line(&[rat(0, 1), rat(2, 5), rat(4, 5)]);
        assert_eq!(tenths.diameter(), rat(4, 5));
    }

    #[test]
    fn min_positive_distance() {
        assert_eq!(line3().min_positive_distance(), Some(rat(1, 1)));
        let single = FiniteMetricSpace::new(ids(1), matrix(&[&[0]])).unwrap();
        assert_eq!(single.min_positive_distance(), None);
    }

    #[test]
    fn float_backend_validates() {
        let s = FiniteMetricSpace::<f64>::on_line(&[0.0, 0.4, 0.8]);
        assert!(s.validate().is_valid());
        assert!((s.diameter() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(SelfMap::identity(3).fixed_points(), vec![0, 1, 2]);
        assert_eq!(SelfMap::constant(3, 1).fixed_points(), vec![1]);
        assert!(SelfMap::new(vec![1, 0]).unwrap().fixed_points().is_empty());
    }

    #[test]
    fn selfmap_must_be_total() {
        assert_eq!(SelfMap::new(vec![0, 3]), Err(MapError::OutOfRange { point: 1, image: 3, n: 2 }));
    }

    #[test]
    fn restriction() {
        let t = SelfMap::new(vec![1, 1, 0, 3]).unwrap();
        assert_eq!(t.restrict(&[0, 1]).unwrap().table(), &[1, 1]);
        assert_eq!(t.restrict(&[2, 3]), Err(MapError::NotInvariant { point: 2 }));
    }
}
