//! Finite binary relations over an indexed carrier `0..n`.
//!
//! Relations are dense boolean matrices. Closures use the Warshall scheme,
//! which is cubic but trivial at the carrier sizes this crate targets.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("edge ({0}, {1}) is outside a carrier of {2} points")]
    OutOfRange(usize, usize, usize),
    #[error("relations are over different carriers ({0} vs {1} points)")]
    CarrierMismatch(usize, usize),
    #[error("relation is not reflexive: ({0}, {0}) missing")]
    NotReflexive(usize),
    #[error("relation is not symmetric: ({0}, {1}) present but ({1}, {0}) missing")]
    NotSymmetric(usize, usize),
    #[error("relation is not transitive: ({0}, {1}) and ({1}, {2}) present but ({0}, {2}) missing")]
    NotTransitive(usize, usize, usize),
    #[error("relation is not an equivalence: {0}")]
    NotEquivalence(Box<RelationError>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Self { n, bits: vec![false; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.bits[i * n + i] = true;
        }
        r
    }

    pub fn full(n: usize) -> Self {
        Self { n, bits: vec![true; n * n] }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Self::empty(n);
        for (i, j) in edges {
            r.insert(i, j)?;
        }
        Ok(r)
    }

    /// `edges` plus the diagonal.
    pub fn reflexive_from_edges<I>(n: usize, edges: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut r = Self::from_edges(n, edges)?;
        r.add_identity();
        Ok(r)
    }

    pub fn from_fn(n: usize, mut related: impl FnMut(usize, usize) -> bool) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                r.bits[i * n + j] = related(i, j);
            }
        }
        r
    }

    pub fn carrier_size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.bits[i * self.n + j]
    }

    pub fn insert(&mut self, i: usize, j: usize) -> Result<bool, RelationError> {
        if i >= self.n || j >= self.n {
            return Err(RelationError::OutOfRange(i, j, self.n));
        }
        let slot = &mut self.bits[i * self.n + j];
        let added = !*slot;
        *slot = true;
        Ok(added)
    }

    pub fn add_identity(&mut self) {
        for i in 0..self.n {
            self.bits[i * self.n + i] = true;
        }
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// Edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(move |(k, _)| (k / n, k % n))
    }

    /// Off-diagonal edges in row-major order.
    pub fn proper_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges().filter(|(i, j)| i != j)
    }

    /// `{ y : x r y }`
    pub fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&y| self.contains(x, y))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.contains(j, i))
    }

    pub fn union(&self, other: &Relation) -> Result<Self, RelationError> {
        self.same_carrier(other)?;
        Ok(Self {
            n: self.n,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect(),
        })
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    /// Relation restricted to `points`, re-indexed by position in `points`.
    pub fn restrict(&self, points: &[usize]) -> Self {
        Self::from_fn(points.len(), |i, j| self.contains(points[i], points[j]))
    }

    pub fn check_reflexive(&self) -> Result<(), RelationError> {
        match (0..self.n).find(|&i| !self.contains(i, i)) {
            Some(i) => Err(RelationError::NotReflexive(i)),
            None => Ok(()),
        }
    }

    pub fn check_symmetric(&self) -> Result<(), RelationError> {
        match self.edges().find(|&(i, j)| !self.contains(j, i)) {
            Some((i, j)) => Err(RelationError::NotSymmetric(i, j)),
            None => Ok(()),
        }
    }

    pub fn check_transitive(&self) -> Result<(), RelationError> {
        for (i, j) in self.edges() {
            for k in self.successors(j) {
                if !self.contains(i, k) {
                    return Err(RelationError::NotTransitive(i, j, k));
                }
            }
        }
        Ok(())
    }

    pub fn check_equivalence(&self) -> Result<(), RelationError> {
        self.check_reflexive()
            .and_then(|_| self.check_symmetric())
            .and_then(|_| self.check_transitive())
            .map_err(|e| RelationError::NotEquivalence(Box::new(e)))
    }

    pub fn is_reflexive(&self) -> bool {
        self.check_reflexive().is_ok()
    }

    pub fn is_symmetric(&self) -> bool {
        self.check_symmetric().is_ok()
    }

    pub fn is_transitive(&self) -> bool {
        self.check_transitive().is_ok()
    }

    pub fn is_equivalence(&self) -> bool {
        self.check_equivalence().is_ok()
    }

    fn same_carrier(&self, other: &Relation) -> Result<(), RelationError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(RelationError::CarrierMismatch(self.n, other.n))
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Sequence of at least two points joined by edges of some relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    points: Vec<usize>,
}

impl Chain {
    /// Returns `None` when `points` has fewer than two entries or some
    /// consecutive pair is not an edge of `r`.
    pub fn new(points: Vec<usize>, r: &Relation) -> Option<Self> {
        (points.len() >= 2 && is_ascending(&points, r)).then_some(Self { points })
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn source(&self) -> usize {
        self.points[0]
    }

    pub fn target(&self) -> usize {
        self.points[self.points.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = vec![false; self.points.iter().max().map_or(0, |m| m + 1)];
        self.points.iter().all(|&p| !std::mem::replace(&mut seen[p], true))
    }
}

/// Reflexive symmetric cover `r ∪ r⁻¹ ∪ Δ`.
pub fn rs_cover(r: &Relation) -> Relation {
    let mut out = Relation::from_fn(r.n, |i, j| r.contains(i, j) || r.contains(j, i));
    out.add_identity();
    out
}

/// Reflexive transitive cover. The identity is included, which coincides
/// with the union of positive powers whenever `r` is reflexive.
pub fn rt_cover(r: &Relation) -> Relation {
    let n = r.n;
    let mut out = r.clone();
    out.add_identity();
    for k in 0..n {
        for i in 0..n {
            if !out.bits[i * n + k] {
                continue;
            }
            for j in 0..n {
                if out.bits[k * n + j] {
                    out.bits[i * n + j] = true;
                }
            }
        }
    }
    out
}

/// The equivalence generated by `r`: `rt_cover(rs_cover(r))`.
pub fn s_omega(r: &Relation) -> Relation {
    let out = rt_cover(&rs_cover(r));
    debug_assert!(out.is_equivalence());
    out
}

/// Equivalence class of `x`, in increasing index order.
pub fn equivalence_class(e: &Relation, x: usize) -> Result<Vec<usize>, RelationError> {
    e.check_equivalence()?;
    if x >= e.n {
        return Err(RelationError::OutOfRange(x, x, e.n));
    }
    Ok(e.successors(x).collect())
}

/// All classes of an equivalence, ordered by smallest member.
pub fn equivalence_classes(e: &Relation) -> Result<Vec<Vec<usize>>, RelationError> {
    e.check_equivalence()?;
    let mut assigned = vec![false; e.n];
    let mut classes = Vec::new();
    for x in 0..e.n {
        if assigned[x] {
            continue;
        }
        let class: Vec<usize> = e.successors(x).collect();
        for &y in &class {
            assigned[y] = true;
        }
        classes.push(class);
    }
    Ok(classes)
}

/// Every `r`-chain from `x` to `y` with at most `max_len` points. Points may
/// repeat, so the output grows exponentially in `max_len`.
pub fn enumerate_chains(r: &Relation, x: usize, y: usize, max_len: usize) -> Vec<Chain> {
    let mut out = Vec::new();
    if x >= r.n || y >= r.n || max_len < 2 {
        return out;
    }
    let mut path = vec![x];
    walk(r, y, max_len, false, &mut path, &mut vec![false; r.n], &mut out);
    out
}

/// Like [`enumerate_chains`] but only chains that visit each point once,
/// plus the chain `(x, x)` when `x == y` and `x r x`.
pub fn enumerate_simple_chains(r: &Relation, x: usize, y: usize, max_len: usize) -> Vec<Chain> {
    let mut out = Vec::new();
    if x >= r.n || y >= r.n || max_len < 2 {
        return out;
    }
    if x == y {
        if r.contains(x, x) {
            out.push(Chain { points: vec![x, x] });
        }
        return out;
    }
    let mut on_path = vec![false; r.n];
    on_path[x] = true;
    let mut path = vec![x];
    walk(r, y, max_len, true, &mut path, &mut on_path, &mut out);
    out
}

fn walk(
    r: &Relation,
    target: usize,
    max_len: usize,
    simple: bool,
    path: &mut Vec<usize>,
    on_path: &mut Vec<bool>,
    out: &mut Vec<Chain>,
) {
    if path.len() == max_len {
        return;
    }
    let last = path[path.len() - 1];
    for next in 0..r.n {
        if !r.contains(last, next) || (simple && on_path[next]) {
            continue;
        }
        path.push(next);
        if next == target {
            out.push(Chain { points: path.clone() });
        }
        // a simple chain ends at its first visit to the target
        if !(simple && next == target) {
            on_path[next] = true;
            walk(r, target, max_len, simple, path, on_path, out);
            on_path[next] = false;
        }
        path.pop();
    }
}

/// True iff every consecutive pair of `seq` is an edge of `r`.
pub fn is_ascending(seq: &[usize], r: &Relation) -> bool {
    seq.windows(2).all(|w| r.contains(w[0], w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;

    fn refl(n: usize, edges: &[(usize, usize)]) -> Relation {
        Relation::reflexive_from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn rs_cover_examples() {
        assert_eq!(rs_cover(&Relation::identity(3)), Relation::identity(3));
        assert_eq!(rs_cover(&Relation::full(3)), Relation::full(3));
        assert_eq!(rs_cover(&refl(3, &[(A, B)])), refl(3, &[(A, B), (B, A)]));
    }

    #[test]
    fn rt_cover_examples() {
        assert_eq!(rt_cover(&refl(3, &[(A, B), (B, C)])), refl(3, &[(A, B), (B, C), (A, C)]));
        assert_eq!(rt_cover(&Relation::identity(4)), Relation::identity(4));
        assert_eq!(rt_cover(&Relation::full(4)), Relation::full(4));
    }

    #[test]
    fn rt_cover_matches_positive_powers_on_reflexive_input() {
        // union of r^n for n >= 1, computed by repeated composition
        let r = refl(4, &[(0, 1), (1, 2), (3, 0)]);
        let mut power = r.clone();
        let mut acc = r.clone();
        for _ in 0..4 {
            power = Relation::from_fn(4, |i, j| (0..4).any(|k| power.contains(i, k) && r.contains(k, j)));
            acc = acc.union(&power).unwrap();
        }
        assert_eq!(rt_cover(&r), acc);
    }

    #[test]
    fn s_omega_examples() {
        assert_eq!(s_omega(&refl(3, &[(A, B), (B, C)])), Relation::full(3));
        assert_eq!(s_omega(&Relation::identity(2)), Relation::identity(2));
        let e = s_omega(&refl(3, &[(A, B)]));
        assert_eq!(equivalence_classes(&e).unwrap(), vec![vec![A, B], vec![C]]);
    }

    #[test]
    fn equivalence_class_examples() {
        assert_eq!(equivalence_class(&Relation::identity(2), 1).unwrap(), vec![1]);
        assert_eq!(equivalence_class(&Relation::full(3), 2).unwrap(), vec![0, 1, 2]);
        let e = s_omega(&refl(3, &[(A, B)]));
        assert_eq!(equivalence_class(&e, A).unwrap(), vec![A, B]);
    }

    #[test]
    fn equivalence_class_rejects_non_equivalence() {
        let err = equivalence_class(&refl(3, &[(A, B)]), A).unwrap_err();
        assert!(matches!(err, RelationError::NotEquivalence(inner) if *inner == RelationError::NotSymmetric(A, B)));
        let err = equivalence_class(&Relation::empty(2), 0).unwrap_err();
        assert!(matches!(err, RelationError::NotEquivalence(_)));
    }

    #[test]
    fn enumerate_chains_examples() {
        let r = rs_cover(&refl(3, &[(A, B), (B, C)]));
        let chains = enumerate_chains(&r, A, C, 3);
        assert!(chains.iter().any(|c| c.points() == [A, B, C]));
        assert!(chains.iter().all(|c| c.source() == A && c.target() == C && c.len() <= 3));

        let chains = enumerate_chains(&r, B, B, 2);
        assert_eq!(chains.iter().map(|c| c.points().to_vec()).collect::<Vec<_>>(), vec![vec![B, B]]);

        let split = refl(3, &[(A, B)]);
        assert!(enumerate_chains(&split, A, C, 6).is_empty());
    }

    #[test]
    fn enumerate_chains_allows_repeats() {
        let r = rs_cover(&refl(2, &[(A, B)]));
        // (a,b), (a,a,b), (a,b,b) within three points
        let mut got: Vec<_> = enumerate_chains(&r, A, B, 3).into_iter().map(|c| c.points().to_vec()).collect();
        got.sort();
        assert_eq!(got, vec![vec![A, A, B], vec![A, B], vec![A, B, B]]);
        assert_eq!(enumerate_simple_chains(&r, A, B, 3).len(), 1);
    }

    #[test]
    fn simple_chains_are_simple() {
        let r = Relation::full(5);
        let chains = enumerate_simple_chains(&r, 0, 4, 6);
        // 3 intermediates: sum over k of 3!/(3-k)!
        assert_eq!(chains.len(), 1 + 3 + 6 + 6);
        assert!(chains.iter().all(Chain::is_simple));
    }

    #[test]
    fn ascending_examples() {
        let r = refl(3, &[(A, B), (B, C)]);
        assert!(is_ascending(&[A, B, C], &r));
        assert!(!is_ascending(&[A, C], &r));
        assert!(is_ascending(&[C, C, C], &r));
        assert!(is_ascending(&[], &r));
        assert!(is_ascending(&[B], &r));
    }

    #[test]
    fn chain_construction_validates() {
        let r = refl(3, &[(A, B)]);
        assert!(Chain::new(vec![A, B], &r).is_some());
        assert!(Chain::new(vec![A], &r).is_none());
        assert!(Chain::new(vec![A, C], &r).is_none());
    }

    #[test]
    fn out_of_range_edges_are_rejected() {
        assert_eq!(Relation::from_edges(2, [(0, 2)]), Err(RelationError::OutOfRange(0, 2, 2)));
    }

    #[test]
    fn validation_witnesses() {
        assert_eq!(refl(3, &[(A, B), (B, C)]).check_transitive(), Err(RelationError::NotTransitive(A, B, C)));
        assert_eq!(Relation::from_edges(2, [(0, 0)]).unwrap().check_reflexive(), Err(RelationError::NotReflexive(1)));
    }
}
