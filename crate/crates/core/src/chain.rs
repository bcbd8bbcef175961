//! Chain lengths and the chain metric on an equivalence class.
//!
//! For two points `x, y` of a class `X₀` of the equivalence generated by a
//! reflexive symmetric relation `s`, `e(x, y)` is the smallest d-length of an
//! `s`-chain joining them. With non-negative weights and a finite carrier the
//! infimum is a minimum over simple chains, so it is computed as a shortest
//! path.

use thiserror::Error;

use crate::metric::{FiniteMetricSpace, SelfMap};
use crate::relation::{equivalence_class, Chain, Relation, RelationError};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("relation is not symmetric: ({0}, {1}) without ({1}, {0})")]
    NotSymmetric(usize, usize),
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("points {0} and {1} are not joined by any chain inside the class")]
    NotConnectedClass(usize, usize),
    #[error("carrier mismatch: space has {space} points, relation {relation}")]
    CarrierMismatch { space: usize, relation: usize },
    #[error("class point {0} is outside the carrier")]
    OutOfRange(usize),
}

/// d-length of a chain: sum of consecutive distances.
pub fn chain_length<D: Scalar>(space: &FiniteMetricSpace<D>, chain: &Chain) -> D {
    chain
        .points()
        .windows(2)
        .fold(D::zero(), |acc, w| acc + space.dist(w[0], w[1]).clone())
}

/// Chain metric on a class, indexed by position in `class_points`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainMetric<D = Rational> {
    class_points: Vec<usize>,
    e: Vec<D>,
}

impl<D: Scalar> ChainMetric<D> {
    pub fn class_points(&self) -> &[usize] {
        &self.class_points
    }

    pub fn len(&self) -> usize {
        self.class_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_points.is_empty()
    }

    /// `e` between the `i`-th and `j`-th class points.
    pub fn local(&self, i: usize, j: usize) -> &D {
        &self.e[i * self.len() + j]
    }

    /// `e` between carrier points `x` and `y`; `None` if either is outside
    /// the class.
    pub fn get(&self, x: usize, y: usize) -> Option<&D> {
        let i = self.position(x)?;
        let j = self.position(y)?;
        Some(self.local(i, j))
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.class_points.iter().position(|&p| p == x)
    }

    /// The class as a metric space of its own, carrying the original ids.
    pub fn to_space(&self, ambient: &FiniteMetricSpace<D>) -> FiniteMetricSpace<D> {
        let ids = self.class_points.iter().map(|&p| ambient.id(p).to_string()).collect();
        FiniteMetricSpace::from_fn(ids, |i, j| self.local(i, j).clone())
    }

    /// Pairs `(x, y)` (carrier indices) where `d(x, y) > e(x, y)`.
    pub fn subordination_failures(&self, space: &FiniteMetricSpace<D>) -> Vec<(usize, usize)> {
        self.pairs()
            .filter(|&(i, j)| space.dist(self.class_points[i], self.class_points[j]) > self.local(i, j))
            .map(|(i, j)| (self.class_points[i], self.class_points[j]))
            .collect()
    }

    /// `s`-edges `(x, y)` inside the class where `e(x, y) != d(x, y)`.
    pub fn s_identity_failures(&self, space: &FiniteMetricSpace<D>, s: &Relation) -> Vec<(usize, usize)> {
        self.pairs()
            .map(|(i, j)| (i, j, self.class_points[i], self.class_points[j]))
            .filter(|&(i, j, x, y)| s.contains(x, y) && space.dist(x, y) != self.local(i, j))
            .map(|(_, _, x, y)| (x, y))
            .collect()
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.len();
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }
}

/// Builds `e` on `class_points`, which must be one class of the equivalence
/// generated by the reflexive symmetric relation `s`.
pub fn chain_metric<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    s: &Relation,
    class_points: &[usize],
) -> Result<ChainMetric<D>, ChainError> {
    if s.carrier_size() != space.len() {
        return Err(ChainError::CarrierMismatch { space: space.len(), relation: s.carrier_size() });
    }
    if let Some(&p) = class_points.iter().find(|&&p| p >= space.len()) {
        return Err(ChainError::OutOfRange(p));
    }
    match s.check_symmetric() {
        Err(RelationError::NotSymmetric(i, j)) => return Err(ChainError::NotSymmetric(i, j)),
        Err(_) => unreachable!("check_symmetric only reports asymmetry"),
        Ok(()) => {}
    }
    if let Err(RelationError::NotReflexive(i)) = s.check_reflexive() {
        return Err(ChainError::NotReflexive(i));
    }

    let n = class_points.len();
    let mut e = Vec::with_capacity(n * n);
    for src in 0..n {
        let row = shortest_from(space, s, class_points, src);
        for (dst, value) in row.into_iter().enumerate() {
            match value {
                Some(v) => e.push(v),
                None => return Err(ChainError::NotConnectedClass(class_points[src], class_points[dst])),
            }
        }
    }
    Ok(ChainMetric { class_points: class_points.to_vec(), e })
}

/// Dense-array Dijkstra over the class; weights are d on `s`-edges.
fn shortest_from<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    s: &Relation,
    points: &[usize],
    src: usize,
) -> Vec<Option<D>> {
    let n = points.len();
    let mut best: Vec<Option<D>> = vec![None; n];
    let mut done = vec![false; n];
    best[src] = Some(D::zero());
    loop {
        let next = (0..n)
            .filter(|&k| !done[k])
            .filter_map(|k| best[k].as_ref().map(|d| (k, d)))
            .fold(None::<(usize, &D)>, |acc, (k, d)| match acc {
                Some((_, a)) if a <= d => acc,
                _ => Some((k, d)),
            })
            .map(|(k, _)| k);
        let Some(u) = next else { break };
        done[u] = true;
        let du = best[u].clone().expect("settled vertex has a distance");
        for v in 0..n {
            if done[v] || !s.contains(points[u], points[v]) {
                continue;
            }
            let candidate = du.clone() + space.dist(points[u], points[v]).clone();
            if best[v].as_ref().is_none_or(|cur| candidate < *cur) {
                best[v] = Some(candidate);
            }
        }
    }
    best
}

/// Status of a property that holds automatically on a finite carrier.
pub const TRIVIAL_FINITE: &str = "trivially-satisfied (finite carrier)";

/// Closure properties of the class `X₀` of `x0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub class_points: Vec<usize>,
    /// Every `s`-neighbour of a class point lies in the class.
    pub neighbours_inside: bool,
    /// Every pair of class points is related by the equivalence.
    pub connected: bool,
    /// No `s`-chain starting in the class ever leaves it.
    pub chains_stay_inside: bool,
    /// Limits of ascending convergent sequences stay in the class.
    pub closed: &'static str,
    /// `T(X₀) ⊆ X₀`; only meaningful when `x0 e T x0`.
    pub t_invariant: bool,
    /// Witnesses: pairs `(x, y)` with `x` in the class and `y` outside.
    pub escapes: Vec<(usize, usize)>,
}

impl ClassReport {
    pub fn all_hold(&self) -> bool {
        self.neighbours_inside && self.connected && self.chains_stay_inside
    }
}

pub fn check_class_closure(
    s: &Relation,
    t: &SelfMap,
    e: &Relation,
    x0: usize,
) -> Result<ClassReport, RelationError> {
    let class = equivalence_class(e, x0)?;
    let inside = |p: usize| class.binary_search(&p).is_ok();

    let escapes: Vec<(usize, usize)> = class
        .iter()
        .flat_map(|&x| s.successors(x).filter(|&y| !inside(y)).map(move |y| (x, y)))
        .collect();
    let neighbours_inside = escapes.is_empty();
    let connected = class.iter().all(|&x| class.iter().all(|&y| e.contains(x, y)));

    // points reachable from the class by s-chains
    let mut reached = vec![false; s.carrier_size()];
    let mut stack = class.clone();
    for &p in &class {
        reached[p] = true;
    }
    while let Some(u) = stack.pop() {
        for v in s.successors(u) {
            if !reached[v] {
                reached[v] = true;
                stack.push(v);
            }
        }
    }
    let chains_stay_inside = reached.iter().enumerate().all(|(p, r)| !r || inside(p));

    Ok(ClassReport {
        t_invariant: class.iter().all(|&p| inside(t.apply(p))),
        class_points: class,
        neighbours_inside,
        connected,
        chains_stay_inside,
        closed: TRIVIAL_FINITE,
        escapes,
    })
}
