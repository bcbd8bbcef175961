//! Reduction of the symmetric linear theorem to the Banach principle on the
//! class of the starting point, equipped with the chain metric.

use thiserror::Error;

use crate::analysis::{check_increasing, check_lambda_contractive};
use crate::chain::{chain_metric, check_class_closure, ChainError, ChainMetric};
use crate::metric::{FiniteMetricSpace, MapError, SelfMap};
use crate::picard::orbit;
use crate::relation::{s_omega, Relation, RelationError};
use crate::scalar::{Rational, Scalar};
use crate::theorem::{verify_ai_linear_rs, verify_banach, HarnessError, TheoremReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("premise does not hold: {0}")]
    PremiseFailure(String),
    #[error("start point {0} is not related to its image under the equivalence")]
    NotInClass(String),
    #[error("{step}: {detail}")]
    LemmaViolation { step: &'static str, detail: String },
}

impl From<ChainError> for ReductionError {
    fn from(e: ChainError) -> Self {
        lemma("chain metric", e.to_string())
    }
}

impl From<RelationError> for ReductionError {
    fn from(e: RelationError) -> Self {
        ReductionError::Harness(e.into())
    }
}

impl From<MapError> for ReductionError {
    fn from(e: MapError) -> Self {
        lemma("T restricts to the class", e.to_string())
    }
}

fn lemma(step: &'static str, detail: impl Into<String>) -> ReductionError {
    ReductionError::LemmaViolation { step, detail: detail.into() }
}

/// `(X₀, e, T|X₀)` with the results of every intermediate check.
#[derive(Clone)]
pub struct ReducedInstance<D = Rational> {
    pub start: usize,
    /// Points of the class, in increasing index order.
    pub class_points: Vec<usize>,
    pub chain_metric: ChainMetric<D>,
    /// `(X₀, e)` with the ambient ids.
    pub space: FiniteMetricSpace<D>,
    /// `T|X₀` in local indices.
    pub restricted_map: SelfMap,
    pub modulus: Rational,
    /// Banach report on the reduced instance.
    pub banach: TheoremReport,
    /// Limit of the Picard orbit in the reduced instance, ambient index.
    pub reduced_limit: usize,
    /// Limit of the Picard orbit of `start` under `T` on `X`.
    pub original_limit: usize,
}

impl<D: Scalar> std::fmt::Debug for ReducedInstance<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReducedInstance")
            .field("start", &self.start)
            .field("class_points", &self.class_points)
            .field("space", &self.space)
            .field("restricted_map", &self.restricted_map)
            .field("modulus", &self.modulus)
            .field("reduced_limit", &self.reduced_limit)
            .field("original_limit", &self.original_limit)
            .finish_non_exhaustive()
    }
}

pub fn reduce_to_banach<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    s: &Relation,
    lambda: &Rational,
    x0: usize,
) -> Result<ReducedInstance<D>, ReductionError> {
    if x0 >= space.len() {
        return Err(RelationError::OutOfRange(x0, x0, space.len()).into());
    }
    let premises = verify_ai_linear_rs(space, t, s, lambda)?;
    if let Some(p) = premises.first_failed_premise() {
        return Err(ReductionError::PremiseFailure(p.name.clone()));
    }
    let e = s_omega(s);
    if !e.contains(x0, t.apply(x0)) {
        return Err(ReductionError::NotInClass(space.id(x0).to_string()));
    }

    let class = check_class_closure(s, t, &e, x0)?;
    if !class.all_hold() {
        let detail = match class.escapes.first() {
            Some(&(x, y)) => format!("s-edge ({},{}) leaves the class", space.id(x), space.id(y)),
            None => "class is not connected".to_string(),
        };
        return Err(lemma("class closure", detail));
    }
    let class_points = class.class_points;

    let cm = chain_metric(space, s, &class_points)?;
    if let Some(&(x, y)) = cm.subordination_failures(space).first() {
        return Err(lemma("d <= e", format!("at ({},{})", space.id(x), space.id(y))));
    }
    if let Some(&(x, y)) = cm.s_identity_failures(space, s).first() {
        return Err(lemma("e = d on s-edges", format!("at ({},{})", space.id(x), space.id(y))));
    }
    let reduced_space = cm.to_space(space);
    if let Some(v) = reduced_space.validate().violations.first() {
        return Err(lemma("e is a metric", reduced_space.describe(v)));
    }

    if !check_increasing(t, &e).holds {
        return Err(lemma("T is (S^ω)-increasing", "monotonicity does not lift to the equivalence"));
    }
    if !class.t_invariant {
        return Err(lemma("T(X₀) ⊆ X₀", "image leaves the class"));
    }
    let restricted = t.restrict(&class_points)?;
    let contraction = check_lambda_contractive(&reduced_space, &restricted, &Relation::full(class_points.len()), lambda);
    if let Some(w) = contraction.relation.first_witness() {
        return Err(lemma("T|X₀ is an e-contraction", w.render(&reduced_space)));
    }

    let banach = verify_banach(&reduced_space, &restricted, lambda)?;
    if !banach.passed() {
        return Err(lemma("Banach principle on (X₀,e)", banach.to_string()));
    }
    let local_start = cm.position(x0).expect("start lies in its class");
    let reduced_limit = orbit(&restricted, local_start)
        .limit()
        .map(|z| class_points[z])
        .ok_or_else(|| lemma("Banach principle on (X₀,e)", "reduced orbit does not converge"))?;
    let original_limit = orbit(t, x0)
        .limit()
        .ok_or_else(|| lemma("orbit of x0", "original orbit does not converge"))?;
    if reduced_limit != original_limit {
        return Err(lemma(
            "limits agree",
            format!("reduced {} vs original {}", space.id(reduced_limit), space.id(original_limit)),
        ));
    }

    Ok(ReducedInstance {
        start: x0,
        class_points,
        chain_metric: cm,
        space: reduced_space,
        restricted_map: restricted,
        modulus: lambda.clone(),
        banach,
        reduced_limit,
        original_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::rs_cover;
    use crate::scalar::rat;

    fn line(coords: &[i64]) -> FiniteMetricSpace {
        FiniteMetricSpace::on_line(&coords.iter().map(|&c| rat(c, 1)).collect::<Vec<_>>())
    }

    #[test]
    fn path_instance_reduces() {
        let space = line(&[0, 1, 2]);
        let s = rs_cover(&Relation::reflexive_from_edges(3, [(0, 1), (1, 2)]).unwrap());
        let reduced = reduce_to_banach(&space, &SelfMap::constant(3, 1), &s, &rat(1, 2), 0).unwrap();
        assert_eq!(reduced.class_points, vec![0, 1, 2]);
        assert_eq!((reduced.reduced_limit, reduced.original_limit), (1, 1));
        assert!(reduced.banach.passed());
        assert_eq!(reduced.space.dist(0, 2), &rat(2, 1));
    }

    #[test]
    fn chain_metric_exceeds_ambient_distance() {
        // triangle with a shortcut d(a,c) < d(a,b) + d(b,c), s omits (a,c)
        let space = FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![rat(0, 1), rat(1, 1), rat(3, 2)],
                vec![rat(1, 1), rat(0, 1), rat(1, 1)],
                vec![rat(3, 2), rat(1, 1), rat(0, 1)],
            ],
        )
        .unwrap();
        let s = rs_cover(&Relation::reflexive_from_edges(3, [(0, 1), (1, 2)]).unwrap());
        let reduced = reduce_to_banach(&space, &SelfMap::constant(3, 1), &s, &rat(1, 2), 2).unwrap();
        assert_eq!(reduced.space.dist(0, 2), &rat(2, 1));
        assert_eq!(reduced.original_limit, 1);
    }

    #[test]
    fn reduction_inside_one_class() {
        // classes {0,1} and {2,3}; start in the second
        let space = line(&[0, 1, 10, 11]);
        let s = rs_cover(&Relation::reflexive_from_edges(4, [(0, 1), (2, 3)]).unwrap());
        let t = SelfMap::new(vec![0, 0, 3, 3]).unwrap();
        let reduced = reduce_to_banach(&space, &t, &s, &rat(1, 2), 2).unwrap();
        assert_eq!(reduced.class_points, vec![2, 3]);
        assert_eq!(reduced.restricted_map.table(), &[1, 1]);
        assert_eq!(reduced.reduced_limit, 3);
        assert_eq!(reduced.space.ids(), &["p2".to_string(), "p3".to_string()]);
    }

    #[test]
    fn premise_failure_is_reported() {
        let space = line(&[0, 1]);
        let err = reduce_to_banach(&space, &SelfMap::new(vec![1, 0]).unwrap(), &Relation::full(2), &rat(1, 2), 0)
            .unwrap_err();
        assert!(matches!(err, ReductionError::PremiseFailure(name) if name.contains("contractive")));
    }

    #[test]
    fn start_outside_semi_progressive_set() {
        // two classes; the identity fixes both, but point 1 maps across
        let space = line(&[0, 10, 20]);
        let s = Relation::reflexive_from_edges(3, [(1, 2), (2, 1)]).unwrap();
        let t = SelfMap::new(vec![0, 2, 2]).unwrap();
        assert!(reduce_to_banach(&space, &t, &s, &rat(1, 2), 1).is_ok());
        let t = SelfMap::new(vec![1, 2, 2]).unwrap();
        // (0,0) is the only s-edge at 0, so contractivity holds, but 0 and T0 = 1 are unrelated
        let err = reduce_to_banach(&space, &t, &s, &rat(1, 2), 0).unwrap_err();
        assert_eq!(err, ReductionError::NotInClass("p0".into()));
    }

    #[test]
    fn invalid_start() {
        let space = line(&[0, 1]);
        assert!(matches!(
            reduce_to_banach(&space, &SelfMap::identity(2), &Relation::identity(2), &rat(1, 2), 5),
            Err(ReductionError::Harness(HarnessError::Relation(_)))
        ));
    }
}
