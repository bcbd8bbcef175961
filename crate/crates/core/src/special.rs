//! Classical principles obtained from the symmetric linear theorem by a
//! particular choice of relation: `[d < ε]` and order comparability.

use crate::analysis::{check_increasing, check_lambda_contractive, CheckReport, Witness};
use crate::metric::{FiniteMetricSpace, SelfMap};
use crate::relation::{Relation, RelationError};
use crate::scalar::{Rational, Scalar};
use crate::theorem::{verify_ai_linear_rs, HarnessError, Instantiation, Item, Status, TheoremId, TheoremReport};

/// `x [d<ε] y ⟺ d(x, y) < ε`; reflexive and symmetric for `ε > 0`.
pub fn edelstein_relation<D: Scalar>(space: &FiniteMetricSpace<D>, epsilon: &D) -> Result<Relation, HarnessError> {
    if !(*epsilon > D::zero()) {
        return Err(HarnessError::InvalidEpsilon(epsilon.to_string()));
    }
    Ok(Relation::from_fn(space.len(), |i, j| space.dist(i, j) < epsilon))
}

/// `⟨≤⟩ = ≤ ∪ ≥`, defined for quasi-orders.
pub fn comparability_relation(order: &Relation) -> Result<Relation, HarnessError> {
    check_quasi_order(order)?;
    Ok(order.union(&order.transpose())?)
}

fn check_quasi_order(order: &Relation) -> Result<(), HarnessError> {
    order
        .check_reflexive()
        .and_then(|()| order.check_transitive())
        .map_err(HarnessError::NotQuasiOrder)
}

/// `x ≤ y ⟹ Ty ≤ Tx`.
pub fn check_decreasing(t: &SelfMap, order: &Relation) -> CheckReport {
    let witnesses: Vec<Witness> = order
        .edges()
        .filter(|&(x, y)| !order.contains(t.apply(y), t.apply(x)))
        .map(|(x, y)| Witness::Pair(x, y))
        .collect();
    CheckReport { holds: witnesses.is_empty(), witnesses }
}

fn implication(name: &str, antecedent: bool, consequent: bool, vacuous: &str) -> Item {
    let item = Item::new(name, if !antecedent || consequent { Status::Holds } else { Status::Fails });
    if antecedent {
        item
    } else {
        item.with_detail(format!("vacuous: {vacuous}"))
    }
}

/// Edelstein's local contraction principle on `ε`-chainable pieces.
pub fn verify_edelstein<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    epsilon: &D,
    lambda: &Rational,
) -> Result<TheoremReport, HarnessError> {
    let s = edelstein_relation(space, epsilon)?;
    let mut report = verify_ai_linear_rs(space, t, &s, lambda)?;
    let contractive = check_lambda_contractive(space, t, &s, lambda).holds();
    let increasing = check_increasing(t, &s);
    report.theorem = TheoremId::Edelstein;
    report.instantiation = Some(Instantiation {
        of: TheoremId::AlamImdadLinearSymmetric,
        note: format!("S = [d<ε] with ε = {epsilon}"),
        checks: vec![implication(
            "(d,[d<ε];λ)-contractive implies ([d<ε])-increasing",
            contractive,
            increasing.holds,
            "T is not (d,[d<ε];λ)-contractive",
        )],
    });
    Ok(report)
}

/// Nieto-López type principle on a quasi-ordered metric space.
pub fn verify_nieto_lopez<D: Scalar>(
    space: &FiniteMetricSpace<D>,
    t: &SelfMap,
    order: &Relation,
    lambda: &Rational,
) -> Result<TheoremReport, HarnessError> {
    if order.carrier_size() != space.len() {
        return Err(HarnessError::RelationCarrierMismatch { space: space.len(), relation: order.carrier_size() });
    }
    let s = comparability_relation(order)?;
    let mut report = verify_ai_linear_rs(space, t, &s, lambda)?;
    let monotone = check_increasing(t, order).holds || check_decreasing(t, order).holds;
    report.theorem = TheoremId::NietoLopez;
    report.instantiation = Some(Instantiation {
        of: TheoremId::AlamImdadLinearSymmetric,
        note: "S = <≤>, the comparability relation of the order".to_string(),
        checks: vec![implication(
            "(≤)-monotone implies (<≤>)-increasing",
            monotone,
            check_increasing(t, &s).holds,
            "T is neither increasing nor decreasing",
        )],
    });
    Ok(report)
}

/// Error raised by the relation layer when the order is not a quasi-order.
pub fn quasi_order_error(order: &Relation) -> Option<RelationError> {
    match check_quasi_order(order) {
        Err(HarnessError::NotQuasiOrder(e)) => Some(e),
        _ => None,
    }
}
