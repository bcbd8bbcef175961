//! Instance files and report serialization.
//!
//! An instance file is a JSON object with exactly these keys:
//!
//! ```json
//! {
//!   "points": ["a", "b", "c"],
//!   "distance": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]],
//!   "relation": [["a", "b"], ["b", "c"]],
//!   "map": [["a", "b"], ["b", "b"], ["c", "b"]],
//!   "order": [["a", "b"]],
//!   "modulus": {"kind": "linear", "lambda": "1/2"},
//!   "epsilon": "3/2",
//!   "start": "c"
//! }
//! ```
//!
//! `order`, `modulus`, `epsilon` and `start` are optional. Numbers are strings
//! holding a decimal (`"0.25"`, `"1e-3"`) or a fraction (`"1/3"`) and are
//! parsed exactly. Relations and orders list their non-diagonal pairs; the
//! diagonal is always added. `map` lists every point exactly once.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::comparison::{Admissibility, ComparisonFn};
use crate::metric::{FiniteMetricSpace, SelfMap, ValidationReport};
use crate::picard::{NumericTrace, Outcome, PicardTrace};
use crate::reduction::ReducedInstance;
use crate::relation::{Relation, RelationError};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::theorem::TheoremReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub points: Vec<String>,
    pub distance: Vec<Vec<String>>,
    pub relation: Vec<[String; 2]>,
    pub map: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<ModulusSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModulusSpec {
    Linear { lambda: String },
    Catalog { name: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoadError {
    Io { path: String, message: String },
    Parse { line: usize, column: usize, message: String },
    Validation { location: String, message: String, witness: Vec<String> },
}

fn invalid(location: impl Into<String>, message: impl Into<String>, witness: Vec<String>) -> LoadError {
    LoadError::Validation { location: location.into(), message: message.into(), witness }
}

/// A validated instance.
#[derive(Clone, PartialEq)]
pub struct Instance<D = Rational> {
    pub space: FiniteMetricSpace<D>,
    /// Reflexive.
    pub relation: Relation,
    pub map: SelfMap,
    /// Reflexive; transitivity is checked where an order is required.
    pub order: Option<Relation>,
    pub modulus: Option<ComparisonFn>,
    pub epsilon: Option<D>,
    pub start: Option<usize>,
}

impl<D: Scalar> fmt::Debug for Instance<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("space", &self.space)
            .field("relation", &self.relation)
            .field("map", &self.map)
            .field("order", &self.order)
            .field("modulus", &self.modulus)
            .field("epsilon", &self.epsilon.as_ref().map(Scalar::to_literal))
            .field("start", &self.start)
            .finish()
    }
}

impl<D: Scalar> Instance<D> {
    pub fn point(&self, id: &str) -> Option<usize> {
        self.space.index_of(id)
    }
}

pub fn load_instance<D: Scalar>(path: &Path) -> Result<Instance<D>, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LoadError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_instance(&text)
}

pub fn parse_instance<D: Scalar>(text: &str) -> Result<Instance<D>, LoadError> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| LoadError::Parse { line: e.line(), column: e.column(), message: strip_position(&e) })?;
    validate_file(&file)
}

fn strip_position(e: &serde_json::Error) -> String {
    let text = e.to_string();
    match text.rfind(" at line ") {
        Some(k) => text[..k].to_string(),
        None => text,
    }
}

pub fn validate_file<D: Scalar>(file: &InstanceFile) -> Result<Instance<D>, LoadError> {
    let n = file.points.len();
    if n == 0 {
        return Err(invalid("points", "no points", vec![]));
    }
    let mut index = HashMap::with_capacity(n);
    for (k, id) in file.points.iter().enumerate() {
        if index.insert(id.as_str(), k).is_some() {
            return Err(invalid(format!("points[{k}]"), format!("duplicate id {id:?}"), vec![id.clone()]));
        }
    }
    if file.distance.len() != n {
        return Err(invalid("distance", format!("{} rows for {n} points", file.distance.len()), vec![]));
    }
    let mut rows = Vec::with_capacity(n);
    for (i, row) in file.distance.iter().enumerate() {
        if row.len() != n {
            return Err(invalid(format!("distance[{i}]"), format!("{} entries for {n} points", row.len()), vec![]));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, lit)| {
                D::parse_literal(lit)
                    .ok_or_else(|| invalid(format!("distance[{i}][{j}]"), format!("not a number: {lit:?}"), vec![]))
            })
            .collect::<Result<Vec<D>, _>>()?;
        rows.push(parsed);
    }
    let space = FiniteMetricSpace::new(file.points.clone(), rows)
        .map_err(|e| invalid("distance", e.to_string(), vec![]))?;
    if let Some(v) = space.validate().violations.first() {
        let witness = v.witness().into_iter().map(|p| space.id(p).to_string()).collect();
        return Err(invalid("distance", space.describe(v), witness));
    }

    let lookup = |location: String, id: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| invalid(location, format!("unknown id {id:?}"), vec![id.to_string()]))
    };
    let pairs = |field: &str, list: &[[String; 2]]| -> Result<Relation, LoadError> {
        let mut r = Relation::identity(n);
        for (k, [x, y]) in list.iter().enumerate() {
            let (i, j) = (lookup(format!("{field}[{k}][0]"), x)?, lookup(format!("{field}[{k}][1]"), y)?);
            r.insert(i, j).expect("indices in range");
        }
        Ok(r)
    };
    let relation = pairs("relation", &file.relation)?;
    let order = file.order.as_deref().map(|o| pairs("order", o)).transpose()?;

    let mut table = vec![None; n];
    for (k, [x, y]) in file.map.iter().enumerate() {
        let (i, j) = (lookup(format!("map[{k}][0]"), x)?, lookup(format!("map[{k}][1]"), y)?);
        if table[i].replace(j).is_some() {
            return Err(invalid(format!("map[{k}]"), format!("image of {x:?} given twice"), vec![x.clone()]));
        }
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(i, image)| {
            image.ok_or_else(|| invalid("map", format!("no image for {:?}", file.points[i]), vec![file.points[i].clone()]))
        })
        .collect::<Result<Vec<usize>, _>>()?;
    let map = SelfMap::new(table).expect("images are known ids");

    let modulus = match &file.modulus {
        None => None,
        Some(ModulusSpec::Linear { lambda }) => match parse_rational(lambda) {
            Some(l) if l >= Rational::from_integer(0.into()) => Some(ComparisonFn::Linear(l)),
            _ => return Err(invalid("modulus.lambda", format!("not a non-negative number: {lambda:?}"), vec![])),
        },
        Some(ModulusSpec::Catalog { name }) => Some(
            ComparisonFn::parse(name)
                .ok()
                .filter(|phi| matches!(phi, ComparisonFn::Catalog(_)))
                .ok_or_else(|| invalid("modulus.name", format!("unknown comparison function {name:?}"), vec![]))?,
        ),
    };
    let epsilon = match &file.epsilon {
        None => None,
        Some(lit) => Some(D::parse_literal(lit).ok_or_else(|| invalid("epsilon", format!("not a number: {lit:?}"), vec![]))?),
    };
    let start = file.start.as_deref().map(|id| lookup("start".into(), id)).transpose()?;

    Ok(Instance { space, relation, map, order, modulus, epsilon, start })
}

/// Canonical file: pairs in row-major index order without duplicates or
/// diagonal entries, map in point order, canonical number literals.
pub fn to_file<D: Scalar>(inst: &Instance<D>) -> InstanceFile {
    let space = &inst.space;
    let id_pairs = |r: &Relation| -> Vec<[String; 2]> {
        r.proper_edges().map(|(i, j)| [space.id(i).to_string(), space.id(j).to_string()]).collect()
    };
    InstanceFile {
        points: space.ids().to_vec(),
        distance: (0..space.len()).map(|i| (0..space.len()).map(|j| space.dist(i, j).to_literal()).collect()).collect(),
        relation: id_pairs(&inst.relation),
        map: (0..space.len()).map(|i| [space.id(i).to_string(), space.id(inst.map.apply(i)).to_string()]).collect(),
        order: inst.order.as_ref().map(id_pairs),
        modulus: inst.modulus.as_ref().map(|phi| match phi {
            ComparisonFn::Linear(l) => ModulusSpec::Linear { lambda: format_rational(l) },
            ComparisonFn::Catalog(c) => ModulusSpec::Catalog { name: c.name().to_string() },
        }),
        epsilon: inst.epsilon.as_ref().map(Scalar::to_literal),
        start: inst.start.map(|s| space.id(s).to_string()),
    }
}

pub fn write_instance<D: Scalar>(inst: &Instance<D>) -> String {
    serde_json::to_string_pretty(&to_file(inst)).expect("instance files serialize")
}

impl InstanceFile {
    /// The canonical form of a valid file, computed on the text level.
    pub fn normalized(&self) -> InstanceFile {
        let position: HashMap<&str, usize> = self.points.iter().enumerate().map(|(k, id)| (id.as_str(), k)).collect();
        let canon = |lit: &String| parse_rational(lit).map(|r| format_rational(&r)).unwrap_or_else(|| lit.clone());
        let pairs = |list: &[[String; 2]]| {
            let mut keyed: Vec<(usize, usize, [String; 2])> = list
                .iter()
                .filter(|[x, y]| x != y)
                .map(|p| (position[p[0].as_str()], position[p[1].as_str()], p.clone()))
                .collect();
            keyed.sort();
            keyed.dedup_by(|a, b| (a.0, a.1) == (b.0, b.1));
            keyed.into_iter().map(|(_, _, p)| p).collect::<Vec<_>>()
        };
        let mut map = self.map.clone();
        map.sort_by_key(|[x, _]| position[x.as_str()]);
        InstanceFile {
            points: self.points.clone(),
            distance: self.distance.iter().map(|row| row.iter().map(canon).collect()).collect(),
            relation: pairs(&self.relation),
            map,
            order: self.order.as_deref().map(pairs),
            modulus: self.modulus.as_ref().map(|m| match m {
                ModulusSpec::Linear { lambda } => ModulusSpec::Linear { lambda: canon(lambda) },
                ModulusSpec::Catalog { name } => ModulusSpec::Catalog {
                    name: ComparisonFn::parse(name).map(|phi| phi.name()).unwrap_or_else(|_| name.clone()),
                },
            }),
            epsilon: self.epsilon.as_ref().map(canon),
            start: self.start.clone(),
        }
    }
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io { path, message } => write!(f, "cannot read {path}: {message}"),
            LoadError::Parse { line, column, message } => {
                write!(f, "parse error at line {line}, column {column}: {message}")
            }
            LoadError::Validation { location, message, witness } if witness.is_empty() => {
                write!(f, "invalid instance at {location}: {message}")
            }
            LoadError::Validation { location, message, witness } => {
                write!(f, "invalid instance at {location}: {message} (witness {})", witness.join(","))
            }
        }
    }
}

/// [`RelationError`] with point ids in place of indices.
pub fn describe_relation_error<D: Scalar>(space: &FiniteMetricSpace<D>, e: &RelationError) -> String {
    let id = |p: usize| space.id(p);
    match *e {
        RelationError::NotReflexive(i) => format!("not reflexive: ({},{}) missing", id(i), id(i)),
        RelationError::NotSymmetric(i, j) => {
            format!("not symmetric: ({},{}) present but ({},{}) missing", id(i), id(j), id(j), id(i))
        }
        RelationError::NotTransitive(i, j, k) => format!(
            "not transitive: ({},{}) and ({},{}) present but ({},{}) missing",
            id(i),
            id(j),
            id(j),
            id(k),
            id(i),
            id(k)
        ),
        RelationError::NotEquivalence(ref inner) => describe_relation_error(space, inner),
        _ => e.to_string(),
    }
}

// Report rendering. Objects are `serde_json::Value` maps, whose keys are
// kept sorted, so the output is stable.

pub fn theorem_report_json(report: &TheoremReport) -> Value {
    serde_json::to_value(report).expect("reports serialize")
}

pub fn validation_json<D: Scalar>(space: &FiniteMetricSpace<D>, report: &ValidationReport) -> Value {
    json!({
        "valid": report.is_valid(),
        "violations": report.violations.iter().map(|v| json!({
            "axiom": v.axiom(),
            "witness": v.witness().into_iter().map(|p| space.id(p)).collect::<Vec<_>>(),
            "message": space.describe(v),
        })).collect::<Vec<_>>(),
    })
}

pub fn picard_json<D: Scalar>(space: &FiniteMetricSpace<D>, trace: &PicardTrace) -> Value {
    let orbit: Vec<&str> = trace.orbit.iter().map(|&p| space.id(p)).collect();
    let outcome = match trace.outcome {
        Outcome::Converged(z) => json!({"kind": "converged", "fixed_point": space.id(z)}),
        Outcome::Cycle { period } => json!({"kind": "cycle", "period": period}),
    };
    json!({"start": space.id(trace.start), "orbit": orbit, "outcome": outcome, "steps": trace.steps})
}

pub fn picard_text<D: Scalar>(space: &FiniteMetricSpace<D>, trace: &PicardTrace) -> String {
    let orbit: Vec<&str> = trace.orbit.iter().map(|&p| space.id(p)).collect();
    let outcome = match trace.outcome {
        Outcome::Converged(z) => format!("converged to {}", space.id(z)),
        Outcome::Cycle { period } => format!("enters a cycle of period {period}"),
    };
    format!("orbit {}: {outcome} after {} steps", orbit.join(" -> "), trace.steps)
}

pub fn reduction_json<D: Scalar>(ambient: &FiniteMetricSpace<D>, reduced: &ReducedInstance<D>) -> Value {
    let class: Vec<&str> = reduced.class_points.iter().map(|&p| ambient.id(p)).collect();
    let e: Vec<Vec<String>> = (0..reduced.space.len())
        .map(|i| (0..reduced.space.len()).map(|j| reduced.space.dist(i, j).to_literal()).collect())
        .collect();
    let map: Vec<[&str; 2]> = (0..reduced.restricted_map.len())
        .map(|i| [reduced.space.id(i), reduced.space.id(reduced.restricted_map.apply(i))])
        .collect();
    json!({
        "start": ambient.id(reduced.start),
        "class": class,
        "chain_metric": e,
        "restricted_map": map,
        "modulus": format_rational(&reduced.modulus),
        "reduced_limit": ambient.id(reduced.reduced_limit),
        "original_limit": ambient.id(reduced.original_limit),
        "banach": theorem_report_json(&reduced.banach),
    })
}

pub fn admissibility_json(a: &Admissibility) -> Value {
    serde_json::to_value(a).expect("admissibility serializes")
}

pub fn numeric_json(trace: &NumericTrace) -> Value {
    json!({
        "status": match trace.status {
            crate::picard::NumericStatus::Converged => "converged",
            crate::picard::NumericStatus::MaxIterReached => "max-iter-reached",
        },
        "iterations": trace.iterations(),
        "last": trace.last(),
        "step_norms": trace.step_norms,
        "bounds": trace.bounds,
        "a_posteriori_bound": trace.a_posteriori_bound(),
    })
}

pub fn to_pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("values serialize")
}
