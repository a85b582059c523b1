//! Named, replayable inequality and identity checks with instance generators,
//! campaigns over seeded random instances, and the sum-product table experiment.

mod campaign;
mod checks;
mod generators;
mod table;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::set::GroupSet;

pub use campaign::{
    exhaustive_suite, run_campaign, suite_ids, CampaignConfig, CampaignReport, CheckTally, FailureRecord, CORE_SUITE,
    EXHAUSTIVE_MAX_ORDER,
};
pub use generators::generate;
pub use table::{
    table_experiment, TableBound, TableCell, TableConfig, TableFamily, TableReport, DEFAULT_TABLE_NODE_BUDGET,
    PREDICTED_CLASSES, ROW_LABELS,
};

/// Absolute guard band applied to floating right-hand sides.
pub const FLOAT_GUARD: f64 = 1e-9;

/// A set of `arity`-tuples over the instance group, stored as ranks in `G^arity`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDesc {
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub arity: usize,
    pub elements: Vec<usize>,
}

fn one() -> usize {
    1
}

fn is_one(x: &usize) -> bool {
    *x == 1
}

/// Replayable description of a check instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub group: String,
    #[serde(default)]
    pub sets: BTreeMap<String, SetDesc>,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub seed: u64,
}

impl Instance {
    pub fn new(group: &Group, seed: u64) -> Self {
        Instance {
            group: group.spec_string(),
            sets: BTreeMap::new(),
            params: BTreeMap::new(),
            seed,
        }
    }

    pub fn with_set(mut self, name: &str, set: &GroupSet) -> Self {
        self.sets.insert(name.into(), SetDesc { arity: 1, elements: set.to_vec() });
        self
    }

    pub fn with_tuples(mut self, name: &str, arity: usize, set: &GroupSet) -> Self {
        self.sets.insert(name.into(), SetDesc { arity, elements: set.to_vec() });
        self
    }

    pub fn with_param(mut self, name: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(name.into(), value.into());
        self
    }

    pub fn group(&self) -> Result<Arc<Group>> {
        Ok(Arc::new(self.group.parse()?))
    }

    fn desc(&self, name: &str) -> Result<&SetDesc> {
        self.sets
            .get(name)
            .ok_or_else(|| Error::MalformedInstance(format!("missing set {name}")))
    }

    /// Set `name` as a subset of `G` itself.
    pub fn set(&self, g: &Arc<Group>, name: &str) -> Result<GroupSet> {
        let d = self.desc(name)?;
        if d.arity != 1 {
            return Err(Error::MalformedInstance(format!("{name} has arity {}", d.arity)));
        }
        GroupSet::from_ranks(g, d.elements.iter().copied())
    }

    /// Set `name` as a subset of `G^arity`, returning the arity.
    pub fn tuples(&self, g: &Arc<Group>, name: &str) -> Result<(usize, GroupSet)> {
        let d = self.desc(name)?;
        let gk = Arc::new(g.power_with_cap(d.arity, usize::MAX)?);
        Ok((d.arity, GroupSet::from_ranks(&gk, d.elements.iter().copied())?))
    }

    pub fn usize(&self, name: &str) -> Result<usize> {
        self.params
            .get(name)
            .and_then(|v| v.as_u64())
            .map(|v| v as usize)
            .ok_or_else(|| Error::MalformedInstance(format!("missing integer parameter {name}")))
    }

    pub fn ints(&self, name: &str) -> Result<Vec<i64>> {
        self.params
            .get(name)
            .and_then(|v| v.as_array())
            .and_then(|a| a.iter().map(|x| x.as_i64()).collect::<Option<Vec<_>>>())
            .ok_or_else(|| Error::MalformedInstance(format!("missing integer list {name}")))
    }

    /// Rational parameter written as `"p/q"` or an integer.
    pub fn ratio(&self, name: &str) -> Result<BigRational> {
        let v = self
            .params
            .get(name)
            .ok_or_else(|| Error::MalformedInstance(format!("missing rational parameter {name}")))?;
        let text = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            _ => return Err(Error::MalformedInstance(format!("{name} is not rational"))),
        };
        text.parse::<BigRational>()
            .map_err(|_| Error::MalformedInstance(format!("{name} = {text} is not rational")))
    }
}

/// A side of a comparison.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Exact(BigRational),
    Float(f64),
    Infinite,
}

impl Quantity {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Quantity::Exact(BigRational::from_integer(v.into()))
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Quantity::Exact(BigRational::new(num.into(), den.into()))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(r) => crate::scalar::ratio_to_f64(r),
            Quantity::Float(f) => *f,
            Quantity::Infinite => f64::INFINITY,
        }
    }

    fn is_float(&self) -> bool {
        matches!(self, Quantity::Float(_))
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(r) => {
                if r.is_integer() {
                    s.serialize_str(&r.numer().to_string())
                } else {
                    s.serialize_str(&r.to_string())
                }
            }
            Quantity::Float(f) if f.is_finite() => s.serialize_f64(*f),
            Quantity::Float(f) => s.serialize_str(&f.to_string()),
            Quantity::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    fn accepts(self, ord: Ordering) -> bool {
        match self {
            Relation::Le => ord != Ordering::Greater,
            Relation::Lt => ord == Ordering::Less,
            Relation::Ge => ord != Ordering::Less,
            Relation::Gt => ord == Ordering::Greater,
            Relation::Eq => ord == Ordering::Equal,
        }
    }
}

/// One side-by-side comparison inside a check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub label: String,
    pub lhs: Quantity,
    pub relation: Relation,
    pub rhs: Quantity,
    pub holds: bool,
    /// Signed margin, positive when the relation holds with room to spare.
    pub slack: Option<f64>,
}

impl Comparison {
    pub fn new(label: impl Into<String>, lhs: Quantity, relation: Relation, rhs: Quantity) -> Self {
        let holds = compare(&lhs, relation, &rhs);
        let (l, r) = (lhs.to_f64(), rhs.to_f64());
        let slack = match relation {
            Relation::Le | Relation::Lt => r - l,
            Relation::Ge | Relation::Gt => l - r,
            Relation::Eq => -(l - r).abs(),
        };
        Comparison {
            label: label.into(),
            lhs,
            relation,
            rhs,
            holds,
            slack: slack.is_finite().then_some(slack),
        }
    }
}

/// Exact comparison when both sides are exact, guarded comparison otherwise.
pub fn compare(lhs: &Quantity, relation: Relation, rhs: &Quantity) -> bool {
    use Quantity::*;
    let ord = match (lhs, rhs) {
        (Infinite, Infinite) => Ordering::Equal,
        (Infinite, _) => Ordering::Greater,
        (_, Infinite) => Ordering::Less,
        (Exact(a), Exact(b)) => a.cmp(b),
        _ => {
            let (l, r) = (lhs.to_f64(), rhs.to_f64());
            if lhs.is_float() || rhs.is_float() {
                return match relation {
                    Relation::Le | Relation::Lt => l <= r + FLOAT_GUARD,
                    Relation::Ge | Relation::Gt => l >= r - FLOAT_GUARD,
                    Relation::Eq => (l - r).abs() <= FLOAT_GUARD,
                };
            }
            l.partial_cmp(&r).unwrap_or(Ordering::Equal)
        }
    };
    relation.accepts(ord)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped { reason: String },
    /// Measured only; carries no pass/fail verdict.
    Reported,
    /// The evaluation itself failed, for example on an exhausted search budget.
    Error { message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub name: String,
    pub anchor: String,
    pub instance: Instance,
    pub outcome: Outcome,
    pub comparisons: Vec<Comparison>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, serde_json::Value>,
}

impl CheckResult {
    pub fn holds(&self) -> bool {
        matches!(self.outcome, Outcome::Pass)
    }
}

/// Intermediate result produced by a check body.
#[derive(Default)]
pub(crate) struct Eval {
    comparisons: Vec<Comparison>,
    skip: Option<String>,
    reported: bool,
    notes: BTreeMap<String, serde_json::Value>,
}

impl Eval {
    pub(crate) fn skip(reason: impl Into<String>) -> Self {
        Eval {
            skip: Some(reason.into()),
            ..Default::default()
        }
    }

    pub(crate) fn push(&mut self, label: &str, lhs: Quantity, relation: Relation, rhs: Quantity) {
        self.comparisons.push(Comparison::new(label, lhs, relation, rhs));
    }

    pub(crate) fn note(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.notes.insert(key.into(), value.into());
    }
}

/// Static description of a registered check.
#[derive(Clone, Copy, Debug)]
pub struct CheckInfo {
    pub id: &'static str,
    pub name: &'static str,
    pub anchor: &'static str,
    pub premise_gated: bool,
    pub report_only: bool,
}

pub fn registry() -> &'static [CheckInfo] {
    checks::REGISTRY
}

pub fn check_info(id: &str) -> Result<&'static CheckInfo> {
    registry()
        .iter()
        .find(|c| c.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

/// Evaluates check `id` on `instance`.
pub fn run_check(id: &str, instance: &Instance) -> Result<CheckResult> {
    let info = check_info(id)?;
    let eval = checks::evaluate(info.id, instance);
    let mut result = CheckResult {
        check_id: info.id.to_string(),
        name: info.name.to_string(),
        anchor: info.anchor.to_string(),
        instance: instance.clone(),
        outcome: Outcome::Pass,
        comparisons: vec![],
        notes: BTreeMap::new(),
    };
    match eval {
        Err(Error::MalformedInstance(m)) => return Err(Error::MalformedInstance(m)),
        Err(e) => {
            result.outcome = Outcome::Error { message: e.to_string() };
        }
        Ok(ev) => {
            result.outcome = if let Some(reason) = ev.skip {
                Outcome::Skipped { reason }
            } else if ev.reported {
                Outcome::Reported
            } else if ev.comparisons.iter().all(|c| c.holds) {
                Outcome::Pass
            } else {
                Outcome::Fail
            };
            result.comparisons = ev.comparisons;
            result.notes = ev.notes;
        }
    }
    Ok(result)
}
