use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constructions::{interval_middle_third, quadratic_residues, random_set};
use crate::error::{Error, Result};
use crate::group::{is_prime, Group};
use crate::set::GroupSet;
use crate::setops::{difference_set, inverse_set, product_set, sumset};
use crate::solver::cover::{cov_exact_with, CoverOptions, CoverWitness};
use crate::solver::mult::cov_mult;

pub const ROW_LABELS: [&str; 8] = [
    "A-A",
    "(A-A)^c",
    "A+B",
    "(A+B)^c",
    "AB",
    "(AB)^c",
    "(A+B)^-1",
    "((A+B)^-1)^c",
];

/// Predicted growth class per row, additive covering first, then multiplicative.
pub const PREDICTED_CLASSES: [[&str; 8]; 2] = [
    ["O(1)", "forall_O(1)", "O(1)", "forall_O(1)", "?_Omega(L)", "Omega(L)", "?_Omega(L)", "Omega(L)"],
    ["O(1)", "Omega(L)", "forall", "forall", "O(1)", "forall_O(1)", "forall", "forall"],
];

pub const DEFAULT_TABLE_NODE_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFamily {
    /// Independent random `A`, `B` of density one half.
    Random,
    /// `A = B` the quadratic residues.
    Qr,
    /// `A = B` the middle third interval.
    Interval,
}

impl TableFamily {
    pub fn name(self) -> &'static str {
        match self {
            TableFamily::Random => "random",
            TableFamily::Qr => "qr",
            TableFamily::Interval => "interval",
        }
    }

    fn sets(self, p: usize, seed: u64) -> Result<(GroupSet, GroupSet)> {
        match self {
            TableFamily::Random => {
                let g = Arc::new(Group::cyclic(p)?);
                let a = random_set(&g, 0.5, seed ^ p as u64)?;
                let b = random_set(&g, 0.5, (seed ^ p as u64).wrapping_add(0x9e37_79b9))?;
                Ok((a, b))
            }
            TableFamily::Qr => {
                let r = quadratic_residues(p)?;
                Ok((r.clone(), r))
            }
            TableFamily::Interval => {
                let i = interval_middle_third(p)?;
                Ok((i.clone(), i))
            }
        }
    }
}

impl FromStr for TableFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "random" => Ok(TableFamily::Random),
            "qr" => Ok(TableFamily::Qr),
            "interval" => Ok(TableFamily::Interval),
            other => Err(Error::InvalidParameter(format!("unknown table family {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableConfig {
    pub primes: Vec<usize>,
    pub families: Vec<TableFamily>,
    pub seed: u64,
    pub node_budget: u64,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            primes: vec![11, 31, 101],
            families: vec![TableFamily::Random, TableFamily::Qr, TableFamily::Interval],
            seed: 1,
            node_budget: DEFAULT_TABLE_NODE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableCell {
    pub p: usize,
    pub family: TableFamily,
    pub row: &'static str,
    /// `"add"` or `"mult"`.
    pub operation: &'static str,
    /// Best cover found; `None` when the set is empty and the covering number undefined.
    pub value: Option<usize>,
    pub lower_bound: Option<usize>,
    pub optimal: bool,
    pub predicted_class: &'static str,
}

/// A proven upper bound compared against the cover found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableBound {
    pub p: usize,
    pub family: TableFamily,
    pub row: &'static str,
    pub value: usize,
    pub bound: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub config: TableConfig,
    pub cells: Vec<TableCell>,
    pub bounds: Vec<TableBound>,
}

impl TableReport {
    pub fn bounds_hold(&self) -> bool {
        self.bounds.iter().all(|b| b.holds)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,family,row,operation,value,optimal,predicted_class\n");
        for c in &self.cells {
            let value = c.value.map_or_else(|| "undefined".to_string(), |v| v.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                c.p,
                c.family.name(),
                c.row,
                c.operation,
                value,
                c.optimal,
                c.predicted_class
            ));
        }
        out
    }
}

fn rows(a: &GroupSet, b: &GroupSet) -> Result<[GroupSet; 8]> {
    let d = difference_set(a, a)?;
    let s = sumset(a, b)?;
    let prod = product_set(a, b)?;
    let inv = inverse_set(&s)?;
    Ok([
        d.clone(),
        d.complement(),
        s.clone(),
        s.complement(),
        prod.clone(),
        prod.complement(),
        inv.clone(),
        inv.complement(),
    ])
}

fn cell_from(w: Option<CoverWitness>) -> (Option<usize>, Option<usize>, bool) {
    match w {
        Some(w) => (w.value, Some(w.lower_bound), w.optimal),
        None => (None, None, true),
    }
}

/// Additive and multiplicative covering numbers of the eight derived sets for
/// each prime and family, with the two proven additive bounds checked.
pub fn table_experiment(config: &TableConfig) -> Result<TableReport> {
    let opts = CoverOptions {
        node_budget: config.node_budget,
    };
    let mut cells = Vec::new();
    let mut bounds = Vec::new();
    for &p in &config.primes {
        if !is_prime(p as u64) || p < 5 {
            return Err(Error::NotPrimeField(format!("Z{p}")));
        }
        for &family in &config.families {
            let (a, b) = family.sets(p, config.seed)?;
            if a.is_empty() || b.is_empty() {
                return Err(Error::ConstructionFailed(format!("{} family is empty at p = {p}", family.name())));
            }
            let derived = rows(&a, &b)?;
            for (i, set) in derived.iter().enumerate() {
                let add = if set.is_empty() {
                    None
                } else {
                    Some(cov_exact_with(set, &GroupSet::full(set.group()), opts)?)
                };
                let nonzero = set.iter().any(|x| x != 0);
                let mult = if nonzero { Some(cov_mult(set, None, opts)?.cover) } else { None };
                for (op, w, class) in [("add", add, PREDICTED_CLASSES[0][i]), ("mult", mult, PREDICTED_CLASSES[1][i])] {
                    let (value, lower_bound, optimal) = cell_from(w);
                    cells.push(TableCell {
                        p,
                        family,
                        row: ROW_LABELS[i],
                        operation: op,
                        value,
                        lower_bound,
                        optimal,
                        predicted_class: class,
                    });
                }
            }
            let (alpha, beta) = (a.len() as f64 / p as f64, b.len() as f64 / p as f64);
            let found = |row: &str| {
                cells
                    .iter()
                    .rev()
                    .find(|c| c.row == row && c.operation == "add")
                    .and_then(|c| c.value)
                    .expect("nonempty row")
            };
            let checks = [
                ("A-A", p.div_ceil(a.len())),
                ("A+B", ((1.0 / alpha) * (1.0 / beta).ln()).ceil() as usize + 1),
            ];
            for (row, bound) in checks {
                let value = found(row);
                bounds.push(TableBound {
                    p,
                    family,
                    row,
                    value,
                    bound,
                    holds: value <= bound,
                });
            }
        }
    }
    Ok(TableReport {
        config: config.clone(),
        cells,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table() {
        let cfg = TableConfig {
            primes: vec![11],
            ..Default::default()
        };
        let r = table_experiment(&cfg).unwrap();
        assert_eq!(r.cells.len(), 3 * 8 * 2);
        assert!(r.bounds_hold());
        let csv = r.to_csv();
        assert!(csv.starts_with("p,family,row"));
        assert_eq!(csv.lines().count(), 49);
        assert!(table_experiment(&TableConfig { primes: vec![12], ..Default::default() }).is_err());
    }

    #[test]
    fn qr_rows() {
        let r = table_experiment(&TableConfig {
            primes: vec![13],
            families: vec![TableFamily::Qr],
            ..Default::default()
        })
        .unwrap();
        // QR * QR = QR, so AB covers F_p^* with two multipliers.
        let ab = r.cells.iter().find(|c| c.row == "AB" && c.operation == "mult").unwrap();
        assert_eq!(ab.value, Some(2));
        assert_eq!("qr".parse::<TableFamily>().unwrap(), TableFamily::Qr);
    }
}
