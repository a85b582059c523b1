//! Universality `un(A)` and the proportions `U_n(A)`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::set::GroupSet;
use crate::setops::{self, DEFAULT_PROFILE_CAP};
use crate::solver::cover::{cov_exact_with, CoverOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnValue {
    Finite { value: usize },
    Infinite,
    /// The cover search ran out of budget; `un` lies in `[lower, upper]`.
    Indeterminate { lower: usize, upper: usize },
}

impl UnValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            UnValue::Finite { value } => Some(value),
            _ => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, UnValue::Infinite)
    }

    /// Exact value with infinity as `None`; errors when indeterminate.
    pub fn resolved(self) -> Result<Option<usize>> {
        match self {
            UnValue::Finite { value } => Ok(Some(value)),
            UnValue::Infinite => Ok(None),
            UnValue::Indeterminate { lower, upper } => Err(Error::InvalidParameter(format!(
                "un is only known to lie in [{lower}, {upper}]"
            ))),
        }
    }
}

pub(crate) fn ratio_string<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UProfileEntry {
    pub n: usize,
    #[serde(serialize_with = "ratio_string")]
    pub value: BigRational,
    /// `U_n(A)^(1/n)`.
    pub u_bar: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniversalityReport {
    pub un: UnValue,
    /// Translates `X` with `|X| = un + 1` and empty `∩ (A + x)`.
    pub witnessing_failure: Option<Vec<usize>>,
    pub u_profile: Vec<UProfileEntry>,
    pub nodes: u64,
}

pub fn un_exact(a: &GroupSet) -> Result<UniversalityReport> {
    un_exact_with(a, CoverOptions::default(), &[])
}

/// `un(A) = cov(A^c) - 1`, with the `U_n(A)` profile for each `n` in `profile`.
pub fn un_exact_with(a: &GroupSet, opts: CoverOptions, profile: &[usize]) -> Result<UniversalityReport> {
    if a.is_empty() {
        return Err(Error::EmptySet("A"));
    }
    let mut u_profile = Vec::with_capacity(profile.len());
    for &n in profile {
        let value = u_n(a, n)?;
        u_profile.push(UProfileEntry {
            n,
            u_bar: crate::scalar::ratio_to_f64(&value).powf(1.0 / n as f64),
            value,
        });
    }
    if a.is_full() {
        return Ok(UniversalityReport {
            un: UnValue::Infinite,
            witnessing_failure: None,
            u_profile,
            nodes: 0,
        });
    }
    let comp = a.complement();
    let cover = cov_exact_with(&comp, &crate::set::GroupSet::full(a.group()), opts)?;
    let value = cover.value.expect("nonempty complement covers G");
    let un = if cover.optimal {
        UnValue::Finite { value: value - 1 }
    } else {
        UnValue::Indeterminate {
            lower: cover.lower_bound - 1,
            upper: value - 1,
        }
    };
    Ok(UniversalityReport {
        un,
        witnessing_failure: Some(cover.witness),
        u_profile,
        nodes: cover.nodes,
    })
}

/// `un(A)` as the shortest path from `G` to the empty profile under
/// `T -> T ∩ (A - x)`, with profiles taken up to translation.
pub fn un_by_profiles(a: &GroupSet) -> Result<UnValue> {
    un_by_profiles_with_cap(a, DEFAULT_PROFILE_CAP)
}

pub fn un_by_profiles_with_cap(a: &GroupSet, cap: usize) -> Result<UnValue> {
    if a.is_empty() {
        return Err(Error::EmptySet("A"));
    }
    if a.is_full() {
        return Ok(UnValue::Infinite);
    }
    let g = a.group();
    let shifted: Vec<GroupSet> = (0..g.order()).map(|x| a.translate(g.neg_raw(x))).collect();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let start = crate::set::GroupSet::full(g);
    seen.insert(start.bits().to_vec());
    let mut frontier = vec![start];
    let mut depth = 0;
    loop {
        depth += 1;
        let mut next = Vec::new();
        for t in &frontier {
            for s in &shifted {
                let meet = t.intersection(s)?;
                if meet.is_empty() {
                    return Ok(UnValue::Finite { value: depth - 1 });
                }
                let key = canonical_key(&meet);
                if seen.insert(key) {
                    next.push(meet);
                    if seen.len() > cap {
                        return Err(Error::ProfileCap { cap });
                    }
                }
            }
        }
        frontier = next;
    }
}

fn canonical_key(t: &GroupSet) -> Vec<u64> {
    let g = t.group();
    t.iter()
        .map(|x| t.translate(g.neg_raw(x)).bits().to_vec())
        .min()
        .unwrap_or_default()
}

/// `un(A)` by scanning tuples directly: the least `k` with some `k`-tuple
/// `(x_1..x_k)` such that no `s` has `s + x_i ∈ A` for all `i`, minus one.
/// Repeated coordinates never help, so only `k`-subsets are scanned.
pub fn un_bruteforce(a: &GroupSet) -> Result<UnValue> {
    let g = a.group();
    let n = g.order();
    if n > 16 {
        return Err(Error::EnumerationCap {
            size: 1u128 << n,
            cap: 1 << 16,
        });
    }
    if a.is_empty() {
        return Err(Error::EmptySet("A"));
    }
    if a.is_full() {
        return Ok(UnValue::Infinite);
    }
    let fails = |xs: &[usize]| (0..n).all(|s| xs.iter().any(|&x| !a.contains(g.add_raw(s, x))));
    for k in 1..=n {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if fails(&idx) {
                return Ok(UnValue::Finite { value: k - 1 });
            }
            let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    unreachable!("the full translate set has empty intersection for A != G")
}

/// `U_n(A) = |A^n - Delta_n(G)| / N^n`.
pub fn u_n(a: &GroupSet, n: usize) -> Result<BigRational> {
    if a.is_empty() {
        return Err(Error::EmptySet("A"));
    }
    let g = a.group();
    let count = setops::higher_diff_size(a, n, &crate::set::GroupSet::full(g))?;
    let total = (g.order() as u128).pow(n as u32);
    Ok(BigRational::new(BigInt::from(count), BigInt::from(total)))
}

/// `U_n(A)` for each `n` in `ns`.
pub fn u_profile(a: &GroupSet, ns: &[usize]) -> Result<HashMap<usize, BigRational>> {
    ns.iter().map(|&n| Ok((n, u_n(a, n)?))).collect()
}
