//! Multiplicative covering and universality in `F_p^*` through discrete logarithms.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{least_prime_factor, Group};
use crate::set::GroupSet;
use crate::solver::cover::{cov_exact_with, CoverOptions, CoverWitness};
use crate::solver::universality::{un_exact_with, UniversalityReport};

/// Logarithms to the smallest primitive root of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DlogTable {
    p: usize,
    root: usize,
    log: Vec<usize>,
    exp: Vec<usize>,
}

impl DlogTable {
    pub fn new(p: usize) -> Result<Self> {
        if !crate::group::is_prime(p as u64) {
            return Err(Error::NotPrimeField(format!("Z{p}")));
        }
        let root = primitive_root(p);
        let mut exp = vec![0; p - 1];
        let mut log = vec![usize::MAX; p];
        let mut v = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = v;
            log[v] = i;
            v = v * root % p;
        }
        Ok(DlogTable { p, root, log, exp })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `log_g(x)` for nonzero `x`.
    pub fn log(&self, x: usize) -> Option<usize> {
        (x % self.p != 0).then(|| self.log[x % self.p])
    }

    pub fn exp(&self, e: usize) -> usize {
        self.exp[e % (self.p - 1)]
    }

    /// Image of `A ∩ F_p^*` in `Z/(p-1)`.
    pub fn log_set(&self, a: &GroupSet, target: &Arc<Group>) -> GroupSet {
        GroupSet::from_ranks(target, a.iter().filter_map(|x| self.log(x))).expect("logs lie in [0, p-1)")
    }
}

/// Smallest generator of `F_p^*`.
pub fn primitive_root(p: usize) -> usize {
    if p == 2 {
        return 1;
    }
    let order = (p - 1) as u64;
    let mut factors = Vec::new();
    let mut m = order;
    while let Some(q) = least_prime_factor(m) {
        factors.push(q);
        while m % q == 0 {
            m /= q;
        }
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g as u64, order / q, p as u64) != 1))
        .expect("every prime has a primitive root")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn setup(a: &GroupSet) -> Result<(DlogTable, Arc<Group>, GroupSet, bool)> {
    let p = a
        .group()
        .prime_field()
        .ok_or_else(|| Error::NotPrimeField(a.group().spec_string()))?;
    let table = DlogTable::new(p)?;
    let target = Arc::new(Group::cyclic(p - 1)?);
    let image = table.log_set(a, &target);
    if image.is_empty() {
        return Err(Error::EmptySet("A without 0"));
    }
    Ok((table, target, image, a.contains(0)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultCover {
    /// Cover of the log-image inside `Z/(p-1)`.
    pub cover: CoverWitness,
    /// Multipliers `g^x` realizing the witness in `F_p^*`.
    pub multipliers: Vec<usize>,
    pub primitive_root: usize,
    /// Whether `0` was present in `A` and ignored.
    pub zero_dropped: bool,
}

/// `cov^x(A; E)`: least `|X|` with `E \ {0} ⊆ A X` inside `F_p^*`.
pub fn cov_mult(a: &GroupSet, e: Option<&GroupSet>, opts: CoverOptions) -> Result<MultCover> {
    let (table, target, image, zero_dropped) = setup(a)?;
    let e_image = match e {
        Some(e) => {
            a.same_group(e)?;
            table.log_set(e, &target)
        }
        None => GroupSet::full(&target),
    };
    let cover = cov_exact_with(&image, &e_image, opts)?;
    let multipliers = cover.witness.iter().map(|&x| table.exp(x)).collect();
    Ok(MultCover {
        cover,
        multipliers,
        primitive_root: table.root(),
        zero_dropped,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultUniversality {
    pub report: UniversalityReport,
    pub primitive_root: usize,
    pub zero_dropped: bool,
}

/// `un^x(A)`, the universality of the log-image of `A ∩ F_p^*` in `Z/(p-1)`.
pub fn un_mult(a: &GroupSet, opts: CoverOptions) -> Result<MultUniversality> {
    let (table, _, image, zero_dropped) = setup(a)?;
    Ok(MultUniversality {
        report: un_exact_with(&image, opts, &[])?,
        primitive_root: table.root(),
        zero_dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setops::product_set;

    fn z(p: usize) -> Arc<Group> {
        Arc::new(Group::cyclic(p).unwrap())
    }

    #[test]
    fn roots_and_logs() {
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(11), 2);
        assert_eq!(primitive_root(41), 6);
        let t = DlogTable::new(7).unwrap();
        assert_eq!(t.log(2), Some(2));
        assert_eq!(t.log(4), Some(4));
        assert_eq!(t.log(0), None);
        assert!(DlogTable::new(9).is_err());
    }

    #[test]
    fn examples() {
        let f7 = z(7);
        let star = GroupSet::from_ranks(&f7, 1..7).unwrap();
        assert_eq!(cov_mult(&star, None, CoverOptions::default()).unwrap().cover.value, Some(1));
        let qr = GroupSet::from_ranks(&f7, [1, 2, 4]).unwrap();
        let r = cov_mult(&qr, None, CoverOptions::default()).unwrap();
        assert_eq!(r.cover.value, Some(2));
        assert!(!r.zero_dropped);
        let x = GroupSet::from_ranks(&f7, r.multipliers.iter().copied()).unwrap();
        assert_eq!(product_set(&qr, &x).unwrap(), star);
        let with_zero = GroupSet::from_ranks(&f7, [0, 1, 2, 4]).unwrap();
        assert!(cov_mult(&with_zero, None, CoverOptions::default()).unwrap().zero_dropped);
        assert!(cov_mult(&GroupSet::from_ranks(&f7, [0]).unwrap(), None, CoverOptions::default()).is_err());
        let z8 = z(8);
        assert!(matches!(
            cov_mult(&GroupSet::full(&z8), None, CoverOptions::default()),
            Err(Error::NotPrimeField(_))
        ));
    }

    #[test]
    fn dilation_invariance() {
        let f13 = z(13);
        let a = GroupSet::from_ranks(&f13, [1, 3, 4, 8]).unwrap();
        let base = cov_mult(&a, None, CoverOptions::default()).unwrap().cover.value;
        for lambda in 1..13 {
            let d = a.dilate(lambda).set;
            assert_eq!(cov_mult(&d, None, CoverOptions::default()).unwrap().cover.value, base);
        }
        let u = un_mult(&a, CoverOptions::default()).unwrap();
        assert!(u.report.un.finite().is_some());
    }
}
