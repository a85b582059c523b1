//! Finite abelian groups `Z/n_1 x ... x Z/n_r` with a mixed-radix element ranking.
//!
//! The rank of `(a_1, ..., a_r)` is `sum a_i * stride_i` where the first factor
//! is the most significant digit. With this convention the rank of a tuple
//! `(g_1, ..., g_m)` in `G^m` is `sum rank(g_i) * N^(m-i)`, so power groups
//! and Cartesian products can reuse ranks directly.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    factors: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
    exponent: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element(pub usize);

impl Element {
    pub fn rank(self) -> usize {
        self.0
    }
}

/// Index of the character `g -> prod exp(2 pi i c_j a_j / n_j)`, where `(c_j)`
/// are the mixed-radix digits of the index. Index 0 is the principal character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharacterIndex(pub usize);

/// `exp(2 pi i num / den)` with `num / den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub num: usize,
    pub den: usize,
}

impl RootOfUnity {
    pub fn new(num: usize, den: usize) -> Self {
        let num = num % den;
        let g = num.gcd(&den);
        if num == 0 {
            return RootOfUnity { num: 0, den: 1 };
        }
        RootOfUnity {
            num: num / g,
            den: den / g,
        }
    }

    pub fn value(self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.num as f64 / self.den as f64)
    }

    /// `|zeta - 1| = 2 |sin(pi num / den)|`.
    pub fn distance_to_one(self) -> f64 {
        let k = self.num.min(self.den - self.num);
        2.0 * (std::f64::consts::PI * k as f64 / self.den as f64).sin()
    }
}

impl Group {
    pub fn new(factors: &[usize]) -> Result<Self> {
        Self::with_cap(factors, DEFAULT_ORDER_CAP)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn with_cap(factors: &[usize], cap: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyFactorList);
        }
        let mut order: u128 = 1;
        for &n in factors {
            if n == 0 {
                return Err(Error::InvalidFactor(n));
            }
            order = order.saturating_mul(n as u128);
        }
        if order > cap as u128 {
            return Err(Error::OrderCap { order, cap });
        }
        let order = order as usize;
        let mut strides = vec![1; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        let exponent = factors.iter().fold(1usize, |acc, &n| acc.lcm(&n));
        Ok(Group {
            factors: factors.to_vec(),
            strides,
            order,
            exponent,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn is_cyclic_factor_list(&self) -> bool {
        self.factors.len() == 1
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// `Some(p)` when the group is literally `Z/p` with `p` prime.
    pub fn prime_field(&self) -> Option<usize> {
        match self.factors.as_slice() {
            [p] if is_prime(*p as u64) => Some(*p),
            _ => None,
        }
    }

    pub fn element(&self, rank: usize) -> Result<Element> {
        self.check(rank)?;
        Ok(Element(rank))
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.order).map(Element)
    }

    pub fn zero(&self) -> Element {
        Element(0)
    }

    fn check(&self, rank: usize) -> Result<()> {
        if rank < self.order {
            Ok(())
        } else {
            Err(Error::RankOutOfRange {
                rank,
                order: self.order,
            })
        }
    }

    pub fn digits(&self, rank: usize) -> Vec<usize> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| (rank / s) % n)
            .collect()
    }

    pub fn rank_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.factors.len() {
            return Err(Error::Arity {
                expected: self.factors.len(),
                got: digits.len(),
            });
        }
        let mut rank = 0;
        for ((&d, &n), &s) in digits.iter().zip(&self.factors).zip(&self.strides) {
            if d >= n {
                return Err(Error::Parse {
                    what: "coordinate tuple",
                    detail: format!("coordinate {d} is not below {n}"),
                });
            }
            rank += d * s;
        }
        Ok(rank)
    }

    pub fn add(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a.0)?;
        self.check(b.0)?;
        Ok(Element(self.add_raw(a.0, b.0)))
    }

    pub fn neg(&self, a: Element) -> Result<Element> {
        self.check(a.0)?;
        Ok(Element(self.neg_raw(a.0)))
    }

    pub fn sub(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a.0)?;
        self.check(b.0)?;
        Ok(Element(self.sub_raw(a.0, b.0)))
    }

    pub fn scalar_mul(&self, lambda: i64, a: Element) -> Result<Element> {
        self.check(a.0)?;
        Ok(Element(self.scale_raw(lambda, a.0)))
    }

    /// `gcd(lambda, N) = 1`.
    pub fn is_unit(&self, lambda: i64) -> bool {
        (lambda.unsigned_abs() as u128).gcd(&(self.order as u128)) == 1
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: usize, b: usize) -> usize {
        if self.factors.len() == 1 {
            let s = a + b;
            return if s >= self.order { s - self.order } else { s };
        }
        let mut out = 0;
        for (&n, &s) in self.factors.iter().zip(&self.strides) {
            let d = (a / s) % n + (b / s) % n;
            out += if d >= n { d - n } else { d } * s;
        }
        out
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: usize) -> usize {
        if self.factors.len() == 1 {
            return if a == 0 { 0 } else { self.order - a };
        }
        let mut out = 0;
        for (&n, &s) in self.factors.iter().zip(&self.strides) {
            let d = (a / s) % n;
            out += if d == 0 { 0 } else { n - d } * s;
        }
        out
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: usize, b: usize) -> usize {
        self.add_raw(a, self.neg_raw(b))
    }

    pub(crate) fn scale_raw(&self, lambda: i64, a: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.factors.iter().zip(&self.strides) {
            let d = ((a / s) % n) as i128;
            let v = (d * lambda as i128).rem_euclid(n as i128) as usize;
            out += v * s;
        }
        out
    }

    /// `G^m`; factor list repeated `m` times.
    pub fn power(&self, m: usize) -> Result<Group> {
        self.power_with_cap(m, DEFAULT_ORDER_CAP)
    }

    pub fn power_with_cap(&self, m: usize, cap: usize) -> Result<Group> {
        if m == 0 {
            return Err(Error::InvalidParameter("power exponent must be >= 1".into()));
        }
        let order = (self.order as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if order > cap as u128 {
            return Err(Error::OrderCap { order, cap });
        }
        let factors: Vec<usize> = (0..m).flat_map(|_| self.factors.iter().copied()).collect();
        Group::with_cap(&factors, cap)
    }

    /// `G x H` with `rank(g, h) = rank(g) * |H| + rank(h)`.
    pub fn product(&self, other: &Group) -> Result<Group> {
        let factors: Vec<usize> = self.factors.iter().chain(&other.factors).copied().collect();
        Group::new(&factors)
    }

    /// Exponent `e` with `chi(g) = exp(2 pi i e / exponent)`.
    #[inline]
    pub(crate) fn pairing(&self, chi: usize, g: usize) -> usize {
        let l = self.exponent;
        let mut e = 0usize;
        for (&n, &s) in self.factors.iter().zip(&self.strides) {
            let c = (chi / s) % n;
            let a = (g / s) % n;
            e = (e + (c * a % n) * (l / n)) % l;
        }
        e
    }

    pub fn character_value(&self, chi: CharacterIndex, g: Element) -> Result<RootOfUnity> {
        self.check(chi.0)?;
        self.check(g.0)?;
        Ok(RootOfUnity::new(self.pairing(chi.0, g.0), self.exponent))
    }

    pub fn characters(&self) -> impl Iterator<Item = CharacterIndex> {
        (0..self.order).map(CharacterIndex)
    }

    /// Canonical spec string, e.g. `Z6xZ4` or `Z2^4`.
    pub fn spec_string(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.factors.len() {
            let n = self.factors[i];
            let mut j = i + 1;
            while j < self.factors.len() && self.factors[j] == n {
                j += 1;
            }
            if j - i > 1 {
                parts.push(format!("Z{}^{}", n, j - i));
            } else {
                parts.push(format!("Z{n}"));
            }
            i = j;
        }
        parts.join("x")
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

/// Parses `Z12`, `Z2^4`, `Z6xZ4` (case-insensitive, no whitespace).
impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |detail: String| Error::Parse {
            what: "group spec",
            detail,
        };
        if s.is_empty() {
            return Err(err("empty string".into()));
        }
        if s.chars().any(char::is_whitespace) {
            return Err(err(format!("whitespace in {s:?}")));
        }
        let lower = s.to_ascii_lowercase();
        let mut factors = Vec::new();
        for part in lower.split('x') {
            let body = part
                .strip_prefix('z')
                .ok_or_else(|| err(format!("factor {part:?} must start with Z")))?;
            let (base, rep) = match body.split_once('^') {
                Some((b, r)) => (b, r),
                None => (body, "1"),
            };
            let n: usize = base
                .parse()
                .map_err(|_| err(format!("bad cyclic order in {part:?}")))?;
            let r: usize = rep
                .parse()
                .map_err(|_| err(format!("bad repetition in {part:?}")))?;
            if r == 0 {
                return Err(err(format!("zero repetition in {part:?}")));
            }
            factors.extend(std::iter::repeat(n).take(r));
        }
        Group::new(&factors)
    }
}

impl Serialize for Group {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.spec_string())
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn least_prime_factor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return Some(d);
        }
        d += 1;
    }
    Some(n)
}
