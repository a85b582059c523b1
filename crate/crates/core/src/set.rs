//! Dense bit-vector subsets of a [`Group`].

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;

#[derive(Clone)]
pub struct GroupSet {
    group: Arc<Group>,
    bits: Vec<u64>,
    len: usize,
}

/// Image of a dilation together with whether the factor was a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dilation {
    pub set: GroupSet,
    pub lambda: i64,
    pub unit: bool,
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl GroupSet {
    pub fn empty(group: &Arc<Group>) -> Self {
        GroupSet {
            group: group.clone(),
            bits: vec![0; words_for(group.order())],
            len: 0,
        }
    }

    pub fn full(group: &Arc<Group>) -> Self {
        let n = group.order();
        let mut bits = vec![u64::MAX; words_for(n)];
        mask_tail(&mut bits, n);
        GroupSet {
            group: group.clone(),
            bits,
            len: n,
        }
    }

    pub fn from_ranks<I: IntoIterator<Item = usize>>(group: &Arc<Group>, ranks: I) -> Result<Self> {
        let mut s = Self::empty(group);
        for r in ranks {
            if r >= group.order() {
                return Err(Error::RankOutOfRange {
                    rank: r,
                    order: group.order(),
                });
            }
            s.insert_raw(r);
        }
        Ok(s)
    }

    pub fn singleton(group: &Arc<Group>, rank: usize) -> Result<Self> {
        Self::from_ranks(group, [rank])
    }

    pub(crate) fn from_bits(group: &Arc<Group>, bits: Vec<u64>) -> Self {
        debug_assert_eq!(bits.len(), words_for(group.order()));
        let len = bits.iter().map(|w| w.count_ones() as usize).sum();
        GroupSet {
            group: group.clone(),
            bits,
            len,
        }
    }

    pub fn from_predicate(group: &Arc<Group>, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::empty(group);
        for r in 0..group.order() {
            if pred(r) {
                s.insert_raw(r);
            }
        }
        s
    }

    /// Subset of `G` whose bits are the low `N` bits of `mask`.
    pub fn from_mask(group: &Arc<Group>, mask: u64) -> Self {
        let n = group.order();
        let mut bits = vec![0u64; words_for(n)];
        if n > 0 {
            bits[0] = if n >= 64 { mask } else { mask & ((1u64 << n) - 1) };
        }
        Self::from_bits(group, bits)
    }

    pub(crate) fn insert_raw(&mut self, r: usize) {
        let (w, b) = (r / 64, r % 64);
        if self.bits[w] & (1 << b) == 0 {
            self.bits[w] |= 1 << b;
            self.len += 1;
        }
    }

    pub fn insert(&mut self, r: usize) -> Result<()> {
        if r >= self.group.order() {
            return Err(Error::RankOutOfRange {
                rank: r,
                order: self.group.order(),
            });
        }
        self.insert_raw(r);
        Ok(())
    }

    pub fn remove(&mut self, r: usize) {
        if r < self.group.order() {
            let (w, b) = (r / 64, r % 64);
            if self.bits[w] & (1 << b) != 0 {
                self.bits[w] &= !(1 << b);
                self.len -= 1;
            }
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn bits(&self) -> &[u64] {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, r: usize) -> bool {
        r < self.group.order() && self.bits[r / 64] >> (r % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.group.order()
    }

    pub fn density(&self) -> f64 {
        self.len as f64 / self.group.order() as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min_element(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn same_group(&self, other: &GroupSet) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                left: self.group.spec_string(),
                right: other.group.spec_string(),
            })
        }
    }

    fn zip_with(&self, other: &GroupSet, f: impl Fn(u64, u64) -> u64) -> Result<GroupSet> {
        self.same_group(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect();
        Ok(GroupSet::from_bits(&self.group, bits))
    }

    pub fn union(&self, other: &GroupSet) -> Result<GroupSet> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &GroupSet) -> Result<GroupSet> {
        self.zip_with(other, |a, b| a & b)
    }

    /// `self \ other`.
    pub fn minus(&self, other: &GroupSet) -> Result<GroupSet> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &GroupSet) -> Result<bool> {
        self.same_group(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & !b == 0))
    }

    pub fn intersects(&self, other: &GroupSet) -> Result<bool> {
        self.same_group(other)?;
        Ok(self.bits.iter().zip(&other.bits).any(|(&a, &b)| a & b != 0))
    }

    pub fn complement(&self) -> GroupSet {
        let n = self.group.order();
        let mut bits: Vec<u64> = self.bits.iter().map(|w| !w).collect();
        mask_tail(&mut bits, n);
        GroupSet {
            group: self.group.clone(),
            bits,
            len: n - self.len,
        }
    }

    /// `A + x`.
    pub fn translate(&self, x: usize) -> GroupSet {
        let g = &self.group;
        let n = g.order();
        let x = x % n;
        if x == 0 {
            return self.clone();
        }
        if g.is_cyclic_factor_list() {
            let bits = rotate_left(&self.bits, n, x);
            return GroupSet {
                group: g.clone(),
                bits,
                len: self.len,
            };
        }
        let mut out = GroupSet::empty(g);
        for a in self.iter() {
            out.insert_raw(g.add_raw(a, x));
        }
        out
    }

    /// `-A`.
    pub fn negate(&self) -> GroupSet {
        let g = &self.group;
        let mut out = GroupSet::empty(g);
        for a in self.iter() {
            out.insert_raw(g.neg_raw(a));
        }
        out
    }

    pub fn dilate(&self, lambda: i64) -> Dilation {
        let g = &self.group;
        let mut out = GroupSet::empty(g);
        for a in self.iter() {
            out.insert_raw(g.scale_raw(lambda, a));
        }
        Dilation {
            set: out,
            lambda,
            unit: g.is_unit(lambda),
        }
    }

    pub fn cardinality_check(&self) -> bool {
        self.len == self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }
}

fn mask_tail(bits: &mut [u64], n: usize) {
    let rem = n % 64;
    if rem != 0 {
        if let Some(last) = bits.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

fn get_bit(bits: &[u64], i: usize) -> u64 {
    bits[i / 64] >> (i % 64) & 1
}

/// Rotation of an `n`-bit vector: bit `i` moves to `(i + x) mod n`.
pub(crate) fn rotate_left(bits: &[u64], n: usize, x: usize) -> Vec<u64> {
    let words = bits.len();
    let mut out = vec![0u64; words];
    if n <= 64 {
        let w = bits[0];
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        out[0] = ((w << x) | (w >> (n - x))) & mask;
        return out;
    }
    // low part: bits [0, n - x) shift up by x
    shift_or(bits, &mut out, 0, n - x, x);
    // high part: bits [n - x, n) shift down to [0, x)
    for i in (n - x)..n {
        if get_bit(bits, i) == 1 {
            let j = i + x - n;
            out[j / 64] |= 1 << (j % 64);
        }
    }
    mask_tail(&mut out, n);
    out
}

/// Copies bits `[start, end)` of `src` into `dst` at offset `+shift`, word-wise.
fn shift_or(src: &[u64], dst: &mut [u64], start: usize, end: usize, shift: usize) {
    if start >= end {
        return;
    }
    let ws = shift / 64;
    let bs = shift % 64;
    let last_src_word = (end - 1) / 64;
    for (i, &word) in src.iter().enumerate().take(last_src_word + 1).skip(start / 64) {
        let mut w = word;
        if i == last_src_word && end % 64 != 0 {
            w &= (1u64 << (end % 64)) - 1;
        }
        if w == 0 {
            continue;
        }
        let t = i + ws;
        if t < dst.len() {
            dst[t] |= w << bs;
        }
        if bs != 0 && t + 1 < dst.len() {
            dst[t + 1] |= w >> (64 - bs);
        }
    }
}

impl PartialEq for GroupSet {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.bits == other.bits
    }
}

impl Eq for GroupSet {}

impl Hash for GroupSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.group.factors().hash(state);
        self.bits.hash(state);
    }
}

impl fmt::Debug for GroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSet({} {:?})", self.group, self.to_vec())
    }
}

impl fmt::Display for GroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|r| r.to_string()).collect();
        write!(f, "[{}]", items.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct SetRepr {
    group: Group,
    elements: Vec<usize>,
}

impl Serialize for GroupSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SetRepr {
            group: (*self.group).clone(),
            elements: self.to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SetRepr::deserialize(deserializer)?;
        GroupSet::from_ranks(&Arc::new(repr.group), repr.elements).map_err(serde::de::Error::custom)
    }
}

/// Parses a JSON array of ranks (`[0,1,5]`) or coordinate tuples (`[[0,1],[1,0]]`).
pub fn parse_set_literal(group: &Arc<Group>, literal: &str) -> Result<GroupSet> {
    let err = |detail: String| Error::Parse {
        what: "set literal",
        detail,
    };
    let value: serde_json::Value =
        serde_json::from_str(literal.trim()).map_err(|e| err(e.to_string()))?;
    let items = value
        .as_array()
        .ok_or_else(|| err("expected a JSON array".into()))?;
    let mut ranks = Vec::with_capacity(items.len());
    for item in items {
        let rank = match item {
            serde_json::Value::Number(n) => n
                .as_u64()
                .ok_or_else(|| err(format!("{n} is not a nonnegative integer")))?
                as usize,
            serde_json::Value::Array(coords) => {
                let digits = coords
                    .iter()
                    .map(|c| c.as_u64().map(|v| v as usize))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| err(format!("bad coordinate tuple {item}")))?;
                group.rank_of(&digits)?
            }
            other => return Err(err(format!("unexpected entry {other}"))),
        };
        ranks.push(rank);
    }
    GroupSet::from_ranks(group, ranks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: &str) -> Arc<Group> {
        Arc::new(spec.parse().unwrap())
    }

    #[test]
    fn rotation_matches_elementwise() {
        for n in [1usize, 5, 63, 64, 65, 127, 128, 130, 200] {
            let grp = g(&format!("Z{n}"));
            let a = GroupSet::from_predicate(&grp, |r| (r * 7 + r / 3) % 5 < 2);
            for x in 0..n {
                let fast = a.translate(x);
                let slow = GroupSet::from_ranks(&grp, a.iter().map(|r| (r + x) % n)).unwrap();
                assert_eq!(fast, slow, "n={n} x={x}");
                assert!(fast.cardinality_check());
            }
        }
    }

    #[test]
    fn complement_involution() {
        let grp = g("Z70");
        let a = GroupSet::from_ranks(&grp, [0, 3, 69]).unwrap();
        assert_eq!(a.complement().len(), 67);
        assert_eq!(a.complement().complement(), a);
    }

    #[test]
    fn dilation_examples() {
        let z12 = g("Z12");
        let a = GroupSet::from_ranks(&z12, [0, 1, 2]).unwrap();
        let d = a.dilate(5);
        assert_eq!(d.set.to_vec(), vec![0, 5, 10]);
        assert!(d.unit);
        let b = GroupSet::from_ranks(&z12, [0, 1, 2, 3]).unwrap();
        let d = b.dilate(4);
        assert_eq!(d.set.to_vec(), vec![0, 4, 8]);
        assert!(!d.unit);
    }

    #[test]
    fn literals() {
        let grp = g("Z6xZ4");
        let a = parse_set_literal(&grp, "[[5,3],[0,1]]").unwrap();
        assert_eq!(a.to_vec(), vec![1, 23]);
        let b = parse_set_literal(&grp, "[23, 1]").unwrap();
        assert_eq!(a, b);
        assert!(parse_set_literal(&grp, "[24]").is_err());
        assert!(parse_set_literal(&grp, "[[6,0]]").is_err());
        assert!(parse_set_literal(&grp, "{}").is_err());
        assert!(parse_set_literal(&grp, "[-1]").is_err());
    }

    #[test]
    fn serde_round_trip() {
        let grp = g("Z2^3");
        let a = GroupSet::from_ranks(&grp, [1, 6]).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"group":"Z2^3","elements":[1,6]}"#);
        let back: GroupSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn mismatched_groups_rejected() {
        let a = GroupSet::full(&g("Z4"));
        let b = GroupSet::full(&g("Z2^2"));
        assert!(matches!(a.union(&b), Err(Error::GroupMismatch { .. })));
    }
}
