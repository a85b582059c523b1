//! Minimum covers `E ⊆ A + X` by branch and bound, plus the greedy cover.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::set::{words_for, GroupSet};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverOptions {
    pub node_budget: u64,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoverStatus {
    Optimal,
    Heuristic,
    Indeterminate,
    Infeasible,
}

/// Result of a covering computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverWitness {
    /// Size of the best cover found, `None` when no cover exists.
    pub value: Option<usize>,
    /// Translates `x` of the best cover found.
    pub witness: Vec<usize>,
    pub optimal: bool,
    pub budget_exhausted: bool,
    pub lower_bound: usize,
    pub upper_bound: Option<usize>,
    pub nodes: u64,
}

impl CoverWitness {
    pub fn status(&self) -> CoverStatus {
        match (self.value, self.optimal, self.budget_exhausted) {
            (None, _, _) => CoverStatus::Infeasible,
            (Some(_), true, _) => CoverStatus::Optimal,
            (Some(_), false, true) => CoverStatus::Indeterminate,
            (Some(_), false, false) => CoverStatus::Heuristic,
        }
    }

    /// The certified value, or `None` when it is not known to be optimal.
    pub fn exact(&self) -> Option<usize> {
        if self.optimal {
            self.value
        } else {
            None
        }
    }

    fn trivial_empty() -> Self {
        CoverWitness {
            value: Some(0),
            witness: vec![],
            optimal: true,
            budget_exhausted: false,
            lower_bound: 0,
            upper_bound: Some(0),
            nodes: 0,
        }
    }
}

fn check_inputs(a: &GroupSet, e: &GroupSet) -> Result<bool> {
    a.same_group(e)?;
    if e.is_empty() {
        return Ok(false);
    }
    if a.is_empty() {
        return Err(Error::EmptySet("A"));
    }
    Ok(true)
}

/// Greedy cover: repeatedly take the translate covering the most uncovered points,
/// ties to the smallest translate rank.
pub fn cov_greedy(a: &GroupSet, e: &GroupSet) -> Result<CoverWitness> {
    if !check_inputs(a, e)? {
        return Ok(CoverWitness::trivial_empty());
    }
    let n = a.group().order();
    let translates: Vec<GroupSet> = (0..n).map(|x| a.translate(x)).collect();
    let mut uncovered = e.clone();
    let mut witness = Vec::new();
    while !uncovered.is_empty() {
        let mut best = (0usize, 0usize);
        for (x, t) in translates.iter().enumerate() {
            let gain = t.intersection(&uncovered)?.len();
            if gain > best.0 {
                best = (gain, x);
            }
        }
        debug_assert!(best.0 > 0);
        witness.push(best.1);
        uncovered = uncovered.minus(&translates[best.1])?;
    }
    let value = witness.len();
    Ok(CoverWitness {
        value: Some(value),
        witness,
        optimal: false,
        budget_exhausted: false,
        lower_bound: e.len().div_ceil(a.len()),
        upper_bound: Some(value),
        nodes: 0,
    })
}

pub fn cov_exact(a: &GroupSet, e: &GroupSet) -> Result<CoverWitness> {
    cov_exact_with(a, e, CoverOptions::default())
}

/// `cov(A) = cov(A; G)`.
pub fn cov(a: &GroupSet) -> Result<CoverWitness> {
    cov_exact(a, &GroupSet::full(a.group()))
}

type Bits = Vec<u64>;

#[inline]
fn popcount_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[inline]
fn test_bit(a: &[u64], i: usize) -> bool {
    a[i / 64] >> (i % 64) & 1 == 1
}

struct Search<'a> {
    cands: &'a [Bits],
    labels: &'a [usize],
    covers: &'a [Vec<usize>],
    forbidden: Vec<bool>,
    best: usize,
    best_set: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    universe: usize,
}

impl Search<'_> {
    fn lower_bound(&self, uncovered: &[u64], remaining: usize) -> usize {
        let mut max_gain = 0;
        for (i, c) in self.cands.iter().enumerate() {
            if !self.forbidden[i] {
                max_gain = max_gain.max(popcount_and(c, uncovered));
            }
        }
        if max_gain == 0 {
            return usize::MAX;
        }
        let lb_count = remaining.div_ceil(max_gain);
        // elements pairwise without a common usable translate need distinct translates
        let mut blocked = vec![0u64; uncovered.len()];
        let mut packing = 0;
        for e in 0..self.universe {
            if !test_bit(uncovered, e) || test_bit(&blocked, e) {
                continue;
            }
            packing += 1;
            for &ci in &self.covers[e] {
                if !self.forbidden[ci] {
                    for (b, w) in blocked.iter_mut().zip(&self.cands[ci]) {
                        *b |= w;
                    }
                }
            }
        }
        lb_count.max(packing)
    }

    fn run(&mut self, uncovered: &mut Bits, remaining: usize) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if remaining == 0 {
            if self.chosen.len() < self.best {
                self.best = self.chosen.len();
                self.best_set = self.chosen.iter().map(|&i| self.labels[i]).collect();
            }
            return;
        }
        let depth = self.chosen.len();
        if depth + 1 >= self.best {
            return;
        }
        // branch on the uncovered element with the fewest usable translates
        let mut pivot = None;
        let mut fewest = usize::MAX;
        for e in 0..self.universe {
            if !test_bit(uncovered, e) {
                continue;
            }
            let avail = self.covers[e].iter().filter(|&&c| !self.forbidden[c]).count();
            if avail < fewest {
                fewest = avail;
                pivot = Some(e);
                if avail <= 1 {
                    break;
                }
            }
        }
        let pivot = match pivot {
            Some(p) if fewest > 0 => p,
            _ => return,
        };
        let lb = self.lower_bound(uncovered, remaining);
        if lb == usize::MAX || depth + lb >= self.best {
            return;
        }
        let mut options: Vec<(usize, usize)> = self.covers[pivot]
            .iter()
            .filter(|&&c| !self.forbidden[c])
            .map(|&c| (popcount_and(&self.cands[c], uncovered), c))
            .collect();
        options.sort_by(|x, y| y.0.cmp(&x.0).then(self.labels[x.1].cmp(&self.labels[y.1])));
        let mut banned = Vec::with_capacity(options.len());
        for &(gain, c) in &options {
            let saved: Bits = uncovered.clone();
            for (u, w) in uncovered.iter_mut().zip(&self.cands[c]) {
                *u &= !w;
            }
            self.chosen.push(c);
            self.run(uncovered, remaining - gain);
            self.chosen.pop();
            *uncovered = saved;
            if self.exhausted || depth + 1 >= self.best {
                break;
            }
            // later siblings may not reuse this translate
            self.forbidden[c] = true;
            banned.push(c);
        }
        for c in banned {
            self.forbidden[c] = false;
        }
    }
}

/// Exact `cov(A; E) = min |X|` over `E ⊆ A + X`.
pub fn cov_exact_with(a: &GroupSet, e: &GroupSet, opts: CoverOptions) -> Result<CoverWitness> {
    if !check_inputs(a, e)? {
        return Ok(CoverWitness::trivial_empty());
    }
    let n = a.group().order();
    let universe: Vec<usize> = e.to_vec();
    let mut pos = vec![usize::MAX; n];
    for (i, &r) in universe.iter().enumerate() {
        pos[r] = i;
    }
    let words = words_for(universe.len());

    // restricted translates, deduplicated (smallest translate kept)
    let mut seen: HashMap<Bits, usize> = HashMap::new();
    let mut cands: Vec<Bits> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    for x in 0..n {
        let mut bits = vec![0u64; words];
        let mut any = false;
        for r in a.translate(x).iter() {
            let p = pos[r];
            if p != usize::MAX {
                bits[p / 64] |= 1 << (p % 64);
                any = true;
            }
        }
        if any && !seen.contains_key(&bits) {
            seen.insert(bits.clone(), x);
            cands.push(bits);
            labels.push(x);
        }
    }
    // drop translates strictly contained in another
    if cands.len() <= 2048 {
        let m = cands.len();
        let sizes: Vec<usize> = cands.iter().map(|c| c.iter().map(|w| w.count_ones() as usize).sum()).collect();
        let mut keep = vec![true; m];
        for i in 0..m {
            for j in 0..m {
                if i != j
                    && keep[j]
                    && sizes[i] < sizes[j]
                    && cands[i].iter().zip(&cands[j]).all(|(x, y)| x & !y == 0)
                {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut k = 0;
        cands.retain(|_| {
            k += 1;
            keep[k - 1]
        });
        let mut k = 0;
        labels.retain(|_| {
            k += 1;
            keep[k - 1]
        });
    }
    let mut covers: Vec<Vec<usize>> = vec![Vec::new(); universe.len()];
    for (ci, c) in cands.iter().enumerate() {
        for (p, cov) in covers.iter_mut().enumerate() {
            if test_bit(c, p) {
                cov.push(ci);
            }
        }
    }

    let greedy = cov_greedy(a, e)?;
    let greedy_value = greedy.value.expect("nonempty A covers any E");
    let mut search = Search {
        cands: &cands,
        labels: &labels,
        covers: &covers,
        forbidden: vec![false; cands.len()],
        best: greedy_value,
        best_set: greedy.witness.clone(),
        chosen: Vec::new(),
        nodes: 0,
        budget: opts.node_budget,
        exhausted: false,
        universe: universe.len(),
    };
    let mut uncovered = vec![0u64; words];
    for p in 0..universe.len() {
        uncovered[p / 64] |= 1 << (p % 64);
    }
    let root_lb = search.lower_bound(&uncovered, universe.len());
    search.run(&mut uncovered, universe.len());
    let mut witness = search.best_set.clone();
    witness.sort_unstable();
    let optimal = !search.exhausted;
    let lower_bound = if optimal {
        search.best
    } else {
        root_lb.max(e.len().div_ceil(a.len()))
    };
    Ok(CoverWitness {
        value: Some(search.best),
        witness,
        optimal,
        budget_exhausted: search.exhausted,
        lower_bound,
        upper_bound: Some(search.best),
        nodes: search.nodes,
    })
}

/// Whether `E ⊆ A + X`.
pub fn verify_cover(a: &GroupSet, e: &GroupSet, x: &[usize]) -> Result<bool> {
    a.same_group(e)?;
    let mut covered = GroupSet::empty(a.group());
    for &t in x {
        covered = covered.union(&a.translate(t))?;
    }
    e.is_subset(&covered)
}
