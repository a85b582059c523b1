//! Named set families: progressions, random sets, quadratic residues, intervals,
//! unions of coordinate subspaces, universal sumsets and solution-free sets.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{bohr_set, BohrSpec};
use crate::group::{is_prime, Group};
use crate::set::GroupSet;
use crate::setops::{difference_set, is_solution_free, sumset};
use crate::solver::cover::CoverOptions;
use crate::solver::universality::{un_exact_with, UnValue};

fn require_cyclic(g: &Group) -> Result<usize> {
    match g.factors() {
        [n] => Ok(*n),
        _ => Err(Error::InvalidParameter(format!("{g} is not presented as a cyclic group"))),
    }
}

/// `{start, ..., start + length - 1} mod N`.
pub fn ap(group: &Arc<Group>, start: usize, length: usize) -> Result<GroupSet> {
    let n = require_cyclic(group)?;
    if length == 0 || length > n {
        return Err(Error::InvalidParameter(format!("length {length} must lie in [1, {n}]")));
    }
    GroupSet::from_ranks(group, (0..length).map(|i| (start + i) % n))
}

/// Each element kept independently with probability `density`.
pub fn random_set(group: &Arc<Group>, density: f64, seed: u64) -> Result<GroupSet> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::OutOfRange {
            name: "density",
            value: density,
            range: "(0, 1]",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(GroupSet::from_predicate(group, |_| rng.gen_bool(density)))
}

/// A uniformly random subset of exact size `k`.
pub fn random_subset_of_size(group: &Arc<Group>, k: usize, rng: &mut ChaCha8Rng) -> Result<GroupSet> {
    if k > group.order() {
        return Err(Error::InvalidParameter(format!("size {k} exceeds |G| = {}", group.order())));
    }
    GroupSet::from_ranks(group, sample(rng, group.order(), k))
}

fn odd_prime(p: usize) -> Result<()> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::NotPrimeField(format!("Z{p}")));
    }
    Ok(())
}

/// Nonzero squares modulo an odd prime `p`.
pub fn quadratic_residues(p: usize) -> Result<GroupSet> {
    odd_prime(p)?;
    let g = Arc::new(Group::cyclic(p)?);
    GroupSet::from_ranks(&g, (1..p).map(|x| x * x % p))
}

/// `{ceil(p/3), ..., floor(2p/3)}` in `Z/p`.
pub fn interval_middle_third(p: usize) -> Result<GroupSet> {
    if p < 5 {
        return Err(Error::InvalidParameter(format!("p = {p} must be at least 5")));
    }
    let g = Arc::new(Group::cyclic(p)?);
    GroupSet::from_ranks(&g, p.div_ceil(3)..=(2 * p / 3))
}

/// Near-equal consecutive blocks partitioning `[0, n)`, larger blocks first.
pub fn near_equal_blocks(n: usize, k: usize) -> Vec<Vec<usize>> {
    let base = n / k;
    let extra = n % k;
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for i in 0..k {
        let len = base + usize::from(i < extra);
        out.push((next..next + len).collect());
        next += len;
    }
    out
}

/// `H_i = {x : x_j = 0 for j in S_i}` inside `(Z/2)^n`.
pub fn coordinate_subspace(group: &Arc<Group>, zero_coords: &[usize]) -> GroupSet {
    GroupSet::from_predicate(group, |r| {
        let digits = group.digits(r);
        zero_coords.iter().all(|&j| digits[j] == 0)
    })
}

/// `H_1 ∪ ... ∪ H_k` in `(Z/2)^n`, one subspace per block of a near-equal partition of the coordinates.
pub fn subspace_union_universal(n: usize, k: usize) -> Result<GroupSet> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let g = Arc::new(Group::new(&vec![2; n])?);
    let mut out = GroupSet::empty(&g);
    for block in near_equal_blocks(n, k) {
        out = out.union(&coordinate_subspace(&g, &block))?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumsetCertificate {
    pub d: usize,
    pub s0: Vec<usize>,
    pub k_requested: usize,
    /// Universality of `S_0` in `Z/d`, certified by the exact solver.
    pub k_achieved: usize,
    pub s0_attempts: usize,
    pub shift: usize,
    pub q_size: usize,
    pub a_size: usize,
    pub b_size: usize,
    pub u_size: usize,
    pub complement_size: usize,
    /// `S + d S ⊆ U`, which carries the universality of `S_0` to `U` since `N <= d^2`.
    pub lifted_inclusion: bool,
    /// `U - U = G`, checked directly whenever `k_achieved >= 2`.
    pub difference_check: Option<bool>,
    /// Exact `un(U)` for small `N`.
    pub direct_un: Option<UnValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniversalSumset {
    pub a: GroupSet,
    pub b: GroupSet,
    pub u: GroupSet,
    pub certificate: SumsetCertificate,
}

pub const SUMSET_S0_ATTEMPTS: usize = 24;
pub const SUMSET_SHIFT_ATTEMPTS: usize = 4096;
pub const SUMSET_DIRECT_LIMIT: usize = 512;

/// `|S^k - Delta_k(Z/d)|`, the search objective for `S_0`.
fn universality_score(s: &GroupSet, k: usize) -> u128 {
    crate::setops::higher_diff_size(s, k, &GroupSet::full(s.group())).unwrap_or(0)
}

/// Seeded local search for a `k`-universal `S_0 ⊂ Z/d` of size `m`.
fn search_s0(zd: &Arc<Group>, m: usize, k: usize, rng: &mut ChaCha8Rng, attempts: usize) -> Option<(GroupSet, usize)> {
    let d = zd.order();
    let target = (d as u128).pow(k as u32);
    for attempt in 1..=attempts {
        let mut s = random_subset_of_size(zd, m, rng).ok()?;
        let mut score = universality_score(&s, k);
        for _ in 0..(4 * d) {
            if score == target {
                break;
            }
            let members = s.to_vec();
            let outside = s.complement().to_vec();
            if outside.is_empty() {
                break;
            }
            let drop = *members.choose(rng)?;
            let add = *outside.choose(rng)?;
            let mut t = s.clone();
            t.remove(drop);
            t.insert(add).ok()?;
            let ts = universality_score(&t, k);
            if ts >= score {
                s = t;
                score = ts;
            }
        }
        if score == target {
            return Some((s, attempt));
        }
    }
    None
}

/// A `k'`-universal `U = A + B ⊆ Z/N` with `|U^c| >= N/4` and `|A|, |B| >= N/512`.
pub fn universal_sumset(n: usize, k: usize, seed: u64) -> Result<UniversalSumset> {
    if k == 0 || (k as f64) > (n as f64).log2() / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= log2(N)/2, got k = {k}, N = {n}"
        )));
    }
    let d0 = (n as f64).sqrt().ceil() as usize;
    let d0 = (d0.saturating_sub(2)..=d0 + 2).find(|&c| c * c >= n).unwrap_or(d0);
    let d = (d0..=2 * d0)
        .find(|&c| is_prime(c as u64) && n % c != 0)
        .ok_or_else(|| Error::ConstructionFailed(format!("no prime d in [{d0}, {}] coprime to {n}", 2 * d0)))?;
    let g = Arc::new(Group::cyclic(n)?);
    let zd = Arc::new(Group::cyclic(d)?);
    let m = d.div_ceil(8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut found = None;
    let mut attempts_used = 0;
    for target in (1..=k).rev() {
        if let Some((s0, attempts)) = search_s0(&zd, m, target, &mut rng, SUMSET_S0_ATTEMPTS) {
            attempts_used += attempts;
            let cert = un_exact_with(&s0, CoverOptions::default(), &[])?;
            let certified = match cert.un {
                UnValue::Finite { value } => value,
                _ => 0,
            };
            if certified >= target {
                found = Some((s0, certified.min(k)));
                break;
            }
        } else {
            attempts_used += SUMSET_S0_ATTEMPTS;
        }
    }
    let (s0, k_achieved) = found.ok_or_else(|| Error::ConstructionFailed("no certified S_0".into()))?;

    let s_int: Vec<usize> = s0.iter().chain(s0.iter().map(|x| x + d)).collect();
    let s = GroupSet::from_ranks(&g, s_int.iter().map(|&x| x % n))?;
    let ds = GroupSet::from_ranks(&g, s_int.iter().map(|&x| x * d % n))?;
    let p_len = n.div_ceil(16);
    let q_min = n.div_ceil(512);
    let mut chosen = None;
    for _ in 0..SUMSET_SHIFT_ATTEMPTS {
        let shift = rng.gen_range(0..n);
        // q in P with d q in P + s
        let q = GroupSet::from_ranks(&g, (0..p_len).filter(|&q| (q * d % n + n - shift) % n < p_len))?;
        if q.len() >= q_min {
            chosen = Some((shift, q));
            break;
        }
    }
    let (shift, q) = chosen.ok_or_else(|| Error::ConstructionFailed("no shift gave |Q| >= N/512".into()))?;
    let dq = GroupSet::from_ranks(&g, q.iter().map(|x| x * d % n))?;
    let a = s.union(&dq)?;
    let b = ds.union(&q)?;
    let u = sumset(&a, &b)?;

    let lifted = sumset(&s, &ds)?.is_subset(&u)?;
    let difference_check = if k_achieved >= 2 {
        Some(difference_set(&u, &u)?.is_full())
    } else {
        None
    };
    let direct_un = if n <= SUMSET_DIRECT_LIMIT {
        Some(un_exact_with(&u, CoverOptions::default(), &[])?.un)
    } else {
        None
    };
    let certificate = SumsetCertificate {
        d,
        s0: s0.to_vec(),
        k_requested: k,
        k_achieved,
        s0_attempts: attempts_used,
        shift,
        q_size: q.len(),
        a_size: a.len(),
        b_size: b.len(),
        u_size: u.len(),
        complement_size: n - u.len(),
        lifted_inclusion: lifted,
        difference_check,
        direct_un,
    };
    let direct_ok = match direct_un {
        Some(UnValue::Finite { value }) => value >= k_achieved,
        Some(UnValue::Infinite) => true,
        Some(UnValue::Indeterminate { upper, .. }) => upper >= k_achieved,
        None => true,
    };
    if !lifted
        || difference_check == Some(false)
        || !direct_ok
        || 4 * u.len() > 3 * n
        || a.len() < q_min
        || b.len() < q_min
    {
        return Err(Error::ConstructionFailed(format!(
            "verification failed: {}",
            serde_json::to_string(&certificate).unwrap_or_default()
        )));
    }
    Ok(UniversalSumset { a, b, u, certificate })
}

/// Maximal solution-free set of `sum alpha_i x_i = beta`, adding elements in a seeded random order.
pub fn greedy_solution_free(group: &Arc<Group>, coeffs: &[i64], beta: usize, seed: u64) -> Result<GroupSet> {
    let mut order: Vec<usize> = (0..group.order()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut a = GroupSet::empty(group);
    for x in order {
        a.insert(x)?;
        if !is_solution_free(&a, coeffs, beta)? {
            a.remove(x);
        }
    }
    Ok(a)
}

/// Every nonempty solution-free subset of `G`, by depth-first search over increasing ranks.
pub fn all_solution_free(group: &Arc<Group>, coeffs: &[i64], beta: usize, limit: usize) -> Result<Vec<GroupSet>> {
    if group.order() > 24 {
        return Err(Error::EnumerationCap {
            size: 1u128 << group.order(),
            cap: 1 << 24,
        });
    }
    let mut out = Vec::new();
    let mut stack = vec![(GroupSet::empty(group), 0usize)];
    while let Some((set, next)) = stack.pop() {
        for x in (next..group.order()).rev() {
            let mut t = set.clone();
            t.insert(x)?;
            if is_solution_free(&t, coeffs, beta)? {
                if out.len() == limit {
                    return Err(Error::EnumerationCap {
                        size: limit as u128 + 1,
                        cap: limit as u128,
                    });
                }
                out.push(t.clone());
                stack.push((t, x + 1));
            }
        }
    }
    out.sort_by_key(|s| s.to_vec());
    Ok(out)
}

/// Catalog entry describing how to realize a set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Ap { n: usize, start: usize, length: usize },
    Random { group: String, density: f64, seed: u64 },
    Qr { p: usize },
    Interval { p: usize },
    SubspaceUnion { n: usize, k: usize },
    UniversalSumset { n: usize, k: usize, seed: u64 },
    Bohr { group: String, gamma: Vec<usize>, eps: f64 },
}

impl FamilySpec {
    pub fn realize(&self) -> Result<GroupSet> {
        match self {
            FamilySpec::Ap { n, start, length } => ap(&Arc::new(Group::cyclic(*n)?), *start, *length),
            FamilySpec::Random { group, density, seed } => random_set(&Arc::new(group.parse()?), *density, *seed),
            FamilySpec::Qr { p } => quadratic_residues(*p),
            FamilySpec::Interval { p } => interval_middle_third(*p),
            FamilySpec::SubspaceUnion { n, k } => subspace_union_universal(*n, *k),
            FamilySpec::UniversalSumset { n, k, seed } => Ok(universal_sumset(*n, *k, *seed)?.u),
            FamilySpec::Bohr { group, gamma, eps } => bohr_set(
                &Arc::new(group.parse()?),
                &BohrSpec {
                    gamma: gamma.clone(),
                    eps: *eps,
                },
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ap_examples() {
        let z12 = Arc::new(Group::cyclic(12).unwrap());
        assert_eq!(ap(&z12, 1, 3).unwrap().to_vec(), vec![1, 2, 3]);
        assert!(ap(&z12, 5, 12).unwrap().is_full());
        assert_eq!(ap(&z12, 11, 1).unwrap().to_vec(), vec![11]);
        assert_eq!(ap(&z12, 11, 2).unwrap().to_vec(), vec![0, 11]);
        assert!(ap(&z12, 0, 0).is_err());
        assert!(ap(&z12, 0, 13).is_err());
    }

    #[test]
    fn random_examples() {
        let g = Arc::new(Group::cyclic(1024).unwrap());
        assert!(random_set(&g, 1.0, 9).unwrap().is_full());
        assert_eq!(random_set(&g, 0.3, 4).unwrap(), random_set(&g, 0.3, 4).unwrap());
        let mean: f64 = (0..100).map(|s| random_set(&g, 0.25, s).unwrap().density()).sum::<f64>() / 100.0;
        assert!((mean - 0.25).abs() < 0.05);
        assert!(random_set(&g, 0.0, 1).is_err());
    }

    #[test]
    fn residue_examples() {
        assert_eq!(quadratic_residues(7).unwrap().to_vec(), vec![1, 2, 4]);
        assert_eq!(quadratic_residues(5).unwrap().to_vec(), vec![1, 4]);
        for p in [3, 11, 13, 101] {
            assert_eq!(quadratic_residues(p).unwrap().len(), (p - 1) / 2);
        }
        assert!(quadratic_residues(9).is_err());
        assert!(quadratic_residues(2).is_err());
    }

    #[test]
    fn interval_examples() {
        assert_eq!(interval_middle_third(7).unwrap().to_vec(), vec![3, 4]);
        assert!(interval_middle_third(4).is_err());
        let big = interval_middle_third(3001).unwrap();
        assert!((big.density() - 1.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn subspace_union_examples() {
        let u = subspace_union_universal(4, 2).unwrap();
        assert_eq!(u.len(), 7);
        let g = u.group().clone();
        assert!(sumset(&u, &u).unwrap().is_full());
        let h1 = coordinate_subspace(&g, &[0, 1]);
        assert_eq!(h1.to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(subspace_union_universal(3, 1).unwrap().to_vec(), vec![0]);
        assert!(subspace_union_universal(3, 4).is_err());
        assert_eq!(near_equal_blocks(7, 3), vec![vec![0, 1, 2], vec![3, 4], vec![5, 6]]);
    }

    #[test]
    fn universal_sumset_small() {
        let out = universal_sumset(400, 2, 3).unwrap();
        let c = &out.certificate;
        assert!(c.lifted_inclusion);
        assert!(4 * c.u_size <= 3 * 400);
        assert!(matches!(c.direct_un, Some(UnValue::Finite { value }) if value >= c.k_achieved));
        assert_eq!(universal_sumset(400, 2, 3).unwrap(), out);
        assert!(universal_sumset(400, 9, 3).is_err());
    }

    #[test]
    fn solution_free_filters() {
        let z7 = Arc::new(Group::cyclic(7).unwrap());
        let a = greedy_solution_free(&z7, &[1, 1, -1], 0, 2).unwrap();
        assert!(is_solution_free(&a, &[1, 1, -1], 0).unwrap());
        for x in a.complement().iter() {
            let mut t = a.clone();
            t.insert(x).unwrap();
            assert!(!is_solution_free(&t, &[1, 1, -1], 0).unwrap());
        }
        let all = all_solution_free(&z7, &[1, 1, -1], 0, 10_000).unwrap();
        let brute = (1u64..128)
            .map(|m| GroupSet::from_mask(&z7, m))
            .filter(|s| is_solution_free(s, &[1, 1, -1], 0).unwrap())
            .count();
        assert_eq!(all.len(), brute);
    }

    #[test]
    fn family_round_trip() {
        let spec = FamilySpec::Random {
            group: "Z2^4".into(),
            density: 0.5,
            seed: 3,
        };
        let text = serde_json::to_string(&spec).unwrap();
        let back: FamilySpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.realize().unwrap(), spec.realize().unwrap());
        assert_eq!(FamilySpec::Qr { p: 7 }.realize().unwrap().to_vec(), vec![1, 2, 4]);
    }
}
