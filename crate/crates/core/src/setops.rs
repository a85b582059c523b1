//! Set operations: sumsets, shifted intersections, representation counts,
//! higher difference sets `A_1 x ... x A_n - Delta_n(S)` and their block variants.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fourier::DensityFunction;
use crate::group::Group;
use crate::set::GroupSet;

pub const DEFAULT_PROFILE_CAP: usize = 1 << 16;
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

/// `A + B`, computed as a union of translates of the larger set.
pub fn sumset(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    a.same_group(b)?;
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut out = GroupSet::empty(a.group());
    if small.is_empty() {
        return Ok(out);
    }
    for x in small.iter() {
        out = out.union(&large.translate(x))?;
        if out.is_full() {
            break;
        }
    }
    Ok(out)
}

/// `A - B`.
pub fn difference_set(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    sumset(a, &b.negate())
}

/// `nA - mA` with `0A = {0}`.
pub fn iterated_sumset(a: &GroupSet, n: usize, m: usize) -> Result<GroupSet> {
    let zero = GroupSet::singleton(a.group(), 0)?;
    let mut out = zero;
    for _ in 0..n {
        out = sumset(&out, a)?;
    }
    let neg = a.negate();
    for _ in 0..m {
        out = sumset(&out, &neg)?;
    }
    Ok(out)
}

/// `A_X`: the intersection of `A + x` over `x` in `X`.
pub fn shift_intersection(a: &GroupSet, x: &GroupSet) -> Result<GroupSet> {
    a.same_group(x)?;
    if x.is_empty() {
        return Err(Error::EmptyShiftSet);
    }
    let mut out = GroupSet::full(a.group());
    for t in x.iter() {
        out = out.intersection(&a.translate(t))?;
        if out.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// `x -> |{(a, b) in A x B : a + b = x}|`.
pub fn representation_count(a: &GroupSet, b: &GroupSet) -> Result<DensityFunction<i64>> {
    a.same_group(b)?;
    let g = a.group();
    let mut values = vec![0i64; g.order()];
    for x in a.iter() {
        for y in b.iter() {
            values[g.add_raw(x, y)] += 1;
        }
    }
    DensityFunction::new(g, values)
}

/// `{x : (A * B)(x) >= eps N}`.
pub fn popular_sumset(a: &GroupSet, b: &GroupSet, eps: f64) -> Result<GroupSet> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: "(0, 1)",
        });
    }
    let counts = representation_count(a, b)?;
    let threshold = eps * a.group().order() as f64;
    Ok(GroupSet::from_predicate(a.group(), |x| {
        counts.values()[x] as f64 >= threshold
    }))
}

/// Whether `x` lies in `A_1 x ... x A_n - Delta_n(S)`, i.e. `S` meets every `A_i - x_i`.
pub fn higher_diff_membership(sets: &[GroupSet], s: &GroupSet, x: &[usize]) -> Result<bool> {
    if sets.len() != x.len() {
        return Err(Error::Arity {
            expected: sets.len(),
            got: x.len(),
        });
    }
    let g = s.group();
    for a in sets {
        a.same_group(s)?;
    }
    for &xi in x {
        g.element(xi)?;
    }
    Ok(s.iter().any(|t| {
        sets.iter()
            .zip(x)
            .all(|(a, &xi)| a.contains(g.add_raw(t, xi)))
    }))
}

fn checked_tuple_count(n: usize, k: usize) -> Result<u128> {
    (n as u128)
        .checked_pow(k as u32)
        .filter(|&v| v < (1u128 << 127))
        .ok_or(Error::Overflow("tuple count"))
}

/// Translation-canonical representative: the lexicographically least `T - t`, `t` in `T`.
fn canonical(t: &GroupSet) -> Vec<u64> {
    let g = t.group();
    let mut best: Option<Vec<u64>> = None;
    for x in t.iter() {
        let shifted = t.translate(g.neg_raw(x));
        let bits = shifted.bits();
        match &best {
            Some(b) if b.as_slice() <= bits => {}
            _ => best = Some(bits.to_vec()),
        }
    }
    best.unwrap_or_else(|| t.bits().to_vec())
}

fn profile_step(
    states: HashMap<Vec<u64>, u128>,
    group: &Arc<Group>,
    a: &GroupSet,
    cap: usize,
) -> Result<HashMap<Vec<u64>, u128>> {
    let shifted: Vec<GroupSet> = (0..group.order())
        .map(|x| a.translate(group.neg_raw(x)))
        .collect();
    let mut next: HashMap<Vec<u64>, u128> = HashMap::new();
    for (bits, mult) in states {
        let t = GroupSet::from_bits(group, bits);
        let mut local: HashMap<Vec<u64>, u128> = HashMap::new();
        for ax in &shifted {
            let meet = t.intersection(ax)?;
            if !meet.is_empty() {
                *local.entry(meet.bits().to_vec()).or_insert(0) += 1;
            }
        }
        for (bits, count) in local {
            let key = canonical(&GroupSet::from_bits(group, bits));
            *next.entry(key).or_insert(0) += count * mult;
            if next.len() > cap {
                return Err(Error::ProfileCap { cap });
            }
        }
    }
    Ok(next)
}

/// `|A_1 x ... x A_n - Delta_n(S)|` by dynamic programming over intersection profiles.
pub fn higher_diff_size_multi(sets: &[GroupSet], s: &GroupSet, profile_cap: usize) -> Result<u128> {
    if sets.is_empty() {
        return Err(Error::InvalidParameter("need at least one set".into()));
    }
    for a in sets {
        a.same_group(s)?;
    }
    let g = s.group();
    checked_tuple_count(g.order(), sets.len())?;
    if s.is_empty() {
        return Ok(0);
    }
    let mut states = HashMap::new();
    states.insert(canonical(s), 1u128);
    for a in sets {
        states = profile_step(states, g, a, profile_cap)?;
    }
    Ok(states.values().sum())
}

/// `|A^n - Delta_n(S)|`.
pub fn higher_diff_size(a: &GroupSet, n: usize, s: &GroupSet) -> Result<u128> {
    higher_diff_size_with_cap(a, n, s, DEFAULT_PROFILE_CAP)
}

pub fn higher_diff_size_with_cap(a: &GroupSet, n: usize, s: &GroupSet, cap: usize) -> Result<u128> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let sets = vec![a.clone(); n];
    higher_diff_size_multi(&sets, s, cap)
}

/// Direct enumeration of `G^n` with incremental intersections.
pub fn higher_diff_size_bruteforce(sets: &[GroupSet], s: &GroupSet, cap: u128) -> Result<u128> {
    let g = s.group();
    for a in sets {
        a.same_group(s)?;
    }
    let total = checked_tuple_count(g.order(), sets.len())?;
    if total > cap {
        return Err(Error::EnumerationCap { size: total, cap });
    }
    fn rec(level: usize, t: &GroupSet, sets: &[GroupSet], g: &Group) -> u128 {
        if t.is_empty() {
            return 0;
        }
        if level == sets.len() {
            return 1;
        }
        let mut count = 0;
        for x in 0..g.order() {
            let meet = t
                .intersection(&sets[level].translate(g.neg_raw(x)))
                .expect("same group");
            count += rec(level + 1, &meet, sets, g);
        }
        count
    }
    Ok(rec(0, s, sets, g))
}

/// Block structure `m_1, ..., m_n` of `Delta_{m_1, ..., m_n; n}`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TupleSpec {
    blocks: Vec<usize>,
}

impl TupleSpec {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidParameter(
                "block sizes must be a nonempty list of positive integers".into(),
            ));
        }
        Ok(TupleSpec { blocks })
    }

    pub fn uniform(block: usize, n: usize) -> Result<Self> {
        Self::new(vec![block; n])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn m(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn incremented(&self) -> TupleSpec {
        TupleSpec {
            blocks: self.blocks.iter().map(|b| b + 1).collect(),
        }
    }

    /// Block index of every coordinate.
    fn owners(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(i, &b)| std::iter::repeat(i).take(b))
            .collect()
    }
}

/// Splits a rank of `G^k` into its `k` coordinates in `G`.
pub fn tuple_coords(g: &Group, rank: usize, k: usize) -> Vec<usize> {
    let n = g.order();
    let mut out = vec![0; k];
    let mut r = rank;
    for slot in out.iter_mut().rev() {
        *slot = r % n;
        r /= n;
    }
    out
}

pub fn tuple_rank(g: &Group, coords: &[usize]) -> usize {
    coords.iter().fold(0, |acc, &c| acc * g.order() + c)
}

fn power_group_checked(g: &Group, k: usize, cap: u128) -> Result<Arc<Group>> {
    let size = checked_tuple_count(g.order(), k)?;
    if size > cap {
        return Err(Error::EnumerationCap { size, cap });
    }
    Ok(Arc::new(g.power_with_cap(k, size as usize)?))
}

fn require_power(set: &GroupSet, base: &Group, k: usize, what: &str) -> Result<()> {
    let expected: Vec<usize> = (0..k).flat_map(|_| base.factors().iter().copied()).collect();
    if set.group().factors() != expected.as_slice() {
        return Err(Error::MalformedInstance(format!(
            "{what} must live in ({base})^{k}, got {}",
            set.group()
        )));
    }
    Ok(())
}

/// `A^m` inside `G^m`.
pub fn cartesian_power(a: &GroupSet, m: usize, cap: u128) -> Result<GroupSet> {
    let g = a.group();
    let gm = power_group_checked(g, m, cap)?;
    let elems = a.to_vec();
    let mut out = GroupSet::empty(&gm);
    let mut idx = vec![0usize; m];
    if elems.is_empty() {
        return Ok(out);
    }
    loop {
        let coords: Vec<usize> = idx.iter().map(|&i| elems[i]).collect();
        out.insert_raw(tuple_rank(g, &coords));
        let mut p = m;
        loop {
            if p == 0 {
                return Ok(out);
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < elems.len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Cartesian product of sets of tuples `A ⊆ G^i`, `B ⊆ G^j`, landing in `G^(i+j)`.
pub fn cartesian_product(a: &GroupSet, b: &GroupSet, cap: u128) -> Result<GroupSet> {
    let group = Group::new(
        &a.group()
            .factors()
            .iter()
            .chain(b.group().factors())
            .copied()
            .collect::<Vec<_>>(),
    );
    let size = a.group().order() as u128 * b.group().order() as u128;
    if size > cap || group.is_err() {
        return Err(Error::EnumerationCap { size, cap });
    }
    let group = Arc::new(group?);
    let nb = b.group().order();
    let mut out = GroupSet::empty(&group);
    for x in a.iter() {
        for y in b.iter() {
            out.insert_raw(x * nb + y);
        }
    }
    Ok(out)
}

/// The set `A - Delta_{m_1..m_n;n}(B)` for `A ⊆ G^m`, `B ⊆ G^n`.
pub fn gen_diff_set(
    base: &Arc<Group>,
    a: &GroupSet,
    spec: &TupleSpec,
    b: &GroupSet,
    cap: u128,
) -> Result<GroupSet> {
    let (m, n) = (spec.m(), spec.n());
    require_power(a, base, m, "A")?;
    require_power(b, base, n, "B")?;
    let gm = power_group_checked(base, m, cap)?;
    let owners = spec.owners();
    let bs: Vec<Vec<usize>> = b.iter().map(|r| tuple_coords(base, r, n)).collect();
    let mut out = GroupSet::empty(&gm);
    for ar in a.iter() {
        let ac = tuple_coords(base, ar, m);
        for bc in &bs {
            let coords: Vec<usize> = ac
                .iter()
                .zip(&owners)
                .map(|(&x, &o)| base.sub_raw(x, bc[o]))
                .collect();
            out.insert_raw(tuple_rank(base, &coords));
        }
    }
    Ok(out)
}

/// `|A^m - Delta_{m_1..m_n;n}(B)|` for `A ⊆ G` and `B ⊆ G^n`, by direct enumeration.
pub fn gen_diff_size(a: &GroupSet, spec: &TupleSpec, b: &GroupSet, cap: u128) -> Result<u128> {
    let base = a.group();
    let am = cartesian_power(a, spec.m(), cap)?;
    Ok(gen_diff_set(base, &am, spec, b, cap)?.len() as u128)
}

/// Same count as [`gen_diff_size`] without materializing `G^m`: the tuple
/// `y` is counted when some `b` in `B` has `y_j + b_i` in `A` on every block.
pub fn gen_diff_size_profiles(a: &GroupSet, spec: &TupleSpec, b: &GroupSet) -> Result<u128> {
    let base = a.group();
    let n = spec.n();
    require_power(b, base, n, "B")?;
    let total = checked_tuple_count(base.order(), spec.m())?;
    if total > DEFAULT_ENUMERATION_CAP * 64 {
        return Err(Error::EnumerationCap {
            size: total,
            cap: DEFAULT_ENUMERATION_CAP * 64,
        });
    }
    let gn = b.group().clone();
    let shifted: Vec<GroupSet> = (0..base.order())
        .map(|x| a.translate(base.neg_raw(x)))
        .collect();
    let owners = spec.owners();
    fn rec(
        depth: usize,
        cur: &GroupSet,
        owners: &[usize],
        shifted: &[GroupSet],
        base: &Group,
        gn: &Arc<Group>,
        n: usize,
    ) -> u128 {
        if depth == owners.len() {
            return 1;
        }
        let block = owners[depth];
        let mut count = 0;
        for allowed in shifted {
            let next = GroupSet::from_ranks(
                gn,
                cur.iter()
                    .filter(|&r| allowed.contains(tuple_coords(base, r, n)[block])),
            )
            .expect("ranks in range");
            if !next.is_empty() {
                count += rec(depth + 1, &next, owners, shifted, base, gn, n);
            }
        }
        count
    }
    if b.is_empty() {
        return Ok(0);
    }
    Ok(rec(0, b, &owners, &shifted, base, &gn, n))
}

/// Block interleave `A x_{m_1..m_n} B ⊆ G^(m+n)`.
pub fn block_product(
    base: &Arc<Group>,
    a: &GroupSet,
    spec: &TupleSpec,
    b: &GroupSet,
    cap: u128,
) -> Result<GroupSet> {
    let (m, n) = (spec.m(), spec.n());
    require_power(a, base, m, "A")?;
    require_power(b, base, n, "B")?;
    let g = power_group_checked(base, m + n, cap)?;
    let mut out = GroupSet::empty(&g);
    let bs: Vec<Vec<usize>> = b.iter().map(|r| tuple_coords(base, r, n)).collect();
    for ar in a.iter() {
        let ac = tuple_coords(base, ar, m);
        for bc in &bs {
            let mut coords = Vec::with_capacity(m + n);
            let mut pos = 0;
            for (i, &len) in spec.blocks().iter().enumerate() {
                coords.extend_from_slice(&ac[pos..pos + len]);
                coords.push(bc[i]);
                pos += len;
            }
            out.insert_raw(tuple_rank(base, &coords));
        }
    }
    Ok(out)
}

/// `|A x_{m_1..m_n} B - Delta_{m_1+1..m_n+1;n}(C)|`.
pub fn gen_product_diff_size(
    base: &Arc<Group>,
    a: &GroupSet,
    b: &GroupSet,
    c: &GroupSet,
    spec: &TupleSpec,
    cap: u128,
) -> Result<u128> {
    let prod = block_product(base, a, spec, b, cap)?;
    Ok(gen_diff_set(base, &prod, &spec.incremented(), c, cap)?.len() as u128)
}

/// `A ± Delta_{m_1..m_n;n}(B)` with `sign = -1` or `+1`.
pub fn gen_signed_set(
    base: &Arc<Group>,
    a: &GroupSet,
    spec: &TupleSpec,
    b: &GroupSet,
    plus: bool,
    cap: u128,
) -> Result<GroupSet> {
    if plus {
        let neg_b = negate_tuples(base, b)?;
        gen_diff_set(base, a, spec, &neg_b, cap)
    } else {
        gen_diff_set(base, a, spec, b, cap)
    }
}

/// `-B` for a set of tuples.
pub fn negate_tuples(base: &Group, b: &GroupSet) -> Result<GroupSet> {
    let k = tuple_arity(base, b.group())?;
    let g = b.group();
    Ok(GroupSet::from_ranks(
        g,
        b.iter().map(|r| {
            let c: Vec<usize> = tuple_coords(base, r, k)
                .into_iter()
                .map(|x| base.neg_raw(x))
                .collect();
            tuple_rank(base, &c)
        }),
    )
    .expect("ranks in range"))
}

/// Sumset or difference set of two sets of `k`-tuples.
pub fn tuple_sumset(base: &Group, b: &GroupSet, c: &GroupSet, plus: bool) -> Result<GroupSet> {
    b.same_group(c)?;
    let k = tuple_arity(base, b.group())?;
    let cs: Vec<Vec<usize>> = c.iter().map(|r| tuple_coords(base, r, k)).collect();
    let mut out = GroupSet::empty(b.group());
    for r in b.iter() {
        let bc = tuple_coords(base, r, k);
        for cc in &cs {
            let coords: Vec<usize> = bc
                .iter()
                .zip(cc)
                .map(|(&x, &y)| if plus { base.add_raw(x, y) } else { base.sub_raw(x, y) })
                .collect();
            out.insert_raw(tuple_rank(base, &coords));
        }
    }
    Ok(out)
}

fn tuple_arity(base: &Group, g: &Group) -> Result<usize> {
    let r = base.factors().len();
    let f = g.factors();
    if f.len() % r != 0 || f.chunks(r).any(|c| c != base.factors()) {
        return Err(Error::MalformedInstance(format!("{g} is not a power of {base}")));
    }
    Ok(f.len() / r)
}

/// Outcome of counting solutions of `sum alpha_i x_i = beta` in `A^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionCount {
    pub count: u128,
    /// Whether every coefficient is coprime to `N`.
    pub units: bool,
}

/// Counts tuples in `A^n` solving `sum alpha_i x_i = beta` via nested convolutions.
pub fn solution_count(a: &GroupSet, coeffs: &[i64], beta: usize) -> Result<SolutionCount> {
    if coeffs.len() < 2 {
        return Err(Error::InvalidParameter("need at least two coefficients".into()));
    }
    let g = a.group();
    g.element(beta)?;
    let n = g.order();
    let dilated = |alpha: i64| {
        let mut f = vec![0u128; n];
        for x in a.iter() {
            f[g.scale_raw(alpha, x)] += 1;
        }
        f
    };
    let mut acc = dilated(coeffs[0]);
    for &alpha in &coeffs[1..] {
        let f = dilated(alpha);
        let mut next = vec![0u128; n];
        for (x, &u) in acc.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (y, &v) in f.iter().enumerate() {
                if v != 0 {
                    next[g.add_raw(x, y)] += u * v;
                }
            }
        }
        acc = next;
    }
    Ok(SolutionCount {
        count: acc[beta],
        units: coeffs.iter().all(|&c| g.is_unit(c)),
    })
}

/// `beta ∉ alpha_1 A + ... + alpha_n A`, via sumsets.
pub fn is_solution_free(a: &GroupSet, coeffs: &[i64], beta: usize) -> Result<bool> {
    if coeffs.len() < 2 {
        return Err(Error::InvalidParameter("need at least two coefficients".into()));
    }
    a.group().element(beta)?;
    let mut acc = a.dilate(coeffs[0]).set;
    for &alpha in &coeffs[1..] {
        acc = sumset(&acc, &a.dilate(alpha).set)?;
    }
    Ok(!acc.contains(beta))
}

fn prime_of(a: &GroupSet) -> Result<usize> {
    a.group()
        .prime_field()
        .ok_or_else(|| Error::NotPrimeField(a.group().spec_string()))
}

/// `AB` in `F_p`.
pub fn product_set(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    a.same_group(b)?;
    let p = prime_of(a)?;
    let mut out = GroupSet::empty(a.group());
    for x in a.iter() {
        for y in b.iter() {
            out.insert_raw(x * y % p);
        }
    }
    Ok(out)
}

/// Modular inverse in `F_p` of a nonzero residue.
pub fn inverse_mod(x: usize, p: usize) -> usize {
    let mut result = 1u64;
    let mut base = (x % p) as u64;
    let mut e = (p - 2) as u64;
    let p = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result as usize
}

/// `A/B = {a b^-1 : a in A, b in B, b != 0}`.
pub fn ratio_set(a: &GroupSet, b: &GroupSet) -> Result<GroupSet> {
    a.same_group(b)?;
    let p = prime_of(a)?;
    let mut out = GroupSet::empty(a.group());
    for y in b.iter().filter(|&y| y != 0) {
        let inv = inverse_mod(y, p);
        for x in a.iter() {
            out.insert_raw(x * inv % p);
        }
    }
    Ok(out)
}

/// `A^-1 = {a^-1 : a in A, a != 0}`.
pub fn inverse_set(a: &GroupSet) -> Result<GroupSet> {
    let p = prime_of(a)?;
    GroupSet::from_ranks(a.group(), a.iter().filter(|&x| x != 0).map(|x| inverse_mod(x, p)))
}
