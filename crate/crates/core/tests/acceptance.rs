//! Acceptance suite. Runs as a plain binary so every criterion prints one
//! status line; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use univcov::constructions::{all_solution_free, coordinate_subspace, random_subset_of_size, subspace_union_universal};
use univcov::fourier::{balanced_energy, balanced_function, dft, ek_norm, higher_energy};
use univcov::setops::{
    cartesian_product, difference_set, gen_diff_set, higher_diff_size, sumset, TupleSpec,
};
use univcov::solver::cover::{cov_exact, cov_greedy};
use univcov::solver::universality::{un_by_profiles, un_exact, UnValue};
use univcov::verify::{run_campaign, run_check, table_experiment, CampaignConfig, Instance, Outcome, TableConfig};
use univcov::{DensityFunction, Group, GroupSet};

type Verdict = Result<String, String>;

fn group(spec: &str) -> Arc<Group> {
    Arc::new(spec.parse().unwrap())
}

fn subsets(g: &Arc<Group>) -> impl Iterator<Item = GroupSet> + '_ {
    (0u64..1 << g.order()).map(move |m| GroupSet::from_mask(g, m))
}

/// One representative per translation class, plus the empty set.
fn translation_classes(g: &Arc<Group>) -> Vec<GroupSet> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in subsets(g) {
        let key = (0..g.order()).map(|t| s.translate(t).bits().to_vec()).min().unwrap();
        if seen.insert(key) {
            out.push(s);
        }
    }
    out
}

fn identity_groups() -> Vec<Arc<Group>> {
    let mut gs: Vec<Arc<Group>> = (2..=12).map(|n| group(&format!("Z{n}"))).collect();
    for k in 2..=4 {
        gs.push(group(&format!("Z2^{k}")));
    }
    gs.push(group("Z6xZ2"));
    gs
}

/// `un(B)` from the definition: the least `k` admitting a `k`-tuple with no
/// common translate inside `B`, minus one. Tuples are normalized to start at
/// `0`, so the search runs over `G^(k-1)`.
fn un_tuple_oracle(b: &GroupSet) -> Option<usize> {
    let g = b.group();
    let n = g.order();
    if b.is_full() {
        return None;
    }
    let minus: Vec<GroupSet> = (0..n).map(|x| minus(b, x)).collect();
    fn has_failing(minus: &[GroupSet], cur: &GroupSet, depth: usize) -> bool {
        if cur.is_empty() {
            return true;
        }
        if depth == 0 {
            return false;
        }
        minus.iter().any(|m| has_failing(minus, &cur.intersection(m).unwrap(), depth - 1))
    }
    (1..=n).find(|&k| has_failing(&minus, b, k - 1)).map(|k| k - 1)
}

/// `A - x`.
fn minus(a: &GroupSet, x: usize) -> GroupSet {
    a.negate().translate(x).negate()
}

fn criterion_1() -> Verdict {
    let mut count = 0usize;
    let mut oracle = 0usize;
    for g in identity_groups() {
        for a in subsets(&g).skip(1) {
            if a.is_full() {
                continue;
            }
            let c = cov_exact(&a, &GroupSet::full(&g)).unwrap().exact().unwrap();
            let comp = a.complement();
            let profiles = un_by_profiles(&comp).unwrap();
            let direct = un_exact(&comp).unwrap().un;
            if profiles != (UnValue::Finite { value: c - 1 }) || direct != profiles {
                return Err(format!("{g} A = {:?}: cov {c}, profile route {profiles:?}, solver {direct:?}", a.to_vec()));
            }
            if g.order() <= 8 {
                let o = un_tuple_oracle(&comp);
                if o != Some(c - 1) {
                    return Err(format!("{g} A = {:?}: tuple oracle {o:?}, cov {c}", a.to_vec()));
                }
                oracle += 1;
            }
            count += 1;
        }
    }
    Ok(format!("{count} sets, {oracle} also against tuple enumeration"))
}

fn criterion_2() -> Verdict {
    let mut count = 0usize;
    for g in identity_groups() {
        let n = g.order();
        for a in subsets(&g).skip(1) {
            let full = GroupSet::full(&g);
            let exact = cov_exact(&a, &full).unwrap().exact().unwrap();
            let greedy = cov_greedy(&a, &full).unwrap().value.unwrap();
            let k = a.len();
            let upper = n as f64 / k as f64 * ((k as f64).ln() + 1.0) + 1.0;
            if n.div_ceil(k) > exact || exact > greedy || greedy as f64 > upper + 1e-9 {
                return Err(format!("{g} A = {:?}: exact {exact}, greedy {greedy}, upper {upper}", a.to_vec()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} sets, zero violations"))
}

fn criterion_3() -> Verdict {
    let z12 = group("Z12");
    let ap = GroupSet::from_ranks(&z12, [1, 2, 3]).unwrap();
    let c = cov_exact(&ap, &GroupSet::full(&z12)).unwrap().exact();
    let z7 = group("Z7");
    let qr = GroupSet::from_ranks(&z7, [1, 2, 4]).unwrap();
    let u = un_exact(&qr).unwrap().un;
    let oracle = un_tuple_oracle(&qr);
    if c != Some(4) || u != (UnValue::Finite { value: 2 }) || oracle != Some(2) {
        return Err(format!("cov(AP) = {c:?}, un(QR) = {u:?}, oracle {oracle:?}"));
    }
    Ok("cov(Z12, {1,2,3}) = 4, un(Z7, {1,2,4}) = 2".into())
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = f64::NEG_INFINITY;
    for spec in ["Z24", "Z36", "Z48", "Z2^5"] {
        let g = group(spec);
        let n = g.order();
        let full = GroupSet::full(&g);
        for trial in 0..1000 {
            let lo = n.div_ceil(6);
            let a = random_subset_of_size(&g, rng.gen_range(lo..=n / 2), &mut rng).unwrap();
            let b = random_subset_of_size(&g, rng.gen_range(lo..=n / 2), &mut rng).unwrap();
            let (alpha, beta) = (a.len() as f64 / n as f64, b.len() as f64 / n as f64);
            let dd = cov_exact(&difference_set(&a, &a).unwrap(), &full).unwrap();
            let ss = cov_exact(&sumset(&a, &b).unwrap(), &full).unwrap();
            let (Some(cd), Some(cs)) = (dd.exact(), ss.exact()) else {
                return Err(format!("{spec} trial {trial}: cover search not certified"));
            };
            let bound_d = n.div_ceil(a.len());
            let bound_s = (1.0 / beta).ln() / alpha + 1.0;
            if cd > bound_d || cs as f64 > bound_s + 1e-9 {
                return Err(format!(
                    "{spec} trial {trial}: A = {:?} B = {:?}: cov(A-A) {cd} vs {bound_d}, cov(A+B) {cs} vs {bound_s}",
                    a.to_vec(),
                    b.to_vec()
                ));
            }
            worst = worst.max(cs as f64 - bound_s);
        }
    }
    Ok(format!("4000 pairs, zero violations, max cov(A+B) - bound = {worst:.3}"))
}

fn random_split(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(coords.as_mut_slice(), &mut rng);
    let (l, r) = coords.split_at(n / 2);
    (l.to_vec(), r.to_vec())
}

fn criterion_5() -> Verdict {
    let mut notes = Vec::new();
    for id in ["V07", "V08"] {
        let r = run_campaign(&CampaignConfig {
            suite: id.into(),
            trials: 1000,
            seed: 5,
            parallelism: 1,
        })
        .unwrap();
        if !r.all_hold() || r.total.passed != 1000 {
            return Err(format!("{id}: {:?}", r.total));
        }
        notes.push(format!("{id} 1000/1000"));
    }
    let u = subspace_union_universal(6, 2).unwrap();
    let g = u.group().clone();
    let (s1, s2) = random_split(6, 34);
    let u2 = coordinate_subspace(&g, &s1).union(&coordinate_subspace(&g, &s2)).unwrap();
    let un = |s: &GroupSet| un_exact(s).unwrap().un.finite();
    let (a, b, c) = (un(&u), un(&u2), un(&sumset(&u, &u2).unwrap()));
    if a != Some(2) || b != Some(2) || c.is_none_or(|c| c < 4) {
        return Err(format!("un(U) = {a:?}, un(U') = {b:?}, un(U+U') = {c:?}"));
    }
    notes.push(format!("un(U) = un(U') = 2, un(U+U') = {}", c.unwrap()));
    Ok(notes.join("; "))
}

fn diff_len(base: &Arc<Group>, a: &GroupSet, block: usize, b: &GroupSet) -> usize {
    gen_diff_set(base, a, &TupleSpec::new(vec![block]).unwrap(), b, u128::MAX).unwrap().len()
}

fn pair_diff_len(base: &Arc<Group>, a: &GroupSet, b: &GroupSet) -> usize {
    diff_len(base, a, 2, b)
}

/// Sets to sweep for a group: all subsets when small, one per translation
/// class otherwise (both sides of each identity are invariant under
/// translating any single argument).
fn sweep_sets(g: &Arc<Group>) -> Vec<GroupSet> {
    if g.order() <= 5 {
        subsets(g).collect()
    } else {
        translation_classes(g)
    }
}

fn higher_diff_brute(a: &GroupSet, n: usize, s: &GroupSet) -> u128 {
    let g = a.group();
    let minus: Vec<u64> = (0..g.order()).map(|x| minus(a, x).bits()[0]).collect();
    fn walk(minus: &[u64], cur: u64, depth: usize) -> u128 {
        if cur == 0 {
            return 0;
        }
        if depth == 0 {
            return 1;
        }
        minus.iter().map(|&m| walk(minus, cur & m, depth - 1)).sum()
    }
    walk(&minus, s.bits()[0], n)
}

fn criterion_6() -> Verdict {
    let mut decomp = 0usize;
    let mut diagonal = 0usize;
    for g in [
        "Z2", "Z3", "Z4", "Z2^2", "Z5", "Z6", "Z7", "Z8", "Z2^3", "Z2xZ4",
    ]
    .map(group)
    {
        let sets = sweep_sets(&g);
        let full = GroupSet::full(&g);
        for a1 in &sets {
            for a2 in &sets {
                let p12 = cartesian_product(a1, a2, u128::MAX).unwrap();
                for b in &sets {
                    // |A1 x A2 - Delta_2(B)| = sum over x1 in A1 - B of |A2 - (B ∩ (A1 - x1))|
                    let lhs = pair_diff_len(&g, &p12, b);
                    let mut rhs = 0;
                    if !b.is_empty() && !a1.is_empty() {
                        for x1 in difference_set(a1, b).unwrap().iter() {
                            let t = b.intersection(&minus(a1, x1)).unwrap();
                            rhs += difference_set(a2, &t).unwrap().len();
                        }
                    }
                    if lhs != rhs {
                        return Err(format!("{g} decomposition: {:?} {:?} {:?}: {lhs} != {rhs}", a1.to_vec(), a2.to_vec(), b.to_vec()));
                    }
                    decomp += 1;
                }
                // k = 2: |A1 x A2 - Delta_2(G)| = N |A1 - Delta_1(A2)|
                let l = pair_diff_len(&g, &p12, &full);
                let r = g.order() * diff_len(&g, a1, 1, a2);
                if l != r {
                    return Err(format!("{g} k = 2: {:?} {:?}: {l} != {r}", a1.to_vec(), a2.to_vec()));
                }
                diagonal += 1;
                for a3 in &sets {
                    let p123 = cartesian_product(&p12, a3, u128::MAX).unwrap();
                    let l = diff_len(&g, &p123, 3, &full);
                    let r = g.order() * pair_diff_len(&g, &p12, a3);
                    if l != r {
                        return Err(format!("{g} k = 3: {:?} {:?} {:?}: {l} != {r}", a1.to_vec(), a2.to_vec(), a3.to_vec()));
                    }
                    diagonal += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut brute = 0usize;
    for n_g in 2..=16usize {
        let g = group(&format!("Z{n_g}"));
        let mut n = 1;
        while (n_g as f64).powi(n as i32) <= 1e6 {
            for _ in 0..3 {
                let a = random_subset_of_size(&g, rng.gen_range(1..=n_g), &mut rng).unwrap();
                let s = random_subset_of_size(&g, rng.gen_range(1..=n_g), &mut rng).unwrap();
                let fast = higher_diff_size(&a, n, &s).unwrap();
                let slow = higher_diff_brute(&a, n, &s);
                if fast != slow {
                    return Err(format!("Z{n_g} n = {n}: {:?} {:?}: {fast} != {slow}", a.to_vec(), s.to_vec()));
                }
                brute += 1;
            }
            n += 1;
        }
    }
    Ok(format!("{decomp} decomposition and {diagonal} diagonal instances, {brute} brute-force comparisons"))
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let specs: Vec<String> = (1..=64)
        .map(|n| format!("Z{n}"))
        .chain(["Z2^6", "Z4xZ4", "Z2xZ6", "Z3xZ3", "Z2^3xZ4", "Z8xZ8"].map(String::from))
        .collect();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let g = group(&specs[rng.gen_range(0..specs.len())]);
        let n = g.order();
        let mut draw = || -> DensityFunction<Complex64> {
            let v = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            DensityFunction::new(&g, v).unwrap()
        };
        let (f, h) = (draw(), draw());
        let (ff, fh) = (dft(&f), dft(&h));
        let lhs: f64 = f.values().iter().map(|z| z.norm_sqr()).sum();
        let rhs: f64 = ff.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        let conv = dft(&f.convolve(&h).unwrap());
        let err_conv = conv
            .values()
            .iter()
            .zip(ff.values().iter().zip(fh.values()))
            .map(|(c, (x, y))| (c - x * y).norm())
            .fold(0.0, f64::max);
        let err = (lhs - rhs).abs().max(err_conv);
        worst = worst.max(err);
        if err >= 1e-9 {
            return Err(format!("{g}: Parseval error {}, convolution error {err_conv}", (lhs - rhs).abs()));
        }
    }
    let mut e1 = 0usize;
    for g in ["Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z2^2", "Z2^3", "Z2xZ4", "Z3xZ3"].map(group) {
        for a in subsets(&g) {
            let f = balanced_function::<BigRational>(&a);
            let e = ek_norm(&f, 1).unwrap();
            if !e.is_zero() || (!a.is_empty() && !balanced_energy(&a, 1).unwrap().is_zero()) {
                return Err(format!("{g} A = {:?}: E_1 = {e}", a.to_vec()));
            }
            e1 += 1;
        }
    }
    let z4 = group("Z4");
    let e2 = higher_energy(&GroupSet::from_ranks(&z4, [0, 1]).unwrap(), 2).unwrap();
    if e2 != 6.into() {
        return Err(format!("E_2(Z4, {{0,1}}) = {e2}"));
    }
    Ok(format!("1000 functions, max error {worst:.1e}; E_1 = 0 on {e1} sets; E_2(Z4, {{0,1}}) = 6"))
}

fn criterion_8() -> Verdict {
    let r = run_campaign(&CampaignConfig {
        suite: "V15".into(),
        trials: 1000,
        seed: 8,
        parallelism: 1,
    })
    .unwrap();
    let live = r.total.passed + r.total.failed;
    if !r.all_hold() || live < 200 {
        return Err(format!("V15: {:?}", r.total));
    }
    let equations: [(&[i64], usize); 6] = [
        (&[1, 1, -1], 0),
        (&[1, 1, 1], 0),
        (&[1, 1, 1, -1], 0),
        (&[1, 1, -1, -1], 1),
        (&[1, 1, 1, -1, -1], 0),
        (&[1, 1, 1, 1, -1], 0),
    ];
    let mut count = 0usize;
    for n in 3..=16usize {
        let g = group(&format!("Z{n}"));
        for (coeffs, beta) in equations {
            for a in all_solution_free(&g, coeffs, beta % n, 1 << 20).unwrap() {
                let inst = Instance::new(&g, 0)
                    .with_set("A", &a)
                    .with_param("coeffs", coeffs.to_vec())
                    .with_param("beta", beta % n);
                let res = run_check("V14", &inst).unwrap();
                match res.outcome {
                    Outcome::Pass => count += 1,
                    Outcome::Skipped { .. } => {}
                    _ => return Err(format!("V14 on Z{n} {coeffs:?} A = {:?}: {:?}", a.to_vec(), res.outcome)),
                }
            }
        }
    }
    Ok(format!("V15 {live} live instances, zero violations; V14 on {count} solution-free sets"))
}

fn criterion_9() -> Verdict {
    let r = run_campaign(&CampaignConfig {
        suite: "all".into(),
        trials: 1000,
        seed: 1,
        parallelism: 1,
    })
    .unwrap();
    if !r.all_hold() {
        let first = r.failures.first().map(|f| serde_json::to_string(&f.result).unwrap());
        return Err(format!("{} failures; first: {first:?}", r.total.failed));
    }
    for id in ["V14", "V15", "V16", "V28"] {
        let t = r.per_check.iter().find(|t| t.check_id == id).unwrap();
        if t.passed == 0 {
            return Err(format!("{id} has no non-skipped instances"));
        }
    }
    Ok(format!(
        "{} instances: {} passed, {} skipped, 0 failed in {:.1}s",
        r.total.attempted, r.total.passed, r.total.skipped, r.wall_seconds
    ))
}

fn criterion_10() -> Verdict {
    let r = table_experiment(&TableConfig::default()).map_err(|e| e.to_string())?;
    if !r.bounds_hold() {
        return Err(format!("{:?}", r.bounds.iter().filter(|b| !b.holds).collect::<Vec<_>>()));
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("sum_product_table.csv");
    std::fs::write(&path, r.to_csv()).map_err(|e| e.to_string())?;
    let uncertified = r.cells.iter().filter(|c| c.value.is_some() && !c.optimal).count();
    Ok(format!(
        "{} cells ({} uncertified upper bounds), {} asserted bounds hold; csv at {}",
        r.cells.len(),
        uncertified,
        r.bounds.len(),
        path.display()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("identity cov(A) = un(A^c) + 1", criterion_1),
        ("cov sandwich", criterion_2),
        ("numeric anchors", criterion_3),
        ("covering campaign", criterion_4),
        ("universality multiplicativity", criterion_5),
        ("higher difference identities", criterion_6),
        ("Fourier layer", criterion_7),
        ("energy implication and solution-free bound", criterion_8),
        ("full randomized campaign", criterion_9),
        ("sum-product table", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let tag = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| *f == (i + 1).to_string()) {
            continue;
        }
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("{tag:<13} PASS  {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("{tag:<13} FAIL  {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
