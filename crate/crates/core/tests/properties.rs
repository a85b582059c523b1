use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

use univcov::constructions::{ap, quadratic_residues, random_set, FamilySpec};
use univcov::fourier::{dft, higher_energy, parseval_exact};
use univcov::group::is_prime;
use univcov::setops::{
    difference_set, higher_diff_size, higher_diff_size_bruteforce, iterated_sumset, shift_intersection, sumset,
};
use univcov::solver::cover::{cov_exact, verify_cover};
use univcov::solver::universality::{un_by_profiles, un_bruteforce, UnValue};
use univcov::verify::{compare, Instance, Quantity, Relation};
use univcov::{CharacterIndex, Counts, Density64, DensityC64, Group, GroupSet};

const FACTORS: &[&[usize]] = &[
    &[1],
    &[2],
    &[3],
    &[4],
    &[5],
    &[6],
    &[7],
    &[8],
    &[9],
    &[10],
    &[11],
    &[12],
    &[2, 2],
    &[2, 2, 2],
    &[2, 4],
    &[3, 3],
    &[2, 6],
    &[2, 2, 3],
];

fn group_upto(max: usize) -> impl Strategy<Value = Arc<Group>> {
    let choices: Vec<&[usize]> = FACTORS
        .iter()
        .copied()
        .filter(|f| f.iter().product::<usize>() <= max)
        .collect();
    prop::sample::select(choices).prop_map(|f| Arc::new(Group::new(f).unwrap()))
}

fn mask_set(g: &Arc<Group>, mask: u64) -> GroupSet {
    let n = g.order();
    let m = if n >= 64 { mask } else { mask & ((1u64 << n) - 1) };
    GroupSet::from_mask(g, m)
}

/// A group with `k` subsets drawn from independent masks.
fn group_with_sets(max: usize, k: usize) -> impl Strategy<Value = (Arc<Group>, Vec<GroupSet>)> {
    (group_upto(max), prop::collection::vec(any::<u64>(), k))
        .prop_map(|(g, masks)| {
            let sets = masks.iter().map(|&m| mask_set(&g, m)).collect();
            (g, sets)
        })
}

fn nonempty(max: usize, k: usize) -> impl Strategy<Value = (Arc<Group>, Vec<GroupSet>)> {
    group_with_sets(max, k).prop_filter("nonempty sets", |(_, s)| s.iter().all(|a| !a.is_empty()))
}

/// `un` as an ordered key, infinity last.
fn un_key(u: UnValue) -> usize {
    u.resolved().unwrap().unwrap_or(usize::MAX)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_roundtrip(g in group_upto(12), r in 0usize..12) {
        let r = r % g.order();
        let d = g.digits(r);
        prop_assert_eq!(g.rank_of(&d).unwrap(), r);
        prop_assert!(d.iter().zip(g.factors()).all(|(x, n)| x < n));
    }

    #[test]
    fn group_axioms(g in group_upto(12), x in 0usize..12, y in 0usize..12, z in 0usize..12) {
        let n = g.order();
        let (a, b, c) = (g.element(x % n).unwrap(), g.element(y % n).unwrap(), g.element(z % n).unwrap());
        let ab = g.add(a, b).unwrap();
        prop_assert_eq!(ab, g.add(b, a).unwrap());
        prop_assert_eq!(g.add(ab, c).unwrap(), g.add(a, g.add(b, c).unwrap()).unwrap());
        prop_assert_eq!(g.add(a, g.zero()).unwrap(), a);
        prop_assert_eq!(g.add(a, g.neg(a).unwrap()).unwrap(), g.zero());
    }

    #[test]
    fn character_orthogonality(g in group_upto(12), c in 0usize..12) {
        let chi = CharacterIndex(c % g.order());
        let total: Complex64 = g.elements().map(|x| g.character_value(chi, x).unwrap().value()).sum();
        let expected = if chi.0 == 0 { g.order() as f64 } else { 0.0 };
        prop_assert!((total - Complex64::new(expected, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn sumset_laws((_, s) in nonempty(12, 3)) {
        let (a, b, c) = (&s[0], &s[1], &s[2]);
        let ab = sumset(a, b).unwrap();
        prop_assert_eq!(&ab, &sumset(b, a).unwrap());
        prop_assert_eq!(sumset(&ab, c).unwrap(), sumset(a, &sumset(b, c).unwrap()).unwrap());
        prop_assert!(ab.len() >= a.len().max(b.len()));
        // Translating one summand translates the sumset.
        let x = a.min_element().unwrap();
        prop_assert_eq!(sumset(&a.translate(x), b).unwrap(), ab.translate(x));
    }

    #[test]
    fn plunnecke_ruzsa((_, s) in nonempty(16, 1), n in 0usize..=3, m in 0usize..=3) {
        prop_assume!(n + m >= 1 && n + m <= 4);
        let a = &s[0];
        let lhs = iterated_sumset(a, n, m).unwrap().len();
        let doubling = sumset(a, a).unwrap().len();
        // |nA - mA| |A|^(n+m-1) <= |A+A|^(n+m)
        let k = (n + m) as u32;
        prop_assert!(BigInt::from(lhs) * BigInt::from(a.len()).pow(k - 1) <= BigInt::from(doubling).pow(k));
    }

    #[test]
    fn higher_diff_matches_enumeration((_, s) in nonempty(10, 2), n in 1usize..=3) {
        let (a, t) = (&s[0], &s[1]);
        let sets = vec![a.clone(); n];
        prop_assert_eq!(higher_diff_size(a, n, t).unwrap(), higher_diff_size_bruteforce(&sets, t, 1_000_000).unwrap());
    }

    #[test]
    fn katz_koester((_, s) in nonempty(12, 2)) {
        let (a, x) = (&s[0], &s[1]);
        let ax = shift_intersection(a, x).unwrap();
        prop_assume!(!ax.is_empty());
        let d = difference_set(a, a).unwrap();
        let dx = shift_intersection(&d, x).unwrap();
        prop_assert!(difference_set(&ax, a).unwrap().is_subset(&dx).unwrap());
    }

    #[test]
    fn convolution_theorem((g, s) in nonempty(12, 2)) {
        let f = Density64::indicator(&s[0]).to_complex();
        let h = Density64::indicator(&s[1]).to_complex();
        let lhs = dft(&f.convolve(&h).unwrap());
        let (ff, hh) = (dft(&f), dft(&h));
        for i in 0..g.order() {
            prop_assert!((lhs.values()[i] - ff.values()[i] * hh.values()[i]).norm() < 1e-9);
        }
        let auto = dft(&f.correlate(&f).unwrap());
        for z in auto.values() {
            prop_assert!(z.im.abs() < 1e-9 && z.re > -1e-9);
        }
    }

    #[test]
    fn parseval_on_indicators((_, s) in group_with_sets(12, 1)) {
        prop_assert!(parseval_exact(&Counts::indicator(&s[0])));
    }

    #[test]
    fn energy_matches_tuple_count((g, s) in nonempty(8, 1), k in 1usize..=3) {
        let a = s[0].to_vec();
        // Tuples (a_1, b_1, ..., a_k, b_k) in A^(2k) with every a_i - b_i equal.
        let mut direct = 0i64;
        let pairs: Vec<usize> = a
            .iter()
            .flat_map(|&x| a.iter().map(move |&y| (x, y)))
            .map(|(x, y)| g.sub(g.element(x).unwrap(), g.element(y).unwrap()).unwrap().rank())
            .collect();
        let mut idx = vec![0usize; k];
        loop {
            if idx.iter().all(|&i| pairs[i] == pairs[idx[0]]) {
                direct += 1;
            }
            let mut j = 0;
            while j < k && idx[j] + 1 == pairs.len() {
                idx[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
            idx[j] += 1;
        }
        prop_assert_eq!(higher_energy(&s[0], k).unwrap(), BigInt::from(direct));
    }

    #[test]
    fn cover_bounds_and_identity((_, s) in nonempty(12, 1)) {
        let a = &s[0];
        let w = cov_exact(a, &GroupSet::full(a.group())).unwrap();
        let c = w.exact().unwrap();
        let (n, k) = (a.group().order() as f64, a.len() as f64);
        prop_assert!(c >= a.group().order().div_ceil(a.len()));
        prop_assert!(c as f64 <= (n / k) * (k.ln() + 1.0) + 1.0 + 1e-9);
        prop_assert!(verify_cover(a, &GroupSet::full(a.group()), &w.witness).unwrap());
        if !a.is_full() {
            // cov(A) = un(A^c) + 1, the right side through intersection profiles.
            prop_assert_eq!(un_key(un_by_profiles(&a.complement()).unwrap()), c - 1);
        }
    }

    #[test]
    fn un_profiles_match_bruteforce((_, s) in nonempty(10, 1)) {
        prop_assert_eq!(un_by_profiles(&s[0]).unwrap(), un_bruteforce(&s[0]).unwrap());
    }

    #[test]
    fn un_invariances((g, s) in nonempty(12, 2), x in 0usize..12, lambda in 1i64..12) {
        let a = &s[0];
        let base = un_key(un_by_profiles(a).unwrap());
        prop_assert_eq!(un_key(un_by_profiles(&a.translate(x % g.order())).unwrap()), base);
        let d = a.dilate(lambda);
        if d.unit {
            prop_assert_eq!(un_key(un_by_profiles(&d.set).unwrap()), base);
        }
        let b = a.intersection(&s[1]).unwrap();
        if !b.is_empty() {
            prop_assert!(un_key(un_by_profiles(&b).unwrap()) <= base);
        }
        // un(A) >= 2 exactly when A - A = G.
        prop_assert_eq!(base >= 2, difference_set(a, a).unwrap().is_full());
    }

    #[test]
    fn universal_sets_are_large_and_expand((g, s) in nonempty(12, 2)) {
        let (u, t) = (&s[0], &s[1]);
        if let Some(k) = un_by_profiles(u).unwrap().finite() {
            prop_assert!(k >= 1);
            let n = g.order() as f64;
            prop_assert!(u.len() as f64 >= n.powf(1.0 - 1.0 / k as f64) - 1e-9);
            let ut = sumset(u, t).unwrap().len() as f64;
            prop_assert!(ut >= n * (t.len() as f64 / n).powf(1.0 / k as f64) - 1e-9);
        }
    }

    #[test]
    fn cover_composition((g, s) in nonempty(12, 2)) {
        let (a, e) = (&s[0], &s[1]);
        let full = GroupSet::full(&g);
        let direct = cov_exact(a, &full).unwrap().exact().unwrap();
        let via = cov_exact(a, e).unwrap().exact().unwrap() * cov_exact(e, &full).unwrap().exact().unwrap();
        prop_assert!(direct <= via);
    }

    #[test]
    fn quantity_order(a in -1000i64..1000, b in 1i64..1000, x in -1e3f64..1e3) {
        let q = Quantity::ratio(a, b);
        prop_assert!(compare(&Quantity::Infinite, Relation::Gt, &q));
        prop_assert!(compare(&q, Relation::Lt, &Quantity::Infinite));
        prop_assert!(compare(&q, Relation::Eq, &Quantity::ratio(2 * a, 2 * b)));
        let exact_le = (a as f64) / (b as f64) <= x;
        if ((a as f64) / (b as f64) - x).abs() > 1e-6 {
            prop_assert_eq!(compare(&q, Relation::Le, &Quantity::Float(x)), exact_le);
        }
    }

    #[test]
    fn instance_json_roundtrip((g, s) in group_with_sets(12, 2), seed in any::<u64>(), m in 0u32..5) {
        let inst = Instance::new(&g, seed).with_set("A", &s[0]).with_set("B", &s[1]).with_param("m", m);
        let back: Instance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        prop_assert_eq!(back.set(&g, "A").unwrap(), s[0].clone());
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn family_cardinalities(n in 1usize..60, start in 0usize..60, len in 1usize..60, p in 3usize..200, seed in any::<u64>()) {
        let g = Arc::new(Group::cyclic(n).unwrap());
        let len = len.min(n);
        prop_assert_eq!(ap(&g, start % n, len).unwrap().len(), len);
        if is_prime(p as u64) {
            prop_assert_eq!(quadratic_residues(p).unwrap().len(), (p - 1) / 2);
        }
        prop_assert_eq!(random_set(&g, 0.5, seed).unwrap(), random_set(&g, 0.5, seed).unwrap());
        let spec = FamilySpec::Ap { n, start: start % n, length: len };
        let back: FamilySpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        prop_assert_eq!(back.realize().unwrap(), spec.realize().unwrap());
    }
}

#[test]
fn density_aliases_agree() {
    let g = Arc::new(Group::cyclic(7).unwrap());
    let a = quadratic_residues(7).unwrap();
    let c = DensityC64::indicator(&a);
    let i = Density64::indicator(&a).to_complex();
    assert_eq!(c.values(), i.values());
    assert_eq!(c.group().order(), g.order());
}
