use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_info, registry, Instance};
use crate::constructions::{greedy_solution_free, quadratic_residues, random_subset_of_size};
use crate::error::{Error, Result};
use crate::group::{is_prime, Group};
use crate::set::GroupSet;
use crate::setops::difference_set;

const SMALL_NONCYCLIC: &[&[usize]] = &[&[2, 2], &[2, 2, 2], &[2, 2, 2, 2], &[2, 4], &[3, 3], &[2, 6], &[2, 2, 3]];
const EPS_CHOICES: &[(u32, u32)] = &[
    (1, 2),
    (3, 5),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 6),
    (7, 8),
    (9, 10),
    (19, 20),
];

/// Draws a replayable instance for check `id`; the stream is fixed by the
/// check's registry position so different checks see independent draws.
pub fn generate(id: &str, seed: u64) -> Result<Instance> {
    let info = check_info(id)?;
    let stream = registry().iter().position(|c| c.id == info.id).unwrap_or(0) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut gen = Gen { rng, seed };
    gen.instance(info.id)
}

struct Gen {
    rng: ChaCha8Rng,
    seed: u64,
}

impl Gen {
    /// A group of order in `[lo, hi]`: usually cyclic, sometimes a small product.
    fn group(&mut self, lo: usize, hi: usize) -> Arc<Group> {
        if self.rng.gen_bool(0.3) {
            let fits: Vec<&[usize]> = SMALL_NONCYCLIC
                .iter()
                .copied()
                .filter(|f| (lo..=hi).contains(&f.iter().product()))
                .collect();
            if let Some(f) = fits.choose(&mut self.rng) {
                return Arc::new(Group::new(f).expect("small group"));
            }
        }
        Arc::new(Group::cyclic(self.rng.gen_range(lo..=hi)).expect("small group"))
    }

    fn prime(&mut self, lo: usize, hi: usize) -> Arc<Group> {
        let primes: Vec<usize> = (lo..=hi).filter(|&p| is_prime(p as u64)).collect();
        let p = *primes.choose(&mut self.rng).expect("range holds a prime");
        Arc::new(Group::cyclic(p).expect("small group"))
    }

    /// Nonempty random set of size drawn in `[lo, hi]` times `|G|`.
    fn set(&mut self, g: &Arc<Group>, lo: f64, hi: f64) -> GroupSet {
        let n = g.order();
        let d = self.rng.gen_range(lo..=hi);
        let k = ((d * n as f64).round() as usize).clamp(1, n);
        random_subset_of_size(g, k, &mut self.rng).expect("size within order")
    }

    fn sized(&mut self, g: &Arc<Group>, k: usize) -> GroupSet {
        random_subset_of_size(g, k.clamp(1, g.order()), &mut self.rng).expect("size within order")
    }

    fn tuples(&mut self, g: &Arc<Group>, arity: usize, lo: f64, hi: f64) -> GroupSet {
        let gk = Arc::new(g.power(arity).expect("small power"));
        self.set(&gk, lo, hi)
    }

    fn coeffs(&mut self, g: &Arc<Group>, n: usize) -> Vec<i64> {
        let units: Vec<i64> = (1..g.order() as i64).filter(|&c| g.is_unit(c)).collect();
        (0..n)
            .map(|_| {
                let c = *units.choose(&mut self.rng).unwrap_or(&1);
                if self.rng.gen_bool(0.5) {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }

    fn solution_free(&mut self, n_lo: usize, n_hi: usize, g: &Arc<Group>) -> Result<(Vec<i64>, usize, GroupSet)> {
        let n = self.rng.gen_range(n_lo..=n_hi);
        let coeffs = self.coeffs(g, n);
        let beta = self.rng.gen_range(0..g.order());
        let a = greedy_solution_free(g, &coeffs, beta, self.rng.gen())?;
        Ok((coeffs, beta, a))
    }

    fn instance(&mut self, id: &str) -> Result<Instance> {
        let seed = self.seed;
        let inst = match id {
            "V01" => {
                let g = self.group(2, 30);
                let a = self.set(&g, 0.05, 0.5);
                Instance::new(&g, seed)
                    .with_set("A", &a)
                    .with_param("n", self.rng.gen_range(1..=3))
                    .with_param("m", self.rng.gen_range(0..=3))
            }
            "V02" => {
                let g = self.group(2, 16);
                let a = self.set(&g, 0.2, 0.95);
                Instance::new(&g, seed).with_set("A", &a)
            }
            "V03" | "V04" => {
                let g = self.group(2, 30);
                let a = self.set(&g, 0.05, 0.6);
                Instance::new(&g, seed).with_set("A", &a)
            }
            "V05" | "V18" | "V19" => {
                let g = self.group(2, 24);
                let a = self.set(&g, 0.05, 0.4);
                let b = self.set(&g, 0.05, 0.4);
                Instance::new(&g, seed).with_set("A", &a).with_set("B", &b)
            }
            "V06" => {
                let g = self.group(2, 24);
                let a = self.set(&g, 0.05, 0.4);
                let b = self.set(&g, 0.05, 0.4);
                let e = self.set(&g, 0.05, 0.6);
                Instance::new(&g, seed).with_set("A", &a).with_set("B", &b).with_set("E", &e)
            }
            "V07" | "V08" => {
                let g = self.group(2, 24);
                let a = self.set(&g, 0.4, 0.95);
                let b = self.set(&g, 0.4, 0.95);
                Instance::new(&g, seed).with_set("A", &a).with_set("B", &b)
            }
            "V09" => {
                let g = self.group(2, 16);
                let a = self.set(&g, 0.2, 0.9);
                let b = self.set(&g, 0.05, 0.5);
                let k = self.rng.gen_range(1..=3);
                let x = self.sized(&g, k);
                Instance::new(&g, seed).with_set("A", &a).with_set("B", &b).with_set("X", &x)
            }
            "V10" | "V11" => {
                let g = self.group(2, 12);
                let a = self.set(&g, 0.2, 0.9);
                let b = self.set(&g, 0.2, 0.9);
                let s = self.set(&g, 0.1, 0.6);
                Instance::new(&g, seed)
                    .with_set("A", &a)
                    .with_set("B", &b)
                    .with_set("S", &s)
                    .with_param("m", self.rng.gen_range(1..=2))
                    .with_param("n", self.rng.gen_range(1..=2))
            }
            "V12" => {
                let g = self.group(2, 10);
                let a = self.set(&g, 0.2, 0.9);
                let (m, l) = *[(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)].choose(&mut self.rng).unwrap();
                Instance::new(&g, seed).with_set("A", &a).with_param("m", m).with_param("l", l)
            }
            "V13" => {
                let g = self.group(2, 8);
                let k = self.rng.gen_range(1..=2);
                let n = self.rng.gen_range(1..=4 / k);
                let u = self.set(&g, 0.6, 0.95);
                let s = self.tuples(&g, n, 0.02, 0.5);
                let a = self.set(&g, 0.2, 0.9);
                let s1 = self.set(&g, 0.1, 0.6);
                Instance::new(&g, seed)
                    .with_set("U", &u)
                    .with_tuples("S", n, &s)
                    .with_set("A", &a)
                    .with_set("S1", &s1)
                    .with_param("k", k)
                    .with_param("mm", self.rng.gen_range(1..=2))
            }
            "V14" => {
                let g = self.group(4, 24);
                let (coeffs, beta, a) = self.solution_free(3, 6, &g)?;
                Instance::new(&g, seed)
                    .with_set("A", &a)
                    .with_param("coeffs", coeffs)
                    .with_param("beta", beta)
            }
            "V15" => {
                let g = Arc::new(Group::cyclic(self.rng.gen_range(16..=48))?);
                let a = self.set(&g, 0.35, 0.65);
                let (p, q) = *EPS_CHOICES.choose(&mut self.rng).unwrap();
                Instance::new(&g, seed)
                    .with_set("A", &a)
                    .with_param("k", self.rng.gen_range(2..=3))
                    .with_param("eps", format!("{p}/{q}"))
            }
            "V16" => {
                let g = self.group(4, 24);
                let (coeffs, beta, a) = self.solution_free(4, 6, &g)?;
                Instance::new(&g, seed)
                    .with_set("A", &a)
                    .with_param("coeffs", coeffs)
                    .with_param("beta", beta)
                    .with_param("eps", "1/8")
            }
            "V17" => {
                let g = self.group(2, 20);
                let a = self.set(&g, 0.4, 0.9);
                let k = self.rng.gen_range(1..=3);
                let x = self.sized(&g, k);
                Instance::new(&g, seed).with_set("A", &a).with_set("X", &x)
            }
            "V20" => {
                let g = self.group(2, 20);
                let a = self.set(&g, 0.1, 0.6);
                let elems = a.to_vec();
                let a0 = *elems.choose(&mut self.rng).unwrap();
                let k = self.rng.gen_range(1..=3);
                let mut x = GroupSet::singleton(&g, 0)?;
                for _ in 0..k {
                    let ai = *elems.choose(&mut self.rng).unwrap();
                    x.insert(g.sub_raw(a0, ai))?;
                }
                Instance::new(&g, seed).with_set("A", &a).with_set("X", &x)
            }
            "V21" => {
                let g = self.group(2, 6);
                let mut inst = Instance::new(&g, seed);
                for name in ["A", "B", "C", "D"] {
                    let s = self.set(&g, 0.15, 0.7);
                    inst = inst.with_set(name, &s);
                }
                inst
            }
            "V22" => {
                let g = self.group(2, 24);
                let a = self.set(&g, 0.05, 0.4);
                let b = self.set(&g, 0.05, 0.5);
                Instance::new(&g, seed).with_set("A", &a).with_set("B", &b)
            }
            "V23" => {
                let g = self.group(2, 5);
                let k1 = self.rng.gen_range(1..=2);
                let k2 = self.rng.gen_range(1..=2);
                let k = self.rng.gen_range(2..=3);
                let w = self.tuples(&g, k1, 0.05, 0.5);
                let y = self.tuples(&g, k2, 0.05, 0.5);
                let x = self.set(&g, 0.1, 0.8);
                let z = self.set(&g, 0.1, 0.8);
                let mut inst = Instance::new(&g, seed)
                    .with_tuples("W", k1, &w)
                    .with_tuples("Y", k2, &y)
                    .with_set("X", &x)
                    .with_set("Z", &z)
                    .with_param("k", k);
                for i in 1..=k {
                    let s = self.set(&g, 0.1, 0.8);
                    inst = inst.with_set(&format!("A{i}"), &s);
                }
                inst
            }
            "V24" => {
                let g = self.group(2, 5);
                let blocks: Vec<usize> = [&[1][..], &[2], &[3], &[1, 1], &[1, 2], &[2, 1]]
                    .choose(&mut self.rng)
                    .unwrap()
                    .to_vec();
                let n = blocks.len();
                let m: usize = blocks.iter().sum();
                let a = self.tuples(&g, m, 0.05, 0.5);
                let b = self.tuples(&g, n, 0.05, 0.5);
                let c = self.tuples(&g, n, 0.05, 0.5);
                Instance::new(&g, seed)
                    .with_tuples("A", m, &a)
                    .with_tuples("B", n, &b)
                    .with_tuples("C", n, &c)
                    .with_param("blocks", blocks)
            }
            "V25" => {
                let g = self.group(2, 6);
                let n = self.rng.gen_range(1..=2);
                let blocks: Vec<usize> = (0..n).map(|_| self.rng.gen_range(1..=3 - (n - 1))).collect();
                let q = self.set(&g, 0.15, 0.8);
                let b = self.tuples(&g, n, 0.05, 0.5);
                Instance::new(&g, seed)
                    .with_set("Q", &q)
                    .with_tuples("B", n, &b)
                    .with_param("blocks", blocks)
            }
            "V26" => {
                let m = self.rng.gen_range(2..=3);
                let hi = if m == 2 { 8 } else { 4 };
                let g = self.group(2, hi);
                let mut inst = Instance::new(&g, seed).with_param("m", m);
                for i in 1..=m {
                    let u = self.set(&g, 0.4, 0.95);
                    inst = inst.with_set(&format!("U{i}"), &u);
                }
                inst
            }
            "V27" => {
                let g = self.group(2, 16);
                let u = self.set(&g, 0.6, 0.95);
                let s = self.set(&g, 0.3, 1.0);
                Instance::new(&g, seed)
                    .with_set("U", &u)
                    .with_set("S", &s)
                    .with_param("m", self.rng.gen_range(1..=3))
            }
            "V28" => {
                let g = self.prime(5, 47);
                let a = self.set(&g, 0.1, 0.5);
                Instance::new(&g, seed).with_set("A", &a)
            }
            "V29" => {
                let g = self.prime(3, 61);
                let r = quadratic_residues(g.order())?;
                Instance::new(&g, seed).with_set("R", &r)
            }
            "V30" => {
                let g = self.prime(5, 47);
                let mut a = self.set(&g, 0.05, 0.3);
                while difference_set(&a, &a)?.is_full() && a.len() > 1 {
                    let x = a.min_element().expect("nonempty");
                    a.remove(x);
                }
                Instance::new(&g, seed).with_set("A", &a)
            }
            _ => return Err(Error::UnknownCheck(id.to_string())),
        };
        Ok(inst)
    }
}
