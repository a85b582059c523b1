//! Randomized search for covers with a flat Fourier profile.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{dft, DensityFunction};
use crate::set::GroupSet;
use crate::setops::sumset;
use crate::solver::cover::CoverWitness;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FourierCoverOutcome {
    Found {
        cover: CoverWitness,
        /// `max_{chi != 1} |X^(chi)| |f^(chi)| / (|X| ||f||_1)` for the witness.
        spectral_ratio: f64,
        /// `eps^-2 log^2 N`, reported for comparison only.
        reference_bound: f64,
    },
    NotFound {
        /// Smallest spectral ratio over sampled sets that did cover `G`.
        tightest_violation: Option<f64>,
        trials: usize,
        reference_bound: f64,
    },
}

/// Seeded random search for `X` with `A + X = G` and
/// `|(X * f)^(chi)| <= eps |X| ||f||_1` for every `chi != 1`.
pub fn cov_fourier_constrained(
    a: &GroupSet,
    f: &DensityFunction<f64>,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<FourierCoverOutcome> {
    if !(eps > 0.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: "(0, inf)",
        });
    }
    if **f.group() != **a.group() {
        return Err(Error::GroupMismatch {
            left: a.group().spec_string(),
            right: f.group().spec_string(),
        });
    }
    if f.values().iter().any(|&v| v < 0.0) || f.values().iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidParameter("f must be nonnegative and not identically zero".into()));
    }
    if a.is_empty() {
        return Err(Error::EmptySet("A"));
    }
    let g = a.group();
    let n = g.order();
    let reference_bound = (n as f64).ln().powi(2) / (eps * eps);
    let f_hat = dft(&f.to_complex());
    let f_l1: f64 = f.values().iter().sum();

    let mut sizes = Vec::new();
    let mut s = n.div_ceil(a.len()) as f64;
    while (s.ceil() as usize) <= n {
        let k = s.ceil() as usize;
        if sizes.last() != Some(&k) {
            sizes.push(k);
        }
        s *= 1.25;
    }
    if sizes.last() != Some(&n) {
        sizes.push(n);
    }
    let per_size = trials.div_ceil(sizes.len()).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tightest: Option<f64> = None;
    let mut used = 0;
    for &size in &sizes {
        for _ in 0..per_size {
            if used == trials {
                break;
            }
            used += 1;
            let x = GroupSet::from_ranks(g, sample(&mut rng, n, size))?;
            if !sumset(a, &x)?.is_full() {
                continue;
            }
            let x_hat = dft(&DensityFunction::<f64>::indicator(&x).to_complex());
            let ratio = x_hat
                .values()
                .iter()
                .zip(f_hat.values())
                .skip(1)
                .map(|(u, v)| u.norm() * v.norm())
                .fold(0.0f64, f64::max)
                / (size as f64 * f_l1);
            if ratio <= eps + 1e-12 {
                let witness = x.to_vec();
                return Ok(FourierCoverOutcome::Found {
                    cover: CoverWitness {
                        value: Some(size),
                        witness,
                        optimal: false,
                        budget_exhausted: false,
                        lower_bound: n.div_ceil(a.len()),
                        upper_bound: Some(size),
                        nodes: used as u64,
                    },
                    spectral_ratio: ratio,
                    reference_bound,
                });
            }
            tightest = Some(tightest.map_or(ratio, |t| t.min(ratio)));
        }
    }
    Ok(FourierCoverOutcome::NotFound {
        tightest_violation: tightest,
        trials: used,
        reference_bound,
    })
}
