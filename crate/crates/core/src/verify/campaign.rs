use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{check_info, generate, registry, run_check, CheckResult, Instance, Outcome};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::set::GroupSet;

/// Stored failures are capped so a systematic bug cannot exhaust memory.
const MAX_FAILURE_RECORDS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignConfig {
    /// `"all"`, `"core"` or a comma-separated list of check ids.
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub parallelism: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            suite: "all".into(),
            trials: 100,
            seed: 1,
            parallelism: 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub check_id: String,
    pub attempted: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub reported: usize,
    /// Evaluation errors; these also count as failures.
    pub errors: usize,
}

impl CheckTally {
    fn record(&mut self, outcome: &Outcome) {
        self.attempted += 1;
        match outcome {
            Outcome::Pass => self.passed += 1,
            Outcome::Fail => self.failed += 1,
            Outcome::Skipped { .. } => self.skipped += 1,
            Outcome::Reported => self.reported += 1,
            Outcome::Error { .. } => {
                self.errors += 1;
                self.failed += 1;
            }
        }
    }

    fn absorb(&mut self, other: &CheckTally) {
        self.attempted += other.attempted;
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
        self.reported += other.reported;
        self.errors += other.errors;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureRecord {
    pub trial: usize,
    pub result: CheckResult,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub total: CheckTally,
    pub per_check: Vec<CheckTally>,
    pub failures: Vec<FailureRecord>,
    pub failures_truncated: bool,
    pub wall_seconds: f64,
}

impl CampaignReport {
    pub fn all_hold(&self) -> bool {
        self.total.failed == 0
    }

    fn assemble(config: CampaignConfig, ids: &[&str], results: Vec<(usize, CheckResult)>, start: Instant) -> Self {
        let mut per: BTreeMap<&str, CheckTally> = ids
            .iter()
            .map(|&id| (id, CheckTally { check_id: id.into(), ..Default::default() }))
            .collect();
        let mut failures = Vec::new();
        let mut truncated = false;
        for (trial, r) in results {
            per.get_mut(r.check_id.as_str())
                .expect("id from the suite")
                .record(&r.outcome);
            if matches!(r.outcome, Outcome::Fail | Outcome::Error { .. }) {
                if failures.len() < MAX_FAILURE_RECORDS {
                    failures.push(FailureRecord { trial, result: r });
                } else {
                    truncated = true;
                }
            }
        }
        let per_check: Vec<CheckTally> = ids.iter().map(|id| per[id].clone()).collect();
        let mut total = CheckTally { check_id: "total".into(), ..Default::default() };
        for t in &per_check {
            total.absorb(t);
        }
        CampaignReport {
            config,
            total,
            per_check,
            failures,
            failures_truncated: truncated,
            wall_seconds: start.elapsed().as_secs_f64(),
        }
    }
}

/// Checks swept by [`exhaustive_suite`].
pub const CORE_SUITE: [&str; 5] = ["V02", "V03", "V09", "V23", "V26"];

/// Check ids in a named suite: `"all"` (every check except report-only ones),
/// `"everything"`, `"core"`, or a comma-separated id list.
pub fn suite_ids(suite: &str) -> Result<Vec<&'static str>> {
    match suite {
        "all" => Ok(registry().iter().filter(|c| !c.report_only).map(|c| c.id).collect()),
        "everything" => Ok(registry().iter().map(|c| c.id).collect()),
        "core" => Ok(CORE_SUITE.to_vec()),
        _ => suite
            .split(',')
            .map(|s| check_info(s.trim()).map(|c| c.id))
            .collect(),
    }
}

fn pool(parallelism: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
}

/// Runs `trials` seeded instances of every check in the suite; trial `t`
/// uses seed `seed ^ t`.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    let start = Instant::now();
    let ids = suite_ids(&config.suite)?;
    let jobs: Vec<(&str, usize)> = ids
        .iter()
        .flat_map(|&id| (0..config.trials).map(move |t| (id, t)))
        .collect();
    let seed = config.seed;
    let results: Vec<(usize, CheckResult)> = pool(config.parallelism)?.install(|| {
        jobs.par_iter()
            .map(|&(id, trial)| (trial, evaluate_trial(id, seed ^ trial as u64)))
            .collect()
    });
    Ok(CampaignReport::assemble(config.clone(), &ids, results, start))
}

fn evaluate_trial(id: &str, seed: u64) -> CheckResult {
    let info = check_info(id).expect("id from the suite");
    let errored = |instance: Instance, message: String| CheckResult {
        check_id: info.id.into(),
        name: info.name.into(),
        anchor: info.anchor.into(),
        instance,
        outcome: Outcome::Error { message },
        comparisons: vec![],
        notes: BTreeMap::new(),
    };
    let instance = match generate(id, seed) {
        Ok(i) => i,
        Err(e) => return errored(Instance { group: String::new(), sets: BTreeMap::new(), params: BTreeMap::new(), seed }, e.to_string()),
    };
    match run_check(id, &instance) {
        Ok(r) => r,
        Err(e) => errored(instance, e.to_string()),
    }
}

/// Largest group order accepted by [`exhaustive_suite`].
pub const EXHAUSTIVE_MAX_ORDER: usize = 8;

fn all_subsets(g: &Arc<Group>) -> impl Iterator<Item = GroupSet> + '_ {
    (0u64..1 << g.order()).map(move |m| GroupSet::from_mask(g, m))
}

/// One representative per translation class of subsets, the empty set included.
fn translation_classes(g: &Arc<Group>) -> Vec<GroupSet> {
    let mut seen = std::collections::HashSet::new();
    all_subsets(g)
        .filter(|s| {
            let key = (0..g.order()).map(|t| s.translate(t).bits()[0]).min().unwrap_or(0);
            seen.insert(key)
        })
        .collect()
}

/// Exhaustive sweep of the `"core"` suite over one small group.
///
/// Every nonempty `A` for the cover identity and the basic bounds; all `A`,
/// `B` and all `X` with `0 ∈ X`, `|X| <= 2` for the shift-intersection
/// inclusion; every pair of translation classes for Cartesian universality
/// when `|G|^2 <= 64`; every quadruple of translation classes for the
/// triangle relations when there are at most `2^16` of them. The reductions
/// use that each quantity involved is invariant under translating any one
/// argument.
pub fn exhaustive_suite(g: &Arc<Group>, parallelism: usize) -> Result<CampaignReport> {
    let start = Instant::now();
    let n = g.order();
    if n > EXHAUSTIVE_MAX_ORDER {
        return Err(Error::EnumerationCap {
            size: 1u128 << n,
            cap: 1u128 << EXHAUSTIVE_MAX_ORDER,
        });
    }
    let mut ids = vec!["V02", "V03", "V09"];
    let mut instances: Vec<(&str, Instance)> = Vec::new();
    for a in all_subsets(g).skip(1) {
        let inst = Instance::new(g, 0).with_set("A", &a);
        instances.push(("V02", inst.clone()));
        instances.push(("V03", inst));
    }
    let xs: Vec<GroupSet> = (0..n)
        .map(|x| GroupSet::from_ranks(g, [0, x]).expect("ranks in range"))
        .collect();
    for a in all_subsets(g) {
        for b in all_subsets(g).skip(1) {
            for x in &xs {
                let inst = Instance::new(g, 0).with_set("A", &a).with_set("B", &b).with_set("X", x);
                instances.push(("V09", inst));
            }
        }
    }
    let classes = translation_classes(g);
    if n * n <= 64 {
        ids.push("V26");
        for u1 in classes.iter().filter(|s| !s.is_empty()) {
            for u2 in classes.iter().filter(|s| !s.is_empty()) {
                let inst = Instance::new(g, 0).with_param("m", 2).with_set("U1", u1).with_set("U2", u2);
                instances.push(("V26", inst));
            }
        }
    }
    if classes.len().pow(4) <= 1 << 16 {
        ids.push("V23");
        for w in &classes {
            for x in &classes {
                for y in &classes {
                    for z in &classes {
                        let inst = Instance::new(g, 0)
                            .with_set("W", w)
                            .with_set("Y", y)
                            .with_set("X", x)
                            .with_set("Z", z)
                            .with_set("A1", x)
                            .with_set("A2", z)
                            .with_param("k", 2);
                        instances.push(("V23", inst));
                    }
                }
            }
        }
    }
    let results: Vec<(usize, CheckResult)> = pool(parallelism)?.install(|| {
        instances
            .par_iter()
            .enumerate()
            .map(|(t, (id, inst))| {
                let r = run_check(id, inst).unwrap_or_else(|e| {
                    let info = check_info(id).expect("registered id");
                    CheckResult {
                        check_id: info.id.into(),
                        name: info.name.into(),
                        anchor: info.anchor.into(),
                        instance: inst.clone(),
                        outcome: Outcome::Error { message: e.to_string() },
                        comparisons: vec![],
                        notes: BTreeMap::new(),
                    }
                });
                (t, r)
            })
            .collect()
    });
    let config = CampaignConfig {
        suite: format!("core:{}", g.spec_string()),
        trials: 0,
        seed: 0,
        parallelism,
    };
    Ok(CampaignReport::assemble(config, &ids, results, start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites() {
        let all = suite_ids("all").unwrap();
        assert!(!all.contains(&"V29"));
        assert!(all.contains(&"V30"));
        assert_eq!(suite_ids("v02, V05").unwrap(), vec!["V02", "V05"]);
        assert!(suite_ids("V77").is_err());
    }

    #[test]
    fn exhaustive_small_groups() {
        for spec in ["Z3", "Z2^2", "Z5"] {
            let g = Arc::new(spec.parse::<Group>().unwrap());
            let r = exhaustive_suite(&g, 1).unwrap();
            assert!(r.all_hold(), "{spec}: {:?}", r.failures.first());
            assert_eq!(r.per_check.len(), 5);
        }
        let z4 = Arc::new(Group::cyclic(4).unwrap());
        assert_eq!(translation_classes(&z4).len(), 6);
        assert!(exhaustive_suite(&Arc::new(Group::cyclic(9).unwrap()), 1).is_err());
    }

    #[test]
    fn small_campaign_is_reproducible() {
        let cfg = CampaignConfig {
            suite: "V01,V04,V09".into(),
            trials: 20,
            seed: 5,
            parallelism: 2,
        };
        let a = run_campaign(&cfg).unwrap();
        let b = run_campaign(&cfg).unwrap();
        assert_eq!(a.total, b.total);
        assert_eq!(a.total.attempted, 60);
        assert!(a.all_hold(), "{:?}", a.failures);
    }
}
