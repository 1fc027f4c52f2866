//! Seeded girth experiments over random Cayley graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::girth::{girth, moore_bound, GeneratorTuple, GirthError, GirthOutcome, DEFAULT_MAX_GIRTH, DEFAULT_MEMORY_LIMIT};
use crate::groups::{Family, Group, GroupContext};
use crate::parallel::{map_indexed, mix64};
use crate::with_group;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub family: Family,
    pub param: u64,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_girth: usize,
    /// 0 means one thread per core.
    pub threads: usize,
    pub memory_limit: usize,
}

impl ExperimentConfig {
    pub fn new(family: Family, param: u64) -> Self {
        ExperimentConfig {
            family,
            param,
            k: 2,
            trials: 1000,
            seed: 0,
            max_girth: DEFAULT_MAX_GIRTH,
            threads: 0,
            memory_limit: DEFAULT_MEMORY_LIMIT,
        }
    }

    pub fn validate(&self) -> Result<GroupContext, ExperimentError> {
        if self.trials == 0 {
            return Err(ExperimentError::Config("trials must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(ExperimentError::Config("need at least one generator".into()));
        }
        if self.max_girth == 0 {
            return Err(ExperimentError::Config("max girth must be at least 1".into()));
        }
        GroupContext::new(self.family, self.param).map_err(ExperimentError::Group)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub girth: Option<usize>,
    pub witness: String,
    /// `girth / log_{2k-1} |G|`, rounded to 12 significant digits.
    pub normalized: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GirthHistogram {
    pub group: String,
    pub param: u64,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_girth: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub odd_count: usize,
    pub at_least_count: usize,
    pub records: Vec<TrialRecord>,
}

/// Rounds to 12 significant digits so printed output does not depend on
/// the last bits of a logarithm.
pub(crate) fn round_sig(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

impl GirthHistogram {
    pub fn count(&self, girth: usize) -> usize {
        self.histogram.get(&girth).copied().unwrap_or(0)
    }

    pub fn fraction(&self, girth: usize) -> f64 {
        self.count(girth) as f64 / self.trials as f64
    }

    pub fn odd_fraction(&self) -> f64 {
        self.odd_count as f64 / self.trials as f64
    }

    /// Two most frequent girths, most frequent first (ties to the smaller girth).
    pub fn modes(&self) -> Vec<usize> {
        let mut v: Vec<(usize, usize)> = self.histogram.iter().map(|(&g, &c)| (g, c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v.into_iter().take(2).map(|(g, _)| g).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("histogram serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,seed,girth,witness,normalized\n");
        for r in &self.records {
            let girth = r.girth.map(|g| g.to_string()).unwrap_or_default();
            let norm = r.normalized.map(|x| format!("{x:.12}")).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{}", r.trial, r.seed, girth, r.witness, norm);
        }
        out
    }

    /// Counts per even girth (`≤10`, 12, 14, …, max, `>max`) and the number
    /// of odd girths.
    pub fn to_table(&self) -> String {
        let mut header = vec!["girth".to_string(), "<=10".to_string()];
        let mut row = vec![format!("{}({})", self.group, self.param)];
        let small: usize = self.histogram.iter().filter(|(&g, _)| g <= 10 && g % 2 == 0).map(|(_, c)| c).sum();
        row.push(small.to_string());
        let mut g = 12;
        while g <= self.max_girth {
            header.push(g.to_string());
            row.push(self.count(g).to_string());
            g += 2;
        }
        let beyond: usize = self.histogram.iter().filter(|(&g, _)| g > self.max_girth).map(|(_, c)| c).sum();
        header.push(format!(">{}", self.max_girth));
        row.push((self.at_least_count + beyond).to_string());
        let width = header.iter().chain(&row).map(|s| s.len()).max().unwrap_or(0);
        let line = |cells: &[String]| cells.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" ");
        format!("{}\n{}\nn_odd = {} / {}\n", line(&header), line(&row), self.odd_count, self.trials)
    }
}

struct TrialOutput {
    record: TrialRecord,
    exact: Option<usize>,
}

fn run_trial<G: Group>(
    group: &G,
    cfg: &ExperimentConfig,
    trial: usize,
    log_size: f64,
    moore: usize,
) -> Result<TrialOutput, (usize, GirthError)> {
    let seed = mix64(cfg.seed, trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tuple = GeneratorTuple::random(group.clone(), cfg.k, &mut rng);
    let result = girth(&tuple, cfg.max_girth, cfg.memory_limit).map_err(|e| (trial, e))?;
    let (g, witness) = match &result.outcome {
        GirthOutcome::Exact { girth, witness } => {
            let valid = witness.len() == *girth
                && witness.is_cyclically_reduced()
                && tuple.evaluate(witness).map(|x| group.is_identity(&x)).unwrap_or(false)
                && (cfg.k < 2 || *girth <= moore.max(2));
            assert!(valid, "invalid witness {witness} for girth {girth} in trial {trial}");
            (Some(*girth), witness.to_string())
        }
        GirthOutcome::AtLeast { .. } => (None, String::new()),
    };
    let normalized = match g {
        Some(g) if log_size > 0.0 && log_size.is_finite() => Some(round_sig(g as f64 / log_size)),
        _ => None,
    };
    Ok(TrialOutput { record: TrialRecord { trial, seed, girth: g, witness, normalized }, exact: g })
}

/// Runs `cfg.trials` independent girth computations. Trial `t` draws its
/// generators from a ChaCha8 stream seeded with `mix64(seed, t)`.
pub fn run_girth_experiment(cfg: &ExperimentConfig) -> Result<GirthHistogram, ExperimentError> {
    let ctx = cfg.validate()?;
    let size = ctx.size();
    let log_size = if cfg.k >= 2 { size.log((2 * cfg.k - 1) as f64) } else { f64::NAN };
    let vertices = if size.log2 < 127.0 { 2f64.powf(size.log2).round() as u128 } else { u128::MAX };
    let moore = if cfg.k >= 2 { moore_bound(2 * cfg.k as u64, vertices) } else { usize::MAX };

    let outputs = with_group!(&ctx, g => {
        map_indexed(cfg.trials, cfg.threads, |t| run_trial(g, cfg, t, log_size, moore))
    });

    let mut failed = Vec::new();
    let mut records = Vec::with_capacity(cfg.trials);
    let mut histogram = BTreeMap::new();
    let (mut odd_count, mut at_least_count) = (0, 0);
    for out in outputs {
        match out {
            Ok(o) => {
                match o.exact {
                    Some(g) => {
                        *histogram.entry(g).or_insert(0) += 1;
                        if g % 2 == 1 {
                            odd_count += 1;
                        }
                    }
                    None => at_least_count += 1,
                }
                records.push(o.record);
            }
            Err(e) => failed.push(e),
        }
    }
    if !failed.is_empty() {
        return Err(ExperimentError::ResourceLimit { failed });
    }
    Ok(GirthHistogram {
        group: cfg.family.to_string(),
        param: cfg.param,
        k: cfg.k,
        trials: cfg.trials,
        seed: cfg.seed,
        max_girth: cfg.max_girth,
        histogram,
        odd_count,
        at_least_count,
        records,
    })
}
