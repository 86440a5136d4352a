//! Samplers for the reference models and the replication harness for band
//! coverage and test level studies.
//!
//! Replication `r` of an experiment with base seed `s` owns the seed
//! `split(s, r)` (see [`crate::seed`]). Inside a replication the data are drawn
//! from stream 0 of that seed and the weights for the `j`-th subsample rule
//! from stream `j + 1`, so every rule resamples the same data set. Results are
//! tallied as integer counts, which makes the report independent of the order
//! in which replications run.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bands::{
    band_covers, band_for_population_cdf, band_for_sample_edf, classical_band, theta_band, Truth,
};
use crate::edf::{Edf, WeightedEdf};
use crate::error::{domain, Result};
use crate::gof::{run_test, TestFamily};
use crate::limitdist::CdfModel;
use crate::resample::{draw_weights, SubsampleRule};
use crate::seed::{rng_from_seed, split};

/// Above this many degrees of freedom χ² variates come from the gamma
/// sampler instead of a sum of squared normals.
const CHI_SQUARE_SUM_LIMIT: u32 = 100;

/// Draws `count` values from `model`.
///
/// Normals use the ziggurat sampler of `rand_distr::StandardNormal`; χ²_k is
/// a sum of `k` squared normals (gamma sampler for `k > 100`); `t_k` is
/// `Z / √(χ²_k / k)`; uniform and tabulated models use inversion.
pub fn sample_distribution(model: &CdfModel, count: usize, seed: u64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(domain("sample size must be positive"));
    }
    model.validate()?;
    let mut rng = rng_from_seed(seed);
    let out = match model {
        CdfModel::Uniform01 => (0..count).map(|_| rng.random::<f64>()).collect(),
        CdfModel::Normal { mean, sd } => (0..count)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                mean + sd * z
            })
            .collect(),
        CdfModel::ChiSquare { df } => {
            let df = *df;
            (0..count)
                .map(|_| chi_square_variate(&mut rng, df))
                .collect()
        }
        CdfModel::StudentT { df } => {
            let df = *df;
            (0..count)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z / (chi_square_variate(&mut rng, df) / df as f64).sqrt()
                })
                .collect()
        }
        CdfModel::EmpiricalTable { .. } => {
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                // open interval keeps the quantile argument inside (0, 1)
                let u: f64 = rng.random_range(f64::EPSILON..1.0);
                out.push(model.quantile(u)?);
            }
            out
        }
    };
    Ok(out)
}

fn chi_square_variate<R: Rng>(rng: &mut R, df: u32) -> f64 {
    if df <= CHI_SQUARE_SUM_LIMIT {
        (0..df)
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                z * z
            })
            .sum()
    } else {
        ChiSquared::new(df as f64).expect("positive df").sample(rng)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    /// Subsample band for `F` against the truth, alongside the classical band.
    CoverageF,
    /// Subsample band for `F_N` against the replication's own EDF.
    CoverageFn,
    /// θ-indexed bands for `F` against the truth.
    ThetaBandCoverage { thetas: Vec<f64> },
    /// Rejection rate of a test under a true null.
    GofLevel {
        family: TestFamily,
        thetas: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub distribution: CdfModel,
    pub n: u64,
    pub rules: Vec<SubsampleRule>,
    pub alpha: f64,
    pub replications: u64,
    pub base_seed: u64,
    pub experiment: Experiment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub distribution: String,
    pub n: u64,
    pub rule: SubsampleRule,
    pub m: u64,
    pub theta: Option<f64>,
    pub empirical_coverage: f64,
    pub classical_coverage: Option<f64>,
    pub replications: u64,
    pub standard_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub experiment: Experiment,
    pub alpha: f64,
    pub base_seed: u64,
    pub rows: Vec<CoverageRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub distribution: String,
    pub n: u64,
    pub rule: SubsampleRule,
    pub m: u64,
    pub family: TestFamily,
    pub theta: f64,
    pub rejection_rate: f64,
    pub replications: u64,
    pub standard_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub alpha: f64,
    pub base_seed: u64,
    pub rows: Vec<LevelRow>,
}

fn standard_error(p: f64, reps: u64) -> f64 {
    (p * (1.0 - p) / reps as f64).sqrt()
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(domain("replications must be positive"));
        }
        if self.n == 0 {
            return Err(domain("sample size must be positive"));
        }
        if self.rules.is_empty() {
            return Err(domain("at least one subsample rule is required"));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(domain(format!("alpha = {} outside [0, 1]", self.alpha)));
        }
        self.rules.iter().try_for_each(SubsampleRule::validate)?;
        self.distribution.validate()
    }

    fn thetas(&self) -> &[f64] {
        match &self.experiment {
            Experiment::ThetaBandCoverage { thetas } | Experiment::GofLevel { thetas, .. } => {
                thetas
            }
            _ => &[],
        }
    }

    /// Outcomes per replication, one per (rule, θ) cell, θ varying fastest.
    fn cells_per_rule(&self) -> usize {
        match self.experiment {
            Experiment::CoverageF | Experiment::CoverageFn => 1,
            _ => self.thetas().len(),
        }
    }

    fn replicate(&self, r: u64) -> Result<(Vec<bool>, bool)> {
        let rep_seed = split(self.base_seed, r);
        let data = sample_distribution(&self.distribution, self.n as usize, split(rep_seed, 0))?;
        let h = Edf::from_values(&data)?;
        let mut outcomes = Vec::with_capacity(self.rules.len() * self.cells_per_rule());
        for (j, rule) in self.rules.iter().enumerate() {
            let m = rule.resolve(self.n).m;
            let w = draw_weights(self.n, m, split(rep_seed, j as u64 + 1))?;
            let g = WeightedEdf::from_sample(&data, &w)?;
            match &self.experiment {
                Experiment::CoverageF => {
                    let band = band_for_population_cdf(&g, self.n, self.alpha)?;
                    outcomes.push(band_covers(&band, Truth::Cdf(&self.distribution))?);
                }
                Experiment::CoverageFn => {
                    let band = band_for_sample_edf(&g, self.alpha)?;
                    outcomes.push(band_covers(&band, Truth::Edf(&h))?);
                }
                Experiment::ThetaBandCoverage { thetas } => {
                    for &theta in thetas {
                        let band = theta_band(&g, &h, theta, self.alpha)?;
                        outcomes.push(band_covers(&band, Truth::Cdf(&self.distribution))?);
                    }
                }
                Experiment::GofLevel { family, thetas } => {
                    for &theta in thetas {
                        let result =
                            run_test(*family, &g, Some(&h), theta, &self.distribution, self.alpha)?;
                        outcomes.push(result.reject);
                    }
                }
            }
        }
        let classical = match self.experiment {
            Experiment::CoverageF => band_covers(
                &classical_band(&h, self.alpha)?,
                Truth::Cdf(&self.distribution),
            )?,
            _ => false,
        };
        Ok((outcomes, classical))
    }

    /// Integer tallies over all replications: one per cell plus the classical
    /// band in the last slot.
    fn tally(&self, execution: Execution) -> Result<Vec<u64>> {
        let width = self.rules.len() * self.cells_per_rule() + 1;
        let to_counts = |r: u64| -> Result<Vec<u64>> {
            let (outcomes, classical) = self.replicate(r)?;
            let mut counts: Vec<u64> = outcomes.into_iter().map(u64::from).collect();
            counts.push(u64::from(classical));
            Ok(counts)
        };
        let add = |mut a: Vec<u64>, b: Vec<u64>| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        };
        match execution {
            Execution::Serial => (0..self.replications)
                .try_fold(vec![0; width], |acc, r| Ok(add(acc, to_counts(r)?))),
            Execution::Parallel => (0..self.replications)
                .into_par_iter()
                .map(to_counts)
                .try_reduce(|| vec![0; width], |a, b| Ok(add(a, b))),
        }
    }
}

pub fn run_coverage_experiment(cfg: &ExperimentConfig) -> Result<CoverageReport> {
    run_coverage_experiment_with(cfg, Execution::default())
}

pub fn run_coverage_experiment_with(
    cfg: &ExperimentConfig,
    execution: Execution,
) -> Result<CoverageReport> {
    cfg.validate()?;
    if matches!(cfg.experiment, Experiment::GofLevel { .. }) {
        return Err(domain(
            "level experiments go through run_gof_level_experiment",
        ));
    }
    let counts = cfg.tally(execution)?;
    let reps = cfg.replications;
    let rate = |c: u64| c as f64 / reps as f64;
    let classical = match cfg.experiment {
        Experiment::CoverageF => Some(rate(counts[counts.len() - 1])),
        _ => None,
    };
    let thetas: Vec<Option<f64>> = match &cfg.experiment {
        Experiment::ThetaBandCoverage { thetas } => thetas.iter().map(|&t| Some(t)).collect(),
        _ => vec![None],
    };
    let mut rows = Vec::new();
    let mut cell = 0;
    for rule in &cfg.rules {
        for &theta in &thetas {
            let p = rate(counts[cell]);
            cell += 1;
            rows.push(CoverageRow {
                distribution: cfg.distribution.to_string(),
                n: cfg.n,
                rule: *rule,
                m: rule.resolve(cfg.n).m,
                theta,
                empirical_coverage: p,
                classical_coverage: classical,
                replications: reps,
                standard_error: standard_error(p, reps),
            });
        }
    }
    Ok(CoverageReport {
        experiment: cfg.experiment.clone(),
        alpha: cfg.alpha,
        base_seed: cfg.base_seed,
        rows,
    })
}

pub fn run_gof_level_experiment(cfg: &ExperimentConfig) -> Result<LevelReport> {
    run_gof_level_experiment_with(cfg, Execution::default())
}

pub fn run_gof_level_experiment_with(
    cfg: &ExperimentConfig,
    execution: Execution,
) -> Result<LevelReport> {
    cfg.validate()?;
    let Experiment::GofLevel { family, thetas } = &cfg.experiment else {
        return Err(domain(
            "coverage experiments go through run_coverage_experiment",
        ));
    };
    let counts = cfg.tally(execution)?;
    let reps = cfg.replications;
    let mut rows = Vec::new();
    let mut cell = 0;
    for rule in &cfg.rules {
        for &theta in thetas {
            let p = counts[cell] as f64 / reps as f64;
            cell += 1;
            rows.push(LevelRow {
                distribution: cfg.distribution.to_string(),
                n: cfg.n,
                rule: *rule,
                m: rule.resolve(cfg.n).m,
                family: *family,
                theta,
                rejection_rate: p,
                replications: reps,
                standard_error: standard_error(p, reps),
            });
        }
    }
    Ok(LevelReport {
        alpha: cfg.alpha,
        base_seed: cfg.base_seed,
        rows,
    })
}

impl CoverageReport {
    /// Plain-text table: distribution, N, m rule, subsample coverage and the
    /// classical coverage where one was computed.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<14} {:>7} {:>12} {:>8} {:>7} {:>10} {:>10}",
            "distribution", "N", "rule", "m", "theta", "coverage", "classical"
        );
        for row in &self.rows {
            let theta = row
                .theta
                .map_or_else(|| "-".to_string(), |t| format!("{t}"));
            let classical = row
                .classical_coverage
                .map_or_else(|| "-".to_string(), |c| format!("{c:.3}"));
            let _ = writeln!(
                out,
                "{:<14} {:>7} {:>12} {:>8} {:>7} {:>10.3} {:>10}",
                row.distribution,
                row.n,
                row.rule.to_string(),
                row.m,
                theta,
                row.empirical_coverage,
                classical
            );
        }
        out
    }
}

impl LevelReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<14} {:>7} {:>12} {:>8} {:>6} {:>7} {:>10}",
            "distribution", "N", "rule", "m", "test", "theta", "rejection"
        );
        for row in &self.rows {
            let family = match row.family {
                TestFamily::Ks => "ks",
                TestFamily::Cvm => "cvm",
            };
            let _ = writeln!(
                out,
                "{:<14} {:>7} {:>12} {:>8} {:>6} {:>7} {:>10.3}",
                row.distribution,
                row.n,
                row.rule.to_string(),
                row.m,
                family,
                row.theta,
                row.rejection_rate
            );
        }
        out
    }
}
