//! Multinomial virtual-resampling weights.
//!
//! A [`WeightVector`] holds the counts `w_i` of `m` independent uniform draws
//! from the population indices `{0, …, N-1}`, so that `(w_0, …, w_{N-1})` is
//! multinomial with `m` trials and equal cell probabilities `1/N`. Only the
//! nonzero counts are stored. Indices are 0-based everywhere in this crate,
//! including every serialized artifact.
//!
//! Draws use `ChaCha8Rng` seeded by [`crate::seed::rng_from_seed`] and rand's
//! unbiased `random_range` over `0..N`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{construction, domain, Error, Result};
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWeightVector", into = "RawWeightVector")]
pub struct WeightVector {
    n: u64,
    m: u64,
    seed: u64,
    /// `(index, count)` sorted by index, every count >= 1.
    entries: Vec<(u64, u64)>,
}

#[derive(Serialize, Deserialize)]
struct RawWeightVector {
    population_size: u64,
    draw_count: u64,
    seed: u64,
    /// 0-based record indices, strictly increasing.
    indices: Vec<u64>,
    counts: Vec<u64>,
}

impl TryFrom<RawWeightVector> for WeightVector {
    type Error = Error;

    fn try_from(raw: RawWeightVector) -> Result<Self> {
        if raw.indices.len() != raw.counts.len() {
            return Err(construction("indices and counts differ in length"));
        }
        let entries = raw.indices.into_iter().zip(raw.counts).collect();
        WeightVector::from_entries(raw.population_size, raw.draw_count, raw.seed, entries)
    }
}

impl From<WeightVector> for RawWeightVector {
    fn from(w: WeightVector) -> Self {
        let (indices, counts) = w.entries.into_iter().unzip();
        RawWeightVector {
            population_size: w.n,
            draw_count: w.m,
            seed: w.seed,
            indices,
            counts,
        }
    }
}

/// The weights are degenerate for the requested statistic (zero denominator).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Degenerate;

impl fmt::Display for Degenerate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("degenerate weight configuration")
    }
}

impl std::error::Error for Degenerate {}

impl WeightVector {
    /// Builds a weight vector from explicit `(index, count)` pairs. Entries may
    /// come in any order; zero counts are dropped.
    pub fn from_entries(n: u64, m: u64, seed: u64, mut entries: Vec<(u64, u64)>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(domain("population size and draw count must be positive"));
        }
        entries.retain(|&(_, c)| c > 0);
        entries.sort_unstable_by_key(|&(i, _)| i);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(construction("duplicate index in weight entries"));
        }
        if let Some(&(index, _)) = entries.iter().find(|&&(i, _)| i >= n) {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let total: u64 = entries.iter().map(|&(_, c)| c).sum();
        if total != m {
            return Err(construction(format!("counts sum to {total}, expected {m}")));
        }
        Ok(Self {
            n,
            m,
            seed,
            entries,
        })
    }

    pub fn population_size(&self) -> u64 {
        self.n
    }

    pub fn draw_count(&self) -> u64 {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Nonzero `(index, count)` pairs in increasing index order.
    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn count(&self, index: u64) -> u64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|k| self.entries[k].1)
            .unwrap_or(0)
    }

    fn all_counts_equal(&self) -> bool {
        self.entries.len() as u64 == self.n && self.m.is_multiple_of(self.n) && {
            let each = self.m / self.n;
            self.entries.iter().all(|&(_, c)| c == each)
        }
    }
}

/// Draws `m` indices uniformly from `{0, …, n-1}` and tallies them.
///
/// Runs in `O(m)` expected time; memory is `O(min(m, n))`.
pub fn draw_weights(n: u64, m: u64, seed: u64) -> Result<WeightVector> {
    if n == 0 || m == 0 {
        return Err(domain(format!(
            "draw_weights needs n >= 1 and m >= 1 (got n = {n}, m = {m})"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let entries = if n <= m {
        let mut dense = vec![0u64; n as usize];
        for _ in 0..m {
            dense[rng.random_range(0..n) as usize] += 1;
        }
        dense
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(i, c)| (i as u64, c))
            .collect()
    } else {
        let mut tally: HashMap<u64, u64> = HashMap::with_capacity(m as usize);
        for _ in 0..m {
            *tally.entry(rng.random_range(0..n)).or_insert(0) += 1;
        }
        let mut entries: Vec<(u64, u64)> = tally.into_iter().collect();
        entries.sort_unstable_by_key(|&(i, _)| i);
        entries
    };
    Ok(WeightVector {
        n,
        m,
        seed,
        entries,
    })
}

/// How the subsample size `m` is chosen from the population size `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum SubsampleRule {
    /// `m = ⌈N^a⌉`, `a > 0`.
    Power(f64),
    /// `m = ⌈cN⌉`, `0 < c <= 1`.
    Fraction(f64),
    Fixed(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsampleSize {
    pub m: u64,
    /// Set when `m >= N²`, outside the `m = o(N²)` regime.
    pub quadratic_warning: bool,
}

/// Ceiling that absorbs floating error in products and powers which are
/// mathematically integral (e.g. `(10^4)^0.5`).
fn integral_ceil(v: f64) -> u64 {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as u64
    } else {
        v.ceil() as u64
    }
}

impl SubsampleRule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SubsampleRule::Power(a) if !(a.is_finite() && a > 0.0) => {
                Err(domain(format!("power exponent {a} must be positive")))
            }
            SubsampleRule::Fraction(c) if !(c > 0.0 && c <= 1.0) => {
                Err(domain(format!("fraction {c} outside (0, 1]")))
            }
            SubsampleRule::Fixed(0) => Err(domain("fixed subsample size must be positive")),
            _ => Ok(()),
        }
    }

    pub fn resolve(&self, n: u64) -> SubsampleSize {
        let nf = n as f64;
        let m = match *self {
            SubsampleRule::Power(a) => integral_ceil(nf.powf(a)),
            SubsampleRule::Fraction(c) => integral_ceil(c * nf),
            SubsampleRule::Fixed(m) => m,
        }
        .max(1);
        let quadratic_warning = (m as f64) >= nf * nf;
        SubsampleSize {
            m,
            quadratic_warning,
        }
    }
}

pub fn resolve_subsample_size(rule: &SubsampleRule, n: u64) -> SubsampleSize {
    rule.resolve(n)
}

impl fmt::Display for SubsampleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsampleRule::Power(a) => write!(f, "pow:{a}"),
            SubsampleRule::Fraction(c) => write!(f, "frac:{c}"),
            SubsampleRule::Fixed(m) => write!(f, "fixed:{m}"),
        }
    }
}

impl FromStr for SubsampleRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            domain(format!(
                "bad subsample rule {s:?} (expected pow:A, frac:C or fixed:M)"
            ))
        };
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        let rule = match kind {
            "pow" => SubsampleRule::Power(value.parse().map_err(|_| bad())?),
            "frac" => SubsampleRule::Fraction(value.parse().map_err(|_| bad())?),
            "fixed" => SubsampleRule::Fixed(value.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        rule.validate()?;
        Ok(rule)
    }
}

/// `Σ_{i} (w_i/m - 1/N)²`, exact over all `N` indices: the `N - k` zero-count
/// indices each contribute `1/N²`.
pub fn weight_variance_stat(w: &WeightVector) -> f64 {
    centered_square_sum(w, 1.0)
}

/// `Σ_i (w_i/m - θ/N)²` over all `N` indices.
fn centered_square_sum(w: &WeightVector, theta: f64) -> f64 {
    let m = w.m as f64;
    let n = w.n as f64;
    let shift = theta / n;
    let nonzero: f64 = w
        .entries
        .iter()
        .map(|&(_, c)| {
            let d = c as f64 / m - shift;
            d * d
        })
        .sum();
    let zeros = (w.n - w.entries.len() as u64) as f64;
    nonzero + zeros * shift * shift
}

/// `√(Σ_i (w_i/m - 1/N)² + (1-θ)²/N)`, the common denominator of the
/// θ-indexed randomized processes.
pub fn theta_denominator(w: &WeightVector, theta: f64) -> std::result::Result<f64, Degenerate> {
    let lambda = 1.0 - theta;
    if lambda == 0.0 && w.all_counts_equal() {
        return Err(Degenerate);
    }
    let radicand = weight_variance_stat(w) + lambda * lambda / w.n as f64;
    if radicand <= 0.0 {
        return Err(Degenerate);
    }
    Ok(radicand.sqrt())
}

/// `max_i (w_i/m - θ/N)² / Σ_j (w_j/m - θ/N)²`, the maximal-negligibility
/// diagnostic of the weights. Zero-count indices enter the maximum through
/// `(θ/N)²`.
pub fn max_weight_negligibility(
    w: &WeightVector,
    theta: f64,
) -> std::result::Result<f64, Degenerate> {
    if theta == 1.0 && w.all_counts_equal() {
        return Err(Degenerate);
    }
    let m = w.m as f64;
    let shift = theta / w.n as f64;
    let mut max = w
        .entries
        .iter()
        .map(|&(_, c)| {
            let d = c as f64 / m - shift;
            d * d
        })
        .fold(0.0_f64, f64::max);
    if (w.entries.len() as u64) < w.n {
        max = max.max(shift * shift);
    }
    let total = centered_square_sum(w, theta);
    if total <= 0.0 {
        return Err(Degenerate);
    }
    Ok((max / total).min(1.0))
}
