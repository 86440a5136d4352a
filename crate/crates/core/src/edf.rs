//! Empirical distribution functions as exact step functions.
//!
//! Both [`Edf`] (the sample EDF `F_N`) and [`WeightedEdf`] (the randomly
//! weighted subsample EDF `F_{m,N}`) keep integer cumulative counts over an
//! integer denominator, so the last plateau is exactly 1.
//!
//! The functionals below work directly on the x-scale. Because every reference
//! `F` is continuous and monotone, suprema and integrals of
//! `S(x) - λ F(x)` with a step part `S` reduce to finitely many evaluations at
//! the jump points of `S`.

use std::cmp::Ordering;

use crate::error::{construction, Result};
use crate::limitdist::CdfModel;

/// A right-continuous step CDF with rational values `cum_k / total`.
pub trait StepCdf {
    /// Distinct jump points, strictly increasing.
    fn points(&self) -> &[f64];
    /// Cumulative numerators; `cum[k]` is the count at or below `points[k]`.
    fn cum_counts(&self) -> &[u64];
    fn total(&self) -> u64;

    /// Numerator of the value at `x`: the count at or below `x`.
    fn count_le(&self, x: f64) -> u64 {
        let k = self.points().partition_point(|&p| p <= x);
        if k == 0 {
            0
        } else {
            self.cum_counts()[k - 1]
        }
    }

    fn eval(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.total() as f64
    }

    /// Left limit `G(x-)`.
    fn left_limit(&self, x: f64) -> f64 {
        let k = self.points().partition_point(|&p| p < x);
        if k == 0 {
            0.0
        } else {
            self.cum_counts()[k - 1] as f64 / self.total() as f64
        }
    }

    /// Plateau value right of `points[k]`.
    fn plateau(&self, k: usize) -> f64 {
        self.cum_counts()[k] as f64 / self.total() as f64
    }
}

/// Sample EDF `F_N(x) = #{X_i <= x} / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edf {
    points: Vec<f64>,
    cum: Vec<u64>,
    n: u64,
}

/// Weighted EDF `F_{m,N}(x) = Σ_i (w_i/m) 1(X_i <= x)` over the selected
/// observations.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEdf {
    points: Vec<f64>,
    cum: Vec<u64>,
    m: u64,
    n: u64,
}

fn merge_sorted_pairs(mut pairs: Vec<(f64, u64)>) -> Result<(Vec<f64>, Vec<u64>)> {
    if pairs.is_empty() {
        return Err(construction("empty sample"));
    }
    if pairs.iter().any(|(v, _)| !v.is_finite()) {
        return Err(construction("sample values must be finite"));
    }
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let mut points: Vec<f64> = Vec::with_capacity(pairs.len());
    let mut cum: Vec<u64> = Vec::with_capacity(pairs.len());
    let mut running = 0u64;
    for (v, c) in pairs {
        running += c;
        // -0.0 and 0.0 are one point
        match points.last() {
            Some(&last) if last == v => *cum.last_mut().expect("nonempty") = running,
            _ => {
                points.push(v);
                cum.push(running);
            }
        }
    }
    Ok((points, cum))
}

/// Builds `F_N` from raw values; ties are merged.
pub fn build_edf(values: &[f64]) -> Result<Edf> {
    let (points, cum) = merge_sorted_pairs(values.iter().map(|&v| (v, 1)).collect())?;
    let n = values.len() as u64;
    Ok(Edf { points, cum, n })
}

/// Builds `F_{m,N}` from `(value, count)` pairs of the selected observations.
/// Counts must be positive and sum to `m`; `n` is the population size `N`.
pub fn build_weighted_edf(pairs: &[(f64, u64)], m: u64, n: u64) -> Result<WeightedEdf> {
    if n == 0 {
        return Err(construction("population size must be positive"));
    }
    if pairs.iter().any(|&(_, c)| c == 0) {
        return Err(construction("subsample counts must be positive"));
    }
    let total: u64 = pairs.iter().map(|&(_, c)| c).sum();
    if total != m {
        return Err(construction(format!(
            "subsample counts sum to {total}, expected m = {m}"
        )));
    }
    let (points, cum) = merge_sorted_pairs(pairs.to_vec())?;
    Ok(WeightedEdf { points, cum, m, n })
}

impl Edf {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        build_edf(values)
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

impl WeightedEdf {
    pub fn from_pairs(pairs: &[(f64, u64)], m: u64, n: u64) -> Result<Self> {
        build_weighted_edf(pairs, m, n)
    }

    /// `F_{m,N}` of the full sample `values` under weights `w`.
    pub fn from_sample(values: &[f64], w: &crate::resample::WeightVector) -> Result<Self> {
        if values.len() as u64 != w.population_size() {
            return Err(construction(format!(
                "sample has {} values but weights address {}",
                values.len(),
                w.population_size()
            )));
        }
        let pairs: Vec<(f64, u64)> = w
            .entries()
            .iter()
            .map(|&(i, c)| (values[i as usize], c))
            .collect();
        build_weighted_edf(&pairs, w.draw_count(), w.population_size())
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

impl StepCdf for Edf {
    fn points(&self) -> &[f64] {
        &self.points
    }
    fn cum_counts(&self) -> &[u64] {
        &self.cum
    }
    fn total(&self) -> u64 {
        self.n
    }
}

impl StepCdf for WeightedEdf {
    fn points(&self) -> &[f64] {
        &self.points
    }
    fn cum_counts(&self) -> &[u64] {
        &self.cum
    }
    fn total(&self) -> u64 {
        self.m
    }
}

/// A linear combination `S = Σ coef_i · G_i` of step CDFs, itself a step
/// function. `values[0]` is the value left of the first point and
/// `values[k + 1]` the plateau on `[points[k], points[k + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCombination {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepCombination {
    /// Terms with a zero coefficient are skipped entirely, so e.g.
    /// `G - 0·H` has exactly the jump points and values of `G`.
    pub fn new(terms: &[(&dyn StepCdf, f64)]) -> Self {
        let terms: Vec<(&dyn StepCdf, f64)> =
            terms.iter().copied().filter(|&(_, c)| c != 0.0).collect();
        let mut cursors = vec![0usize; terms.len()];
        let capacity = terms.iter().map(|(s, _)| s.points().len()).sum();
        let mut points = Vec::with_capacity(capacity);
        let mut values = Vec::with_capacity(capacity + 1);
        values.push(0.0);
        loop {
            let next = terms
                .iter()
                .zip(&cursors)
                .filter_map(|((s, _), &k)| s.points().get(k).copied())
                .min_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            let Some(x) = next else { break };
            let mut value = 0.0;
            for ((s, coef), k) in terms.iter().zip(cursors.iter_mut()) {
                if s.points().get(*k) == Some(&x) {
                    *k += 1;
                }
                if *k > 0 {
                    value += coef * s.plateau(*k - 1);
                }
            }
            points.push(x);
            values.push(value);
        }
        Self { points, values }
    }

    pub fn of(step: &dyn StepCdf) -> Self {
        Self::new(&[(step, 1.0)])
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.values[self.points.partition_point(|&p| p <= x)]
    }

    /// `sup_x |S(x) - λ F(x)|`. Between jumps `S` is constant and `λF` is
    /// monotone, so both one-sided values at every jump suffice; the tails
    /// are covered because `S` and `λF` share their limits whenever `S` is a
    /// combination of CDFs with coefficients summing to `λ`.
    pub fn sup_abs_deviation(&self, lambda: f64, model: Option<&CdfModel>) -> f64 {
        let mut sup = 0.0_f64;
        for (k, &x) in self.points.iter().enumerate() {
            let cont = match model {
                Some(f) if lambda != 0.0 => lambda * f.cdf(x),
                _ => 0.0,
            };
            let left = (self.values[k] - cont).abs();
            let right = (self.values[k + 1] - cont).abs();
            sup = sup.max(left).max(right);
        }
        sup
    }

    /// `∫ (S(x) - λ F(x))² dF(x)`, exactly, via `u = F(x)`: on a plateau of
    /// height `c` spanning `u ∈ [a, b]` the integrand is the quadratic
    /// `(c - λu)²`, whose integral is `(b - a)(p² + pq + q²)/3` with
    /// `p = c - λa`, `q = c - λb`.
    pub fn squared_deviation_integral(&self, lambda: f64, model: &CdfModel) -> f64 {
        let mut total = 0.0;
        let mut a = 0.0;
        for (k, &x) in self.points.iter().enumerate() {
            let b = model.cdf(x);
            total += quadratic_segment(self.values[k], lambda, a, b);
            a = b;
        }
        total += quadratic_segment(*self.values.last().expect("nonempty"), lambda, a, 1.0);
        total
    }
}

fn quadratic_segment(c: f64, lambda: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let p = c - lambda * a;
    let q = c - lambda * b;
    (b - a) * (p * p + p * q + q * q) / 3.0
}

/// `sup_x |G(x) - F(x)|` for a step CDF `G` and continuous `F`.
pub fn sup_dist_step_cont(g: &dyn StepCdf, f: &CdfModel) -> f64 {
    StepCombination::of(g).sup_abs_deviation(1.0, Some(f))
}

/// `sup_x |G(x) - H(x)|` over the union of both jump sets.
pub fn sup_dist_step_step(g: &WeightedEdf, h: &Edf) -> f64 {
    StepCombination::new(&[(g, 1.0), (h, -1.0)]).sup_abs_deviation(0.0, None)
}

/// `sup_x |(G(x) - θH(x)) - (1-θ)F(x)|`.
pub fn sup_dist_theta(g: &WeightedEdf, h: &Edf, theta: f64, f: &CdfModel) -> f64 {
    StepCombination::new(&[(g, 1.0), (h, -theta)]).sup_abs_deviation(1.0 - theta, Some(f))
}

/// `∫ (G(x) - F(x))² dF(x)`.
pub fn cvm_integral(g: &WeightedEdf, f: &CdfModel) -> f64 {
    StepCombination::of(g).squared_deviation_integral(1.0, f)
}

/// `∫ (G(x) - θH(x) - (1-θ)F(x))² dF(x)`.
pub fn cvm_integral_theta(g: &WeightedEdf, h: &Edf, theta: f64, f: &CdfModel) -> f64 {
    StepCombination::new(&[(g, 1.0), (h, -theta)]).squared_deviation_integral(1.0 - theta, f)
}
