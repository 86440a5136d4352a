//! Pointwise confidence intervals for `F_N(x)` and `F(x)` at a fixed `x`, from
//! the Studentized randomized central limit theorems. `F` may be discontinuous.
//!
//! Each constructor inverts one statistic as a symmetric Wald interval:
//!
//! * [`ci_for_sample_edf`]: `√m (F_{m,N}(x) - F_N(x)) / s`
//! * [`ci_for_population_cdf`]: `√(Nm/(N+m)) (F_{m,N}(x) - F(x)) / s`
//! * [`ci_theta`]: `√(Nm/(N+m(1-θ)²)) ((F_{m,N}(x) - θF_N(x)) - (1-θ)F(x)) / s`
//! * [`classical_ci`]: `√N (F_N(x) - F(x)) / s`
//!
//! with `s² = p(1-p)` plugged in from `F_N(x)`, `F_{m,N}(x)`, or (for
//! simulation diagnostics only) the true `F(x)`.

use serde::{Deserialize, Serialize};

use crate::edf::{Edf, StepCdf, WeightedEdf};
use crate::error::{domain, Result};
use crate::limitdist::{normal_quantile, CdfModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiTarget {
    SampleEdfAtX,
    PopulationCdfAtX,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceKind {
    TruthF,
    SampleEdf,
    WeightedEdf,
}

/// Where the Bernoulli variance `p(1-p)` at `x` comes from.
#[derive(Debug, Clone, Copy)]
pub enum VarianceSource<'a> {
    /// The true `F(x)`; only meaningful in simulations where `F` is known.
    Truth(&'a CdfModel),
    /// `F_N(x)`, needs the sample EDF.
    SampleEdf,
    /// `F_{m,N}(x)`.
    WeightedEdf,
}

impl VarianceSource<'_> {
    pub fn kind(&self) -> VarianceKind {
        match self {
            VarianceSource::Truth(_) => VarianceKind::TruthF,
            VarianceSource::SampleEdf => VarianceKind::SampleEdf,
            VarianceSource::WeightedEdf => VarianceKind::WeightedEdf,
        }
    }

    fn variance(&self, g: &WeightedEdf, h: Option<&Edf>, x: f64) -> Result<f64> {
        let p = match self {
            VarianceSource::Truth(f) => f.cdf(x),
            VarianceSource::SampleEdf => h
                .ok_or_else(|| domain("variance from F_N needs the sample EDF"))?
                .eval(x),
            VarianceSource::WeightedEdf => g.eval(x),
        };
        Ok(bernoulli_variance(p))
    }
}

fn bernoulli_variance(p: f64) -> f64 {
    p * (1.0 - p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceEstimates {
    /// `F_N(x)(1 - F_N(x))`
    pub s2_n: f64,
    /// `F_{m,N}(x)(1 - F_{m,N}(x))`
    pub s2_mn: f64,
}

pub fn variance_estimates(g: &WeightedEdf, h: &Edf, x: f64) -> VarianceEstimates {
    VarianceEstimates {
        s2_n: bernoulli_variance(h.eval(x)),
        s2_mn: bernoulli_variance(g.eval(x)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseCI {
    pub x: f64,
    pub center: f64,
    pub lower: f64,
    pub upper: f64,
    /// Half-width before clipping.
    pub half_width: f64,
    pub target: CiTarget,
    pub alpha: f64,
    pub variance_source: VarianceKind,
    pub theta: f64,
    pub m: Option<u64>,
    pub n: u64,
    /// The plug-in variance is 0; the interval collapses to its centre.
    pub degenerate: bool,
}

fn two_sided_z(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!("alpha = {alpha} outside (0, 1)")));
    }
    normal_quantile(1.0 - alpha / 2.0)
}

struct Interval {
    center: f64,
    half_width: f64,
    degenerate: bool,
}

impl Interval {
    fn new(center: f64, variance: f64, z: f64, scale: f64) -> Self {
        let degenerate = variance == 0.0;
        let half_width = if degenerate {
            0.0
        } else {
            z * variance.sqrt() * scale
        };
        Self {
            center,
            half_width,
            degenerate,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        self,
        x: f64,
        target: CiTarget,
        alpha: f64,
        variance_source: VarianceKind,
        theta: f64,
        m: Option<u64>,
        n: u64,
    ) -> PointwiseCI {
        let center = self.center.clamp(0.0, 1.0);
        let (lower, upper) = if self.degenerate {
            (center, center)
        } else {
            (
                (self.center - self.half_width).clamp(0.0, 1.0),
                (self.center + self.half_width).clamp(0.0, 1.0),
            )
        };
        PointwiseCI {
            x,
            center,
            lower,
            upper,
            half_width: self.half_width,
            target,
            alpha,
            variance_source,
            theta,
            m,
            n,
            degenerate: self.degenerate,
        }
    }
}

/// Interval for `F_N(x)`: `F_{m,N}(x) ± z_{1-α/2} s / √m`.
pub fn ci_for_sample_edf(
    g: &WeightedEdf,
    h: Option<&Edf>,
    x: f64,
    alpha: f64,
    source: VarianceSource<'_>,
) -> Result<PointwiseCI> {
    let z = two_sided_z(alpha)?;
    let variance = source.variance(g, h, x)?;
    let scale = 1.0 / (g.m() as f64).sqrt();
    Ok(Interval::new(g.eval(x), variance, z, scale).finish(
        x,
        CiTarget::SampleEdfAtX,
        alpha,
        source.kind(),
        1.0,
        Some(g.m()),
        g.n(),
    ))
}

/// Interval for `F(x)`: `F_{m,N}(x) ± z_{1-α/2} s √((N+m)/(Nm))`.
pub fn ci_for_population_cdf(
    g: &WeightedEdf,
    h: Option<&Edf>,
    x: f64,
    alpha: f64,
    source: VarianceSource<'_>,
) -> Result<PointwiseCI> {
    theta_interval(g, h, x, 0.0, alpha, source)
}

/// Interval for `F(x)` from the θ-indexed statistic:
/// `(F_{m,N}(x) - θF_N(x))/(1-θ) ± z s √((N + m(1-θ)²)/(Nm)) / |1-θ|`.
pub fn ci_theta(
    g: &WeightedEdf,
    h: &Edf,
    x: f64,
    theta: f64,
    alpha: f64,
    source: VarianceSource<'_>,
) -> Result<PointwiseCI> {
    if theta == 1.0 || !theta.is_finite() {
        return Err(domain(format!(
            "theta = {theta}: an interval for F(x) needs theta != 1; use ci_for_sample_edf for F_N(x)"
        )));
    }
    theta_interval(g, Some(h), x, theta, alpha, source)
}

fn theta_interval(
    g: &WeightedEdf,
    h: Option<&Edf>,
    x: f64,
    theta: f64,
    alpha: f64,
    source: VarianceSource<'_>,
) -> Result<PointwiseCI> {
    let z = two_sided_z(alpha)?;
    let variance = source.variance(g, h, x)?;
    let lambda = 1.0 - theta;
    let step = if theta == 0.0 {
        g.eval(x)
    } else {
        let h = h.ok_or_else(|| domain("theta != 0 needs the sample EDF"))?;
        g.eval(x) - theta * h.eval(x)
    };
    let n = h.map_or(g.n(), |h| h.n());
    let (mf, nf) = (g.m() as f64, n as f64);
    let scale = ((nf + mf * lambda * lambda) / (nf * mf)).sqrt() / lambda.abs();
    Ok(Interval::new(step / lambda, variance, z, scale).finish(
        x,
        CiTarget::PopulationCdfAtX,
        alpha,
        source.kind(),
        theta,
        Some(g.m()),
        n,
    ))
}

/// Classical interval from the whole sample: `F_N(x) ± z √(F_N(x)(1-F_N(x))/N)`.
pub fn classical_ci(h: &Edf, x: f64, alpha: f64) -> Result<PointwiseCI> {
    let z = two_sided_z(alpha)?;
    let p = h.eval(x);
    let scale = 1.0 / (h.n() as f64).sqrt();
    Ok(Interval::new(p, bernoulli_variance(p), z, scale).finish(
        x,
        CiTarget::PopulationCdfAtX,
        alpha,
        VarianceKind::SampleEdf,
        0.0,
        None,
        h.n(),
    ))
}

/// `√m (F_{m,N}(x) - F_N(x)) / s`; `None` when the plug-in variance is 0.
pub fn sample_edf_statistic(
    g: &WeightedEdf,
    h: &Edf,
    x: f64,
    source: VarianceSource<'_>,
) -> Result<Option<f64>> {
    let variance = source.variance(g, Some(h), x)?;
    if variance == 0.0 {
        return Ok(None);
    }
    Ok(Some(
        (g.m() as f64).sqrt() * (g.eval(x) - h.eval(x)) / variance.sqrt(),
    ))
}

/// `√(Nm/(N+m(1-θ)²)) ((F_{m,N}(x) - θF_N(x)) - (1-θ)F(x)) / s` for a known
/// truth `F`; `None` when the plug-in variance is 0.
pub fn theta_statistic(
    g: &WeightedEdf,
    h: &Edf,
    truth: &CdfModel,
    x: f64,
    theta: f64,
    source: VarianceSource<'_>,
) -> Result<Option<f64>> {
    let variance = source.variance(g, Some(h), x)?;
    if variance == 0.0 {
        return Ok(None);
    }
    let lambda = 1.0 - theta;
    let (mf, nf) = (g.m() as f64, h.n() as f64);
    let norming = (nf * mf / (nf + mf * lambda * lambda)).sqrt();
    let deviation = (g.eval(x) - theta * h.eval(x)) - lambda * truth.cdf(x);
    Ok(Some(norming * deviation / variance.sqrt()))
}
