//! Limit laws of the Brownian-bridge functionals, the standard normal law, and
//! the continuous reference models (`CdfModel`) used as nulls and truths.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use statrs::function::{beta, erf, gamma};

use crate::error::{construction, domain, Result};

/// Terms of the Kolmogorov series are summed until one falls below this.
pub const KOLMOGOROV_SERIES_THRESHOLD: f64 = 1e-12;
/// Absolute tolerance on the argument for every bisection inverse.
pub const QUANTILE_TOLERANCE: f64 = 1e-10;
/// Below this argument the Kolmogorov law is evaluated through its dual
/// (Jacobi theta) series, where the alternating series only produces
/// cancellation noise.
const KOLMOGOROV_DUAL_SWITCH: f64 = 0.3;
/// Values of the ω² law below this are reported as 0.
const CVM_LEFT_TAIL_FLOOR: f64 = 1e-12;
const CVM_MIN_ARGUMENT: f64 = 0.003;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// `sup_t |B(t)|`
    KolmogorovSup,
    /// `∫ B(t)^2 dt`
    CramerVonMises,
    StdNormal,
}

impl Law {
    pub fn cdf(self, x: f64) -> Result<f64> {
        match self {
            Law::KolmogorovSup => kolmogorov_cdf(x),
            Law::CramerVonMises => cvm_cdf(x),
            Law::StdNormal => Ok(normal_cdf(x)),
        }
    }

    pub fn quantile(self, p: f64) -> Result<f64> {
        match self {
            Law::KolmogorovSup => kolmogorov_quantile(p).map(|c| c.value),
            Law::CramerVonMises => cvm_quantile(p).map(|c| c.value),
            Law::StdNormal => normal_quantile(p),
        }
    }
}

impl FromStr for Law {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ks" => Ok(Law::KolmogorovSup),
            "cvm" => Ok(Law::CramerVonMises),
            "normal" => Ok(Law::StdNormal),
            other => Err(domain(format!("unknown law {other:?}"))),
        }
    }
}

/// Upper `alpha` point of a limit law: `cdf(law, value) = 1 - alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValue {
    pub alpha: f64,
    pub value: f64,
    pub law: Law,
}

impl CriticalValue {
    /// Critical value for a level `alpha ∈ [0, 1]`. The closed endpoints are
    /// accepted: `alpha = 0` gives `+∞` (never reject, full band) and
    /// `alpha = 1` gives the lower end of the support.
    pub fn for_level(law: Law, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(domain(format!("alpha = {alpha} outside [0, 1]")));
        }
        let value = if alpha == 0.0 {
            f64::INFINITY
        } else if alpha == 1.0 {
            match law {
                Law::StdNormal => f64::NEG_INFINITY,
                _ => 0.0,
            }
        } else {
            law.quantile(1.0 - alpha)?
        };
        Ok(Self { alpha, value, law })
    }
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("probability {p} outside (0, 1)")))
    }
}

/// Bisection for an increasing `f` on `[lo, hi]` with `f(lo) <= target <= f(hi)`.
fn bisect(mut lo: f64, mut hi: f64, target: f64, f: impl Fn(f64) -> f64) -> f64 {
    while hi - lo > QUANTILE_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// Kolmogorov law

/// `K(c) = P(sup|B| <= c) = 1 - 2 Σ_{k>=1} (-1)^{k-1} exp(-2 k² c²)`.
pub fn kolmogorov_cdf(c: f64) -> Result<f64> {
    kolmogorov_cdf_with_threshold(c, KOLMOGOROV_SERIES_THRESHOLD)
}

/// [`kolmogorov_cdf`] with an explicit truncation threshold for the series.
pub fn kolmogorov_cdf_with_threshold(c: f64, threshold: f64) -> Result<f64> {
    if c.is_nan() || c < 0.0 {
        return Err(domain(format!("Kolmogorov argument {c} is negative")));
    }
    if c == 0.0 {
        return Ok(0.0);
    }
    if c == f64::INFINITY {
        return Ok(1.0);
    }
    let value = if c < KOLMOGOROV_DUAL_SWITCH {
        kolmogorov_dual_series(c, threshold)
    } else {
        kolmogorov_alternating_series(c, threshold)
    };
    Ok(value.clamp(0.0, 1.0))
}

fn kolmogorov_alternating_series(c: f64, threshold: f64) -> f64 {
    let two_c2 = 2.0 * c * c;
    let mut sum = 0.0;
    let mut sign = 1.0;
    let mut k = 1.0_f64;
    loop {
        let term = (-two_c2 * k * k).exp();
        sum += sign * term;
        if term < threshold {
            break;
        }
        sign = -sign;
        k += 1.0;
    }
    1.0 - 2.0 * sum
}

/// `K(c) = (√(2π) / c) Σ_{k>=1} exp(-(2k-1)² π² / (8 c²))`.
fn kolmogorov_dual_series(c: f64, threshold: f64) -> f64 {
    let scale = (2.0 * PI).sqrt() / c;
    let rate = PI * PI / (8.0 * c * c);
    let mut sum = 0.0;
    let mut k = 1.0_f64;
    loop {
        let odd = 2.0 * k - 1.0;
        let term = scale * (-rate * odd * odd).exp();
        sum += term;
        if term <= threshold * sum {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Bisection inverse of [`kolmogorov_cdf`]; `kolmogorov_quantile(0.95)` is the
/// familiar `c_α = 1.358`.
pub fn kolmogorov_quantile(p: f64) -> Result<CriticalValue> {
    check_probability(p)?;
    let value = bisect(0.0, 10.0, p, |c| {
        kolmogorov_cdf(c).expect("nonnegative argument")
    });
    Ok(CriticalValue {
        alpha: 1.0 - p,
        value,
        law: Law::KolmogorovSup,
    })
}

// ---------------------------------------------------------------------------
// Cramér–von Mises ω² law

/// Gauss–Legendre rule of this order on each inversion interval.
const GL_ORDER: usize = 64;

fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_rule(GL_ORDER))
}

/// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 1..=n {
        let mut x = (PI * (i as f64 - 0.25) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

/// `V(x) = P(ω² <= x)` for `ω² = ∫₀¹ B²(t) dt = Σ_k Z_k² / (kπ)²`.
///
/// Evaluated by Smirnov's real-integral inversion of the characteristic
/// function `Π_k (1 - 2it/(kπ)²)^{-1/2}`:
///
/// `V(x) = 1 - (1/π) Σ_{k>=1} (-1)^{k+1} ∫_{(2k-1)π}^{2kπ} (2/s) √(-s / sin s) e^{-x s²/2} ds`.
///
/// The inverse-square-root endpoint singularities are removed with
/// `s = a + (b - a)(1 - cos φ)/2`, after which each integrand is analytic in
/// `φ ∈ [0, π]` and a fixed Gauss–Legendre rule is used.
pub fn cvm_cdf(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(domain(format!("Cramér–von Mises argument {x} is negative")));
    }
    if x < CVM_MIN_ARGUMENT {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    let rule = gauss_legendre();
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=5000u32 {
        let a = (2 * k - 1) as f64 * PI;
        let b = (2 * k) as f64 * PI;
        let half = 0.5 * (b - a);
        let mut integral = 0.0;
        for &(node, weight) in rule {
            let phi = 0.5 * PI * (node + 1.0);
            let s = a + half * (1.0 - phi.cos());
            let g = (2.0 / s) * (-s / s.sin()).sqrt() * (-0.5 * x * s * s).exp();
            integral += weight * g * half * phi.sin();
        }
        integral *= 0.5 * PI;
        sum += sign * integral;
        if integral.abs() < 1e-17 {
            break;
        }
        sign = -sign;
    }
    let v = 1.0 - sum / PI;
    if v < CVM_LEFT_TAIL_FLOOR {
        return Ok(0.0);
    }
    Ok(v.min(1.0))
}

/// Bisection inverse of [`cvm_cdf`]: `ν` with `P(ω² <= ν) = p`.
pub fn cvm_quantile(p: f64) -> Result<CriticalValue> {
    check_probability(p)?;
    let value = bisect(0.0, 20.0, p, |x| cvm_cdf(x).expect("nonnegative argument"));
    Ok(CriticalValue {
        alpha: 1.0 - p,
        value,
        law: Law::CramerVonMises,
    })
}

// ---------------------------------------------------------------------------
// Standard normal

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erf::erfc(-z / SQRT_2)
}

pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// `Φ⁻¹(p)`: erfc-inverse starting point, refined by Newton steps on `Φ`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    check_probability(p)?;
    let mut z = -SQRT_2 * erf::erfc_inv(2.0 * p);
    for _ in 0..8 {
        let step = (normal_cdf(z) - p) / normal_pdf(z);
        z -= step;
        if step.abs() < QUANTILE_TOLERANCE * 1e-2 {
            break;
        }
    }
    Ok(z)
}

// ---------------------------------------------------------------------------
// Continuous reference models

/// A fully specified continuous distribution function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CdfModel {
    Uniform01,
    Normal {
        mean: f64,
        sd: f64,
    },
    ChiSquare {
        df: u32,
    },
    StudentT {
        df: u32,
    },
    /// Piecewise-linear CDF through `(x, p)` knots, strictly increasing in both
    /// coordinates, starting at `p = 0` and ending at `p = 1`.
    EmpiricalTable {
        points: Vec<(f64, f64)>,
    },
}

impl CdfModel {
    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        let model = CdfModel::Normal { mean, sd };
        model.validate()?;
        Ok(model)
    }

    pub fn chi_square(df: u32) -> Result<Self> {
        let model = CdfModel::ChiSquare { df };
        model.validate()?;
        Ok(model)
    }

    pub fn student_t(df: u32) -> Result<Self> {
        let model = CdfModel::StudentT { df };
        model.validate()?;
        Ok(model)
    }

    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        let model = CdfModel::EmpiricalTable { points };
        model.validate()?;
        Ok(model)
    }

    /// Parses a table file: one `x,p` (or whitespace separated) pair per line,
    /// `#` comments allowed.
    pub fn table_from_text(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty());
            let mut next = || -> Result<f64> {
                let f = fields.next().ok_or_else(|| {
                    construction(format!("table line {}: expected x,p", lineno + 1))
                })?;
                f.parse().map_err(|_| {
                    construction(format!("table line {}: bad number {f:?}", lineno + 1))
                })
            };
            let x = next()?;
            let p = next()?;
            points.push((x, p));
        }
        Self::table(points)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CdfModel::Uniform01 => Ok(()),
            CdfModel::Normal { mean, sd } => {
                if !mean.is_finite() || !sd.is_finite() || *sd <= 0.0 {
                    Err(construction(format!(
                        "normal({mean}, {sd}) needs finite mean and sd > 0"
                    )))
                } else {
                    Ok(())
                }
            }
            CdfModel::ChiSquare { df } | CdfModel::StudentT { df } => {
                if *df == 0 {
                    Err(construction("degrees of freedom must be positive"))
                } else {
                    Ok(())
                }
            }
            CdfModel::EmpiricalTable { points } => {
                if points.len() < 2 {
                    return Err(construction("table needs at least two knots"));
                }
                if points.iter().any(|(x, p)| !x.is_finite() || !p.is_finite()) {
                    return Err(construction("table knots must be finite"));
                }
                if points
                    .windows(2)
                    .any(|w| !(w[1].0 > w[0].0 && w[1].1 > w[0].1))
                {
                    return Err(construction("table must be strictly increasing in x and p"));
                }
                let first = points[0].1;
                let last = points[points.len() - 1].1;
                if first != 0.0 || last != 1.0 {
                    return Err(construction("table must start at p = 0 and end at p = 1"));
                }
                Ok(())
            }
        }
    }

    /// `F(x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            CdfModel::Uniform01 => x.clamp(0.0, 1.0),
            CdfModel::Normal { mean, sd } => normal_cdf((x - mean) / sd),
            CdfModel::ChiSquare { df } => {
                if x <= 0.0 {
                    0.0
                } else if x == f64::INFINITY {
                    1.0
                } else {
                    gamma::gamma_lr(*df as f64 / 2.0, x / 2.0)
                }
            }
            CdfModel::StudentT { df } => {
                if x == 0.0 {
                    return 0.5;
                }
                if x.is_infinite() {
                    return if x > 0.0 { 1.0 } else { 0.0 };
                }
                let nu = *df as f64;
                let tail = 0.5 * beta::beta_reg(nu / 2.0, 0.5, nu / (nu + x * x));
                if x > 0.0 {
                    1.0 - tail
                } else {
                    tail
                }
            }
            CdfModel::EmpiricalTable { points } => {
                let i = points.partition_point(|&(px, _)| px <= x);
                if i == 0 {
                    0.0
                } else if i == points.len() {
                    1.0
                } else {
                    let (x0, p0) = points[i - 1];
                    let (x1, p1) = points[i];
                    p0 + (p1 - p0) * (x - x0) / (x1 - x0)
                }
            }
        }
    }

    /// Smallest `x` (to the bisection tolerance) with `F(x) >= p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        match self {
            CdfModel::Uniform01 => Ok(p),
            CdfModel::Normal { mean, sd } => Ok(mean + sd * normal_quantile(p)?),
            _ => {
                let (mut lo, mut hi) = (-1.0, 1.0);
                while self.cdf(lo) > p {
                    lo *= 2.0;
                }
                while self.cdf(hi) < p {
                    hi *= 2.0;
                }
                Ok(bisect(lo, hi, p, |x| self.cdf(x)))
            }
        }
    }
}

/// `F(x)` for a model; see [`CdfModel::cdf`].
pub fn model_cdf(model: &CdfModel, x: f64) -> f64 {
    model.cdf(x)
}

impl fmt::Display for CdfModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdfModel::Uniform01 => write!(f, "uniform"),
            CdfModel::Normal { mean, sd } => write!(f, "normal:{mean},{sd}"),
            CdfModel::ChiSquare { df } => write!(f, "chisq:{df}"),
            CdfModel::StudentT { df } => write!(f, "t:{df}"),
            CdfModel::EmpiricalTable { points } => write!(f, "table[{} knots]", points.len()),
        }
    }
}

/// Parses `uniform`, `normal:MU,SIGMA`, `chisq:DF` and `t:DF`. Tables are
/// file based and go through [`CdfModel::table_from_text`].
impl FromStr for CdfModel {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let parse_df = |arg: Option<&str>| -> Result<u32> {
            arg.and_then(|a| a.parse().ok())
                .ok_or_else(|| construction(format!("{s:?}: expected a positive integer df")))
        };
        match name {
            "uniform" if arg.is_none() => Ok(CdfModel::Uniform01),
            "normal" => {
                let (mu, sigma) = arg
                    .and_then(|a| a.split_once(','))
                    .ok_or_else(|| construction(format!("{s:?}: expected normal:MU,SIGMA")))?;
                let mu = mu
                    .trim()
                    .parse()
                    .map_err(|_| construction(format!("bad mean in {s:?}")))?;
                let sigma = sigma
                    .trim()
                    .parse()
                    .map_err(|_| construction(format!("bad sd in {s:?}")))?;
                CdfModel::normal(mu, sigma)
            }
            "chisq" => CdfModel::chi_square(parse_df(arg)?),
            "t" => CdfModel::student_t(parse_df(arg)?),
            _ => Err(construction(format!("unknown model {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_cdf_examples() {
        assert_eq!(kolmogorov_cdf(0.0).unwrap(), 0.0);
        assert!((kolmogorov_cdf(1.358).unwrap() - 0.95).abs() < 1e-3);
        assert!((kolmogorov_cdf(0.8276).unwrap() - 0.5).abs() < 1e-3);
        assert!(kolmogorov_cdf(-0.1).is_err());
    }

    #[test]
    fn kolmogorov_quantile_examples() {
        assert!((kolmogorov_quantile(0.95).unwrap().value - 1.358).abs() < 5e-4);
        assert!((kolmogorov_quantile(0.99).unwrap().value - 1.628).abs() < 5e-4);
        let p = kolmogorov_cdf(1.0).unwrap();
        assert!((kolmogorov_quantile(p).unwrap().value - 1.0).abs() < 1e-9);
        assert!(kolmogorov_quantile(0.0).is_err());
        assert!(kolmogorov_quantile(1.0).is_err());
    }

    #[test]
    fn kolmogorov_branches_agree_at_switch() {
        let c = KOLMOGOROV_DUAL_SWITCH;
        let a = kolmogorov_alternating_series(c, 1e-16);
        let b = kolmogorov_dual_series(c, 1e-16);
        assert!((a - b).abs() < 1e-14, "{a} vs {b}");
    }

    #[test]
    fn kolmogorov_threshold_self_consistency() {
        for i in 1..=300 {
            let c = i as f64 * 0.01;
            let a = kolmogorov_cdf_with_threshold(c, 1e-10).unwrap();
            let b = kolmogorov_cdf_with_threshold(c, 1e-14).unwrap();
            assert!((a - b).abs() < 1e-9, "c = {c}");
        }
    }

    #[test]
    fn cvm_published_quantiles() {
        // Upper points of the asymptotic ω² law as tabulated by Anderson and Darling.
        for (p, nu) in [
            (0.90, 0.34730),
            (0.95, 0.46136),
            (0.975, 0.58061),
            (0.99, 0.74346),
        ] {
            let q = cvm_quantile(p).unwrap().value;
            assert!((q - nu).abs() < 2e-3, "p = {p}: {q}");
            assert!((q - nu).abs() < 1e-4, "p = {p}: {q}");
        }
        assert_eq!(cvm_cdf(0.0).unwrap(), 0.0);
        assert!(cvm_quantile(1.2).is_err());
    }

    #[test]
    fn cvm_mean_is_one_sixth() {
        // E ω² = ∫ (1 - V(x)) dx, integrated on a fine grid.
        let h = 1e-4;
        let mut mean = 0.0;
        let mut x = 0.5 * h;
        while x < 6.0 {
            mean += (1.0 - cvm_cdf(x).unwrap()) * h;
            x += h;
        }
        assert!((mean - 1.0 / 6.0).abs() < 1e-6, "{mean}");
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre_rule(16);
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
        let x6: f64 = rule.iter().map(|(x, w)| w * x.powi(6)).sum();
        assert!((x6 - 2.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn normal_examples() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_quantile(0.975).unwrap() - 1.959_963_984_540_054).abs() < 1e-10);
        for z in [0.5, 1.0, 2.0] {
            assert!((normal_cdf(z) + normal_cdf(-z) - 1.0).abs() < 1e-15);
        }
        assert!(normal_quantile(1.0).is_err());
    }

    #[test]
    fn model_examples() {
        let chi2 = CdfModel::chi_square(2).unwrap();
        assert!((chi2.cdf(2.0 * 2f64.ln()) - 0.5).abs() < 1e-12);
        let t15 = CdfModel::student_t(15).unwrap();
        assert_eq!(t15.cdf(0.0), 0.5);
        let chi6 = CdfModel::chi_square(6).unwrap();
        assert!((chi6.cdf(5.348) - 0.5).abs() < 1e-3);
        assert!(CdfModel::chi_square(0).is_err());
        assert!(CdfModel::student_t(0).is_err());
    }

    #[test]
    fn closed_forms_of_special_models() {
        // χ²₂ is exponential with mean 2; t₁ is Cauchy; t₂ has an algebraic CDF.
        let chi2 = CdfModel::chi_square(2).unwrap();
        let t1 = CdfModel::student_t(1).unwrap();
        let t2 = CdfModel::student_t(2).unwrap();
        for &x in &[-3.0, -0.7, 0.2, 1.5, 4.0, 11.0] {
            if x > 0.0 {
                assert!((chi2.cdf(x) - (1.0 - (-x / 2.0).exp())).abs() < 1e-10);
            }
            assert!((t1.cdf(x) - (0.5 + x.atan() / PI)).abs() < 1e-10);
            assert!((t2.cdf(x) - (0.5 + x / (2.0 * (2.0 + x * x).sqrt()))).abs() < 1e-10);
        }
    }

    #[test]
    fn table_model_interpolates() {
        let m = CdfModel::table(vec![(0.0, 0.0), (1.0, 0.25), (3.0, 1.0)]).unwrap();
        assert_eq!(m.cdf(-1.0), 0.0);
        assert_eq!(m.cdf(0.5), 0.125);
        assert_eq!(m.cdf(2.0), 0.625);
        assert_eq!(m.cdf(3.0), 1.0);
        assert!(CdfModel::table(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(CdfModel::table(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
        let parsed = CdfModel::table_from_text("# x p\n0 0\n1,0.25\n3 1\n").unwrap();
        assert_eq!(parsed, m);
    }

    #[test]
    fn model_parsing() {
        assert_eq!("uniform".parse::<CdfModel>().unwrap(), CdfModel::Uniform01);
        assert_eq!(
            "normal:1.5,2".parse::<CdfModel>().unwrap(),
            CdfModel::Normal { mean: 1.5, sd: 2.0 }
        );
        assert_eq!(
            "chisq:6".parse::<CdfModel>().unwrap(),
            CdfModel::ChiSquare { df: 6 }
        );
        assert_eq!(
            "t:15".parse::<CdfModel>().unwrap(),
            CdfModel::StudentT { df: 15 }
        );
        assert!("t:0".parse::<CdfModel>().is_err());
        assert!("normal:0,-1".parse::<CdfModel>().is_err());
        assert!("gumbel".parse::<CdfModel>().is_err());
    }

    #[test]
    fn critical_value_edges() {
        let full = CriticalValue::for_level(Law::KolmogorovSup, 0.0).unwrap();
        assert_eq!(full.value, f64::INFINITY);
        let none = CriticalValue::for_level(Law::CramerVonMises, 1.0).unwrap();
        assert_eq!(none.value, 0.0);
        assert!(CriticalValue::for_level(Law::StdNormal, 1.5).is_err());
    }
}
