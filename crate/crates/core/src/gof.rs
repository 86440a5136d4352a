//! Goodness-of-fit tests of a fully specified continuous null `F0` from the
//! weighted subsample EDF, with asymptotic critical values and p-values.

use serde::{Deserialize, Serialize};

use crate::edf::{
    cvm_integral, cvm_integral_theta, sup_dist_step_cont, sup_dist_theta, Edf, WeightedEdf,
};
use crate::error::{domain, Result};
use crate::limitdist::{CdfModel, CriticalValue, Law};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFamily {
    /// Kolmogorov–Smirnov type (sup norm).
    Ks,
    /// Cramér–von Mises type (integrated square).
    Cvm,
}

impl TestFamily {
    pub fn law(self) -> Law {
        match self {
            TestFamily::Ks => Law::KolmogorovSup,
            TestFamily::Cvm => Law::CramerVonMises,
        }
    }
}

impl std::str::FromStr for TestFamily {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ks" => Ok(TestFamily::Ks),
            "cvm" => Ok(TestFamily::Cvm),
            other => Err(domain(format!("unknown test family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub critical_value: CriticalValue,
    pub p_value: f64,
    pub reject: bool,
    pub family: TestFamily,
    pub theta: f64,
    pub m: u64,
    pub n: u64,
    pub alpha: f64,
}

impl TestResult {
    fn new(
        family: TestFamily,
        statistic: f64,
        theta: f64,
        m: u64,
        n: u64,
        alpha: f64,
    ) -> Result<Self> {
        let critical_value = CriticalValue::for_level(family.law(), alpha)?;
        let p_value = 1.0 - family.law().cdf(statistic)?;
        Ok(Self {
            statistic,
            critical_value,
            p_value,
            reject: statistic >= critical_value.value,
            family,
            theta,
            m,
            n,
            alpha,
        })
    }
}

/// `N m / (N + m (1-θ)²)`.
fn theta_norming(m: u64, n: u64, theta: f64) -> f64 {
    let (m, n) = (m as f64, n as f64);
    let lambda = 1.0 - theta;
    n * m / (n + m * lambda * lambda)
}

fn check_theta(theta: f64) -> Result<()> {
    if theta == 1.0 || !theta.is_finite() {
        Err(domain(format!(
            "theta-indexed tests need a finite theta != 1 (got {theta})"
        )))
    } else {
        Ok(())
    }
}

/// Rejects `H0: F = F0` when `√(Nm/(N+m)) sup|F_{m,N} - F0| >= c_α`.
pub fn ks_test(g: &WeightedEdf, f0: &CdfModel, alpha: f64) -> Result<TestResult> {
    let statistic = theta_norming(g.m(), g.n(), 0.0).sqrt() * sup_dist_step_cont(g, f0);
    TestResult::new(TestFamily::Ks, statistic, 0.0, g.m(), g.n(), alpha)
}

/// Rejects when `(Nm/(N+m)) ∫ (F_{m,N} - F0)² dF0 >= ν_α`.
pub fn cvm_test(g: &WeightedEdf, f0: &CdfModel, alpha: f64) -> Result<TestResult> {
    let statistic = theta_norming(g.m(), g.n(), 0.0) * cvm_integral(g, f0);
    TestResult::new(TestFamily::Cvm, statistic, 0.0, g.m(), g.n(), alpha)
}

/// θ-indexed Kolmogorov-type test with statistic
/// `√(Nm/(N + m(1-θ)²)) sup|(F_{m,N} - θF_N) - (1-θ)F0|`.
pub fn theta_ks_test(
    g: &WeightedEdf,
    h: &Edf,
    theta: f64,
    f0: &CdfModel,
    alpha: f64,
) -> Result<TestResult> {
    check_theta(theta)?;
    let statistic = theta_norming(g.m(), h.n(), theta).sqrt() * sup_dist_theta(g, h, theta, f0);
    TestResult::new(TestFamily::Ks, statistic, theta, g.m(), h.n(), alpha)
}

/// θ-indexed Cramér–von Mises-type test with statistic
/// `(Nm/(N + m(1-θ)²)) ∫ (F_{m,N} - θF_N - (1-θ)F0)² dF0`.
pub fn theta_cvm_test(
    g: &WeightedEdf,
    h: &Edf,
    theta: f64,
    f0: &CdfModel,
    alpha: f64,
) -> Result<TestResult> {
    check_theta(theta)?;
    let statistic = theta_norming(g.m(), h.n(), theta) * cvm_integral_theta(g, h, theta, f0);
    TestResult::new(TestFamily::Cvm, statistic, theta, g.m(), h.n(), alpha)
}

/// Dispatches on family and θ; `θ = 0` needs no sample EDF.
pub fn run_test(
    family: TestFamily,
    g: &WeightedEdf,
    h: Option<&Edf>,
    theta: f64,
    f0: &CdfModel,
    alpha: f64,
) -> Result<TestResult> {
    match (family, h) {
        (TestFamily::Ks, _) if theta == 0.0 => ks_test(g, f0, alpha),
        (TestFamily::Cvm, _) if theta == 0.0 => cvm_test(g, f0, alpha),
        (TestFamily::Ks, Some(h)) => theta_ks_test(g, h, theta, f0, alpha),
        (TestFamily::Cvm, Some(h)) => theta_cvm_test(g, h, theta, f0, alpha),
        (_, None) => Err(domain("theta != 0 needs the full sample EDF")),
    }
}
