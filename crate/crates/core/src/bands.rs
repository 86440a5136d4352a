//! Kolmogorov-type confidence bands built from the weighted subsample EDF, the
//! sample EDF, or both.
//!
//! Every band is `center(x) ± half_width` with a constant half-width, clipped
//! into `[0, 1]`, and stored as plateau arrays so it serializes as is. For a
//! band with jump points `x_0 < … < x_{K-1}`, index 0 of each plateau array is
//! the value left of `x_0` and index `k + 1` the value on `[x_k, x_{k+1})`.

use serde::{Deserialize, Serialize};

use crate::edf::{Edf, StepCdf, StepCombination, WeightedEdf};
use crate::error::{domain, Result};
use crate::limitdist::{CdfModel, CriticalValue, Law};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandTarget {
    /// The sample EDF `F_N`.
    SampleEdf,
    /// The population distribution function `F`.
    PopulationCdf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// `F_{m,N} ± c_α/√m`, a band for `F_N`.
    SubsampleForSampleEdf,
    /// `F_{m,N} ± c_α √(1/m + 1/N)`, a band for `F`.
    SubsampleForPopulation,
    /// `F_N ± c_α/√N`.
    Classical,
    /// `(F_{m,N} - θF_N)/(1-θ) ± c_α √(1/((1-θ)² m) + 1/N)`, `θ ∉ {0, 1}`.
    Theta { theta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub jump_points: Vec<f64>,
    pub center: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Half-width before clipping.
    pub half_width: f64,
    pub critical_value: CriticalValue,
    pub target: BandTarget,
    pub construction: Construction,
    /// Subsample size, absent for the classical band.
    pub m: Option<u64>,
    pub n: u64,
}

/// What a band is checked against.
#[derive(Debug, Clone, Copy)]
pub enum Truth<'a> {
    Cdf(&'a CdfModel),
    Edf(&'a Edf),
}

impl Band {
    fn from_center(
        center: StepCombination,
        half_width: f64,
        critical_value: CriticalValue,
        target: BandTarget,
        construction: Construction,
        m: Option<u64>,
        n: u64,
    ) -> Self {
        let lower = center
            .values
            .iter()
            .map(|c| (c - half_width).clamp(0.0, 1.0))
            .collect();
        let upper = center
            .values
            .iter()
            .map(|c| (c + half_width).clamp(0.0, 1.0))
            .collect();
        Band {
            jump_points: center.points,
            center: center.values,
            lower,
            upper,
            half_width,
            critical_value,
            target,
            construction,
            m,
            n,
        }
    }

    fn plateau_index(&self, x: f64) -> usize {
        self.jump_points.partition_point(|&p| p <= x)
    }

    pub fn lower_at(&self, x: f64) -> f64 {
        self.lower[self.plateau_index(x)]
    }

    pub fn upper_at(&self, x: f64) -> f64 {
        self.upper[self.plateau_index(x)]
    }

    pub fn center_at(&self, x: f64) -> f64 {
        self.center[self.plateau_index(x)]
    }

    /// The band with its plateaus clipped into `[0, 1]` again.
    pub fn clipped(&self) -> Band {
        let mut band = self.clone();
        band.lower.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        band.upper.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
        band
    }

    /// `(x, lower, upper, center)` at every jump point (right-continuous
    /// values), for plotting.
    pub fn plot_rows(&self) -> Vec<[f64; 4]> {
        self.jump_points
            .iter()
            .enumerate()
            .map(|(k, &x)| [x, self.lower[k + 1], self.upper[k + 1], self.center[k + 1]])
            .collect()
    }
}

fn kolmogorov_level(alpha: f64) -> Result<CriticalValue> {
    CriticalValue::for_level(Law::KolmogorovSup, alpha)
}

/// `c √(1/(λ² m) + 1/n)`.
fn two_sample_half_width(c: f64, m: u64, n: u64, lambda: f64) -> f64 {
    c * (1.0 / (lambda * lambda * m as f64) + 1.0 / n as f64).sqrt()
}

/// Band for `F_N`: `F_{m,N} ± c_α/√m`.
pub fn band_for_sample_edf(g: &WeightedEdf, alpha: f64) -> Result<Band> {
    let cv = kolmogorov_level(alpha)?;
    let half_width = cv.value / (g.m() as f64).sqrt();
    Ok(Band::from_center(
        StepCombination::of(g),
        half_width,
        cv,
        BandTarget::SampleEdf,
        Construction::SubsampleForSampleEdf,
        Some(g.m()),
        g.n(),
    ))
}

/// Band for `F`: `F_{m,N} ± c_α √(1/m + 1/n)`.
pub fn band_for_population_cdf(g: &WeightedEdf, n: u64, alpha: f64) -> Result<Band> {
    if n == 0 {
        return Err(domain("population size must be positive"));
    }
    let cv = kolmogorov_level(alpha)?;
    let center = StepCombination::of(g);
    let half_width = two_sample_half_width(cv.value, g.m(), n, 1.0);
    Ok(Band::from_center(
        center,
        half_width,
        cv,
        BandTarget::PopulationCdf,
        Construction::SubsampleForPopulation,
        Some(g.m()),
        n,
    ))
}

/// Classical band for `F` from the whole sample: `F_N ± c_α/√N`.
pub fn classical_band(h: &Edf, alpha: f64) -> Result<Band> {
    let cv = kolmogorov_level(alpha)?;
    let half_width = cv.value / (h.n() as f64).sqrt();
    Ok(Band::from_center(
        StepCombination::of(h),
        half_width,
        cv,
        BandTarget::PopulationCdf,
        Construction::Classical,
        None,
        h.n(),
    ))
}

/// θ-indexed band for `F`: `(F_{m,N} - θF_N)/(1-θ) ± c_α √(1/((1-θ)² m) + 1/N)`.
///
/// The two sign cases `θ < 1` and `θ > 1` give the same interval once the
/// centre is divided by `1 - θ`. At `θ = 0` this is exactly
/// [`band_for_population_cdf`] and is reported as that construction.
pub fn theta_band(g: &WeightedEdf, h: &Edf, theta: f64, alpha: f64) -> Result<Band> {
    if theta == 1.0 || !theta.is_finite() {
        return Err(domain(format!(
            "theta band needs a finite theta != 1 (got {theta})"
        )));
    }
    let cv = kolmogorov_level(alpha)?;
    let lambda = 1.0 - theta;
    let mut center = StepCombination::new(&[(g, 1.0), (h, -theta)]);
    center.values.iter_mut().for_each(|v| *v /= lambda);
    let half_width = two_sample_half_width(cv.value, g.m(), h.n(), lambda);
    let construction = if theta == 0.0 {
        Construction::SubsampleForPopulation
    } else {
        Construction::Theta { theta }
    };
    Ok(Band::from_center(
        center,
        half_width,
        cv,
        BandTarget::PopulationCdf,
        construction,
        Some(g.m()),
        h.n(),
    ))
}

/// Whether `lower(x) <= truth(x) <= upper(x)` for every real `x`.
///
/// For a continuous truth the band is constant between its jumps while the
/// truth is monotone, so it suffices to check the truth at each jump against
/// the plateaus on both sides, plus the limits 0 and 1 in the tails. For an
/// EDF truth both functions are steps and the union of jump sets is checked.
///
/// A continuous model cannot stand in for the sample EDF, so a band whose
/// target is `F_N` only accepts an EDF truth.
pub fn band_covers(band: &Band, truth: Truth<'_>) -> Result<bool> {
    match truth {
        Truth::Cdf(model) => {
            if band.target == BandTarget::SampleEdf {
                return Err(domain(
                    "a band for the sample EDF must be checked against an EDF",
                ));
            }
            Ok(covers_continuous(band, model))
        }
        Truth::Edf(h) => Ok(covers_step(band, h)),
    }
}

fn covers_continuous(band: &Band, model: &CdfModel) -> bool {
    let last = band.lower.len() - 1;
    if band.lower[0] > 0.0 || band.upper[last] < 1.0 {
        return false;
    }
    band.jump_points.iter().enumerate().all(|(k, &x)| {
        let f = model.cdf(x);
        let left_ok = band.lower[k] <= f && f <= band.upper[k];
        let right_ok = band.lower[k + 1] <= f && f <= band.upper[k + 1];
        left_ok && right_ok
    })
}

fn covers_step(band: &Band, h: &Edf) -> bool {
    let inside = |k: usize, v: f64| band.lower[k] <= v && v <= band.upper[k];
    if !inside(0, 0.0) {
        return false;
    }
    let hp = h.points();
    let bp = &band.jump_points;
    let (mut i, mut j) = (0usize, 0usize);
    while i < hp.len() || j < bp.len() {
        let x = match (hp.get(i), bp.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        if hp.get(i) == Some(&x) {
            i += 1;
        }
        if bp.get(j) == Some(&x) {
            j += 1;
        }
        let hv = if i == 0 { 0.0 } else { h.plateau(i - 1) };
        if !inside(j, hv) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edf::{build_edf, build_weighted_edf};

    const C95: f64 = 1.358;

    fn g_with_m(m: u64, n: u64) -> WeightedEdf {
        build_weighted_edf(&[(0.2, m / 2), (0.7, m - m / 2)], m, n).unwrap()
    }

    #[test]
    fn sample_edf_band_half_widths() {
        let band = band_for_sample_edf(&g_with_m(100, 1000), 0.05).unwrap();
        assert!((band.half_width - C95 / 10.0).abs() < 5e-5);
        assert_eq!(band.lower[0], 0.0);
        assert_eq!(band.lower_at(-5.0), 0.0);
        let band = band_for_sample_edf(&g_with_m(6000, 36_000), 0.05).unwrap();
        assert!((band.half_width - 0.017_533).abs() < 1e-5);
        assert_eq!(band.target, BandTarget::SampleEdf);
    }

    #[test]
    fn population_band_half_widths() {
        let band = band_for_population_cdf(&g_with_m(6000, 36_000), 36_000, 0.05).unwrap();
        assert!((band.half_width - 0.018_936).abs() < 1e-5);
        let g = g_with_m(400, 400);
        let wide = band_for_population_cdf(&g, 400, 0.05).unwrap().half_width;
        let h = build_edf(&(0..400).map(|i| i as f64).collect::<Vec<_>>()).unwrap();
        let classical = classical_band(&h, 0.05).unwrap().half_width;
        assert!((wide / classical - 2f64.sqrt()).abs() < 1e-12);
        let far = band_for_population_cdf(&g, u64::MAX / 2, 0.05)
            .unwrap()
            .half_width;
        let narrow = band_for_sample_edf(&g, 0.05).unwrap().half_width;
        assert!((far - narrow).abs() < 1e-12);
    }

    #[test]
    fn classical_half_widths_and_alpha_monotonicity() {
        let h100 = build_edf(&(0..100).map(|i| i as f64).collect::<Vec<_>>()).unwrap();
        assert!((classical_band(&h100, 0.05).unwrap().half_width - 0.1358).abs() < 5e-5);
        let h1e4 = build_edf(&(0..10_000).map(|i| i as f64).collect::<Vec<_>>()).unwrap();
        assert!((classical_band(&h1e4, 0.05).unwrap().half_width - 0.01358).abs() < 5e-6);
        let mut last = f64::INFINITY;
        for i in 1..=20 {
            let alpha = i as f64 * 0.049;
            let hw = classical_band(&h100, alpha).unwrap().half_width;
            assert!(hw < last);
            last = hw;
        }
        assert_eq!(classical_band(&h100, 1.0).unwrap().half_width, 0.0);
    }

    #[test]
    fn theta_band_special_cases() {
        let g = build_weighted_edf(&[(0.1, 3), (0.5, 2), (0.8, 5)], 10, 4).unwrap();
        let h = build_edf(&[0.1, 0.3, 0.5, 0.9]).unwrap();
        let b0 = theta_band(&g, &h, 0.0, 0.05).unwrap();
        assert_eq!(b0, band_for_population_cdf(&g, 4, 0.05).unwrap());

        let c = kolmogorov_level(0.05).unwrap().value;
        let bm1 = theta_band(&g, &h, -1.0, 0.05).unwrap();
        assert!((bm1.half_width - c * (1.0 / 40.0 + 0.25_f64).sqrt()).abs() < 1e-12);
        let b2 = theta_band(&g, &h, 2.0, 0.05).unwrap();
        assert!((b2.half_width - c * (0.1 + 0.25_f64).sqrt()).abs() < 1e-12);
        for x in [0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 0.8, 0.9, 1.0] {
            let mean = 0.5 * (g.eval(x) + h.eval(x));
            assert!((bm1.center_at(x) - mean).abs() < 1e-15);
            assert!((b2.center_at(x) - (2.0 * h.eval(x) - g.eval(x))).abs() < 1e-15);
        }
        assert!(theta_band(&g, &h, 1.0, 0.05).is_err());
    }

    #[test]
    fn width_governed_by_one_minus_theta_squared() {
        let g = g_with_m(200, 500);
        let h = build_edf(&[0.1, 0.6, 0.9]).unwrap();
        let hw = |t: f64| theta_band(&g, &h, t, 0.05).unwrap().half_width;
        assert!(hw(0.5) > hw(0.0));
        assert!(hw(1.5) > hw(2.0));
        assert!(hw(-1.0) < hw(0.0));
        assert!(hw(3.0) < hw(2.0));
        assert_eq!(hw(0.0), hw(2.0));
    }

    #[test]
    fn band_plateaus_clipped_and_ordered() {
        let g = build_weighted_edf(&[(0.1, 9), (0.5, 1)], 10, 4).unwrap();
        let h = build_edf(&[0.4, 0.5, 0.6, 0.7]).unwrap();
        for theta in [-3.0, 0.0, 0.5, 2.0, 5.0] {
            let band = theta_band(&g, &h, theta, 0.2).unwrap();
            for (l, u) in band.lower.iter().zip(&band.upper) {
                assert!((0.0..=1.0).contains(l) && (0.0..=1.0).contains(u) && l <= u);
            }
            assert_eq!(band.clipped(), band);
        }
    }

    #[test]
    fn covers_trivial_cases() {
        let g = g_with_m(10, 100);
        let full = band_for_population_cdf(&g, 100, 0.0).unwrap();
        assert!(full.lower.iter().all(|&v| v == 0.0) && full.upper.iter().all(|&v| v == 1.0));
        assert!(band_covers(&full, Truth::Cdf(&CdfModel::Uniform01)).unwrap());
        let h = build_edf(&[0.3, 0.31, 0.9]).unwrap();
        assert!(band_covers(&full, Truth::Edf(&h)).unwrap());

        let around_h = classical_band(&h, 0.5).unwrap();
        assert!(band_covers(&around_h, Truth::Edf(&h)).unwrap());

        let for_fn = band_for_sample_edf(&g, 0.05).unwrap();
        assert!(band_covers(&for_fn, Truth::Cdf(&CdfModel::Uniform01)).is_err());
    }

    #[test]
    fn covers_detects_violation_left_of_jump() {
        // Uniform truth climbs to 0.9 just left of the single jump at 0.9
        // while the band's upper edge there is 0.3.
        let g = build_weighted_edf(&[(0.9, 4)], 4, 1000).unwrap();
        let mut band = band_for_population_cdf(&g, 1000, 0.05).unwrap();
        band.upper[0] = 0.3;
        assert!(!band_covers(&band, Truth::Cdf(&CdfModel::Uniform01)).unwrap());
    }
}
