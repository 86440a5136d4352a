//! Dense-grid and brute-force oracles for the step-function functionals and
//! band coverage, shared by the oracle tests and the acceptance report.
//!
//! Sample values sit on the lattice k/256 so that every jump is also a grid
//! point and left limits are read off the neighbouring grid point. Each
//! `check_*` runs [`INSTANCES`] random instances and returns the first
//! disagreement.

#![allow(dead_code)]

use rand::Rng;
use vresample::bands::{
    band_covers, band_for_population_cdf, band_for_sample_edf, classical_band, theta_band, Band,
    Truth,
};
use vresample::edf::{
    cvm_integral, cvm_integral_theta, sup_dist_step_cont, sup_dist_step_step, sup_dist_theta, Edf,
    StepCdf, WeightedEdf,
};
use vresample::limitdist::CdfModel;
use vresample::seed::rng_from_seed;

pub const INSTANCES: usize = 200;
const LATTICE: f64 = 256.0;

pub type Check = Result<(), String>;

pub struct Instance {
    pub h: Edf,
    pub g: WeightedEdf,
}

pub fn random_instance(rng: &mut impl Rng, scale: f64) -> Instance {
    let n = rng.random_range(1..=25usize);
    let values: Vec<f64> = (0..n)
        .map(|_| scale * rng.random_range(0..256u32) as f64 / LATTICE)
        .collect();
    let mut pairs = Vec::new();
    for &v in &values {
        if rng.random_bool(0.6) {
            pairs.push((v, rng.random_range(1..=5u64)));
        }
    }
    if pairs.is_empty() {
        pairs.push((values[0], 1));
    }
    let m = pairs.iter().map(|p| p.1).sum();
    Instance {
        h: Edf::from_values(&values).unwrap(),
        g: WeightedEdf::from_pairs(&pairs, m, n as u64).unwrap(),
    }
}

pub fn random_theta(rng: &mut impl Rng) -> f64 {
    loop {
        let t = (rng.random_range(-24..=24i32) as f64) / 8.0;
        if t != 1.0 {
            return t;
        }
    }
}

/// `sup |g(x) - θ h(x) - (1-θ) f(x)|` over the grid `lo + j·step`, plus the
/// limit at +∞.
pub fn grid_sup(
    g: &dyn StepCdf,
    h: Option<&dyn StepCdf>,
    theta: f64,
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    step: f64,
) -> f64 {
    let lambda = 1.0 - theta;
    let s = |x: f64| g.eval(x) - h.map_or(0.0, |h| theta * h.eval(x));
    let tail = (s(f64::INFINITY) - lambda).abs();
    let cells = ((hi - lo) / step).round() as usize;
    (0..=cells)
        .map(|j| {
            let x = lo + j as f64 * step;
            (s(x) - lambda * f(x)).abs()
        })
        .fold(tail, f64::max)
}

/// Midpoint rule with 2^20 cells for `∫₀¹ (g - θh - (1-θ)u)² du` under the
/// uniform model. Jumps fall on cell edges, so the integrand is a quadratic
/// on every cell.
pub fn riemann_cvm(g: &dyn StepCdf, h: Option<&dyn StepCdf>, theta: f64) -> f64 {
    let cells = 1usize << 20;
    let width = 1.0 / cells as f64;
    let lambda = 1.0 - theta;
    (0..cells)
        .map(|j| {
            let x = (j as f64 + 0.5) * width;
            let d = g.eval(x) - h.map_or(0.0, |h| theta * h.eval(x)) - lambda * x;
            d * d
        })
        .sum::<f64>()
        * width
}

pub fn grid_covers(band: &Band, truth: &dyn Fn(f64) -> f64) -> bool {
    let step = 2f64.powi(-18);
    let cells = (1.5 / step) as usize;
    let inside = |x: f64| {
        let v = truth(x);
        band.lower_at(x) <= v && v <= band.upper_at(x)
    };
    (0..=cells).all(|j| inside(-0.25 + j as f64 * step))
        && inside(f64::NEG_INFINITY)
        && band.lower_at(f64::INFINITY) <= 1.0
        && band.upper_at(f64::INFINITY) >= 1.0
}

fn uniform(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Exact sup against `U(0,1)` is at least the grid value and exceeds it by
/// less than one grid step.
pub fn check_sup_step_cont(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let step = 2f64.powi(-18);
    for i in 0..INSTANCES {
        let inst = random_instance(&mut rng, 1.0);
        for g in [&inst.g as &dyn StepCdf, &inst.h] {
            let exact = sup_dist_step_cont(g, &CdfModel::Uniform01);
            let grid = grid_sup(g, None, 0.0, &uniform, -0.25, 1.25, step);
            if exact < grid - 1e-12 || exact - grid >= step + 1e-12 {
                return Err(format!("instance {i}: exact {exact} vs grid {grid}"));
            }
        }
    }
    Ok(())
}

/// Same against χ²₂, whose density is bounded by 1/2.
pub fn check_sup_step_cont_chi_square(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let model = CdfModel::chi_square(2).unwrap();
    let step = 2f64.powi(-14);
    for i in 0..INSTANCES {
        let inst = random_instance(&mut rng, 8.0);
        let exact = sup_dist_step_cont(&inst.g, &model);
        let grid = grid_sup(&inst.g, None, 0.0, &|x| model.cdf(x), -1.0, 24.0, step);
        if exact < grid - 1e-12 || exact - grid >= 0.5 * step + 1e-12 {
            return Err(format!("instance {i}: exact {exact} vs grid {grid}"));
        }
    }
    Ok(())
}

/// Both steps are constant between lattice points, so a lattice scan is exact.
pub fn check_sup_step_step(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    for i in 0..INSTANCES {
        let inst = random_instance(&mut rng, 1.0);
        let exact = sup_dist_step_step(&inst.g, &inst.h);
        let brute = (0..256)
            .map(|k| k as f64 / LATTICE)
            .map(|x| (inst.g.eval(x) - inst.h.eval(x)).abs())
            .fold(0.0, f64::max);
        if (exact - brute).abs() >= 1e-12 {
            return Err(format!("instance {i}: exact {exact} vs brute {brute}"));
        }
    }
    Ok(())
}

pub fn check_sup_theta(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let step = 2f64.powi(-18);
    for i in 0..INSTANCES {
        let inst = random_instance(&mut rng, 1.0);
        let theta = random_theta(&mut rng);
        let exact = sup_dist_theta(&inst.g, &inst.h, theta, &CdfModel::Uniform01);
        let grid = grid_sup(&inst.g, Some(&inst.h), theta, &uniform, -0.25, 1.25, step);
        let bound = (1.0 - theta).abs() * step;
        if exact < grid - 1e-12 || exact - grid >= bound + 1e-12 {
            return Err(format!(
                "instance {i}, theta {theta}: exact {exact} vs grid {grid}"
            ));
        }
    }
    Ok(())
}

pub fn check_cvm_integral(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    for i in 0..INSTANCES {
        let inst = random_instance(&mut rng, 1.0);
        let exact = cvm_integral(&inst.g, &CdfModel::Uniform01);
        let brute = riemann_cvm(&inst.g, None, 0.0);
        if (exact - brute).abs() >= 1e-6 {
            return Err(format!("instance {i}: exact {exact} vs brute {brute}"));
        }
    }
    Ok(())
}

pub fn check_cvm_integral_theta(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    for i in 0..INSTANCES {
        let inst = random_instance(&mut rng, 1.0);
        let theta = random_theta(&mut rng);
        let exact = cvm_integral_theta(&inst.g, &inst.h, theta, &CdfModel::Uniform01);
        let brute = riemann_cvm(&inst.g, Some(&inst.h), theta);
        if (exact - brute).abs() >= 1e-6 {
            return Err(format!(
                "instance {i}, theta {theta}: exact {exact} vs brute {brute}"
            ));
        }
    }
    Ok(())
}

/// Exact agreement with the grid check, for continuous and EDF truths, with
/// both verdicts occurring often.
pub fn check_band_covers(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let model = CdfModel::Uniform01;
    let (mut covered, mut missed) = (0, 0);
    let mut tally = |v: bool| if v { covered += 1 } else { missed += 1 };
    for i in 0..INSTANCES {
        let inst = random_instance(&mut rng, 1.0);
        let alpha = rng.random_range(0.05..0.999);
        let band = match i % 4 {
            0 => band_for_population_cdf(&inst.g, inst.h.n(), alpha).unwrap(),
            1 => classical_band(&inst.h, alpha).unwrap(),
            2 => theta_band(&inst.g, &inst.h, random_theta(&mut rng), alpha).unwrap(),
            _ => band_for_sample_edf(&inst.g, alpha).unwrap(),
        };
        if i % 4 != 3 {
            let exact = band_covers(&band, Truth::Cdf(&model)).unwrap();
            if exact != grid_covers(&band, &uniform) {
                return Err(format!("instance {i}: cdf truth, exact says {exact}"));
            }
            tally(exact);
        }
        let exact = band_covers(&band, Truth::Edf(&inst.h)).unwrap();
        if exact != grid_covers(&band, &|x| inst.h.eval(x)) {
            return Err(format!("instance {i}: edf truth, exact says {exact}"));
        }
        tally(exact);
    }
    if covered > 20 && missed > 20 {
        Ok(())
    } else {
        Err(format!(
            "uninformative instances: covered {covered}, missed {missed}"
        ))
    }
}
