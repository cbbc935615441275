//! Minimum density power divergence estimation.
//!
//! For `α > 0` the empirical objective is
//! `H(θ) = ∫ f_θ^(1+α) − (1 + 1/α) n⁻¹ Σ f_θ(Xᵢ)^α`, and at `α = 0` it is the
//! negative mean log-likelihood. Its gradient is `−(1+α) U_n(θ)` where
//! `U_n = n⁻¹ Σ u_θ(Xᵢ) f_θ(Xᵢ)^α − ξ_α(θ)`.

use crate::asymptotics::{integral_f_pow, xi_vector};
use crate::error::{GeError, Result};
use crate::estimators::{fit_ml, start_point, FitResult, Method};
use crate::gedist::{log1mexp, GeParams};
use crate::optimize::{minimize_2d, DEFAULT_TOL_2D};
use crate::sample::Sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(crate::error::domain(
            "alpha",
            format!("tuning parameter {alpha} must be finite and nonnegative"),
        ))
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(crate::error::domain(
            "x",
            format!("observation {x} must be positive and finite"),
        ))
    }
}

/// Per-observation contribution `V_α(θ; x)`.
///
/// Returns `+∞` for `α > 0` when `ν ≤ α/(1+α)`, where `∫ f^(1+α)` diverges.
pub fn v_alpha(x: f64, params: &GeParams, alpha: f64) -> Result<f64> {
    check_x(x)?;
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(-params.log_density(x));
    }
    let fa = (alpha * params.log_density(x)).exp();
    Ok(integral_f_pow(params, alpha) - (1.0 + 1.0 / alpha) * fa)
}

/// Empirical objective `H_{α,n}(θ)`, the mean of [`v_alpha`] over the sample.
pub fn h_objective(sample: &Sample, params: &GeParams, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(h_unchecked(sample.values(), params, alpha))
}

fn h_unchecked(values: &[f64], params: &GeParams, alpha: f64) -> f64 {
    let n = values.len() as f64;
    if alpha == 0.0 {
        return -values.iter().map(|&x| params.log_density(x)).sum::<f64>() / n;
    }
    let integral = integral_f_pow(params, alpha);
    if integral.is_infinite() {
        return f64::INFINITY;
    }
    let mean_fa = values
        .iter()
        .map(|&x| (alpha * params.log_density(x)).exp())
        .sum::<f64>()
        / n;
    integral - (1.0 + 1.0 / alpha) * mean_fa
}

/// Score `∂ log f / ∂(λ, ν)` at `x`.
pub fn score_vector(x: f64, params: &GeParams) -> Result<[f64; 2]> {
    check_x(x)?;
    let (l, n) = (params.lambda(), params.nu());
    let lx = l * x;
    let tail = if lx > 700.0 { 0.0 } else { x / lx.exp_m1() };
    Ok([1.0 / l - x + (n - 1.0) * tail, 1.0 / n + log1mexp(lx)])
}

/// Weighted score equations `U_n(θ)`.
pub fn estimating_equations(sample: &Sample, params: &GeParams, alpha: f64) -> Result<[f64; 2]> {
    check_alpha(alpha)?;
    let xi = xi_vector(params, alpha)?;
    let n = sample.len() as f64;
    let mut acc = [0.0; 2];
    for &x in sample.values() {
        let u = score_vector(x, params)?;
        let w = if alpha == 0.0 {
            1.0
        } else {
            (alpha * params.log_density(x)).exp()
        };
        acc[0] += u[0] * w;
        acc[1] += u[1] * w;
    }
    Ok([acc[0] / n - xi[0], acc[1] / n - xi[1]])
}

/// Gradient of [`h_objective`] in `(λ, ν)`.
pub fn h_gradient(sample: &Sample, params: &GeParams, alpha: f64) -> Result<[f64; 2]> {
    let u = estimating_equations(sample, params, alpha)?;
    Ok([-(1.0 + alpha) * u[0], -(1.0 + alpha) * u[1]])
}

/// MDPDE with the default tolerance, started from the ML estimate.
pub fn fit_mdpde(sample: &Sample, alpha: f64) -> Result<FitResult> {
    fit_mdpde_from(sample, alpha, None, DEFAULT_TOL_2D)
}

/// MDPDE from an explicit starting point (or the ML estimate when `None`).
pub fn fit_mdpde_from(
    sample: &Sample,
    alpha: f64,
    start: Option<[f64; 2]>,
    tol: f64,
) -> Result<FitResult> {
    check_alpha(alpha)?;
    sample.require_fit_size("MDPDE")?;
    let start = match start {
        Some(s) => s,
        None => match fit_ml(sample) {
            Ok(f) => [f.params.lambda(), f.params.nu()],
            Err(_) => start_point(sample),
        },
    };
    let values = sample.values();
    let optim = minimize_2d(
        |t| match GeParams::new(t[0], t[1]) {
            Ok(g) => h_unchecked(values, &g, alpha),
            Err(_) => f64::INFINITY,
        },
        start,
        tol,
    )
    .map_err(|e| GeError::FitFailure {
        method: "MDPDE".into(),
        detail: e.to_string(),
    })?;
    if !optim.converged {
        log::warn!("MDPDE(alpha={alpha}) stopped after {} iterations", optim.iterations);
    }
    let params = GeParams::new(optim.argmin[0], optim.argmin[1]).map_err(|e| {
        GeError::FitFailure {
            method: "MDPDE".into(),
            detail: e.to_string(),
        }
    })?;
    Ok(FitResult {
        method: Method::Mdpde,
        params,
        alpha: Some(alpha),
        objective_value: optim.objective_value,
        optim,
    })
}

/// Tuning grid `{0, 0.02, …, 1}`.
pub fn default_grid() -> Vec<f64> {
    (0..=50).map(|i| i as f64 / 50.0).collect()
}

/// Settings for fitting and tuning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpdConfig {
    pub alpha: f64,
    pub grid: Vec<f64>,
    pub tolerance: f64,
}

impl Default for DpdConfig {
    fn default() -> Self {
        DpdConfig {
            alpha: 0.5,
            grid: default_grid(),
            tolerance: DEFAULT_TOL_2D,
        }
    }
}

impl DpdConfig {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        check_grid(&self.grid)?;
        if !(self.tolerance > 0.0) {
            return Err(crate::error::domain("tolerance", "must be positive"));
        }
        Ok(())
    }

    pub fn fit(&self, sample: &Sample) -> Result<FitResult> {
        self.validate()?;
        fit_mdpde_from(sample, self.alpha, None, self.tolerance)
    }

    pub fn tune(&self, sample: &Sample) -> Result<CvmCurve> {
        self.validate()?;
        cvm_curve(sample, &self.grid, self.tolerance)
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(crate::error::domain("grid", "tuning grid is empty"));
    }
    for &a in grid {
        check_alpha(a)?;
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(crate::error::domain("grid", "tuning grid must be strictly increasing"));
    }
    Ok(())
}

/// Leave-one-out Cramér–von Mises distance over a tuning grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvmCurve {
    pub alphas: Vec<f64>,
    /// `None` where a fit failed for that tuning parameter.
    pub distances: Vec<Option<f64>>,
    pub optimal_alpha: f64,
}

impl CvmCurve {
    pub fn optimal_index(&self) -> usize {
        self.alphas
            .iter()
            .position(|&a| a == self.optimal_alpha)
            .expect("optimal alpha is on the grid")
    }
}

/// Chooses α by minimizing the leave-one-out Cramér–von Mises distance.
///
/// Ties go to the smallest α.
pub fn select_alpha_cvm(sample: &Sample, grid: &[f64]) -> Result<CvmCurve> {
    cvm_curve(sample, grid, DEFAULT_TOL_2D)
}

fn cvm_curve(sample: &Sample, grid: &[f64], tol: f64) -> Result<CvmCurve> {
    check_grid(grid)?;
    if sample.len() < 5 {
        return Err(GeError::InvalidSample(format!(
            "tuning needs at least 5 observations, got {}",
            sample.len()
        )));
    }
    // order statistics with their positions in the original sample
    let mut order: Vec<usize> = (0..sample.len()).collect();
    order.sort_by(|&a, &b| sample.values()[a].total_cmp(&sample.values()[b]));
    let n = sample.len();
    let denom = (n + 1) as f64;

    let full: Vec<Option<[f64; 2]>> = grid
        .par_iter()
        .map(|&a| {
            fit_mdpde_from(sample, a, None, tol)
                .ok()
                .map(|f| [f.params.lambda(), f.params.nu()])
        })
        .collect();

    let tasks: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|g| (0..n).map(move |i| (g, i)))
        .collect();
    let terms: Vec<Option<f64>> = tasks
        .par_iter()
        .map(|&(g, i)| {
            let start = full[g]?;
            let idx = order[i];
            let x = sample.values()[idx];
            let rest = sample.without(idx).ok()?;
            let f = fit_mdpde_from(&rest, grid[g], Some(start), tol).ok()?;
            let d = (i + 1) as f64 / denom - f.params.cdf(x);
            Some(d * d)
        })
        .collect();

    let distances: Vec<Option<f64>> = terms
        .chunks(n)
        .map(|chunk| {
            chunk
                .iter()
                .try_fold(0.0, |acc, t| t.map(|v| acc + v))
                .map(|s| s / n as f64)
        })
        .collect();
    let mut best: Option<(usize, f64)> = None;
    for (k, d) in distances.iter().enumerate() {
        if let Some(d) = *d {
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((k, d));
            }
        } else {
            log::warn!("alpha {} excluded: a leave-one-out fit failed", grid[k]);
        }
    }
    let (k, _) = best.ok_or_else(|| GeError::FitFailure {
        method: "MDPDE".into(),
        detail: "every tuning parameter had a failed leave-one-out fit".into(),
    })?;
    Ok(CvmCurve {
        alphas: grid.to_vec(),
        distances,
        optimal_alpha: grid[k],
    })
}
