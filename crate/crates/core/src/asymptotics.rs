//! Asymptotic covariance, relative efficiency and influence function of the
//! minimum density power divergence estimator.
//!
//! All integrals have the form `∫ g(x) f(x)^(1+α) dx`. Under the substitution
//! `t = 1 − exp(−λx)` they become beta-type integrals, which yields the closed
//! forms used here. Where a closed form is not usable the same integral is
//! evaluated numerically in `w = t^a`, which removes the `t^(a−1)` endpoint
//! behaviour.

use crate::error::{GeError, Result};
use crate::gedist::GeParams;
use crate::mdpde::score_vector;
use crate::quadrature::integrate;
use crate::specfun::{digamma, ln_beta, trigamma};
use serde::{Deserialize, Serialize};

pub type Mat2 = [[f64; 2]; 2];

/// Largest condition number accepted when inverting J.
pub const MAX_CONDITION: f64 = 1e12;

/// Half-width of the band around `ν = (2+α)/(1+α)` handled by quadrature.
const SINGULAR_BAND: f64 = 1e-4;

/// Closed forms involving `ψ((1+α)(ν−1))` are used only above this shape.
const NU_CLOSED_MIN: f64 = 1.0 + 1e-3;

/// Building blocks of the sandwich covariance of `√n(θ̂_α − θ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsympCov {
    pub alpha: f64,
    pub j: Mat2,
    pub k: Mat2,
    pub xi: [f64; 2],
    pub sigma: Mat2,
}

/// Influence function evaluated on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceCurve {
    pub alpha: f64,
    pub xs: Vec<f64>,
    pub if_lambda: Vec<f64>,
    pub if_nu: Vec<f64>,
}

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

/// `a = (1+α)(ν−1) + 1`, the first beta argument.
fn beta_a(nu: f64, alpha: f64) -> f64 {
    (1.0 + alpha) * (nu - 1.0) + 1.0
}

/// Errors unless `∫ f^(1+α)` converges, i.e. `ν > α/(1+α)`.
pub(crate) fn require_convergent(params: &GeParams, alpha: f64) -> Result<()> {
    if beta_a(params.nu(), alpha) > 0.0 {
        Ok(())
    } else {
        Err(GeError::Divergent(format!(
            "integral of f^(1+{alpha}) diverges at nu = {} (needs nu > {})",
            params.nu(),
            alpha / (1.0 + alpha)
        )))
    }
}

/// `∫ f^(1+α) dx = λ^α ν^(1+α) B(1+α, a)`; infinite when the integral diverges.
pub fn integral_f_pow(params: &GeParams, alpha: f64) -> f64 {
    let (l, n) = (params.lambda(), params.nu());
    let a = beta_a(n, alpha);
    if a <= 0.0 {
        return f64::INFINITY;
    }
    (alpha * l.ln() + (1.0 + alpha) * n.ln() + ln_beta(1.0 + alpha, a)).exp()
}

/// `ξ_α = ∫ u_θ f^(1+α) dx`.
pub fn xi_vector(params: &GeParams, alpha: f64) -> Result<[f64; 2]> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok([0.0, 0.0]);
    }
    require_convergent(params, alpha)?;
    let (l, n) = (params.lambda(), params.nu());
    let a = beta_a(n, alpha);
    let s = a + 1.0 + alpha;
    let pre = ((alpha - 1.0) * l.ln() + alpha * n.ln() + ln_beta(1.0 + alpha, a)).exp();
    Ok([
        pre * n * alpha / (1.0 + alpha),
        pre * l * (1.0 + n * (digamma(a) - digamma(s))),
    ])
}

/// Numerical `∫ g(x, t) f^(1+α) dx`, with `t = 1 − e^(−λx)`.
pub fn weighted_integral<G>(params: &GeParams, alpha: f64, mut g: G) -> Result<f64>
where
    G: FnMut(f64, f64) -> f64,
{
    require_convergent(params, alpha)?;
    let (l, n) = (params.lambda(), params.nu());
    let a = beta_a(n, alpha);
    let pre = (alpha * l.ln() + (1.0 + alpha) * n.ln() - a.ln()).exp();
    let r = integrate(
        |w: f64| {
            let ln_t = w.ln() / a;
            let one_minus_t = -ln_t.exp_m1();
            if one_minus_t <= 0.0 {
                return 0.0;
            }
            let x = -one_minus_t.ln() / l;
            let v = g(x, ln_t.exp()) * one_minus_t.powf(alpha);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        0.0,
        1e-13,
    )?;
    Ok(pre * r.value)
}

/// Score vector in terms of `(x, t)`, staying finite as `t → 0`.
fn score_xt(params: &GeParams, x: f64, t: f64) -> [f64; 2] {
    let (l, n) = (params.lambda(), params.nu());
    let ratio = if t > 0.0 { x * (1.0 - t) / t } else { 1.0 / l };
    let ln_t = if t > 0.0 { t.ln() } else { f64::NEG_INFINITY };
    [1.0 / l - x + (n - 1.0) * ratio, 1.0 / n + ln_t]
}

/// `ξ_α` by quadrature.
pub fn xi_vector_quadrature(params: &GeParams, alpha: f64) -> Result<[f64; 2]> {
    check_alpha(alpha)?;
    let x0 = weighted_integral(params, alpha, |x, t| score_xt(params, x, t)[0])?;
    let x1 = weighted_integral(params, alpha, |x, t| score_xt(params, x, t)[1])?;
    Ok([x0, x1])
}

/// `J_α = ∫ u u' f^(1+α) dx` by quadrature.
pub fn j_matrix_quadrature(params: &GeParams, alpha: f64) -> Result<Mat2> {
    check_alpha(alpha)?;
    let entry = |i: usize, j: usize| {
        weighted_integral(params, alpha, |x, t| {
            let u = score_xt(params, x, t);
            u[i] * u[j]
        })
    };
    let j11 = entry(0, 0)?;
    let j12 = entry(0, 1)?;
    let j22 = entry(1, 1)?;
    Ok([[j11, j12], [j12, j22]])
}

/// Closed-form `J_α`, or `None` where it is not usable: at or below `ν = 1`
/// and near the removable singularity `ν = (2+α)/(1+α)`.
pub fn j_matrix_closed_form(params: &GeParams, alpha: f64) -> Option<Mat2> {
    let (l, n) = (params.lambda(), params.nu());
    let denom = (n - 1.0) * (1.0 + alpha) - 1.0;
    if !(alpha >= 0.0) || n <= NU_CLOSED_MIN || denom.abs() < SINGULAR_BAND {
        return None;
    }
    let a = beta_a(n, alpha);
    let s = a + 1.0 + alpha;
    let lb = ln_beta(1.0 + alpha, a);
    let (ps, ts) = (digamma(s), trigamma(s));
    let d1 = digamma(1.0 + alpha) - ps;
    let d2 = digamma(2.0 + alpha) - ps;
    let d3 = digamma(3.0 + alpha) - ps;
    let da = digamma(a) - ps;
    let dam1 = digamma(a - 1.0) - ps;

    let j11 = (trigamma(1.0 + alpha) - ts + (1.0 + d1).powi(2)
        - 2.0 * (trigamma(2.0 + alpha) - ts + d2 + d2 * d2)
        + (n - 1.0) * (alpha + 2.0) / denom * (trigamma(3.0 + alpha) - ts + d3 * d3))
        * ((alpha - 2.0) * l.ln() + (alpha + 1.0) * n.ln() + lb).exp();
    let j22 = (n * n * (trigamma(a) - ts) + (1.0 + n * da).powi(2))
        * (alpha * l.ln() + (alpha - 1.0) * n.ln() + lb).exp();
    let j12 = (1.0 + digamma(alpha + 1.0) - digamma(alpha + 2.0)
        + n * (da * (1.0 + d1) - d2 * dam1))
        * ((alpha - 1.0) * l.ln() + alpha * n.ln() + lb).exp();
    Some([[j11, j12], [j12, j22]])
}

/// `J_α`, from the closed form where usable and by quadrature elsewhere.
pub fn j_matrix(params: &GeParams, alpha: f64) -> Result<Mat2> {
    check_alpha(alpha)?;
    require_convergent(params, alpha)?;
    match j_matrix_closed_form(params, alpha) {
        Some(j) => Ok(j),
        None => {
            log::debug!(
                "J by quadrature at ({}, {}), alpha {alpha}",
                params.lambda(),
                params.nu()
            );
            j_matrix_quadrature(params, alpha)
        }
    }
}

/// `K_α = J_2α − ξ_α ξ_α'`.
pub fn k_matrix(params: &GeParams, alpha: f64) -> Result<Mat2> {
    let j2 = j_matrix(params, 2.0 * alpha)?;
    let xi = xi_vector(params, alpha)?;
    let k12 = j2[0][1] - xi[0] * xi[1];
    Ok([
        [j2[0][0] - xi[0] * xi[0], k12],
        [k12, j2[1][1] - xi[1] * xi[1]],
    ])
}

/// Inverse of a symmetric positive definite 2×2 matrix.
///
/// The condition number is measured after rescaling the λ row and column by λ,
/// which makes it independent of the units of the data.
pub fn invert_spd(m: &Mat2, lambda: f64) -> Result<Mat2> {
    let (a, b, d) = (m[0][0] * lambda * lambda, m[0][1] * lambda, m[1][1]);
    let half_tr = 0.5 * (a + d);
    let disc = (0.25 * (a - d).powi(2) + b * b).sqrt();
    let (big, small) = (half_tr + disc, half_tr - disc);
    let condition = if small > 0.0 { big / small } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) || !condition.is_finite() {
        return Err(GeError::IllConditioned {
            condition,
            detail: format!("matrix {m:?} is singular or not positive definite"),
        });
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[0][1];
    let off = -m[0][1] / det;
    Ok([[m[1][1] / det, off], [off, m[0][0] / det]])
}

fn sandwich(jinv: &Mat2, k: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in i..2 {
            let mut s = 0.0;
            for p in 0..2 {
                for q in 0..2 {
                    s += jinv[i][p] * k[p][q] * jinv[q][j];
                }
            }
            out[i][j] = s;
            out[j][i] = s;
        }
    }
    out
}

/// `Σ = J⁻¹ K J⁻¹` with its building blocks.
pub fn sandwich_sigma(params: &GeParams, alpha: f64) -> Result<AsympCov> {
    let j = j_matrix(params, alpha)?;
    let k = k_matrix(params, alpha)?;
    let xi = xi_vector(params, alpha)?;
    let jinv = invert_spd(&j, params.lambda())?;
    Ok(AsympCov {
        alpha,
        j,
        k,
        xi,
        sigma: sandwich(&jinv, &k),
    })
}

/// Asymptotic efficiency of `(λ̂_α, ν̂_α)` relative to maximum likelihood.
pub fn are(params: &GeParams, alpha: f64) -> Result<[f64; 2]> {
    let s0 = sandwich_sigma(params, 0.0)?.sigma;
    let sa = sandwich_sigma(params, alpha)?.sigma;
    Ok([s0[0][0] / sa[0][0], s0[1][1] / sa[1][1]])
}

/// Influence function `J⁻¹ (u(x) f(x)^α − ξ)`.
pub fn influence_function(x: f64, params: &GeParams, alpha: f64) -> Result<[f64; 2]> {
    let curve = influence_curve(params, alpha, &[x])?;
    Ok([curve.if_lambda[0], curve.if_nu[0]])
}

/// Influence function on a grid, sharing one J and ξ.
pub fn influence_curve(params: &GeParams, alpha: f64, xs: &[f64]) -> Result<InfluenceCurve> {
    let j = j_matrix(params, alpha)?;
    let jinv = invert_spd(&j, params.lambda())?;
    let xi = xi_vector(params, alpha)?;
    let mut if_lambda = Vec::with_capacity(xs.len());
    let mut if_nu = Vec::with_capacity(xs.len());
    for &x in xs {
        let u = score_vector(x, params)?;
        let w = if alpha == 0.0 {
            1.0
        } else {
            (alpha * params.log_density(x)).exp()
        };
        let c = [u[0] * w - xi[0], u[1] * w - xi[1]];
        if_lambda.push(jinv[0][0] * c[0] + jinv[0][1] * c[1]);
        if_nu.push(jinv[1][0] * c[0] + jinv[1][1] * c[1]);
    }
    Ok(InfluenceCurve {
        alpha,
        xs: xs.to_vec(),
        if_lambda,
        if_nu,
    })
}
