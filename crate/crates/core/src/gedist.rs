//! The generalized exponential distribution GE(λ, ν) with CDF (1 − e^{−λx})^ν.

use crate::error::{domain, GeError, Result};
use crate::sample::Sample;
use crate::specfun::{digamma, tetragamma, trigamma};
use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Rate `lambda` (inverse data units) and shape `nu`, both positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct GeParams {
    lambda: f64,
    nu: f64,
}

#[derive(Deserialize)]
struct RawParams {
    lambda: f64,
    nu: f64,
}

impl TryFrom<RawParams> for GeParams {
    type Error = GeError;
    fn try_from(raw: RawParams) -> Result<Self> {
        GeParams::new(raw.lambda, raw.nu)
    }
}

/// ln(1 − e^{−y}) for y > 0, accurate at both ends.
#[inline]
pub(crate) fn log1mexp(y: f64) -> f64 {
    if y > std::f64::consts::LN_2 {
        (-(-y).exp()).ln_1p()
    } else {
        (-(-y).exp_m1()).ln()
    }
}

impl GeParams {
    pub fn new(lambda: f64, nu: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0 && nu.is_finite() && nu > 0.0) {
            return Err(domain(
                "GeParams",
                format!("lambda = {lambda} and nu = {nu} must be positive and finite"),
            ));
        }
        Ok(GeParams { lambda, nu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Same shape, rate multiplied by `c`.
    pub fn with_rate_scaled(&self, c: f64) -> Result<Self> {
        GeParams::new(self.lambda * c, self.nu)
    }

    pub fn log_density(&self, x: f64) -> f64 {
        let lx = self.lambda * x;
        self.lambda.ln() + self.nu.ln() - lx + (self.nu - 1.0) * log1mexp(lx)
    }

    /// Density at `x > 0`; zero once λx exceeds 700.
    pub fn density(&self, x: f64) -> f64 {
        if self.lambda * x > 700.0 {
            return 0.0;
        }
        self.log_density(x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        (self.nu * log1mexp(self.lambda * x)).exp()
    }

    /// Inverse CDF −λ⁻¹ log(1 − p^{1/ν}).
    pub fn quantile(&self, p: f64) -> f64 {
        -(-(p.ln() / self.nu).exp_m1()).ln() / self.lambda
    }

    /// Mode log(ν)/λ for ν > 1, the origin otherwise.
    pub fn mode(&self) -> f64 {
        if self.nu > 1.0 {
            self.nu.ln() / self.lambda
        } else {
            0.0
        }
    }

    pub fn moments(&self) -> MomentSummary {
        let v1 = self.nu + 1.0;
        let spread = trigamma(1.0) - trigamma(v1);
        MomentSummary {
            mean: (digamma(v1) - digamma(1.0)) / self.lambda,
            variance: spread / (self.lambda * self.lambda),
            skewness: (tetragamma(v1) - tetragamma(1.0)) / spread.powf(1.5),
        }
    }

    /// Draws `n` values by inversion using the supplied generator.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                self.quantile(u)
            })
            .collect()
    }
}

/// Mean, variance and skewness of a GE law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
}

fn require_positive(what: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(domain(what, format!("x = {x} must be positive and finite")))
    }
}

pub fn ge_pdf(x: f64, params: &GeParams) -> Result<f64> {
    require_positive("ge_pdf", x)?;
    Ok(params.density(x))
}

pub fn ge_cdf(x: f64, params: &GeParams) -> Result<f64> {
    require_positive("ge_cdf", x)?;
    Ok(params.cdf(x))
}

pub fn ge_quantile(p: f64, params: &GeParams) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("ge_quantile", format!("p = {p} must lie in (0, 1)")));
    }
    Ok(params.quantile(p))
}

pub fn ge_moments(params: &GeParams) -> MomentSummary {
    params.moments()
}

/// `n` independent draws, reproducible from `seed`.
pub fn ge_sample(n: usize, params: &GeParams, seed: u64) -> Result<Sample> {
    if n == 0 {
        return Err(domain("ge_sample", "n must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Sample::new(params.draw(&mut rng, n))
}
