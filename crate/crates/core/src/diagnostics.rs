//! Exploratory and goodness-of-fit checks: linear trend test, ACF/PACF,
//! adjusted-boxplot outlier flagging and a parametric-bootstrap K-S test.

use crate::error::{GeError, Result};
use crate::estimators::Estimator;
use crate::gedist::GeParams;
use crate::sample::Sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Two-sided p-value of the OLS slope of `values` on `times`.
///
/// With zero residual variance the p-value is 1 for an exactly zero slope and
/// 0 otherwise.
pub fn trend_pvalue(sample: &Sample, times: &[f64]) -> Result<f64> {
    let y = sample.values();
    let n = y.len();
    if times.len() != n {
        return Err(crate::error::domain(
            "trend_pvalue",
            format!("{} times for {} values", times.len(), n),
        ));
    }
    if n < 3 {
        return Err(GeError::InvalidSample(format!(
            "trend test needs at least 3 points, got {n}"
        )));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(crate::error::domain(
            "trend_pvalue",
            "times must be strictly increasing",
        ));
    }
    let nf = n as f64;
    let tm = times.iter().sum::<f64>() / nf;
    let ym = y.iter().sum::<f64>() / nf;
    let sxx: f64 = times.iter().map(|t| (t - tm).powi(2)).sum();
    let sxy: f64 = times.iter().zip(y).map(|(t, v)| (t - tm) * (v - ym)).sum();
    let slope = sxy / sxx;
    let sse: f64 = times
        .iter()
        .zip(y)
        .map(|(t, v)| (v - ym - slope * (t - tm)).powi(2))
        .sum();
    let s2 = sse / (nf - 2.0);
    // residual variance at rounding level counts as zero
    let scale = y.iter().map(|v| (v - ym).powi(2)).sum::<f64>();
    if s2 <= 1e-28 * scale.max(f64::MIN_POSITIVE) || s2 == 0.0 {
        return Ok(if slope == 0.0 { 1.0 } else { 0.0 });
    }
    let t = slope / (s2 / sxx).sqrt();
    let dist = StudentsT::new(0.0, 1.0, nf - 2.0).expect("positive degrees of freedom");
    Ok((2.0 * dist.sf(t.abs())).clamp(0.0, 1.0))
}

/// Sample autocorrelations (denominator n) and partial autocorrelations
/// (Durbin–Levinson) at lags `1..=max_lag`.
pub fn acf_pacf(sample: &Sample, max_lag: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let x = sample.values();
    let n = x.len();
    if max_lag == 0 || 2 * max_lag >= n {
        return Err(crate::error::domain(
            "acf_pacf",
            format!("max_lag {max_lag} must be in 1..{}", n.div_ceil(2)),
        ));
    }
    let m = sample.mean();
    let c0: f64 = x.iter().map(|v| (v - m).powi(2)).sum();
    if c0 == 0.0 {
        return Err(GeError::InvalidSample("zero variance".into()));
    }
    let acf: Vec<f64> = (1..=max_lag)
        .map(|k| (0..n - k).map(|i| (x[i] - m) * (x[i + k] - m)).sum::<f64>() / c0)
        .collect();
    let rho = |k: usize| if k == 0 { 1.0 } else { acf[k - 1] };
    let mut pacf = Vec::with_capacity(max_lag);
    let mut phi: Vec<f64> = Vec::new();
    for k in 1..=max_lag {
        let num = rho(k) - (1..k).map(|j| phi[j - 1] * rho(k - j)).sum::<f64>();
        let den = 1.0 - (1..k).map(|j| phi[j - 1] * rho(j)).sum::<f64>();
        let pkk = num / den;
        let next: Vec<f64> = (1..k)
            .map(|j| phi[j - 1] - pkk * phi[k - j - 1])
            .chain(std::iter::once(pkk))
            .collect();
        phi = next;
        pacf.push(pkk);
    }
    Ok((acf, pacf))
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Linear-interpolation quantile of sorted data (Hyndman–Fan type 7).
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Medcouple skewness measure by direct evaluation of all kernel pairs.
pub fn medcouple(values: &[f64]) -> f64 {
    let mut y = values.to_vec();
    y.sort_by(f64::total_cmp);
    let m = median_sorted(&y);
    let lower: Vec<f64> = y.iter().map(|v| v - m).filter(|z| *z <= 0.0).collect();
    let upper: Vec<f64> = y.iter().map(|v| v - m).filter(|z| *z >= 0.0).collect();
    let ties = lower.iter().filter(|z| **z == 0.0).count();
    let mut h = Vec::with_capacity(lower.len() * upper.len());
    for (i, u) in upper.iter().enumerate() {
        for (j, l) in lower.iter().enumerate() {
            if *u == 0.0 && *l == 0.0 {
                // kernel for pairs tied at the median: sign by position
                let r = i;
                let c = j - (lower.len() - ties);
                let flipped = ties - 1 - c;
                h.push(match r.cmp(&flipped) {
                    std::cmp::Ordering::Equal => 0.0,
                    std::cmp::Ordering::Less => -1.0,
                    std::cmp::Ordering::Greater => 1.0,
                });
            } else {
                h.push((u + l) / (u - l));
            }
        }
    }
    h.sort_by(f64::total_cmp);
    median_sorted(&h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    /// Positions in the original sample.
    pub flagged_indices: Vec<usize>,
    pub lower_fence: f64,
    pub upper_fence: f64,
    pub medcouple: f64,
}

/// Skewness-adjusted boxplot fences.
pub fn flag_outliers_adjusted_boxplot(sample: &Sample) -> Result<OutlierReport> {
    if sample.len() < 4 {
        return Err(GeError::InvalidSample(format!(
            "outlier check needs at least 4 values, got {}",
            sample.len()
        )));
    }
    let sorted = sample.sorted();
    let q1 = quantile_type7(&sorted, 0.25);
    let q3 = quantile_type7(&sorted, 0.75);
    let iqr = q3 - q1;
    let mc = medcouple(sample.values());
    let (lo_exp, hi_exp) = if mc >= 0.0 { (-4.0, 3.0) } else { (-3.0, 4.0) };
    let lower_fence = q1 - 1.5 * (lo_exp * mc).exp() * iqr;
    let upper_fence = q3 + 1.5 * (hi_exp * mc).exp() * iqr;
    let flagged_indices = sample
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| **v < lower_fence || **v > upper_fence)
        .map(|(i, _)| i)
        .collect();
    Ok(OutlierReport {
        flagged_indices,
        lower_fence,
        upper_fence,
        medcouple: mc,
    })
}

/// Exact Kolmogorov–Smirnov distance between the empirical CDF and GE(θ).
pub fn ks_statistic(sample: &Sample, params: &GeParams) -> f64 {
    let x = sample.sorted();
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = params.cdf(v);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub estimator: Estimator,
    pub fitted: GeParams,
    pub ks_statistic: f64,
    pub p_value: f64,
    pub bootstrap_b: usize,
    /// Bootstrap refits that failed and were left out of the p-value.
    pub failures: usize,
}

pub const DEFAULT_BOOTSTRAP_B: usize = 1000;

/// Random stream for bootstrap replicate `index`: the master seed selects the
/// key and the replicate index selects the ChaCha stream.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// K-S test with a parametric-bootstrap p-value `(1 + #{D* ≥ D}) / (B + 1)`.
///
/// Every bootstrap sample is refitted with the same estimator. More than 5%
/// failed refits aborts the test.
pub fn ks_bootstrap_test(
    sample: &Sample,
    estimator: Estimator,
    b: usize,
    seed: u64,
) -> Result<GofReport> {
    if b < 99 {
        return Err(crate::error::domain(
            "ks_bootstrap_test",
            format!("B = {b} is below the minimum of 99"),
        ));
    }
    let fit = estimator.fit(sample)?;
    let d = ks_statistic(sample, &fit.params);
    let n = sample.len();
    let stats: Vec<Option<f64>> = (0..b as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = replicate_rng(seed, i);
            let sim = Sample::new(fit.params.draw(&mut rng, n)).ok()?;
            let refit = estimator.fit(&sim).ok()?;
            Some(ks_statistic(&sim, &refit.params))
        })
        .collect();
    let failures = stats.iter().filter(|s| s.is_none()).count();
    if failures as f64 > 0.05 * b as f64 {
        return Err(GeError::ReplicateFailures {
            failed: failures,
            total: b,
            detail: format!("{estimator} refits on bootstrap samples"),
        });
    }
    let used = b - failures;
    let exceed = stats.iter().flatten().filter(|s| **s >= d).count();
    Ok(GofReport {
        estimator,
        fitted: fit.params,
        ks_statistic: d,
        p_value: (1 + exceed) as f64 / (used + 1) as f64,
        bootstrap_b: b,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{plotting_positions, Method};
    use crate::gedist::ge_sample;

    fn p(l: f64, n: f64) -> GeParams {
        GeParams::new(l, n).unwrap()
    }

    fn seq(t: &[f64]) -> Sample {
        Sample::new(t.to_vec()).unwrap()
    }

    #[test]
    fn trend_edge_cases() {
        let times: Vec<f64> = (0..10).map(f64::from).collect();
        let flat = seq(&[3.0; 10]);
        assert_eq!(trend_pvalue(&flat, &times).unwrap(), 1.0);
        let line: Vec<f64> = times.iter().map(|t| 2.0 * t + 1.0).collect();
        assert!(trend_pvalue(&seq(&line), &times).unwrap() < 1e-12);
        assert!(trend_pvalue(&seq(&[1.0, 2.0]), &[0.0, 1.0]).is_err());
        assert!(trend_pvalue(&seq(&[1.0, 2.0, 3.0]), &[0.0, 2.0, 1.0]).is_err());
        assert!(trend_pvalue(&seq(&[1.0, 2.0, 3.0]), &[0.0, 1.0]).is_err());
    }

    #[test]
    fn trend_matches_reference_value() {
        // scipy.stats.linregress on the same data
        let s = seq(&[1.0, 2.0, 1.0, 2.0, 2.2]);
        let pv = trend_pvalue(&s, &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!((pv - 0.24161354958339287).abs() < 1e-12, "{pv}");
    }

    #[test]
    fn trend_pvalues_uniform_under_null() {
        let reps = 10_000;
        let times: Vec<f64> = (0..30).map(f64::from).collect();
        let mut pv: Vec<f64> = (0..reps)
            .map(|r| trend_pvalue(&ge_sample(30, &p(1.0, 1.5), 10_000 + r).unwrap(), &times).unwrap())
            .collect();
        pv.sort_by(f64::total_cmp);
        let n = reps as f64;
        let d = pv
            .iter()
            .enumerate()
            .map(|(i, &u)| ((i + 1) as f64 / n - u).max(u - i as f64 / n))
            .fold(0.0, f64::max);
        // asymptotic 1% critical value of the K-S distance
        assert!(d < 1.6276 / n.sqrt(), "{d}");
    }

    #[test]
    fn acf_basics() {
        let alt: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 1.0 } else { 2.0 }).collect();
        let (acf, pacf) = acf_pacf(&seq(&alt), 3).unwrap();
        assert!(acf[0] < 0.0);
        assert_eq!(acf[0], pacf[0]);
        assert!(acf_pacf(&seq(&[2.0; 10]), 2).is_err());
        assert!(acf_pacf(&seq(&alt), 10).is_err());
        assert!(acf_pacf(&seq(&alt), 0).is_err());
    }

    #[test]
    fn pacf_lag_two_matches_yule_walker() {
        let s = ge_sample(200, &p(1.0, 2.0), 3).unwrap();
        let (acf, pacf) = acf_pacf(&s, 4).unwrap();
        let (r1, r2) = (acf[0], acf[1]);
        assert!((pacf[1] - (r2 - r1 * r1) / (1.0 - r1 * r1)).abs() < 1e-14);
        // lag three by solving the 3x3 Toeplitz system with Cramer's rule
        let r3 = acf[2];
        let det = |m: [[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let a = [[1.0, r1, r2], [r1, 1.0, r1], [r2, r1, 1.0]];
        let a3 = [[1.0, r1, r1], [r1, 1.0, r2], [r2, r1, r3]];
        assert!((pacf[2] - det(a3) / det(a)).abs() < 1e-13);
    }

    #[test]
    fn acf_white_noise_band() {
        let s = ge_sample(10_000, &p(1.0, 1.5), 12).unwrap();
        let (acf, _) = acf_pacf(&s, 10).unwrap();
        let band = 3.0 / (10_000f64).sqrt();
        assert!(acf.iter().all(|r| r.abs() < band), "{acf:?}");
    }

    #[test]
    fn medcouple_reference_values() {
        // reference values from statsmodels.stats.stattools.medcouple
        let cases: [(&[f64], f64); 4] = [
            (&[0.3, 1.2, 1.9, 2.2, 2.2, 2.2, 3.5, 7.0, 11.0], 0.528917910447761),
            (&[1.0, 2.0, 3.0, 4.0, 100.0], 0.0),
            (&[5.0, 1.0, 2.5, 2.5, 9.0, 0.2, 3.3, 2.5], 0.14583333333333334),
            (&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 0.0),
        ];
        for (v, want) in cases {
            assert!((medcouple(v) - want).abs() < 1e-15, "{v:?}");
        }
    }

    #[test]
    fn medcouple_bounds_and_scaling() {
        for seed in 0..20 {
            let s = ge_sample(41, &p(1.0, 0.5 + seed as f64 / 4.0), seed).unwrap();
            let mc = medcouple(s.values());
            assert!((-1.0..=1.0).contains(&mc));
            let scaled: Vec<f64> = s.values().iter().map(|v| 3.7 * v + 2.0).collect();
            assert!((medcouple(&scaled) - mc).abs() < 1e-12);
        }
    }

    #[test]
    fn boxplot_examples() {
        let r = flag_outliers_adjusted_boxplot(&seq(&[1.0, 2.0, 3.0, 4.0, 100.0])).unwrap();
        assert_eq!(r.flagged_indices, vec![4]);
        assert_eq!(r.medcouple, 0.0);
        assert_eq!(r.upper_fence, 4.0 + 1.5 * 2.0);

        let sym = seq(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        let r = flag_outliers_adjusted_boxplot(&sym).unwrap();
        assert_eq!(r.medcouple, 0.0);
        assert_eq!((r.lower_fence, r.upper_fence), (2.5 - 4.5, 5.5 + 4.5));

        let flat = flag_outliers_adjusted_boxplot(&seq(&[2.0; 6])).unwrap();
        assert!(flat.flagged_indices.is_empty());
        assert!(flag_outliers_adjusted_boxplot(&seq(&[1.0, 2.0, 3.0])).is_err());
    }

    #[test]
    fn boxplot_flags_injected_return_level() {
        let mut v = ge_sample(99, &p(1.0, 1.5), 2024).unwrap().values().to_vec();
        v.push(14.22);
        let s = Sample::new(v).unwrap();
        let r = flag_outliers_adjusted_boxplot(&s).unwrap();
        assert!(r.flagged_indices.contains(&99), "{r:?}");
        for &i in &r.flagged_indices {
            let x = s.values()[i];
            assert!(x < r.lower_fence || x > r.upper_fence);
        }
    }

    #[test]
    fn ks_exact_matches_grid_search() {
        let g = p(1.0, 1.5);
        let s = ge_sample(40, &g, 77).unwrap();
        let fitted = p(1.1, 1.4);
        let x = s.sorted();
        let ecdf = |t: f64| x.iter().filter(|v| **v <= t).count() as f64 / 40.0;
        let mut grid: Vec<f64> = (0..20_000).map(|i| i as f64 * 1e-3).collect();
        for v in &x {
            grid.push(*v);
            grid.push(v - 1e-11);
        }
        let approx = grid
            .iter()
            .filter(|t| **t > 0.0)
            .map(|&t| (ecdf(t) - fitted.cdf(t)).abs())
            .fold(0.0, f64::max);
        assert!((ks_statistic(&s, &fitted) - approx).abs() < 1e-6);
    }

    #[test]
    fn ks_quantile_sample_is_close() {
        let g = p(1.0, 2.0);
        let n = 50;
        let s = Sample::new(plotting_positions(n).iter().map(|&q| g.quantile(q)).collect()).unwrap();
        assert!(ks_statistic(&s, &g) <= 1.0 / (n + 1) as f64 + 1e-12);
    }

    #[test]
    fn bootstrap_is_deterministic_and_valid() {
        let s = ge_sample(40, &p(1.0, 1.5), 5).unwrap();
        let est = Estimator::Classical(Method::Ml);
        let a = ks_bootstrap_test(&s, est, 99, 42).unwrap();
        let b = ks_bootstrap_test(&s, est, 99, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.p_value > 0.0 && a.p_value <= 1.0);
        assert!(((a.p_value * 100.0).round() - a.p_value * 100.0).abs() < 1e-9);
        assert!(ks_bootstrap_test(&s, est, 50, 42).is_err());
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<GofReport>(&js).unwrap(), a);
    }

    #[test]
    fn replicate_streams_differ() {
        use rand::Rng;
        let a: u64 = replicate_rng(1, 0).random();
        let b: u64 = replicate_rng(1, 1).random();
        let c: u64 = replicate_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
