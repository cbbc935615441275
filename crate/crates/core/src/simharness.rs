//! Monte Carlo contamination studies: bias and MSE of each estimator when a
//! fraction of every GE sample is replaced by a fixed outlying value.

use crate::diagnostics::replicate_rng;
use crate::error::{GeError, Result};
use crate::estimators::Estimator;
use crate::gedist::{ge_quantile, GeParams};
use crate::mdpde::{fit_mdpde, select_alpha_cvm};
use crate::sample::Sample;
use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContaminationSpec {
    pub proportion: f64,
    pub outlier_value: f64,
    pub scenario_label: String,
}

impl ContaminationSpec {
    pub fn new(proportion: f64, outlier_value: f64, label: impl Into<String>) -> Result<Self> {
        if !(0.0..1.0).contains(&proportion) {
            return Err(crate::error::domain(
                "contamination",
                format!("proportion {proportion} must lie in [0, 1)"),
            ));
        }
        if !(outlier_value > 0.0 && outlier_value.is_finite()) {
            return Err(crate::error::domain(
                "contamination",
                format!("outlier value {outlier_value} must be positive and finite"),
            ));
        }
        Ok(ContaminationSpec {
            proportion,
            outlier_value,
            scenario_label: label.into(),
        })
    }

    /// Number of replaced observations in a sample of size `n`.
    pub fn count(&self, n: usize) -> usize {
        (n as f64 * self.proportion).round() as usize
    }
}

/// Return level used as the contaminating value.
pub fn make_outlier_value(truth: &GeParams, return_level_prob: f64) -> Result<f64> {
    ge_quantile(return_level_prob, truth)
}

/// An estimator run inside a study.
#[derive(Debug, Clone, PartialEq)]
pub enum SimMethod {
    Fixed(Estimator),
    /// MDPDE at the α chosen per replication by leave-one-out CVM over `grid`.
    TunedMdpde(Vec<f64>),
}

impl From<Estimator> for SimMethod {
    fn from(e: Estimator) -> Self {
        SimMethod::Fixed(e)
    }
}

impl SimMethod {
    pub fn label(&self) -> String {
        match self {
            SimMethod::Fixed(Estimator::Mdpde(_)) => "MDPDE".into(),
            SimMethod::Fixed(e) => e.to_string(),
            SimMethod::TunedMdpde(_) => "MDPDE(opt)".into(),
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            SimMethod::Fixed(e) => e.alpha(),
            SimMethod::TunedMdpde(_) => None,
        }
    }

    fn fit(&self, sample: &Sample) -> Result<GeParams> {
        match self {
            SimMethod::Fixed(e) => e.fit(sample).map(|f| f.params),
            SimMethod::TunedMdpde(grid) => {
                let curve = select_alpha_cvm(sample, grid)?;
                fit_mdpde(sample, curve.optimal_alpha).map(|f| f.params)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Lambda,
    Nu,
}

impl Parameter {
    pub fn as_str(self) -> &'static str {
        match self {
            Parameter::Lambda => "lambda",
            Parameter::Nu => "nu",
        }
    }
}

/// One (method, parameter, contamination level) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRow {
    pub scenario: String,
    pub method: String,
    pub alpha: Option<f64>,
    pub parameter: Parameter,
    pub outlier_pct: f64,
    pub bias: f64,
    pub mse: f64,
    /// Monte Carlo standard error of `bias`.
    pub bias_se: f64,
    pub successes: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTable {
    pub rows: Vec<SimRow>,
    pub replications: usize,
    pub n: usize,
    pub truth: GeParams,
    pub seed: u64,
}

/// Replaces `spec.count(n)` observations, at indices drawn without replacement.
pub fn contaminate<R: rand::Rng + ?Sized>(values: &mut [f64], spec: &ContaminationSpec, rng: &mut R) {
    let k = spec.count(values.len());
    for i in index::sample(rng, values.len(), k) {
        values[i] = spec.outlier_value;
    }
}

fn validate(n: usize, reps: usize, methods: &[SimMethod]) -> Result<()> {
    if reps == 0 {
        return Err(crate::error::domain("study", "need at least one replication"));
    }
    if methods.is_empty() {
        return Err(crate::error::domain("study", "no methods requested"));
    }
    if n < 3 {
        return Err(crate::error::domain("study", "sample size must be at least 3"));
    }
    Ok(())
}

/// Runs one contamination setting. Replicate `r` draws from stream `r` of the
/// master seed, so tables are reproducible and independent of thread count.
pub fn run_contamination_study(
    truth: &GeParams,
    n: usize,
    reps: usize,
    spec: &ContaminationSpec,
    methods: &[SimMethod],
    seed: u64,
) -> Result<SimTable> {
    run_contamination_grid(truth, n, reps, std::slice::from_ref(spec), methods, seed)
}

/// Runs several contamination settings on common random numbers: every
/// setting starts from the same clean samples.
pub fn run_contamination_grid(
    truth: &GeParams,
    n: usize,
    reps: usize,
    specs: &[ContaminationSpec],
    methods: &[SimMethod],
    seed: u64,
) -> Result<SimTable> {
    validate(n, reps, methods)?;
    let mut rows = Vec::new();
    for spec in specs {
        let fits: Vec<Vec<Option<GeParams>>> = (0..reps as u64)
            .into_par_iter()
            .map(|r| {
                let mut rng = replicate_rng(seed, r);
                let mut values = truth.draw(&mut rng, n);
                contaminate(&mut values, spec, &mut rng);
                let sample = match Sample::new(values) {
                    Ok(s) => s,
                    Err(_) => return vec![None; methods.len()],
                };
                methods
                    .iter()
                    .map(|m| match m.fit(&sample) {
                        Ok(p) => Some(p),
                        Err(e) => {
                            log::warn!("replication {r}, {}: {e}", m.label());
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        for (k, m) in methods.iter().enumerate() {
            for parameter in [Parameter::Lambda, Parameter::Nu] {
                let target = match parameter {
                    Parameter::Lambda => truth.lambda(),
                    Parameter::Nu => truth.nu(),
                };
                let errors: Vec<f64> = fits
                    .iter()
                    .filter_map(|f| f[k])
                    .map(|p| match parameter {
                        Parameter::Lambda => p.lambda() - target,
                        Parameter::Nu => p.nu() - target,
                    })
                    .collect();
                let used = errors.len();
                let (bias, mse, bias_se) = if used == 0 {
                    (f64::NAN, f64::NAN, f64::NAN)
                } else {
                    let u = used as f64;
                    let bias = errors.iter().sum::<f64>() / u;
                    let mse = errors.iter().map(|d| d * d).sum::<f64>() / u;
                    let var = if used > 1 {
                        errors.iter().map(|d| (d - bias).powi(2)).sum::<f64>() / (u - 1.0)
                    } else {
                        0.0
                    };
                    (bias, mse, (var / u).sqrt())
                };
                rows.push(SimRow {
                    scenario: spec.scenario_label.clone(),
                    method: m.label(),
                    alpha: m.alpha(),
                    parameter,
                    outlier_pct: 100.0 * spec.proportion,
                    bias,
                    mse,
                    bias_se,
                    successes: used,
                    failures: reps - used,
                });
            }
        }
    }
    Ok(SimTable {
        rows,
        replications: reps,
        n,
        truth: *truth,
        seed,
    })
}

fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "NA".into()
    }
}

impl SimTable {
    pub fn total_failures(&self) -> usize {
        self.rows.iter().map(|r| r.failures).sum()
    }

    pub fn find(&self, method: &str, alpha: Option<f64>, parameter: Parameter, pct: f64) -> Option<&SimRow> {
        self.rows.iter().find(|r| {
            r.method == method
                && r.alpha == alpha
                && r.parameter == parameter
                && (r.outlier_pct - pct).abs() < 1e-9
        })
    }

    /// One row per cell, numbers to 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "scenario,method,alpha,parameter,outlier_pct,bias,mse,bias_se,successes,failures\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.scenario,
                r.method,
                r.alpha.map(fmt17).unwrap_or_default(),
                r.parameter.as_str(),
                r.outlier_pct,
                fmt17(r.bias),
                fmt17(r.mse),
                fmt17(r.bias_se),
                r.successes,
                r.failures
            );
        }
        out
    }

    /// Human-readable layout: one line per method and parameter, bias and
    /// MSE for each contamination level, 4 decimals.
    pub fn to_text(&self) -> String {
        let mut levels: Vec<(String, f64)> = Vec::new();
        let mut keys: Vec<(String, Option<f64>)> = Vec::new();
        for r in &self.rows {
            if !levels.iter().any(|(s, p)| *s == r.scenario && *p == r.outlier_pct) {
                levels.push((r.scenario.clone(), r.outlier_pct));
            }
            if !keys.iter().any(|(m, a)| *m == r.method && *a == r.alpha) {
                keys.push((r.method.clone(), r.alpha));
            }
        }
        let mut out = String::new();
        let _ = writeln!(
            out,
            "GE({}, {}), n = {}, {} replications, seed {}",
            self.truth.lambda(),
            self.truth.nu(),
            self.n,
            self.replications,
            self.seed
        );
        let mut header = format!("{:<16}{:<8}", "method", "param");
        for (s, p) in &levels {
            let tag = if s.is_empty() { format!("{p}%") } else { format!("{s} {p}%") };
            header.push_str(&format!("{:>22}", format!("{tag} bias/MSE")));
        }
        let _ = writeln!(out, "{header}");
        for (m, a) in &keys {
            let name = match a {
                Some(a) => format!("{m}(a={a})"),
                None => m.clone(),
            };
            for parameter in [Parameter::Lambda, Parameter::Nu] {
                let mut line = format!("{:<16}{:<8}", name, parameter.as_str());
                for (s, p) in &levels {
                    let cell = self.rows.iter().find(|r| {
                        &r.method == m
                            && r.alpha == *a
                            && r.parameter == parameter
                            && &r.scenario == s
                            && r.outlier_pct == *p
                    });
                    let text = match cell {
                        Some(r) => format!("{:.4} {:.4}", r.bias, r.mse),
                        None => "-".into(),
                    };
                    line.push_str(&format!("{text:>22}"));
                }
                let _ = writeln!(out, "{line}");
            }
        }
        out
    }
}

/// The ten estimators compared in the contamination tables.
pub fn standard_methods() -> Vec<SimMethod> {
    use crate::estimators::Method;
    let mut v: Vec<SimMethod> = Method::CLASSICAL
        .iter()
        .map(|m| SimMethod::Fixed(Estimator::Classical(*m)))
        .collect();
    for a in [0.1, 0.2, 0.5, 1.0] {
        v.push(SimMethod::Fixed(Estimator::Mdpde(a)));
    }
    v
}

impl std::str::FromStr for SimMethod {
    type Err = GeError;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("mdpde(opt)") {
            return Ok(SimMethod::TunedMdpde(crate::mdpde::default_grid()));
        }
        Ok(SimMethod::Fixed(s.parse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::Method;

    fn truth() -> GeParams {
        GeParams::new(1.0, 1.5).unwrap()
    }

    fn ml() -> SimMethod {
        SimMethod::Fixed(Estimator::Classical(Method::Ml))
    }

    #[test]
    fn outlier_values() {
        let g = truth();
        assert!((make_outlier_value(&g, 0.999).unwrap() - 7.31).abs() < 0.005);
        assert!((make_outlier_value(&g, 1.0 - 1e-6).unwrap() - 14.22).abs() < 0.005);
        let e = GeParams::new(1.0, 1.0).unwrap();
        let p = 1.0 - (-1.0f64).exp();
        assert!((make_outlier_value(&e, p).unwrap() - 1.0).abs() < 1e-14);
        assert!(make_outlier_value(&e, 1.0).is_err());
    }

    #[test]
    fn contamination_replaces_exact_count() {
        let spec = ContaminationSpec::new(0.05, 7.31, "C1").unwrap();
        let mut rng = replicate_rng(3, 0);
        let mut v = truth().draw(&mut rng, 100);
        contaminate(&mut v, &spec, &mut rng);
        assert_eq!(v.iter().filter(|x| **x == 7.31).count(), 5);
        assert_eq!(spec.count(30), 2);
        assert!(ContaminationSpec::new(1.0, 7.31, "").is_err());
        assert!(ContaminationSpec::new(0.1, -1.0, "").is_err());
    }

    #[test]
    fn single_replication_mse_is_bias_squared() {
        let spec = ContaminationSpec::new(0.0, 7.31, "C1").unwrap();
        let t = run_contamination_study(&truth(), 50, 1, &spec, &[ml()], 9).unwrap();
        for r in &t.rows {
            assert_eq!(r.mse, r.bias * r.bias);
            assert_eq!(r.bias_se, 0.0);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let specs = [
            ContaminationSpec::new(0.0, 7.31, "C1").unwrap(),
            ContaminationSpec::new(0.1, 7.31, "C1").unwrap(),
        ];
        let methods = [ml(), SimMethod::Fixed(Estimator::Mdpde(0.5))];
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_contamination_grid(&truth(), 40, 16, &specs, &methods, 5).unwrap())
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn clean_level_identical_across_scenarios() {
        let c1 = ContaminationSpec::new(0.0, 7.31, "").unwrap();
        let c2 = ContaminationSpec::new(0.0, 14.22, "").unwrap();
        let methods = [ml(), SimMethod::Fixed(Estimator::Classical(Method::Lm))];
        let a = run_contamination_study(&truth(), 60, 20, &c1, &methods, 1).unwrap();
        let b = run_contamination_study(&truth(), 60, 20, &c2, &methods, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ml_and_mdpde_zero_agree() {
        let spec = ContaminationSpec::new(0.0, 7.31, "C1").unwrap();
        let methods = [ml(), SimMethod::Fixed(Estimator::Mdpde(0.0))];
        let t = run_contamination_study(&truth(), 80, 20, &spec, &methods, 2).unwrap();
        for p in [Parameter::Lambda, Parameter::Nu] {
            let a = t.find("ML", None, p, 0.0).unwrap();
            let b = t.find("MDPDE", Some(0.0), p, 0.0).unwrap();
            assert!((a.bias - b.bias).abs() < 1e-4);
        }
    }

    #[test]
    fn variance_decomposition_and_ml_breakdown() {
        let specs: Vec<ContaminationSpec> = [0.0, 0.01, 0.05, 0.1]
            .iter()
            .map(|&p| ContaminationSpec::new(p, 7.31, "C1").unwrap())
            .collect();
        let t = run_contamination_grid(&truth(), 100, 200, &specs, &[ml()], 77).unwrap();
        for r in &t.rows {
            assert!(r.mse >= r.bias * r.bias);
            assert_eq!(r.failures, 0);
        }
        let bias: Vec<f64> = [0.0, 1.0, 5.0, 10.0]
            .iter()
            .map(|&p| t.find("ML", None, Parameter::Lambda, p).unwrap().bias.abs())
            .collect();
        assert!(bias[1] < bias[2] && bias[2] < bias[3], "{bias:?}");
    }

    #[test]
    fn table_formats() {
        let spec = ContaminationSpec::new(0.1, 14.22, "C2").unwrap();
        let methods = standard_methods();
        assert_eq!(methods.len(), 10);
        let t = run_contamination_study(&truth(), 30, 2, &spec, &methods[..2], 4).unwrap();
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 1 + 4);
        assert!(csv.lines().nth(1).unwrap().starts_with("C2,ML,,lambda,10,"));
        let text = t.to_text();
        assert!(text.contains("C2 10% bias/MSE"));
        let js = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<SimTable>(&js).unwrap(), t);
        assert_eq!("mdpde(opt)".parse::<SimMethod>().unwrap().label(), "MDPDE(opt)");
    }

    #[test]
    fn validation() {
        let spec = ContaminationSpec::new(0.0, 7.31, "").unwrap();
        assert!(run_contamination_study(&truth(), 50, 0, &spec, &[ml()], 1).is_err());
        assert!(run_contamination_study(&truth(), 50, 5, &spec, &[], 1).is_err());
    }
}
