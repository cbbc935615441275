//! Simulation study configuration (TOML).
//!
//! ```toml
//! seed = 2024
//! n = 100
//! reps = 1000
//! truth.lambda = 1.0
//! truth.nu = 1.5
//! contamination.proportions = [0.0, 0.01, 0.05, 0.1]
//! contamination.return_level = 0.999   # or contamination.outlier_value = 7.31
//! contamination.scenario = "C1"
//! contamination.tune_alpha = false
//! methods = ["ML", "MM", "PT", "LS", "WLS", "LM"]
//! alphas = [0.1, 0.2, 0.5, 1.0]
//! ```

use crate::error::{CliError, CliResult};
use robustge::simharness::standard_methods;
use robustge::{make_outlier_value, ContaminationSpec, Estimator, GeParams, SimMethod};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truth {
    pub lambda: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Contamination {
    #[serde(default = "default_proportions")]
    pub proportions: Vec<f64>,
    pub outlier_value: Option<f64>,
    pub return_level: Option<f64>,
    #[serde(default)]
    pub scenario: String,
    #[serde(default)]
    pub tune_alpha: bool,
}

fn default_proportions() -> Vec<f64> {
    vec![0.0, 0.01, 0.05, 0.1]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default)]
    pub seed: u64,
    pub n: usize,
    pub reps: usize,
    pub truth: Truth,
    pub contamination: Contamination,
    /// Classical methods and fixed-α MDPDE entries such as `"MDPDE(0.5)"`.
    pub methods: Option<Vec<String>>,
    /// MDPDE tuning parameters, each added as a separate estimator.
    pub alphas: Option<Vec<f64>>,
}

/// Everything needed to run the study.
#[derive(Debug, Clone)]
pub struct StudyPlan {
    pub truth: GeParams,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub specs: Vec<ContaminationSpec>,
    pub methods: Vec<SimMethod>,
}

pub fn parse_config(text: &str) -> CliResult<SimConfig> {
    toml::from_str(text).map_err(|e| CliError::Data(format!("config: {e}")))
}

impl SimConfig {
    pub fn plan(&self) -> CliResult<StudyPlan> {
        let truth = GeParams::new(self.truth.lambda, self.truth.nu)
            .map_err(|e| CliError::Data(format!("config truth: {e}")))?;
        let c = &self.contamination;
        let outlier = match (c.outlier_value, c.return_level) {
            (Some(v), None) => v,
            (None, Some(p)) => make_outlier_value(&truth, p)
                .map_err(|e| CliError::Data(format!("config return_level: {e}")))?,
            _ => {
                return Err(CliError::Data(
                    "config: set exactly one of contamination.outlier_value and contamination.return_level"
                        .into(),
                ))
            }
        };
        let specs = c
            .proportions
            .iter()
            .map(|&p| ContaminationSpec::new(p, outlier, c.scenario.clone()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Data(format!("config contamination: {e}")))?;
        let mut methods: Vec<SimMethod> = match (&self.methods, &self.alphas) {
            (None, None) => standard_methods(),
            _ => {
                let mut v = Vec::new();
                for m in self.methods.iter().flatten() {
                    let e: Estimator = m
                        .parse()
                        .map_err(|e| CliError::Data(format!("config methods: {e}")))?;
                    v.push(SimMethod::Fixed(e));
                }
                for &a in self.alphas.iter().flatten() {
                    if !(a >= 0.0 && a.is_finite()) {
                        return Err(CliError::Data(format!("config alphas: {a} is not a valid alpha")));
                    }
                    v.push(SimMethod::Fixed(Estimator::Mdpde(a)));
                }
                v
            }
        };
        if c.tune_alpha {
            methods.push(SimMethod::TunedMdpde(robustge::mdpde::default_grid()));
        }
        if methods.is_empty() {
            return Err(CliError::Data("config: no methods".into()));
        }
        if self.reps == 0 || self.n < 3 {
            return Err(CliError::Data("config: need reps >= 1 and n >= 3".into()));
        }
        Ok(StudyPlan {
            truth,
            n: self.n,
            reps: self.reps,
            seed: self.seed,
            specs,
            methods,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: &str = r#"
seed = 7
n = 100
reps = 10
truth.lambda = 1.0
truth.nu = 1.5
contamination.return_level = 0.999
contamination.scenario = "C1"
"#;

    #[test]
    fn defaults_mirror_the_ten_method_layout() {
        let plan = parse_config(TABLE1).unwrap().plan().unwrap();
        assert_eq!(plan.methods.len(), 10);
        assert_eq!(plan.specs.len(), 4);
        assert!((plan.specs[0].outlier_value - 7.31).abs() < 0.005);
    }

    #[test]
    fn explicit_methods_and_alphas() {
        let text = format!("{TABLE1}methods = [\"ML\", \"wls\"]\nalphas = [0.5]\n");
        let plan = parse_config(&text).unwrap().plan().unwrap();
        let labels: Vec<String> = plan.methods.iter().map(|m| m.label()).collect();
        assert_eq!(labels, ["ML", "WLS", "MDPDE"]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(parse_config("n = 1").is_err());
        assert!(parse_config(&format!("{TABLE1}bogus = 1\n")).is_err());
        let both = format!("{TABLE1}contamination.outlier_value = 3.0\n");
        assert!(parse_config(&both).unwrap().plan().is_err());
        let bad = format!("{TABLE1}methods = [\"XX\"]\n");
        assert!(parse_config(&bad).unwrap().plan().is_err());
    }
}
