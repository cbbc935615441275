//! Subcommand implementations. Each returns its machine output as a string.

use crate::config::parse_config;
use crate::dataset::{read_dataset, Dataset, DatasetSummary};
use crate::error::{CliError, CliResult};
use crate::grid::parse_grid;
use crate::synth::{synth_csv, SynthKind};
use crate::{Cli, Command, CurveKind, Output, TableFormat};
use robustge::diagnostics::{acf_pacf, flag_outliers_adjusted_boxplot, ks_bootstrap_test, ks_statistic, trend_pvalue};
use robustge::{
    are, influence_function, run_contamination_grid, sandwich_sigma, select_alpha_cvm, CvmCurve,
    Estimator, FitResult, GeParams, GofReport, Method, OutlierReport, Sample,
};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Machine-output float: 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub dataset: DatasetSummary,
    /// Original row positions (among usable rows) dropped as outliers.
    pub removed_outliers: Vec<usize>,
    pub fit: FitResult,
    pub ks_distance: f64,
    /// Wald standard errors `sqrt(diag(Σ)/n)` for ML and MDPDE.
    pub standard_errors: Option<[f64; 2]>,
    pub tuning: Option<CvmCurve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnoseReport {
    pub dataset: DatasetSummary,
    pub trend_pvalue: f64,
    pub acf_lag1: f64,
    pub pacf_lag1: f64,
    pub outliers: OutlierReport,
    /// Sample size the K-S test ran on.
    pub gof_n: usize,
    pub gof: GofReport,
}

pub(crate) fn dispatch(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Fit {
            data,
            method,
            alpha,
            grid,
            remove_outliers,
        } => cmd_fit(data, method, alpha.as_deref(), grid, *remove_outliers),
        Command::TuneAlpha { data, grid } => cmd_tune_alpha(data, grid),
        Command::Simulate { config, format } => cmd_simulate(config, *format),
        Command::Curves {
            kind,
            lambda,
            nu,
            alpha,
            grid,
        } => cmd_curves(*kind, *lambda, *nu, *alpha, grid.as_deref()),
        Command::Diagnose {
            data,
            method,
            bootstrap,
            remove_outliers,
        } => cmd_diagnose(data, method, *bootstrap, *remove_outliers, cli.seed),
        Command::Synth { kind } => {
            let kind: SynthKind = kind.parse().map_err(CliError::Usage)?;
            Ok(Output::ok(synth_csv(kind)))
        }
    }
}

fn usage(e: robustge::GeError) -> CliError {
    CliError::Usage(e.to_string())
}

/// Sample with adjusted-boxplot outliers removed, plus their positions.
fn strip_outliers(sample: &Sample) -> CliResult<(Sample, Vec<usize>)> {
    let report = flag_outliers_adjusted_boxplot(sample)?;
    let kept: Vec<f64> = sample
        .values()
        .iter()
        .enumerate()
        .filter(|(i, _)| !report.flagged_indices.contains(i))
        .map(|(_, &v)| v)
        .collect();
    let mut stripped = Sample::new(kept)?;
    if let Some(label) = sample.label() {
        stripped = stripped.with_label(label);
    }
    Ok((stripped, report.flagged_indices))
}

fn wald_errors(params: &GeParams, alpha: f64, n: usize) -> CliResult<[f64; 2]> {
    let cov = sandwich_sigma(params, alpha)?;
    Ok([
        (cov.sigma[0][0] / n as f64).sqrt(),
        (cov.sigma[1][1] / n as f64).sqrt(),
    ])
}

pub fn cmd_fit(
    data: &Path,
    method: &str,
    alpha: Option<&str>,
    grid: &str,
    remove_outliers: bool,
) -> CliResult<Output> {
    let ds: Dataset = read_dataset(data)?;
    let (sample, removed) = if remove_outliers {
        strip_outliers(&ds.sample)?
    } else {
        (ds.sample.clone(), Vec::new())
    };
    let estimator = if method.trim().eq_ignore_ascii_case("mdpde") {
        Estimator::Classical(Method::Mdpde)
    } else {
        method.parse().map_err(usage)?
    };
    let mut tuning = None;
    let estimator = match (estimator, alpha) {
        (Estimator::Classical(Method::Mdpde), None) => {
            return Err(CliError::Usage("MDPDE needs --alpha <value|opt>".into()))
        }
        (Estimator::Classical(Method::Mdpde), Some("opt")) => {
            let curve = select_alpha_cvm(&sample, &parse_grid(grid)?)?;
            let a = curve.optimal_alpha;
            tuning = Some(curve);
            Estimator::Mdpde(a)
        }
        (Estimator::Classical(Method::Mdpde), Some(a)) => {
            format!("MDPDE({a})").parse().map_err(usage)?
        }
        (e, None) => e,
        (e, Some(_)) => {
            return Err(CliError::Usage(format!("--alpha does not apply to {e}")))
        }
    };
    let fit = estimator.fit(&sample)?;
    let standard_errors = match fit.estimator() {
        Estimator::Classical(Method::Ml) => Some(wald_errors(&fit.params, 0.0, sample.len())?),
        Estimator::Mdpde(a) => Some(wald_errors(&fit.params, a, sample.len())?),
        _ => None,
    };
    let converged = fit.converged()
        && tuning
            .as_ref()
            .is_none_or(|c| c.distances.iter().all(Option::is_some));
    let report = FitReport {
        dataset: DatasetSummary {
            used: sample.len(),
            ..ds.summary()
        },
        removed_outliers: removed,
        ks_distance: ks_statistic(&sample, &fit.params),
        fit,
        standard_errors,
        tuning,
    };
    let mut out = Output::ok(to_json(&report)?);
    if ds.dropped > 0 {
        out.notes.push(format!("dropped {} missing rows", ds.dropped));
    }
    out.converged = converged;
    Ok(out)
}

/// CvmCurve as `alpha,distance,optimal` CSV. Failed grid points have an
/// empty distance.
pub fn curve_csv(curve: &CvmCurve) -> String {
    let mut s = String::from("alpha,distance,optimal\n");
    let best = curve.optimal_index();
    for (k, (a, d)) in curve.alphas.iter().zip(&curve.distances).enumerate() {
        let d = d.map(num).unwrap_or_default();
        let _ = writeln!(s, "{},{d},{}", num(*a), u8::from(k == best));
    }
    s
}

pub fn cmd_tune_alpha(data: &Path, grid: &str) -> CliResult<Output> {
    let ds = read_dataset(data)?;
    let curve = select_alpha_cvm(&ds.sample, &parse_grid(grid)?)?;
    let mut out = Output::ok(curve_csv(&curve));
    out.notes.push(format!("alpha_opt = {}", curve.optimal_alpha));
    out.converged = curve.distances.iter().all(Option::is_some);
    Ok(out)
}

pub fn cmd_simulate(config: &Path, format: TableFormat) -> CliResult<Output> {
    let text = std::fs::read_to_string(config)
        .map_err(|e| CliError::Data(format!("{}: {e}", config.display())))?;
    let plan = parse_config(&text)?.plan()?;
    let table = run_contamination_grid(
        &plan.truth,
        plan.n,
        plan.reps,
        &plan.specs,
        &plan.methods,
        plan.seed,
    )?;
    let body = match format {
        TableFormat::Csv => table.to_csv(),
        TableFormat::Text => table.to_text(),
        TableFormat::Json => to_json(&table)?,
    };
    let mut out = Output::ok(body);
    let failures = table.total_failures();
    if failures > 0 {
        out.notes.push(format!("{failures} fits failed"));
        out.converged = false;
    }
    Ok(out)
}

pub fn cmd_curves(
    kind: CurveKind,
    lambda: f64,
    nu: f64,
    alpha: f64,
    grid: Option<&str>,
) -> CliResult<Output> {
    let params = GeParams::new(lambda, nu).map_err(usage)?;
    let default = match kind {
        CurveKind::Are => "0:0.02:1",
        CurveKind::Influence => "0.05:0.05:50",
        CurveKind::Density => "0.01:0.01:10",
        CurveKind::Sigma | CurveKind::Moments => "0.1:0.1:10",
    };
    let grid = parse_grid(grid.unwrap_or(default))?;
    let mut s = String::new();
    let row = |s: &mut String, cells: &[f64]| {
        let line: Vec<String> = cells.iter().map(|&v| num(v)).collect();
        let _ = writeln!(s, "{}", line.join(","));
    };
    match kind {
        CurveKind::Are => {
            s.push_str("alpha,are_lambda,are_nu\n");
            for &a in &grid {
                let [l, v] = are(&params, a)?;
                row(&mut s, &[a, l, v]);
            }
        }
        CurveKind::Influence => {
            s.push_str("x,if_lambda,if_nu\n");
            for &x in &grid {
                let [l, v] = influence_function(x, &params, alpha).map_err(usage)?;
                row(&mut s, &[x, l, v]);
            }
        }
        CurveKind::Sigma => {
            s.push_str("nu,sigma11,sigma12,sigma22\n");
            for &v in &grid {
                let p = GeParams::new(lambda, v).map_err(usage)?;
                let sig = sandwich_sigma(&p, alpha)?.sigma;
                row(&mut s, &[v, sig[0][0], sig[0][1], sig[1][1]]);
            }
        }
        CurveKind::Density => {
            s.push_str("x,pdf,cdf\n");
            for &x in &grid {
                row(&mut s, &[x, params.density(x), params.cdf(x)]);
            }
        }
        CurveKind::Moments => {
            s.push_str("nu,mean,variance,skewness\n");
            for &v in &grid {
                let m = GeParams::new(lambda, v).map_err(usage)?.moments();
                row(&mut s, &[v, m.mean, m.variance, m.skewness]);
            }
        }
    }
    Ok(Output::ok(s))
}

pub fn cmd_diagnose(
    data: &Path,
    method: &str,
    bootstrap: usize,
    remove_outliers: bool,
    seed: u64,
) -> CliResult<Output> {
    let ds = read_dataset(data)?;
    let estimator: Estimator = method.parse().map_err(usage)?;
    let trend = trend_pvalue(&ds.sample, &ds.times)?;
    let (acf, pacf) = acf_pacf(&ds.sample, 1)?;
    let outliers = flag_outliers_adjusted_boxplot(&ds.sample)?;
    let gof_sample = if remove_outliers {
        strip_outliers(&ds.sample)?.0
    } else {
        ds.sample.clone()
    };
    let gof = ks_bootstrap_test(&gof_sample, estimator, bootstrap, seed)?;
    let report = DiagnoseReport {
        dataset: ds.summary(),
        trend_pvalue: trend,
        acf_lag1: acf[0],
        pacf_lag1: pacf[0],
        outliers,
        gof_n: gof_sample.len(),
        gof,
    };
    Ok(Output::ok(to_json(&report)?))
}
