pub mod asymptotics;
pub mod error;
pub mod diagnostics;
pub mod estimators;
pub mod gedist;
pub mod mdpde;
pub mod optimize;
pub mod quadrature;
pub mod sample;
pub mod simharness;
pub mod specfun;

pub use asymptotics::{are, influence_function, j_matrix, sandwich_sigma, xi_vector, AsympCov, InfluenceCurve};
pub use error::{GeError, Result};
pub use estimators::{fit_lm, fit_ls, fit_ml, fit_mm, fit_pt, fit_wls, Estimator, FitResult, Method};
pub use gedist::{ge_cdf, ge_moments, ge_pdf, ge_quantile, ge_sample, GeParams, MomentSummary};
pub use mdpde::{
    estimating_equations, fit_mdpde, h_objective, score_vector, select_alpha_cvm, v_alpha, CvmCurve, DpdConfig,
};
pub use optimize::OptimResult;
pub use sample::Sample;
pub use diagnostics::{
    acf_pacf, flag_outliers_adjusted_boxplot, ks_bootstrap_test, ks_statistic, trend_pvalue, GofReport, OutlierReport,
};
pub use simharness::{
    make_outlier_value, run_contamination_grid, run_contamination_study, ContaminationSpec, SimMethod, SimTable,
};
