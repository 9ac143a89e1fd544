//! Normality check, one-way ANOVA and Mann-Whitney U, with the special
//! functions their p-values need.

mod anova;
mod mann_whitney;
mod shapiro;
pub mod special;

use serde::{Deserialize, Serialize};

pub use anova::anova_oneway;
pub use mann_whitney::{mann_whitney, u_statistics, EXACT_ENUMERATION_LIMIT};
pub use shapiro::{shapiro_wilk, shapiro_wilk_coefficients};
pub use special::regularized_incomplete_beta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistic {
    W,
    F,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PMethod {
    Exact,
    Approximate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: Statistic,
    pub value: f64,
    pub df: Option<(f64, f64)>,
    pub p_value: Option<f64>,
    pub method: PMethod,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("sample size {n} outside supported range {min}..={max}")]
    SampleSize { n: usize, min: usize, max: usize },
    #[error("sample has zero variance")]
    ZeroVariance,
    #[error("zero within-group variance with nonzero between-group variance")]
    Degenerate,
    #[error("need at least {0} groups")]
    TooFewGroups(usize),
    #[error("empty sample")]
    EmptySample,
    #[error("non-finite observation")]
    NonFinite,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

fn check_finite(xs: &[f64]) -> Result<(), StatsError> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator); `None` below two values.
pub fn sample_sd(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m).powi(2)).sum();
    Some((ss / (xs.len() - 1) as f64).sqrt())
}
