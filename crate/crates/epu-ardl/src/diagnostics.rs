//! Residual diagnostics: Breusch-Godfrey serial-correlation LM test and
//! Engle's ARCH LM test.

use crate::dist::chi_square_cdf;
use crate::linalg::{ols, DesignMatrix, LinalgError, RegressionResult};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("lag order must be at least 1")]
    ZeroLags,
    #[error("sample too small for {test} with {lags} lags: {n} observations")]
    SampleTooSmall {
        test: &'static str,
        lags: usize,
        n: usize,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum LmTestKind {
    BreuschGodfrey,
    ArchLm,
}

impl LmTestKind {
    pub fn label(&self) -> &'static str {
        match self {
            LmTestKind::BreuschGodfrey => "Breusch-Godfrey",
            LmTestKind::ArchLm => "ARCH LM",
        }
    }
}

/// n * R-squared LM statistic with its chi-square p-value; `pass` holds
/// exactly when the p-value exceeds 5%.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LmTestResult {
    pub kind: LmTestKind,
    pub lags: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub pass: bool,
}

fn finish(kind: LmTestKind, lags: usize, statistic: f64, df: u32) -> LmTestResult {
    let statistic = statistic.max(0.0);
    let p_value = (1.0 - chi_square_cdf(statistic, df)).clamp(0.0, 1.0);
    LmTestResult {
        kind,
        lags,
        statistic,
        p_value,
        pass: p_value > 0.05,
    }
}

fn r_squared(residuals: &[f64], aux: &RegressionResult) -> f64 {
    let n = residuals.len() as f64;
    let mean = residuals.iter().sum::<f64>() / n;
    let tss: f64 = residuals.iter().map(|e| (e - mean) * (e - mean)).sum();
    if tss <= 0.0 {
        return 0.0;
    }
    (1.0 - aux.rss / tss).clamp(0.0, 1.0)
}

/// Breusch-Godfrey LM test for serial correlation up to order `lags`.
///
/// Auxiliary regression of the residuals on the original design plus
/// lagged residuals, with pre-sample lagged residuals set to zero so the
/// full sample is retained. Statistic n * R-squared, chi-square with
/// `lags` degrees of freedom.
pub fn breusch_godfrey(
    original: &RegressionResult,
    x: &DesignMatrix,
    lags: usize,
) -> Result<LmTestResult, DiagnosticsError> {
    if lags == 0 {
        return Err(DiagnosticsError::ZeroLags);
    }
    let n = original.residuals.len();
    let k = x.k();
    if n < k + lags + 5 {
        return Err(DiagnosticsError::SampleTooSmall {
            test: "Breusch-Godfrey",
            lags,
            n,
        });
    }

    let e = &original.residuals;
    let mut cols: Vec<(String, Vec<f64>)> = x
        .columns()
        .map(|(name, col)| (name.to_string(), col.to_vec()))
        .collect();
    for lag in 1..=lags {
        let lagged: Vec<f64> = (0..n)
            .map(|t| if t >= lag { e[t - lag] } else { 0.0 })
            .collect();
        cols.push((format!("resid_lag{lag}"), lagged));
    }
    let aux_x = DesignMatrix::from_columns(cols)?;
    let aux = ols(&aux_x, e)?;
    let statistic = n as f64 * r_squared(e, &aux);
    Ok(finish(
        LmTestKind::BreuschGodfrey,
        lags,
        statistic,
        lags as u32,
    ))
}

/// Engle's ARCH LM test: squared residuals regressed on their own lags,
/// sample truncated to t > lags. Statistic (n - lags) * R-squared.
pub fn arch_lm(residuals: &[f64], lags: usize) -> Result<LmTestResult, DiagnosticsError> {
    if lags == 0 {
        return Err(DiagnosticsError::ZeroLags);
    }
    let n = residuals.len();
    if n < lags + 10 {
        return Err(DiagnosticsError::SampleTooSmall {
            test: "ARCH LM",
            lags,
            n,
        });
    }

    let sq: Vec<f64> = residuals.iter().map(|e| e * e).collect();
    let rows = n - lags;
    let mut cols: Vec<(String, Vec<f64>)> = vec![("const".into(), vec![1.0; rows])];
    for lag in 1..=lags {
        cols.push((
            format!("sq_lag{lag}"),
            (lags..n).map(|t| sq[t - lag]).collect(),
        ));
    }
    let y: Vec<f64> = sq[lags..].to_vec();
    let aux_x = DesignMatrix::from_columns(cols)?;
    let aux = ols(&aux_x, &y)?;
    let statistic = rows as f64 * r_squared(&y, &aux);
    Ok(finish(LmTestKind::ArchLm, lags, statistic, lags as u32))
}
