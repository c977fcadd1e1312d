//! Dense least squares with full inference output.
//!
//! Coefficients are obtained from a Householder QR factorization of the
//! design matrix; the normal equations are never formed or inverted
//! directly. Classical OLS covariance, Gaussian log-likelihood, and AIC
//! are produced for every fit so estimators can rank candidate models.

use crate::dist;
use thiserror::Error;

/// Relative tolerance on the R diagonal below which a column is declared
/// collinear. Samples here are small (n <= 60) and well conditioned.
const RANK_TOL: f64 = 1e-10;

/// An RSS this small relative to the response is treated as an exact fit.
const EXACT_FIT_TOL: f64 = 1e-20;

const SIGMA2_FLOOR: f64 = 1e-300;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("design matrix columns must share one length (column `{name}` has {len}, expected {expected})")]
    DimensionMismatch {
        name: String,
        len: usize,
        expected: usize,
    },
    #[error("need more observations than regressors (n = {n}, k = {k})")]
    NotEnoughObservations { n: usize, k: usize },
    #[error("column `{name}` contains a non-finite value")]
    NonFinite { name: String },
    #[error("duplicate column name `{name}`")]
    DuplicateColumn { name: String },
    #[error("design matrix is rank deficient at column `{column}`")]
    RankDeficient { column: String },
    #[error("response length {got} does not match design rows {expected}")]
    ResponseLength { got: usize, expected: usize },
    #[error("column `{name}` not present in design")]
    MissingColumn { name: String },
    #[error("invalid restriction set: {0}")]
    InvalidRestriction(String),
    #[error("no candidate fits supplied")]
    EmptyCandidates,
    #[error("candidate fits were estimated on different sample sizes")]
    MixedSampleSizes,
}

/// Named regressor columns forming an n x k design, n > k >= 1.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    n: usize,
}

impl DesignMatrix {
    pub fn from_columns(
        pairs: impl IntoIterator<Item = (String, Vec<f64>)>,
    ) -> Result<Self, LinalgError> {
        let mut names = Vec::new();
        let mut columns = Vec::new();
        for (name, col) in pairs {
            if names.contains(&name) {
                return Err(LinalgError::DuplicateColumn { name });
            }
            if !col.iter().all(|v| v.is_finite()) {
                return Err(LinalgError::NonFinite { name });
            }
            names.push(name);
            columns.push(col);
        }
        let n = columns.first().map(|c| c.len()).unwrap_or(0);
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n {
                return Err(LinalgError::DimensionMismatch {
                    name: name.clone(),
                    len: col.len(),
                    expected: n,
                });
            }
        }
        let k = columns.len();
        if k == 0 || n <= k {
            return Err(LinalgError::NotEnoughObservations { n, k });
        }
        Ok(Self { names, columns, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.names
            .iter()
            .map(|s| s.as_str())
            .zip(self.columns.iter().map(|c| c.as_slice()))
    }

    /// Copy of the design with the named columns removed.
    pub fn without_columns(&self, drop: &[String]) -> Result<DesignMatrix, LinalgError> {
        for name in drop {
            if !self.names.contains(name) {
                return Err(LinalgError::MissingColumn { name: name.clone() });
            }
        }
        let pairs: Vec<(String, Vec<f64>)> = self
            .names
            .iter()
            .zip(&self.columns)
            .filter(|(name, _)| !drop.contains(name))
            .map(|(name, col)| (name.clone(), col.clone()))
            .collect();
        if pairs.is_empty() {
            return Err(LinalgError::InvalidRestriction(
                "cannot remove every column".into(),
            ));
        }
        DesignMatrix::from_columns(pairs)
    }
}

/// OLS estimates with inference statistics, residuals, and information
/// criteria.
#[derive(Debug, Clone)]
pub struct RegressionResult {
    pub column_names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub t_statistics: Vec<f64>,
    pub p_values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub rss: f64,
    pub sigma2: f64,
    pub log_likelihood: f64,
    pub aic: f64,
    pub nobs: usize,
    pub df_resid: usize,
    /// Classical OLS covariance sigma2 * (X'X)^{-1}.
    pub covariance: Vec<Vec<f64>>,
    /// Set when rss is numerically zero; standard errors and p-values are
    /// reported as 0 in that case.
    pub exact_fit: bool,
}

impl RegressionResult {
    fn index_of(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|n| n == name)
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.coefficients[i])
    }

    pub fn standard_error(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.standard_errors[i])
    }

    pub fn t_statistic(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.t_statistics[i])
    }

    pub fn p_value(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.p_values[i])
    }

    pub fn k(&self) -> usize {
        self.coefficients.len()
    }

    /// Covariance entry for a pair of named regressors.
    pub fn covariance_between(&self, a: &str, b: &str) -> Option<f64> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Some(self.covariance[i][j])
    }
}

/// Householder QR of the n x k design: returns the packed reflectors and
/// the upper-triangular R (k x k, row-major).
struct QrFactors {
    /// Working matrix after factorization: R in the upper triangle,
    /// reflector vectors below the diagonal.
    a: Vec<Vec<f64>>,
    /// Scalar beta of each reflector.
    betas: Vec<f64>,
    k: usize,
}

fn householder_qr(x: &DesignMatrix) -> QrFactors {
    let n = x.n();
    let k = x.k();
    let mut a: Vec<Vec<f64>> = x.columns.iter().cloned().collect();
    let mut betas = vec![0.0; k];

    for j in 0..k {
        // Householder vector for column j, rows j..n.
        let norm = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            betas[j] = 0.0;
            continue;
        }
        let alpha = if a[j][j] >= 0.0 { -norm } else { norm };
        let v0 = a[j][j] - alpha;
        let mut v = vec![0.0; n - j];
        v[0] = v0;
        v[1..].copy_from_slice(&a[j][j + 1..]);
        let vtv = v.iter().map(|t| t * t).sum::<f64>();
        let beta = if vtv == 0.0 { 0.0 } else { 2.0 / vtv };

        // Apply the reflector to the remaining columns.
        for col in a.iter_mut().skip(j) {
            let dot: f64 = v.iter().zip(&col[j..]).map(|(vi, ci)| vi * ci).sum();
            let scale = beta * dot;
            for (vi, ci) in v.iter().zip(col[j..].iter_mut()) {
                *ci -= scale * vi;
            }
        }
        // Store the reflector below the diagonal (v[0] folded into betas
        // by normalizing v so its first entry is 1).
        if v0 != 0.0 {
            let inv = 1.0 / v0;
            for (slot, vi) in a[j][j + 1..].iter_mut().zip(&v[1..]) {
                *slot = vi * inv;
            }
            betas[j] = beta * v0 * v0;
        } else {
            betas[j] = 0.0;
            for slot in a[j][j + 1..].iter_mut() {
                *slot = 0.0;
            }
        }
    }

    QrFactors { a, betas, k }
}

impl QrFactors {
    fn r_diag(&self, j: usize) -> f64 {
        self.a[j][j]
    }

    fn r(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i <= j);
        self.a[j][i]
    }

    /// Apply Q^T to a vector in place.
    fn apply_qt(&self, y: &mut [f64]) {
        for j in 0..self.k {
            let beta = self.betas[j];
            if beta == 0.0 {
                continue;
            }
            // v = (1, a[j][j+1..]) in rows j..n.
            let mut dot = y[j];
            for (i, vi) in self.a[j][j + 1..].iter().enumerate() {
                dot += vi * y[j + 1 + i];
            }
            let scale = beta * dot;
            y[j] -= scale;
            for (i, vi) in self.a[j][j + 1..].iter().enumerate() {
                y[j + 1 + i] -= scale * vi;
            }
        }
    }

    /// Solve R b = rhs (upper triangular back substitution).
    fn solve_r(&self, rhs: &[f64]) -> Vec<f64> {
        let k = self.k;
        let mut b = vec![0.0; k];
        for i in (0..k).rev() {
            let mut acc = rhs[i];
            for j in i + 1..k {
                acc -= self.r(i, j) * b[j];
            }
            b[i] = acc / self.r_diag(i);
        }
        b
    }

    /// (X'X)^{-1} = R^{-1} R^{-T}, built column-by-column from back
    /// substitution; R itself is never squared.
    fn xtx_inverse(&self) -> Vec<Vec<f64>> {
        let k = self.k;
        let mut rinv = vec![vec![0.0; k]; k];
        for col in 0..k {
            let mut e = vec![0.0; k];
            e[col] = 1.0;
            let sol = self.solve_r(&e);
            for row in 0..k {
                rinv[row][col] = sol[row];
            }
        }
        let mut out = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = 0.0;
                for (a, b) in rinv[i].iter().zip(&rinv[j]) {
                    acc += a * b;
                }
                out[i][j] = acc;
            }
        }
        out
    }
}

/// Ordinary least squares of `y` on the columns of `x`.
pub fn ols(x: &DesignMatrix, y: &[f64]) -> Result<RegressionResult, LinalgError> {
    let n = x.n();
    let k = x.k();
    if y.len() != n {
        return Err(LinalgError::ResponseLength {
            got: y.len(),
            expected: n,
        });
    }
    if !y.iter().all(|v| v.is_finite()) {
        return Err(LinalgError::NonFinite { name: "y".into() });
    }

    let qr = householder_qr(x);

    let max_diag = (0..k).map(|j| qr.r_diag(j).abs()).fold(0.0, f64::max);
    if let Some(bad) = (0..k).find(|&j| qr.r_diag(j).abs() <= RANK_TOL * max_diag) {
        return Err(LinalgError::RankDeficient {
            column: x.names[bad].clone(),
        });
    }

    let mut qty = y.to_vec();
    qr.apply_qt(&mut qty);
    let coefficients = qr.solve_r(&qty[..k]);

    let mut fitted = vec![0.0; n];
    for (col, beta) in x.columns.iter().zip(&coefficients) {
        for (f, v) in fitted.iter_mut().zip(col) {
            *f += beta * v;
        }
    }
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(yi, fi)| yi - fi).collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();

    let y_scale: f64 = y.iter().map(|v| v * v).sum::<f64>().max(1.0);
    let exact_fit = rss <= EXACT_FIT_TOL * y_scale;

    let df_resid = n - k;
    let sigma2 = if exact_fit {
        SIGMA2_FLOOR
    } else {
        rss / df_resid as f64
    };

    let xtx_inv = qr.xtx_inverse();
    let covariance: Vec<Vec<f64>> = xtx_inv
        .iter()
        .map(|row| row.iter().map(|v| v * sigma2).collect())
        .collect();

    let (standard_errors, t_statistics, p_values) = if exact_fit {
        (vec![0.0; k], vec![0.0; k], vec![0.0; k])
    } else {
        let se: Vec<f64> = (0..k).map(|j| covariance[j][j].max(0.0).sqrt()).collect();
        let t: Vec<f64> = coefficients
            .iter()
            .zip(&se)
            .map(|(b, s)| if *s > 0.0 { b / s } else { 0.0 })
            .collect();
        let p: Vec<f64> = t
            .iter()
            .map(|&t| dist::t_two_sided_p(t, df_resid as f64))
            .collect();
        (se, t, p)
    };

    let nf = n as f64;
    let log_likelihood =
        -0.5 * nf * ((2.0 * std::f64::consts::PI).ln() + (rss.max(SIGMA2_FLOOR) / nf).ln() + 1.0);
    let aic = 2.0 * k as f64 - 2.0 * log_likelihood;

    Ok(RegressionResult {
        column_names: x.names.clone(),
        coefficients,
        standard_errors,
        t_statistics,
        p_values,
        residuals,
        fitted,
        rss,
        sigma2,
        log_likelihood,
        aic,
        nobs: n,
        df_resid,
        covariance,
        exact_fit,
    })
}

/// Wald F test that the coefficients on `restricted_columns` are jointly
/// zero, computed by re-estimating without those columns.
///
/// Returns (F, df1, df2).
pub fn wald_f(
    unrestricted: &RegressionResult,
    x: &DesignMatrix,
    y: &[f64],
    restricted_columns: &[String],
) -> Result<(f64, usize, usize), LinalgError> {
    if restricted_columns.is_empty() {
        return Err(LinalgError::InvalidRestriction(
            "restriction set is empty".into(),
        ));
    }
    if restricted_columns.len() >= x.k() {
        return Err(LinalgError::InvalidRestriction(
            "cannot restrict every column".into(),
        ));
    }
    let restricted_design = x.without_columns(restricted_columns)?;
    let restricted = ols(&restricted_design, y)?;

    let q = restricted_columns.len();
    let df2 = unrestricted.df_resid;
    let rss_u = unrestricted.rss;
    let rss_r = restricted.rss;
    let denom = rss_u.max(SIGMA2_FLOOR) / df2 as f64;
    let f = ((rss_r - rss_u).max(0.0) / q as f64) / denom;
    Ok((f, q, df2))
}

/// Index of the candidate with the smallest AIC. All candidates must be
/// estimated on the same number of observations; ties go to the fit with
/// fewer parameters, then to the earlier index.
pub fn aic_compare(results: &[RegressionResult]) -> Result<usize, LinalgError> {
    if results.is_empty() {
        return Err(LinalgError::EmptyCandidates);
    }
    let nobs = results[0].nobs;
    if results.iter().any(|r| r.nobs != nobs) {
        return Err(LinalgError::MixedSampleSizes);
    }
    let mut best = 0usize;
    for (i, cand) in results.iter().enumerate().skip(1) {
        let incumbent = &results[best];
        let tol = 1e-9 * incumbent.aic.abs().max(1.0);
        if cand.aic < incumbent.aic - tol {
            best = i;
        } else if (cand.aic - incumbent.aic).abs() <= tol && cand.k() < incumbent.k() {
            best = i;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{BigRational, FromPrimitive, Signed};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn design(cols: &[(&str, Vec<f64>)]) -> DesignMatrix {
        DesignMatrix::from_columns(
            cols.iter()
                .map(|(name, col)| (name.to_string(), col.clone())),
        )
        .unwrap()
    }

    /// Exact normal-equations solve in rational arithmetic. Completely
    /// independent of the QR path: forms X'X and X'y as BigRationals and
    /// runs Gaussian elimination without rounding.
    fn rational_normal_equations(x: &DesignMatrix, y: &[f64]) -> Vec<f64> {
        let k = x.k();
        let cols: Vec<Vec<BigRational>> = x
            .columns()
            .map(|(_, col)| {
                col.iter()
                    .map(|&v| BigRational::from_f64(v).unwrap())
                    .collect()
            })
            .collect();
        let yr: Vec<BigRational> = y
            .iter()
            .map(|&v| BigRational::from_f64(v).unwrap())
            .collect();

        let mut a = vec![vec![BigRational::from_integer(0.into()); k + 1]; k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = BigRational::from_integer(0.into());
                for t in 0..yr.len() {
                    acc += &cols[i][t] * &cols[j][t];
                }
                a[i][j] = acc;
            }
            let mut acc = BigRational::from_integer(0.into());
            for t in 0..yr.len() {
                acc += &cols[i][t] * &yr[t];
            }
            a[i][k] = acc;
        }

        // Gaussian elimination with partial pivoting (exact arithmetic).
        for col in 0..k {
            let pivot = (col..k)
                .max_by(|&i, &j| {
                    a[i][col]
                        .clone()
                        .abs()
                        .partial_cmp(&a[j][col].clone().abs())
                        .unwrap()
                })
                .unwrap();
            a.swap(col, pivot);
            let pivot_val = a[col][col].clone();
            for row in 0..k {
                if row == col {
                    continue;
                }
                let factor = &a[row][col] / &pivot_val;
                for idx in col..=k {
                    let sub = &factor * &a[col][idx];
                    a[row][idx] -= sub;
                }
            }
        }
        (0..k)
            .map(|i| {
                let v = &a[i][k] / &a[i][i];
                rational_to_f64(&v)
            })
            .collect()
    }

    fn rational_to_f64(v: &BigRational) -> f64 {
        use num::ToPrimitive;
        let numer = v.numer();
        let denom = v.denom();
        // Scale down to keep within f64 range before converting.
        let bits = numer.bits().max(denom.bits());
        if bits > 900 {
            let shift = (bits - 900) as u64;
            let n = numer >> shift;
            let d = denom >> shift;
            n.to_f64().unwrap() / d.to_f64().unwrap()
        } else {
            numer.to_f64().unwrap() / denom.to_f64().unwrap()
        }
    }

    #[test]
    fn exact_fit_degenerates_gracefully() {
        let x = design(&[("x", vec![1.0, 2.0, 3.0, 4.0])]);
        let y = vec![2.0, 4.0, 6.0, 8.0];
        let fit = ols(&x, &y).unwrap();
        assert!(fit.exact_fit);
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
        assert!(fit.rss < 1e-18);
        assert_eq!(fit.standard_errors, vec![0.0]);
        assert_eq!(fit.p_values, vec![0.0]);
    }

    #[test]
    fn intercept_only_projects_onto_mean() {
        let y = vec![3.0, 5.0, 10.0, 2.0];
        let x = design(&[("const", vec![1.0; 4])]);
        let fit = ols(&x, &y).unwrap();
        let mean = 5.0;
        assert!((fit.coefficients[0] - mean).abs() < 1e-12);
        let tss: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
        assert!((fit.rss - tss).abs() < 1e-10);
    }

    #[test]
    fn matches_rational_normal_equations_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let n = 12;
        let cols: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..n).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let x = design(&[
            ("a", cols[0].clone()),
            ("b", cols[1].clone()),
            ("c", cols[2].clone()),
        ]);
        let fit = ols(&x, &y).unwrap();
        let oracle = rational_normal_equations(&x, &y);
        for (got, want) in fit.coefficients.iter().zip(&oracle) {
            assert!(
                (got - want).abs() < 1e-8,
                "QR {got} vs rational oracle {want}"
            );
        }
    }

    #[test]
    fn rank_deficient_column_is_named() {
        let x = design(&[
            ("const", vec![1.0, 1.0, 1.0, 1.0]),
            ("dup", vec![2.0, 2.0, 2.0, 2.0]),
        ]);
        match ols(&x, &[1.0, 2.0, 3.0, 4.0]) {
            Err(LinalgError::RankDeficient { column }) => assert_eq!(column, "dup"),
            other => panic!("expected RankDeficient, got {other:?}"),
        }
    }

    #[test]
    fn wald_f_detects_relevant_column() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 200;
        let x1: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x2: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let noise: Vec<f64> = (0..n).map(|_| rng.random_range(-0.05..0.05)).collect();
        let y: Vec<f64> = (0..n).map(|i| 3.0 * x1[i] + noise[i]).collect();
        let x = design(&[
            ("const", vec![1.0; n]),
            ("x1", x1.clone()),
            ("x2", x2.clone()),
        ]);
        let fit = ols(&x, &y).unwrap();

        let (f_relevant, _, _) = wald_f(&fit, &x, &y, &["x1".into()]).unwrap();
        assert!(f_relevant > 100.0, "F on generator column: {f_relevant}");

        let (f_irrelevant, df1, df2) = wald_f(&fit, &x, &y, &["x2".into()]).unwrap();
        assert!(f_irrelevant < 3.9, "F on noise column: {f_irrelevant}");
        assert_eq!(df1, 1);
        assert_eq!(df2, n - 3);
    }

    #[test]
    fn wald_f_invariant_to_response_scale() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 40;
        let x1: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = x1
            .iter()
            .map(|v| 1.0 + 0.5 * v + rng.random_range(-0.3..0.3))
            .collect();
        let x = design(&[("const", vec![1.0; n]), ("x1", x1)]);
        let fit = ols(&x, &y).unwrap();
        let (f1, _, _) = wald_f(&fit, &x, &y, &["x1".into()]).unwrap();

        let y10: Vec<f64> = y.iter().map(|v| 10.0 * v).collect();
        let fit10 = ols(&x, &y10).unwrap();
        let (f2, _, _) = wald_f(&fit10, &x, &y10, &["x1".into()]).unwrap();
        assert!((f1 - f2).abs() < 1e-10 * f1.max(1.0));
    }

    #[test]
    fn aic_compare_prefers_parsimonious_nested_fit() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let n = 60;
        let x1: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let junk: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = x1
            .iter()
            .map(|v| 2.0 * v + rng.random_range(-0.5..0.5))
            .collect();
        let small = ols(&design(&[("const", vec![1.0; n]), ("x1", x1.clone())]), &y).unwrap();
        let big = ols(
            &design(&[("const", vec![1.0; n]), ("x1", x1), ("junk", junk)]),
            &y,
        )
        .unwrap();
        assert_eq!(aic_compare(&[small, big]).unwrap(), 0);
    }

    #[test]
    fn aic_compare_single_and_mixed() {
        let y = vec![1.0, 2.0, 3.0, 4.0, 7.0];
        let fit = ols(&design(&[("const", vec![1.0; 5])]), &y).unwrap();
        assert_eq!(aic_compare(std::slice::from_ref(&fit)).unwrap(), 0);

        let y4 = vec![1.0, 2.0, 3.0, 4.0];
        let fit4 = ols(&design(&[("const", vec![1.0; 4])]), &y4).unwrap();
        assert!(matches!(
            aic_compare(&[fit, fit4]),
            Err(LinalgError::MixedSampleSizes)
        ));
    }

    proptest! {
        #[test]
        fn residuals_orthogonal_to_design(seed in 0u64..500) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(8..30);
            let k = rng.random_range(1..=4.min(n - 2));
            let cols: Vec<(String, Vec<f64>)> = (0..k)
                .map(|j| {
                    let col = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
                    (format!("c{j}"), col)
                })
                .collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let x = DesignMatrix::from_columns(cols).unwrap();
            let fit = ols(&x, &y).unwrap();
            let e_norm = fit.residuals.iter().map(|e| e * e).sum::<f64>().sqrt();
            for (name, col) in x.columns() {
                let dot: f64 = col.iter().zip(&fit.residuals).map(|(a, b)| a * b).sum();
                let col_norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
                prop_assert!(
                    dot.abs() <= 1e-7 * col_norm * e_norm.max(1e-30),
                    "column {name}: X'e = {dot}"
                );
            }
        }

        #[test]
        fn adding_columns_never_raises_rss(seed in 0u64..300) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_mul(977));
            let n = rng.random_range(10..28);
            let base: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let extra: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let small = ols(
                &design(&[("const", vec![1.0; n]), ("x", base.clone())]),
                &y,
            )
            .unwrap();
            let big = ols(
                &design(&[("const", vec![1.0; n]), ("x", base), ("z", extra)]),
                &y,
            )
            .unwrap();
            prop_assert!(big.rss <= small.rss + 1e-9);
        }

        #[test]
        fn rescaling_regressor_rescales_coefficient(seed in 0u64..300) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31));
            let n = 20;
            let x1: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let c = 7.5;
            let scaled: Vec<f64> = x1.iter().map(|v| v * c).collect();
            let base = ols(&design(&[("const", vec![1.0; n]), ("x", x1)]), &y).unwrap();
            let resc = ols(&design(&[("const", vec![1.0; n]), ("x", scaled)]), &y).unwrap();
            prop_assert!((resc.coefficients[1] - base.coefficients[1] / c).abs() < 1e-9);
            prop_assert!((resc.rss - base.rss).abs() <= 1e-9 * base.rss.max(1.0));
            for (a, b) in base.fitted.iter().zip(&resc.fitted) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn t_statistics_invariant_to_response_scale(seed in 0u64..200) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_mul(131));
            let n = 18;
            let x1: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let y_scaled: Vec<f64> = y.iter().map(|v| v * 250.0).collect();
            let x = design(&[("const", vec![1.0; n]), ("x", x1)]);
            let a = ols(&x, &y).unwrap();
            let b = ols(&x, &y_scaled).unwrap();
            for (ta, tb) in a.t_statistics.iter().zip(&b.t_statistics) {
                prop_assert!((ta - tb).abs() <= 1e-9 * ta.abs().max(1.0));
            }
        }
    }
}
