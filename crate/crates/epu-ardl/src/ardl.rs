//! ARDL bounds-testing pipeline in the two-step reading of the
//! error-correction specification.
//!
//! Step one estimates the unrestricted error-correction model (UECM): the
//! differenced dependent variable on an intercept, lagged dependent level,
//! regressor levels, and short-run difference terms, with lag orders
//! chosen by AIC on a common sample. The bounds F statistic restricts all
//! level terms jointly (intercept unrestricted). Long-run coefficients are
//! the negated ratios of level coefficients to the dependent-level
//! coefficient, with delta-method standard errors. Step two rebuilds the
//! equation around the lagged error-correction term: the differenced
//! dependent variable on an intercept, ECT(t-1), and the selected
//! short-run differences. Including both the levels and the ECT in one
//! equation would be perfectly collinear, which is why the printed
//! single-equation form is estimated in two steps.

use crate::diagnostics::{arch_lm, breusch_godfrey, DiagnosticsError, LmTestResult};
use crate::dist::{
    bounds_critical_values, BoundsCriticalValues, DistError, Significance, SignificanceLevel,
};
use crate::linalg::{aic_compare, ols, wald_f, DesignMatrix, LinalgError, RegressionResult};
use crate::series::Panel;
use chrono::NaiveDate;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArdlError {
    #[error("panel has no column `{name}`")]
    MissingColumn { name: String },
    #[error("effective sample of {available} observations cannot support {needed} parameters")]
    SampleTooSmall { needed: usize, available: usize },
    #[error("dependent-level coefficient is numerically zero; long-run ratios undefined")]
    DegenerateAdjustment,
    #[error("max_p must be at least 1")]
    InvalidLagBounds,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
}

/// A regressor in the ARDL equation and how it enters.
#[derive(Debug, Clone)]
pub struct ArdlRegressor {
    pub name: String,
    /// Level term at time t (true) or t-1 (false).
    pub level_at_t: bool,
    /// Include the contemporaneous difference alongside lagged ones.
    pub contemporaneous_diff: bool,
}

/// Model shape and lag-search bounds.
#[derive(Debug, Clone)]
pub struct ArdlSpec {
    pub dependent: String,
    pub regressors: Vec<ArdlRegressor>,
    pub max_p: usize,
    pub max_q: usize,
}

impl ArdlSpec {
    /// The replication shape: EPU explained by a COVID indicator entering
    /// at the aligned report date and the oil price entering lagged.
    pub fn replication_default() -> Self {
        ArdlSpec {
            dependent: "EPU".into(),
            regressors: vec![
                ArdlRegressor {
                    name: "COVID".into(),
                    level_at_t: true,
                    contemporaneous_diff: true,
                },
                ArdlRegressor {
                    name: "OIL".into(),
                    level_at_t: false,
                    contemporaneous_diff: true,
                },
            ],
            max_p: 4,
            max_q: 4,
        }
    }

    fn level_column(&self, r: &ArdlRegressor) -> String {
        if r.level_at_t {
            format!("{}_level", r.name)
        } else {
            format!("{}_lag1", r.name)
        }
    }

    fn diff_lag_range(&self, r: &ArdlRegressor, q: usize) -> std::ops::RangeInclusive<usize> {
        if r.contemporaneous_diff {
            0..=q
        } else {
            1..=q // empty when q = 0
        }
    }

    fn max_diff_index(&self, r: &ArdlRegressor, q: usize) -> usize {
        if r.contemporaneous_diff || q >= 1 {
            q
        } else {
            0
        }
    }
}

/// Coefficient with classical inference.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CoefEstimate {
    pub coefficient: f64,
    pub standard_error: f64,
    pub t_statistic: f64,
    pub p_value: f64,
    pub significance: Significance,
}

impl CoefEstimate {
    fn from_fit(fit: &RegressionResult, name: &str) -> Self {
        let coefficient = fit.coefficient(name).expect("column present");
        let standard_error = fit.standard_error(name).expect("column present");
        let t_statistic = fit.t_statistic(name).expect("column present");
        let p_value = fit.p_value(name).expect("column present");
        CoefEstimate {
            coefficient,
            standard_error,
            t_statistic,
            p_value,
            significance: Significance::from_p_value(p_value),
        }
    }
}

/// Fitted unrestricted error-correction model.
#[derive(Debug, Clone)]
pub struct UecmFit {
    pub spec: ArdlSpec,
    pub regression: RegressionResult,
    pub design: DesignMatrix,
    pub response: Vec<f64>,
    /// Lagged dependent level plus one level column per regressor.
    pub level_terms: Vec<String>,
    pub p: usize,
    pub qs: Vec<usize>,
    /// First panel row used by the regression.
    pub start: usize,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
}

fn panel_column<'p>(panel: &'p Panel, name: &str) -> Result<&'p [f64], ArdlError> {
    panel.column(name).ok_or_else(|| ArdlError::MissingColumn {
        name: name.to_string(),
    })
}

fn build_uecm_design(
    panel: &Panel,
    spec: &ArdlSpec,
    p: usize,
    qs: &[usize],
    start: usize,
) -> Result<(DesignMatrix, Vec<f64>), ArdlError> {
    let dep = panel_column(panel, &spec.dependent)?;
    let m = panel.len();
    let rows = m - start;

    let mut cols: Vec<(String, Vec<f64>)> = Vec::new();
    cols.push(("const".into(), vec![1.0; rows]));
    cols.push((
        format!("{}_lag1", spec.dependent),
        (start..m).map(|t| dep[t - 1]).collect(),
    ));
    for r in &spec.regressors {
        let x = panel_column(panel, &r.name)?;
        let col: Vec<f64> = if r.level_at_t {
            (start..m).map(|t| x[t]).collect()
        } else {
            (start..m).map(|t| x[t - 1]).collect()
        };
        cols.push((spec.level_column(r), col));
    }
    for i in 1..=p {
        cols.push((
            format!("d{}_lag{i}", spec.dependent),
            (start..m).map(|t| dep[t - i] - dep[t - i - 1]).collect(),
        ));
    }
    for (r, &q) in spec.regressors.iter().zip(qs) {
        let x = panel_column(panel, &r.name)?;
        for i in spec.diff_lag_range(r, q) {
            cols.push((
                format!("d{}_lag{i}", r.name),
                (start..m).map(|t| x[t - i] - x[t - i - 1]).collect(),
            ));
        }
    }

    let response: Vec<f64> = (start..m).map(|t| dep[t] - dep[t - 1]).collect();
    let design = DesignMatrix::from_columns(cols)?;
    Ok((design, response))
}

fn level_term_names(spec: &ArdlSpec) -> Vec<String> {
    let mut names = vec![format!("{}_lag1", spec.dependent)];
    names.extend(spec.regressors.iter().map(|r| spec.level_column(r)));
    names
}

/// Fit the UECM at a fixed lag order on its maximal sample.
pub fn fit_uecm_at(
    panel: &Panel,
    spec: &ArdlSpec,
    p: usize,
    qs: &[usize],
) -> Result<UecmFit, ArdlError> {
    assert_eq!(qs.len(), spec.regressors.len());
    let max_diff = spec
        .regressors
        .iter()
        .zip(qs)
        .map(|(r, &q)| spec.max_diff_index(r, q))
        .max()
        .unwrap_or(0);
    let start = 1 + p.max(max_diff);
    let m = panel.len();
    if m <= start {
        return Err(ArdlError::SampleTooSmall {
            needed: start + 1,
            available: m,
        });
    }
    let (design, response) = build_uecm_design(panel, spec, p, qs, start)?;
    if design.n() <= design.k() {
        return Err(ArdlError::SampleTooSmall {
            needed: design.k() + 1,
            available: design.n(),
        });
    }
    let regression = ols(&design, &response)?;
    Ok(UecmFit {
        spec: spec.clone(),
        level_terms: level_term_names(spec),
        p,
        qs: qs.to_vec(),
        start,
        start_date: panel.dates()[start],
        end_date: panel.dates()[m - 1],
        regression,
        design,
        response,
    })
}

/// Grid-search lag orders by AIC on the common sample implied by the
/// bounds, then refit the winner on its maximal sample.
///
/// Candidates are enumerated in canonical order (p outermost, then each
/// regressor's q in declaration order), with ties resolved toward fewer
/// parameters and earlier candidates, so the result is deterministic.
pub fn select_and_fit_uecm(panel: &Panel, spec: &ArdlSpec) -> Result<UecmFit, ArdlError> {
    if spec.max_p < 1 {
        return Err(ArdlError::InvalidLagBounds);
    }
    let m = panel.len();
    let start_common = 1 + spec.max_p.max(spec.max_q);
    let max_params: usize = 2
        + spec.regressors.len()
        + spec.max_p
        + spec
            .regressors
            .iter()
            .map(|r| spec.max_q + usize::from(r.contemporaneous_diff))
            .sum::<usize>();
    if m < start_common + max_params + 5 {
        return Err(ArdlError::SampleTooSmall {
            needed: start_common + max_params + 5,
            available: m,
        });
    }

    let mut combos: Vec<(usize, Vec<usize>)> = Vec::new();
    let r = spec.regressors.len();
    let q_radix = spec.max_q + 1;
    for p in 1..=spec.max_p {
        let mut counter = vec![0usize; r];
        loop {
            combos.push((p, counter.clone()));
            // Increment the last regressor's q fastest.
            let mut idx = r;
            loop {
                if idx == 0 {
                    break;
                }
                idx -= 1;
                counter[idx] += 1;
                if counter[idx] < q_radix {
                    break;
                }
                counter[idx] = 0;
                if idx == 0 {
                    break;
                }
            }
            if counter.iter().all(|&q| q == 0) {
                break;
            }
        }
    }

    let mut fits = Vec::with_capacity(combos.len());
    for (p, qs) in &combos {
        let (design, response) = build_uecm_design(panel, spec, *p, qs, start_common)?;
        fits.push(ols(&design, &response)?);
    }
    let best = aic_compare(&fits)?;
    let (p, qs) = combos[best].clone();
    fit_uecm_at(panel, spec, p, &qs)
}

/// Bounds-test decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CointDecision {
    Cointegration,
    NoCointegration,
    Inconclusive,
}

/// Bounds F test outcome against the tabulated I(0)/I(1) bounds.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct BoundsResult {
    pub f_statistic: f64,
    pub k: usize,
    pub critical: BoundsCriticalValues,
    pub decision: CointDecision,
}

/// Step-function classifier: above the upper bound is cointegration,
/// below the lower bound is no cointegration, between is inconclusive.
pub fn classify_bounds(f: f64, critical: &BoundsCriticalValues) -> CointDecision {
    if f > critical.upper_i1 {
        CointDecision::Cointegration
    } else if f < critical.lower_i0 {
        CointDecision::NoCointegration
    } else {
        CointDecision::Inconclusive
    }
}

/// Joint F test on every level term (intercept unrestricted), compared
/// with the 5% bounds for k level regressors.
pub fn bounds_test(fit: &UecmFit) -> Result<BoundsResult, ArdlError> {
    let (f_statistic, _, _) = wald_f(
        &fit.regression,
        &fit.design,
        &fit.response,
        &fit.level_terms,
    )?;
    let k = fit.level_terms.len() - 1;
    let critical = bounds_critical_values(k, SignificanceLevel::Five)?;
    Ok(BoundsResult {
        f_statistic,
        k,
        critical,
        decision: classify_bounds(f_statistic, &critical),
    })
}

/// Long-run coefficients and constant recovered from UECM level terms.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LongRunEstimates {
    pub constant: CoefEstimate,
    /// One entry per regressor, in declaration order.
    pub terms: Vec<(String, CoefEstimate)>,
}

/// theta = -delta_x / delta_dep.
fn long_run_point(delta_x: f64, delta_dep: f64) -> f64 {
    -delta_x / delta_dep
}

/// Delta-method variance of theta = -dx/dd given the (dx, dd) covariance
/// block.
fn long_run_variance(dx: f64, dd: f64, var_x: f64, var_d: f64, cov: f64) -> f64 {
    let g_x = -1.0 / dd;
    let g_d = dx / (dd * dd);
    (g_x * g_x * var_x + g_d * g_d * var_d + 2.0 * g_x * g_d * cov).max(0.0)
}

/// Recover long-run coefficients from the UECM with delta-method standard
/// errors.
pub fn long_run_coefficients(fit: &UecmFit) -> Result<LongRunEstimates, ArdlError> {
    let reg = &fit.regression;
    let dep_col = format!("{}_lag1", fit.spec.dependent);
    let delta_dep = reg.coefficient(&dep_col).expect("dependent level present");
    if delta_dep.abs() <= 1e-8 {
        return Err(ArdlError::DegenerateAdjustment);
    }
    let df = reg.df_resid as f64;
    let var_dep = reg
        .covariance_between(&dep_col, &dep_col)
        .expect("covariance entry");

    let estimate = |col: &str| -> CoefEstimate {
        let dx = reg.coefficient(col).expect("level column present");
        let var_x = reg.covariance_between(col, col).expect("covariance entry");
        let cov = reg
            .covariance_between(col, &dep_col)
            .expect("covariance entry");
        let theta = long_run_point(dx, delta_dep);
        let se = long_run_variance(dx, delta_dep, var_x, var_dep, cov).sqrt();
        let t = if se > 0.0 { theta / se } else { 0.0 };
        let p = crate::dist::t_two_sided_p(t, df);
        CoefEstimate {
            coefficient: theta,
            standard_error: se,
            t_statistic: t,
            p_value: p,
            significance: Significance::from_p_value(p),
        }
    };

    let constant = estimate("const");
    let terms = fit
        .spec
        .regressors
        .iter()
        .map(|r| (r.name.clone(), estimate(&fit.spec.level_column(r))))
        .collect();
    Ok(LongRunEstimates { constant, terms })
}

/// Full two-step fit: bounds test, long-run coefficients, conditional ECM,
/// and residual diagnostics.
#[derive(Debug, Clone)]
pub struct ArdlFit {
    pub uecm: UecmFit,
    pub bounds: BoundsResult,
    pub long_run: LongRunEstimates,
    /// ECM short-run terms (intercept and selected differences).
    pub short_run: Vec<(String, CoefEstimate)>,
    pub ect: CoefEstimate,
    pub ecm_regression: RegressionResult,
    pub ecm_design: DesignMatrix,
    /// Headline diagnostics: Breusch-Godfrey then ARCH LM.
    pub diagnostics: Vec<LmTestResult>,
    /// Quality flag: a cointegration decision should come with a negative
    /// adjustment speed.
    pub ect_negative_when_cointegrated: bool,
    /// Two-step vs one-step agreement: |ECT coefficient - delta_dep|.
    pub ect_delta_gap: f64,
}

/// Estimate the conditional ECM around the long-run relation and assemble
/// the full fit.
pub fn fit_ecm(
    panel: &Panel,
    uecm: &UecmFit,
    long_run: &LongRunEstimates,
    bg_lags: usize,
    arch_lags: usize,
) -> Result<ArdlFit, ArdlError> {
    let spec = &uecm.spec;
    let dep = panel_column(panel, &spec.dependent)?;
    let m = panel.len();

    // Deviation from the long-run relation at each date.
    let mut ect = vec![0.0; m];
    for (t, e) in ect.iter_mut().enumerate() {
        let mut eq = long_run.constant.coefficient;
        for (r, (_, term)) in spec.regressors.iter().zip(&long_run.terms) {
            let x = panel_column(panel, &r.name)?;
            eq += term.coefficient * x[t];
        }
        *e = dep[t] - eq;
    }

    let start = uecm.start;
    let rows = m - start;
    let mut cols: Vec<(String, Vec<f64>)> = Vec::new();
    cols.push(("const".into(), vec![1.0; rows]));
    cols.push((
        "ECT_lag1".into(),
        (start..m).map(|t| ect[t - 1]).collect(),
    ));
    for i in 1..=uecm.p {
        cols.push((
            format!("d{}_lag{i}", spec.dependent),
            (start..m).map(|t| dep[t - i] - dep[t - i - 1]).collect(),
        ));
    }
    for (r, &q) in spec.regressors.iter().zip(&uecm.qs) {
        let x = panel_column(panel, &r.name)?;
        for i in spec.diff_lag_range(r, q) {
            cols.push((
                format!("d{}_lag{i}", r.name),
                (start..m).map(|t| x[t - i] - x[t - i - 1]).collect(),
            ));
        }
    }
    let response: Vec<f64> = (start..m).map(|t| dep[t] - dep[t - 1]).collect();
    let ecm_design = DesignMatrix::from_columns(cols)?;
    let ecm_regression = ols(&ecm_design, &response)?;

    let bg = breusch_godfrey(&ecm_regression, &ecm_design, bg_lags)?;
    let arch = arch_lm(&ecm_regression.residuals, arch_lags)?;

    let bounds = bounds_test(uecm)?;
    let ect_est = CoefEstimate::from_fit(&ecm_regression, "ECT_lag1");
    let short_run: Vec<(String, CoefEstimate)> = ecm_design
        .column_names()
        .iter()
        .filter(|name| name.as_str() != "ECT_lag1")
        .map(|name| (name.clone(), CoefEstimate::from_fit(&ecm_regression, name)))
        .collect();

    let delta_dep = uecm
        .regression
        .coefficient(&format!("{}_lag1", spec.dependent))
        .expect("dependent level present");

    Ok(ArdlFit {
        uecm: uecm.clone(),
        bounds,
        long_run: long_run.clone(),
        short_run,
        ect: ect_est,
        ecm_regression,
        ecm_design,
        diagnostics: vec![bg, arch],
        ect_negative_when_cointegrated: !(bounds.decision == CointDecision::Cointegration
            && ect_est.coefficient >= 0.0),
        ect_delta_gap: (ect_est.coefficient - delta_dep).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn make_panel(cols: Vec<(&str, Vec<f64>)>) -> Panel {
        let n = cols[0].1.len();
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let dates = (0..n)
            .map(|i| start + chrono::Duration::days(i as i64))
            .collect();
        Panel::from_columns(
            dates,
            cols.into_iter()
                .map(|(name, col)| (name.to_string(), col))
                .collect(),
        )
        .unwrap()
    }

    /// DGP matching the fitted ECM exactly: adjustment speed -0.5 toward
    /// the relation dep = 1 + 0.5 x1 - 2 x2 with random-walk regressors.
    fn cointegrated_panel(rng: &mut ChaCha8Rng, n: usize, noise: f64) -> Panel {
        let mut x1 = vec![0.0; n];
        let mut x2 = vec![0.0; n];
        let mut dep = vec![1.0; n];
        for t in 1..n {
            let e1: f64 = StandardNormal.sample(rng);
            let e2: f64 = StandardNormal.sample(rng);
            let e: f64 = StandardNormal.sample(rng);
            x1[t] = x1[t - 1] + 0.3 * e1;
            x2[t] = x2[t - 1] + 0.3 * e2;
            let equilibrium_prev = 1.0 + 0.5 * x1[t - 1] - 2.0 * x2[t - 1];
            dep[t] = dep[t - 1] - 0.5 * (dep[t - 1] - equilibrium_prev) + noise * e;
        }
        make_panel(vec![("EPU", dep), ("COVID", x1), ("OIL", x2)])
    }

    fn small_spec() -> ArdlSpec {
        ArdlSpec {
            max_p: 2,
            max_q: 1,
            ..ArdlSpec::replication_default()
        }
    }

    #[test]
    fn classifier_is_an_ordered_step_function() {
        let cv = bounds_critical_values(2, SignificanceLevel::Five).unwrap();
        let mut seen_inconclusive = false;
        let mut seen_cointegration = false;
        let mut f = 0.0;
        while f < 8.0 {
            let d = classify_bounds(f, &cv);
            match d {
                CointDecision::NoCointegration => {
                    assert!(!seen_inconclusive && !seen_cointegration);
                    assert!(f < cv.lower_i0);
                }
                CointDecision::Inconclusive => {
                    assert!(!seen_cointegration);
                    seen_inconclusive = true;
                    assert!(f >= cv.lower_i0 && f <= cv.upper_i1);
                }
                CointDecision::Cointegration => {
                    seen_cointegration = true;
                    assert!(f > cv.upper_i1);
                }
            }
            f += 0.01;
        }
        assert!(seen_inconclusive && seen_cointegration);
    }

    #[test]
    fn long_run_ratio_arithmetic() {
        assert!((long_run_point(0.182, -1.0) - 0.182).abs() < 1e-15);
        assert!((long_run_point(0.7, -0.5) - 1.4).abs() < 1e-15);
    }

    #[test]
    fn delta_method_matches_parametric_bootstrap() {
        // Synthetic coefficient block typical of a UECM fit.
        let dx = 0.25;
        let dd = -0.9;
        let var_x = 0.004;
        let var_d = 0.0225;
        let cov = -0.003;
        let se_delta = long_run_variance(dx, dd, var_x, var_d, cov).sqrt();

        // Draw (dx, dd) from the bivariate normal via Cholesky.
        let l11 = var_x.sqrt();
        let l21 = cov / l11;
        let l22 = (var_d - l21 * l21).max(1e-12).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(8_888);
        let draws = 10_000;
        let mut thetas = Vec::with_capacity(draws);
        for _ in 0..draws {
            let z1: f64 = StandardNormal.sample(&mut rng);
            let z2: f64 = StandardNormal.sample(&mut rng);
            let sx = dx + l11 * z1;
            let sd = dd + l21 * z1 + l22 * z2;
            thetas.push(long_run_point(sx, sd));
        }
        let mean = thetas.iter().sum::<f64>() / draws as f64;
        let var = thetas.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / draws as f64;
        let se_boot = var.sqrt();
        let rel = (se_delta - se_boot).abs() / se_boot;
        assert!(
            rel < 0.10,
            "delta {se_delta} vs bootstrap {se_boot}: rel diff {rel}"
        );
    }

    #[test]
    fn grid_winner_minimizes_aic_over_reenumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let panel = cointegrated_panel(&mut rng, 80, 0.4);
        let spec = small_spec();
        let winner = select_and_fit_uecm(&panel, &spec).unwrap();

        // Oracle: rebuild every candidate on the common sample and check
        // the winner's AIC is minimal there.
        let start_common = 1 + spec.max_p.max(spec.max_q);
        let (wd, wy) = build_uecm_design(&panel, &spec, winner.p, &winner.qs, start_common).unwrap();
        let winner_common_aic = ols(&wd, &wy).unwrap().aic;
        for p in 1..=spec.max_p {
            for q1 in 0..=spec.max_q {
                for q2 in 0..=spec.max_q {
                    let (d, y) =
                        build_uecm_design(&panel, &spec, p, &[q1, q2], start_common).unwrap();
                    let aic = ols(&d, &y).unwrap().aic;
                    assert!(
                        winner_common_aic <= aic + 1e-9,
                        "candidate ({p},{q1},{q2}) beats winner: {aic} < {winner_common_aic}"
                    );
                }
            }
        }
    }

    #[test]
    fn recovers_known_cointegrating_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(2_024);
        let panel = cointegrated_panel(&mut rng, 200, 0.2);
        let fit = select_and_fit_uecm(&panel, &small_spec()).unwrap();
        let lr = long_run_coefficients(&fit).unwrap();
        let (ref name1, covid) = lr.terms[0];
        let (ref name2, oil) = lr.terms[1];
        assert_eq!(name1, "COVID");
        assert_eq!(name2, "OIL");
        assert!(
            (covid.coefficient - 0.5).abs() < 2.0 * covid.standard_error,
            "theta_covid {} +- {}",
            covid.coefficient,
            covid.standard_error
        );
        assert!(
            (oil.coefficient - (-2.0)).abs() < 2.0 * oil.standard_error,
            "theta_oil {} +- {}",
            oil.coefficient,
            oil.standard_error
        );
    }

    #[test]
    fn ecm_recovers_adjustment_speed() {
        let mut rng = ChaCha8Rng::seed_from_u64(2_025);
        let panel = cointegrated_panel(&mut rng, 200, 0.2);
        let uecm = select_and_fit_uecm(&panel, &small_spec()).unwrap();
        let lr = long_run_coefficients(&uecm).unwrap();
        let fit = fit_ecm(&panel, &uecm, &lr, 2, 4).unwrap();
        assert!(
            (fit.ect.coefficient - (-0.5)).abs() < 2.0 * fit.ect.standard_error,
            "ECT {} +- {}",
            fit.ect.coefficient,
            fit.ect.standard_error
        );
        assert!(fit.ect_negative_when_cointegrated);
        assert!(fit.ect_delta_gap.is_finite());
        assert_eq!(fit.diagnostics.len(), 2);
    }

    #[test]
    fn strongly_cointegrated_panel_clears_upper_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let panel = cointegrated_panel(&mut rng, 200, 0.2);
        let fit = select_and_fit_uecm(&panel, &small_spec()).unwrap();
        let bounds = bounds_test(&fit).unwrap();
        assert_eq!(bounds.k, 2);
        assert_eq!(bounds.decision, CointDecision::Cointegration);
        assert!(bounds.f_statistic > bounds.critical.upper_i1);
    }

    #[test]
    fn independent_random_walks_rarely_clear_upper_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let reps = 500;
        let n = 40;
        let mut spurious = 0;
        let spec = ArdlSpec {
            max_p: 1,
            max_q: 1,
            ..ArdlSpec::replication_default()
        };
        for _ in 0..reps {
            let mut cols = Vec::new();
            for name in ["EPU", "COVID", "OIL"] {
                let mut y = vec![0.0; n];
                for t in 1..n {
                    let e: f64 = StandardNormal.sample(&mut rng);
                    y[t] = y[t - 1] + e;
                }
                cols.push((name, y));
            }
            let panel = make_panel(cols);
            let fit = select_and_fit_uecm(&panel, &spec).unwrap();
            if bounds_test(&fit).unwrap().decision == CointDecision::Cointegration {
                spurious += 1;
            }
        }
        let rate = spurious as f64 / reps as f64;
        assert!(rate < 0.15, "spurious cointegration rate too high: {rate}");
    }

    #[test]
    fn oil_rescaling_rescales_only_its_long_run_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let panel = cointegrated_panel(&mut rng, 120, 0.25);
        let spec = small_spec();
        let base = fit_uecm_at(&panel, &spec, 1, &[1, 1]).unwrap();
        let lr_base = long_run_coefficients(&base).unwrap();

        let c = 4.0;
        let scaled = make_panel(vec![
            ("EPU", panel.column("EPU").unwrap().to_vec()),
            ("COVID", panel.column("COVID").unwrap().to_vec()),
            (
                "OIL",
                panel.column("OIL").unwrap().iter().map(|v| v * c).collect(),
            ),
        ]);
        let fit_scaled = fit_uecm_at(&scaled, &spec, 1, &[1, 1]).unwrap();
        let lr_scaled = long_run_coefficients(&fit_scaled).unwrap();

        let oil_base = lr_base.terms[1].1.coefficient;
        let oil_scaled = lr_scaled.terms[1].1.coefficient;
        assert!((oil_scaled - oil_base / c).abs() < 1e-6);
        let covid_base = lr_base.terms[0].1.coefficient;
        let covid_scaled = lr_scaled.terms[0].1.coefficient;
        assert!((covid_scaled - covid_base).abs() < 1e-6);
    }

    #[test]
    fn constant_covid_column_is_rank_deficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 60;
        let mut dep = vec![0.0; n];
        let mut oil = vec![0.0; n];
        for t in 1..n {
            let e1: f64 = StandardNormal.sample(&mut rng);
            let e2: f64 = StandardNormal.sample(&mut rng);
            dep[t] = dep[t - 1] + e1;
            oil[t] = oil[t - 1] + e2;
        }
        let panel = make_panel(vec![("EPU", dep), ("COVID", vec![0.0; n]), ("OIL", oil)]);
        match select_and_fit_uecm(&panel, &small_spec()) {
            Err(ArdlError::Linalg(LinalgError::RankDeficient { .. })) => {}
            other => panic!("expected RankDeficient, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_adjustment_detected() {
        // A fit whose dependent-level coefficient is zero by construction:
        // fabricate it by zeroing the coefficient on a real fit.
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let panel = cointegrated_panel(&mut rng, 100, 0.3);
        let mut fit = fit_uecm_at(&panel, &small_spec(), 1, &[0, 0]).unwrap();
        let idx = fit
            .regression
            .column_names
            .iter()
            .position(|n| n == "EPU_lag1")
            .unwrap();
        fit.regression.coefficients[idx] = 0.0;
        assert!(matches!(
            long_run_coefficients(&fit),
            Err(ArdlError::DegenerateAdjustment)
        ));
    }

    #[test]
    fn sample_too_small_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        let panel = cointegrated_panel(&mut rng, 18, 0.3);
        let spec = ArdlSpec::replication_default(); // needs far more rows
        assert!(matches!(
            select_and_fit_uecm(&panel, &spec),
            Err(ArdlError::SampleTooSmall { .. })
        ));
    }
}
