//! Augmented Dickey-Fuller unit-root test with AIC lag selection.
//!
//! The lag order is searched on the common sample implied by the maximum
//! lag, so candidate AIC values are comparable, and the winning order is
//! then re-estimated on its own maximal sample. The reported statistic is
//! the t-ratio on the lagged level.

use crate::dist::{
    adf_critical_values, AdfCriticalValues, DeterministicSpec, DistError, Significance,
};
use crate::linalg::{aic_compare, ols, DesignMatrix, LinalgError};
use crate::series::DatedSeries;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UnitRootError {
    #[error("series `{name}` too short for ADF with max lag {max_lag}: {len} observations")]
    TooShort {
        name: String,
        len: usize,
        max_lag: usize,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// ADF test outcome.
#[derive(Debug, Clone)]
pub struct AdfResult {
    /// t-ratio on the lagged level.
    pub statistic: f64,
    pub chosen_lag: usize,
    pub spec: DeterministicSpec,
    /// Observations in the final regression.
    pub n_effective: usize,
    pub critical_values: AdfCriticalValues,
    pub significance: Significance,
}

/// Schwert's rule-of-thumb lag bound, capped at n / 4.
pub fn schwert_max_lag(n: usize) -> usize {
    let rule = (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize;
    rule.min(n / 4)
}

struct AdfDesign {
    x: DesignMatrix,
    dy: Vec<f64>,
}

/// Regression of dy[t] on deterministics, y[t-1] (the level), and
/// dy[t-1-i] for i in 0..lags, over dy indices start..dy_len.
fn build_design(
    y: &[f64],
    lags: usize,
    spec: DeterministicSpec,
    start: usize,
) -> Result<AdfDesign, LinalgError> {
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let rows = dy.len() - start;
    let mut cols: Vec<(String, Vec<f64>)> = Vec::new();
    match spec {
        DeterministicSpec::None => {}
        DeterministicSpec::Constant => cols.push(("const".into(), vec![1.0; rows])),
        DeterministicSpec::ConstantTrend => {
            cols.push(("const".into(), vec![1.0; rows]));
            cols.push((
                "trend".into(),
                (0..rows).map(|i| (start + i) as f64).collect(),
            ));
        }
    }
    cols.push((
        "level".into(),
        (start..dy.len()).map(|t| y[t]).collect(),
    ));
    for i in 1..=lags {
        cols.push((
            format!("dlag{i}"),
            (start..dy.len()).map(|t| dy[t - i]).collect(),
        ));
    }
    let response: Vec<f64> = dy[start..].to_vec();
    let x = DesignMatrix::from_columns(cols)?;
    Ok(AdfDesign { x, dy: response })
}

/// ADF test with AIC lag selection up to `max_lag` (Schwert rule when
/// `None`).
pub fn adf_test(
    s: &DatedSeries,
    max_lag: Option<usize>,
    spec: DeterministicSpec,
) -> Result<AdfResult, UnitRootError> {
    let y = s.values();
    let n = y.len();
    let max_lag = max_lag.unwrap_or_else(|| schwert_max_lag(n));
    if n < max_lag + 10 {
        return Err(UnitRootError::TooShort {
            name: s.name().to_string(),
            len: n,
            max_lag,
        });
    }

    // Lag search on the common sample implied by max_lag.
    let chosen = if max_lag == 0 {
        0
    } else {
        let mut fits = Vec::with_capacity(max_lag + 1);
        for p in 0..=max_lag {
            let d = build_design(&y, p, spec, max_lag)?;
            fits.push(ols(&d.x, &d.dy)?);
        }
        aic_compare(&fits)?
    };

    // Final fit on the maximal sample for the chosen order.
    let d = build_design(&y, chosen, spec, chosen)?;
    let fit = ols(&d.x, &d.dy)?;
    let statistic = fit
        .t_statistic("level")
        .expect("level column always present");
    let n_effective = fit.nobs;
    let critical_values = adf_critical_values(spec, n_effective)?;
    let significance = Significance::from_adf_statistic(statistic, &critical_values);

    Ok(AdfResult {
        statistic,
        chosen_lag: chosen,
        spec,
        n_effective,
        critical_values,
        significance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn series_from(values: Vec<f64>) -> DatedSeries {
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let obs = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| (start + chrono::Duration::days(i as i64), v))
            .collect();
        DatedSeries::new("x", obs).unwrap()
    }

    fn random_walk(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        let mut y = vec![0.0; n];
        for i in 1..n {
            let e: f64 = StandardNormal.sample(rng);
            y[i] = y[i - 1] + e;
        }
        y
    }

    fn white_noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| StandardNormal.sample(rng)).collect()
    }

    #[test]
    fn schwert_rule_values() {
        assert_eq!(schwert_max_lag(100), 12.min(25));
        assert_eq!(schwert_max_lag(37), 9);
        assert_eq!(schwert_max_lag(40), 9);
        assert_eq!(schwert_max_lag(25), 6);
    }

    #[test]
    fn affine_transformation_leaves_statistic_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let base = random_walk(&mut rng, 60);
        let s = series_from(base.clone());
        let transformed = series_from(base.iter().map(|v| 3.5 * v + 11.0).collect());
        let a = adf_test(&s, Some(4), DeterministicSpec::Constant).unwrap();
        let b = adf_test(&transformed, Some(4), DeterministicSpec::Constant).unwrap();
        assert!((a.statistic - b.statistic).abs() < 1e-8);
        assert_eq!(a.chosen_lag, b.chosen_lag);
    }

    #[test]
    fn chosen_lag_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = series_from(random_walk(&mut rng, 80));
        for max_lag in [0usize, 1, 5] {
            let res = adf_test(&s, Some(max_lag), DeterministicSpec::Constant).unwrap();
            assert!(res.chosen_lag <= max_lag);
        }
        let res = adf_test(&s, Some(0), DeterministicSpec::Constant).unwrap();
        assert_eq!(res.chosen_lag, 0);
    }

    #[test]
    fn too_short_rejected() {
        let s = series_from((0..12).map(|i| i as f64).collect());
        assert!(matches!(
            adf_test(&s, Some(8), DeterministicSpec::Constant),
            Err(UnitRootError::TooShort { .. })
        ));
    }

    #[test]
    fn constant_series_is_rank_deficient() {
        let s = series_from(vec![2.0; 40]);
        assert!(matches!(
            adf_test(&s, Some(2), DeterministicSpec::Constant),
            Err(UnitRootError::Linalg(LinalgError::RankDeficient { .. }))
        ));
    }

    #[test]
    fn significance_consistent_with_critical_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let s = series_from(random_walk(&mut rng, 50));
            let res = adf_test(&s, None, DeterministicSpec::Constant).unwrap();
            let cv = res.critical_values;
            let expect = Significance::from_adf_statistic(res.statistic, &cv);
            assert_eq!(res.significance, expect);
            assert!(cv.cv1 < cv.cv5 && cv.cv5 < cv.cv10);
        }
    }

    #[test]
    fn rejects_white_noise_with_high_power() {
        // White noise is the first difference of a random walk; the test
        // should reject a unit root most of the time even at n = 40.
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let reps = 500;
        let mut rejections = 0;
        for _ in 0..reps {
            let s = series_from(white_noise(&mut rng, 40));
            let res = adf_test(&s, None, DeterministicSpec::Constant).unwrap();
            if res.statistic <= res.critical_values.cv5 {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / reps as f64;
        assert!(rate > 0.80, "power on white noise too low: {rate}");
    }

    #[test]
    fn size_on_random_walk_near_nominal() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let reps = 1000;
        let mut rejections = 0;
        for _ in 0..reps {
            let s = series_from(random_walk(&mut rng, 40));
            let res = adf_test(&s, None, DeterministicSpec::Constant).unwrap();
            if res.statistic <= res.critical_values.cv5 {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / reps as f64;
        assert!(
            (0.01..=0.10).contains(&rate),
            "5% rejection rate out of band: {rate}"
        );
    }
}
