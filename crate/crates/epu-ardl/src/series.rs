//! Dated time series and the transforms every estimator consumes:
//! natural log, positional differencing, lagging, and date alignment
//! of mixed-calendar series into a regression-ready panel.

use chrono::NaiveDate;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("series must contain at least one observation")]
    Empty,
    #[error("series `{name}`: dates must be strictly increasing (violation at {date})")]
    NonMonotonicDates { name: String, date: NaiveDate },
    #[error("series `{name}`: non-finite value at {date}")]
    NonFiniteValue { name: String, date: NaiveDate },
    #[error("series `{name}`: non-positive value {value} at {date}, cannot take log")]
    NonPositiveValue {
        name: String,
        date: NaiveDate,
        value: f64,
    },
    #[error("series `{name}`: {len} observations, need at least {min}")]
    TooShort { name: String, len: usize, min: usize },
    #[error("no common dates remain after alignment")]
    EmptyIntersection,
    #[error("series `{name}` has no observation on dependent date {date}")]
    MissingObservation { name: String, date: NaiveDate },
}

/// Ordered (date, value) observations of one variable.
///
/// Invariants enforced at construction: strictly increasing dates,
/// finite values, length >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DatedSeries {
    name: String,
    observations: Vec<(NaiveDate, f64)>,
}

impl DatedSeries {
    pub fn new(
        name: impl Into<String>,
        observations: Vec<(NaiveDate, f64)>,
    ) -> Result<Self, SeriesError> {
        let name = name.into();
        if observations.is_empty() {
            return Err(SeriesError::Empty);
        }
        for window in observations.windows(2) {
            if window[1].0 <= window[0].0 {
                return Err(SeriesError::NonMonotonicDates {
                    name,
                    date: window[1].0,
                });
            }
        }
        if let Some(&(date, value)) = observations.iter().find(|(_, v)| !v.is_finite()) {
            let _ = value;
            return Err(SeriesError::NonFiniteValue { name, date });
        }
        Ok(Self { name, observations })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn observations(&self) -> &[(NaiveDate, f64)] {
        &self.observations
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.observations.iter().map(|(d, _)| *d)
    }

    pub fn values(&self) -> Vec<f64> {
        self.observations.iter().map(|(_, v)| *v).collect()
    }

    pub fn first_date(&self) -> NaiveDate {
        self.observations[0].0
    }

    pub fn last_date(&self) -> NaiveDate {
        self.observations[self.observations.len() - 1].0
    }

    /// Rename in place, keeping observations.
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Restrict to observations with `start <= date <= end`.
    pub fn window(&self, start: NaiveDate, end: NaiveDate) -> Result<Self, SeriesError> {
        let obs: Vec<_> = self
            .observations
            .iter()
            .filter(|(d, _)| *d >= start && *d <= end)
            .copied()
            .collect();
        DatedSeries::new(self.name.clone(), obs)
    }
}

/// Elementwise natural logarithm; every value must be strictly positive.
pub fn natural_log(s: &DatedSeries) -> Result<DatedSeries, SeriesError> {
    if let Some(&(date, value)) = s.observations.iter().find(|(_, v)| *v <= 0.0) {
        return Err(SeriesError::NonPositiveValue {
            name: s.name.clone(),
            date,
            value,
        });
    }
    let obs = s
        .observations
        .iter()
        .map(|&(d, v)| (d, v.ln()))
        .collect();
    DatedSeries::new(s.name.clone(), obs)
}

/// First difference over adjacent observations, stamped with the later date.
///
/// Differencing is positional, not calendar-gap-weighted: adjacent rows of
/// an aligned sample are treated as evenly spaced.
pub fn first_difference(s: &DatedSeries) -> Result<DatedSeries, SeriesError> {
    if s.len() < 2 {
        return Err(SeriesError::TooShort {
            name: s.name.clone(),
            len: s.len(),
            min: 2,
        });
    }
    let obs = s
        .observations
        .windows(2)
        .map(|w| (w[1].0, w[1].1 - w[0].1))
        .collect();
    DatedSeries::new(s.name.clone(), obs)
}

/// Shift values forward by `k` positions: the value at position `i` of the
/// output is the input value at `i - k`, stamped with the date at `i`.
pub fn lag(s: &DatedSeries, k: usize) -> Result<DatedSeries, SeriesError> {
    if k == 0 {
        return Err(SeriesError::TooShort {
            name: s.name.clone(),
            len: s.len(),
            min: s.len() + 1, // k = 0 is rejected outright
        });
    }
    if s.len() <= k {
        return Err(SeriesError::TooShort {
            name: s.name.clone(),
            len: s.len(),
            min: k + 1,
        });
    }
    let n = s.len();
    let obs = (k..n)
        .map(|i| (s.observations[i].0, s.observations[i - k].1))
        .collect();
    DatedSeries::new(s.name.clone(), obs)
}

/// Which dates govern the aligned panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Calendar {
    /// Dates where every (shifted) series has an observation.
    Intersection,
    /// Dates of the first (dependent) series; every other series must
    /// cover all of them.
    DependentVariableDates,
}

/// Alignment policy: calendar rule plus the report-lag offset applied to
/// report-dated (COVID-flagged) series before intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentPolicy {
    pub calendar: Calendar,
    /// Days by which report-dated series are shifted back before
    /// alignment, so the report released at date t+offset is paired with
    /// the other series at date t. Must lie in [-3, 3].
    pub covid_report_offset: i64,
}

impl Default for AlignmentPolicy {
    fn default() -> Self {
        Self {
            calendar: Calendar::Intersection,
            covid_report_offset: 1,
        }
    }
}

impl AlignmentPolicy {
    pub fn validate(&self) -> Result<(), SeriesError> {
        if self.covid_report_offset.abs() > 3 {
            return Err(SeriesError::EmptyIntersection);
        }
        Ok(())
    }
}

/// Date-aligned named columns, all of identical length, ready for
/// regression. No missing cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    dates: Vec<NaiveDate>,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Panel {
    pub fn from_columns(
        dates: Vec<NaiveDate>,
        columns: Vec<(String, Vec<f64>)>,
    ) -> Result<Panel, SeriesError> {
        if dates.is_empty() || columns.is_empty() {
            return Err(SeriesError::Empty);
        }
        for w in dates.windows(2) {
            if w[1] <= w[0] {
                return Err(SeriesError::NonMonotonicDates {
                    name: "panel".into(),
                    date: w[1],
                });
            }
        }
        let mut names = Vec::with_capacity(columns.len());
        let mut cols = Vec::with_capacity(columns.len());
        for (name, col) in columns {
            if col.len() != dates.len() {
                return Err(SeriesError::TooShort {
                    name,
                    len: col.len(),
                    min: dates.len(),
                });
            }
            if let Some(idx) = col.iter().position(|v| !v.is_finite()) {
                return Err(SeriesError::NonFiniteValue {
                    name,
                    date: dates[idx],
                });
            }
            names.push(name);
            cols.push(col);
        }
        Ok(Panel {
            dates,
            names,
            columns: cols,
        })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
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

    /// Column as a `DatedSeries` (for unit-root tests on panel columns).
    pub fn column_series(&self, name: &str) -> Option<DatedSeries> {
        let values = self.column(name)?;
        let obs = self.dates.iter().copied().zip(values.iter().copied()).collect();
        Some(DatedSeries::new(name, obs).expect("panel columns satisfy series invariants"))
    }

    /// Restrict to dates within `[start, end]`.
    pub fn window(&self, start: NaiveDate, end: NaiveDate) -> Result<Panel, SeriesError> {
        let keep: Vec<usize> = self
            .dates
            .iter()
            .enumerate()
            .filter(|(_, d)| **d >= start && **d <= end)
            .map(|(i, _)| i)
            .collect();
        if keep.is_empty() {
            return Err(SeriesError::EmptyIntersection);
        }
        Ok(Panel {
            dates: keep.iter().map(|&i| self.dates[i]).collect(),
            names: self.names.clone(),
            columns: self
                .columns
                .iter()
                .map(|col| keep.iter().map(|&i| col[i]).collect())
                .collect(),
        })
    }
}

/// One input to [`align`]: a series plus whether the report-lag offset
/// applies to it.
#[derive(Debug, Clone, Copy)]
pub struct AlignInput<'a> {
    pub series: &'a DatedSeries,
    pub report_dated: bool,
}

impl<'a> AlignInput<'a> {
    pub fn plain(series: &'a DatedSeries) -> Self {
        Self {
            series,
            report_dated: false,
        }
    }

    pub fn report_dated(series: &'a DatedSeries) -> Self {
        Self {
            series,
            report_dated: true,
        }
    }
}

/// Align series onto a common calendar. Report-dated series are shifted
/// back by `policy.covid_report_offset` days first; the panel then keeps
/// the dates admitted by `policy.calendar`. Never invents values: every
/// output cell is one of the input observations.
pub fn align(inputs: &[AlignInput<'_>], policy: &AlignmentPolicy) -> Result<Panel, SeriesError> {
    policy.validate()?;
    if inputs.is_empty() {
        return Err(SeriesError::EmptyIntersection);
    }

    let shifted: Vec<Vec<(NaiveDate, f64)>> = inputs
        .iter()
        .map(|input| {
            input
                .series
                .observations()
                .iter()
                .map(|&(d, v)| {
                    let d = if input.report_dated {
                        d - chrono::Duration::days(policy.covid_report_offset)
                    } else {
                        d
                    };
                    (d, v)
                })
                .collect()
        })
        .collect();

    let dates: Vec<NaiveDate> = match policy.calendar {
        Calendar::Intersection => {
            let mut dates: Vec<NaiveDate> = shifted[0].iter().map(|(d, _)| *d).collect();
            for obs in &shifted[1..] {
                let have: std::collections::BTreeSet<NaiveDate> =
                    obs.iter().map(|(d, _)| *d).collect();
                dates.retain(|d| have.contains(d));
            }
            dates
        }
        Calendar::DependentVariableDates => {
            let dates: Vec<NaiveDate> = shifted[0].iter().map(|(d, _)| *d).collect();
            for (input, obs) in inputs.iter().zip(&shifted).skip(1) {
                let have: std::collections::BTreeSet<NaiveDate> =
                    obs.iter().map(|(d, _)| *d).collect();
                if let Some(missing) = dates.iter().find(|d| !have.contains(d)) {
                    return Err(SeriesError::MissingObservation {
                        name: input.series.name().to_string(),
                        date: *missing,
                    });
                }
            }
            dates
        }
    };

    if dates.is_empty() {
        return Err(SeriesError::EmptyIntersection);
    }

    let mut columns = Vec::with_capacity(inputs.len());
    for obs in &shifted {
        let lookup: std::collections::BTreeMap<NaiveDate, f64> = obs.iter().copied().collect();
        columns.push(dates.iter().map(|d| lookup[d]).collect());
    }

    Ok(Panel {
        dates,
        names: inputs
            .iter()
            .map(|i| i.series.name().to_string())
            .collect(),
        columns,
    })
}
