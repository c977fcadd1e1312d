//! CSV ingestion and construction of the replication panel.
//!
//! Input snapshots are plain UTF-8 CSV with ISO dates: WHO situation-report
//! cumulative counts (`date,confirmed_global,deaths_global,confirmed_china,
//! deaths_china`), the daily US EPU index (`date,epu`), and spot crude
//! prices (`date,price`). Indicator levels are computed on the WHO report
//! calendar first; logs and report-lag alignment happen afterwards.

use crate::series::{
    align, natural_log, AlignInput, AlignmentPolicy, DatedSeries, Panel, SeriesError,
};
use chrono::NaiveDate;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}:{line}: duplicate date {date}")]
    DuplicateDate {
        path: PathBuf,
        line: usize,
        date: NaiveDate,
    },
    #[error("{path}:{line}: dates not in ascending order ({date})")]
    NonMonotonicDates {
        path: PathBuf,
        line: usize,
        date: NaiveDate,
    },
    #[error("cumulative count decreases at {date} ({column})")]
    NonMonotonicCumulative { date: NaiveDate, column: String },
    #[error("China count exceeds global count at {date} ({column})")]
    ChinaExceedsGlobal { date: NaiveDate, column: String },
    #[error("death-ratio denominator is zero at {date}")]
    DivisionByZeroCases { date: NaiveDate },
    #[error("need at least {min} WHO records, found {found}")]
    TooFewRecords { min: usize, found: usize },
    #[error("no observations remain in the sample window")]
    EmptySample,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// One WHO situation-report row: cumulative counts as reported that day.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WhoDailyRecord {
    pub report_date: NaiveDate,
    pub confirmed_global: u64,
    pub deaths_global: u64,
    pub confirmed_china: u64,
    pub deaths_china: u64,
}

/// The four COVID-19 indicators in levels (pre-log), on WHO report dates.
#[derive(Debug, Clone)]
pub struct IndicatorSet {
    /// Total new cases: first difference of global cumulative confirmed.
    pub tnc: DatedSeries,
    /// New cases outside China.
    pub ncoc: DatedSeries,
    /// Total death ratio: cumulative deaths / cumulative confirmed.
    pub tdr: DatedSeries,
    /// Death ratio outside China.
    pub droc: DatedSeries,
}

/// Which COVID-19 indicator enters the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CovidIndicator {
    Tnc,
    Ncoc,
    Tdr,
    Droc,
}

impl CovidIndicator {
    pub const ALL: [CovidIndicator; 4] = [
        CovidIndicator::Tnc,
        CovidIndicator::Ncoc,
        CovidIndicator::Tdr,
        CovidIndicator::Droc,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CovidIndicator::Tnc => "TNC",
            CovidIndicator::Ncoc => "NCOC",
            CovidIndicator::Tdr => "TDR",
            CovidIndicator::Droc => "DROC",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TNC" => Some(CovidIndicator::Tnc),
            "NCOC" => Some(CovidIndicator::Ncoc),
            "TDR" => Some(CovidIndicator::Tdr),
            "DROC" => Some(CovidIndicator::Droc),
            _ => None,
        }
    }
}

/// Oil price series to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum OilVariable {
    Wti,
    Brent,
}

impl OilVariable {
    pub fn label(&self) -> &'static str {
        match self {
            OilVariable::Wti => "WTI",
            OilVariable::Brent => "BRENT",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "WTI" => Some(OilVariable::Wti),
            "BRENT" => Some(OilVariable::Brent),
            _ => None,
        }
    }
}

/// Where the input snapshots live and how the sample is formed.
#[derive(Debug, Clone)]
pub struct DatasetConfig {
    pub who_path: PathBuf,
    pub epu_path: PathBuf,
    pub oil_path: PathBuf,
    /// Optional alternative oil snapshot for the robustness swap.
    pub brent_path: Option<PathBuf>,
    pub oil_variable: OilVariable,
    pub sample_start: NaiveDate,
    pub sample_end: NaiveDate,
    /// Drop leading non-positive observations of the chosen indicator
    /// before taking logs (the death ratio outside China is zero before
    /// the first death outside China).
    pub trim_leading_nonpositive: bool,
    pub alignment: AlignmentPolicy,
}

impl DatasetConfig {
    pub fn validate(&self) -> Result<(), IngestError> {
        if self.sample_start >= self.sample_end {
            return Err(IngestError::EmptySample);
        }
        self.alignment.validate()?;
        Ok(())
    }

    /// Path of the oil snapshot for the active oil variable.
    pub fn active_oil_path(&self) -> &Path {
        match self.oil_variable {
            OilVariable::Wti => &self.oil_path,
            OilVariable::Brent => self.brent_path.as_deref().unwrap_or(&self.oil_path),
        }
    }
}

/// Schema of a generic value CSV: one date column plus named numeric
/// columns.
#[derive(Debug, Clone)]
pub struct CsvSchema {
    pub date_column: String,
    pub value_columns: Vec<String>,
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub date: NaiveDate,
    pub values: Vec<f64>,
}

/// Load a CSV against `schema`, requiring strictly increasing ISO dates.
pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<Vec<RawRecord>, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => IngestError::Io {
                path: path.to_path_buf(),
                source: std::io::Error::other(e.to_string()),
            },
            _ => IngestError::Parse {
                path: path.to_path_buf(),
                line: 1,
                reason: e.to_string(),
            },
        })?;

    let headers = reader
        .headers()
        .map_err(|e| IngestError::Parse {
            path: path.to_path_buf(),
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    let find = |name: &str| -> Result<usize, IngestError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::MissingColumn {
                path: path.to_path_buf(),
                column: name.to_string(),
            })
    };
    let date_idx = find(&schema.date_column)?;
    let value_idx: Vec<usize> = schema
        .value_columns
        .iter()
        .map(|c| find(c))
        .collect::<Result<_, _>>()?;

    let mut records = Vec::new();
    for (row_no, row) in reader.records().enumerate() {
        let line = row_no + 2; // header is line 1
        let row = row.map_err(|e| IngestError::Parse {
            path: path.to_path_buf(),
            line,
            reason: e.to_string(),
        })?;
        let date_str = row.get(date_idx).unwrap_or("");
        let date = NaiveDate::parse_from_str(date_str, "%Y-%m-%d").map_err(|_| {
            IngestError::Parse {
                path: path.to_path_buf(),
                line,
                reason: format!("invalid date `{date_str}`"),
            }
        })?;
        if let Some(prev) = records.last().map(|r: &RawRecord| r.date) {
            if date == prev {
                return Err(IngestError::DuplicateDate {
                    path: path.to_path_buf(),
                    line,
                    date,
                });
            }
            if date < prev {
                return Err(IngestError::NonMonotonicDates {
                    path: path.to_path_buf(),
                    line,
                    date,
                });
            }
        }
        let mut values = Vec::with_capacity(value_idx.len());
        for (&idx, name) in value_idx.iter().zip(&schema.value_columns) {
            let field = row.get(idx).unwrap_or("");
            let value: f64 = field.parse().map_err(|_| IngestError::Parse {
                path: path.to_path_buf(),
                line,
                reason: format!("column `{name}`: cannot parse `{field}` as a number"),
            })?;
            if !value.is_finite() {
                return Err(IngestError::Parse {
                    path: path.to_path_buf(),
                    line,
                    reason: format!("column `{name}`: non-finite value"),
                });
            }
            values.push(value);
        }
        records.push(RawRecord { date, values });
    }
    Ok(records)
}

/// Load the WHO snapshot, validating counts and the China <= global
/// invariant.
pub fn load_who(path: &Path) -> Result<Vec<WhoDailyRecord>, IngestError> {
    let schema = CsvSchema {
        date_column: "date".into(),
        value_columns: vec![
            "confirmed_global".into(),
            "deaths_global".into(),
            "confirmed_china".into(),
            "deaths_china".into(),
        ],
    };
    let raw = load_csv(path, &schema)?;
    let mut records = Vec::with_capacity(raw.len());
    for (row_no, rec) in raw.iter().enumerate() {
        let line = row_no + 2;
        let as_count = |v: f64, name: &str| -> Result<u64, IngestError> {
            if v < 0.0 || v.fract() != 0.0 {
                return Err(IngestError::Parse {
                    path: path.to_path_buf(),
                    line,
                    reason: format!("column `{name}`: expected a non-negative integer, got {v}"),
                });
            }
            Ok(v as u64)
        };
        let record = WhoDailyRecord {
            report_date: rec.date,
            confirmed_global: as_count(rec.values[0], "confirmed_global")?,
            deaths_global: as_count(rec.values[1], "deaths_global")?,
            confirmed_china: as_count(rec.values[2], "confirmed_china")?,
            deaths_china: as_count(rec.values[3], "deaths_china")?,
        };
        if record.confirmed_china > record.confirmed_global {
            return Err(IngestError::ChinaExceedsGlobal {
                date: record.report_date,
                column: "confirmed".into(),
            });
        }
        if record.deaths_china > record.deaths_global {
            return Err(IngestError::ChinaExceedsGlobal {
                date: record.report_date,
                column: "deaths".into(),
            });
        }
        records.push(record);
    }
    Ok(records)
}

/// Load a single-value series such as the EPU index or an oil price.
pub fn load_value_series(
    path: &Path,
    value_column: &str,
    series_name: &str,
) -> Result<DatedSeries, IngestError> {
    let schema = CsvSchema {
        date_column: "date".into(),
        value_columns: vec![value_column.to_string()],
    };
    let raw = load_csv(path, &schema)?;
    let obs: Vec<(NaiveDate, f64)> = raw.into_iter().map(|r| (r.date, r.values[0])).collect();
    Ok(DatedSeries::new(series_name, obs)?)
}

/// Detect the first date at which a cumulative column decreases.
pub fn cumulative_violations(records: &[WhoDailyRecord]) -> Vec<(NaiveDate, &'static str)> {
    let mut out = Vec::new();
    for w in records.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.confirmed_global < a.confirmed_global {
            out.push((b.report_date, "confirmed_global"));
        }
        if b.deaths_global < a.deaths_global {
            out.push((b.report_date, "deaths_global"));
        }
        if b.confirmed_china < a.confirmed_china {
            out.push((b.report_date, "confirmed_china"));
        }
        if b.deaths_china < a.deaths_china {
            out.push((b.report_date, "deaths_china"));
        }
    }
    out
}

/// Build the four indicator series (levels, report-dated) from WHO
/// records.
pub fn build_indicators(records: &[WhoDailyRecord]) -> Result<IndicatorSet, IngestError> {
    if records.len() < 2 {
        return Err(IngestError::TooFewRecords {
            min: 2,
            found: records.len(),
        });
    }
    if let Some(&(date, column)) = cumulative_violations(records).first() {
        return Err(IngestError::NonMonotonicCumulative {
            date,
            column: column.into(),
        });
    }

    let mut tnc = Vec::with_capacity(records.len() - 1);
    let mut ncoc = Vec::with_capacity(records.len() - 1);
    for w in records.windows(2) {
        let (prev, cur) = (&w[0], &w[1]);
        tnc.push((
            cur.report_date,
            (cur.confirmed_global - prev.confirmed_global) as f64,
        ));
        let outside_cur = cur.confirmed_global - cur.confirmed_china;
        let outside_prev = prev.confirmed_global - prev.confirmed_china;
        // Outside-China cumulative can only grow when the invariants hold
        // record-by-record, but guard against crossings anyway.
        if outside_cur < outside_prev {
            return Err(IngestError::NonMonotonicCumulative {
                date: cur.report_date,
                column: "confirmed outside China".into(),
            });
        }
        ncoc.push((cur.report_date, (outside_cur - outside_prev) as f64));
    }

    let mut tdr = Vec::with_capacity(records.len());
    let mut droc = Vec::with_capacity(records.len());
    for rec in records {
        if rec.confirmed_global == 0 {
            return Err(IngestError::DivisionByZeroCases {
                date: rec.report_date,
            });
        }
        tdr.push((
            rec.report_date,
            rec.deaths_global as f64 / rec.confirmed_global as f64,
        ));
        let outside_cases = rec.confirmed_global - rec.confirmed_china;
        let outside_deaths = rec.deaths_global - rec.deaths_china;
        if outside_cases == 0 {
            return Err(IngestError::DivisionByZeroCases {
                date: rec.report_date,
            });
        }
        droc.push((rec.report_date, outside_deaths as f64 / outside_cases as f64));
    }

    Ok(IndicatorSet {
        tnc: DatedSeries::new("TNC", tnc)?,
        ncoc: DatedSeries::new("NCOC", ncoc)?,
        tdr: DatedSeries::new("TDR", tdr)?,
        droc: DatedSeries::new("DROC", droc)?,
    })
}

impl IndicatorSet {
    pub fn get(&self, indicator: CovidIndicator) -> &DatedSeries {
        match indicator {
            CovidIndicator::Tnc => &self.tnc,
            CovidIndicator::Ncoc => &self.ncoc,
            CovidIndicator::Tdr => &self.tdr,
            CovidIndicator::Droc => &self.droc,
        }
    }
}

/// A replication panel plus bookkeeping about how it was formed.
#[derive(Debug, Clone)]
pub struct BuiltPanel {
    pub panel: Panel,
    pub indicator: CovidIndicator,
    /// Leading non-positive indicator observations dropped before logging.
    pub trimmed_leading: usize,
    pub effective_start: NaiveDate,
    pub effective_end: NaiveDate,
}

/// Panel column names.
pub const COL_EPU: &str = "EPU";
pub const COL_COVID: &str = "COVID";
pub const COL_OIL: &str = "OIL";

/// Build the log-level panel {EPU, COVID, OIL} for one indicator,
/// restricted to the configured sample window.
pub fn build_panel(
    config: &DatasetConfig,
    indicator: CovidIndicator,
) -> Result<BuiltPanel, IngestError> {
    config.validate()?;
    let who = load_who(&config.who_path)?;
    let epu = load_value_series(&config.epu_path, "epu", COL_EPU)?;
    let oil = load_value_series(config.active_oil_path(), "price", COL_OIL)?;
    let indicators = build_indicators(&who)?;

    let mut covid = indicators.get(indicator).clone().with_name(COL_COVID);
    let mut trimmed = 0usize;
    if config.trim_leading_nonpositive {
        let obs = covid.observations();
        let first_positive = obs.iter().position(|(_, v)| *v > 0.0);
        match first_positive {
            Some(0) | None => {}
            Some(idx) => {
                trimmed = idx;
                covid = DatedSeries::new(COL_COVID, obs[idx..].to_vec())?;
            }
        }
    }

    let epu_log = natural_log(&epu)?;
    let oil_log = natural_log(&oil)?;
    let covid_log = natural_log(&covid)?;

    let panel = align(
        &[
            AlignInput::plain(&epu_log),
            AlignInput::report_dated(&covid_log),
            AlignInput::plain(&oil_log),
        ],
        &config.alignment,
    )?;
    let panel = panel
        .window(config.sample_start, config.sample_end)
        .map_err(|_| IngestError::EmptySample)?;
    if panel.is_empty() {
        return Err(IngestError::EmptySample);
    }

    Ok(BuiltPanel {
        effective_start: panel.dates()[0],
        effective_end: panel.dates()[panel.len() - 1],
        panel,
        indicator,
        trimmed_leading: trimmed,
    })
}

/// Align just EPU and the oil series over the sample window (used for
/// unit-root tests on the non-COVID variables).
pub fn build_epu_oil_panel(config: &DatasetConfig) -> Result<Panel, IngestError> {
    config.validate()?;
    let epu = load_value_series(&config.epu_path, "epu", COL_EPU)?;
    let oil = load_value_series(config.active_oil_path(), "price", COL_OIL)?;
    let panel = align(
        &[
            AlignInput::plain(&natural_log(&epu)?),
            AlignInput::plain(&natural_log(&oil)?),
        ],
        &config.alignment,
    )?;
    panel
        .window(config.sample_start, config.sample_end)
        .map_err(|_| IngestError::EmptySample)
}
