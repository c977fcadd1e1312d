//! Replication driver: the ADF grid, the four model pipelines, figure
//! data emission, and input validation, assembled into a serializable
//! report.

use crate::ardl::{
    fit_ecm, long_run_coefficients, select_and_fit_uecm, ArdlError, ArdlFit, ArdlSpec,
    CoefEstimate, CointDecision,
};
use crate::config::ConfigError;
use crate::diagnostics::{breusch_godfrey, DiagnosticsError, LmTestKind, LmTestResult};
use crate::dist::{DeterministicSpec, DistError};
use crate::ingest::{
    build_epu_oil_panel, build_indicators, build_panel, cumulative_violations, load_value_series,
    load_who, CovidIndicator, DatasetConfig, IngestError, OilVariable, COL_COVID, COL_EPU,
};
use crate::linalg::LinalgError;
use crate::series::{align, first_difference, AlignInput, DatedSeries, SeriesError};
use crate::unitroot::{adf_test, AdfResult, UnitRootError};
use sha2::{Digest, Sha256};
use std::path::Path;
use thiserror::Error;

/// Errors split by exit-code class: input problems (config, files,
/// schemas) versus estimation problems (numerics, degenerate samples).
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Estimation(String),
}

impl From<ConfigError> for PipelineError {
    fn from(e: ConfigError) -> Self {
        PipelineError::Input(e.to_string())
    }
}
impl From<IngestError> for PipelineError {
    fn from(e: IngestError) -> Self {
        PipelineError::Input(e.to_string())
    }
}
impl From<SeriesError> for PipelineError {
    fn from(e: SeriesError) -> Self {
        PipelineError::Input(e.to_string())
    }
}
impl From<ArdlError> for PipelineError {
    fn from(e: ArdlError) -> Self {
        PipelineError::Estimation(e.to_string())
    }
}
impl From<UnitRootError> for PipelineError {
    fn from(e: UnitRootError) -> Self {
        PipelineError::Estimation(e.to_string())
    }
}
impl From<DiagnosticsError> for PipelineError {
    fn from(e: DiagnosticsError) -> Self {
        PipelineError::Estimation(e.to_string())
    }
}
impl From<LinalgError> for PipelineError {
    fn from(e: LinalgError) -> Self {
        PipelineError::Estimation(e.to_string())
    }
}
impl From<DistError> for PipelineError {
    fn from(e: DistError) -> Self {
        PipelineError::Estimation(e.to_string())
    }
}

/// Knobs that are not part of the dataset config.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub oil_override: Option<OilVariable>,
    pub bg_lags: usize,
    pub arch_lags: usize,
    pub adf_max_lag: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            oil_override: None,
            bg_lags: 2,
            arch_lags: 4,
            adf_max_lag: None,
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DataHashes {
    pub who_sha256: String,
    pub epu_sha256: String,
    pub oil_sha256: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConfigEcho {
    pub who_path: String,
    pub epu_path: String,
    pub oil_path: String,
    pub oil_variable: String,
    pub sample_start: String,
    pub sample_end: String,
    pub trim_leading_nonpositive: bool,
    pub calendar: String,
    pub covid_report_offset: i64,
    pub bg_lags: usize,
    pub arch_lags: usize,
    pub max_p: usize,
    pub max_q: usize,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Metadata {
    pub program: String,
    pub version: String,
    pub timestamp: String,
    pub oil_variable: String,
    pub robustness: bool,
    pub config: ConfigEcho,
    pub data_hashes: DataHashes,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct AdfCell {
    pub statistic: f64,
    pub chosen_lag: usize,
    pub n_effective: usize,
    pub cv1: f64,
    pub cv5: f64,
    pub cv10: f64,
    pub significance: String,
}

impl From<&AdfResult> for AdfCell {
    fn from(r: &AdfResult) -> Self {
        AdfCell {
            statistic: r.statistic,
            chosen_lag: r.chosen_lag,
            n_effective: r.n_effective,
            cv1: r.critical_values.cv1,
            cv5: r.critical_values.cv5,
            cv10: r.critical_values.cv10,
            significance: r.significance.stars().to_string(),
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Table1Row {
    pub variable: String,
    pub level: AdfCell,
    pub first_difference: AdfCell,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Table2Row {
    pub model: String,
    pub f_statistic: f64,
    pub k: usize,
    pub lower_i0: f64,
    pub upper_i1: f64,
    pub significance_level: f64,
    pub decision: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CoefCell {
    pub term: String,
    pub coefficient: f64,
    pub standard_error: f64,
    pub t_statistic: f64,
    pub p_value: f64,
    pub significance: String,
}

impl CoefCell {
    fn new(term: &str, est: &CoefEstimate) -> Self {
        CoefCell {
            term: term.to_string(),
            coefficient: est.coefficient,
            standard_error: est.standard_error,
            t_statistic: est.t_statistic,
            p_value: est.p_value,
            significance: est.significance.stars().to_string(),
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DiagnosticCell {
    pub test: String,
    pub lags: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub verdict: String,
}

impl From<&LmTestResult> for DiagnosticCell {
    fn from(r: &LmTestResult) -> Self {
        DiagnosticCell {
            test: r.kind.label().to_string(),
            lags: r.lags,
            statistic: r.statistic,
            p_value: r.p_value,
            verdict: if r.pass { "pass" } else { "fail" }.to_string(),
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Table3Model {
    pub model: String,
    pub sample_start: String,
    pub sample_end: String,
    pub nobs: usize,
    pub trimmed_leading: usize,
    pub selected_p: usize,
    pub selected_q_covid: usize,
    pub selected_q_oil: usize,
    pub long_run: Vec<CoefCell>,
    pub short_run: Vec<CoefCell>,
    pub ect: CoefCell,
    pub ect_delta_gap: f64,
    pub ect_negative_when_cointegrated: bool,
    pub diagnostics: Vec<DiagnosticCell>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ModelError {
    pub model: String,
    pub error: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct FigureData {
    pub name: String,
    pub filename: String,
    pub columns: Vec<String>,
    pub rows: usize,
    pub sha256: String,
    #[serde(skip)]
    pub csv: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ReplicationReport {
    pub metadata: Metadata,
    pub table1: Vec<Table1Row>,
    pub table2: Vec<Table2Row>,
    pub table3: Vec<Table3Model>,
    pub figures: Vec<FigureData>,
    pub model_errors: Vec<ModelError>,
}

fn sha256_file(path: &Path) -> Result<String, PipelineError> {
    let bytes = std::fs::read(path)
        .map_err(|e| PipelineError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(hex_digest(&bytes))
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Apply the CLI oil override to a loaded config.
pub fn apply_oil_override(config: &mut DatasetConfig, oil: Option<OilVariable>) {
    if let Some(oil) = oil {
        config.oil_variable = oil;
    }
}

/// The six Table 1 variables in presentation order.
fn table1_variables(oil_label: &str) -> Vec<String> {
    vec![
        "EPU".to_string(),
        "TNC".to_string(),
        "NCOC".to_string(),
        "TDR".to_string(),
        "DROC".to_string(),
        oil_label.to_string(),
    ]
}

fn adf_pair(
    series: &DatedSeries,
    max_lag: Option<usize>,
) -> Result<(AdfCell, AdfCell), PipelineError> {
    let level = adf_test(series, max_lag, DeterministicSpec::Constant)?;
    let diff = first_difference(series)?;
    let diffed = adf_test(&diff, max_lag, DeterministicSpec::Constant)?;
    Ok(((&level).into(), (&diffed).into()))
}

/// Unit-root grid over the six variables, each on its aligned estimation
/// sample (EPU and oil from their two-series alignment, each COVID
/// indicator from its own model panel).
pub fn build_table1(
    config: &DatasetConfig,
    opts: &RunOptions,
) -> Result<Vec<Table1Row>, PipelineError> {
    let mut rows = Vec::new();
    let eo = build_epu_oil_panel(config)?;
    let epu = eo.column_series(COL_EPU).expect("EPU column");
    let (level, diff) = adf_pair(&epu, opts.adf_max_lag)?;
    rows.push(Table1Row {
        variable: "EPU".into(),
        level,
        first_difference: diff,
    });

    for ind in CovidIndicator::ALL {
        let built = build_panel(config, ind)?;
        let series = built.panel.column_series(COL_COVID).expect("COVID column");
        let (level, diff) = adf_pair(&series, opts.adf_max_lag)?;
        rows.push(Table1Row {
            variable: ind.label().to_string(),
            level,
            first_difference: diff,
        });
    }

    let oil = eo
        .column_series(crate::ingest::COL_OIL)
        .expect("OIL column");
    let (level, diff) = adf_pair(&oil, opts.adf_max_lag)?;
    rows.push(Table1Row {
        variable: config.oil_variable.label().to_string(),
        level,
        first_difference: diff,
    });

    // Keep presentation order EPU, TNC, NCOC, TDR, DROC, oil.
    debug_assert_eq!(
        rows.iter().map(|r| r.variable.clone()).collect::<Vec<_>>(),
        table1_variables(config.oil_variable.label())
    );
    Ok(rows)
}

/// One model pipeline end to end.
pub fn run_model(
    config: &DatasetConfig,
    indicator: CovidIndicator,
    opts: &RunOptions,
) -> Result<(ArdlFit, Table2Row, Table3Model), PipelineError> {
    let built = build_panel(config, indicator)?;
    let spec = ArdlSpec::replication_default();
    let uecm = select_and_fit_uecm(&built.panel, &spec)?;
    let long_run = long_run_coefficients(&uecm)?;
    let fit = fit_ecm(&built.panel, &uecm, &long_run, opts.bg_lags, opts.arch_lags)?;

    let table2 = Table2Row {
        model: indicator.label().to_string(),
        f_statistic: fit.bounds.f_statistic,
        k: fit.bounds.k,
        lower_i0: fit.bounds.critical.lower_i0,
        upper_i1: fit.bounds.critical.upper_i1,
        significance_level: fit.bounds.critical.level,
        decision: decision_label(fit.bounds.decision).to_string(),
    };

    // Breusch-Godfrey verdicts at lag orders 1, headline, and 4 for
    // transparency, then the ARCH test.
    let mut diag_cells = Vec::new();
    let mut bg_orders = vec![1, opts.bg_lags, 4];
    bg_orders.sort_unstable();
    bg_orders.dedup();
    for lags in bg_orders {
        let bg = breusch_godfrey(&fit.ecm_regression, &fit.ecm_design, lags)?;
        diag_cells.push((&bg).into());
    }
    for d in &fit.diagnostics {
        if d.kind == LmTestKind::ArchLm {
            diag_cells.push(d.into());
        }
    }

    let mut long_run_cells: Vec<CoefCell> = fit
        .long_run
        .terms
        .iter()
        .map(|(name, est)| CoefCell::new(name, est))
        .collect();
    long_run_cells.push(CoefCell::new("const", &fit.long_run.constant));

    let short_run_cells: Vec<CoefCell> = fit
        .short_run
        .iter()
        .map(|(name, est)| CoefCell::new(name, est))
        .collect();

    let table3 = Table3Model {
        model: indicator.label().to_string(),
        sample_start: fit.uecm.start_date.to_string(),
        sample_end: fit.uecm.end_date.to_string(),
        nobs: fit.uecm.regression.nobs,
        trimmed_leading: built.trimmed_leading,
        selected_p: fit.uecm.p,
        selected_q_covid: fit.uecm.qs[0],
        selected_q_oil: fit.uecm.qs[1],
        long_run: long_run_cells,
        short_run: short_run_cells,
        ect: CoefCell::new("ECT_lag1", &fit.ect),
        ect_delta_gap: fit.ect_delta_gap,
        ect_negative_when_cointegrated: fit.ect_negative_when_cointegrated,
        diagnostics: diag_cells,
    };

    Ok((fit, table2, table3))
}

pub fn decision_label(d: CointDecision) -> &'static str {
    match d {
        CointDecision::Cointegration => "cointegration",
        CointDecision::NoCointegration => "no_cointegration",
        CointDecision::Inconclusive => "inconclusive",
    }
}

fn render_number(v: f64) -> String {
    // Shortest representation that round-trips through f64 parsing.
    format!("{v}")
}

fn figure_csv(header: &str, dates: &[chrono::NaiveDate], cols: &[&[f64]]) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for (i, date) in dates.iter().enumerate() {
        out.push_str(&date.to_string());
        for col in cols {
            out.push(',');
            out.push_str(&render_number(col[i]));
        }
        out.push('\n');
    }
    out
}

/// Figure payloads: indicator levels (pre-log) on report-shifted dates
/// alongside the EPU level, clipped to the sample window.
pub fn build_figures(config: &DatasetConfig) -> Result<Vec<FigureData>, PipelineError> {
    let who = load_who(&config.who_path)?;
    let indicators = build_indicators(&who)?;
    let epu = load_value_series(&config.epu_path, "epu", "epu")?;

    let fig = |name: &str,
               a: (&str, &DatedSeries),
               b: (&str, &DatedSeries)|
     -> Result<FigureData, PipelineError> {
        let a_series = a.1.clone().with_name(a.0);
        let b_series = b.1.clone().with_name(b.0);
        let panel = align(
            &[
                AlignInput::report_dated(&a_series),
                AlignInput::report_dated(&b_series),
                AlignInput::plain(&epu),
            ],
            &config.alignment,
        )?;
        let panel = panel.window(config.sample_start, config.sample_end)?;
        let header = format!("date,{},{},epu", a.0, b.0);
        let csv = figure_csv(
            &header,
            panel.dates(),
            &[
                panel.column(a.0).unwrap(),
                panel.column(b.0).unwrap(),
                panel.column("epu").unwrap(),
            ],
        );
        Ok(FigureData {
            name: name.to_string(),
            filename: format!("{name}.csv"),
            columns: header.split(',').map(str::to_string).collect(),
            rows: panel.len(),
            sha256: hex_digest(csv.as_bytes()),
            csv,
        })
    };

    Ok(vec![
        fig(
            "figure1",
            ("tnc", &indicators.tnc),
            ("ncoc", &indicators.ncoc),
        )?,
        fig(
            "figure2",
            ("tdr", &indicators.tdr),
            ("droc", &indicators.droc),
        )?,
    ])
}

/// Run the full replication: Table 1 grid, four model pipelines, figures.
pub fn run_replication(
    config: &DatasetConfig,
    opts: &RunOptions,
) -> Result<ReplicationReport, PipelineError> {
    config.validate().map_err(|e| PipelineError::Input(e.to_string()))?;
    let spec = ArdlSpec::replication_default();

    let metadata = Metadata {
        program: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        oil_variable: config.oil_variable.label().to_string(),
        robustness: config.oil_variable != OilVariable::Wti,
        config: ConfigEcho {
            who_path: config.who_path.display().to_string(),
            epu_path: config.epu_path.display().to_string(),
            oil_path: config.active_oil_path().display().to_string(),
            oil_variable: config.oil_variable.label().to_string(),
            sample_start: config.sample_start.to_string(),
            sample_end: config.sample_end.to_string(),
            trim_leading_nonpositive: config.trim_leading_nonpositive,
            calendar: match config.alignment.calendar {
                crate::series::Calendar::Intersection => "intersection".to_string(),
                crate::series::Calendar::DependentVariableDates => {
                    "dependent-variable-dates".to_string()
                }
            },
            covid_report_offset: config.alignment.covid_report_offset,
            bg_lags: opts.bg_lags,
            arch_lags: opts.arch_lags,
            max_p: spec.max_p,
            max_q: spec.max_q,
        },
        data_hashes: DataHashes {
            who_sha256: sha256_file(&config.who_path)?,
            epu_sha256: sha256_file(&config.epu_path)?,
            oil_sha256: sha256_file(config.active_oil_path())?,
        },
    };

    let table1 = build_table1(config, opts)?;

    let mut table2 = Vec::new();
    let mut table3 = Vec::new();
    let mut model_errors = Vec::new();
    for ind in CovidIndicator::ALL {
        match run_model(config, ind, opts) {
            Ok((_, t2, t3)) => {
                table2.push(t2);
                table3.push(t3);
            }
            Err(e) => model_errors.push(ModelError {
                model: ind.label().to_string(),
                error: e.to_string(),
            }),
        }
    }

    let figures = build_figures(config)?;

    Ok(ReplicationReport {
        metadata,
        table1,
        table2,
        table3,
        figures,
        model_errors,
    })
}

/// Input validation summary for the `validate` command.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FileSummary {
    pub path: String,
    pub rows: usize,
    pub first_date: String,
    pub last_date: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct NonPositiveInfo {
    pub indicator: String,
    pub count: usize,
    pub first_date: String,
    pub last_date: String,
    pub leading: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ValidationSummary {
    pub who: FileSummary,
    pub epu: FileSummary,
    pub oil: FileSummary,
    pub cumulative_violations: Vec<String>,
    pub non_positive_observations: Vec<NonPositiveInfo>,
    pub clean: bool,
}

pub fn validate(config: &DatasetConfig) -> Result<ValidationSummary, PipelineError> {
    config.validate().map_err(|e| PipelineError::Input(e.to_string()))?;
    let who = load_who(&config.who_path)?;
    if who.is_empty() {
        return Err(PipelineError::Input(format!(
            "{}: no records",
            config.who_path.display()
        )));
    }
    let epu = load_value_series(&config.epu_path, "epu", "EPU")?;
    let oil = load_value_series(config.active_oil_path(), "price", "OIL")?;

    let who_summary = FileSummary {
        path: config.who_path.display().to_string(),
        rows: who.len(),
        first_date: who[0].report_date.to_string(),
        last_date: who[who.len() - 1].report_date.to_string(),
    };
    let epu_summary = FileSummary {
        path: config.epu_path.display().to_string(),
        rows: epu.len(),
        first_date: epu.first_date().to_string(),
        last_date: epu.last_date().to_string(),
    };
    let oil_summary = FileSummary {
        path: config.active_oil_path().display().to_string(),
        rows: oil.len(),
        first_date: oil.first_date().to_string(),
        last_date: oil.last_date().to_string(),
    };

    let violations: Vec<String> = cumulative_violations(&who)
        .into_iter()
        .map(|(date, column)| format!("{date} {column}"))
        .collect();

    let mut non_positive = Vec::new();
    if violations.is_empty() {
        let indicators = build_indicators(&who)?;
        for ind in CovidIndicator::ALL {
            let series = indicators.get(ind);
            let zero_dates: Vec<_> = series
                .observations()
                .iter()
                .filter(|(_, v)| *v <= 0.0)
                .map(|(d, _)| *d)
                .collect();
            if zero_dates.is_empty() {
                continue;
            }
            let first_positive = series
                .observations()
                .iter()
                .position(|(_, v)| *v > 0.0)
                .unwrap_or(series.len());
            let leading = zero_dates.len() == first_positive;
            non_positive.push(NonPositiveInfo {
                indicator: ind.label().to_string(),
                count: zero_dates.len(),
                first_date: zero_dates[0].to_string(),
                last_date: zero_dates[zero_dates.len() - 1].to_string(),
                leading,
            });
        }
    }

    let clean = violations.is_empty();
    Ok(ValidationSummary {
        who: who_summary,
        epu: epu_summary,
        oil: oil_summary,
        cumulative_violations: violations,
        non_positive_observations: non_positive,
        clean,
    })
}

// ---------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------

fn fmt3(v: f64) -> String {
    format!("{v:.3}")
}

fn stat_with_stars(v: f64, stars: &str) -> String {
    format!("{}{}", fmt3(v), stars)
}

pub fn render_validation(v: &ValidationSummary) -> String {
    let mut out = String::new();
    out.push_str("Input validation\n================\n");
    for (label, s) in [("WHO", &v.who), ("EPU", &v.epu), ("OIL", &v.oil)] {
        out.push_str(&format!(
            "{label:4} {:>4} rows  {} .. {}  {}\n",
            s.rows, s.first_date, s.last_date, s.path
        ));
    }
    if v.cumulative_violations.is_empty() {
        out.push_str("Cumulative monotonicity: OK\n");
    } else {
        out.push_str("Cumulative monotonicity violations:\n");
        for viol in &v.cumulative_violations {
            out.push_str(&format!("  {viol}\n"));
        }
    }
    if !v.non_positive_observations.is_empty() {
        out.push_str("Non-positive indicator observations (dropped before logs when trimming is enabled):\n");
        for info in &v.non_positive_observations {
            out.push_str(&format!(
                "  {}: {} observation(s) {} .. {}{}\n",
                info.indicator,
                info.count,
                info.first_date,
                info.last_date,
                if info.leading { " (leading)" } else { "" }
            ));
        }
    }
    out.push_str(if v.clean {
        "Verdict: CLEAN\n"
    } else {
        "Verdict: VIOLATIONS FOUND\n"
    });
    out
}

pub fn render_adf(variable: &str, differenced: bool, cell: &AdfCell) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "ADF unit-root test: {variable}{}\n",
        if differenced { " (first difference)" } else { "" }
    ));
    out.push_str(&format!(
        "  statistic:        {}\n",
        stat_with_stars(cell.statistic, &cell.significance)
    ));
    out.push_str(&format!("  chosen lag (AIC): {}\n", cell.chosen_lag));
    out.push_str(&format!("  observations:     {}\n", cell.n_effective));
    out.push_str(&format!(
        "  critical values:  1% {}  5% {}  10% {}\n",
        fmt3(cell.cv1),
        fmt3(cell.cv5),
        fmt3(cell.cv10)
    ));
    out
}

pub fn render_report_text(report: &ReplicationReport) -> String {
    let mut out = String::new();
    let meta = &report.metadata;
    out.push_str(&format!(
        "{} v{} replication run ({} oil series)\n",
        meta.program, meta.version, meta.oil_variable
    ));
    if meta.robustness {
        out.push_str(
            "ROBUSTNESS RUN: alternative oil series; headline tables use WTI.\n",
        );
    }
    out.push_str(&format!(
        "Sample window {} .. {}\n\n",
        meta.config.sample_start, meta.config.sample_end
    ));

    out.push_str("Table 1. ADF unit root tests\n");
    out.push_str(&format!(
        "{:<8} {:>14} {:>6} {:>18} {:>6}\n",
        "Variable", "Level", "lag", "First difference", "lag"
    ));
    for row in &report.table1 {
        out.push_str(&format!(
            "{:<8} {:>14} {:>6} {:>18} {:>6}\n",
            row.variable,
            stat_with_stars(row.level.statistic, &row.level.significance),
            row.level.chosen_lag,
            stat_with_stars(
                row.first_difference.statistic,
                &row.first_difference.significance
            ),
            row.first_difference.chosen_lag,
        ));
    }
    out.push_str(
        "Notes: ***, **, * mean significance at 1%, 5%, 10%; lag chosen by AIC.\n\n",
    );

    out.push_str("Table 2. Bounds test results (5% critical values)\n");
    out.push_str(&format!(
        "{:<8} {:>12} {:>12} {:>12}  {}\n",
        "Model", "F-statistic", "Lower I(0)", "Upper I(1)", "Conclusion"
    ));
    for row in &report.table2 {
        out.push_str(&format!(
            "{:<8} {:>12} {:>12} {:>12}  {}\n",
            row.model,
            fmt3(row.f_statistic),
            fmt3(row.lower_i0),
            fmt3(row.upper_i1),
            row.decision
        ));
    }
    out.push('\n');

    out.push_str("Table 3. ARDL estimation results\n");
    for model in &report.table3 {
        out.push_str(&render_table3_model(model));
    }

    if !report.model_errors.is_empty() {
        out.push_str("\nModel failures\n");
        for err in &report.model_errors {
            out.push_str(&format!("  {}: {}\n", err.model, err.error));
        }
    }
    out
}

pub fn render_table3_model(model: &Table3Model) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "\nModel {} (sample {} .. {}, n = {}, ARDL p = {}, q_covid = {}, q_oil = {})\n",
        model.model,
        model.sample_start,
        model.sample_end,
        model.nobs,
        model.selected_p,
        model.selected_q_covid,
        model.selected_q_oil
    ));
    if model.trimmed_leading > 0 {
        out.push_str(&format!(
            "  ({} leading non-positive indicator observation(s) dropped before logs)\n",
            model.trimmed_leading
        ));
    }
    out.push_str("  Long-run equation\n");
    for cell in &model.long_run {
        out.push_str(&format!(
            "    {:<12} {:>10}  (se {}, t {})\n",
            cell.term,
            stat_with_stars(cell.coefficient, &cell.significance),
            fmt3(cell.standard_error),
            fmt3(cell.t_statistic)
        ));
    }
    out.push_str("  Short-run equation\n");
    for cell in &model.short_run {
        out.push_str(&format!(
            "    {:<12} {:>10}  (se {}, t {})\n",
            cell.term,
            stat_with_stars(cell.coefficient, &cell.significance),
            fmt3(cell.standard_error),
            fmt3(cell.t_statistic)
        ));
    }
    out.push_str(&format!(
        "    {:<12} {:>10}  (se {}, t {})\n",
        "ECT(t-1)",
        stat_with_stars(model.ect.coefficient, &model.ect.significance),
        fmt3(model.ect.standard_error),
        fmt3(model.ect.t_statistic)
    ));
    out.push_str("  Tests on residuals\n");
    for d in &model.diagnostics {
        out.push_str(&format!(
            "    {:<16} lags {:<2} statistic {:>8}  p {:>6}  {}\n",
            d.test,
            d.lags,
            fmt3(d.statistic),
            fmt3(d.p_value),
            d.verdict
        ));
    }
    out.push_str(&format!(
        "  Two-step gap |ECT - delta_dep| = {}\n",
        fmt3(model.ect_delta_gap)
    ));
    out
}

/// CSV renderings of the three tables for `--format csv`.
pub fn render_table_csvs(report: &ReplicationReport) -> Vec<(String, String)> {
    let mut t1 = String::from(
        "variable,level_statistic,level_lag,level_significance,diff_statistic,diff_lag,diff_significance\n",
    );
    for r in &report.table1 {
        t1.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.variable,
            render_number(r.level.statistic),
            r.level.chosen_lag,
            r.level.significance,
            render_number(r.first_difference.statistic),
            r.first_difference.chosen_lag,
            r.first_difference.significance
        ));
    }

    let mut t2 = String::from("model,f_statistic,k,lower_i0,upper_i1,decision\n");
    for r in &report.table2 {
        t2.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.model,
            render_number(r.f_statistic),
            r.k,
            render_number(r.lower_i0),
            render_number(r.upper_i1),
            r.decision
        ));
    }

    let mut t3 = String::from(
        "model,block,term,coefficient,standard_error,t_statistic,p_value,significance\n",
    );
    for m in &report.table3 {
        for cell in &m.long_run {
            t3.push_str(&format!(
                "{},long_run,{},{},{},{},{},{}\n",
                m.model,
                cell.term,
                render_number(cell.coefficient),
                render_number(cell.standard_error),
                render_number(cell.t_statistic),
                render_number(cell.p_value),
                cell.significance
            ));
        }
        for cell in &m.short_run {
            t3.push_str(&format!(
                "{},short_run,{},{},{},{},{},{}\n",
                m.model,
                cell.term,
                render_number(cell.coefficient),
                render_number(cell.standard_error),
                render_number(cell.t_statistic),
                render_number(cell.p_value),
                cell.significance
            ));
        }
        t3.push_str(&format!(
            "{},ect,{},{},{},{},{},{}\n",
            m.model,
            m.ect.term,
            render_number(m.ect.coefficient),
            render_number(m.ect.standard_error),
            render_number(m.ect.t_statistic),
            render_number(m.ect.p_value),
            m.ect.significance
        ));
    }

    vec![
        ("table1.csv".to_string(), t1),
        ("table2.csv".to_string(), t2),
        ("table3.csv".to_string(), t3),
    ]
}

pub fn report_to_json(report: &ReplicationReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Write figure CSVs into `out_dir`.
pub fn write_figures(figures: &[FigureData], out_dir: &Path) -> Result<(), PipelineError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| PipelineError::Estimation(format!("cannot create {}: {e}", out_dir.display())))?;
    for fig in figures {
        let path = out_dir.join(&fig.filename);
        std::fs::write(&path, fig.csv.as_bytes())
            .map_err(|e| PipelineError::Estimation(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
