use clap::{Parser, Subcommand, ValueEnum};
use epu_ardl::config::load_config;
use epu_ardl::dist::DeterministicSpec;
use epu_ardl::ingest::{
    build_epu_oil_panel, build_panel, CovidIndicator, OilVariable, COL_COVID, COL_EPU, COL_OIL,
};
use epu_ardl::replicate::{
    self, apply_oil_override, build_figures, render_adf, render_report_text, render_validation,
    report_to_json, run_model, run_replication, write_figures, AdfCell, PipelineError, RunOptions,
};
use epu_ardl::series::first_difference;
use epu_ardl::unitroot::adf_test;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "epu-ardl",
    version,
    about = "ARDL bounds-testing pipeline for daily US economic policy uncertainty"
)]
struct Cli {
    /// Configuration file (one `key = value` per line).
    #[arg(long, global = true, default_value = "data/replication.conf")]
    config: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecArg {
    Constant,
    ConstantTrend,
    None,
}

impl From<SpecArg> for DeterministicSpec {
    fn from(v: SpecArg) -> Self {
        match v {
            SpecArg::Constant => DeterministicSpec::Constant,
            SpecArg::ConstantTrend => DeterministicSpec::ConstantTrend,
            SpecArg::None => DeterministicSpec::None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the input snapshots: row counts, date ranges, monotonicity.
    Validate,
    /// ADF unit-root test for one variable (EPU, WTI/BRENT, TNC, NCOC,
    /// TDR, DROC).
    Adf {
        variable: String,
        /// Test the first difference instead of the level.
        #[arg(long)]
        diff: bool,
        /// Maximum lag for AIC selection (default: Schwert rule).
        #[arg(long)]
        max_lag: Option<usize>,
        #[arg(long, value_enum, default_value = "constant")]
        spec: SpecArg,
    },
    /// One ARDL model pipeline: lag selection, bounds test, long-run and
    /// error-correction estimates, diagnostics.
    Ardl {
        /// COVID-19 indicator: TNC, NCOC, TDR, or DROC.
        #[arg(long)]
        indicator: String,
        #[arg(long, default_value_t = 2)]
        bg_lags: usize,
    },
    /// Full replication: ADF grid, four model pipelines, figure data.
    Replicate {
        /// Oil series override (WTI or BRENT).
        #[arg(long)]
        oil: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Directory for report and figure files.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        bg_lags: usize,
    },
    /// Write figure CSV payloads (levels, pre-log) for external plotting.
    Figures {
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(PipelineError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(PipelineError::Estimation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_oil(value: &str) -> Result<OilVariable, PipelineError> {
    OilVariable::parse(value)
        .ok_or_else(|| PipelineError::Input(format!("unknown oil variable `{value}`")))
}

fn run(cli: Cli) -> Result<ExitCode, PipelineError> {
    let mut config = load_config(&cli.config)?;

    match cli.command {
        Command::Validate => {
            let summary = replicate::validate(&config)?;
            print!("{}", render_validation(&summary));
            Ok(if summary.clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }

        Command::Adf {
            variable,
            diff,
            max_lag,
            spec,
        } => {
            let upper = variable.to_ascii_uppercase();
            let series = if upper == "EPU" || upper == config.oil_variable.label() {
                let panel = build_epu_oil_panel(&config)?;
                let col = if upper == "EPU" { COL_EPU } else { COL_OIL };
                panel.column_series(col).expect("column present")
            } else if let Some(ind) = CovidIndicator::parse(&upper) {
                let built = build_panel(&config, ind)?;
                built.panel.column_series(COL_COVID).expect("column present")
            } else {
                return Err(PipelineError::Input(format!(
                    "unknown variable `{variable}` (expected EPU, {}, TNC, NCOC, TDR, or DROC)",
                    config.oil_variable.label()
                )));
            };
            let series = if diff { first_difference(&series)? } else { series };
            let result = adf_test(&series, max_lag, spec.into())?;
            let cell: AdfCell = (&result).into();
            print!("{}", render_adf(&upper, diff, &cell));
            Ok(ExitCode::SUCCESS)
        }

        Command::Ardl { indicator, bg_lags } => {
            let ind = CovidIndicator::parse(&indicator).ok_or_else(|| {
                PipelineError::Input(format!(
                    "unknown indicator `{indicator}` (expected TNC, NCOC, TDR, or DROC)"
                ))
            })?;
            let opts = RunOptions {
                bg_lags,
                ..RunOptions::default()
            };
            let (fit, t2, t3) = run_model(&config, ind, &opts)?;
            println!(
                "Bounds test: F = {:.3}, bounds [{:.2}, {:.2}] at 5%, decision: {}",
                t2.f_statistic, t2.lower_i0, t2.upper_i1, t2.decision
            );
            println!(
                "Selected by AIC: p = {}, q_covid = {}, q_oil = {} (AIC {:.3})",
                t3.selected_p, t3.selected_q_covid, t3.selected_q_oil, fit.uecm.regression.aic
            );
            print!("{}", replicate::render_table3_model(&t3));
            Ok(ExitCode::SUCCESS)
        }

        Command::Replicate {
            oil,
            format,
            out,
            bg_lags,
        } => {
            if let Some(oil) = oil {
                apply_oil_override(&mut config, Some(parse_oil(&oil)?));
            }
            let opts = RunOptions {
                bg_lags,
                ..RunOptions::default()
            };
            let report = run_replication(&config, &opts)?;

            if let Some(dir) = &out {
                std::fs::create_dir_all(dir).map_err(|e| {
                    PipelineError::Estimation(format!("cannot create {}: {e}", dir.display()))
                })?;
                std::fs::write(dir.join("report.json"), report_to_json(&report)).map_err(
                    |e| PipelineError::Estimation(format!("cannot write report.json: {e}")),
                )?;
                write_figures(&report.figures, dir)?;
                if matches!(format, FormatArg::Csv) {
                    for (name, content) in replicate::render_table_csvs(&report) {
                        std::fs::write(dir.join(&name), content).map_err(|e| {
                            PipelineError::Estimation(format!("cannot write {name}: {e}"))
                        })?;
                    }
                }
                if matches!(format, FormatArg::Text) {
                    std::fs::write(dir.join("report.txt"), render_report_text(&report))
                        .map_err(|e| {
                            PipelineError::Estimation(format!("cannot write report.txt: {e}"))
                        })?;
                }
            }

            match format {
                FormatArg::Text => print!("{}", render_report_text(&report)),
                FormatArg::Json => println!("{}", report_to_json(&report)),
                FormatArg::Csv => {
                    if out.is_none() {
                        return Err(PipelineError::Input(
                            "--format csv requires --out <dir>".into(),
                        ));
                    }
                    println!("tables written");
                }
            }

            if report.model_errors.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }

        Command::Figures { out } => {
            let figures = build_figures(&config)?;
            write_figures(&figures, &out)?;
            for fig in &figures {
                println!("{} rows -> {}", fig.rows, out.join(&fig.filename).display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
