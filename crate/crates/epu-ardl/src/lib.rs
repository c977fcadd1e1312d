//! Time-series econometrics for daily uncertainty data: dated series and
//! panel alignment, OLS with full inference, ADF unit-root tests with
//! AIC lag selection, ARDL bounds testing with error-correction estimation,
//! and residual diagnostics, plus the data pipeline that builds the
//! EPU / COVID-19 / crude-oil replication panel from CSV snapshots.

pub mod ardl;
pub mod config;
pub mod diagnostics;
pub mod dist;
pub mod ingest;
pub mod linalg;
pub mod replicate;
pub mod series;
pub mod unitroot;

pub use ardl::{ArdlFit, ArdlSpec, BoundsResult, CointDecision, UecmFit};
pub use dist::{DeterministicSpec, Significance};
pub use ingest::{CovidIndicator, DatasetConfig, IndicatorSet, WhoDailyRecord};
pub use linalg::{DesignMatrix, RegressionResult};
pub use series::{AlignmentPolicy, Calendar, DatedSeries, Panel};
pub use unitroot::AdfResult;
