//! Flat `key = value` configuration files.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment; blank
//! lines are ignored. Relative paths are resolved against the directory
//! containing the config file.

use crate::ingest::{DatasetConfig, OilVariable};
use crate::series::{AlignmentPolicy, Calendar};
use chrono::NaiveDate;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: PathBuf, line: usize },
    #[error("{path}:{line}: unknown key `{key}`")]
    UnknownKey {
        path: PathBuf,
        line: usize,
        key: String,
    },
    #[error("{path}:{line}: duplicate key `{key}`")]
    DuplicateKey {
        path: PathBuf,
        line: usize,
        key: String,
    },
    #[error("missing required key `{key}`")]
    MissingKey { key: String },
    #[error("key `{key}`: invalid value `{value}` ({expected})")]
    InvalidValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("sample_start must precede sample_end")]
    InvertedWindow,
    #[error("covid_report_offset must lie in [-3, 3]")]
    OffsetOutOfRange,
}

const KNOWN_KEYS: &[&str] = &[
    "who_path",
    "epu_path",
    "oil_path",
    "brent_path",
    "oil_variable",
    "sample_start",
    "sample_end",
    "trim_leading_nonpositive",
    "calendar",
    "covid_report_offset",
];

/// Parse a config file into a [`DatasetConfig`].
pub fn load_config(path: &Path) -> Result<DatasetConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));

    let mut values: BTreeMap<String, String> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax {
            path: path.to_path_buf(),
            line,
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey {
                path: path.to_path_buf(),
                line,
                key,
            });
        }
        if values.insert(key.clone(), value).is_some() {
            return Err(ConfigError::DuplicateKey {
                path: path.to_path_buf(),
                line,
                key,
            });
        }
    }

    let require = |key: &str| -> Result<&String, ConfigError> {
        values.get(key).ok_or_else(|| ConfigError::MissingKey {
            key: key.to_string(),
        })
    };
    let parse_date = |key: &str, value: &str| -> Result<NaiveDate, ConfigError> {
        NaiveDate::parse_from_str(value, "%Y-%m-%d").map_err(|_| ConfigError::InvalidValue {
            key: key.to_string(),
            value: value.to_string(),
            expected: "ISO date YYYY-MM-DD",
        })
    };
    let resolve = |value: &str| -> PathBuf {
        let p = PathBuf::from(value);
        if p.is_absolute() {
            p
        } else {
            base.join(p)
        }
    };

    let who_path = resolve(require("who_path")?);
    let epu_path = resolve(require("epu_path")?);
    let oil_path = resolve(require("oil_path")?);
    let brent_path = values.get("brent_path").map(|v| resolve(v));

    let oil_variable = match values.get("oil_variable").map(String::as_str) {
        None => OilVariable::Wti,
        Some(v) => OilVariable::parse(v).ok_or_else(|| ConfigError::InvalidValue {
            key: "oil_variable".into(),
            value: v.to_string(),
            expected: "WTI or BRENT",
        })?,
    };

    let sample_start = parse_date("sample_start", require("sample_start")?)?;
    let sample_end = parse_date("sample_end", require("sample_end")?)?;
    if sample_start >= sample_end {
        return Err(ConfigError::InvertedWindow);
    }

    let trim_leading_nonpositive = match values
        .get("trim_leading_nonpositive")
        .map(String::as_str)
    {
        None => true,
        Some("true") => true,
        Some("false") => false,
        Some(v) => {
            return Err(ConfigError::InvalidValue {
                key: "trim_leading_nonpositive".into(),
                value: v.to_string(),
                expected: "true or false",
            })
        }
    };

    let calendar = match values.get("calendar").map(String::as_str) {
        None | Some("intersection") => Calendar::Intersection,
        Some("dependent-variable-dates") => Calendar::DependentVariableDates,
        Some(v) => {
            return Err(ConfigError::InvalidValue {
                key: "calendar".into(),
                value: v.to_string(),
                expected: "intersection or dependent-variable-dates",
            })
        }
    };

    let covid_report_offset = match values.get("covid_report_offset") {
        None => 1,
        Some(v) => v.parse::<i64>().map_err(|_| ConfigError::InvalidValue {
            key: "covid_report_offset".into(),
            value: v.to_string(),
            expected: "integer",
        })?,
    };
    if covid_report_offset.abs() > 3 {
        return Err(ConfigError::OffsetOutOfRange);
    }

    Ok(DatasetConfig {
        who_path,
        epu_path,
        oil_path,
        brent_path,
        oil_variable,
        sample_start,
        sample_end,
        trim_leading_nonpositive,
        alignment: AlignmentPolicy {
            calendar,
            covid_report_offset,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn parses_full_config_with_comments() {
        let f = write_config(
            "# replication inputs\n\
             who_path = who.csv\n\
             epu_path = epu.csv   # daily index\n\
             oil_path = wti.csv\n\
             brent_path = brent.csv\n\
             oil_variable = WTI\n\
             sample_start = 2020-01-21\n\
             sample_end = 2020-03-13\n\
             trim_leading_nonpositive = true\n\
             calendar = intersection\n\
             covid_report_offset = 1\n",
        );
        let cfg = load_config(f.path()).unwrap();
        assert_eq!(cfg.oil_variable, OilVariable::Wti);
        assert_eq!(cfg.alignment.covid_report_offset, 1);
        assert!(cfg.trim_leading_nonpositive);
        assert!(cfg.who_path.ends_with("who.csv"));
        // Relative paths resolve against the config directory.
        assert_eq!(cfg.who_path.parent(), f.path().parent());
    }

    #[test]
    fn rejects_unknown_key_and_bad_values() {
        let f = write_config("who_path = a\nepu_path = b\noil_path = c\nsample_start = 2020-01-21\nsample_end = 2020-03-13\nmystery = 1\n");
        assert!(matches!(
            load_config(f.path()),
            Err(ConfigError::UnknownKey { key, .. }) if key == "mystery"
        ));

        let f = write_config("who_path = a\nepu_path = b\noil_path = c\nsample_start = 2020-13-01\nsample_end = 2020-03-13\n");
        assert!(matches!(
            load_config(f.path()),
            Err(ConfigError::InvalidValue { .. })
        ));
    }

    #[test]
    fn rejects_missing_key_and_inverted_window() {
        let f = write_config("who_path = a\nepu_path = b\nsample_start = 2020-01-21\nsample_end = 2020-03-13\n");
        assert!(matches!(
            load_config(f.path()),
            Err(ConfigError::MissingKey { key }) if key == "oil_path"
        ));

        let f = write_config("who_path = a\nepu_path = b\noil_path = c\nsample_start = 2020-03-13\nsample_end = 2020-01-21\n");
        assert!(matches!(
            load_config(f.path()),
            Err(ConfigError::InvertedWindow)
        ));
    }

    #[test]
    fn rejects_out_of_range_offset() {
        let f = write_config("who_path = a\nepu_path = b\noil_path = c\nsample_start = 2020-01-21\nsample_end = 2020-03-13\ncovid_report_offset = 5\n");
        assert!(matches!(
            load_config(f.path()),
            Err(ConfigError::OffsetOutOfRange)
        ));
    }
}
