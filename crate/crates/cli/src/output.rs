//! CSV and JSON record sets.
//!
//! CSV carries only the records, with a fixed header row. JSON wraps the
//! same records with run metadata. Floats are written in shortest
//! round-trip form, so parsing either format recovers the exact values.

use crate::CliError;
use eacc_core::experiment::{ErrorMethod, SweepRecord};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::str::FromStr;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SWEEP_HEADER: [&str; 5] = ["p_exp", "p_effective", "I_measured", "I_sigma", "C_theory"];
pub const CAPACITY_HEADER: [&str; 2] = ["p", "C_theory"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Usage(format!(
                "unknown format {other:?} (csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacitySample {
    pub p: f64,
    #[serde(rename = "C_theory")]
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record_type", content = "records", rename_all = "lowercase")]
pub enum Records {
    Capacity(Vec<CapacitySample>),
    Sweep(Vec<SweepRecord>),
}

impl Records {
    pub fn len(&self) -> usize {
        match self {
            Records::Capacity(r) => r.len(),
            Records::Sweep(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Parameters the records were produced with.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub visibility: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_exp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mean_counts: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error_method: Option<ErrorMethod>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bootstrap_resamples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub index: usize,
    pub p_exp: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecordSet {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config: ConfigEcho,
    /// Raw coincidence counts, rows = input, columns = projection.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counts: Option<[[u64; 4]; 4]>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<PointFailure>,
    #[serde(flatten)]
    pub records: Records,
}

impl OutputRecordSet {
    pub fn new(command: &str, seed: Option<u64>, config: ConfigEcho, records: Records) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            seed,
            config,
            counts: None,
            failures: Vec::new(),
            records,
        }
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        String::from_utf8(buf).map_err(|e| CliError::Serialization(e.to_string()))
    }

    fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let ser = |e: csv::Error| CliError::Serialization(e.to_string());
        match &self.records {
            Records::Capacity(rows) => {
                w.write_record(CAPACITY_HEADER).map_err(ser)?;
                rows.iter().try_for_each(|r| w.serialize(r)).map_err(ser)?;
            }
            Records::Sweep(rows) => {
                w.write_record(SWEEP_HEADER).map_err(ser)?;
                rows.iter().try_for_each(|r| w.serialize(r)).map_err(ser)?;
            }
        }
        w.flush()
            .map_err(|e| CliError::Serialization(e.to_string()))
    }

    fn write_json<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        serde_json::to_writer_pretty(&mut out, self)
            .map_err(|e| CliError::Serialization(e.to_string()))?;
        out.write_all(b"\n")
            .map_err(|e| CliError::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Serialization(e.to_string()))
    }
}

fn check_header(reader: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<(), CliError> {
    let headers = reader
        .headers()
        .map_err(|e| CliError::Serialization(e.to_string()))?;
    if !headers.iter().eq(expected.iter().copied()) {
        return Err(CliError::Serialization(format!(
            "unexpected CSV header {headers:?}, expected {expected:?}"
        )));
    }
    Ok(())
}

/// Parses the CSV produced for `simulate` and `sweep`.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRecord>, CliError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    check_header(&mut reader, &SWEEP_HEADER)?;
    reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Serialization(e.to_string()))
}

/// Parses the CSV produced for `capacity`.
pub fn parse_capacity_csv(text: &str) -> Result<Vec<CapacitySample>, CliError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    check_header(&mut reader, &CAPACITY_HEADER)?;
    reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Serialization(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep_set(records: Vec<SweepRecord>) -> OutputRecordSet {
        OutputRecordSet::new(
            "sweep",
            Some(7),
            ConfigEcho::default(),
            Records::Sweep(records),
        )
    }

    #[test]
    fn csv_header_and_line_endings() {
        let set = sweep_set(vec![SweepRecord {
            p_exp: 0.1,
            p_effective: 0.139,
            i_measured: 1.2,
            i_uncertainty: 0.01,
            capacity_theory: 1.21,
        }]);
        let text = set.render(Format::Csv).unwrap();
        assert_eq!(
            text,
            "p_exp,p_effective,I_measured,I_sigma,C_theory\n0.1,0.139,1.2,0.01,1.21\n"
        );
    }

    #[test]
    fn capacity_header() {
        let set = OutputRecordSet::new(
            "capacity",
            None,
            ConfigEcho::default(),
            Records::Capacity(vec![CapacitySample {
                p: 0.0,
                capacity: 2.0,
            }]),
        );
        assert_eq!(set.render(Format::Csv).unwrap(), "p,C_theory\n0.0,2.0\n");
    }

    #[test]
    fn json_has_schema_version_and_records() {
        let set = sweep_set(vec![]);
        let v: serde_json::Value =
            serde_json::from_str(&set.render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["record_type"], "sweep");
        assert!(v["records"].as_array().unwrap().is_empty());
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(parse_sweep_csv("a,b,c,d,e\n1,2,3,4,5\n").is_err());
        assert!(parse_capacity_csv("p_exp,p_effective,I_measured,I_sigma,C_theory\n").is_err());
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
