//! Bit-stable record emission. CSV rows use 17-significant-digit scientific
//! floats, '.' decimals and LF line endings; JSON objects are emitted with
//! canonically ordered keys. Identical records always serialize identically.

use std::io::Write;

use crate::config::FormatCfg;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Value {
    pub fn csv(&self) -> String {
        match self {
            Value::Float(x) => format_float(*x),
            Value::Int(i) => i.to_string(),
            Value::Text(s) => s.replace(',', ";"),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            // route floats through their 17-digit form so JSON and CSV agree
            Value::Float(x) if x.is_finite() => {
                serde_json::from_str(&format_float(*x)).unwrap_or(serde_json::Value::Null)
            }
            Value::Float(_) => serde_json::Value::Null,
            Value::Int(i) => serde_json::Value::from(*i),
            Value::Text(s) => serde_json::Value::from(s.as_str()),
            Value::Bool(b) => serde_json::Value::from(*b),
        }
    }
}

/// 17 significant digits round-trip every f64 exactly.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

/// One output row: ordered (column, value) pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    pub fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Record { fields: Vec::new() }
    }

    pub fn float(mut self, key: &str, v: f64) -> Self {
        self.fields.push((key.to_string(), Value::Float(v)));
        self
    }

    pub fn int(mut self, key: &str, v: i64) -> Self {
        self.fields.push((key.to_string(), Value::Int(v)));
        self
    }

    pub fn text(mut self, key: &str, v: &str) -> Self {
        self.fields.push((key.to_string(), Value::Text(v.to_string())));
        self
    }

    pub fn bool(mut self, key: &str, v: bool) -> Self {
        self.fields.push((key.to_string(), Value::Bool(v)));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn columns(&self) -> Vec<String> {
        self.fields.iter().map(|(k, _)| k.clone()).collect()
    }
}

/// Writes the header for a known column set.
pub fn write_csv_header(out: &mut dyn Write, columns: &[String]) -> Result<(), CliError> {
    writeln!(out, "{}", columns.join(",")).map_err(CliError::from)
}

pub fn write_csv_record(
    out: &mut dyn Write,
    columns: &[String],
    record: &Record,
) -> Result<(), CliError> {
    let row: Vec<String> = columns
        .iter()
        .map(|c| record.get(c).map(Value::csv).unwrap_or_default())
        .collect();
    writeln!(out, "{}", row.join(",")).map_err(CliError::from)
}

fn record_to_json(record: &Record) -> serde_json::Value {
    // BTreeMap keeps keys canonically sorted
    let map: std::collections::BTreeMap<String, serde_json::Value> = record
        .fields
        .iter()
        .map(|(k, v)| (k.clone(), v.json()))
        .collect();
    serde_json::to_value(map).expect("record serialization cannot fail")
}

/// Emits records to a writer in the requested format. An empty record list
/// still produces the CSV header when columns are known.
pub fn emit(
    out: &mut dyn Write,
    records: &[Record],
    columns: &[String],
    format: FormatCfg,
) -> Result<(), CliError> {
    match format {
        FormatCfg::Csv => {
            write_csv_header(out, columns)?;
            for r in records {
                write_csv_record(out, columns, r)?;
            }
        }
        FormatCfg::Json => {
            let array: Vec<serde_json::Value> = records.iter().map(record_to_json).collect();
            serde_json::to_writer_pretty(&mut *out, &array)
                .map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Parses a JSON emission back into records (canonical key order).
pub fn parse_json_records(text: &str) -> Result<Vec<Record>, CliError> {
    let array: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_str(text)
        .map_err(|e| CliError::Io(format!("cannot parse records: {e}")))?;
    Ok(array
        .into_iter()
        .map(|map| Record {
            fields: map
                .into_iter()
                .map(|(k, v)| {
                    let value = match v {
                        serde_json::Value::Bool(b) => Value::Bool(b),
                        serde_json::Value::String(s) => Value::Text(s),
                        serde_json::Value::Number(n) => {
                            if let Some(i) = n.as_i64() {
                                Value::Int(i)
                            } else {
                                Value::Float(n.as_f64().unwrap_or(f64::NAN))
                            }
                        }
                        serde_json::Value::Null => Value::Float(f64::NAN),
                        other => Value::Text(other.to_string()),
                    };
                    (k, value)
                })
                .collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[1.0, -0.1234567890123456, 3.141592653589793e-17, 1e300, 200.0 / 3.0] {
            let s = format_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
            assert!(s.contains('.'));
        }
    }

    #[test]
    fn empty_emission_is_header_only() {
        let mut buf = Vec::new();
        emit(
            &mut buf,
            &[],
            &["a".to_string(), "b".to_string()],
            FormatCfg::Csv,
        )
        .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n");
    }

    #[test]
    fn one_record_makes_two_lines() {
        let mut buf = Vec::new();
        let rec = Record::new().float("a", 1.5).int("b", 7);
        emit(&mut buf, &[rec.clone()], &rec.columns(), FormatCfg::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn json_round_trip_preserves_records() {
        let rec = Record::new()
            .float("energy", -12.345678901234567)
            .int("count", 3)
            .text("regime", "Rapid")
            .bool("converged", true);
        let mut buf = Vec::new();
        emit(&mut buf, &[rec.clone()], &rec.columns(), FormatCfg::Json).unwrap();
        let parsed = parse_json_records(&String::from_utf8(buf).unwrap()).unwrap();
        assert_eq!(parsed.len(), 1);
        for (k, v) in &rec.fields {
            let got = parsed[0].get(k).unwrap();
            match (v, got) {
                (Value::Float(a), Value::Float(b)) => assert_eq!(a.to_bits(), b.to_bits()),
                (a, b) => assert_eq!(a, b),
            }
        }
    }
}
