//! Command reports: named records whose values each carry a provenance tag,
//! rendered as text or as a versioned JSON document.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use symfam::bounds::Provenance;

/// Version tag of the JSON report layout.
pub const SCHEMA: &str = "symfam-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Field {
    pub key: String,
    pub value: Value,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub name: String,
    pub fields: Vec<Field>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandReport {
    pub schema: String,
    pub command: Vec<String>,
    pub records: Vec<Record>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub runtime_seconds: f64,
    pub exit_code: i32,
}

impl CommandReport {
    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = writeln!(out, "[{}]", r.name);
            for f in &r.fields {
                let v = match &f.value {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(out, "  {} = {} ({})", f.key, v, f.provenance);
            }
        }
        if let Some(t) = &self.table {
            out.push_str(&table_csv(t));
        }
        out
    }
}

impl Record {
    pub fn new(name: &str) -> Self {
        Record {
            name: name.to_string(),
            fields: Vec::new(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.key == key)
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>, tag: Provenance) -> Self {
        self.fields.push(Field {
            key: key.to_string(),
            value: value.into(),
            provenance: tag.tag().to_string(),
        });
        self
    }

    pub fn exact(self, key: &str, value: impl Into<Value>) -> Self {
        self.with(key, value, Provenance::Exact)
    }

    pub fn big(self, key: &str, value: &BigUint, tag: Provenance) -> Self {
        self.with(key, big_value(value), tag)
    }

    pub fn rational(self, key: &str, value: &BigRational, tag: Provenance) -> Self {
        self.with(key, value.to_string(), tag)
    }
}

/// Integers that fit in `u64` as JSON numbers, larger ones as decimal strings.
pub fn big_value(v: &BigUint) -> Value {
    match u64::try_from(v) {
        Ok(x) => Value::from(x),
        Err(_) => Value::from(v.to_string()),
    }
}

pub fn table_csv(t: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.header).expect("in-memory write");
    for row in &t.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
