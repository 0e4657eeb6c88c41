//! Output records and their three renderings.

use std::fmt;
use std::io::Write;

use clap::ValueEnum;
use ctcsim::heisenberg::Expectation;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One Bloch component, or the `singular` marker.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Component {
    Value(f64),
    Singular,
}

impl From<Expectation> for Component {
    fn from(e: Expectation) -> Self {
        match e {
            Expectation::Value(v) => Component::Value(v),
            Expectation::Singular => Component::Singular,
        }
    }
}

impl Component {
    pub fn value(self) -> Option<f64> {
        match self {
            Component::Value(v) => Some(v),
            Component::Singular => None,
        }
    }
}

impl Serialize for Component {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Component::Value(v) => s.serialize_f64(v + 0.0),
            Component::Singular => s.serialize_str("singular"),
        }
    }
}

struct ComponentVisitor;

impl Visitor<'_> for ComponentVisitor {
    type Value = Component;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a finite number or \"singular\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Component, E> {
        Ok(Component::Value(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Component, E> {
        Ok(Component::Value(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Component, E> {
        Ok(Component::Value(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Component, E> {
        if v == "singular" {
            return Ok(Component::Singular);
        }
        v.parse().map(Component::Value).map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
    }
}

impl<'de> Deserialize<'de> for Component {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ComponentVisitor)
    }
}

/// One engine's answer for one preparation. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario: String,
    pub model: Model,
    pub alpha2: f64,
    pub theta: f64,
    pub x: Component,
    pub y: Component,
    pub z: Component,
    /// Largest fixed-point residual (density-matrix model only).
    pub residual: Option<f64>,
    /// Solver iterations (density-matrix model only).
    pub iterations: Option<usize>,
    /// `|`-separated status flags, empty when there are none.
    pub flags: String,
    /// Cross-model trace distance (compare mode only).
    pub trace_distance: Option<f64>,
}

pub const FIELDS: [&str; 11] =
    ["scenario", "model", "alpha2", "theta", "x", "y", "z", "residual", "iterations", "flags", "trace_distance"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Db,
    Heisenberg,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Db => "db",
            Model::Heisenberg => "heisenberg",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned human-readable columns.
    #[default]
    Table,
    Csv,
    /// One JSON object per line.
    Records,
}

/// Fixed six-decimal cell; values that round to zero print without a sign.
fn fixed(v: f64) -> String {
    let s = format!("{v:.6}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn cell_num(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), fixed)
}

fn cell_component(c: Component) -> String {
    match c {
        Component::Value(v) => fixed(v),
        Component::Singular => "singular".to_string(),
    }
}

fn table_row(r: &RunRecord) -> [String; 11] {
    [
        r.scenario.clone(),
        r.model.to_string(),
        fixed(r.alpha2),
        fixed(r.theta),
        cell_component(r.x),
        cell_component(r.y),
        cell_component(r.z),
        r.residual.map_or_else(|| "-".to_string(), |v| format!("{v:.1e}")),
        r.iterations.map_or_else(|| "-".to_string(), |n| n.to_string()),
        if r.flags.is_empty() { "-".to_string() } else { r.flags.clone() },
        cell_num(r.trace_distance),
    ]
}

pub fn write_records(format: Format, records: &[RunRecord], out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if records.is_empty() {
                w.write_record(FIELDS)?;
            }
            for r in records {
                w.serialize(r)?;
            }
            w.flush()
        }
        Format::Records => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
            Ok(())
        }
        Format::Table => {
            let rows: Vec<[String; 11]> = records.iter().map(table_row).collect();
            let mut widths = FIELDS.map(str::len);
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: &[&str]| {
                let padded: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            writeln!(out, "{}", line(&FIELDS))?;
            for row in &rows {
                writeln!(out, "{}", line(&row.iter().map(String::as_str).collect::<Vec<_>>()))?;
            }
            Ok(())
        }
    }
}

/// Parses CSV produced by [`write_records`].
pub fn read_csv(text: &str) -> Result<Vec<RunRecord>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}
