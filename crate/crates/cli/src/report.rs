//! Rendering of command results in the three output formats.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub enum Report {
    /// One object; `text` is the human-readable form.
    Record { json: Value, text: String },
    /// Rows sharing one header.
    Table { header: Vec<String>, rows: Vec<Vec<Value>> },
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_lines(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Report::Record { json, .. }, Format::Json) => format!("{}\n", serde_json::to_string_pretty(json).expect("json")),
            (Report::Record { text, .. }, Format::Text) => format!("{text}\n"),
            (Report::Record { json, .. }, Format::Csv) => match json {
                Value::Object(m) => {
                    let header: Vec<String> = m.keys().cloned().collect();
                    let row: Vec<String> = m.values().map(cell).collect();
                    csv_lines(&header, &[row])
                }
                other => csv_lines(&["value".to_string()], &[vec![cell(other)]]),
            },
            (Report::Table { header, rows }, Format::Json) => {
                let objs: Vec<Value> = rows
                    .iter()
                    .map(|r| Value::Object(header.iter().cloned().zip(r.iter().cloned()).collect::<Map<_, _>>()))
                    .collect();
                format!("{}\n", serde_json::to_string_pretty(&objs).expect("json"))
            }
            (Report::Table { header, rows }, Format::Csv) => {
                let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(cell).collect()).collect();
                csv_lines(header, &rows)
            }
            (Report::Table { header, rows }, Format::Text) => {
                let mut out = header.join("\t");
                out.push('\n');
                for r in rows {
                    out.push_str(&r.iter().map(cell).collect::<Vec<_>>().join("\t"));
                    out.push('\n');
                }
                out
            }
        }
    }
}
