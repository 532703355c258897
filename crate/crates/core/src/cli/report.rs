//! CSV / JSON emitters. CSV: ',' separated, header row, LF endings, floats
//! as 12 significant digits in exponent form.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Command output: a single record or a table of rows.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Record(Vec<(String, Value)>),
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<Value>>,
    },
}

pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        v.to_string()
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => fmt_float(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_text<R, F>(rows: R) -> String
where
    R: IntoIterator<Item = F>,
    F: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
}

impl Report {
    pub fn record<K: Into<String>>(fields: impl IntoIterator<Item = (K, Value)>) -> Self {
        Report::Record(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn table(columns: &[&str], rows: Vec<Vec<Value>>) -> Self {
        Report::Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Report::Record(fields), Format::Csv) => csv_text([
                fields.iter().map(|(k, _)| k.clone()).collect::<Vec<_>>(),
                fields.iter().map(|(_, v)| csv_field(v)).collect(),
            ]),
            (Report::Record(fields), Format::Json) => {
                let map: Map<String, Value> = fields.iter().cloned().collect();
                let mut s =
                    serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
                s.push('\n');
                s
            }
            (Report::Table { columns, rows }, Format::Csv) => csv_text(
                std::iter::once(columns.clone())
                    .chain(rows.iter().map(|r| r.iter().map(csv_field).collect())),
            ),
            (Report::Table { columns, rows }, Format::Json) => {
                let v = serde_json::json!({ "columns": columns, "rows": rows });
                let mut s = serde_json::to_string(&v).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}
