use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use kwidth::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

/// Header plus string cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Left-aligned columns separated by two spaces.
    pub fn aligned(&self) -> String {
        let mut w: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate() {
                w[i] = w[i].max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let s: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:<width$}", width = w[i])).collect();
            s.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        out += &(w.iter().map(|&n| "-".repeat(n)).collect::<Vec<_>>().join("  ") + "\n");
        for r in &self.rows {
            out += &line(r);
        }
        out
    }

    pub fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| kwidth::Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Flattens nested JSON into `(dotted.key, scalar)` pairs.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| go(&key(k), x, out)),
            Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
                a.iter().enumerate().for_each(|(i, x)| go(&key(&i.to_string()), x, out))
            }
            Value::Array(a) => out.push((prefix.to_string(), a.iter().map(scalar).collect::<Vec<_>>().join(" "))),
            other => out.push((prefix.to_string(), scalar(other))),
        }
    }
    let mut out = Vec::new();
    go("", v, &mut out);
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "null".into(),
        other => other.to_string(),
    }
}

/// Renders a serializable report in the requested format.
pub fn render_report<T: Serialize>(report: &T, fmt: Format) -> Result<String> {
    let v = serde_json::to_value(report)?;
    Ok(match fmt {
        Format::Json => serde_json::to_string_pretty(&v)? + "\n",
        Format::Table | Format::Csv => {
            let mut t = Table::new(&["key", "value"]);
            for (k, x) in flatten(&v) {
                t.push(vec![k, x]);
            }
            if fmt == Format::Table {
                t.aligned()
            } else {
                t.csv()?
            }
        }
    })
}

/// Renders rows; JSON emits the serialized records.
pub fn render_rows<T: Serialize>(records: &[T], table: &Table, fmt: Format) -> Result<String> {
    Ok(match fmt {
        Format::Json => serde_json::to_string_pretty(records)? + "\n",
        Format::Table => table.aligned(),
        Format::Csv => table.csv()?,
    })
}
