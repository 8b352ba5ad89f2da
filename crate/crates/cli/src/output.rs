use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "fosterlab/1";

/// Envelope for every `--json` result.
#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub schema: &'static str,
    pub command: String,
    pub args: Vec<String>,
    pub config: Value,
    pub results: Value,
    pub provenance: Vec<String>,
    pub wall_time_s: f64,
}

impl OutputRecord {
    pub fn new(command: &str, config: Value, results: Value, provenance: Vec<String>, started: Instant) -> Self {
        OutputRecord {
            schema: SCHEMA,
            command: command.to_string(),
            args: std::env::args().skip(1).collect(),
            config,
            results,
            provenance,
            wall_time_s: started.elapsed().as_secs_f64(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Flattens `results` into `path,value` rows. Floats keep 17 significant
/// digits so the CSV round-trips.
pub fn to_csv(results: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", results, &mut rows);
    let mut out = String::from("field,value\n");
    for (k, v) in rows {
        out.push_str(&csv_escape(&k));
        out.push(',');
        out.push_str(&csv_escape(&v));
        out.push('\n');
    }
    out
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, rows);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, rows);
            }
        }
        Value::Number(n) => {
            let text = match (n.as_i64(), n.as_u64(), n.as_f64()) {
                (Some(i), _, _) => i.to_string(),
                (_, Some(u), _) => u.to_string(),
                (_, _, Some(f)) => format_float(f),
                _ => n.to_string(),
            };
            rows.push((prefix.to_string(), text));
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
    }
}

pub fn format_float(f: f64) -> String {
    format!("{f:.16e}")
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}
