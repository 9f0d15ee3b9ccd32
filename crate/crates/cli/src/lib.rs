//! File formats, report rendering and subcommands of the `symlen` tool.

pub mod certificate;
pub mod commands;
pub mod error;
pub mod formats;

use serde::Serialize;
use serde_json::Value;

pub use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{}.{}", prefix, k) };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{}[{}]", prefix, i), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), "-".to_string())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Render a report as pretty JSON or as aligned `key  value` lines.
pub fn render<T: Serialize>(report: &T, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Table => {
            let mut rows = Vec::new();
            flatten("", &serde_json::to_value(report).expect("reports serialize"), &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter().map(|(k, v)| format!("{:width$}  {}\n", k, v, width = width)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Inner {
        x: u32,
    }

    #[derive(Serialize)]
    struct Sample {
        name: String,
        values: Vec<u32>,
        items: Vec<Inner>,
        missing: Option<u32>,
    }

    #[test]
    fn table_rendering() {
        let s = Sample { name: "c".into(), values: vec![1, 2], items: vec![Inner { x: 3 }], missing: None };
        let t = render(&s, Format::Table);
        assert_eq!(t, "items[0].x  3\nmissing     -\nname        c\nvalues      [1,2]\n");
        assert!(render(&s, Format::Json).starts_with("{\n  \"name\": \"c\""));
    }
}
