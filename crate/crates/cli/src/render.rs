use std::fmt::Write;

use diffeo_core::report::Report;
use serde_json::Value;

/// Human-readable rendering of a report.
pub fn text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", report.command);
    if let Some(p) = &report.presentation {
        let _ = writeln!(
            out,
            "space {} ({} charts, {} relations, digest {})",
            p.space,
            p.charts,
            p.relations,
            &p.digest[..12]
        );
    }
    if let Some(t) = &report.truncation {
        let _ = writeln!(
            out,
            "truncation: {} frequencies, poly-deg {}, headroom {}, depth {}",
            t.frequencies.len(),
            t.poly_deg,
            t.headroom,
            t.depth
        );
    }
    value(&mut out, &report.results, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes".into() } else { "no".into() }),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| matches!(x, Value::Number(_) | Value::Bool(_))) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = k.replace('_', " ");
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{key}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{key}:");
                        value(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        value(out, x, indent + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}
