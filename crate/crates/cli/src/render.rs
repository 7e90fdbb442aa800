//! Table rendering of JSON reports. Purely presentational.

use serde_json::Value;

/// `≈d.ddde±N, D digits` for long decimal strings.
pub fn approx(digits: &str) -> Option<String> {
    let body = digits.strip_prefix('-').unwrap_or(digits);
    if body.len() < 7 || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let sign = if body.len() == digits.len() { "" } else { "-" };
    Some(format!(
        "≈{sign}{}.{}e{}, {} digits",
        &body[..1],
        &body[1..4],
        body.len() - 1,
        body.len()
    ))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => match approx(s) {
            Some(a) => format!("{s} ({a})"),
            None => s.clone(),
        },
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

fn is_table(items: &[Value]) -> bool {
    !items.is_empty()
        && items.iter().all(|i| {
            i.as_object()
                .is_some_and(|o| o.values().all(|v| !v.is_object()))
        })
}

fn table(path: &str, items: &[Value], out: &mut String) {
    let head = items[0].as_object().expect("checked by is_table");
    let keys: Vec<&String> = head.keys().collect();
    let rows: Vec<Vec<String>> = items
        .iter()
        .map(|i| {
            keys.iter()
                .map(|k| {
                    let v = &i[k.as_str()];
                    match v {
                        Value::String(s) => s.clone(),
                        Value::Null => "-".into(),
                        other => other.to_string(),
                    }
                })
                .collect()
        })
        .collect();
    let widths: Vec<usize> = keys
        .iter()
        .enumerate()
        .map(|(c, k)| {
            rows.iter()
                .map(|r| r[c].chars().count())
                .chain(std::iter::once(k.chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    out.push_str(&format!("{path}:\n"));
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        format!("  {}\n", padded.join("  "))
    };
    out.push_str(&line(keys.iter().map(|k| k.as_str()).collect()));
    for r in &rows {
        out.push_str(&line(r.iter().map(|s| s.as_str()).collect()));
    }
}

fn walk(path: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                walk(&p, child, out);
            }
        }
        Value::Array(items) if is_table(items) => table(path, items, out),
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, child) in items.iter().enumerate() {
                walk(&format!("{path}[{i}]"), child, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{path}: [{}]\n", parts.join(", ")));
        }
        other => out.push_str(&format!("{path}: {}\n", scalar(other))),
    }
}

pub fn render_table(v: &Value) -> String {
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn approx_of_long_numbers() {
        assert_eq!(approx("123"), None);
        assert_eq!(approx("54683976503678809").unwrap(), "≈5.468e16, 17 digits");
        assert_eq!(approx("12a4567"), None);
    }

    #[test]
    fn renders_tables_and_scalars() {
        let v = json!({
            "bound": "54683976503678809",
            "cells": [{"N": 2, "rank": 6}, {"N": 3, "rank": 12}],
        });
        let t = render_table(&v);
        assert!(t.contains("bound: 54683976503678809 (≈5.468e16, 17 digits)"));
        assert!(t.contains("cells:\n  N  rank\n  2     6\n  3    12\n"));
    }
}
