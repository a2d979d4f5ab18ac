//! Canonical document construction, rendering, and the result cache.
//!
//! Every command reduces its result to one `serde_json::Value` whose object
//! keys are sorted (serde_json's default map is a BTreeMap). That value's
//! compact string form is the canonical byte representation: it is what
//! `--format json` prints, what the cache stores, and what a cache replay
//! prints verbatim — so identical configurations produce byte-identical
//! JSON whether computed or replayed.

use serde_json::Value;
use wdist_core::Store;

/// Human-readable polynomial for a comma-separated coefficient string
/// (ascending degree): "1,0,2,1" → "1 + 2x^2 + x^3".
pub fn pretty_poly(modulus: &str) -> String {
    let terms: Vec<String> = modulus
        .split(',')
        .enumerate()
        .filter(|(_, c)| *c != "0")
        .map(|(i, c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, "1") => "x".to_string(),
            (1, c) => format!("{c}x"),
            (i, "1") => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
}

fn str_field<'a>(doc: &'a Value, key: &str) -> &'a str {
    doc.get(key).and_then(Value::as_str).unwrap_or("?")
}

fn u64_field(doc: &Value, key: &str) -> u64 {
    doc.get(key).and_then(Value::as_u64).unwrap_or(0)
}

/// Render one command's canonical document as an aligned text table.
pub fn render_table(cmd: &str, doc: &Value) -> String {
    let mut out = String::new();
    match cmd {
        "field-info" => {
            let modulus = str_field(doc, "modulus");
            out.push_str(&format!(
                "GF({}^{}) with {} elements\n",
                u64_field(doc, "p"),
                u64_field(doc, "n"),
                str_field(doc, "q"),
            ));
            out.push_str(&format!("modulus: {}  ({})\n", modulus, pretty_poly(modulus)));
            out.push_str(&format!(
                "primitive element x: order {} {}\n",
                str_field(doc, "alpha_order"),
                if doc.get("order_confirmed").and_then(Value::as_bool) == Some(true) {
                    "confirmed"
                } else {
                    "NOT CONFIRMED"
                },
            ));
            out.push_str(&format!("arithmetic tables: {} bytes\n", str_field(doc, "table_bytes")));
        }
        "rank-dist" => {
            out.push_str("kernel-dimension distribution over nonzero form pairs (γ, δ)\n");
            out.push_str(&render_paired_map(doc, "m", "empirical", "closed"));
            out.push_str(&format!(
                "closed form matches: {}\n",
                if doc.get("match").and_then(Value::as_bool) == Some(true) { "yes" } else { "NO" },
            ));
        }
        "expsum-dist" => {
            out.push_str(&format!(
                "exponential-sum value distribution, sweep: {}\n",
                str_field(doc, "sweep"),
            ));
            out.push_str(&render_paired_map(doc, "class", "empirical", "closed"));
        }
        "weights" => {
            let (p, n) = (u64_field(doc, "p"), u64_field(doc, "n"));
            out.push_str(&format!(
                "weight distribution of the [{}, {}] code over GF({p}), modulus {}\n",
                p.pow(n as u32).saturating_sub(1),
                3 * n,
                str_field(doc, "modulus"),
            ));
            out.push_str("weight      frequency\n");
            if let Some(rows) = doc.get("rows").and_then(Value::as_array) {
                for row in rows {
                    out.push_str(&format!(
                        "{:<10}  {}\n",
                        u64_field(row, "weight"),
                        str_field(row, "freq"),
                    ));
                }
            }
        }
        "verify" => {
            for check in doc.get("checks").and_then(Value::as_array).unwrap_or(&Vec::new()) {
                out.push_str(&verify_line(doc, check));
                out.push('\n');
            }
        }
        _ => unreachable!("unknown command {cmd}"),
    }
    out
}

/// One PASS/FAIL line of `verify` output.
pub fn verify_line(doc: &Value, check: &Value) -> String {
    format!(
        "{} {} at ({},{},{}): {}",
        if check.get("pass").and_then(Value::as_bool) == Some(true) { "PASS" } else { "FAIL" },
        str_field(check, "name"),
        u64_field(doc, "p"),
        u64_field(doc, "n"),
        u64_field(doc, "k"),
        str_field(check, "detail"),
    )
}

/// Two distribution maps keyed the same way, as three aligned columns.
fn render_paired_map(doc: &Value, key_name: &str, left: &str, right: &str) -> String {
    let empty = serde_json::Map::new();
    let a = doc.get(left).and_then(Value::as_object).unwrap_or(&empty);
    let b = doc.get(right).and_then(Value::as_object).unwrap_or(&empty);
    let mut keys: Vec<&String> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    let width = keys.iter().map(|k| k.len()).chain([key_name.len()]).max().unwrap_or(8);
    let lw = a.values().filter_map(Value::as_str).map(str::len).chain([left.len()]).max().unwrap_or(9);
    let mut out = format!("{key_name:<width$}  {left:<lw$}  {right}\n");
    for k in keys {
        let av = a.get(k).and_then(Value::as_str).unwrap_or("0");
        let bv = b.get(k).and_then(Value::as_str).unwrap_or("0");
        out.push_str(&format!("{k:<width$}  {av:<lw$}  {bv}\n"));
    }
    out
}

/// CSV rendering for the tabular commands; None where CSV is not meaningful.
pub fn render_csv(cmd: &str, doc: &Value) -> Option<String> {
    match cmd {
        "weights" => {
            let mut out = String::from("weight,frequency\n");
            for row in doc.get("rows")?.as_array()? {
                out.push_str(&format!(
                    "{},{}\n",
                    u64_field(row, "weight"),
                    str_field(row, "freq"),
                ));
            }
            Some(out)
        }
        "rank-dist" => Some(csv_paired(doc, "m", "empirical", "closed")),
        "expsum-dist" => Some(csv_paired(doc, "class", "empirical", "closed")),
        _ => None,
    }
}

fn csv_paired(doc: &Value, key_name: &str, left: &str, right: &str) -> String {
    let empty = serde_json::Map::new();
    let a = doc.get(left).and_then(Value::as_object).unwrap_or(&empty);
    let b = doc.get(right).and_then(Value::as_object).unwrap_or(&empty);
    let mut keys: Vec<&String> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut out = format!("{key_name},{left},{right}\n");
    for k in keys {
        out.push_str(&format!(
            "{},{},{}\n",
            csv_quote(k),
            a.get(k).and_then(Value::as_str).unwrap_or("0"),
            b.get(k).and_then(Value::as_str).unwrap_or("0"),
        ));
    }
    out
}

/// Sum-class labels may contain no commas today, but quote defensively.
fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Replay a cached canonical document, if present and intact.
pub fn cache_read(store: &Store, key: &str, artifact: &str) -> Option<Value> {
    serde_json::from_str(&store.read(key, artifact)?).ok()
}

pub fn cache_write(store: &Store, key: &str, artifact: &str, doc: &Value) {
    // Failure to persist is never fatal — the result is already in hand.
    if let Err(e) = store.write(key, artifact, &doc.to_string()) {
        eprintln!("warning: could not write cache entry {key}: {e}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_pretty_printing() {
        assert_eq!(pretty_poly("1,0,2,1"), "1 + 2x^2 + x^3");
        assert_eq!(pretty_poly("2,1"), "2 + x");
        assert_eq!(pretty_poly("0,1"), "x");
        assert_eq!(pretty_poly("0"), "0");
    }

    #[test]
    fn weight_csv_rendering() {
        let doc: Value = serde_json::json!({
            "rows": [
                {"weight": 0, "freq": "1"},
                {"weight": 9, "freq": "52"},
            ]
        });
        assert_eq!(render_csv("weights", &doc).unwrap(), "weight,frequency\n0,1\n9,52\n");
    }
}
