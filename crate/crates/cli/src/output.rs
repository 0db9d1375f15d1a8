//! Deterministic report encoding: sorted keys, floats with 17 significant digits.

use std::str::FromStr;

use bca_core::{BoundaryConditionSystem, Complex64, ComplexMatrix, TolerancePolicy};
use serde_json::{json, Number, Value};
use sha2::{Digest, Sha256};

pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(format!("{x}"));
    }
    let x = if x == 0.0 { 0.0 } else { x };
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float is valid JSON"))
}

pub fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn matrix(v: &ComplexMatrix) -> Value {
    Value::Array(
        v.row_iter()
            .map(|row| Value::Array(row.iter().map(|&z| complex(z)).collect()))
            .collect(),
    )
}

pub fn conditions(sys: &BoundaryConditionSystem) -> Value {
    let m = sys.m();
    let rows = (0..m)
        .map(|j| {
            let row = sys.row(j);
            json!({
                "a": row[..m].iter().map(|&z| complex(z)).collect::<Vec<_>>(),
                "b": row[m..].iter().map(|&z| complex(z)).collect::<Vec<_>>(),
            })
        })
        .collect::<Vec<_>>();
    Value::Array(rows)
}

pub fn tolerances(tol: &TolerancePolicy) -> Value {
    json!({
        "definiteness_tol": num(tol.definiteness_tol),
        "rank_tol": num(tol.rank_tol),
        "zero_tol": num(tol.zero_tol),
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Adds the tool and tolerance stamp every report carries.
pub fn stamp(mut body: Value, tol: &TolerancePolicy, input_sha256: Option<&str>) -> Value {
    let obj = body.as_object_mut().expect("reports are objects");
    obj.insert(
        "tool".into(),
        json!({"name": "bca", "version": env!("CARGO_PKG_VERSION")}),
    );
    obj.insert("tolerances".into(), tolerances(tol));
    if let Some(digest) = input_sha256 {
        obj.insert("input_sha256".into(), Value::String(digest.into()));
    }
    body
}

/// `path = value` lines, one per scalar leaf.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    flatten(v, "", &mut out);
    out
}

fn flatten(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                flatten(x, &p, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{path} = [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(x, &format!("{path}[{i}]"), out);
            }
        }
        other => out.push_str(&format!("{path} = {}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
