//! Condition and contraction files.
//!
//! ```json
//! {"m": 2, "conditions": [{"a": [[1, 0], [0, 0]], "b": [[0, 0], [0, 0]]}, ...]}
//! {"m": 2, "V": [[[0, 0], [1, 0]], [[0.5, 0], ["1/3", 0]]]}
//! ```
//!
//! Each complex is `[re, im]`; each part a JSON number or a `"p/q"` string.
//! Unknown keys are ignored, so reports written by `normalize` read back.

use std::str::FromStr;

use bca_core::polyoracle::{rational_to_f64, Rational};
use bca_core::{BoundaryConditionSystem, Complex64, ComplexMatrix};
use serde_json::Value;

use crate::CliError;

fn bad(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{field}: {msg}"))
}

fn parse_part(v: &Value, field: &str) -> Result<f64, CliError> {
    let x = match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad(field, "number out of range"))?,
        Value::String(s) => {
            let q = Rational::from_str(s.trim()).map_err(|_| bad(field, format!("cannot parse {s:?} as p/q")))?;
            rational_to_f64(&q)
        }
        _ => return Err(bad(field, "expected a number or a \"p/q\" string")),
    };
    if !x.is_finite() {
        return Err(bad(field, "value is not finite"));
    }
    Ok(x)
}

fn parse_complex(v: &Value, field: &str) -> Result<Complex64, CliError> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex64::new(
            parse_part(re, &format!("{field}[0]"))?,
            parse_part(im, &format!("{field}[1]"))?,
        )),
        _ => Err(bad(field, "expected [re, im]")),
    }
}

fn parse_vector(v: &Value, len: usize, field: &str) -> Result<Vec<Complex64>, CliError> {
    let items = v.as_array().ok_or_else(|| bad(field, "expected a list"))?;
    if items.len() != len {
        return Err(bad(field, format!("expected {len} entries, got {}", items.len())));
    }
    items
        .iter()
        .enumerate()
        .map(|(k, x)| parse_complex(x, &format!("{field}[{k}]")))
        .collect()
}

fn parse_order(doc: &Value) -> Result<usize, CliError> {
    let m = doc.get("m").ok_or_else(|| bad("m", "missing"))?;
    match m.as_u64() {
        Some(m) if (1..=64).contains(&m) => Ok(m as usize),
        _ => Err(bad("m", "expected an integer in 1..=64")),
    }
}

pub fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid JSON: {e}")))
}

pub fn parse_conditions(doc: &Value) -> Result<BoundaryConditionSystem, CliError> {
    let m = parse_order(doc)?;
    let rows = doc
        .get("conditions")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("conditions", "missing or not a list"))?;
    if rows.len() != m {
        return Err(bad("conditions", format!("expected {m} rows, got {}", rows.len())));
    }
    let mut coeffs = ComplexMatrix::zeros(m, 2 * m);
    for (j, row) in rows.iter().enumerate() {
        for (offset, key) in [(0, "a"), (m, "b")] {
            let field = format!("conditions[{j}].{key}");
            let v = row.get(key).ok_or_else(|| bad(&field, "missing"))?;
            for (k, z) in parse_vector(v, m, &field)?.into_iter().enumerate() {
                coeffs[(j, offset + k)] = z;
            }
        }
    }
    Ok(BoundaryConditionSystem::new(m, coeffs)?)
}

pub fn parse_contraction(doc: &Value) -> Result<ComplexMatrix, CliError> {
    let m = parse_order(doc)?;
    let rows = doc
        .get("V")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("V", "missing or not a list"))?;
    if rows.len() != m {
        return Err(bad("V", format!("expected {m} rows, got {}", rows.len())));
    }
    let mut v = ComplexMatrix::zeros(m, m);
    for (i, row) in rows.iter().enumerate() {
        for (k, z) in parse_vector(row, m, &format!("V[{i}]"))?.into_iter().enumerate() {
            v[(i, k)] = z;
        }
    }
    Ok(v)
}
