//! Deterministic JSON: keys sorted, floats with 12 significant digits.

use std::fmt::Write as _;

use fneq::morphisms::RootValue;
use fneq::Scalar;
use num_complex::Complex64;
use serde_json::{Map, Number, Value};

/// Marker prefix for floats that the writer formats itself.
const FLOAT_TAG: &str = "\u{0}f:";

/// A float, written later with exactly 12 significant digits.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let x = if x == 0.0 { 0.0 } else { x };
    Value::String(format!("{FLOAT_TAG}{x:.11e}"))
}

pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![float(z.re), float(z.im)])
}

pub fn scalar<T: Scalar>(z: &T) -> Value {
    complex(z.to_complex64())
}

/// `[re, im]` plus the exact rotation for roots of unity.
pub fn root(r: &RootValue) -> Value {
    let z: Complex64 = r.to_scalar();
    match r.rotation() {
        None => obj([("value", complex(z))]),
        Some(q) => obj([("rotation", Value::String(q.to_string())), ("value", complex(z))]),
    }
}

pub fn int(n: impl Into<i64>) -> Value {
    Value::Number(Number::from(n.into()))
}

pub fn uint(n: usize) -> Value {
    Value::Number(Number::from(n as u64))
}

pub fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

pub fn obj<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

pub fn insert(target: &mut Value, key: &str, value: Value) {
    if let Value::Object(m) = target {
        m.insert(key.to_string(), value);
    }
}

fn write_string(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("string serializes"));
}

fn write(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.push_str(&"  ".repeat(d));
    match v {
        Value::String(s) => match s.strip_prefix(FLOAT_TAG) {
            Some(f) => out.push_str(f),
            None => write_string(out, s),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(out, item, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, depth + 1);
                write_string(out, k);
                out.push_str(": ");
                write(out, &m[*k], depth + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
        other => write!(out, "{other}").expect("string write"),
    }
}

pub fn to_string(v: &Value) -> String {
    let mut out = String::new();
    write(&mut out, v, 0);
    out.push('\n');
    out
}
