//! Deterministic JSON and CSV emission.
//!
//! Output formatting is pinned: object fields keep declaration order, and
//! every float is printed with 17 significant digits (`{:.16e}`), which
//! round-trips `f64` exactly. Identical inputs therefore produce
//! byte-identical reports. Parsing goes through `serde_json` and accepts any
//! standard JSON float spelling.

use serde_json::Value;

use crate::matrix::ComplexMatrix;

/// 17 significant digits; exact `f64` round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render a `serde_json::Value` deterministically (fields in map order,
/// floats via [`fmt_f64`], no insignificant whitespace).
pub fn render(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value);
    out
}

/// Serialize any `Serialize` type through `serde_json::Value` with the
/// deterministic renderer.
pub fn render_serialize<T: serde::Serialize>(value: &T) -> String {
    render(&serde_json::to_value(value).expect("serializable report"))
}

fn write_value(out: &mut String, value: &Value) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&fmt_f64(n.as_f64().expect("finite float")));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serializes"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push(':');
                write_value(out, item);
            }
            out.push('}');
        }
    }
}

/// The matrix wire format `{"rows":n,"cols":m,"data":[[re,im],...]}`.
pub fn matrix_json(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{{\"rows\":{},\"cols\":{},\"data\":[",
        m.rows(),
        m.cols()
    ));
    for (i, z) in m.data().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        out.push_str(&fmt_f64(z.re));
        out.push(',');
        out.push_str(&fmt_f64(z.im));
        out.push(']');
    }
    out.push_str("]}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for &x in &[
            0.0,
            -0.0,
            0.5,
            1.0 / 3.0,
            -2.5e-17,
            49.0 / 72.0,
            f64::MIN_POSITIVE,
        ] {
            let text = fmt_f64(x);
            let back: f64 = text.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{text}");
            // Must also survive a JSON parse.
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v.as_f64().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn render_is_compact_and_ordered() {
        let v = serde_json::json!({"b": 1, "a": [true, null, 0.5]});
        let text = render(&v);
        assert_eq!(text, r#"{"b":1,"a":[true,null,5.0000000000000000e-1]}"#);
    }
}
