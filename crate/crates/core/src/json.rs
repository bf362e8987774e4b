//! Deterministic JSON output: sorted keys, two-space indentation and floats
//! written with 17 significant digits.

use std::fmt::Write;

use faer::MatRef;
use serde_json::{json, Map, Value};

use crate::operators::Operator;
use crate::reduction::ReducedModel;
use crate::scalar::{Real, C};

/// `[[ [re, im], ... ], ...]`, row-major.
pub fn matrix_json<T: Real>(m: MatRef<'_, C<T>>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn operator_json<T: Real>(op: &Operator<T>) -> Value {
    matrix_json(op.mat())
}

pub fn complex_json<T: Real>(z: C<T>) -> Value {
    json!([z.re.as_f64(), z.im.as_f64()])
}

pub fn reduced_model_json<T: Real>(m: &ReducedModel<T>) -> Value {
    let ops = |v: &[Operator<T>]| Value::Array(v.iter().map(operator_json).collect());
    let r = &m.residuals;
    let mut residuals = Map::new();
    residuals.insert("order1".into(), json!(r.order1));
    residuals.insert("order1_exact".into(), json!(r.order1_exact));
    residuals.insert("order2".into(), json!(r.order2));
    residuals.insert("k1_projection".into(), json!(r.k1_projection));
    residuals.insert("a_identity".into(), json!(r.a_identity));
    residuals.insert("b_identity".into(), json!(r.b_identity));
    residuals.insert("c1_hermiticity".into(), json!(r.c1_hermiticity));
    residuals.insert("c1_block".into(), json!(r.c1_block));
    json!({
        "slow_dim": m.slow_dim,
        "epsilon": m.epsilon.as_f64(),
        "order": m.order.as_int(),
        "S0": matrix_json(m.s0.mat()),
        "H_s1": operator_json(&m.h_s1),
        "A_ops": ops(&m.a_ops),
        "B_ops": ops(&m.b_ops),
        "C1": m.c1.as_ref().map(operator_json),
        "consolidated_A": ops(m.consolidated_a()),
        "consolidated_B": ops(m.consolidated_b()),
        "residuals": Value::Object(residuals),
        "zero_generator": m.zero_generator,
        "diagnostics": m.diagnostics,
    })
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

/// Canonical text of `v`, ending in a newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}").expect("write to string");
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}").expect("write to string");
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
            } else if items.iter().all(|x| !x.is_array() && !x.is_object()) {
                // leaf rows such as [re, im] stay on one line
                out.push('[');
                for (k, x) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, level);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (k, x) in items.iter().enumerate() {
                    indent(out, level + 1);
                    write_value(out, x, level + 1);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                indent(out, level);
                out.push(']');
            }
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                indent(out, level + 1);
                out.push_str(&serde_json::to_string(key).expect("string serializes"));
                out.push_str(": ");
                write_value(out, &map[*key], level + 1);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            indent(out, level);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cf;

    #[test]
    fn canonical_layout() {
        let v = json!({"b": [1.0, -0.5], "a": {"z": null, "y": [[1, 2], []]}, "s": "x\"y"});
        let text = to_canonical_string(&v);
        let want = "{\n  \"a\": {\n    \"y\": [\n      [1, 2],\n      []\n    ],\n    \"z\": null\n  },\n  \"b\": [1.0000000000000000e0, -5.0000000000000000e-1],\n  \"s\": \"x\\\"y\"\n}\n";
        assert_eq!(text, want);
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["b"][1], json!(-0.5));
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02e23, -1e-300, 5e-324] {
            assert_eq!(
                format_float(x).parse::<f64>().unwrap().to_bits(),
                x.to_bits()
            );
        }
        assert_eq!(format_float(f64::NAN), "null");
    }

    #[test]
    fn matrices_are_row_major_pairs() {
        let op = Operator::<f64>::from_fn(2, |i, j| cf(i as f64, j as f64));
        assert_eq!(
            operator_json(&op),
            json!([[[0.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [1.0, 1.0]]])
        );
    }
}
