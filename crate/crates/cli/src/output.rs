//! Fixed-format numbers for JSON and CSV output.
//!
//! Finite values are written with 17 significant digits; infinities become
//! the strings `"inf"`/`"-inf"` and NaN becomes JSON `null` (empty in CSV).

use num_complex::Complex64;
use range_enclosure::{ComplexPoint, ExtReal};
use serde_json::{Map, Number, Value};

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == 0.0 {
        format!("{:.16e}", 0.0)
    } else {
        format!("{x:.16e}")
    }
}

pub fn num(x: f64) -> Value {
    if x.is_nan() {
        Value::Null
    } else if x.is_finite() {
        Value::Number(fmt_f64(x).parse::<Number>().expect("formatted float is a JSON number"))
    } else {
        Value::String(fmt_f64(x))
    }
}

pub fn ext(x: ExtReal) -> Value {
    num(x.to_f64())
}

pub fn complex(z: Complex64) -> Value {
    obj([("re", num(z.re)), ("im", num(z.im))])
}

pub fn point(p: &ComplexPoint) -> Value {
    match p {
        ComplexPoint::Finite(z) => complex(*z),
        ComplexPoint::Infinity => Value::String("inf".into()),
    }
}

pub fn obj<const N: usize>(fields: [(&str, Value); N]) -> Value {
    Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// CSV writer with LF line endings.
pub fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

pub fn finish_csv(w: csv::Writer<Vec<u8>>) -> anyhow::Result<String> {
    Ok(String::from_utf8(w.into_inner()?)?)
}
