use std::io::Write;
use std::path::Path;

use anyhow::{Context as _, Result};
use num_rational::BigRational;
use serde_json::{json, Value};

use qkwc_core::novikov::NovikovSeries;
use qkwc_core::qfun::json::{laurent_to_json, rational_to_json};
use qkwc_core::qfun::{QLaurent, QRational};

pub fn rational(c: &BigRational) -> Value {
    qkwc_core::ring::json::rational_to_json(c)
}

fn series<C, F: Fn(&C) -> Value>(s: &NovikovSeries<C>, enc: F, text: impl Fn(&C) -> String) -> Value
where
    C: qkwc_core::novikov::NovikovCoeff,
{
    let terms: Vec<Value> = s
        .terms()
        .iter()
        .map(|(b, c)| json!({"class": b.0, "value": enc(c), "text": text(c)}))
        .collect();
    json!({
        "ring": serde_json::to_value(&**s.spec()).unwrap_or(Value::Null),
        "cone": serde_json::to_value(s.cone()).unwrap_or(Value::Null),
        "terms": terms,
    })
}

pub fn rational_series(s: &NovikovSeries<QRational>) -> Value {
    series(s, rational_to_json, |c| c.to_string())
}

pub fn laurent_series(s: &NovikovSeries<QLaurent>) -> Value {
    series(s, laurent_to_json, |c| c.to_string())
}

pub fn emit(v: &Value, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
