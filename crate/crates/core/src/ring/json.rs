//! Canonical JSON encoding of ring elements.
//!
//! An element is an object mapping comma-joined exponent vectors (in the
//! layout of its [`RingSpec`]) to `[numerator, denominator]` integer
//! strings. When reading, a plain string is also accepted and parsed as an
//! expression.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value};
use smallvec::SmallVec;

use super::elem::RingElem;
use super::parse::parse_elem;
use super::spec::{Monomial, RingSpec};
use crate::{Error, Result};

pub fn rational_to_json(c: &BigRational) -> Value {
    Value::Array(vec![
        Value::String(c.numer().to_string()),
        Value::String(c.denom().to_string()),
    ])
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    let bad = || Error::Parse(format!("expected rational, got {v}"));
    match v {
        Value::Array(a) if a.len() == 2 => {
            let n: BigInt = json_int(&a[0]).ok_or_else(bad)?;
            let d: BigInt = json_int(&a[1]).ok_or_else(bad)?;
            if d == BigInt::from(0) {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(n, d))
        }
        Value::Number(_) => Ok(BigRational::from_integer(json_int(v).ok_or_else(bad)?)),
        Value::String(s) => parse_rational(s),
        _ => Err(bad()),
    }
}

fn json_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().ok(),
        Value::Number(n) => n.as_i64().map(BigInt::from),
        _ => None,
    }
}

/// `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn mono_key(m: &Monomial) -> String {
    m.0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

pub fn elem_to_json(e: &RingElem) -> Value {
    let mut map = Map::new();
    for (m, c) in e.terms() {
        map.insert(mono_key(m), rational_to_json(c));
    }
    Value::Object(map)
}

pub fn elem_from_json(spec: &Arc<RingSpec>, v: &Value) -> Result<RingElem> {
    match v {
        Value::String(s) => parse_elem(spec, s),
        Value::Number(_) => Ok(RingElem::constant(spec, rational_from_json(v)?)),
        Value::Object(map) => {
            let mut out = RingElem::zero(spec);
            for (k, c) in map {
                let exps: SmallVec<[i32; 8]> = if k.is_empty() {
                    SmallVec::new()
                } else {
                    k.split(',')
                        .map(|x| x.trim().parse::<i32>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::Parse(format!("bad monomial key {k:?}")))?
                };
                if exps.len() != spec.len() {
                    return Err(Error::Parse(format!(
                        "monomial key {k:?} has {} entries, ring has {} generators",
                        exps.len(),
                        spec.len()
                    )));
                }
                let m = Monomial(exps);
                if !spec.admits(&m) {
                    return Err(Error::Parse(format!("monomial {k:?} is truncated in this ring")));
                }
                out += &RingElem::monomial(spec, m, rational_from_json(c)?);
            }
            Ok(out)
        }
        _ => Err(Error::Parse(format!("expected ring element, got {v}"))),
    }
}

pub fn spec_to_json(spec: &RingSpec) -> Value {
    serde_json::to_value(spec).expect("ring spec serializes")
}

pub fn spec_from_json(v: &Value) -> Result<Arc<RingSpec>> {
    let spec: RingSpec =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("ring spec: {e}")))?;
    spec.validate()?;
    Ok(Arc::new(spec))
}
