//! JSON encoding: a Laurent polynomial is an object from exponent strings to
//! ring elements; a rational function is `{"num": …, "den": [[a, u, mult], …]}`.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::{QLaurent, QRational};
use crate::ring::json::{elem_from_json, elem_to_json};
use crate::ring::RingSpec;
use crate::{Error, Result};

pub fn laurent_to_json(p: &QLaurent) -> Value {
    let mut map = Map::new();
    for (e, c) in p.coeffs() {
        map.insert(e.to_string(), elem_to_json(c));
    }
    Value::Object(map)
}

pub fn laurent_from_json(spec: &Arc<RingSpec>, v: &Value) -> Result<QLaurent> {
    let Value::Object(map) = v else {
        return Err(Error::Parse(format!("expected Laurent polynomial object, got {v}")));
    };
    let mut out = QLaurent::zero(spec);
    for (k, c) in map {
        let e: i64 = k
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad q-exponent {k:?}")))?;
        out.add_term(e, &elem_from_json(spec, c)?);
    }
    Ok(out)
}

pub fn rational_to_json(f: &QRational) -> Value {
    let den: Vec<Value> = f
        .den()
        .iter()
        .map(|(d, m)| json!([d.a(), elem_to_json(d.u()), m]))
        .collect();
    json!({"num": laurent_to_json(f.num()), "den": den})
}

pub fn rational_from_json(spec: &Arc<RingSpec>, v: &Value) -> Result<QRational> {
    let num = laurent_from_json(spec, v.get("num").unwrap_or(&json!({})))?;
    let mut factors = Vec::new();
    if let Some(den) = v.get("den") {
        let Value::Array(items) = den else {
            return Err(Error::Parse("den must be a list".into()));
        };
        for item in items {
            let bad = || Error::Parse(format!("bad denominator factor {item}"));
            let Value::Array(t) = item else { return Err(bad()) };
            if t.len() != 3 {
                return Err(bad());
            }
            let a = t[0].as_i64().ok_or_else(bad)?;
            let u = elem_from_json(spec, &t[1])?;
            let m = t[2].as_u64().ok_or_else(bad)? as u32;
            factors.push((a, u, m));
        }
    }
    QRational::from_factors(num, &factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_elem, RingElem};

    #[test]
    fn round_trip() {
        let s = RingSpec::builder().nilpotent("nu", 2).unit("L").build().unwrap();
        let l = RingElem::gen(&s, "L").unwrap();
        let f = QRational::pole(-2, &l)
            .unwrap()
            .scale(&parse_elem(&s, "1 - nu").unwrap())
            .shift(-1);
        let v = rational_to_json(&f);
        let g = rational_from_json(&s, &v).unwrap();
        assert_eq!(f, g);
        let from_text = rational_from_json(&s, &json!({"num": {"0": "1"}, "den": [[-2, "L", 1]]})).unwrap();
        assert_eq!(from_text, QRational::pole(-2, &l).unwrap());
    }
}
