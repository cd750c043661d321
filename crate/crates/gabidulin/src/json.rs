//! The shared JSON formats used by the CLI and the browser demo.
//!
//! Field descriptor: `{"base":"Q"}` or `{"base":{"Fp":3}}` with
//! `"layers":[{"modulus":[c0,...,cd]}]`, rationals encoded as strings
//! `"a/b"` (plain integers allowed), finite scalars as numbers. Elements
//! of higher layers are nested arrays of the layer below, lowest
//! coordinate first. Skew polynomials are coefficient lists, lowest
//! degree first.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact_fields::{Base, CyclicAutomorphism, FieldElement, FieldTower, Scalar};
use crate::gabidulin_codec::{GabidulinCode, LinePattern, NetworkPattern, Received};
use crate::skew_poly::SkewPoly;

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

// -- scalars --

fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Fp(v) => json!(v),
        Scalar::Q(r) => {
            if r.is_integer() {
                Value::String(r.numer().to_string())
            } else {
                Value::String(format!("{}/{}", r.numer(), r.denom()))
            }
        }
    }
}

fn scalar_from_json(base: &Base, v: &Value) -> Result<Scalar> {
    match base {
        Base::Prime(p) => {
            let n = match v {
                Value::Number(n) => n
                    .as_i64()
                    .ok_or_else(|| bad("finite-field scalar must be an integer"))?,
                Value::String(s) => i64::from_str(s).map_err(|_| bad("bad integer string"))?,
                _ => return Err(bad("finite-field scalar must be a number")),
            };
            Ok(Scalar::Fp(n.rem_euclid(*p as i64) as u64))
        }
        Base::Rationals => {
            let r = match v {
                Value::Number(n) => {
                    let i = n.as_i64().ok_or_else(|| bad("rational must be integral or a string"))?;
                    BigRational::from_integer(BigInt::from(i))
                }
                Value::String(s) => {
                    if let Some((a, b)) = s.split_once('/') {
                        let num = BigInt::from_str(a.trim()).map_err(|_| bad("bad numerator"))?;
                        let den = BigInt::from_str(b.trim()).map_err(|_| bad("bad denominator"))?;
                        if den == BigInt::from(0) {
                            return Err(bad("zero denominator"));
                        }
                        BigRational::new(num, den)
                    } else {
                        BigRational::from_integer(
                            BigInt::from_str(s.trim()).map_err(|_| bad("bad integer string"))?,
                        )
                    }
                }
                _ => return Err(bad("rational scalar must be a string or number")),
            };
            Ok(Scalar::Q(r))
        }
    }
}

// -- elements --

pub fn element_to_json(x: &FieldElement) -> Value {
    match x {
        FieldElement::Base(s) => scalar_to_json(s),
        FieldElement::Ext(v) => Value::Array(v.iter().map(element_to_json).collect()),
    }
}

pub fn element_from_json(tower: &FieldTower, layer: usize, v: &Value) -> Result<FieldElement> {
    if layer == 0 {
        return Ok(FieldElement::Base(scalar_from_json(tower.base(), v)?));
    }
    match v {
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .map(|c| element_from_json(tower, layer - 1, c))
                .collect::<Result<Vec<_>>>()?;
            tower.from_coeffs(layer, coeffs)
        }
        // allow scalar shorthand for constants at any layer
        Value::Number(_) | Value::String(_) => {
            let s = FieldElement::Base(scalar_from_json(tower.base(), v)?);
            Ok(tower.lift_to(&s, layer))
        }
        _ => Err(bad("element must be an array or scalar")),
    }
}

pub fn elements_to_json(xs: &[FieldElement]) -> Value {
    Value::Array(xs.iter().map(element_to_json).collect())
}

pub fn elements_from_json(tower: &FieldTower, layer: usize, v: &Value) -> Result<Vec<FieldElement>> {
    let arr = v.as_array().ok_or_else(|| bad("expected an array"))?;
    arr.iter().map(|x| element_from_json(tower, layer, x)).collect()
}

// -- towers --

pub fn tower_to_json(tower: &FieldTower) -> Value {
    let base = match tower.base() {
        Base::Rationals => json!("Q"),
        Base::Prime(p) => json!({ "Fp": p }),
    };
    let layers: Vec<Value> = tower
        .layers()
        .iter()
        .map(|l| json!({ "modulus": Value::Array(l.modulus.iter().map(element_to_json).collect()) }))
        .collect();
    json!({ "base": base, "layers": layers })
}

pub fn tower_from_json(v: &Value) -> Result<Arc<FieldTower>> {
    let obj = v.as_object().ok_or_else(|| bad("field descriptor must be an object"))?;
    let base = obj.get("base").ok_or_else(|| bad("missing base"))?;
    let mut tower = match base {
        Value::String(s) if s == "Q" => FieldTower::rationals(),
        Value::Object(m) => {
            let p = m
                .get("Fp")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("base must be \"Q\" or {\"Fp\": p}"))?;
            FieldTower::prime_field(p)?
        }
        _ => return Err(bad("base must be \"Q\" or {\"Fp\": p}")),
    };
    if let Some(layers) = obj.get("layers") {
        let layers = layers.as_array().ok_or_else(|| bad("layers must be an array"))?;
        for (i, l) in layers.iter().enumerate() {
            let modulus = l
                .as_object()
                .and_then(|m| m.get("modulus"))
                .ok_or_else(|| bad("layer needs a modulus"))?;
            let coeffs = elements_from_json(&tower, i, modulus)?;
            tower = tower.extend(coeffs)?;
        }
    }
    Ok(tower)
}

// -- codes --

pub fn code_to_json(code: &GabidulinCode) -> Value {
    json!({
        "field": tower_to_json(code.theta().tower()),
        "theta_image": element_to_json(code.theta().generator_image()),
        "support": elements_to_json(code.support()),
        "k": code.k(),
    })
}

pub fn code_from_json(v: &Value) -> Result<GabidulinCode> {
    let obj = v.as_object().ok_or_else(|| bad("code must be an object"))?;
    let field = obj.get("field").ok_or_else(|| bad("missing field descriptor"))?;
    let tower = tower_from_json(field)?;
    let top = tower.top_layer();
    let image = element_from_json(
        &tower,
        top,
        obj.get("theta_image").ok_or_else(|| bad("missing theta_image"))?,
    )?;
    let theta = CyclicAutomorphism::new(tower.clone(), image)?;
    let support = elements_from_json(
        &tower,
        top,
        obj.get("support").ok_or_else(|| bad("missing support"))?,
    )?;
    let k = obj
        .get("k")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing k"))? as usize;
    GabidulinCode::new(theta, support, k)
}

// -- words, messages --

pub fn word_to_json(entries: &[FieldElement]) -> Value {
    json!({ "entries": elements_to_json(entries) })
}

pub fn word_from_json(tower: &FieldTower, v: &Value) -> Result<Vec<FieldElement>> {
    let entries = v
        .as_object()
        .and_then(|m| m.get("entries"))
        .ok_or_else(|| bad("word needs entries"))?;
    elements_from_json(tower, tower.top_layer(), entries)
}

pub fn message_to_json(f: &SkewPoly) -> Value {
    json!({ "coeffs": elements_to_json(f.coeffs()) })
}

pub fn message_from_json(theta: &Arc<CyclicAutomorphism>, v: &Value) -> Result<SkewPoly> {
    let tower = theta.tower();
    let coeffs = v
        .as_object()
        .and_then(|m| m.get("coeffs"))
        .ok_or_else(|| bad("message needs coeffs"))?;
    let coeffs = elements_from_json(tower, tower.top_layer(), coeffs)?;
    Ok(SkewPoly::from_coeffs(theta.clone(), coeffs))
}

// -- erasure patterns and received words --

fn matrix_to_json(m: &[Vec<FieldElement>]) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(element_to_json).collect()))
            .collect(),
    )
}

fn matrix_from_json(tower: &FieldTower, layer: usize, v: &Value) -> Result<Vec<Vec<FieldElement>>> {
    let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
    rows.iter()
        .map(|row| elements_from_json(tower, layer, row))
        .collect()
}

pub fn received_to_json(r: &Received) -> Value {
    match r {
        Received::Plain(word) => json!({ "model": "none", "word": word_to_json(word) }),
        Received::Line(p) => {
            let masked: Vec<Value> = p
                .masked
                .iter()
                .map(|row| {
                    Value::Array(
                        row.iter()
                            .map(|c| c.as_ref().map(element_to_json).unwrap_or(Value::Null))
                            .collect(),
                    )
                })
                .collect();
            json!({
                "model": "line",
                "line_pattern": { "masked": masked, "S_r": p.rows, "S_c": p.cols },
            })
        }
        Received::Network { word, pattern } => json!({
            "model": "network",
            "word": word_to_json(word),
            "network_pattern": {
                "A_r_hat": matrix_to_json(&pattern.a_r),
                "B_c_hat": matrix_to_json(&pattern.b_c),
            },
        }),
    }
}

pub fn received_from_json(tower: &FieldTower, v: &Value) -> Result<Received> {
    let obj = v.as_object().ok_or_else(|| bad("received must be an object"))?;
    let model = obj
        .get("model")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing model"))?;
    let top = tower.top_layer();
    match model {
        "none" => {
            let word = word_from_json(tower, obj.get("word").ok_or_else(|| bad("missing word"))?)?;
            Ok(Received::Plain(word))
        }
        "line" => {
            let p = obj
                .get("line_pattern")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("missing line_pattern"))?;
            let masked = p
                .get("masked")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing masked matrix"))?;
            let masked: Vec<Vec<Option<FieldElement>>> = masked
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad("masked row must be an array"))?
                        .iter()
                        .map(|c| {
                            if c.is_null() {
                                Ok(None)
                            } else {
                                element_from_json(tower, top - 1, c).map(Some)
                            }
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            let idx = |key: &str| -> Result<Vec<usize>> {
                match p.get(key) {
                    None => Ok(Vec::new()),
                    Some(v) => v
                        .as_array()
                        .ok_or_else(|| bad("cover must be an array"))?
                        .iter()
                        .map(|x| {
                            x.as_u64()
                                .map(|u| u as usize)
                                .ok_or_else(|| bad("cover indices must be integers"))
                        })
                        .collect(),
                }
            };
            let rows = idx("S_r")?;
            let cols = idx("S_c")?;
            let pattern = if rows.is_empty() && cols.is_empty() {
                LinePattern::with_minimal_cover(masked)
            } else {
                LinePattern { masked, rows, cols }
            };
            Ok(Received::Line(pattern))
        }
        "network" => {
            let word = word_from_json(tower, obj.get("word").ok_or_else(|| bad("missing word"))?)?;
            let p = obj
                .get("network_pattern")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("missing network_pattern"))?;
            let a_r = match p.get("A_r_hat") {
                None => Vec::new(),
                Some(v) => matrix_from_json(tower, top - 1, v)?,
            };
            let b_c = match p.get("B_c_hat") {
                None => Vec::new(),
                Some(v) => matrix_from_json(tower, top - 1, v)?,
            };
            Ok(Received::Network { word, pattern: NetworkPattern { a_r, b_c } })
        }
        other => Err(bad(format!("unknown model {other:?}"))),
    }
}

// -- decode results --

pub fn result_ok_to_json(f: &SkewPoly, e: Option<&[FieldElement]>) -> Value {
    let mut m = Map::new();
    m.insert("status".into(), json!("ok"));
    m.insert("f".into(), elements_to_json(f.coeffs()));
    if let Some(e) = e {
        m.insert("e".into(), elements_to_json(e));
    }
    Value::Object(m)
}

pub fn result_fail_to_json() -> Value {
    json!({ "status": "fail" })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn code_round_trips_through_json() {
        let code = demo::demo_code().unwrap();
        let v = code_to_json(&code);
        let back = code_from_json(&v).unwrap();
        assert_eq!(back.support(), code.support());
        assert_eq!(back.k(), code.k());
        assert_eq!(back.theta().generator_image(), code.theta().generator_image());
    }

    #[test]
    fn received_words_round_trip_in_each_model() {
        let code = demo::demo_code().unwrap();
        let (y, pattern) = demo::demo_received(&code);
        let tower = code.theta().tower().clone();
        for r in [
            Received::Plain(y.clone()),
            Received::Network { word: y.clone(), pattern: pattern.clone() },
        ] {
            let v = received_to_json(&r);
            let back = received_from_json(&tower, &v).unwrap();
            match (&r, &back) {
                (Received::Plain(a), Received::Plain(b)) => assert_eq!(a, b),
                (
                    Received::Network { word: a, pattern: pa },
                    Received::Network { word: b, pattern: pb },
                ) => {
                    assert_eq!(a, b);
                    assert_eq!(pa.a_r, pb.a_r);
                    assert_eq!(pa.b_c, pb.b_c);
                }
                _ => panic!("model changed in round trip"),
            }
        }
    }

    proptest! {
        #[test]
        fn random_elements_round_trip(seed in 0u64..1000) {
            let code = demo::demo_code().unwrap();
            let tw = code.theta().tower().clone();
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let x = tw.random_element(&mut rng, 50);
            let v = element_to_json(&x);
            let back = element_from_json(&tw, tw.top_layer(), &v).unwrap();
            prop_assert_eq!(back, x);
        }
    }

    #[test]
    fn fractions_parse_and_print() {
        let tw = FieldTower::rationals();
        let v = Value::String("-7/3".into());
        let x = element_from_json(&tw, 0, &v).unwrap();
        assert_eq!(element_to_json(&x), Value::String("-7/3".into()));
        assert!(element_from_json(&tw, 0, &Value::String("1/0".into())).is_err());
    }
}
