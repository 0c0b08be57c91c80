//! Exact JSON input: curve files and eigenform files. Integers travel as
//! decimal strings (bare JSON integers are accepted too); nothing is read
//! through floating point.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::Value;

use crate::bound::{ApEntry, EigenformData, IdealFactor};
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CurveInput {
    pub curve: Curve,
    pub point: Point,
}

fn bad(msg: String) -> Error {
    Error::InvalidInput(msg)
}

fn parse_int_str(s: &str, what: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| bad(format!("{what}: not a decimal integer: {s:?}")))
}

fn as_bigint(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::String(s) => parse_int_str(s, what),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(bad(format!("{what}: {n} is not an integer")))
            }
        }
        _ => Err(bad(format!("{what}: expected a decimal integer string"))),
    }
}

fn as_biguint(v: &Value, what: &str) -> Result<BigUint> {
    let i = as_bigint(v, what)?;
    i.to_biguint()
        .ok_or_else(|| bad(format!("{what}: must be non-negative")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .ok_or_else(|| bad(format!("{what}: {n} is not a non-negative integer"))),
        Value::String(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| bad(format!("{what}: not an integer: {s:?}"))),
        _ => Err(bad(format!("{what}: expected an integer"))),
    }
}

/// "p/q" or a plain integer, as a string or bare JSON integer.
fn as_rational(v: &Value, what: &str) -> Result<BigRational> {
    if let Value::String(s) = v {
        if let Some((p, q)) = s.split_once('/') {
            let num = parse_int_str(p, what)?;
            let den = parse_int_str(q, what)?;
            if den.is_zero() {
                return Err(bad(format!("{what}: zero denominator")));
            }
            return Ok(BigRational::new(num, den));
        }
    }
    Ok(BigRational::from_integer(as_bigint(v, what)?))
}

fn as_string(v: &Value, what: &str) -> Result<String> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| bad(format!("{what}: expected a string")))
}

fn field<'a>(obj: &'a Value, name: &str, what: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| bad(format!("{what}: missing field {name:?}")))
}

fn parse_json(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(format!("{what}: invalid JSON: {e}")))
}

/// {"a": [a1,a2,a3,a4,a6], "point": {"x": "p/q", "y": "r/s"}}; the point is
/// checked against the curve equation before anything downstream sees it.
pub fn parse_curve(text: &str) -> Result<CurveInput> {
    let v = parse_json(text, "curve file")?;
    let arr = field(&v, "a", "curve file")?
        .as_array()
        .ok_or_else(|| bad("curve file: \"a\" must be an array".into()))?;
    if arr.len() != 5 {
        return Err(bad(format!(
            "curve file: \"a\" must list [a1, a2, a3, a4, a6], got {} entries",
            arr.len()
        )));
    }
    let mut a = Vec::with_capacity(5);
    for (i, entry) in arr.iter().enumerate() {
        a.push(as_bigint(entry, &format!("curve file: a[{i}]"))?);
    }
    let curve = Curve::new([
        a[0].clone(),
        a[1].clone(),
        a[2].clone(),
        a[3].clone(),
        a[4].clone(),
    ])?;
    let pt = field(&v, "point", "curve file")?;
    let x = as_rational(field(pt, "x", "curve file: point")?, "curve file: point.x")?;
    let y = as_rational(field(pt, "y", "curve file: point")?, "curve file: point.y")?;
    let point = Point::Affine(x, y);
    curve.require_on_curve(&point)?;
    Ok(CurveInput { curve, point })
}

pub fn load_curve(path: &Path) -> Result<CurveInput> {
    let text = fs::read_to_string(path)?;
    parse_curve(&text).map_err(|e| match e {
        Error::InvalidInput(msg) => bad(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// {"label":…, "hecke_poly":[c0,…,cd], "level":[{"prime":…, "exp":…}],
/// "ap":[{"prime":…, "norm":N, "coords":[…]}]}. Structure only; the
/// mathematical checks live in EigenformData::validate.
pub fn parse_eigenform(text: &str) -> Result<EigenformData> {
    let v = parse_json(text, "eigenform file")?;
    let label = as_string(field(&v, "label", "eigenform file")?, "eigenform label")?;
    let what = format!("eigenform {label}");
    let poly = field(&v, "hecke_poly", &what)?
        .as_array()
        .ok_or_else(|| bad(format!("{what}: \"hecke_poly\" must be an array")))?;
    let mut hecke = Vec::with_capacity(poly.len());
    for (i, c) in poly.iter().enumerate() {
        hecke.push(as_bigint(c, &format!("{what}: hecke_poly[{i}]"))?);
    }
    let mut level = Vec::new();
    for (i, entry) in field(&v, "level", &what)?
        .as_array()
        .ok_or_else(|| bad(format!("{what}: \"level\" must be an array")))?
        .iter()
        .enumerate()
    {
        level.push(IdealFactor {
            label: as_string(
                field(entry, "prime", &format!("{what}: level[{i}]"))?,
                &format!("{what}: level[{i}].prime"),
            )?,
            exp: as_u64(
                field(entry, "exp", &format!("{what}: level[{i}]"))?,
                &format!("{what}: level[{i}].exp"),
            )?,
        });
    }
    let mut ap = Vec::new();
    for (i, entry) in field(&v, "ap", &what)?
        .as_array()
        .ok_or_else(|| bad(format!("{what}: \"ap\" must be an array")))?
        .iter()
        .enumerate()
    {
        let coords_val = field(entry, "coords", &format!("{what}: ap[{i}]"))?
            .as_array()
            .ok_or_else(|| bad(format!("{what}: ap[{i}].coords must be an array")))?;
        let mut coords = Vec::with_capacity(coords_val.len());
        for (j, c) in coords_val.iter().enumerate() {
            coords.push(as_rational(c, &format!("{what}: ap[{i}].coords[{j}]"))?);
        }
        ap.push(ApEntry {
            prime_label: as_string(
                field(entry, "prime", &format!("{what}: ap[{i}]"))?,
                &format!("{what}: ap[{i}].prime"),
            )?,
            norm: as_biguint(
                field(entry, "norm", &format!("{what}: ap[{i}]"))?,
                &format!("{what}: ap[{i}].norm"),
            )?,
            coords,
        });
    }
    Ok(EigenformData {
        label,
        hecke,
        level,
        ap,
    })
}

pub fn load_eigenform(path: &Path) -> Result<EigenformData> {
    let text = fs::read_to_string(path)?;
    parse_eigenform(&text).map_err(|e| match e {
        Error::InvalidInput(msg) => bad(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Every .json file in the directory, in file-name order so runs are
/// reproducible regardless of directory enumeration order.
pub fn load_forms_dir(dir: &Path) -> Result<Vec<EigenformData>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_eigenform(p)).collect()
}
