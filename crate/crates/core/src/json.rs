//! JSON encodings of sets, grids, clouds and copulas.
//!
//! Rationals are written as `"num/den"` strings; on input, JSON numbers and
//! decimal strings are accepted too and read exactly.

use serde_json::{json, Map, Value};

use crate::copula::{CopulaSpec, MapPiece, PiecewiseMap, ShuffleOfMin, ShufflePiece};
use crate::error::{input, Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::setmodel::{Permutation, SampleCloud, Tag};
use crate::{DyadicGridSet, Piece, PieceSet};

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

fn interval(iv: &(Rational, Rational)) -> Value {
    json!([rational(&iv.0), rational(&iv.1)])
}

fn field<'a>(obj: &'a Value, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Input(format!("{ctx}: missing field {key:?}")))
}

fn as_array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Input(format!("{ctx}: expected an array")))
}

fn as_usize(v: &Value, ctx: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::Input(format!("{ctx}: expected a nonnegative integer")))
}

pub fn parse_number(v: &Value, ctx: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| Error::Input(format!("{ctx}: {e}"))),
        Value::Number(n) => parse_rational(&n.to_string()).map_err(|e| Error::Input(format!("{ctx}: {e}"))),
        _ => input(format!("{ctx}: expected a number or a \"num/den\" string")),
    }
}

fn parse_vec(v: &Value, ctx: &str) -> Result<Vec<Rational>> {
    as_array(v, ctx)?.iter().map(|x| parse_number(x, ctx)).collect()
}

fn parse_interval(v: &Value, ctx: &str) -> Result<(Rational, Rational)> {
    let xs = parse_vec(v, ctx)?;
    match <[Rational; 2]>::try_from(xs) {
        Ok([a, b]) => Ok((a, b)),
        Err(_) => input(format!("{ctx}: an interval needs exactly two endpoints")),
    }
}

fn parse_tag(v: &Value, ctx: &str) -> Result<Tag> {
    match v.as_str() {
        Some("Full") => Ok(Tag::Full),
        Some("Null") => Ok(Tag::Null),
        _ => input(format!("{ctx}: tag must be \"Full\" or \"Null\"")),
    }
}

fn tag_str(t: Tag) -> &'static str {
    match t {
        Tag::Full => "Full",
        Tag::Null => "Null",
    }
}

pub fn piece_to_json(p: &Piece) -> Value {
    json!({
        "p": p.p(),
        "anchor": rationals(p.anchor()),
        "dirs": p.dirs().iter().map(|d| rationals(d)).collect::<Vec<_>>(),
        "box": p.param_box().iter().map(interval).collect::<Vec<_>>(),
        "tag": tag_str(p.tag()),
    })
}

pub fn set_to_json(s: &PieceSet) -> Value {
    json!({ "k": s.k(), "pieces": s.pieces().iter().map(piece_to_json).collect::<Vec<_>>() })
}

pub fn piece_from_json(v: &Value, ctx: &str) -> Result<Piece> {
    let anchor = parse_vec(field(v, "anchor", ctx)?, ctx)?;
    let dirs = match v.get("dirs") {
        Some(d) => as_array(d, ctx)?.iter().map(|x| parse_vec(x, ctx)).collect::<Result<Vec<_>>>()?,
        None => vec![],
    };
    let bx = match v.get("box") {
        Some(b) => as_array(b, ctx)?.iter().map(|x| parse_interval(x, ctx)).collect::<Result<Vec<_>>>()?,
        None => vec![(Rational::from_integer(0.into()), Rational::from_integer(1.into())); dirs.len()],
    };
    if let Some(p) = v.get("p") {
        if as_usize(p, ctx)? != dirs.len() {
            return input(format!("{ctx}: \"p\" does not match the number of directions"));
        }
    }
    let tag = match v.get("tag") {
        Some(t) => parse_tag(t, ctx)?,
        None => Tag::Full,
    };
    Piece::new(anchor, dirs, bx, tag).map_err(|e| Error::Input(format!("{ctx}: {e}")))
}

pub fn set_from_json(v: &Value) -> Result<PieceSet> {
    let k = as_usize(field(v, "k", "set")?, "set k")?;
    let pieces = as_array(field(v, "pieces", "set")?, "set pieces")?
        .iter()
        .enumerate()
        .map(|(i, p)| piece_from_json(p, &format!("piece {i}")))
        .collect::<Result<Vec<_>>>()?;
    PieceSet::new(k, pieces)
}

pub fn grid_to_json(g: &DyadicGridSet) -> Value {
    json!({ "k": g.k(), "L": g.level(), "cells": g.cells().collect::<Vec<_>>() })
}

pub fn grid_from_json(v: &Value) -> Result<DyadicGridSet> {
    let k = as_usize(field(v, "k", "grid")?, "grid k")?;
    let level = as_usize(field(v, "L", "grid")?, "grid L")?;
    let level = u32::try_from(level).map_err(|_| Error::Input("grid L too large".into()))?;
    let cells = as_array(field(v, "cells", "grid")?, "grid cells")?
        .iter()
        .map(|c| {
            as_array(c, "grid cell")?
                .iter()
                .map(|x| as_usize(x, "grid cell").and_then(|i| u32::try_from(i).map_err(|_| Error::Input("cell index too large".into()))))
                .collect::<Result<Vec<u32>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    DyadicGridSet::from_cells(k, level, cells)
}

pub fn cloud_to_json(c: &SampleCloud) -> Value {
    json!({ "k": c.k(), "seed": c.seed(), "points": c.points().collect::<Vec<_>>() })
}

pub fn cloud_from_json(v: &Value) -> Result<SampleCloud> {
    let k = as_usize(field(v, "k", "cloud")?, "cloud k")?;
    let seed = field(v, "seed", "cloud")?.as_u64().ok_or_else(|| Error::Input("cloud seed: expected an integer".into()))?;
    let mut coords = Vec::new();
    for p in as_array(field(v, "points", "cloud")?, "cloud points")? {
        let p = as_array(p, "cloud point")?;
        if p.len() != k {
            return input(format!("cloud point of dimension {} in a cloud of dimension {k}", p.len()));
        }
        for x in p {
            coords.push(x.as_f64().ok_or_else(|| Error::Input("cloud point: expected numbers".into()))?);
        }
    }
    SampleCloud::new(k, seed, coords)
}

fn map_to_json(m: &PiecewiseMap) -> Value {
    let pieces: Vec<Value> = m
        .pieces()
        .iter()
        .map(|p| {
            json!({
                "domain": p.domain.iter().map(interval).collect::<Vec<_>>(),
                "tag": tag_str(p.tag),
                "coeffs": p.coeffs.iter().map(|r| rationals(r)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "n": m.n(), "m": m.m(), "pieces": pieces })
}

fn map_from_json(v: &Value) -> Result<PiecewiseMap> {
    let n = as_usize(field(v, "n", "map")?, "map n")?;
    let m = as_usize(field(v, "m", "map")?, "map m")?;
    let pieces = as_array(field(v, "pieces", "map")?, "map pieces")?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let ctx = format!("map piece {i}");
            let domain = as_array(field(p, "domain", &ctx)?, &ctx)?
                .iter()
                .map(|x| parse_interval(x, &ctx))
                .collect::<Result<Vec<_>>>()?;
            let coeffs = as_array(field(p, "coeffs", &ctx)?, &ctx)?
                .iter()
                .map(|x| parse_vec(x, &ctx))
                .collect::<Result<Vec<_>>>()?;
            let tag = match p.get("tag") {
                Some(t) => parse_tag(t, &ctx)?,
                None => Tag::Full,
            };
            Ok(MapPiece { domain, tag, coeffs })
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseMap::new(n, m, pieces)
}

pub fn copula_to_json(c: &CopulaSpec) -> Result<Value> {
    Ok(match c {
        CopulaSpec::Product(k) => json!({ "variant": "product", "k": k }),
        CopulaSpec::Min(k) => json!({ "variant": "min", "k": k }),
        CopulaSpec::WLower2 => json!({ "variant": "w2" }),
        CopulaSpec::Shuffle(s) => {
            let pieces: Vec<Value> = s
                .pieces()
                .iter()
                .map(|p| json!({ "src": interval(&p.src), "dst": interval(&p.dst), "dir": p.dir }))
                .collect();
            json!({ "variant": "shuffle", "pieces": pieces })
        }
        CopulaSpec::Bipartite(m) => {
            let mut obj = map_to_json(m);
            obj["variant"] = json!("bipartite");
            obj
        }
        CopulaSpec::Permuted { inner, sigma } => json!({
            "variant": "permuted",
            "sigma": sigma.as_slice().iter().map(|i| i + 1).collect::<Vec<_>>(),
            "inner": copula_to_json(inner)?,
        }),
        CopulaSpec::Raw { name, .. } => {
            return Err(Error::Unsupported(format!("raw copula {name:?} has no JSON form")));
        }
    })
}

pub fn copula_from_json(v: &Value) -> Result<CopulaSpec> {
    let variant = field(v, "variant", "copula")?.as_str().unwrap_or_default();
    let k = || as_usize(field(v, "k", "copula")?, "copula k");
    match variant {
        "product" => CopulaSpec::product(k()?),
        "min" => CopulaSpec::min(k()?),
        "w2" => Ok(CopulaSpec::WLower2),
        "shuffle" => {
            let pieces = as_array(field(v, "pieces", "shuffle")?, "shuffle pieces")?
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let ctx = format!("shuffle piece {i}");
                    let dir = field(p, "dir", &ctx)?
                        .as_i64()
                        .and_then(|d| i8::try_from(d).ok())
                        .ok_or_else(|| Error::Input(format!("{ctx}: dir must be 1 or -1")))?;
                    Ok(ShufflePiece::new(
                        parse_interval(field(p, "src", &ctx)?, &ctx)?,
                        parse_interval(field(p, "dst", &ctx)?, &ctx)?,
                        dir,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CopulaSpec::Shuffle(ShuffleOfMin::new(pieces)?))
        }
        "bipartite" => CopulaSpec::bipartite(map_from_json(v)?),
        "permuted" => {
            let sigma = as_array(field(v, "sigma", "permuted")?, "permuted sigma")?
                .iter()
                .map(|x| as_usize(x, "permuted sigma"))
                .collect::<Result<Vec<_>>>()?;
            let inner = copula_from_json(field(v, "inner", "permuted")?)?;
            let sigma = Permutation::from_one_based(&sigma)?;
            sigma.check_len(inner.k())?;
            Ok(CopulaSpec::Permuted { inner: Box::new(inner), sigma })
        }
        other => input(format!(
            "unknown copula variant {other:?} (expected product, min, w2, shuffle, bipartite or permuted)"
        )),
    }
}

/// Reads a JSON document from text.
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

/// Pretty JSON with a trailing newline; stable key order.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Whether a document looks like a grid (`"cells"`) rather than a set.
pub fn is_grid(v: &Value) -> bool {
    v.as_object().is_some_and(|o: &Map<String, Value>| o.contains_key("cells"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    #[test]
    fn sets_round_trip() {
        for s in [fixtures::fig1(), fixtures::fig2(), fixtures::fig3(), fixtures::m3()] {
            let c = s.canonicalize();
            let back = set_from_json(&parse(&to_string(&set_to_json(&c))).unwrap()).unwrap();
            assert_eq!(back.canonicalize(), c);
        }
    }

    #[test]
    fn accepts_numbers_and_defaults() {
        let v = parse(r#"{"k":2,"pieces":[{"anchor":[0,0],"dirs":[[1,1]],"tag":"Full"},{"anchor":["1/2",0.25]}]}"#).unwrap();
        let s = set_from_json(&v).unwrap();
        assert_eq!(s.pieces()[1].anchor(), &[rat(1, 2), rat(1, 4)]);
        assert_eq!(s.pieces()[0].param_box(), &[(rat(0, 1), rat(1, 1))]);
    }

    #[test]
    fn spec_example_parses() {
        let v = parse(r#"{"k":2,"pieces":[{"p":1,"anchor":[0,0],"dirs":[[1,1]],"box":[[0,1]],"tag":"Full"}]}"#).unwrap();
        assert_eq!(set_from_json(&v).unwrap(), fixtures::m2());
        let g = parse(r#"{"k":2,"L":3,"cells":[[0,0],[1,1]]}"#).unwrap();
        let grid = grid_from_json(&g).unwrap();
        assert_eq!(grid.len(), 2);
        assert_eq!(grid_to_json(&grid), g);
        assert!(is_grid(&g) && !is_grid(&v));
    }

    #[test]
    fn copulas_round_trip() {
        let specs = [
            CopulaSpec::product(3).unwrap(),
            CopulaSpec::min(2).unwrap(),
            CopulaSpec::WLower2,
            CopulaSpec::Shuffle(fixtures::fig3_shuffle()),
            fixtures::example_copula(),
            fixtures::two_to_one_copula(),
            CopulaSpec::Permuted { inner: Box::new(fixtures::two_to_one_copula()), sigma: Permutation::from_one_based(&[3, 1, 2]).unwrap() },
        ];
        for c in specs {
            let v = copula_to_json(&c).unwrap();
            let back = copula_from_json(&parse(&to_string(&v)).unwrap()).unwrap();
            assert_eq!(copula_to_json(&back).unwrap(), v);
        }
        let shuffle = parse(
            r#"{"variant":"shuffle","pieces":[{"src":["0","1/5"],"dst":["4/5","1"],"dir":1},{"src":["1/5","7/10"],"dst":["0","1/2"],"dir":-1},{"src":["7/10","1"],"dst":["1/2","4/5"],"dir":1}]}"#,
        )
        .unwrap();
        assert!(matches!(copula_from_json(&shuffle).unwrap(), CopulaSpec::Shuffle(s) if s == fixtures::fig3_shuffle()));
        assert!(copula_to_json(&fixtures::w3_raw()).is_err());
    }

    #[test]
    fn clear_errors() {
        for bad in [
            r#"{"k":2}"#,
            r#"{"k":2,"pieces":[{"anchor":[2,0]}]}"#,
            r#"{"k":2,"pieces":[{"anchor":["x",0]}]}"#,
            r#"{"k":2,"pieces":[{"anchor":[0,0],"tag":"Half"}]}"#,
        ] {
            let err = set_from_json(&parse(bad).unwrap()).unwrap_err();
            assert!(matches!(err, Error::Input(_)), "{bad}: {err}");
        }
        assert!(parse("{").is_err());
        assert!(copula_from_json(&parse(r#"{"variant":"clayton"}"#).unwrap()).is_err());
        let not_mp = parse(r#"{"variant":"bipartite","n":1,"m":1,"pieces":[{"domain":[[0,1]],"coeffs":[[0,"1/2"]]}]}"#).unwrap();
        assert!(copula_from_json(&not_mp).is_err());
    }

    #[test]
    fn clouds_round_trip() {
        let c = SampleCloud::from_points(2, 9, &[vec![0.25, 0.5], vec![1.0, 0.0]]).unwrap();
        assert_eq!(cloud_from_json(&cloud_to_json(&c)).unwrap(), c);
    }
}
