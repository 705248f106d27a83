use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use gyrokit_core::{GyroVector, Hermitian2, LinearMap};

/// Parses `0.5,-0.25,0` into a ball point, rejecting anything within the
/// boundary margin.
pub fn vector(literal: &str, margin: f64) -> Result<GyroVector> {
    let coords = literal
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid number `{}` in vector `{literal}`", s.trim()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GyroVector::with_margin(coords, margin)?)
}

fn json_source(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with(['{', '[']) {
        return Ok(arg.to_string());
    }
    fs::read_to_string(Path::new(arg)).with_context(|| format!("cannot read `{arg}`"))
}

/// A Hermitian2 given as a JSON file (or inline JSON) `{a, d, re_b, im_b}`.
pub fn hermitian(arg: &str) -> Result<Hermitian2> {
    let text = json_source(arg)?;
    let h: Hermitian2 = serde_json::from_str(&text)
        .with_context(|| format!("invalid Hermitian2 JSON in `{arg}`"))?;
    Ok(Hermitian2::new(h.a, h.d, h.re_b, h.im_b)?)
}

/// Source of a map for `classify`.
pub enum MapSource {
    Zero,
    Matrix(LinearMap),
}

/// `zero` or a row-major JSON matrix file.
pub fn map_source(arg: &str) -> Result<MapSource> {
    if arg == "zero" {
        return Ok(MapSource::Zero);
    }
    let text = json_source(arg)?;
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(&text).with_context(|| format!("invalid matrix JSON in `{arg}`"))?;
    if rows.is_empty() {
        bail!("matrix in `{arg}` is empty");
    }
    Ok(MapSource::Matrix(LinearMap::from_rows(rows)?))
}

/// `name=value` threshold override.
pub fn threshold(arg: &str) -> Result<(String, f64)> {
    let (name, value) = arg
        .split_once('=')
        .with_context(|| format!("expected name=value, got `{arg}`"))?;
    let value: f64 = value
        .parse()
        .with_context(|| format!("invalid threshold `{value}`"))?;
    Ok((name.to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_vectors() {
        let v = vector("0.5, -0.25,0", 1e-9).unwrap();
        assert_eq!(v.coords(), &[0.5, -0.25, 0.0]);
        assert!(vector("0.5,x", 1e-9).is_err());
        assert!(vector("1.5,0", 1e-9).is_err());
        assert!(vector("", 1e-9).is_err());
    }

    #[test]
    fn parses_inline_json() {
        let h = hermitian(r#"{"a":0.8,"d":0.2,"re_b":0,"im_b":0}"#).unwrap();
        assert_eq!(h, Hermitian2::diag(0.8, 0.2));
        assert!(matches!(map_source("zero").unwrap(), MapSource::Zero));
        assert!(matches!(
            map_source("[[1,0],[0,1]]").unwrap(),
            MapSource::Matrix(_)
        ));
        assert!(map_source("[[1,0]]").is_err());
        assert_eq!(threshold("closure=0.5").unwrap(), ("closure".into(), 0.5));
    }
}
