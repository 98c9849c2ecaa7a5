//! The configuration file: `{"mode": "exact" | "float", "vectors": [[x, y], ...]}`.
//!
//! Exact coordinates are strings `"p/q"` or `"p"`; float coordinates are JSON numbers.

use std::path::Path;

use balconf::geom::{parse_rational, AnyConfiguration, AnyVector};
use balconf::{BigRational, Configuration, Mode, PlaneVector};
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::json;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawMode {
    Exact,
    Float,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: RawMode,
    vectors: Vec<Vec<Value>>,
}

fn field_error(field: String, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field,
        message: message.into(),
    }
}

fn exact_coordinate(v: &Value, field: String) -> Result<BigRational, ConfigError> {
    match v {
        Value::String(s) => parse_rational(s)
            .ok_or_else(|| field_error(field, format!("{s:?} is not a rational \"p/q\""))),
        _ => Err(field_error(field, "exact mode expects a string \"p/q\"")),
    }
}

fn float_coordinate(v: &Value, field: String) -> Result<f64, ConfigError> {
    match v.as_f64() {
        Some(x) if v.is_number() && x.is_finite() => Ok(x),
        _ => Err(field_error(field, "float mode expects a finite number")),
    }
}

pub fn parse(text: &str) -> Result<AnyConfiguration, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let message = full
            .rsplit_once(" at line ")
            .map_or(full.as_str(), |(m, _)| m)
            .to_string();
        ConfigError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    if raw.vectors.is_empty() {
        return Err(field_error(
            "vectors".into(),
            "at least one vector is required",
        ));
    }
    let mut vectors = Vec::with_capacity(raw.vectors.len());
    for (i, pair) in raw.vectors.iter().enumerate() {
        let [x, y] = pair.as_slice() else {
            return Err(field_error(
                format!("vectors[{i}]"),
                format!("expected [x, y], found {} entries", pair.len()),
            ));
        };
        let v = match raw.mode {
            RawMode::Exact => AnyVector::Exact(PlaneVector::new(
                exact_coordinate(x, format!("vectors[{i}][0]"))?,
                exact_coordinate(y, format!("vectors[{i}][1]"))?,
            )),
            RawMode::Float => AnyVector::Float(PlaneVector::new(
                float_coordinate(x, format!("vectors[{i}][0]"))?,
                float_coordinate(y, format!("vectors[{i}][1]"))?,
            )),
        };
        vectors.push(v);
    }
    AnyConfiguration::from_vectors(vectors).map_err(|e| match e {
        balconf::GeomError::ZeroVector { index } => {
            field_error(format!("vectors[{index}]"), "zero vector")
        }
        other => field_error("vectors".into(), other.to_string()),
    })
}

pub fn read(path: &Path) -> Result<AnyConfiguration, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse(&text)
}

pub fn exact_value(c: &Configuration<BigRational>) -> Value {
    let vectors = c
        .vectors()
        .iter()
        .map(|v| Value::from(vec![v.x.to_string(), v.y.to_string()]))
        .collect::<Vec<_>>();
    serde_json::json!({ "mode": "exact", "vectors": vectors })
}

pub fn float_value(c: &Configuration<f64>) -> Value {
    let vectors = c
        .vectors()
        .iter()
        .map(|v| Value::from(vec![v.x, v.y]))
        .collect::<Vec<_>>();
    serde_json::json!({ "mode": "float", "vectors": vectors })
}

pub fn to_value(c: &AnyConfiguration) -> Value {
    match c {
        AnyConfiguration::Exact(c) => exact_value(c),
        AnyConfiguration::Float(c) => float_value(c),
    }
}

pub fn to_string(c: &AnyConfiguration) -> String {
    json::to_string(&to_value(c))
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let text = r#"{"mode": "exact", "vectors": [["1", "0"], ["-3/6", "7/2"], ["0", "-1"]]}"#;
        let c = parse(text).unwrap();
        let AnyConfiguration::Exact(ref q) = c else {
            panic!("expected exact mode")
        };
        assert_eq!(q.vectors()[1].x, parse_rational("-1/2").unwrap());
        assert_eq!(parse(&to_string(&c)).unwrap(), c);
    }

    #[test]
    fn float_round_trip_is_bit_exact() {
        let xs = [0.1, -1.0 / 3.0, 1e-300, 12345.678901234567, -0.0, f64::MAX];
        let c = AnyConfiguration::Float(
            Configuration::new(xs.iter().map(|&x| PlaneVector::new(x, 1.0)).collect()).unwrap(),
        );
        let back = parse(&to_string(&c)).unwrap();
        let (AnyConfiguration::Float(a), AnyConfiguration::Float(b)) = (&c, &back) else {
            panic!("expected float mode")
        };
        for (u, v) in a.vectors().iter().zip(b.vectors()) {
            assert_eq!(u.x.to_bits(), v.x.to_bits());
            assert_eq!(u.y.to_bits(), v.y.to_bits());
        }
    }

    #[test]
    fn errors_carry_context() {
        let syntax = parse("{\"mode\": \"exact\",\n \"vectors\": [[\"1\", \"0\"]").unwrap_err();
        assert!(
            matches!(syntax, ConfigError::Syntax { line: 2, .. }),
            "{syntax}"
        );

        let wrong_kind =
            parse(r#"{"mode": "exact", "vectors": [["1", "0"], [1, "2"]]}"#).unwrap_err();
        assert_eq!(
            wrong_kind.to_string(),
            "vectors[1][0]: exact mode expects a string \"p/q\""
        );

        let float_string = parse(r#"{"mode": "float", "vectors": [["1", 0]]}"#).unwrap_err();
        assert!(float_string.to_string().starts_with("vectors[0][0]"));

        let zero =
            parse(r#"{"mode": "exact", "vectors": [["1", "0"], ["0", "0/5"]]}"#).unwrap_err();
        assert_eq!(zero.to_string(), "vectors[1]: zero vector");

        let short = parse(r#"{"mode": "float", "vectors": [[1]]}"#).unwrap_err();
        assert!(short.to_string().starts_with("vectors[0]: expected [x, y]"));

        assert!(parse(r#"{"mode": "exact", "vectors": []}"#).is_err());
        assert!(parse(r#"{"mode": "complex", "vectors": [[1, 0]]}"#).is_err());
        assert!(parse(r#"{"mode": "float", "vectors": [[1, 0]], "extra": 1}"#).is_err());
        assert!(parse(r#"{"mode": "exact", "vectors": [["1/0", "1"]]}"#).is_err());
    }
}
