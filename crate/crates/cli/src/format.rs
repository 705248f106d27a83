//! Locale-independent number formatting with a fixed number of significant digits.

use serde_json::Value;

pub const SIGNIFICANT: usize = 15;

/// `%.15g`-style rendering: shortest of fixed or scientific notation, trailing
/// zeros removed, `.` as the decimal point.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp < -5 || exp >= SIGNIFICANT as i32 {
        let (first, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{first}e{exp}")
        } else {
            format!("{first}.{rest}e{exp}")
        }
    } else if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("0.{zeros}{}", digits.trim_end_matches('0'))
    } else {
        let (int, frac) = digits.split_at(exp as usize + 1);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Rounds to [`SIGNIFICANT`] digits so JSON output carries the same precision
/// as plain-text output.
pub fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

pub fn vector(coords: &[f64]) -> String {
    coords
        .iter()
        .map(|&c| fmt_sig(c))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
}

pub fn json_vector(coords: &[f64]) -> Value {
    Value::Array(coords.iter().map(|&c| json_number(c)).collect())
}
