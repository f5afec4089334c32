//! `%.Ng`-style decimal formatting and serde adapters that carry floats as
//! 17-significant-digit strings (exact round trip for every `f64`).

use serde::{Deserialize, Deserializer, Serializer};

/// Formats like C's `%.{sig}g`: positional for moderate exponents, otherwise
/// scientific, trailing zeros stripped.
pub fn fmt_g(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exp < -4 || exp >= sig as i32 {
        let mut m = String::new();
        m.push_str(&digits[..1]);
        if digits.len() > 1 {
            m.push('.');
            m.push_str(&digits[1..]);
        }
        out.push_str(strip_zeros(&m));
        out.push('e');
        out.push_str(&exp.to_string());
    } else if exp < 0 {
        let mut m = String::from("0.");
        for _ in 0..(-exp - 1) {
            m.push('0');
        }
        m.push_str(&digits);
        out.push_str(strip_zeros(&m));
    } else {
        let split = exp as usize + 1;
        let mut m = digits[..split].to_string();
        if split < digits.len() {
            m.push('.');
            m.push_str(&digits[split..]);
        }
        out.push_str(strip_zeros(&m));
    }
    out
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt17(x: f64) -> String {
    fmt_g(x, 17)
}

pub fn fmt6(x: f64) -> String {
    fmt_g(x, 6)
}

pub fn parse_decimal(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| format!("invalid decimal {s:?}: {e}"))
}

/// `#[serde(with = "f64_str")]`
pub mod f64_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt17(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        parse_decimal(&s).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "opt_f64_str")]`, absent values as `null`.
pub mod opt_f64_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&fmt17(*v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_decimal(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}
