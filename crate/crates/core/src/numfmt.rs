//! Locale-free numeric output with 10 significant digits.

use serde::Serialize;
use serde_json::Value;

const SIG_DIGITS: usize = 10;

/// Rounds `x` to 10 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Formats a number for TSV output: at most 10 significant digits, `.` radix,
/// trailing zeros trimmed, scientific notation only outside [1e-6, 1e15).
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let x = round_sig(x);
    let mag = x.abs();
    if (1e-6..1e15).contains(&mag) {
        let exponent = mag.log10().floor() as i32;
        let decimals = (SIG_DIGITS as i32 - 1 - exponent).max(0) as usize;
        trim_fraction(format!("{x:.decimals$}"))
    } else {
        let s = format!("{:.*e}", SIG_DIGITS - 1, x);
        match s.split_once('e') {
            Some((mantissa, exp)) => format!("{}e{}", trim_fraction(mantissa.to_string()), exp),
            None => s,
        }
    }
}

fn trim_fraction(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Serializes `value` as pretty JSON with every float rounded to 10 significant digits.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_ten_significant_digits() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.3333333333");
        assert_eq!(fmt_num(123456.789012345), "123456.789");
        assert_eq!(fmt_num(2.0e-9), "2e-9");
        assert_eq!(fmt_num(1.234567890123e20), "1.23456789e20");
    }

    #[test]
    fn json_floats_are_rounded() {
        let s = to_json_string(&serde_json::json!({"x": 1.0 / 3.0, "k": 3})).unwrap();
        assert!(s.contains("0.3333333333"), "{s}");
        assert!(!s.contains("0.33333333333"), "{s}");
        assert!(s.contains("\"k\": 3"));
    }
}
