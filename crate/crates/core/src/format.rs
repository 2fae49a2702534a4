//! Machine-readable number formatting.
//!
//! JSON documents and CSV files print every real as an IEEE-754 double with
//! 17 significant digits, which is enough to round-trip any `f64` exactly.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

/// Formats `x` with 17 significant digits in scientific notation.
///
/// Non-finite values are printed as `inf`, `-inf` or `NaN`.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Formats `x` with 6 significant digits for human-readable output.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-4..6).contains(&magnitude) {
        let decimals = (5 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            writer.write_all(sig17(value).as_bytes())
        } else {
            // JSON has no representation for non-finite numbers.
            CompactFormatter.write_null(writer)
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` to compact JSON with every float at 17 significant digits.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, Sig17Formatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_round_trips() {
        for x in [17.289353850865783, 0.1, 1.0 / 3.0, 1e-300, 6.02e23, -2.5] {
            let s = sig17(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn json_floats_use_17_digits() {
        let json = to_json(&serde_json::json!({"k": 0.1, "n": 3})).unwrap();
        assert_eq!(json, r#"{"k":1.0000000000000001e-1,"n":3}"#);
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["k"].as_f64(), Some(0.1));
    }

    #[test]
    fn sig6_examples() {
        assert_eq!(sig6(17.28935385), "17.2894");
        assert_eq!(sig6(0.155402144), "0.155402");
        assert_eq!(sig6(1234567.0), "1.23457e6");
    }
}
