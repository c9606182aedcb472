//! Numeric text formatting shared by every CSV and JSON writer.

use serde::Serializer;

/// Formats `v` with nine significant digits, like C's `%.9g`.
pub fn sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_fraction(format!("{v:.decimals$}"))
    } else {
        let s = format!("{v:.8e}");
        match s.split_once('e') {
            Some((mantissa, e)) => format!("{}e{}", trim_fraction(mantissa.to_string()), e),
            None => s,
        }
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_string()
    } else {
        t.to_string()
    }
}

/// Rounds to nine significant digits so JSON output matches the CSV precision.
pub fn round9(v: f64) -> f64 {
    sig9(v).parse().unwrap_or(v)
}

pub(crate) fn ser_f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round9(*v))
}

pub(crate) fn ser_vec<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| round9(*x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(-0.5), "-0.5");
        assert_eq!(sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(sig9(1234567891.0), "1.23456789e9");
        assert_eq!(sig9(1.0e-7), "1e-7");
        assert_eq!(sig9(9.9999999995), "10");
        assert_eq!(sig9(0.000123456789123), "0.000123456789");
    }

    #[test]
    fn round_trip_precision() {
        let v = 0.123456789987;
        assert!((round9(v) - v).abs() < 1e-9);
    }
}
