//! Number formatting shared by the CSV, rule and label writers.

/// Rounds to six significant digits.
pub fn round_sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let s = format!("{:.5e}", x);
    s.parse().unwrap_or(x)
}

/// Shortest decimal rendering of `x` after rounding to six significant
/// digits. Infinity prints as `inf`.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig6(x);
    if r == 0.0 {
        return "0".into();
    }
    format!("{}", r)
}

pub fn parse_f64(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_sig6(0.35), "0.35");
        assert_eq!(fmt_sig6(691.7), "691.7");
        assert_eq!(fmt_sig6(1.0 / 3.0), "0.333333");
        assert_eq!(fmt_sig6(123456789.0), "123457000");
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(f64::INFINITY), "inf");
        assert_eq!(fmt_sig6(10.0), "10");
    }

    #[test]
    fn round_trip_after_rounding() {
        for x in [0.000123456789, 1.23456789, 60.0001, 5.0] {
            let r = round_sig6(x);
            assert_eq!(parse_f64(&fmt_sig6(r)), Some(r));
        }
    }
}
