//! Reproducible number formatting for text and JSON output.

/// Significant digits used for every printed number.
pub const SIG_DIGITS: usize = 15;

/// Formats `x` with 15 significant digits.
///
/// Values with `0 < |x| < 1e-4` use lowercase scientific notation, zero
/// (including `-0.0`) prints as `0`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    if x.abs() < 1e-4 {
        return format!("{:.*e}", SIG_DIGITS - 1, x);
    }
    // the exponent is read after rounding so that carries (9.99.. -> 10.0) are handled
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let exponent: i64 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (SIG_DIGITS as i64 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Magnitude below which printed amplitudes are shown as exact zeros.
pub const CHOP: f64 = 1e-14;

/// `0` for round-off sized values, `x` otherwise.
pub fn chop(x: f64) -> f64 {
    if x.abs() < CHOP {
        0.0
    } else {
        x
    }
}

/// Rounds `x` to 15 significant digits, for JSON output.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_notation() {
        assert_eq!(format_sig(1.0 / 9.0), "0.111111111111111");
        assert_eq!(format_sig(std::f64::consts::FRAC_1_SQRT_2), "0.707106781186548");
        assert_eq!(format_sig(1.0), "1.00000000000000");
        assert_eq!(format_sig(-0.235702260395516), "-0.235702260395516");
        assert_eq!(format_sig(123.5), "123.500000000000");
        assert_eq!(format_sig(0.0001), "0.000100000000000000");
    }

    #[test]
    fn scientific_below_threshold() {
        assert_eq!(format_sig(1.0 / 65610.0), "1.52415790275873e-5");
        assert_eq!(format_sig(-2.5e-7), "-2.50000000000000e-7");
    }

    #[test]
    fn chop_drops_round_off() {
        assert_eq!(chop(6.123e-17), 0.0);
        assert_eq!(chop(-2e-13), -2e-13);
    }

    #[test]
    fn zero_and_carry() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(9.999999999999997), "10.0000000000000");
        assert_eq!(format_sig(0.9999999999999996), "1.00000000000000");
    }

    #[test]
    fn rounding_to_sig_digits() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333333);
        assert_eq!(round_sig(0.0), 0.0);
    }
}
