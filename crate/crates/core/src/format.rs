//! Locale-independent number formatting shared by the text outputs.

/// Formats like C's `%.{digits}g`: `digits` significant digits, trailing
/// zeros removed, scientific notation outside `[1e-5, 10^digits)`.
pub fn fmt_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Seventeen significant digits: enough for an exact `f64` round trip.
pub fn fmt_exact(x: f64) -> String {
    fmt_g(x, 17)
}

/// Fixed-point with `decimals` places.
pub fn fmt_fixed(x: f64, decimals: usize) -> String {
    format!("{:.*}", decimals, x)
}
