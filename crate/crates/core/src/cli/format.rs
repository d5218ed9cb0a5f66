//! CSV cell formatting: 12 significant digits, `.` decimal point, `NA` for gaps.

pub const NA: &str = "NA";

const SIGNIFICANT: usize = 12;

/// Formats like C's `%.12g`.
pub fn number(x: f64) -> String {
    if x.is_nan() {
        return NA.to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Round first so the exponent reflects the rounded value.
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= SIGNIFICANT as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

pub fn optional(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), number)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
