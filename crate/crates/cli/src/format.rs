//! Number formatting for CSV output.

/// Formats `v` with nine significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-5, 15)`, scientific otherwise, trailing zeros
/// removed.
pub fn sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format has an exponent");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    if (-5..15).contains(&exponent) {
        let rounded: f64 = sci.parse().expect("round trip");
        let decimals = (8 - exponent).max(0) as usize;
        trim_zeros(format!("{rounded:.decimals$}"))
    } else {
        format!("{}e{exponent}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn row(fields: &[f64]) -> String {
    fields.iter().map(|v| sig9(*v)).collect::<Vec<_>>().join(",")
}
