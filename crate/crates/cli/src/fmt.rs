/// Format with a fixed number of significant digits, plain decimal for
/// moderate magnitudes and scientific notation otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (_, exp) = sci.split_once('e').expect("scientific format");
    let exp: i64 = exp.parse().expect("exponent parses");
    if exp < -4 || exp >= digits as i64 + 3 {
        return sci;
    }
    let precision = (digits as i64 - 1 - exp).max(0) as usize;
    format!("{x:.precision$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digit_examples() {
        let cost = 2.0 * (2.0f64).ln() - 1.0;
        assert_eq!(format_sig(cost, 12), "0.386294361120");
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(1.0, 12), "1.00000000000");
        assert_eq!(format_sig(1.5e-9, 3), "1.50e-9");
    }
}
