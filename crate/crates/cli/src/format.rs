//! Fixed numeric formatting for output files.

/// Formats `v` to 6 significant digits, ties to even, in plain decimal
/// notation with trailing zeros removed.
///
/// ```
/// use globus_cli::format::sig6;
/// assert_eq!(sig6(1234565.0), "1234560");
/// assert_eq!(sig6(0.000123456789), "0.000123457");
/// assert_eq!(sig6(-2.5), "-2.5");
/// ```
pub fn sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    // `{:e}` with a precision rounds the exact binary value, ties to even.
    let sci = format!("{:.5e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();

    // digits is d0 d1..d5 with value d0.d1..d5 × 10^exp
    let point = exp + 1;
    let mut out = String::with_capacity(digits.len() + 8);
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', point as usize - digits.len()));
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    if out.contains('.') {
        let trimmed = out.trim_end_matches('0').trim_end_matches('.').len();
        out.truncate(trimmed);
    }
    out
}
