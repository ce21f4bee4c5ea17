//! Fixed-precision number formatting shared by the printer, the CSV writer and the CLI.

/// Significant digits used for every printed real.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with `digits` significant digits in the style of C's `%g`.
///
/// Positional notation is used for decimal exponents in `[-4, digits)`, scientific otherwise.
/// With `trim` unset trailing zeros are kept (`%#g`), so `1.0` prints as `1.00000000000`.
pub fn significant(x: f64, digits: usize, trim: bool) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.max(1);
    if x == 0.0 {
        return if trim || digits == 1 {
            "0".into()
        } else {
            format!("0.{}", "0".repeat(digits - 1))
        };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    if exp < -4 || exp >= digits as i32 {
        let mantissa = if trim {
            trim_fraction(mantissa)
        } else {
            mantissa.to_string()
        };
        return format!("{sign}{mantissa}e{exp}");
    }
    let all: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let (int, frac) = if exp >= 0 {
        let split = exp as usize + 1;
        (all[..split].to_string(), all[split..].to_string())
    } else {
        (
            "0".to_string(),
            format!("{}{}", "0".repeat((-exp - 1) as usize), all),
        )
    };
    let frac = if trim {
        frac.trim_end_matches('0').to_string()
    } else {
        frac
    };
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn trim_fraction(m: &str) -> String {
    if m.contains('.') {
        m.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        m.to_string()
    }
}

/// `%.12g`: twelve significant digits, trailing zeros removed.
pub fn g12(x: f64) -> String {
    significant(x, SIGNIFICANT_DIGITS, true)
}

/// `%#.12g`: twelve significant digits, trailing zeros kept.
pub fn fixed12(x: f64) -> String {
    significant(x, SIGNIFICANT_DIGITS, false)
}
