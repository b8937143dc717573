//! printf-style `%.Ng` formatting and small CSV helpers.

/// `%.{prec}g` as C's printf renders it.
pub fn fmt_g(x: f64, prec: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let prec = prec.max(1);
    // the exponent after rounding to `prec` significant digits
    let sci = format!("{:.*e}", prec - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= prec as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (prec as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// 17 significant digits: enough to round-trip every f64.
pub fn g17(x: f64) -> String {
    fmt_g(x, 17)
}

/// 6 significant digits for human-readable output (no negative zero).
pub fn g6(x: f64) -> String {
    fmt_g(x + 0.0, 6)
}

pub fn csv_line<S: AsRef<str>>(fields: &[S]) -> String {
    let mut line = fields.iter().map(|f| quote(f.as_ref())).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf() {
        assert_eq!(g17(0.1), "0.10000000000000001");
        assert_eq!(g17(-12.5), "-12.5");
        assert_eq!(g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(g17(1e20), "1e+20");
        assert_eq!(g17(123456.0), "123456");
        assert_eq!(g6(1.234567891), "1.23457");
        assert_eq!(g6(0.0001), "0.0001");
        assert_eq!(g6(0.00001234567), "1.23457e-05");
        assert_eq!(g6(999999.5), "1e+06");
        assert_eq!(g6(-4.625), "-4.625");
        assert_eq!(fmt_g(f64::NAN, 17), "nan");
    }

    #[test]
    fn g17_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.0f64.sqrt(), 6.02214076e23, 1.6e-19, f64::MIN_POSITIVE, f64::MAX] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_line(&["a", "b,c"]), "a,\"b,c\"\n");
    }
}
