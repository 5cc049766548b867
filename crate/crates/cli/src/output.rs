use lpball::phase::ScanRow;

pub const SCAN_HEADER: &str = "exponent,diagonal_value,ball_value,difference,n_used";

/// Twelve significant digits, trailing zeros trimmed; scientific outside
/// `[1e-5, 1e12)`.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mant))
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        out += &format!(
            "{},{},{},{},{}\n",
            sig12(r.exponent),
            sig12(r.diagonal_value),
            sig12(r.ball_value),
            sig12(r.difference),
            r.n_used
        );
    }
    out
}
