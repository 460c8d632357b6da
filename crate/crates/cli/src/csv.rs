/// Quotes a field when it contains a separator, quote or newline.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Number in shortest round-trip form, or empty when absent.
pub fn opt_field(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        v.to_string()
    }
}
