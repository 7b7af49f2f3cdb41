//! Fixed-precision rendering of floating point output.

/// Rounds `x` to `digits` significant decimal digits. Non-finite values and
/// zero pass through unchanged.
pub fn round_significant(x: f64, digits: u32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let s = format!("{:.*e}", digits.saturating_sub(1) as usize, x);
    s.parse().unwrap_or(x)
}

/// [`round_significant`] rendered as text, switching to exponent notation
/// for magnitudes outside `[1e-5, 1e15)`.
pub fn format_significant(x: f64, digits: u32) -> String {
    let r = round_significant(x, digits);
    let a = r.abs();
    if r != 0.0 && a.is_finite() && !(1e-5..1e15).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}
