//! Locale-free number formatting for CSV and JSON output: 17 significant
//! digits in scientific notation, which round-trips every `f64`.

use serde::{Serialize, Serializer};

/// `x` with 17 significant digits, e.g. `1.0148609094443717e+0`.
pub fn fmt_f64(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}

/// An `f64` that serializes as a JSON number with 17 significant digits, or as
/// `null` when not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Float(pub f64);

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let number: serde_json::Number =
            fmt_f64(self.0).parse().map_err(serde::ser::Error::custom)?;
        number.serialize(serializer)
    }
}

impl From<f64> for Float {
    fn from(x: f64) -> Self {
        Float(x)
    }
}
