//! Min-max scaling to the unit interval.

use crate::error::{Error, Result};

/// Scale `values` affinely onto [0, 1]; errors when the input is constant.
pub fn minmax_scale(values: &[f64], name: &str) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::InsufficientData {
            msg: format!("no values to scale for '{name}'"),
        });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return Err(Error::ConstantFeature { name: name.into() });
    }
    let span = max - min;
    Ok(values.iter().map(|v| (v - min) / span).collect())
}
