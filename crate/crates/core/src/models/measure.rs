use crate::error::{Error, Result};

const MEASURE_TOLERANCE: f64 = 1e-12;

pub(crate) fn validate_measures(measures: &[f64]) -> Result<()> {
    if measures.is_empty() {
        return Err(Error::InvalidMeasures("no cells".into()));
    }
    if let Some(bad) = measures.iter().find(|z| !z.is_finite() || **z < 0.0) {
        return Err(Error::InvalidMeasures(format!("measure {bad} is negative or not finite")));
    }
    let total: f64 = measures.iter().sum();
    if (total - 1.0).abs() > MEASURE_TOLERANCE {
        return Err(Error::InvalidMeasures(format!("measures sum to {total}, not 1")));
    }
    Ok(())
}

/// Index of the cell a uniform `u` falls in when `[0, 1)` is cut into
/// consecutive pieces of the given measures. Zero-measure cells are never
/// selected.
pub(crate) fn pick_by_measure(measures: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, &z) in measures.iter().enumerate() {
        if z > 0.0 {
            cumulative += z;
            last_positive = i;
            if u < cumulative {
                return i;
            }
        }
    }
    // Rounding can leave the cumulative sum a hair below 1.
    last_positive
}
