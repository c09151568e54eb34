//! Number formatting and file output.

use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits. Every number that reaches a report
/// goes through this, so JSON and CSV carry the same values.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x);
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Fixed 12-significant-digit decimal text, e.g. `-0.500000000000`.
pub fn format_sig12(x: f64) -> String {
    let x = sig12(x);
    if x == 0.0 {
        return format!("{:.*}", SIGNIFICANT_DIGITS - 1, 0.0);
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-15..=15).contains(&exponent) {
        return format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    }
    // log10 can land one off near powers of ten; the e-format is authoritative
    let e_form = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exponent: i32 = e_form.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(exponent);
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn format_optional(x: Option<f64>) -> String {
    x.map(format_sig12).unwrap_or_default()
}

/// Writes through a temporary file in the same directory and renames it into
/// place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Renders an angle in radians as a multiple of π, e.g. `0`, `π`, `0.25π`.
pub fn format_pi_multiple(theta: f64) -> String {
    let k = theta / std::f64::consts::PI;
    if k.abs() < 1e-12 {
        "0".into()
    } else if (k - 1.0).abs() < 1e-12 {
        "π".into()
    } else {
        let text = format!("{k:.6}");
        format!("{}π", text.trim_end_matches('0').trim_end_matches('.'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rounding_examples() {
        assert_eq!(sig12(-0.5), -0.5);
        assert_eq!(sig12(0.1234567890123456), 0.123456789012);
        assert_eq!(sig12(-0.0), 0.0);
        assert!(sig12(-0.0).is_sign_positive());
        assert_eq!(format_sig12(-0.5), "-0.500000000000");
        assert_eq!(format_sig12(60.0), "60.0000000000");
        assert_eq!(format_sig12(0.000866025403784), "0.000866025403784");
        assert_eq!(format_sig12(0.0), "0.00000000000");
        assert_eq!(format_sig12(9.9999999999999e-1), "1.00000000000");
    }

    #[test]
    fn pi_multiples() {
        assert_eq!(format_pi_multiple(0.0), "0");
        assert_eq!(format_pi_multiple(std::f64::consts::PI), "π");
        assert_eq!(format_pi_multiple(std::f64::consts::FRAC_PI_4), "0.25π");
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("out.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }

    proptest! {
        #[test]
        fn text_and_value_agree(x in -1e6f64..1e6) {
            let text = format_sig12(x);
            prop_assert_eq!(text.parse::<f64>().unwrap(), sig12(x));
            prop_assert_eq!(sig12(sig12(x)), sig12(x));
        }

        #[test]
        fn small_values_agree(m in -1.0f64..1.0, e in -14i32..0) {
            let x = m * 10f64.powi(e);
            prop_assert_eq!(format_sig12(x).parse::<f64>().unwrap(), sig12(x));
        }
    }
}
