//! Numeric policy knobs: default precision, retry schedule, tolerances.
//!
//! Everything tunable lives here so the decision modules read as math.

use crate::error::{Error, Result};

/// Working precision in bits when none is requested.
pub const DEFAULT_PRECISION: u32 = 128;
pub const MIN_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 4096;

/// Environment variable overriding the default precision.
pub const PRECISION_ENV: &str = "LNE_PRECISION";

/// Ball certification retries: precision doubles on failure, at most this
/// many times.
pub const MAX_PRECISION_RETRIES: u32 = 4;

/// Scaled backward-error tolerance for accepting a Puiseux branch.
pub const RESIDUAL_TOLERANCE: f64 = 1e-15;

/// First residual sample parameter: tau = 2^-RESIDUAL_GRID_START, halving
/// once per extra sample.  The point sits deep enough that a correctly
/// truncated series (first omitted term one tau-order above the last kept
/// one) scores around 2^-64, three orders below `RESIDUAL_TOLERANCE`, while
/// a corrupted leading coefficient scores near its corruption size.
pub const RESIDUAL_GRID_START: u32 = 64;

/// Default number of residual samples.
pub const RESIDUAL_SAMPLES: u32 = 8;

/// Default truncation exponent for Puiseux expansions.
pub const DEFAULT_TRUNCATION: i64 = 6;

/// Witness sampling: count and logarithmic t-range.
pub const WITNESS_SAMPLES: usize = 16;
pub const WITNESS_T_MIN: f64 = 1e-6;
pub const WITNESS_T_MAX: f64 = 1e-2;
/// Default half-width of the admissible-line wedge parameter.
pub const WITNESS_EPSILON: f64 = 0.1;
/// Fit uncertainty below this floor is treated as the floor: the slope of an
/// exactly linear log-log fit has zero standard error, and a strict
/// comparison against it would flip on harmless perturbations.
pub const WITNESS_RADIUS_FLOOR: f64 = 1e-6;
/// Fits with an effective radius above this are inconclusive.
pub const WITNESS_RADIUS_LIMIT: f64 = 0.25;

/// Direction search defaults.
pub const SEARCH_HEIGHT: i64 = 5;
pub const SEARCH_FRAME_ATTEMPTS: u32 = 32;
pub const SEARCH_LINE_ATTEMPTS: u32 = 32;
pub const SEARCH_HEIGHT_DOUBLINGS: u32 = 2;
pub const DEFAULT_SEED: u64 = 0;

/// Read the default precision, honoring [`PRECISION_ENV`] when set to a
/// value inside the documented range.
pub fn default_precision() -> u32 {
    match std::env::var(PRECISION_ENV) {
        Ok(s) => match s.trim().parse::<u32>() {
            Ok(p) if (MIN_PRECISION..=MAX_PRECISION).contains(&p) => p,
            _ => DEFAULT_PRECISION,
        },
        Err(_) => DEFAULT_PRECISION,
    }
}

pub fn validate_precision(prec: u32) -> Result<u32> {
    if (MIN_PRECISION..=MAX_PRECISION).contains(&prec) {
        Ok(prec)
    } else {
        Err(Error::domain(format!(
            "precision {prec} outside [{MIN_PRECISION}, {MAX_PRECISION}]"
        )))
    }
}

/// Run `op` at `start` bits, doubling the precision on every
/// [`Error::Precision`] failure, up to [`MAX_PRECISION_RETRIES`] retries.
/// Other errors pass through untouched.
pub fn retry_with_precision<T>(
    start: u32,
    mut op: impl FnMut(u32) -> Result<T>,
) -> Result<T> {
    let mut prec = start;
    let mut last = None;
    for _ in 0..=MAX_PRECISION_RETRIES {
        match op(prec) {
            Err(Error::Precision {
                message,
                required_precision,
            }) => {
                let next = required_precision.max(prec.saturating_mul(2));
                last = Some(Error::Precision {
                    message,
                    required_precision: next,
                });
                prec = next;
            }
            other => return other,
        }
    }
    Err(last.expect("loop ran at least once"))
}
