//! First positive zero of `J_ν` by ascending series, a coarse scan and
//! bisection.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const SERIES_TERMS: usize = 1000;
const SCAN_STEP: f64 = 0.05;
const SCAN_STEPS: usize = 100_000;
const BISECT_ITERS: usize = 200;

/// Bracket constant `(9π/8)^{2/3}(1+ε)` with `ε = 0.1`.
pub fn bracket_a() -> f64 {
    (9.0 * PI / 8.0).powf(2.0 / 3.0) * 1.1
}

/// `(lo, hi)` of the two-sided estimate
/// `ν + aν^{1/3}/2^{1/3} < j_ν < lo + (3/20)·2^{2/3}a²/ν^{1/2}`, for `ν > 0`.
pub fn zero_bracket(nu: f64, a: f64) -> (f64, f64) {
    let lo = nu + a * nu.cbrt() / 2f64.cbrt();
    let hi = lo + 0.15 * 2f64.powf(2.0 / 3.0) * a * a / nu.sqrt();
    (lo, hi)
}

/// `Σ_k (−1)^k (x/2)^{2k} / (k! (ν+1)_k)`, i.e. `J_ν(x) Γ(ν+1) (2/x)^ν`.
/// Same sign as `J_ν` for `x > 0` and equal to 1 at the origin.
fn scaled_series(nu: f64, x: f64) -> Result<f64> {
    let q = -0.25 * x * x;
    let mut term = 1.0f64;
    // Neumaier-compensated sum; the terms alternate and grow before decaying
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    for k in 1..SERIES_TERMS {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if kf > 0.5 * x && term.abs() <= 1e-17 * (sum + comp).abs().max(1e-300) {
            return Ok(sum + comp);
        }
    }
    Err(Error::NoConvergence { iterations: SERIES_TERMS })
}

/// First positive zero `j_ν` of the Bessel function `J_ν`, for `ν ≥ −1/2`.
pub fn bessel_j_zero(nu: f64) -> Result<f64> {
    if !nu.is_finite() || nu < -0.5 {
        return Err(Error::InvalidParameter(format!("bessel order must be >= -1/2, got {nu}")));
    }
    // J_ν has no zero in (0, ν] for ν ≥ 0
    let mut lo = nu.max(0.0);
    let mut f_lo = if lo == 0.0 { 1.0 } else { scaled_series(nu, lo)? };
    let mut hi = lo;
    let mut found = false;
    for _ in 0..SCAN_STEPS {
        hi = lo + SCAN_STEP;
        let f_hi = scaled_series(nu, hi)?;
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if f_hi.signum() != f_lo.signum() {
            found = true;
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    if !found {
        return Err(Error::NoConvergence { iterations: SCAN_STEPS });
    }
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = scaled_series(nu, mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { iterations: BISECT_ITERS })
}
