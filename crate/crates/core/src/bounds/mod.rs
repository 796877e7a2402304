//! Closed-form lower and upper bounds for normal curvature, `Sc^⋊` values and
//! a consistency report that sets the two sides against each other.

mod bessel;
mod report;

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

pub use bessel::{bessel_j_zero, bracket_a, zero_bracket};
pub use report::{
    lower_bounds, report, upper_constructions, BoundEntry, BoundsReport, ManifoldClass, R2Check, Side, Space, Violation,
};

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

/// `√(3n/(n+2))`: tori in a unit ball of any dimension.
pub fn lower_petrunin(n: usize) -> Result<f64> {
    require(n >= 1, || "dimension must be >= 1".into())?;
    let n = n as f64;
    Ok((3.0 * n / (n + 2.0)).sqrt())
}

/// `√((n−1)/k)` for `X^n ↪ S^{n+k}(1)`.
pub fn lower_sphere_a(n: usize, k: usize) -> Result<f64> {
    require(n >= 1 && k >= 1, || format!("need n >= 1 and k >= 1, got n={n}, k={k}"))?;
    Ok(((n - 1) as f64 / k as f64).sqrt())
}

/// `√((2n−2)/(n+2))` for `X^n ↪ S^{n+k}(1)`, any `k`.
pub fn lower_sphere_b(n: usize) -> Result<f64> {
    require(n >= 1, || "dimension must be >= 1".into())?;
    let n = n as f64;
    Ok(((2.0 * n - 2.0) / (n + 2.0)).sqrt())
}

/// Largest codimension `k` at which the `[A]` bound is at least the `[B]`
/// bound, or `None` when `[B]` wins already at `k = 1`.
pub fn sphere_crossover(n: usize) -> Result<Option<usize>> {
    let b = lower_sphere_b(n)?;
    let mut best = None;
    for k in 1..=n.max(1) {
        if lower_sphere_a(n, k)? >= b {
            best = Some(k);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandBound {
    /// `max(raw, 0)`.
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
    /// Below the trivial bound 1.
    pub weak: bool,
}

/// `(n+1)/π − 1` for `T^n ↪ B^{n+1}(1)`.
pub fn lower_band(n: usize) -> Result<BandBound> {
    require(n >= 1, || "dimension must be >= 1".into())?;
    let raw = (n + 1) as f64 / PI - 1.0;
    Ok(BandBound { value: raw.max(0.0), raw, clamped: raw < 0.0, weak: raw < 1.0 })
}

fn bessel_order(ambient_n: usize) -> f64 {
    ambient_n as f64 / 2.0 - 1.0
}

/// `(2j_ν/(πr))√((n+1)/n) − r`, `ν = n/2 − 1`, for a hypersurface of the ball
/// `B^n(r)`. Not clamped.
pub fn lower_focal(ambient_n: usize, r: f64) -> Result<f64> {
    require(ambient_n >= 2 && r > 0.0 && r.is_finite(), || format!("need n >= 2 and r > 0, got n={ambient_n}, r={r}"))?;
    let j = bessel_j_zero(bessel_order(ambient_n))?;
    let n = ambient_n as f64;
    Ok(2.0 * j / (PI * r) * ((n + 1.0) / n).sqrt() - r)
}

/// `(πr/(2j_ν))√(n/(n+1))`, the matching bound on the focal radius.
pub fn focal_radius_bound(ambient_n: usize, r: f64) -> Result<f64> {
    require(ambient_n >= 2 && r > 0.0 && r.is_finite(), || format!("need n >= 2 and r > 0, got n={ambient_n}, r={r}"))?;
    let j = bessel_j_zero(bessel_order(ambient_n))?;
    let n = ambient_n as f64;
    Ok(PI * r / (2.0 * j) * (n / (n + 1.0)).sqrt())
}

/// `2π√(n/(σ(n+1)))`: width of a band over `X^n` with `Sc^⋊ ≥ σ`.
pub fn band_width_bound(n: usize, sigma: f64) -> Result<f64> {
    require(n >= 1, || "dimension must be >= 1".into())?;
    require(sigma > 0.0 && sigma.is_finite(), || format!("sigma must be positive, got {sigma}"))?;
    let n = n as f64;
    Ok(2.0 * PI * (n / (sigma * (n + 1.0))).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Rectangular solid with the given side lengths.
    Box { sides: Vec<f64> },
    /// Unit hemisphere `S^n_+`.
    Hemisphere { n: usize },
    /// Unit ball `B^n`.
    Ball { n: usize },
}

/// Closed-form `Sc^⋊` of the catalog shapes.
pub fn sc_rtimes(shape: &Shape) -> Result<f64> {
    match shape {
        Shape::Box { sides } => {
            require(!sides.is_empty() && sides.iter().all(|s| *s > 0.0 && s.is_finite()), || {
                format!("box sides must be positive, got {sides:?}")
            })?;
            Ok(sides.iter().map(|s| 4.0 * PI * PI / (s * s)).sum())
        }
        Shape::Hemisphere { n } => {
            require(*n >= 1, || "dimension must be >= 1".into())?;
            Ok((n * (n + 3)) as f64)
        }
        Shape::Ball { n } => {
            require(*n >= 1, || "dimension must be >= 1".into())?;
            let j = bessel_j_zero(bessel_order(*n))?;
            Ok(4.0 * j * j)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VeroneseDims {
    /// `(2s+m−1)(s+m−2)!/(s!(m−1)!)`, the dimension of degree-`s` spherical
    /// harmonics on `S^m`.
    pub harmonic_dim: BigUint,
    /// Dimension of the target sphere `S^{m_s}`, one less than `harmonic_dim`.
    pub m_s: BigUint,
    /// `R_s = √(s(s+m−1)/m)`.
    pub r_s: f64,
}

fn factorial(k: usize) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn veronese_dims(m: usize, s: usize) -> Result<VeroneseDims> {
    require(m >= 1 && s >= 1, || format!("need m >= 1 and s >= 1, got m={m}, s={s}"))?;
    let num = BigUint::from(2 * s + m - 1) * factorial(s + m - 2);
    let den = factorial(s) * factorial(m - 1);
    debug_assert!((&num % &den) == BigUint::from(0u8));
    let r_s = ((s * (s + m - 1)) as f64 / m as f64).sqrt();
    let harmonic_dim = num / den;
    Ok(VeroneseDims { m_s: &harmonic_dim - BigUint::one(), harmonic_dim, r_s })
}
