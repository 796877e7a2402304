//! Smooth catalog curves with known curvature, for checking that polygonal
//! total curvature converges to `∫ curv`.

use std::f64::consts::TAU;

use nalgebra::DVector;

use super::{total_curvature, PolyCurve};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogCurve {
    Circle { radius: f64 },
    /// `(r cos θ, r sin θ, c θ)` for `θ ∈ [0, turns·2π]`.
    Helix { radius: f64, pitch: f64, turns: f64 },
    Segment { length: f64 },
    /// Two unit circles tangent at the origin, traversed as a figure eight.
    FigureEight,
}

impl CatalogCurve {
    pub fn closed(&self) -> bool {
        matches!(self, CatalogCurve::Circle { .. } | CatalogCurve::FigureEight)
    }

    pub fn length(&self) -> f64 {
        match *self {
            CatalogCurve::Circle { radius } => TAU * radius,
            CatalogCurve::Helix { radius, pitch, turns } => TAU * turns * radius.hypot(pitch),
            CatalogCurve::Segment { length } => length,
            CatalogCurve::FigureEight => 2.0 * TAU,
        }
    }

    /// `‖γ''(s)‖` in arc length; constant for every catalog curve.
    pub fn curvature(&self) -> f64 {
        match *self {
            CatalogCurve::Circle { radius } => 1.0 / radius,
            CatalogCurve::Helix { radius, pitch, .. } => radius / (radius * radius + pitch * pitch),
            CatalogCurve::Segment { .. } => 0.0,
            CatalogCurve::FigureEight => 1.0,
        }
    }

    /// Point at arc length `s`.
    pub fn point(&self, s: f64) -> DVector<f64> {
        match *self {
            CatalogCurve::Circle { radius } => {
                let t = s / radius;
                DVector::from_column_slice(&[radius * t.cos(), radius * t.sin(), 0.0])
            }
            CatalogCurve::Helix { radius, pitch, .. } => {
                let t = s / radius.hypot(pitch);
                DVector::from_column_slice(&[radius * t.cos(), radius * t.sin(), pitch * t])
            }
            CatalogCurve::Segment { .. } => DVector::from_column_slice(&[s, 0.0, 0.0]),
            CatalogCurve::FigureEight => {
                if s < TAU {
                    DVector::from_column_slice(&[s.cos() - 1.0, s.sin(), 0.0])
                } else {
                    let t = s - TAU;
                    DVector::from_column_slice(&[1.0 - t.cos(), t.sin(), 0.0])
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            CatalogCurve::Circle { radius } => radius > 0.0,
            CatalogCurve::Helix { radius, pitch, turns } => radius > 0.0 && pitch.is_finite() && turns > 0.0,
            CatalogCurve::Segment { length } => length > 0.0,
            CatalogCurve::FigureEight => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid curve parameters {self:?}")))
        }
    }

    /// Vertices at arc-length spacing close to `eps`. Closed curves use an
    /// exact subdivision; open ones stop at the last full step.
    pub fn polygon(&self, eps: f64) -> Result<PolyCurve> {
        self.validate()?;
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!("spacing must be positive, got {eps}")));
        }
        let len = self.length();
        if self.closed() {
            let k = (len / eps).round().max(3.0) as usize;
            let h = len / k as f64;
            PolyCurve::new((0..k).map(|i| self.point(i as f64 * h)).collect(), true)
        } else {
            let k = (len / eps).floor().max(1.0) as usize;
            PolyCurve::new((0..=k).map(|i| self.point(i as f64 * eps)).collect(), false)
        }
    }

    /// `∫ curv` over the part of the curve the polygon's angles account for:
    /// the whole curve when closed, `[ε/2, L_P − ε/2]` when open.
    fn reference_integral(&self, poly: &PolyCurve, eps: f64) -> f64 {
        if self.closed() {
            self.curvature() * self.length()
        } else {
            let covered = (poly.vertices.len() - 1) as f64 * eps;
            self.curvature() * (covered - eps).max(0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub eps: f64,
    pub discrete: f64,
    pub integral: f64,
    pub residual: f64,
}

/// `|Σ c_i(P_ε) − ∫ curv|` for each spacing.
pub fn discrete_total_curvature_convergence(curve: &CatalogCurve, eps_list: &[f64]) -> Result<Vec<ConvergenceRow>> {
    eps_list
        .iter()
        .map(|&eps| {
            let poly = curve.polygon(eps)?;
            let discrete = total_curvature(&poly, 0.0)?.total;
            let integral = curve.reference_integral(&poly, eps);
            Ok(ConvergenceRow { eps, discrete, integral, residual: (discrete - integral).abs() })
        })
        .collect()
}

/// Spacings `L/k` for the given subdivision counts.
pub fn spacings_for(curve: &CatalogCurve, counts: &[usize]) -> Vec<f64> {
    counts.iter().map(|&k| curve.length() / k as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helix_converges_quadratically() {
        let helix = CatalogCurve::Helix { radius: 1.0, pitch: 0.5, turns: 1.0 };
        let eps: Vec<f64> = [8, 16, 32, 64].iter().map(|k| TAU / *k as f64).collect();
        let rows = discrete_total_curvature_convergence(&helix, &eps).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].residual < w[0].residual);
        }
        let last = rows.last().unwrap();
        assert!(last.residual < 1e-2);
        assert!(last.residual < 0.5 * last.eps * last.eps);
    }

    #[test]
    fn segment_has_zero_total_curvature() {
        let seg = CatalogCurve::Segment { length: 3.0 };
        for row in discrete_total_curvature_convergence(&seg, &[0.5, 0.1, 0.01]).unwrap() {
            assert_eq!(row.discrete, 0.0);
            assert_eq!(row.residual, 0.0);
        }
    }

    #[test]
    fn circle_polygon_is_exactly_two_pi() {
        let rows = discrete_total_curvature_convergence(&CatalogCurve::Circle { radius: 2.0 }, &[1.0, 0.1]).unwrap();
        assert!(rows.iter().all(|r| r.residual < 1e-12));
    }

    #[test]
    fn figure_eight_tends_to_four_pi() {
        // the two inflection cells lose their curvature mass, so the error is
        // first order: about 2ε
        let f = CatalogCurve::FigureEight;
        let rows = discrete_total_curvature_convergence(&f, &spacings_for(&f, &[16, 64, 256, 1024])).unwrap();
        assert!((rows[0].integral - 2.0 * TAU).abs() < 1e-12);
        for r in &rows {
            assert!(r.residual <= 2.05 * r.eps, "{r:?}");
        }
        assert!(rows.windows(2).all(|w| w[1].residual < w[0].residual));
        assert!(rows.last().unwrap().residual < 3e-2);
    }
}
