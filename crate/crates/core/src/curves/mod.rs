//! Polygonal and sampled curves: external angles, total curvature, convex
//! arcs, and checkers for the arm lemma, the bow inequality and Crofton's
//! formula.

mod checks;
mod io;
mod smooth;

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};

use crate::error::{ensure_finite, Error, Result};

pub use checks::{
    arm_check, bow_check, crofton_check, random_arm_instance, random_bounded_curve, ArmReport, BowReport,
    CroftonReport,
};
pub use io::CurveFile;
pub use smooth::{discrete_total_curvature_convergence, spacings_for, CatalogCurve, ConvergenceRow};

const MIN_EDGE: f64 = 1e-12;

/// Ordered vertices in `R^N`, open or closed.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve {
    pub vertices: Vec<DVector<f64>>,
    pub closed: bool,
}

impl PolyCurve {
    pub fn new(vertices: Vec<DVector<f64>>, closed: bool) -> Result<Self> {
        let c = PolyCurve { vertices, closed };
        c.validate()?;
        Ok(c)
    }

    pub fn from_rows(rows: &[Vec<f64>], closed: bool) -> Result<Self> {
        Self::new(rows.iter().map(|r| DVector::from_column_slice(r)).collect(), closed)
    }

    pub fn validate(&self) -> Result<()> {
        let need = if self.closed { 3 } else { 2 };
        if self.vertices.len() < need {
            return Err(Error::DegenerateCurve(format!(
                "{} curve needs at least {need} vertices, got {}",
                if self.closed { "closed" } else { "open" },
                self.vertices.len()
            )));
        }
        let dim = self.vertices[0].len();
        if dim < 2 {
            return Err(Error::DegenerateCurve("curves live in R^N with N ≥ 2".into()));
        }
        for v in &self.vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
            ensure_finite(v.as_slice(), "curve vertex")?;
        }
        for (i, e) in self.edges().iter().enumerate() {
            if e.norm() <= MIN_EDGE {
                return Err(Error::DegenerateCurve(format!("edge {i} has zero length")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Edge vectors `p_{i+1} − p_i`, including the closing edge when closed.
    pub fn edges(&self) -> Vec<DVector<f64>> {
        let k = self.vertices.len();
        let count = if self.closed { k } else { k - 1 };
        (0..count).map(|i| &self.vertices[(i + 1) % k] - &self.vertices[i]).collect()
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        self.edges().iter().map(|e| e.norm()).collect()
    }

    pub fn length(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    /// Distance between the first and last vertex.
    pub fn end_to_end(&self) -> f64 {
        (&self.vertices[self.vertices.len() - 1] - &self.vertices[0]).norm()
    }

    /// Applies `x ↦ rot·x + shift` to every vertex.
    pub fn transformed(&self, rot: &DMatrix<f64>, shift: &DVector<f64>) -> Result<PolyCurve> {
        PolyCurve::new(self.vertices.iter().map(|v| rot * v + shift).collect(), self.closed)
    }
}

/// Angle between two nonzero vectors in `[0, π]`, stable near 0 and π.
pub(crate) fn angle_between(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let (ua, ub) = (a.normalize(), b.normalize());
    2.0 * (&ua - &ub).norm().atan2((&ua + &ub).norm())
}

/// External angles `c_i = π − ∠p_i ∈ [0, π]`: at every vertex of a closed
/// curve, at interior vertices of an open one.
pub fn external_angles(p: &PolyCurve) -> Result<Vec<f64>> {
    p.validate()?;
    let edges = p.edges();
    let m = edges.len();
    let angles = if p.closed {
        (0..m).map(|i| angle_between(&edges[(i + m - 1) % m], &edges[i])).collect()
    } else {
        (1..m).map(|i| angle_between(&edges[i - 1], &edges[i])).collect()
    };
    Ok(angles)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalCurvature {
    pub total: f64,
    /// Closed curve whose total is `2π` within the tolerance.
    pub convex_planar: bool,
}

pub fn total_curvature(p: &PolyCurve, tol: f64) -> Result<TotalCurvature> {
    let total: f64 = external_angles(p)?.iter().sum();
    Ok(TotalCurvature { total, convex_planar: p.closed && (total - TAU).abs() <= tol })
}

/// Planar open polygon from edge lengths and left turns `c_i` at the
/// interior vertices (`angles.len() == lengths.len() − 1`).
pub fn convex_arc(lengths: &[f64], angles: &[f64]) -> Result<PolyCurve> {
    if lengths.is_empty() || angles.len() + 1 != lengths.len() {
        return Err(Error::InvalidParameter(format!(
            "need k edge lengths and k−1 angles, got {} and {}",
            lengths.len(),
            angles.len()
        )));
    }
    if lengths.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidParameter("edge lengths must be positive".into()));
    }
    if angles.iter().any(|c| !(*c > 0.0 && *c < PI)) {
        return Err(Error::InvalidParameter("external angles must lie in (0, π)".into()));
    }
    let mut pts = vec![DVector::zeros(2)];
    let mut heading = 0.0;
    for (i, l) in lengths.iter().enumerate() {
        if i > 0 {
            heading += angles[i - 1];
        }
        let last = pts.last().expect("nonempty");
        pts.push(last + DVector::from_column_slice(&[l * heading.cos(), l * heading.sin()]));
    }
    PolyCurve::new(pts, false)
}

/// Uniform-chord samples in arc length along a sampled `C²` curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub samples: Vec<DVector<f64>>,
    pub spacing: f64,
    pub closed: bool,
}

impl SampledCurve {
    pub fn new(samples: Vec<DVector<f64>>, closed: bool) -> Result<Self> {
        let poly = PolyCurve::new(samples, closed)?;
        let lengths = poly.edge_lengths();
        let spacing = lengths.iter().sum::<f64>() / lengths.len() as f64;
        if lengths.iter().any(|l| (l - spacing).abs() > 1e-6 * spacing) {
            return Err(Error::DegenerateCurve("samples are not equally spaced".into()));
        }
        Ok(SampledCurve { samples: poly.vertices, spacing, closed })
    }

    pub fn length(&self) -> f64 {
        let edges = if self.closed { self.samples.len() } else { self.samples.len() - 1 };
        self.spacing * edges as f64
    }

    pub fn as_poly(&self) -> PolyCurve {
        PolyCurve { vertices: self.samples.clone(), closed: self.closed }
    }

    /// External angle divided by the spacing at each angle-carrying sample.
    pub fn discrete_curvatures(&self) -> Vec<f64> {
        external_angles(&self.as_poly())
            .expect("validated on construction")
            .iter()
            .map(|c| c / self.spacing)
            .collect()
    }
}

/// Circular arc of radius `R` and length `l ≤ 2πR` in the plane, sampled at
/// `n_samples` equally spaced points.
pub fn circular_arc(radius: f64, length: f64, n_samples: usize) -> Result<SampledCurve> {
    if !(radius > 0.0) || !(length > 0.0) || length > TAU * radius * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "need R > 0 and 0 < l ≤ 2πR, got R={radius}, l={length}"
        )));
    }
    if n_samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let pts = (0..n_samples)
        .map(|k| {
            let t = length / radius * k as f64 / (n_samples - 1) as f64;
            DVector::from_column_slice(&[radius * t.sin(), radius * (1.0 - t.cos())])
        })
        .collect();
    SampledCurve::new(pts, false)
}

/// Largest singular value ratio off the best-fit plane, relative to the
/// curve's extent; zero for planar curves.
pub fn planarity_defect(points: &[DVector<f64>]) -> f64 {
    let (_, defect) = best_plane(points);
    defect
}

/// Coordinates in the best-fit plane and the out-of-plane defect.
fn best_plane(points: &[DVector<f64>]) -> (Vec<[f64; 2]>, f64) {
    let k = points.len();
    let dim = points[0].len();
    let mean = points.iter().fold(DVector::zeros(dim), |a, p| a + p) / k as f64;
    let centered = DMatrix::from_fn(k, dim, |i, j| points[i][j] - mean[j]);
    let svd = centered.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let s = &svd.singular_values;
    let top = s[order[0]].max(1e-300);
    let defect = order.iter().skip(2).map(|&i| s[i]).fold(0.0, f64::max) / top;
    let axis = |i: usize| -> DVector<f64> {
        order.get(i).map_or(DVector::zeros(dim), |&r| vt.row(r).transpose().into_owned())
    };
    let (u, v) = (axis(0), axis(1));
    let coords = points
        .iter()
        .map(|p| {
            let d = p - &mean;
            [d.dot(&u), d.dot(&v)]
        })
        .collect();
    (coords, defect)
}

/// An open arc is convex when it is planar and closing it with the chord
/// gives a convex polygon: all turns share one sign and they total `2π`.
pub fn is_convex_arc(p: &PolyCurve) -> bool {
    if p.validate().is_err() || p.closed {
        return false;
    }
    if p.vertices.len() == 2 {
        return true;
    }
    let (pts, defect) = best_plane(&p.vertices);
    if defect > 1e-9 {
        return false;
    }
    let k = pts.len();
    let scale = p.length().max(1e-300);
    let mut sign = 0.0;
    let mut turning = 0.0;
    for i in 0..k {
        let a = pts[(i + k - 1) % k];
        let b = pts[i];
        let c = pts[(i + 1) % k];
        let e1 = [b[0] - a[0], b[1] - a[1]];
        let e2 = [c[0] - b[0], c[1] - b[1]];
        let cross = e1[0] * e2[1] - e1[1] * e2[0];
        let dot = e1[0] * e2[0] + e1[1] * e2[1];
        if cross.abs() > 1e-12 * scale * scale {
            if sign == 0.0 {
                sign = cross.signum();
            } else if cross.signum() != sign {
                return false;
            }
        }
        turning += cross.atan2(dot);
    }
    (turning.abs() - TAU).abs() < 1e-6
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PolyCurve {
        PolyCurve::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]], true).unwrap()
    }

    #[test]
    fn square_angles_and_total() {
        let c = external_angles(&square()).unwrap();
        assert!(c.iter().all(|x| (x - PI / 2.0).abs() < 1e-15));
        let t = total_curvature(&square(), 1e-9).unwrap();
        assert!((t.total - TAU).abs() < 1e-12 && t.convex_planar);
    }

    #[test]
    fn collinear_and_regular_polygons() {
        let line = PolyCurve::from_rows(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![3.0, 3.0]], false).unwrap();
        assert!(external_angles(&line).unwrap()[0].abs() < 1e-15);
        for k in [3, 5, 12] {
            let pts: Vec<Vec<f64>> =
                (0..k).map(|i| vec![(TAU * i as f64 / k as f64).cos(), (TAU * i as f64 / k as f64).sin()]).collect();
            let p = PolyCurve::from_rows(&pts, true).unwrap();
            for c in external_angles(&p).unwrap() {
                assert!((c - TAU / k as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reflex_quadrilateral_exceeds_two_pi() {
        // dart: the reflex vertex has angle 3π/2 measured as π/2
        let dart =
            PolyCurve::from_rows(&[vec![0.0, 0.0], vec![2.0, 1.0], vec![0.0, 2.0], vec![1.0, 1.0]], true).unwrap();
        let t = total_curvature(&dart, 1e-9).unwrap();
        assert!(t.total > TAU + 0.5);
        assert!(!t.convex_planar);
    }

    #[test]
    fn degenerate_curves_are_rejected() {
        assert!(PolyCurve::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0]], false).is_err());
        assert!(PolyCurve::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]], true).is_err());
        assert!(PolyCurve::from_rows(&[vec![0.0], vec![1.0]], false).is_err());
    }

    #[test]
    fn convex_arc_examples() {
        let seg = convex_arc(&[2.0], &[]).unwrap();
        assert_eq!(seg.vertices.len(), 2);
        assert!(is_convex_arc(&seg));
        let third = PI / 3.0;
        let arc = convex_arc(&[1.0, 1.0, 1.0], &[third, third]).unwrap();
        assert!(is_convex_arc(&arc));
        // the last vertex of half a regular hexagon sits at (2, 0) + (cos 120°, sin 120°)·…
        let end = &arc.vertices[3];
        assert!((end[0] - 1.0).abs() < 1e-12 && (end[1] - 3f64.sqrt()).abs() < 1e-12);
        assert!(convex_arc(&[1.0, 1.0], &[PI]).is_err());
        assert!(convex_arc(&[1.0, -1.0], &[0.5]).is_err());
    }

    #[test]
    fn zigzag_is_not_convex() {
        let z = PolyCurve::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.5, 1.0], vec![2.5, 0.8]], false).unwrap();
        assert!(!is_convex_arc(&z));
        let bent =
            PolyCurve::from_rows(&[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 1.0]], false)
                .unwrap();
        assert!(!is_convex_arc(&bent));
    }

    #[test]
    fn circular_arc_properties() {
        let arc = circular_arc(1.0, PI, 2001).unwrap();
        assert!((arc.as_poly().end_to_end() - 2.0).abs() < 1e-12);
        let k = arc.discrete_curvatures();
        assert!(k.iter().all(|x| (x - 1.0).abs() < 1e-6));
        assert!(circular_arc(1.0, 7.0, 10).is_err());
    }

    #[test]
    fn sampled_curve_requires_even_spacing() {
        let pts = vec![DVector::from_column_slice(&[0.0, 0.0]), DVector::from_column_slice(&[1.0, 0.0]), DVector::from_column_slice(&[3.0, 0.0])];
        assert!(SampledCurve::new(pts, false).is_err());
    }
}
