//! Second fundamental form and the curvature quantities built on it.
//!
//! All quantities are computed from a [`Jet2`]. The tangent space is given a
//! `g`-orthonormal frame obtained from a thin QR factorization of the
//! Jacobian; the second fundamental form is stored both in parameter
//! coordinates (`ii`) and in that frame, where the direction search and the
//! trace formulas operate.

mod gauss_map;
mod search;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::immersions::Jet2;
use crate::rng;

pub use gauss_map::gauss_map_diff_norm;
pub use search::{
    normal_curvature_at, normal_curvature_global, CurvatureOptions, GlobalCurvature, PointCurvature,
    Sampler,
};

/// Induced metric, second fundamental form and an orthonormal tangent frame.
#[derive(Debug, Clone)]
pub struct FundamentalData {
    pub point: DVector<f64>,
    /// Induced metric `JᵀJ`.
    pub g: DMatrix<f64>,
    /// `ii[i * n + j] = II(∂_i, ∂_j)`, an ambient vector normal to the tangent space.
    pub ii: Vec<DVector<f64>>,
    /// `N × n`, orthonormal columns spanning the tangent space.
    pub frame: DMatrix<f64>,
    /// Parameter coordinates of the frame: `frame = jac · frame_coords`.
    pub frame_coords: DMatrix<f64>,
    /// `II(e_a, e_b)` in the orthonormal frame.
    ortho: Vec<DVector<f64>>,
}

/// Builds `g`, `II` and a tangent frame from a 2-jet.
pub fn fundamental_data(jet: &Jet2) -> Result<FundamentalData> {
    let n = jet.intrinsic_dim();
    let big_n = jet.ambient_dim();
    if n == 0 || n > big_n {
        return Err(Error::InvalidParameter(format!("cannot immerse dimension {n} into R^{big_n}")));
    }
    let sv = jet.jac.singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > 1e-9 * smax) {
        return Err(Error::RankDeficient { ratio: if smax > 0.0 { smin / smax } else { 0.0 } });
    }
    let qr = jet.jac.clone().qr();
    let frame = qr.q();
    let r = qr.r();
    let frame_coords = r.try_inverse().ok_or(Error::RankDeficient { ratio: 0.0 })?;
    let g = jet.jac.transpose() * &jet.jac;
    let normal_part = |v: &DVector<f64>| v - &frame * (frame.transpose() * v);
    let ii: Vec<DVector<f64>> = jet.hess.iter().map(normal_part).collect();
    let ortho = to_frame(&ii, &frame_coords, n);
    Ok(FundamentalData {
        point: jet.point.clone(),
        g,
        ii,
        frame,
        frame_coords,
        ortho,
    })
}

fn to_frame(ii: &[DVector<f64>], t: &DMatrix<f64>, n: usize) -> Vec<DVector<f64>> {
    let dim = ii[0].len();
    let mut out = vec![DVector::zeros(dim); n * n];
    for a in 0..n {
        for b in 0..n {
            let mut acc = DVector::zeros(dim);
            for i in 0..n {
                for j in 0..n {
                    let w = t[(i, a)] * t[(j, b)];
                    if w != 0.0 {
                        acc.axpy(w, &ii[i * n + j], 1.0);
                    }
                }
            }
            out[a * n + b] = acc;
        }
    }
    out
}

impl FundamentalData {
    pub fn intrinsic_dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    /// `II(e_a, e_b)` for the orthonormal frame vectors `e_a`, `e_b`.
    pub fn ii_frame(&self, a: usize, b: usize) -> &DVector<f64> {
        &self.ortho[a * self.intrinsic_dim() + b]
    }

    /// `II(x, x)` for `x` given in orthonormal-frame coordinates.
    pub fn ii_frame_quadratic(&self, x: &[f64]) -> DVector<f64> {
        let n = self.intrinsic_dim();
        let mut acc = DVector::zeros(self.ambient_dim());
        for a in 0..n {
            for b in 0..n {
                let w = x[a] * x[b];
                if w != 0.0 {
                    acc.axpy(w, &self.ortho[a * n + b], 1.0);
                }
            }
        }
        acc
    }

    /// Squared Hilbert–Schmidt norm `Σ_ab ‖II(e_a, e_b)‖²`.
    pub fn ii_norm_sq(&self) -> f64 {
        self.ortho.iter().map(|v| v.norm_squared()).sum()
    }

    /// Same data viewed inside the round sphere through the origin that
    /// contains the point: the component of `II` along the position is dropped.
    pub fn in_sphere(&self) -> FundamentalData {
        let radial = self.point.normalize();
        let strip = |v: &DVector<f64>| v - &radial * radial.dot(v);
        FundamentalData {
            point: self.point.clone(),
            g: self.g.clone(),
            ii: self.ii.iter().map(strip).collect(),
            frame: self.frame.clone(),
            frame_coords: self.frame_coords.clone(),
            ortho: self.ortho.iter().map(strip).collect(),
        }
    }

    /// Diagnostic dump: metric, flattened `II` and an optional maximizing direction.
    pub fn diagnostic_json(&self, direction: Option<&DVector<f64>>) -> serde_json::Value {
        let n = self.intrinsic_dim();
        json!({
            "n": n,
            "ambient": self.ambient_dim(),
            "point": self.point.as_slice(),
            "g": self.g.row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
            "II": self.ii.iter().map(|v| v.as_slice().to_vec()).collect::<Vec<_>>(),
            "direction": direction.map(|d| d.as_slice().to_vec()),
        })
    }
}

/// `‖II(τ̂, τ̂)‖` with `τ̂ = τ / |τ|_g`, `τ` in parameter coordinates.
pub fn curv_dir(fd: &FundamentalData, tau: &[f64]) -> Result<f64> {
    let n = fd.intrinsic_dim();
    if tau.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: tau.len() });
    }
    let t = DVector::from_column_slice(tau);
    let len_sq = t.dot(&(&fd.g * &t));
    if !(len_sq > 0.0) {
        return Err(Error::ZeroTangent);
    }
    let mut acc = DVector::zeros(fd.ambient_dim());
    for i in 0..n {
        for j in 0..n {
            acc.axpy(tau[i] * tau[j], &fd.ii[i * n + j], 1.0);
        }
    }
    Ok(acc.norm() / len_sq)
}

/// Mean curvature vector as the unnormalized trace `Σ_a II(e_a, e_a)`.
pub fn mean_curvature(fd: &FundamentalData) -> DVector<f64> {
    let n = fd.intrinsic_dim();
    let mut h = DVector::zeros(fd.ambient_dim());
    for a in 0..n {
        h += fd.ii_frame(a, a);
    }
    h
}

/// Average of `‖II(τ,τ)‖²` over unit tangent vectors, in closed form.
pub fn petrunin_pi(fd: &FundamentalData) -> f64 {
    let n = fd.intrinsic_dim() as f64;
    2.0 / (n * (n + 2.0)) * (fd.ii_norm_sq() + 0.5 * mean_curvature(fd).norm_squared())
}

const PI_STREAM: u64 = 0x5049;
const MC_CHUNK: usize = 1 << 14;

/// Monte-Carlo average of `‖II(τ,τ)‖²` over uniform unit tangent vectors.
///
/// Chunks are seeded independently and summed in chunk order, so the value
/// depends only on `(n_samples, seed)`.
pub fn petrunin_pi_mc(fd: &FundamentalData, n_samples: usize, seed: u64) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be ≥ 1".into()));
    }
    let n = fd.intrinsic_dim();
    let chunks = n_samples.div_ceil(MC_CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng::chunk_rng(seed, PI_STREAM, c as u64);
            let len = MC_CHUNK.min(n_samples - c * MC_CHUNK);
            (0..len)
                .map(|_| {
                    let x = rng::unit_vector(&mut r, n);
                    fd.ii_frame_quadratic(x.as_slice()).norm_squared()
                })
                .sum()
        })
        .collect();
    Ok(partial.iter().sum::<f64>() / n_samples as f64)
}

/// Gauss formula `Sc = Sc_{|n} + ‖H‖² − ‖II‖²`, where `sc_ambient_n` is the
/// sum of ambient sectional curvatures over tangent 2-planes (`n(n−1)κ`).
pub fn scalar_curvature_gauss(fd: &FundamentalData, sc_ambient_n: f64) -> f64 {
    sc_ambient_n + mean_curvature(fd).norm_squared() - fd.ii_norm_sq()
}

/// Same scalar curvature through `Π`: `Sc_{|n} + (3/2)‖H‖² − n(n+2)/2 · Π`.
pub fn scalar_curvature_petrunin(fd: &FundamentalData, sc_ambient_n: f64) -> f64 {
    let n = fd.intrinsic_dim() as f64;
    sc_ambient_n + 1.5 * mean_curvature(fd).norm_squared() - n * (n + 2.0) / 2.0 * petrunin_pi(fd)
}

/// Euclidean focal radius `1 / curv`.
pub fn focal_radius(curv: f64) -> Result<f64> {
    if curv > 0.0 && curv.is_finite() {
        Ok(1.0 / curv)
    } else {
        Err(Error::InvalidParameter(format!("curvature must be positive, got {curv}")))
    }
}

/// Normal curvature inside `S^{N-1}(R)` from the Euclidean one:
/// `sqrt(curv² − 1/R²)`.
pub fn spherical_curvature(curv_euclid: f64, sphere_radius: f64) -> Result<f64> {
    if !(sphere_radius > 0.0) {
        return Err(Error::InvalidParameter(format!("sphere radius must be positive, got {sphere_radius}")));
    }
    let floor = 1.0 / sphere_radius;
    let d = curv_euclid * curv_euclid - floor * floor;
    if curv_euclid < floor && d < -1e-9 * floor * floor {
        return Err(Error::InvalidParameter(format!(
            "curvature {curv_euclid} is below 1/R = {floor}; not a submanifold of that sphere"
        )));
    }
    Ok(d.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersions::{jet2, ImmersionSpec, TorusLinear};
    use std::f64::consts::SQRT_2;

    fn fd_at(spec: &ImmersionSpec, u: &[f64]) -> FundamentalData {
        fundamental_data(&jet2(spec, u).unwrap()).unwrap()
    }

    #[test]
    fn unit_sphere_has_unit_directional_curvature() {
        let fd = fd_at(&ImmersionSpec::sphere(2, 1.0), &[0.4, -0.3]);
        for tau in [[1.0, 0.0], [0.0, 1.0], [0.3, -2.0]] {
            assert!((curv_dir(&fd, &tau).unwrap() - 1.0).abs() < 1e-12);
        }
        let fd = fd_at(&ImmersionSpec::sphere(2, 0.5), &[1.0, 0.2]);
        assert!((curv_dir(&fd, &[0.7, 0.1]).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn second_fundamental_form_is_normal_and_symmetric() {
        let spec = ImmersionSpec::tube(1.0, 2, 1, 0.4);
        let jet = jet2(&spec, &[0.3, 0.2, 1.1]).unwrap();
        let fd = fundamental_data(&jet).unwrap();
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let v = &fd.ii[i * n + j];
                assert!((v - &fd.ii[j * n + i]).amax() == 0.0);
                for k in 0..n {
                    let c = jet.jac.column(k);
                    assert!(v.dot(&c).abs() <= 1e-9 * v.norm() * c.norm() + 1e-15);
                }
            }
        }
        // frame is orthonormal and spans the Jacobian's columns
        let gram = fd.frame.transpose() * &fd.frame;
        assert!((gram - DMatrix::identity(n, n)).amax() < 1e-12);
        assert!((&jet.jac * &fd.frame_coords - &fd.frame).amax() < 1e-12);
    }

    #[test]
    fn clifford_mixed_term_vanishes() {
        let fd = fd_at(&ImmersionSpec::clifford(2), &[0.0, 0.0]);
        assert!(fd.ii[1].amax() < 1e-15);
    }

    #[test]
    fn torus_second_fundamental_form_shrinks_with_scale() {
        // amplitude √(1/N) fixed, frequencies scale·row: II ∝ scale²
        let rows = DMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
        let mut prev = f64::INFINITY;
        for scale in [1.0, 0.1, 0.01] {
            let spec = ImmersionSpec::TorusLinear(TorusLinear::new(rows.clone()).with_scale(scale));
            let fd = fd_at(&spec, &[0.3]);
            let norm = fd.ii[0].norm();
            assert!(norm < prev);
            prev = norm;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn formula_star_on_clifford_diagonal() {
        let fd = fd_at(&ImmersionSpec::clifford(3), &[0.1, 0.2, 0.3]);
        assert!((curv_dir(&fd, &[1.0, 1.0, 1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((curv_dir(&fd, &[1.0, 0.0, 0.0]).unwrap() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_tangent_is_rejected() {
        let fd = fd_at(&ImmersionSpec::clifford(2), &[0.0, 0.0]);
        assert!(matches!(curv_dir(&fd, &[0.0, 0.0]), Err(Error::ZeroTangent)));
        assert!(curv_dir(&fd, &[1.0]).is_err());
    }

    #[test]
    fn rank_deficient_jacobian_is_rejected() {
        let jet = Jet2 {
            point: DVector::zeros(3),
            jac: DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 0.0, 0.0]),
            hess: vec![DVector::zeros(3); 4],
        };
        assert!(matches!(fundamental_data(&jet), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn mean_curvature_of_unit_two_sphere() {
        let fd = fd_at(&ImmersionSpec::sphere(2, 1.0), &[0.2, 0.1]);
        let h = mean_curvature(&fd);
        assert!((h.norm() - 2.0).abs() < 1e-12);
        // points inward
        assert!((h.normalize() + fd.point.normalize()).amax() < 1e-12);
    }

    #[test]
    fn clifford_mean_curvature_is_radial() {
        for n in 2..5 {
            let fd = fd_at(&ImmersionSpec::clifford(n), &vec![0.3; n]);
            let h = mean_curvature(&fd);
            let p = fd.point.normalize();
            assert!((h.normalize() + p).amax() < 1e-12);
            assert!((h.norm() - n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn petrunin_values_for_spheres_and_cylinders() {
        let fd = fd_at(&ImmersionSpec::sphere(2, 1.0), &[0.2, 0.1]);
        assert!((petrunin_pi(&fd) - 1.0).abs() < 1e-12);
        // S¹(1) × R realized as a product with a huge second factor
        let cyl = ImmersionSpec::SphereProduct { factors: vec![(1, 1.0), (1, 1e6)] };
        let fd = fd_at(&cyl, &[0.0, 0.0]);
        assert!((petrunin_pi(&fd) - 3.0 / 8.0).abs() < 1e-9);
    }

    #[test]
    fn petrunin_monte_carlo_is_deterministic_and_close() {
        let fd = fd_at(&ImmersionSpec::tube(1.0, 1, 1, 0.3), &[0.2, 2.0]);
        let a = petrunin_pi_mc(&fd, 100_000, 9).unwrap();
        let b = petrunin_pi_mc(&fd, 100_000, 9).unwrap();
        assert_eq!(a, b);
        assert!((a - petrunin_pi(&fd)).abs() < 2e-2 * petrunin_pi(&fd));
        assert!(petrunin_pi_mc(&fd, 0, 1).is_err());
    }

    #[test]
    fn scalar_curvature_of_round_three_sphere() {
        let fd = fd_at(&ImmersionSpec::sphere(3, 2.0), &[0.3, 0.2, -0.4]);
        assert!((scalar_curvature_gauss(&fd, 0.0) - 1.5).abs() < 1e-12);
        assert!((scalar_curvature_petrunin(&fd, 0.0) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn clifford_torus_is_flat() {
        for n in 2..5 {
            let fd = fd_at(&ImmersionSpec::clifford(n), &vec![0.7; n]);
            assert!(scalar_curvature_gauss(&fd, 0.0).abs() < 1e-9);
        }
    }

    #[test]
    fn focal_and_spherical_examples() {
        assert_eq!(focal_radius(2.0).unwrap(), 0.5);
        assert!((focal_radius(SQRT_2).unwrap() - 1.0 / SQRT_2).abs() < 1e-15);
        assert!(focal_radius(0.0).is_err());
        assert!((spherical_curvature(SQRT_2, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(spherical_curvature(1.0, 1.0).unwrap(), 0.0);
        assert!(spherical_curvature(0.5, 1.0).is_err());
        let m = 3.0_f64;
        let v = spherical_curvature((2.0 * m / (m + 1.0)).sqrt(), 1.0).unwrap();
        assert!((v - ((m - 1.0) / (m + 1.0)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sphere_projection_reproduces_intrinsic_scalar_curvature() {
        // Sc from R^N (Sc_n = 0) equals Sc from S^{N-1}(1) (Sc_n = n(n-1))
        let specs = [ImmersionSpec::clifford(3), ImmersionSpec::veronese(2), ImmersionSpec::veronese(3)];
        for spec in &specs {
            let n = spec.intrinsic_dim() as f64;
            let fd = fd_at(spec, &vec![0.2; spec.intrinsic_dim()]);
            let sph = fd.in_sphere();
            let a = scalar_curvature_gauss(&fd, 0.0);
            let b = scalar_curvature_gauss(&sph, n * (n - 1.0));
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn diagnostic_dump_has_expected_shape() {
        let fd = fd_at(&ImmersionSpec::clifford(2), &[0.0, 0.0]);
        let v = fd.diagnostic_json(None);
        assert_eq!(v["n"], 2);
        assert_eq!(v["II"].as_array().unwrap().len(), 4);
    }
}
