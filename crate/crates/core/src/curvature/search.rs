//! Maximization of `‖II(τ,τ)‖` over the unit tangent sphere.
//!
//! The form is first compressed to `r` real quadratic forms `Q_k` on `R^n`
//! (orthonormal frame coordinates) with `‖II(x,x)‖² = Σ_k (xᵀ Q_k x)²`, then
//! searched on a direction lattice (n ≤ 3) or a random cloud (4 ≤ n ≤ 6) and
//! polished by projected gradient ascent.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{fundamental_data, FundamentalData};
use crate::error::{Error, Result};
use crate::immersions::{jet2, ImmersionSpec};
use crate::rng;

pub const MAX_SEARCH_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureOptions {
    /// Lattice size for n ≤ 3.
    pub grid_density: usize,
    /// Random direction count for 4 ≤ n ≤ 6.
    pub random_directions: usize,
    pub polish_iters: usize,
    /// Target norm of the Riemannian gradient of `‖II(x,x)‖` at the maximizer.
    pub tol: f64,
    pub seed: u64,
}

impl Default for CurvatureOptions {
    fn default() -> Self {
        Self {
            grid_density: 10_000,
            random_directions: 100_000,
            polish_iters: 500,
            tol: 1e-7,
            seed: rng::DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCurvature {
    /// `‖II(τ,τ)‖` at the returned direction; never above the true maximum.
    pub value: f64,
    /// Maximizing direction in parameter coordinates, `g`-unit.
    pub direction: DVector<f64>,
    /// Norm of the projected gradient at the returned direction.
    pub residual: f64,
    pub converged: bool,
}

/// Normal curvature at a point: the maximum of `‖II(τ,τ)‖` over `g`-unit `τ`.
///
/// A polish that stalls above `opts.tol` is not an error; the best value is
/// returned with `converged == false`.
pub fn normal_curvature_at(fd: &FundamentalData, opts: &CurvatureOptions) -> Result<PointCurvature> {
    let n = fd.intrinsic_dim();
    if n > MAX_SEARCH_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let forms = QuadForms::new(fd);
    let finish = |x: DVector<f64>, value: f64, residual: f64, tol: f64| PointCurvature {
        value,
        direction: &fd.frame_coords * &x,
        residual,
        converged: residual <= tol,
    };
    if forms.mats.is_empty() {
        return Ok(finish(DVector::from_fn(n, |i, _| if i == 0 { 1.0 } else { 0.0 }), 0.0, 0.0, opts.tol));
    }

    let candidates = initial_directions(n, opts);
    let mut scored: Vec<(f64, usize)> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, x)| (forms.value(x), i))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut best: Option<(DVector<f64>, f64, f64)> = None;
    for &(_, idx) in scored.iter().take(POLISH_STARTS) {
        let (x, f, res) = forms.polish(candidates[idx].clone(), opts.polish_iters, opts.tol);
        // values equal up to rounding: keep the better-converged start
        let better = |b: &(DVector<f64>, f64, f64)| {
            if (f - b.1).abs() <= 1e-13 * b.1.abs() {
                res < b.2
            } else {
                f > b.1
            }
        };
        if best.as_ref().is_none_or(better) {
            best = Some((x, f, res));
        }
    }
    let (x, f, res) = best.expect("at least one candidate");
    Ok(finish(x, f.sqrt(), res, opts.tol))
}

const POLISH_STARTS: usize = 6;

fn initial_directions(n: usize, opts: &CurvatureOptions) -> Vec<DVector<f64>> {
    match n {
        1 => vec![DVector::from_element(1, 1.0)],
        2 => {
            let g = opts.grid_density.max(1);
            (0..g)
                .map(|k| {
                    let t = PI * k as f64 / g as f64;
                    DVector::from_column_slice(&[t.cos(), t.sin()])
                })
                .collect()
        }
        3 => fibonacci_sphere(opts.grid_density.max(2)),
        _ => {
            const CHUNK: usize = 4096;
            let total = opts.random_directions.max(1);
            let chunks = total.div_ceil(CHUNK);
            (0..chunks)
                .into_par_iter()
                .flat_map_iter(|c| {
                    let mut r = rng::chunk_rng(opts.seed, 0xD1, c as u64);
                    let len = CHUNK.min(total - c * CHUNK);
                    (0..len).map(move |_| rng::unit_vector(&mut r, n)).collect::<Vec<_>>()
                })
                .collect()
        }
    }
}

/// Quasi-uniform points on `S²`.
pub(crate) fn fibonacci_sphere(count: usize) -> Vec<DVector<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            DVector::from_column_slice(&[rho * phi.cos(), rho * phi.sin(), z])
        })
        .collect()
}

/// `‖II(x,x)‖² = Σ_k (xᵀ Q_k x)²`.
struct QuadForms {
    mats: Vec<DMatrix<f64>>,
    lipschitz: f64,
}

impl QuadForms {
    fn new(fd: &FundamentalData) -> Self {
        let n = fd.intrinsic_dim();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let ambient = fd.ambient_dim();
        let cols = DMatrix::from_fn(ambient, pairs.len(), |row, c| {
            let (a, b) = pairs[c];
            fd.ii_frame(a, b)[row]
        });
        let frob = cols.norm();
        if frob < 1e-14 {
            return Self { mats: Vec::new(), lipschitz: 0.0 };
        }
        // ‖Σ m_c col_c‖² = mᵀ G m with G = colsᵀ cols = V Λ Vᵀ, so the
        // coordinates Λ^{1/2} Vᵀ m reproduce the norm with rank(G) forms
        let gram = cols.transpose() * &cols;
        let eig = gram.symmetric_eigen();
        let lmax = eig.eigenvalues.max();
        let mut mats = Vec::new();
        for (k, &l) in eig.eigenvalues.iter().enumerate() {
            if l <= 1e-28 * lmax.max(1e-300) || l <= 0.0 {
                continue;
            }
            let s = l.sqrt();
            let mut q = DMatrix::zeros(n, n);
            for (c, &(a, b)) in pairs.iter().enumerate() {
                let v = s * eig.eigenvectors[(c, k)];
                q[(a, b)] = v;
                q[(b, a)] = v;
            }
            mats.push(q);
        }
        let lipschitz = 12.0 * mats.iter().map(|q| q.norm_squared()).sum::<f64>();
        Self { mats, lipschitz }
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        self.mats.iter().map(|q| x.dot(&(q * x)).powi(2)).sum()
    }

    /// Value and Euclidean gradient of `F(x) = Σ (xᵀQx)²`.
    fn value_grad(&self, x: &DVector<f64>) -> (f64, DVector<f64>) {
        let mut f = 0.0;
        let mut grad = DVector::zeros(x.len());
        for q in &self.mats {
            let qx = q * x;
            let c = x.dot(&qx);
            f += c * c;
            grad.axpy(4.0 * c, &qx, 1.0);
        }
        (f, grad)
    }

    /// Gradient ascent on the unit sphere with backtracking. Returns the
    /// point, `F`, and the projected gradient norm of `sqrt(F)`.
    fn polish(&self, mut x: DVector<f64>, iters: usize, tol: f64) -> (DVector<f64>, f64, f64) {
        x.normalize_mut();
        let residual = |f: f64, rg: &DVector<f64>| if f > 0.0 { rg.norm() / (2.0 * f.sqrt()) } else { rg.norm() };
        let (mut f, g) = self.value_grad(&x);
        let mut rg = &g - &x * x.dot(&g);
        let mut step = 1.0 / self.lipschitz;
        for _ in 0..iters {
            if residual(f, &rg) <= tol * 0.1 {
                break;
            }
            let slope = rg.norm_squared();
            let mut accepted = false;
            while step * self.lipschitz > 1e-12 {
                let trial = (&x + &rg * step).normalize();
                let (ft, gt) = self.value_grad(&trial);
                let rgt = &gt - &trial * trial.dot(&gt);
                // near the maximum the increase drops below rounding; then
                // accept level moves that shrink the gradient
                let level = ft >= f * (1.0 - 8.0 * f64::EPSILON) && rgt.norm_squared() < slope;
                if ft >= f + 1e-4 * step * slope || level {
                    x = trial;
                    f = ft;
                    rg = rgt;
                    accepted = true;
                    step *= 2.0;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let res = residual(f, &rg);
        (x, f, res)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampler {
    pub n_points: usize,
    pub seed: u64,
}

impl Default for Sampler {
    fn default() -> Self {
        Self { n_points: 50, seed: rng::DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalCurvature {
    pub sup: f64,
    pub min: f64,
    /// `sup − min` over the evaluated points.
    pub per_point_spread: f64,
    /// Parameter point where `sup` was found.
    pub argmax: Vec<f64>,
    pub max_residual: f64,
    pub converged: bool,
    pub points_evaluated: usize,
}

/// Normal curvature maximized over the catalog landmarks and `n_points`
/// random parameter points.
pub fn normal_curvature_global(
    spec: &ImmersionSpec,
    sampler: &Sampler,
    opts: &CurvatureOptions,
) -> Result<GlobalCurvature> {
    spec.validate()?;
    let mut points = spec.landmark_parameters();
    let mut r = rng::rng(sampler.seed);
    points.extend((0..sampler.n_points).map(|_| spec.sample_parameter(&mut r)));
    let results: Vec<PointCurvature> = points
        .par_iter()
        .map(|u| {
            let fd = fundamental_data(&jet2(spec, u)?)?;
            normal_curvature_at(&fd, opts)
        })
        .collect::<Result<_>>()?;
    let mut sup = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    let mut argmax = 0;
    for (i, p) in results.iter().enumerate() {
        if p.value > sup {
            sup = p.value;
            argmax = i;
        }
        min = min.min(p.value);
    }
    Ok(GlobalCurvature {
        sup,
        min,
        per_point_spread: sup - min,
        argmax: points[argmax].clone(),
        max_residual: results.iter().map(|p| p.residual).fold(0.0, f64::max),
        converged: results.iter().all(|p| p.converged),
        points_evaluated: results.len(),
    })
}
