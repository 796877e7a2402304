//! Numerical search for uniformly weighted designs of given cardinality.

use nalgebra::DVector;
use rayon::prelude::*;

use super::{is_degree4_design, isotropic_moment_tensor_f64, multi_indices, Design};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub restarts: usize,
    /// Gradient steps per restart.
    pub iters: usize,
    /// Stop a restart once the objective falls below this value.
    pub objective_tol: f64,
    pub seed: u64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { restarts: 20, iters: 20_000, objective_tol: 1e-30, seed: rng::DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedDesign {
    pub design: Design,
    /// `‖M4(D) − Iso(n)‖²` in the full symmetric-tensor Frobenius norm.
    pub objective: f64,
    /// `max_α |m_α − μ_α|`.
    pub residual: f64,
    /// Whether `residual` is at most `1e-10`.
    pub converged: bool,
    pub restart: usize,
}

/// Uniform `N`-point design on `S^{n-1}` minimizing the quartic moment
/// defect by projected gradient descent from random starts.
///
/// An unconverged result is returned as such, not as an error.
pub fn optimize_design(n: usize, count: usize, opts: &OptimizeOptions) -> Result<OptimizedDesign> {
    if n == 0 || count < n + 1 {
        return Err(Error::InvalidParameter(format!("need n ≥ 1 and N ≥ n+1, got n={n}, N={count}")));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("need at least one restart".into()));
    }
    let problem = Objective::new(n, count)?;
    let runs: Vec<(f64, Vec<DVector<f64>>)> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut g = rng::chunk_rng(opts.seed, 0xDE5, r as u64);
            let start = (0..count).map(|_| rng::unit_vector(&mut g, n)).collect();
            problem.descend(start, opts.iters, opts.objective_tol)
        })
        .collect();
    let (restart, (objective, points)) = runs
        .into_iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(a.0.cmp(&b.0)))
        .expect("at least one restart");
    let design = Design::new(n, points)?;
    let residual = is_degree4_design(&design, 0.0)?.residual;
    Ok(OptimizedDesign { design, objective, residual, converged: residual <= 1e-10, restart })
}

struct Objective {
    count: usize,
    alphas: Vec<Vec<u8>>,
    multinomial: Vec<f64>,
    target: Vec<f64>,
}

impl Objective {
    fn new(n: usize, count: usize) -> Result<Self> {
        let alphas = multi_indices(n, 4);
        let fact = |k: u8| -> f64 { (1..=k as u32).product::<u32>() as f64 };
        let multinomial = alphas.iter().map(|a| 24.0 / a.iter().map(|&k| fact(k)).product::<f64>()).collect();
        let target = isotropic_moment_tensor_f64(n)?.values;
        Ok(Self { count, alphas, multinomial, target })
    }

    fn defects(&self, pts: &[DVector<f64>]) -> Vec<f64> {
        let w = 1.0 / self.count as f64;
        self.alphas
            .iter()
            .zip(&self.target)
            .map(|(a, mu)| {
                let m: f64 = pts
                    .iter()
                    .map(|p| p.iter().zip(a).map(|(x, &k)| x.powi(k as i32)).product::<f64>())
                    .sum();
                m * w - mu
            })
            .collect()
    }

    /// Objective computed from moment defects, free of the cancellation in
    /// the frame-potential form.
    fn value(&self, d: &[f64]) -> f64 {
        d.iter().zip(&self.multinomial).map(|(x, c)| c * x * x).sum()
    }

    /// Projected gradient for each point.
    fn gradient(&self, pts: &[DVector<f64>], d: &[f64]) -> Vec<DVector<f64>> {
        let w = 2.0 / self.count as f64;
        pts.iter()
            .map(|p| {
                let mut g = DVector::zeros(p.len());
                for ((a, c), di) in self.alphas.iter().zip(&self.multinomial).zip(d) {
                    let coef = w * c * di;
                    if coef == 0.0 {
                        continue;
                    }
                    for k in 0..p.len() {
                        if a[k] == 0 {
                            continue;
                        }
                        let mut term = a[k] as f64 * coef;
                        for (j, &e) in a.iter().enumerate() {
                            let e = if j == k { e - 1 } else { e };
                            term *= p[j].powi(e as i32);
                        }
                        g[k] += term;
                    }
                }
                let radial = p.dot(&g);
                g - p * radial
            })
            .collect()
    }

    fn descend(&self, mut pts: Vec<DVector<f64>>, iters: usize, tol: f64) -> (f64, Vec<DVector<f64>>) {
        let mut d = self.defects(&pts);
        let mut f = self.value(&d);
        let mut step = 0.1;
        for _ in 0..iters {
            if f <= tol {
                break;
            }
            let g = self.gradient(&pts, &d);
            let slope: f64 = g.iter().map(|v| v.norm_squared()).sum();
            if slope == 0.0 {
                break;
            }
            let mut accepted = false;
            while step > 1e-16 {
                let trial: Vec<DVector<f64>> =
                    pts.iter().zip(&g).map(|(p, gi)| (p - gi * step).normalize()).collect();
                let dt = self.defects(&trial);
                let ft = self.value(&dt);
                if ft <= f - 1e-4 * step * slope {
                    pts = trial;
                    d = dt;
                    f = ft;
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
        (f, pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn objective_matches_frame_potential() {
        let p = Objective::new(3, 6).unwrap();
        let mut g = rng::rng(5);
        let pts: Vec<DVector<f64>> = (0..6).map(|_| rng::unit_vector(&mut g, 3)).collect();
        let f = p.value(&p.defects(&pts));
        let mut fp = 0.0;
        for a in &pts {
            for b in &pts {
                fp += a.dot(b).powi(4);
            }
        }
        let fp = fp / 36.0 - 3.0 / 15.0;
        assert!((f - fp).abs() < 1e-14, "{f} vs {fp}");
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = Objective::new(2, 4).unwrap();
        let mut g = rng::rng(8);
        let pts: Vec<DVector<f64>> = (0..4).map(|_| rng::unit_vector(&mut g, 2)).collect();
        let grad = p.gradient(&pts, &p.defects(&pts));
        // tangent direction at point 0
        let t = DVector::from_column_slice(&[-pts[0][1], pts[0][0]]);
        let h = 1e-6;
        let mut plus = pts.clone();
        plus[0] = (&pts[0] + &t * h).normalize();
        let mut minus = pts.clone();
        minus[0] = (&pts[0] - &t * h).normalize();
        let fd = (p.value(&p.defects(&plus)) - p.value(&p.defects(&minus))) / (2.0 * h);
        assert!((fd - grad[0].dot(&t)).abs() < 1e-8);
    }

    #[test]
    fn recovers_pentagon() {
        let r = optimize_design(2, 5, &OptimizeOptions::default()).unwrap();
        assert!(r.converged);
        assert!(r.residual < 1e-12, "{}", r.residual);
    }

    #[test]
    fn four_points_in_three_dimensions_are_bounded_away() {
        // Σ_ij <x_i,x_j>⁴ ≥ N forces objective ≥ 1/N − 3/(n(n+2))
        let r = optimize_design(3, 4, &OptimizeOptions { restarts: 8, ..Default::default() }).unwrap();
        assert!(r.objective >= 0.05 - 1e-12);
        assert!(!r.converged);
    }

    #[test]
    fn deterministic() {
        let o = OptimizeOptions { restarts: 4, iters: 200, ..Default::default() };
        assert_eq!(optimize_design(2, 6, &o).unwrap(), optimize_design(2, 6, &o).unwrap());
    }

    #[test]
    fn rejects_too_few_points() {
        assert!(optimize_design(3, 3, &OptimizeOptions::default()).is_err());
    }
}
