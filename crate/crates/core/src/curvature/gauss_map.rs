//! Norm of the differential of the Gauss map, by finite differences of the
//! tangent projector. Uses only first derivatives, so it is an independent
//! check on the Hessian-based curvature.

use nalgebra::{DMatrix, DVector};

use super::search::fibonacci_sphere;
use crate::error::{Error, Result};
use crate::immersions::{jet2, ImmersionSpec};
use crate::rng;

fn projector(jac: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let sv = jac.singular_values();
    if !(sv.min() > 1e-9 * sv.max()) {
        return Err(Error::RankDeficient { ratio: sv.min() / sv.max() });
    }
    let qr = jac.clone().qr();
    let q = qr.q();
    let r_inv = qr.r().try_inverse().ok_or(Error::RankDeficient { ratio: 0.0 })?;
    Ok((&q * q.transpose(), r_inv))
}

/// `sup ‖D_xG(τ)(v)‖` over unit `τ ∈ T_x`, unit `v ∈ T_x`, where `G` sends a
/// point to its tangent plane and `D_xG(τ)` maps the tangent plane into the
/// normal space. Central differences with step `h` in parameter space.
pub fn gauss_map_diff_norm(spec: &ImmersionSpec, u: &[f64], h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("finite-difference step must be positive, got {h}")));
    }
    let n = spec.intrinsic_dim();
    let base = jet2(spec, u)?;
    let (p, t) = projector(&base.jac)?;
    let big_n = base.ambient_dim();
    let q = &base.jac * &t;
    let normal = DMatrix::identity(big_n, big_n) - &p;

    // dP along each parameter direction
    let mut dp = Vec::with_capacity(n);
    for i in 0..n {
        let mut plus = u.to_vec();
        let mut minus = u.to_vec();
        plus[i] += h;
        minus[i] -= h;
        let (pp, _) = projector(&jet2(spec, &plus)?.jac)?;
        let (pm, _) = projector(&jet2(spec, &minus)?.jac)?;
        dp.push((pp - pm) / (2.0 * h));
    }
    // C_a = (I − P) · dP[frame vector a] · frame, an N × n matrix
    let c: Vec<DMatrix<f64>> = (0..n)
        .map(|a| {
            let mut d = DMatrix::zeros(big_n, big_n);
            for (i, dpi) in dp.iter().enumerate() {
                d += dpi * t[(i, a)];
            }
            &normal * d * &q
        })
        .collect();
    if c.iter().any(|m| m.iter().any(|v| !v.is_finite())) {
        return Err(Error::NonFinite("Gauss map difference"));
    }

    let op = |x: &DVector<f64>| {
        let mut m = DMatrix::zeros(big_n, n);
        for (a, ca) in c.iter().enumerate() {
            m += ca * x[a];
        }
        m
    };
    let starts: Vec<DVector<f64>> = match n {
        1 => vec![DVector::from_element(1, 1.0)],
        2 => (0..720)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / 720.0;
                DVector::from_column_slice(&[t.cos(), t.sin()])
            })
            .collect(),
        3 => fibonacci_sphere(4000),
        _ => {
            let mut r = rng::rng(rng::DEFAULT_SEED);
            (0..20_000).map(|_| rng::unit_vector(&mut r, n)).collect()
        }
    };
    let mut scored: Vec<(f64, usize)> =
        starts.iter().enumerate().map(|(i, x)| (op(x).singular_values().max(), i)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = scored[0].0;
    for &(_, idx) in scored.iter().take(4) {
        // alternating maximization of ‖C(x, y)‖ over unit x, y
        let mut x = starts[idx].clone();
        for _ in 0..200 {
            let y = top_right_singular(&op(&x));
            let mut k = DMatrix::zeros(big_n, n);
            for (a, ca) in c.iter().enumerate() {
                k.set_column(a, &(ca * &y));
            }
            let next = top_right_singular(&k);
            let moved = (&next - &x).norm().min((&next + &x).norm());
            x = next;
            if moved < 1e-13 {
                break;
            }
        }
        best = best.max(op(&x).singular_values().max());
    }
    Ok(best)
}

fn top_right_singular(m: &DMatrix<f64>) -> DVector<f64> {
    let eig = (m.transpose() * m).symmetric_eigen();
    let k = eig.eigenvalues.imax();
    eig.eigenvectors.column(k).into_owned()
}
