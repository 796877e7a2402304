//! Latitude/longitude chart of the unit sphere `S^m ⊂ R^{m+1}` with analytic
//! first and second derivatives.
//!
//! Coordinates, with `u_0` the longitude and `u_1..u_{m-1}` latitudes:
//!
//! ```text
//! x_0 = cos u_0 · Π_{l≥1} cos u_l
//! x_1 = sin u_0 · Π_{l≥1} cos u_l
//! x_k = sin u_{k-1} · Π_{l≥k} cos u_l      (k ≥ 2)
//! ```
//!
//! `u = 0` maps to `e_0`. The chart degenerates where some latitude reaches
//! `±π/2`.

use nalgebra::DVector;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Factor {
    One,
    Cos,
    Sin,
}

impl Factor {
    /// Derivative of order `k` at an angle with cosine `c` and sine `s`.
    fn eval(self, k: usize, c: f64, s: f64) -> f64 {
        match (self, k) {
            (Factor::One, 0) => 1.0,
            (Factor::One, _) => 0.0,
            (Factor::Cos, 0) => c,
            (Factor::Cos, 1) => -s,
            (Factor::Cos, _) => -c,
            (Factor::Sin, 0) => s,
            (Factor::Sin, 1) => c,
            (Factor::Sin, _) => -s,
        }
    }
}

fn factor(coord: usize, angle: usize) -> Factor {
    match coord {
        0 => Factor::Cos,
        1 => {
            if angle == 0 {
                Factor::Sin
            } else {
                Factor::Cos
            }
        }
        k if angle + 1 < k => Factor::One,
        k if angle + 1 == k => Factor::Sin,
        _ => Factor::Cos,
    }
}

/// Value and derivatives of a map `R^m -> R^d` at one point.
///
/// `d[i]` is `∂_i`, `dd[i * m + j]` is `∂_i ∂_j`. Unused orders stay empty.
#[derive(Debug, Clone)]
pub(crate) struct LocalJet {
    pub x: DVector<f64>,
    pub d: Vec<DVector<f64>>,
    pub dd: Vec<DVector<f64>>,
}

impl LocalJet {
    pub fn dd(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.dd[i * self.d.len() + j]
    }
}

/// Chart jet of `S^m` at angles `u` (`m = u.len()`), up to derivative `order`.
pub(crate) fn sphere_jet(u: &[f64], order: usize) -> LocalJet {
    let m = u.len();
    let cs: Vec<(f64, f64)> = u.iter().map(|a| (a.cos(), a.sin())).collect();
    let product = |coord: usize, orders: &[usize]| -> f64 {
        (0..m)
            .map(|l| factor(coord, l).eval(orders[l], cs[l].0, cs[l].1))
            .product()
    };
    let mut orders = vec![0usize; m];
    let x = DVector::from_fn(m + 1, |k, _| product(k, &orders));
    let mut d = Vec::new();
    let mut dd = Vec::new();
    if order >= 1 {
        for i in 0..m {
            orders[i] += 1;
            d.push(DVector::from_fn(m + 1, |k, _| product(k, &orders)));
            orders[i] -= 1;
        }
    }
    if order >= 2 {
        for i in 0..m {
            for j in 0..m {
                orders[i] += 1;
                orders[j] += 1;
                dd.push(DVector::from_fn(m + 1, |k, _| product(k, &orders)));
                orders[i] -= 1;
                orders[j] -= 1;
            }
        }
    }
    LocalJet { x, d, dd }
}

/// Smallest `|cos|` over the latitude angles; zero means a chart singularity.
pub(crate) fn chart_margin(u: &[f64]) -> f64 {
    u.iter().skip(1).map(|a| a.cos().abs()).fold(1.0, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_maps_to_first_basis_vector() {
        for m in 1..5 {
            let jet = sphere_jet(&vec![0.0; m], 0);
            assert_eq!(jet.x[0], 1.0);
            assert!(jet.x.iter().skip(1).all(|v| *v == 0.0));
        }
    }

    #[test]
    fn image_is_unit_and_derivatives_match_differences() {
        let u = [0.3, -0.7, 0.4];
        let jet = sphere_jet(&u, 2);
        assert!((jet.x.norm() - 1.0).abs() < 1e-15);
        let h = 1e-5;
        for i in 0..3 {
            let mut up = u;
            let mut dn = u;
            up[i] += h;
            dn[i] -= h;
            let fd = (sphere_jet(&up, 0).x - sphere_jet(&dn, 0).x) / (2.0 * h);
            assert!((fd - &jet.d[i]).amax() < 1e-9);
            let fd1 = (sphere_jet(&up, 1).d[i].clone() - sphere_jet(&dn, 1).d[i].clone()) / (2.0 * h);
            assert!((fd1 - jet.dd(i, i)).amax() < 1e-9);
        }
    }

    #[test]
    fn margin_flags_poles() {
        assert_eq!(chart_margin(&[2.0]), 1.0);
        assert!(chart_margin(&[0.0, std::f64::consts::FRAC_PI_2]) < 1e-15);
    }
}
