//! Degree-4 spherical designs.
//!
//! A weighted point set on `S^{n-1}` is a design of degree 4 when its quartic
//! moments match those of the uniform measure on the sphere. Floating designs
//! come from [`optimize_design`] or from fixtures; exact rational designs come
//! from [`hilbert_rational_design`].

mod hilbert;
mod io;
mod optimize;
mod simplex;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{max_abs, to_f64, Rational};
use crate::immersions::{ImmersionSpec, TorusLinear};

pub use hilbert::{hilbert_rational_design, rational_sphere_points, HilbertOptions};
pub use io::DesignFile;
pub use optimize::{optimize_design, OptimizeOptions, OptimizedDesign};
pub use simplex::{exact_lp_feasible, lp_feasible, LpScalar};

/// Weighted unit vectors on `S^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub n: usize,
    pub points: Vec<DVector<f64>>,
    pub weights: Vec<f64>,
}

impl Design {
    /// Uniformly weighted design.
    pub fn new(n: usize, points: Vec<DVector<f64>>) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        Self::with_weights(n, points.clone(), vec![w; points.len()])
    }

    pub fn with_weights(n: usize, points: Vec<DVector<f64>>, weights: Vec<f64>) -> Result<Self> {
        let d = Design { n, points, weights };
        d.validate()?;
        Ok(d)
    }

    /// Vertices of the regular `k`-gon on `S¹`.
    pub fn regular_polygon(k: usize) -> Result<Self> {
        let pts = (0..k)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                DVector::from_column_slice(&[t.cos(), t.sin()])
            })
            .collect();
        Self::new(2, pts)
    }

    /// `{±e_1, …, ±e_n}`.
    pub fn cross_polytope(n: usize) -> Result<Self> {
        let mut pts = Vec::with_capacity(2 * n);
        for i in 0..n {
            for s in [1.0, -1.0] {
                let mut v = DVector::zeros(n);
                v[i] = s;
                pts.push(v);
            }
        }
        Self::new(n, pts)
    }

    pub fn cardinality(&self) -> usize {
        self.points.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("design dimension must be ≥ 1".into()));
        }
        if self.points.is_empty() {
            return Err(Error::InvalidParameter("design has no points".into()));
        }
        if self.weights.len() != self.points.len() {
            return Err(Error::DimensionMismatch { expected: self.points.len(), got: self.weights.len() });
        }
        for p in &self.points {
            if p.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: p.len() });
            }
            crate::error::ensure_finite(p.as_slice(), "design point")?;
            if (p.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!("design point has norm {}", p.norm())));
            }
        }
        if self.weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidParameter("design weights must be nonnegative".into()));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("design weights sum to {total}")));
        }
        Ok(())
    }

    /// Applies `rot` to every point.
    pub fn rotated(&self, rot: &DMatrix<f64>) -> Result<Design> {
        let pts = self.points.iter().map(|p| (rot * p).normalize()).collect();
        Design::with_weights(self.n, pts, self.weights.clone())
    }

    fn is_uniform(&self) -> bool {
        let w = 1.0 / self.cardinality() as f64;
        self.weights.iter().all(|x| (x - w).abs() <= 1e-15)
    }
}

/// Exact multiset of rational unit vectors; point `i` is repeated
/// `multiplicities[i]` times and `Q = Σ P_i` is the total cardinality.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalDesign {
    pub n: usize,
    pub points: Vec<Vec<Rational>>,
    pub multiplicities: Vec<BigUint>,
}

impl RationalDesign {
    pub fn new(n: usize, points: Vec<Vec<Rational>>, multiplicities: Vec<BigUint>) -> Result<Self> {
        let d = RationalDesign { n, points, multiplicities };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.points.is_empty() {
            return Err(Error::InvalidParameter("rational design needs n ≥ 1 and a point".into()));
        }
        if self.multiplicities.len() != self.points.len() {
            return Err(Error::DimensionMismatch { expected: self.points.len(), got: self.multiplicities.len() });
        }
        if self.multiplicities.iter().any(Zero::is_zero) {
            return Err(Error::InvalidParameter("multiplicities must be positive".into()));
        }
        for p in &self.points {
            if p.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: p.len() });
            }
            let norm: Rational = p.iter().map(|x| x * x).sum();
            if !norm.is_one() {
                return Err(Error::InvalidParameter(format!("rational point has squared norm {norm}")));
            }
        }
        Ok(())
    }

    /// Total cardinality `Q = Σ P_i`.
    pub fn total(&self) -> BigUint {
        self.multiplicities.iter().sum()
    }

    /// Exact weights `P_i / Q`.
    pub fn exact_weights(&self) -> Vec<Rational> {
        let q = Rational::from_integer(self.total().into());
        self.multiplicities
            .iter()
            .map(|p| Rational::from_integer(p.clone().into()) / &q)
            .collect()
    }

    /// Floating image with weights `P_i / Q`.
    pub fn to_design(&self) -> Result<Design> {
        let pts = self
            .points
            .iter()
            .map(|p| DVector::from_iterator(self.n, p.iter().map(to_f64)).normalize())
            .collect();
        let w: Vec<f64> = self.exact_weights().iter().map(to_f64).collect();
        let total: f64 = w.iter().sum();
        Design::with_weights(self.n, pts, w.iter().map(|x| x / total).collect())
    }
}

/// Quartic moments indexed by multi-indices `α` with `|α| = 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTensor4<T> {
    pub n: usize,
    pub indices: Vec<Vec<u8>>,
    pub values: Vec<T>,
}

impl<T> MomentTensor4<T> {
    pub fn get(&self, alpha: &[u8]) -> Option<&T> {
        self.indices.iter().position(|a| a == alpha).map(|i| &self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// All `α ∈ N^n` with `|α| = degree`, lexicographically descending.
pub fn multi_indices(n: usize, degree: u8) -> Vec<Vec<u8>> {
    fn rec(n: usize, left: u8, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(n, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, degree, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn monomial_f64(x: &[f64], alpha: &[u8]) -> f64 {
    x.iter().zip(alpha).map(|(v, &k)| v.powi(k as i32)).product()
}

pub(crate) fn monomial_exact(x: &[Rational], alpha: &[u8]) -> Rational {
    let mut acc = Rational::one();
    for (v, &k) in x.iter().zip(alpha) {
        for _ in 0..k {
            acc *= v;
        }
    }
    acc
}

/// `m_α = Σ w_i s_i^α`.
pub fn quartic_moment_tensor(d: &Design) -> MomentTensor4<f64> {
    let indices = multi_indices(d.n, 4);
    let values = indices
        .iter()
        .map(|a| {
            d.points
                .iter()
                .zip(&d.weights)
                .map(|(p, w)| w * monomial_f64(p.as_slice(), a))
                .sum()
        })
        .collect();
    MomentTensor4 { n: d.n, indices, values }
}

/// `m_α = Σ P_i s_i^α / Q` in exact arithmetic.
pub fn quartic_moment_tensor_exact(d: &RationalDesign) -> MomentTensor4<Rational> {
    let indices = multi_indices(d.n, 4);
    let weights = d.exact_weights();
    let values = indices
        .iter()
        .map(|a| d.points.iter().zip(&weights).map(|(p, w)| w * monomial_exact(p, a)).sum())
        .collect();
    MomentTensor4 { n: d.n, indices, values }
}

/// Moments of the uniform measure on `S^{n-1}`:
/// `Π_j (α_j − 1)!! / (n(n+2))` for even `α`, zero otherwise.
pub fn isotropic_moment_tensor(n: usize) -> Result<MomentTensor4<Rational>> {
    if n == 0 {
        return Err(Error::InvalidParameter("sphere dimension must be ≥ 1".into()));
    }
    let indices = multi_indices(n, 4);
    let denom = Rational::from_integer(((n * (n + 2)) as i64).into());
    let values = indices
        .iter()
        .map(|a| {
            if a.iter().any(|k| k % 2 == 1) {
                return Rational::zero();
            }
            let num: i64 = a.iter().map(|&k| if k == 4 { 3 } else { 1 }).product();
            Rational::from_integer(num.into()) / &denom
        })
        .collect();
    Ok(MomentTensor4 { n, indices, values })
}

pub fn isotropic_moment_tensor_f64(n: usize) -> Result<MomentTensor4<f64>> {
    let m = isotropic_moment_tensor(n)?;
    Ok(MomentTensor4 { n, indices: m.indices, values: m.values.iter().map(to_f64).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignCheck {
    pub ok: bool,
    /// `max_α |m_α − μ_α|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactDesignCheck {
    pub ok: bool,
    pub residual: Rational,
}

pub fn is_degree4_design(d: &Design, tol: f64) -> Result<DesignCheck> {
    d.validate()?;
    let m = quartic_moment_tensor(d);
    let iso = isotropic_moment_tensor_f64(d.n)?;
    let residual = m.values.iter().zip(&iso.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(DesignCheck { ok: residual <= tol, residual })
}

/// Exact zero test of the quartic moment identity.
pub fn is_degree4_design_exact(d: &RationalDesign) -> Result<ExactDesignCheck> {
    d.validate()?;
    let m = quartic_moment_tensor_exact(d);
    let iso = isotropic_moment_tensor(d.n)?;
    let residual = max_abs(m.values.iter().zip(&iso.values).map(|(a, b)| a - b));
    Ok(ExactDesignCheck { ok: residual.is_zero(), residual })
}

/// `Σ w_i s_i s_iᵀ`; equals `I/n` for any degree-4 design.
pub fn second_moment(d: &Design) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(d.n, d.n);
    for (p, w) in d.points.iter().zip(&d.weights) {
        m += p * p.transpose() * *w;
    }
    m
}

pub fn second_moment_exact(d: &RationalDesign) -> Vec<Vec<Rational>> {
    let weights = d.exact_weights();
    (0..d.n)
        .map(|i| {
            (0..d.n)
                .map(|j| d.points.iter().zip(&weights).map(|(p, w)| w * &p[i] * &p[j]).sum())
                .collect()
        })
        .collect()
}

/// `‖x‖_{L4} / ‖x‖_{L2}` with `‖x‖_{Lp} = (Σ|x_i|^p / N)^{1/p}` and
/// `x_i = sqrt(w_i N) <c, s_i>`. Constant `(3n/(n+2))^{1/4}` exactly on designs.
pub fn design_ratio(d: &Design, c: &[f64]) -> Result<f64> {
    if c.len() != d.n {
        return Err(Error::DimensionMismatch { expected: d.n, got: c.len() });
    }
    let cv = DVector::from_column_slice(c);
    if !(cv.norm() > 0.0) {
        return Err(Error::ZeroTangent);
    }
    let big_n = d.cardinality() as f64;
    let (mut l2, mut l4) = (0.0, 0.0);
    for (p, w) in d.points.iter().zip(&d.weights) {
        let x = (w * big_n).sqrt() * p.dot(&cv);
        l2 += x * x;
        l4 += x.powi(4);
    }
    Ok((l4 / big_n).powf(0.25) / (l2 / big_n).sqrt())
}

/// The flat torus `E_D` of a design: one circle per point, isometric scale.
pub fn torus_immersion_from_design(d: &Design, tol: f64) -> Result<ImmersionSpec> {
    let check = is_degree4_design(d, tol)?;
    if !check.ok {
        return Err(Error::NotADesign { residual: check.residual });
    }
    let rows = DMatrix::from_fn(d.cardinality(), d.n, |i, j| d.points[i][j]);
    let mut torus = TorusLinear::new(rows);
    if !d.is_uniform() {
        torus = torus.with_weights(d.weights.clone());
    }
    let spec = ImmersionSpec::TorusLinear(torus);
    spec.validate()?;
    Ok(spec)
}

/// Exact variant: rows keep their rational form; multiplicities become weights.
pub fn torus_immersion_from_rational_design(d: &RationalDesign) -> Result<ImmersionSpec> {
    let check = is_degree4_design_exact(d)?;
    if !check.ok {
        return Err(Error::NotADesign { residual: to_f64(&check.residual) });
    }
    let rows = DMatrix::from_fn(d.points.len(), d.n, |i, j| to_f64(&d.points[i][j]));
    let mut torus = TorusLinear::new(rows);
    let first = &d.multiplicities[0];
    if d.multiplicities.iter().any(|p| p != first) {
        let total = d.total().to_f64().unwrap_or(f64::INFINITY);
        torus = torus.with_weights(d.multiplicities.iter().map(|p| p.to_f64().unwrap_or(0.0) / total).collect());
    }
    torus.exact_rows = Some(d.points.clone());
    let spec = ImmersionSpec::TorusLinear(torus);
    spec.validate()?;
    Ok(spec)
}
