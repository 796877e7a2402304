//! Catalog of explicitly parametrized immersions.
//!
//! Every catalog entry maps a parameter vector `u ∈ R^n` to a point of
//! `R^N` and provides the analytic 2-jet of that map. Angles are unbounded;
//! torus kinds are periodic in every coordinate, sphere charts in the
//! longitude only.

mod chart;
mod json;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use crate::error::{ensure_finite, Error, Result};
use crate::exact::Rational;
use crate::rng;

pub(crate) use chart::{chart_margin, sphere_jet, LocalJet};
pub use json::SpecJson;

/// Flat torus `R^n / Λ -> R^{2N}` given by `N` frequency rows.
///
/// Pair `i` of ambient coordinates is `a_i (cos θ_i, sin θ_i)` with
/// `θ_i = scale · <row_i, u>` and amplitude `a_i = sqrt(weight_i)`
/// (uniform weights `1/N` when none are given).
#[derive(Debug, Clone, PartialEq)]
pub struct TorusLinear {
    /// `N × n`, one unit row per circle factor.
    pub rows: DMatrix<f64>,
    pub scale: f64,
    pub weights: Option<Vec<f64>>,
    /// Exact rows when the torus was built from a rational design.
    pub exact_rows: Option<Vec<Vec<Rational>>>,
}

impl TorusLinear {
    /// Torus over the given unit rows with the isometric scale `sqrt(n)`.
    pub fn new(rows: DMatrix<f64>) -> Self {
        let scale = (rows.ncols() as f64).sqrt();
        TorusLinear {
            rows,
            scale,
            weights: None,
            exact_rows: None,
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn factor_count(&self) -> usize {
        self.rows.nrows()
    }

    fn amplitude(&self, i: usize) -> f64 {
        match &self.weights {
            Some(w) => w[i].sqrt(),
            None => 1.0 / (self.factor_count() as f64).sqrt(),
        }
    }

    fn validate(&self) -> Result<()> {
        let (count, n) = self.rows.shape();
        if count == 0 || n == 0 {
            return Err(Error::InvalidParameter("torus needs at least one row and column".into()));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("torus scale must be positive, got {}", self.scale)));
        }
        ensure_finite(self.rows.as_slice(), "torus rows")?;
        match &self.exact_rows {
            Some(exact) => {
                for row in exact {
                    let sq: Rational = row.iter().map(|x| x * x).fold(Rational::zero(), |a, b| a + b);
                    if !sq.is_one() {
                        return Err(Error::InvalidParameter("exact torus row is not a unit vector".into()));
                    }
                }
            }
            None => {
                for (i, row) in self.rows.row_iter().enumerate() {
                    if (row.norm() - 1.0).abs() > 1e-12 {
                        return Err(Error::InvalidParameter(format!(
                            "torus row {i} has norm {} (must be 1)",
                            row.norm()
                        )));
                    }
                }
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != count {
                return Err(Error::DimensionMismatch { expected: count, got: w.len() });
            }
            let total: f64 = w.iter().sum();
            if w.iter().any(|v| !(*v >= 0.0)) || (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter("torus weights must be nonnegative and sum to 1".into()));
            }
        }
        Ok(())
    }
}

/// Symbolic description of a catalog immersion.
#[derive(Debug, Clone, PartialEq)]
pub enum ImmersionSpec {
    /// `S^n(R) ⊂ R^{n+1}`.
    RoundSphere { n: usize, radius: f64 },
    /// `Π S^{n_i}(R_i) ⊂ R^{Σ(n_i+1)}`.
    SphereProduct { factors: Vec<(usize, f64)> },
    /// Product of `N` circles of radius `1/sqrt(N)` in `S^{2N-1}`.
    CliffordTorus { factors: usize },
    TorusLinear(TorusLinear),
    /// `s ↦ sqrt((m+1)/m) (s sᵀ − I/(m+1))` on `S^m`, in traceless coordinates.
    Veronese { m: usize },
    /// Boundary of the `rho`-neighbourhood of `S^{n1}(base_radius) ⊂ R^{n1+1}`,
    /// thickened by an `n2`-sphere of normal directions.
    TubeEncircle {
        base_radius: f64,
        n1: usize,
        n2: usize,
        rho: f64,
    },
}

/// 2-jet of an immersion at a parameter point.
#[derive(Debug, Clone)]
pub struct Jet2 {
    pub point: DVector<f64>,
    /// `N × n`, column `j` is `∂f/∂u_j`.
    pub jac: DMatrix<f64>,
    /// `hess[i * n + j] = ∂²f/∂u_i∂u_j`.
    pub hess: Vec<DVector<f64>>,
}

impl Jet2 {
    pub fn intrinsic_dim(&self) -> usize {
        self.jac.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.jac.nrows()
    }

    pub fn hess(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.hess[i * self.intrinsic_dim() + j]
    }

    fn from_local(jet: LocalJet) -> Self {
        let n = jet.d.len();
        let jac = DMatrix::from_columns(&jet.d);
        debug_assert_eq!(jet.dd.len(), n * n);
        Jet2 {
            point: jet.x,
            jac,
            hess: jet.dd,
        }
    }
}

impl ImmersionSpec {
    pub fn clifford(factors: usize) -> Self {
        ImmersionSpec::CliffordTorus { factors }
    }

    pub fn sphere(n: usize, radius: f64) -> Self {
        ImmersionSpec::RoundSphere { n, radius }
    }

    pub fn veronese(m: usize) -> Self {
        ImmersionSpec::Veronese { m }
    }

    pub fn tube(base_radius: f64, n1: usize, n2: usize, rho: f64) -> Self {
        ImmersionSpec::TubeEncircle { base_radius, n1, n2, rho }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            ImmersionSpec::RoundSphere { n, .. } => *n,
            ImmersionSpec::SphereProduct { factors } => factors.iter().map(|f| f.0).sum(),
            ImmersionSpec::CliffordTorus { factors } => *factors,
            ImmersionSpec::TorusLinear(t) => t.rows.ncols(),
            ImmersionSpec::Veronese { m } => *m,
            ImmersionSpec::TubeEncircle { n1, n2, .. } => n1 + n2,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            ImmersionSpec::RoundSphere { n, .. } => n + 1,
            ImmersionSpec::SphereProduct { factors } => factors.iter().map(|f| f.0 + 1).sum(),
            ImmersionSpec::CliffordTorus { factors } => 2 * factors,
            ImmersionSpec::TorusLinear(t) => 2 * t.factor_count(),
            ImmersionSpec::Veronese { m } => (m + 1) * (m + 2) / 2 - 1,
            ImmersionSpec::TubeEncircle { n1, n2, .. } => n1 + 1 + n2,
        }
    }

    /// Checks the parameter invariants of the kind.
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} must be positive, got {v}")))
            }
        };
        match self {
            ImmersionSpec::RoundSphere { n, radius } => {
                if *n == 0 {
                    return Err(Error::InvalidParameter("sphere dimension must be ≥ 1".into()));
                }
                positive(*radius, "radius")
            }
            ImmersionSpec::SphereProduct { factors } => {
                if factors.is_empty() {
                    return Err(Error::InvalidParameter("sphere product needs a factor".into()));
                }
                for (n, r) in factors {
                    if *n == 0 {
                        return Err(Error::InvalidParameter("factor dimension must be ≥ 1".into()));
                    }
                    positive(*r, "factor radius")?;
                }
                Ok(())
            }
            ImmersionSpec::CliffordTorus { factors } => {
                if *factors == 0 {
                    return Err(Error::InvalidParameter("Clifford torus needs N ≥ 1".into()));
                }
                Ok(())
            }
            ImmersionSpec::TorusLinear(t) => t.validate(),
            ImmersionSpec::Veronese { m } => {
                if *m == 0 {
                    return Err(Error::InvalidParameter("Veronese needs m ≥ 1".into()));
                }
                Ok(())
            }
            ImmersionSpec::TubeEncircle { base_radius, n1, n2, rho } => {
                if *n1 == 0 || *n2 == 0 {
                    return Err(Error::InvalidParameter("tube needs n1, n2 ≥ 1".into()));
                }
                positive(*base_radius, "base radius")?;
                positive(*rho, "tube radius")?;
                if rho >= base_radius {
                    return Err(Error::InvalidParameter(format!(
                        "tube radius {rho} must be below the base radius {base_radius}"
                    )));
                }
                Ok(())
            }
        }
    }

    fn check_parameter(&self, u: &[f64]) -> Result<()> {
        let n = self.intrinsic_dim();
        if u.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: u.len() });
        }
        ensure_finite(u, "parameter")
    }

    /// Sphere-chart blocks of the parameter vector (empty for tori).
    fn chart_blocks(&self) -> Vec<std::ops::Range<usize>> {
        match self {
            ImmersionSpec::RoundSphere { n, .. } | ImmersionSpec::Veronese { m: n } => vec![0..*n],
            ImmersionSpec::SphereProduct { factors } => {
                let mut start = 0;
                factors
                    .iter()
                    .map(|(n, _)| {
                        let r = start..start + n;
                        start += n;
                        r
                    })
                    .collect()
            }
            ImmersionSpec::TubeEncircle { n1, n2, .. } => vec![0..*n1, *n1..n1 + n2],
            ImmersionSpec::CliffordTorus { .. } | ImmersionSpec::TorusLinear(_) => Vec::new(),
        }
    }

    /// Smallest distance-to-singularity indicator over all sphere charts (1 for tori).
    pub fn chart_margin(&self, u: &[f64]) -> f64 {
        self.chart_blocks()
            .into_iter()
            .map(|r| chart_margin(&u[r]))
            .fold(1.0, f64::min)
    }

    fn local_jet(&self, u: &[f64], order: usize) -> LocalJet {
        match self {
            ImmersionSpec::RoundSphere { radius, .. } => scale_jet(sphere_jet(u, order), *radius),
            ImmersionSpec::SphereProduct { factors } => {
                let mut start = 0;
                let parts: Vec<LocalJet> = factors
                    .iter()
                    .map(|(n, r)| {
                        let jet = scale_jet(sphere_jet(&u[start..start + n], order), *r);
                        start += n;
                        jet
                    })
                    .collect();
                block_product(&parts, order)
            }
            ImmersionSpec::CliffordTorus { factors } => {
                let torus = TorusLinear::new(DMatrix::identity(*factors, *factors));
                torus_jet(&torus, u, order)
            }
            ImmersionSpec::TorusLinear(t) => torus_jet(t, u, order),
            ImmersionSpec::Veronese { m } => veronese_jet(*m, u, order),
            ImmersionSpec::TubeEncircle { base_radius, n1, rho, .. } => {
                tube_jet(*base_radius, *rho, &u[..*n1], &u[*n1..], order)
            }
        }
    }

    /// Parameters drawn for sampling-based sup estimates.
    ///
    /// Torus angles are uniform over a period; sphere charts use a uniform
    /// longitude and latitudes in `[-1.2, 1.2]`, away from the chart poles.
    pub fn sample_parameter<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.intrinsic_dim();
        let tau = std::f64::consts::TAU;
        let mut u: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..tau)).collect();
        for block in self.chart_blocks() {
            for i in block.clone().skip(1) {
                u[i] = rng.random_range(-1.2..1.2);
            }
        }
        u
    }

    /// Deterministic parameter points where the pointwise curvature of the
    /// kind is known to peak.
    pub fn landmark_parameters(&self) -> Vec<Vec<f64>> {
        let n = self.intrinsic_dim();
        let mut out = vec![vec![0.0; n]];
        if let ImmersionSpec::TubeEncircle { n1, .. } = self {
            // fiber longitude π puts the point on the inner side (w_0 = −1)
            let mut inner = vec![0.0; n];
            inner[*n1] = std::f64::consts::PI;
            out.push(inner);
        }
        out
    }
}

/// `f(u)`.
pub fn evaluate(spec: &ImmersionSpec, u: &[f64]) -> Result<DVector<f64>> {
    spec.validate()?;
    spec.check_parameter(u)?;
    Ok(spec.local_jet(u, 0).x)
}

/// Analytic first and second partial derivatives at `u`.
pub fn jet2(spec: &ImmersionSpec, u: &[f64]) -> Result<Jet2> {
    spec.validate()?;
    spec.check_parameter(u)?;
    Ok(Jet2::from_local(spec.local_jet(u, 2)))
}

/// Central-difference 2-jet; the independent oracle for [`jet2`].
pub fn jet2_fd(spec: &ImmersionSpec, u: &[f64], h: f64) -> Result<Jet2> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("step size must be positive, got {h}")));
    }
    spec.validate()?;
    spec.check_parameter(u)?;
    let margin = spec.chart_margin(u);
    // stencil must stay clear of chart poles by a wide margin
    if margin < 2.0 * h + 1e-3 {
        return Err(Error::ChartBoundary { u: u.to_vec(), margin });
    }
    let n = u.len();
    let f = |shift: &[(usize, f64)]| {
        let mut v = u.to_vec();
        for (i, d) in shift {
            v[*i] += d;
        }
        spec.local_jet(&v, 0).x
    };
    let point = f(&[]);
    let mut jac = DMatrix::zeros(point.len(), n);
    let mut hess = vec![DVector::zeros(point.len()); n * n];
    for i in 0..n {
        let plus = f(&[(i, h)]);
        let minus = f(&[(i, -h)]);
        jac.set_column(i, &((&plus - &minus) / (2.0 * h)));
        hess[i * n + i] = (&plus - 2.0 * &point + &minus) / (h * h);
        for j in 0..i {
            let v = (f(&[(i, h), (j, h)]) - f(&[(i, h), (j, -h)]) - f(&[(i, -h), (j, h)])
                + f(&[(i, -h), (j, -h)]))
                / (4.0 * h * h);
            hess[i * n + j] = v.clone();
            hess[j * n + i] = v;
        }
    }
    Ok(Jet2 { point, jac, hess })
}

/// Largest ambient norm over `n_samples` sampled parameters plus landmarks.
pub fn containment_radius(spec: &ImmersionSpec, n_samples: usize, seed: u64) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be ≥ 1".into()));
    }
    spec.validate()?;
    let mut rng = rng::rng(seed);
    let mut best: f64 = 0.0;
    for u in spec.landmark_parameters() {
        best = best.max(spec.local_jet(&u, 0).x.norm());
    }
    for _ in 0..n_samples {
        let u = spec.sample_parameter(&mut rng);
        best = best.max(spec.local_jet(&u, 0).x.norm());
    }
    Ok(best)
}

/// Rebuilds the traceless symmetric `(m+1)×(m+1)` matrix of a Veronese point.
pub fn veronese_matrix(m: usize, point: &DVector<f64>) -> DMatrix<f64> {
    let d = m + 1;
    let mut mat = DMatrix::zeros(d, d);
    for k in 1..=m {
        let h = helmert(d, k);
        for i in 0..d {
            mat[(i, i)] += point[k - 1] * h[i];
        }
    }
    let mut idx = m;
    for i in 0..d {
        for j in i + 1..d {
            let v = point[idx] / std::f64::consts::SQRT_2;
            mat[(i, j)] = v;
            mat[(j, i)] = v;
            idx += 1;
        }
    }
    mat
}

fn scale_jet(mut jet: LocalJet, r: f64) -> LocalJet {
    jet.x *= r;
    jet.d.iter_mut().for_each(|v| *v *= r);
    jet.dd.iter_mut().for_each(|v| *v *= r);
    jet
}

/// Cartesian product of independent factor maps (block-diagonal derivatives).
fn block_product(parts: &[LocalJet], order: usize) -> LocalJet {
    let dim: usize = parts.iter().map(|p| p.x.len()).sum();
    let n: usize = parts.iter().map(|p| p.d.len()).sum();
    let mut x = DVector::zeros(dim);
    let mut d = if order >= 1 { vec![DVector::zeros(dim); n] } else { Vec::new() };
    let mut dd = if order >= 2 { vec![DVector::zeros(dim); n * n] } else { Vec::new() };
    let (mut row, mut col) = (0, 0);
    for p in parts {
        let (len, k) = (p.x.len(), p.d.len());
        x.rows_mut(row, len).copy_from(&p.x);
        if order >= 1 {
            for i in 0..k {
                d[col + i].rows_mut(row, len).copy_from(&p.d[i]);
            }
        }
        if order >= 2 {
            for i in 0..k {
                for j in 0..k {
                    dd[(col + i) * n + col + j].rows_mut(row, len).copy_from(p.dd(i, j));
                }
            }
        }
        row += len;
        col += k;
    }
    LocalJet { x, d, dd }
}

fn torus_jet(t: &TorusLinear, u: &[f64], order: usize) -> LocalJet {
    let (count, n) = t.rows.shape();
    let k = t.scale;
    let mut x = DVector::zeros(2 * count);
    let mut d = if order >= 1 { vec![DVector::zeros(2 * count); n] } else { Vec::new() };
    let mut dd = if order >= 2 { vec![DVector::zeros(2 * count); n * n] } else { Vec::new() };
    for i in 0..count {
        let theta = k * (0..n).map(|j| t.rows[(i, j)] * u[j]).sum::<f64>();
        let (s, c) = theta.sin_cos();
        let a = t.amplitude(i);
        x[2 * i] = a * c;
        x[2 * i + 1] = a * s;
        if order >= 1 {
            for j in 0..n {
                let w = a * k * t.rows[(i, j)];
                d[j][2 * i] = -w * s;
                d[j][2 * i + 1] = w * c;
            }
        }
        if order >= 2 {
            for j in 0..n {
                for l in 0..n {
                    let w = a * k * k * t.rows[(i, j)] * t.rows[(i, l)];
                    dd[j * n + l][2 * i] = -w * c;
                    dd[j * n + l][2 * i + 1] = -w * s;
                }
            }
        }
    }
    LocalJet { x, d, dd }
}

/// Orthonormal basis vector `k` (1-based) of the sum-zero hyperplane in `R^d`.
fn helmert(d: usize, k: usize) -> Vec<f64> {
    let norm = ((k * (k + 1)) as f64).sqrt();
    (0..d)
        .map(|i| match i.cmp(&k) {
            std::cmp::Ordering::Less => 1.0 / norm,
            std::cmp::Ordering::Equal => -(k as f64) / norm,
            std::cmp::Ordering::Greater => 0.0,
        })
        .collect()
}

/// Traceless coordinates of `a bᵀ + b aᵀ` under the trace inner product.
fn sym_outer(a: &DVector<f64>, b: &DVector<f64>, helm: &[Vec<f64>]) -> DVector<f64> {
    let d = a.len();
    let m = d - 1;
    let mut out = DVector::zeros(m + (d * (d - 1)) / 2);
    for (k, h) in helm.iter().enumerate() {
        out[k] = (0..d).map(|i| 2.0 * a[i] * b[i] * h[i]).sum();
    }
    let mut idx = m;
    for i in 0..d {
        for j in i + 1..d {
            out[idx] = std::f64::consts::SQRT_2 * (a[i] * b[j] + a[j] * b[i]);
            idx += 1;
        }
    }
    out
}

fn veronese_jet(m: usize, u: &[f64], order: usize) -> LocalJet {
    let alpha = ((m + 1) as f64 / m as f64).sqrt();
    let s = sphere_jet(u, order);
    let helm: Vec<Vec<f64>> = (1..=m).map(|k| helmert(m + 1, k)).collect();
    let x = sym_outer(&s.x, &s.x, &helm) * (alpha / 2.0);
    let d = s.d.iter().map(|si| sym_outer(si, &s.x, &helm) * alpha).collect();
    let mut dd = Vec::new();
    if order >= 2 {
        for i in 0..m {
            for j in 0..m {
                dd.push((sym_outer(s.dd(i, j), &s.x, &helm) + sym_outer(&s.d[i], &s.d[j], &helm)) * alpha);
            }
        }
    }
    LocalJet { x, d, dd }
}

fn tube_jet(r: f64, rho: f64, ub: &[f64], uf: &[f64], order: usize) -> LocalJet {
    let (n1, n2) = (ub.len(), uf.len());
    let n = n1 + n2;
    let dim = n1 + 1 + n2;
    let base = sphere_jet(ub, order);
    let fib = sphere_jet(uf, order);
    let radial = r + rho * fib.x[0];
    let assemble = |head: DVector<f64>, tail: DVector<f64>| {
        let mut v = DVector::zeros(dim);
        v.rows_mut(0, n1 + 1).copy_from(&head);
        v.rows_mut(n1 + 1, n2).copy_from(&tail);
        v
    };
    let zero_tail = DVector::zeros(n2);
    let x = assemble(&base.x * radial, fib.x.rows(1, n2) * rho);
    let mut d = Vec::new();
    let mut dd = Vec::new();
    if order >= 1 {
        for i in 0..n1 {
            d.push(assemble(&base.d[i] * radial, zero_tail.clone()));
        }
        for j in 0..n2 {
            d.push(assemble(&base.x * (rho * fib.d[j][0]), fib.d[j].rows(1, n2) * rho));
        }
    }
    if order >= 2 {
        dd = vec![DVector::zeros(dim); n * n];
        for i in 0..n {
            for j in 0..n {
                dd[i * n + j] = match (i < n1, j < n1) {
                    (true, true) => assemble(base.dd(i, j) * radial, zero_tail.clone()),
                    (true, false) => assemble(&base.d[i] * (rho * fib.d[j - n1][0]), zero_tail.clone()),
                    (false, true) => assemble(&base.d[j] * (rho * fib.d[i - n1][0]), zero_tail.clone()),
                    (false, false) => {
                        let f = fib.dd(i - n1, j - n1);
                        assemble(&base.x * (rho * f[0]), f.rows(1, n2) * rho)
                    }
                };
            }
        }
    }
    LocalJet { x, d, dd }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn dimensions_follow_the_kind() {
        assert_eq!(ImmersionSpec::veronese(2).ambient_dim(), 5);
        assert_eq!(ImmersionSpec::veronese(3).ambient_dim(), 9);
        assert_eq!(ImmersionSpec::tube(2.0 / 3.0, 1, 1, 1.0 / 3.0).ambient_dim(), 3);
        assert_eq!(ImmersionSpec::clifford(4).ambient_dim(), 8);
        let p = ImmersionSpec::SphereProduct { factors: vec![(1, 0.6), (2, 0.8)] };
        assert_eq!((p.intrinsic_dim(), p.ambient_dim()), (3, 5));
    }

    #[test]
    fn clifford_origin_and_circle_examples() {
        let p = evaluate(&ImmersionSpec::clifford(2), &[0.0, 0.0]).unwrap();
        let s = 1.0 / SQRT_2;
        assert!((p - DVector::from_vec(vec![s, 0.0, s, 0.0])).amax() < 1e-15);
        let p = evaluate(&ImmersionSpec::sphere(1, 1.0), &[0.0]).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn circle_jet_example() {
        let jet = jet2(&ImmersionSpec::sphere(1, 2.0), &[0.0]).unwrap();
        assert!((jet.point.clone() - DVector::from_vec(vec![2.0, 0.0])).amax() < 1e-15);
        assert!((jet.jac.column(0) - DVector::from_vec(vec![0.0, 2.0])).amax() < 1e-15);
        assert!((jet.hess(0, 0) - DVector::from_vec(vec![-2.0, 0.0])).amax() < 1e-15);
    }

    #[test]
    fn clifford_jet_matches_hand_derivatives() {
        // (1/√2)(cos √2u₁, sin √2u₁, cos √2u₂, sin √2u₂) at 0
        let jet = jet2(&ImmersionSpec::clifford(2), &[0.0, 0.0]).unwrap();
        let col = |v: [f64; 4]| DVector::from_vec(v.to_vec());
        assert!((jet.jac.column(0) - col([0.0, 1.0, 0.0, 0.0])).amax() < 1e-15);
        assert!((jet.jac.column(1) - col([0.0, 0.0, 0.0, 1.0])).amax() < 1e-15);
        assert!((jet.hess(0, 0) - col([-SQRT_2, 0.0, 0.0, 0.0])).amax() < 1e-14);
        assert!((jet.hess(1, 1) - col([0.0, 0.0, -SQRT_2, 0.0])).amax() < 1e-14);
        assert!(jet.hess(0, 1).amax() == 0.0);
    }

    #[test]
    fn veronese_origin_has_unit_norm_and_traceless_matrix() {
        for m in 1..5 {
            let p = evaluate(&ImmersionSpec::veronese(m), &vec![0.0; m]).unwrap();
            assert!((p.norm() - 1.0).abs() < 1e-15);
            let mat = veronese_matrix(m, &p);
            assert!(mat.trace().abs() < 1e-12);
            // matrix is α(e₀e₀ᵀ − I/(m+1))
            let alpha = ((m + 1) as f64 / m as f64).sqrt();
            assert!((mat[(0, 0)] - alpha * (1.0 - 1.0 / (m + 1) as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn jet_point_equals_evaluate() {
        let specs = [
            ImmersionSpec::sphere(3, 1.5),
            ImmersionSpec::veronese(3),
            ImmersionSpec::tube(1.0, 2, 1, 0.3),
            ImmersionSpec::SphereProduct { factors: vec![(1, 0.6), (2, 0.8)] },
        ];
        let mut r = rng::rng(5);
        for spec in &specs {
            let u = spec.sample_parameter(&mut r);
            assert_eq!(jet2(spec, &u).unwrap().point, evaluate(spec, &u).unwrap());
        }
    }

    #[test]
    fn errors_on_bad_input() {
        let spec = ImmersionSpec::clifford(3);
        assert!(matches!(evaluate(&spec, &[0.0]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(evaluate(&spec, &[0.0, f64::NAN, 0.0]), Err(Error::NonFinite(_))));
        assert!(jet2_fd(&spec, &[0.0; 3], 0.0).is_err());
        assert!(ImmersionSpec::tube(1.0, 1, 1, 1.0).validate().is_err());
        assert!(ImmersionSpec::sphere(2, -1.0).validate().is_err());
        let bad_rows = TorusLinear::new(DMatrix::from_row_slice(1, 2, &[1.0, 1.0]));
        assert!(ImmersionSpec::TorusLinear(bad_rows).validate().is_err());
    }

    #[test]
    fn fd_rejects_chart_poles() {
        let spec = ImmersionSpec::veronese(2);
        let near_pole = [0.1, std::f64::consts::FRAC_PI_2 - 1e-4];
        assert!(matches!(jet2_fd(&spec, &near_pole, 1e-4), Err(Error::ChartBoundary { .. })));
    }

    #[test]
    fn containment_examples() {
        let r = containment_radius(&ImmersionSpec::clifford(4), 1000, 1).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let p = ImmersionSpec::SphereProduct { factors: vec![(1, 0.6), (1, 0.8)] };
        assert!((containment_radius(&p, 500, 1).unwrap() - 1.0).abs() < 1e-12);
        let t = ImmersionSpec::tube(2.0 / 3.0, 1, 1, 1.0 / 3.0);
        assert!((containment_radius(&t, 500, 1).unwrap() - 1.0).abs() < 1e-12);
        let v = ImmersionSpec::veronese(3);
        assert!((containment_radius(&v, 500, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(containment_radius(&v, 0, 1).is_err());
    }
}
