//! Checkers and instance generators for the arm lemma, the bow inequality
//! and the Crofton formula.

use std::f64::consts::{PI, TAU};

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;

use super::{convex_arc, external_angles, is_convex_arc, planarity_defect, PolyCurve, SampledCurve};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct ArmReport {
    /// One message per failed hypothesis; empty when all hold.
    pub violations: Vec<String>,
    pub hypotheses_ok: bool,
    pub inequality_ok: bool,
    /// `|q_1 q_k| − |p_1 p_k|`.
    pub slack: f64,
}

/// Compares the end-to-end distances of `Q` and a convex planar arc `P` with
/// the same edge lengths, where every angle of `Q` is at least the matching
/// angle of `P`.
pub fn arm_check(q: &PolyCurve, p: &PolyCurve, tol: f64) -> Result<ArmReport> {
    q.validate()?;
    p.validate()?;
    let mut violations = Vec::new();
    if q.closed || p.closed {
        violations.push("arm lemma compares open curves".to_string());
    }
    if q.vertices.len() != p.vertices.len() {
        return Err(Error::DimensionMismatch { expected: p.vertices.len(), got: q.vertices.len() });
    }
    for (i, (lq, lp)) in q.edge_lengths().iter().zip(p.edge_lengths()).enumerate() {
        if (lq - lp).abs() > 1e-9 * lp.max(1.0) {
            violations.push(format!("edge {i}: lengths {lq} and {lp} differ"));
        }
    }
    if !is_convex_arc(p) {
        violations.push("P is not a planar convex arc".to_string());
    }
    let (cq, cp) = (external_angles(q)?, external_angles(p)?);
    for (i, (a, b)) in cq.iter().zip(&cp).enumerate() {
        // ∠q ≥ π − c_p, i.e. c_q ≤ c_p
        if *a > b + tol {
            violations.push(format!("vertex {}: angle of Q is {} below the bound {}", i + 1, PI - a, PI - b));
        }
    }
    let slack = q.end_to_end() - p.end_to_end();
    Ok(ArmReport {
        hypotheses_ok: violations.is_empty(),
        violations,
        inequality_ok: slack >= -tol,
        slack,
    })
}

/// A convex planar arc `P` with `k` vertices and a bent copy `Q` in `R^N`
/// whose external angles are `c'_i ∈ [0, c_i]`, turned in random planes.
pub fn random_arm_instance(k: usize, ambient: usize, seed: u64) -> Result<(PolyCurve, PolyCurve)> {
    if k < 3 || ambient < 2 {
        return Err(Error::InvalidParameter(format!("need k ≥ 3 and N ≥ 2, got k={k}, N={ambient}")));
    }
    let mut r = rng::rng(seed);
    let lengths: Vec<f64> = (0..k - 1).map(|_| r.random_range(0.3..1.5)).collect();
    // total turning below π keeps the closed-up polygon convex
    let raw: Vec<f64> = (0..k - 2).map(|_| r.random_range(0.05..1.0)).collect();
    let budget = r.random_range(0.3..0.97) * PI;
    let sum: f64 = raw.iter().sum();
    let angles: Vec<f64> = raw.iter().map(|a| a / sum * budget).collect();
    let mut p = convex_arc(&lengths, &angles)?;
    if ambient > 2 {
        for v in &mut p.vertices {
            *v = v.clone().resize_vertically(ambient, 0.0);
        }
    }

    let mut dir = DVector::zeros(ambient);
    dir[0] = 1.0;
    let mut pts = vec![DVector::zeros(ambient)];
    for (i, l) in lengths.iter().enumerate() {
        if i > 0 {
            let turn = r.random_range(0.0..=1.0) * angles[i - 1];
            let u = random_orthogonal(&mut r, &dir);
            dir = (&dir * turn.cos() + u * turn.sin()).normalize();
        }
        let next = pts.last().expect("nonempty") + &dir * *l;
        pts.push(next);
    }
    Ok((p, PolyCurve::new(pts, false)?))
}

fn random_orthogonal<R: Rng + ?Sized>(r: &mut R, d: &DVector<f64>) -> DVector<f64> {
    loop {
        let v = rng::unit_vector(r, d.len());
        let w = &v - d * d.dot(&v);
        if w.norm() > 1e-6 {
            return w.normalize();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BowReport {
    pub curv_ok: bool,
    pub max_curvature: f64,
    /// `None` when the curvature or length precondition fails.
    pub chord_ok: Option<bool>,
    pub chord: f64,
    pub bound: f64,
    pub slack: f64,
    /// Equality up to `1e-8`, which forces a planar circular arc.
    pub equality: bool,
    pub planarity_defect: f64,
}

/// Chord of a curve with curvature at most `1/R` against the circular arc
/// of the same length: `|y(l) − y(0)| ≥ 2R sin(l/2R)` for `l ≤ 2πR`.
pub fn bow_check(y: &SampledCurve, radius: f64, tol: f64) -> Result<BowReport> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    if y.closed {
        return Err(Error::InvalidParameter("bow inequality applies to open arcs".into()));
    }
    let max_curvature = y.discrete_curvatures().into_iter().fold(0.0, f64::max);
    let length = y.length();
    let curv_ok = max_curvature <= 1.0 / radius + tol && length <= TAU * radius * (1.0 + 1e-12);
    let chord = y.as_poly().end_to_end();
    let bound = 2.0 * radius * (length / (2.0 * radius)).sin();
    let slack = chord - bound;
    Ok(BowReport {
        curv_ok,
        max_curvature,
        chord_ok: curv_ok.then_some(slack >= -tol),
        chord,
        bound,
        slack,
        equality: curv_ok && slack.abs() < 1e-8,
        planarity_defect: planarity_defect(&y.samples),
    })
}

/// Unit-spacing-`ε` polygon in `R^N` whose direction turns by at most `ε/R`
/// per step, in random planes, with piecewise-constant turning rates.
pub fn random_bounded_curve(radius: f64, length: f64, n_samples: usize, ambient: usize, seed: u64) -> Result<SampledCurve> {
    if !(radius > 0.0) || !(length > 0.0) || n_samples < 3 || ambient < 2 {
        return Err(Error::InvalidParameter("need R, l > 0, at least 3 samples and N ≥ 2".into()));
    }
    let mut r = rng::rng(seed);
    let eps = length / (n_samples - 1) as f64;
    let mut dir = rng::unit_vector(&mut r, ambient);
    let mut normal = random_orthogonal(&mut r, &dir);
    let mut rate = 0.0;
    let mut pts = vec![DVector::zeros(ambient)];
    for i in 0..n_samples - 1 {
        if i % 16 == 0 {
            rate = r.random_range(0.0..=1.0) / radius;
            // tilt the turning plane
            let tilt = random_orthogonal(&mut r, &dir);
            normal = (&normal + tilt * r.random_range(0.0..0.5)).normalize();
            normal = (&normal - &dir * dir.dot(&normal)).normalize();
        }
        if i > 0 {
            let turn = rate * eps;
            let new_dir = (&dir * turn.cos() + &normal * turn.sin()).normalize();
            normal = (&normal * turn.cos() - &dir * turn.sin()).normalize();
            normal = (&normal - &new_dir * new_dir.dot(&normal)).normalize();
            dir = new_dir;
        }
        let next = pts.last().expect("nonempty") + &dir * eps;
        pts.push(next);
    }
    SampledCurve::new(pts, false)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CroftonReport {
    /// `4π · mean N_r` over sampled directions.
    pub mc_estimate: f64,
    /// `4 Σ c_i`.
    pub target: f64,
    pub rel_err: f64,
    pub directions: usize,
    /// Directions redrawn because an edge was exactly orthogonal to them.
    pub resampled: usize,
}

/// Monte-Carlo check of `∫_{S²} N_r dr = 4 ∫ curv` for a closed curve in
/// `R³`, where `N_r` counts critical points of `s ↦ <r, y(s)>`.
pub fn crofton_check(curve: &PolyCurve, n_dirs: usize, seed: u64) -> Result<CroftonReport> {
    curve.validate()?;
    if !curve.closed {
        return Err(Error::InvalidParameter("Crofton check needs a closed curve".into()));
    }
    if curve.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: curve.dim() });
    }
    if n_dirs == 0 {
        return Err(Error::InvalidParameter("need at least one direction".into()));
    }
    let edges = curve.edges();
    const CHUNK: usize = 4096;
    let chunks = n_dirs.div_ceil(CHUNK);
    let partial: Vec<(u64, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng::chunk_rng(seed, 0xC20F, c as u64);
            let len = CHUNK.min(n_dirs - c * CHUNK);
            let (mut count, mut redrawn) = (0u64, 0usize);
            for _ in 0..len {
                loop {
                    let dir = rng::unit_vector(&mut r, 3);
                    let signs: Vec<f64> = edges.iter().map(|e| e.dot(&dir)).collect();
                    if signs.contains(&0.0) {
                        redrawn += 1;
                        continue;
                    }
                    let m = signs.len();
                    count += (0..m).filter(|&i| (signs[i] > 0.0) != (signs[(i + 1) % m] > 0.0)).count() as u64;
                    break;
                }
            }
            (count, redrawn)
        })
        .collect();
    let total: u64 = partial.iter().map(|p| p.0).sum();
    let resampled = partial.iter().map(|p| p.1).sum();
    let mc_estimate = 4.0 * PI * total as f64 / n_dirs as f64;
    let target = 4.0 * external_angles(curve)?.iter().sum::<f64>();
    Ok(CroftonReport { mc_estimate, target, rel_err: (mc_estimate - target).abs() / target, directions: n_dirs, resampled })
}
