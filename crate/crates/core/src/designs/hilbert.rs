//! Exact rational designs: rational sphere points, an exact moment LP, and
//! clearing of denominators into integer multiplicities.
//!
//! The isotropic moments are invariant under signed coordinate permutations,
//! so any feasible weighting can be averaged over that group. The LP is
//! therefore posed over orbits (one column per orbit, holding the orbit's
//! average monomials), which keeps it small without losing feasibility.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::simplex::exact_lp_feasible;
use super::{isotropic_moment_tensor, multi_indices, monomial_exact, RationalDesign};
use crate::error::{Error, Result};
use crate::exact::{to_f64, Rational};

const MAX_BASE_POINTS: usize = 2_000_000;

/// Rational unit vectors `(2a, 1 − |a|²) / (1 + |a|²)` for `a ∈ Q^{n-1}` with
/// coordinates `p/q`, `|p| ≤ height`, `1 ≤ q ≤ height`, together with the
/// south pole, closed under signed coordinate permutations. Sorted and
/// duplicate-free; monotone in `height`.
pub fn rational_sphere_points(n: usize, height: u64) -> Result<Vec<Vec<Rational>>> {
    Ok(orbit_representatives(n, height)?
        .iter()
        .flat_map(|r| signed_permutations(r))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect())
}

fn height_values(height: u64) -> Vec<Rational> {
    let h = height as i64;
    let mut set = BTreeSet::new();
    for q in 1..=h {
        for p in -h..=h {
            set.insert(Rational::new(BigInt::from(p), BigInt::from(q)));
        }
    }
    set.into_iter().collect()
}

/// Canonical forms (absolute values sorted descending) of the orbits.
fn orbit_representatives(n: usize, height: u64) -> Result<BTreeSet<Vec<Rational>>> {
    if n == 0 || height == 0 {
        return Err(Error::InvalidParameter("rational points need n ≥ 1 and height ≥ 1".into()));
    }
    let mut reps = BTreeSet::new();
    if n == 1 {
        reps.insert(vec![Rational::one()]);
        return Ok(reps);
    }
    let values = height_values(height);
    // coordinates of `a` only matter up to sign and order
    let nonneg: Vec<Rational> = values.into_iter().filter(|v| !v.is_negative()).collect();
    let base = nonneg.len().checked_pow((n - 1) as u32).unwrap_or(usize::MAX);
    if base > MAX_BASE_POINTS {
        return Err(Error::InvalidParameter(format!(
            "height {height} in dimension {n} gives too many candidate points"
        )));
    }
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let mut idx = vec![0usize; n - 1];
    loop {
        if idx.windows(2).all(|w| w[0] >= w[1]) {
            let a: Vec<&Rational> = idx.iter().map(|&i| &nonneg[i]).collect();
            let sq: Rational = a.iter().map(|x| *x * *x).sum();
            let den = &one + &sq;
            let mut x: Vec<Rational> = a.iter().map(|v| &two * *v / &den).collect();
            x.push((&one - &sq) / &den);
            reps.insert(canonical(&x));
        }
        let mut k = 0;
        loop {
            if k == n - 1 {
                let mut south = vec![Rational::zero(); n];
                south[n - 1] = -Rational::one();
                reps.insert(canonical(&south));
                return Ok(reps);
            }
            idx[k] += 1;
            if idx[k] < nonneg.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn canonical(x: &[Rational]) -> Vec<Rational> {
    let mut v: Vec<Rational> = x.iter().map(Signed::abs).collect();
    v.sort_by(|a, b| b.cmp(a));
    v
}

/// All vectors obtained from `x` by permuting coordinates and flipping signs.
fn signed_permutations(x: &[Rational]) -> BTreeSet<Vec<Rational>> {
    let mut out = BTreeSet::new();
    let mut perm: Vec<Rational> = x.to_vec();
    perm.sort();
    loop {
        let nz: Vec<usize> = (0..perm.len()).filter(|&i| !perm[i].is_zero()).collect();
        for mask in 0u64..(1u64 << nz.len()) {
            let mut v = perm.clone();
            for (b, &i) in nz.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    v[i] = -v[i].clone();
                }
            }
            out.insert(v);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertOptions {
    pub height_start: u64,
    pub height_max: u64,
}

impl Default for HilbertOptions {
    fn default() -> Self {
        Self { height_start: 1, height_max: 8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HilbertDesign {
    pub design: RationalDesign,
    /// Height at which the moment LP became feasible.
    pub height: u64,
    pub candidate_points: usize,
}

/// Builds an exact rational degree-4 design on `S^{n-1}`.
///
/// Heights are tried from `height_start`, doubling up to `height_max`. The
/// returned multiset has integer multiplicities `P_i` summing to the common
/// denominator `Q` of the LP weights.
pub fn hilbert_rational_design(n: usize, opts: &HilbertOptions) -> Result<HilbertDesign> {
    if n == 0 {
        return Err(Error::InvalidParameter("sphere dimension must be ≥ 1".into()));
    }
    if opts.height_start == 0 || opts.height_start > opts.height_max {
        return Err(Error::InvalidParameter(format!(
            "height range {}..={} is empty",
            opts.height_start, opts.height_max
        )));
    }
    let iso = isotropic_moment_tensor(n)?;
    let alphas = multi_indices(n, 4);
    let mut b = iso.values.clone();
    b.push(Rational::one());

    let mut height = opts.height_start;
    loop {
        let orbits: Vec<BTreeSet<Vec<Rational>>> = orbit_representatives(n, height)?
            .iter()
            .map(|r| signed_permutations(r))
            .collect();
        let mut a: Vec<Vec<Rational>> = alphas
            .iter()
            .map(|al| {
                orbits
                    .iter()
                    .map(|orbit| {
                        let s: Rational = orbit.iter().map(|p| monomial_exact(p, al)).sum();
                        s / Rational::from_integer(BigInt::from(orbit.len()))
                    })
                    .collect()
            })
            .collect();
        a.push(vec![Rational::one(); orbits.len()]);

        match exact_lp_feasible(&a, &b) {
            Ok(p) => {
                let candidate_points = orbits.iter().map(BTreeSet::len).sum();
                let design = clear_denominators(n, &orbits, &p)?;
                return Ok(HilbertDesign { design, height, candidate_points });
            }
            Err(Error::Infeasible) if height >= opts.height_max => {
                return Err(Error::HeightExhausted { height, residual: relaxed_residual(&a, &b) });
            }
            Err(Error::Infeasible) => {}
            Err(e) => return Err(e),
        }
        height = (height * 2).min(opts.height_max);
    }
}

/// Spreads each orbit weight evenly over its points and scales all weights
/// by the least common denominator.
fn clear_denominators(
    n: usize,
    orbits: &[BTreeSet<Vec<Rational>>],
    orbit_weights: &[Rational],
) -> Result<RationalDesign> {
    let mut weights: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for (orbit, w) in orbits.iter().zip(orbit_weights) {
        if w.is_zero() {
            continue;
        }
        let each = w / Rational::from_integer(BigInt::from(orbit.len()));
        for p in orbit {
            *weights.entry(p.clone()).or_insert_with(Rational::zero) += &each;
        }
    }
    let q = weights.values().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let mut points = Vec::with_capacity(weights.len());
    let mut mult = Vec::with_capacity(weights.len());
    for (p, w) in weights {
        let scaled = w * Rational::from_integer(q.clone());
        debug_assert!(scaled.is_integer());
        let count = scaled.to_integer().to_biguint().ok_or(Error::Infeasible)?;
        points.push(p);
        mult.push(count);
    }
    debug_assert_eq!(BigInt::from(mult.iter().sum::<BigUint>()), q);
    RationalDesign::new(n, points, mult)
}

/// `min ‖Ap − b‖` over `p ≥ 0` in floating point, by projected gradient.
fn relaxed_residual(a: &[Vec<Rational>], b: &[Rational]) -> f64 {
    let m = a.len();
    let k = a[0].len();
    let am = DMatrix::from_fn(m, k, |i, j| to_f64(&a[i][j]));
    let bv = DVector::from_iterator(m, b.iter().map(to_f64));
    let lip = (am.transpose() * &am).symmetric_eigen().eigenvalues.max().max(1e-300);
    let mut p = DVector::from_element(k, 1.0 / k as f64);
    for _ in 0..20_000 {
        let grad = am.transpose() * (&am * &p - &bv);
        p -= grad / lip;
        p.apply(|x| *x = x.max(0.0));
    }
    (&am * &p - &bv).norm()
}
