//! Phase-1 simplex for `A p = b, p ≥ 0`, generic over the scalar field.
//!
//! Pivoting follows Bland's rule, so the method terminates in exact
//! arithmetic. The `f64` instance compares against a fixed tolerance and is
//! meant for small systems with irrational data.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

pub trait LpScalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn is_positive_lp(&self) -> bool;
    fn is_negative_lp(&self) -> bool;
    fn is_zero_lp(&self) -> bool {
        !self.is_positive_lp() && !self.is_negative_lp()
    }
}

impl LpScalar for Rational {
    fn is_positive_lp(&self) -> bool {
        self.is_positive()
    }
    fn is_negative_lp(&self) -> bool {
        self.is_negative()
    }
}

const F64_TOL: f64 = 1e-10;

impl LpScalar for f64 {
    fn is_positive_lp(&self) -> bool {
        *self > F64_TOL
    }
    fn is_negative_lp(&self) -> bool {
        *self < -F64_TOL
    }
}

/// Finds `p ≥ 0` with `A p = b`, or reports [`Error::Infeasible`].
///
/// `a` is given row-major (`a[i][j]`, `m` rows of `k` entries).
pub fn lp_feasible<T: LpScalar>(a: &[Vec<T>], b: &[T]) -> Result<Vec<T>> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: b.len() });
    }
    let k = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidParameter("LP matrix rows have unequal lengths".into()));
    }
    let width = k + m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative_lp();
        let mut row = Vec::with_capacity(width);
        for v in &a[i] {
            row.push(if flip { -v.clone() } else { v.clone() });
        }
        for j in 0..m {
            row.push(if i == j { T::one() } else { T::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (k..k + m).collect();
    // reduced costs of the phase-1 objective Σ artificials
    let mut z: Vec<T> = vec![T::zero(); width];
    for row in &t {
        for j in 0..k {
            z[j] = z[j].clone() - row[j].clone();
        }
        z[rhs] = z[rhs].clone() - row[rhs].clone();
    }

    while let Some(enter) = (0..k).find(|&j| z[j].is_negative_lp()) {
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive_lp() {
                continue;
            }
            let ratio = t[i][rhs].clone() / t[i][enter].clone();
            let replace = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if replace {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            // cannot happen for a phase-1 objective bounded below by zero
            return Err(Error::NoConvergence { iterations: 0 });
        };
        pivot(&mut t, &mut z, r, enter);
        basis[r] = enter;
    }

    if (-z[rhs].clone()).is_positive_lp() {
        return Err(Error::Infeasible);
    }
    let mut p = vec![T::zero(); k];
    for (i, &j) in basis.iter().enumerate() {
        if j < k {
            p[j] = t[i][rhs].clone();
        }
    }
    Ok(p)
}

fn pivot<T: LpScalar>(t: &mut [Vec<T>], z: &mut [T], r: usize, c: usize) {
    let piv = t[r][c].clone();
    for v in t[r].iter_mut() {
        if !v.is_zero() {
            *v = v.clone() / piv.clone();
        }
    }
    let prow = t[r].clone();
    let eliminate = |row: &mut [T]| {
        let f = row[c].clone();
        if f.is_zero() {
            return;
        }
        for (v, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v = v.clone() - f.clone() * p.clone();
            }
        }
    };
    for (i, row) in t.iter_mut().enumerate() {
        if i != r {
            eliminate(row);
        }
    }
    eliminate(z);
}

/// Exact rational instance of [`lp_feasible`].
pub fn exact_lp_feasible(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    lp_feasible(a, b)
}
