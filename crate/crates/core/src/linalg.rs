//! Dense Gaussian elimination over an exact field.

use num_traits::{One, Zero};

use crate::arith::{RatFunc, Scalar};

pub trait Field: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `self / other` for nonzero `other`.
    fn div(&self, other: &Self) -> Self;
    /// Size measure; smaller entries are preferred as pivots.
    fn weight(&self) -> usize;
}

impl Field for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn one_like(&self) -> Self {
        Scalar::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Field for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.nvars())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        RatFunc::div(self, other).expect("nonzero divisor")
    }
    fn weight(&self) -> usize {
        RatFunc::weight(self)
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

/// Reduced row echelon form in place. Returns the pivot columns. Among the
/// candidate rows for a pivot, the entry of smallest weight wins, ties going
/// to the topmost row.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(best) = (row..rows)
            .filter(|&i| !m[i][col].is_zero_elem())
            .min_by_key(|&i| m[i][col].weight())
        else {
            continue;
        };
        m.swap(row, best);
        let p = m[row][col].clone();
        for x in &mut m[row][col..cols] {
            *x = x.div(&p);
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row || r[col].is_zero_elem() {
                continue;
            }
            let f = r[col].clone();
            for (x, pj) in r[col..cols].iter_mut().zip(&pivot_row[col..cols]) {
                if !pj.is_zero_elem() {
                    *x = x.sub(&f.mul(pj));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per free column.
pub fn kernel<F: Field>(m: &Matrix<F>, cols: usize, sample: &F) -> Vec<Vec<F>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let zero = sample.zero_like();
    let one = sample.one_like();
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = one.clone();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = zero.sub(&r[i][free]);
        }
        out.push(v);
    }
    out
}

/// Solves `a x = b`. Returns `None` if the system is inconsistent; free
/// unknowns are set to zero.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F], sample: &F) -> Option<Vec<F>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut row = row.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![sample.zero_like(); cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = m[i][cols].clone();
    }
    Some(x)
}

/// Matrix whose columns are the given vectors.
pub fn from_columns<F: Field>(columns: &[Vec<F>]) -> Matrix<F> {
    let rows = columns.first().map_or(0, Vec::len);
    (0..rows)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect()
}
