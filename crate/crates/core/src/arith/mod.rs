//! Exact arithmetic over the constant field Q and the coefficient field
//! K = Q(x, y1..yn).
//!
//! Variables are indexed `0 = x`, `i = y_i` throughout the crate. The same
//! index also names the derivation paired with that variable (`Dx`, `Dy_i`).

mod gcd;
mod poly;
mod ratfunc;

use std::cmp::Ordering;

pub use gcd::gcd;
pub use poly::{Exponents, MultiPoly};
pub use ratfunc::RatFunc;

use crate::error::Result;

/// Elements of the constant field.
pub type Scalar = num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ratfunc_arith(a: &RatFunc, b: &RatFunc, op: ArithOp) -> Result<RatFunc> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.div(b)?,
    })
}

pub fn partial_derivative(f: &RatFunc, var: usize) -> RatFunc {
    f.derivative(var)
}

pub fn evaluate(f: &RatFunc, point: &[Scalar]) -> Result<Scalar> {
    f.evaluate(point)
}

/// Graded reverse lexicographic comparison with variable 0 largest.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (p, q) in a.iter().zip(b).rev() {
            if p != q {
                return q.cmp(p);
            }
        }
        Ordering::Equal
    })
}

/// Printed name of variable `idx` when there are `nvars` y-variables.
pub fn var_name(nvars: usize, idx: usize) -> String {
    match (idx, nvars) {
        (0, _) => "x".to_string(),
        (1, 1) => "y".to_string(),
        (i, _) => format!("y{i}"),
    }
}

pub fn scalar(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}

/// Product of factorials of the entries of `e`.
pub fn multi_factorial(e: &[u32]) -> Scalar {
    let mut acc = num_bigint::BigInt::from(1);
    for &k in e {
        for j in 2..=k {
            acc *= j;
        }
    }
    Scalar::from_integer(acc)
}
