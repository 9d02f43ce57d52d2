//! The linear change of variables y <- y + c*x acting on operators.
//!
//! `Forward` maps x -> x, y_i -> y_i - c_i x, Dx -> Dx + sum c_i Dy_i and
//! fixes every Dy_i. Then `L` annihilates `f(x, y + c x)` exactly when
//! `forward(L)` annihilates `f(x, y)`. `Inverse` is the same map with `-c`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{op_mul, DerMonomial, OreOperator};
use crate::arith::{MultiPoly, RatFunc, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShearDirection {
    Forward,
    Inverse,
}

fn signed(c: &[Scalar], dir: ShearDirection) -> Vec<Scalar> {
    match dir {
        ShearDirection::Forward => c.to_vec(),
        ShearDirection::Inverse => c.iter().map(|v| -v).collect(),
    }
}

/// Polynomial images of x, y1..yn under the coefficient substitution.
fn coefficient_images(nvars: usize, s: &[Scalar]) -> Vec<MultiPoly> {
    let x = MultiPoly::var(nvars, 0);
    let mut images = vec![x.clone()];
    for (i, ci) in s.iter().enumerate() {
        images.push(&MultiPoly::var(nvars, i + 1) - &x.scale(ci));
    }
    images
}

/// `(Dx + sum s_i Dy_i)^k` as a constant-coefficient polynomial in the derivations.
fn linear_form_power(nvars: usize, s: &[Scalar], k: u32) -> BTreeMap<DerMonomial, Scalar> {
    let mut form: BTreeMap<DerMonomial, Scalar> = BTreeMap::new();
    form.insert(DerMonomial::unit(nvars, 0), Scalar::from_integer(1.into()));
    for (i, ci) in s.iter().enumerate() {
        if !ci.is_zero() {
            form.insert(DerMonomial::unit(nvars, i + 1), ci.clone());
        }
    }
    let mut acc: BTreeMap<DerMonomial, Scalar> = BTreeMap::new();
    acc.insert(DerMonomial::one(nvars), Scalar::from_integer(1.into()));
    for _ in 0..k {
        let mut next: BTreeMap<DerMonomial, Scalar> = BTreeMap::new();
        for (m, a) in &acc {
            for (f, b) in &form {
                *next.entry(m.mul(f)).or_insert_with(Scalar::zero) += a * b;
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    acc
}

pub fn op_shear(op: &OreOperator, c: &[Scalar], dir: ShearDirection) -> OreOperator {
    let n = op.nvars();
    assert_eq!(c.len(), n, "shear vector must have one entry per y-variable");
    if c.iter().all(Zero::is_zero) {
        return op.clone();
    }
    let s = signed(c, dir);
    let images = coefficient_images(n, &s);
    let mut powers: BTreeMap<u32, BTreeMap<DerMonomial, Scalar>> = BTreeMap::new();
    let mut out = OreOperator::zero(n);
    for (m, a) in op.terms() {
        let a = a.substitute(&images).expect("substitution keeps denominators nonzero");
        let k = m.exponents()[0];
        let dx_part = powers.entry(k).or_insert_with(|| linear_form_power(n, &s, k));
        let mut rest = m.exponents().to_vec();
        rest[0] = 0;
        let rest = DerMonomial::from_exponents(rest);
        for (dm, dc) in dx_part.iter() {
            out.add_term(dm.mul(&rest), a.scale(dc));
        }
    }
    out
}

/// Images of `x, y1..yn, Dx, Dy1..Dyn` under the shear, in that order.
pub fn shear_images(nvars: usize, c: &[Scalar], dir: ShearDirection) -> Vec<OreOperator> {
    let s = signed(c, dir);
    let mut out: Vec<OreOperator> = coefficient_images(nvars, &s)
        .into_iter()
        .map(|p| OreOperator::from_coeff(RatFunc::from_poly(p)))
        .collect();
    let mut dx = OreOperator::derivation(nvars, 0);
    for (i, ci) in s.iter().enumerate() {
        dx = &dx + &OreOperator::derivation(nvars, i + 1).scale(ci);
    }
    out.push(dx);
    for i in 1..=nvars {
        out.push(OreOperator::derivation(nvars, i));
    }
    out
}

/// Checks that the generator images satisfy the defining relations of the
/// algebra: `[D_u, v] = delta_uv`, and both variables and derivations
/// commute among themselves.
pub fn shear_relations_hold(nvars: usize, c: &[Scalar], dir: ShearDirection) -> bool {
    let im = shear_images(nvars, c, dir);
    let (vars, ders) = im.split_at(nvars + 1);
    let comm = |a: &OreOperator, b: &OreOperator| &op_mul(a, b) - &op_mul(b, a);
    for (u, du) in ders.iter().enumerate() {
        for (v, xv) in vars.iter().enumerate() {
            let expected = OreOperator::from_int(nvars, i64::from(u == v));
            if comm(du, xv) != expected {
                return false;
            }
        }
        for dv in ders {
            if !comm(du, dv).is_zero() {
                return false;
            }
        }
    }
    for a in vars {
        for b in vars {
            if !comm(a, b).is_zero() {
                return false;
            }
        }
    }
    true
}
