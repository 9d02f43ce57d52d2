use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::{grevlex_cmp, multi_factorial, Exponents, MultiPoly, RatFunc, Scalar};
use crate::error::{Error, Result};

/// A power series in x, y1..yn over Q, known exactly for all monomials of
/// total degree `< order`.
///
/// Every operation records the order to which its result is trustworthy:
/// sums and products take the minimum of the inputs, differentiation loses
/// one degree. Comparisons use the smaller of the two recorded orders.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    nvars: usize,
    order: u32,
    coeffs: BTreeMap<Exponents, Scalar>,
}

/// All exponent vectors in `nvars + 1` variables with total degree `< bound`,
/// sorted by total degree and then grevlex.
pub fn monomials_below(nvars: usize, bound: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars + 1];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[pos] = k;
            rec(pos + 1, left - k, cur, out);
        }
        cur[pos] = 0;
    }
    if bound > 0 {
        rec(0, bound - 1, &mut cur, &mut out);
    }
    out.sort_by(|a, b| grevlex_cmp(a, b));
    out
}

impl TruncSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        TruncSeries {
            nvars,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::from_poly(&MultiPoly::one(nvars), order)
    }

    pub fn from_coeffs(nvars: usize, order: u32, coeffs: impl IntoIterator<Item = (Exponents, Scalar)>) -> Self {
        let mut s = Self::zero(nvars, order);
        for (e, c) in coeffs {
            s.add_coeff(e, c);
        }
        s
    }

    pub fn from_poly(p: &MultiPoly, order: u32) -> Self {
        Self::from_coeffs(p.nvars(), order, p.terms().map(|(e, c)| (e.clone(), c.clone())))
    }

    /// Taylor expansion at the origin. Fails with `PoleAtPoint` when the
    /// denominator vanishes at 0.
    pub fn from_ratfunc(f: &RatFunc, order: u32) -> Result<Self> {
        let num = Self::from_poly(f.num(), order);
        if f.is_polynomial() {
            return Ok(num);
        }
        let den = Self::from_poly(f.den(), order);
        Ok(&num * &den.inverse()?)
    }

    /// `exp(a_0 x + a_1 y1 + .. + a_n yn)`.
    pub fn exp_linear(nvars: usize, order: u32, a: &[Scalar]) -> Self {
        assert_eq!(a.len(), nvars + 1);
        let coeffs = monomials_below(nvars, order).into_iter().map(|e| {
            let mut c = Scalar::one();
            for (k, ai) in e.iter().zip(a) {
                c *= num_traits::pow(ai.clone(), *k as usize);
            }
            let c = c / multi_factorial(&e);
            (e, c)
        });
        Self::from_coeffs(nvars, order, coeffs)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of trusted total degrees.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.coeffs.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_coeff(&mut self, e: Exponents, c: Scalar) {
        if c.is_zero() || e.iter().sum::<u32>() >= self.order {
            return;
        }
        match self.coeffs.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        TruncSeries {
            nvars: self.nvars,
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() < order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        TruncSeries {
            nvars: self.nvars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Partial derivative in variable `v`; the order drops by one.
    pub fn derivative(&self, v: usize) -> Self {
        let order = self.order.saturating_sub(1);
        let mut out = Self::zero(self.nvars, order);
        for (e, c) in &self.coeffs {
            if e[v] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[v] -= 1;
            out.add_coeff(ne, c * Scalar::from_integer(e[v].into()));
        }
        out
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let zero = vec![0; self.nvars + 1];
        let c0 = self.coeff(&zero);
        if c0.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        let inv0 = c0.recip();
        let mut out: BTreeMap<Exponents, Scalar> = BTreeMap::new();
        for e in monomials_below(self.nvars, self.order) {
            if e == zero {
                out.insert(e, inv0.clone());
                continue;
            }
            let mut acc = Scalar::zero();
            for (se, sc) in &self.coeffs {
                if se == &zero || se.iter().zip(&e).any(|(a, b)| a > b) {
                    continue;
                }
                let rest: Exponents = e.iter().zip(se).map(|(a, b)| a - b).collect();
                if let Some(g) = out.get(&rest) {
                    acc += sc * g;
                }
            }
            if !acc.is_zero() {
                out.insert(e, -(acc * &inv0));
            }
        }
        Ok(TruncSeries {
            nvars: self.nvars,
            order: self.order,
            coeffs: out,
        })
    }

    /// Equality on the common trusted range.
    pub fn agrees_with(&self, other: &TruncSeries) -> bool {
        let n = self.order.min(other.order);
        self.truncate(n).coeffs == other.truncate(n).coeffs
    }

    /// The known part as a polynomial.
    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(self.nvars, self.coeffs.iter().map(|(e, c)| (e.clone(), c.clone())))
    }

    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let p = self.to_poly().permute_vars(perm);
        Self::from_poly(&p, self.order)
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order.min(rhs.order);
        let mut out = self.truncate(order);
        for (e, c) in &rhs.coeffs {
            out.add_coeff(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        self + &(-rhs)
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries {
            nvars: self.nvars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order.min(rhs.order);
        let mut acc: BTreeMap<Exponents, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            let da: u32 = ea.iter().sum();
            if da >= order {
                continue;
            }
            for (eb, cb) in &rhs.coeffs {
                if da + eb.iter().sum::<u32>() >= order {
                    continue;
                }
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Scalar::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TruncSeries {
            nvars: self.nvars,
            order,
            coeffs: acc,
        }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_poly();
        if p.is_zero() {
            write!(f, "O(deg {})", self.order)
        } else {
            write!(f, "{p} + O(deg {})", self.order)
        }
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries({self})")
    }
}
