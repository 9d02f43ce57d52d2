//! Sparse multivariate polynomials over Q in the variables x, y1..yn.
//!
//! Exponent vectors have length `nvars + 1`; slot 0 is `x`, slot `i` is `y_i`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{grevlex_cmp, var_name, Scalar};

/// Exponent vector `(e_x, e_y1, .., e_yn)`.
pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    // keyed in lex order (x first); never stores a zero coefficient
    terms: BTreeMap<Exponents, Scalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(nvars, vec![0; nvars + 1], c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Scalar::from_integer(c.into()))
    }

    /// The variable with index `idx` (0 is `x`, `i` is `y_i`).
    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx <= nvars, "variable index {idx} out of range");
        let mut e = vec![0; nvars + 1];
        e[idx] = 1;
        Self::monomial(nvars, e, Scalar::one())
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: Scalar) -> Self {
        debug_assert_eq!(exps.len(), nvars + 1);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Scalar)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.total_degree() == 0)
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    /// Leading term under graded reverse lexicographic order with x > y1 > .. > yn.
    pub fn leading_term(&self) -> Option<(&Exponents, &Scalar)> {
        self.terms.iter().max_by(|a, b| grevlex_cmp(a.0, b.0))
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, exps: Exponents, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Divides by the grevlex leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// `self * c * x^shift`.
    pub fn mul_term(&self, shift: &[u32], c: &Scalar) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            let ne: Exponents = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            out.terms.insert(ne, a * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[v] -= 1;
            out.add_term(ne, c * Scalar::from_integer(e[v].into()));
        }
        out
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars + 1, "evaluation point has wrong arity");
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, p) in e.iter().zip(point) {
                if *k > 0 {
                    t *= num_traits::pow(p.clone(), *k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Value at the origin: the constant coefficient.
    pub fn value_at_origin(&self) -> Scalar {
        self.coeff(&vec![0; self.nvars + 1])
    }

    /// Substitutes variable `i` by `images[i]` for every variable.
    pub fn substitute(&self, images: &[MultiPoly]) -> Self {
        assert_eq!(images.len(), self.nvars + 1);
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![Self::one(p.nvars)]).collect();
        let target = images.first().map(|p| p.nvars).unwrap_or(self.nvars);
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[v].len() <= k as usize {
                    let next = powers[v].last().unwrap() * &images[v];
                    powers[v].push(next);
                }
                t = &t * &powers[v][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Renames variable `i` to `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; e.len()];
            for (i, &k) in e.iter().enumerate() {
                ne[perm[i]] = k;
            }
            out.terms.insert(ne, c.clone());
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<Self> {
        assert!(!d.is_zero(), "exact division by zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lde, ldc) = d.terms.last_key_value().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((e, c)) = rem.terms.last_key_value() {
            if e.iter().zip(&lde).any(|(a, b)| a < b) {
                return None;
            }
            let shift: Exponents = e.iter().zip(&lde).map(|(a, b)| a - b).collect();
            let qc = c / &ldc;
            for (de, dc) in &d.terms {
                let ne: Exponents = de.iter().zip(&shift).map(|(a, b)| a + b).collect();
                rem.add_term(ne, -(dc * &qc));
            }
            quot.add_term(shift, qc);
        }
        Some(quot)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in variable `v`.
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[v] = 0;
            out.entry(e[v])
                .or_insert_with(|| Self::zero(self.nvars))
                .terms
                .insert(ne, c.clone());
        }
        out
    }

    /// Coefficients of `self` with respect to the variables in `vars`, keyed by
    /// the exponents of those variables.
    pub(crate) fn coeffs_in_vars(&self, vars: &[usize]) -> BTreeMap<Exponents, MultiPoly> {
        let mut out: BTreeMap<Exponents, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key: Exponents = vars.iter().map(|&v| e[v]).collect();
            let mut ne = e.clone();
            for &v in vars {
                ne[v] = 0;
            }
            out.entry(key)
                .or_insert_with(|| Self::zero(self.nvars))
                .terms
                .insert(ne, c.clone());
        }
        out
    }

    /// Coefficient of the highest power of `v`.
    pub fn leading_coeff_in(&self, v: usize) -> MultiPoly {
        let d = self.degree_in(v);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == d {
                let mut ne = e.clone();
                ne[v] = 0;
                out.terms.insert(ne, c.clone());
            }
        }
        out
    }

    /// Minimum exponent vector over all terms (the monomial content).
    pub(crate) fn min_exponents(&self) -> Exponents {
        let mut it = self.terms.keys();
        let mut m = match it.next() {
            Some(e) => e.clone(),
            None => return vec![0; self.nvars + 1],
        };
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    /// Terms sorted by grevlex, largest first.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        v
    }

    /// True when the grevlex leading coefficient is negative.
    pub fn leading_is_negative(&self) -> bool {
        self.leading_term().is_some_and(|(_, c)| c.is_negative())
    }

    pub(crate) fn fmt_monomial(nvars: usize, e: &[u32], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", var_name(nvars, v))?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = e.iter().all(|&k| k == 0);
            if is_const {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                Self::fmt_monomial(self.nvars, e, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c.clone());
        }
        big
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MultiPoly {
        MultiPoly::var(1, 0)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(1, 1)
    }

    #[test]
    fn exact_division() {
        let p = &(&x() * &x()) - &MultiPoly::one(1);
        let d = &x() - &MultiPoly::one(1);
        assert_eq!(p.div_exact(&d).unwrap(), &x() + &MultiPoly::one(1));
        assert!(p.div_exact(&y()).is_none());
    }

    #[test]
    fn display_orders_by_grevlex() {
        let p = &(&(&x() * &y()).scale(&Scalar::from_integer(3.into())) - &x()) + &MultiPoly::from_int(1, 2);
        assert_eq!(p.to_string(), "3*x*y - x + 2");
        assert_eq!((-&x()).to_string(), "-x");
    }

    #[test]
    fn substitution_shears_y() {
        // y -> y - 2x applied to x*y
        let p = &x() * &y();
        let images = [x(), &y() - &x().scale(&Scalar::from_integer(2.into()))];
        let q = p.substitute(&images);
        assert_eq!(
            q,
            &(&x() * &y()) - &(&x() * &x()).scale(&Scalar::from_integer(2.into()))
        );
    }

    #[test]
    fn evaluate_and_derivative() {
        let p = &(&x() * &x()) * &y();
        let pt = [Scalar::from_integer(2.into()), Scalar::from_integer(3.into())];
        assert_eq!(p.evaluate(&pt), Scalar::from_integer(12.into()));
        assert_eq!(p.derivative(0), (&x() * &y()).scale(&Scalar::from_integer(2.into())));
    }
}
