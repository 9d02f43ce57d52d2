//! The operator algebra K[Dx, Dy1..Dyn] with K = Q(x, y1..yn).
//!
//! Operators are kept in the normal form `sum a_m(x, y) * D^m`: coefficients
//! on the left, derivation monomials on the right. Multiplication moves
//! derivations past coefficients with the Leibniz rule
//! `D^a * b = sum_{c <= a} binom(a, c) * d^(a-c)(b) * D^c`.

mod shear;
mod trunc;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::arith::{grevlex_cmp, var_name, RatFunc, Scalar};
use crate::error::{Error, Result};

pub use shear::{op_shear, shear_images, shear_relations_hold, ShearDirection};
pub use trunc::{monomials_below, TruncSeries};

/// Exponent vector of `Dx^i Dy1^j1 .. Dyn^jn`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerMonomial(Vec<u32>);

impl DerMonomial {
    pub fn one(nvars: usize) -> Self {
        DerMonomial(vec![0; nvars + 1])
    }

    /// The single derivation with index `idx` (0 = Dx).
    pub fn unit(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars + 1];
        e[idx] = 1;
        DerMonomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        DerMonomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len() - 1
    }

    /// Total derivative order.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &DerMonomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &DerMonomial) -> DerMonomial {
        DerMonomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn mul(&self, other: &DerMonomial) -> DerMonomial {
        DerMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &DerMonomial) -> Option<DerMonomial> {
        other
            .divides(self)
            .then(|| DerMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Only the derivation `idx` occurs.
    pub fn is_pure_power_of(&self, idx: usize) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| i == idx || e == 0)
    }

    pub fn permute(&self, perm: &[usize]) -> DerMonomial {
        let mut e = vec![0; self.0.len()];
        for (i, &k) in self.0.iter().enumerate() {
            e[perm[i]] = k;
        }
        DerMonomial(e)
    }
}

impl fmt::Display for DerMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let n = self.nvars();
        let mut first = true;
        for (i, &k) in self.0.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "D{}", var_name(n, i))?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DerMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An element of K[Dx, Dy1..Dyn] in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct OreOperator {
    nvars: usize,
    terms: BTreeMap<DerMonomial, RatFunc>,
}

impl OreOperator {
    pub fn zero(nvars: usize) -> Self {
        OreOperator {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_coeff(RatFunc::one(nvars))
    }

    pub fn from_coeff(c: RatFunc) -> Self {
        Self::term(DerMonomial::one(c.nvars()), c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::from_coeff(RatFunc::from_int(nvars, c))
    }

    /// The coefficient variable `idx` (0 = x) as an operator of order zero.
    pub fn variable(nvars: usize, idx: usize) -> Self {
        Self::from_coeff(RatFunc::var(nvars, idx))
    }

    /// The derivation `idx` (0 = Dx).
    pub fn derivation(nvars: usize, idx: usize) -> Self {
        Self::term(DerMonomial::unit(nvars, idx), RatFunc::one(nvars))
    }

    pub fn monomial(m: DerMonomial) -> Self {
        let n = m.nvars();
        Self::term(m, RatFunc::one(n))
    }

    pub fn term(m: DerMonomial, c: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        let nvars = m.nvars();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        OreOperator { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (DerMonomial, RatFunc)>) -> Self {
        let mut op = Self::zero(nvars);
        for (m, c) in terms {
            op.add_term(m, c);
        }
        op
    }

    /// `sum c_k Dx^k` from the coefficient list `[c_0, c_1, ..]`.
    pub fn from_dx_coeffs(nvars: usize, coeffs: &[RatFunc]) -> Self {
        Self::from_terms(
            nvars,
            coeffs.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; nvars + 1];
                e[0] = k as u32;
                (DerMonomial(e), c.clone())
            }),
        )
    }

    /// Coefficients `[c_0, .., c_d]` if the operator lies in K[Dx].
    pub fn dx_coeffs(&self) -> Option<Vec<RatFunc>> {
        if !self.terms.keys().all(|m| m.is_pure_power_of(0)) {
            return None;
        }
        let d = self.terms.keys().map(|m| m.0[0]).max().unwrap_or(0) as usize;
        let mut out = vec![RatFunc::zero(self.nvars); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            out[m.0[0] as usize] = c.clone();
        }
        Some(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerMonomial, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &DerMonomial) -> RatFunc {
        self.terms.get(m).cloned().unwrap_or_else(|| RatFunc::zero(self.nvars))
    }

    /// Maximal total derivative order; 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(DerMonomial::degree).max().unwrap_or(0)
    }

    /// Order in the single derivation `idx`.
    pub fn order_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    /// The coefficient if the operator has order zero.
    pub fn as_coeff(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero(self.nvars)),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: DerMonomial, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `c * self`; coefficients sit on the left so this is termwise.
    pub fn scale_left(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        OreOperator {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), c * a)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.scale_left(&RatFunc::constant(self.nvars, c.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = op_mul(&acc, self);
        }
        acc
    }

    /// Renames variable `i` and derivation `i` to index `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        OreOperator {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.permute(perm), c.permute_vars(perm)))
                .collect(),
        }
    }

    /// Terms ordered by degree-reverse-lexicographic order of the derivation
    /// monomial, largest first. This is the display order.
    pub fn sorted_terms(&self) -> Vec<(&DerMonomial, &RatFunc)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grevlex_cmp(&b.0 .0, &a.0 .0));
        v
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn sub_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=a).map(move |g| {
                    let mut p = prefix.clone();
                    p.push(g);
                    p
                })
            })
            .collect();
    }
    out
}

/// Memoized mixed partial derivatives of a fixed coefficient.
struct DerivativeCache<'a> {
    base: &'a RatFunc,
    memo: HashMap<Vec<u32>, RatFunc>,
}

impl<'a> DerivativeCache<'a> {
    fn new(base: &'a RatFunc) -> Self {
        DerivativeCache {
            base,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, delta: &[u32]) -> RatFunc {
        let Some(i) = delta.iter().position(|&d| d > 0) else {
            return self.base.clone();
        };
        if let Some(r) = self.memo.get(delta) {
            return r.clone();
        }
        let mut parent = delta.to_vec();
        parent[i] -= 1;
        let r = self.get(&parent).derivative(i);
        self.memo.insert(delta.to_vec(), r.clone());
        r
    }
}

/// Product in K[Dx, Dy] returned in normal form.
pub fn op_mul(a: &OreOperator, b: &OreOperator) -> OreOperator {
    assert_eq!(a.nvars, b.nvars, "operators from different algebras");
    let mut out = OreOperator::zero(a.nvars);
    // accumulate per monomial before canonicalizing sums
    let mut acc: BTreeMap<DerMonomial, Vec<RatFunc>> = BTreeMap::new();
    for (beta, bc) in &b.terms {
        let mut cache = DerivativeCache::new(bc);
        for (alpha, ac) in &a.terms {
            for gamma in sub_indices(&alpha.0) {
                let delta: Vec<u32> = alpha.0.iter().zip(&gamma).map(|(p, q)| p - q).collect();
                let d = cache.get(&delta);
                if d.is_zero() {
                    continue;
                }
                let mut binom = BigInt::from(1);
                for (p, q) in alpha.0.iter().zip(&gamma) {
                    binom *= binomial(*p, *q);
                }
                let coeff = (ac * &d).scale(&Scalar::from_integer(binom));
                let m = DerMonomial(gamma).mul(beta);
                acc.entry(m).or_default().push(coeff);
            }
        }
    }
    for (m, cs) in acc {
        let mut it = cs.into_iter();
        let first = it.next().unwrap();
        let s = it.fold(first, |s, c| &s + &c);
        out.add_term(m, s);
    }
    out
}

/// Applies `op` to a truncated series. See [`TruncSeries`] for the order
/// bookkeeping: the result is guaranteed to order `N - op.order()`.
pub fn op_apply(op: &OreOperator, f: &TruncSeries) -> Result<TruncSeries> {
    assert_eq!(op.nvars, f.nvars(), "operator and series in different variables");
    let target = f.order().saturating_sub(op.order());
    let mut out = TruncSeries::zero(f.nvars(), target);
    for (m, c) in &op.terms {
        let mut g = f.clone();
        for (v, &k) in m.0.iter().enumerate() {
            for _ in 0..k {
                g = g.derivative(v);
            }
        }
        let cs = TruncSeries::from_ratfunc(c, target).map_err(|_| Error::PoleAtOrigin)?;
        out = &out + &(&cs * &g);
    }
    Ok(out.truncate(target))
}

impl fmt::Display for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative_form();
            let c = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                if neg && c.is_polynomial() && c.num().num_terms() > 1 {
                    write!(f, "({c})")?;
                } else {
                    write!(f, "{c}")?;
                }
                continue;
            }
            if !c.is_one() {
                let simple = c.is_polynomial() && c.num().num_terms() == 1;
                if simple {
                    write!(f, "{c}*")?;
                } else {
                    write!(f, "({c})*")?;
                }
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OreOperator({self})")
    }
}

impl Add for &OreOperator {
    type Output = OreOperator;
    fn add(self, rhs: &OreOperator) -> OreOperator {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &OreOperator {
    type Output = OreOperator;
    fn sub(self, rhs: &OreOperator) -> OreOperator {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &OreOperator {
    type Output = OreOperator;
    fn neg(self) -> OreOperator {
        OreOperator {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &OreOperator {
    type Output = OreOperator;
    fn mul(self, rhs: &OreOperator) -> OreOperator {
        op_mul(self, rhs)
    }
}

impl Add for OreOperator {
    type Output = OreOperator;
    fn add(self, rhs: OreOperator) -> OreOperator {
        &self + &rhs
    }
}

impl Sub for OreOperator {
    type Output = OreOperator;
    fn sub(self, rhs: OreOperator) -> OreOperator {
        &self - &rhs
    }
}

impl Mul for OreOperator {
    type Output = OreOperator;
    fn mul(self, rhs: OreOperator) -> OreOperator {
        op_mul(&self, &rhs)
    }
}
