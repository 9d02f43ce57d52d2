//! Left Gröbner bases in K[Dx, Dy1..Dyn].
//!
//! Reduction multiplies basis elements on the left by terms `c * D^m`.
//! Because coefficients do not commute with derivations, no S-pair is ever
//! discarded by the coprime-leading-monomial criterion.

use std::cmp::Ordering;
use std::fmt;

use crate::arith::RatFunc;
use crate::error::{Error, Result};
use crate::ore::{op_mul, DerMonomial, OreOperator};

pub const DEFAULT_DEGREE_CAP: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    DegRevLex,
    Lex,
    /// Block order: monomials are compared first on the eliminated block,
    /// then on the remaining derivations, each part by degrevlex.
    ElimBlock,
}

/// A monomial order on derivation monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOrder {
    kind: OrderKind,
    /// Derivation indices from largest to smallest.
    priority: Vec<usize>,
    /// Derivation indices of the eliminated block (only for `ElimBlock`).
    block: Vec<usize>,
}

impl TermOrder {
    pub fn degrevlex(nvars: usize) -> Self {
        TermOrder {
            kind: OrderKind::DegRevLex,
            priority: (0..=nvars).collect(),
            block: Vec::new(),
        }
    }

    pub fn lex(nvars: usize) -> Self {
        TermOrder {
            kind: OrderKind::Lex,
            priority: (0..=nvars).collect(),
            block: Vec::new(),
        }
    }

    /// Block order in which every monomial involving `block` is larger than
    /// every monomial free of it.
    pub fn elimination(nvars: usize, block: Vec<usize>) -> Self {
        TermOrder {
            kind: OrderKind::ElimBlock,
            priority: (0..=nvars).collect(),
            block,
        }
    }

    /// Eliminates Dy1..Dyn, leaving K[Dx] as the smallest block.
    pub fn eliminate_dy(nvars: usize) -> Self {
        Self::elimination(nvars, (1..=nvars).collect())
    }

    /// Replaces the variable precedence (largest first).
    pub fn with_priority(mut self, priority: Vec<usize>) -> Self {
        assert_eq!(priority.len(), self.priority.len());
        self.priority = priority;
        self
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.priority.len() - 1
    }

    pub fn compare(&self, a: &DerMonomial, b: &DerMonomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match self.kind {
            OrderKind::DegRevLex => grevlex_on(a, b, &self.priority),
            OrderKind::Lex => {
                for &i in &self.priority {
                    if a[i] != b[i] {
                        return a[i].cmp(&b[i]);
                    }
                }
                Ordering::Equal
            }
            OrderKind::ElimBlock => {
                let inner: Vec<usize> = self
                    .priority
                    .iter()
                    .copied()
                    .filter(|i| self.block.contains(i))
                    .collect();
                let outer: Vec<usize> = self
                    .priority
                    .iter()
                    .copied()
                    .filter(|i| !self.block.contains(i))
                    .collect();
                grevlex_on(a, b, &inner).then_with(|| grevlex_on(a, b, &outer))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            OrderKind::DegRevLex => "degrevlex",
            OrderKind::Lex => "lex",
            OrderKind::ElimBlock => "elim",
        }
    }
}

fn grevlex_on(a: &[u32], b: &[u32], vars: &[usize]) -> Ordering {
    let da: u32 = vars.iter().map(|&i| a[i]).sum();
    let db: u32 = vars.iter().map(|&i| b[i]).sum();
    da.cmp(&db).then_with(|| {
        for &i in vars.iter().rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

pub fn leading_term<'a>(f: &'a OreOperator, order: &TermOrder) -> Option<(&'a DerMonomial, &'a RatFunc)> {
    f.terms().max_by(|a, b| order.compare(a.0, b.0))
}

pub fn leading_monomial(f: &OreOperator, order: &TermOrder) -> Option<DerMonomial> {
    leading_term(f, order).map(|(m, _)| m.clone())
}

/// Scales `f` on the left so that its leading coefficient is 1.
pub fn make_monic(f: &OreOperator, order: &TermOrder) -> OreOperator {
    match leading_term(f, order) {
        Some((_, c)) if !c.is_one() => f.scale_left(&c.inv().expect("leading coefficient is nonzero")),
        _ => f.clone(),
    }
}

/// Normal form of `f` modulo the left ideal generated by `gens`: no term of
/// the result is divisible by a leading monomial of a generator.
pub fn left_reduce(f: &OreOperator, gens: &[OreOperator], order: &TermOrder) -> OreOperator {
    let leads: Vec<(DerMonomial, RatFunc, &OreOperator)> = gens
        .iter()
        .filter_map(|g| leading_term(g, order).map(|(m, c)| (m.clone(), c.clone(), g)))
        .collect();
    let mut f = f.clone();
    let mut rem = OreOperator::zero(f.nvars());
    while let Some((m, c)) = leading_term(&f, order).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().find(|(lm, _, _)| lm.divides(&m)) {
            Some((lm, lc, g)) => {
                let shift = m.div(lm).expect("divisible");
                let multiple = if shift.is_one() {
                    (*g).clone()
                } else {
                    op_mul(&OreOperator::monomial(shift), g)
                };
                let factor = c.div(lc).expect("leading coefficient is nonzero");
                f = &f - &multiple.scale_left(&factor);
            }
            None => {
                let t = OreOperator::term(m, c);
                f = &f - &t;
                rem = &rem + &t;
            }
        }
    }
    rem
}

/// Left S-polynomial `D^(l - lm f)/lc f * f - D^(l - lm g)/lc g * g`, with `l`
/// the lcm of the leading monomials.
pub fn s_polynomial(f: &OreOperator, g: &OreOperator, order: &TermOrder) -> OreOperator {
    let (mf, cf) = leading_term(f, order).expect("nonzero operator");
    let (mg, cg) = leading_term(g, order).expect("nonzero operator");
    let l = mf.lcm(mg);
    let a = op_mul(&OreOperator::monomial(l.div(mf).unwrap()), f);
    let b = op_mul(&OreOperator::monomial(l.div(mg).unwrap()), g);
    &a.scale_left(&cf.inv().unwrap()) - &b.scale_left(&cg.inv().unwrap())
}

/// The standard monomials of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Staircase {
    Finite(Vec<DerMonomial>),
    Infinite,
}

/// A reduced left Gröbner basis: monic generators, sorted by leading
/// monomial, no term of any generator divisible by another's leading
/// monomial.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    nvars: usize,
    order: TermOrder,
    gens: Vec<OreOperator>,
    staircase: Staircase,
}

impl GroebnerBasis {
    fn from_reduced(nvars: usize, order: TermOrder, gens: Vec<OreOperator>) -> Self {
        let staircase = compute_staircase(nvars, &gens, &order);
        GroebnerBasis {
            nvars,
            order,
            gens,
            staircase,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn gens(&self) -> &[OreOperator] {
        &self.gens
    }

    pub fn staircase(&self) -> &Staircase {
        &self.staircase
    }

    pub fn leading_monomials(&self) -> Vec<DerMonomial> {
        self.gens
            .iter()
            .filter_map(|g| leading_monomial(g, &self.order))
            .collect()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.as_coeff().is_some_and(|c| !c.is_zero()))
    }

    pub fn reduce(&self, f: &OreOperator) -> OreOperator {
        left_reduce(f, &self.gens, &self.order)
    }

    pub fn contains(&self, f: &OreOperator) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn is_zero_dimensional(&self) -> bool {
        matches!(self.staircase, Staircase::Finite(_))
    }

    /// `dim_K K[Dx, Dy]/I`, when finite.
    pub fn dimension(&self) -> Option<usize> {
        match &self.staircase {
            Staircase::Finite(b) => Some(b.len()),
            Staircase::Infinite => None,
        }
    }

    pub fn quotient_basis(&self) -> Result<&[DerMonomial]> {
        match &self.staircase {
            Staircase::Finite(b) => Ok(b),
            Staircase::Infinite => Err(Error::NotZeroDimensional),
        }
    }

    /// Checks that every S-polynomial left-reduces to zero.
    pub fn verify(&self) -> bool {
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                let s = s_polynomial(&self.gens[i], &self.gens[j], &self.order);
                if !self.reduce(&s).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The same basis with variables and derivations renamed by `perm`.
    /// The result is recomputed so it is reduced for the given order.
    pub fn permuted(&self, perm: &[usize], order: TermOrder) -> Result<GroebnerBasis> {
        let gens: Vec<_> = self.gens.iter().map(|g| g.permute_vars(perm)).collect();
        buchberger(&gens, &order)
    }
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn compute_staircase(nvars: usize, gens: &[OreOperator], order: &TermOrder) -> Staircase {
    let leads: Vec<DerMonomial> = gens.iter().filter_map(|g| leading_monomial(g, order)).collect();
    if leads.iter().any(DerMonomial::is_one) {
        return Staircase::Finite(Vec::new());
    }
    let mut bounds = Vec::with_capacity(nvars + 1);
    for v in 0..=nvars {
        let b = leads
            .iter()
            .filter(|m| m.is_pure_power_of(v) && m.exponents()[v] > 0)
            .map(|m| m.exponents()[v])
            .min();
        match b {
            Some(b) => bounds.push(b),
            None => return Staircase::Infinite,
        }
    }
    let mut out = vec![Vec::new()];
    for &b in &bounds {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (0..b).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    let mut basis: Vec<DerMonomial> = out
        .into_iter()
        .map(DerMonomial::from_exponents)
        .filter(|m| !leads.iter().any(|l| l.divides(m)))
        .collect();
    basis.sort_by(|a, b| order.compare(a, b));
    Staircase::Finite(basis)
}

pub fn buchberger(gens: &[OreOperator], order: &TermOrder) -> Result<GroebnerBasis> {
    buchberger_with_cap(gens, order, DEFAULT_DEGREE_CAP)
}

/// Buchberger completion with the normal selection strategy. Fails with
/// `DegreeCapExceeded` once an S-pair lcm or new leading monomial exceeds
/// total derivative degree `cap`.
pub fn buchberger_with_cap(gens: &[OreOperator], order: &TermOrder, cap: u32) -> Result<GroebnerBasis> {
    let nvars = order.nvars();
    for g in gens {
        if g.nvars() != nvars {
            return Err(Error::NvarsMismatch(nvars, g.nvars()));
        }
    }
    if gens.iter().all(OreOperator::is_zero) {
        return Err(Error::ZeroIdeal);
    }
    let unit = || GroebnerBasis::from_reduced(nvars, order.clone(), vec![OreOperator::one(nvars)]);

    let mut basis: Vec<OreOperator> = Vec::new();
    let mut leads: Vec<DerMonomial> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    let push = |r: OreOperator,
                basis: &mut Vec<OreOperator>,
                leads: &mut Vec<DerMonomial>,
                pairs: &mut Vec<(usize, usize)>|
     -> Result<bool> {
        if r.as_coeff().is_some() {
            return Ok(true);
        }
        let r = make_monic(&r, order);
        let lm = leading_monomial(&r, order).unwrap();
        if lm.degree() > cap {
            return Err(Error::DegreeCapExceeded { cap });
        }
        let k = basis.len();
        pairs.extend((0..k).map(|i| (i, k)));
        basis.push(r);
        leads.push(lm);
        Ok(false)
    };

    for g in gens {
        let r = left_reduce(g, &basis, order);
        if !r.is_zero() && push(r, &mut basis, &mut leads, &mut pairs)? {
            return Ok(unit());
        }
    }

    while !pairs.is_empty() {
        let (pos, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, p), (_, q)| {
                let lp = leads[p.0].lcm(&leads[p.1]);
                let lq = leads[q.0].lcm(&leads[q.1]);
                order.compare(&lp, &lq)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(pos);
        if leads[i].lcm(&leads[j]).degree() > cap {
            return Err(Error::DegreeCapExceeded { cap });
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = left_reduce(&s, &basis, order);
        if !r.is_zero() && push(r, &mut basis, &mut leads, &mut pairs)? {
            return Ok(unit());
        }
    }

    Ok(GroebnerBasis::from_reduced(
        nvars,
        order.clone(),
        interreduce(basis, order),
    ))
}

fn interreduce(basis: Vec<OreOperator>, order: &TermOrder) -> Vec<OreOperator> {
    let mut items: Vec<(DerMonomial, OreOperator)> = basis
        .into_iter()
        .map(|g| (leading_monomial(&g, order).unwrap(), g))
        .collect();
    items.sort_by(|a, b| order.compare(&a.0, &b.0));
    let mut kept: Vec<(DerMonomial, OreOperator)> = Vec::new();
    for (m, g) in items {
        if !kept.iter().any(|(k, _)| k.divides(&m)) {
            kept.push((m, g));
        }
    }
    let mut out: Vec<OreOperator> = kept.iter().map(|(_, g)| g.clone()).collect();
    for i in 0..out.len() {
        let others: Vec<OreOperator> = out
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        out[i] = make_monic(&left_reduce(&out[i], &others, order), order);
    }
    out
}

pub fn quotient_basis(g: &GroebnerBasis) -> Result<Vec<DerMonomial>> {
    g.quotient_basis().map(<[DerMonomial]>::to_vec)
}

pub fn is_zero_dimensional(g: &GroebnerBasis) -> bool {
    g.is_zero_dimensional()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dx(n: usize) -> OreOperator {
        OreOperator::derivation(n, 0)
    }
    fn dy(n: usize) -> OreOperator {
        OreOperator::derivation(n, 1)
    }
    fn k(n: usize, c: i64) -> OreOperator {
        OreOperator::from_int(n, c)
    }

    #[test]
    fn reduce_dx_squared() {
        let o = TermOrder::degrevlex(1);
        let g = &dx(1) - &k(1, 1);
        assert_eq!(left_reduce(&(&dx(1) * &dx(1)), std::slice::from_ref(&g), &o), k(1, 1));
        assert!(left_reduce(&dy(1), &[dy(1)], &o).is_zero());
        let x = OreOperator::variable(1, 0);
        assert_eq!(left_reduce(&x, &[g], &o), x);
    }

    #[test]
    fn coprime_leading_monomials_still_checked() {
        let o = TermOrder::degrevlex(1);
        let g1 = &dx(1) - &k(1, 1);
        let g2 = &(&dy(1) * &dy(1)) - &dy(1);
        let gb = buchberger(&[g1.clone(), g2.clone()], &o).unwrap();
        assert_eq!(gb.gens(), &[g1, g2]);
        assert!(gb.verify());
        assert_eq!(
            gb.quotient_basis().unwrap(),
            &[DerMonomial::one(1), DerMonomial::unit(1, 1)]
        );
    }

    #[test]
    fn redundant_generator_dropped() {
        let o = TermOrder::degrevlex(1);
        let x = OreOperator::variable(1, 0);
        let gb = buchberger(&[dx(1), &x * &dx(1)], &o).unwrap();
        assert_eq!(gb.gens(), &[dx(1)]);
        assert!(!gb.is_zero_dimensional());
    }

    #[test]
    fn product_generator_expands() {
        let o = TermOrder::degrevlex(1);
        let p = &(&dx(1) - &k(1, 1)) * &(&dx(1) - &k(1, 2));
        let gb = buchberger(&[p, dy(1)], &o).unwrap();
        assert_eq!(gb.to_string(), "{Dy, Dx^2 - 3*Dx + 2}");
        let basis = gb.quotient_basis().unwrap();
        assert_eq!(basis, &[DerMonomial::one(1), DerMonomial::unit(1, 0)]);
    }

    #[test]
    fn unit_and_degenerate_ideals() {
        let o = TermOrder::degrevlex(1);
        let gb = buchberger(&[k(1, 1)], &o).unwrap();
        assert!(gb.is_unit());
        assert!(gb.is_zero_dimensional());
        assert_eq!(gb.dimension(), Some(0));
        // Dx - 1 and Dx - 2 together force 1 into the ideal
        let gb = buchberger(&[&dx(1) - &k(1, 1), &dx(1) - &k(1, 2), dy(1)], &o).unwrap();
        assert!(gb.is_unit());
        assert_eq!(buchberger(&[OreOperator::zero(1)], &o).unwrap_err(), Error::ZeroIdeal);
        let gb = buchberger(&[dx(1), dy(1)], &o).unwrap();
        assert_eq!(gb.dimension(), Some(1));
    }

    #[test]
    fn not_zero_dimensional() {
        let o = TermOrder::degrevlex(1);
        let gb = buchberger(&[dy(1)], &o).unwrap();
        assert!(!gb.is_zero_dimensional());
        assert_eq!(gb.quotient_basis().unwrap_err(), Error::NotZeroDimensional);
    }

    #[test]
    fn weyl_style_ideal_with_variable_coefficients() {
        // annihilator of exp(x*y): Dx - y, Dy - x
        let o = TermOrder::degrevlex(1);
        let x = OreOperator::variable(1, 0);
        let y = OreOperator::variable(1, 1);
        let gb = buchberger(&[&dx(1) - &y, &dy(1) - &x], &o).unwrap();
        assert_eq!(gb.dimension(), Some(1));
        assert!(gb.verify());
    }

    #[test]
    fn degree_cap_reported() {
        let o = TermOrder::degrevlex(1);
        let g = &(&dx(1) * &dx(1)) - &dy(1);
        let h = &(&dy(1) * &dy(1)) - &dx(1);
        assert_eq!(
            buchberger_with_cap(&[g, h], &o, 1).unwrap_err(),
            Error::DegreeCapExceeded { cap: 1 }
        );
    }

    #[test]
    fn elimination_order_ranks_block_higher() {
        let o = TermOrder::eliminate_dy(1);
        let a = DerMonomial::from_exponents(vec![5, 0]);
        let b = DerMonomial::from_exponents(vec![0, 1]);
        assert_eq!(o.compare(&a, &b), Ordering::Less);
        let lex = TermOrder::lex(1);
        assert_eq!(lex.compare(&a, &b), Ordering::Greater);
    }
}
