//! Quotient modules, elimination ideals and shape bases.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{scalar, MultiPoly, RatFunc, Scalar};
use crate::error::{Error, Result};
use crate::gb::{buchberger, left_reduce, GroebnerBasis, TermOrder};
use crate::linalg::{from_columns, rank, solve};
use crate::ore::{op_shear, DerMonomial, OreOperator, ShearDirection};

pub const DEFAULT_COEFF_RANGE: i64 = 5;
pub const DEFAULT_MAX_ATTEMPTS: usize = 20;
pub const DEFAULT_CYCLIC_DEGREE: u32 = 2;

/// The quotient `K[Dx, Dy]/I` as a K-vector space with the pseudo-linear
/// action of each derivation.
///
/// Column `k` of `matrices[v]` holds the coordinates of `D_v * basis[k]`.
/// On a coordinate vector `u`, `D_v` acts as `d/dv(u) + matrices[v] * u`.
#[derive(Debug, Clone)]
pub struct QuotientAction {
    gb: GroebnerBasis,
    basis: Vec<DerMonomial>,
    matrices: Vec<Vec<Vec<RatFunc>>>,
}

pub fn quotient_action(gb: &GroebnerBasis) -> Result<QuotientAction> {
    QuotientAction::new(gb)
}

impl QuotientAction {
    pub fn new(gb: &GroebnerBasis) -> Result<Self> {
        let basis = gb.quotient_basis()?.to_vec();
        let mut qa = QuotientAction {
            gb: gb.clone(),
            basis,
            matrices: Vec::new(),
        };
        for v in 0..=gb.nvars() {
            let d = OreOperator::derivation(gb.nvars(), v);
            let columns: Vec<Vec<RatFunc>> = qa
                .basis
                .iter()
                .map(|s| qa.coords(&(&d * &OreOperator::monomial(s.clone()))))
                .collect();
            qa.matrices.push(from_columns(&columns));
        }
        Ok(qa)
    }

    pub fn nvars(&self) -> usize {
        self.gb.nvars()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[DerMonomial] {
        &self.basis
    }

    pub fn groebner_basis(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn matrix(&self, var: usize) -> &[Vec<RatFunc>] {
        &self.matrices[var]
    }

    /// Coordinates of the class of `op` in the standard monomial basis.
    pub fn coords(&self, op: &OreOperator) -> Vec<RatFunc> {
        let nf = self.gb.reduce(op);
        let mut out = vec![RatFunc::zero(self.nvars()); self.rank()];
        for (m, c) in nf.terms() {
            let k = self
                .basis
                .iter()
                .position(|s| s == m)
                .expect("normal form is supported on standard monomials");
            out[k] = c.clone();
        }
        out
    }

    pub fn to_operator(&self, v: &[RatFunc]) -> OreOperator {
        OreOperator::from_terms(self.nvars(), self.basis.iter().cloned().zip(v.iter().cloned()))
    }

    /// The class of `D_var * u`, given the coordinates `u` of a class.
    pub fn act(&self, var: usize, u: &[RatFunc]) -> Vec<RatFunc> {
        let a = &self.matrices[var];
        (0..self.rank())
            .map(|j| {
                let mut acc = u[j].derivative(var);
                for (k, uk) in u.iter().enumerate() {
                    if !uk.is_zero() && !a[j][k].is_zero() {
                        acc = &acc + &(&a[j][k] * uk);
                    }
                }
                acc
            })
            .collect()
    }

    /// Krylov family `u, Dx u, Dx^2 u, ..` up to the first vector that lies
    /// in the span of its predecessors. Returns the independent vectors and
    /// the coefficients `mu` with `Dx^s u = sum mu_k Dx^k u`.
    pub fn krylov(&self, u: Vec<RatFunc>) -> (Vec<Vec<RatFunc>>, Vec<RatFunc>) {
        let zero = RatFunc::zero(self.nvars());
        let mut vecs: Vec<Vec<RatFunc>> = Vec::new();
        let mut cur = u;
        loop {
            if vecs.is_empty() {
                if cur.iter().all(RatFunc::is_zero) {
                    return (vecs, Vec::new());
                }
            } else if let Some(mu) = solve(&from_columns(&vecs), &cur, &zero) {
                return (vecs, mu);
            }
            let next = self.act(0, &cur);
            vecs.push(cur);
            cur = next;
        }
    }
}

fn relation_operator(nvars: usize, mu: &[RatFunc]) -> OreOperator {
    let mut coeffs: Vec<RatFunc> = mu.iter().map(|c| -c).collect();
    coeffs.push(RatFunc::one(nvars));
    OreOperator::from_dx_coeffs(nvars, &coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EliminationMethod {
    Krylov,
    ElimOrder,
}

/// Monic generator of `I ∩ K[Dx]`.
pub fn eliminate_dx(gb: &GroebnerBasis, method: EliminationMethod) -> Result<OreOperator> {
    let n = gb.nvars();
    match method {
        EliminationMethod::Krylov => {
            let qa = QuotientAction::new(gb)?;
            if qa.rank() == 0 {
                return Ok(OreOperator::one(n));
            }
            let (_, mu) = qa.krylov(qa.coords(&OreOperator::one(n)));
            Ok(relation_operator(n, &mu))
        }
        EliminationMethod::ElimOrder => {
            gb.quotient_basis()?;
            let elim = buchberger(gb.gens(), &TermOrder::eliminate_dy(n))?;
            elim.gens()
                .iter()
                .filter(|g| g.dx_coeffs().is_some())
                .min_by_key(|g| g.order())
                .cloned()
                .ok_or_else(|| Error::Internal("elimination ideal has no generator".into()))
        }
    }
}

/// Whether `ord(P)` equals the quotient dimension.
pub fn normal_position(gb: &GroebnerBasis) -> Result<bool> {
    let r = gb.quotient_basis()?.len();
    let p = eliminate_dx(gb, EliminationMethod::Krylov)?;
    Ok(p.order() as usize == r)
}

/// Generators `Dy_i - Q_i` and `P` with `P, Q_i` in K[Dx].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeBasis {
    r: usize,
    p: OreOperator,
    q: Vec<OreOperator>,
}

impl ShapeBasis {
    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn nvars(&self) -> usize {
        self.p.nvars()
    }

    pub fn p(&self) -> &OreOperator {
        &self.p
    }

    pub fn q(&self) -> &[OreOperator] {
        &self.q
    }

    pub fn p_coeffs(&self) -> Vec<RatFunc> {
        self.p.dx_coeffs().expect("P lies in K[Dx]")
    }

    pub fn q_coeffs(&self, i: usize) -> Vec<RatFunc> {
        self.q[i].dx_coeffs().expect("Q lies in K[Dx]")
    }

    /// `[Dy_1 - Q_1, .., Dy_n - Q_n, P]`; just `[P]` when `r = 0`.
    pub fn generators(&self) -> Vec<OreOperator> {
        let n = self.nvars();
        let mut out: Vec<OreOperator> = self
            .q
            .iter()
            .enumerate()
            .map(|(i, q)| &OreOperator::derivation(n, i + 1) - q)
            .collect();
        out.push(self.p.clone());
        out
    }

    /// Applies a variable permutation to every generator.
    pub fn permuted(&self, perm: &[usize]) -> ShapeBasis {
        ShapeBasis {
            r: self.r,
            p: self.p.permute_vars(perm),
            q: self.q.iter().map(|q| q.permute_vars(perm)).collect(),
        }
    }
}

impl fmt::Display for ShapeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators().iter().map(|g| g.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Solves for each `Q_i` in the Krylov basis `vecs` of `start`.
fn shape_from_krylov(
    qa: &QuotientAction,
    start: &[RatFunc],
    vecs: &[Vec<RatFunc>],
    mu: &[RatFunc],
) -> Result<ShapeBasis> {
    let n = qa.nvars();
    let k = from_columns(vecs);
    let zero = RatFunc::zero(n);
    let mut q = Vec::with_capacity(n);
    for i in 1..=n {
        let w = qa.act(i, start);
        let coeffs = solve(&k, &w, &zero).ok_or_else(|| Error::Internal("Krylov vectors do not span".into()))?;
        q.push(OreOperator::from_dx_coeffs(n, &coeffs));
    }
    Ok(ShapeBasis {
        r: qa.rank(),
        p: relation_operator(n, mu),
        q,
    })
}

pub fn shape_basis(gb: &GroebnerBasis) -> Result<ShapeBasis> {
    let qa = QuotientAction::new(gb)?;
    let n = gb.nvars();
    let r = qa.rank();
    if r == 0 {
        return Ok(ShapeBasis {
            r,
            p: OreOperator::one(n),
            q: Vec::new(),
        });
    }
    let start = qa.coords(&OreOperator::one(n));
    let (vecs, mu) = qa.krylov(start.clone());
    if vecs.len() < r {
        return Err(Error::NotNormalPosition {
            order: vecs.len(),
            rank: r,
        });
    }
    let sb = shape_from_krylov(&qa, &start, &vecs, &mu)?;
    check_same_ideal(gb, &sb)?;
    Ok(sb)
}

/// Mutual left reduction: the shape generators lie in the ideal, and the
/// original generators reduce to zero modulo the shape generators, which form
/// a Gröbner basis for the order eliminating the Dy block.
fn check_same_ideal(gb: &GroebnerBasis, sb: &ShapeBasis) -> Result<()> {
    let gens = sb.generators();
    let order = TermOrder::eliminate_dy(gb.nvars());
    let forward = gens.iter().all(|g| gb.contains(g));
    let backward = gb.gens().iter().all(|g| left_reduce(g, &gens, &order).is_zero());
    if forward && backward {
        Ok(())
    } else {
        Err(Error::Internal("shape basis does not generate the input ideal".into()))
    }
}

/// Shear vector for the substitution `y <- y + c x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShearParams {
    c: Vec<Scalar>,
}

impl ShearParams {
    pub fn new(c: Vec<Scalar>) -> Self {
        ShearParams { c }
    }

    pub fn zero(nvars: usize) -> Self {
        ShearParams {
            c: vec![scalar(0); nvars],
        }
    }

    pub fn values(&self) -> &[Scalar] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v == &scalar(0))
    }

    pub fn negated(&self) -> Self {
        ShearParams {
            c: self.c.iter().map(|v| -v).collect(),
        }
    }
}

impl fmt::Display for ShearParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The ideal whose solutions are `f(x, y + c x)` for solutions `f` of `gb`.
pub fn shear_ideal(gb: &GroebnerBasis, c: &ShearParams) -> Result<GroebnerBasis> {
    if c.values().len() != gb.nvars() {
        return Err(Error::NvarsMismatch(gb.nvars(), c.values().len()));
    }
    if c.is_zero() {
        return Ok(gb.clone());
    }
    let gens: Vec<OreOperator> = gb
        .gens()
        .iter()
        .map(|g| op_shear(g, c.values(), ShearDirection::Inverse))
        .collect();
    buchberger(&gens, gb.order())
}

/// Searches integer shears, starting with `c = 0`, until the sheared ideal is
/// in normal position.
pub fn normalize_by_shear(
    gb: &GroebnerBasis,
    seed: u64,
    max_attempts: usize,
    coeff_range: i64,
) -> Result<(ShearParams, GroebnerBasis)> {
    gb.quotient_basis()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..max_attempts {
        let c = if attempt == 0 {
            ShearParams::zero(gb.nvars())
        } else {
            ShearParams::new(
                (0..gb.nvars())
                    .map(|_| scalar(rng.gen_range(-coeff_range..=coeff_range)))
                    .collect(),
            )
        };
        let sheared = shear_ideal(gb, &c)?;
        if normal_position(&sheared)? {
            return Ok((c, sheared));
        }
    }
    Err(Error::NormalizationFailed { attempts: max_attempts })
}

/// Whether the Dx-Krylov family of `[m]` spans the quotient.
pub fn is_cyclic(qa: &QuotientAction, m: &OreOperator) -> bool {
    let (vecs, _) = qa.krylov(qa.coords(m));
    vecs.len() == qa.rank()
}

fn x_power(nvars: usize, j: u32) -> RatFunc {
    let mut e = vec![0; nvars + 1];
    e[0] = j;
    RatFunc::from_poly(MultiPoly::monomial(nvars, e, scalar(1)))
}

/// Deterministic candidates `x^j s_k` and `x^j s_k + s_l`, then random
/// polynomial combinations of the standard monomials.
pub fn cyclic_vector(gb: &GroebnerBasis, seed: u64, degree_bound: u32, max_attempts: usize) -> Result<OreOperator> {
    let qa = QuotientAction::new(gb)?;
    let n = gb.nvars();
    if qa.rank() <= 1 {
        return Ok(OreOperator::one(n));
    }
    let basis = qa.basis().to_vec();
    let mut sweep: Vec<OreOperator> = Vec::new();
    for j in 0..=degree_bound {
        for s in &basis {
            sweep.push(OreOperator::term(s.clone(), x_power(n, j)));
        }
    }
    for j in 0..=degree_bound {
        for (k, sk) in basis.iter().enumerate() {
            for (l, sl) in basis.iter().enumerate() {
                if k != l {
                    let m = &OreOperator::term(sk.clone(), x_power(n, j)) + &OreOperator::monomial(sl.clone());
                    sweep.push(m);
                }
            }
        }
    }
    if let Some(m) = sweep.into_iter().find(|m| is_cyclic(&qa, m)) {
        return Ok(m);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_attempts {
        let m = OreOperator::from_terms(
            n,
            basis
                .iter()
                .map(|s| (s.clone(), RatFunc::from_poly(random_poly(&mut rng, n, degree_bound)))),
        );
        if is_cyclic(&qa, &m) {
            return Ok(m);
        }
    }
    Err(Error::CyclicVectorNotFound { attempts: max_attempts })
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> MultiPoly {
    let terms = crate::ore::monomials_below(nvars, degree + 1)
        .into_iter()
        .map(|e| (e, scalar(rng.gen_range(-3..=3))));
    MultiPoly::from_terms(nvars, terms)
}

/// Shape basis of the annihilator of `M(f)`, for `f` ranging over the
/// solutions of `gb`.
pub fn gauge_transform(gb: &GroebnerBasis, m: &OreOperator) -> Result<ShapeBasis> {
    let qa = QuotientAction::new(gb)?;
    let n = gb.nvars();
    let r = qa.rank();
    if r == 0 {
        return Ok(ShapeBasis {
            r,
            p: OreOperator::one(n),
            q: Vec::new(),
        });
    }
    let start = qa.coords(m);
    let (vecs, mu) = qa.krylov(start.clone());
    if vecs.len() < r {
        return Err(Error::NotCyclic {
            rank: vecs.len(),
            dim: r,
        });
    }
    shape_from_krylov(&qa, &start, &vecs, &mu)
}

/// Transposition exchanging variable 0 with variable `k`.
pub fn role_swap(nvars: usize, k: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..=nvars).collect();
    perm.swap(0, k);
    perm
}

/// The ideal with `Dx` and `Dy_k` (and `x`, `y_k`) exchanged, so that
/// `Dy_k` plays the role of the main derivation.
pub fn swap_main_var(gb: &GroebnerBasis, k: usize) -> Result<GroebnerBasis> {
    if k == 0 {
        return Ok(gb.clone());
    }
    gb.permuted(&role_swap(gb.nvars(), k), gb.order().clone())
}

/// Rank of the Dx-Krylov family of `[m]`.
pub fn krylov_rank(qa: &QuotientAction, m: &OreOperator) -> usize {
    let (vecs, _) = qa.krylov(qa.coords(m));
    if vecs.is_empty() {
        0
    } else {
        rank(&from_columns(&vecs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dx() -> OreOperator {
        OreOperator::derivation(1, 0)
    }
    fn dy() -> OreOperator {
        OreOperator::derivation(1, 1)
    }
    fn k(c: i64) -> OreOperator {
        OreOperator::from_int(1, c)
    }
    fn gb(gens: &[OreOperator]) -> GroebnerBasis {
        buchberger(gens, &TermOrder::degrevlex(1)).unwrap()
    }
    fn i1() -> GroebnerBasis {
        gb(&[&(&dx() - &k(1)) * &(&dx() - &k(2)), dy()])
    }
    fn i4() -> GroebnerBasis {
        gb(&[&dx() - &k(1), &(&dy() * &dy()) - &dy()])
    }

    #[test]
    fn action_matrices() {
        let qa = quotient_action(&i1()).unwrap();
        let r = |v: i64| RatFunc::from_int(1, v);
        assert_eq!(qa.matrix(0), &[vec![r(0), r(-2)], vec![r(1), r(3)]]);
        assert!(qa.matrix(1).iter().flatten().all(RatFunc::is_zero));
        let qa = quotient_action(&i4()).unwrap();
        assert_eq!(qa.matrix(0), &[vec![r(1), r(0)], vec![r(0), r(1)]]);
    }

    #[test]
    fn elimination_both_methods() {
        for (g, expect) in [
            (i1(), &(&(&dx() * &dx()) - &dx().scale(&scalar(3))) + &k(2)),
            (i4(), &dx() - &k(1)),
        ] {
            assert_eq!(eliminate_dx(&g, EliminationMethod::Krylov).unwrap(), expect);
            assert_eq!(eliminate_dx(&g, EliminationMethod::ElimOrder).unwrap(), expect);
        }
        let unit = gb(&[k(1)]);
        assert_eq!(eliminate_dx(&unit, EliminationMethod::Krylov).unwrap(), k(1));
        assert!(normal_position(&unit).unwrap());
    }

    #[test]
    fn normal_position_depends_on_main_variable() {
        assert!(normal_position(&i1()).unwrap());
        assert!(!normal_position(&swap_main_var(&i1(), 1).unwrap()).unwrap());
        assert!(!normal_position(&i4()).unwrap());
        assert_eq!(
            shape_basis(&i4()).unwrap_err(),
            Error::NotNormalPosition { order: 1, rank: 2 }
        );
    }

    #[test]
    fn shape_of_sheared_ideal() {
        let sheared = shear_ideal(&i4(), &ShearParams::new(vec![scalar(1)])).unwrap();
        let sb = shape_basis(&sheared).unwrap();
        assert_eq!(sb.p().to_string(), "Dx^2 - 3*Dx + 2");
        assert_eq!(sb.q()[0], &dx() - &k(1));
        let back = shear_ideal(&sheared, &ShearParams::new(vec![scalar(-1)])).unwrap();
        assert_eq!(back.gens(), i4().gens());
    }

    #[test]
    fn trivial_shape() {
        let sb = shape_basis(&gb(&[&dx() - &k(1), &dy() - &k(1)])).unwrap();
        assert_eq!(sb.p(), &(&dx() - &k(1)));
        assert_eq!(sb.q(), &[k(1)]);
    }

    #[test]
    fn normalize_examples() {
        let (c, _) = normalize_by_shear(&i1(), 0, 20, 5).unwrap();
        assert!(c.is_zero());
        let (c, _) = normalize_by_shear(&i4(), 1, 20, 5).unwrap();
        assert!(!c.is_zero());
        assert_eq!(
            normalize_by_shear(&i4(), 1, 1, 5).unwrap_err(),
            Error::NormalizationFailed { attempts: 1 }
        );
        // exp(x), (y + c x) exp(x) have x-Wronskian c exp(2x)
        let i3 = gb(&[&dx() - &k(1), &dy() * &dy()]);
        assert!(!normal_position(&i3).unwrap());
        let (c, sheared) = normalize_by_shear(&i3, 1, 20, 5).unwrap();
        assert!(!c.is_zero());
        assert_eq!(eliminate_dx(&sheared, EliminationMethod::Krylov).unwrap().order(), 2);
    }

    #[test]
    fn cyclic_vector_and_gauge() {
        let g = i4();
        let qa = quotient_action(&g).unwrap();
        assert!(!is_cyclic(&qa, &k(1)));
        let m = cyclic_vector(&g, 0, 2, 10).unwrap();
        let x = OreOperator::variable(1, 0);
        assert_eq!(m, &x + &dy());
        let sb = gauge_transform(&g, &m).unwrap();
        assert_eq!(sb.p().to_string(), "Dx^2 - 2*Dx + 1");
        let xp1 = &x + &k(1);
        let expect = &(&xp1 * &xp1) - &(&(&x * &xp1) * &dx());
        assert_eq!(sb.q()[0], expect);
        assert_eq!(
            gauge_transform(&g, &k(1)).unwrap_err(),
            Error::NotCyclic { rank: 1, dim: 2 }
        );
    }
}
