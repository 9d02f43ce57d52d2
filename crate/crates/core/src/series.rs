//! Truncated power-series solutions at the origin.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::arith::{multi_factorial, Exponents, MultiPoly, RatFunc, Scalar};
use crate::error::{Error, Result};
use crate::gb::GroebnerBasis;
use crate::linalg::kernel;
use crate::ore::{monomials_below, op_apply, DerMonomial, OreOperator, TruncSeries};
use crate::shape::{normal_position, QuotientAction};

pub const DEFAULT_TRUNC: u32 = 8;
pub const DEFAULT_DEGREE_BOUND: u32 = 2;

/// A basis of the solution space, normalized so that member `k` has
/// `(s_j f_k)(0) = delta_jk` for the standard monomials `s_j`.
#[derive(Debug, Clone)]
pub struct SolutionBasis {
    nvars: usize,
    trunc_order: u32,
    standard: Vec<DerMonomial>,
    members: Vec<TruncSeries>,
}

impl SolutionBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.members.len()
    }

    pub fn trunc_order(&self) -> u32 {
        self.trunc_order
    }

    pub fn standard_monomials(&self) -> &[DerMonomial] {
        &self.standard
    }

    pub fn members(&self) -> &[TruncSeries] {
        &self.members
    }

    /// Whether `op` annihilates every member to its guaranteed order.
    pub fn annihilated_by(&self, op: &OreOperator) -> Result<bool> {
        for f in &self.members {
            if !op_apply(op, f)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn permuted(&self, perm: &[usize]) -> SolutionBasis {
        SolutionBasis {
            nvars: self.nvars,
            trunc_order: self.trunc_order,
            standard: self.standard.iter().map(|s| s.permute(perm)).collect(),
            members: self.members.iter().map(|f| f.permute_vars(perm)).collect(),
        }
    }
}

/// Coefficient of member `k` at `x^m` is the value at the origin of the
/// `k`-th coordinate of the normal form of `D^m`, divided by `m!`.
pub fn solve_series(gb: &GroebnerBasis, n: u32) -> Result<SolutionBasis> {
    let qa = QuotientAction::new(gb)?;
    let nvars = gb.nvars();
    let r = qa.rank();
    let mut members: Vec<TruncSeries> = (0..r).map(|_| TruncSeries::zero(nvars, n)).collect();
    if r > 0 {
        let origin = vec![Scalar::zero(); nvars + 1];
        let mut coords: HashMap<Exponents, Vec<RatFunc>> = HashMap::new();
        for m in monomials_below(nvars, n) {
            let c = match m.iter().position(|&k| k > 0) {
                None => qa.coords(&OreOperator::one(nvars)),
                Some(v) => {
                    let mut prev = m.clone();
                    prev[v] -= 1;
                    qa.act(v, &coords[&prev])
                }
            };
            let fact = multi_factorial(&m);
            for (k, ck) in c.iter().enumerate() {
                let value = ck.evaluate(&origin).map_err(|_| Error::NonOrdinaryOrigin)?;
                members[k].add_coeff(m.clone(), value / &fact);
            }
            coords.insert(m, c);
        }
    }
    Ok(SolutionBasis {
        nvars,
        trunc_order: n,
        standard: qa.basis().to_vec(),
        members,
    })
}

fn determinant(m: &[Vec<TruncSeries>]) -> TruncSeries {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc: Option<TruncSeries> = None;
    for (j, a) in m[0].iter().enumerate() {
        let minor: Vec<Vec<TruncSeries>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let mut term = a * &determinant(&minor);
        if j % 2 == 1 {
            term = -&term;
        }
        acc = Some(match acc {
            None => term,
            Some(s) => &s + &term,
        });
    }
    acc.expect("nonempty matrix")
}

/// Determinant of the matrix with entry `(i, j)` the `i`-th derivative of
/// `f_j` in variable `var`.
pub fn wronskian(fs: &[TruncSeries], var: usize) -> Result<TruncSeries> {
    let Some(first) = fs.first() else {
        return Err(Error::Internal("Wronskian of an empty family".into()));
    };
    if let Some(f) = fs.iter().find(|f| f.nvars() != first.nvars()) {
        return Err(Error::NvarsMismatch(first.nvars(), f.nvars()));
    }
    let r = fs.len() as u32;
    let min_order = fs.iter().map(TruncSeries::order).min().unwrap();
    if min_order < r {
        return Err(Error::TruncationTooSmall(format!(
            "order {min_order} leaves nothing after {} derivatives",
            r - 1
        )));
    }
    let mut rows = vec![fs.to_vec()];
    for i in 1..fs.len() {
        let next = rows[i - 1].iter().map(|f| f.derivative(var)).collect();
        rows.push(next);
    }
    Ok(determinant(&rows))
}

pub fn wronskian_x(fs: &[TruncSeries]) -> Result<TruncSeries> {
    wronskian(fs, 0)
}

/// Whether the Wronskian of the computed solution basis is nonzero.
pub fn normal_position_series(gb: &GroebnerBasis, n: u32) -> Result<bool> {
    let sb = solve_series(gb, n)?;
    if sb.rank() == 0 {
        return Ok(true);
    }
    Ok(!wronskian_x(sb.members())?.is_zero())
}

/// Both normal-position tests side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalPositionReport {
    pub algebraic: bool,
    pub series: bool,
}

impl NormalPositionReport {
    pub fn agree(&self) -> bool {
        self.algebraic == self.series
    }
}

pub fn compare_normal_position(gb: &GroebnerBasis, n: u32) -> Result<NormalPositionReport> {
    Ok(NormalPositionReport {
        algebraic: normal_position(gb)?,
        series: normal_position_series(gb, n)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DRadicalVerdict {
    /// Polynomials `p_i`, not all zero, with `sum p_i f_i = 0` to the
    /// truncation order.
    DependenceFound {
        witness: Vec<MultiPoly>,
        degree_bound: u32,
        trunc_order: u32,
    },
    NoDependenceUpToBound {
        degree_bound: u32,
        trunc_order: u32,
    },
}

impl DRadicalVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            DRadicalVerdict::DependenceFound { .. } => "DependenceFound",
            DRadicalVerdict::NoDependenceUpToBound { .. } => "NoDependenceUpToBound",
        }
    }

    pub fn witness(&self) -> Option<&[MultiPoly]> {
        match self {
            DRadicalVerdict::DependenceFound { witness, .. } => Some(witness),
            DRadicalVerdict::NoDependenceUpToBound { .. } => None,
        }
    }

    pub fn bounds(&self) -> (u32, u32) {
        match self {
            DRadicalVerdict::DependenceFound {
                degree_bound,
                trunc_order,
                ..
            }
            | DRadicalVerdict::NoDependenceUpToBound {
                degree_bound,
                trunc_order,
            } => (*degree_bound, *trunc_order),
        }
    }
}

impl fmt::Display for DRadicalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (d, n) = self.bounds();
        write!(f, "{} (degree bound {d}, truncation {n})", self.tag())?;
        if let Some(w) = self.witness() {
            let parts: Vec<String> = w.iter().map(|p| p.to_string()).collect();
            write!(f, " witness ({})", parts.join(", "))?;
        }
        Ok(())
    }
}

/// `sum p_i f_i` on the members of `sb`.
pub fn combine(sb: &SolutionBasis, ps: &[MultiPoly]) -> TruncSeries {
    let n = sb.trunc_order();
    let mut acc = TruncSeries::zero(sb.nvars(), n);
    for (p, f) in ps.iter().zip(sb.members()) {
        acc = &acc + &(&TruncSeries::from_poly(p, n) * f);
    }
    acc
}

/// Looks for polynomial relations `sum p_i f_i = 0` among the solutions,
/// with `deg p_i <= degree_bound`, trying the smallest degrees first. The
/// witness is scaled so that its first nonzero entry is monic.
pub fn d_radical_check(gb: &GroebnerBasis, degree_bound: u32, n: u32) -> Result<DRadicalVerdict> {
    if n <= degree_bound {
        return Err(Error::TruncationTooSmall(format!(
            "truncation {n} must exceed degree bound {degree_bound}"
        )));
    }
    let sb = solve_series(gb, n)?;
    let nvars = sb.nvars();
    let r = sb.rank();
    let rows = monomials_below(nvars, n);
    let row_index: HashMap<&Exponents, usize> = rows.iter().enumerate().map(|(i, e)| (e, i)).collect();
    for d in 0..=degree_bound {
        if r == 0 {
            break;
        }
        let mons = monomials_below(nvars, d + 1);
        let cols = r * mons.len();
        let mut m = vec![vec![Scalar::zero(); cols]; rows.len()];
        for (i, f) in sb.members().iter().enumerate() {
            for (j, e) in mons.iter().enumerate() {
                let col = i * mons.len() + j;
                for (t, c) in f.coeffs() {
                    let shifted: Exponents = t.iter().zip(e).map(|(a, b)| a + b).collect();
                    if let Some(&row) = row_index.get(&shifted) {
                        m[row][col] = c.clone();
                    }
                }
            }
        }
        if let Some(v) = kernel(&m, cols, &Scalar::zero()).into_iter().next() {
            let witness: Vec<MultiPoly> = (0..r)
                .map(|i| {
                    MultiPoly::from_terms(
                        nvars,
                        mons.iter()
                            .enumerate()
                            .map(|(j, e)| (e.clone(), v[i * mons.len() + j].clone())),
                    )
                })
                .collect();
            let lead = witness
                .iter()
                .find(|p| !p.is_zero())
                .expect("nonzero kernel vector")
                .leading_coeff();
            let inv = lead.recip();
            return Ok(DRadicalVerdict::DependenceFound {
                witness: witness.iter().map(|p| p.scale(&inv)).collect(),
                degree_bound,
                trunc_order: n,
            });
        }
    }
    Ok(DRadicalVerdict::NoDependenceUpToBound {
        degree_bound,
        trunc_order: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ratio, scalar};
    use crate::gb::{buchberger, TermOrder};

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
    fn exp(a: i64, b: i64, n: u32) -> TruncSeries {
        TruncSeries::exp_linear(1, n, &[scalar(a), scalar(b)])
    }

    #[test]
    fn solutions_of_constant_coefficient_ideal() {
        let g = gb(&[&(&dx() - &k(1)) * &(&dx() - &k(2)), dy()]);
        let sb = solve_series(&g, 6).unwrap();
        assert_eq!(sb.rank(), 2);
        // member 0 = 2 e^x - e^(2x), member 1 = e^(2x) - e^x
        let f0 = &exp(1, 0, 6).scale(&scalar(2)) - &exp(2, 0, 6);
        let f1 = &exp(2, 0, 6) - &exp(1, 0, 6);
        assert_eq!(sb.members()[0], f0);
        assert_eq!(sb.members()[1], f1);
        for gen in g.gens() {
            assert!(sb.annihilated_by(gen).unwrap());
        }
    }

    #[test]
    fn constants() {
        let sb = solve_series(&gb(&[dx(), dy()]), 5).unwrap();
        assert_eq!(sb.members(), &[TruncSeries::one(1, 5)]);
    }

    #[test]
    fn pole_at_origin_rejected() {
        // x*Dx - 1 has the solution x, but the normal form of Dx is 1/x
        let x = OreOperator::variable(1, 0);
        let g = gb(&[&(&x * &dx()) - &k(1), dy()]);
        assert_eq!(solve_series(&g, 4).unwrap_err(), Error::NonOrdinaryOrigin);
    }

    #[test]
    fn wronskian_values() {
        let w = wronskian_x(&[exp(1, 0, 8), exp(2, 0, 8)]).unwrap();
        assert_eq!(w.order(), 7);
        assert!(w.agrees_with(&exp(3, 0, 8)));
        assert_eq!(w.coeff(&[2, 0]), ratio(9, 2));
        assert!(wronskian(&[exp(1, 0, 8), exp(2, 0, 8)], 1).unwrap().is_zero());
        assert_eq!(wronskian_x(&[exp(1, 1, 4)]).unwrap(), exp(1, 1, 4));
        assert!(wronskian_x(&[exp(1, 0, 1), exp(2, 0, 1)]).is_err());
    }

    #[test]
    fn series_normal_position() {
        let i1 = gb(&[&(&dx() - &k(1)) * &(&dx() - &k(2)), dy()]);
        assert!(normal_position_series(&i1, 8).unwrap());
        let i4 = gb(&[&dx() - &k(1), &(&dy() * &dy()) - &dy()]);
        assert!(!normal_position_series(&i4, 8).unwrap());
        assert!(compare_normal_position(&i4, 8).unwrap().agree());
    }

    #[test]
    fn d_radical_examples() {
        let sq = &dx() - &k(1);
        let v = d_radical_check(&gb(&[&sq * &sq, dy()]), 2, 8).unwrap();
        assert_eq!(v.tag(), "DependenceFound");
        let i1 = gb(&[&(&dx() - &k(1)) * &(&dx() - &k(2)), dy()]);
        let v = d_radical_check(&i1, 3, 10).unwrap();
        assert_eq!(v.tag(), "NoDependenceUpToBound");
        let i3 = gb(&[&dx() - &k(1), &dy() * &dy()]);
        let v = d_radical_check(&i3, 2, 8).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w[0].to_string(), "y");
        assert_eq!(w[1].to_string(), "-1");
        assert!(d_radical_check(&i3, 3, 3).is_err());
    }
}
