#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ore_shape::arith::{scalar, MultiPoly, RatFunc, Scalar};
use ore_shape::gb::{buchberger, GroebnerBasis, TermOrder};
use ore_shape::ore::{DerMonomial, OreOperator, TruncSeries};
use ore_shape::shape::{shear_ideal, ShearParams};

pub fn dx(n: usize) -> OreOperator {
    OreOperator::derivation(n, 0)
}

pub fn dy(n: usize, i: usize) -> OreOperator {
    OreOperator::derivation(n, i)
}

pub fn k(n: usize, c: i64) -> OreOperator {
    OreOperator::from_int(n, c)
}

pub fn q(c: &Scalar, n: usize) -> OreOperator {
    OreOperator::from_coeff(RatFunc::constant(n, c.clone()))
}

pub fn gb(gens: &[OreOperator]) -> GroebnerBasis {
    let n = gens[0].nvars();
    buchberger(gens, &TermOrder::degrevlex(n)).expect("corpus ideal has a Groebner basis")
}

/// `exp(a . (x, y))` truncated.
pub fn exp(a: &[Scalar], order: u32) -> TruncSeries {
    TruncSeries::exp_linear(a.len() - 1, order, a)
}

pub fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&c| scalar(c)).collect()
}

/// An ideal with known solution data.
pub struct Entry {
    pub name: String,
    pub gb: GroebnerBasis,
    pub r: usize,
    /// Normal position with respect to Dx, decided from the solutions.
    pub normal: bool,
    /// Closed-form solutions spanning the solution space.
    pub solutions: Vec<TruncSeries>,
}

pub const ORDER: u32 = 8;

fn classical_entries() -> Vec<Entry> {
    let n = 1;
    let x = OreOperator::variable(n, 0);
    let y = OreOperator::variable(n, 1);
    let e = |a: i64, b: i64| exp(&ints(&[a, b]), ORDER);
    let xe = TruncSeries::from_poly(&MultiPoly::var(n, 0), ORDER);
    let ye = TruncSeries::from_poly(&MultiPoly::var(n, 1), ORDER);
    let d1 = &dx(n) - &k(n, 1);
    vec![
        Entry {
            name: "<(Dx-1)(Dx-2), Dy>".into(),
            gb: gb(&[&d1 * &(&dx(n) - &k(n, 2)), dy(n, 1)]),
            r: 2,
            normal: true,
            solutions: vec![e(1, 0), e(2, 0)],
        },
        Entry {
            name: "<(Dx-1)^2, Dy>".into(),
            gb: gb(&[&d1 * &d1, dy(n, 1)]),
            r: 2,
            normal: true,
            solutions: vec![e(1, 0), &xe * &e(1, 0)],
        },
        Entry {
            name: "<Dx-1, Dy^2>".into(),
            gb: gb(&[d1.clone(), &dy(n, 1) * &dy(n, 1)]),
            r: 2,
            normal: false,
            solutions: vec![e(1, 0), &ye * &e(1, 0)],
        },
        Entry {
            name: "<Dx-1, Dy^2-Dy>".into(),
            gb: gb(&[d1.clone(), &(&dy(n, 1) * &dy(n, 1)) - &dy(n, 1)]),
            r: 2,
            normal: false,
            solutions: vec![e(1, 0), e(1, 1)],
        },
        Entry {
            name: "<Dx-y, Dy-x>".into(),
            gb: gb(&[&dx(n) - &y, &dy(n, 1) - &x]),
            r: 1,
            normal: true,
            solutions: vec![TruncSeries::from_coeffs(
                n,
                ORDER,
                (0..ORDER / 2).map(|j| {
                    let mut f = scalar(1);
                    for t in 2..=j as i64 {
                        f *= scalar(t);
                    }
                    (vec![j, j], f.recip())
                }),
            )],
        },
        Entry {
            name: "<Dx^2, Dy>".into(),
            gb: gb(&[&dx(n) * &dx(n), dy(n, 1)]),
            r: 2,
            normal: true,
            solutions: vec![TruncSeries::one(n, ORDER), xe.clone()],
        },
        Entry {
            name: "<Dx, Dy^2>".into(),
            gb: gb(&[dx(n), &dy(n, 1) * &dy(n, 1)]),
            r: 2,
            normal: false,
            solutions: vec![TruncSeries::one(n, ORDER), ye],
        },
        Entry {
            name: "<1>".into(),
            gb: gb(&[k(n, 1)]),
            r: 0,
            normal: true,
            solutions: vec![],
        },
    ]
}

/// Annihilator of `exp(a_k x + b_k . y)` in shape form, for distinct `a_k`.
pub fn shape_form_ideal(points: &[Vec<Scalar>]) -> Vec<OreOperator> {
    let n = points[0].len() - 1;
    let mut p = k(n, 1);
    for pt in points {
        p = &p * &(&dx(n) - &q(&pt[0], n));
    }
    let mut gens = Vec::new();
    for i in 1..=n {
        let mut lagrange = OreOperator::zero(n);
        for (j, pj) in points.iter().enumerate() {
            let mut basis = q(&pj[i], n);
            for (l, pl) in points.iter().enumerate() {
                if l != j {
                    let denom = (&pj[0] - &pl[0]).recip();
                    basis = &basis * &(&dx(n) - &q(&pl[0], n)).scale(&denom);
                }
            }
            lagrange = &lagrange + &basis;
        }
        gens.push(&dy(n, i) - &lagrange);
    }
    gens.push(p);
    gens
}

/// Shape-form ideals for random exponential solutions, sheared by `c`. After
/// the shear the solutions are `exp((a + b.c) x + b.y)`; normal position
/// holds exactly when the new x-exponents are distinct.
fn random_entries(count: usize, seed: u64) -> Vec<Entry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let idx = out.len();
        let n = if idx % 3 == 2 { 2 } else { 1 };
        let r = rng.gen_range(2..=3usize);
        let mut points: Vec<Vec<Scalar>> = Vec::new();
        while points.len() < r {
            let a = scalar(rng.gen_range(-3..=3));
            if points.iter().any(|p| p[0] == a) {
                continue;
            }
            let mut pt = vec![a];
            pt.extend((0..n).map(|_| scalar(rng.gen_range(-2..=2))));
            points.push(pt);
        }
        // every other entry uses a shear that makes two x-exponents collide
        let c: Vec<Scalar> = if idx % 2 == 1 && n == 1 && points[0][1] != points[1][1] {
            vec![(&points[1][0] - &points[0][0]) / (&points[0][1] - &points[1][1])]
        } else {
            (0..n).map(|_| scalar(rng.gen_range(-2..=2))).collect()
        };
        let sheared_points: Vec<Vec<Scalar>> = points
            .iter()
            .map(|p| {
                let mut a = p[0].clone();
                for i in 0..n {
                    a += &p[i + 1] * &c[i];
                }
                let mut s = vec![a];
                s.extend_from_slice(&p[1..]);
                s
            })
            .collect();
        let mut xs: Vec<&Scalar> = sheared_points.iter().map(|p| &p[0]).collect();
        xs.sort();
        xs.dedup();
        let normal = xs.len() == r;
        let base = gb(&shape_form_ideal(&points));
        let sheared = shear_ideal(&base, &ShearParams::new(c.clone())).expect("shear succeeds");
        let cs: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        out.push(Entry {
            name: format!("random #{idx} (n = {n}, r = {r}, c = {})", cs.join(",")),
            gb: sheared,
            r,
            normal,
            solutions: sheared_points.iter().map(|p| exp(p, ORDER)).collect(),
        });
    }
    out
}

/// Small classical ideals and randomized sheared shape-form ideals.
pub fn corpus() -> Vec<Entry> {
    let mut v = classical_entries();
    v.extend(random_entries(12, 20_240_611));
    v
}

/// Random operators with polynomial coefficients in `n + 1` variables.
pub struct OpGen {
    rng: ChaCha8Rng,
    pub nvars: usize,
}

impl OpGen {
    pub fn new(seed: u64, nvars: usize) -> Self {
        OpGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            nvars,
        }
    }

    pub fn poly(&mut self, max_deg: u32, max_terms: usize) -> MultiPoly {
        let n = self.nvars;
        let terms = (0..self.rng.gen_range(1..=max_terms))
            .map(|_| {
                let e: Vec<u32> = (0..=n).map(|_| self.rng.gen_range(0..=max_deg)).collect();
                (e, scalar(self.rng.gen_range(-4..=4)))
            })
            .collect::<Vec<_>>();
        MultiPoly::from_terms(n, terms)
    }

    /// Rational function whose denominator is 1 at the origin.
    pub fn coeff(&mut self) -> RatFunc {
        let num = RatFunc::from_poly(self.poly(2, 3));
        if self.rng.gen_bool(0.3) {
            let den = &MultiPoly::one(self.nvars) + &MultiPoly::var(self.nvars, self.rng.gen_range(0..=self.nvars));
            num.div(&RatFunc::from_poly(den)).unwrap()
        } else {
            num
        }
    }

    pub fn operator(&mut self) -> OreOperator {
        let n = self.nvars;
        let terms: Vec<(DerMonomial, RatFunc)> = (0..self.rng.gen_range(1..=3))
            .map(|_| {
                let e: Vec<u32> = (0..=n).map(|_| self.rng.gen_range(0..=2)).collect();
                (DerMonomial::from_exponents(e), self.coeff())
            })
            .collect();
        OreOperator::from_terms(n, terms)
    }

    pub fn small_int(&mut self) -> Scalar {
        scalar(self.rng.gen_range(-3..=3))
    }
}
