mod common;

use std::sync::OnceLock;

use proptest::prelude::*;

use common::{corpus, Entry, OpGen};
use ore_shape::arith::{gcd, scalar, MultiPoly, RatFunc, Scalar};
use ore_shape::cli::parse_operator;
use ore_shape::ore::{op_apply, op_mul, op_shear, OreOperator, ShearDirection, TruncSeries};
use ore_shape::series::{combine, d_radical_check, solve_series, wronskian_x, DRadicalVerdict};
use ore_shape::shape::{cyclic_vector, gauge_transform, normal_position, quotient_action, swap_main_var};

fn shared_corpus() -> &'static [Entry] {
    static CORPUS: OnceLock<Vec<Entry>> = OnceLock::new();
    CORPUS.get_or_init(corpus)
}

fn poly(nvars: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, nvars + 1), -5i64..=5), 0..=3)
        .prop_map(move |terms| MultiPoly::from_terms(nvars, terms.into_iter().map(|(e, c)| (e, scalar(c)))))
}

fn ratfunc(nvars: usize) -> impl Strategy<Value = RatFunc> {
    (poly(nvars), poly(nvars)).prop_filter_map("nonzero denominator", |(n, d)| RatFunc::new(n, d).ok())
}

fn x_derivative_series(seed: u64, order: u32) -> TruncSeries {
    let mut g = OpGen::new(seed, 1);
    let a = vec![g.small_int(), g.small_int()];
    &TruncSeries::exp_linear(1, order, &a) + &TruncSeries::from_poly(&g.poly(3, 3), order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in ratfunc(1), b in ratfunc(1), c in ratfunc(1)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn canonical_form(n in poly(2), d in poly(2), h in poly(2)) {
        prop_assume!(!d.is_zero() && !h.is_zero());
        let f = RatFunc::new(n.clone(), d.clone()).unwrap();
        prop_assert!(gcd(f.num(), f.den()).is_constant());
        prop_assert_eq!(f.den().leading_coeff(), scalar(1));
        let g = RatFunc::new(&n * &h, &d * &h).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn gcd_is_a_greatest_common_divisor(a in poly(2), b in poly(2), c in poly(2)) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (ac, bc) = (&a * &c, &b * &c);
        let g = gcd(&ac, &bc);
        prop_assert!(ac.div_exact(&g).is_some() && bc.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c).is_some());
    }

    #[test]
    fn leibniz_rule(a in ratfunc(1), b in ratfunc(1), v in 0usize..=1) {
        let lhs = (&a * &b).derivative(v);
        let rhs = &(&a.derivative(v) * &b) + &(&a * &b.derivative(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn op_mul_is_associative(seed in any::<u64>(), n in 1usize..=2) {
        let mut g = OpGen::new(seed, n);
        let (a, b, c) = (g.operator(), g.operator(), g.operator());
        prop_assert_eq!(op_mul(&op_mul(&a, &b), &c), op_mul(&a, &op_mul(&b, &c)));
    }

    #[test]
    fn operators_act_as_a_module(seed in any::<u64>()) {
        let mut g = OpGen::new(seed, 1);
        let (a, b) = (g.operator(), g.operator());
        let f = x_derivative_series(seed, 10);
        let lhs = op_apply(&op_mul(&a, &b), &f).unwrap();
        let rhs = op_apply(&a, &op_apply(&b, &f).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn shear_is_a_homomorphism(seed in any::<u64>(), n in 1usize..=2) {
        let mut g = OpGen::new(seed, n);
        let (a, b) = (g.operator(), g.operator());
        let c: Vec<Scalar> = (0..n).map(|_| g.small_int()).collect();
        for dir in [ShearDirection::Forward, ShearDirection::Inverse] {
            prop_assert_eq!(op_shear(&op_mul(&a, &b), &c, dir), op_mul(&op_shear(&a, &c, dir), &op_shear(&b, &c, dir)));
        }
        let there = op_shear(&a, &c, ShearDirection::Forward);
        prop_assert_eq!(op_shear(&there, &c, ShearDirection::Inverse), a);
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let op = OpGen::new(seed, n).operator();
        prop_assert_eq!(parse_operator(&op.to_string(), n).unwrap(), op);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn normal_form_is_k_linear(idx in 0usize..20, seed in any::<u64>()) {
        let e = &shared_corpus()[idx % shared_corpus().len()];
        let mut g = OpGen::new(seed, e.gb.nvars());
        let (a, b, c) = (g.operator(), g.operator(), g.coeff());
        let lhs = e.gb.reduce(&(&a + &b.scale_left(&c)));
        let rhs = &e.gb.reduce(&a) + &e.gb.reduce(&b).scale_left(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_action_is_pseudo_linear(idx in 0usize..20, seed in any::<u64>()) {
        let e = &shared_corpus()[idx % shared_corpus().len()];
        let qa = quotient_action(&e.gb).unwrap();
        let n = e.gb.nvars();
        let mut g = OpGen::new(seed, n);
        let u: Vec<RatFunc> = (0..qa.rank()).map(|_| g.coeff()).collect();
        let a = g.coeff();
        for v in 0..=n {
            let au: Vec<RatFunc> = u.iter().map(|c| &a * c).collect();
            let lhs = qa.act(v, &au);
            let act_u = qa.act(v, &u);
            let da = a.derivative(v);
            let rhs: Vec<RatFunc> = u.iter().zip(&act_u).map(|(ui, wi)| &(&da * ui) + &(&a * wi)).collect();
            prop_assert_eq!(&lhs, &rhs);
            let direct = qa.coords(&op_mul(&OreOperator::derivation(n, v), &qa.to_operator(&u)));
            prop_assert_eq!(direct, act_u);
        }
    }

    #[test]
    fn wronskian_is_multilinear(idx in 0usize..20, lambda in -5i64..=5) {
        let e = &shared_corpus()[idx % shared_corpus().len()];
        prop_assume!(e.r > 0);
        let sb = solve_series(&e.gb, 8).unwrap();
        let mut fs = sb.members().to_vec();
        let w = wronskian_x(&fs).unwrap();
        fs[0] = fs[0].scale(&scalar(lambda));
        prop_assert_eq!(wronskian_x(&fs).unwrap(), w.scale(&scalar(lambda)));
    }
}

#[test]
fn role_swap_twice_is_identity() {
    for e in shared_corpus().iter().filter(|e| e.gb.nvars() == 1) {
        let twice = swap_main_var(&swap_main_var(&e.gb, 1).unwrap(), 1).unwrap();
        assert_eq!(twice.gens(), e.gb.gens(), "{}", e.name);
        assert_eq!(normal_position(&twice).unwrap(), normal_position(&e.gb).unwrap());
    }
}

#[test]
fn witnesses_survive_longer_truncation() {
    for e in shared_corpus() {
        let Ok(v) = d_radical_check(&e.gb, 2, 8) else { continue };
        if let DRadicalVerdict::DependenceFound { witness, .. } = &v {
            assert!(witness.iter().any(|p| !p.is_zero()));
            let longer = solve_series(&e.gb, 12).unwrap();
            assert!(combine(&longer, witness).is_zero(), "{}", e.name);
        }
    }
}

#[test]
fn gauge_outputs_annihilate_transformed_solutions() {
    for e in shared_corpus().iter().filter(|e| e.r > 0) {
        let m = cyclic_vector(&e.gb, 7, 2, 20).unwrap();
        let sb = gauge_transform(&e.gb, &m).unwrap();
        let sols = solve_series(&e.gb, 10).unwrap();
        for f in sols.members() {
            let g = op_apply(&m, f).unwrap();
            for op in sb.generators() {
                assert!(op_apply(&op, &g).unwrap().is_zero(), "{}: {op} on M(f)", e.name);
            }
        }
    }
}
