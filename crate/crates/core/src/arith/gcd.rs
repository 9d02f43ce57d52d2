//! Multivariate gcd over Q by recursive content / primitive-part extraction
//! and primitive pseudo-remainder sequences.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::poly::{Exponents, MultiPoly};
use super::Scalar;

/// Greatest common divisor, normalized to grevlex leading coefficient 1.
///
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    gcd_rec(a, b).monic()
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(n);
    }
    if a == b {
        return a.monic();
    }

    // split off the monomial content first
    let ea = a.min_exponents();
    let eb = b.min_exponents();
    if ea.iter().chain(&eb).any(|&e| e > 0) {
        let one = Scalar::from_integer(1.into());
        let e: Exponents = ea.iter().zip(&eb).map(|(p, q)| (*p).min(*q)).collect();
        let pa = a
            .div_exact(&MultiPoly::monomial(n, ea, one.clone()))
            .expect("monomial divides");
        let pb = b
            .div_exact(&MultiPoly::monomial(n, eb, one.clone()))
            .expect("monomial divides");
        return &gcd_rec(&pa, &pb) * &MultiPoly::monomial(n, e, one);
    }

    // the gcd only involves variables shared by both arguments
    let only_a: Vec<usize> = (0..=n).filter(|&v| a.contains_var(v) && !b.contains_var(v)).collect();
    if !only_a.is_empty() {
        return gcd_with_coeffs(b, a, &only_a);
    }
    let only_b: Vec<usize> = (0..=n).filter(|&v| b.contains_var(v) && !a.contains_var(v)).collect();
    if !only_b.is_empty() {
        return gcd_with_coeffs(a, b, &only_b);
    }

    // both involve the same variables
    let shared: Vec<usize> = (0..=n).filter(|&v| a.contains_var(v)).collect();
    if shared.len() > 1 {
        let bounds: Vec<u32> = shared.iter().map(|&v| image_degree_bound(a, b, v)).collect();
        if bounds.iter().all(|&d| d == 0) {
            return MultiPoly::one(n);
        }
        if let Some(i) = bounds.iter().position(|&d| d == 0) {
            let v = shared[i];
            let mut coeffs: Vec<MultiPoly> = a
                .coeffs_in(v)
                .into_values()
                .chain(b.coeffs_in(v).into_values())
                .collect();
            coeffs.sort_by_key(|c| c.num_terms());
            let mut g = MultiPoly::zero(n);
            for c in &coeffs {
                g = gcd_rec(&g, c);
                if g.is_constant() {
                    return MultiPoly::one(n);
                }
            }
            return g;
        }
    }
    let v = *shared
        .iter()
        .min_by_key(|&&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("non-constant polynomial has a variable");
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let gc = gcd_rec(&ca, &cb);
    let gp = primitive_prs(pa, pb, v);
    (&gc * &gp).monic()
}

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

fn scalar_mod(c: &Scalar) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let reduce = |z: &BigInt| ((z % &p + &p) % &p).to_u64().expect("residue fits in u64");
    let d = reduce(c.denom());
    (d != 0).then(|| mul_mod(reduce(c.numer()), inv_mod(d)))
}

/// Dense image of `a` in `F_p[v]` with the other variables set to `point`.
fn image_mod(a: &MultiPoly, v: usize, point: &[u64]) -> Option<Vec<u64>> {
    let mut out = vec![0u64; a.degree_in(v) as usize + 1];
    for (e, c) in a.terms() {
        let mut t = scalar_mod(c)?;
        for (w, &k) in e.iter().enumerate() {
            if w != v && k > 0 {
                t = mul_mod(t, pow_mod(point[w], k as u64));
            }
        }
        let slot = &mut out[e[v] as usize];
        *slot = (*slot + t) % PRIME;
    }
    Some(out)
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of the gcd of two nonzero dense polynomials over `F_p`.
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().expect("nonempty"));
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().expect("nonempty"), inv);
            let shift = a.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                let t = mul_mod(f, bi);
                a[i + shift] = (a[i + shift] + PRIME - t) % PRIME;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() - 1
}

/// Upper bound for the degree of `gcd(a, b)` in `v`, read off an image in
/// `F_p[v]` where both leading coefficients in `v` survive.
fn image_degree_bound(a: &MultiPoly, b: &MultiPoly, v: usize) -> u32 {
    let n = a.nvars();
    let (da, db) = (a.degree_in(v) as usize, b.degree_in(v) as usize);
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    for _ in 0..4 {
        let point: Vec<u64> = (0..=n)
            .map(|_| {
                seed = seed
                    .wrapping_mul(6_364_136_223_846_793_005)
                    .wrapping_add(1_442_695_040_888_963_407);
                (seed >> 3) % PRIME
            })
            .collect();
        let (Some(ia), Some(ib)) = (image_mod(a, v, &point), image_mod(b, v, &point)) else {
            break;
        };
        if ia[da] == 0 || ib[db] == 0 {
            continue;
        }
        return gcd_degree_mod(ia, ib) as u32;
    }
    da.min(db) as u32
}

/// gcd of `g` with `p`, where `vars` do not occur in `g`.
fn gcd_with_coeffs(g: &MultiPoly, p: &MultiPoly, vars: &[usize]) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = p.coeffs_in_vars(vars).into_values().collect();
    coeffs.sort_by_key(|c| c.num_terms());
    let mut g = g.monic();
    for c in &coeffs {
        g = gcd_rec(&g, c);
        if g.is_constant() {
            return MultiPoly::one(g.nvars());
        }
    }
    g
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub(crate) fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut g = MultiPoly::zero(p.nvars());
    for c in p.coeffs_in(v).values() {
        g = gcd_rec(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &MultiPoly, v: usize) -> MultiPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
fn prem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = b.degree_in(v);
    let lb = b.leading_coeff_in(v);
    let mut r = a.clone();
    let mut shift = vec![0; a.nvars() + 1];
    debug_assert!(db > 0);
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.leading_coeff_in(v);
        shift[v] = dr - db;
        let top = (&lr * b).mul_term(&shift, &Scalar::from_integer(1.into()));
        r = (&(&r * &lb) - &top).monic();
    }
    r
}

/// gcd of two polynomials primitive in `v`, both involving `v`.
fn primitive_prs(a: MultiPoly, b: MultiPoly, v: usize) -> MultiPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if a.div_exact(&b).is_some() {
            return b.monic();
        }
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return b.monic();
        }
        if !r.contains_var(v) {
            return MultiPoly::one(a.nvars());
        }
        a = b;
        b = primitive_part(&r, v);
    }
}
