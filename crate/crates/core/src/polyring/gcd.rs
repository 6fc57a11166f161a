//! Multivariate gcd over ℤ by the recursive primitive-PRS algorithm: the
//! polynomials are viewed as univariate in their last variable over the ring of
//! the remaining ones, split into content and primitive part, and the primitive
//! parts run through a pseudo-remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;

use super::poly::{Monomial, MultiPoly};

/// Greatest common divisor including integer content, normalized to a positive
/// graded-lex leading coefficient. `gcd(f, 0)` is `f` normalized; `gcd(0, 0) = 0`.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    assert_eq!(f.nvars(), g.nvars(), "nvars mismatch in gcd");
    if f.is_zero() {
        return g.clone().normalize_sign();
    }
    if g.is_zero() {
        return f.clone().normalize_sign();
    }
    let vars: Vec<usize> = (0..f.nvars())
        .filter(|&v| f.involves(v) || g.involves(v))
        .collect();
    gcd_rec(f, g, &vars).normalize_sign()
}

/// gcd of a list; zero entries are ignored.
pub fn gcd_all<'a, I>(nvars: usize, polys: I) -> MultiPoly
where
    I: IntoIterator<Item = &'a MultiPoly>,
{
    let mut acc = MultiPoly::zero(nvars);
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = gcd(&acc, p);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// Least common multiple, normalized like [`gcd`].
pub fn lcm(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() || g.is_zero() {
        return MultiPoly::zero(f.nvars());
    }
    let d = gcd(f, g);
    let q = f.try_div_exact(&d).expect("gcd divides its argument");
    (&q * g).normalize_sign()
}

// Both inputs nonzero and only involving `vars`. Result correct up to sign.
fn gcd_rec(f: &MultiPoly, g: &MultiPoly, vars: &[usize]) -> MultiPoly {
    let nvars = f.nvars();
    let Some((&v, rest)) = vars.split_last() else {
        let a = f.constant_value().expect("constant");
        let b = g.constant_value().expect("constant");
        return MultiPoly::constant(a.gcd(&b), nvars);
    };
    if !f.involves(v) && !g.involves(v) {
        return gcd_rec(f, g, rest);
    }
    if f == g {
        return f.clone();
    }

    let (cf, pf) = content_primitive(f, v, rest);
    let (cg, pg) = content_primitive(g, v, rest);
    let c = gcd_rec(&cf, &cg, rest);

    let (mut a, mut b) = if pf.degree_in(v) >= pg.degree_in(v) {
        (pf, pg)
    } else {
        (pg, pf)
    };
    while !b.is_zero() {
        if b.degree_in(v) == Some(0) {
            // primitive and free of v: a unit
            return c;
        }
        let r = pseudo_rem(&a, &b, v);
        a = b;
        b = if r.is_zero() {
            r
        } else {
            content_primitive(&r, v, rest).1
        };
    }
    &c * &a
}

/// Splits `f` (nonzero) into its content with respect to `v`, a polynomial in
/// `rest`, and the primitive part.
fn content_primitive(f: &MultiPoly, v: usize, rest: &[usize]) -> (MultiPoly, MultiPoly) {
    let coeffs: Vec<MultiPoly> = f.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    let mut content = coeffs[0].clone();
    for c in &coeffs[1..] {
        if is_unit(&content) {
            break;
        }
        content = gcd_rec(&content, c, rest);
    }
    let content = content.normalize_sign();
    let primitive = f
        .try_div_exact(&content)
        .expect("content divides the polynomial");
    (content, primitive)
}

fn is_unit(p: &MultiPoly) -> bool {
    p.constant_value()
        .is_some_and(|c| c == BigInt::from(1) || c == BigInt::from(-1))
}

/// A nonzero multiple of the pseudo-remainder of `a` by `b` in the variable `v`.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let nvars = a.nvars();
    let db = b.degree_in(v).expect("nonzero divisor");
    let lb = b.lead_coeff_in(v);
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(v) {
        if dr < db {
            break;
        }
        let lr = r.lead_coeff_in(v);
        let mut e = vec![0; nvars];
        e[v] = dr - db;
        let shift = Monomial::new(e);
        let t = (&lr * b).mul_term(&shift, &BigInt::from(1));
        r = &(&lb * &r) - &t;
    }
    r
}
