//! Multivariate polynomial gcd over Q.
//!
//! Recursive primitive-PRS: view each polynomial as univariate in its highest
//! variable with coefficients in the remaining ones, split off the content,
//! and run a primitive pseudo-remainder sequence on the primitive parts.
//! Monomials are units in the Laurent ring, so they are stripped first.

use super::poly::{LaurentPoly, Monomial};

/// Gcd in the Laurent ring, normalized to an integer primitive polynomial
/// with positive leading coefficient and no monomial factor.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let a = strip_monomial(a);
    let b = strip_monomial(b);
    poly_gcd(&a, &b)
}

pub(crate) fn strip_monomial(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return p.clone();
    }
    let m = p.min_monomial();
    if m.is_one() {
        p.clone()
    } else {
        p.mul_monomial(&m.inv())
    }
}

fn normalize(p: LaurentPoly) -> LaurentPoly {
    strip_monomial(&p.primitive())
}

fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return normalize(b.clone());
    }
    if b.is_zero() {
        return normalize(a.clone());
    }
    if a.is_constant() || b.is_constant() {
        return LaurentPoly::one();
    }
    if a == b {
        return normalize(a.clone());
    }
    let v = match (a.max_var(), b.max_var()) {
        (Some(x), Some(y)) => x.max(y),
        _ => return LaurentPoly::one(),
    };
    if !a.involves(v) {
        return poly_gcd(a, &content_in(b, v));
    }
    if !b.involves(v) {
        return poly_gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = poly_gcd(&ca, &cb);
    let mut pa = a.div_exact(&ca).expect("content divides");
    let mut pb = b.div_exact(&cb).expect("content divides");
    if pa.degree_in_var(v) < pb.degree_in_var(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g = loop {
        let r = pseudo_rem(&pa, &pb, v);
        if r.is_zero() {
            break pb;
        }
        if r.degree_in_var(v).unwrap_or(0) == 0 {
            break LaurentPoly::one();
        }
        pa = pb;
        pb = primitive_in(&r, v);
    };
    let g = primitive_in(&g, v);
    normalize(&c * &g)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let coeffs = p.coefficients_in(v);
    let mut g = LaurentPoly::zero();
    for c in coeffs.values() {
        g = poly_gcd(&g, c);
        if g.is_constant() && !g.is_zero() {
            return LaurentPoly::one();
        }
    }
    g
}

fn primitive_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let c = content_in(p, v);
    if c.is_one() {
        p.primitive()
    } else {
        p.div_exact(&c).expect("content divides").primitive()
    }
}

/// Sparse pseudo-remainder of `a` by `b` in the variable `v`.
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> LaurentPoly {
    let db = b.degree_in_var(v).unwrap_or(0);
    let lb = b.coefficients_in(v).remove(&db).unwrap_or_default();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in_var(v).unwrap_or(0);
        if dr < db {
            return r;
        }
        let lr = r.coefficients_in(v).remove(&dr).unwrap_or_default();
        let shift = LaurentPoly::term(num_traits::One::one(), Monomial::var(v, dr - db));
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
        // Keep coefficient growth in check.
        r = r.primitive();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::q;

    fn v(i: usize) -> LaurentPoly {
        LaurentPoly::var(i)
    }
    fn c(n: i64) -> LaurentPoly {
        LaurentPoly::from_int(n)
    }

    #[test]
    fn univariate_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = &(&v(0) - &c(1)) * &(&v(0) + &c(2));
        let b = &(&v(0) - &c(1)) * &(&v(0) - &c(3));
        assert_eq!(gcd(&a, &b), &v(0) - &c(1));
    }

    #[test]
    fn multivariate_gcd_with_content() {
        let f = &v(0) - &v(1);
        let g1 = &v(2) + &c(1);
        let h1 = &(&v(0) * &v(2)) + &v(1);
        let a = &(&f * &g1) * &c(6);
        let b = &(&f * &h1).scale(&q(4)) * &v(2);
        let g = gcd(&a, &b);
        assert_eq!(g, f.primitive());
    }

    #[test]
    fn laurent_monomials_are_units() {
        let a = LaurentPoly::var_pow(0, -3);
        let b = &v(0) + &c(1);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn gcd_of_equal_up_to_scalar() {
        let a = &v(3) - &v(7);
        let b = a.scale(&q(-5));
        assert_eq!(gcd(&a, &b), a.primitive());
    }
}
