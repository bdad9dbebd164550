use super::poly::LaurentPoly;
use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};

type RF = RationalFunction;

/// Coefficients `c_0, ..., c_{order-1}` of the expansion
/// `f = Σ c_k var^{-k}` at `var → ∞`.
///
/// Fails with the pole order if the expansion starts at a positive power.
pub fn limit_at_infinity(f: &RF, var: usize, order: usize) -> Result<Vec<RF>> {
    if f.is_zero() {
        return Ok(vec![RF::zero(); order]);
    }
    let (ntop, nw) = reversed(f.num(), var);
    let (dtop, dw) = reversed(f.den(), var);
    let pole = ntop as i64 - dtop as i64;
    if pole > 0 {
        return Err(Error::PoleAtInfinity(pole));
    }
    // f = w^{-pole} · N(w)/D(w) with w = 1/var and D(0) ≠ 0.
    let shift = (-pole) as usize;
    let need = order.saturating_sub(shift);
    let d0 = dw[0].clone();
    let mut s: Vec<RF> = Vec::with_capacity(need);
    for k in 0..need {
        let mut acc = nw.get(k).cloned().unwrap_or_else(RF::zero);
        for j in 1..=k.min(dw.len().saturating_sub(1)) {
            if !dw[j].is_zero() && !s[k - j].is_zero() {
                acc = &acc - &(&dw[j] * &s[k - j]);
            }
        }
        s.push(acc.checked_div(&d0)?);
    }
    let mut out = vec![RF::zero(); order];
    for (k, c) in s.into_iter().enumerate() {
        out[k + shift] = c;
    }
    Ok(out)
}

/// Write `p = var^top · P(1/var)`; returns `top` and the coefficients of `P`
/// in increasing powers of `w = 1/var`.
fn reversed(p: &LaurentPoly, var: usize) -> (i32, Vec<RF>) {
    let coeffs = p.coefficients_in(var);
    let top = *coeffs.keys().next_back().expect("nonzero polynomial");
    let bottom = *coeffs.keys().next().unwrap();
    let mut w = vec![RF::zero(); (top - bottom) as usize + 1];
    for (e, c) in coeffs {
        w[(top - e) as usize] = RF::from_poly(c);
    }
    (top, w)
}

/// Re-sum a truncated expansion: `Σ c_k var^{-k}`.
pub fn resum(coeffs: &[RF], var: usize) -> RF {
    let mut acc = RF::zero();
    for (k, c) in coeffs.iter().enumerate() {
        let t = RF::from_poly(LaurentPoly::var_pow(var, -(k as i32)));
        acc = &acc + &(c * &t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::text::parse_ratfunc;
    use crate::ring::vars::idx;

    fn rf(s: &str) -> RF {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn entry_of_normalized_r() {
        let c = limit_at_infinity(&rf("hbar/(hbar + a1)"), idx::a(1), 2).unwrap();
        assert_eq!(c, vec![rf("0"), rf("hbar")]);
        let c = limit_at_infinity(&rf("hbar/(hbar + a1)"), idx::a(1), 3).unwrap();
        assert_eq!(c[2], rf("-hbar^2"));
    }

    #[test]
    fn constants_and_poles() {
        assert_eq!(limit_at_infinity(&rf("1"), idx::a(1), 2).unwrap(), vec![rf("1"), rf("0")]);
        assert_eq!(limit_at_infinity(&rf("a1"), idx::a(1), 2), Err(Error::PoleAtInfinity(1)));
        assert_eq!(
            limit_at_infinity(&rf("(a1^3 + hbar)/(a1 - 1)"), idx::a(1), 1),
            Err(Error::PoleAtInfinity(2))
        );
    }

    #[test]
    fn laurent_numerator() {
        // (1 + a^-1) / (1 - a^-2) = 1/(1 - a^-1) = Σ a^-k
        let f = rf("(1 + a1^-1)/(1 - a1^-2)");
        let c = limit_at_infinity(&f, idx::a(1), 4).unwrap();
        assert_eq!(c, vec![rf("1"); 4]);
    }

    #[test]
    fn resummation_matches_up_to_order() {
        let f = rf("(hbar*a1 + 3)/(a1^2 - hbar*a1 + z)");
        let c = limit_at_infinity(&f, idx::a(1), 5).unwrap();
        let rest = &f - &resum(&c, idx::a(1));
        // The remainder is O(a^-5).
        let scaled = &rest * &rf("a1^4");
        assert_eq!(limit_at_infinity(&scaled, idx::a(1), 1).unwrap(), vec![rf("0")]);
    }
}
