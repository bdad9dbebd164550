use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::gcd::{gcd, strip_monomial};
use super::poly::{LaurentPoly, Q};
use crate::error::{Error, Result};

/// Element of the fraction field of the Laurent polynomial ring.
///
/// Values are kept reduced (common factors removed, denominator free of
/// monomial factors, integer primitive with positive leading coefficient),
/// but equality is decided by cross-multiplication and never relies on the
/// reduction being complete.
#[derive(Clone)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(LaurentPoly::one())
    }

    pub fn from_int(n: i64) -> Self {
        RationalFunction::from_poly(LaurentPoly::from_int(n))
    }

    pub fn constant(c: Q) -> Self {
        RationalFunction::from_poly(LaurentPoly::constant(c))
    }

    pub fn var(i: usize) -> Self {
        RationalFunction::from_poly(LaurentPoly::var(i))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    /// Build `num / den`, reducing the fraction.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction::reduced(num, den))
    }

    fn reduced(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let (mut num, mut den) = (num, den);
        if !den.is_monomial() {
            let g = gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        // Move the monomial factor of the denominator to the numerator.
        let m = den.min_monomial();
        if !m.is_one() {
            num = num.mul_monomial(&m.inv());
            den = strip_monomial(&den);
        }
        let c = den.content();
        if !c.is_one() {
            let inv = c.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The Laurent polynomial this function equals, if the denominator is a
    /// constant.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        let c = self.den.constant_value()?;
        Some(self.num.scale(&c.recip()))
    }

    pub fn constant_value(&self) -> Option<Q> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e >= 0 {
            Ok(RationalFunction {
                num: self.num.pow(e as u32),
                den: self.den.pow(e as u32),
            })
        } else {
            self.inv()?.pow(-e)
        }
    }

    pub fn involves(&self, var: usize) -> bool {
        self.num.involves(var) || self.den.involves(var)
    }

    /// Substitute `value` for variable `var`.
    pub fn substitute(&self, var: usize, value: &RationalFunction) -> Result<Self> {
        let n = subst_poly(&self.num, var, value)?;
        let d = subst_poly(&self.den, var, value)?;
        n.checked_div(&d)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        RationalFunction::reduced(top, &self.den * &self.den)
    }

    pub fn rename_var(&self, from: usize, to: usize) -> Self {
        RationalFunction::reduced(self.num.rename_var(from, to), self.den.rename_var(from, to))
    }
}

/// Substitute into a Laurent polynomial, allowing negative powers of the
/// substituted variable.
pub fn subst_poly(p: &LaurentPoly, var: usize, value: &RationalFunction) -> Result<RationalFunction> {
    let coeffs = p.coefficients_in(var);
    let mut acc = RationalFunction::zero();
    for (e, c) in coeffs {
        let term = &RationalFunction::from_poly(c) * &value.pow(e)?;
        acc = &acc + &term;
    }
    Ok(acc)
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::reduced(&self.num + &rhs.num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RationalFunction::reduced(num, &self.den * &rhs.den);
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        RationalFunction::reduced(num, &(&d1 * &d2) * &g)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            let c = self.den.constant_value().unwrap() * rhs.den.constant_value().unwrap();
            return RationalFunction {
                num: (&self.num * &rhs.num).scale(&c.recip()),
                den: LaurentPoly::one(),
            };
        }
        // Cancel across before multiplying to keep sizes down.
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let mut out = RationalFunction { num, den };
        let m = out.den.min_monomial();
        if !m.is_one() {
            out.num = out.num.mul_monomial(&m.inv());
            out.den = strip_monomial(&out.den);
        }
        let c = out.den.content();
        if !c.is_one() {
            let inv = c.recip();
            out.num = out.num.scale(&inv);
            out.den = out.den.scale(&inv);
        }
        out
    }
}

fn cancel(n: &LaurentPoly, d: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if d.is_monomial() || n.is_monomial() {
        return (n.clone(), d.clone());
    }
    let g = gcd(n, d);
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::checked_div`]
    /// when the divisor may vanish.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

/// Sign of the grlex-leading coefficient; used by callers that need a
/// canonical sign choice.
pub fn leading_sign(p: &LaurentPoly) -> i32 {
    match p.leading_grlex() {
        None => 0,
        Some((_, c)) if c.is_negative() => -1,
        Some((_, c)) if c.is_zero() => 0,
        Some(_) => 1,
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl RationalFunction {
    /// True if the reduced denominator equals one (after normalization).
    pub fn den_is_one(&self) -> bool {
        self.den.is_one() || self.den.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::q;
    use crate::ring::vars::idx;

    fn hbar() -> RationalFunction {
        RationalFunction::var(idx::HBAR)
    }
    fn a() -> RationalFunction {
        RationalFunction::var(idx::a(1))
    }
    fn z() -> RationalFunction {
        RationalFunction::var(idx::Z)
    }
    fn one() -> RationalFunction {
        RationalFunction::one()
    }

    #[test]
    fn sum_cancels_to_one() {
        let d = &hbar() - &a();
        let x = &a() / &d;
        let y = &(&hbar() - &a().scale(&q(2))) / &d;
        let s = &x + &y;
        assert_eq!(s, one());
        assert!(s.is_polynomial());
    }

    #[test]
    fn factor_cancellation() {
        let f = &(&one() - &z().pow(2).unwrap()) / &(&one() - &z());
        let r = f.checked_div(&(&one() + &z())).unwrap();
        assert_eq!(r, one());
        assert!(r.den_is_one());
    }

    #[test]
    fn inverse_multiplies_to_one() {
        let h = &hbar() - &hbar().inv().unwrap();
        let r = &h * &h.inv().unwrap();
        assert_eq!(r, one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(one().checked_div(&RationalFunction::zero()), Err(Error::DivisionByZero));
        assert!(RationalFunction::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    }

    #[test]
    fn reduced_form_is_canonical() {
        let x = &(&a() * &(&hbar() + &a())) / &(&(&hbar() + &a()).scale(&q(-2)) * &a());
        assert_eq!(x, RationalFunction::constant(num_rational::BigRational::new((-1).into(), 2.into())));
        assert!(x.den().is_one());
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dz z/(1-z) = 1/(1-z)^2
        let f = &z() / &(&one() - &z());
        let df = f.derivative(idx::Z);
        let expect = &one() / &(&one() - &z()).pow(2).unwrap();
        assert_eq!(df, expect);
    }

    #[test]
    fn substitution_with_negative_powers() {
        // a^-1 with a -> hbar + 1
        let f = a().inv().unwrap();
        let v = &hbar() + &one();
        assert_eq!(f.substitute(idx::a(1), &v).unwrap(), v.inv().unwrap());
    }
}
