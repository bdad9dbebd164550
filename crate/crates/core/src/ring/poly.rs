use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational coefficient.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector indexed by variable position. Trailing zeros are never
/// stored. `Ord` is lexicographic with variable 0 most significant, missing
/// positions read as zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<i32>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let n = self.0.len().max(other.0.len());
        for i in 0..n {
            let c = self.exp(i).cmp(&other.exp(i));
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_exps(mut exps: Vec<i32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(i: usize, e: i32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Monomial::from_exps(v)
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> i32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn degree_in(&self, vars: &[usize]) -> i64 {
        vars.iter().map(|&i| self.exp(i) as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.exp(i) + other.exp(i)).collect();
        Monomial::from_exps(v)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    /// True if every exponent of `other` is at most the matching exponent here.
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        let n = self.0.len().max(other.0.len());
        (0..n).all(|i| self.exp(i) >= other.exp(i))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn with_exp(&self, i: usize, e: i32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        Monomial::from_exps(v)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial::from_exps((0..n).map(|i| self.exp(i).min(other.exp(i))).collect())
    }

    /// Graded lexicographic comparison used for canonical output.
    pub fn cmp_grlex(&self, other: &Monomial) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.cmp(other))
    }
}

/// Sparse Laurent polynomial with rational coefficients. No zero coefficient
/// is ever stored; the zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly(")?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{:?}", m.0)?;
        }
        write!(f, ")")
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        LaurentPoly::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        LaurentPoly::constant(q(n))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        LaurentPoly::term(Q::one(), Monomial::var(i, 1))
    }

    pub fn var_pow(i: usize, e: i32) -> Self {
        LaurentPoly::term(Q::one(), Monomial::var(i, e))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            Some(Q::zero())
        } else if self.is_constant() {
            self.terms.get(&Monomial::one()).cloned()
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Highest variable index that appears with a nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter_map(|m| m.0.iter().rposition(|&e| e != 0))
            .max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) != 0)
    }

    pub fn vars_used(&self) -> Vec<usize> {
        let mut used = std::collections::BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    used.insert(i);
                }
            }
        }
        used.into_iter().collect()
    }

    pub fn degree_in_var(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(var)).max()
    }

    pub fn min_degree_in_var(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.exp(var)).min()
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Componentwise minimum of all exponent vectors.
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.is_nonnegative())
    }

    pub fn leading_grlex(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().max_by(|a, b| a.0.cmp_grlex(b.0))
    }

    pub fn leading_lex(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Q) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.mul(mono), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Rational content: gcd of numerators over lcm of denominators, with
    /// the sign of the grlex-leading coefficient.
    pub fn content(&self) -> Q {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Q::one();
        }
        let mut content = Q::new(num, den);
        if let Some((_, lc)) = self.leading_grlex() {
            if lc.is_negative() {
                content = -content;
            }
        }
        content
    }

    /// Integer-coefficient primitive associate with positive leading coefficient.
    pub fn primitive(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        self.scale(&self.content().recip())
    }

    pub fn derivative(&self, var: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e != 0 {
                out.add_term(m.with_exp(var, e - 1), c * q(e as i64));
            }
        }
        out
    }

    /// Substitute a polynomial for a variable that only occurs with
    /// nonnegative exponents. Returns `None` when the variable occurs with a
    /// negative exponent (use the rational-function version then).
    pub fn substitute(&self, var: usize, value: &LaurentPoly) -> Option<LaurentPoly> {
        if self.min_degree_in_var(var).unwrap_or(0) < 0 {
            return None;
        }
        let mut by_power: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_power
                .entry(m.exp(var))
                .or_default()
                .add_term(m.with_exp(var, 0), c.clone());
        }
        // Horner in the substituted variable.
        let top = *by_power.keys().next_back().unwrap_or(&0);
        let mut acc = LaurentPoly::zero();
        for e in (0..=top).rev() {
            acc = &acc * value;
            if let Some(c) = by_power.get(&e) {
                acc = &acc + c;
            }
        }
        Some(acc)
    }

    /// Replace variable `from` by variable `to` (a monomial substitution,
    /// always defined for Laurent polynomials).
    pub fn rename_var(&self, from: usize, to: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(from);
            let base = m.with_exp(from, 0);
            let m2 = base.with_exp(to, base.exp(to) + e);
            out.add_term(m2, c.clone());
        }
        out
    }

    /// Group terms by the exponent of `var`; coefficients do not involve `var`.
    pub fn coefficients_in(&self, var: usize) -> BTreeMap<i32, LaurentPoly> {
        let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp(var))
                .or_default()
                .add_term(m.with_exp(var, 0), c.clone());
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Q) -> Q) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Exact quotient `self / other` in the Laurent ring, if it exists.
    pub fn div_exact(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        if other.is_monomial() {
            let (m, c) = other.terms.iter().next().unwrap();
            return Some(self.mul_monomial(&m.inv()).scale(&c.recip()));
        }
        let ma = self.min_monomial();
        let mb = other.min_monomial();
        let a = self.mul_monomial(&ma.inv());
        let b = other.mul_monomial(&mb.inv());
        div_exact_poly(&a, &b).map(|qt| qt.mul_monomial(&ma.div(&mb)))
    }
}

/// Multivariate division of genuine polynomials with the lex order; `None`
/// when the remainder is nonzero.
pub(crate) fn div_exact_poly(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let (lm_b, lc_b) = {
        let (m, c) = b.leading_lex()?;
        (m.clone(), c.clone())
    };
    let mut rem = a.clone();
    let mut quot = LaurentPoly::zero();
    while let Some((lm_r, lc_r)) = rem.leading_lex() {
        if !lm_r.divisible_by(&lm_b) {
            return None;
        }
        let m = lm_r.div(&lm_b);
        let c = lc_r / &lc_b;
        let t = LaurentPoly::term(c.clone(), m.clone());
        rem = &rem - &(&t * b);
        quot.add_term(m, c);
    }
    Some(quot)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> LaurentPoly {
        LaurentPoly::var(0)
    }
    fn y() -> LaurentPoly {
        LaurentPoly::var(1)
    }

    #[test]
    fn monomial_trailing_zeros_are_trimmed() {
        assert_eq!(Monomial::from_exps(vec![1, 0, 0]), Monomial::var(0, 1));
        assert!(Monomial::from_exps(vec![0, 0]).is_one());
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &x() - &x();
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn exact_division() {
        let a = &(&x() + &y()) * &(&x() - &y());
        let b = &x() - &y();
        assert_eq!(a.div_exact(&b), Some(&x() + &y()));
        assert_eq!(x().div_exact(&(&x() + &y())), None);
    }

    #[test]
    fn laurent_division_by_monomial() {
        let a = &x() + &LaurentPoly::one();
        let q = a.div_exact(&x()).unwrap();
        assert_eq!(q, &LaurentPoly::one() + &LaurentPoly::var_pow(0, -1));
    }

    #[test]
    fn substitution_horner() {
        // (x^2 + y) with x -> y + 1
        let p = &x().pow(2) + &y();
        let v = &y() + &LaurentPoly::one();
        let r = p.substitute(0, &v).unwrap();
        let expect = &(&v * &v) + &y();
        assert_eq!(r, expect);
    }

    #[test]
    fn derivative_of_laurent_term() {
        let p = LaurentPoly::var_pow(0, -2);
        assert_eq!(p.derivative(0), LaurentPoly::var_pow(0, -3).scale(&q(-2)));
    }

    #[test]
    fn content_and_primitive() {
        let p = &x().scale(&qr(-2, 3)) + &LaurentPoly::constant(qr(4, 9));
        let pr = p.primitive();
        assert_eq!(pr, &x().scale(&q(3)) - &LaurentPoly::from_int(2));
    }
}
