//! Exact feasibility of linear inequality systems by Fourier–Motzkin
//! elimination, with strict inequalities and a rational witness point.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use super::poly::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    /// `coeffs · x ≥ rhs`
    Ge,
    /// `coeffs · x > rhs`
    Gt,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Rel,
    pub rhs: Q,
}

impl Constraint {
    pub fn ge(coeffs: Vec<Q>, rhs: Q) -> Self {
        Constraint {
            coeffs,
            rel: Rel::Ge,
            rhs,
        }
    }

    pub fn gt(coeffs: Vec<Q>, rhs: Q) -> Self {
        Constraint {
            coeffs,
            rel: Rel::Gt,
            rhs,
        }
    }

    /// `coeffs · x = rhs` as two inequalities.
    pub fn eq(coeffs: Vec<Q>, rhs: Q) -> [Self; 2] {
        let neg: Vec<Q> = coeffs.iter().map(|c| -c).collect();
        [Constraint::ge(coeffs, rhs.clone()), Constraint::ge(neg, -rhs)]
    }

    pub fn holds_at(&self, x: &[Q]) -> bool {
        let v: Q = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.rel {
            Rel::Ge => v >= self.rhs,
            Rel::Gt => v > self.rhs,
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn trivially_true(&self) -> bool {
        let zero = Q::zero();
        match self.rel {
            Rel::Ge => zero >= self.rhs,
            Rel::Gt => zero > self.rhs,
        }
    }

    /// Scale so the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(c) = self.coeffs.iter().find(|c| !c.is_zero()).cloned() {
            let s = c.abs().recip();
            for x in &mut self.coeffs {
                *x *= &s;
            }
            self.rhs *= &s;
        }
        self
    }
}

/// Returns a point satisfying every constraint, or `None` if the system is
/// infeasible. All constraints must have `n` coefficients.
pub fn feasible(n: usize, constraints: &[Constraint]) -> Option<Vec<Q>> {
    let mut stages: Vec<Vec<Constraint>> = Vec::with_capacity(n + 1);
    let mut cur = prune(constraints.to_vec())?;
    for k in 0..n {
        stages.push(cur.clone());
        cur = prune(eliminate(&cur, k))?;
    }
    // Reconstruct from the last variable backwards.
    let mut x = vec![Q::zero(); n];
    for k in (0..n).rev() {
        x[k] = pick(&stages[k], k, &x)?;
    }
    debug_assert!(constraints.iter().all(|c| c.holds_at(&x)));
    Some(x)
}

fn prune(cs: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in cs {
        if c.is_trivial() {
            if !c.trivially_true() {
                return None;
            }
            continue;
        }
        let c = c.normalized();
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Some(dominate(out))
}

/// Among constraints with identical left-hand sides keep only the tightest.
fn dominate(cs: Vec<Constraint>) -> Vec<Constraint> {
    let mut best: Vec<Constraint> = Vec::new();
    'outer: for c in cs {
        for b in best.iter_mut() {
            if b.coeffs == c.coeffs {
                let tighter = c.rhs > b.rhs || (c.rhs == b.rhs && c.rel == Rel::Gt);
                if tighter {
                    *b = c;
                }
                continue 'outer;
            }
        }
        best.push(c);
    }
    best
}

fn eliminate(cs: &[Constraint], k: usize) -> Vec<Constraint> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for c in cs {
        let a = &c.coeffs[k];
        if a.is_positive() {
            pos.push(c);
        } else if a.is_negative() {
            neg.push(c);
        } else {
            out.push(c.clone());
        }
    }
    for p in &pos {
        for m in &neg {
            // p: a x_k + ... ≥ r,  m: -b x_k + ... ≥ s  with a, b > 0.
            let a = &p.coeffs[k];
            let b = -&m.coeffs[k];
            let coeffs: Vec<Q> = p
                .coeffs
                .iter()
                .zip(&m.coeffs)
                .map(|(x, y)| x * &b + y * a)
                .collect();
            let rhs = &p.rhs * &b + &m.rhs * a;
            let rel = if p.rel == Rel::Gt || m.rel == Rel::Gt {
                Rel::Gt
            } else {
                Rel::Ge
            };
            out.push(Constraint { coeffs, rel, rhs });
        }
    }
    out
}

/// Choose `x_k` given `x_{k+1..}`, from the constraints of stage `k`.
fn pick(cs: &[Constraint], k: usize, x: &[Q]) -> Option<Q> {
    let mut lo: Option<(Q, bool)> = None;
    let mut hi: Option<(Q, bool)> = None;
    for c in cs {
        let a = &c.coeffs[k];
        if a.is_zero() {
            continue;
        }
        let rest: Q = c
            .coeffs
            .iter()
            .zip(x)
            .enumerate()
            .filter(|(j, _)| *j > k)
            .map(|(_, (u, v))| u * v)
            .sum();
        let bound = (&c.rhs - rest) / a;
        let strict = c.rel == Rel::Gt;
        if a.is_positive() {
            // x_k ≥ bound
            let better = match &lo {
                None => true,
                Some((b, s)) => bound > *b || (bound == *b && strict && !s),
            };
            if better {
                lo = Some((bound, strict));
            }
        } else {
            let better = match &hi {
                None => true,
                Some((b, s)) => bound < *b || (bound == *b && strict && !s),
            };
            if better {
                hi = Some((bound, strict));
            }
        }
    }
    let v = match (lo, hi) {
        (None, None) => Q::zero(),
        (Some((l, s)), None) => {
            if s {
                l + Q::one()
            } else {
                l
            }
        }
        (None, Some((h, s))) => {
            if s {
                h - Q::one()
            } else {
                h
            }
        }
        (Some((l, ls)), Some((h, hs))) => {
            if l > h || (l == h && (ls || hs)) {
                return None;
            }
            if l == h {
                l
            } else {
                (l + h) / Q::from_integer(2.into())
            }
        }
    };
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::{q, qr};

    #[test]
    fn open_triangle() {
        // x > 0, y > 0, x + y < 1
        let cs = vec![
            Constraint::gt(vec![q(1), q(0)], q(0)),
            Constraint::gt(vec![q(0), q(1)], q(0)),
            Constraint::gt(vec![q(-1), q(-1)], q(-1)),
        ];
        let x = feasible(2, &cs).unwrap();
        assert!(cs.iter().all(|c| c.holds_at(&x)));
    }

    #[test]
    fn strictness_matters() {
        // x ≥ 1 and x ≤ 1 is feasible; x > 1 and x ≤ 1 is not.
        let a = vec![Constraint::ge(vec![q(1)], q(1)), Constraint::ge(vec![q(-1)], q(-1))];
        assert_eq!(feasible(1, &a), Some(vec![q(1)]));
        let b = vec![Constraint::gt(vec![q(1)], q(1)), Constraint::ge(vec![q(-1)], q(-1))];
        assert_eq!(feasible(1, &b), None);
    }

    #[test]
    fn equalities() {
        // x + y = 1/2, x - y = 0
        let mut cs = Vec::new();
        cs.extend(Constraint::eq(vec![q(1), q(1)], qr(1, 2)));
        cs.extend(Constraint::eq(vec![q(1), q(-1)], q(0)));
        assert_eq!(feasible(2, &cs), Some(vec![qr(1, 4), qr(1, 4)]));
    }

    #[test]
    fn infeasible_cone() {
        // x > y, y > z, z > x
        let cs = vec![
            Constraint::gt(vec![q(1), q(-1), q(0)], q(0)),
            Constraint::gt(vec![q(0), q(1), q(-1)], q(0)),
            Constraint::gt(vec![q(-1), q(0), q(1)], q(0)),
        ];
        assert_eq!(feasible(3, &cs), None);
    }
}
