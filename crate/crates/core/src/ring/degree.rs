//! Degrees of Laurent polynomials in a subset of variables: total degree in
//! cohomology, Newton polytope in K-theory.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::fm::{feasible, Constraint};
use super::poly::{LaurentPoly, Q};
use crate::error::{Error, Result};

/// Total degree of `p` in the variables `subset`.
pub fn a_degree(p: &LaurentPoly, subset: &[usize]) -> Result<i64> {
    p.terms()
        .map(|(m, _)| m.degree_in(subset))
        .max()
        .ok_or(Error::ZeroPolynomial)
}

/// Exponent vectors of `p` projected to `subset`, deduplicated.
pub fn projected_exponents(p: &LaurentPoly, subset: &[usize]) -> BTreeSet<Vec<i64>> {
    p.terms()
        .map(|(m, _)| subset.iter().map(|&v| m.exp(v) as i64).collect())
        .collect()
}

/// Convex hull of projected exponents, stored by its vertices translated so
/// that the lexicographically smallest one is the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolytope {
    pub vertices: Vec<Vec<i64>>,
}

impl NewtonPolytope {
    pub fn dim(&self) -> usize {
        self.vertices.first().map(|v| v.len()).unwrap_or(0)
    }

    /// Width along each coordinate (for a segment in one variable, its length).
    pub fn widths(&self) -> Vec<i64> {
        (0..self.dim())
            .map(|i| {
                let it = self.vertices.iter().map(|v| v[i]);
                it.clone().max().unwrap() - it.min().unwrap()
            })
            .collect()
    }
}

pub fn newton_polytope(p: &LaurentPoly, subset: &[usize]) -> Result<NewtonPolytope> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pts: Vec<Vec<i64>> = projected_exponents(p, subset).into_iter().collect();
    let mut vertices: Vec<Vec<i64>> = (0..pts.len())
        .filter(|&i| {
            let others: Vec<&Vec<i64>> = pts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v)
                .collect();
            !in_hull(&pts[i], &others)
        })
        .map(|i| pts[i].clone())
        .collect();
    vertices.sort();
    let base = vertices[0].clone();
    for v in &mut vertices {
        for (x, b) in v.iter_mut().zip(&base) {
            *x -= b;
        }
    }
    Ok(NewtonPolytope { vertices })
}

/// Is `p` a convex combination of `pts`?
pub fn in_hull(p: &[i64], pts: &[&Vec<i64>]) -> bool {
    if pts.is_empty() {
        return false;
    }
    let k = pts.len();
    let mut cs = Vec::new();
    for j in 0..k {
        let mut c = vec![Q::zero(); k];
        c[j] = Q::one();
        cs.push(Constraint::ge(c, Q::zero()));
    }
    cs.extend(Constraint::eq(vec![Q::one(); k], Q::one()));
    for (d, &target) in p.iter().enumerate() {
        let c: Vec<Q> = pts.iter().map(|v| Q::from_integer(v[d].into())).collect();
        cs.extend(Constraint::eq(c, Q::from_integer(target.into())));
    }
    feasible(k, &cs).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::text::parse_poly;
    use crate::ring::vars::idx;

    #[test]
    fn cohomological_degrees() {
        let a = [idx::a(1)];
        assert_eq!(a_degree(&parse_poly("hbar - a1").unwrap(), &a), Ok(1));
        assert_eq!(a_degree(&parse_poly("hbar").unwrap(), &a), Ok(0));
        assert_eq!(a_degree(&LaurentPoly::zero(), &a), Err(Error::ZeroPolynomial));
        let both = [idx::a(1), idx::a(2)];
        assert_eq!(a_degree(&parse_poly("a1*a2 - hbar^3").unwrap(), &both), Ok(2));
    }

    #[test]
    fn newton_segment() {
        let p = parse_poly("1 + a1^2*hbar").unwrap();
        let np = newton_polytope(&p, &[idx::a(1)]).unwrap();
        assert_eq!(np.vertices, vec![vec![0], vec![2]]);
        assert_eq!(np.widths(), vec![2]);
    }

    #[test]
    fn newton_square_drops_interior_points() {
        let p = parse_poly("(1 + a1)^2*(1 + a2)^2").unwrap();
        let np = newton_polytope(&p, &[idx::a(1), idx::a(2)]).unwrap();
        assert_eq!(np.vertices, vec![vec![0, 0], vec![0, 2], vec![2, 0], vec![2, 2]]);
        let p = parse_poly("a1^-1*a2 + a1 + a2^-1").unwrap();
        assert_eq!(newton_polytope(&p, &[idx::a(1), idx::a(2)]).unwrap().vertices.len(), 3);
    }
}
