use serde::Serialize;

use super::{stab_solve, Chamber, Mode, Polarization, StabMatrix};
use crate::error::{Error, Result};
use crate::geom::{FixedPoint, Geometry};
use crate::ring::{idx, LaurentPoly, Matrix, RationalFunction};

/// Stable envelope for the rank-one subtorus that separates the framing
/// `a₁ … a_m | a_{m+1} … aₙ`, in the basis of fixed-point idempotents of
/// `X(w₁) × X(w₂)`. Column `S` corresponds to the pair `(S ∩ [1, m], S ∖ [1, m] − m)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorStab {
    pub geometry: Geometry,
    pub split: usize,
    pub chamber: Chamber,
    pub rows: Vec<FixedPoint>,
    pub columns: Vec<(FixedPoint, FixedPoint)>,
    pub entries: Matrix,
}

fn split_label(s: &[usize], m: usize) -> (FixedPoint, FixedPoint) {
    let left = s.iter().copied().filter(|&i| i <= m).collect();
    let right = s.iter().copied().filter(|&i| i > m).map(|i| i - m).collect();
    (FixedPoint::Subset(left), FixedPoint::Subset(right))
}

fn shifted(p: &LaurentPoly, by: usize, n: usize) -> LaurentPoly {
    let mut out = p.clone();
    for i in (1..=n).rev() {
        out = out.rename_var(idx::a(i), idx::a(i + by));
    }
    out
}

/// `Stab_A = Stab_{A'} ∘ Stab_F` with F the A'-fixed locus, so
/// `Stab_{A'} = Stab_A · Stab_F⁻¹`. The chamber must separate the two
/// blocks of framing weights.
pub fn stab_tensor(g: &Geometry, split: usize, c: &Chamber, pol: Polarization) -> Result<TensorStab> {
    let Geometry::TgrUnion { n } = *g else {
        return Err(Error::UnsupportedFamily("tensor splittings need the union over k".into()));
    };
    if split > n {
        return Err(Error::Usage(format!("split {split} exceeds n = {n}")));
    }
    let full = stab_solve(g, c, Mode::H, None, pol)?;
    let subsets: Vec<Vec<usize>> = full.order.iter().map(|p| p.subset().unwrap().to_vec()).collect();
    let columns: Vec<(FixedPoint, FixedPoint)> = subsets.iter().map(|s| split_label(s, split)).collect();
    let np = subsets.len();
    if split == 0 || split == n {
        return Ok(TensorStab {
            geometry: *g,
            split,
            chamber: c.clone(),
            rows: full.order,
            columns,
            entries: Matrix::identity(np),
        });
    }
    let (left, right) = c.0.split_at(split);
    let separated = left.iter().all(|x| right.iter().all(|y| x > y)) || left.iter().all(|x| right.iter().all(|y| x < y));
    if !separated {
        return Err(Error::InvalidChamber(format!(
            "{:?} does not separate the first {split} framing weights",
            c.0
        )));
    }
    let factor = |m: usize, sigma: &[i64]| -> Result<StabMatrix> {
        stab_solve(&Geometry::TgrUnion { n: m }, &Chamber(sigma.to_vec()), Mode::H, None, pol)
    };
    let s1 = factor(split, left)?;
    let s2 = factor(n - split, right)?;
    let find = |m: &StabMatrix, p: &FixedPoint| m.order.iter().position(|x| x == p).unwrap();
    let fixed = Matrix::from_fn(np, np, |i, j| {
        let (a1, b1) = &columns[i];
        let (a2, b2) = &columns[j];
        let (i1, j1) = (find(&s1, a1), find(&s1, a2));
        let (i2, j2) = (find(&s2, b1), find(&s2, b2));
        let e = &s1.entries[i1][j1] * &shifted(&s2.entries[i2][j2], split, n - split);
        RationalFunction::from_poly(e)
    });
    let entries = full.to_matrix().checked_mul(&fixed.inverse()?)?;
    Ok(TensorStab {
        geometry: *g,
        split,
        chamber: c.clone(),
        rows: full.order,
        columns,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn middle_component_of_two_points() {
        let g = Geometry::TgrUnion { n: 2 };
        let t = stab_tensor(&g, 1, &Chamber::standard(2), Polarization::Base).unwrap();
        let s = stab_solve(&g, &Chamber::standard(2), Mode::H, None, Polarization::Base).unwrap();
        assert_eq!(t.entries, s.to_matrix());
        assert_eq!(t.columns[1], (FixedPoint::Subset(vec![1]), FixedPoint::Subset(vec![])));
    }

    #[test]
    fn degenerate_split_is_identity() {
        let g = Geometry::TgrUnion { n: 3 };
        for m in [0, 3] {
            assert!(stab_tensor(&g, m, &Chamber::standard(3), Polarization::Base)
                .unwrap()
                .entries
                .is_identity());
        }
    }

    #[test]
    fn independent_of_inner_chamber() {
        let g = Geometry::TgrUnion { n: 3 };
        let a = stab_tensor(&g, 2, &Chamber(vec![3, 2, 1]), Polarization::Base).unwrap();
        let b = stab_tensor(&g, 2, &Chamber(vec![2, 3, 1]), Polarization::Base).unwrap();
        assert_eq!(a.entries, b.entries);
        assert_eq!(a.columns.len(), 8);
        assert!(matches!(
            stab_tensor(&g, 2, &Chamber(vec![3, 1, 2]), Polarization::Base),
            Err(Error::InvalidChamber(_))
        ));
    }
}
