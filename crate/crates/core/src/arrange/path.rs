use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Arrangement, Region};
use crate::error::{Error, Result};
use crate::ring::poly::Q;
use crate::ring::qserde;

const MAX_CROSSINGS: usize = 10_000;

/// `c₀ + c₁ε + c₂ε² + …` for an infinitesimal `ε > 0`, compared
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EpsValue(#[serde(with = "qserde::vec")] pub Vec<Q>);

impl EpsValue {
    pub fn constant(&self) -> &Q {
        &self.0[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCrossing {
    /// Index into [`Arrangement::hyperplanes`].
    pub hyperplane: usize,
    /// Offset of the translate actually crossed (equal to the hyperplane's
    /// own offset for central arrangements).
    #[serde(with = "qserde")]
    pub offset: Q,
    /// Segment parameter of the crossing, in `(0, 1)`.
    pub t: EpsValue,
    /// `+1` when passing from the negative to the positive side.
    pub direction: i8,
}

/// Ordered walls crossed by the segment from `from.point` to
/// `from.point + shift`.
pub fn crossing_path(arr: &Arrangement, from: &Region, shift: &[Q]) -> Result<Vec<WallCrossing>> {
    crossing_path_from(arr, &from.point, shift)
}

/// As [`crossing_path`], from an arbitrary start point. The start is
/// perturbed to `start + (ε, ε², …, εⁿ)`, which makes every crossing
/// parameter distinct and the ordering reproducible: reversing the segment
/// reverses the list exactly.
pub fn crossing_path_from(arr: &Arrangement, start: &[Q], shift: &[Q]) -> Result<Vec<WallCrossing>> {
    if start.len() != arr.dim || shift.len() != arr.dim {
        return Err(Error::DimensionMismatch("point dimension".into()));
    }
    let mut out = Vec::new();
    for (hi, h) in arr.hyperplanes.iter().enumerate() {
        let nq = h.normal_q();
        let s: Q = nq.iter().zip(shift).map(|(a, b)| a * b).sum();
        if s.is_zero() {
            continue;
        }
        let v0: Q = nq.iter().zip(start).map(|(a, b)| a * b).sum();
        let v1 = &v0 + &s;
        let (lo, up) = if s.is_positive() { (&v0, &v1) } else { (&v1, &v0) };
        let offsets: Vec<Q> = if arr.periodic {
            let first = (lo - &h.offset).ceil();
            let last = (up - &h.offset).floor();
            let count = (&last - &first).to_integer();
            if count > num_bigint::BigInt::from(MAX_CROSSINGS) {
                return Err(Error::InvalidArrangement("segment crosses too many walls".into()));
            }
            let mut v = Vec::new();
            let mut m = first;
            while m <= last {
                v.push(&h.offset + &m);
                m += Q::one();
            }
            v
        } else if &h.offset >= lo && &h.offset <= up {
            vec![h.offset.clone()]
        } else {
            vec![]
        };
        for c in offsets {
            let mut t = vec![(&c - &v0) / &s];
            t.extend(nq.iter().map(|a| -(a / &s)));
            let t = EpsValue(t);
            let zero = EpsValue(vec![Q::zero(); arr.dim + 1]);
            let mut one = zero.clone();
            one.0[0] = Q::one();
            if t > zero && t < one {
                out.push(WallCrossing {
                    hyperplane: hi,
                    offset: c,
                    t,
                    direction: if s.is_positive() { 1 } else { -1 },
                });
            }
        }
        if out.len() > MAX_CROSSINGS {
            return Err(Error::InvalidArrangement("segment crosses too many walls".into()));
        }
    }
    out.sort_by(|a, b| a.t.cmp(&b.t));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrange::Hyperplane;
    use crate::ring::poly::{q, qr};

    fn half_integers() -> Arrangement {
        Arrangement::periodic(1, vec![(vec![1], q(0)), (vec![2], q(0))], vec![(q(-2), q(2))]).unwrap()
    }

    #[test]
    fn alcove_to_shifted_alcove() {
        let a = half_integers();
        let w = crossing_path_from(&a, &[qr(-1, 4)], &[q(-1)]).unwrap();
        let offs: Vec<Q> = w.iter().map(|c| c.offset.clone()).collect();
        assert_eq!(offs, vec![qr(-1, 2), q(-1)]);
        assert!(w.iter().all(|c| c.direction == -1));
    }

    #[test]
    fn zero_shift_is_empty() {
        let a = half_integers();
        assert!(crossing_path_from(&a, &[qr(1, 4)], &[q(0)]).unwrap().is_empty());
    }

    #[test]
    fn opposite_cone_in_a2() {
        let a = Arrangement::central(
            2,
            vec![
                Hyperplane::central(vec![1, 0]).unwrap(),
                Hyperplane::central(vec![0, 1]).unwrap(),
                Hyperplane::central(vec![1, -1]).unwrap(),
            ],
        )
        .unwrap();
        // Through the origin exactly: the perturbation still orders the walls.
        let w = crossing_path_from(&a, &[q(2), q(1)], &[q(-4), q(-2)]).unwrap();
        assert_eq!(w.len(), 3);
        let back = crossing_path_from(&a, &[q(-2), q(-1)], &[q(4), q(2)]).unwrap();
        let mut rev: Vec<usize> = back.iter().map(|c| c.hyperplane).collect();
        rev.reverse();
        assert_eq!(rev, w.iter().map(|c| c.hyperplane).collect::<Vec<_>>());
    }

    #[test]
    fn endpoint_on_a_wall_is_resolved() {
        let a = half_integers();
        // Segment from 1/4 to -1/2 ends on a wall; the perturbed end lies past it.
        let w = crossing_path_from(&a, &[qr(1, 4)], &[qr(-3, 4)]).unwrap();
        let offs: Vec<Q> = w.iter().map(|c| c.offset.clone()).collect();
        assert_eq!(offs, vec![q(0)]);
    }
}
