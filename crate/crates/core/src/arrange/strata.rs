use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Arrangement, Hyperplane, Region};
use crate::error::{Error, Result};
use crate::ring::fm::feasible;
use crate::ring::poly::Q;
use crate::ring::qserde;

/// A face of codimension 2 with the regions around it in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codim2Stratum {
    /// Indices (into the expanded list) of every hyperplane through the face.
    pub hyperplanes: Vec<usize>,
    #[serde(with = "qserde::vec")]
    pub point: Vec<Q>,
    /// Incident regions; consecutive ones (cyclically) share a wall.
    pub regions: Vec<usize>,
    /// `walls[k]` separates `regions[k]` and `regions[k + 1]`.
    pub walls: Vec<usize>,
}

/// Coefficients `(α, β)` with `h = α·h₁ + β·h₂` (normals and offsets), if any.
fn combination(h: &Hyperplane, h1: &Hyperplane, h2: &Hyperplane) -> Option<(Q, Q)> {
    let n = h.normal.len();
    let z = |x: i64| Q::from_integer(x.into());
    for p in 0..n {
        for r in (p + 1)..n {
            let det = z(h1.normal[p] * h2.normal[r] - h1.normal[r] * h2.normal[p]);
            if det.is_zero() {
                continue;
            }
            let a = (z(h.normal[p]) * z(h2.normal[r]) - z(h.normal[r]) * z(h2.normal[p])) / &det;
            let b = (z(h1.normal[p]) * z(h.normal[r]) - z(h1.normal[r]) * z(h.normal[p])) / &det;
            let ok = (0..n).all(|k| z(h.normal[k]) == &a * z(h1.normal[k]) + &b * z(h2.normal[k]))
                && h.offset == &a * &h1.offset + &b * &h2.offset;
            return if ok { Some((a, b)) } else { None };
        }
    }
    None
}

fn half(y: &(Q, Q)) -> u8 {
    if y.1.is_positive() || (y.1.is_zero() && y.0.is_positive()) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: &(Q, Q), b: &(Q, Q)) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a.0 * &b.1 - &a.1 * &b.0;
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// All codimension-2 faces meeting the window, including degenerate pencils
/// of three or more hyperplanes.
pub fn codim2_strata(arr: &Arrangement, regions: &[Region]) -> Result<Vec<Codim2Stratum>> {
    let hs = arr.expanded();
    let base = arr.window_constraints();
    let mut pencils: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..hs.len() {
        for j in (i + 1)..hs.len() {
            if hs[i].normal == hs[j].normal {
                continue;
            }
            let p: Vec<usize> = (0..hs.len())
                .filter(|&k| k == i || k == j || combination(&hs[k], &hs[i], &hs[j]).is_some())
                .collect();
            pencils.insert(p);
        }
    }
    let mut out = Vec::new();
    for pencil in pencils {
        let (h1, h2) = (&hs[pencil[0]], &hs[pencil[1]]);
        let mut groups: BTreeMap<Vec<i8>, Vec<usize>> = BTreeMap::new();
        for (ri, r) in regions.iter().enumerate() {
            let key: Vec<i8> = r
                .signs
                .iter()
                .enumerate()
                .map(|(k, &s)| if pencil.contains(&k) { 0 } else { s })
                .collect();
            groups.entry(key).or_default().push(ri);
        }
        for (key, members) in groups {
            let mut cs = base.clone();
            cs.extend(h1.on());
            cs.extend(h2.on());
            for (k, &s) in key.iter().enumerate() {
                if s != 0 {
                    cs.push(hs[k].strict_side(s));
                }
            }
            let Some(point) = feasible(arr.dim, &cs) else {
                continue;
            };
            if members.len() != 2 * pencil.len() {
                return Err(Error::InvalidArrangement(format!(
                    "{} regions around a pencil of {} hyperplanes",
                    members.len(),
                    pencil.len()
                )));
            }
            let mut around: Vec<(usize, (Q, Q))> = members
                .iter()
                .map(|&ri| {
                    let r = &regions[ri].point;
                    (ri, (h1.eval(r), h2.eval(r)))
                })
                .collect();
            around.sort_by(|a, b| angle_cmp(&a.1, &b.1));
            let start = around
                .iter()
                .enumerate()
                .min_by_key(|(_, (ri, _))| *ri)
                .map(|(k, _)| k)
                .unwrap();
            around.rotate_left(start);
            let order: Vec<usize> = around.into_iter().map(|(ri, _)| ri).collect();
            let mut walls = Vec::with_capacity(order.len());
            for k in 0..order.len() {
                let (a, b) = (&regions[order[k]], &regions[order[(k + 1) % order.len()]]);
                let diff: Vec<usize> = pencil
                    .iter()
                    .copied()
                    .filter(|&h| a.signs[h] != b.signs[h])
                    .collect();
                if diff.len() != 1 {
                    return Err(Error::InvalidArrangement("regions around a face do not form a cycle".into()));
                }
                walls.push(diff[0]);
            }
            out.push(Codim2Stratum {
                hyperplanes: pencil.clone(),
                point,
                regions: order,
                walls,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrange::enumerate_regions;
    use crate::ring::poly::q;

    fn central(normals: &[&[i64]]) -> Arrangement {
        Arrangement::central(
            normals[0].len(),
            normals.iter().map(|v| Hyperplane::central(v.to_vec()).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn a2_hexagon() {
        let a = central(&[&[1, 0], &[0, 1], &[1, -1]]);
        let rs = enumerate_regions(&a).unwrap();
        let st = codim2_strata(&a, &rs).unwrap();
        assert_eq!(st.len(), 1);
        assert_eq!(st[0].regions.len(), 6);
        assert_eq!(st[0].hyperplanes, vec![0, 1, 2]);
        // Each hyperplane is crossed twice around the cycle.
        let mut w = st[0].walls.clone();
        w.sort();
        assert_eq!(w, vec![0, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn root_arrangement_in_three_space() {
        // a1 - a2, a1 - a3, a2 - a3: one line of triple intersection.
        let a = central(&[&[1, -1, 0], &[1, 0, -1], &[0, 1, -1]]);
        let rs = enumerate_regions(&a).unwrap();
        assert_eq!(rs.len(), 6);
        let st = codim2_strata(&a, &rs).unwrap();
        assert_eq!(st.len(), 1);
        assert_eq!(st[0].point, vec![q(0), q(0), q(0)]);
    }

    #[test]
    fn parallel_lines_have_no_strata() {
        let a = Arrangement::central(
            2,
            vec![
                Hyperplane::new(vec![1, 0], q(0)).unwrap(),
                Hyperplane::new(vec![1, 0], q(1)).unwrap(),
            ],
        )
        .unwrap();
        let rs = enumerate_regions(&a).unwrap();
        assert_eq!(rs.len(), 3);
        assert!(codim2_strata(&a, &rs).unwrap().is_empty());
    }

    #[test]
    fn affine_lines_cut_by_a_third() {
        // x = 0, y = 0, x + y = 1: three separate vertices.
        let a = Arrangement::central(
            2,
            vec![
                Hyperplane::new(vec![1, 0], q(0)).unwrap(),
                Hyperplane::new(vec![0, 1], q(0)).unwrap(),
                Hyperplane::new(vec![1, 1], q(1)).unwrap(),
            ],
        )
        .unwrap();
        let rs = enumerate_regions(&a).unwrap();
        assert_eq!(rs.len(), 7);
        let st = codim2_strata(&a, &rs).unwrap();
        assert_eq!(st.len(), 3);
        assert!(st.iter().all(|s| s.regions.len() == 4));
    }
}
