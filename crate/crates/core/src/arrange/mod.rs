//! Rational hyperplane arrangements: regions, walls, codimension-2 strata,
//! straight-line wall-crossing paths, and relation checkers for groupoid
//! representations.

mod groupoid;
mod path;
mod salvetti;
mod strata;

pub use groupoid::{
    groupoid_check, CommutingDiagonal, GroupoidCertificate, StratumVerdict, WallAssignment, Witness,
};
pub use path::{crossing_path, crossing_path_from, EpsValue, WallCrossing};
pub use salvetti::{salvetti_presentation, Generator, Lift, Presentation, Relation};
pub use strata::{codim2_strata, Codim2Stratum};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::fm::{feasible, Constraint};
use crate::ring::poly::Q;
use crate::ring::qserde;

/// `{x : ⟨normal, x⟩ = offset}` with primitive integer normal whose first
/// nonzero entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<i64>,
    #[serde(with = "qserde")]
    pub offset: Q,
}

impl Hyperplane {
    /// Normalizes `(normal, offset)`; fails on a zero normal.
    pub fn new(normal: Vec<i64>, offset: Q) -> Result<Self> {
        let g = normal.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            return Err(Error::InvalidArrangement("zero normal".into()));
        }
        let first = *normal.iter().find(|&&x| x != 0).unwrap();
        let s = if first < 0 { -g } else { g };
        Ok(Hyperplane {
            normal: normal.iter().map(|x| x / s).collect(),
            offset: offset / Q::from_integer(s.into()),
        })
    }

    pub fn central(normal: Vec<i64>) -> Result<Self> {
        Hyperplane::new(normal, Q::zero())
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let v: Q = self
            .normal
            .iter()
            .zip(x)
            .map(|(a, b)| b * Q::from_integer((*a).into()))
            .sum();
        v - &self.offset
    }

    pub fn normal_q(&self) -> Vec<Q> {
        self.normal.iter().map(|&a| Q::from_integer(a.into())).collect()
    }

    /// Constraint `sign · (⟨n,x⟩ − c) > 0`.
    pub fn strict_side(&self, sign: i8) -> Constraint {
        let s = Q::from_integer((sign as i64).into());
        Constraint::gt(
            self.normal_q().into_iter().map(|a| a * &s).collect(),
            &self.offset * &s,
        )
    }

    pub fn on(&self) -> [Constraint; 2] {
        Constraint::eq(self.normal_q(), self.offset.clone())
    }
}

/// A central arrangement, or a periodic one: each hyperplane then stands for
/// all its translates `⟨n, x⟩ = c + m`, `m ∈ ℤ`, and enumeration is confined
/// to the bounded `window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arrangement {
    pub dim: usize,
    pub hyperplanes: Vec<Hyperplane>,
    #[serde(default)]
    pub periodic: bool,
    #[serde(default, with = "qserde::pairs")]
    pub window: Vec<(Q, Q)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Cone,
    Alcove,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    /// `+1` / `-1` per hyperplane of [`Arrangement::expanded`].
    pub signs: Vec<i8>,
    #[serde(with = "qserde::vec")]
    pub point: Vec<Q>,
    pub kind: RegionKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub hyperplane: usize,
    /// Region on the negative side, region on the positive side.
    pub regions: (usize, usize),
}

impl Arrangement {
    pub fn central(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        let a = Arrangement {
            dim,
            hyperplanes,
            periodic: false,
            window: Vec::new(),
        };
        a.validate()?;
        Ok(a)
    }

    /// Periodic arrangement `{⟨n, x⟩ ∈ c + ℤ}` for each `(n, c)`. A normal
    /// with content `g` is split into `g` primitive families; offsets are
    /// reduced into `[0, 1)`.
    pub fn periodic(dim: usize, raw: Vec<(Vec<i64>, Q)>, window: Vec<(Q, Q)>) -> Result<Self> {
        let mut hs: Vec<Hyperplane> = Vec::new();
        for (normal, c) in raw {
            if normal.iter().any(|x| x.unsigned_abs() > 1 << 20) {
                return Err(Error::InvalidArrangement("normal entries too large".into()));
            }
            let g = normal.iter().fold(0i64, |g, &x| g.gcd(&x));
            if g > 1 << 10 {
                return Err(Error::InvalidArrangement("normal content too large".into()));
            }
            for j in 0..g.max(1) {
                let mut h = Hyperplane::new(normal.clone(), &c + Q::from_integer(j.into()))?;
                h.offset = &h.offset - h.offset.floor();
                if !hs.contains(&h) {
                    hs.push(h);
                }
            }
        }
        hs.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));
        let a = Arrangement {
            dim,
            hyperplanes: hs,
            periodic: true,
            window,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let a: Arrangement = serde_json::from_str(text)
            .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
        if a.dim == 0 || a.dim > 8 || a.hyperplanes.len() > 64 {
            return Err(Error::InvalidArrangement("arrangement too large".into()));
        }
        if a.hyperplanes.iter().any(|h| h.normal.len() != a.dim) {
            return Err(Error::InvalidArrangement("normal of wrong length".into()));
        }
        if a.hyperplanes.iter().flat_map(|h| &h.normal).any(|x| x.unsigned_abs() > 1 << 20) {
            return Err(Error::InvalidArrangement("normal entries too large".into()));
        }
        // Re-normalize hyperplanes read from outside.
        if a.periodic {
            let raw = a.hyperplanes.into_iter().map(|h| (h.normal, h.offset)).collect();
            return Arrangement::periodic(a.dim, raw, a.window);
        }
        let hs: Result<Vec<Hyperplane>> = a
            .hyperplanes
            .iter()
            .map(|h| Hyperplane::new(h.normal.clone(), h.offset.clone()))
            .collect();
        let a = Arrangement {
            hyperplanes: hs?,
            ..a
        };
        a.validate()?;
        Ok(a)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArrangement(m.to_string()));
        if self.dim == 0 || self.dim > 8 {
            return bad("dimension must be between 1 and 8");
        }
        if self.hyperplanes.len() > 64 {
            return bad("too many hyperplanes");
        }
        for (i, h) in self.hyperplanes.iter().enumerate() {
            if h.normal.len() != self.dim {
                return bad("normal of wrong length");
            }
            if h.normal.iter().any(|x| x.unsigned_abs() > 1 << 20) {
                return bad("normal entries too large");
            }
            if self.hyperplanes[..i].contains(h) {
                return bad("repeated hyperplane");
            }
        }
        if self.periodic {
            if self.window.len() != self.dim {
                return bad("periodic arrangement needs a bounded window");
            }
            if self.window.iter().any(|(a, b)| a >= b) {
                return bad("empty window");
            }
            if self.expanded_count_estimate() > 64 {
                return bad("window contains too many hyperplanes");
            }
            for i in 0..self.hyperplanes.len() {
                for j in 0..i {
                    let (a, b) = (&self.hyperplanes[i], &self.hyperplanes[j]);
                    let d = &a.offset - &b.offset;
                    if a.normal == b.normal && d.is_integer() {
                        return bad("hyperplanes coincide up to period");
                    }
                }
            }
        } else if !self.window.is_empty() && self.window.len() != self.dim {
            return bad("window of wrong dimension");
        }
        Ok(())
    }

    fn range_over_window(&self, h: &Hyperplane) -> (Q, Q) {
        let mut lo = Q::zero();
        let mut hi = Q::zero();
        for (a, (l, u)) in h.normal.iter().zip(&self.window) {
            let a = Q::from_integer((*a).into());
            let (x, y) = (&a * l, &a * u);
            if x <= y {
                lo += x;
                hi += y;
            } else {
                lo += y;
                hi += x;
            }
        }
        (lo, hi)
    }

    fn expanded_count_estimate(&self) -> usize {
        self.hyperplanes
            .iter()
            .map(|h| {
                let (lo, hi) = self.range_over_window(h);
                let span = (&hi - &lo).ceil().to_integer();
                usize::try_from(span).unwrap_or(usize::MAX).saturating_add(2)
            })
            .fold(0usize, |a, b| a.saturating_add(b))
    }

    /// All hyperplanes relevant to enumeration: the list itself for central
    /// arrangements, every translate meeting the closed window otherwise.
    pub fn expanded(&self) -> Vec<Hyperplane> {
        if !self.periodic {
            return self.hyperplanes.clone();
        }
        let mut out = Vec::new();
        for h in &self.hyperplanes {
            let (lo, hi) = self.range_over_window(h);
            let mut m = (&lo - &h.offset).ceil();
            while &h.offset + &m <= hi {
                out.push(Hyperplane {
                    normal: h.normal.clone(),
                    offset: &h.offset + &m,
                });
                m += Q::from_integer(1.into());
            }
        }
        out.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));
        out
    }

    fn window_constraints(&self) -> Vec<Constraint> {
        let mut cs = Vec::new();
        for (i, (l, u)) in self.window.iter().enumerate() {
            let mut e = vec![Q::zero(); self.dim];
            e[i] = Q::from_integer(1.into());
            cs.push(Constraint::gt(e.clone(), l.clone()));
            cs.push(Constraint::gt(e.iter().map(|x| -x).collect(), -u));
        }
        cs
    }

    fn kind(&self) -> RegionKind {
        if self.periodic {
            RegionKind::Alcove
        } else {
            RegionKind::Cone
        }
    }

    pub fn contains_point(&self, r: &Region, x: &[Q]) -> bool {
        let hs = self.expanded();
        hs.iter()
            .zip(&r.signs)
            .all(|(h, &s)| (h.eval(x) * Q::from_integer((s as i64).into())).is_positive())
    }

    /// Sign vector of a point off every hyperplane.
    pub fn signs_at(&self, x: &[Q]) -> Option<Vec<i8>> {
        self.expanded()
            .iter()
            .map(|h| {
                let v = h.eval(x);
                if v.is_positive() {
                    Some(1)
                } else if v.is_negative() {
                    Some(-1)
                } else {
                    None
                }
            })
            .collect()
    }
}

fn region_constraints(hs: &[Hyperplane], signs: &[i8]) -> Vec<Constraint> {
    hs.iter().zip(signs).map(|(h, &s)| h.strict_side(s)).collect()
}

/// Every open region meeting the window (or the whole space), each with an
/// exact interior point. Sorted by sign vector, `-1` first.
pub fn enumerate_regions(arr: &Arrangement) -> Result<Vec<Region>> {
    arr.validate()?;
    let hs = arr.expanded();
    let base = arr.window_constraints();
    let start = feasible(arr.dim, &base).ok_or_else(|| Error::InvalidArrangement("empty window".into()))?;
    let mut regions: Vec<(Vec<i8>, Vec<Q>)> = vec![(Vec::new(), start)];
    for (k, h) in hs.iter().enumerate() {
        let prefix = &hs[..k];
        regions = regions
            .into_par_iter()
            .flat_map_iter(|(signs, pt)| {
                let v = h.eval(&pt);
                let mut out = Vec::new();
                for s in [-1i8, 1] {
                    let here = (v.is_positive() && s == 1) || (v.is_negative() && s == -1);
                    let mut sv = signs.clone();
                    sv.push(s);
                    if here {
                        out.push((sv, pt.clone()));
                        continue;
                    }
                    let mut cs = base.clone();
                    cs.extend(region_constraints(prefix, &signs));
                    cs.push(h.strict_side(s));
                    if let Some(p) = feasible(arr.dim, &cs) {
                        out.push((sv, p));
                    }
                }
                out
            })
            .collect();
    }
    regions.sort_by(|a, b| a.0.cmp(&b.0));
    let kind = arr.kind();
    Ok(regions
        .into_iter()
        .map(|(signs, point)| Region { signs, point, kind })
        .collect())
}

/// Walls between regions, found by flipping one sign and checking that the
/// common facet is nonempty.
pub fn walls(arr: &Arrangement, regions: &[Region]) -> Result<Vec<Wall>> {
    let hs = arr.expanded();
    let base = arr.window_constraints();
    let index: std::collections::HashMap<&[i8], usize> = regions
        .iter()
        .enumerate()
        .map(|(i, r)| (r.signs.as_slice(), i))
        .collect();
    let mut out: Vec<Wall> = (0..regions.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let r = &regions[i];
            let mut found = Vec::new();
            for (h, hp) in hs.iter().enumerate() {
                if r.signs[h] != -1 {
                    continue;
                }
                let mut flipped = r.signs.clone();
                flipped[h] = 1;
                let Some(&j) = index.get(flipped.as_slice()) else {
                    continue;
                };
                let mut cs = base.clone();
                for (g, gp) in hs.iter().enumerate() {
                    if g != h {
                        cs.push(gp.strict_side(r.signs[g]));
                    }
                }
                cs.extend(hp.on());
                if feasible(arr.dim, &cs).is_some() {
                    found.push(Wall {
                        hyperplane: h,
                        regions: (i, j),
                    });
                }
            }
            found
        })
        .collect();
    out.sort_by_key(|w| (w.regions, w.hyperplane));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::{q, qr};

    fn central(normals: &[&[i64]]) -> Arrangement {
        let n = normals[0].len();
        Arrangement::central(
            n,
            normals.iter().map(|v| Hyperplane::central(v.to_vec()).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn coordinate_cross_has_four_cones() {
        let a = central(&[&[1, 0], &[0, 1]]);
        let rs = enumerate_regions(&a).unwrap();
        assert_eq!(rs.len(), 4);
        for r in &rs {
            assert!(a.contains_point(r, &r.point));
        }
        assert_eq!(walls(&a, &rs).unwrap().len(), 4);
    }

    #[test]
    fn a2_has_six_cones() {
        let a = central(&[&[1, 0], &[0, 1], &[1, -1]]);
        let rs = enumerate_regions(&a).unwrap();
        assert_eq!(rs.len(), 6);
        assert_eq!(walls(&a, &rs).unwrap().len(), 6);
    }

    #[test]
    fn empty_arrangement_is_one_region() {
        let a = Arrangement::central(2, vec![]).unwrap();
        assert_eq!(enumerate_regions(&a).unwrap().len(), 1);
    }

    #[test]
    fn normalization_identifies_opposite_normals() {
        let h = Hyperplane::new(vec![-2, 4], q(6)).unwrap();
        assert_eq!(h.normal, vec![1, -2]);
        assert_eq!(h.offset, q(-3));
        assert!(Hyperplane::new(vec![0, 0], q(0)).is_err());
    }

    #[test]
    fn periodic_expansion() {
        let a = Arrangement::periodic(1, vec![(vec![2], q(0))], vec![(q(-1), q(1))]).unwrap();
        assert_eq!(a.hyperplanes.len(), 2);
        let offs: Vec<Q> = a.expanded().into_iter().map(|h| h.offset).collect();
        assert_eq!(offs, vec![q(-1), qr(-1, 2), q(0), qr(1, 2), q(1)]);
        assert_eq!(enumerate_regions(&a).unwrap().len(), 4);
    }

    #[test]
    fn json_round_trip_and_rejects() {
        let a = central(&[&[1, 0], &[0, 1], &[1, -1]]);
        let j = a.to_json();
        assert_eq!(Arrangement::from_json(&j).unwrap(), a);
        assert!(Arrangement::from_json(r#"{"dim":1,"hyperplanes":[{"normal":[0],"offset":0}]}"#).is_err());
        assert!(Arrangement::from_json(r#"{"dim":1,"hyperplanes":[],"periodic":true}"#).is_err());
        assert!(Arrangement::from_json(r#"{"dim":1,"hyperplanes":[],"bogus":1}"#).is_err());
        let p = Arrangement::from_json(
            r#"{"dim":1,"hyperplanes":[{"normal":[2],"offset":"1"}],"periodic":true,"window":[[0,1]]}"#,
        )
        .unwrap();
        let offs: Vec<Q> = p.hyperplanes.iter().map(|h| h.offset.clone()).collect();
        assert_eq!(offs, vec![q(0), qr(1, 2)]);
    }
}
