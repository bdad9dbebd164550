//! Fixed-point data for the cotangent bundles of Grassmannians and the
//! Hilbert schemes of points on the plane, with equivariant and Kähler roots.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arrange::{Arrangement, Hyperplane};
use crate::error::{Error, Result};
use crate::ring::{idx, LaurentPoly, Monomial, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Geometry {
    /// T*Gr(k, n), framing torus with weights a₁…aₙ.
    Tgr { k: usize, n: usize },
    /// Hilb(ℂ², n), torus (t₁, t₂), symplectic weight t₁ + t₂.
    Hilb { n: usize },
    /// The union of T*Gr(k, n) over all k.
    TgrUnion { n: usize },
}

/// Serialized as its label, `{1,3}` or `(2,1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FixedPoint {
    /// Sorted 1-based subset.
    Subset(Vec<usize>),
    /// Partition, weakly decreasing positive parts.
    Partition(Vec<usize>),
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            FixedPoint::Subset(s) => write!(f, "{{{}}}", join(s)),
            FixedPoint::Partition(p) => write!(f, "({})", join(p)),
        }
    }
}

impl Serialize for FixedPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FixedPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FixedPoint::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl FixedPoint {
    pub fn parse(s: &str) -> Result<FixedPoint> {
        let bad = || Error::InvalidLabel(s.to_string());
        let s = s.trim();
        let (open, close) = (s.chars().next().ok_or_else(bad)?, s.chars().last().ok_or_else(bad)?);
        if s.len() < 2 {
            return Err(bad());
        }
        let inner = &s[1..s.len() - 1];
        let parts: Vec<usize> = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        match (open, close) {
            ('{', '}') => Ok(FixedPoint::Subset(parts)),
            ('(', ')') => Ok(FixedPoint::Partition(parts)),
            _ => Err(bad()),
        }
    }

    pub fn subset(&self) -> Option<&[usize]> {
        match self {
            FixedPoint::Subset(s) => Some(s),
            _ => None,
        }
    }
}

/// A torus character, as integer coefficients over ring variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero() -> Self {
        Weight(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = 1;
        Weight(v).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Weight) -> Weight {
        let n = self.0.len().max(o.0.len());
        Weight((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect()).trimmed()
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    /// Drop the listed variables (restriction to a subtorus where they vanish).
    pub fn without(&self, vars: &[usize]) -> Weight {
        Weight(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &x)| if vars.contains(&i) { 0 } else { x })
                .collect(),
        )
        .trimmed()
    }

    /// Linear form, the cohomological weight.
    pub fn linear(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (i, &c) in self.0.iter().enumerate() {
            if c != 0 {
                p = &p + &LaurentPoly::var(i).scale(&crate::ring::q(c));
            }
        }
        p
    }

    /// Multiplicative character, the K-theoretic weight.
    pub fn monomial(&self) -> Monomial {
        Monomial::from_exps(self.0.iter().map(|&c| c as i32).collect())
    }

    pub fn pair(&self, cochar: &[Q], vars: &[usize]) -> Q {
        vars.iter()
            .zip(cochar)
            .map(|(&v, s)| s * Q::from_integer(self.coeff(v).into()))
            .sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.linear())
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentData {
    pub point: FixedPoint,
    pub weights: Vec<Weight>,
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::Tgr { k, n } if n >= 1 && k <= n && n <= 12 => Ok(()),
            Geometry::Hilb { n } if (1..=12).contains(&n) => Ok(()),
            Geometry::TgrUnion { n } if (1..=12).contains(&n) => Ok(()),
            _ => Err(Error::Usage(format!("invalid geometry parameters {self:?}"))),
        }
    }

    /// Number of framing variables of the Grassmannian families.
    pub fn framing(&self) -> Option<usize> {
        match *self {
            Geometry::Tgr { n, .. } | Geometry::TgrUnion { n } => Some(n),
            Geometry::Hilb { .. } => None,
        }
    }

    /// The symplectic weight ħ as a character.
    pub fn hbar(&self) -> Weight {
        match self {
            Geometry::Hilb { .. } => Weight::var(idx::T1).add(&Weight::var(idx::T2)),
            _ => Weight::var(idx::HBAR),
        }
    }

    /// Variables of the torus preserving the symplectic form.
    pub fn a_vars(&self) -> Vec<usize> {
        match *self {
            Geometry::Tgr { n, .. } | Geometry::TgrUnion { n } => (1..=n).map(idx::a).collect(),
            Geometry::Hilb { .. } => vec![idx::T1],
        }
    }

    pub fn dim_at(&self, p: &FixedPoint) -> usize {
        match (self, p) {
            (Geometry::Hilb { n }, _) => 2 * n,
            (_, FixedPoint::Subset(s)) => 2 * s.len() * (self.framing().unwrap() - s.len()),
            _ => 0,
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `n` in lexicographic order of their parts.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// All fixed points. Subsets in lex order (grouped by size for the union);
/// partitions in lex order from `(n)` down.
pub fn fixed_points(g: &Geometry) -> Result<Vec<FixedPoint>> {
    g.validate()?;
    Ok(match *g {
        Geometry::Tgr { k, n } => subsets(n, k).into_iter().map(FixedPoint::Subset).collect(),
        Geometry::TgrUnion { n } => (0..=n)
            .flat_map(|k| subsets(n, k))
            .map(FixedPoint::Subset)
            .collect(),
        Geometry::Hilb { n } => partitions(n).into_iter().map(FixedPoint::Partition).collect(),
    })
}

fn check_label(g: &Geometry, p: &FixedPoint) -> Result<()> {
    let bad = || Err(Error::InvalidLabel(p.to_string()));
    match (g, p) {
        (Geometry::Tgr { .. } | Geometry::TgrUnion { .. }, FixedPoint::Subset(s)) => {
            let n = g.framing().unwrap();
            if let Geometry::Tgr { k, .. } = g {
                if s.len() != *k {
                    return bad();
                }
            }
            if s.iter().any(|&i| i == 0 || i > n) || s.windows(2).any(|w| w[0] >= w[1]) {
                return bad();
            }
            Ok(())
        }
        (Geometry::Hilb { n }, FixedPoint::Partition(lam)) => {
            if lam.iter().sum::<usize>() != *n
                || lam.iter().any(|&x| x == 0)
                || lam.windows(2).any(|w| w[0] < w[1])
            {
                return bad();
            }
            Ok(())
        }
        _ => bad(),
    }
}

fn conjugate(lam: &[usize]) -> Vec<usize> {
    let m = lam.first().copied().unwrap_or(0);
    (0..m).map(|j| lam.iter().filter(|&&l| l > j).count()).collect()
}

/// Tangent characters at a fixed point.
///
/// T*Gr at `S`: `a_i − a_j` and `ħ − (a_i − a_j)` for `i ∈ S`, `j ∉ S`.
/// Hilb at `λ`, for each box with arm `a` and leg `l`:
/// `(a+1)t₁ − l·t₂` and `(l+1)t₂ − a·t₁`.
pub fn tangent_weights(g: &Geometry, p: &FixedPoint) -> Result<TangentData> {
    g.validate()?;
    check_label(g, p)?;
    let mut weights = Vec::new();
    match p {
        FixedPoint::Subset(s) => {
            let n = g.framing().unwrap();
            let h = g.hbar();
            for &i in s {
                for j in (1..=n).filter(|j| !s.contains(j)) {
                    let w = Weight::var(idx::a(i)).sub(&Weight::var(idx::a(j)));
                    weights.push(w.clone());
                    weights.push(h.sub(&w));
                }
            }
        }
        FixedPoint::Partition(lam) => {
            let conj = conjugate(lam);
            let (t1, t2) = (Weight::var(idx::T1), Weight::var(idx::T2));
            for (i, &row) in lam.iter().enumerate() {
                for j in 0..row {
                    let arm = (row - j - 1) as i64;
                    let leg = (conj[j] - i - 1) as i64;
                    weights.push(t1.scale(arm + 1).sub(&t2.scale(leg)));
                    weights.push(t2.scale(leg + 1).sub(&t1.scale(arm)));
                }
            }
        }
    }
    Ok(TangentData {
        point: p.clone(),
        weights,
    })
}

/// Restriction of a character to the torus `A`: drop ħ for the Grassmannian
/// families; set `t₂ = −t₁` for Hilb (the result is a multiple of `t₁`).
pub fn restrict_to_a(g: &Geometry, w: &Weight) -> Weight {
    match g {
        Geometry::Hilb { .. } => Weight::var(idx::T1).scale(w.coeff(idx::T1) - w.coeff(idx::T2)),
        _ => w.without(&[idx::HBAR]),
    }
}

/// Decide whether the weights at `p` pair off as `(χ, ħ − χ)`.
pub fn symplectic_pairing_holds(g: &Geometry, t: &TangentData) -> bool {
    let h = g.hbar();
    let mut rest: Vec<Weight> = t.weights.clone();
    while let Some(w) = rest.pop() {
        let partner = h.sub(&w);
        match rest.iter().position(|x| *x == partner) {
            Some(k) => {
                rest.swap_remove(k);
            }
            None => return false,
        }
    }
    true
}

/// A-parts of all tangent weights, as a set.
pub fn equivariant_roots(g: &Geometry) -> Result<BTreeSet<Weight>> {
    let mut out = BTreeSet::new();
    for p in fixed_points(g)? {
        for w in tangent_weights(g, &p)?.weights {
            let r = restrict_to_a(g, &w);
            if !r.is_zero() {
                out.insert(r);
            }
        }
    }
    Ok(out)
}

/// Kähler roots, as integer multiples of the ample generator of Pic.
pub fn kahler_roots(g: &Geometry) -> Result<Vec<i64>> {
    g.validate()?;
    let pos: Vec<i64> = match *g {
        Geometry::Hilb { n } => (1..=n as i64).collect(),
        Geometry::Tgr { k, .. } if k >= 1 => vec![1],
        Geometry::Tgr { .. } => vec![],
        Geometry::TgrUnion { .. } => vec![1],
    };
    let mut all: Vec<i64> = pos.iter().map(|b| -b).rev().collect();
    all.extend(pos);
    Ok(all)
}

/// The periodic arrangement `{b·x ∈ ℤ}` over the positive Kähler roots `b`,
/// in `Pic ⊗ ℝ ≅ ℝ`, with the given window.
pub fn kahler_arrangement(g: &Geometry, window: (Q, Q)) -> Result<Arrangement> {
    let roots = kahler_roots(g)?;
    let raw: Vec<(Vec<i64>, Q)> = roots
        .into_iter()
        .filter(|&b| b > 0)
        .map(|b| (vec![b], Q::from_integer(0.into())))
        .collect();
    Arrangement::periodic(1, raw, vec![window])
}

/// The central arrangement of equivariant-root hyperplanes in Lie A.
pub fn root_arrangement(g: &Geometry) -> Result<Arrangement> {
    let vars = g.a_vars();
    let mut hs: Vec<Hyperplane> = Vec::new();
    for r in equivariant_roots(g)? {
        let normal: Vec<i64> = vars.iter().map(|&v| r.coeff(v)).collect();
        let h = Hyperplane::central(normal)?;
        if !hs.contains(&h) {
            hs.push(h);
        }
    }
    hs.sort_by(|a, b| b.normal.cmp(&a.normal));
    Arrangement::central(vars.len(), hs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_poly;

    fn w(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn fixed_point_enumeration() {
        let fp = fixed_points(&Geometry::Tgr { k: 1, n: 2 }).unwrap();
        assert_eq!(fp, vec![FixedPoint::Subset(vec![1]), FixedPoint::Subset(vec![2])]);
        assert_eq!(fixed_points(&Geometry::Tgr { k: 2, n: 4 }).unwrap().len(), 6);
        let hp: Vec<String> = fixed_points(&Geometry::Hilb { n: 3 })
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(hp, vec!["(3)", "(2,1)", "(1,1,1)"]);
        assert_eq!(fixed_points(&Geometry::TgrUnion { n: 3 }).unwrap().len(), 8);
    }

    #[test]
    fn grassmannian_weights() {
        let t = tangent_weights(&Geometry::Tgr { k: 1, n: 2 }, &FixedPoint::Subset(vec![1])).unwrap();
        let ws: Vec<LaurentPoly> = t.weights.iter().map(|x| x.linear()).collect();
        assert_eq!(ws, vec![w("a1 - a2"), w("hbar - a1 + a2")]);
    }

    #[test]
    fn hilb_weights() {
        let g = Geometry::Hilb { n: 1 };
        let t = tangent_weights(&g, &FixedPoint::Partition(vec![1])).unwrap();
        let ws: Vec<LaurentPoly> = t.weights.iter().map(|x| x.linear()).collect();
        assert_eq!(ws, vec![w("t1"), w("t2")]);
        let g = Geometry::Hilb { n: 2 };
        let t = tangent_weights(&g, &FixedPoint::Partition(vec![2])).unwrap();
        let mut a: Vec<i64> = t.weights.iter().map(|x| restrict_to_a(&g, x).coeff(idx::T1)).collect();
        a.sort();
        assert_eq!(a, vec![-2, -1, 1, 2]);
    }

    #[test]
    fn labels_are_validated() {
        let g = Geometry::Tgr { k: 1, n: 2 };
        assert!(tangent_weights(&g, &FixedPoint::Subset(vec![3])).is_err());
        assert!(tangent_weights(&g, &FixedPoint::Subset(vec![1, 2])).is_err());
        assert!(tangent_weights(&g, &FixedPoint::Partition(vec![1])).is_err());
        let h = Geometry::Hilb { n: 3 };
        assert!(tangent_weights(&h, &FixedPoint::Partition(vec![1, 2])).is_err());
        assert_eq!(FixedPoint::parse("{1,3}").unwrap(), FixedPoint::Subset(vec![1, 3]));
        assert_eq!(FixedPoint::parse("(2,1)").unwrap(), FixedPoint::Partition(vec![2, 1]));
        assert_eq!(FixedPoint::parse("{}").unwrap(), FixedPoint::Subset(vec![]));
        assert!(FixedPoint::parse("[1]").is_err());
        assert!(FixedPoint::parse("{a}").is_err());
    }

    #[test]
    fn roots_of_small_families() {
        let r = equivariant_roots(&Geometry::Tgr { k: 1, n: 2 }).unwrap();
        let r: Vec<LaurentPoly> = r.iter().map(|x| x.linear()).collect();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&w("a1 - a2")) && r.contains(&w("a2 - a1")));
        assert_eq!(equivariant_roots(&Geometry::TgrUnion { n: 3 }).unwrap().len(), 6);
        assert_eq!(kahler_roots(&Geometry::Hilb { n: 4 }).unwrap(), vec![-4, -3, -2, -1, 1, 2, 3, 4]);
        assert!(kahler_roots(&Geometry::Tgr { k: 0, n: 2 }).unwrap().is_empty());
    }

    #[test]
    fn root_arrangement_of_union() {
        let a = root_arrangement(&Geometry::TgrUnion { n: 3 }).unwrap();
        assert_eq!(a.hyperplanes.len(), 3);
        assert_eq!(a.dim, 3);
    }
}
