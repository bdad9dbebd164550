//! Stable envelopes of T*Gr(k, n), solved from their axioms: support
//! (triangularity plus GKM congruences), normalization on the diagonal, and
//! the degree bound (cohomology) or window condition with a slope (K-theory).

mod axioms;
mod jump;
mod tensor;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{fixed_points, tangent_weights, FixedPoint, Geometry, Weight};
use crate::ring::fm::{feasible, Constraint};
use crate::ring::matrix::solve_rational_many;
use crate::ring::{idx, qserde, solve_linear, LaurentPoly, Matrix, Monomial, RationalFunction, Q};

pub use axioms::{check_axioms, AxiomReport};
pub use jump::{jump_scan, JumpReport};
pub use tensor::{stab_tensor, TensorStab};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    H,
    K,
}

/// A cocharacter σ of the framing torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chamber(pub Vec<i64>);

impl Chamber {
    /// σ₀ = (n, n−1, …, 1).
    pub fn standard(n: usize) -> Self {
        Chamber((1..=n as i64).rev().collect())
    }

    pub fn opposite(&self) -> Self {
        Chamber(self.0.iter().map(|x| -x).collect())
    }

    /// `+` for σ₀, `-` for −σ₀, or an explicit comma-separated cocharacter.
    pub fn parse(s: &str, n: usize) -> Result<Chamber> {
        let c = match s.trim() {
            "+" => Chamber::standard(n),
            "-" => Chamber::standard(n).opposite(),
            t => Chamber(
                t.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| Error::InvalidChamber(s.to_string())))
                    .collect::<Result<_>>()?,
            ),
        };
        c.check(n)?;
        Ok(c)
    }

    /// Generic means ⟨σ, a_i − a_j⟩ ≠ 0 for all i ≠ j.
    pub fn check(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::InvalidChamber(format!("expected {n} entries, got {}", self.0.len())));
        }
        if self.0.iter().any(|x| x.unsigned_abs() > 1 << 20) {
            return Err(Error::InvalidChamber("entries too large".into()));
        }
        let distinct: BTreeSet<i64> = self.0.iter().copied().collect();
        if distinct.len() != n {
            return Err(Error::InvalidChamber(format!("{:?} lies on a root hyperplane", self.0)));
        }
        Ok(())
    }

    /// Attraction height ⟨σ, Σ_{i∈S} e_i⟩; larger is higher.
    pub fn height(&self, s: &[usize]) -> i64 {
        s.iter().map(|&i| self.0[i - 1]).sum()
    }

    pub fn pairing(&self, w: &Weight) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, s)| s * w.coeff(idx::a(i + 1)))
            .sum()
    }
}

/// Which half of each tangent space counts as the polarization: the base
/// weights `a_i − a_j` or their duals `ħ − (a_i − a_j)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    #[default]
    Base,
    Dual,
}

impl Polarization {
    pub fn contains(&self, w: &Weight) -> bool {
        let base = w.coeff(idx::HBAR) == 0;
        match self {
            Polarization::Base => base,
            Polarization::Dual => !base,
        }
    }
}

/// Restrictions `entries[i][j] = Stab(p_j)|_{p_i}` in the fixed-point order
/// of [`fixed_points`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabMatrix {
    pub geometry: Geometry,
    pub chamber: Chamber,
    pub mode: Mode,
    #[serde(with = "qserde::option", default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<Q>,
    pub polarization: Polarization,
    pub order: Vec<FixedPoint>,
    /// Sign in front of the Euler class on the diagonal, per fixed point.
    pub signs: Vec<i8>,
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl StabMatrix {
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_polys(self.entries.clone()).expect("square by construction")
    }

    pub fn size(&self) -> usize {
        self.order.len()
    }
}

/// What the linear system for one column looked like.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnReport {
    pub point: FixedPoint,
    pub unknowns: usize,
    pub equations: usize,
    pub kernel_dimension: usize,
}

/// Per-point data the solver needs.
pub(crate) struct Skeleton {
    pub n: usize,
    pub points: Vec<FixedPoint>,
    pub subsets: Vec<Vec<usize>>,
    pub heights: Vec<i64>,
    /// Repelling tangent characters.
    pub repelling: Vec<Vec<Weight>>,
    pub signs: Vec<i8>,
    pub d: Vec<usize>,
    /// A-degree of the polarization normalization at each point.
    pub offsets: Vec<Vec<Q>>,
    /// Edges `(s, t, p, q)`: `t = s ∖ {p} ∪ {q}`, with `p < q`.
    pub edges: Vec<(usize, usize, usize, usize)>,
}

pub(crate) fn framing(g: &Geometry) -> Result<usize> {
    match *g {
        Geometry::Tgr { n, .. } | Geometry::TgrUnion { n } => {
            g.validate()?;
            Ok(n)
        }
        Geometry::Hilb { .. } => Err(Error::UnsupportedFamily(
            "stable envelopes are solved for the Grassmannian families only".into(),
        )),
    }
}

pub(crate) fn skeleton(g: &Geometry, c: &Chamber, pol: Polarization) -> Result<Skeleton> {
    let n = framing(g)?;
    c.check(n)?;
    let points = fixed_points(g)?;
    let subsets: Vec<Vec<usize>> = points.iter().map(|p| p.subset().unwrap().to_vec()).collect();
    let heights = subsets.iter().map(|s| c.height(s)).collect();
    let mut repelling = Vec::new();
    let mut signs = Vec::new();
    let mut d = Vec::new();
    let mut offsets = Vec::new();
    for p in &points {
        let t = tangent_weights(g, p)?;
        offsets.push(normalization_offset(&t.weights, c, pol, n));
        let rep: Vec<Weight> = t.weights.into_iter().filter(|w| c.pairing(w) < 0).collect();
        let flips = rep.iter().filter(|w| pol.contains(w)).count();
        signs.push(if flips % 2 == 0 { 1 } else { -1 });
        d.push(rep.len());
        repelling.push(rep);
    }
    let index: HashMap<&Vec<usize>, usize> = subsets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut edges = Vec::new();
    for (si, s) in subsets.iter().enumerate() {
        for &p in s {
            for q in (p + 1)..=n {
                if s.contains(&q) {
                    continue;
                }
                let mut t: Vec<usize> = s.iter().copied().filter(|&x| x != p).collect();
                t.push(q);
                t.sort();
                edges.push((si, index[&t], p, q));
            }
        }
    }
    Ok(Skeleton {
        n,
        points,
        subsets,
        heights,
        repelling,
        signs,
        d,
        offsets,
        edges,
    })
}

/// A-degree of `(det N₋ / det T^{1/2})^{-1/2}`, the factor separating the
/// bare diagonal `λ(N₋^∨)` from the polarization-normalized one. Window
/// conditions compare normalized classes, so shifts pick up
/// `offset_j − offset_i`.
pub(crate) fn normalization_offset(weights: &[Weight], c: &Chamber, pol: Polarization, n: usize) -> Vec<Q> {
    let half = Q::new(1.into(), 2.into());
    (1..=n)
        .map(|v| {
            let rep: i64 = weights.iter().filter(|w| c.pairing(w) < 0).map(|w| w.coeff(idx::a(v))).sum();
            let pl: i64 = weights.iter().filter(|w| pol.contains(w)).map(|w| w.coeff(idx::a(v))).sum();
            Q::from_integer((pl - rep).into()) * &half
        })
        .collect()
}

/// `sign · e(repelling)`: the product of the weights in cohomology, of
/// `1 − w⁻¹` in K-theory.
pub(crate) fn diagonal_entry(sk: &Skeleton, i: usize, mode: Mode) -> LaurentPoly {
    let all: Vec<&Weight> = sk.repelling[i].iter().collect();
    euler(&all, mode).scale(&Q::from_integer((sk.signs[i] as i64).into()))
}

/// Exponent vector over `a₁ … aₙ` and ħ-exponent of a monomial.
fn split_monomial(m: &Monomial, n: usize) -> (Vec<i64>, i32) {
    ((1..=n).map(|i| m.exp(idx::a(i)) as i64).collect(), m.exp(idx::HBAR))
}

fn a_monomial(beta: &[i64]) -> Monomial {
    let mut e = vec![0i32; idx::a(beta.len()) + 1];
    for (i, &b) in beta.iter().enumerate() {
        e[idx::a(i + 1)] = b as i32;
    }
    Monomial::from_exps(e)
}

/// `a_p := a_q` on an exponent vector (1-based `p`, `q`).
fn collapse(beta: &[i64], p: usize, q: usize) -> Vec<i64> {
    let mut b = beta.to_vec();
    b[q - 1] += b[p - 1];
    b[p - 1] = 0;
    b
}

fn monomials_below(n: usize, bound: usize) -> Vec<Vec<i64>> {
    fn go(i: usize, n: usize, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e as i64);
            go(i + 1, n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if bound > 0 {
        go(0, n, bound - 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Repelling characters at `i` that involve ħ. Near `i` the full attracting
/// set lies in the conormal directions to the attracting cell, so every
/// off-diagonal restriction at `i` is divisible by their Euler class.
fn support_factors(sk: &Skeleton, i: usize) -> Vec<&Weight> {
    sk.repelling[i].iter().filter(|w| w.coeff(idx::HBAR) != 0).collect()
}

fn euler(ws: &[&Weight], mode: Mode) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    for w in ws {
        let f = match mode {
            Mode::H => w.linear(),
            Mode::K => &LaurentPoly::one() - &LaurentPoly::term(crate::ring::q(1), w.monomial().inv()),
        };
        p = &p * &f;
    }
    p
}

fn a_part(w: &Weight, n: usize) -> Vec<i64> {
    (1..=n).map(|v| w.coeff(idx::a(v))).collect()
}

/// Exponents `x` with `N(E) + x ⊂ Z_i + s·dir`, where `E` is the support
/// factor and `Z_i` the Newton polytope of the diagonal at `i` (the zonotope
/// of segments `[0, −w]`, `w` repelling).
fn closed_window(sk: &Skeleton, i: usize, j: usize, dir: &[i64], s: &Q) -> Result<Vec<Vec<i64>>> {
    let n = sk.n;
    let neg = |w: &Weight| -> Vec<i64> { a_part(w, n).iter().map(|x| -x).collect() };
    let gens: Vec<Vec<i64>> = sk.repelling[i].iter().map(neg).collect();
    let egens: Vec<Vec<i64>> = support_factors(sk, i).into_iter().map(neg).collect();
    let shift: Vec<Q> = (0..n)
        .map(|c| s * Q::from_integer(dir[c].into()) + &sk.offsets[j][c] - &sk.offsets[i][c])
        .collect();
    let mut corners: Vec<Vec<i64>> = vec![vec![0; n]];
    for g in &egens {
        let more: Vec<Vec<i64>> = corners.iter().map(|c| c.iter().zip(g).map(|(a, b)| a + b).collect()).collect();
        corners.extend(more);
    }
    corners.sort();
    corners.dedup();
    let m = gens.len();
    let mut ranges = Vec::with_capacity(n);
    for c in 0..n {
        let span = |v: &[Vec<i64>]| -> (i64, i64) {
            (v.iter().map(|g| g[c].min(0)).sum(), v.iter().map(|g| g[c].max(0)).sum())
        };
        let (lo, hi) = span(&gens);
        let (elo, ehi) = span(&egens);
        let lo = (Q::from_integer((lo - elo).into()) + &shift[c]).ceil().to_integer();
        let hi = (Q::from_integer((hi - ehi).into()) + &shift[c]).floor().to_integer();
        let lo: i64 = lo.try_into().map_err(|_| Error::Usage("slope too large".into()))?;
        let hi: i64 = hi.try_into().map_err(|_| Error::Usage("slope too large".into()))?;
        ranges.push((lo, hi));
    }
    let inside = |x: &[i64]| -> bool {
        let mut cs = Vec::new();
        for c in 0..n {
            let coeffs: Vec<Q> = gens.iter().map(|g| Q::from_integer(g[c].into())).collect();
            cs.extend(Constraint::eq(coeffs, Q::from_integer(x[c].into()) - &shift[c]));
        }
        let one = Q::from_integer(1.into());
        for t in 0..m {
            let mut e = vec![Q::zero(); m];
            e[t] = one.clone();
            let neg: Vec<Q> = e.iter().map(|v| -v).collect();
            cs.push(Constraint::ge(e, Q::zero()));
            cs.push(Constraint::ge(neg, -one.clone()));
        }
        feasible(m, &cs).is_some()
    };
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn walk(c: usize, ranges: &[(i64, i64)], cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if c == ranges.len() {
            return f(cur);
        }
        for v in ranges[c].0..=ranges[c].1 {
            cur[c] = v;
            walk(c + 1, ranges, cur, f);
        }
    }
    walk(0, &ranges, &mut cur, &mut |x: &[i64]| {
        if corners.iter().all(|c| {
            let p: Vec<i64> = c.iter().zip(x).map(|(a, b)| a + b).collect();
            inside(&p)
        }) {
            out.push(x.to_vec());
        }
    });
    Ok(out)
}

/// Window exponents at slope `s`. The window condition is strict when the
/// admissible set is the same for all slopes near `s`; otherwise `s` is on
/// a wall. Walls have denominators dividing `2⟨ν, dir⟩` for cut normals `ν`,
/// so `|s − wall| ≥ 1/(2k·den s)` and a step of `1/(128·den s)` sees both sides.
fn window_points(sk: &Skeleton, i: usize, j: usize, dir: &[i64], s: &Q) -> Result<Vec<Vec<i64>>> {
    let here = closed_window(sk, i, j, dir, s)?;
    let delta = Q::new(1.into(), s.denom() * num_bigint::BigInt::from(128));
    for t in [s - &delta, s + &delta] {
        if closed_window(sk, i, j, dir, &t)? != here {
            return Err(Error::WallSlope {
                slope: qserde::q_to_string(s),
            });
        }
    }
    Ok(here)
}

struct ColumnSolution {
    entries: Vec<LaurentPoly>,
    report: ColumnReport,
}

/// Unknown `(row, basis polynomial)` pairs for one column. In cohomology the
/// basis is `E_i · ħ^{d−e−|β|} a^β` with rational coefficients (entries are
/// homogeneous of degree `d`); in K-theory it is `E_i · a^x` with
/// coefficients in Q(ħ).
fn ansatz(sk: &Skeleton, j: usize, mode: Mode, slope: Option<&Q>) -> Result<Vec<(usize, LaurentPoly)>> {
    let n = sk.n;
    let mut out = Vec::new();
    for i in 0..sk.points.len() {
        // Components of the union over k are disjoint.
        if i == j || sk.heights[i] > sk.heights[j] || sk.subsets[i].len() != sk.subsets[j].len() {
            continue;
        }
        let factors = support_factors(sk, i);
        let e = euler(&factors, mode);
        match mode {
            Mode::H => {
                let room = sk.d[i] - factors.len();
                for beta in monomials_below(n, room) {
                    let deg: i64 = beta.iter().sum();
                    let h = (sk.d[i] - factors.len()) as i32 - deg as i32;
                    let mono = a_monomial(&beta).with_exp(idx::HBAR, h);
                    out.push((i, e.mul_monomial(&mono)));
                }
            }
            Mode::K => {
                let s = slope.ok_or_else(|| Error::Usage("K mode requires a slope".into()))?;
                let dir: Vec<i64> = (1..=n)
                    .map(|v| {
                        let ind = |set: &[usize]| if set.contains(&v) { 1 } else { 0 };
                        ind(&sk.subsets[i]) - ind(&sk.subsets[j])
                    })
                    .collect();
                for x in window_points(sk, i, j, &dir, s)? {
                    out.push((i, e.mul_monomial(&a_monomial(&x))));
                }
            }
        }
    }
    Ok(out)
}

/// `p` with `a_p := a_q`, keyed by monomial. In K mode the key forgets ħ and
/// the value is a Laurent polynomial in ħ.
fn collapsed(f: &LaurentPoly, p: usize, q: usize, n: usize, mode: Mode) -> BTreeMap<Monomial, LaurentPoly> {
    let mut out: BTreeMap<Monomial, LaurentPoly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let (beta, h) = split_monomial(m, n);
        let b = a_monomial(&collapse(&beta, p, q));
        let (key, val) = match mode {
            Mode::H => (b.with_exp(idx::HBAR, h), LaurentPoly::constant(c.clone())),
            Mode::K => (b, LaurentPoly::term(c.clone(), Monomial::var(idx::HBAR, h))),
        };
        let slot = out.entry(key).or_insert_with(LaurentPoly::zero);
        *slot = &*slot + &val;
    }
    out
}

fn solve_column(sk: &Skeleton, j: usize, mode: Mode, slope: Option<&Q>) -> Result<ColumnSolution> {
    let np = sk.points.len();
    let n = sk.n;
    let diag = diagonal_entry(sk, j, mode);
    let basis = ansatz(sk, j, mode, slope)?;
    let ncols = basis.len();
    // Equation rows keyed by (edge, collapsed monomial).
    let mut rows: Vec<(BTreeMap<usize, LaurentPoly>, LaurentPoly)> = Vec::new();
    let mut key: HashMap<(usize, Monomial), usize> = HashMap::new();
    for (e, &(s, t, p, q)) in sk.edges.iter().enumerate() {
        for (pt, sign) in [(s, 1i64), (t, -1i64)] {
            let sg = LaurentPoly::from_int(sign);
            if pt == j {
                for (m, v) in collapsed(&diag, p, q, n, mode) {
                    let r = *key.entry((e, m)).or_insert_with(|| {
                        rows.push((BTreeMap::new(), LaurentPoly::zero()));
                        rows.len() - 1
                    });
                    rows[r].1 = &rows[r].1 - &(&v * &sg);
                }
            }
            for (col, (_, f)) in basis.iter().enumerate().filter(|(_, (i, _))| *i == pt) {
                for (m, v) in collapsed(f, p, q, n, mode) {
                    let r = *key.entry((e, m)).or_insert_with(|| {
                        rows.push((BTreeMap::new(), LaurentPoly::zero()));
                        rows.len() - 1
                    });
                    let slot = rows[r].0.entry(col).or_insert_with(LaurentPoly::zero);
                    *slot = &*slot + &(&v * &sg);
                }
            }
        }
    }
    rows.retain(|(a, b)| a.values().any(|x| !x.is_zero()) || !b.is_zero());
    let (coeffs, kernel_dim): (Vec<RationalFunction>, usize) = match mode {
        Mode::H => {
            let dense: Vec<Vec<Q>> = rows
                .iter()
                .map(|(a, _)| {
                    let mut v = vec![Q::zero(); ncols];
                    for (&c, x) in a {
                        v[c] = x.constant_value().expect("rational coefficient");
                    }
                    v
                })
                .collect();
            let rhs: Vec<Q> = rows.iter().map(|(_, b)| b.constant_value().expect("rational")).collect();
            let (mut parts, kernel) = solve_rational_many(&dense, &[rhs], ncols).map_err(|e| no_solution(e, sk, j))?;
            let x = parts.pop().unwrap();
            (x.into_iter().map(RationalFunction::constant).collect(), kernel.len())
        }
        Mode::K => {
            if rows.is_empty() {
                (vec![RationalFunction::zero(); ncols], ncols)
            } else if ncols == 0 {
                if rows.iter().any(|(_, b)| !b.is_zero()) {
                    return Err(no_solution(Error::Inconsistent, sk, j));
                }
                (Vec::new(), 0)
            } else {
                let a = Matrix::from_fn(rows.len(), ncols, |r, c| {
                    rows[r].0.get(&c).map_or_else(RationalFunction::zero, |p| RationalFunction::from_poly(p.clone()))
                });
                let b: Vec<RationalFunction> = rows.iter().map(|(_, b)| RationalFunction::from_poly(b.clone())).collect();
                let sol = solve_linear(&a, &b).map_err(|e| no_solution(e, sk, j))?;
                (sol.particular().to_vec(), sol.dimension())
            }
        }
    };
    let mut acc: Vec<RationalFunction> = vec![RationalFunction::zero(); np];
    for ((i, f), c) in basis.iter().zip(&coeffs) {
        if !c.is_zero() {
            acc[*i] = &acc[*i] + &(c * &RationalFunction::from_poly(f.clone()));
        }
    }
    let mut entries = Vec::with_capacity(np);
    for (i, f) in acc.into_iter().enumerate() {
        if i == j {
            entries.push(diag.clone());
        } else {
            entries.push(f.as_poly().ok_or_else(|| {
                Error::NoSolution(format!("entry ({}, {}) is not a Laurent polynomial", sk.points[i], sk.points[j]))
            })?);
        }
    }
    Ok(ColumnSolution {
        entries,
        report: ColumnReport {
            point: sk.points[j].clone(),
            unknowns: ncols,
            equations: rows.len(),
            kernel_dimension: kernel_dim,
        },
    })
}

fn no_solution(e: Error, sk: &Skeleton, j: usize) -> Error {
    match e {
        Error::Inconsistent => Error::NoSolution(format!("column {}", sk.points[j])),
        e => e,
    }
}

fn solve_all(
    g: &Geometry,
    c: &Chamber,
    mode: Mode,
    slope: Option<&Q>,
    pol: Polarization,
) -> Result<(StabMatrix, Vec<ColumnReport>)> {
    let sk = skeleton(g, c, pol)?;
    if mode == Mode::K && slope.is_none() {
        return Err(Error::Usage("K mode requires a slope".into()));
    }
    if let Some(s) = slope {
        if s.abs() > Q::from_integer(1_000_000.into()) {
            return Err(Error::Usage("slope too large".into()));
        }
    }
    let cols: Vec<ColumnSolution> = (0..sk.points.len())
        .into_par_iter()
        .map(|j| solve_column(&sk, j, mode, slope))
        .collect::<Result<_>>()?;
    let np = sk.points.len();
    let entries: Vec<Vec<LaurentPoly>> = (0..np)
        .map(|i| (0..np).map(|j| cols[j].entries[i].clone()).collect())
        .collect();
    let reports = cols.into_iter().map(|c| c.report).collect();
    let m = StabMatrix {
        geometry: *g,
        chamber: c.clone(),
        mode,
        slope: if mode == Mode::K { slope.cloned() } else { None },
        polarization: pol,
        order: sk.points,
        signs: sk.signs,
        entries,
    };
    Ok((m, reports))
}

/// Solve the axioms; fails with [`Error::NonUnique`] if any column is not
/// pinned down.
pub fn stab_solve(g: &Geometry, c: &Chamber, mode: Mode, slope: Option<&Q>, pol: Polarization) -> Result<StabMatrix> {
    let (m, reports) = solve_all(g, c, mode, slope, pol)?;
    let dim: usize = reports.iter().map(|r| r.kernel_dimension).sum();
    if dim > 0 {
        return Err(Error::NonUnique { dimension: dim });
    }
    Ok(m)
}

/// As [`stab_solve`], but reports the solution-space size of every column
/// instead of failing on non-uniqueness. The matrix is one particular solution.
pub fn stab_solution_space(
    g: &Geometry,
    c: &Chamber,
    mode: Mode,
    slope: Option<&Q>,
    pol: Polarization,
) -> Result<(StabMatrix, Vec<ColumnReport>)> {
    solve_all(g, c, mode, slope, pol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, qr};

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    fn tp1() -> Geometry {
        Geometry::Tgr { k: 1, n: 2 }
    }

    #[test]
    fn t_star_p1_both_chambers() {
        let plus = stab_solve(&tp1(), &Chamber::standard(2), Mode::H, None, Polarization::Base).unwrap();
        assert_eq!(
            plus.entries,
            vec![vec![p("hbar - a1 + a2"), p("0")], vec![p("hbar"), p("a1 - a2")]]
        );
        assert_eq!(plus.signs, vec![1, -1]);
        let minus = stab_solve(&tp1(), &Chamber::standard(2).opposite(), Mode::H, None, Polarization::Base).unwrap();
        assert_eq!(
            minus.entries,
            vec![vec![p("-a1 + a2"), p("hbar")], vec![p("0"), p("hbar + a1 - a2")]]
        );
    }

    #[test]
    fn trivial_action_gives_identity() {
        for k in [0, 1] {
            let m = stab_solve(&Geometry::Tgr { k, n: k }, &Chamber::standard(k), Mode::H, None, Polarization::Base);
            if k == 0 {
                // n = 0 is not a geometry.
                assert!(m.is_err());
                continue;
            }
            assert!(m.unwrap().to_matrix().is_identity());
        }
        let m = stab_solve(&Geometry::Tgr { k: 0, n: 3 }, &Chamber::standard(3), Mode::H, None, Polarization::Base)
            .unwrap();
        assert!(m.to_matrix().is_identity());
    }

    #[test]
    fn dual_polarization_flips_by_global_sign() {
        let a = stab_solve(&tp1(), &Chamber::standard(2), Mode::H, None, Polarization::Base).unwrap();
        let b = stab_solve(&tp1(), &Chamber::standard(2), Mode::H, None, Polarization::Dual).unwrap();
        assert_eq!(b.to_matrix(), a.to_matrix().scale(&RationalFunction::from_int(-1)));
    }

    #[test]
    fn k_theory_t_star_p1() {
        let m = stab_solve(&tp1(), &Chamber::standard(2), Mode::K, Some(&qr(1, 2)), Polarization::Base).unwrap();
        assert_eq!(m.entries[0][0], p("1 - hbar^-1*a1*a2^-1"));
        assert_eq!(m.entries[1][1], p("-1 + a1*a2^-1"));
        // Window at {2}: [0, a1 a2⁻¹] + s(e2 − e1) + (1, −1) from the normalization.
        assert_eq!(m.entries[1][0], p("a1*a2^-1 - hbar^-1*a1*a2^-1"));
        let m = stab_solve(&tp1(), &Chamber::standard(2), Mode::K, Some(&qr(3, 2)), Polarization::Base).unwrap();
        assert_eq!(m.entries[1][0], p("1 - hbar^-1"));
        assert!(matches!(
            stab_solve(&tp1(), &Chamber::standard(2), Mode::K, Some(&qr(1, 1)), Polarization::Base),
            Err(Error::WallSlope { .. })
        ));
    }

    #[test]
    fn t_star_p2_top_column() {
        // Zero section plus the conormal line at {2}: (ħ + a1 − a2)(ħ − a2 + a3)
        // + (a2 − a1)(ħ − a2 + a3) = ħ(ħ − a2 + a3).
        let m = stab_solve(&Geometry::Tgr { k: 1, n: 3 }, &Chamber::standard(3), Mode::H, None, Polarization::Base)
            .unwrap();
        assert_eq!(m.entries[0][0], &p("hbar - a1 + a2") * &p("hbar - a1 + a3"));
        assert_eq!(m.entries[1][0], &p("hbar") * &p("hbar - a2 + a3"));
    }

    #[test]
    fn unique_for_small_grassmannians() {
        for n in 1..=4 {
            for k in 0..=n {
                for c in [Chamber::standard(n), Chamber::standard(n).opposite()] {
                    let g = Geometry::Tgr { k, n };
                    let (m, reports) = stab_solution_space(&g, &c, Mode::H, None, Polarization::Base).unwrap();
                    assert!(reports.iter().all(|r| r.kernel_dimension == 0), "{g:?} {c:?} {reports:?}");
                    let ax = check_axioms(&m).unwrap();
                    assert!(ax.passed(), "{g:?} {ax:?}");
                }
            }
        }
    }

    #[test]
    fn k_mode_axioms_at_generic_slopes() {
        for n in 1..=4 {
            for k in 0..=n {
                let g = Geometry::Tgr { k, n };
                for s in [qr(1, 3), qr(-5, 7)] {
                    let m = stab_solve(&g, &Chamber::standard(n), Mode::K, Some(&s), Polarization::Base).unwrap();
                    let r = check_axioms(&m).unwrap();
                    assert!(r.passed(), "{g:?} at {s}: {:?}", r.witness);
                }
            }
        }
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            stab_solve(&Geometry::Hilb { n: 2 }, &Chamber::standard(1), Mode::H, None, Polarization::Base),
            Err(Error::UnsupportedFamily(_))
        ));
        assert!(matches!(Chamber::parse("1,1", 2), Err(Error::InvalidChamber(_))));
        assert!(matches!(Chamber::parse("1,2,3", 2), Err(Error::InvalidChamber(_))));
        assert_eq!(Chamber::parse("-", 3).unwrap(), Chamber(vec![-3, -2, -1]));
        assert!(matches!(
            stab_solve(&tp1(), &Chamber::standard(2), Mode::K, None, Polarization::Base),
            Err(Error::Usage(_))
        ));
    }
}
