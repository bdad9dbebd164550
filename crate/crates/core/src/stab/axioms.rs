//! Re-verification of a solved [`StabMatrix`] against the axioms, written
//! without reference to the solver's ansatz.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{normalization_offset, Mode, StabMatrix};
use crate::error::Result;
use crate::geom::tangent_weights;
use crate::ring::fm::{feasible, Constraint};
use crate::ring::{a_degree, idx, LaurentPoly, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// Entries at strictly higher points vanish.
    pub triangular: bool,
    /// Diagonal equals ± the Euler class of the repelling half.
    pub diagonal: bool,
    /// Cohomology: deg_A of every diagonal entry is half the dimension.
    pub diagonal_degree: bool,
    /// Cohomology: off-diagonal entries have strictly smaller deg_A.
    pub degree_drop: bool,
    /// K-theory: Newton polytopes of off-diagonal entries sit in the window
    /// for every slope near the given one.
    pub window: bool,
    pub gkm: bool,
    /// Off-diagonal restrictions at `i` are divisible by the repelling
    /// characters at `i` that involve ħ (the conormal directions).
    pub support: bool,
    /// Human-readable description of the first violation, if any.
    pub witness: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.triangular && self.diagonal && self.diagonal_degree && self.degree_drop && self.window && self.gkm && self.support
    }
}

/// `x ∈ Σ [0, g_k]`.
fn in_zonotope(x: &[Q], gens: &[Vec<i64>]) -> bool {
    let m = gens.len();
    let mut cs = Vec::new();
    for c in 0..x.len() {
        let coeffs: Vec<Q> = gens.iter().map(|g| Q::from_integer(g[c].into())).collect();
        cs.extend(Constraint::eq(coeffs, x[c].clone()));
    }
    for k in 0..m {
        let mut e = vec![Q::zero(); m];
        e[k] = Q::one();
        let neg: Vec<Q> = e.iter().map(|v| -v).collect();
        cs.push(Constraint::ge(e, Q::zero()));
        cs.push(Constraint::ge(neg, -Q::one()));
    }
    feasible(m, &cs).is_some()
}

fn a_exponents(p: &LaurentPoly, n: usize) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = p
        .terms()
        .map(|(m, _)| (1..=n).map(|i| m.exp(idx::a(i)) as i64).collect())
        .collect();
    v.sort();
    v.dedup();
    v
}

pub fn check_axioms(m: &StabMatrix) -> Result<AxiomReport> {
    let n = m.geometry.framing().unwrap_or(0);
    let avars: Vec<usize> = (1..=n).map(idx::a).collect();
    let np = m.size();
    let mut r = AxiomReport {
        triangular: true,
        diagonal: true,
        diagonal_degree: true,
        degree_drop: true,
        window: true,
        gkm: true,
        support: true,
        witness: None,
    };
    let fail = |flag: &mut bool, what: String, r_w: &mut Option<String>| {
        *flag = false;
        if r_w.is_none() {
            *r_w = Some(what);
        }
    };
    let subsets: Vec<Vec<usize>> = m.order.iter().map(|p| p.subset().unwrap_or(&[]).to_vec()).collect();
    let height = |s: &[usize]| -> i64 { s.iter().map(|&i| m.chamber.0[i - 1]).sum() };
    let mut witness = None;
    let mut row_conormal: Vec<Vec<LaurentPoly>> = Vec::with_capacity(np);
    let mut offsets = Vec::with_capacity(np);
    let mut zonotopes: Vec<Vec<Vec<i64>>> = Vec::with_capacity(np);
    for p in &m.order {
        let t = tangent_weights(&m.geometry, p)?;
        offsets.push(normalization_offset(&t.weights, &m.chamber, m.polarization, n));
        zonotopes.push(
            t.weights
                .iter()
                .filter(|w| (1..=n).map(|i| m.chamber.0[i - 1] * w.coeff(idx::a(i))).sum::<i64>() < 0)
                .map(|w| (1..=n).map(|i| -w.coeff(idx::a(i))).collect())
                .collect(),
        );
        row_conormal.push(
            t.weights
                .iter()
                .filter(|w| w.coeff(idx::HBAR) != 0)
                .filter(|w| (1..=n).map(|i| m.chamber.0[i - 1] * w.coeff(idx::a(i))).sum::<i64>() < 0)
                .map(|w| match m.mode {
                    Mode::H => w.linear(),
                    Mode::K => &LaurentPoly::one() - &LaurentPoly::term(Q::one(), w.monomial().inv()),
                })
                .collect(),
        );
    }
    for j in 0..np {
        let t = tangent_weights(&m.geometry, &m.order[j])?;
        let mut euler = LaurentPoly::one();
        let mut size = 0usize;

        for w in &t.weights {
            let pair: i64 = (1..=n).map(|i| m.chamber.0[i - 1] * w.coeff(idx::a(i))).sum();
            if pair < 0 {
                size += 1;
                let f = match m.mode {
                    Mode::H => w.linear(),
                    Mode::K => {
                        &LaurentPoly::one() - &LaurentPoly::term(Q::one(), w.monomial().inv())
                    }
                };
                euler = &euler * &f;
            }
        }
        let dj = &m.entries[j][j];
        if *dj != euler && *dj != -&euler {
            fail(&mut r.diagonal, format!("diagonal at {}", m.order[j]), &mut witness);
        }
        if m.mode == Mode::H && !dj.is_zero() && a_degree(dj, &avars)? != size as i64 {
            fail(&mut r.diagonal_degree, format!("deg_A of diagonal at {}", m.order[j]), &mut witness);
        }
        for i in 0..np {
            if i == j {
                continue;
            }
            let e = &m.entries[i][j];
            if e.is_zero() {
                continue;
            }
            if height(&subsets[i]) > height(&subsets[j]) {
                fail(&mut r.triangular, format!("entry ({}, {})", m.order[i], m.order[j]), &mut witness);
            }
            if row_conormal[i].iter().any(|f| e.div_exact(f).is_none()) {
                fail(&mut r.support, format!("support at ({}, {})", m.order[i], m.order[j]), &mut witness);
            }
            match m.mode {
                Mode::H => {
                    let di = &m.entries[i][i];
                    if a_degree(e, &avars)? >= a_degree(di, &avars)? {
                        fail(&mut r.degree_drop, format!("deg_A at ({}, {})", m.order[i], m.order[j]), &mut witness);
                    }
                }
                Mode::K => {
                    let s = m.slope.clone().unwrap_or_else(Q::zero);
                    let delta = Q::new(1.into(), s.denom() * num_bigint::BigInt::from(128));
                    for x in a_exponents(e, n) {
                        for t in [&s - &delta, &s + &delta] {
                            let y: Vec<Q> = (1..=n)
                                .map(|v| {
                                    let ind = |set: &[usize]| if set.contains(&v) { 1 } else { 0 };
                                    let sh = &t * Q::from_integer((ind(&subsets[i]) - ind(&subsets[j])).into())
                                        + &offsets[j][v - 1]
                                        - &offsets[i][v - 1];
                                    Q::from_integer(x[v - 1].into()) - sh
                                })
                                .collect();
                            if !in_zonotope(&y, &zonotopes[i]) {
                                fail(&mut r.window, format!("window at ({}, {})", m.order[i], m.order[j]), &mut witness);
                            }
                        }
                    }
                }
            }
        }
    }
    // GKM: along every edge S, S' = S∖{p}∪{q}, restrictions agree modulo a_p − a_q.
    for (si, s) in subsets.iter().enumerate() {
        for (ti, t) in subsets.iter().enumerate() {
            let only_s: Vec<usize> = s.iter().copied().filter(|x| !t.contains(x)).collect();
            let only_t: Vec<usize> = t.iter().copied().filter(|x| !s.contains(x)).collect();
            if si >= ti || s.len() != t.len() || only_s.len() != 1 {
                continue;
            }
            let root = &LaurentPoly::var(idx::a(only_s[0])) - &LaurentPoly::var(idx::a(only_t[0]));
            for j in 0..np {
                let diff = &m.entries[si][j] - &m.entries[ti][j];
                if !diff.is_zero() && diff.div_exact(&root).is_none() {
                    fail(
                        &mut r.gkm,
                        format!("column {} along {} to {}", m.order[j], m.order[si], m.order[ti]),
                        &mut witness,
                    );
                }
            }
        }
    }
    r.witness = witness;
    Ok(r)
}
