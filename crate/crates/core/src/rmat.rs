//! Geometric R-matrices `Stab₂⁻¹ ∘ Stab₁` and the identities they satisfy.
//!
//! Tensor conventions: a fixed point `S ⊂ {1..n}` of the union over `k` is
//! the basis vector `ε₁ ⊗ … ⊗ εₙ` with `ε_i = [i ∈ S]`, index `Σ ε_i 2^{n−i}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::arrange::{Hyperplane, WallAssignment, Witness};
use crate::error::{Error, Result};
use crate::geom::{FixedPoint, Geometry};
use crate::ring::{idx, limit_at_infinity, Matrix, RationalFunction};
use crate::stab::{stab_solve, Chamber, Mode, Polarization, StabMatrix};

type RF = RationalFunction;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RMatrix {
    pub geometry: Geometry,
    pub mode: Mode,
    pub basis: Vec<FixedPoint>,
    /// Label of the stable envelope the matrix starts from.
    pub from: String,
    pub to: String,
    pub entries: Matrix,
}

fn label(s: &StabMatrix) -> String {
    let c: Vec<String> = s.chamber.0.iter().map(|x| x.to_string()).collect();
    match &s.slope {
        Some(q) => format!("chamber {} slope {}", c.join(","), crate::ring::qserde::q_to_string(q)),
        None => format!("chamber {}", c.join(",")),
    }
}

/// `R = S₂⁻¹ · S₁`.
pub fn r_from_stabs(s1: &StabMatrix, s2: &StabMatrix) -> Result<RMatrix> {
    if s1.geometry != s2.geometry || s1.mode != s2.mode || s1.order != s2.order {
        return Err(Error::DimensionMismatch("stable envelopes of different geometries".into()));
    }
    let inv = s2.to_matrix().inverse().map_err(|_| Error::Singular)?;
    Ok(RMatrix {
        geometry: s1.geometry,
        mode: s1.mode,
        basis: s1.order.clone(),
        from: label(s1),
        to: label(s2),
        entries: inv.checked_mul(&s1.to_matrix())?,
    })
}

/// `R_{c₂←c₁}` in cohomology.
pub fn r_between(g: &Geometry, c1: &Chamber, c2: &Chamber, pol: Polarization) -> Result<RMatrix> {
    let s1 = stab_solve(g, c1, Mode::H, None, pol)?;
    let s2 = stab_solve(g, c2, Mode::H, None, pol)?;
    r_from_stabs(&s1, &s2)
}

pub fn tensor_index(s: &[usize], n: usize) -> usize {
    s.iter().map(|&i| 1usize << (n - i)).sum()
}

fn tensor_positions(basis: &[FixedPoint], n: usize) -> Vec<usize> {
    basis.iter().map(|p| tensor_index(p.subset().unwrap_or(&[]), n)).collect()
}

/// Two-site R-matrix `R(u)` on `V ⊗ V`, `V = ℂ²`, from the union over `k`
/// of `T*Gr(k, 2)` with `u = a₁ − a₂`, crossing from `a₁ > a₂` to `a₁ < a₂`.
pub fn two_site_r(pol: Polarization) -> Result<Matrix> {
    let g = Geometry::TgrUnion { n: 2 };
    let r = r_between(&g, &Chamber(vec![2, 1]), &Chamber(vec![1, 2]), pol)?;
    let pos = tensor_positions(&r.basis, 2);
    let mut t = Matrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            t[(pos[i], pos[j])] = r.entries[(i, j)].clone();
        }
    }
    let u = RF::var(idx::U);
    t.try_map(|x| x.substitute(idx::a(1), &u)?.substitute(idx::a(2), &RF::zero()))
}

/// `R_{ij}`: `r` on `V ⊗ V` acting on factors `i` (first) and `j` (second)
/// of `V^{⊗n}`, 1-based.
pub fn embed(r: &Matrix, d: usize, i: usize, j: usize, n: usize) -> Result<Matrix> {
    if r.rows() != d * d || !r.is_square() || i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::DimensionMismatch(format!("cannot place a {}×{} matrix at ({i}, {j}) of {n} factors", r.rows(), r.cols())));
    }
    let size = d.pow(n as u32);
    let digit = |x: usize, k: usize| (x / d.pow((n - k) as u32)) % d;
    let rest = |x: usize| (1..=n).filter(|&k| k != i && k != j).map(|k| digit(x, k)).collect::<Vec<_>>();
    Ok(Matrix::from_fn(size, size, |x, y| {
        if rest(x) != rest(y) {
            return RF::zero();
        }
        r[(digit(x, i) * d + digit(x, j), digit(y, i) * d + digit(y, j))].clone()
    }))
}

pub fn spectral(r: &Matrix, value: &RF) -> Result<Matrix> {
    r.try_map(|x| x.substitute(idx::U, value))
}

fn diff(i: usize, j: usize) -> RF {
    &RF::var(idx::a(i)) - &RF::var(idx::a(j))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YbCertificate {
    pub identity: String,
    pub status: String,
    /// `zero` or `nonzero`.
    pub residual_norm: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_entry: Option<Witness>,
}

impl YbCertificate {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

fn residual(a: &Matrix, b: &Matrix) -> Result<Option<Witness>> {
    let r = a.checked_sub(b)?;
    Ok(r.first_nonzero().map(|((row, col), x)| Witness {
        row,
        col,
        residual: x.to_string(),
    }))
}

/// `R₁₂(a₁−a₂) R₁₃(a₁−a₃) R₂₃(a₂−a₃) = R₂₃(a₂−a₃) R₁₃(a₁−a₃) R₁₂(a₁−a₂)`
/// for `r` on `V ⊗ V` in the spectral slot `u`.
pub fn yang_baxter_check(r: &Matrix) -> Result<YbCertificate> {
    let d = (1..=r.rows()).find(|d| d * d == r.rows()).filter(|_| r.is_square());
    let d = d.ok_or_else(|| Error::DimensionMismatch(format!("{}×{} is not an operator on V ⊗ V", r.rows(), r.cols())))?;
    let pieces: Vec<Matrix> = [(1, 2), (1, 3), (2, 3)]
        .par_iter()
        .map(|&(i, j)| embed(&spectral(r, &diff(i, j))?, d, i, j, 3))
        .collect::<Result<_>>()?;
    let (r12, r13, r23) = (&pieces[0], &pieces[1], &pieces[2]);
    let (lhs, rhs) = rayon::join(
        || r12.checked_mul(r13)?.checked_mul(r23),
        || r23.checked_mul(r13)?.checked_mul(r12),
    );
    let w = residual(&lhs?, &rhs?)?;
    Ok(YbCertificate {
        identity: "YB".into(),
        status: if w.is_none() { "pass" } else { "fail" }.into(),
        residual_norm: if w.is_none() { "zero" } else { "nonzero" }.into(),
        witness_entry: w,
    })
}

/// `R_{c←c′} R_{c′←c} = I`.
pub fn unitarity_holds(g: &Geometry, c: &Chamber, c2: &Chamber, pol: Polarization) -> Result<bool> {
    let there = r_between(g, c, c2, pol)?;
    let back = r_between(g, c2, c, pol)?;
    Ok(back.entries.checked_mul(&there.entries)?.is_identity())
}

/// The single pair `(i, j)`, `i < j`, ordered differently by the chambers.
pub fn separating_wall(c: &Chamber, c2: &Chamber) -> Result<(usize, usize)> {
    let n = c.0.len();
    if c2.0.len() != n {
        return Err(Error::DimensionMismatch("chambers of different rank".into()));
    }
    let mut flips = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if (c.0[i - 1] > c.0[j - 1]) != (c2.0[i - 1] > c2.0[j - 1]) {
                flips.push((i, j));
            }
        }
    }
    match flips.as_slice() {
        [w] => Ok(*w),
        _ => Err(Error::AdjacentRequired(format!("{} root hyperplanes separate {:?} and {:?}", flips.len(), c.0, c2.0))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallCertificate {
    pub wall: (usize, usize),
    /// Entries depend on the equivariant variables only through `a_i − a_j`.
    pub through_wall_equation: bool,
    /// Equal to the two-site R-matrix placed on factors `i, j`.
    pub matches_subgeometry: bool,
    pub status: String,
}

pub fn wall_factorization_check(g: &Geometry, c: &Chamber, c2: &Chamber, pol: Polarization) -> Result<WallCertificate> {
    let n = g.framing().ok_or_else(|| Error::UnsupportedFamily("wall factorization needs a framing".into()))?;
    c.check(n)?;
    c2.check(n)?;
    let (i, j) = separating_wall(c, c2)?;
    let r = r_between(g, c, c2, pol)?;
    let eps = RF::var(idx::EPS);
    let shift = |x: &RF| -> Result<RF> {
        x.substitute(idx::a(i), &(&RF::var(idx::a(i)) + &eps))?
            .substitute(idx::a(j), &(&RF::var(idx::a(j)) + &eps))
    };
    let mut through = true;
    for (_, x) in r.entries.entries() {
        if (1..=n).any(|m| m != i && m != j && x.involves(idx::a(m))) || shift(x)? != *x {
            through = false;
            break;
        }
    }
    let (p, q) = if c.0[i - 1] > c.0[j - 1] { (i, j) } else { (j, i) };
    let local = embed(&spectral(&two_site_r(pol)?, &diff(p, q))?, 2, p, q, n)?;
    let pos = tensor_positions(&r.basis, n);
    let np = pos.len();
    let restricted = Matrix::from_fn(np, np, |x, y| local[(pos[x], pos[y])].clone());
    let matches = restricted == r.entries;
    Ok(WallCertificate {
        wall: (i, j),
        through_wall_equation: through,
        matches_subgeometry: matches,
        status: if through && matches { "pass" } else { "fail" }.into(),
    })
}

/// Global sign `ε` and diagonal signs `D` with `a = ε D b D`, if any.
pub fn sign_gauge(a: &Matrix, b: &Matrix) -> Option<(i8, Vec<i8>)> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n || b.cols() != n || n > 16 {
        return None;
    }
    for eps in [1i8, -1] {
        for mask in 0..(1u32 << n.saturating_sub(1)) {
            let d: Vec<i8> = (0..n).map(|k| if k > 0 && mask >> (k - 1) & 1 == 1 { -1 } else { 1 }).collect();
            let ok = (0..n).all(|r| {
                (0..n).all(|c| {
                    let s = eps * d[r] * d[c];
                    let v = if s > 0 { b[(r, c)].clone() } else { -&b[(r, c)] };
                    v == a[(r, c)]
                })
            });
            if ok {
                return Some((eps, d));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightBlock {
    pub weight: usize,
    pub indices: Vec<usize>,
    pub block: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalR {
    pub r: Matrix,
    /// `±1` gauge applied so that `R(∞) = I`.
    pub gauge: Vec<i8>,
    pub blocks: Vec<WeightBlock>,
    /// Entries of `r` between different weight spaces all vanish.
    pub weight_preserving: bool,
}

/// `r` = coefficient of `u⁻¹` in `(R(u) − I)/ħ`, for `R` on `V ⊗ V`,
/// `V = ℂ²`, blocked by the number of occupied sites.
pub fn classical_r(r: &Matrix, normalize: bool) -> Result<ClassicalR> {
    if !r.is_square() {
        return Err(Error::DimensionMismatch("R must be square".into()));
    }
    let n = r.rows();
    let expand = |m: &Matrix| -> Result<Vec<Vec<Vec<RF>>>> {
        (0..n)
            .map(|i| (0..n).map(|j| limit_at_infinity(&m[(i, j)], idx::U, 2)).collect())
            .collect()
    };
    let mut ex = expand(r)?;
    let at_inf = Matrix::from_fn(n, n, |i, j| ex[i][j][0].clone());
    let mut gauge = vec![1i8; n];
    let mut rr = r.clone();
    if !at_inf.is_identity() {
        let signs: Option<Vec<i8>> = at_inf.is_diagonal().then(|| {
            (0..n)
                .map(|k| match at_inf[(k, k)].constant_value() {
                    Some(v) if v == crate::ring::q(1) => Some(1),
                    Some(v) if v == crate::ring::q(-1) => Some(-1),
                    _ => None,
                })
                .collect::<Option<Vec<i8>>>()
        }).flatten();
        match (normalize, signs) {
            (true, Some(s)) => {
                gauge = s;
                let dm = Matrix::diagonal(gauge.iter().map(|&x| RF::from_int(x as i64)).collect());
                rr = dm.checked_mul(&rr)?;
                ex = expand(&rr)?;
            }
            _ => return Err(Error::Usage("R(u) does not tend to the identity as u → ∞".into())),
        }
    }
    let hbar = RF::var(idx::HBAR);
    let m = Matrix::from_fn(n, n, |i, j| ex[i][j][1].clone());
    let rc = m.try_map(|x| x.checked_div(&hbar))?;
    let weight = |x: usize| x.count_ones() as usize;
    let mut blocks = Vec::new();
    let max_w = (0..n).map(weight).max().unwrap_or(0);
    for w in 0..=max_w {
        let indices: Vec<usize> = (0..n).filter(|&x| weight(x) == w).collect();
        if !indices.is_empty() {
            blocks.push(WeightBlock {
                weight: w,
                block: rc.submatrix(&indices, &indices),
                indices,
            });
        }
    }
    let weight_preserving = rc.entries().all(|((i, j), x)| x.is_zero() || weight(i) == weight(j));
    let _ = rr;
    Ok(ClassicalR {
        r: rc,
        gauge,
        blocks,
        weight_preserving,
    })
}

/// Swap of the two tensor factors of `V ⊗ V`.
pub fn flip(m: &Matrix, d: usize) -> Matrix {
    let sw = |x: usize| (x % d) * d + x / d;
    Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(sw(i), sw(j))].clone())
}

/// The swap `P(x ⊗ y) = y ⊗ x` on `V ⊗ V`, `dim V = d`.
pub fn swap_operator(d: usize) -> Matrix {
    Matrix::from_fn(d * d, d * d, |i, j| if j == (i % d) * d + i / d { RF::one() } else { RF::zero() })
}

/// Wall crossings of the `A_{n−1}` root arrangement assigned the two-site
/// matrix `r` on the factors of the wall, `r(u)` from the positive side of
/// `a_i − a_j` (`i < j`) and `r(−u)` from the negative side.
pub struct TensorWalls {
    pub r: Matrix,
    pub d: usize,
    pub n: usize,
}

impl WallAssignment for TensorWalls {
    fn matrix(&self, _index: usize, h: &Hyperplane, from_sign: i8) -> Result<Matrix> {
        let nz: Vec<usize> = (0..h.normal.len()).filter(|&k| h.normal[k] != 0).collect();
        let [p, q] = nz[..] else {
            return Err(Error::DimensionMismatch(format!("{:?} is not a root hyperplane", h.normal)));
        };
        // ⟨n, a⟩ = ±(a_p − a_q); the checker substitutes u := ⟨n, a⟩.
        let along = h.normal[p] > 0;
        let (first, second) = if (from_sign > 0) == along { (p + 1, q + 1) } else { (q + 1, p + 1) };
        let u = RF::var(idx::U);
        let value = if from_sign > 0 { u } else { -&u };
        embed(&spectral(&self.r, &value)?, self.d, first, second, self.n)
    }
}

/// Geometric wall crossings: `R_{c′←c}` of `g` across each root hyperplane,
/// computed at a representative chamber on the starting side.
pub struct GeometricWalls {
    pub geometry: Geometry,
    pub polarization: Polarization,
}

impl WallAssignment for GeometricWalls {
    fn matrix(&self, _index: usize, h: &Hyperplane, from_sign: i8) -> Result<Matrix> {
        let n = h.normal.len();
        let nz: Vec<usize> = (0..n).filter(|&k| h.normal[k] != 0).collect();
        let [p, q] = nz[..] else {
            return Err(Error::DimensionMismatch(format!("{:?} is not a root hyperplane", h.normal)));
        };
        // On the starting side ⟨n, a⟩ has sign `from_sign`.
        let pos = if (h.normal[p] > 0) == (from_sign > 0) { p } else { q };
        let neg = if pos == p { q } else { p };
        let mut sigma = vec![0i64; n];
        sigma[pos] = n as i64;
        sigma[neg] = n as i64 - 1;
        let mut next = n as i64 - 2;
        for (k, s) in sigma.iter_mut().enumerate() {
            if k != pos && k != neg {
                *s = next;
                next -= 1;
            }
        }
        let mut other = sigma.clone();
        other.swap(pos, neg);
        Ok(r_between(&self.geometry, &Chamber(sigma), &Chamber(other), self.polarization)?.entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrange::groupoid_check;
    use crate::geom::root_arrangement;
    use crate::ring::parse_ratfunc;

    fn rf(s: &str) -> RF {
        parse_ratfunc(s).unwrap()
    }

    /// `I + u·E_{01,10}`: a one-sided hopping term, not a solution of YB.
    fn hopping() -> Matrix {
        let u = rf("u");
        Matrix::from_fn(4, 4, |i, j| if i == j { RF::one() } else if (i, j) == (1, 2) { u.clone() } else { RF::zero() })
    }

    fn tp1() -> Geometry {
        Geometry::Tgr { k: 1, n: 2 }
    }

    #[test]
    fn t_star_p1() {
        let r = r_between(&tp1(), &Chamber(vec![2, 1]), &Chamber(vec![1, 2]), Polarization::Base).unwrap();
        let a = rf("a1 - a2");
        let h = rf("hbar");
        let den = &a + &h;
        // Hand inversion of the 2×2 stabs.
        let want = Matrix::from_fn(2, 2, |i, j| if i == j { &a / &den } else { &h / &den });
        assert_eq!(r.entries, want);
        let printed = Matrix::from_fn(2, 2, |i, j| if i == j { -&a / den.clone() } else { &h / &den });
        assert_eq!(sign_gauge(&printed, &r.entries), Some((-1, vec![1, -1])));
    }

    #[test]
    fn same_stab_gives_identity() {
        let s = stab_solve(&tp1(), &Chamber(vec![2, 1]), Mode::H, None, Polarization::Base).unwrap();
        assert!(r_from_stabs(&s, &s).unwrap().entries.is_identity());
    }

    #[test]
    fn yang_baxter_for_the_geometric_matrix() {
        let r = two_site_r(Polarization::Base).unwrap();
        assert!(yang_baxter_check(&r).unwrap().passed());
        let u = rf("u");
        let h = rf("hbar");
        let yang = Matrix::from_fn(4, 4, |i, j| {
            let p = if swap_operator(2)[(i, j)].is_one() { h.clone() } else { RF::zero() };
            let d = if i == j { u.clone() } else { RF::zero() };
            &(&d + &p) / &(&u + &h)
        });
        assert_eq!(r, yang);
        assert!(yang_baxter_check(&Matrix::identity(4)).unwrap().passed());
        assert!(yang_baxter_check(&swap_operator(2)).unwrap().passed());
    }

    #[test]
    fn yang_baxter_failure_has_a_witness() {
        let c = yang_baxter_check(&hopping()).unwrap();
        assert!(!c.passed());
        assert_eq!(c.residual_norm, "nonzero");
        assert!(c.witness_entry.is_some());
        assert!(matches!(yang_baxter_check(&Matrix::identity(3)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn unitarity_and_walls_for_three_sites() {
        let g = Geometry::TgrUnion { n: 3 };
        let c = Chamber(vec![3, 2, 1]);
        for c2 in [Chamber(vec![2, 3, 1]), Chamber(vec![3, 1, 2])] {
            assert!(unitarity_holds(&g, &c, &c2, Polarization::Base).unwrap());
            let w = wall_factorization_check(&g, &c, &c2, Polarization::Base).unwrap();
            assert_eq!(w.status, "pass", "{w:?}");
        }
        assert!(matches!(
            wall_factorization_check(&g, &c, &Chamber(vec![1, 2, 3]), Polarization::Base),
            Err(Error::AdjacentRequired(_))
        ));
        let w = wall_factorization_check(&Geometry::Tgr { k: 1, n: 3 }, &c, &Chamber(vec![2, 3, 1]), Polarization::Base).unwrap();
        assert_eq!(w.status, "pass");
    }

    #[test]
    fn two_sites_reduce_to_t_star_p1() {
        let w = wall_factorization_check(&tp1(), &Chamber(vec![2, 1]), &Chamber(vec![1, 2]), Polarization::Base).unwrap();
        assert_eq!(w.status, "pass");
    }

    #[test]
    fn classical_limit() {
        let r = two_site_r(Polarization::Base).unwrap();
        let c = classical_r(&r, true).unwrap();
        let p = swap_operator(2);
        assert_eq!(c.r, p.checked_sub(&Matrix::identity(4)).unwrap());
        assert!(c.weight_preserving);
        assert_eq!(flip(&c.r, 2), c.r);
        assert_eq!(c.blocks.iter().map(|b| b.weight).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(classical_r(&Matrix::identity(4), false).unwrap().r.is_zero());
        let pole = Matrix::identity(4).scale(&rf("u"));
        assert!(matches!(classical_r(&pole, true), Err(Error::PoleAtInfinity(1))));
        let flipped = Matrix::diagonal(vec![RF::from_int(1), RF::from_int(-1), RF::from_int(-1), RF::from_int(1)]);
        let g = classical_r(&flipped.checked_mul(&r).unwrap(), true).unwrap();
        assert_eq!(g.gauge, vec![1, -1, -1, 1]);
        assert_eq!(g.r, c.r);
    }

    #[test]
    fn groupoid_matches_yang_baxter() {
        let arr = root_arrangement(&Geometry::TgrUnion { n: 3 }).unwrap();
        let good = TensorWalls { r: two_site_r(Polarization::Base).unwrap(), d: 2, n: 3 };
        assert!(groupoid_check(&arr, &good).unwrap().passed());
        let bad_r = hopping();
        assert!(!yang_baxter_check(&bad_r).unwrap().passed());
        let cert = groupoid_check(&arr, &TensorWalls { r: bad_r, d: 2, n: 3 }).unwrap();
        assert!(!cert.passed());
        assert!(cert.strata.iter().any(|s| s.residual.is_some()));
    }

    #[test]
    fn geometric_walls_form_a_groupoid_representation() {
        let g = Geometry::TgrUnion { n: 3 };
        let arr = root_arrangement(&g).unwrap();
        let walls = GeometricWalls { geometry: g, polarization: Polarization::Base };
        assert!(groupoid_check(&arr, &walls).unwrap().passed());
    }
}
