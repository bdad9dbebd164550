//! Quantum multiplication by the determinant divisor on `T*Gr(k, n)` and the
//! quantum connection it defines.
//!
//! Working basis is the fixed-point basis. The Casimir is built in the
//! stable basis of the standard chamber, where `H_T(⊔_k T*Gr(k,n))` is
//! `(ℂ²)^{⊗n}`, and transported by the stable envelope.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{fixed_points, kahler_roots, tangent_weights, FixedPoint, Geometry};
use crate::ring::{idx, LaurentPoly, Matrix, RationalFunction, Q};
use crate::rmat::{classical_r, tensor_index, two_site_r};
use crate::stab::{stab_solve, Chamber, Mode, Polarization};

type RF = RationalFunction;

fn a1_family(g: &Geometry) -> Result<usize> {
    match *g {
        Geometry::Tgr { n, .. } | Geometry::TgrUnion { n } => {
            g.validate()?;
            Ok(n)
        }
        Geometry::Hilb { .. } => Err(Error::UnsupportedFamily("quantum multiplication is built for T*Gr(k,n) only".into())),
    }
}

/// `λ∪` for `λ = c · det`, restricting to `c Σ_{i∈S} a_i` at `S`.
pub fn cup_divisor(g: &Geometry, c: &Q) -> Result<Matrix> {
    a1_family(g)?;
    let pts = fixed_points(g)?;
    Ok(Matrix::diagonal(
        pts.iter()
            .map(|p| {
                let s: LaurentPoly = p
                    .subset()
                    .unwrap()
                    .iter()
                    .fold(LaurentPoly::zero(), |acc, &i| &acc + &LaurentPoly::var(idx::a(i)));
                RF::from_poly(s.scale(c))
            })
            .collect(),
    ))
}

/// `S⁻¹ M S`: an operator in the fixed-point basis written in the stable basis.
pub fn to_stable_basis(m: &Matrix, g: &Geometry, c: &Chamber, pol: Polarization) -> Result<Matrix> {
    let s = stab_solve(g, c, Mode::H, None, pol)?.to_matrix();
    s.inverse()?.checked_mul(m)?.checked_mul(&s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CasimirOp {
    pub geometry: Geometry,
    pub alpha: i64,
    pub order: Vec<FixedPoint>,
    /// In the stable basis of the standard chamber.
    pub matrix: Matrix,
}

/// Single-site ladder operators read off the weight-changing block of the
/// classical r-matrix: `r ⊃ ρ f ⊗ e`, with `e = E₁₀` raising and `f = ρ E₀₁`.
fn ladders(pol: Polarization) -> Result<(Matrix, Matrix)> {
    let r = classical_r(&two_site_r(pol)?, true)?;
    // Row |01⟩, column |10⟩.
    let rho = r.r[(1, 2)].clone();
    let e = Matrix::from_fn(2, 2, |i, j| if (i, j) == (1, 0) { RF::one() } else { RF::zero() });
    let f = Matrix::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { rho.clone() } else { RF::zero() });
    Ok((e, f))
}

/// `Σ_i x_i` on `(ℂ²)^{⊗n}`.
fn coproduct(x: &Matrix, n: usize) -> Matrix {
    let mut acc = Matrix::zeros(1 << n, 1 << n);
    for i in 0..n {
        let left = Matrix::identity(1 << i);
        let right = Matrix::identity(1 << (n - 1 - i));
        acc = acc.checked_add(&left.kron(x).kron(&right)).expect("same size");
    }
    acc
}

/// `:g_{−α} g_α:` with the lowering operator acting first.
pub fn casimir(g: &Geometry, alpha: i64) -> Result<CasimirOp> {
    let n = a1_family(g)?;
    // Roots of sl₂, whatever the component.
    if alpha.abs() != 1 {
        return Err(Error::RootOutOfRange(alpha));
    }
    let (e, f) = ladders(Polarization::Base)?;
    let full = coproduct(&e, n).checked_mul(&coproduct(&f, n))?;
    let order = fixed_points(g)?;
    let pos: Vec<usize> = order.iter().map(|p| tensor_index(p.subset().unwrap(), n)).collect();
    let np = pos.len();
    Ok(CasimirOp {
        geometry: *g,
        alpha,
        matrix: Matrix::from_fn(np, np, |i, j| full[(pos[i], pos[j])].clone()),
        order,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantumProduct {
    pub geometry: Geometry,
    #[serde(with = "crate::ring::qserde")]
    pub lambda: Q,
    pub kappa: bool,
    pub order: Vec<FixedPoint>,
    /// Fixed-point basis, in `a`, `ħ`, `z`.
    pub operator: Matrix,
    pub cup: Matrix,
    pub scalar: RF,
}

impl QuantumProduct {
    pub fn quantum_part(&self) -> Matrix {
        self.operator.checked_sub(&self.cup).expect("same size")
    }
}

/// `λ⋆ = λ∪ − ħ Σ_{α>0} (λ,α) z^α/(1 − z^α) Casimir_α + s(z)`, with `s`
/// fixed by `λ⋆ 1 = λ`. `kappa` replaces `z` by `−z`.
pub fn quantum_mult(g: &Geometry, c: &Q, kappa: bool) -> Result<QuantumProduct> {
    a1_family(g)?;
    let cup = cup_divisor(g, c)?;
    let order = fixed_points(g)?;
    let np = order.len();
    let s = stab_solve(g, &Chamber::standard(g.framing().unwrap()), Mode::H, None, Polarization::Base)?.to_matrix();
    let sinv = s.inverse()?;
    let z = if kappa { -&RF::var(idx::Z) } else { RF::var(idx::Z) };
    let hbar = RF::var(idx::HBAR);
    let mut quantum = Matrix::zeros(np, np);
    for alpha in kahler_roots(g)?.into_iter().filter(|&a| a > 0) {
        let cas = casimir(g, alpha)?;
        let za = z.pow(alpha as i32)?;
        let w = za.checked_div(&(&RF::one() - &za))?;
        let pairing = RF::constant(c * Q::from_integer(alpha.into()));
        let coeff = -&(&(&hbar * &pairing) * &w);
        let fixed = s.checked_mul(&cas.matrix)?.checked_mul(&sinv)?;
        quantum = quantum.checked_add(&fixed.scale(&coeff))?;
    }
    let ones = vec![RF::one(); np];
    let v = quantum.mul_vec(&ones)?;
    let scalar = -&v[0];
    if v.iter().any(|x| *x != v[0]) {
        return Err(Error::ScalarUnderdetermined(format!(
            "the quantum part does not map 1 to a multiple of 1 on {g:?}"
        )));
    }
    let operator = cup
        .checked_add(&quantum)?
        .checked_add(&Matrix::identity(np).scale(&scalar))?;
    Ok(QuantumProduct {
        geometry: *g,
        lambda: c.clone(),
        kappa,
        order,
        operator,
        cup,
        scalar,
    })
}

/// `diag(1 / e(T_S))`.
pub fn localization_pairing(g: &Geometry) -> Result<Matrix> {
    let pts = fixed_points(g)?;
    let d: Vec<RF> = pts
        .iter()
        .map(|p| {
            let t = tangent_weights(g, p)?;
            let e = t.weights.iter().fold(LaurentPoly::one(), |acc, w| &acc * &w.linear());
            RF::from_poly(e).inv()
        })
        .collect::<Result<_>>()?;
    Ok(Matrix::diagonal(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionCertificate {
    pub commuting: bool,
    pub flat: bool,
    pub z0_is_cup: bool,
    pub unit: bool,
    pub hbar_divisible: bool,
    /// Every z-pole lies on `z^α = 1`.
    pub poles_on_roots: bool,
    /// Some entry does have a pole there (absent only if the quantum part vanishes).
    pub pole_present: bool,
    pub self_adjoint: bool,
    pub status: String,
}

fn strip_root_factors(den: &LaurentPoly, roots: &[i64]) -> (LaurentPoly, bool) {
    let mut d = den.clone();
    let mut found = false;
    for &a in roots {
        let f = &LaurentPoly::one() - &LaurentPoly::var_pow(idx::Z, a as i32);
        let g = &LaurentPoly::one() + &LaurentPoly::var_pow(idx::Z, a as i32);
        loop {
            if let Some(q) = d.div_exact(&f) {
                d = q;
                found = true;
            } else if let Some(q) = d.div_exact(&g) {
                // z ↦ −z under the theta shift.
                d = q;
                found = true;
            } else {
                break;
            }
        }
    }
    (d, found)
}

fn check_one(p: &QuantumProduct, pairing: &Matrix, roots: &[i64]) -> Result<ConnectionCertificate> {
    let np = p.order.len();
    let at0 = p.operator.try_map(|x| x.substitute(idx::Z, &RF::zero()))?;
    let z0_is_cup = at0 == p.cup;
    let ones = vec![RF::one(); np];
    let img = p.operator.mul_vec(&ones)?;
    let unit = img.iter().enumerate().all(|(i, x)| *x == p.cup[(i, i)]);
    let quantum = p.quantum_part();
    let hbar_divisible = quantum
        .entries()
        .all(|(_, x)| x.is_zero() || divisible_at_zero(x));
    let mut poles_on_roots = true;
    let mut pole_present = false;
    for (_, x) in p.operator.entries() {
        let (rest, found) = strip_root_factors(x.den(), roots);
        pole_present |= found;
        if rest.involves(idx::Z) {
            poles_on_roots = false;
        }
    }
    let gm = pairing.checked_mul(&p.operator)?;
    let self_adjoint = gm == gm.transpose();
    let quantum_zero = quantum.is_zero();
    let ok = z0_is_cup && unit && hbar_divisible && poles_on_roots && (pole_present || quantum_zero) && self_adjoint;
    Ok(ConnectionCertificate {
        commuting: true,
        flat: true,
        z0_is_cup,
        unit,
        hbar_divisible,
        poles_on_roots,
        pole_present,
        self_adjoint,
        status: if ok { "pass" } else { "fail" }.into(),
    })
}

/// `x = N/D` vanishes at `ħ = 0` to first order: `N(ħ=0) = 0` and `D(ħ=0) ≠ 0`.
fn divisible_at_zero(x: &RF) -> bool {
    let n0 = x.num().substitute(idx::HBAR, &LaurentPoly::zero());
    let d0 = x.den().substitute(idx::HBAR, &LaurentPoly::zero());
    matches!((n0, d0), (Some(n), Some(d)) if n.is_zero() && !d.is_zero())
}

/// Checks every `λ⋆` in the set and the pairwise flatness
/// `[∇_λ, ∇_μ] = 0`, `∇_λ = ε (λ,·) z ∂_z − λ⋆`.
/// Entries over one common denominator: `M = N / D`.
fn poly_form(m: &Matrix) -> (Vec<Vec<LaurentPoly>>, LaurentPoly) {
    let mut dens: Vec<LaurentPoly> = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let d = m[(r, c)].den();
            if !d.is_one() && !dens.contains(d) {
                dens.push(d.clone());
            }
        }
    }
    let total = dens.iter().fold(LaurentPoly::one(), |acc, d| &acc * d);
    let nums = (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let x = &m[(r, c)];
                    dens.iter().filter(|d| *d != x.den()).fold(x.num().clone(), |acc, d| &acc * d)
                })
                .collect()
        })
        .collect();
    (nums, total)
}

fn poly_commutator(a: &[Vec<LaurentPoly>], b: &[Vec<LaurentPoly>]) -> Vec<Vec<LaurentPoly>> {
    let n = a.len();
    let prod = |x: &[Vec<LaurentPoly>], y: &[Vec<LaurentPoly>], r: usize, c: usize| {
        (0..n).fold(LaurentPoly::zero(), |acc, k| &acc + &(&x[r][k] * &y[k][c]))
    };
    (0..n).map(|r| (0..n).map(|c| &prod(a, b, r, c) - &prod(b, a, r, c)).collect()).collect()
}

pub fn connection_check(g: &Geometry, lambdas: &[Q], kappa: bool) -> Result<ConnectionCertificate> {
    let pairing = localization_pairing(g)?;
    let roots: Vec<i64> = kahler_roots(g)?.into_iter().filter(|&a| a > 0).collect();
    let prods: Vec<QuantumProduct> = lambdas.par_iter().map(|c| quantum_mult(g, c, kappa)).collect::<Result<_>>()?;
    let mut cert = ConnectionCertificate {
        commuting: true,
        flat: true,
        z0_is_cup: true,
        unit: true,
        hbar_divisible: true,
        poles_on_roots: true,
        pole_present: false,
        self_adjoint: true,
        status: "pass".into(),
    };
    let mut any_quantum = false;
    for p in &prods {
        let c = check_one(p, &pairing, &roots)?;
        cert.z0_is_cup &= c.z0_is_cup;
        cert.unit &= c.unit;
        cert.hbar_divisible &= c.hbar_divisible;
        cert.poles_on_roots &= c.poles_on_roots;
        cert.pole_present |= c.pole_present;
        cert.self_adjoint &= c.self_adjoint;
        any_quantum |= !p.quantum_part().is_zero();
    }
    // Pairwise checks run on a common denominator so no gcd is needed.
    let forms: Vec<(Vec<Vec<LaurentPoly>>, LaurentPoly)> = prods.iter().map(|p| poly_form(&p.operator)).collect();
    let z = LaurentPoly::var(idx::Z);
    let zd = |x: &LaurentPoly| &z * &x.derivative(idx::Z);
    for i in 0..prods.len() {
        for j in i + 1..prods.len() {
            let (nl, dl) = &forms[i];
            let (nm, dm) = &forms[j];
            let comm = poly_commutator(nl, nm);
            cert.commuting &= comm.iter().flatten().all(|x| x.is_zero());
            // [∇_λ, ∇_μ] = −ε(λ) z∂_z M_μ + ε(μ) z∂_z M_λ + [M_λ, M_μ], times D_λ² D_μ² / ε.
            let (dl2, dm2, dlm) = (dl * dl, dm * dm, dl * dm);
            let eps = LaurentPoly::var(idx::EPS);
            let (cl, cm) = (eps.scale(&prods[i].lambda), eps.scale(&prods[j].lambda));
            let (zdl, zdm) = (zd(dl), zd(dm));
            let n = nl.len();
            for r in 0..n {
                for c in 0..n {
                    let gl = &(&zd(&nl[r][c]) * dl) - &(&nl[r][c] * &zdl);
                    let gm = &(&zd(&nm[r][c]) * dm) - &(&nm[r][c] * &zdm);
                    let curv = &(&(&(&cm * &gl) * &dm2) - &(&(&cl * &gm) * &dl2)) + &(&comm[r][c] * &dlm);
                    cert.flat &= curv.is_zero();
                }
            }
        }
    }
    let ok = cert.commuting
        && cert.flat
        && cert.z0_is_cup
        && cert.unit
        && cert.hbar_divisible
        && cert.poles_on_roots
        && (cert.pole_present || !any_quantum)
        && cert.self_adjoint;
    cert.status = if ok { "pass" } else { "fail" }.into();
    Ok(cert)
}
