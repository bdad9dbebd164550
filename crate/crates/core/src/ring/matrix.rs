//! Dense matrices over the rational-function field and exact linear solving.
//!
//! Elimination is fraction-free (Bareiss) over an integral domain: rows are
//! first cleared of denominators, so every intermediate entry is a minor of
//! the cleared matrix and every division is exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::gcd::gcd;
use super::poly::{LaurentPoly, Q};
use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};

type RF = RationalFunction;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RF>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = RF;
    fn index(&self, (i, j): (usize, usize)) -> &RF {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RF {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![RF::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::diagonal((0..n).map(|_| RF::one()).collect())
    }

    pub fn diagonal(d: Vec<RF>) -> Self {
        let n = d.len();
        let mut m = Matrix::zeros(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> RF) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<RF>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_polys(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(RF::from_poly).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[RF] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<RF> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &RF)> {
        let c = self.cols;
        self.data.iter().enumerate().map(move |(k, x)| ((k / c, k % c), x))
    }

    pub fn map(&self, f: impl Fn(&RF) -> RF + Sync + Send) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.par_iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&RF) -> Result<RF> + Sync + Send) -> Result<Matrix> {
        let data: Result<Vec<RF>> = self.data.par_iter().map(f).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: data?,
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &RF) -> Matrix {
        self.map(|x| x * c)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.entries().all(|((i, j), x)| {
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|((i, j), x)| i == j || x.is_zero())
    }

    /// First nonzero entry, for failure witnesses.
    pub fn first_nonzero(&self) -> Option<((usize, usize), &RF)> {
        self.entries().find(|(_, x)| !x.is_zero())
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let data: Vec<RF> = (0..n * p)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / p, k % p);
                let mut acc = RF::zero();
                for l in 0..m {
                    let a = &self[(i, l)];
                    let b = &rhs[(l, j)];
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect();
        Ok(Matrix {
            rows: n,
            cols: p,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[RF]) -> Result<Vec<RF>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = RF::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self[(i, j)].is_zero() {
                        acc = &acc + &(&self[(i, j)] * x);
                    }
                }
                acc
            })
            .collect())
    }

    fn zip(&self, rhs: &Matrix, f: impl Fn(&RF, &RF) -> RF) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, |a, b| a - b)
    }

    /// Kronecker product; basis index `i * rhs.rows + k`.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let (r2, c2) = (rhs.rows, rhs.cols);
        Matrix::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            let a = &self[(i / r2, j / c2)];
            if a.is_zero() {
                RF::zero()
            } else {
                a * &rhs[(i % r2, j % c2)]
            }
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn det(&self) -> Result<RF> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(RF::one());
        }
        let (rows, scales) = clear_rows(self, &[]);
        let mut a = rows;
        let (rank, _, sign) = bareiss(&mut a, n);
        if rank < n {
            return Ok(RF::zero());
        }
        let mut d = RF::from_poly(a[n - 1][n - 1].clone());
        if sign < 0 {
            d = -d;
        }
        for s in scales {
            d = d.checked_div(&RF::from_poly(s))?;
        }
        Ok(d)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        match solve_multi(self, &Matrix::identity(n))? {
            MultiSolution::Unique(x) => Ok(x),
            MultiSolution::Underdetermined { .. } => Err(Error::Singular),
        }
    }

    /// `self^{-1} * rhs` without forming the inverse.
    pub fn left_divide(&self, rhs: &Matrix) -> Result<Matrix> {
        match solve_multi(self, rhs)? {
            MultiSolution::Unique(x) => Ok(x),
            MultiSolution::Underdetermined { .. } => Err(Error::Singular),
        }
    }

    pub fn trace(&self) -> RF {
        let mut t = RF::zero();
        for i in 0..self.rows.min(self.cols) {
            t = &t + &self[(i, i)];
        }
        t
    }

    pub fn commutator(&self, rhs: &Matrix) -> Result<Matrix> {
        self.checked_mul(rhs)?.checked_sub(&rhs.checked_mul(self)?)
    }

    /// Entry strings in canonical form, row-major.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

macro_rules! mat_op {
    ($tr:ident, $f:ident, $checked:ident) => {
        impl $tr for &Matrix {
            type Output = Matrix;
            /// Panics on dimension mismatch.
            fn $f(self, rhs: &Matrix) -> Matrix {
                self.$checked(rhs).expect("matrix dimensions")
            }
        }
        impl $tr for Matrix {
            type Output = Matrix;
            fn $f(self, rhs: Matrix) -> Matrix {
                (&self).$checked(&rhs).expect("matrix dimensions")
            }
        }
    };
}
mat_op!(Add, add, checked_add);
mat_op!(Sub, sub, checked_sub);
mat_op!(Mul, mul, checked_mul);

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.map(|x| -x)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let rows: std::result::Result<Vec<Vec<RF>>, _> = rows
            .iter()
            .map(|r| r.iter().map(|s| super::text::parse_ratfunc(s)).collect())
            .collect();
        Matrix::from_rows(rows.map_err(de::Error::custom)?).map_err(de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Fraction-free elimination

/// Integral domain with exact division, as needed by Bareiss elimination.
pub trait Domain: Clone + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
}

impl Domain for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % o)));
        self / o
    }
}

impl Domain for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        LaurentPoly::div_exact(self, o).expect("Bareiss division is exact")
    }
}

/// In-place fraction-free row echelon form of the first `ncols` columns.
/// Returns (rank, pivot columns, sign of the row permutation).
pub fn bareiss<T: Domain>(a: &mut [Vec<T>], ncols: usize) -> (usize, Vec<usize>, i32) {
    let m = a.len();
    let width = a.first().map(|r| r.len()).unwrap_or(0);
    let mut prev = T::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut sign = 1;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        bottom.par_iter_mut().for_each(|row| {
            let f = row[c].clone();
            for j in (c + 1)..width {
                let v = pivot_row[c].mul(&row[j]).sub(&f.mul(&pivot_row[j]));
                row[j] = v.div_exact(&prev);
            }
            row[c] = T::zero();
        });
        // Skipped columns are zero below the pivot, so later quotients stay exact.
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (r, pivots, sign)
}

/// Multiply each row of `[a | b]` by a common denominator; returns the
/// polynomial rows and the multipliers.
fn clear_rows(a: &Matrix, b: &[&[RF]]) -> (Vec<Vec<LaurentPoly>>, Vec<LaurentPoly>) {
    (0..a.rows)
        .into_par_iter()
        .map(|i| {
            let mut entries: Vec<&RF> = a.row(i).iter().collect();
            for col in b {
                entries.push(&col[i]);
            }
            let mut l = LaurentPoly::one();
            for x in &entries {
                let d = x.den();
                // Nonzero constants are units over Q.
                if !d.is_constant() && l.div_exact(d).is_none() {
                    l = lcm_poly(&l, d);
                }
            }
            let row: Vec<LaurentPoly> = entries
                .iter()
                .map(|x| {
                    let q = l.div_exact(x.den()).expect("lcm is a multiple");
                    &q * x.num()
                })
                .collect();
            (row, l)
        })
        .unzip()
}

fn lcm_poly(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let g = gcd(a, b);
    (a * b).div_exact(&g).expect("gcd divides")
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Unique(Vec<RF>),
    Affine {
        particular: Vec<RF>,
        kernel: Vec<Vec<RF>>,
    },
}

impl Solution {
    pub fn dimension(&self) -> usize {
        match self {
            Solution::Unique(_) => 0,
            Solution::Affine { kernel, .. } => kernel.len(),
        }
    }

    pub fn particular(&self) -> &[RF] {
        match self {
            Solution::Unique(x) => x,
            Solution::Affine { particular, .. } => particular,
        }
    }
}

#[derive(Clone, Debug)]
enum MultiSolution {
    Unique(Matrix),
    Underdetermined {
        #[allow(dead_code)]
        dimension: usize,
    },
}

/// Row echelon form of `[A | B]` over the polynomial ring, then exact back
/// substitution over the field.
struct Echelon {
    rows: Vec<Vec<LaurentPoly>>,
    rank: usize,
    pivots: Vec<usize>,
    n: usize,
}

fn echelon(a: &Matrix, b: &[&[RF]]) -> Echelon {
    let (mut rows, _) = clear_rows(a, b);
    let (rank, pivots, _) = bareiss(&mut rows, a.cols);
    Echelon {
        rows,
        rank,
        pivots,
        n: a.cols,
    }
}

impl Echelon {
    fn consistent(&self, k: usize) -> bool {
        self.rows[self.rank..]
            .iter()
            .all(|r| r[self.n + k].is_zero())
    }

    /// Solve with free variables set by `free`.
    fn back_substitute(&self, rhs: Option<usize>, free: &[(usize, RF)]) -> Vec<RF> {
        let mut x = vec![RF::zero(); self.n];
        for (j, v) in free {
            x[*j] = v.clone();
        }
        for r in (0..self.rank).rev() {
            let c = self.pivots[r];
            let row = &self.rows[r];
            let mut acc = match rhs {
                Some(k) => RF::from_poly(row[self.n + k].clone()),
                None => RF::zero(),
            };
            for j in (c + 1)..self.n {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc = &acc - &(&RF::from_poly(row[j].clone()) * &x[j]);
                }
            }
            x[c] = acc
                .checked_div(&RF::from_poly(row[c].clone()))
                .expect("pivot is nonzero");
        }
        x
    }

    fn free_columns(&self) -> Vec<usize> {
        (0..self.n).filter(|c| !self.pivots.contains(c)).collect()
    }
}

/// Solve `A x = b` exactly; reports the full affine solution space.
pub fn solve_linear(a: &Matrix, b: &[RF]) -> Result<Solution> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "{} equations, right-hand side of length {}",
            a.rows,
            b.len()
        )));
    }
    let e = echelon(a, &[b]);
    if !e.consistent(0) {
        return Err(Error::Inconsistent);
    }
    let free = e.free_columns();
    let particular = e.back_substitute(Some(0), &[]);
    if free.is_empty() {
        return Ok(Solution::Unique(particular));
    }
    let kernel = free
        .iter()
        .map(|&f| e.back_substitute(None, &[(f, RF::one())]))
        .collect();
    Ok(Solution::Affine { particular, kernel })
}

fn solve_multi(a: &Matrix, b: &Matrix) -> Result<MultiSolution> {
    if b.rows != a.rows {
        return Err(Error::DimensionMismatch("right-hand side rows".into()));
    }
    let cols: Vec<Vec<RF>> = (0..b.cols).map(|j| b.column(j)).collect();
    let refs: Vec<&[RF]> = cols.iter().map(|c| c.as_slice()).collect();
    let e = echelon(a, &refs);
    if e.rank < a.cols {
        return Ok(MultiSolution::Underdetermined {
            dimension: a.cols - e.rank,
        });
    }
    for k in 0..b.cols {
        if !e.consistent(k) {
            return Err(Error::Inconsistent);
        }
    }
    let sols: Vec<Vec<RF>> = (0..b.cols)
        .into_par_iter()
        .map(|k| e.back_substitute(Some(k), &[]))
        .collect();
    Ok(MultiSolution::Unique(Matrix::from_fn(a.cols, b.cols, |i, j| {
        sols[j][i].clone()
    })))
}

// ---------------------------------------------------------------------------
// Rational linear systems with plain Q entries (stable-envelope ansatz).

/// Solve a sparse-ish system over Q given as dense rows. Same contract as
/// [`solve_linear`].
pub fn solve_rational(a: &[Vec<Q>], b: &[Q], ncols: usize) -> Result<QSolution> {
    let (mut ps, kernel) = solve_rational_many(a, &[b.to_vec()], ncols)?;
    Ok(QSolution {
        particular: ps.pop().unwrap(),
        kernel,
    })
}

/// One elimination, several right-hand sides (`bs[k]` is the k-th column).
/// Returns one particular solution per column and a shared kernel basis.
pub fn solve_rational_many(a: &[Vec<Q>], bs: &[Vec<Q>], ncols: usize) -> Result<(Vec<Vec<Q>>, Vec<Vec<Q>>)> {
    let nb = bs.len();
    let mut rows: Vec<Vec<BigInt>> = a
        .par_iter()
        .enumerate()
        .map(|(i, r)| {
            let full: Vec<&Q> = r.iter().chain(bs.iter().map(|b| &b[i])).collect();
            let mut l = <BigInt as One>::one();
            for x in &full {
                l = l.lcm(x.denom());
            }
            full.iter()
                .map(|x| (*x * Q::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let (rank, pivots, _) = bareiss(&mut rows, ncols);
    if rows[rank..].iter().any(|r| r[ncols..].iter().any(|x| !Zero::is_zero(x))) {
        return Err(Error::Inconsistent);
    }
    let back = |rhs: Option<usize>, free: Option<usize>| -> Vec<Q> {
        let mut x = vec![Q::zero(); ncols];
        if let Some(f) = free {
            x[f] = Q::one();
        }
        for r in (0..rank).rev() {
            let c = pivots[r];
            let row = &rows[r];
            let mut acc = match rhs {
                Some(k) => Q::from_integer(row[ncols + k].clone()),
                None => Q::zero(),
            };
            for j in (c + 1)..ncols {
                if !Zero::is_zero(&row[j]) && !x[j].is_zero() {
                    acc -= Q::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[c] = acc / Q::from_integer(row[c].clone());
        }
        x
    };
    let particular = (0..nb).into_par_iter().map(|k| back(Some(k), None)).collect();
    let kernel: Vec<Vec<Q>> = (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| back(None, Some(f)))
        .collect();
    Ok((particular, kernel))
}

#[derive(Clone, Debug, PartialEq)]
pub struct QSolution {
    pub particular: Vec<Q>,
    pub kernel: Vec<Vec<Q>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::text::parse_ratfunc;

    fn rf(s: &str) -> RF {
        parse_ratfunc(s).unwrap()
    }

    fn m(rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| rf(s)).collect()).collect()).unwrap()
    }

    #[test]
    fn identity_system() {
        let a = Matrix::identity(2);
        let s = solve_linear(&a, &[rf("hbar"), rf("a1")]).unwrap();
        assert_eq!(s, Solution::Unique(vec![rf("hbar"), rf("a1")]));
    }

    #[test]
    fn underdetermined_system() {
        let a = m(&[&["a1", "0"], &["0", "0"]]);
        let s = solve_linear(&a, &[rf("1"), rf("0")]).unwrap();
        assert_eq!(s.dimension(), 1);
        assert_eq!(s.particular(), &[rf("1/a1"), rf("0")]);
        if let Solution::Affine { kernel, .. } = &s {
            assert_eq!(kernel[0], vec![rf("0"), rf("1")]);
        }
    }

    #[test]
    fn inconsistent_system() {
        let a = m(&[&["1", "1"], &["1", "1"]]);
        assert_eq!(solve_linear(&a, &[rf("1"), rf("0")]), Err(Error::Inconsistent));
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&["hbar - a1", "0"], &["hbar", "-a1"]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!((&inv * &a).is_identity());
        assert_eq!(a.det().unwrap(), rf("-(hbar - a1)*a1"));
        let s = m(&[&["1/(1-z)", "z"], &["hbar", "hbar*z - hbar*z^2"]]);
        assert_eq!(s.det().unwrap(), RF::zero());
        let s = m(&[&["1/(1-z)", "z"], &["hbar", "hbar"]]);
        assert_eq!(s.det().unwrap(), rf("hbar/(1-z) - hbar*z"));
        let sing = m(&[&["a1", "hbar"], &["a1*z", "hbar*z"]]);
        assert_eq!(sing.det().unwrap(), RF::zero());
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn rational_solver_kernel() {
        let a = vec![vec![Q::one(), Q::one(), Q::zero()]];
        let s = solve_rational(&a, &[Q::one()], 3).unwrap();
        assert_eq!(s.kernel.len(), 2);
        assert_eq!(s.particular, vec![Q::one(), Q::zero(), Q::zero()]);
    }

    #[test]
    fn kron_indexing() {
        let x = m(&[&["1", "2"], &["3", "4"]]);
        let y = Matrix::identity(2);
        let k = x.kron(&y);
        assert_eq!(k[(1, 3)], rf("2"));
        assert_eq!(k[(2, 0)], rf("3"));
        assert_eq!(k[(2, 1)], rf("0"));
    }
}
