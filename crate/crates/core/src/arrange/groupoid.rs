use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{codim2_strata, enumerate_regions, Arrangement, Hyperplane};
use crate::error::{Error, Result};
use crate::ring::{idx, LaurentPoly, Matrix, RationalFunction};

/// Wall matrices of a groupoid representation. The returned matrix is a
/// function of the one scalar slot `u` (ring variable [`idx::U`]); the
/// checker evaluates it at the wall equation `⟨n, a⟩ − c`.
pub trait WallAssignment: Sync {
    /// Matrix for crossing `h` (index `index` in the expanded list) starting
    /// on the side with sign `from_sign`.
    fn matrix(&self, index: usize, h: &Hyperplane, from_sign: i8) -> Result<Matrix>;
}

impl<F> WallAssignment for F
where
    F: Fn(usize, &Hyperplane, i8) -> Result<Matrix> + Sync,
{
    fn matrix(&self, index: usize, h: &Hyperplane, from_sign: i8) -> Result<Matrix> {
        self(index, h, from_sign)
    }
}

/// `diag(u + h + 1, …, u + h + size)` crossing from the positive side, its
/// inverse from the negative side. Any two such matrices commute.
pub struct CommutingDiagonal {
    pub size: usize,
}

impl WallAssignment for CommutingDiagonal {
    fn matrix(&self, index: usize, _h: &Hyperplane, from_sign: i8) -> Result<Matrix> {
        let u = RationalFunction::var(idx::U);
        let d: Vec<RationalFunction> = (0..self.size)
            .map(|k| {
                let x = &u + &RationalFunction::from_int((index + k + 1) as i64);
                if from_sign > 0 {
                    Ok(x)
                } else {
                    x.inv()
                }
            })
            .collect::<Result<_>>()?;
        Ok(Matrix::diagonal(d))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumVerdict {
    pub stratum: usize,
    pub hyperplanes: Vec<usize>,
    pub regions: Vec<usize>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidCertificate {
    pub claim: String,
    pub status: String,
    pub strata: Vec<StratumVerdict>,
    /// Which side of each cycle is taken as the base object.
    pub base: String,
}

impl GroupoidCertificate {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// Wall equation `⟨n, a⟩ − c` in the ring variables `a₁ … a_dim`.
fn wall_equation(h: &Hyperplane) -> RationalFunction {
    let mut p = LaurentPoly::constant(-h.offset.clone());
    for (i, &c) in h.normal.iter().enumerate() {
        if c != 0 {
            p = &p + &LaurentPoly::var(idx::a(i + 1)).scale(&crate::ring::q(c));
        }
    }
    RationalFunction::from_poly(p)
}

fn evaluated(assign: &dyn WallAssignment, hs: &[Hyperplane], h: usize, from_sign: i8) -> Result<Matrix> {
    let m = assign.matrix(h, &hs[h], from_sign)?;
    let t = wall_equation(&hs[h]);
    m.try_map(|x| x.substitute(idx::U, &t))
}

/// For every codimension-2 stratum, compare the two ways around it from the
/// first incident region to the opposite one.
pub fn groupoid_check(arr: &Arrangement, assign: &dyn WallAssignment) -> Result<GroupoidCertificate> {
    let hs = arr.expanded();
    let regions = enumerate_regions(arr)?;
    let strata = codim2_strata(arr, &regions)?;
    let verdicts: Vec<StratumVerdict> = strata
        .par_iter()
        .enumerate()
        .map(|(si, st)| {
            let len = st.regions.len();
            let m = len / 2;
            let step = |from: usize, wall: usize| -> Result<Matrix> {
                let sign = regions[st.regions[from]].signs[wall];
                evaluated(assign, &hs, wall, sign)
            };
            // One way: R0 → R1 → … → Rm.
            let mut a: Option<Matrix> = None;
            for k in 0..m {
                let b = step(k, st.walls[k])?;
                a = Some(match a {
                    None => b,
                    Some(acc) => b.checked_mul(&acc)?,
                });
            }
            // Other way: R0 → R_{len-1} → … → Rm.
            let mut c: Option<Matrix> = None;
            for k in 0..m {
                let from = (len - k) % len;
                let b = step(from, st.walls[len - 1 - k])?;
                c = Some(match c {
                    None => b,
                    Some(acc) => b.checked_mul(&acc)?,
                });
            }
            let (a, c) = (a.unwrap(), c.unwrap());
            let r = a.checked_sub(&c).map_err(|_| Error::DimensionMismatch("cycle products differ in size".into()))?;
            let residual = r.first_nonzero().map(|((row, col), x)| Witness {
                row,
                col,
                residual: x.to_string(),
            });
            Ok(StratumVerdict {
                stratum: si,
                hyperplanes: st.hyperplanes.clone(),
                regions: st.regions.clone(),
                status: if residual.is_none() { "pass" } else { "fail" }.to_string(),
                residual,
            })
        })
        .collect::<Result<_>>()?;
    let ok = verdicts.iter().all(|v| v.status == "pass");
    Ok(GroupoidCertificate {
        claim: "groupoid-cycle".into(),
        status: if ok { "pass" } else { "fail" }.into(),
        strata: verdicts,
        base: "lowest-index incident region".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_ratfunc;

    fn rf(s: &str) -> RationalFunction {
        parse_ratfunc(s).unwrap()
    }

    fn line() -> Arrangement {
        Arrangement::central(1, vec![Hyperplane::central(vec![1]).unwrap()]).unwrap()
    }

    fn cross() -> Arrangement {
        Arrangement::central(
            2,
            vec![
                Hyperplane::central(vec![1, 0]).unwrap(),
                Hyperplane::central(vec![0, 1]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_hyperplane_is_vacuous() {
        let c = groupoid_check(&line(), &CommutingDiagonal { size: 2 }).unwrap();
        assert!(c.passed());
        assert!(c.strata.is_empty());
    }

    #[test]
    fn commuting_diagonals_pass() {
        let c = groupoid_check(&cross(), &CommutingDiagonal { size: 2 }).unwrap();
        assert!(c.passed());
        assert_eq!(c.strata.len(), 1);
    }

    #[test]
    fn non_commuting_walls_fail_with_witness() {
        let f = |i: usize, _: &Hyperplane, _s: i8| -> Result<Matrix> {
            let m = if i == 0 {
                [["1", "u"], ["0", "1"]]
            } else {
                [["1", "0"], ["u", "1"]]
            };
            Matrix::from_rows(m.iter().map(|r| r.iter().map(|s| rf(s)).collect()).collect())
        };
        let c = groupoid_check(&cross(), &f).unwrap();
        assert!(!c.passed());
        assert!(c.strata[0].residual.is_some());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let f = |i: usize, _: &Hyperplane, _s: i8| -> Result<Matrix> { Ok(Matrix::identity(1 + i)) };
        assert!(matches!(groupoid_check(&cross(), &f), Err(Error::DimensionMismatch(_))));
    }
}
