use std::collections::BTreeSet;

use serde::Serialize;

use super::{stab_solve, Chamber, Mode, Polarization, StabMatrix};
use crate::error::{Error, Result};
use crate::geom::Geometry;
use crate::ring::{qserde, Q};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpReport {
    #[serde(with = "qserde::vec")]
    pub candidates: Vec<Q>,
    #[serde(with = "qserde::vec")]
    pub jumps: Vec<Q>,
    /// Both sampled slopes in every alcove gave the same matrix.
    pub locally_constant: bool,
    /// Samples `(s, s')` inside an alcove whose matrices differ.
    #[serde(with = "qserde::pairs")]
    pub violations: Vec<(Q, Q)>,
}

/// Candidate walls `a/b` with `b ≤ max_den` strictly inside `(lo, hi)`.
pub fn candidate_walls(lo: &Q, hi: &Q, max_den: u32) -> Vec<Q> {
    let mut out = BTreeSet::new();
    for b in 1..=max_den as i64 {
        let bq = Q::from_integer(b.into());
        let first = (lo * &bq).floor().to_integer();
        let last = (hi * &bq).ceil().to_integer();
        let mut a = first;
        while a <= last {
            let x = Q::new(a.clone(), b.into());
            if &x > lo && &x < hi {
                out.insert(x);
            }
            a += 1;
        }
    }
    out.into_iter().collect()
}

/// Sample the K-theoretic stable envelope on every alcove of the candidate
/// walls and report the walls where it changes.
pub fn jump_scan(
    g: &Geometry,
    c: &Chamber,
    pol: Polarization,
    interval: (Q, Q),
    max_den: u32,
) -> Result<JumpReport> {
    let (lo, hi) = interval;
    if lo >= hi {
        return Err(Error::Usage("empty slope interval".into()));
    }
    if max_den == 0 || max_den > 64 {
        return Err(Error::Usage("denominator bound must be in 1..=64".into()));
    }
    let walls = candidate_walls(&lo, &hi, max_den);
    if walls.len() > 4096 {
        return Err(Error::Usage("too many candidate walls".into()));
    }
    let mut bounds = vec![lo.clone()];
    bounds.extend(walls.iter().cloned());
    bounds.push(hi.clone());
    let three = Q::from_integer(3.into());
    let samples: Vec<(Q, Q)> = bounds
        .windows(2)
        .map(|w| {
            let step = (&w[1] - &w[0]) / &three;
            (&w[0] + &step, &w[0] + &step + &step)
        })
        .collect();
    let solve = |s: &Q| -> Result<StabMatrix> { stab_solve(g, c, Mode::K, Some(s), pol) };
    let mut mats = Vec::with_capacity(samples.len());
    let mut violations = Vec::new();
    for (s1, s2) in &samples {
        let m1 = solve(s1)?;
        let m2 = solve(s2)?;
        if m1.entries != m2.entries {
            violations.push((s1.clone(), s2.clone()));
        }
        mats.push(m1);
    }
    let jumps = walls
        .iter()
        .enumerate()
        .filter(|(k, _)| mats[*k].entries != mats[k + 1].entries)
        .map(|(_, w)| w.clone())
        .collect();
    Ok(JumpReport {
        candidates: walls,
        jumps,
        locally_constant: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qr};

    #[test]
    fn candidates() {
        let w = candidate_walls(&qr(-3, 2), &qr(3, 2), 2);
        assert_eq!(w, vec![q(-1), qr(-1, 2), q(0), qr(1, 2), q(1)]);
        assert!(candidate_walls(&qr(1, 5), &qr(1, 4), 3).is_empty());
    }

    #[test]
    fn t_star_p1_jumps_at_integers() {
        let g = Geometry::Tgr { k: 1, n: 2 };
        let r = jump_scan(&g, &Chamber::standard(2), Polarization::Base, (qr(-3, 2), qr(3, 2)), 2).unwrap();
        assert_eq!(r.jumps, vec![q(-1), q(0), q(1)]);
        assert!(r.locally_constant);
    }

    #[test]
    fn t_star_p2_jumps_at_integers() {
        let g = Geometry::Tgr { k: 1, n: 3 };
        let r = jump_scan(&g, &Chamber::standard(3), Polarization::Base, (qr(-3, 2), qr(3, 2)), 3).unwrap();
        assert!(r.locally_constant);
        assert!(r.jumps.iter().all(|s| s.denom() <= &2.into()));
        assert!(!r.jumps.is_empty());
    }

    #[test]
    fn inside_one_alcove() {
        let g = Geometry::Tgr { k: 1, n: 2 };
        let r = jump_scan(&g, &Chamber::standard(2), Polarization::Base, (qr(1, 5), qr(4, 5)), 1).unwrap();
        assert!(r.jumps.is_empty());
        assert!(r.locally_constant);
    }
}
