use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{codim2_strata, enumerate_regions, walls, Arrangement};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lift {
    Up,
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub from: usize,
    pub to: usize,
    pub hyperplane: usize,
    pub lift: Lift,
}

/// `lhs = rhs` as words of generator indices, listed in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub stratum: usize,
    pub lift: Lift,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub objects: usize,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

/// Objects are regions, generators are oriented wall crossings with an over
/// or under lift, and each codimension-2 stratum gives one relation per lift:
/// the two ways around it from its lowest-index region agree.
pub fn salvetti_presentation(arr: &Arrangement) -> Result<Presentation> {
    let regions = enumerate_regions(arr)?;
    let ws = walls(arr, &regions)?;
    let mut generators = Vec::new();
    let mut index = HashMap::new();
    for w in &ws {
        let (a, b) = w.regions;
        for (from, to) in [(a, b), (b, a)] {
            for lift in [Lift::Up, Lift::Down] {
                index.insert((from, to, lift), generators.len());
                generators.push(Generator {
                    from,
                    to,
                    hyperplane: w.hyperplane,
                    lift,
                });
            }
        }
    }
    let strata = codim2_strata(arr, &regions)?;
    let mut relations = Vec::new();
    for (si, st) in strata.iter().enumerate() {
        let len = st.regions.len();
        let m = len / 2;
        for lift in [Lift::Up, Lift::Down] {
            let lhs = (0..m)
                .map(|k| index[&(st.regions[k], st.regions[k + 1], lift)])
                .collect();
            let rhs = (0..m)
                .map(|k| {
                    let from = st.regions[(len - k) % len];
                    let to = st.regions[len - 1 - k];
                    index[&(from, to, lift)]
                })
                .collect();
            relations.push(Relation {
                stratum: si,
                lift,
                lhs,
                rhs,
            });
        }
    }
    Ok(Presentation {
        objects: regions.len(),
        generators,
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrange::Hyperplane;

    fn central(normals: &[&[i64]]) -> Arrangement {
        Arrangement::central(
            normals[0].len(),
            normals.iter().map(|v| Hyperplane::central(v.to_vec()).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_hyperplane() {
        let p = salvetti_presentation(&central(&[&[1]])).unwrap();
        assert_eq!((p.objects, p.generators.len(), p.relations.len()), (2, 4, 0));
    }

    #[test]
    fn commutation_square() {
        let p = salvetti_presentation(&central(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(p.objects, 4);
        assert_eq!(p.generators.len(), 16);
        assert_eq!(p.relations.len(), 2);
        for r in &p.relations {
            assert_eq!((r.lhs.len(), r.rhs.len()), (2, 2));
            let hl: Vec<usize> = r.lhs.iter().map(|&g| p.generators[g].hyperplane).collect();
            let hr: Vec<usize> = r.rhs.iter().map(|&g| p.generators[g].hyperplane).collect();
            assert_eq!(hl, vec![hr[1], hr[0]]);
        }
    }

    #[test]
    fn hexagonal_braid() {
        let p = salvetti_presentation(&central(&[&[1, 0], &[0, 1], &[1, -1]])).unwrap();
        assert_eq!(p.objects, 6);
        assert_eq!(p.generators.len(), 24);
        for r in &p.relations {
            let hl: Vec<usize> = r.lhs.iter().map(|&g| p.generators[g].hyperplane).collect();
            let hr: Vec<usize> = r.rhs.iter().map(|&g| p.generators[g].hyperplane).collect();
            // Three distinct hyperplanes one way, the same in reverse the other way.
            assert_eq!(hl.len(), 3);
            assert!(hl[0] != hl[1] && hl[1] != hl[2] && hl[0] != hl[2]);
            assert_eq!(hl[0], hr[2]);
            assert_eq!(hl[1], hr[1]);
            assert_eq!(hl[2], hr[0]);
            // endpoints agree
            let end_l = p.generators[*r.lhs.last().unwrap()].to;
            let end_r = p.generators[*r.rhs.last().unwrap()].to;
            assert_eq!(end_l, end_r);
        }
    }
}
