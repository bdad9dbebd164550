use proptest::prelude::*;

use stablab::arrange::{crossing_path_from, enumerate_regions, Arrangement, Hyperplane};
use stablab::cli::parse_config;
use stablab::geom::Geometry;
use stablab::heis::dynamical_b;
use stablab::ring::{idx, parse_poly, q, qr, LaurentPoly, RationalFunction as RF, Q};
use stablab::rmat::{spectral, two_site_r};
use stablab::stab::{stab_solve, Chamber, Mode, Polarization};

/// Small Laurent polynomials in ħ, a1, a2, a3.
fn poly() -> impl Strategy<Value = LaurentPoly> {
    let var = prop::sample::select(vec![idx::HBAR, idx::a(1), idx::a(2), idx::a(3)]);
    let term = (-5i64..=5, prop::collection::vec((var, -2i32..=3), 0..3));
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        terms.into_iter().fold(LaurentPoly::zero(), |acc, (c, vs)| {
            let m = vs
                .into_iter()
                .fold(LaurentPoly::constant(q(c)), |m, (v, e)| &m * &LaurentPoly::var_pow(v, e));
            &acc + &m
        })
    })
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| qr(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_text_round_trip(p in poly()) {
        let text = p.to_string();
        let back = parse_poly(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn ring_distributes(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn fractions_cancel(a in poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let f = RF::from_poly(a.clone()).checked_div(&RF::from_poly(b.clone())).unwrap();
        let g = RF::from_poly(&a * &c).checked_div(&RF::from_poly(&b * &c)).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn reversed_segment_reverses_crossings(
        normals in prop::collection::vec((-3i64..=3, -3i64..=3), 1..5),
        start in prop::collection::vec(rational(), 2),
        shift in prop::collection::vec(rational(), 2),
    ) {
        let hs: Vec<Hyperplane> = normals
            .into_iter()
            .filter(|&(x, y)| (x, y) != (0, 0))
            .map(|(x, y)| Hyperplane::central(vec![x, y]).unwrap())
            .collect();
        prop_assume!(!hs.is_empty());
        let arr = Arrangement::central(2, hs);
        prop_assume!(arr.is_ok());
        let arr = arr.unwrap();
        let end: Vec<Q> = start.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let back: Vec<Q> = shift.iter().map(|x| -x).collect();
        let fwd = crossing_path_from(&arr, &start, &shift).unwrap();
        let mut rev = crossing_path_from(&arr, &end, &back).unwrap();
        rev.reverse();
        let key = |v: &[stablab::arrange::WallCrossing]| v.iter().map(|w| (w.hyperplane, w.offset.clone())).collect::<Vec<_>>();
        prop_assert_eq!(key(&fwd), key(&rev));
    }

    #[test]
    fn central_lines_cut_the_plane_into_twice_as_many_regions(
        normals in prop::collection::vec((-4i64..=4, -4i64..=4), 1..6),
    ) {
        let hs: Vec<Hyperplane> = normals
            .into_iter()
            .filter(|&(x, y)| (x, y) != (0, 0))
            .map(|(x, y)| Hyperplane::central(vec![x, y]).unwrap())
            .collect();
        prop_assume!(!hs.is_empty());
        let arr = Arrangement::central(2, hs.clone());
        prop_assume!(arr.is_ok());
        let arr = arr.unwrap();
        let mut lines = arr.hyperplanes.iter().map(|h| h.normal.clone()).collect::<Vec<_>>();
        lines.sort();
        lines.dedup();
        prop_assert_eq!(enumerate_regions(&arr).unwrap().len(), 2 * lines.len());
    }

    #[test]
    fn yang_r_is_unitary(u in rational()) {
        prop_assume!(u != q(1) && u != q(-1) && u != q(0));
        let r = two_site_r(Polarization::Base).unwrap();
        let uh = RF::constant(u.clone()) * RF::var(idx::HBAR);
        let prod = spectral(&r, &uh).unwrap().checked_mul(&spectral(&r, &-&uh).unwrap()).unwrap();
        prop_assert!(prod.is_identity());
    }

    #[test]
    fn job_parser_never_panics(text in ".{0,200}") {
        let _ = parse_config(&text);
    }

    #[test]
    fn job_parser_survives_near_miss_lines(
        lines in prop::collection::vec(
            prop_oneof![
                Just("command = stab".to_string()),
                Just("family = tgr".to_string()),
                Just("{\"command\": \"roots\"".to_string()),
                "[a-z-]{1,8} ?= ?[0-9a-z,/ -]{0,8}",
                "#.{0,10}",
            ],
            0..6,
        )
    ) {
        let _ = parse_config(&lines.join("\n"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn k_envelope_constant_between_integers(n in -3i64..=2, x in 1i64..=10, y in 1i64..=10) {
        let (s, t) = (q(n) + qr(x, 11), q(n) + qr(y, 11));
        let g = Geometry::Tgr { k: 1, n: 2 };
        let c = Chamber::standard(2);
        let a = stab_solve(&g, &c, Mode::K, Some(&s), Polarization::Base).unwrap();
        let b = stab_solve(&g, &c, Mode::K, Some(&t), Polarization::Base).unwrap();
        prop_assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn dynamical_b_matches_closed_form(zn in -9i64..=9, zd in 2i64..=9) {
        let z = qr(zn, zd);
        prop_assume!(z != q(1));
        let b = dynamical_b(3, &RF::constant(z.clone())).unwrap();
        let h = RF::var(idx::HBAR);
        let hinv = RF::one().checked_div(&h).unwrap();
        let w = RF::constant(&z / &(q(1) - &z));
        let base = &RF::one() + &(&(&(&h - &hinv) * &w) * &hinv);
        for m in 0..=3 {
            prop_assert_eq!(b.block(m).unwrap(), base.pow(m as i32).unwrap());
        }
    }
}
