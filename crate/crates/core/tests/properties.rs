mod common;

use std::sync::OnceLock;

use common::*;
use fks_core::exactla::{
    cokernel_invariants, smith_normal_form, solve_mod_lattice, IntMatrix, RatVector,
};
use fks_core::extension::{abelianization, validate};
use fks_core::format::{emit, parse_document, InputDocument};
use fks_core::matgroup::{average_form, closure, DEFAULT_CLOSURE_CAP};
use fks_core::{ExtensionData, GroupElement};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn elem(g: &Elem) -> GroupElement {
    GroupElement {
        v: g.0.iter().map(|&x| x.into()).collect(),
        t: g.1.to_vec(),
    }
}

fn small_elem() -> impl Strategy<Value = Elem> {
    (
        prop::array::uniform2(-3i64..=3),
        prop::array::uniform2(-3i64..=3),
    )
}

fn sample() -> impl Strategy<Value = Sample> {
    static CORPUS: OnceLock<Vec<Sample>> = OnceLock::new();
    (0usize..400).prop_map(|i| CORPUS.get_or_init(|| corpus(7, 400))[i].clone())
}

fn to_imat(m: &IntMatrix) -> IMat {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| i128::try_from(x).unwrap())
                .collect()
        })
        .collect()
}

fn int_matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    IntMatrix::new(
        rows,
        cols,
        entries.iter().map(|&x| BigInt::from(x)).collect(),
    )
    .unwrap()
}

fn random_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(-9i64..=9, r * c).prop_map(move |e| int_matrix(r, c, &e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_law_matches_closed_form(s in sample(), g in small_elem(), h in small_elem()) {
        let data = s.data();
        let gamma = data.group().unwrap();
        let oracle = s.group();
        prop_assert_eq!(gamma.multiply(&elem(&g), &elem(&h)), elem(&oracle.mul(&g, &h)));
        prop_assert_eq!(gamma.inverse(&elem(&g)), elem(&oracle.inv(&g)));
    }

    #[test]
    fn group_axioms(s in sample(), a in small_elem(), b in small_elem(), c in small_elem()) {
        let data = s.data();
        let gamma = data.group().unwrap();
        let (a, b, c) = (elem(&a), elem(&b), elem(&c));
        prop_assert_eq!(
            gamma.multiply(&gamma.multiply(&a, &b), &c),
            gamma.multiply(&a, &gamma.multiply(&b, &c))
        );
        prop_assert!(gamma.multiply(&a, &gamma.inverse(&a)).is_identity());
        prop_assert!(gamma.multiply(&gamma.inverse(&a), &a).is_identity());
    }

    #[test]
    fn words_agree_with_products(s in sample(), letters in prop::collection::vec((0usize..4, -3i64..=3), 0..6)) {
        let data = s.data();
        let gamma = data.group().unwrap();
        let names = ["a1", "a2", "x1", "x2"];
        let word: Vec<String> = letters.iter().map(|(g, e)| format!("{}^{}", names[*g], e)).collect();
        let expected = letters.iter().fold(gamma.identity(), |acc, &(g, e)| {
            let gen = match g {
                0 | 1 => gamma.fiber_generator(g),
                _ => gamma.base_generator(g - 2),
            };
            gamma.multiply(&acc, &gamma.power(&gen, e))
        });
        prop_assert_eq!(gamma.word_normal_form(&word.join(" ")).unwrap(), expected);
    }

    #[test]
    fn snf_certificate(a in random_matrix()) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d.clone());
        prop_assert!(snf.u.det().magnitude() == &1u32.into());
        prop_assert!(snf.v.det().magnitude() == &1u32.into());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            let divides = if num_traits::Zero::is_zero(&w[0]) {
                num_traits::Zero::is_zero(&w[1])
            } else {
                num_integer::Integer::is_multiple_of(&w[1], &w[0])
            };
            prop_assert!(divides, "{:?}", diag);
        }
        let oracle = invariant_factors(&to_imat(&a));
        let nonzero: Vec<i128> = diag.iter().filter(|x| !num_traits::Zero::is_zero(*x))
            .map(|x| i128::try_from(x).unwrap()).collect();
        prop_assert_eq!(nonzero, oracle);
    }

    #[test]
    fn cokernel_matches_coset_count(a in random_matrix()) {
        let coker = cokernel_invariants(&a);
        if coker.free_rank == 0 {
            let order = coker.torsion_order();
            if let Some(count) = coset_count(&to_imat(&a), 1000) {
                prop_assert_eq!(BigInt::from(count), order);
            }
        }
    }

    #[test]
    fn fixed_points_match_grid(l in prop::sample::select(GENERATORS.to_vec()), k in 0usize..4,
                              b in prop::array::uniform2(-3i64..=3), den in 1i64..=4) {
        let l = pow2(&l, k as i64);
        let det = (l[0][0] - 1) * (l[1][1] - 1) - l[0][1] * l[1][0];
        prop_assume!(det != 0);
        let map = int_matrix(2, 2, &[l[0][0] - 1, l[0][1], l[1][0], l[1][1] - 1]);
        let rhs = RatVector::from_fracs(&[(-b[0], den), (-b[1], den)]);
        let sols = solve_mod_lattice(&map, &rhs, &IntMatrix::identity(2)).unwrap();
        let pts = sols.points(1000).unwrap();
        prop_assert_eq!(pts.len(), grid_fixed_points(&l, b, den, det.abs() * den));
        for p in &pts {
            prop_assert!(sols.contains(p));
        }
    }

    #[test]
    fn scaling_tails_preserves_structure(s in sample(), k in -3i64..=3) {
        let data = s.data();
        let scaled = data.with_scaled_tails(k);
        prop_assert_eq!(
            validate(&data, DEFAULT_CLOSURE_CAP).structurally_valid(),
            validate(&scaled, DEFAULT_CLOSURE_CAP).structurally_valid()
        );
    }

    #[test]
    fn averaged_form_is_invariant(s in sample(), diag in prop::array::uniform4(1i64..=5)) {
        prop_assume!(order2(&s.a1).is_some() && order2(&s.a2).is_some());
        let data = s.data();
        let g = closure(data.actions(), DEFAULT_CLOSURE_CAP).unwrap().block_extend(2);
        let seed = fks_core::field::Mat::from_fn(4, 4, |i, j| {
            BigRational::from(BigInt::from(if i == j { diag[i] } else { 0 }))
        });
        let avg = average_form(&g, &seed).unwrap();
        for a in g.generators() {
            let a = a.to_field::<BigRational>();
            prop_assert_eq!(a.transpose().mul(&avg).mul(&a), avg.clone());
        }
    }

    #[test]
    fn abelianization_matches_invariant_factors(s in sample()) {
        let data = s.data();
        let ab = abelianization(&data);
        let mut cols: Vec<Vec<i128>> = Vec::new();
        for a in [s.a1, s.a2] {
            for j in 0..2 {
                cols.push(vec![(a[0][j] - I2[0][j]) as i128, (a[1][j] - I2[1][j]) as i128, 0, 0]);
            }
        }
        cols.push(vec![s.c[0] as i128, s.c[1] as i128, 0, 0]);
        let m: IMat = (0..4).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let factors: Vec<i128> = invariant_factors(&m);
        prop_assert_eq!(ab.b1, 4 - factors.len());
        let torsion: Vec<BigInt> = factors.iter().filter(|&&f| f != 1).map(|&f| f.into()).collect();
        prop_assert_eq!(ab.torsion, torsion);
    }

    #[test]
    fn documents_round_trip(s in sample(), name in "[A-Za-z][A-Za-z0-9 _-]{0,12}") {
        let doc = InputDocument::named(name.trim(), s.data());
        let text = emit(&doc);
        let parsed = parse_document(&text).unwrap();
        prop_assert_eq!(&parsed.data, &doc.data);
        prop_assert_eq!(emit(&parsed), text);
    }

    #[test]
    fn parser_never_panics(text in "\\PC{0,200}") {
        let _ = parse_document(&text);
        let _ = fks_core::format::parse_seed_metric(&text);
        let _ = fks_core::extension::parse_word(&text);
    }

    #[test]
    fn parser_survives_mutations(s in sample(), pos in 0usize..200, byte in 0u8..128) {
        let mut text = emit(&InputDocument::new(s.data())).into_bytes();
        let p = pos % text.len();
        text[p] = byte;
        if let Ok(t) = String::from_utf8(text) {
            if let Ok(doc) = parse_document(&t) {
                prop_assert_eq!(emit(&parse_document(&emit(&doc)).unwrap()), emit(&doc));
            }
        }
    }
}

#[test]
fn random_two_by_two_block_extensions() {
    // m = 2, n = 1 with block-diagonal actions and tails in both blocks.
    let blocks = [R4, NEG, R3];
    for (i, a) in blocks.iter().enumerate() {
        let big = |m: &M2| -> Vec<Vec<i64>> {
            vec![
                vec![m[0][0], m[0][1], 0, 0],
                vec![m[1][0], m[1][1], 0, 0],
                vec![0, 0, m[0][0], m[0][1]],
                vec![0, 0, m[1][0], m[1][1]],
            ]
        };
        let (ra, ri) = (big(a), big(&I2));
        let ra: Vec<&[i64]> = ra.iter().map(Vec::as_slice).collect();
        let ri: Vec<&[i64]> = ri.iter().map(Vec::as_slice).collect();
        let data =
            ExtensionData::from_i64(2, 1, &[&ra, &ri], &[((0, 1), &[1, 0, i as i64, 1])]).unwrap();
        let outcome = fks_core::build(&data, &Default::default()).unwrap();
        let model = outcome
            .model()
            .unwrap_or_else(|| panic!("{:?}", outcome.diagnostic()));
        assert!(model.checks.iter().all(|c| c.passed));
        assert_eq!(model.b1() % 2, 0);
    }
}
