//! Randomized law checking for the operator ring, the level-shift maps, and
//! the text/JSON codecs, with the exact matrix representations as an
//! independent referee for normal ordering.

use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;

use ladderpt::oracle::{
    rational_expr_matrix, rational_word_matrix, BasisSpec,
};
use ladderpt::param::{pid, HBAR, KAPPA, OMEGA0};
use ladderpt::parse::parse_expr;
use ladderpt::render::{expr_from_json, expr_to_json_string, expr_to_text};
use ladderpt::scalar::{int, rat};
use ladderpt::{normal_order, pi_project, Algebra, GapSpec, Generator, Monomial, OperatorExpr, Scalar};

fn arb_algebra() -> impl Strategy<Value = Algebra> {
    prop_oneof![Just(Algebra::Hw), Just(Algebra::Su2)]
}

fn arb_monomial(algebra: Algebra) -> BoxedStrategy<Monomial> {
    match algebra {
        Algebra::Hw => (0u32..=3, 0u32..=3)
            .prop_map(|(c, a)| Monomial::hw(c, a))
            .boxed(),
        Algebra::Su2 => (0u32..=2, 0u32..=2, 0u32..=2)
            .prop_map(|(p, z, m)| Monomial::su2(p, z, m))
            .boxed(),
    }
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    let numerator = prop_oneof![1i64..=3, -3i64..=-1];
    (numerator, 1i64..=3, 0u8..4, -1i64..=2).prop_map(|(n, d, flavor, power)| {
        let base = Scalar::from_ratio(n, d);
        match flavor {
            0 => &base * &Scalar::i(),
            1 => &base * &Scalar::param_pow(HBAR, int(power)),
            2 => &base * &Scalar::sqrt2_pow(power),
            _ => base,
        }
    })
}

fn arb_expr(algebra: Algebra) -> impl Strategy<Value = OperatorExpr> {
    prop::collection::vec((arb_monomial(algebra), arb_scalar()), 1..=3).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(OperatorExpr::zero(algebra), |acc, (m, s)| {
                acc.checked_add(&OperatorExpr::term(m, s)).unwrap()
            })
    })
}

fn arb_pair() -> impl Strategy<Value = (OperatorExpr, OperatorExpr)> {
    arb_algebra().prop_flat_map(|algebra| (arb_expr(algebra), arb_expr(algebra)))
}

fn arb_triple() -> impl Strategy<Value = (OperatorExpr, OperatorExpr, OperatorExpr)> {
    arb_algebra().prop_flat_map(|algebra| {
        (arb_expr(algebra), arb_expr(algebra), arb_expr(algebra))
    })
}

fn arb_word() -> impl Strategy<Value = (Algebra, Vec<Generator>)> {
    arb_algebra().prop_flat_map(|algebra| {
        let pool: Vec<Generator> = match algebra {
            Algebra::Hw => vec![Generator::Create, Generator::Annihilate],
            Algebra::Su2 => vec![Generator::LPlus, Generator::LZero, Generator::LMinus],
        };
        prop::collection::vec(prop::sample::select(pool), 0..=6)
            .prop_map(move |word| (algebra, word))
    })
}

fn gap_for(algebra: Algebra) -> GapSpec {
    let gap = match algebra {
        Algebra::Hw => &Scalar::param(HBAR) * &Scalar::param(OMEGA0),
        Algebra::Su2 => &Scalar::param(HBAR) * &Scalar::param(KAPPA),
    };
    GapSpec::new(algebra, gap).unwrap()
}

proptest! {
    #[test]
    fn addition_commutes_and_multiplication_distributes((x, y) in arb_pair(), z in arb_scalar()) {
        let xy = x.checked_add(&y).unwrap();
        let yx = y.checked_add(&x).unwrap();
        prop_assert_eq!(&xy, &yx);
        prop_assert_eq!(xy.scale(&z), x.scale(&z).checked_add(&y.scale(&z)).unwrap());
    }

    #[test]
    fn multiplication_is_associative((x, y, z) in arb_triple()) {
        let left = x.checked_mul(&y).unwrap().checked_mul(&z).unwrap();
        let right = x.checked_mul(&y.checked_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutator_is_antisymmetric_and_satisfies_jacobi((x, y, z) in arb_triple()) {
        let xy = x.commutator(&y).unwrap();
        prop_assert_eq!(&xy, &y.commutator(&x).unwrap().negated());
        let cyclic = xy
            .commutator(&z)
            .unwrap()
            .checked_add(&y.commutator(&z).unwrap().commutator(&x).unwrap())
            .unwrap()
            .checked_add(&z.commutator(&x).unwrap().commutator(&y).unwrap())
            .unwrap();
        prop_assert!(cyclic.is_zero(), "cyclic sum left `{}`", cyclic);
    }

    #[test]
    fn adjoint_is_an_involution_that_reverses_products((x, y) in arb_pair()) {
        prop_assert_eq!(x.adjoint().adjoint(), x.clone());
        let product = x.checked_mul(&y).unwrap();
        prop_assert_eq!(
            product.adjoint(),
            y.adjoint().checked_mul(&x.adjoint()).unwrap()
        );
    }

    #[test]
    fn simplify_is_idempotent((x, y) in arb_pair()) {
        let combined = x.checked_mul(&y).unwrap();
        let once = combined.simplify();
        prop_assert_eq!(&once, &once.simplify());
        prop_assert_eq!(&once, &combined);
    }

    #[test]
    fn level_shift_maps_split_the_ring(x in arb_algebra().prop_flat_map(arb_expr)) {
        let gap = gap_for(x.algebra());
        let diagonal = pi_project(&x);
        prop_assert_eq!(&pi_project(&diagonal), &diagonal);
        let shifted = gap.gamma(&x);
        prop_assert!(pi_project(&shifted).is_zero());
        prop_assert_eq!(&shifted, &gap.grading_operator().commutator(&x).unwrap());
        let complement = x.checked_sub(&diagonal).unwrap();
        prop_assert_eq!(&gap.gamma(&gap.gamma_inverse(&x)), &complement);
        prop_assert_eq!(&gap.gamma_inverse(&gap.gamma(&x)), &complement);
    }

    #[test]
    fn rendered_text_parses_back(x in arb_algebra().prop_flat_map(arb_expr)) {
        let text = expr_to_text(&x);
        let back = parse_expr(x.algebra(), &text).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn json_round_trip_is_lossless(x in arb_algebra().prop_flat_map(arb_expr)) {
        let back = expr_from_json(&expr_to_json_string(&x)).unwrap();
        prop_assert_eq!(back, x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Normal ordering is sound: reordering a word never changes its action on
    /// the exact finite representations (guarded below the oscillator
    /// truncation edge, exact everywhere for the spin multiplet).
    #[test]
    fn normal_ordering_agrees_with_the_exact_representation(
        (algebra, word) in arb_word(),
        hbar_num in 1i64..=3,
        hbar_den in 1i64..=2,
    ) {
        let hbar = BigRational::new(hbar_num.into(), hbar_den.into());
        let (basis, protect) = match algebra {
            Algebra::Hw => (BasisSpec::Hw { dim: 12 }, word.len()),
            Algebra::Su2 => (BasisSpec::Su2 { l: 3 }, 0),
        };
        let direct = rational_word_matrix(&word, &basis, &hbar);
        let ordered = normal_order(algebra, Scalar::one(), &word).unwrap();
        let mut values = BTreeMap::new();
        values.insert(pid(HBAR), hbar);
        let canonical = rational_expr_matrix(&ordered, &basis, &values).unwrap();
        prop_assert!(
            direct.eq_guarded(&canonical, protect),
            "word {:?} disagrees with `{}`",
            word,
            expr_to_text(&ordered)
        );
    }

    #[test]
    fn scalar_conjugation_distributes_over_products(a in arb_scalar(), b in arb_scalar()) {
        let ab = &a * &b;
        prop_assert_eq!(ab.conjugate(), &a.conjugate() * &b.conjugate());
        prop_assert_eq!(a.conjugate().conjugate(), a);
    }

    #[test]
    fn scalar_times_rational_inverse_is_one(n in 1i64..=5, d in 1i64..=5, k in -2i64..=2) {
        let s = &(&Scalar::from_ratio(n, d) * &Scalar::param_pow(OMEGA0, rat(k, 2)))
            * &Scalar::sqrt2_pow(k);
        let inverse = s.inverse().unwrap();
        prop_assert!((&s * &inverse).is_one());
    }
}
