use proptest::prelude::*;
use qrep_core::envgroup::{central_exponents, coset_enumerate, word_image, ExponentMode, Letter, Word, DEFAULT_MAX_COSETS};
use qrep_core::qnm::{build_qnm, qnm_equivalent, rho_alb, IrrepParams, QnmParams};
use qrep_core::rep::{
    are_equivalent, decompose, det_character, is_completely_reducible, is_irreducible, permutation_rep, twist,
};
use qrep_core::{Cyclo, Matrix, Representation, Scalar};

fn cyclo() -> impl Strategy<Value = Cyclo> {
    (-3i64..=3, 1i64..=3, prop::sample::select(vec![1u64, 3, 4, 8]), 0i64..8)
        .prop_map(|(num, den, n, k)| Cyclo::from_frac(num, den).mul(&Cyclo::root_of_unity(n, k)))
}

fn nonzero_cyclo() -> impl Strategy<Value = Cyclo> {
    cyclo().prop_filter("nonzero", |c| !c.is_zero())
}

fn unit() -> impl Strategy<Value = Cyclo> {
    (prop::sample::select(vec![1u64, 2, 4, 8]), 0i64..8).prop_map(|(n, k)| Cyclo::root_of_unity(n, k))
}

fn invertible(d: usize) -> impl Strategy<Value = Matrix<Cyclo>> {
    prop::collection::vec(-2i64..=2, d * d)
        .prop_map(move |v| {
            let rows: Vec<&[i64]> = v.chunks(d).collect();
            Matrix::<Cyclo>::from_i64_rows(&rows)
        })
        .prop_filter("invertible", |m| !m.det().unwrap().is_zero())
}

/// `(Q_{d,d}, params)` with `d ∈ {2, 3}`, a primitive `α` and small `λ, β`.
fn irrep() -> impl Strategy<Value = (QnmParams, IrrepParams)> {
    (2usize..=3, nonzero_cyclo(), nonzero_cyclo()).prop_flat_map(|(d, lambda, beta)| {
        let ks: Vec<u64> = (1..d as u64).collect();
        prop::sample::select(ks).prop_map(move |k| {
            (QnmParams::new(d, d).unwrap(), IrrepParams::new(d, k, lambda.clone(), beta.clone()))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn field_axioms(a in cyclo(), b in nonzero_cyclo(), c in cyclo()) {
        prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a.clone());
        prop_assert_eq!(a.add(&c).mul(&b), a.mul(&b).add(&c.mul(&b)));
        prop_assert_eq!(a.mul(&c).conj(), a.conj().mul(&c.conj()));
        let approx = a.mul(&c).to_approx();
        prop_assert_eq!(approx, a.to_approx().mul(&c.to_approx()));
    }

    #[test]
    fn irreducibles_are_completely_reducible((p, ip) in irrep()) {
        let rep = rho_alb(&p, &ip).unwrap();
        prop_assert!(is_irreducible(&rep));
        prop_assert!(is_completely_reducible(&rep));
    }

    #[test]
    fn conjugation_preserves_class((p, ip) in irrep(), t in invertible(3)) {
        let rep = rho_alb(&p, &ip).unwrap();
        prop_assume!(rep.dim() == 3);
        let conj = rep.conjugate(&t).unwrap();
        prop_assert!(are_equivalent(&rep, &conj).unwrap());
        prop_assert!(are_equivalent(&conj, &rep).unwrap());
        prop_assert!(is_irreducible(&conj));
    }

    #[test]
    fn parameter_rule_matches_intertwiners(
        d in 2usize..=3,
        k in 1u64..=2,
        l1 in unit(), b1 in unit(), l2 in unit(), b2 in unit(),
    ) {
        let k = if d == 2 { 1 } else { k };
        let p = QnmParams::new(d, d).unwrap();
        let a = IrrepParams::new(d, k, l1, b1);
        let b = IrrepParams::new(d, k, l2, b2);
        let rule = qnm_equivalent(&p, &a, &b).unwrap();
        let direct = are_equivalent(&rho_alb(&p, &a).unwrap(), &rho_alb(&p, &b).unwrap()).unwrap();
        prop_assert_eq!(rule, direct);
    }

    #[test]
    fn twist_by_det_character_has_det_one((p, ip) in irrep()) {
        let rep = rho_alb(&p, &ip).unwrap().to_approx();
        let twisted = twist(&rep, &det_character(&rep).unwrap()).unwrap();
        for m in twisted.images() {
            let det = m.det().unwrap();
            prop_assert!((det.re() - 1.0).abs() <= 1e-9 && det.im().abs() <= 1e-9, "det {}", det);
        }
    }

    #[test]
    fn permutation_reps_split_into_characters(n in 1usize..=4, m in 1usize..=4, which in 0usize..3) {
        let q = build_qnm(n, m).unwrap();
        let subset: Vec<usize> = match which {
            0 => (0..n).collect(),
            1 => (n..n + m).collect(),
            _ => (0..n + m).collect(),
        };
        let rep: Representation<Cyclo> = permutation_rep(&q, &subset).unwrap();
        let blocks = decompose(&rep, 11).unwrap();
        prop_assert_eq!(blocks.iter().map(|b| b.dim()).sum::<usize>(), subset.len());
        for b in &blocks {
            let r = b.clone().into_representation();
            prop_assert!(is_irreducible(&r));
            for (x, rx) in b.images().iter().enumerate() {
                prop_assert_eq!(&(rep.to_approx().image(x) * b.basis()), &(b.basis() * rx));
            }
        }
    }

    #[test]
    fn quotient_respects_word_images(
        (p, ip) in irrep(),
        letters in prop::collection::vec((0usize..6, any::<bool>()), 0..10),
    ) {
        let q = build_qnm(p.n, p.m).unwrap();
        let rep = rho_alb(&p, &ip).unwrap();
        let h = coset_enumerate(&q, &central_exponents(&q, ExponentMode::PerGenerator), DEFAULT_MAX_COSETS).unwrap();
        let word = Word::new(letters.into_iter().map(|(g, inv)| Letter::new(g % q.size(), inv)).collect());
        // The central powers act by scalars, so words equal in H have proportional images.
        let section = &h.sections()[h.element_of(&word)];
        let a = word_image(&rep, &word).unwrap();
        let b = word_image(&rep, section).unwrap();
        let ratio = a.entries().iter().zip(b.entries()).find(|(_, y)| !y.is_zero()).map(|(x, y)| x.div(y).unwrap()).unwrap();
        prop_assert_eq!(a, b.scale(&ratio));
    }
}
