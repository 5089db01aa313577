use moonshine_engine::rational::{int, rat, Rational};
use moonshine_engine::virasoro::{
    shapovalov_gram, weight_basis, DescendantVector, FormalPrimary, PbwMonomial, VirElement, VirasoroModule,
};
use proptest::prelude::*;

const MAX_DEGREE: u32 = 8;

fn central_charge() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(int(24)), Just(int(26)), Just(rat(1, 2)), (-30i64..30, 1i64..5).prop_map(|(p, q)| rat(p, q))]
}

fn monomial(max_degree: u32) -> impl Strategy<Value = PbwMonomial> {
    prop::collection::vec(1u32..=max_degree, 0..4).prop_filter_map("degree too large", move |mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        (parts.iter().sum::<u32>() <= max_degree).then(|| PbwMonomial::new(parts).expect("sorted"))
    })
}

fn descendant() -> impl Strategy<Value = DescendantVector> {
    (0u32..6, prop::collection::vec((monomial(MAX_DEGREE), -20i64..20, 1i64..4), 1..4)).prop_map(|(h, terms)| {
        DescendantVector::from_terms(FormalPrimary::new(h), terms.into_iter().map(|(m, p, q)| (m, rat(p, q))))
    })
}

fn sub(a: &DescendantVector, b: &DescendantVector) -> DescendantVector {
    a.add(&b.scale(&int(-1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn commutator_relation(v in descendant(), c in central_charge(), m in -4i64..=4, n in -4i64..=4) {
        let mut module = VirasoroModule::for_primary(v.primary(), &c);
        let (nv, mv) = (module.apply(n, &v), module.apply(m, &v));
        let lmn = module.apply(m, &nv);
        let lnm = module.apply(n, &mv);
        let mut rhs = module.apply(m + n, &v).scale(&int(m - n));
        if m + n == 0 {
            rhs = rhs.add(&v.scale(&(&c * int(m * m * m - m) / int(12))));
        }
        prop_assert_eq!(sub(&lmn, &lnm), rhs);
    }

    #[test]
    fn jacobi_identity(v in descendant(), c in central_charge(), a in -3i64..=3, b in -3i64..=3, d in -3i64..=3) {
        let mut module = VirasoroModule::for_primary(v.primary(), &c);
        let mut word = |ops: &[i64]| {
            ops.iter().rev().fold(v.clone(), |acc, &p| module.apply(p, &acc))
        };
        // [[x,y],z] = xyz - yxz - zxy + zyx
        let mut total = DescendantVector::zero(v.primary());
        for (x, y, z) in [(a, b, d), (b, d, a), (d, a, b)] {
            total = total
                .add(&word(&[x, y, z]))
                .add(&word(&[y, x, z]).scale(&int(-1)))
                .add(&word(&[z, x, y]).scale(&int(-1)))
                .add(&word(&[z, y, x]));
        }
        prop_assert!(total.is_zero());
    }

    #[test]
    fn normal_ordering_is_confluent(
        h in 1u32..6,
        c in central_charge(),
        word in prop::collection::vec(1u32..=4, 2..=3),
        swap in 0usize..4,
    ) {
        prop_assume!(word.iter().sum::<u32>() <= MAX_DEGREE);
        let i = swap % (word.len() - 1);
        let prim = FormalPrimary::new(h);
        let mut module = VirasoroModule::new(h, &c);
        let mut run = |w: &[u32]| {
            w.iter().rev().fold(DescendantVector::primary_vector(prim), |acc, &p| module.apply(-(p as i64), &acc))
        };
        let (a, b) = (word[i], word[i + 1]);
        let mut swapped = word.clone();
        swapped.swap(i, i + 1);
        let mut fused = word[..i].to_vec();
        fused.push(a + b);
        fused.extend_from_slice(&word[i + 2..]);
        // L(-a)L(-b) = L(-b)L(-a) + (b-a) L(-a-b)
        let direct = run(&word);
        let rhs = run(&swapped).add(&run(&fused).scale(&int(b as i64 - a as i64)));
        prop_assert_eq!(&direct, &rhs);
        let mut sorted = word.clone();
        sorted.sort_unstable_by(|x, y| y.cmp(x));
        prop_assert_eq!(direct.coefficient(&PbwMonomial::new(sorted).expect("sorted")), int(1));
        prop_assert_eq!(direct.level(), Some(word.iter().sum::<u32>()));
    }

    #[test]
    fn contravariance(a in descendant(), c in central_charge(), n in 1i64..=4) {
        let prim = a.primary();
        let mut module = VirasoroModule::for_primary(prim, &c);
        for b_mono in weight_basis(prim.weight, 4) {
            let b = DescendantVector::from_terms(prim, [(b_mono, int(1))]);
            let (raised, lowered) = (module.apply(-n, &a), module.apply(n, &b));
            let lhs = module.form_vectors(&raised, &b);
            let rhs = module.form_vectors(&a, &lowered);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn display_parse_round_trip(v in descendant()) {
        let e = v.to_vir_element();
        let parsed: VirElement = e.to_string().parse().expect("display form parses");
        prop_assert_eq!(parsed, e);
    }

    #[test]
    fn gram_is_symmetric(h in 0u32..8, level in 0u32..=6, c in central_charge()) {
        prop_assert!(shapovalov_gram(h, &c, level).is_symmetric());
    }
}
