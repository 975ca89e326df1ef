use proptest::prelude::*;

use powops::gamma::{normal_form, psi, FreeWord, GammaElem, Strategy as Rewrite, WordRewriter};
use powops::gmod::{standard_act, ModulePresentation};
use powops::koszul::KoszulComplex;
use powops::normlog::{self, StandardR};
use powops::poly::PolyA;
use powops::ring::Ring;

fn poly(max_deg: usize) -> impl Strategy<Value = PolyA> {
    prop::collection::vec(-4i64..=4, 0..=max_deg + 1).prop_map(|c| PolyA::from_i64s(&c))
}

fn word(max_len: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(0u8..3, 0..=max_len).prop_map(|w| {
        if w.is_empty() {
            "1".to_string()
        } else {
            w.iter()
                .map(|i| format!("Q{i}"))
                .collect::<Vec<_>>()
                .join(" ")
        }
    })
}

fn gamma_elem() -> impl Strategy<Value = GammaElem> {
    prop::collection::vec((poly(1), word(3)), 1..=3).prop_map(|terms| {
        terms.iter().fold(GammaElem::zero(), |acc, (c, w)| {
            let g = normal_form(&FreeWord::parse(w).expect("generated word parses"));
            acc.add(&g.scale_left(c))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(x in gamma_elem(), y in gamma_elem(), z in gamma_elem()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn multiplication_distributes(x in gamma_elem(), y in gamma_elem(), z in gamma_elem()) {
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(y.add(&z).mul(&x), y.mul(&x).add(&z.mul(&x)));
    }

    #[test]
    fn psi_is_central(x in gamma_elem()) {
        prop_assert!(psi().commutator(&x).is_zero());
    }

    #[test]
    fn action_on_r_is_a_representation(x in gamma_elem(), y in gamma_elem(), p in poly(3)) {
        prop_assert_eq!(standard_act(&x.mul(&y), &p), standard_act(&x, &standard_act(&y, &p)));
    }

    #[test]
    fn rewriting_strategies_agree(w in word(5), seed in any::<u64>()) {
        let w = FreeWord::parse(&w).unwrap();
        let left = WordRewriter::new(Rewrite::Leftmost).reduce(&w);
        prop_assert_eq!(&left, &WordRewriter::new(Rewrite::Rightmost).reduce(&w));
        prop_assert_eq!(&left, &WordRewriter::new(Rewrite::Random(seed)).reduce(&w));
    }

    #[test]
    fn normal_form_round_trips_through_text(x in gamma_elem()) {
        prop_assert_eq!(GammaElem::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn norm_is_multiplicative(x in poly(3), y in poly(3)) {
        let h = StandardR;
        let nxy = normlog::norm(&h, &x.mul(&y)).unwrap();
        prop_assert_eq!(nxy, normlog::norm(&h, &x).unwrap().mul(&normlog::norm(&h, &y).unwrap()));
    }

    #[test]
    fn trace_is_additive(x in poly(3), y in poly(3)) {
        let h = StandardR;
        let txy = normlog::trace(&h, &x.add(&y)).unwrap();
        prop_assert_eq!(txy, normlog::trace(&h, &x).unwrap().add(&normlog::trace(&h, &y).unwrap()));
    }

    #[test]
    fn logarithm_is_a_homomorphism(p in poly(2), q in poly(2)) {
        let two = PolyA::from_i64(2);
        let x = PolyA::one().add(&two.mul(&p));
        let y = PolyA::one().add(&two.mul(&q));
        let (prec2, prec_a) = (12, 6);
        let lxy = normlog::ell_completed(&x.mul(&y), prec2, prec_a).unwrap();
        let sum = normlog::ell_completed(&x, prec2, prec_a)
            .unwrap()
            .add(&normlog::ell_completed(&y, prec2, prec_a).unwrap());
        prop_assert!(lxy.sub(&sum).is_zero(), "{:?} vs {:?}", lxy, sum);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn koszul_differentials_compose_to_zero(n in 0usize..4, m in 0usize..3) {
        let module = ModulePresentation::omega_power(n).direct_sum(&ModulePresentation::omega_power(m));
        let c = KoszulComplex::build(&module, 3).unwrap();
        prop_assert_eq!(c.d_squared_vanishes(), (true, true));
    }
}
