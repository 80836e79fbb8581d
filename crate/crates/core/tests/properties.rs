use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use qodesign::lax::{hetero_parallel, hetero_series, CheckPolicy};
use qodesign::profunctor::{bimodule_direct, bimodule_via_hom};
use qodesign::quantale::{QValue, Quantale, TNorm};
use qodesign::{random, DesignProblem, LaxMap, QCategory};

fn quantales() -> Vec<Quantale> {
    vec![
        Quantale::bool(),
        Quantale::cost(),
        Quantale::pace(),
        Quantale::nat(),
        Quantale::fuzz(TNorm::Godel),
        Quantale::fuzz(TNorm::Goguen),
        Quantale::fuzz(TNorm::Lukasiewicz),
        Quantale::powerset("P3", vec!["a".into(), "b".into(), "c".into()]).unwrap(),
    ]
}

fn quantale() -> impl Strategy<Value = Quantale> {
    (0..quantales().len()).prop_map(|i| quantales()[i].clone())
}

fn same(q: &Quantale, a: &DesignProblem, b: &DesignProblem) -> bool {
    a.values().iter().zip(b.values()).all(|(x, y)| q.eq(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_is_associative(q in quantale(), seed in any::<u64>(), n in 1usize..4, m in 1usize..4, k in 1usize..4, l in 1usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let cats: Vec<QCategory> = [n, m, k, l].iter().map(|&s| random::category(&q, s, &mut rng)).collect();
        let d = random::problem(&cats[0], &cats[1], &mut rng);
        let e = random::problem(&cats[1], &cats[2], &mut rng);
        let g = random::problem(&cats[2], &cats[3], &mut rng);
        let left = DesignProblem::series(&DesignProblem::series(&d, &e).unwrap(), &g).unwrap();
        let right = DesignProblem::series(&d, &DesignProblem::series(&e, &g).unwrap()).unwrap();
        prop_assert!(same(&q, &left, &right));
    }

    #[test]
    fn identity_is_a_unit_for_series(q in quantale(), seed in any::<u64>(), n in 1usize..5, m in 1usize..5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let r = random::category(&q, n, &mut rng);
        let f = random::category(&q, m, &mut rng);
        let d = random::problem(&r, &f, &mut rng);
        let left = DesignProblem::series(&DesignProblem::identity(&r), &d).unwrap();
        let right = DesignProblem::series(&d, &DesignProblem::identity(&f)).unwrap();
        prop_assert!(same(&q, &left, &d));
        prop_assert!(same(&q, &right, &d));
    }

    #[test]
    fn operators_preserve_validity(q in quantale(), seed in any::<u64>(), n in 1usize..4, m in 1usize..4, k in 1usize..3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let r = random::category(&q, n, &mut rng);
        let f = random::category(&q, m, &mut rng);
        let loop_ = random::category(&q, k, &mut rng);
        let d = random::problem(&r, &f, &mut rng);
        let e = random::problem(&f, &r, &mut rng);
        prop_assert!(DesignProblem::series(&d, &e).unwrap().validate().is_ok());
        let p = DesignProblem::parallel(&d, &e).unwrap();
        prop_assert!(p.validate().is_ok());
        let open = random::problem(&r.tensor(&loop_).unwrap(), &f.tensor(&loop_).unwrap(), &mut rng);
        prop_assert!(DesignProblem::trace(&open, &loop_).unwrap().validate().is_ok());
    }

    #[test]
    fn closure_is_idempotent(q in quantale(), seed in any::<u64>(), n in 1usize..5, m in 1usize..5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let r = random::category(&q, n, &mut rng);
        let f = random::category(&q, m, &mut rng);
        let d = random::problem(&r, &f, &mut rng);
        let again = random::closure(&r, &f, d.values());
        prop_assert!(same(&q, &again, &d));
    }

    #[test]
    fn bimodule_checks_agree(q in quantale(), seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let r = random::category(&q, n, &mut rng);
        let f = random::category(&q, m, &mut rng);
        let raw = random::table(&q, n * m, &mut rng);
        prop_assert_eq!(bimodule_direct(&r, &f, &raw).is_ok(), bimodule_via_hom(&r, &f, &raw).is_ok());
    }

    #[test]
    fn internal_hom_is_right_adjoint(q in quantale(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (p, x, y) = (q.random_value(&mut rng), q.random_value(&mut rng), q.random_value(&mut rng));
        let h = q.internal_hom(&x, &y).unwrap();
        prop_assert_eq!(q.leq(&q.mult(&p, &x), &y), q.leq(&p, &h));
    }

    #[test]
    fn join_is_least_upper_bound(q in quantale(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (a, b, c) = (q.random_value(&mut rng), q.random_value(&mut rng), q.random_value(&mut rng));
        let j = q.join2(&a, &b);
        prop_assert!(q.leq(&a, &j) && q.leq(&b, &j));
        prop_assert_eq!(q.leq(&a, &c) && q.leq(&b, &c), q.leq(&j, &c));
        prop_assert!(q.leq(&q.bottom(), &a) && q.leq(&a, &q.top()));
    }

    #[test]
    fn values_render_and_parse_back(q in quantale(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let v = q.random_value(&mut rng);
        let text = q.render_value(&v);
        prop_assert_eq!(q.parse_value(&text).unwrap(), v);
    }

    #[test]
    fn lax_pushforward_keeps_categories(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let cost = Quantale::cost();
        let c = random::category(&cost, n, &mut rng);
        for m in [LaxMap::cost_to_bool_finite(), LaxMap::cost_to_bool_zero(), LaxMap::constant_true(&cost), LaxMap::scale(3.0).unwrap()] {
            prop_assert!(m.push_category(&c).is_ok(), "{}", m.rule_text());
        }
        let b = random::order(n, &mut rng);
        prop_assert!(LaxMap::bool_to_unit(&cost).push_category(&b).is_ok());
        let nat = random::category(&Quantale::nat(), n, &mut rng);
        prop_assert!(LaxMap::sqrt_cost(2.0).unwrap().push_category(&nat).is_ok());
    }

    #[test]
    fn hetero_operators_validate(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, k in 1usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let cost = Quantale::cost();
        let to_cost = LaxMap::bool_to_unit(&cost);
        let r = random::order(n, &mut rng);
        let mid = random::order(m, &mut rng);
        let d = random::problem(&r, &mid, &mut rng);
        let fc = random::category(&cost, k, &mut rng);
        let e = random::problem(&to_cost.push_category(&mid).unwrap(), &fc, &mut rng);
        let s = hetero_series(&d, &e, &to_cost, &LaxMap::identity(&cost)).unwrap();
        prop_assert!(s.validate().is_ok());
        let to_bool = LaxMap::cost_to_bool_finite();
        let p = hetero_parallel(&e, &d, &to_bool, &LaxMap::identity(&Quantale::bool())).unwrap();
        prop_assert!(p.validate().is_ok());
    }
}

#[test]
fn fixture_verdicts_are_stable() {
    let p = CheckPolicy::default();
    for m in [LaxMap::cost_to_bool_finite(), LaxMap::cost_to_bool_zero(), LaxMap::scale(2.0).unwrap()] {
        assert!(m.check(&p).verdict.is_lax(), "{}", m.rule_text());
    }
    assert!(!LaxMap::threshold(5.0).unwrap().check(&p).verdict.is_lax());
    assert_eq!(LaxMap::sqrt_cost(2.0).unwrap().apply(&QValue::Nat(9)), QValue::Real(6.0));
}
