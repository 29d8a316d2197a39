use std::collections::HashSet;
use std::sync::OnceLock;

use proptest::prelude::*;

mod common;
use common::{as_tables, naive_models};

use satmodel::equation::Equation;
use satmodel::etp::{enumerate_equations, implication_problem, MagmaEquation};
use satmodel::finite::search_finite_model;
use satmodel::ordering::{parse_precedence, Comparison, KboConfig, OrderingConfig};
use satmodel::rewrite::{RewriteSystem, Strategy as RewriteStrategy};
use satmodel::term::{apply_subst, ground_terms_up_to, match_term, unify, Signature, Substitution, Symbol, Term, Var};
use satmodel::tptp::{self, parse_problem, parse_saturation};

fn constant(name: &str) -> Term {
    Term::constant(name)
}

fn magma_signature() -> Signature {
    [Symbol::new("*", 2), Symbol::constant("a"), Symbol::constant("b")]
        .into_iter()
        .collect()
}

fn orderings() -> Vec<OrderingConfig> {
    let mut out = Vec::new();
    for prec in ["* > b > a", "b > * > a", "a > b > *"] {
        out.push(OrderingConfig::lpo(parse_precedence(prec).unwrap()));
        out.push(OrderingConfig::kbo(
            parse_precedence(prec).unwrap(),
            KboConfig::default(),
        ));
    }
    let mut heavy = KboConfig::default();
    heavy.weights.insert("b".into(), 3);
    out.push(OrderingConfig::kbo(parse_precedence("* > b > a").unwrap(), heavy));
    out
}

fn universe() -> &'static Vec<Term> {
    static U: OnceLock<Vec<Term>> = OnceLock::new();
    U.get_or_init(|| ground_terms_up_to(&magma_signature(), 4).unwrap())
}

#[test]
fn universe_size_follows_catalan_numbers() {
    // sum over k <= 4 of C_k * 2^(k+1)
    let catalan = [1usize, 1, 2, 5, 14];
    let expected: usize = catalan
        .iter()
        .enumerate()
        .map(|(k, c)| c * 2usize.pow(k as u32 + 1))
        .sum();
    assert_eq!(universe().len(), expected);
    assert_eq!(universe().iter().collect::<HashSet<_>>().len(), expected);
}

#[test]
fn orderings_are_total_and_antisymmetric_on_ground_terms() {
    let u = universe();
    for cfg in orderings() {
        for s in u {
            for t in u {
                let st = cfg.compare(s, t).unwrap();
                match st {
                    Comparison::Equal => assert_eq!(s, t, "{cfg}"),
                    Comparison::Incomparable => panic!("{cfg}: {s} and {t} incomparable"),
                    _ => assert_eq!(cfg.compare(t, s).unwrap(), st.reverse(), "{cfg}: {s} vs {t}"),
                }
            }
        }
    }
}

fn ground_term(depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(constant("a")), Just(constant("b"))];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| Term::mul(l, r))
    })
}

fn open_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(constant("a")), Just(constant("b")), (0u32..3).prop_map(Term::var),];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::mul(l, r)),
            inner.prop_map(|t| Term::app(Symbol::new("g", 1), vec![t])),
        ]
    })
}

proptest! {
    #[test]
    fn orderings_are_transitive(
        i in 0usize..550, j in 0usize..550, k in 0usize..550, which in 0usize..7,
    ) {
        let u = universe();
        let cfg = &orderings()[which];
        let (s, t, r) = (&u[i], &u[j], &u[k]);
        if cfg.compare(s, t).unwrap() == Comparison::Greater && cfg.compare(t, r).unwrap() == Comparison::Greater {
            prop_assert_eq!(cfg.compare(s, r).unwrap(), Comparison::Greater);
        }
    }

    #[test]
    fn orderings_are_subterm_and_context_monotone(s in ground_term(4), t in ground_term(4), c in ground_term(2), which in 0usize..7) {
        let cfg = &orderings()[which];
        prop_assert_eq!(cfg.compare(&Term::mul(s.clone(), c.clone()), &s).unwrap(), Comparison::Greater);
        if cfg.compare(&s, &t).unwrap() == Comparison::Greater {
            prop_assert_eq!(
                cfg.compare(&Term::mul(c.clone(), s.clone()), &Term::mul(c, t)).unwrap(),
                Comparison::Greater
            );
        }
    }
}

fn sat118() -> &'static RewriteSystem {
    static S: OnceLock<RewriteSystem> = OnceLock::new();
    S.get_or_init(|| {
        let dump = parse_saturation(include_str!("../fixtures/eq118_saturation.p")).unwrap();
        let cfg = OrderingConfig::lpo(parse_precedence("* > f0 > f1 > f4 > f3 > f2 > b > a").unwrap());
        RewriteSystem::ordered(&dump.signature, dump.equations, cfg).unwrap()
    })
}

fn commutativity() -> &'static RewriteSystem {
    static S: OnceLock<RewriteSystem> = OnceLock::new();
    S.get_or_init(|| {
        let eq = tptp::parse_equation("mul(X,Y) = mul(Y,X)").unwrap();
        let cfg = OrderingConfig::lpo(parse_precedence("* > b > a").unwrap());
        RewriteSystem::ordered(&magma_signature(), vec![eq], cfg).unwrap()
    })
}

#[test]
fn strategies_agree_on_bounded_universe() {
    let sig = sat118().signature().clone();
    for t in ground_terms_up_to(&sig, 1).unwrap() {
        let inner = sat118()
            .normalize_with(&t, RewriteStrategy::InnermostLeftmost)
            .unwrap()
            .result;
        let outer = sat118()
            .normalize_with(&t, RewriteStrategy::OutermostLeftmost)
            .unwrap()
            .result;
        assert_eq!(inner, outer, "{t}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normal_forms_are_idempotent(t in ground_term(5)) {
        for sys in [sat118(), commutativity()] {
            let nf = sys.normal_form(&t).unwrap();
            prop_assert_eq!(sys.normal_form(&nf).unwrap(), nf.clone());
            prop_assert!(sys.rewrite_step(&nf).unwrap().is_none());
        }
    }

    #[test]
    fn strategies_agree_on_confluent_systems(t in ground_term(5)) {
        for sys in [sat118(), commutativity()] {
            let inner = sys.normalize_with(&t, RewriteStrategy::InnermostLeftmost).unwrap().result;
            let outer = sys.normalize_with(&t, RewriteStrategy::OutermostLeftmost).unwrap().result;
            prop_assert_eq!(inner, outer);
        }
    }

    #[test]
    fn model_equality_is_a_congruence(s in ground_term(4), t in ground_term(4), u in ground_term(4)) {
        for sys in [sat118(), commutativity()] {
            prop_assert!(sys.equal_in_model(&s, &s).unwrap());
            prop_assert_eq!(sys.equal_in_model(&s, &t).unwrap(), sys.equal_in_model(&t, &s).unwrap());
            if sys.equal_in_model(&s, &t).unwrap() && sys.equal_in_model(&t, &u).unwrap() {
                prop_assert!(sys.equal_in_model(&s, &u).unwrap());
            }
            // s and its normal form are equal, so contexts must agree
            let nf = sys.normal_form(&s).unwrap();
            prop_assert!(sys.equal_in_model(&Term::mul(s.clone(), u.clone()), &Term::mul(nf.clone(), u.clone())).unwrap());
            prop_assert!(sys.equal_in_model(&Term::mul(u.clone(), s.clone()), &Term::mul(u.clone(), nf)).unwrap());
        }
    }

    #[test]
    fn term_round_trips_through_tptp(t in open_term()) {
        let text = tptp::term_to_tptp(&t);
        let back = tptp::parse_term(&text).unwrap();
        // the parser renames variables by first occurrence
        prop_assert_eq!(
            Equation::new(back.clone(), back).normalized(),
            Equation::new(t.clone(), t).normalized()
        );
    }

    #[test]
    fn problem_round_trips_through_tptp(l in open_term(), r in open_term(), g in ground_term(3)) {
        let p = satmodel::Problem::new(vec![Equation::new(l, r)], vec![Equation::new(constant("a"), g)]).unwrap();
        let back = parse_problem(&tptp::write_problem(&p)).unwrap();
        prop_assert_eq!(back.axioms[0].clone(), p.axioms[0].normalized());
        prop_assert_eq!(back.disequations, p.disequations);
    }

    #[test]
    fn saturation_round_trips(l in open_term(), r in open_term(), oriented in any::<bool>()) {
        let e = Equation::new(l, r).normalized();
        let text = tptp::write_saturation(std::slice::from_ref(&e), &[oriented]);
        let dump = parse_saturation(&text).unwrap();
        prop_assert_eq!(dump.equations, vec![e]);
        prop_assert_eq!(dump.orientation_hints, vec![oriented.then_some(true)]);
    }

    #[test]
    fn matching_is_sound_and_complete(p in open_term(), x in ground_term(2), y in ground_term(2), z in ground_term(2)) {
        let sigma: Substitution = [(Var(0), x), (Var(1), y), (Var(2), z)].into_iter().collect();
        let subject = apply_subst(&sigma, &p);
        let found = match_term(&p, &subject);
        prop_assert!(found.is_some(), "no match of {} onto {}", p, subject);
        prop_assert_eq!(apply_subst(&found.unwrap(), &p), subject);
    }

    #[test]
    fn unifiers_unify(s in open_term(), t in open_term()) {
        let t = t.shift_vars(3);
        if let Some(sigma) = unify(&s, &t) {
            prop_assert_eq!(apply_subst(&sigma, &s), apply_subst(&sigma, &t));
        }
        // an instance of s is always unifiable with s
        let inst = apply_subst(&[(Var(0), constant("a"))].into_iter().collect(), &s).shift_vars(3);
        let sigma = unify(&s, &inst);
        prop_assert!(sigma.is_some());
        let sigma = sigma.unwrap();
        prop_assert_eq!(apply_subst(&sigma, &s), apply_subst(&sigma, &inst));
    }
}

fn catalogue() -> &'static Vec<MagmaEquation> {
    static C: OnceLock<Vec<MagmaEquation>> = OnceLock::new();
    C.get_or_init(enumerate_equations)
}

fn magma_term(max_var: u32) -> impl Strategy<Value = Term> {
    (0..max_var).prop_map(Term::var).prop_recursive(4, 5, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| Term::mul(l, r))
    })
}

proptest! {
    #[test]
    fn canonicalization_is_idempotent_and_closed(l in magma_term(6), r in magma_term(6)) {
        prop_assume!(l.operation_count() + r.operation_count() <= 4);
        let c = MagmaEquation::canonicalize(&Equation::new(l.clone(), r.clone())).unwrap();
        prop_assert_eq!(MagmaEquation::canonicalize(c.equation()).unwrap(), c.clone());
        prop_assert_eq!(MagmaEquation::canonicalize(&Equation::new(r, l)).unwrap(), c.clone());
        let trivial = c.equation().is_trivial() && c.operation_count() > 0;
        prop_assert_eq!(catalogue().binary_search(&c).is_ok(), !trivial);
    }
}

#[test]
fn catalogue_has_no_variants_among_small_equations() {
    let small: Vec<&MagmaEquation> = catalogue().iter().filter(|e| e.operation_count() <= 2).collect();
    let keys: HashSet<Equation> = small.iter().map(|e| e.equation().variant_key()).collect();
    assert_eq!(keys.len(), small.len());
    assert!(catalogue().windows(2).all(|w| w[0] < w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn finite_search_agrees_with_enumeration(premise in 1usize..=4694, conclusion in 1usize..=4694) {
        let all = catalogue();
        let p = implication_problem(&all[premise - 1], &all[conclusion - 1]);
        prop_assume!(p.signature.symbols().iter().any(|s| s.name() == "*"));
        for size in 1..=2usize {
            let found = search_finite_model(&p, size, 4).unwrap();
            let naive = naive_models(&p, size as u32);
            prop_assert_eq!(found.is_some(), naive > 0, "size {}", size);
            if let Some(m) = found {
                prop_assert!(as_tables(&m).satisfies(&p));
                prop_assert!(m.satisfies(&p));
            }
        }
    }
}
