//! Acceptance criteria 1-7. Each criterion prints one PASS/FAIL line with
//! its wall time; the test fails if any criterion fails.
//!
//! Run with `cargo test -p satmodel --test acceptance -- --nocapture` to see
//! the lines.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use satmodel::completion::{complete, replay_refutation, CompletionOutcome, Limits};
use satmodel::equation::Equation;
use satmodel::etp::{enumerate_equations, equation_at, implication_count, implication_problem};
use satmodel::finite::{no_finite_model_up_to, search_finite_model};
use satmodel::model::{verify_countermodel, HerbrandModel, ModelVerdict};
use satmodel::ordering::{
    find_orientation, parse_precedence, Comparison, KboConfig, OrderingConfig, OrderingKind, OrientationOutcome,
    DEFAULT_SEARCH_BUDGET,
};
use satmodel::rewrite::{ConfluenceVerdict, RewriteSystem, Strategy};
use satmodel::term::{ground_terms_up_to, Signature, Symbol, Term};
use satmodel::tptp::{self, parse_problem, parse_saturation, parse_term, Problem};

mod common;

/// Wall-time budgets per criterion.
const BUDGET: [Duration; 7] = [
    Duration::from_secs(1),
    Duration::from_secs(30),
    Duration::from_secs(5),
    Duration::from_secs(5),
    Duration::from_secs(60),
    Duration::from_secs(60),
    Duration::from_secs(120),
];
/// Instance bound for the countermodel checks.
const BOUND: usize = 2;
/// Step limit for the refutation of the constant-operation implication.
const REFUTATION_STEPS: usize = 1000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lpo(prec: &str) -> OrderingConfig {
    OrderingConfig::lpo(parse_precedence(prec).unwrap())
}

fn problem(text: &str) -> Problem {
    parse_problem(text).unwrap()
}

fn worked_example() -> Outcome {
    let eq = tptp::parse_equation("f(X,Y) = f(Y,X)").map_err(|e| e.to_string())?;
    let sig: Signature = [Symbol::new("f", 2), Symbol::constant("b"), Symbol::constant("a")]
        .into_iter()
        .collect();
    let sys = RewriteSystem::ordered(&sig, vec![eq], lpo("f > b > a")).map_err(|e| e.to_string())?;
    let t = parse_term("f(f(b,a),a)").unwrap();
    let trace = sys.normalize(&t).map_err(|e| e.to_string())?;
    let after: Vec<String> = trace.steps.iter().map(|s| s.after.to_string()).collect();
    ensure(after == ["f(f(a,b),a)", "f(a,f(a,b))"], || format!("trace {after:?}"))?;
    ensure(trace.result.to_string() == "f(a,f(a,b))", || {
        format!("result {}", trace.result)
    })?;
    Ok(format!("{t} -> {} -> {}", after[0], after[1]))
}

fn countermodel_118() -> Outcome {
    let p = problem(include_str!("../fixtures/eq118_not_274.p"));
    let dump = parse_saturation(include_str!("../fixtures/eq118_saturation.p")).map_err(|e| e.to_string())?;
    ensure(dump.equations.len() == 16, || {
        format!("{} rules parsed", dump.equations.len())
    })?;
    let mut sig = p.signature.clone();
    sig.extend(&dump.signature).map_err(|e| e.to_string())?;

    let rules = dump.rules();
    let witness = lpo("* > f0 > f1 > f4 > f3 > f2 > b > a");
    ensure(
        rules
            .iter()
            .all(|r| witness.compare(&r.lhs, &r.rhs) == Ok(Comparison::Greater)),
        || "the known precedence does not orient every rule".into(),
    )?;
    let cfg = match find_orientation(&sig, &rules, OrderingKind::Lpo, DEFAULT_SEARCH_BUDGET) {
        OrientationOutcome::Found(cfg) => cfg,
        other => return Err(format!("no LPO orientation found: {other:?}")),
    };

    let sys = RewriteSystem::ordered(&sig, dump.equations.clone(), cfg.clone()).map_err(|e| e.to_string())?;
    let pre = sys.check_preordered();
    ensure(pre.oriented_count == 16, || {
        format!("{}/16 pre-ordered", pre.oriented_count)
    })?;
    let conf = sys.check_ground_confluence();
    ensure(conf.verdict == ConfluenceVerdict::Certified, || {
        format!("confluence {} {:?}", conf.verdict, conf.reason)
    })?;
    let model = HerbrandModel::new(sys);
    let a = parse_term("a").unwrap();
    let goal = parse_term("mul(mul(mul(b,a),b),b)").unwrap();
    let va = model.evaluate(&a).map_err(|e| e.to_string())?;
    let vg = model.evaluate(&goal).map_err(|e| e.to_string())?;
    ensure(va == a && vg.to_string() == "f4", || format!("a -> {va}, goal -> {vg}"))?;

    let report = verify_countermodel(&model, &p, BOUND);
    ensure(report.verdict == ModelVerdict::VerifiedCountermodelAtBound, || {
        format!("{}: {:?}", report.verdict, report.reasons)
    })?;
    let ax = &report.axioms[0];
    Ok(format!(
        "{cfg}; {} critical pairs joinable; {} instances at k={BOUND} ({} checked), 0 failing",
        conf.pairs.len(),
        ax.instances,
        ax.checked
    ))
}

fn already_saturated() -> Outcome {
    let p = problem(include_str!("../fixtures/eq477_not_1426.p"));
    let dump = parse_saturation(include_str!("../fixtures/eq477_saturation.p")).map_err(|e| e.to_string())?;
    let cfg = lpo("* > a");
    let single = RewriteSystem::ordered(&p.signature, dump.equations, cfg.clone()).map_err(|e| e.to_string())?;
    let nontrivial = single.critical_pairs().iter().filter(|c| !c.trivial).count();
    ensure(nontrivial == 0, || format!("{nontrivial} nontrivial critical pairs"))?;

    let sat = match complete(&p, &cfg, Limits::default()).map_err(|e| e.to_string())? {
        CompletionOutcome::Saturated(s) => s,
        CompletionOutcome::Refuted(_) => return Err("refuted".into()),
        CompletionOutcome::ResourceOut { limit, .. } => return Err(format!("resource out: {limit}")),
    };
    ensure(sat.statistics.generated == 0, || {
        format!("{} equations generated", sat.statistics.generated)
    })?;
    let report = verify_countermodel(&HerbrandModel::new(sat.system), &p, BOUND);
    ensure(report.verdict == ModelVerdict::VerifiedCountermodelAtBound, || {
        format!("{}: {:?}", report.verdict, report.reasons)
    })?;
    Ok(format!(
        "saturated after {} steps, 0 generated; verified at k={BOUND}",
        sat.statistics.steps
    ))
}

fn constant_operation_refuted() -> Outcome {
    let p = problem(include_str!("../fixtures/constant_operation.p"));
    let limits = Limits {
        max_steps: REFUTATION_STEPS,
        ..Limits::default()
    };
    let cfg = OrderingConfig::kbo(parse_precedence("* > b > a").unwrap(), KboConfig::default());
    match complete(&p, &cfg, limits).map_err(|e| e.to_string())? {
        CompletionOutcome::Refuted(r) => {
            replay_refutation(&r, &p.axioms).map_err(|e| format!("proof does not replay: {e}"))?;
            Ok(format!(
                "refuted in {} steps, {} records replayed",
                r.statistics.steps,
                r.records.len()
            ))
        }
        CompletionOutcome::Saturated(_) => Err("saturated".into()),
        CompletionOutcome::ResourceOut { limit, .. } => Err(format!("resource out: {limit}")),
    }
}

fn finite_models() -> Outcome {
    let assoc = problem(include_str!("../fixtures/assoc_not_comm.p"));
    let m = search_finite_model(&assoc, 2, 4)
        .map_err(|e| e.to_string())?
        .ok_or("no size-2 model of associativity without commutativity")?;
    ensure(m.satisfies(&assoc) && common::as_tables(&m).satisfies(&assoc), || {
        "verifiers reject the witness".into()
    })?;
    let mul = &m.tables.iter().find(|t| t.symbol == "*").unwrap().values;
    ensure(mul == &[0, 0, 1, 1], || {
        format!("witness table {mul:?} is not the left projection")
    })?;

    let mut details = vec!["left projection at size 2".to_string()];
    for (name, text) in [
        ("118/274", include_str!("../fixtures/eq118_not_274.p")),
        ("477/1426", include_str!("../fixtures/eq477_not_1426.p")),
    ] {
        let report = no_finite_model_up_to(&problem(text), 3, 4).map_err(|e| e.to_string())?;
        ensure(report.first_model().is_none() && report.sizes.len() == 3, || {
            format!("{name}: {}", report.summary())
        })?;
        details.push(format!("{name}: {}", report.summary()));
    }
    Ok(details.join("; "))
}

fn etp_enumeration() -> Outcome {
    let all = enumerate_equations();
    let mut per_level = [0usize; 5];
    for e in &all {
        per_level[e.operation_count()] += 1;
    }
    ensure(all.len() == 4694, || format!("{} equations {per_level:?}", all.len()))?;
    let pairs = implication_count(all.len());
    ensure(pairs == 22_028_942, || format!("{pairs} implications"))?;
    let e118 = equation_at(&all, 118).map_err(|e| e.to_string())?;
    let e274 = equation_at(&all, 274).map_err(|e| e.to_string())?;
    let generated = implication_problem(e118, e274);
    let expected = problem(include_str!("../fixtures/eq118_not_274.p"));
    ensure(generated.disequations == expected.disequations, || {
        format!("problem 118/274 differs: {:?}", generated.disequations)
    })?;
    Ok(format!("{} equations {per_level:?}, {pairs} implications", all.len()))
}

/// Exhaustive small-scale versions of the property suites.
fn properties() -> Outcome {
    let mut done = Vec::new();

    // ordering totality and transitivity on the 4-operation universe
    let sig: Signature = [Symbol::new("*", 2), Symbol::constant("a"), Symbol::constant("b")]
        .into_iter()
        .collect();
    let universe = ground_terms_up_to(&sig, 4).unwrap();
    for cfg in [
        lpo("* > b > a"),
        OrderingConfig::kbo(parse_precedence("* > b > a").unwrap(), KboConfig::default()),
    ] {
        // a total antisymmetric relation is transitive iff the numbers of
        // smaller elements are pairwise distinct
        let mut below = vec![0usize; universe.len()];
        for (i, s) in universe.iter().enumerate() {
            for t in &universe {
                match cfg.compare(s, t).unwrap() {
                    Comparison::Greater => below[i] += 1,
                    Comparison::Less => {}
                    Comparison::Equal => ensure(s == t, || format!("{cfg}: {s} = {t}"))?,
                    Comparison::Incomparable => return Err(format!("{cfg}: {s} ? {t}")),
                }
            }
        }
        below.sort_unstable();
        ensure(below.iter().enumerate().all(|(i, &b)| i == b), || {
            format!("{cfg} is not transitive")
        })?;
    }
    done.push(format!("orderings total on {} terms", universe.len()));

    // normal forms on the certified 118 saturation
    let dump = parse_saturation(include_str!("../fixtures/eq118_saturation.p")).unwrap();
    let sys = RewriteSystem::ordered(
        &dump.signature,
        dump.equations.clone(),
        lpo("* > f0 > f1 > f4 > f3 > f2 > b > a"),
    )
    .unwrap();
    let terms = ground_terms_up_to(sys.signature(), 1).unwrap();
    let mut nf = HashMap::new();
    for t in &terms {
        let inner = sys.normalize_with(t, Strategy::InnermostLeftmost).unwrap().result;
        let outer = sys.normalize_with(t, Strategy::OutermostLeftmost).unwrap().result;
        ensure(inner == outer, || format!("strategies disagree on {t}"))?;
        ensure(sys.normal_form(&inner).unwrap() == inner, || {
            format!("{inner} is not normal")
        })?;
        nf.insert(t.clone(), inner);
    }
    let constants: Vec<Term> = sys
        .signature()
        .constants()
        .map(|c| Term::app(c.clone(), vec![]))
        .collect();
    for s in &terms {
        for t in &terms {
            if nf[s] != nf[t] {
                continue;
            }
            for f in sys.signature().symbols().iter().filter(|f| f.arity() == 2) {
                for c in &constants {
                    let l = Term::app(f.clone(), vec![s.clone(), c.clone()]);
                    let r = Term::app(f.clone(), vec![t.clone(), c.clone()]);
                    ensure(sys.equal_in_model(&l, &r).unwrap(), || {
                        format!("congruence fails: {l} vs {r}")
                    })?;
                }
            }
        }
    }
    done.push(format!("normal forms on {} terms", terms.len()));

    // parser round trips
    for t in &terms {
        let back = parse_term(&tptp::term_to_tptp(t)).map_err(|e| e.to_string())?;
        ensure(&back == t, || format!("{t} does not round-trip"))?;
    }
    let oriented = vec![true; dump.equations.len()];
    let back = parse_saturation(&tptp::write_saturation(&dump.equations, &oriented)).unwrap();
    ensure(back.equations == dump.equations, || "dump does not round-trip".into())?;
    done.push("round trips".to_string());

    // finite search against enumeration at sizes 1 and 2
    let all = enumerate_equations();
    let mut compared = 0;
    for premise in (1..=all.len()).step_by(97) {
        for conclusion in [2, 3, 43, 118, 274] {
            let p = implication_problem(&all[premise - 1], &all[conclusion - 1]);
            for size in 1..=2 {
                let found = search_finite_model(&p, size, 4).unwrap().is_some();
                let naive = common::naive_models(&p, size as u32) > 0;
                ensure(found == naive, || format!("{premise}/{conclusion} at size {size}"))?;
                compared += 1;
            }
        }
    }
    done.push(format!("{compared} finite searches match enumeration"));

    let keys: Vec<Equation> = all.iter().map(|e| e.equation().variant_key()).collect();
    ensure(
        keys.iter().collect::<std::collections::HashSet<_>>().len() == all.len(),
        || "duplicate equations".into(),
    )?;
    Ok(done.join("; "))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("worked example normalization", worked_example),
        ("118/274 countermodel", countermodel_118),
        ("477/1426 saturated as given", already_saturated),
        ("constant operation implication refuted", constant_operation_refuted),
        ("finite model checks", finite_models),
        ("equation enumeration", etp_enumeration),
        ("property suites", properties),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > BUDGET[i] => Err(format!("{d}; over budget {:?}", BUDGET[i])),
            other => other,
        };
        match &outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({:.2?}) {detail}", i + 1, elapsed),
            Err(why) => {
                println!("criterion {} {name}: FAIL ({:.2?}) {why}", i + 1, elapsed);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
