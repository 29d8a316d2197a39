//! Inputs shared by the benchmarks.

use satmodel::ordering::{parse_precedence, OrderingConfig};
use satmodel::rewrite::RewriteSystem;
use satmodel::tptp::{parse_problem, parse_saturation, Problem};

pub const SATURATION_118: &str = include_str!("../../core/fixtures/eq118_saturation.p");
pub const EQ118_NOT_274: &str = include_str!("../../core/fixtures/eq118_not_274.p");
pub const ASSOC_NOT_COMM: &str = include_str!("../../core/fixtures/assoc_not_comm.p");

pub fn ordering_118() -> OrderingConfig {
    OrderingConfig::lpo(parse_precedence("* > f0 > f1 > f4 > f3 > f2 > b > a").unwrap())
}

pub fn system_118() -> RewriteSystem {
    let dump = parse_saturation(SATURATION_118).unwrap();
    let p = problem_118();
    let mut sig = p.signature.clone();
    sig.extend(&dump.signature).unwrap();
    RewriteSystem::ordered(&sig, dump.equations, ordering_118()).unwrap()
}

pub fn problem_118() -> Problem {
    parse_problem(EQ118_NOT_274).unwrap()
}
