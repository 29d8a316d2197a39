use std::cmp::Ordering;
use std::collections::HashMap;

use super::{Params, Truth};
use crate::term::{Term, Var};

fn weight<P: Params>(p: &P, t: &Term) -> u64 {
    match t {
        Term::Var(_) => p.var_weight(),
        Term::App(app) => p.weight(app.symbol()) + app.args().iter().map(|a| weight(p, a)).sum::<u64>(),
    }
}

fn count_vars(t: &Term, sign: i64, balance: &mut HashMap<Var, i64>) {
    match t {
        Term::Var(v) => *balance.entry(*v).or_default() += sign,
        Term::App(app) if app.args().is_empty() || t.is_ground() => {}
        Term::App(app) => app.args().iter().for_each(|a| count_vars(a, sign, balance)),
    }
}

/// Every variable occurs in `s` at least as often as in `t`.
fn var_condition(s: &Term, t: &Term) -> bool {
    if t.is_ground() {
        return true;
    }
    let mut balance = HashMap::new();
    count_vars(s, 1, &mut balance);
    count_vars(t, -1, &mut balance);
    balance.values().all(|&n| n >= 0)
}

/// `s = f(f(...f(x)))` with at least one application of the unary `f`.
fn is_unary_tower_over(s: &Term, x: Var) -> bool {
    let mut cur = s;
    let mut head = None;
    loop {
        match cur {
            Term::Var(v) => return *v == x && head.is_some(),
            Term::App(app) if app.args().len() == 1 => {
                if head.is_some_and(|h| h != app.symbol()) {
                    return false;
                }
                head = Some(app.symbol());
                cur = &app.args()[0];
            }
            Term::App(_) => return false,
        }
    }
}

/// `s >kbo t`.
pub(crate) fn greater<P: Params>(p: &P, s: &Term, t: &Term) -> Truth {
    if s == t || !var_condition(s, t) {
        return Truth::False;
    }
    let (ws, wt) = (weight(p, s), weight(p, t));
    if ws != wt {
        return if ws > wt { Truth::True } else { Truth::False };
    }
    match (s, t) {
        (Term::Var(_), _) => Truth::False,
        (_, Term::Var(x)) => {
            if is_unary_tower_over(s, *x) {
                Truth::True
            } else {
                Truth::False
            }
        }
        (Term::App(sa), Term::App(ta)) => match p.prec(sa.symbol(), ta.symbol()) {
            Some(Ordering::Greater) => Truth::True,
            Some(Ordering::Less) => Truth::False,
            None => Truth::Unknown,
            Some(Ordering::Equal) => match sa.args().iter().zip(ta.args()).find(|(a, b)| a != b) {
                None => Truth::False,
                Some((a, b)) => greater(p, a, b),
            },
        },
    }
}
