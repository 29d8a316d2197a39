use std::cmp::Ordering;

use super::{Params, Truth};
use crate::term::Term;

/// `s >lpo t` with left-to-right lexicographic argument comparison.
pub(crate) fn greater<P: Params>(p: &P, s: &Term, t: &Term) -> Truth {
    if s == t {
        return Truth::False;
    }
    match (s, t) {
        (Term::Var(_), _) => Truth::False,
        (_, Term::Var(v)) => {
            if s.contains_var(*v) {
                Truth::True
            } else {
                Truth::False
            }
        }
        (Term::App(sa), Term::App(ta)) => {
            // some argument of s is >= t
            let mut sub = Truth::False;
            for si in sa.args() {
                if si == t {
                    return Truth::True;
                }
                sub = sub.or(|| greater(p, si, t));
                if sub == Truth::True {
                    return Truth::True;
                }
            }
            let dominates_args = || {
                ta.args()
                    .iter()
                    .fold(Truth::True, |acc, tj| acc.and(|| greater(p, s, tj)))
            };
            let head = match p.prec(sa.symbol(), ta.symbol()) {
                Some(Ordering::Greater) => dominates_args(),
                Some(Ordering::Less) => Truth::False,
                None => Truth::Unknown.and(dominates_args),
                Some(Ordering::Equal) => {
                    let first_diff = sa.args().iter().zip(ta.args()).position(|(a, b)| a != b);
                    match first_diff {
                        None => Truth::False,
                        Some(i) => {
                            let lex = greater(p, &sa.args()[i], &ta.args()[i]);
                            lex.and(|| {
                                ta.args()[i + 1..]
                                    .iter()
                                    .fold(Truth::True, |acc, tj| acc.and(|| greater(p, s, tj)))
                            })
                        }
                    }
                }
            };
            sub.or(|| head)
        }
    }
}
