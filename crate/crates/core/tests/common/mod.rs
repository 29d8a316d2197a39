#![allow(dead_code)]

use satmodel::finite::FiniteInterpretation;
use satmodel::term::Term;
use satmodel::Problem;

/// Brute-force evaluation over explicit tables, independent of the search.
pub struct Tables {
    size: u32,
    mul: Vec<u32>,
    constants: Vec<(String, u32)>,
}

impl Tables {
    pub fn eval(&self, t: &Term, env: &[u32]) -> u32 {
        match t {
            Term::Var(v) => env[v.0 as usize],
            Term::App(app) if app.args().is_empty() => {
                self.constants.iter().find(|(n, _)| n == app.symbol().name()).unwrap().1
            }
            Term::App(app) => {
                let l = self.eval(&app.args()[0], env);
                let r = self.eval(&app.args()[1], env);
                self.mul[(l * self.size + r) as usize]
            }
        }
    }

    pub fn satisfies(&self, p: &Problem) -> bool {
        p.axioms.iter().all(|a| {
            let n = a.max_var().map_or(0, |m| m + 1);
            (0..self.size.pow(n)).all(|mut k| {
                let env: Vec<u32> = (0..n)
                    .map(|_| {
                        let v = k % self.size;
                        k /= self.size;
                        v
                    })
                    .collect();
                self.eval(&a.lhs, &env) == self.eval(&a.rhs, &env)
            })
        }) && p
            .disequations
            .iter()
            .all(|d| self.eval(&d.lhs, &[]) != self.eval(&d.rhs, &[]))
    }
}

/// Number of interpretations of size `size` satisfying `p`, by trying
/// every table.
pub fn naive_models(p: &Problem, size: u32) -> usize {
    let names: Vec<String> = p.signature.constants().map(|c| c.name().to_string()).collect();
    let cells = (size * size) as usize + names.len();
    let mut count = 0;
    for mut code in 0..size.pow(cells as u32) {
        let mut vals = Vec::with_capacity(cells);
        for _ in 0..cells {
            vals.push(code % size);
            code /= size;
        }
        let tables = Tables {
            size,
            mul: vals[..(size * size) as usize].to_vec(),
            constants: names
                .iter()
                .cloned()
                .zip(vals[(size * size) as usize..].iter().copied())
                .collect(),
        };
        if tables.satisfies(p) {
            count += 1;
        }
    }
    count
}

pub fn as_tables(m: &FiniteInterpretation) -> Tables {
    let mul = m
        .tables
        .iter()
        .find(|t| t.symbol == "*")
        .map_or_else(Vec::new, |t| t.values.clone());
    Tables {
        size: m.size as u32,
        mul,
        constants: m
            .tables
            .iter()
            .filter(|t| t.arity == 0)
            .map(|t| (t.symbol.clone(), t.values[0]))
            .collect(),
    }
}
