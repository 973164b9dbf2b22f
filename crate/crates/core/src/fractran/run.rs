use num_bigint::BigUint;
use num_traits::Zero;

use super::factor::ExponentVector;
use super::program::FractranProgram;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// No fraction applied after this many steps.
    Halted(u64),
    /// The step budget ran out.
    FuelExhausted(u64),
}

impl Outcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, Outcome::Halted(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// `n_0, n_1, ...`
    pub values: Vec<BigUint>,
    /// `rules[i]` is the fraction index used for `n_i -> n_{i+1}`.
    pub rules: Vec<usize>,
    pub outcome: Outcome,
}

impl FractranProgram {
    /// One step on a plain big integer, with the index of the fraction used.
    pub fn step_with_rule(&self, n: &BigUint) -> Option<(BigUint, usize)> {
        assert!(!n.is_zero(), "Fractran values are positive");
        self.fractions().iter().enumerate().find_map(|(i, f)| {
            let prod = n * f.num();
            let (q, r) = num_integer::Integer::div_rem(&prod, f.den());
            r.is_zero().then_some((q, i))
        })
    }

    /// `f_P(n)`, or `None` where undefined.
    pub fn step(&self, n: &BigUint) -> Option<BigUint> {
        self.step_with_rule(n).map(|(v, _)| v)
    }

    /// Exponent-vector step: the fraction applies iff `n·p_i` dominates `q_i`
    /// componentwise.
    pub fn step_exponents_with_rule(&self, n: &ExponentVector) -> Option<(ExponentVector, usize)> {
        (0..self.len()).find_map(|i| {
            let den = self.factored_den(i);
            let num = self.factored_num(i);
            let fits = den.iter().all(|(p, e)| n.exponent(p) + num.exponent(p) >= e);
            fits.then(|| {
                let mut out = n.clone();
                for (p, e) in num.iter() {
                    out.add(p, e);
                }
                for (p, e) in den.iter() {
                    let have = out.exponent(p);
                    out.set(p, have - e);
                }
                (out, i)
            })
        })
    }

    pub fn step_exponents(&self, n: &ExponentVector) -> Option<ExponentVector> {
        self.step_exponents_with_rule(n).map(|(v, _)| v)
    }

    /// Exact traced run on big integers.
    pub fn run(&self, n0: &BigUint, fuel: u64) -> Trace {
        let mut values = vec![n0.clone()];
        let mut rules = Vec::new();
        for taken in 0..fuel {
            let cur = values.last().expect("non-empty");
            match self.step_with_rule(cur) {
                Some((next, rule)) => {
                    values.push(next);
                    rules.push(rule);
                }
                None => {
                    return Trace { values, rules, outcome: Outcome::Halted(taken) };
                }
            }
        }
        let halted_now = self.step(values.last().expect("non-empty")).is_none();
        let outcome = if halted_now { Outcome::Halted(fuel) } else { Outcome::FuelExhausted(fuel) };
        Trace { values, rules, outcome }
    }

    /// Successive values from `start` in exponent-vector form, `start` first.
    pub fn orbit(&self, start: ExponentVector) -> Orbit<'_> {
        Orbit { program: self, next: Some(start) }
    }

    /// Runs on exponent vectors without keeping the values.
    pub fn halts_exponents(&self, n: &ExponentVector, fuel: u64) -> Outcome {
        let mut cur = n.clone();
        for taken in 0..fuel {
            match self.step_exponents(&cur) {
                Some(next) => cur = next,
                None => return Outcome::Halted(taken),
            }
        }
        if self.step_exponents(&cur).is_none() {
            Outcome::Halted(fuel)
        } else {
            Outcome::FuelExhausted(fuel)
        }
    }

    pub fn halts(&self, n: &BigUint, fuel: u64) -> Outcome {
        let v = super::factor::factorize(n).expect("positive desk-scale input");
        self.halts_exponents(&v, fuel)
    }

    /// True iff some fraction has denominator 1 (as written).
    pub fn is_trivially_immortal(&self) -> bool {
        self.fractions().iter().any(|f| f.is_integer())
    }

    /// Exponents `e` with `n_i = 2^e` for `i >= 1`, scanning at most `limit` steps.
    pub fn powers_of_two_exponents(&self, n0: &BigUint, limit: u64) -> Vec<u64> {
        self.powers_of_two_exponents_until(n0, limit, usize::MAX)
    }

    /// As [`powers_of_two_exponents`](Self::powers_of_two_exponents), stopping
    /// once `count` exponents have been found.
    pub fn powers_of_two_exponents_until(&self, n0: &BigUint, limit: u64, count: usize) -> Vec<u64> {
        let start = super::factor::factorize(n0).expect("positive desk-scale input");
        let mut found = Vec::new();
        if count == 0 {
            return found;
        }
        let limit = usize::try_from(limit).unwrap_or(usize::MAX);
        for value in self.orbit(start).skip(1).take(limit) {
            if let Some(e) = value.power_of(2) {
                found.push(e);
                if found.len() == count {
                    break;
                }
            }
        }
        found
    }
}

pub struct Orbit<'a> {
    program: &'a FractranProgram,
    next: Option<ExponentVector>,
}

impl Iterator for Orbit<'_> {
    type Item = ExponentVector;

    fn next(&mut self) -> Option<ExponentVector> {
        let cur = self.next.take()?;
        self.next = self.program.step_exponents(&cur);
        Some(cur)
    }
}
