//! Compiling unary Turing machines to Fractran.
//!
//! A configuration `(q, L, H, R)` becomes `l^L · p_q · h^H · r^R`. One machine
//! step is carried out by a burst of Fractran steps: a transition fraction
//! swaps the state prime and raises a move flag, the move fractions shift the
//! tape into the temporary primes `l'`, `h'`, `r'`, and the copy fractions
//! move it back. The leading `1/(p·p')` fractions wipe out numbers that carry
//! more than one flag, state, or head prime.

use std::fmt;
use std::fmt::Write as _;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::fractran::{primes, ExponentVector, FractranProgram};
use crate::turing::{Configuration, Direction, StateId, UnaryTM};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("state `{0}` has a transition to itself; normalize the machine first")]
    SelfTransition(String),
}

/// Primes assigned to the roles of the compiled program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeAllocation {
    pub l: u64,
    pub h: u64,
    pub r: u64,
    pub l2: u64,
    pub h2: u64,
    pub r2: u64,
    /// `m_{L,0}, m_{L,1}`
    pub ml: [u64; 2],
    /// `m_{R,0}, m_{R,1}`
    pub mr: [u64; 2],
    /// `c_0, c_1`
    pub c: [u64; 2],
    /// `p_q`, indexed by state id.
    pub state_primes: Vec<u64>,
}

impl PrimeAllocation {
    /// Consecutive primes: `l h r l' h' r'`, then `m_L0 m_L1 m_R0 m_R1 c_0 c_1`,
    /// then one prime per state in the machine's state order.
    pub fn for_machine(tm: &UnaryTM) -> Self {
        let mut ps = primes();
        let mut next = || ps.next().expect("infinitely many primes");
        let (l, h, r, l2, h2, r2) = (next(), next(), next(), next(), next(), next());
        let ml = [next(), next()];
        let mr = [next(), next()];
        let c = [next(), next()];
        let state_primes = tm.states().iter().map(|_| next()).collect();
        PrimeAllocation { l, h, r, l2, h2, r2, ml, mr, c, state_primes }
    }

    pub fn control_primes(&self) -> [u64; 6] {
        [self.ml[0], self.ml[1], self.mr[0], self.mr[1], self.c[0], self.c[1]]
    }

    pub fn state_prime(&self, q: StateId) -> u64 {
        self.state_primes[q]
    }

    fn move_flag(&self, d: Direction) -> [u64; 2] {
        match d {
            Direction::L => self.ml,
            Direction::R => self.mr,
        }
    }

    /// `(name, prime, role)` rows in allocation order.
    pub fn roles<'a>(&'a self, tm: &'a UnaryTM) -> Vec<(String, u64, String)> {
        let mut rows = vec![
            ("l".to_string(), self.l, "tape left of head".to_string()),
            ("h".to_string(), self.h, "scanned cell".to_string()),
            ("r".to_string(), self.r, "tape right of head".to_string()),
            ("l'".to_string(), self.l2, "temporary tape left".to_string()),
            ("h'".to_string(), self.h2, "temporary scanned cell".to_string()),
            ("r'".to_string(), self.r2, "temporary tape right".to_string()),
        ];
        for x in 0..2 {
            rows.push((format!("m_L{}", x), self.ml[x], "move left".to_string()));
        }
        for x in 0..2 {
            rows.push((format!("m_R{}", x), self.mr[x], "move right".to_string()));
        }
        for x in 0..2 {
            rows.push((format!("c_{}", x), self.c[x], "copy back".to_string()));
        }
        for (q, &p) in self.state_primes.iter().enumerate() {
            rows.push(("p_q".to_string(), p, format!("state {}", tm.state_name(q))));
        }
        rows
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Illegal,
    MoveLeft,
    MoveRight,
    Copy,
    TransHead,
    Term,
    TransBlank,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Illegal => "illegal",
            Family::MoveLeft => "move-left",
            Family::MoveRight => "move-right",
            Family::Copy => "copy",
            Family::TransHead => "trans-head",
            Family::Term => "term",
            Family::TransBlank => "trans-blank",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CompiledProgram {
    pub program: FractranProgram,
    pub allocation: PrimeAllocation,
    pub family_index: Vec<Family>,
    machine: UnaryTM,
}

struct Builder {
    parts: Vec<(ExponentVector, ExponentVector)>,
    families: Vec<Family>,
}

impl Builder {
    fn push(&mut self, family: Family, num: &[(u64, u64)], den: &[(u64, u64)]) {
        self.parts.push((
            ExponentVector::from_pairs(num.iter().copied()),
            ExponentVector::from_pairs(den.iter().copied()),
        ));
        self.families.push(family);
    }

    fn pairs(&mut self, ps: &[u64]) {
        for i in 0..ps.len() {
            for j in i..ps.len() {
                self.push(Family::Illegal, &[], &[(ps[i], 1), (ps[j], 1)]);
            }
        }
    }
}

/// Compiles a machine without self-transitions.
pub fn compile(tm: &UnaryTM) -> Result<CompiledProgram, CompileError> {
    if let Some(((q, _), _)) = tm.transitions().find(|&((q, _), t)| t.next == q) {
        return Err(CompileError::SelfTransition(tm.state_name(q).to_string()));
    }
    let a = PrimeAllocation::for_machine(tm);
    let mut b = Builder { parts: Vec::new(), families: Vec::new() };

    b.pairs(&a.control_primes());
    b.pairs(&a.state_primes);
    b.pairs(&[a.h, a.h2]);

    // Moving splits the tape exponent in half into the temporary primes; the
    // fifth schema hands over to copying.
    for (family, m, (near, near2), (far, far2)) in [
        (Family::MoveLeft, a.ml, (a.l, a.l2), (a.r, a.r2)),
        (Family::MoveRight, a.mr, (a.r, a.r2), (a.l, a.l2)),
    ] {
        for x in 0..2 {
            b.push(family, &[(m[1 - x], 1), (near2, 1)], &[(m[x], 1), (near, 2)]);
        }
        for x in 0..2 {
            b.push(family, &[(m[1 - x], 1), (far2, 2)], &[(m[x], 1), (far, 1)]);
        }
        for x in 0..2 {
            b.push(family, &[(m[1 - x], 1), (far2, 1)], &[(m[x], 1), (a.h2, 1)]);
        }
        for x in 0..2 {
            b.push(family, &[(m[1 - x], 1), (a.h, 1)], &[(m[x], 1), (near, 1)]);
        }
        for x in 0..2 {
            b.push(family, &[(a.c[0], 1)], &[(m[x], 1)]);
        }
    }

    for x in 0..2 {
        b.push(Family::Copy, &[(a.c[1 - x], 1), (a.l, 1)], &[(a.c[x], 1), (a.l2, 1)]);
    }
    for x in 0..2 {
        b.push(Family::Copy, &[(a.c[1 - x], 1), (a.r, 1)], &[(a.c[x], 1), (a.r2, 1)]);
    }
    for x in 0..2 {
        b.push(Family::Copy, &[], &[(a.c[x], 1)]);
    }

    let transition = |q: StateId, symbol: u8| {
        tm.transition(q, symbol).map(|t| {
            let num = vec![
                (a.state_prime(t.next), 1),
                (a.h2, u64::from(t.write)),
                (a.move_flag(t.dir)[0], 1),
            ];
            let mut den = vec![(a.state_prime(q), 1)];
            if symbol == 1 {
                den.push((a.h, 1));
            }
            (num, den)
        })
    };
    let states = 0..tm.states().len();
    for q in states.clone() {
        if let Some((num, den)) = transition(q, 1) {
            b.push(Family::TransHead, &num, &den);
        }
    }
    for q in states.clone() {
        b.push(Family::Term, &[], &[(a.state_prime(q), 1), (a.h, 1)]);
    }
    for q in states {
        if let Some((num, den)) = transition(q, 0) {
            b.push(Family::TransBlank, &num, &den);
        }
    }

    let program = FractranProgram::from_factored(b.parts).expect("compiled fractions are positive");
    Ok(CompiledProgram { program, allocation: a, family_index: b.families, machine: tm.clone() })
}

/// `n_c = l^L · p_q · h^H · r^R`.
///
/// # Panics
/// If `L` or `R` does not fit in a `u64` exponent.
pub fn encode_config(a: &PrimeAllocation, c: &Configuration) -> ExponentVector {
    let exp = |n: &num_bigint::BigUint| n.to_u64().expect("tape exponent fits in u64");
    ExponentVector::from_pairs([
        (a.l, exp(&c.left)),
        (a.state_prime(c.state), 1),
        (a.h, u64::from(c.head)),
        (a.r, exp(&c.right)),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimulationVerdict {
    /// Every machine step was reproduced and the final normal form made the
    /// Fractran run halt.
    Verified { tm_steps: u64, fractran_steps: u64 },
    CounterExample(String),
    /// The machine did not halt within fuel; all steps taken were reproduced.
    Exhausted { tm_steps: u64, fractran_steps: u64 },
}

impl CompiledProgram {
    pub fn machine(&self) -> &UnaryTM {
        &self.machine
    }

    pub fn encode(&self, c: &Configuration) -> ExponentVector {
        encode_config(&self.allocation, c)
    }

    /// Number of fractions per family, in program order.
    pub fn family_counts(&self) -> Vec<(Family, usize)> {
        let mut out: Vec<(Family, usize)> = Vec::new();
        for &f in &self.family_index {
            match out.last_mut() {
                Some((g, n)) if *g == f => *n += 1,
                _ => out.push((f, 1)),
            }
        }
        out
    }

    /// Checks the invariant that holds along every run from an encoded
    /// configuration: at most one control prime, at most one state prime, and
    /// at most one of `h`, `h'`, each with exponent at most 1.
    pub fn check_legal(&self, v: &ExponentVector) -> Result<(), String> {
        let a = &self.allocation;
        let groups: [(&str, Vec<u64>); 3] = [
            ("control", a.control_primes().to_vec()),
            ("state", a.state_primes.clone()),
            ("head", vec![a.h, a.h2]),
        ];
        for (name, group) in groups {
            let total: u64 = group.iter().map(|&p| v.exponent(p)).sum();
            if total > 1 {
                return Err(format!("{} primes occur {} times in {}", name, total, v));
            }
        }
        Ok(())
    }

    /// Upper bound on the Fractran steps one machine step may take from `v`.
    fn macro_bound(&self, v: &ExponentVector) -> u64 {
        let a = &self.allocation;
        4 * (v.exponent(a.l) + v.exponent(a.r)) + 16
    }

    /// Runs machine and compiled program side by side from `c`.
    ///
    /// The Fractran run must pass through the encoding of every successor
    /// configuration, stay legal throughout, and halt once the machine reaches
    /// a normal form.
    pub fn check_simulation(&self, c: &Configuration, fuel: u64) -> SimulationVerdict {
        let tm = &self.machine;
        let mut config = c.clone();
        let mut value = self.encode(c);
        let mut fractran_steps = 0u64;
        for tm_steps in 0..=fuel {
            let next = tm.step(&config);
            if next.is_some() && tm_steps == fuel {
                return SimulationVerdict::Exhausted { tm_steps, fractran_steps };
            }
            let target = next.as_ref().map(|n| self.encode(n));
            let bound = self.macro_bound(&value);
            let mut taken = 0u64;
            loop {
                if let Err(e) = self.check_legal(&value) {
                    return SimulationVerdict::CounterExample(e);
                }
                if target.as_ref() == Some(&value) && taken > 0 {
                    break;
                }
                if taken == bound {
                    return SimulationVerdict::CounterExample(format!(
                        "from {} no {} within {} Fractran steps",
                        tm.show_config(&config),
                        if target.is_some() { "successor encoding" } else { "halt" },
                        bound
                    ));
                }
                match self.program.step_exponents(&value) {
                    Some(v) => value = v,
                    None => {
                        fractran_steps += taken;
                        return match next {
                            None => SimulationVerdict::Verified { tm_steps, fractran_steps },
                            Some(n) => SimulationVerdict::CounterExample(format!(
                                "Fractran halted between {} and {}",
                                tm.show_config(&config),
                                tm.show_config(&n)
                            )),
                        };
                    }
                }
                taken += 1;
            }
            fractran_steps += taken;
            config = next.expect("target reached only when a successor exists");
        }
        unreachable!("loop returns by the fuel check")
    }

    /// Program text: a role header, then one fraction per line tagged with its
    /// family. Parses back with [`crate::fractran::parse_program`].
    pub fn listing(&self) -> String {
        let mut out = String::new();
        let tm = &self.machine;
        let _ = writeln!(
            out,
            "# Fractran program compiled from a {}-state unary Turing machine ({} fractions)",
            tm.states().len(),
            self.program.len()
        );
        for (name, p, role) in self.allocation.roles(tm) {
            let _ = writeln!(out, "# {} {} = {}", name, p, role);
        }
        for (f, family) in self.program.fractions().iter().zip(&self.family_index) {
            let _ = writeln!(out, "{}  # {}", f, family);
        }
        out
    }
}
