//! Two-symbol Turing machines with tapes stored as a pair of naturals.
//!
//! A configuration `(q, L, H, R)` holds the cells left of the head in `L`
//! (bit `i` is cell `-1-i`), the scanned cell in `H`, and the cells right of
//! the head in `R` (bit `i` is cell `1+i`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TuringError {
    #[error("no `start` line")]
    NoStart,
    #[error("line {line}: duplicate transition for ({state}, {symbol})")]
    DuplicateTransition { line: usize, state: String, symbol: u8 },
    #[error("line {line}: bad symbol `{token}` (expected 0 or 1)")]
    BadSymbol { line: usize, token: String },
    #[error("line {line}: unknown direction `{token}` (expected L or R)")]
    UnknownDirection { line: usize, token: String },
    #[error("line {line}: malformed line `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: state `{state}` is not declared")]
    UnknownState { line: usize, state: String },
    #[error("malformed configuration literal `{0}`")]
    BadConfiguration(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    L,
    R,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::L => "L",
            Direction::R => "R",
        })
    }
}

pub type StateId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: StateId,
    pub write: u8,
    pub dir: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnaryTM {
    states: Vec<String>,
    start: StateId,
    delta: BTreeMap<(StateId, u8), Transition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub left: BigUint,
    pub head: u8,
    pub right: BigUint,
}

impl Configuration {
    pub fn new(state: StateId, left: BigUint, head: u8, right: BigUint) -> Self {
        assert!(head <= 1, "head symbol must be 0 or 1");
        Configuration { state, left, head, right }
    }

    /// State `state` on an all-blank tape.
    pub fn blank(state: StateId) -> Self {
        Configuration::new(state, BigUint::zero(), 0, BigUint::zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TmOutcome {
    Halted(u64),
    Exhausted(u64),
}

#[derive(Clone, Debug)]
pub struct TmTrace {
    pub configs: Vec<Configuration>,
    pub outcome: TmOutcome,
}

impl UnaryTM {
    /// Builds a machine from state names and a transition table.
    pub fn new(
        states: Vec<String>,
        start: StateId,
        delta: BTreeMap<(StateId, u8), Transition>,
    ) -> Self {
        assert!(start < states.len(), "start state out of range");
        for ((q, s), t) in &delta {
            assert!(*q < states.len() && t.next < states.len(), "state out of range");
            assert!(*s <= 1 && t.write <= 1, "symbols are 0 or 1");
        }
        UnaryTM { states, start, delta }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn transition(&self, q: StateId, symbol: u8) -> Option<&Transition> {
        self.delta.get(&(q, symbol))
    }

    /// Transitions in `(state, symbol)` order.
    pub fn transitions(&self) -> impl Iterator<Item = ((StateId, u8), &Transition)> + '_ {
        self.delta.iter().map(|(&k, t)| (k, t))
    }

    pub fn has_self_loops(&self) -> bool {
        self.delta.iter().any(|(&(q, _), t)| t.next == q)
    }

    pub fn is_normal_form(&self, c: &Configuration) -> bool {
        self.transition(c.state, c.head).is_none()
    }

    pub fn step(&self, c: &Configuration) -> Option<Configuration> {
        let t = self.transition(c.state, c.head)?;
        let (from, to) = match t.dir {
            Direction::L => (&c.left, &c.right),
            Direction::R => (&c.right, &c.left),
        };
        let (rest, bit) = from.div_rem(&BigUint::from(2u32));
        let pushed = (to << 1u32) + BigUint::from(t.write);
        let head = bit.to_u8().expect("bit");
        Some(match t.dir {
            Direction::L => Configuration::new(t.next, rest, head, pushed),
            Direction::R => Configuration::new(t.next, pushed, head, rest),
        })
    }

    pub fn run(&self, c: &Configuration, fuel: u64) -> TmTrace {
        let mut configs = vec![c.clone()];
        for taken in 0..fuel {
            match self.step(configs.last().expect("non-empty")) {
                Some(next) => configs.push(next),
                None => return TmTrace { configs, outcome: TmOutcome::Halted(taken) },
            }
        }
        let outcome = if self.is_normal_form(configs.last().expect("non-empty")) {
            TmOutcome::Halted(fuel)
        } else {
            TmOutcome::Exhausted(fuel)
        };
        TmTrace { configs, outcome }
    }

    /// Returns an equivalent machine without transitions `q -> q`.
    ///
    /// Machines that already have none are returned unchanged. Otherwise every
    /// state `q` gets a shadow `q#`, and each `δ(q,x) = (p,s,d)` becomes
    /// `δ'(q,x) = (p#,s,d)` and `δ'(q#,x) = (p,s,d)`.
    pub fn normalize_no_self_loops(&self) -> UnaryTM {
        if !self.has_self_loops() {
            return self.clone();
        }
        let n = self.states.len();
        let mut states = self.states.clone();
        states.extend(self.states.iter().map(|s| format!("{}#", s)));
        let mut delta = BTreeMap::new();
        for (&(q, x), t) in &self.delta {
            delta.insert((q, x), Transition { next: t.next + n, ..*t });
            delta.insert((q + n, x), *t);
        }
        UnaryTM { states, start: self.start, delta }
    }

    /// Parses `"<leftbits> <state> <head><rightbits>"`, e.g. `"1 b 1001"`.
    ///
    /// Bits are written in tape order, so the bit nearest the head is the
    /// least significant one on both sides. The left part may be omitted.
    pub fn parse_config(&self, literal: &str) -> Result<Configuration, TuringError> {
        let bad = || TuringError::BadConfiguration(literal.to_string());
        let tokens: Vec<&str> = literal.split_whitespace().collect();
        let (left_bits, state, rest) = match tokens.as_slice() {
            [state, rest] => ("", *state, *rest),
            [left, state, rest] => (*left, *state, *rest),
            _ => return Err(bad()),
        };
        let q = self.state_id(state).ok_or_else(bad)?;
        let bits = |s: &str| -> Result<Vec<u8>, TuringError> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(bad()),
                })
                .collect()
        };
        let left = bits(left_bits)?;
        let rest = bits(rest)?;
        let (&head, right) = rest.split_first().ok_or_else(bad)?;
        let to_nat = |bits: &mut dyn Iterator<Item = &u8>| {
            bits.fold(BigUint::zero(), |acc, &b| (acc << 1u32) + BigUint::from(b))
        };
        // Left string reads most significant first; right string reads least
        // significant first.
        let left = to_nat(&mut left.iter());
        let right = to_nat(&mut right.iter().rev());
        Ok(Configuration::new(q, left, head, right))
    }

    /// Inverse of [`parse_config`](Self::parse_config) with minimal bit strings.
    pub fn show_config(&self, c: &Configuration) -> String {
        let left = if c.left.is_zero() { String::new() } else { c.left.to_str_radix(2) };
        let right: String = if c.right.is_zero() {
            String::new()
        } else {
            c.right.to_str_radix(2).chars().rev().collect()
        };
        if left.is_empty() {
            format!("{} {}{}", self.state_name(c.state), c.head, right)
        } else {
            format!("{} {} {}{}", left, self.state_name(c.state), c.head, right)
        }
    }
}

impl fmt::Display for UnaryTM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", self.states[self.start])?;
        writeln!(f, "states {}", self.states.join(" "))?;
        for (&(q, x), t) in &self.delta {
            writeln!(f, "{} {} -> {} {} {}", self.states[q], x, self.states[t.next], t.write, t.dir)?;
        }
        Ok(())
    }
}

/// Parses the line format
///
/// ```text
/// start a0
/// states a0 a1 b        # optional; fixes the state order
/// a0 0 -> b 1 R
/// ```
///
/// Without a `states` line, states are ordered start first, then by first
/// mention.
pub fn parse_tm(text: &str) -> Result<UnaryTM, TuringError> {
    let mut start: Option<String> = None;
    let mut declared: Option<Vec<String>> = None;
    let mut rules: Vec<(usize, String, u8, String, u8, Direction)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let code = raw.split('#').next().unwrap_or("").trim();
        if code.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = code.split_whitespace().collect();
        let malformed = || TuringError::Malformed { line, text: raw.trim().to_string() };
        match tokens.as_slice() {
            ["start", q] => {
                if start.is_some() {
                    return Err(malformed());
                }
                start = Some(q.to_string());
            }
            ["states", names @ ..] if !names.is_empty() => {
                if declared.is_some() {
                    return Err(malformed());
                }
                declared = Some(names.iter().map(|s| s.to_string()).collect());
            }
            [q, s, "->", q2, s2, d] => {
                let symbol = |tok: &str| match tok {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    _ => Err(TuringError::BadSymbol { line, token: tok.to_string() }),
                };
                let dir = match *d {
                    "L" => Direction::L,
                    "R" => Direction::R,
                    _ => return Err(TuringError::UnknownDirection { line, token: d.to_string() }),
                };
                rules.push((line, q.to_string(), symbol(s)?, q2.to_string(), symbol(s2)?, dir));
            }
            _ => return Err(malformed()),
        }
    }

    let start = start.ok_or(TuringError::NoStart)?;
    let states = match declared {
        Some(list) => {
            for r in &rules {
                if let Some(name) = [&r.1, &r.3].into_iter().find(|n| !list.contains(n)) {
                    return Err(TuringError::UnknownState { line: r.0, state: name.clone() });
                }
            }
            if !list.contains(&start) {
                return Err(TuringError::UnknownState { line: 0, state: start });
            }
            list
        }
        None => {
            let mut list = vec![start.clone()];
            for r in &rules {
                for name in [&r.1, &r.3] {
                    if !list.contains(name) {
                        list.push(name.clone());
                    }
                }
            }
            list
        }
    };
    let id = |name: &str| states.iter().position(|s| s == name).expect("state listed");
    let mut delta = BTreeMap::new();
    for (line, q, s, q2, s2, dir) in rules {
        let key = (id(&q), s);
        if delta.contains_key(&key) {
            return Err(TuringError::DuplicateTransition { line, state: q, symbol: s });
        }
        delta.insert(key, Transition { next: id(&q2), write: s2, dir });
    }
    let start = id(&start);
    Ok(UnaryTM { states, start, delta })
}

/// The machine that flips bits while moving right until it meets two zeros.
pub const FLIPPER_TM: &str = "\
# Moves right converting zeros into ones and vice versa
# until it finds two consecutive zeros.
start a0
states a0 a1 b
a0 0 -> b 1 R
a1 0 -> b 1 R
a0 1 -> a1 0 R
a1 1 -> a0 0 R
b 1 -> a0 0 R
";

pub fn flipper_tm() -> UnaryTM {
    parse_tm(FLIPPER_TM).expect("built-in machine parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// Explicit tape oracle: set of cells holding 1, head at position 0.
    #[derive(Clone, Debug, PartialEq, Eq)]
    struct WordTape {
        state: StateId,
        ones: BTreeSet<i64>,
        pos: i64,
    }

    impl WordTape {
        fn from_config(c: &Configuration) -> Self {
            let mut ones = BTreeSet::new();
            for i in 0..c.left.bits() {
                if c.left.bit(i) {
                    ones.insert(-1 - i as i64);
                }
            }
            if c.head == 1 {
                ones.insert(0);
            }
            for i in 0..c.right.bits() {
                if c.right.bit(i) {
                    ones.insert(1 + i as i64);
                }
            }
            WordTape { state: c.state, ones, pos: 0 }
        }

        fn step(&self, tm: &UnaryTM) -> Option<WordTape> {
            let read = u8::from(self.ones.contains(&self.pos));
            let t = tm.transition(self.state, read)?;
            let mut ones = self.ones.clone();
            if t.write == 1 {
                ones.insert(self.pos);
            } else {
                ones.remove(&self.pos);
            }
            let pos = match t.dir {
                Direction::L => self.pos - 1,
                Direction::R => self.pos + 1,
            };
            Some(WordTape { state: t.next, ones, pos })
        }

        /// Re-centers so the head sits at cell 0.
        fn normalized(&self) -> WordTape {
            WordTape {
                state: self.state,
                ones: self.ones.iter().map(|c| c - self.pos).collect(),
                pos: 0,
            }
        }
    }

    #[test]
    fn parses_flipper() {
        let tm = flipper_tm();
        assert_eq!(tm.transitions().count(), 5);
        assert_eq!(tm.states(), ["a0", "a1", "b"]);
        assert_eq!(tm.start(), 0);
        assert!(!tm.has_self_loops());
        assert_eq!(parse_tm(&tm.to_string()).unwrap(), tm);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_tm("q 0 -> q 1 R").unwrap_err(), TuringError::NoStart);
        assert!(matches!(
            parse_tm("start q\nq 0 -> p 1 R\nq 0 -> q 0 L").unwrap_err(),
            TuringError::DuplicateTransition { line: 3, .. }
        ));
        assert!(matches!(
            parse_tm("start q\nq 2 -> p 1 R").unwrap_err(),
            TuringError::BadSymbol { .. }
        ));
        assert!(matches!(
            parse_tm("start q\nq 0 -> p 1 U").unwrap_err(),
            TuringError::UnknownDirection { .. }
        ));
        assert!(matches!(
            parse_tm("start q\nstates q\nq 0 -> p 1 R").unwrap_err(),
            TuringError::UnknownState { .. }
        ));
        assert!(matches!(parse_tm("start q\nnonsense").unwrap_err(), TuringError::Malformed { .. }));
    }

    #[test]
    fn empty_machine_halts_everywhere() {
        let tm = parse_tm("start q").unwrap();
        assert_eq!(tm.states().len(), 1);
        let c = Configuration::new(0, big(5), 1, big(3));
        assert_eq!(tm.step(&c), None);
        assert_eq!(tm.run(&c, 10).outcome, TmOutcome::Halted(0));
        assert_eq!(tm.normalize_no_self_loops(), tm);
    }

    #[test]
    fn right_move_arithmetic() {
        let tm = parse_tm("start q\nq 0 -> p 1 R").unwrap();
        let next = tm.step(&Configuration::blank(0)).unwrap();
        assert_eq!(next, Configuration::new(1, big(1), 0, big(0)));
    }

    #[test]
    fn config_literals() {
        let tm = flipper_tm();
        let c = tm.parse_config("1 b 1001").unwrap();
        assert_eq!(c, Configuration::new(2, big(1), 1, big(4)));
        assert_eq!(tm.show_config(&c), "1 b 1001");
        let c = tm.parse_config("10 a0 001").unwrap();
        assert_eq!(c, Configuration::new(0, big(2), 0, big(2)));
        assert_eq!(tm.parse_config("a1 0").unwrap(), Configuration::blank(1));
        assert!(tm.parse_config("1 z 1").is_err());
        assert!(tm.parse_config("1 b").is_err());
        assert!(tm.parse_config("12 b 1").is_err());
    }

    #[test]
    fn flipper_worked_trace() {
        let tm = flipper_tm();
        let trace = tm.run(&tm.parse_config("1 b 1001").unwrap(), 100);
        let shown: Vec<String> = trace.configs.iter().map(|c| tm.show_config(c)).collect();
        assert_eq!(shown, ["1 b 1001", "10 a0 001", "101 b 01"]);
        assert_eq!(trace.outcome, TmOutcome::Halted(2));
    }

    #[test]
    fn runner_never_halts() {
        let tm = parse_tm("start q\nq 0 -> p 0 R\np 0 -> q 0 R").unwrap();
        assert_eq!(tm.run(&Configuration::blank(0), 50).outcome, TmOutcome::Exhausted(50));
    }

    #[test]
    fn normalization_shadow_states() {
        let tm = parse_tm("start q\nq 0 -> q 1 R").unwrap();
        let n = tm.normalize_no_self_loops();
        assert_eq!(n.states(), ["q", "q#"]);
        assert_eq!(n.transition(0, 0), Some(&Transition { next: 1, write: 1, dir: Direction::R }));
        assert_eq!(n.transition(1, 0), Some(&Transition { next: 0, write: 1, dir: Direction::R }));
        assert!(!n.has_self_loops());
        assert_eq!(n.normalize_no_self_loops(), n);
        assert_eq!(flipper_tm().normalize_no_self_loops(), flipper_tm());
    }

    fn random_tm(seed: u64) -> UnaryTM {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3usize);
        let mut delta = BTreeMap::new();
        for q in 0..n {
            for x in 0..2u8 {
                if rng.gen_bool(0.8) {
                    let dir = if rng.gen_bool(0.5) { Direction::L } else { Direction::R };
                    delta.insert((q, x), Transition { next: rng.gen_range(0..n), write: rng.gen_range(0..2), dir });
                }
            }
        }
        UnaryTM::new((0..n).map(|i| format!("s{}", i)).collect(), 0, delta)
    }

    fn random_config(seed: u64, states: usize) -> Configuration {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        Configuration::new(
            rng.gen_range(0..states),
            big(rng.gen_range(0..256)),
            rng.gen_range(0..2),
            big(rng.gen_range(0..256)),
        )
    }

    #[test]
    fn arithmetic_tape_matches_word_tape() {
        for seed in 0..300 {
            let tm = random_tm(seed);
            let c = random_config(seed, tm.states().len());
            let mut arith = c.clone();
            let mut word = WordTape::from_config(&c);
            for _ in 0..40 {
                let a = tm.step(&arith);
                let w = word.step(&tm);
                assert_eq!(a.is_some(), w.is_some(), "seed {}", seed);
                let (Some(a), Some(w)) = (a, w) else { break };
                assert_eq!(WordTape::from_config(&a), w.normalized(), "seed {}", seed);
                arith = a;
                word = w;
            }
        }
    }

    #[test]
    fn normalization_preserves_behavior() {
        for seed in 0..300 {
            let tm = random_tm(seed);
            let norm = tm.normalize_no_self_loops();
            assert!(!norm.has_self_loops());
            let n = tm.states().len();
            let c = random_config(seed, n);
            let a = tm.run(&c, 60);
            let b = norm.run(&c, 60);
            assert_eq!(a.outcome, b.outcome, "seed {}", seed);
            assert_eq!(a.configs.len(), b.configs.len());
            for (x, y) in a.configs.iter().zip(&b.configs) {
                assert_eq!((&x.left, x.head, &x.right), (&y.left, y.head, &y.right));
                let base = if norm.states().len() == n { y.state } else { y.state % n };
                assert_eq!(x.state, base);
            }
        }
    }

    #[test]
    fn normal_form_iff_undefined() {
        let tm = flipper_tm();
        for q in 0..3 {
            for h in 0..2u8 {
                let c = Configuration::new(q, big(3), h, big(1));
                assert_eq!(tm.is_normal_form(&c), tm.step(&c).is_none());
            }
        }
    }
}
