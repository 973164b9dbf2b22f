#![allow(dead_code)]

use fractran::fractran::{Fraction, FractranProgram};
use std::collections::BTreeMap;

use fractran::turing::{Configuration, Direction, Transition, UnaryTM};
use num_bigint::BigUint;
use rand::Rng;

/// A program with 1..=max_len fractions, parts in 1..=max_part.
pub fn random_program<R: Rng>(rng: &mut R, max_len: usize, max_part: u64) -> FractranProgram {
    let len = rng.gen_range(1..=max_len);
    let fractions = (0..len)
        .map(|_| {
            Fraction::from_u64(rng.gen_range(1..=max_part), rng.gen_range(1..=max_part)).unwrap()
        })
        .collect();
    FractranProgram::new(fractions).unwrap()
}

/// A machine with up to `max_states` states, each transition present with
/// probability 3/4, normalized so that it compiles.
pub fn random_machine<R: Rng>(rng: &mut R, max_states: usize) -> UnaryTM {
    let k = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..k).map(|i| format!("q{}", i)).collect();
    let mut delta = BTreeMap::new();
    for q in 0..k {
        for x in 0..2u8 {
            if rng.gen_bool(0.75) {
                let dir = if rng.gen_bool(0.5) { Direction::L } else { Direction::R };
                let t = Transition { next: rng.gen_range(0..k), write: rng.gen_range(0..2u8), dir };
                delta.insert((q, x), t);
            }
        }
    }
    UnaryTM::new(states, 0, delta).normalize_no_self_loops()
}

pub fn random_config<R: Rng>(rng: &mut R, tm: &UnaryTM, max_side: u64) -> Configuration {
    Configuration::new(
        rng.gen_range(0..tm.states().len()),
        BigUint::from(rng.gen_range(0..max_side)),
        rng.gen_range(0..2u8),
        BigUint::from(rng.gen_range(0..max_side)),
    )
}
