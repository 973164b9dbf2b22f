use std::fmt;

use rayon::prelude::*;

use super::engine::{Evaluation, Evaluator};
use super::spec::StreamSpec;
use super::term::Term;
use super::StreamError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeEntry {
    Produced(u64),
    Exhausted(u64),
}

/// Outcome of evaluating elements `0..N` independently.
///
/// An exhausted entry only means "not produced within fuel"; it never claims
/// the element is undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub entries: Vec<ProbeEntry>,
}

impl ProbeReport {
    /// Largest `N` with elements `0..N` all produced.
    pub fn productive_up_to(&self) -> usize {
        self.entries
            .iter()
            .take_while(|e| matches!(e, ProbeEntry::Produced(_)))
            .count()
    }

    pub fn all_produced(&self) -> bool {
        self.productive_up_to() == self.entries.len()
    }
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, e) in self.entries.iter().enumerate() {
            match e {
                ProbeEntry::Produced(k) => writeln!(f, "{}: produced steps={}", n, k)?,
                ProbeEntry::Exhausted(fuel) => writeln!(f, "{}: exhausted fuel={}", n, fuel)?,
            }
        }
        let produced = self
            .entries
            .iter()
            .filter(|e| matches!(e, ProbeEntry::Produced(_)))
            .count();
        writeln!(
            f,
            "summary: produced {}/{} productive_up_to={}",
            produced,
            self.entries.len(),
            self.productive_up_to()
        )
    }
}

/// Evaluates elements `0..count` of the root, each with its own `fuel`,
/// in parallel. Entries are ordered by index.
pub fn probe_productivity(spec: &StreamSpec, count: u64, fuel: u64) -> Result<ProbeReport, StreamError> {
    if fuel == 0 {
        return Err(StreamError::FuelZero);
    }
    let entries = (0..count)
        .into_par_iter()
        .map(|n| {
            let eval = Evaluator::new(spec)?.element_with(&Term::Root, n, fuel, &mut |_, _| {})?;
            Ok(match eval {
                Evaluation::Produced(k) => ProbeEntry::Produced(k),
                Evaluation::Exhausted { fuel, .. } => ProbeEntry::Exhausted(fuel),
            })
        })
        .collect::<Result<Vec<_>, StreamError>>()?;
    Ok(ProbeReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractran::parse_program;
    use crate::stream::{collatz_spec, induce_spec};

    #[test]
    fn halving_is_productive() {
        let s = induce_spec(&parse_program("1/2").unwrap());
        let r = probe_productivity(&s, 10, 100_000).unwrap();
        assert!(r.all_produced());
        assert_eq!(r.productive_up_to(), 10);
    }

    #[test]
    fn immortal_is_not() {
        let s = induce_spec(&parse_program("55/1").unwrap());
        let r = probe_productivity(&s, 5, 10_000).unwrap();
        assert_eq!(r.entries, vec![ProbeEntry::Exhausted(10_000); 5]);
        assert_eq!(r.productive_up_to(), 0);
        assert!(r.to_string().ends_with("summary: produced 0/5 productive_up_to=0\n"));
    }

    #[test]
    fn report_lines() {
        let s = collatz_spec();
        let r = probe_productivity(&s, 2, 1000).unwrap();
        let text = r.to_string();
        assert!(text.starts_with("0: produced steps=2\n1: produced steps="));
    }

    #[test]
    fn partial_productivity() {
        // Halts exactly on numbers coprime to 6.
        let p = parse_program("3/2 2/3").unwrap();
        let r = probe_productivity(&induce_spec(&p), 12, 5_000).unwrap();
        for (n, e) in r.entries.iter().enumerate() {
            let coprime = num_integer::gcd(n as u64 + 1, 6) == 1;
            assert_eq!(matches!(e, ProbeEntry::Produced(_)), coprime, "element {}", n);
        }
        assert_eq!(r.productive_up_to(), 1);
    }
}
