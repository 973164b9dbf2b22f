//! Exponent-vector representation of positive naturals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::FractranError;

/// A positive natural stored by its prime factorization.
///
/// Keys are primes, values are exponents `>= 1`; absent primes have exponent
/// zero. The empty vector is the number 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    entries: BTreeMap<u64, u64>,
}

impl ExponentVector {
    pub fn one() -> Self {
        Self::default()
    }

    /// `p^e`. The caller guarantees `p` is prime.
    pub fn prime_power(p: u64, e: u64) -> Self {
        let mut v = Self::one();
        v.set(p, e);
        v
    }

    /// Builds a vector from `(prime, exponent)` pairs, summing repeated primes.
    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Self {
        let mut v = Self::one();
        for (p, e) in pairs {
            v.add(p, e);
        }
        v
    }

    pub fn exponent(&self, p: u64) -> u64 {
        self.entries.get(&p).copied().unwrap_or(0)
    }

    pub fn set(&mut self, p: u64, e: u64) {
        if e == 0 {
            self.entries.remove(&p);
        } else {
            self.entries.insert(p, e);
        }
    }

    pub fn add(&mut self, p: u64, e: u64) {
        if e > 0 {
            *self.entries.entry(p).or_insert(0) += e;
        }
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterates `(prime, exponent)` in ascending prime order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.entries.iter().map(|(&p, &e)| (p, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Some(e)` when the represented number is exactly `p^e` (including `p^0 = 1`).
    pub fn power_of(&self, p: u64) -> Option<u64> {
        match self.entries.len() {
            0 => Some(0),
            1 => self.entries.get(&p).copied(),
            _ => None,
        }
    }

    pub fn mul(&self, other: &ExponentVector) -> ExponentVector {
        let mut out = self.clone();
        for (p, e) in other.iter() {
            out.add(p, e);
        }
        out
    }

    /// Componentwise `self >= other`, i.e. `other` divides `self`.
    pub fn divisible_by(&self, other: &ExponentVector) -> bool {
        other.iter().all(|(p, e)| self.exponent(p) >= e)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &ExponentVector) -> Option<ExponentVector> {
        if !self.divisible_by(other) {
            return None;
        }
        let mut out = self.clone();
        for (p, e) in other.iter() {
            let have = out.exponent(p);
            out.set(p, have - e);
        }
        Some(out)
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in self.iter() {
            acc *= num_traits::pow::pow(BigUint::from(p), e as usize);
        }
        acc
    }

    /// Renders as `p^e·p^e`, or `1` for the empty product.
    pub fn factored_string(&self) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.iter()
            .map(|(p, e)| format!("{}^{}", p, e))
            .collect::<Vec<_>>()
            .join("·")
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.factored_string())
    }
}

/// Factors `n` by trial division.
///
/// Desk-scale inputs only: a cofactor that exceeds `u64` after all divisors up
/// to `2^32` have been tried is rejected.
pub fn factorize(n: &BigUint) -> Result<ExponentVector, FractranError> {
    if n.is_zero() {
        return Err(FractranError::ZeroInput);
    }
    let mut out = ExponentVector::one();
    let mut rest = n.clone();
    let mut divisor: u64 = 2;
    // Big phase: divide until the cofactor fits in a machine word.
    while rest.to_u64().is_none() {
        if divisor > u32::MAX as u64 {
            return Err(FractranError::FactorTooLarge(n.to_string()));
        }
        let big_div = BigUint::from(divisor);
        loop {
            let (q, r) = rest.div_rem(&big_div);
            if !r.is_zero() {
                break;
            }
            rest = q;
            out.add(divisor, 1);
        }
        divisor = next_candidate(divisor);
    }
    let mut rest = rest.to_u64().expect("fits after big phase");
    while rest > 1 {
        if divisor.saturating_mul(divisor) > rest {
            out.add(rest, 1);
            break;
        }
        while rest % divisor == 0 {
            rest /= divisor;
            out.add(divisor, 1);
        }
        divisor = next_candidate(divisor);
    }
    Ok(out)
}

pub fn factorize_u64(n: u64) -> Result<ExponentVector, FractranError> {
    factorize(&BigUint::from(n))
}

fn next_candidate(d: u64) -> u64 {
    if d == 2 {
        3
    } else {
        d + 2
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The primes in ascending order, starting at 2.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}
