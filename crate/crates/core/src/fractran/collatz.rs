//! A program viewed as a Collatz function modulo the lcm of its denominators.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::program::FractranProgram;

/// Branch `a·n + b` of a Collatz function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub a: BigRational,
    pub b: BigRational,
}

impl Branch {
    pub fn apply(&self, n: &BigUint) -> BigRational {
        let n = BigRational::from_integer(BigInt::from(n.clone()));
        &self.a * n + &self.b
    }
}

/// `f'_P`: `f_P` with undefined replaced by 1, written as one linear branch
/// per residue modulo `d`.
///
/// Branches are derived on demand since `d` is frequently far too large to
/// list (PRIMEGAME has `d = 6469693230`).
#[derive(Clone, Debug)]
pub struct CollatzForm<'a> {
    program: &'a FractranProgram,
}

impl<'a> CollatzForm<'a> {
    pub fn new(program: &'a FractranProgram) -> Self {
        CollatzForm { program }
    }

    pub fn modulus(&self) -> &BigUint {
        self.program.lcm_den()
    }

    /// Branch for residue `j ∈ 0..p`.
    pub fn branch(&self, j: &BigUint) -> Branch {
        let p = self.modulus();
        assert!(j < p, "residue {} out of range 0..{}", j, p);
        let class = if j.is_zero() { p.clone() } else { j.clone() };
        match self.program.residue_entry(&class) {
            Some(entry) => {
                let f = &self.program.fractions()[entry.rule];
                Branch {
                    a: BigRational::new(BigInt::from(f.num().clone()), BigInt::from(f.den().clone())),
                    b: BigRational::zero(),
                }
            }
            None => Branch { a: BigRational::zero(), b: BigRational::one() },
        }
    }

    /// All branches, `j = 0..p`; `None` when `p` does not fit in memory.
    pub fn branches(&self) -> Option<Vec<Branch>> {
        let p = self.modulus().to_u64().filter(|&p| p <= 1 << 20)?;
        Some((0..p).map(|j| self.branch(&BigUint::from(j))).collect())
    }

    /// Evaluates the form at `n >= 1`.
    pub fn eval(&self, n: &BigUint) -> BigUint {
        let value = self.branch(&(n % self.modulus())).apply(n);
        assert!(value.is_integer(), "Collatz form produced a non-integer");
        value
            .to_integer()
            .to_biguint()
            .expect("Collatz form values are positive")
    }
}

impl FractranProgram {
    pub fn collatz_form(&self) -> CollatzForm<'_> {
        CollatzForm::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractran::program::{parse_program, primegame};

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn three_halves() {
        let p = parse_program("3/2").unwrap();
        let form = p.collatz_form();
        assert_eq!(form.modulus(), &BigUint::from(2u32));
        let branches = form.branches().unwrap();
        assert_eq!(branches[0], Branch { a: ratio(3, 2), b: ratio(0, 1) });
        assert_eq!(branches[1], Branch { a: ratio(0, 1), b: ratio(1, 1) });
    }

    #[test]
    fn integer_fraction() {
        let p = parse_program("55/1").unwrap();
        let branches = p.collatz_form().branches().unwrap();
        assert_eq!(branches, [Branch { a: ratio(55, 1), b: ratio(0, 1) }]);
    }

    #[test]
    fn primegame_spot_check() {
        let p = primegame();
        let form = p.collatz_form();
        let expected: u64 = [91u64, 85, 51, 38, 33, 29, 23, 19, 17, 13, 11, 14, 2, 1]
            .iter()
            .fold(1, |acc, &x| num_integer::lcm(acc, x));
        assert_eq!(form.modulus(), &BigUint::from(expected));
        assert!(form.branches().is_none());
        assert_eq!(form.branch(&BigUint::from(2u32)), Branch { a: ratio(15, 2), b: ratio(0, 1) });
    }

    #[test]
    fn form_matches_interpreter() {
        for src in ["3/2", "55/1", "1/2", "2/4 5/3", "1/6 5/2 7/3", "17/91 78/85 19/51 23/38 29/33 77/29 95/23 77/19 1/17 11/13 13/11 15/14 15/2 55/1"] {
            let p = parse_program(src).unwrap();
            let form = p.collatz_form();
            for n in 1..=1000u64 {
                let n = BigUint::from(n);
                let expected = p.step(&n).unwrap_or_else(BigUint::one);
                assert_eq!(form.eval(&n), expected, "{} at {}", src, n);
            }
        }
    }

    #[test]
    fn branch_shape() {
        let p = parse_program("1/6 5/2 7/3 2/4").unwrap();
        for b in p.collatz_form().branches().unwrap() {
            assert!(b.b.is_zero() || (b.a.is_zero() && b.b.is_one()));
        }
    }
}
