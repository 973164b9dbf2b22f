use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::factor::{factorize, ExponentVector};
use super::FractranError;

/// Residue tables are built up front only when `d` is at most this large;
/// beyond it entries are computed on demand.
pub const EAGER_TABLE_LIMIT: u64 = 1 << 16;

/// A positive fraction kept exactly as written (never reduced).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: BigUint,
    den: BigUint,
}

impl Fraction {
    pub fn new(num: BigUint, den: BigUint) -> Result<Self, FractranError> {
        if num.is_zero() || den.is_zero() {
            return Err(FractranError::ZeroPart(format!("{}/{}", num, den)));
        }
        Ok(Fraction { num, den })
    }

    pub fn from_u64(num: u64, den: u64) -> Result<Self, FractranError> {
        Fraction::new(BigUint::from(num), BigUint::from(den))
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = FractranError;

    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let parse_part = |s: &str| -> Result<BigUint, FractranError> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(FractranError::Malformed(token.to_string()));
            }
            BigUint::from_str(s).map_err(|_| FractranError::Malformed(token.to_string()))
        };
        let (num, den) = match token.split_once('/') {
            Some((a, b)) => (parse_part(a)?, parse_part(b)?),
            None => (parse_part(token)?, BigUint::one()),
        };
        Fraction::new(num, den)
    }
}

/// One row of the residue table: for a class `n` in `1..=d`, the first
/// fraction `i` with `n·p_i/q_i` integral, `multiplier = p_i·(d/q_i)` and
/// `offset = n·p_i/q_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueEntry {
    pub multiplier: BigUint,
    pub offset: BigUint,
    pub rule: usize,
}

#[derive(Clone, Debug)]
struct FactoredFraction {
    num: ExponentVector,
    den: ExponentVector,
    /// `q / gcd(p, q)`: `n·p/q` is integral iff this divides `n`.
    gate: BigUint,
}

/// An ordered, non-empty list of fractions together with its lcm of
/// denominators and residue table.
#[derive(Clone, Debug)]
pub struct FractranProgram {
    fractions: Vec<Fraction>,
    factored: Vec<FactoredFraction>,
    lcm_den: BigUint,
    table: Option<Vec<Option<ResidueEntry>>>,
}

impl FractranProgram {
    pub fn new(fractions: Vec<Fraction>) -> Result<Self, FractranError> {
        let factored = fractions
            .iter()
            .map(|f| Ok((factorize(f.num())?, factorize(f.den())?)))
            .collect::<Result<Vec<_>, FractranError>>()?;
        Self::with_factors(fractions, factored)
    }

    /// Builds a program whose numerator/denominator factorizations are
    /// already known, skipping trial division.
    pub fn from_factored(
        parts: Vec<(ExponentVector, ExponentVector)>,
    ) -> Result<Self, FractranError> {
        let fractions = parts
            .iter()
            .map(|(n, d)| Fraction::new(n.to_biguint(), d.to_biguint()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_factors(fractions, parts)
    }

    fn with_factors(
        fractions: Vec<Fraction>,
        parts: Vec<(ExponentVector, ExponentVector)>,
    ) -> Result<Self, FractranError> {
        if fractions.is_empty() {
            return Err(FractranError::EmptyProgram);
        }
        let lcm_den = fractions
            .iter()
            .fold(BigUint::one(), |acc, f| acc.lcm(f.den()));
        let factored = fractions
            .iter()
            .zip(parts)
            .map(|(f, (num, den))| FactoredFraction {
                gate: f.den() / f.num().gcd(f.den()),
                num,
                den,
            })
            .collect();
        let mut program = FractranProgram {
            fractions,
            factored,
            lcm_den,
            table: None,
        };
        if let Some(d) = program.lcm_den.to_u64().filter(|&d| d <= EAGER_TABLE_LIMIT) {
            let table = (1..=d)
                .map(|n| program.compute_entry(&BigUint::from(n)))
                .collect();
            program.table = Some(table);
        }
        Ok(program)
    }

    pub fn fractions(&self) -> &[Fraction] {
        &self.fractions
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    /// The lcm of all denominators, `d`.
    pub fn lcm_den(&self) -> &BigUint {
        &self.lcm_den
    }

    pub fn has_eager_table(&self) -> bool {
        self.table.is_some()
    }

    pub(crate) fn factored_num(&self, i: usize) -> &ExponentVector {
        &self.factored[i].num
    }

    pub(crate) fn factored_den(&self, i: usize) -> &ExponentVector {
        &self.factored[i].den
    }

    /// Index of the first fraction making `n·p_i/q_i` integral.
    pub fn first_applicable(&self, n: &BigUint) -> Option<usize> {
        self.factored
            .iter()
            .position(|f| (n % &f.gate).is_zero())
    }

    /// Residue table entry for class `n ∈ 1..=d`; `None` if no fraction applies.
    ///
    /// # Panics
    /// If `n` is outside `1..=d`.
    pub fn residue_entry(&self, n: &BigUint) -> Option<ResidueEntry> {
        assert!(
            !n.is_zero() && n <= &self.lcm_den,
            "residue class {} outside 1..={}",
            n,
            self.lcm_den
        );
        match &self.table {
            Some(table) => {
                let idx = n.to_usize().expect("eager table index") - 1;
                table[idx].clone()
            }
            None => self.compute_entry(n),
        }
    }

    fn compute_entry(&self, n: &BigUint) -> Option<ResidueEntry> {
        let rule = self.first_applicable(n)?;
        let f = &self.fractions[rule];
        Some(ResidueEntry {
            multiplier: f.num() * (&self.lcm_den / f.den()),
            offset: n * f.num() / f.den(),
            rule,
        })
    }

    /// Whether fraction `i` is the first applicable one for some residue class.
    pub fn fraction_is_reachable(&self, i: usize) -> bool {
        // Multiples of gate_i escape every earlier fraction iff no earlier
        // gate divides gate_i; n = gate_i is then a witness inside 1..=d.
        let gate = &self.factored[i].gate;
        self.factored[..i]
            .iter()
            .all(|g| !(gate % &g.gate).is_zero())
    }

    /// Whether some residue class has no applicable fraction.
    pub fn has_undefined_class(&self) -> bool {
        // Class 1 is undefined exactly when no gate equals 1, and a gate of 1
        // makes every class defined.
        self.factored.iter().all(|f| !f.gate.is_one())
    }
}

impl fmt::Display for FractranProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fractions.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for FractranProgram {
    type Err = FractranError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_program(s)
    }
}

/// Parses whitespace-separated `a/b` or `a` tokens; `#` comments run to end of line.
pub fn parse_program(text: &str) -> Result<FractranProgram, FractranError> {
    let mut fractions = Vec::new();
    for line in text.lines() {
        let code = line.split('#').next().unwrap_or("");
        for token in code.split_whitespace() {
            fractions.push(token.parse::<Fraction>()?);
        }
    }
    FractranProgram::new(fractions)
}

pub const PRIMEGAME: &str =
    "17/91 78/85 19/51 23/38 29/33 77/29 95/23 77/19 1/17 11/13 13/11 15/14 15/2 55/1";

pub fn primegame() -> FractranProgram {
    parse_program(PRIMEGAME).expect("PRIMEGAME parses")
}
