use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::term::{unify, Symbol, Term};
use super::StreamError;
use crate::fractran::FractranProgram;

/// Largest `tail^k` or `zip_d` that [`StreamSpec::rules`] will write out.
pub const RENDER_LIMIT: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Rule { lhs, rhs }
    }

    pub fn is_left_linear(&self) -> bool {
        let vars = self.lhs.variables();
        let unique: BTreeSet<&str> = vars.iter().copied().collect();
        unique.len() == vars.len()
    }
}

#[derive(Clone, Debug)]
enum RootRule {
    Explicit(Term),
    Induced(Arc<FractranProgram>),
}

/// A lazy stream specification: one rule for the root constant plus the
/// `head`, `tail`, `mod_k` and `zip_d` rules.
#[derive(Clone, Debug)]
pub struct StreamSpec {
    root_name: String,
    root: RootRule,
    zip_arity: BigUint,
    mod_arities: BTreeSet<BigUint>,
}

impl StreamSpec {
    /// A specification `root -> rhs` with the LSF rules for the `mod`/`zip`
    /// symbols occurring in `rhs`.
    pub fn explicit(root_name: &str, rhs: Term) -> Result<Self, StreamError> {
        if !rhs.is_ground() || !rhs.well_sorted() || rhs.sort() != Some(super::term::Sort::Stream) {
            return Err(StreamError::IllFormed(rhs.render(root_name)));
        }
        let mut zips = BTreeSet::new();
        let mut mods = BTreeSet::new();
        for (_, t) in rhs.positions() {
            match t {
                Term::Zip(args) => {
                    zips.insert(BigUint::from(args.len()));
                }
                Term::Mod(k, _) => {
                    if k.is_zero() {
                        return Err(StreamError::IllFormed(rhs.render(root_name)));
                    }
                    mods.insert(k.clone());
                }
                _ => {}
            }
        }
        if zips.len() > 1 {
            return Err(StreamError::IllFormed(format!(
                "{}: more than one zip arity",
                rhs.render(root_name)
            )));
        }
        let zip_arity = zips.into_iter().next().unwrap_or_else(BigUint::one);
        Ok(StreamSpec {
            root_name: root_name.to_string(),
            root: RootRule::Explicit(rhs),
            zip_arity,
            mod_arities: mods,
        })
    }

    pub fn root_name(&self) -> &str {
        &self.root_name
    }

    /// Arity `d` of the zip symbol.
    pub fn d(&self) -> &BigUint {
        &self.zip_arity
    }

    pub fn program(&self) -> Option<&FractranProgram> {
        match &self.root {
            RootRule::Induced(p) => Some(p),
            RootRule::Explicit(_) => None,
        }
    }

    pub(crate) fn explicit_rhs(&self) -> Option<&Term> {
        match &self.root {
            RootRule::Explicit(t) => Some(t),
            RootRule::Induced(_) => None,
        }
    }

    /// The `k` of every `mod_k` symbol, ascending.
    pub fn mod_arities(&self) -> impl Iterator<Item = &BigUint> {
        self.mod_arities.iter()
    }

    pub fn signature(&self) -> Vec<Symbol> {
        let mut sig = vec![
            Symbol::Bullet,
            Symbol::Cons,
            Symbol::Head,
            Symbol::Tail,
            Symbol::Zip(self.zip_arity.clone()),
            Symbol::Root(self.root_name.clone()),
        ];
        sig.extend(self.mod_arities.iter().cloned().map(Symbol::Mod));
        sig
    }

    /// The argument `T_n` (`1 <= n <= d`) of the induced root rule.
    pub fn induced_argument(&self, n: &BigUint) -> Result<Term, StreamError> {
        let program = self.program().expect("induced_argument needs an induced spec");
        let limit = |x: &BigUint| x.to_u64().filter(|&v| v <= RENDER_LIMIT).ok_or(StreamError::TooLarge);
        Ok(match program.residue_entry(n) {
            Some(e) => Term::Mod(
                e.multiplier,
                Box::new(Term::tails(limit(&(e.offset - 1u32))?, Term::Root)),
            ),
            None => Term::cons(
                Term::Bullet,
                Term::Mod(self.zip_arity.clone(), Box::new(Term::tails(limit(&(n - 1u32))?, Term::Root))),
            ),
        })
    }

    /// The right-hand side of the root rule.
    pub fn root_rhs(&self) -> Result<Term, StreamError> {
        match &self.root {
            RootRule::Explicit(t) => Ok(t.clone()),
            RootRule::Induced(_) => {
                let d = self.zip_arity.to_u64().filter(|&d| d <= RENDER_LIMIT).ok_or(StreamError::TooLarge)?;
                let args = (1..=d)
                    .map(|n| self.induced_argument(&BigUint::from(n)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::zip(args))
            }
        }
    }

    /// All rules in output order: root, head, tail, `mod_k` by ascending `k`, zip.
    pub fn rules(&self) -> Result<Vec<Rule>, StreamError> {
        let mut rules = vec![Rule::new(Term::Root, self.root_rhs()?)];
        let x = || Term::var("x");
        let s = || Term::var("s");
        rules.push(Rule::new(Term::head(Term::cons(x(), s())), x()));
        rules.push(Rule::new(Term::tail(Term::cons(x(), s())), s()));
        for k in &self.mod_arities {
            let k_small = k.to_u64().filter(|&k| k <= RENDER_LIMIT).ok_or(StreamError::TooLarge)?;
            rules.push(Rule::new(
                Term::modk(k.clone(), s()),
                Term::cons(Term::head(s()), Term::modk(k.clone(), Term::tails(k_small, s()))),
            ));
        }
        let d = self.zip_arity.to_u64().filter(|&d| d <= RENDER_LIMIT).ok_or(StreamError::TooLarge)?;
        let vars: Vec<Term> = (1..=d).map(|i| Term::var(&format!("s{}", i))).collect();
        let mut rotated: Vec<Term> = vars[1..].to_vec();
        rotated.push(Term::tail(vars[0].clone()));
        rules.push(Rule::new(
            Term::zip(vars.clone()),
            Term::cons(Term::head(vars[0].clone()), Term::zip(rotated)),
        ));
        Ok(rules)
    }

    /// Old-style TPDB text: a `VAR` block, then one `lhs -> rhs` per line.
    pub fn emit_trs(&self) -> Result<String, StreamError> {
        let rules = self.rules()?;
        let d = self.zip_arity.to_u64().expect("rules() checked the arity");
        let mut out = String::from("(VAR x s");
        for i in 1..=d {
            let _ = write!(out, " s{}", i);
        }
        out.push_str(")\n(RULES\n");
        for r in &rules {
            let _ = writeln!(out, "  {} -> {}", r.lhs.render(&self.root_name), r.rhs.render(&self.root_name));
        }
        out.push_str(")\n");
        Ok(out)
    }
}

/// The specification induced by a Fractran program: `P -> zip_d(T_1, ..., T_d)`
/// with `T_n = mod_{p'_n}(tail^{o_n - 1}(P))`, or `• : mod_d(tail^{n-1}(P))`
/// for classes where no fraction applies.
///
/// Only the `mod_k` symbols some `T_n` actually uses are included; they are
/// found from the fractions without scanning all `d` classes.
pub fn induce_spec(program: &FractranProgram) -> StreamSpec {
    let d = program.lcm_den().clone();
    let mut mods = BTreeSet::new();
    for (i, f) in program.fractions().iter().enumerate() {
        if program.fraction_is_reachable(i) {
            mods.insert(f.num() * (&d / f.den()));
        }
    }
    if program.has_undefined_class() {
        mods.insert(d.clone());
    }
    StreamSpec {
        root_name: "P".to_string(),
        root: RootRule::Induced(Arc::new(program.clone())),
        zip_arity: d,
        mod_arities: mods,
    }
}

/// `C -> • : zip_2(C, mod_6(tail^9(C)))`.
pub fn collatz_spec() -> StreamSpec {
    let rhs = Term::cons(
        Term::Bullet,
        Term::zip(vec![Term::Root, Term::modk(6u32, Term::tails(9, Term::Root))]),
    );
    StreamSpec::explicit("C", rhs).expect("Collatz specification is well formed")
}

/// The representative of `n` modulo `d` in `1..=d`.
pub fn phi(n: &BigUint, d: &BigUint) -> BigUint {
    assert!(!n.is_zero() && !d.is_zero(), "phi needs positive arguments");
    ((n - 1u32) % d) + 1u32
}

/// `⌊(n-1)/d⌋ · p'_φ(n) + o_φ(n)`, which equals `f_P(n)`.
pub fn predicted_step(program: &FractranProgram, n: &BigUint) -> Option<BigUint> {
    let d = program.lcm_den();
    let class = phi(n, d);
    let entry = program.residue_entry(&class)?;
    let (quot, _) = (n - 1u32).div_rem(d);
    Some(quot * entry.multiplier + entry.offset)
}

/// Overlaps between left-hand sides: `(outer rule, inner rule, position)`.
/// Empty together with left-linearity means the rule set is orthogonal.
pub fn critical_overlaps(rules: &[Rule]) -> Vec<(usize, usize, Vec<usize>)> {
    let mut found = Vec::new();
    for (i, outer) in rules.iter().enumerate() {
        for (pos, sub) in outer.lhs.positions() {
            if matches!(sub, Term::Var(_)) {
                continue;
            }
            for (j, inner) in rules.iter().enumerate() {
                if i == j && pos.is_empty() {
                    continue;
                }
                if unify(sub, &inner.lhs.rename_vars("'")).is_some() {
                    found.push((i, j, pos.clone()));
                }
            }
        }
    }
    found
}

pub fn is_orthogonal(rules: &[Rule]) -> bool {
    rules.iter().all(Rule::is_left_linear) && critical_overlaps(rules).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractran::{parse_program, primegame};

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn spec(src: &str) -> StreamSpec {
        induce_spec(&parse_program(src).unwrap())
    }

    #[test]
    fn three_halves_root_rule() {
        let s = spec("3/2");
        assert_eq!(s.d(), &big(2));
        let expected = Term::zip(vec![
            Term::cons(Term::Bullet, Term::modk(2u32, Term::Root)),
            Term::modk(3u32, Term::tails(2, Term::Root)),
        ]);
        assert_eq!(s.root_rhs().unwrap(), expected);
        let mods: Vec<u64> = s.mod_arities().map(|k| k.to_u64().unwrap()).collect();
        assert_eq!(mods, [2, 3]);
    }

    #[test]
    fn integer_fraction_root_rule() {
        let s = spec("55/1");
        assert_eq!(s.root_rhs().unwrap(), Term::zip(vec![Term::modk(55u32, Term::tails(54, Term::Root))]));
        assert_eq!(
            s.signature(),
            [
                Symbol::Bullet,
                Symbol::Cons,
                Symbol::Head,
                Symbol::Tail,
                Symbol::Zip(big(1)),
                Symbol::Root("P".into()),
                Symbol::Mod(big(55)),
            ]
        );
    }

    #[test]
    fn mod_set_matches_enumeration() {
        for src in ["3/2", "1/6 5/2 7/3 2/4", "2/4 5/3", "7/15 1/2 9", "1/2", "5/6 7/10 11/3"] {
            let p = parse_program(src).unwrap();
            let s = induce_spec(&p);
            let d = p.lcm_den().to_u64().unwrap();
            let mut enumerated = BTreeSet::new();
            for n in 1..=d {
                match p.residue_entry(&big(n)) {
                    Some(e) => enumerated.insert(e.multiplier),
                    None => enumerated.insert(p.lcm_den().clone()),
                };
            }
            let got: BTreeSet<BigUint> = s.mod_arities().cloned().collect();
            assert_eq!(got, enumerated, "{}", src);
        }
    }

    #[test]
    fn huge_d_is_not_rendered() {
        let s = induce_spec(&primegame());
        assert_eq!(s.root_rhs().unwrap_err(), StreamError::TooLarge);
        assert!(s.emit_trs().is_err());
        // The argument for class 2 is still available.
        let t2 = s.induced_argument(&big(2)).unwrap();
        assert!(matches!(t2, Term::Mod(_, _)));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&big(4), &big(2)), big(2));
        assert_eq!(phi(&big(5), &big(5)), big(5));
        assert_eq!(phi(&big(7), &big(3)), big(1));
    }

    #[test]
    fn predicted_step_examples() {
        let p = parse_program("3/2").unwrap();
        assert_eq!(predicted_step(&p, &big(4)), Some(big(6)));
        assert_eq!(predicted_step(&p, &big(3)), None);
        assert_eq!(predicted_step(&primegame(), &big(2)), Some(big(15)));
    }

    #[test]
    fn predicted_step_matches_interpreter() {
        for src in ["3/2", "55/1", "1/2", "2/4 5/3", "1/6 5/2 7/3 2/4", "7/15 1/2 9"] {
            let p = parse_program(src).unwrap();
            for n in 1..=500u64 {
                assert_eq!(predicted_step(&p, &big(n)), p.step(&big(n)), "{} at {}", src, n);
            }
        }
    }

    #[test]
    fn emitted_trs() {
        let text = spec("3/2").emit_trs().unwrap();
        assert!(text.starts_with("(VAR x s s1 s2)\n(RULES\n"));
        assert!(text.contains("  P -> zip2(cons(bullet,mod2(P)),mod3(tail(tail(P))))\n"));
        assert!(text.contains("  zip2(s1,s2) -> cons(head(s1),zip2(s2,tail(s1)))\n"));
        let c = collatz_spec().emit_trs().unwrap();
        assert!(c.contains(
            "  C -> cons(bullet,zip2(C,mod6(tail(tail(tail(tail(tail(tail(tail(tail(tail(C))))))))))))\n"
        ));
        assert_eq!(collatz_spec().emit_trs().unwrap(), c);
    }

    #[test]
    fn collatz_signature() {
        let names: Vec<String> = collatz_spec().signature().iter().map(|s| s.to_string()).collect();
        assert_eq!(names, ["bullet", "cons", "head", "tail", "zip2", "C", "mod6"]);
    }

    #[test]
    fn induced_rules_are_orthogonal() {
        for src in ["3/2", "55/1", "1/6 5/2 7/3 2/4", "7/15 1/2 9"] {
            let rules = spec(src).rules().unwrap();
            assert!(is_orthogonal(&rules), "{}", src);
        }
        assert!(is_orthogonal(&collatz_spec().rules().unwrap()));
    }

    #[test]
    fn overlap_detection() {
        // A rule rewriting head(tail(s)) overlaps tail(cons(x,s)) below the root.
        let rules = vec![
            Rule::new(Term::head(Term::tail(Term::var("s"))), Term::Bullet),
            Rule::new(Term::tail(Term::cons(Term::var("x"), Term::var("s"))), Term::var("s")),
        ];
        assert_eq!(critical_overlaps(&rules), [(0, 1, vec![0])]);
        let nonlinear = Rule::new(Term::zip(vec![Term::var("s"), Term::var("s")]), Term::var("s"));
        assert!(!nonlinear.is_left_linear());
    }

    #[test]
    fn explicit_validation() {
        assert!(StreamSpec::explicit("X", Term::Bullet).is_err());
        assert!(StreamSpec::explicit("X", Term::var("s")).is_err());
        assert!(StreamSpec::explicit("X", Term::cons(Term::Bullet, Term::Root)).is_ok());
    }
}
