//! Outermost evaluation of stream elements.
//!
//! Evaluating `head(tail^n(s))` only ever needs the spine of the term: at any
//! moment the whole term is `head(tail^j(focus))` for a counter `j`, and the
//! unique outermost redex is either the focus itself (root, `mod`, `zip`) or,
//! once the focus is a `cons`, the innermost `tail` above it (or the `head`
//! when `j = 0`). Every rule application is counted as one step.
//!
//! Terms are trees without sharing. Subterms are held behind `Rc` only so that
//! the copy made by the `mod` rule is free; nodes are never updated in place.
//! Two compact node forms stand for ordinary trees: `Tails(k, s)` is
//! `tail^k(s)`, and `InducedZip(t)` is the induced root's
//! `zip_d(T_1, ..., T_d)` after `t` applications of the zip rule, with its
//! arguments materialized on demand.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::spec::StreamSpec;
use super::term::Term;
use super::StreamError;

/// Counts beyond any fuel are clamped here.
const HUGE: u64 = u64::MAX;

fn clamp(n: &BigUint) -> u64 {
    n.to_u64().unwrap_or(HUGE)
}

#[derive(Debug)]
enum Node {
    Bullet,
    Cons(Rc<Node>, Rc<Node>),
    Head(Rc<Node>),
    Tails(u64, Rc<Node>),
    Mod(u64, Rc<Node>),
    Zip(Vec<Rc<Node>>),
    InducedZip(u64),
    /// `tail^k(T_n)` for the induced root, `(n, k)`.
    InducedArg(u64, u64),
    Root,
}

fn tails(k: u64, node: Rc<Node>) -> Rc<Node> {
    if k == 0 {
        return node;
    }
    match &*node {
        Node::Tails(j, inner) => Rc::new(Node::Tails(k.saturating_add(*j), inner.clone())),
        _ => Rc::new(Node::Tails(k, node)),
    }
}

fn from_term(t: &Term) -> Result<Rc<Node>, StreamError> {
    Ok(match t {
        Term::Bullet => Rc::new(Node::Bullet),
        Term::Root => Rc::new(Node::Root),
        Term::Cons(x, s) => Rc::new(Node::Cons(from_term(x)?, from_term(s)?)),
        Term::Head(s) => Rc::new(Node::Head(from_term(s)?)),
        Term::Tail(_) => {
            let mut k = 0u64;
            let mut cur = t;
            while let Term::Tail(inner) = cur {
                k += 1;
                cur = inner;
            }
            tails(k, from_term(cur)?)
        }
        Term::Mod(k, s) => Rc::new(Node::Mod(clamp(k), from_term(s)?)),
        Term::Zip(args) => Rc::new(Node::Zip(args.iter().map(from_term).collect::<Result<_, _>>()?)),
        Term::Var(v) => return Err(StreamError::IllFormed(format!("variable `{}` in a ground term", v))),
    })
}

/// Result of evaluating one stream element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation {
    /// The element rewrote to `•` in this many steps.
    Produced(u64),
    /// No `•` within the fuel; the term at the point of stopping.
    Exhausted { fuel: u64, partial: PartialTerm },
}

impl Evaluation {
    pub fn is_produced(&self) -> bool {
        matches!(self, Evaluation::Produced(_))
    }
}

/// `head(tail^depth(focus))`, with `focus` abbreviated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTerm {
    pub depth: u64,
    pub focus: String,
}

impl fmt::Display for PartialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "head(tail^{}({}))", self.depth, self.focus)
    }
}

/// Evaluator for one specification. Not `Send`; build one per thread.
pub struct Evaluator<'a> {
    spec: &'a StreamSpec,
    root_rhs: Rc<Node>,
    d: u64,
    entries: HashMap<u64, Option<(u64, u64)>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(spec: &'a StreamSpec) -> Result<Self, StreamError> {
        let root_rhs = match spec.explicit_rhs() {
            Some(t) => from_term(t)?,
            None => Rc::new(Node::InducedZip(0)),
        };
        Ok(Evaluator { spec, root_rhs, d: clamp(spec.d()), entries: HashMap::new() })
    }

    /// `(p'_n, o_n)` clamped to machine words.
    fn entry(&mut self, n: u64) -> Option<(u64, u64)> {
        let spec = self.spec;
        *self.entries.entry(n).or_insert_with(|| {
            let program = spec.program().expect("induced spec");
            program
                .residue_entry(&BigUint::from(n))
                .map(|e| (clamp(&e.multiplier), clamp(&e.offset)))
        })
    }

    fn induced_arg(&mut self, n: u64) -> Rc<Node> {
        match self.entry(n) {
            Some((mult, offset)) => Rc::new(Node::Mod(mult, tails(offset - 1, Rc::new(Node::Root)))),
            None => Rc::new(Node::Cons(
                Rc::new(Node::Bullet),
                Rc::new(Node::Mod(self.d, tails(n - 1, Rc::new(Node::Root)))),
            )),
        }
    }

    /// Evaluates `head(tail^index(stream))` with at most `fuel` rule applications.
    ///
    /// `on_root` is called with `(steps, j)` whenever the whole term is
    /// `head(tail^j(root))`.
    pub fn element_with(
        &mut self,
        stream: &Term,
        index: u64,
        fuel: u64,
        on_root: &mut dyn FnMut(u64, u64),
    ) -> Result<Evaluation, StreamError> {
        if stream.sort() != Some(super::term::Sort::Stream) || !stream.well_sorted() {
            return Err(StreamError::IllFormed(stream.render(self.spec.root_name())));
        }
        let focus = from_term(stream)?;
        self.run(focus, index, fuel, on_root)
    }

    fn run(
        &mut self,
        mut focus: Rc<Node>,
        index: u64,
        fuel: u64,
        on_root: &mut dyn FnMut(u64, u64),
    ) -> Result<Evaluation, StreamError> {
        if fuel == 0 {
            return Err(StreamError::FuelZero);
        }
        let mut depth = index;
        let mut steps = 0u64;
        macro_rules! step {
            () => {{
                if steps == fuel {
                    return Ok(self.exhausted(fuel, depth, &focus));
                }
                steps += 1;
            }};
        }
        loop {
            // Reaching `•` needs `depth` tail steps and a head step.
            if depth >= fuel - steps {
                return Ok(self.exhausted(fuel, depth, &focus));
            }
            let next = match &*focus {
                Node::Tails(k, inner) => {
                    depth = depth.saturating_add(*k);
                    inner.clone()
                }
                Node::InducedArg(n, k) => {
                    let arg = self.induced_arg(*n);
                    tails(*k, arg)
                }
                Node::Root => {
                    on_root(steps, depth);
                    step!();
                    self.root_rhs.clone()
                }
                Node::Mod(k, s) => {
                    step!();
                    Rc::new(Node::Cons(
                        Rc::new(Node::Head(s.clone())),
                        Rc::new(Node::Mod(*k, tails(*k, s.clone()))),
                    ))
                }
                Node::Zip(args) => {
                    step!();
                    let mut rotated: Vec<Rc<Node>> = args[1..].to_vec();
                    rotated.push(tails(1, args[0].clone()));
                    Rc::new(Node::Cons(Rc::new(Node::Head(args[0].clone())), Rc::new(Node::Zip(rotated))))
                }
                Node::InducedZip(t) => {
                    step!();
                    let (n, k) = (t % self.d + 1, t / self.d);
                    Rc::new(Node::Cons(
                        Rc::new(Node::Head(Rc::new(Node::InducedArg(n, k)))),
                        Rc::new(Node::InducedZip(t + 1)),
                    ))
                }
                Node::Cons(x, s) => {
                    step!();
                    if depth > 0 {
                        depth -= 1;
                        s.clone()
                    } else {
                        // The head rule fired: the whole term is now `x`.
                        match &**x {
                            Node::Bullet => return Ok(Evaluation::Produced(steps)),
                            Node::Head(inner) => inner.clone(),
                            other => unreachable!("data position holds {:?}", other),
                        }
                    }
                }
                Node::Bullet | Node::Head(_) => unreachable!("data term in stream position"),
            };
            focus = next;
        }
    }

    fn exhausted(&self, fuel: u64, depth: u64, focus: &Rc<Node>) -> Evaluation {
        let mut text = String::new();
        self.describe(focus, 3, &mut text);
        Evaluation::Exhausted { fuel, partial: PartialTerm { depth, focus: text } }
    }

    fn describe(&self, node: &Node, budget: u32, out: &mut String) {
        if budget == 0 {
            out.push('…');
            return;
        }
        let root = self.spec.root_name();
        match node {
            Node::Bullet => out.push_str("bullet"),
            Node::Root => out.push_str(root),
            Node::Cons(x, s) => {
                out.push_str("cons(");
                self.describe(x, budget - 1, out);
                out.push(',');
                self.describe(s, budget - 1, out);
                out.push(')');
            }
            Node::Head(s) => {
                out.push_str("head(");
                self.describe(s, budget - 1, out);
                out.push(')');
            }
            Node::Tails(k, s) => {
                out.push_str(&format!("tail^{}(", k));
                self.describe(s, budget - 1, out);
                out.push(')');
            }
            Node::Mod(k, s) => {
                out.push_str(&format!("mod{}(", k));
                self.describe(s, budget - 1, out);
                out.push(')');
            }
            Node::Zip(args) => {
                out.push_str(&format!("zip{}(", args.len()));
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.describe(a, budget - 1, out);
                }
                out.push(')');
            }
            Node::InducedZip(t) => out.push_str(&format!("zip{}(T…, rotated {})", self.spec.d(), t)),
            Node::InducedArg(n, k) => out.push_str(&format!("tail^{}(T_{})", k, n)),
        }
    }
}

/// Rewrites `head(tail^n(root))` outermost-first until it becomes `•` or the
/// fuel runs out.
pub fn rewrite_nth(spec: &StreamSpec, n: u64, fuel: u64) -> Result<Evaluation, StreamError> {
    Evaluator::new(spec)?.element_with(&Term::Root, n, fuel, &mut |_, _| {})
}

/// As [`rewrite_nth`], also returning every `j` for which the term passed
/// through `head(tail^j(root))`, in order.
pub fn rewrite_nth_traced(
    spec: &StreamSpec,
    n: u64,
    fuel: u64,
) -> Result<(Evaluation, Vec<u64>), StreamError> {
    let mut visits = Vec::new();
    let eval = Evaluator::new(spec)?.element_with(&Term::Root, n, fuel, &mut |_, j| visits.push(j))?;
    Ok((eval, visits))
}

/// Evaluates element `i` of an arbitrary ground stream term over `spec`.
pub fn element_of(spec: &StreamSpec, stream: &Term, i: u64, fuel: u64) -> Result<Evaluation, StreamError> {
    Evaluator::new(spec)?.element_with(stream, i, fuel, &mut |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;
    use crate::fractran::{parse_program, primegame};
    use crate::stream::spec::{collatz_spec, induce_spec};

    fn spec(src: &str) -> StreamSpec {
        induce_spec(&parse_program(src).unwrap())
    }

    /// Naive tree rewriter: finds the leftmost-outermost redex of a fully
    /// materialized term and contracts it with the rules of `spec`.
    fn naive_nth(spec: &StreamSpec, n: u64, fuel: u64) -> Option<u64> {
        let rules = spec.rules().unwrap();
        let mut term = Term::nth(Term::Root, n);
        for steps in 0..fuel {
            if term == Term::Bullet {
                return Some(steps);
            }
            term = contract_outermost(&term, &rules).expect("a redex exists");
        }
        (term == Term::Bullet).then_some(fuel)
    }

    // One-way matching; left-hand sides are linear so no consistency check.
    fn matches(pat: &Term, t: &Term, s: &mut HashMap<String, Term>) -> bool {
        if let Term::Var(v) = pat {
            s.insert(v.clone(), t.clone());
            return true;
        }
        pat.same_symbol(t)
            && pat.children().into_iter().zip(t.children()).all(|(p, c)| matches(p, c, s))
    }

    fn contract_outermost(t: &Term, rules: &[crate::stream::Rule]) -> Option<Term> {
        for r in rules {
            let mut s = HashMap::new();
            if matches(&r.lhs, t, &mut s) {
                return Some(r.rhs.substitute(&s));
            }
        }
        let rebuild = |i: usize, new: Term| -> Term {
            match t {
                Term::Cons(_, s) if i == 0 => Term::cons(new, (**s).clone()),
                Term::Cons(x, _) => Term::cons((**x).clone(), new),
                Term::Head(_) => Term::head(new),
                Term::Tail(_) => Term::tail(new),
                Term::Mod(k, _) => Term::Mod(k.clone(), Box::new(new)),
                Term::Zip(args) => {
                    let mut a = args.clone();
                    a[i] = new;
                    Term::Zip(a)
                }
                _ => unreachable!(),
            }
        };
        for (i, c) in t.children().into_iter().enumerate() {
            if let Some(new) = contract_outermost(c, rules) {
                return Some(rebuild(i, new));
            }
        }
        None
    }

    #[test]
    fn agrees_with_naive_rewriter() {
        for src in ["3/2", "1/2", "2/3 3/2", "7/15 1/2 9", "5/6 7/10 11/3"] {
            let s = spec(src);
            for n in 0..12 {
                let fast = rewrite_nth(&s, n, 400).unwrap();
                let naive = naive_nth(&s, n, 400);
                match (fast, naive) {
                    (Evaluation::Produced(a), Some(b)) => assert_eq!(a, b, "{} element {}", src, n),
                    (Evaluation::Exhausted { .. }, None) => {}
                    (f, nv) => panic!("{} element {}: {:?} vs {:?}", src, n, f, nv),
                }
            }
        }
        let c = collatz_spec();
        for n in 0..15 {
            let fast = rewrite_nth(&c, n, 2000).unwrap();
            assert_eq!(Some(match fast {
                Evaluation::Produced(k) => k,
                _ => panic!("collatz element {}", n),
            }), naive_nth(&c, n, 2000));
        }
    }

    #[test]
    fn three_halves_first_element() {
        assert!(rewrite_nth(&spec("3/2"), 0, 100).unwrap().is_produced());
    }

    #[test]
    fn immortal_program_exhausts() {
        let s = spec("55/1");
        for n in 0..5 {
            let e = rewrite_nth(&s, n, 100_000).unwrap();
            assert!(matches!(e, Evaluation::Exhausted { fuel: 100_000, .. }));
        }
    }

    #[test]
    fn primegame_does_not_produce_element_one() {
        let e = rewrite_nth(&induce_spec(&primegame()), 1, 1_000_000).unwrap();
        assert!(!e.is_produced());
        assert!(!primegame().halts(&BigUint::from(2u32), 1_000_000).is_halted());
    }

    #[test]
    fn fuel_zero_is_an_error() {
        assert_eq!(rewrite_nth(&spec("1/2"), 0, 0).unwrap_err(), StreamError::FuelZero);
    }

    #[test]
    fn collatz_first_element() {
        assert_eq!(rewrite_nth(&collatz_spec(), 0, 10).unwrap(), Evaluation::Produced(2));
    }

    #[test]
    fn deterministic_step_counts() {
        let s = spec("7/15 1/2 9");
        let a: Vec<_> = (0..10).map(|n| rewrite_nth(&s, n, 10_000).unwrap()).collect();
        let b: Vec<_> = (0..10).map(|n| rewrite_nth(&s, n, 10_000).unwrap()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn root_visits_follow_the_program() {
        let p = parse_program("3/2").unwrap();
        let s = induce_spec(&p);
        // 8 -> 12 -> 18 -> 27: element 7 visits indices 7, 11, 17, 26.
        let (e, visits) = rewrite_nth_traced(&s, 7, 10_000).unwrap();
        assert!(e.is_produced());
        assert_eq!(&visits[..4], &[7, 11, 17, 26]);
    }

    #[test]
    fn element_of_arbitrary_terms() {
        let s = spec("1/2");
        let t = Term::cons(Term::Bullet, Term::Root);
        assert_eq!(element_of(&s, &t, 0, 5).unwrap(), Evaluation::Produced(1));
        assert!(element_of(&s, &Term::Bullet, 0, 5).is_err());
    }

    #[test]
    fn partial_term_is_reported() {
        match rewrite_nth(&spec("55/1"), 0, 50).unwrap() {
            Evaluation::Exhausted { fuel, partial } => {
                assert_eq!(fuel, 50);
                assert!(partial.to_string().starts_with("head(tail^"));
            }
            e => panic!("{:?}", e),
        }
    }
}
