use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Terms over the lazy stream signature.
///
/// `Bullet` and `Head(_)` are data terms; everything else is a stream term.
/// `Var` only occurs in rule patterns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Bullet,
    Cons(Box<Term>, Box<Term>),
    Head(Box<Term>),
    Tail(Box<Term>),
    Mod(BigUint, Box<Term>),
    Zip(Vec<Term>),
    /// The specification's defined constant (`P` or `C`).
    Root,
    Var(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Data,
    Stream,
}

impl Term {
    pub fn cons(x: Term, s: Term) -> Term {
        Term::Cons(Box::new(x), Box::new(s))
    }

    pub fn head(s: Term) -> Term {
        Term::Head(Box::new(s))
    }

    pub fn tail(s: Term) -> Term {
        Term::Tail(Box::new(s))
    }

    /// `tail^n(s)`; `tail^0` is the identity.
    pub fn tails(n: u64, s: Term) -> Term {
        (0..n).fold(s, |acc, _| Term::tail(acc))
    }

    pub fn modk(k: impl Into<BigUint>, s: Term) -> Term {
        Term::Mod(k.into(), Box::new(s))
    }

    pub fn zip(args: Vec<Term>) -> Term {
        assert!(!args.is_empty(), "zip needs at least one argument");
        Term::Zip(args)
    }

    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// `head(tail^n(s))`, the `n`-th element of `s`.
    pub fn nth(s: Term, n: u64) -> Term {
        Term::head(Term::tails(n, s))
    }

    pub fn sort(&self) -> Option<Sort> {
        match self {
            Term::Bullet | Term::Head(_) => Some(Sort::Data),
            Term::Var(_) => None,
            _ => Some(Sort::Stream),
        }
    }

    /// Checks argument sorts bottom-up. Variables fit either sort.
    pub fn well_sorted(&self) -> bool {
        let is = |t: &Term, s: Sort| t.sort().is_none_or(|x| x == s) && t.well_sorted();
        match self {
            Term::Bullet | Term::Root | Term::Var(_) => true,
            Term::Cons(x, s) => is(x, Sort::Data) && is(s, Sort::Stream),
            Term::Head(s) | Term::Tail(s) | Term::Mod(_, s) => is(s, Sort::Stream),
            Term::Zip(args) => args.iter().all(|a| is(a, Sort::Stream)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Bullet | Term::Root => true,
            Term::Cons(x, s) => x.is_ground() && s.is_ground(),
            Term::Head(s) | Term::Tail(s) | Term::Mod(_, s) => s.is_ground(),
            Term::Zip(args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Bullet | Term::Root | Term::Var(_) => vec![],
            Term::Cons(x, s) => vec![x, s],
            Term::Head(s) | Term::Tail(s) | Term::Mod(_, s) => vec![s],
            Term::Zip(args) => args.iter().collect(),
        }
    }

    /// Whether both terms have the same root symbol (arity included).
    pub fn same_symbol(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Mod(a, _), Term::Mod(b, _)) => a == b,
            (Term::Zip(a), Term::Zip(b)) => a.len() == b.len(),
            (Term::Var(_), _) | (_, Term::Var(_)) => false,
            _ => std::mem::discriminant(self) == std::mem::discriminant(other),
        }
    }

    /// All subterms in pre-order, with their positions.
    pub fn positions(&self) -> Vec<(Vec<usize>, &Term)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((pos, t)) = stack.pop() {
            for (i, c) in t.children().into_iter().enumerate().rev() {
                let mut p = pos.clone();
                p.push(i);
                stack.push((p, c));
            }
            out.push((pos, t));
        }
        out
    }

    pub fn variables(&self) -> Vec<&str> {
        self.positions()
            .into_iter()
            .filter_map(|(_, t)| match t {
                Term::Var(v) => Some(v.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn rename_vars(&self, suffix: &str) -> Term {
        self.map_vars(&mut |v| Term::Var(format!("{}{}", v, suffix)))
    }

    fn map_vars(&self, f: &mut dyn FnMut(&str) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::Bullet => Term::Bullet,
            Term::Root => Term::Root,
            Term::Cons(x, s) => Term::cons(x.map_vars(f), s.map_vars(f)),
            Term::Head(s) => Term::head(s.map_vars(f)),
            Term::Tail(s) => Term::tail(s.map_vars(f)),
            Term::Mod(k, s) => Term::Mod(k.clone(), Box::new(s.map_vars(f))),
            Term::Zip(args) => Term::Zip(args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    pub fn substitute(&self, subst: &HashMap<String, Term>) -> Term {
        self.map_vars(&mut |v| subst.get(v).cloned().unwrap_or_else(|| Term::var(v)))
    }

    /// Writes the term in TPDB prefix syntax, naming the root constant `root`.
    pub fn render(&self, root: &str) -> String {
        let mut out = String::new();
        self.render_into(root, &mut out);
        out
    }

    fn render_into(&self, root: &str, out: &mut String) {
        let call = |name: &str, args: &[&Term], out: &mut String| {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                a.render_into(root, out);
            }
            out.push(')');
        };
        match self {
            Term::Bullet => out.push_str("bullet"),
            Term::Root => out.push_str(root),
            Term::Var(v) => out.push_str(v),
            Term::Cons(x, s) => call("cons", &[x, s], out),
            Term::Head(s) => call("head", &[s], out),
            Term::Tail(s) => call("tail", &[s], out),
            Term::Mod(k, s) => call(&format!("mod{}", k), &[s], out),
            Term::Zip(args) => {
                let refs: Vec<&Term> = args.iter().collect();
                call(&format!("zip{}", args.len()), &refs, out)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("P"))
    }
}

/// Symbols of the stream signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Bullet,
    Cons,
    Head,
    Tail,
    Mod(BigUint),
    Zip(BigUint),
    Root(String),
}

impl Symbol {
    pub fn arity(&self) -> Option<u64> {
        match self {
            Symbol::Bullet | Symbol::Root(_) => Some(0),
            Symbol::Head | Symbol::Tail | Symbol::Mod(_) => Some(1),
            Symbol::Cons => Some(2),
            Symbol::Zip(d) => d.to_u64(),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Bullet => f.write_str("bullet"),
            Symbol::Cons => f.write_str("cons"),
            Symbol::Head => f.write_str("head"),
            Symbol::Tail => f.write_str("tail"),
            Symbol::Mod(k) => write!(f, "mod{}", k),
            Symbol::Zip(d) => write!(f, "zip{}", d),
            Symbol::Root(name) => f.write_str(name),
        }
    }
}

/// Syntactic unification; `None` if the terms do not unify.
pub fn unify(a: &Term, b: &Term) -> Option<HashMap<String, Term>> {
    let mut subst: HashMap<String, Term> = HashMap::new();
    let mut work = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = work.pop() {
        let x = resolve(&x, &subst);
        let y = resolve(&y, &subst);
        match (&x, &y) {
            (Term::Var(v), Term::Var(w)) if v == w => {}
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if t.variables().contains(&v.as_str()) {
                    return None;
                }
                subst.insert(v.clone(), t.clone());
            }
            _ => {
                if !x.same_symbol(&y) {
                    return None;
                }
                for (c, d) in x.children().into_iter().zip(y.children()) {
                    work.push((c.clone(), d.clone()));
                }
            }
        }
    }
    Some(subst)
}

fn resolve(t: &Term, subst: &HashMap<String, Term>) -> Term {
    let mut cur = t.clone();
    loop {
        let next = cur.substitute(subst);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}
