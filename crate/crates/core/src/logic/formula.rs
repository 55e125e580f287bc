use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::automata::Tvpa;
use crate::error::{Error, Result};
use crate::word::PushdownAlphabet;

/// VLDL formula. Temporal operators name their guard automaton in an
/// [`AutomatonTable`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Diamond(String, Box<Formula>),
    Box(String, Box<Formula>),
}

impl Formula {
    pub fn atom(p: &str) -> Self {
        Formula::Atom(p.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::or(Formula::not(a), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn diamond(guard: &str, f: Formula) -> Self {
        Formula::Diamond(guard.to_string(), Box::new(f))
    }

    pub fn boxed(guard: &str, f: Formula) -> Self {
        Formula::Box(guard.to_string(), Box::new(f))
    }

    /// `p ∨ ¬p` for the alphabet's designated proposition.
    pub fn tt(alphabet: &PushdownAlphabet) -> Self {
        let p = Formula::atom(alphabet.designated_proposition().unwrap_or("_"));
        Formula::or(p.clone(), Formula::not(p))
    }

    /// `p ∧ ¬p` for the alphabet's designated proposition.
    pub fn ff(alphabet: &PushdownAlphabet) -> Self {
        let p = Formula::atom(alphabet.designated_proposition().unwrap_or("_"));
        Formula::and(p.clone(), Formula::not(p))
    }

    /// Disjunction of a nonempty list, `ff` otherwise.
    pub fn any(alphabet: &PushdownAlphabet, fs: impl IntoIterator<Item = Formula>) -> Self {
        fs.into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(|| Formula::ff(alphabet))
    }

    pub fn all(alphabet: &PushdownAlphabet, fs: impl IntoIterator<Item = Formula>) -> Self {
        fs.into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(|| Formula::tt(alphabet))
    }

    /// Guard names referenced directly by this formula (not through tests).
    pub fn guards(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Diamond(a, _) | Formula::Box(a, _) = f {
                out.insert(a.as_str());
            }
        });
        out
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Atom(_) => {}
            Formula::Not(g) | Formula::Diamond(_, g) | Formula::Box(_, g) => g.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Nesting depth of temporal operators.
    pub fn temporal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(g) => g.temporal_depth(),
            Formula::And(a, b) | Formula::Or(a, b) => a.temporal_depth().max(b.temporal_depth()),
            Formula::Diamond(_, g) | Formula::Box(_, g) => 1 + g.temporal_depth(),
        }
    }

    /// Negation normal form: negations only on atoms. Guards are untouched.
    pub fn nnf(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::And(a, b) => Formula::and(a.nnf(), b.nnf()),
            Formula::Or(a, b) => Formula::or(a.nnf(), b.nnf()),
            Formula::Diamond(g, f) => Formula::diamond(g, f.nnf()),
            Formula::Box(g, f) => Formula::boxed(g, f.nnf()),
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(_) => self.clone(),
                Formula::Not(g) => g.nnf(),
                Formula::And(a, b) => Formula::or(negate(a).nnf(), negate(b).nnf()),
                Formula::Or(a, b) => Formula::and(negate(a).nnf(), negate(b).nnf()),
                Formula::Diamond(g, f) => Formula::boxed(g, negate(f).nnf()),
                Formula::Box(g, f) => Formula::diamond(g, negate(f).nnf()),
            },
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(g) => matches!(g.as_ref(), Formula::Atom(_)),
            Formula::And(a, b) | Formula::Or(a, b) => a.is_nnf() && b.is_nnf(),
            Formula::Diamond(_, g) | Formula::Box(_, g) => g.is_nnf(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(_) | Formula::Diamond(..) | Formula::Box(..) => 3,
            Formula::Atom(_) => 4,
        }
    }
}

fn negate(f: &Formula) -> Formula {
    Formula::not(f.clone())
}

struct Paren<'a>(&'a Formula, u8);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Concrete syntax accepted by [`super::parse_formula`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p) => f.write_str(p),
            Formula::Not(g) => write!(f, "!{}", Paren(g, 3)),
            Formula::And(a, b) => write!(f, "{} && {}", Paren(a, 2), Paren(b, 3)),
            Formula::Or(a, b) => write!(f, "{} || {}", Paren(a, 1), Paren(b, 2)),
            Formula::Diamond(g, h) => write!(f, "<{g}>{}", Paren(h, 3)),
            Formula::Box(g, h) => write!(f, "[{g}]{}", Paren(h, 3)),
        }
    }
}

/// Named guard automata sharing one pushdown alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonTable {
    alphabet: Arc<PushdownAlphabet>,
    automata: BTreeMap<String, Tvpa>,
}

impl AutomatonTable {
    pub fn new(alphabet: Arc<PushdownAlphabet>) -> Self {
        AutomatonTable {
            alphabet,
            automata: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> &Arc<PushdownAlphabet> {
        &self.alphabet
    }

    pub fn insert(&mut self, name: &str, automaton: Tvpa) -> Result<()> {
        if **automaton.vps.alphabet() != *self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        if !crate::word::is_identifier(name) {
            return Err(Error::Input(format!("invalid automaton name `{name}`")));
        }
        if self.automata.contains_key(name) {
            return Err(Error::Input(format!("duplicate automaton `{name}`")));
        }
        self.automata.insert(name.to_string(), automaton);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Tvpa> {
        self.automata.get(name)
    }

    pub fn resolve(&self, name: &str) -> Result<&Tvpa> {
        self.get(name)
            .ok_or_else(|| Error::UnknownAutomaton(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.automata.contains_key(name)
    }

    pub fn automata(&self) -> &BTreeMap<String, Tvpa> {
        &self.automata
    }

    /// Adds every automaton of `other`; identical duplicates are shared.
    pub fn merge(&mut self, other: &AutomatonTable) -> Result<()> {
        if *other.alphabet != *self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        for (name, a) in &other.automata {
            match self.automata.get(name) {
                Some(existing) if existing == a => {}
                Some(_) => {
                    return Err(Error::Input(format!("conflicting definitions of `{name}`")))
                }
                None => {
                    self.automata.insert(name.clone(), a.clone());
                }
            }
        }
        Ok(())
    }

    /// Checks that every guard referenced by `f` (transitively through
    /// tests) exists and that the test reference graph is acyclic.
    pub fn check(&self, f: &Formula) -> Result<()> {
        let mut done = HashSet::new();
        let mut stack = Vec::new();
        for g in f.guards() {
            self.check_guard(g, &mut done, &mut stack)?;
        }
        Ok(())
    }

    fn check_guard<'a>(
        &'a self,
        name: &'a str,
        done: &mut HashSet<&'a str>,
        stack: &mut Vec<&'a str>,
    ) -> Result<()> {
        if done.contains(name) {
            return Ok(());
        }
        if stack.contains(&name) {
            return Err(Error::Cycle(name.to_string()));
        }
        let tvpa = self.resolve(name)?;
        stack.push(name);
        for test in tvpa.tests.values() {
            for g in test.guards() {
                self.check_guard(g, done, stack)?;
            }
        }
        stack.pop();
        done.insert(name);
        Ok(())
    }

    /// Validates every automaton and the acyclicity of all tests.
    pub fn check_all(&self) -> Result<()> {
        let mut done = HashSet::new();
        let mut stack = Vec::new();
        for name in self.automata.keys() {
            self.check_guard(name, &mut done, &mut stack)?;
        }
        Ok(())
    }

    /// Formula size: distinct subformulas (including tests of referenced
    /// guards, transitively) plus the states of every referenced guard,
    /// each guard counted once.
    pub fn formula_size(&self, f: &Formula) -> Result<usize> {
        self.check(f)?;
        let mut subformulas: HashSet<&Formula> = HashSet::new();
        let mut guards: BTreeSet<&str> = BTreeSet::new();
        let mut pending: Vec<&Formula> = vec![f];
        while let Some(g) = pending.pop() {
            g.visit(&mut |h| {
                subformulas.insert(h);
            });
            for name in g.guards() {
                if guards.insert(name) {
                    pending.extend(self.resolve(name)?.tests.values());
                }
            }
        }
        let states: usize = guards
            .iter()
            .map(|g| self.automata[*g].vps.state_count())
            .sum();
        Ok(subformulas.len() + states)
    }
}
