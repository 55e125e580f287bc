//! Test-free LDL and its embedding into VLDL via compiled regex guards.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{any_class_rules, AutomatonTable, Formula};
use crate::automata::{Tvpa, Vps};
use crate::error::{Error, Result};
use crate::word::{LetterId, PushdownAlphabet};

/// Predicate on a single letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LetterPred {
    Any,
    Prop(String),
    NotProp(String),
    Letter(String),
}

impl LetterPred {
    pub fn matches(&self, alphabet: &PushdownAlphabet, a: LetterId) -> bool {
        match self {
            LetterPred::Any => true,
            LetterPred::Prop(p) => alphabet.holds(a, p),
            LetterPred::NotProp(p) => !alphabet.holds(a, p),
            LetterPred::Letter(id) => alphabet.name(a) == id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Regex {
    Epsilon,
    Pred(LetterPred),
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
    /// `?φ`; parsed but not translatable.
    Test(Box<LdlFormula>),
}

impl Regex {
    pub fn pred(p: LetterPred) -> Self {
        Regex::Pred(p)
    }
    pub fn concat(a: Regex, b: Regex) -> Self {
        Regex::Concat(Box::new(a), Box::new(b))
    }
    pub fn union(a: Regex, b: Regex) -> Self {
        Regex::Union(Box::new(a), Box::new(b))
    }
    pub fn star(a: Regex) -> Self {
        Regex::Star(Box::new(a))
    }

    pub fn size(&self) -> usize {
        match self {
            Regex::Epsilon | Regex::Pred(_) => 1,
            Regex::Concat(a, b) | Regex::Union(a, b) => 1 + a.size() + b.size(),
            Regex::Star(a) => 1 + a.size(),
            Regex::Test(f) => 1 + f.size(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LdlFormula {
    True,
    False,
    Atom(String),
    Not(Box<LdlFormula>),
    And(Box<LdlFormula>, Box<LdlFormula>),
    Or(Box<LdlFormula>, Box<LdlFormula>),
    Diamond(Regex, Box<LdlFormula>),
    Box(Regex, Box<LdlFormula>),
}

impl LdlFormula {
    pub fn size(&self) -> usize {
        match self {
            LdlFormula::True | LdlFormula::False | LdlFormula::Atom(_) => 1,
            LdlFormula::Not(f) => 1 + f.size(),
            LdlFormula::And(a, b) | LdlFormula::Or(a, b) => 1 + a.size() + b.size(),
            LdlFormula::Diamond(r, f) | LdlFormula::Box(r, f) => 1 + r.size() + f.size(),
        }
    }
}

/// Thompson NFA: `eps[q]` ε-successors, `edges[q]` predicate edges.
#[derive(Default)]
struct Nfa {
    eps: Vec<Vec<usize>>,
    edges: Vec<Vec<(LetterPred, usize)>>,
}

impl Nfa {
    fn state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.edges.push(Vec::new());
        self.eps.len() - 1
    }

    /// Returns `(start, accept)`.
    fn build(&mut self, r: &Regex) -> Result<(usize, usize)> {
        Ok(match r {
            Regex::Epsilon => {
                let s = self.state();
                (s, s)
            }
            Regex::Pred(p) => {
                let (s, t) = (self.state(), self.state());
                self.edges[s].push((p.clone(), t));
                (s, t)
            }
            Regex::Concat(a, b) => {
                let (s1, t1) = self.build(a)?;
                let (s2, t2) = self.build(b)?;
                self.eps[t1].push(s2);
                (s1, t2)
            }
            Regex::Union(a, b) => {
                let (s, t) = (self.state(), self.state());
                let (s1, t1) = self.build(a)?;
                let (s2, t2) = self.build(b)?;
                self.eps[s].extend([s1, s2]);
                self.eps[t1].push(t);
                self.eps[t2].push(t);
                (s, t)
            }
            Regex::Star(a) => {
                let s = self.state();
                let (s1, t1) = self.build(a)?;
                self.eps[s].push(s1);
                self.eps[t1].push(s);
                (s, s)
            }
            Regex::Test(_) => {
                return Err(Error::Unsupported(
                    "test operator inside an LDL regex".into(),
                ))
            }
        })
    }

    fn closure(&self, q: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([q]);
        let mut stack = vec![q];
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s] {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    }
}

/// Compiles `r` to an ε-free automaton wrapped as a test-free TVPA that
/// reads letters of every class.
pub fn regex_guard(r: &Regex, alphabet: &Arc<PushdownAlphabet>) -> Result<Tvpa> {
    let mut nfa = Nfa::default();
    let (start, accept) = nfa.build(r)?;
    let n = nfa.eps.len();
    let closures: Vec<BTreeSet<usize>> = (0..n).map(|q| nfa.closure(q)).collect();

    // keep only the start state and targets of predicate edges
    let mut keep: BTreeSet<usize> = BTreeSet::from([start]);
    for row in &nfa.edges {
        keep.extend(row.iter().map(|(_, t)| *t));
    }
    let index: Vec<Option<usize>> = {
        let mut idx = vec![None; n];
        for (i, &q) in keep.iter().enumerate() {
            idx[q] = Some(i);
        }
        idx
    };

    let mut rules = BTreeSet::new();
    let mut finals = BTreeSet::new();
    for &q in &keep {
        let from = index[q].unwrap();
        if closures[q].contains(&accept) {
            finals.insert(from);
        }
        for &mid in &closures[q] {
            for (pred, t) in &nfa.edges[mid] {
                for a in alphabet.ids().filter(|&a| pred.matches(alphabet, a)) {
                    rules.extend(any_class_rules(alphabet, from, a, index[*t].unwrap()));
                }
            }
        }
    }
    let states = keep.iter().map(|q| format!("n{q}")).collect();
    let vps = Vps::new(
        alphabet.clone(),
        states,
        vec!["D".into()],
        rules.into_iter().collect(),
    );
    Ok(Tvpa::new(vps, [index[start].unwrap()].into(), finals))
}

struct Embedder {
    table: AutomatonTable,
}

impl Embedder {
    fn embed(&mut self, f: &LdlFormula) -> Result<Formula> {
        let alphabet = self.table.alphabet().clone();
        Ok(match f {
            LdlFormula::True => Formula::tt(&alphabet),
            LdlFormula::False => Formula::ff(&alphabet),
            LdlFormula::Atom(p) => Formula::atom(p),
            LdlFormula::Not(g) => Formula::not(self.embed(g)?),
            LdlFormula::And(a, b) => Formula::and(self.embed(a)?, self.embed(b)?),
            LdlFormula::Or(a, b) => Formula::or(self.embed(a)?, self.embed(b)?),
            LdlFormula::Diamond(r, g) | LdlFormula::Box(r, g) => {
                let guard = regex_guard(r, &alphabet)?;
                let name = format!("ldl_r{}", self.table.automata().len());
                self.table.insert(&name, guard)?;
                let g = self.embed(g)?;
                if matches!(f, LdlFormula::Diamond(..)) {
                    Formula::diamond(&name, g)
                } else {
                    Formula::boxed(&name, g)
                }
            }
        })
    }
}

pub fn ldl_to_vldl(
    f: &LdlFormula,
    alphabet: Arc<PushdownAlphabet>,
) -> Result<(Formula, AutomatonTable)> {
    let mut e = Embedder {
        table: AutomatonTable::new(alphabet),
    };
    let out = e.embed(f)?;
    Ok((out, e.table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn tests_inside_regexes_are_rejected() {
        let r = Regex::Test(Box::new(LdlFormula::True));
        let f = LdlFormula::Diamond(r, Box::new(LdlFormula::True));
        assert!(matches!(
            ldl_to_vldl(&f, examples::cla_alphabet()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn epsilon_regex_accepts_only_empty_word() {
        let g = regex_guard(&Regex::Epsilon, &examples::cla_alphabet()).unwrap();
        assert_eq!(g.vps.state_count(), 1);
        assert!(g.vps.rules().is_empty());
        assert_eq!(g.initial, g.finals);
    }

    #[test]
    fn star_guard_is_well_formed() {
        let alphabet = examples::cla_alphabet();
        let r = Regex::concat(
            Regex::star(Regex::pred(LetterPred::Letter("l".into()))),
            Regex::pred(LetterPred::Any),
        );
        let g = regex_guard(&r, &alphabet).unwrap();
        assert!(g.validate().is_empty());
        assert!(!g.finals.is_empty());
    }
}
