//! Exact evaluation of formulas and acceptance of automata on lasso words.
//!
//! Everything a formula or automaton can observe from position `k` onwards
//! depends only on the suffix starting at `k`, so all tables are indexed by
//! suffix classes of the lasso.

mod acceptors;
mod ltl;

use std::collections::{BTreeSet, HashMap};

pub use acceptors::{aja_accepts, bvpa_accepts, dpsa_accepts};
pub use ltl::ltl_eval;

use crate::automata::{Rule, Tvpa, Vps, BOTTOM};
use crate::engines::{pre_star, PAutomaton, PdsRule, PushdownSystem, RuleKind};
use crate::error::{Error, Result};
use crate::logic::{AutomatonTable, Formula};
use crate::word::LassoWord;

/// Truth value per suffix class of one lasso.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SatTable(pub Vec<bool>);

impl SatTable {
    pub fn constant(classes: usize, value: bool) -> Self {
        SatTable(vec![value; classes])
    }

    pub fn class(&self, c: usize) -> bool {
        self.0[c]
    }

    /// Value at an arbitrary position of `word`.
    pub fn at(&self, word: &LassoWord, k: usize) -> bool {
        self.0[word.suffix_class(k)]
    }

    pub fn negate(&self) -> SatTable {
        SatTable(self.0.iter().map(|b| !b).collect())
    }

    fn zip(&self, other: &SatTable, f: impl Fn(bool, bool) -> bool) -> SatTable {
        SatTable(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }
}

/// The guard relation of one TVPA on one lasso, at class granularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardReach {
    /// `reach[c]`: classes `c'` such that `(k, l)` is in the relation for a
    /// position `k` of class `c` and some `l` of class `c'`.
    pub reach: Vec<BTreeSet<usize>>,
    /// Whether `(k, k)` is in the relation.
    pub epsilon: Vec<bool>,
}

/// Product of a VPS with the suffix classes of `word`: control
/// `q * classes + c` stands for state `q` about to read a position of class
/// `c`. Moves are only allowed out of controls satisfying `allowed`.
pub(crate) fn class_product(
    vps: &Vps,
    word: &LassoWord,
    allowed: &dyn Fn(usize, usize) -> bool,
) -> PushdownSystem {
    let classes = word.class_count();
    let mut pds = PushdownSystem::new(vps.state_count() * classes, vps.stack_symbol_count());
    for c in 0..classes {
        let a = word.letter_at(c);
        let next = word.next_class(c);
        for q in (0..vps.state_count()).filter(|&q| allowed(q, c)) {
            for rule in vps.rules_from(q, a) {
                let kind = match *rule {
                    Rule::Call { push, .. } => RuleKind::Push(push),
                    Rule::Return { pop, .. } if pop == BOTTOM => RuleKind::BottomRead,
                    Rule::Return { pop, .. } => RuleKind::Pop(pop),
                    Rule::Local { .. } => RuleKind::Internal,
                };
                pds.add_rule(PdsRule {
                    from: q * classes + c,
                    kind,
                    to: rule.to() * classes + next,
                    label: a.0,
                });
            }
        }
    }
    pds
}

/// Saturated automaton for the configurations `((q, c), γ)` of the class
/// product from which an accepting run of `tvpa` reaches a target class,
/// tests respected on the way.
pub(crate) fn guard_pre_star(
    tvpa: &Tvpa,
    word: &LassoWord,
    tests: &[Option<&SatTable>],
    target: &dyn Fn(usize) -> bool,
) -> PAutomaton {
    let classes = word.class_count();
    let allowed = |q: usize, c: usize| tests[q].map_or(true, |t| t.class(c));
    let pds = class_product(&tvpa.vps, word, &allowed);
    let targets = tvpa
        .finals
        .iter()
        .flat_map(|&q| {
            (0..classes)
                .filter(move |&c| target(c))
                .map(move |c| (q, c))
        })
        .filter(|&(q, c)| allowed(q, c))
        .map(|(q, c)| q * classes + c);
    let automaton = PAutomaton::any_stack(pds.controls(), pds.symbols(), targets);
    pre_star(&pds, &automaton)
}

/// Classes from which an initial run of `tvpa` reaches some target class.
fn guard_sources(
    tvpa: &Tvpa,
    word: &LassoWord,
    tests: &[Option<&SatTable>],
    target: &dyn Fn(usize) -> bool,
) -> Vec<bool> {
    let classes = word.class_count();
    let controls = tvpa.vps.state_count() * classes;
    let accepted = guard_pre_star(tvpa, word, tests, target).accepted_bottom(controls);
    (0..classes)
        .map(|c| tvpa.initial.iter().any(|&q| accepted[q * classes + c]))
        .collect()
}

pub(crate) fn state_tests<'a>(
    tvpa: &Tvpa,
    tests: &'a HashMap<Formula, SatTable>,
) -> Result<Vec<Option<&'a SatTable>>> {
    (0..tvpa.vps.state_count())
        .map(|q| match tvpa.test(q) {
            None => Ok(None),
            Some(f) => tests
                .get(f)
                .map(Some)
                .ok_or_else(|| Error::Contract(format!("no table for test `{f}`"))),
        })
        .collect()
}

/// The guard relation `R_A` on `word`; `tests` must hold a table for every
/// declared test of `tvpa`.
pub fn guard_reach(
    tvpa: &Tvpa,
    word: &LassoWord,
    tests: &HashMap<Formula, SatTable>,
) -> Result<GuardReach> {
    let classes = word.class_count();
    let per_state = state_tests(tvpa, tests)?;
    let mut reach = vec![BTreeSet::new(); classes];
    for end in 0..classes {
        let sources = guard_sources(tvpa, word, &per_state, &|c| c == end);
        for (c, &hit) in sources.iter().enumerate() {
            if hit {
                reach[c].insert(end);
            }
        }
    }
    let epsilon = (0..classes)
        .map(|c| {
            tvpa.initial
                .intersection(&tvpa.finals)
                .any(|&q| per_state[q].map_or(true, |t| t.class(c)))
        })
        .collect();
    Ok(GuardReach { reach, epsilon })
}

/// Memoizing evaluator for one automaton table and one lasso.
pub struct Evaluator<'a> {
    table: &'a AutomatonTable,
    word: &'a LassoWord,
    cache: HashMap<Formula, SatTable>,
}

impl<'a> Evaluator<'a> {
    pub fn new(table: &'a AutomatonTable, word: &'a LassoWord) -> Result<Self> {
        word.check_alphabet(table.alphabet())?;
        Ok(Evaluator {
            table,
            word,
            cache: HashMap::new(),
        })
    }

    pub fn word(&self) -> &LassoWord {
        self.word
    }

    pub fn evaluate(&mut self, f: &Formula) -> Result<SatTable> {
        self.table.check(f)?;
        self.eval(f)
    }

    fn eval(&mut self, f: &Formula) -> Result<SatTable> {
        if let Some(t) = self.cache.get(f) {
            return Ok(t.clone());
        }
        let classes = self.word.class_count();
        let alphabet = self.table.alphabet();
        let table = match f {
            Formula::Atom(p) => SatTable(
                (0..classes)
                    .map(|c| alphabet.holds(self.word.letter_at(c), p))
                    .collect(),
            ),
            Formula::Not(g) => self.eval(g)?.negate(),
            Formula::And(a, b) => self.eval(a)?.zip(&self.eval(b)?, |x, y| x && y),
            Formula::Or(a, b) => self.eval(a)?.zip(&self.eval(b)?, |x, y| x || y),
            Formula::Diamond(guard, g) => {
                let operand = self.eval(g)?;
                self.diamond(guard, &operand)?
            }
            Formula::Box(guard, g) => {
                let operand = self.eval(g)?.negate();
                self.diamond(guard, &operand)?.negate()
            }
        };
        self.cache.insert(f.clone(), table.clone());
        Ok(table)
    }

    fn diamond(&mut self, guard: &str, operand: &SatTable) -> Result<SatTable> {
        let table = self.table;
        let tvpa = table.resolve(guard)?;
        for test in tvpa.tests.values() {
            self.eval(test)?;
        }
        let per_state = state_tests(tvpa, &self.cache)?;
        Ok(SatTable(guard_sources(tvpa, self.word, &per_state, &|c| {
            operand.class(c)
        })))
    }

    /// Tables for every test of `tvpa`, for use with [`guard_reach`].
    pub fn test_tables(&mut self, tvpa: &Tvpa) -> Result<HashMap<Formula, SatTable>> {
        let mut out = HashMap::new();
        for test in tvpa.tests.values() {
            self.table.check(test)?;
            out.insert(test.clone(), self.eval(test)?);
        }
        Ok(out)
    }
}

pub fn evaluate(f: &Formula, table: &AutomatonTable, word: &LassoWord) -> Result<SatTable> {
    Evaluator::new(table, word)?.evaluate(f)
}

pub fn evaluate_at(
    f: &Formula,
    table: &AutomatonTable,
    word: &LassoWord,
    k: usize,
) -> Result<bool> {
    Ok(evaluate(f, table, word)?.at(word, k))
}

#[cfg(test)]
mod tests;
