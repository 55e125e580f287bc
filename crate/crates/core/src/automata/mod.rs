//! Visibly pushdown systems and the automaton models built on them: testing
//! VPAs (guards), Büchi VPAs, deterministic parity stair automata and
//! one-way alternating jumping automata.

mod aja;
mod dot;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub use aja::{Command, Direction, OneAja, PositiveBool};
pub use dot::{aja_to_dot, vps_to_dot};

use crate::logic::Formula;
use crate::word::{LetterClass, LetterId, PushdownAlphabet};

pub type StateId = usize;

/// Stack symbol index; index 0 is the bottom marker ⊥.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StackSym(pub usize);

pub const BOTTOM: StackSym = StackSym(0);
pub const BOTTOM_NAME: &str = "bot";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Call {
        from: StateId,
        letter: LetterId,
        to: StateId,
        push: StackSym,
    },
    Return {
        from: StateId,
        letter: LetterId,
        pop: StackSym,
        to: StateId,
    },
    Local {
        from: StateId,
        letter: LetterId,
        to: StateId,
    },
}

impl Rule {
    pub fn from(&self) -> StateId {
        match *self {
            Rule::Call { from, .. } | Rule::Return { from, .. } | Rule::Local { from, .. } => from,
        }
    }

    pub fn to(&self) -> StateId {
        match *self {
            Rule::Call { to, .. } | Rule::Return { to, .. } | Rule::Local { to, .. } => to,
        }
    }

    pub fn letter(&self) -> LetterId {
        match *self {
            Rule::Call { letter, .. }
            | Rule::Return { letter, .. }
            | Rule::Local { letter, .. } => letter,
        }
    }
}

/// A violated structural invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub invariant: &'static str,
    pub element: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.element)
    }
}

pub const DIAG_BOTTOM_PUSH: &str = "call pushes bottom marker";
pub const DIAG_CLASS: &str = "rule letter has the wrong class";
pub const DIAG_UNDECLARED: &str = "undeclared reference";
pub const DIAG_NONDET: &str = "nondeterministic";
pub const DIAG_INITIAL: &str = "exactly one initial state required";
pub const DIAG_DUPLICATE: &str = "duplicate name";
pub const DIAG_TOTAL: &str = "transition function not total";

/// A configuration `(q, γ)`; the stack is written top-first and ends with ⊥.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub stack: Vec<StackSym>,
}

impl Configuration {
    pub fn initial(state: StateId) -> Self {
        Configuration {
            state,
            stack: vec![BOTTOM],
        }
    }

    pub fn is_well_formed(&self) -> bool {
        self.stack.last() == Some(&BOTTOM)
            && self.stack.iter().filter(|&&s| s == BOTTOM).count() == 1
    }
}

/// A visibly pushdown system `(Q, Σ̃, Γ, Δ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vps {
    alphabet: Arc<PushdownAlphabet>,
    states: Vec<String>,
    /// Stack symbol names; entry 0 is ⊥.
    stack: Vec<String>,
    rules: Vec<Rule>,
    /// `index[q][a]` lists the rules leaving `q` on letter `a`.
    index: Vec<Vec<Vec<usize>>>,
}

impl Vps {
    /// `stack` lists the non-bottom stack symbols; ⊥ is added as symbol 0.
    pub fn new(
        alphabet: Arc<PushdownAlphabet>,
        states: Vec<String>,
        stack: Vec<String>,
        rules: Vec<Rule>,
    ) -> Self {
        let mut symbols = vec![BOTTOM_NAME.to_string()];
        symbols.extend(stack);
        let mut vps = Vps {
            alphabet,
            states,
            stack: symbols,
            rules,
            index: Vec::new(),
        };
        vps.reindex();
        vps
    }

    fn reindex(&mut self) {
        let (n, m) = (self.states.len(), self.alphabet.len());
        let mut index = vec![vec![Vec::new(); m]; n];
        for (i, r) in self.rules.iter().enumerate() {
            if r.from() < n && r.letter().0 < m {
                index[r.from()][r.letter().0].push(i);
            }
        }
        self.index = index;
    }

    pub fn alphabet(&self) -> &Arc<PushdownAlphabet> {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    /// All stack symbols including ⊥ at index 0.
    pub fn stack_symbols(&self) -> &[String] {
        &self.stack
    }

    pub fn stack_symbol_count(&self) -> usize {
        self.stack.len()
    }

    pub fn symbol_name(&self, s: StackSym) -> &str {
        &self.stack[s.0]
    }

    pub fn symbol_id(&self, name: &str) -> Option<StackSym> {
        self.stack.iter().position(|s| s == name).map(StackSym)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rules_from(&self, q: StateId, a: LetterId) -> impl Iterator<Item = &Rule> + '_ {
        self.index[q][a.0].iter().map(move |&i| &self.rules[i])
    }

    pub fn call_moves(
        &self,
        q: StateId,
        a: LetterId,
    ) -> impl Iterator<Item = (StateId, StackSym)> + '_ {
        self.rules_from(q, a).filter_map(|r| match *r {
            Rule::Call { to, push, .. } => Some((to, push)),
            _ => None,
        })
    }

    pub fn return_moves(
        &self,
        q: StateId,
        a: LetterId,
    ) -> impl Iterator<Item = (StackSym, StateId)> + '_ {
        self.rules_from(q, a).filter_map(|r| match *r {
            Rule::Return { pop, to, .. } => Some((pop, to)),
            _ => None,
        })
    }

    pub fn local_moves(&self, q: StateId, a: LetterId) -> impl Iterator<Item = StateId> + '_ {
        self.rules_from(q, a).filter_map(|r| match *r {
            Rule::Local { to, .. } => Some(to),
            _ => None,
        })
    }

    /// The `a`-labelled successors of `c` in the configuration graph.
    pub fn config_successors(&self, c: &Configuration, a: LetterId) -> Vec<Configuration> {
        let top = c.stack.first().copied().unwrap_or(BOTTOM);
        let mut out = Vec::new();
        for rule in self.rules_from(c.state, a) {
            match *rule {
                Rule::Call { to, push, .. } if self.alphabet.class(a) == LetterClass::Call => {
                    let mut stack = Vec::with_capacity(c.stack.len() + 1);
                    stack.push(push);
                    stack.extend_from_slice(&c.stack);
                    out.push(Configuration { state: to, stack });
                }
                Rule::Return { pop, to, .. } if self.alphabet.class(a) == LetterClass::Return => {
                    if pop == top {
                        let stack = if pop == BOTTOM {
                            c.stack.clone()
                        } else {
                            c.stack[1..].to_vec()
                        };
                        out.push(Configuration { state: to, stack });
                    }
                }
                Rule::Local { to, .. } if self.alphabet.class(a) == LetterClass::Local => {
                    out.push(Configuration {
                        state: to,
                        stack: c.stack.clone(),
                    });
                }
                _ => {}
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// At most one outgoing `a`-edge from every configuration.
    pub fn is_deterministic(&self) -> bool {
        self.nondeterminism().is_empty()
    }

    fn nondeterminism(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for q in 0..self.states.len() {
            for a in self.alphabet.ids() {
                let mut calls = 0;
                let mut locals = 0;
                let mut pops: BTreeMap<StackSym, usize> = BTreeMap::new();
                for r in self.rules_from(q, a) {
                    match r {
                        Rule::Call { .. } => calls += 1,
                        Rule::Local { .. } => locals += 1,
                        Rule::Return { pop, .. } => *pops.entry(*pop).or_default() += 1,
                    }
                }
                if calls > 1 || locals > 1 || pops.values().any(|&n| n > 1) {
                    out.push(Diagnostic {
                        invariant: DIAG_NONDET,
                        element: format!(
                            "state `{}` on letter `{}`",
                            self.states[q],
                            self.alphabet.name(a)
                        ),
                    });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for s in &self.states {
            if !seen.insert(s) {
                out.push(Diagnostic {
                    invariant: DIAG_DUPLICATE,
                    element: format!("state `{s}`"),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for s in &self.stack {
            if !seen.insert(s) {
                out.push(Diagnostic {
                    invariant: DIAG_DUPLICATE,
                    element: format!("stack symbol `{s}`"),
                });
            }
        }
        let n = self.states.len();
        for (i, r) in self.rules.iter().enumerate() {
            if r.from() >= n || r.to() >= n || !self.alphabet.contains(r.letter()) {
                out.push(Diagnostic {
                    invariant: DIAG_UNDECLARED,
                    element: format!("rule #{i}"),
                });
                continue;
            }
            let class = self.alphabet.class(r.letter());
            let (expected, sym) = match *r {
                Rule::Call { push, .. } => (LetterClass::Call, Some(push)),
                Rule::Return { pop, .. } => (LetterClass::Return, Some(pop)),
                Rule::Local { .. } => (LetterClass::Local, None),
            };
            if class != expected {
                out.push(Diagnostic {
                    invariant: DIAG_CLASS,
                    element: format!(
                        "rule #{i} uses {class} letter `{}` as a {expected}",
                        self.alphabet.name(r.letter())
                    ),
                });
            }
            if let Some(s) = sym {
                if s.0 >= self.stack.len() {
                    out.push(Diagnostic {
                        invariant: DIAG_UNDECLARED,
                        element: format!("rule #{i} stack symbol {}", s.0),
                    });
                }
            }
            if let Rule::Call { push: BOTTOM, .. } = r {
                out.push(Diagnostic {
                    invariant: DIAG_BOTTOM_PUSH,
                    element: format!("rule #{i} from `{}`", self.states[r.from()]),
                });
            }
        }
        out
    }
}

fn check_subset(set: &BTreeSet<StateId>, n: usize, what: &str, out: &mut Vec<Diagnostic>) {
    for &q in set {
        if q >= n {
            out.push(Diagnostic {
                invariant: DIAG_UNDECLARED,
                element: format!("{what} state {q}"),
            });
        }
    }
}

/// A testing VPA: guard automaton over finite infixes whose states may carry
/// test formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tvpa {
    pub vps: Vps,
    pub initial: BTreeSet<StateId>,
    pub finals: BTreeSet<StateId>,
    /// Declared tests; states without an entry are tested with `tt`.
    pub tests: BTreeMap<StateId, Formula>,
}

impl Tvpa {
    pub fn new(vps: Vps, initial: BTreeSet<StateId>, finals: BTreeSet<StateId>) -> Self {
        Tvpa {
            vps,
            initial,
            finals,
            tests: BTreeMap::new(),
        }
    }

    pub fn with_test(mut self, q: StateId, f: Formula) -> Self {
        self.tests.insert(q, f);
        self
    }

    pub fn test(&self, q: StateId) -> Option<&Formula> {
        self.tests.get(&q)
    }

    /// The total test map, with `tt` on every undeclared state.
    pub fn total_tests(&self) -> Vec<Formula> {
        let tt = Formula::tt(self.vps.alphabet());
        (0..self.vps.state_count())
            .map(|q| self.tests.get(&q).cloned().unwrap_or_else(|| tt.clone()))
            .collect()
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = self.vps.validate();
        let n = self.vps.state_count();
        check_subset(&self.initial, n, "initial", &mut out);
        check_subset(&self.finals, n, "final", &mut out);
        for &q in self.tests.keys() {
            if q >= n {
                out.push(Diagnostic {
                    invariant: DIAG_UNDECLARED,
                    element: format!("test on state {q}"),
                });
            }
        }
        out
    }
}

/// Büchi VPA over infinite words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bvpa {
    pub vps: Vps,
    pub initial: BTreeSet<StateId>,
    pub accepting: BTreeSet<StateId>,
}

impl Bvpa {
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = self.vps.validate();
        let n = self.vps.state_count();
        check_subset(&self.initial, n, "initial", &mut out);
        check_subset(&self.accepting, n, "accepting", &mut out);
        out
    }
}

/// Deterministic parity stair automaton: the parity condition is evaluated
/// only at the steps of the input word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dpsa {
    pub vps: Vps,
    pub initial: StateId,
    pub coloring: Vec<u32>,
}

impl Dpsa {
    pub fn even_states(&self) -> Vec<StateId> {
        (0..self.vps.state_count())
            .filter(|&q| self.coloring[q] % 2 == 0)
            .collect()
    }

    /// States whose color exceeds that of `q`.
    pub fn states_above(&self, q: StateId) -> BTreeSet<StateId> {
        (0..self.vps.state_count())
            .filter(|&p| self.coloring[p] > self.coloring[q])
            .collect()
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = self.vps.validate();
        let n = self.vps.state_count();
        if self.initial >= n {
            out.push(Diagnostic {
                invariant: DIAG_INITIAL,
                element: format!("initial state {}", self.initial),
            });
        }
        if self.coloring.len() != n {
            out.push(Diagnostic {
                invariant: DIAG_TOTAL,
                element: format!("coloring covers {} of {n} states", self.coloring.len()),
            });
        }
        out.extend(self.vps.nondeterminism());
        out
    }
}
