//! Bounded satisfiability/validity search and model checking of visibly
//! pushdown systems, both by bounded falsification and by exact emptiness
//! of the product with a bad-behavior automaton.

mod incremental;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::automata::{Bvpa, Configuration, Rule, StackSym, Tvpa, Vps, BOTTOM};
use crate::corpus::words_of_length;
use crate::engines::{buchi_witness, PdsRule, PushdownSystem, RuleKind};
use crate::error::{Error, Result};
use crate::logic::{AutomatonTable, Formula};
use crate::semantics::{bvpa_accepts, evaluate_at};
use crate::word::{LassoWord, LetterClass, LetterId, PushdownAlphabet};

use incremental::{Compiled, SuffixSearch};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_prefix: usize,
    pub max_period: usize,
    /// Restrict the search to these letters.
    pub letters: Option<Vec<LetterId>>,
}

impl SearchBounds {
    pub fn new(max_prefix: usize, max_period: usize) -> Self {
        SearchBounds {
            max_prefix,
            max_period,
            letters: None,
        }
    }

    fn letters(&self, alphabet: &PushdownAlphabet) -> Result<Vec<LetterId>> {
        if self.max_period == 0 {
            return Err(Error::Input("the period bound must be at least 1".into()));
        }
        let set: BTreeSet<LetterId> = match &self.letters {
            Some(ls) => ls.iter().copied().collect(),
            None => alphabet.ids().collect(),
        };
        if let Some(bad) = set.iter().find(|&&a| !alphabet.contains(a)) {
            return Err(Error::Input(format!(
                "letter {} is not in the alphabet",
                bad.0
            )));
        }
        Ok(set.into_iter().collect())
    }
}

/// Outcome of a bounded or exact search. `Holds` after a bounded search
/// means "holds within the bounds".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    WitnessFound(LassoWord),
    ExhaustedBounds,
    Holds,
    Counterexample(LassoWord),
}

/// Enumeration order: `|u|+|v|`, then `|u|`, then the letters of `u·v`.
pub fn length_lex(a: &LassoWord, b: &LassoWord) -> Ordering {
    let key = |w: &LassoWord| (w.prefix().len() + w.period().len(), w.prefix().len());
    key(a)
        .cmp(&key(b))
        .then_with(|| a.letters().cmp(b.letters()))
}

/// First lasso in length-lex order satisfying `f` at position 0.
pub fn bounded_sat(f: &Formula, table: &AutomatonTable, bounds: &SearchBounds) -> Result<Verdict> {
    let letters = bounds.letters(table.alphabet())?;
    let compiled = Compiled::new(f, table)?;
    let mut best: Option<LassoWord> = None;
    for len in 1..=bounds.max_period {
        for period in words_of_length(&letters, len) {
            if best
                .as_ref()
                .is_some_and(|b| b.prefix().len() + b.period().len() < len)
            {
                break;
            }
            let (mut search, values, entries) = SuffixSearch::new(&compiled, &letters, &period)?;
            let mut visit = |u: &[LetterId], holds: bool| {
                let total = u.len() + period.len();
                if holds {
                    let w = LassoWord::new(u.to_vec(), period.clone()).expect("nonempty period");
                    if best
                        .as_ref()
                        .map_or(true, |b| length_lex(&w, b) == Ordering::Less)
                    {
                        best = Some(w);
                    }
                }
                best.as_ref()
                    .map_or(true, |b| total < b.prefix().len() + b.period().len())
            };
            search.run(values, entries, bounds.max_prefix, &mut visit);
        }
    }
    match best {
        None => Ok(Verdict::ExhaustedBounds),
        Some(w) => {
            if !evaluate_at(f, table, &w, 0)? {
                return Err(Error::Internal(format!(
                    "witness {} fails re-evaluation",
                    w.display(table.alphabet())
                )));
            }
            Ok(Verdict::WitnessFound(w))
        }
    }
}

/// Reports the truth of `f` at position 0 for every lasso within `bounds`,
/// sharing work between lassos with a common suffix. Lassos arrive grouped
/// by period, not in length-lex order.
pub fn evaluate_all(
    f: &Formula,
    table: &AutomatonTable,
    bounds: &SearchBounds,
    visit: &mut dyn FnMut(&LassoWord, bool),
) -> Result<()> {
    let letters = bounds.letters(table.alphabet())?;
    let compiled = Compiled::new(f, table)?;
    for len in 1..=bounds.max_period {
        for period in words_of_length(&letters, len) {
            let (mut search, values, entries) = SuffixSearch::new(&compiled, &letters, &period)?;
            search.run(values, entries, bounds.max_prefix, &mut |u, holds| {
                visit(
                    &LassoWord::new(u.to_vec(), period.clone()).expect("nonempty period"),
                    holds,
                );
                true
            });
        }
    }
    Ok(())
}

/// `bounded_sat(¬f)` read as a validity check.
pub fn bounded_validity(
    f: &Formula,
    table: &AutomatonTable,
    bounds: &SearchBounds,
) -> Result<Verdict> {
    Ok(
        match bounded_sat(&Formula::not(f.clone()), table, bounds)? {
            Verdict::WitnessFound(w) => Verdict::Counterexample(w),
            _ => Verdict::Holds,
        },
    )
}

/// The traces of `s` from `q0`, as a Büchi automaton accepting everywhere.
pub fn trace_automaton(s: &Vps, q0: usize) -> Bvpa {
    Bvpa {
        vps: s.clone(),
        initial: [q0].into(),
        accepting: (0..s.state_count()).collect(),
    }
}

fn check_state(s: &Vps, q0: usize) -> Result<()> {
    if q0 >= s.state_count() {
        return Err(Error::Input(format!("unknown state {q0}")));
    }
    Ok(())
}

/// Whether `v` can be read from `(p, γ)` back into `p` without touching
/// the entry stack. A pop of ⊥ at the entry level is allowed only when the
/// entry stack is empty and `v` is balanced, so that every iteration sees
/// the same configuration.
fn repeatable_from(s: &Vps, p: usize, stack: &[StackSym], v: &[LetterId]) -> bool {
    let entry_empty = stack == [BOTTOM];
    // (state, symbols pushed within v, popped ⊥)
    let mut frontier: BTreeSet<(usize, Vec<StackSym>, bool)> = [(p, Vec::new(), false)].into();
    for &a in v {
        let mut next = BTreeSet::new();
        for (q, pushed, used_bottom) in &frontier {
            for rule in s.rules_from(*q, a) {
                let mut pushed = pushed.clone();
                let mut used_bottom = *used_bottom;
                match *rule {
                    Rule::Call { push, .. } => pushed.push(push),
                    Rule::Local { .. } => {}
                    Rule::Return { pop, .. } => match pushed.last() {
                        Some(&top) if top == pop => {
                            pushed.pop();
                        }
                        Some(_) => continue,
                        None if entry_empty && pop == BOTTOM => used_bottom = true,
                        None => continue,
                    },
                }
                next.insert((rule.to(), pushed, used_bottom));
            }
        }
        frontier = next;
    }
    frontier
        .iter()
        .any(|(q, pushed, used_bottom)| *q == p && !(*used_bottom && !pushed.is_empty()))
}

/// Whether `u·v^ω` is a trace of `s` via a run that repeats on `v`.
pub fn is_repeatable_trace(s: &Vps, q0: usize, w: &LassoWord) -> bool {
    let mut configs: BTreeSet<Configuration> = [Configuration::initial(q0)].into();
    for &a in w.prefix() {
        configs = configs
            .iter()
            .flat_map(|c| s.config_successors(c, a))
            .collect();
    }
    configs
        .iter()
        .any(|c| repeatable_from(s, c.state, &c.stack, w.period()))
}

/// First repeatable trace lasso of `s` (length-lex) violating `f` at
/// position 0.
pub fn bounded_refute(
    s: &Vps,
    q0: usize,
    f: &Formula,
    table: &AutomatonTable,
    bounds: &SearchBounds,
) -> Result<Verdict> {
    check_state(s, q0)?;
    if **s.alphabet() != **table.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    table.check(f)?;
    let letters = bounds.letters(table.alphabet())?;
    let traces = trace_automaton(s, q0);
    for total in 1..=bounds.max_prefix + bounds.max_period {
        for ul in
            (0..=bounds.max_prefix.min(total - 1)).filter(|&ul| total - ul <= bounds.max_period)
        {
            for word in words_of_length(&letters, total) {
                let w = LassoWord::new(word[..ul].to_vec(), word[ul..].to_vec())?;
                if !is_repeatable_trace(s, q0, &w) || evaluate_at(f, table, &w, 0)? {
                    continue;
                }
                if !bvpa_accepts(&traces, &w)? {
                    return Err(Error::Internal(format!(
                        "{} is not a trace",
                        w.display(table.alphabet())
                    )));
                }
                return Ok(Verdict::Counterexample(w));
            }
        }
    }
    Ok(Verdict::ExhaustedBounds)
}

/// Synchronized product of `s` and `bad`: control `p * |Q_bad| + b`, stack
/// symbol pairs `(A, B)` packed as `1 + (A-1)(|Γ_bad|-1) + (B-1)`.
fn product(s: &Vps, bad: &Vps) -> PushdownSystem {
    let nb = bad.state_count();
    let gb = bad.stack_symbol_count();
    let symbols = 1 + (s.stack_symbol_count() - 1) * (gb - 1);
    let pair = |x: StackSym, y: StackSym| StackSym(1 + (x.0 - 1) * (gb - 1) + (y.0 - 1));
    let mut pds = PushdownSystem::new(s.state_count() * nb, symbols);
    for p in 0..s.state_count() {
        for b in 0..nb {
            for a in s.alphabet().ids() {
                for r in s.rules_from(p, a) {
                    for t in bad.rules_from(b, a) {
                        let kind = match (*r, *t) {
                            (Rule::Call { push: x, .. }, Rule::Call { push: y, .. }) => {
                                RuleKind::Push(pair(x, y))
                            }
                            (Rule::Local { .. }, Rule::Local { .. }) => RuleKind::Internal,
                            (Rule::Return { pop: x, .. }, Rule::Return { pop: y, .. }) => {
                                match (x == BOTTOM, y == BOTTOM) {
                                    (true, true) => RuleKind::BottomRead,
                                    (false, false) => RuleKind::Pop(pair(x, y)),
                                    // the stacks have equal height
                                    _ => continue,
                                }
                            }
                            _ => unreachable!("rules on one letter share its class"),
                        };
                        pds.add_rule(PdsRule {
                            from: p * nb + b,
                            kind,
                            to: r.to() * nb + t.to(),
                            label: a.0,
                        });
                    }
                }
            }
        }
    }
    pds
}

/// Exact check of `traces(s, q0) ∩ L(bad) = ∅`, with a validated lasso
/// counterexample otherwise.
pub fn intersect_empty(s: &Vps, q0: usize, bad: &Bvpa) -> Result<Verdict> {
    check_state(s, q0)?;
    if **s.alphabet() != **bad.vps.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let nb = bad.vps.state_count();
    let pds = product(s, &bad.vps);
    let accepting: Vec<usize> = (0..s.state_count())
        .flat_map(|p| bad.accepting.iter().map(move |&b| p * nb + b))
        .collect();
    for &b in &bad.initial {
        if let Some(wit) = buchi_witness(&pds, q0 * nb + b, &accepting) {
            let w = LassoWord::new(
                wit.prefix.into_iter().map(LetterId).collect(),
                wit.period.into_iter().map(LetterId).collect(),
            )?;
            if !bvpa_accepts(bad, &w)? || !bvpa_accepts(&trace_automaton(s, q0), &w)? {
                return Err(Error::Internal(format!(
                    "product witness {} fails re-validation",
                    w.display(s.alphabet())
                )));
            }
            return Ok(Verdict::Counterexample(w));
        }
    }
    Ok(Verdict::Holds)
}

/// Büchi automaton for the words with a prefix accepted by the test-free
/// guard `g`, i.e. the models of `⟨g⟩tt`.
pub fn guard_prefix_automaton(g: &Tvpa) -> Result<Bvpa> {
    if !g.tests.is_empty() {
        return Err(Error::Unsupported("guards with tests".into()));
    }
    let vps = &g.vps;
    let alphabet = vps.alphabet();
    let done = vps.state_count();
    let any = StackSym(vps.stack_symbol_count());
    let mut rules = vps.rules().to_vec();
    for from in g.finals.iter().copied().chain([done]) {
        for a in alphabet.ids() {
            match alphabet.class(a) {
                LetterClass::Call => rules.push(Rule::Call {
                    from,
                    letter: a,
                    to: done,
                    push: any,
                }),
                LetterClass::Local => rules.push(Rule::Local {
                    from,
                    letter: a,
                    to: done,
                }),
                LetterClass::Return => rules.extend((0..=any.0).map(|s| Rule::Return {
                    from,
                    letter: a,
                    pop: StackSym(s),
                    to: done,
                })),
            }
        }
    }
    let mut states = vps.states().to_vec();
    states.push("done".into());
    let mut stack = vps.stack_symbols()[1..].to_vec();
    stack.push("any".into());
    Ok(Bvpa {
        vps: Vps::new(alphabet.clone(), states, stack, rules),
        initial: g.initial.clone(),
        accepting: [done].into(),
    })
}
