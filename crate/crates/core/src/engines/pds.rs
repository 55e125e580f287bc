use std::collections::{BTreeSet, HashSet};

use crate::automata::{Configuration, StackSym, BOTTOM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    /// `⟨p, γ⟩ → ⟨p', Bγ⟩` for every `γ`.
    Push(StackSym),
    /// `⟨p, A⟩ → ⟨p', ε⟩` with `A ≠ ⊥`.
    Pop(StackSym),
    /// `⟨p, γ⟩ → ⟨p', γ⟩` for every `γ`.
    Internal,
    /// `⟨p, ⊥⟩ → ⟨p', ⊥⟩`: a pop attempted on the empty stack.
    BottomRead,
}

/// A rule together with an opaque label (a letter index in our products).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PdsRule {
    pub from: usize,
    pub kind: RuleKind,
    pub to: usize,
    pub label: usize,
}

/// Pushdown system over controls `0..controls` and stack symbols
/// `0..symbols`, symbol 0 being ⊥.
#[derive(Debug, Clone, Default)]
pub struct PushdownSystem {
    controls: usize,
    symbols: usize,
    rules: Vec<PdsRule>,
}

impl PushdownSystem {
    pub fn new(controls: usize, symbols: usize) -> Self {
        PushdownSystem {
            controls,
            symbols: symbols.max(1),
            rules: Vec::new(),
        }
    }

    pub fn controls(&self) -> usize {
        self.controls
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn rules(&self) -> &[PdsRule] {
        &self.rules
    }

    pub fn add_rule(&mut self, rule: PdsRule) {
        match rule.kind {
            RuleKind::Push(b) => assert!(b != BOTTOM && b.0 < self.symbols, "invalid push"),
            RuleKind::Pop(a) => assert!(a != BOTTOM && a.0 < self.symbols, "invalid pop"),
            _ => {}
        }
        assert!(rule.from < self.controls && rule.to < self.controls);
        self.rules.push(rule);
    }

    pub fn add_push(&mut self, from: usize, to: usize, sym: StackSym) {
        self.add_rule(PdsRule {
            from,
            kind: RuleKind::Push(sym),
            to,
            label: 0,
        });
    }

    pub fn add_pop(&mut self, from: usize, sym: StackSym, to: usize) {
        self.add_rule(PdsRule {
            from,
            kind: RuleKind::Pop(sym),
            to,
            label: 0,
        });
    }

    pub fn add_internal(&mut self, from: usize, to: usize) {
        self.add_rule(PdsRule {
            from,
            kind: RuleKind::Internal,
            to,
            label: 0,
        });
    }

    pub fn add_bottom_read(&mut self, from: usize, to: usize) {
        self.add_rule(PdsRule {
            from,
            kind: RuleKind::BottomRead,
            to,
            label: 0,
        });
    }

    /// One-step successors of a configuration, with rule labels.
    pub fn successors(&self, c: &Configuration) -> Vec<(usize, Configuration)> {
        let top = c.stack[0];
        let mut out = Vec::new();
        for r in self.rules.iter().filter(|r| r.from == c.state) {
            let stack = match r.kind {
                RuleKind::Push(b) => {
                    let mut s = vec![b];
                    s.extend_from_slice(&c.stack);
                    s
                }
                RuleKind::Pop(a) if a == top => c.stack[1..].to_vec(),
                RuleKind::Internal => c.stack.clone(),
                RuleKind::BottomRead if top == BOTTOM => c.stack.clone(),
                _ => continue,
            };
            out.push((r.label, Configuration { state: r.to, stack }));
        }
        out
    }
}

/// Finite automaton over stack symbols whose states `0..controls` double as
/// the control states; `(p, γ)` is accepted iff `γ` leads from `p` to a
/// final state.
#[derive(Debug, Clone)]
pub struct PAutomaton {
    states: usize,
    finals: BTreeSet<usize>,
    trans: HashSet<(usize, usize, usize)>,
}

impl PAutomaton {
    pub fn new(states: usize) -> Self {
        PAutomaton {
            states,
            finals: BTreeSet::new(),
            trans: HashSet::new(),
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn is_final(&self, s: usize) -> bool {
        self.finals.contains(&s)
    }

    pub fn set_final(&mut self, s: usize) {
        self.finals.insert(s);
    }

    pub fn add_transition(&mut self, from: usize, sym: StackSym, to: usize) {
        self.trans.insert((from, sym.0, to));
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, StackSym, usize)> + '_ {
        self.trans.iter().map(|&(a, s, b)| (a, StackSym(s), b))
    }

    pub fn transition_count(&self) -> usize {
        self.trans.len()
    }

    /// Accepts `(p, γ)` for `p` in `controls` and every stack `γ`.
    pub fn any_stack(
        total_controls: usize,
        symbols: usize,
        controls: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut a = PAutomaton::new(total_controls);
        let sink = a.add_state();
        a.set_final(sink);
        for s in 0..symbols {
            a.add_transition(sink, StackSym(s), sink);
        }
        for p in controls {
            for s in 0..symbols {
                a.add_transition(p, StackSym(s), sink);
            }
        }
        a
    }

    pub fn accepts(&self, c: &Configuration) -> bool {
        let mut current: BTreeSet<usize> = [c.state].into();
        for sym in &c.stack {
            current = self
                .trans
                .iter()
                .filter(|(a, s, _)| *s == sym.0 && current.contains(a))
                .map(|&(_, _, b)| b)
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|s| self.finals.contains(s))
    }

    /// Controls `p` with `(p, ⊥)` accepted; faster than [`Self::accepts`].
    pub fn accepted_bottom(&self, controls: usize) -> Vec<bool> {
        let mut out = vec![false; controls];
        for &(a, s, b) in &self.trans {
            if s == 0 && a < controls && self.finals.contains(&b) {
                out[a] = true;
            }
        }
        out
    }
}

/// Saturates `target` into an automaton for all configurations from which
/// some run reaches a configuration accepted by `target`.
pub fn pre_star(pds: &PushdownSystem, target: &PAutomaton) -> PAutomaton {
    let n = pds.controls;
    let states = target.states.max(n);
    // index rules by their target control
    let mut internal_into: Vec<Vec<usize>> = vec![Vec::new(); states];
    let mut internal_seen: HashSet<(usize, usize)> = HashSet::new();
    let mut bottom_into: Vec<Vec<usize>> = vec![Vec::new(); states];
    let mut push_into: Vec<Vec<(usize, usize)>> = vec![Vec::new(); states];
    let mut worklist: Vec<(usize, usize, usize)> = target.trans.iter().copied().collect();
    for r in &pds.rules {
        match r.kind {
            RuleKind::Internal => {
                if internal_seen.insert((r.from, r.to)) {
                    internal_into[r.to].push(r.from);
                }
            }
            RuleKind::BottomRead => bottom_into[r.to].push(r.from),
            RuleKind::Push(b) => push_into[r.to].push((r.from, b.0)),
            RuleKind::Pop(a) => worklist.push((r.from, a.0, r.to)),
        }
    }

    let mut rel: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut out_of: Vec<Vec<(usize, usize)>> = vec![Vec::new(); states];
    while let Some(t @ (q, sym, q2)) = worklist.pop() {
        if !rel.insert(t) {
            continue;
        }
        out_of[q].push((sym, q2));
        for &p in &internal_into[q] {
            worklist.push((p, sym, q2));
        }
        if sym == 0 {
            for &p in &bottom_into[q] {
                worklist.push((p, 0, q2));
            }
        }
        let pushes: Vec<usize> = push_into[q]
            .iter()
            .filter(|(_, b)| *b == sym)
            .map(|(p, _)| *p)
            .collect();
        for p in pushes {
            // ⟨p, γ⟩ → ⟨q, sym γ⟩ and q -sym-> q2: p behaves like q2 on γ
            if internal_seen.insert((p, q2)) {
                internal_into[q2].push(p);
                for &(s, q3) in &out_of[q2] {
                    worklist.push((p, s, q3));
                }
            }
        }
    }
    PAutomaton {
        states,
        finals: target.finals.clone(),
        trans: rel,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(state: usize, stack: &[usize]) -> Configuration {
        Configuration {
            state,
            stack: stack.iter().map(|&s| StackSym(s)).collect(),
        }
    }

    #[test]
    fn internal_rule_reaches_target() {
        let mut pds = PushdownSystem::new(2, 1);
        pds.add_internal(0, 1);
        let mut target = PAutomaton::new(2);
        let f = target.add_state();
        target.set_final(f);
        target.add_transition(1, BOTTOM, f);
        let pre = pre_star(&pds, &target);
        assert!(pre.accepts(&config(0, &[0])));
        assert!(pre.accepts(&config(1, &[0])));
    }

    #[test]
    fn push_only_system_cannot_empty_the_stack() {
        let mut pds = PushdownSystem::new(1, 2);
        pds.add_push(0, 0, StackSym(1));
        let mut target = PAutomaton::new(1);
        let f = target.add_state();
        target.set_final(f);
        target.add_transition(0, BOTTOM, f);
        let pre = pre_star(&pds, &target);
        assert!(pre.accepts(&config(0, &[0])));
        assert!(!pre.accepts(&config(0, &[1, 0])));
        assert_eq!(pre.transition_count(), target.transition_count());
    }

    #[test]
    fn push_then_pop_summarises() {
        let mut pds = PushdownSystem::new(3, 2);
        pds.add_push(0, 1, StackSym(1));
        pds.add_pop(1, StackSym(1), 2);
        let target = PAutomaton::any_stack(3, 2, [2]);
        let pre = pre_star(&pds, &target);
        assert!(pre.accepts(&config(0, &[0])));
        assert!(pre.accepts(&config(0, &[1, 1, 0])));
        assert!(!pre.accepts(&config(1, &[0])));
    }
}
