//! Building blocks and Boolean closure of 1-AJAs.

use std::sync::Arc;

use crate::automata::{Command, OneAja, PositiveBool, StateId};
use crate::error::{Error, Result};
use crate::word::PushdownAlphabet;

/// Incrementally assembled 1-AJA.
pub(crate) struct AjaBuilder {
    alphabet: Arc<PushdownAlphabet>,
    states: Vec<String>,
    delta: Vec<Vec<PositiveBool>>,
    coloring: Vec<u32>,
}

impl AjaBuilder {
    pub fn new(alphabet: &Arc<PushdownAlphabet>) -> Self {
        AjaBuilder {
            alphabet: alphabet.clone(),
            states: Vec::new(),
            delta: Vec::new(),
            coloring: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: String, color: u32) -> StateId {
        self.states.push(name);
        self.delta
            .push(vec![PositiveBool::False; self.alphabet.len()]);
        self.coloring.push(color);
        self.states.len() - 1
    }

    pub fn set(&mut self, q: StateId, a: usize, f: PositiveBool) {
        self.delta[q][a] = f;
    }

    /// Copies all states of `aja` (names prefixed) and returns the offset.
    pub fn import(&mut self, aja: &OneAja, prefix: &str) -> StateId {
        let offset = self.states.len();
        for (q, name) in aja.states.iter().enumerate() {
            self.states.push(format!("{prefix}{name}"));
            self.coloring.push(aja.coloring[q]);
            self.delta.push(
                aja.delta[q]
                    .iter()
                    .map(|f| f.map_states(&|s| s + offset))
                    .collect(),
            );
        }
        offset
    }

    pub fn finish(self, initial: impl IntoIterator<Item = StateId>) -> OneAja {
        OneAja {
            alphabet: self.alphabet,
            states: self.states,
            delta: self.delta,
            initial: initial.into_iter().collect(),
            coloring: self.coloring,
        }
    }
}

/// `⋁_{q ∈ I} δ(q, a)`, shifted by `offset`.
pub(crate) fn initial_moves(aja: &OneAja, a: usize, offset: StateId) -> PositiveBool {
    PositiveBool::or(
        aja.initial
            .iter()
            .map(|&q| aja.delta[q][a].map_states(&|s| s + offset)),
    )
}

fn check_alphabets(a: &OneAja, b: &OneAja) -> Result<()> {
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// Probe / accept / reject automaton for one proposition.
pub fn atom_aja(alphabet: &Arc<PushdownAlphabet>, p: &str) -> OneAja {
    let mut b = AjaBuilder::new(alphabet);
    let probe = b.add_state(format!("{p}?"), 1);
    let acc = b.add_state("acc".into(), 2);
    let rej = b.add_state("rej".into(), 1);
    for a in alphabet.ids() {
        let target = if alphabet.holds(a, p) { acc } else { rej };
        b.set(probe, a.0, PositiveBool::Cmd(Command::advance(target, rej)));
        b.set(acc, a.0, PositiveBool::Cmd(Command::advance(acc, rej)));
        b.set(rej, a.0, PositiveBool::Cmd(Command::advance(rej, rej)));
    }
    b.finish([probe])
}

/// Disjoint union with existential choice of the initial state.
pub fn aja_union(a1: &OneAja, a2: &OneAja) -> Result<OneAja> {
    check_alphabets(a1, a2)?;
    let mut b = AjaBuilder::new(&a1.alphabet);
    let o1 = b.import(a1, "l.");
    let o2 = b.import(a2, "r.");
    let initial: Vec<StateId> = a1
        .initial
        .iter()
        .map(|q| q + o1)
        .chain(a2.initial.iter().map(|q| q + o2))
        .collect();
    Ok(b.finish(initial))
}

/// Disjoint union below a fresh initial state that starts both automata.
pub fn aja_intersection(a1: &OneAja, a2: &OneAja) -> Result<OneAja> {
    check_alphabets(a1, a2)?;
    let mut b = AjaBuilder::new(&a1.alphabet);
    let q0 = b.add_state("and".into(), 1);
    let o1 = b.import(a1, "l.");
    let o2 = b.import(a2, "r.");
    for a in 0..a1.alphabet.len() {
        let f = PositiveBool::and([initial_moves(a1, a, o1), initial_moves(a2, a, o2)]);
        b.set(q0, a, f);
    }
    Ok(b.finish([q0]))
}

/// Dualization: one initial state, `∧`/`∨` swapped and colors shifted by
/// one, so the acceptance game is handed to the other player.
pub fn aja_complement(aja: &OneAja) -> OneAja {
    let mut b = AjaBuilder::new(&aja.alphabet);
    let initial = if aja.initial.len() == 1 {
        let offset = b.import(aja, "");
        aja.initial.iter().next().unwrap() + offset
    } else {
        // never re-entered, so its color is irrelevant
        let q0 = b.add_state("init".into(), 0);
        let offset = b.import(aja, "");
        for a in 0..aja.alphabet.len() {
            b.set(q0, a, initial_moves(aja, a, offset));
        }
        q0
    };
    for row in &mut b.delta {
        for f in row.iter_mut() {
            *f = f.dual();
        }
    }
    for c in &mut b.coloring {
        *c += 1;
    }
    b.finish([initial])
}
