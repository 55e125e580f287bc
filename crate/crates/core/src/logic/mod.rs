//! VLDL syntax, the concrete grammar, and the LTL/LDL embeddings.

mod formula;
pub mod ldl;
pub mod ltl;
mod parser;

pub use formula::{AutomatonTable, Formula};
pub use ldl::{ldl_to_vldl, LdlFormula, LetterPred, Regex};
pub use ltl::{ltl_to_vldl, LtlFormula};
pub use parser::{parse_formula, parse_formula_with};

use crate::automata::{Rule, StackSym, Tvpa, Vps, BOTTOM};
use crate::word::{LetterClass, LetterId, PushdownAlphabet};
use std::sync::Arc;

/// Rules moving `from → to` on letter `a` whatever its class: calls push the
/// dummy symbol 1, returns pop either the dummy or ⊥.
pub(crate) fn any_class_rules(
    alphabet: &PushdownAlphabet,
    from: usize,
    a: LetterId,
    to: usize,
) -> Vec<Rule> {
    match alphabet.class(a) {
        LetterClass::Call => vec![Rule::Call {
            from,
            letter: a,
            to,
            push: StackSym(1),
        }],
        LetterClass::Return => vec![
            Rule::Return {
                from,
                letter: a,
                pop: StackSym(1),
                to,
            },
            Rule::Return {
                from,
                letter: a,
                pop: BOTTOM,
                to,
            },
        ],
        LetterClass::Local => vec![Rule::Local {
            from,
            letter: a,
            to,
        }],
    }
}

/// A two-state guard `q0 → q1` over the letters selected by `pick`, with a
/// loop on `q0` over all letters when `looping`.
pub(crate) fn stack_agnostic_guard(
    alphabet: &Arc<PushdownAlphabet>,
    looping: bool,
    initial_final: bool,
) -> Tvpa {
    let mut rules = Vec::new();
    for a in alphabet.ids() {
        if looping {
            rules.extend(any_class_rules(alphabet, 0, a, 0));
        }
        rules.extend(any_class_rules(alphabet, 0, a, 1));
    }
    let vps = Vps::new(
        alphabet.clone(),
        vec!["q0".into(), "qf".into()],
        vec!["D".into()],
        rules,
    );
    let initial = if initial_final {
        [0, 1].into()
    } else {
        [0].into()
    };
    Tvpa::new(vps, initial, [1].into())
}
