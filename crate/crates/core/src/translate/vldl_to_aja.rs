//! Formulas to one-way alternating jumping automata.

use std::collections::BTreeMap;

use super::aja_ops::{
    aja_complement, aja_intersection, aja_union, atom_aja, initial_moves, AjaBuilder,
};
use crate::automata::{Command, OneAja, PositiveBool, Rule, StackSym, StateId, Tvpa, BOTTOM};
use crate::error::Result;
use crate::logic::{AutomatonTable, Formula};
use crate::word::LetterClass;

/// Role of a state created for a diamond over a guard automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AjaStateTag {
    /// Simulates the guard in state `q`; `ignored` records a skipped call.
    Main {
        q: StateId,
        ignored: bool,
    },
    /// Verifies that the guard moves from `q` to `target` popping `symbol`.
    Verify {
        q: StateId,
        target: StateId,
        symbol: StackSym,
    },
    Sink,
    Imported {
        origin: String,
        state: String,
    },
}

impl AjaStateTag {
    pub fn name(&self, guard: &Tvpa) -> String {
        let vps = &guard.vps;
        match self {
            AjaStateTag::Main { q, ignored } => {
                format!("({},{})", vps.state_name(*q), *ignored as u8)
            }
            AjaStateTag::Verify { q, target, symbol } => format!(
                "({},{},{})",
                vps.state_name(*q),
                vps.state_name(*target),
                vps.symbol_name(*symbol)
            ),
            AjaStateTag::Sink => "rej".into(),
            AjaStateTag::Imported { origin, state } => format!("{origin}.{state}"),
        }
    }
}

/// Per-state formulas shared by all transitions of the diamond automaton.
struct TranslationTables {
    /// `χ^f(q, a)`: start the operand automaton if `q` is final.
    chi: Vec<Vec<PositiveBool>>,
    /// `θ_q^a`: start the automaton of the test of `q`.
    theta: Vec<Vec<PositiveBool>>,
}

/// An equivalent 1-AJA: accepts `w` iff `(w, 0) ⊨ f`.
pub fn vldl_to_aja(f: &Formula, table: &AutomatonTable) -> Result<OneAja> {
    table.check(f)?;
    translate(f, table)
}

fn translate(f: &Formula, table: &AutomatonTable) -> Result<OneAja> {
    let alphabet = table.alphabet();
    Ok(match f {
        Formula::Atom(p) => atom_aja(alphabet, p),
        Formula::Not(g) => aja_complement(&translate(g, table)?),
        Formula::And(a, b) => aja_intersection(&translate(a, table)?, &translate(b, table)?)?,
        Formula::Or(a, b) => aja_union(&translate(a, table)?, &translate(b, table)?)?,
        Formula::Diamond(g, h) => diamond(g, &translate(h, table)?, table)?,
        Formula::Box(g, h) => {
            let negated = aja_complement(&translate(h, table)?);
            aja_complement(&diamond(g, &negated, table)?)
        }
    })
}

fn diamond(guard_name: &str, operand: &OneAja, table: &AutomatonTable) -> Result<OneAja> {
    let guard = table.resolve(guard_name)?;
    let alphabet = table.alphabet();
    let vps = &guard.vps;
    let n = vps.state_count();
    let symbols = vps.stack_symbol_count();
    let letters = alphabet.len();
    let tag = |t: AjaStateTag| format!("{guard_name}.{}", t.name(guard));

    let mut b = AjaBuilder::new(alphabet);
    let rej = b.add_state(tag(AjaStateTag::Sink), 1);
    let mut main = vec![[0; 2]; n];
    for (q, slot) in main.iter_mut().enumerate() {
        for ignored in [false, true] {
            slot[ignored as usize] = b.add_state(tag(AjaStateTag::Main { q, ignored }), 1);
        }
    }
    // verify[q][target][symbol - 1]
    let mut verify = vec![vec![vec![0; symbols - 1]; n]; n];
    for q in 0..n {
        for target in 0..n {
            for s in 1..symbols {
                let t = AjaStateTag::Verify {
                    q,
                    target,
                    symbol: StackSym(s),
                };
                verify[q][target][s - 1] = b.add_state(tag(t), 1);
            }
        }
    }

    let op_offset = b.import(operand, &format!("{guard_name}.op."));
    // one automaton per distinct test formula
    let mut test_offsets: BTreeMap<&Formula, (OneAja, StateId)> = BTreeMap::new();
    for (i, test) in guard.tests.values().enumerate() {
        if !test_offsets.contains_key(test) {
            let aja = translate(test, table)?;
            let offset = b.import(&aja, &format!("{guard_name}.t{i}."));
            test_offsets.insert(test, (aja, offset));
        }
    }

    let adv = |q: StateId| PositiveBool::Cmd(Command::advance(q, rej));
    let jump = |q: StateId| PositiveBool::Cmd(Command::jump(q, rej));
    let tables = TranslationTables {
        chi: (0..n)
            .map(|q| {
                (0..letters)
                    .map(|a| {
                        if guard.finals.contains(&q) {
                            initial_moves(operand, a, op_offset)
                        } else {
                            adv(rej)
                        }
                    })
                    .collect()
            })
            .collect(),
        theta: (0..n)
            .map(|q| {
                (0..letters)
                    .map(|a| match guard.test(q) {
                        Some(t) => {
                            let (aja, offset) = &test_offsets[t];
                            initial_moves(aja, a, *offset)
                        }
                        None => PositiveBool::True,
                    })
                    .collect()
            })
            .collect(),
    };

    let (main, verify) = (&main, &verify);
    for a in alphabet.ids() {
        b.set(rej, a.0, adv(rej));
        for q in 0..n {
            let chi = &tables.chi[q][a.0];
            let theta = &tables.theta[q][a.0];
            let rules: Vec<&Rule> = vps.rules_from(q, a).collect();
            for ignored in [false, true] {
                let here = ignored as usize;
                let moves = match alphabet.class(a) {
                    LetterClass::Local => {
                        PositiveBool::or(rules.iter().map(|r| adv(main[r.to()][here])))
                    }
                    LetterClass::Call => PositiveBool::or(rules.iter().flat_map(|r| {
                        let Rule::Call { to, push, .. } = **r else {
                            unreachable!()
                        };
                        let jumps = (0..n).map(move |mid| {
                            PositiveBool::and([
                                adv(verify[to][mid][push.0 - 1]),
                                jump(main[mid][here]),
                            ])
                        });
                        jumps.chain([adv(main[to][1])]).collect::<Vec<_>>()
                    })),
                    LetterClass::Return if !ignored => {
                        PositiveBool::or(rules.iter().filter_map(|r| match **r {
                            Rule::Return { pop, to, .. } if pop == BOTTOM => Some(adv(main[to][0])),
                            _ => None,
                        }))
                    }
                    // a return after an ignored call refutes that guess;
                    // only acceptance right here remains possible
                    LetterClass::Return => PositiveBool::False,
                };
                let f = PositiveBool::and([PositiveBool::or([chi.clone(), moves]), theta.clone()]);
                b.set(main[q][here], a.0, f);
            }
            for target in 0..n {
                for s in 1..symbols {
                    let f = match alphabet.class(a) {
                        LetterClass::Local => PositiveBool::and([
                            PositiveBool::or(
                                rules.iter().map(|r| adv(verify[r.to()][target][s - 1])),
                            ),
                            theta.clone(),
                        ]),
                        LetterClass::Call => PositiveBool::and([
                            PositiveBool::or(rules.iter().flat_map(|r| {
                                let Rule::Call { to, push, .. } = **r else {
                                    unreachable!()
                                };
                                (0..n)
                                    .map(|mid| {
                                        PositiveBool::and([
                                            adv(verify[to][mid][push.0 - 1]),
                                            jump(verify[mid][target][s - 1]),
                                        ])
                                    })
                                    .collect::<Vec<_>>()
                            })),
                            theta.clone(),
                        ]),
                        LetterClass::Return => {
                            let matches = rules.iter().any(|r| {
                                matches!(**r, Rule::Return { pop, to, .. } if pop == StackSym(s) && to == target)
                            });
                            if matches {
                                theta.clone()
                            } else {
                                adv(rej)
                            }
                        }
                    };
                    b.set(verify[q][target][s - 1], a.0, f);
                }
            }
        }
    }
    Ok(b.finish(guard.initial.iter().map(|&q| main[q][0])))
}

/// States added by a diamond over a guard with `n` states and `m`
/// non-bottom stack symbols: `2n + n²m + 1`.
pub fn diamond_fresh_states(n: usize, m: usize) -> usize {
    2 * n + n * n * m + 1
}
