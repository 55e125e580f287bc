//! Stair automata to formulas.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::automata::{Dpsa, Rule, StackSym, StateId, Tvpa, Vps, BOTTOM};
use crate::error::Result;
use crate::examples::unmatched_return_guard;
use crate::logic::{AutomatonTable, Formula};
use crate::word::PushdownAlphabet;

pub const STEP_GUARD: &str = "Ast";

/// `[A_st]ff`: no return ever drops below the current level.
///
/// This holds at `k` iff no return after `k` pops below the height at `k`.
/// At height 0 a return cannot lower the stack at all, so positions of
/// height 0 are steps even where this formula fails.
pub fn phi_st(alphabet: &Arc<PushdownAlphabet>) -> (Formula, AutomatonTable) {
    let mut table = AutomatonTable::new(alphabet.clone());
    table
        .insert(STEP_GUARD, unmatched_return_guard(alphabet))
        .unwrap();
    (Formula::boxed(STEP_GUARD, Formula::ff(alphabet)), table)
}

/// The DPSA's VPS with initial states `initial` and final states `finals`,
/// never accepting the empty word.
fn sub_guard(d: &Dpsa, initial: &BTreeSet<StateId>, finals: &BTreeSet<StateId>) -> Tvpa {
    if initial.is_disjoint(finals) {
        return Tvpa::new(d.vps.clone(), initial.clone(), finals.clone());
    }
    // a fresh initial state copying the moves of the old initial states
    let vps = &d.vps;
    let fresh = vps.state_count();
    let mut rules = vps.rules().to_vec();
    for r in vps.rules() {
        if initial.contains(&r.from()) {
            rules.push(match *r {
                Rule::Call {
                    letter, to, push, ..
                } => Rule::Call {
                    from: fresh,
                    letter,
                    to,
                    push,
                },
                Rule::Return {
                    letter, pop, to, ..
                } => Rule::Return {
                    from: fresh,
                    letter,
                    pop,
                    to,
                },
                Rule::Local { letter, to, .. } => Rule::Local {
                    from: fresh,
                    letter,
                    to,
                },
            });
        }
    }
    let mut states = vps.states().to_vec();
    states.push("start".into());
    let stack = vps.stack_symbols()[1..].to_vec();
    let vps = Vps::new(vps.alphabet().clone(), states, stack, rules);
    Tvpa::new(vps, [fresh].into(), finals.clone())
}

/// Product of a guard with an "own stack is empty" flag; accepts exactly
/// the runs of `g` that end with an empty stack.
pub fn empty_stack_guard(g: &Tvpa) -> Tvpa {
    let vps = &g.vps;
    let n = vps.state_count();
    let m = vps.stack_symbol_count();
    let state = |q: StateId, empty: bool| 2 * q + empty as usize;
    // (A, e) for every non-bottom A
    let symbol = |a: StackSym, empty: bool| StackSym(1 + 2 * (a.0 - 1) + empty as usize);
    let mut rules = Vec::new();
    for r in vps.rules() {
        for e in [false, true] {
            match *r {
                Rule::Call {
                    from,
                    letter,
                    to,
                    push,
                } => rules.push(Rule::Call {
                    from: state(from, e),
                    letter,
                    to: state(to, false),
                    push: symbol(push, e),
                }),
                Rule::Return {
                    from,
                    letter,
                    pop,
                    to,
                } if pop == BOTTOM => {
                    if e {
                        rules.push(Rule::Return {
                            from: state(from, true),
                            letter,
                            pop: BOTTOM,
                            to: state(to, true),
                        });
                    }
                }
                Rule::Return {
                    from,
                    letter,
                    pop,
                    to,
                } => {
                    // the popped symbol remembers the flag below it
                    rules.push(Rule::Return {
                        from: state(from, false),
                        letter,
                        pop: symbol(pop, e),
                        to: state(to, e),
                    })
                }
                Rule::Local { from, letter, to } => rules.push(Rule::Local {
                    from: state(from, e),
                    letter,
                    to: state(to, e),
                }),
            }
        }
    }
    let states = (0..n)
        .flat_map(|q| {
            [false, true].map(|e| format!("{}_{}", vps.state_name(q), if e { "e" } else { "n" }))
        })
        .collect();
    let stack = (1..m)
        .flat_map(|a| {
            [false, true].map(|e| {
                format!(
                    "{}_{}",
                    vps.symbol_name(StackSym(a)),
                    if e { "e" } else { "n" }
                )
            })
        })
        .collect();
    let vps = Vps::new(vps.alphabet().clone(), states, stack, rules);
    let initial = g.initial.iter().map(|&q| state(q, true)).collect();
    let finals = g.finals.iter().map(|&q| state(q, true)).collect();
    Tvpa::new(vps, initial, finals)
}

struct Guards<'a> {
    d: &'a Dpsa,
    table: AutomatonTable,
}

impl Guards<'_> {
    /// Registers `_{I'}A_{F'}` (and its empty-stack variant) under `name`.
    fn add(
        &mut self,
        name: &str,
        initial: BTreeSet<StateId>,
        finals: BTreeSet<StateId>,
        with_empty: bool,
    ) -> Result<()> {
        let g = sub_guard(self.d, &initial, &finals);
        if with_empty {
            self.table
                .insert(&format!("E{name}"), empty_stack_guard(&g))?;
        }
        self.table.insert(name, g)
    }
}

fn build(d: &Dpsa, corrected: bool) -> Result<(Formula, AutomatonTable)> {
    let alphabet = d.vps.alphabet().clone();
    let (st, st_table) = phi_st(&alphabet);
    let mut guards = Guards { d, table: st_table };
    let initial: BTreeSet<StateId> = [d.initial].into();
    let mut disjuncts = Vec::new();
    for q in d.even_states() {
        let to_q = format!("G_init_{q}");
        let above = format!("G_{q}_above");
        let again = format!("G_{q}_{q}");
        guards.add(&to_q, initial.clone(), [q].into(), corrected)?;
        guards.add(&above, [q].into(), d.states_above(q), corrected)?;
        guards.add(&again, [q].into(), [q].into(), corrected)?;
        let ff = Formula::ff(&alphabet);
        let tt = Formula::tt(&alphabet);
        let (phi1, phi2) = if corrected {
            // l is a step iff φ_st holds there or the guard's own stack is
            // empty (the guard started at a step)
            let never_above = Formula::and(
                Formula::boxed(&above, Formula::not(st.clone())),
                Formula::boxed(&format!("E{above}"), ff),
            );
            let phi1 = Formula::or(
                Formula::diamond(&to_q, Formula::and(st.clone(), never_above.clone())),
                Formula::diamond(&format!("E{to_q}"), never_above),
            );
            let revisit = Formula::or(
                Formula::diamond(&again, st.clone()),
                Formula::diamond(&format!("E{again}"), tt),
            );
            let phi2 = Formula::and(
                Formula::boxed(&to_q, Formula::implies(st.clone(), revisit.clone())),
                Formula::boxed(&format!("E{to_q}"), revisit),
            );
            (phi1, phi2)
        } else {
            let phi1 = Formula::diamond(
                &to_q,
                Formula::and(st.clone(), Formula::boxed(&above, Formula::not(st.clone()))),
            );
            let phi2 = Formula::boxed(
                &to_q,
                Formula::implies(st.clone(), Formula::diamond(&again, st.clone())),
            );
            (phi1, phi2)
        };
        disjuncts.push(Formula::and(phi1, phi2));
    }
    Ok((Formula::any(&alphabet, disjuncts), guards.table))
}

/// An equivalent formula: some even state is visited at a step, no higher
/// color is visited at a later step, and every step visit to it recurs.
///
/// Step positions are recognised as "φ_st holds, or the guard automaton
/// (started at a step) has an empty stack"; φ_st alone misses steps at
/// height 0 that are followed by returns on the empty stack.
pub fn dpsa_to_vldl(d: &Dpsa) -> Result<(Formula, AutomatonTable)> {
    build(d, true)
}

/// The same construction with steps recognised by φ_st alone.
pub fn dpsa_to_vldl_literal(d: &Dpsa) -> Result<(Formula, AutomatonTable)> {
    build(d, false)
}
