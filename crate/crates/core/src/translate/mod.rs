//! Constructions between formulas and automata.

mod aja_ops;
mod counter;
mod stair;
mod vldl_to_aja;

pub use aja_ops::{aja_complement, aja_intersection, aja_union, atom_aja};
pub use counter::{counter_alphabet, counter_formula, counter_ltl, counter_word};
pub use stair::{dpsa_to_vldl, dpsa_to_vldl_literal, empty_stack_guard, phi_st, STEP_GUARD};
pub use vldl_to_aja::{diamond_fresh_states, vldl_to_aja, AjaStateTag};

#[cfg(test)]
mod tests;
