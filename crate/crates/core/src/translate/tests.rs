use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::automata::{Dpsa, Rule, Vps, BOTTOM};
use crate::corpus::{all_lassos, random_alphabet, random_dpsa, random_instance, random_lasso};
use crate::examples::{self, cla_alphabet};
use crate::logic::Formula;
use crate::semantics::{aja_accepts, dpsa_accepts, evaluate, evaluate_at, ltl_eval};
use crate::word::{LassoWord, LetterClass, LetterId, StackProfile};

#[test]
fn atom_automaton_on_single_letter_lassos() {
    let alphabet = cla_alphabet();
    let aja = atom_aja(&alphabet, "p");
    assert_eq!(aja.state_count(), 3);
    for w in all_lassos(&alphabet, 0, 1) {
        let expected = alphabet.holds(w.letter_at(0), "p");
        assert_eq!(aja_accepts(&aja, &w).unwrap(), expected);
        let neg = aja_complement(&aja);
        assert_eq!(aja_accepts(&neg, &w).unwrap(), !expected);
    }
}

#[test]
fn diamond_state_count() {
    let table = examples::example1_table();
    let f = Formula::diamond("Ac", Formula::atom("p"));
    let aja = vldl_to_aja(&f, &table).unwrap();
    assert_eq!(diamond_fresh_states(2, 1), 9);
    assert_eq!(aja.state_count(), 9 + 3);
    assert!(aja.validate().is_empty());
}

#[test]
fn translation_agrees_with_evaluator() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let inst = random_instance(&mut rng, 12);
        let aja = vldl_to_aja(&inst.formula, &inst.table).unwrap();
        let alphabet = inst.table.alphabet().clone();
        for _ in 0..3 {
            let w = random_lasso(&mut rng, &alphabet, 4, 3);
            let expected = evaluate_at(&inst.formula, &inst.table, &w, 0).unwrap();
            assert_eq!(
                aja_accepts(&aja, &w).unwrap(),
                expected,
                "{} on {}",
                inst.formula,
                w.display(&alphabet)
            );
        }
    }
}

#[test]
fn example_one_translation() {
    let table = examples::example1_table();
    let f = crate::logic::parse_formula(examples::EXAMPLE1_FORMULA, &table).unwrap();
    let aja = vldl_to_aja(&f, &table).unwrap();
    let alphabet = table.alphabet();
    for (text, expected) in [
        ("c p r ; q", false),
        ("c p r p ; q", true),
        (" ; q", true),
        ("cp ; c p r", false),
    ] {
        let w = LassoWord::parse(alphabet, text).unwrap();
        assert_eq!(evaluate_at(&f, &table, &w, 0).unwrap(), expected, "{text}");
        assert_eq!(aja_accepts(&aja, &w).unwrap(), expected, "{text}");
    }
}

#[test]
fn boolean_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let a = random_instance(&mut rng, 8);
        let alphabet = a.table.alphabet().clone();
        let a1 = vldl_to_aja(&a.formula, &a.table).unwrap();
        let f2 = crate::corpus::random_formula(&mut rng, &a.table, 2);
        let a2 = vldl_to_aja(&f2, &a.table).unwrap();
        let reject = vldl_to_aja(&Formula::ff(&alphabet), &a.table).unwrap();
        let accept = vldl_to_aja(&Formula::tt(&alphabet), &a.table).unwrap();
        let union = aja_union(&a1, &a2).unwrap();
        let inter = aja_intersection(&a1, &a2).unwrap();
        let de_morgan = aja_intersection(&aja_complement(&a1), &aja_complement(&a2)).unwrap();
        for _ in 0..3 {
            let w = random_lasso(&mut rng, &alphabet, 4, 3);
            let (x, y) = (aja_accepts(&a1, &w).unwrap(), aja_accepts(&a2, &w).unwrap());
            assert_eq!(aja_accepts(&union, &w).unwrap(), x || y);
            assert_eq!(aja_accepts(&inter, &w).unwrap(), x && y);
            assert_eq!(
                aja_accepts(&aja_complement(&union), &w).unwrap(),
                aja_accepts(&de_morgan, &w).unwrap()
            );
            assert_eq!(
                aja_accepts(&aja_union(&a1, &reject).unwrap(), &w).unwrap(),
                x
            );
            assert_eq!(
                aja_accepts(&aja_intersection(&a1, &accept).unwrap(), &w).unwrap(),
                x
            );
            assert_eq!(
                aja_accepts(&aja_complement(&aja_complement(&a1)), &w).unwrap(),
                x
            );
        }
    }
}

/// Whether some return at or after `k` pops below the height at `k`,
/// counting levels without the clamp at zero.
fn relative_drop(w: &LassoWord, classes: &dyn Fn(LetterId) -> LetterClass, k: usize) -> bool {
    let mut level = 0i64;
    for j in k..k + 200 {
        match classes(w.letter_at(j)) {
            LetterClass::Call => level += 1,
            LetterClass::Return if level == 0 => return true,
            LetterClass::Return => level -= 1,
            LetterClass::Local => {}
        }
    }
    false
}

#[test]
fn step_formula_detects_relative_drops() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let alphabet = random_alphabet(&mut rng, 3);
        let (st, table) = phi_st(&alphabet);
        let w = random_lasso(&mut rng, &alphabet, 4, 3);
        let profile = StackProfile::build(&alphabet, &w).unwrap();
        let sat = evaluate(&st, &table, &w).unwrap();
        for k in 0..w.prefix().len() + 2 * w.period().len() {
            let class = |a: LetterId| alphabet.class(a);
            assert_eq!(sat.at(&w, k), !relative_drop(&w, &class, k));
            // the formula never claims a non-step
            if sat.at(&w, k) {
                assert!(profile.is_step(k));
            }
        }
    }
}

#[test]
fn step_formula_misses_steps_at_height_zero() {
    let alphabet = cla_alphabet();
    let (st, table) = phi_st(&alphabet);
    let w = LassoWord::parse(&alphabet, "r ; l").unwrap();
    let profile = StackProfile::build(&alphabet, &w).unwrap();
    assert!(profile.is_step(0));
    assert!(!evaluate_at(&st, &table, &w, 0).unwrap());
    // the same suffix at a non-step
    let w2 = LassoWord::parse(&alphabet, "c r ; l").unwrap();
    let profile2 = StackProfile::build(&alphabet, &w2).unwrap();
    assert!(!profile2.is_step(1));
    let local = LassoWord::parse(&alphabet, "l ; l").unwrap();
    assert!(evaluate(&st, &table, &local).unwrap().0.iter().all(|&b| b));
}

fn local_dpsa(color: u32) -> Dpsa {
    let alphabet = cla_alphabet();
    let mut rules = vec![Rule::Local {
        from: 0,
        letter: LetterId(2),
        to: 0,
    }];
    rules.push(Rule::Call {
        from: 0,
        letter: LetterId(0),
        to: 0,
        push: crate::automata::StackSym(1),
    });
    rules.push(Rule::Return {
        from: 0,
        letter: LetterId(1),
        pop: crate::automata::StackSym(1),
        to: 0,
    });
    rules.push(Rule::Return {
        from: 0,
        letter: LetterId(1),
        pop: BOTTOM,
        to: 0,
    });
    let vps = Vps::new(alphabet, vec!["s".into()], vec!["A".into()], rules);
    Dpsa {
        vps,
        initial: 0,
        coloring: vec![color],
    }
}

#[test]
fn stair_trivial_cases() {
    let alphabet = cla_alphabet();
    let (f, table) = dpsa_to_vldl(&local_dpsa(0)).unwrap();
    let (g, gtable) = dpsa_to_vldl(&local_dpsa(1)).unwrap();
    assert_eq!(g, Formula::ff(&alphabet));
    for w in all_lassos(&alphabet, 2, 2) {
        assert!(evaluate_at(&f, &table, &w, 0).unwrap());
        assert!(!evaluate_at(&g, &gtable, &w, 0).unwrap());
    }
}

#[test]
fn literal_stair_formula_fails_on_empty_stack_returns() {
    let alphabet = cla_alphabet();
    let d = local_dpsa(0);
    let w = LassoWord::parse(&alphabet, " ; r").unwrap();
    assert!(dpsa_accepts(&d, &w).unwrap());
    let (f, table) = dpsa_to_vldl_literal(&d).unwrap();
    assert!(!evaluate_at(&f, &table, &w, 0).unwrap());
    let (f, table) = dpsa_to_vldl(&d).unwrap();
    assert!(evaluate_at(&f, &table, &w, 0).unwrap());
}

#[test]
fn stair_formula_agrees_with_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let alphabet = random_alphabet(&mut rng, 3);
        let d = random_dpsa(&mut rng, &alphabet, 3, 2, 2);
        let (f, table) = dpsa_to_vldl(&d).unwrap();
        assert!(table.automata().values().all(|g| g.tests.is_empty()));
        if d.even_states().is_empty() {
            continue;
        }
        assert_eq!(f.temporal_depth(), 3);
        for _ in 0..15 {
            let w = random_lasso(&mut rng, &alphabet, 4, 3);
            assert_eq!(
                evaluate_at(&f, &table, &w, 0).unwrap(),
                dpsa_accepts(&d, &w).unwrap()
            );
        }
    }
}

#[test]
fn empty_stack_guard_requires_balanced_runs() {
    let alphabet = cla_alphabet();
    let g = examples::call_guard(&alphabet);
    let e = empty_stack_guard(&g);
    assert!(e.validate().is_empty());
    let mut table = crate::logic::AutomatonTable::new(alphabet.clone());
    table.insert("E", e).unwrap();
    let f = Formula::diamond("E", Formula::tt(&alphabet));
    // a run ending right after a call never has an empty stack
    let w = LassoWord::parse(&alphabet, " ; c").unwrap();
    assert!(!evaluate_at(&f, &table, &w, 0).unwrap());
}

fn mutate(w: &LassoWord, pos: usize, letter: LetterId) -> LassoWord {
    let mut prefix = w.prefix().to_vec();
    let mut period = w.period().to_vec();
    if pos < prefix.len() {
        prefix[pos] = letter;
    } else {
        period[pos - prefix.len()] = letter;
    }
    LassoWord::new(prefix, period).unwrap()
}

#[test]
fn counter_family() {
    let alphabet = counter_alphabet();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in 1..=2 {
        let (f, table) = counter_formula(n).unwrap();
        let w = counter_word(n);
        assert_eq!(w.prefix().len(), (n + 1) << n);
        assert!(evaluate_at(&f, &table, &w, 0).unwrap());
        let ltl = counter_ltl(n);
        assert!(ltl_eval(&ltl, &alphabet, &w).unwrap().class(0));
        for _ in 0..20 {
            let pos = rng.gen_range(0..w.class_count());
            let letter = LetterId((w.letter_at(pos).0 + rng.gen_range(1..3)) % 3);
            let m = mutate(&w, pos, letter);
            assert!(
                !evaluate_at(&f, &table, &m, 0).unwrap(),
                "{}",
                m.display(&alphabet)
            );
        }
    }
}
