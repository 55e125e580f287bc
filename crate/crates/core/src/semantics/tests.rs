use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::automata::{Bvpa, Command, Configuration, Dpsa, OneAja, PositiveBool, Rule, Vps};
use crate::corpus::{random_alphabet, random_dpsa, random_lasso, random_tvpa};
use crate::examples::{self, cla_alphabet};
use crate::logic::{parse_formula, LtlFormula};
use crate::word::{LetterId, StackProfile};

/// Explicit run enumeration: end classes of runs from position `p` that
/// read at most `max_len` letters.
fn brute_reach(
    tvpa: &Tvpa,
    word: &LassoWord,
    tests: &HashMap<Formula, SatTable>,
    p: usize,
    max_len: usize,
) -> BTreeSet<usize> {
    let ok = |q: usize, k: usize| tvpa.test(q).map_or(true, |f| tests[f].at(word, k));
    let mut out = BTreeSet::new();
    let mut frontier: Vec<Configuration> = tvpa
        .initial
        .iter()
        .filter(|&&q| ok(q, p))
        .map(|&q| Configuration::initial(q))
        .collect();
    for len in 0..=max_len {
        let k = p + len;
        for c in &frontier {
            if tvpa.finals.contains(&c.state) {
                out.insert(word.suffix_class(k));
            }
        }
        if len == max_len {
            break;
        }
        let mut next: Vec<Configuration> = frontier
            .iter()
            .flat_map(|c| tvpa.vps.config_successors(c, word.letter_at(k)))
            .filter(|c| ok(c.state, k + 1))
            .collect();
        next.sort();
        next.dedup();
        frontier = next;
    }
    out
}

#[test]
fn call_guard_reach() {
    let alphabet = cla_alphabet();
    let word = LassoWord::parse(&alphabet, "c ; l").unwrap();
    let ac = examples::call_guard(&alphabet);
    let reach = guard_reach(&ac, &word, &HashMap::new()).unwrap();
    assert_eq!(reach.reach[0], BTreeSet::from([1]));
    assert_eq!(
        brute_reach(&ac, &word, &HashMap::new(), 0, 6),
        BTreeSet::from([1])
    );
    assert!(reach.reach[1].is_empty());
    assert!(!reach.epsilon[0]);

    let ar = examples::unmatched_return_guard(&alphabet);
    let reach = guard_reach(&ar, &word, &HashMap::new()).unwrap();
    assert!(reach.reach[0].is_empty());
    assert!(brute_reach(&ar, &word, &HashMap::new(), 0, 6).is_empty());
}

#[test]
fn epsilon_flag_with_shared_initial_final() {
    let alphabet = cla_alphabet();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut g = random_tvpa(&mut rng, &alphabet, 2, 1);
    g.initial = [0].into();
    g.finals = [0].into();
    let word = random_lasso(&mut rng, &alphabet, 3, 3);
    let reach = guard_reach(&g, &word, &HashMap::new()).unwrap();
    assert!(reach.epsilon.iter().all(|&e| e));
    for c in 0..word.class_count() {
        assert!(reach.reach[c].contains(&c));
    }
}

#[test]
fn guard_reach_covers_bounded_runs_from_any_representative() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..150 {
        let alphabet = random_alphabet(&mut rng, 3);
        let mut g = random_tvpa(&mut rng, &alphabet, 3, 2);
        if rng.gen_bool(0.5) {
            g.tests.insert(1, Formula::atom("p"));
        }
        let word = random_lasso(&mut rng, &alphabet, 3, 3);
        let table = AutomatonTable::new(alphabet.clone());
        let mut ev = Evaluator::new(&table, &word).unwrap();
        let tests = ev.test_tables(&g).unwrap();
        let reach = guard_reach(&g, &word, &tests).unwrap();
        let u = word.prefix().len();
        let v = word.period().len();
        for c in 0..word.class_count() {
            // enough letters to make most runs visible
            let bounded = brute_reach(&g, &word, &tests, c, 10);
            assert!(
                bounded.is_subset(&reach.reach[c]),
                "{bounded:?} vs {:?}",
                reach.reach[c]
            );
            if c >= u {
                let shifted = brute_reach(&g, &word, &tests, c + 2 * v, 10);
                assert!(shifted.is_subset(&reach.reach[c]));
            }
        }
    }
}

#[test]
fn example_one_words() {
    let table = examples::example1_table();
    let f = parse_formula(examples::EXAMPLE1_FORMULA, &table).unwrap();
    let alphabet = table.alphabet().clone();
    let violating = LassoWord::parse(&alphabet, "c p r ; q").unwrap();
    let satisfying = LassoWord::parse(&alphabet, "c p r p ; q").unwrap();
    assert!(!evaluate_at(&f, &table, &violating, 0).unwrap());
    assert!(evaluate_at(&f, &table, &satisfying, 0).unwrap());
    let p = Formula::atom("p");
    assert!(!evaluate_at(&p, &table, &violating, 0).unwrap());
}

#[test]
fn box_is_dual_of_diamond() {
    let table = examples::example1_table();
    let alphabet = table.alphabet().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = Formula::atom("p");
    for _ in 0..50 {
        let w = random_lasso(&mut rng, &alphabet, 4, 3);
        let boxed = evaluate(&Formula::boxed("Ac", p.clone()), &table, &w).unwrap();
        let dual = Formula::not(Formula::diamond("Ac", Formula::not(p.clone())));
        assert_eq!(boxed, evaluate(&dual, &table, &w).unwrap());
    }
}

fn local_loop_bvpa(accepting: bool) -> Bvpa {
    let alphabet = cla_alphabet();
    let rules = vec![Rule::Local {
        from: 0,
        letter: LetterId(2),
        to: 0,
    }];
    let vps = Vps::new(alphabet, vec!["s".into()], vec![], rules);
    Bvpa {
        vps,
        initial: [0].into(),
        accepting: if accepting {
            [0].into()
        } else {
            BTreeSet::new()
        },
    }
}

#[test]
fn bvpa_trivial_cases() {
    let alphabet = cla_alphabet();
    let w = LassoWord::parse(&alphabet, " ; l").unwrap();
    assert!(bvpa_accepts(&local_loop_bvpa(true), &w).unwrap());
    assert!(!bvpa_accepts(&local_loop_bvpa(false), &w).unwrap());
    let blocked = LassoWord::parse(&alphabet, "c ; l").unwrap();
    assert!(!bvpa_accepts(&local_loop_bvpa(true), &blocked).unwrap());
}

/// Explicit search for a run `u v^j` whose configuration repeats at the
/// same class with an accepting state in between; only stacks that return
/// to the same contents count, so a hit is a genuine accepting lasso run.
fn bvpa_bounded_positive(b: &Bvpa, word: &LassoWord, max_len: usize) -> bool {
    type Node = (usize, Configuration);
    let mut paths: Vec<Vec<Node>> = b
        .initial
        .iter()
        .map(|&q| vec![(0, Configuration::initial(q))])
        .collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for path in &paths {
            let (k, c) = path.last().unwrap().clone();
            for succ in b.vps.config_successors(&c, word.letter_at(k)) {
                let node = (k + 1, succ);
                let class = word.suffix_class(node.0);
                for (i, (k2, c2)) in path.iter().enumerate() {
                    if word.suffix_class(*k2) == class && k2 < &node.0 && *c2 == node.1 {
                        let visits = path[i..]
                            .iter()
                            .any(|(_, c)| b.accepting.contains(&c.state));
                        if visits {
                            return true;
                        }
                    }
                }
                let mut p = path.clone();
                p.push(node);
                next.push(p);
            }
        }
        if next.len() > 20_000 {
            break;
        }
        paths = next;
    }
    false
}

#[test]
fn bvpa_agrees_with_bounded_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut positives = 0;
    for _ in 0..200 {
        let alphabet = random_alphabet(&mut rng, 3);
        let t = random_tvpa(&mut rng, &alphabet, 2, 1);
        let b = Bvpa {
            vps: t.vps,
            initial: t.initial,
            accepting: t.finals,
        };
        let w = random_lasso(&mut rng, &alphabet, 2, 2);
        if bvpa_bounded_positive(&b, &w, 8) {
            positives += 1;
            assert!(bvpa_accepts(&b, &w).unwrap());
        }
    }
    assert!(positives > 10);
}

/// Plain simulation without clearing the stack; the colors at steps in a
/// late window repeat periodically, so their maximum decides acceptance.
fn dpsa_unrolled(d: &Dpsa, word: &LassoWord) -> bool {
    let profile = StackProfile::build(d.vps.alphabet(), word).unwrap();
    let (n, p) = profile.periodicity();
    let horizon = n + p * (d.vps.state_count() * (n + p) + 2) * 2;
    let mut config = Configuration::initial(d.initial);
    let mut late = Vec::new();
    for k in 0..horizon {
        if profile.is_step(k) && k >= horizon / 2 {
            late.push(d.coloring[config.state]);
        }
        match d.vps.config_successors(&config, word.letter_at(k)).pop() {
            Some(c) => config = c,
            None => return false,
        }
    }
    late.into_iter().max().unwrap() % 2 == 0
}

#[test]
fn dpsa_matches_unrolled_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let alphabet = random_alphabet(&mut rng, 3);
        let d = random_dpsa(&mut rng, &alphabet, 3, 2, 2);
        let w = random_lasso(&mut rng, &alphabet, 4, 3);
        assert_eq!(dpsa_accepts(&d, &w).unwrap(), dpsa_unrolled(&d, &w));
    }
}

#[test]
fn dpsa_trivial_cases() {
    let alphabet = cla_alphabet();
    let rules = vec![Rule::Local {
        from: 0,
        letter: LetterId(2),
        to: 0,
    }];
    let vps = Vps::new(alphabet.clone(), vec!["s".into()], vec![], rules);
    let w = LassoWord::parse(&alphabet, "l ; l").unwrap();
    let even = Dpsa {
        vps: vps.clone(),
        initial: 0,
        coloring: vec![0],
    };
    let odd = Dpsa {
        vps,
        initial: 0,
        coloring: vec![1],
    };
    assert!(dpsa_accepts(&even, &w).unwrap());
    assert!(!dpsa_accepts(&odd, &w).unwrap());
    // stuck on the call
    assert!(!dpsa_accepts(&even, &LassoWord::parse(&alphabet, "c ; l").unwrap()).unwrap());
}

#[test]
fn dpsa_toggling_colors() {
    // two states toggling on every letter; the word `c r` keeps the height
    // at 0, so every position is a step
    let alphabet = cla_alphabet();
    let mut rules = Vec::new();
    for (from, to) in [(0, 1), (1, 0)] {
        rules.push(Rule::Call {
            from,
            letter: LetterId(0),
            to,
            push: crate::automata::StackSym(1),
        });
        rules.push(Rule::Return {
            from,
            letter: LetterId(1),
            pop: crate::automata::StackSym(1),
            to,
        });
        rules.push(Rule::Return {
            from,
            letter: LetterId(1),
            pop: crate::automata::BOTTOM,
            to,
        });
    }
    let vps = Vps::new(
        alphabet.clone(),
        vec!["a".into(), "b".into()],
        vec!["A".into()],
        rules,
    );
    let w = LassoWord::parse(&alphabet, " ; c r").unwrap();
    // steps are the even positions, always in state a
    let d = Dpsa {
        vps: vps.clone(),
        initial: 0,
        coloring: vec![2, 1],
    };
    assert!(dpsa_accepts(&d, &w).unwrap());
    let d = Dpsa {
        vps,
        initial: 0,
        coloring: vec![1, 2],
    };
    assert!(!dpsa_accepts(&d, &w).unwrap());
    assert_eq!(dpsa_accepts(&d, &w).unwrap(), dpsa_unrolled(&d, &w));
}

fn one_state_aja(alphabet: &Arc<crate::word::PushdownAlphabet>, color: u32) -> OneAja {
    // state 0 loops, state 1 is the rejecting sink
    let cmd = PositiveBool::Cmd(Command::advance(0, 1));
    let sink = PositiveBool::Cmd(Command::advance(1, 1));
    OneAja {
        alphabet: alphabet.clone(),
        states: vec!["s".into(), "rej".into()],
        delta: vec![vec![cmd; alphabet.len()], vec![sink; alphabet.len()]],
        initial: [0].into(),
        coloring: vec![color, 1],
    }
}

#[test]
fn aja_trivial_cases() {
    let alphabet = cla_alphabet();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let w = random_lasso(&mut rng, &alphabet, 3, 3);
        assert!(aja_accepts(&one_state_aja(&alphabet, 0), &w).unwrap());
        assert!(!aja_accepts(&one_state_aja(&alphabet, 1), &w).unwrap());
    }
}

#[test]
fn aja_jump_requires_matched_call() {
    // state 0 jumps on `c` to the accepting loop 2; everything else rejects
    let alphabet = cla_alphabet();
    let n = alphabet.len();
    let reject = PositiveBool::Cmd(Command::advance(1, 1));
    let mut start = vec![reject.clone(); n];
    start[0] = PositiveBool::Cmd(Command::jump(2, 1));
    let aja = OneAja {
        alphabet: alphabet.clone(),
        states: vec!["s".into(), "rej".into(), "acc".into()],
        delta: vec![
            start,
            vec![reject; n],
            vec![PositiveBool::Cmd(Command::advance(2, 1)); n],
        ],
        initial: [0].into(),
        coloring: vec![1, 1, 0],
    };
    assert!(aja_accepts(&aja, &LassoWord::parse(&alphabet, "c r ; l").unwrap()).unwrap());
    assert!(!aja_accepts(&aja, &LassoWord::parse(&alphabet, " ; c").unwrap()).unwrap());
}

#[test]
fn aja_alternation() {
    // state 0: (advance to acc) ∧ (advance to a state that checks `p` next)
    let alphabet = cla_alphabet();
    let n = alphabet.len();
    let reject = PositiveBool::Cmd(Command::advance(1, 1));
    let accept = PositiveBool::Cmd(Command::advance(2, 1));
    let start = PositiveBool::and([accept.clone(), PositiveBool::Cmd(Command::advance(3, 1))]);
    let mut check = vec![reject.clone(); n];
    check[0] = accept.clone();
    let aja = OneAja {
        alphabet: alphabet.clone(),
        states: vec!["s".into(), "rej".into(), "acc".into(), "chk".into()],
        delta: vec![vec![start; n], vec![reject; n], vec![accept; n], check],
        initial: [0].into(),
        coloring: vec![1, 1, 0, 1],
    };
    assert!(aja_accepts(&aja, &LassoWord::parse(&alphabet, "l c ; l").unwrap()).unwrap());
    assert!(!aja_accepts(&aja, &LassoWord::parse(&alphabet, "l r ; c").unwrap()).unwrap());
}

#[test]
fn ltl_basics() {
    let alphabet = cla_alphabet();
    let p = LtlFormula::atom("p");
    let all_c = LassoWord::parse(&alphabet, " ; c").unwrap();
    assert!(ltl_eval(&LtlFormula::always(p.clone()), &alphabet, &all_c)
        .unwrap()
        .class(0));
    let none = LassoWord::parse(&alphabet, "r ; l").unwrap();
    let never = LtlFormula::eventually(LtlFormula::atom("zz"));
    assert!(!ltl_eval(&never, &alphabet, &none).unwrap().class(0));
    // p U q on c c r l^ω and on c^ω
    let until = LtlFormula::until(p.clone(), LtlFormula::atom("q"));
    let w = LassoWord::parse(&alphabet, "c c r ; l").unwrap();
    assert!(ltl_eval(&until, &alphabet, &w).unwrap().class(0));
    assert!(!ltl_eval(&until, &alphabet, &all_c).unwrap().class(0));
    let release = LtlFormula::release(LtlFormula::False, p);
    assert!(ltl_eval(&release, &alphabet, &all_c).unwrap().class(0));
}
