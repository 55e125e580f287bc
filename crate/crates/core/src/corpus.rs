//! Seeded random generators for alphabets, words, guards, formulas,
//! automata, pushdown systems and games.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automata::{Dpsa, Rule, StackSym, Tvpa, Vps};
use crate::engines::{ParityGame, Player, PushdownSystem};
use crate::logic::{AutomatonTable, Formula, LtlFormula};
use crate::word::{LassoWord, Letter, LetterClass, LetterId, PushdownAlphabet};

pub const PROPS: [&str; 2] = ["p", "q"];

/// `n` letters (`n >= 2`) with at least one call and one return; each letter
/// carries a random subset of `{p, q}`, and both propositions occur.
pub fn random_alphabet(rng: &mut impl Rng, n: usize) -> Arc<PushdownAlphabet> {
    assert!(n >= 2);
    let mut classes = vec![LetterClass::Call, LetterClass::Return];
    for _ in 2..n {
        classes.push(
            *[LetterClass::Call, LetterClass::Return, LetterClass::Local]
                .choose(rng)
                .unwrap(),
        );
    }
    classes.sort();
    let letters = classes
        .iter()
        .enumerate()
        .map(|(i, &class)| {
            let tag = match class {
                LetterClass::Call => "c",
                LetterClass::Return => "r",
                LetterClass::Local => "l",
            };
            let props: Vec<&str> = PROPS
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            Letter::new(&format!("{tag}{i}"), props, class)
        })
        .collect();
    // declare every proposition so that generated formulas print to
    // parseable text; `p` on the first letter also fixes how tt/ff expand
    let mut letters: Vec<Letter> = letters;
    letters[0].props.insert("p".into());
    letters[n - 1].props.insert("q".into());
    Arc::new(PushdownAlphabet::new(letters).unwrap())
}

pub fn random_lasso(
    rng: &mut impl Rng,
    alphabet: &PushdownAlphabet,
    max_u: usize,
    max_v: usize,
) -> LassoWord {
    let n = alphabet.len();
    let u = (0..rng.gen_range(0..=max_u))
        .map(|_| LetterId(rng.gen_range(0..n)))
        .collect();
    let v = (0..rng.gen_range(1..=max_v))
        .map(|_| LetterId(rng.gen_range(0..n)))
        .collect();
    LassoWord::new(u, v).unwrap()
}

/// Every lasso with `|u| <= max_u` and `1 <= |v| <= max_v`, in length-lex
/// order: by `|u|+|v|`, then `|u|`, then letters.
pub fn all_lassos(alphabet: &PushdownAlphabet, max_u: usize, max_v: usize) -> Vec<LassoWord> {
    let letters: Vec<LetterId> = alphabet.ids().collect();
    let mut out = Vec::new();
    for total in 1..=max_u + max_v {
        for ul in (0..=max_u.min(total - 1)).filter(|&ul| total - ul <= max_v) {
            for word in words_of_length(&letters, total) {
                out.push(LassoWord::new(word[..ul].to_vec(), word[ul..].to_vec()).unwrap());
            }
        }
    }
    out
}

/// All words of length `n` in lexicographic order.
pub fn words_of_length(letters: &[LetterId], n: usize) -> Vec<Vec<LetterId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// A random rule set over `states` states and `stack` non-bottom symbols.
pub fn random_rules(
    rng: &mut impl Rng,
    alphabet: &PushdownAlphabet,
    states: usize,
    stack: usize,
    density: f64,
) -> Vec<Rule> {
    let mut rules = Vec::new();
    for from in 0..states {
        for a in alphabet.ids() {
            for to in 0..states {
                if !rng.gen_bool(density) {
                    continue;
                }
                match alphabet.class(a) {
                    LetterClass::Call => {
                        let push = StackSym(rng.gen_range(1..=stack.max(1)));
                        rules.push(Rule::Call {
                            from,
                            letter: a,
                            to,
                            push,
                        });
                    }
                    LetterClass::Return => {
                        let pop = StackSym(rng.gen_range(0..=stack));
                        rules.push(Rule::Return {
                            from,
                            letter: a,
                            pop,
                            to,
                        });
                    }
                    LetterClass::Local => rules.push(Rule::Local {
                        from,
                        letter: a,
                        to,
                    }),
                }
            }
        }
    }
    rules.sort();
    rules.dedup();
    rules
}

fn symbol_names(stack: usize) -> Vec<String> {
    (0..stack.max(1)).map(|i| format!("A{i}")).collect()
}

/// A random system; denser than guards so that infinite runs are common.
pub fn random_vps(
    rng: &mut impl Rng,
    alphabet: &Arc<PushdownAlphabet>,
    states: usize,
    stack: usize,
) -> Vps {
    let rules = random_rules(rng, alphabet, states, stack, 0.5);
    let names = (0..states).map(|q| format!("s{q}")).collect();
    Vps::new(alphabet.clone(), names, symbol_names(stack), rules)
}

pub fn random_tvpa(
    rng: &mut impl Rng,
    alphabet: &Arc<PushdownAlphabet>,
    states: usize,
    stack: usize,
) -> Tvpa {
    let rules = random_rules(rng, alphabet, states, stack, 0.35);
    let names = (0..states).map(|q| format!("s{q}")).collect();
    let vps = Vps::new(alphabet.clone(), names, symbol_names(stack), rules);
    let pick = |rng: &mut dyn rand::RngCore| {
        let mut set: std::collections::BTreeSet<usize> =
            (0..states).filter(|_| rng.gen_bool(0.4)).collect();
        if set.is_empty() {
            set.insert(rng.gen_range(0..states));
        }
        set
    };
    let initial = pick(rng);
    let finals = pick(rng);
    Tvpa::new(vps, initial, finals)
}

pub fn random_dpsa(
    rng: &mut impl Rng,
    alphabet: &Arc<PushdownAlphabet>,
    states: usize,
    colors: u32,
    stack: usize,
) -> Dpsa {
    let mut rules = Vec::new();
    for from in 0..states {
        for a in alphabet.ids() {
            match alphabet.class(a) {
                LetterClass::Call => {
                    if rng.gen_bool(0.9) {
                        let push = StackSym(rng.gen_range(1..=stack.max(1)));
                        rules.push(Rule::Call {
                            from,
                            letter: a,
                            to: rng.gen_range(0..states),
                            push,
                        });
                    }
                }
                LetterClass::Return => {
                    for pop in 0..=stack.max(1) {
                        if rng.gen_bool(0.9) {
                            rules.push(Rule::Return {
                                from,
                                letter: a,
                                pop: StackSym(pop),
                                to: rng.gen_range(0..states),
                            });
                        }
                    }
                }
                LetterClass::Local => {
                    if rng.gen_bool(0.9) {
                        rules.push(Rule::Local {
                            from,
                            letter: a,
                            to: rng.gen_range(0..states),
                        });
                    }
                }
            }
        }
    }
    let names = (0..states).map(|q| format!("d{q}")).collect();
    let vps = Vps::new(alphabet.clone(), names, symbol_names(stack), rules);
    let coloring = (0..states).map(|_| rng.gen_range(0..=colors)).collect();
    Dpsa {
        vps,
        initial: 0,
        coloring,
    }
}

/// Random formula over the guards of `table`, with `budget` connectives.
pub fn random_formula(rng: &mut impl Rng, table: &AutomatonTable, budget: usize) -> Formula {
    let guards: Vec<&String> = table.automata().keys().collect();
    if budget == 0 {
        let p = Formula::atom(PROPS.choose(rng).unwrap());
        return if rng.gen_bool(0.3) {
            Formula::not(p)
        } else {
            p
        };
    }
    let choice = rng.gen_range(0..if guards.is_empty() { 3 } else { 5 });
    match choice {
        0 => Formula::not(random_formula(rng, table, budget - 1)),
        1 | 2 => {
            let left = rng.gen_range(0..budget);
            let a = random_formula(rng, table, left);
            let b = random_formula(rng, table, budget - 1 - left);
            if choice == 1 {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        _ => {
            let g = guards.choose(rng).unwrap();
            let f = random_formula(rng, table, budget - 1);
            if choice == 3 {
                Formula::diamond(g, f)
            } else {
                Formula::boxed(g, f)
            }
        }
    }
}

/// A small random guard table: one or two guards of two or three states,
/// the second possibly testing a formula over the first.
pub fn random_table(rng: &mut impl Rng, alphabet: &Arc<PushdownAlphabet>) -> AutomatonTable {
    let mut table = AutomatonTable::new(alphabet.clone());
    let (states, stack) = (rng.gen_range(2..=3), rng.gen_range(1..=2));
    let first = random_tvpa(rng, alphabet, states, stack);
    table.insert("G0", first).unwrap();
    if rng.gen_bool(0.5) {
        let mut second = random_tvpa(rng, alphabet, 2, 1);
        if rng.gen_bool(0.5) {
            let test = if rng.gen_bool(0.5) {
                Formula::atom(PROPS.choose(rng).unwrap())
            } else {
                Formula::diamond("G0", Formula::atom(PROPS.choose(rng).unwrap()))
            };
            second.tests.insert(rng.gen_range(0..2), test);
        }
        table.insert("G1", second).unwrap();
    }
    table
}

/// One corpus instance: a formula of size at most `max_size` together with
/// its guards, over a random alphabet of at most four letters.
pub struct Instance {
    pub table: AutomatonTable,
    pub formula: Formula,
}

pub fn random_instance(rng: &mut impl Rng, max_size: usize) -> Instance {
    loop {
        let letters = rng.gen_range(2..=4);
        let alphabet = random_alphabet(rng, letters);
        let table = random_table(rng, &alphabet);
        let budget = rng.gen_range(0..=4);
        let formula = random_formula(rng, &table, budget);
        let Ok(size) = table.formula_size(&formula) else {
            continue;
        };
        if size <= max_size {
            let mut used = AutomatonTable::new(alphabet);
            let referenced = referenced_guards(&table, &formula);
            for (name, g) in table.automata() {
                if referenced.contains(name.as_str()) {
                    used.insert(name, g.clone()).unwrap();
                }
            }
            return Instance {
                table: used,
                formula,
            };
        }
    }
}

/// Guards referenced by `f`, transitively through tests.
pub fn referenced_guards<'a>(
    table: &'a AutomatonTable,
    f: &'a Formula,
) -> std::collections::BTreeSet<&'a str> {
    let mut seen = std::collections::BTreeSet::new();
    let mut pending: Vec<&Formula> = vec![f];
    while let Some(g) = pending.pop() {
        for name in g.guards() {
            if let Some(t) = table.get(name) {
                if seen.insert(name) {
                    pending.extend(t.tests.values());
                }
            }
        }
    }
    seen
}

pub fn random_ltl(rng: &mut impl Rng, depth: usize) -> LtlFormula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => LtlFormula::True,
            1 => LtlFormula::False,
            _ => LtlFormula::atom(PROPS.choose(rng).unwrap()),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 => LtlFormula::not(random_ltl(rng, d)),
        1 => LtlFormula::and(random_ltl(rng, d), random_ltl(rng, d)),
        2 => LtlFormula::or(random_ltl(rng, d), random_ltl(rng, d)),
        3 => LtlFormula::next(random_ltl(rng, d)),
        4 => LtlFormula::until(random_ltl(rng, d), random_ltl(rng, d)),
        5 => LtlFormula::eventually(random_ltl(rng, d)),
        6 => LtlFormula::always(random_ltl(rng, d)),
        7 => LtlFormula::release(random_ltl(rng, d), random_ltl(rng, d)),
        _ => LtlFormula::next(LtlFormula::not(random_ltl(rng, d))),
    }
}

/// Random pushdown system with `controls` control states and `stack`
/// non-bottom symbols (symbol 0 is ⊥).
pub fn random_pds(rng: &mut impl Rng, controls: usize, stack: usize) -> PushdownSystem {
    let mut pds = PushdownSystem::new(controls, stack + 1);
    let rules = rng.gen_range(2..=3 * controls + 2);
    for _ in 0..rules {
        let (p, q) = (rng.gen_range(0..controls), rng.gen_range(0..controls));
        match rng.gen_range(0..4) {
            0 => pds.add_push(p, q, StackSym(rng.gen_range(1..=stack))),
            1 => pds.add_pop(p, StackSym(rng.gen_range(1..=stack)), q),
            2 => pds.add_internal(p, q),
            _ => pds.add_bottom_read(p, q),
        }
    }
    pds
}

pub fn random_game(rng: &mut impl Rng, nodes: usize, colors: u32) -> ParityGame {
    let mut g = ParityGame::new();
    for _ in 0..nodes {
        let owner = if rng.gen_bool(0.5) {
            Player::Exists
        } else {
            Player::All
        };
        g.add_node(owner, rng.gen_range(0..colors));
    }
    for v in 0..nodes {
        let degree = rng.gen_range(1..=3.min(nodes));
        for _ in 0..degree {
            g.add_edge(v, rng.gen_range(0..nodes));
        }
    }
    g
}
