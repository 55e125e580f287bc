//! Worked examples: the call/return guards, the matching BVPA, the
//! directory/privilege automata and the user tracker.

use std::sync::Arc;

use crate::automata::{Bvpa, Rule, StackSym, Tvpa, Vps, BOTTOM};
use crate::logic::AutomatonTable;
use crate::word::{Letter, LetterClass, LetterId, PushdownAlphabet};

/// Three letters `c` (call, `{p}`), `r` (return, `{q}`) and `l` (local, `{}`).
pub fn cla_alphabet() -> Arc<PushdownAlphabet> {
    Arc::new(
        PushdownAlphabet::new(vec![
            Letter::new("c", ["p"], LetterClass::Call),
            Letter::new("r", ["q"], LetterClass::Return),
            Letter::new("l", Vec::<String>::new(), LetterClass::Local),
        ])
        .unwrap(),
    )
}

/// Calls and returns of module `m` with or without `p`, and the locals
/// `{p}` and `{q}`.
pub fn example1_alphabet() -> Arc<PushdownAlphabet> {
    Arc::new(
        PushdownAlphabet::new(vec![
            Letter::new("c", ["c"], LetterClass::Call),
            Letter::new("cp", ["c", "p"], LetterClass::Call),
            Letter::new("r", ["r"], LetterClass::Return),
            Letter::new("rp", ["r", "p"], LetterClass::Return),
            Letter::new("p", ["p"], LetterClass::Local),
            Letter::new("q", ["q"], LetterClass::Local),
        ])
        .unwrap(),
    )
}

pub const EXAMPLE1_FORMULA: &str = "[Ac](p -> <Ar> p)";

/// Loop on state 0 over every letter, pushing/popping symbol 1.
fn counting_loop(alphabet: &PushdownAlphabet, rules: &mut Vec<Rule>) {
    for a in alphabet.ids() {
        rules.push(match alphabet.class(a) {
            LetterClass::Call => Rule::Call {
                from: 0,
                letter: a,
                to: 0,
                push: StackSym(1),
            },
            LetterClass::Return => Rule::Return {
                from: 0,
                letter: a,
                pop: StackSym(1),
                to: 0,
            },
            LetterClass::Local => Rule::Local {
                from: 0,
                letter: a,
                to: 0,
            },
        });
    }
}

/// `A_c` (ends with a call) and `A_r` (ends with an unmatched return).
pub fn example1_table() -> AutomatonTable {
    let alphabet = example1_alphabet();
    let mut table = AutomatonTable::new(alphabet.clone());
    table.insert("Ac", call_guard(&alphabet)).unwrap();
    table
        .insert("Ar", unmatched_return_guard(&alphabet))
        .unwrap();
    table
}

pub fn call_guard(alphabet: &Arc<PushdownAlphabet>) -> Tvpa {
    let mut rules = Vec::new();
    counting_loop(alphabet, &mut rules);
    for a in alphabet.of_class(LetterClass::Call) {
        rules.push(Rule::Call {
            from: 0,
            letter: a,
            to: 1,
            push: StackSym(1),
        });
    }
    let vps = Vps::new(
        alphabet.clone(),
        vec!["q0".into(), "q1".into()],
        vec!["A".into()],
        rules,
    );
    Tvpa::new(vps, [0].into(), [1].into())
}

pub fn unmatched_return_guard(alphabet: &Arc<PushdownAlphabet>) -> Tvpa {
    let mut rules = Vec::new();
    counting_loop(alphabet, &mut rules);
    for a in alphabet.of_class(LetterClass::Return) {
        rules.push(Rule::Return {
            from: 0,
            letter: a,
            pop: BOTTOM,
            to: 1,
        });
    }
    let vps = Vps::new(
        alphabet.clone(),
        vec!["q0".into(), "q1".into()],
        vec!["A".into()],
        rules,
    );
    Tvpa::new(vps, [0].into(), [1].into())
}

/// The three-state BVPA for the informal matching property ("a call
/// carrying `p` is answered by a return carrying `p`"). All states accept;
/// stack symbols are `P` and `Pbar`. It disagrees with the formula on words
/// without the required unmatched return; see [`example1_bvpa`].
pub fn matching_bvpa_informal() -> Bvpa {
    let alphabet = example1_alphabet();
    let (init, sp, sq) = (0, 1, 2);
    let (p_sym, pbar) = (StackSym(1), StackSym(2));
    let has_p = |a: LetterId| alphabet.holds(a, "p");
    let mut rules = Vec::new();
    for a in alphabet.ids() {
        match alphabet.class(a) {
            LetterClass::Call => {
                rules.push(Rule::Call {
                    from: init,
                    letter: a,
                    to: sp,
                    push: p_sym,
                });
                rules.push(Rule::Call {
                    from: init,
                    letter: a,
                    to: sq,
                    push: p_sym,
                });
                if has_p(a) {
                    rules.push(Rule::Call {
                        from: sp,
                        letter: a,
                        to: sq,
                        push: pbar,
                    });
                    rules.push(Rule::Call {
                        from: sp,
                        letter: a,
                        to: sp,
                        push: p_sym,
                    });
                } else {
                    rules.push(Rule::Call {
                        from: sq,
                        letter: a,
                        to: sp,
                        push: p_sym,
                    });
                    rules.push(Rule::Call {
                        from: sq,
                        letter: a,
                        to: sq,
                        push: pbar,
                    });
                }
            }
            LetterClass::Return => {
                rules.push(Rule::Return {
                    from: init,
                    letter: a,
                    pop: p_sym,
                    to: sp,
                });
                rules.push(Rule::Return {
                    from: init,
                    letter: a,
                    pop: p_sym,
                    to: sq,
                });
                if has_p(a) {
                    rules.push(Rule::Return {
                        from: sp,
                        letter: a,
                        pop: pbar,
                        to: sq,
                    });
                    rules.push(Rule::Return {
                        from: sp,
                        letter: a,
                        pop: p_sym,
                        to: sp,
                    });
                } else {
                    rules.push(Rule::Return {
                        from: sq,
                        letter: a,
                        pop: p_sym,
                        to: sp,
                    });
                    rules.push(Rule::Return {
                        from: sq,
                        letter: a,
                        pop: pbar,
                        to: sq,
                    });
                }
            }
            LetterClass::Local => {
                rules.push(Rule::Local {
                    from: init,
                    letter: a,
                    to: init,
                });
                if has_p(a) {
                    rules.push(Rule::Local {
                        from: sp,
                        letter: a,
                        to: init,
                    });
                } else {
                    rules.push(Rule::Local {
                        from: sq,
                        letter: a,
                        to: init,
                    });
                }
            }
        }
    }
    let vps = Vps::new(
        alphabet,
        vec!["i".into(), "p".into(), "q".into()],
        vec!["P".into(), "Pbar".into()],
        rules,
    );
    Bvpa {
        vps,
        initial: [init].into(),
        accepting: [init, sp, sq].into(),
    }
}

/// A BVPA for the matching property built from its meaning: each call
/// guesses whether it is matched and whether `p` holds right after it; the
/// guess is pushed and checked on the next letter and after the matching
/// return. Once the guard `A_c` can no longer advance (a return on the
/// empty stack) every continuation is accepted.
///
/// States `(pending, check)` with `pending` ∈ {0,1} recording whether a call
/// guessed as matched is still open and `check` ∈ {none, p, not_p} the
/// obligation on the current letter; plus the accepting sink `done`.
pub fn example1_bvpa() -> Bvpa {
    let alphabet = example1_alphabet();
    const CHECKS: [&str; 3] = ["none", "p", "not_p"];
    let state = |pending: usize, check: usize| pending * 3 + check;
    let done = 6;
    // stack symbol for (matched, need_p, pending_below): matched calls with
    // their obligation and the pending bit to restore; unmatched calls only
    // ever carry "no obligation"
    let sym = |need: bool, below: usize| StackSym(1 + (need as usize) * 2 + below);
    let unmatched = StackSym(5);
    let ok = |check: usize, a: LetterId| match check {
        0 => true,
        1 => alphabet.holds(a, "p"),
        _ => !alphabet.holds(a, "p"),
    };
    let mut rules = Vec::new();
    for pending in 0..2 {
        for check in 0..3 {
            let from = state(pending, check);
            for a in alphabet.ids().filter(|&a| ok(check, a)) {
                match alphabet.class(a) {
                    LetterClass::Call => {
                        for need in [false, true] {
                            let next = if need { 1 } else { 2 };
                            rules.push(Rule::Call {
                                from,
                                letter: a,
                                to: state(1, next),
                                push: sym(need, pending),
                            });
                        }
                        if pending == 0 {
                            rules.push(Rule::Call {
                                from,
                                letter: a,
                                to: state(0, 2),
                                push: unmatched,
                            });
                        }
                    }
                    LetterClass::Return => {
                        for need in [false, true] {
                            for below in 0..2 {
                                let next = if need { 1 } else { 0 };
                                rules.push(Rule::Return {
                                    from,
                                    letter: a,
                                    pop: sym(need, below),
                                    to: state(below, next),
                                });
                            }
                        }
                        if pending == 0 {
                            rules.push(Rule::Return {
                                from,
                                letter: a,
                                pop: BOTTOM,
                                to: done,
                            });
                        }
                    }
                    LetterClass::Local => rules.push(Rule::Local {
                        from,
                        letter: a,
                        to: state(pending, 0),
                    }),
                }
            }
        }
    }
    for a in alphabet.ids() {
        rules.push(match alphabet.class(a) {
            LetterClass::Call => Rule::Call {
                from: done,
                letter: a,
                to: done,
                push: unmatched,
            },
            LetterClass::Return => Rule::Return {
                from: done,
                letter: a,
                pop: unmatched,
                to: done,
            },
            LetterClass::Local => Rule::Local {
                from: done,
                letter: a,
                to: done,
            },
        });
        if alphabet.class(a) == LetterClass::Return {
            rules.push(Rule::Return {
                from: done,
                letter: a,
                pop: BOTTOM,
                to: done,
            });
        }
    }
    let mut states: Vec<String> = (0..2)
        .flat_map(|p| CHECKS.iter().map(move |c| format!("pending{p}_{c}")))
        .collect();
    states.push("done".into());
    let stack = vec![
        "M_n0".into(),
        "M_n1".into(),
        "M_p0".into(),
        "M_p1".into(),
        "U".into(),
    ];
    let vps = Vps::new(alphabet, states, stack, rules);
    Bvpa {
        vps,
        initial: [state(0, 0)].into(),
        accepting: [state(0, 0), state(0, 1), state(0, 2), done].into(),
    }
}

pub fn user_alphabet() -> Arc<PushdownAlphabet> {
    Arc::new(
        PushdownAlphabet::new(vec![
            Letter::new("login_s", ["login_s"], LetterClass::Call),
            Letter::new("login_u", ["login_u"], LetterClass::Call),
            Letter::new("logout", ["logout"], LetterClass::Return),
            Letter::new("exec", ["exec"], LetterClass::Local),
        ])
        .unwrap(),
    )
}

/// `A_user`: state `u`/`s` is the current user; stack symbols `(c,p)` hold
/// the current and previous user.
pub fn user_tracker() -> Tvpa {
    let alphabet = user_alphabet();
    let id = |n: &str| alphabet.lookup(n).unwrap();
    let (login_s, login_u, logout, exec) = (id("login_s"), id("login_u"), id("logout"), id("exec"));
    let (u, s) = (0, 1);
    let (uu, ss, su, us) = (StackSym(1), StackSym(2), StackSym(3), StackSym(4));
    let rules = vec![
        Rule::Local {
            from: u,
            letter: exec,
            to: u,
        },
        Rule::Call {
            from: u,
            letter: login_u,
            to: u,
            push: uu,
        },
        Rule::Return {
            from: u,
            letter: logout,
            pop: uu,
            to: u,
        },
        Rule::Local {
            from: s,
            letter: exec,
            to: s,
        },
        Rule::Call {
            from: s,
            letter: login_s,
            to: s,
            push: ss,
        },
        Rule::Return {
            from: s,
            letter: logout,
            pop: ss,
            to: s,
        },
        Rule::Call {
            from: u,
            letter: login_s,
            to: s,
            push: su,
        },
        Rule::Return {
            from: u,
            letter: logout,
            pop: us,
            to: s,
        },
        Rule::Call {
            from: s,
            letter: login_u,
            to: u,
            push: us,
        },
        Rule::Return {
            from: s,
            letter: logout,
            pop: su,
            to: u,
        },
    ];
    let vps = Vps::new(
        alphabet,
        vec!["u".into(), "s".into()],
        vec![
            "(u,u)".into(),
            "(s,s)".into(),
            "(s,u)".into(),
            "(u,s)".into(),
        ],
        rules,
    );
    Tvpa::new(vps, [u].into(), [s].into())
}

pub fn directory_alphabet() -> Arc<PushdownAlphabet> {
    Arc::new(
        PushdownAlphabet::new(vec![
            Letter::new("cd_down", ["cd_down"], LetterClass::Call),
            Letter::new("cd_up", ["cd_up"], LetterClass::Return),
            Letter::new("sudo", ["sudo"], LetterClass::Local),
            Letter::new("logout", ["logout"], LetterClass::Local),
        ])
        .unwrap(),
    )
}

pub const DIRECTORY_FORMULA: &str = "[Apriv][Apar]ff";

/// `A_priv` (ends with acquiring privileges) and `A_par` (tracks the
/// directory depth, accepting on leaving the start directory).
pub fn directory_table() -> AutomatonTable {
    let alphabet = directory_alphabet();
    let id = |n: &str| alphabet.lookup(n).unwrap();
    let (down, up, sudo, logout) = (id("cd_down"), id("cd_up"), id("sudo"), id("logout"));
    let a = StackSym(1);
    let priv_rules = vec![
        Rule::Call {
            from: 0,
            letter: down,
            to: 0,
            push: a,
        },
        Rule::Return {
            from: 0,
            letter: up,
            pop: a,
            to: 0,
        },
        Rule::Return {
            from: 0,
            letter: up,
            pop: BOTTOM,
            to: 0,
        },
        Rule::Local {
            from: 0,
            letter: logout,
            to: 0,
        },
        Rule::Local {
            from: 0,
            letter: sudo,
            to: 1,
        },
    ];
    let par_rules = vec![
        Rule::Call {
            from: 0,
            letter: down,
            to: 0,
            push: a,
        },
        Rule::Return {
            from: 0,
            letter: up,
            pop: a,
            to: 0,
        },
        Rule::Return {
            from: 0,
            letter: up,
            pop: BOTTOM,
            to: 1,
        },
        Rule::Local {
            from: 0,
            letter: logout,
            to: 2,
        },
    ];
    let priv_vps = Vps::new(
        alphabet.clone(),
        vec!["q0".into(), "q1".into()],
        vec!["A".into()],
        priv_rules,
    );
    let par_vps = Vps::new(
        alphabet.clone(),
        vec!["q0".into(), "acc".into(), "rej".into()],
        vec!["A".into()],
        par_rules,
    );
    let mut table = AutomatonTable::new(alphabet);
    table
        .insert("Apriv", Tvpa::new(priv_vps, [0].into(), [1].into()))
        .unwrap();
    table
        .insert("Apar", Tvpa::new(par_vps, [0].into(), [1].into()))
        .unwrap();
    table
}

/// A program that may wander through directories, acquires privileges and
/// then leaves its directory without logging out. Initial state 0.
pub fn privilege_escape_system() -> Vps {
    let alphabet = directory_alphabet();
    let id = |n: &str| alphabet.lookup(n).unwrap();
    let (down, up, sudo, logout) = (id("cd_down"), id("cd_up"), id("sudo"), id("logout"));
    let a = StackSym(1);
    let rules = vec![
        Rule::Call {
            from: 0,
            letter: down,
            to: 0,
            push: a,
        },
        Rule::Return {
            from: 0,
            letter: up,
            pop: a,
            to: 0,
        },
        Rule::Local {
            from: 0,
            letter: logout,
            to: 0,
        },
        Rule::Local {
            from: 0,
            letter: sudo,
            to: 1,
        },
        Rule::Return {
            from: 1,
            letter: up,
            pop: a,
            to: 2,
        },
        Rule::Return {
            from: 1,
            letter: up,
            pop: BOTTOM,
            to: 2,
        },
        Rule::Local {
            from: 2,
            letter: logout,
            to: 2,
        },
        Rule::Call {
            from: 2,
            letter: down,
            to: 2,
            push: a,
        },
        Rule::Return {
            from: 2,
            letter: up,
            pop: a,
            to: 2,
        },
    ];
    Vps::new(
        alphabet,
        vec!["idle".into(), "root".into(), "escaped".into()],
        vec!["A".into()],
        rules,
    )
}

/// A program skeleton over the matching alphabet: enters and leaves `m`
/// arbitrarily and emits `p`/`q` steps in between. Initial state 0.
pub fn example1_program() -> Vps {
    let alphabet = example1_alphabet();
    let a = StackSym(1);
    let mut rules = Vec::new();
    for l in alphabet.ids() {
        match alphabet.class(l) {
            LetterClass::Call => rules.push(Rule::Call {
                from: 0,
                letter: l,
                to: 0,
                push: a,
            }),
            LetterClass::Return => rules.push(Rule::Return {
                from: 0,
                letter: l,
                pop: a,
                to: 0,
            }),
            LetterClass::Local => rules.push(Rule::Local {
                from: 0,
                letter: l,
                to: 0,
            }),
        }
    }
    Vps::new(alphabet, vec!["run".into()], vec!["A".into()], rules)
}
