//! GraphViz export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::{Direction, OneAja, Rule, StateId, Vps};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders a VPS with the given initial and final (double-circled) states.
/// Parallel rules with the same source, target and stack action share one
/// edge whose label lists their letters.
pub fn vps_to_dot(
    name: &str,
    vps: &Vps,
    initial: &BTreeSet<StateId>,
    finals: &BTreeSet<StateId>,
) -> String {
    let alphabet = vps.alphabet();
    let mut edges: BTreeMap<(StateId, StateId, String), Vec<&str>> = BTreeMap::new();
    for rule in vps.rules() {
        let action = match *rule {
            Rule::Call { push, .. } => format!("↓{}", vps.symbol_name(push)),
            Rule::Return { pop, .. } => format!("↑{}", vps.symbol_name(pop)),
            Rule::Local { .. } => "→".to_string(),
        };
        edges
            .entry((rule.from(), rule.to(), action))
            .or_default()
            .push(alphabet.name(rule.letter()));
    }

    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for (q, state) in vps.states().iter().enumerate() {
        let shape = if finals.contains(&q) {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(out, "  {} [shape={shape}];", quote(state)).unwrap();
    }
    for &q in initial {
        let marker = format!("__init_{}", vps.state_name(q));
        writeln!(out, "  {} [shape=point];", quote(&marker)).unwrap();
        writeln!(out, "  {} -> {};", quote(&marker), quote(vps.state_name(q))).unwrap();
    }
    for ((from, to, action), letters) in edges {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(vps.state_name(from)),
            quote(vps.state_name(to)),
            quote(&format!("{},{}", letters.join(" "), action))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Renders a 1-AJA: one edge per (source, target, command kind) labelled with
/// the letters on which such a command occurs. Node labels show colors.
pub fn aja_to_dot(name: &str, aja: &OneAja) -> String {
    let mut edges: BTreeMap<(StateId, StateId, &str), BTreeSet<&str>> = BTreeMap::new();
    for (q, row) in aja.delta.iter().enumerate() {
        for (a, f) in row.iter().enumerate() {
            let letter = aja.alphabet.letters()[a].id.as_str();
            for c in f.commands() {
                let (target, kind) = match c.direction {
                    Direction::Advance => (c.advance, "→"),
                    Direction::Jump => (c.jump, "→a"),
                };
                edges.entry((q, target, kind)).or_default().insert(letter);
            }
        }
    }
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    for (q, state) in aja.states.iter().enumerate() {
        writeln!(
            out,
            "  n{q} [label={}];",
            quote(&format!("{state} / {}", aja.coloring[q]))
        )
        .unwrap();
    }
    for &q in &aja.initial {
        writeln!(out, "  init{q} [shape=point];").unwrap();
        writeln!(out, "  init{q} -> n{q};").unwrap();
    }
    for ((from, to, kind), letters) in edges {
        let letters: Vec<&str> = letters.into_iter().collect();
        writeln!(
            out,
            "  n{from} -> n{to} [label={}];",
            quote(&format!("{},{kind}", letters.join(" ")))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn count(dot: &str, needle: &str) -> usize {
        dot.lines().filter(|l| l.contains(needle)).count()
    }

    #[test]
    fn example_one_call_guard() {
        let table = examples::example1_table();
        let ac = table.get("Ac").unwrap();
        let dot = vps_to_dot("Ac", &ac.vps, &ac.initial, &ac.finals);
        assert_eq!(
            count(&dot, "shape=circle") + count(&dot, "shape=doublecircle"),
            2
        );
        assert_eq!(count(&dot, "label="), 4);
        assert_eq!(count(&dot, "shape=doublecircle"), 1);
    }

    #[test]
    fn empty_system() {
        let vps = Vps::new(examples::cla_alphabet(), vec!["q".into()], vec![], vec![]);
        let dot = vps_to_dot("e", &vps, &BTreeSet::new(), &BTreeSet::new());
        assert_eq!(count(&dot, "shape=circle"), 1);
        assert_eq!(count(&dot, "->"), 0);
    }

    #[test]
    fn user_tracker_push_pop_pairs() {
        let user = examples::user_tracker();
        let dot = vps_to_dot("Auser", &user.vps, &user.initial, &user.finals);
        assert_eq!(
            count(&dot, "shape=circle") + count(&dot, "shape=doublecircle"),
            2
        );
        assert!(dot.contains("↓(s,u)"));
        assert!(dot.contains("↑(u,s)"));
    }
}
