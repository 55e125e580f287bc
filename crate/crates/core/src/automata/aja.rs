use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{Diagnostic, StateId, DIAG_TOTAL, DIAG_UNDECLARED};
use crate::word::{LetterId, PushdownAlphabet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Move to the next position in `advance`.
    Advance,
    /// On a matched call, resume after its matching return in `jump`;
    /// anywhere else behaves like an advance.
    Jump,
}

/// One element of `{→, →_a} × Q × Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Command {
    pub direction: Direction,
    pub advance: StateId,
    pub jump: StateId,
}

impl Command {
    /// `(→, q)`: the jump slot holds the rejecting sink.
    pub fn advance(q: StateId, sink: StateId) -> Self {
        Command {
            direction: Direction::Advance,
            advance: q,
            jump: sink,
        }
    }

    /// `(→_a, q)`: the advance slot holds the rejecting sink.
    pub fn jump(q: StateId, sink: StateId) -> Self {
        Command {
            direction: Direction::Jump,
            advance: sink,
            jump: q,
        }
    }

    fn map_states(self, f: &impl Fn(StateId) -> StateId) -> Self {
        Command {
            direction: self.direction,
            advance: f(self.advance),
            jump: f(self.jump),
        }
    }
}

/// Positive Boolean combination of commands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PositiveBool {
    True,
    False,
    Cmd(Command),
    And(Vec<PositiveBool>),
    Or(Vec<PositiveBool>),
}

impl PositiveBool {
    /// Disjunction with unit/absorbing constants folded away.
    pub fn or(parts: impl IntoIterator<Item = PositiveBool>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                PositiveBool::True => return PositiveBool::True,
                PositiveBool::False => {}
                PositiveBool::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => PositiveBool::False,
            1 => out.pop().unwrap(),
            _ => PositiveBool::Or(out),
        }
    }

    pub fn and(parts: impl IntoIterator<Item = PositiveBool>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                PositiveBool::False => return PositiveBool::False,
                PositiveBool::True => {}
                PositiveBool::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => PositiveBool::True,
            1 => out.pop().unwrap(),
            _ => PositiveBool::And(out),
        }
    }

    /// Swaps conjunction with disjunction and `true` with `false`.
    pub fn dual(&self) -> Self {
        match self {
            PositiveBool::True => PositiveBool::False,
            PositiveBool::False => PositiveBool::True,
            PositiveBool::Cmd(c) => PositiveBool::Cmd(*c),
            PositiveBool::And(ps) => PositiveBool::Or(ps.iter().map(Self::dual).collect()),
            PositiveBool::Or(ps) => PositiveBool::And(ps.iter().map(Self::dual).collect()),
        }
    }

    pub fn map_states(&self, f: &impl Fn(StateId) -> StateId) -> Self {
        match self {
            PositiveBool::True => PositiveBool::True,
            PositiveBool::False => PositiveBool::False,
            PositiveBool::Cmd(c) => PositiveBool::Cmd(c.map_states(f)),
            PositiveBool::And(ps) => {
                PositiveBool::And(ps.iter().map(|p| p.map_states(f)).collect())
            }
            PositiveBool::Or(ps) => PositiveBool::Or(ps.iter().map(|p| p.map_states(f)).collect()),
        }
    }

    pub fn commands(&self) -> Vec<Command> {
        let mut out = Vec::new();
        self.collect_commands(&mut out);
        out
    }

    fn collect_commands(&self, out: &mut Vec<Command>) {
        match self {
            PositiveBool::Cmd(c) => out.push(*c),
            PositiveBool::And(ps) | PositiveBool::Or(ps) => {
                ps.iter().for_each(|p| p.collect_commands(out))
            }
            _ => {}
        }
    }

    /// Evaluates the formula under a set of commands taken to be true.
    pub fn satisfied_by(&self, model: &impl Fn(&Command) -> bool) -> bool {
        match self {
            PositiveBool::True => true,
            PositiveBool::False => false,
            PositiveBool::Cmd(c) => model(c),
            PositiveBool::And(ps) => ps.iter().all(|p| p.satisfied_by(model)),
            PositiveBool::Or(ps) => ps.iter().any(|p| p.satisfied_by(model)),
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PositiveBoolDisplay<'a> {
        PositiveBoolDisplay {
            formula: self,
            names,
        }
    }
}

pub struct PositiveBoolDisplay<'a> {
    formula: &'a PositiveBool,
    names: &'a [String],
}

impl<'a> fmt::Display for PositiveBoolDisplay<'a> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |p: &'a PositiveBool| PositiveBoolDisplay {
            formula: p,
            names: self.names,
        };
        match self.formula {
            PositiveBool::True => f.write_str("true"),
            PositiveBool::False => f.write_str("false"),
            PositiveBool::Cmd(c) => {
                let d = match c.direction {
                    Direction::Advance => "->",
                    Direction::Jump => "->a",
                };
                write!(
                    f,
                    "({d}, {}, {})",
                    self.names[c.advance], self.names[c.jump]
                )
            }
            PositiveBool::And(ps) | PositiveBool::Or(ps) => {
                let op = if matches!(self.formula, PositiveBool::And(_)) {
                    " & "
                } else {
                    " | "
                };
                f.write_str("(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    write!(f, "{}", sub(p))?;
                }
                f.write_str(")")
            }
        }
    }
}

/// One-way alternating jumping automaton with parity acceptance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneAja {
    pub alphabet: Arc<PushdownAlphabet>,
    pub states: Vec<String>,
    /// `delta[q][a]`.
    pub delta: Vec<Vec<PositiveBool>>,
    pub initial: BTreeSet<StateId>,
    pub coloring: Vec<u32>,
}

impl OneAja {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition(&self, q: StateId, a: LetterId) -> &PositiveBool {
        &self.delta[q][a.0]
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let n = self.states.len();
        let mut out = Vec::new();
        if self.delta.len() != n
            || self
                .delta
                .iter()
                .any(|row| row.len() != self.alphabet.len())
        {
            out.push(Diagnostic {
                invariant: DIAG_TOTAL,
                element: "delta must map every (state, letter)".into(),
            });
        }
        if self.coloring.len() != n {
            out.push(Diagnostic {
                invariant: DIAG_TOTAL,
                element: format!("coloring covers {} of {n} states", self.coloring.len()),
            });
        }
        for &q in &self.initial {
            if q >= n {
                out.push(Diagnostic {
                    invariant: DIAG_UNDECLARED,
                    element: format!("initial state {q}"),
                });
            }
        }
        for (q, row) in self.delta.iter().enumerate() {
            for (a, f) in row.iter().enumerate() {
                for c in f.commands() {
                    if c.advance >= n || c.jump >= n {
                        out.push(Diagnostic {
                            invariant: DIAG_UNDECLARED,
                            element: format!("command target in delta({q}, {a})"),
                        });
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_fold_constants() {
        let c = PositiveBool::Cmd(Command::advance(0, 1));
        assert_eq!(PositiveBool::or([PositiveBool::False, c.clone()]), c);
        assert_eq!(
            PositiveBool::or([PositiveBool::True, c.clone()]),
            PositiveBool::True
        );
        assert_eq!(PositiveBool::and([]), PositiveBool::True);
        assert_eq!(PositiveBool::or([]), PositiveBool::False);
        assert_eq!(
            PositiveBool::and([c.clone(), PositiveBool::and([c.clone(), c.clone()])]),
            PositiveBool::And(vec![c.clone(), c.clone(), c])
        );
    }

    #[test]
    fn dual_is_an_involution() {
        let a = PositiveBool::Cmd(Command::advance(0, 2));
        let b = PositiveBool::Cmd(Command::jump(1, 2));
        let f = PositiveBool::Or(vec![
            PositiveBool::And(vec![a.clone(), b.clone()]),
            PositiveBool::True,
        ]);
        assert_eq!(f.dual().dual(), f);
        assert!(matches!(f.dual(), PositiveBool::And(_)));
    }
}
