//! JSON project files: one alphabet, named automata, formulas and words.
//!
//! Names are used throughout; `bot` denotes the bottom-of-stack marker in
//! pop transitions. Saving is canonical: a loaded project always saves to
//! the same bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{
    Bvpa, Command, Diagnostic, Direction, Dpsa, OneAja, PositiveBool, Rule, StackSym, StateId,
    Tvpa, Vps, BOTTOM_NAME,
};
use crate::error::{Error, Result};
use crate::logic::{parse_formula, parse_formula_with, AutomatonTable, Formula};
use crate::word::{LassoWord, Letter, LetterClass, LetterId, PushdownAlphabet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterDecl {
    pub id: String,
    #[serde(default)]
    pub props: Vec<String>,
    pub class: LetterClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetDecl {
    pub letters: Vec<LetterDecl>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutomatonKind {
    Tvpa,
    Bvpa,
    Dpsa,
    Aja,
    Vps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Push,
    Pop,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionDecl {
    Advance,
    Jump,
}

/// Positive Boolean formula over commands, as a JSON tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoolDecl {
    True,
    False,
    And(Vec<BoolDecl>),
    Or(Vec<BoolDecl>),
    Cmd {
        dir: DirectionDecl,
        advance: String,
        jump: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDecl {
    pub from: String,
    pub letter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<MoveKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<String>,
    /// Alternating automata only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<BoolDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDecl {
    pub id: String,
    pub kind: AutomatonKind,
    pub states: Vec<String>,
    /// Non-bottom stack symbols; inferred from the transitions if omitted.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stack: Vec<String>,
    #[serde(default)]
    pub initial: Vec<String>,
    #[serde(default, rename = "final", skip_serializing_if = "Option::is_none")]
    pub finals: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accepting: Option<Vec<String>>,
    /// One color per state, in state order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Vec<u32>>,
    #[serde(default)]
    pub transitions: Vec<TransitionDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tests: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulaDecl {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordDecl {
    pub id: String,
    pub prefix: Vec<String>,
    pub period: Vec<String>,
}

/// The on-disk form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectFile {
    pub alphabet: AlphabetDecl,
    #[serde(default)]
    pub automata: Vec<AutomatonDecl>,
    #[serde(default)]
    pub formulas: Vec<FormulaDecl>,
    #[serde(default)]
    pub words: Vec<WordDecl>,
}

/// A system to model check, with its designated initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    pub vps: Vps,
    pub initial: Option<StateId>,
}

/// A loaded project with every reference resolved.
#[derive(Debug, Clone)]
pub struct Project {
    pub alphabet: Arc<PushdownAlphabet>,
    /// Testing automata, usable as guards.
    pub table: AutomatonTable,
    pub bvpas: BTreeMap<String, Bvpa>,
    pub dpsas: BTreeMap<String, Dpsa>,
    pub ajas: BTreeMap<String, OneAja>,
    pub systems: BTreeMap<String, System>,
    pub formulas: BTreeMap<String, Formula>,
    pub words: BTreeMap<String, LassoWord>,
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn check_diagnostics(id: &str, diags: Vec<Diagnostic>) -> Result<()> {
    match diags.first() {
        None => Ok(()),
        Some(d) => Err(input(format!("automaton `{id}`: {d}"))),
    }
}

fn index_of(names: &[String], name: &str, what: &str, id: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| input(format!("automaton `{id}`: unknown {what} `{name}`")))
}

fn state_set(names: &[String], list: &[String], id: &str) -> Result<BTreeSet<StateId>> {
    list.iter()
        .map(|s| index_of(names, s, "state", id))
        .collect()
}

impl AutomatonDecl {
    fn stack_symbols(&self) -> Vec<String> {
        if !self.stack.is_empty() {
            return self.stack.clone();
        }
        let mut out: Vec<String> = Vec::new();
        for t in &self.transitions {
            if let Some(s) = &t.symbol {
                if s != BOTTOM_NAME && !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    fn vps(&self, alphabet: &Arc<PushdownAlphabet>) -> Result<Vps> {
        let id = &self.id;
        let stack = self.stack_symbols();
        let mut symbols = vec![BOTTOM_NAME.to_string()];
        symbols.extend(stack.iter().cloned());
        let mut rules = Vec::new();
        for t in &self.transitions {
            let from = index_of(&self.states, &t.from, "state", id)?;
            let letter = alphabet
                .lookup(&t.letter)
                .ok_or_else(|| input(format!("automaton `{id}`: unknown letter `{}`", t.letter)))?;
            let to = index_of(
                &self.states,
                t.to.as_deref()
                    .ok_or_else(|| input(format!("automaton `{id}`: transition without `to`")))?,
                "state",
                id,
            )?;
            let symbol = |what: &str| -> Result<StackSym> {
                let s = t
                    .symbol
                    .as_deref()
                    .ok_or_else(|| input(format!("automaton `{id}`: {what} without a symbol")))?;
                Ok(StackSym(index_of(&symbols, s, "stack symbol", id)?))
            };
            let expected = match alphabet.class(letter) {
                LetterClass::Call => MoveKind::Push,
                LetterClass::Return => MoveKind::Pop,
                LetterClass::Local => MoveKind::Local,
            };
            if let Some(k) = t.kind {
                if k != expected {
                    return Err(input(format!(
                        "automaton `{id}`: letter `{}` requires a {expected:?} move",
                        t.letter
                    )));
                }
            }
            rules.push(match expected {
                MoveKind::Push => Rule::Call {
                    from,
                    letter,
                    to,
                    push: symbol("push")?,
                },
                MoveKind::Pop => Rule::Return {
                    from,
                    letter,
                    pop: symbol("pop")?,
                    to,
                },
                MoveKind::Local => Rule::Local { from, letter, to },
            });
        }
        let vps = Vps::new(alphabet.clone(), self.states.clone(), stack, rules);
        check_diagnostics(id, vps.validate())?;
        Ok(vps)
    }

    fn aja(&self, alphabet: &Arc<PushdownAlphabet>) -> Result<OneAja> {
        let id = &self.id;
        let n = self.states.len();
        let mut delta = vec![vec![PositiveBool::False; alphabet.len()]; n];
        for t in &self.transitions {
            let q = index_of(&self.states, &t.from, "state", id)?;
            let a = alphabet
                .lookup(&t.letter)
                .ok_or_else(|| input(format!("automaton `{id}`: unknown letter `{}`", t.letter)))?;
            let f = t
                .formula
                .as_ref()
                .ok_or_else(|| input(format!("automaton `{id}`: transition without `formula`")))?;
            delta[q][a.0] = self.positive_bool(f)?;
        }
        let coloring = self
            .coloring
            .clone()
            .ok_or_else(|| input(format!("automaton `{id}`: missing coloring")))?;
        let aja = OneAja {
            alphabet: alphabet.clone(),
            states: self.states.clone(),
            delta,
            initial: state_set(&self.states, &self.initial, id)?,
            coloring,
        };
        check_diagnostics(id, aja.validate())?;
        Ok(aja)
    }

    fn positive_bool(&self, f: &BoolDecl) -> Result<PositiveBool> {
        Ok(match f {
            BoolDecl::True => PositiveBool::True,
            BoolDecl::False => PositiveBool::False,
            BoolDecl::And(ps) => PositiveBool::And(
                ps.iter()
                    .map(|p| self.positive_bool(p))
                    .collect::<Result<_>>()?,
            ),
            BoolDecl::Or(ps) => PositiveBool::Or(
                ps.iter()
                    .map(|p| self.positive_bool(p))
                    .collect::<Result<_>>()?,
            ),
            BoolDecl::Cmd { dir, advance, jump } => PositiveBool::Cmd(Command {
                direction: match dir {
                    DirectionDecl::Advance => Direction::Advance,
                    DirectionDecl::Jump => Direction::Jump,
                },
                advance: index_of(&self.states, advance, "state", &self.id)?,
                jump: index_of(&self.states, jump, "state", &self.id)?,
            }),
        })
    }
}

fn vps_transitions(vps: &Vps) -> Vec<TransitionDecl> {
    let alphabet = vps.alphabet();
    vps.rules()
        .iter()
        .map(|r| {
            let (kind, symbol) = match *r {
                Rule::Call { push, .. } => {
                    (MoveKind::Push, Some(vps.symbol_name(push).to_string()))
                }
                Rule::Return { pop, .. } => (MoveKind::Pop, Some(vps.symbol_name(pop).to_string())),
                Rule::Local { .. } => (MoveKind::Local, None),
            };
            TransitionDecl {
                from: vps.state_name(r.from()).to_string(),
                letter: alphabet.name(r.letter()).to_string(),
                kind: Some(kind),
                symbol,
                to: Some(vps.state_name(r.to()).to_string()),
                formula: None,
            }
        })
        .collect()
}

fn names(vps: &Vps, set: &BTreeSet<StateId>) -> Vec<String> {
    set.iter().map(|&q| vps.state_name(q).to_string()).collect()
}

fn vps_decl(id: &str, kind: AutomatonKind, vps: &Vps) -> AutomatonDecl {
    AutomatonDecl {
        id: id.to_string(),
        kind,
        states: vps.states().to_vec(),
        stack: vps.stack_symbols()[1..].to_vec(),
        initial: Vec::new(),
        finals: None,
        accepting: None,
        coloring: None,
        transitions: vps_transitions(vps),
        tests: BTreeMap::new(),
    }
}

pub fn tvpa_decl(id: &str, t: &Tvpa) -> AutomatonDecl {
    AutomatonDecl {
        initial: names(&t.vps, &t.initial),
        finals: Some(names(&t.vps, &t.finals)),
        tests: t
            .tests
            .iter()
            .map(|(&q, f)| (t.vps.state_name(q).to_string(), f.to_string()))
            .collect(),
        ..vps_decl(id, AutomatonKind::Tvpa, &t.vps)
    }
}

pub fn bvpa_decl(id: &str, b: &Bvpa) -> AutomatonDecl {
    AutomatonDecl {
        initial: names(&b.vps, &b.initial),
        accepting: Some(names(&b.vps, &b.accepting)),
        ..vps_decl(id, AutomatonKind::Bvpa, &b.vps)
    }
}

pub fn dpsa_decl(id: &str, d: &Dpsa) -> AutomatonDecl {
    AutomatonDecl {
        initial: vec![d.vps.state_name(d.initial).to_string()],
        coloring: Some(d.coloring.clone()),
        ..vps_decl(id, AutomatonKind::Dpsa, &d.vps)
    }
}

pub fn system_decl(id: &str, s: &System) -> AutomatonDecl {
    AutomatonDecl {
        initial: s
            .initial
            .map(|q| s.vps.state_name(q).to_string())
            .into_iter()
            .collect(),
        ..vps_decl(id, AutomatonKind::Vps, &s.vps)
    }
}

fn bool_decl(f: &PositiveBool, states: &[String]) -> BoolDecl {
    match f {
        PositiveBool::True => BoolDecl::True,
        PositiveBool::False => BoolDecl::False,
        PositiveBool::And(ps) => BoolDecl::And(ps.iter().map(|p| bool_decl(p, states)).collect()),
        PositiveBool::Or(ps) => BoolDecl::Or(ps.iter().map(|p| bool_decl(p, states)).collect()),
        PositiveBool::Cmd(c) => BoolDecl::Cmd {
            dir: match c.direction {
                Direction::Advance => DirectionDecl::Advance,
                Direction::Jump => DirectionDecl::Jump,
            },
            advance: states[c.advance].clone(),
            jump: states[c.jump].clone(),
        },
    }
}

/// Transitions equal to `false` are omitted.
pub fn aja_decl(id: &str, a: &OneAja) -> AutomatonDecl {
    let mut transitions = Vec::new();
    for (q, row) in a.delta.iter().enumerate() {
        for (l, f) in row.iter().enumerate() {
            if *f != PositiveBool::False {
                transitions.push(TransitionDecl {
                    from: a.states[q].clone(),
                    letter: a.alphabet.name(LetterId(l)).to_string(),
                    kind: None,
                    symbol: None,
                    to: None,
                    formula: Some(bool_decl(f, &a.states)),
                });
            }
        }
    }
    AutomatonDecl {
        id: id.to_string(),
        kind: AutomatonKind::Aja,
        states: a.states.clone(),
        stack: Vec::new(),
        initial: a.initial.iter().map(|&q| a.states[q].clone()).collect(),
        finals: None,
        accepting: None,
        coloring: Some(a.coloring.clone()),
        transitions,
        tests: BTreeMap::new(),
    }
}

pub fn alphabet_decl(alphabet: &PushdownAlphabet) -> AlphabetDecl {
    AlphabetDecl {
        letters: alphabet
            .letters()
            .iter()
            .map(|l| LetterDecl {
                id: l.id.clone(),
                props: l.props.iter().cloned().collect(),
                class: l.class,
            })
            .collect(),
    }
}

pub fn word_decl(id: &str, alphabet: &PushdownAlphabet, w: &LassoWord) -> WordDecl {
    let names = |ls: &[LetterId]| ls.iter().map(|&a| alphabet.name(a).to_string()).collect();
    WordDecl {
        id: id.to_string(),
        prefix: names(w.prefix()),
        period: names(w.period()),
    }
}

impl Project {
    pub fn new(alphabet: Arc<PushdownAlphabet>) -> Self {
        Project {
            table: AutomatonTable::new(alphabet.clone()),
            alphabet,
            bvpas: BTreeMap::new(),
            dpsas: BTreeMap::new(),
            ajas: BTreeMap::new(),
            systems: BTreeMap::new(),
            formulas: BTreeMap::new(),
            words: BTreeMap::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Project::from_file(serde_json::from_str(text)?)
    }

    pub fn from_file(file: ProjectFile) -> Result<Self> {
        let letters = file
            .alphabet
            .letters
            .iter()
            .map(|l| Letter::new(&l.id, l.props.iter().cloned(), l.class))
            .collect();
        let alphabet = Arc::new(PushdownAlphabet::new(letters)?);
        let mut project = Project::new(alphabet.clone());
        let mut ids = BTreeSet::new();
        for a in &file.automata {
            if !ids.insert(a.id.as_str()) {
                return Err(input(format!("duplicate automaton `{}`", a.id)));
            }
        }
        let guards: BTreeSet<&str> = file
            .automata
            .iter()
            .filter(|a| a.kind == AutomatonKind::Tvpa)
            .map(|a| a.id.as_str())
            .collect();
        for a in &file.automata {
            let id = a.id.clone();
            if a.kind != AutomatonKind::Tvpa && !a.tests.is_empty() {
                return Err(input(format!(
                    "automaton `{id}`: only tvpa states carry tests"
                )));
            }
            match a.kind {
                AutomatonKind::Tvpa => {
                    let vps = a.vps(&alphabet)?;
                    let finals = a.finals.as_deref().unwrap_or_default();
                    let mut t = Tvpa::new(
                        vps,
                        state_set(&a.states, &a.initial, &id)?,
                        state_set(&a.states, finals, &id)?,
                    );
                    for (state, text) in &a.tests {
                        let q = index_of(&a.states, state, "state", &id)?;
                        let f = parse_formula_with(text, &alphabet, &|g| guards.contains(g))?;
                        t = t.with_test(q, f);
                    }
                    check_diagnostics(&id, t.validate())?;
                    project.table.insert(&id, t)?;
                }
                AutomatonKind::Bvpa => {
                    let vps = a.vps(&alphabet)?;
                    let accepting = a.accepting.as_deref().unwrap_or_default();
                    let b = Bvpa {
                        initial: state_set(&a.states, &a.initial, &id)?,
                        accepting: state_set(&a.states, accepting, &id)?,
                        vps,
                    };
                    check_diagnostics(&id, b.validate())?;
                    project.bvpas.insert(id, b);
                }
                AutomatonKind::Dpsa => {
                    let vps = a.vps(&alphabet)?;
                    let [initial] = a.initial.as_slice() else {
                        return Err(input(format!(
                            "automaton `{id}`: a dpsa has one initial state"
                        )));
                    };
                    let d = Dpsa {
                        initial: index_of(&a.states, initial, "state", &id)?,
                        coloring: a
                            .coloring
                            .clone()
                            .ok_or_else(|| input(format!("automaton `{id}`: missing coloring")))?,
                        vps,
                    };
                    check_diagnostics(&id, d.validate())?;
                    project.dpsas.insert(id, d);
                }
                AutomatonKind::Aja => {
                    let aja = a.aja(&alphabet)?;
                    project.ajas.insert(id, aja);
                }
                AutomatonKind::Vps => {
                    let vps = a.vps(&alphabet)?;
                    let initial = match a.initial.as_slice() {
                        [] => None,
                        [q] => Some(index_of(&a.states, q, "state", &id)?),
                        _ => {
                            return Err(input(format!(
                                "automaton `{id}`: a system has at most one initial state"
                            )))
                        }
                    };
                    project.systems.insert(id, System { vps, initial });
                }
            }
        }
        project.table.check_all()?;
        for f in &file.formulas {
            let formula = parse_formula(&f.text, &project.table)?;
            if project.formulas.insert(f.id.clone(), formula).is_some() {
                return Err(input(format!("duplicate formula `{}`", f.id)));
            }
        }
        for w in &file.words {
            let resolve = |ls: &[String]| -> Result<Vec<LetterId>> {
                ls.iter().map(|l| alphabet.resolve(l)).collect()
            };
            let word = LassoWord::new(resolve(&w.prefix)?, resolve(&w.period)?)?;
            if project.words.insert(w.id.clone(), word).is_some() {
                return Err(input(format!("duplicate word `{}`", w.id)));
            }
        }
        Ok(project)
    }

    /// Canonical on-disk form: automata grouped by kind, each group sorted
    /// by name.
    pub fn to_file(&self) -> ProjectFile {
        let mut automata: Vec<AutomatonDecl> = Vec::new();
        automata.extend(self.table.automata().iter().map(|(id, t)| tvpa_decl(id, t)));
        automata.extend(self.bvpas.iter().map(|(id, b)| bvpa_decl(id, b)));
        automata.extend(self.dpsas.iter().map(|(id, d)| dpsa_decl(id, d)));
        automata.extend(self.ajas.iter().map(|(id, a)| aja_decl(id, a)));
        automata.extend(self.systems.iter().map(|(id, s)| system_decl(id, s)));
        ProjectFile {
            alphabet: alphabet_decl(&self.alphabet),
            automata,
            formulas: self
                .formulas
                .iter()
                .map(|(id, f)| FormulaDecl {
                    id: id.clone(),
                    text: f.to_string(),
                })
                .collect(),
            words: self
                .words
                .iter()
                .map(|(id, w)| word_decl(id, &self.alphabet, w))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("project serializes") + "\n"
    }

    pub fn formula(&self, id: &str) -> Result<&Formula> {
        self.formulas
            .get(id)
            .ok_or_else(|| input(format!("unknown formula `{id}`")))
    }

    pub fn word(&self, id: &str) -> Result<&LassoWord> {
        self.words
            .get(id)
            .ok_or_else(|| input(format!("unknown word `{id}`")))
    }

    pub fn system(&self, id: &str) -> Result<&System> {
        self.systems
            .get(id)
            .ok_or_else(|| input(format!("unknown system `{id}`")))
    }

    pub fn bvpa(&self, id: &str) -> Result<&Bvpa> {
        self.bvpas
            .get(id)
            .ok_or_else(|| input(format!("unknown bvpa `{id}`")))
    }
}
