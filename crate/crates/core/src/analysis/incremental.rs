//! Suffix-sharing evaluation for lasso enumeration.
//!
//! For a fixed period `v`, the truth of every subformula at positions
//! `1..` of `a·u·v^ω` is its truth on `u·v^ω`. We therefore grow `u` right
//! to left and compute position 0 only. A diamond needs more than a bit per
//! subformula: we keep, per guard state `q`, the regular set of stacks `γ`
//! from which `(q, γ)` at position 0 reaches a target. Prepending a letter
//! applies one step of pre-image to these sets.

use std::collections::HashMap;

use crate::automata::{Rule, Tvpa, BOTTOM};
use crate::error::Result;
use crate::logic::{AutomatonTable, Formula};
use crate::semantics::{guard_pre_star, Evaluator, SatTable};
use crate::word::{LassoWord, LetterId, PushdownAlphabet};

enum Node {
    Atom(String),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Diamond(usize),
}

struct DiamondNode<'a> {
    tvpa: &'a Tvpa,
    operand: usize,
    tests: Vec<Option<usize>>,
}

/// A formula flattened into a DAG of subformulas, children first. Boxes
/// are rewritten to negated diamonds.
pub(super) struct Compiled<'a> {
    table: &'a AutomatonTable,
    nodes: Vec<Node>,
    formulas: Vec<Formula>,
    diamonds: Vec<DiamondNode<'a>>,
    memo: HashMap<Formula, usize>,
    root: usize,
}

impl<'a> Compiled<'a> {
    pub(super) fn new(f: &Formula, table: &'a AutomatonTable) -> Result<Self> {
        table.check(f)?;
        let mut c = Compiled {
            table,
            nodes: Vec::new(),
            formulas: Vec::new(),
            diamonds: Vec::new(),
            memo: HashMap::new(),
            root: 0,
        };
        c.root = c.compile(f)?;
        Ok(c)
    }

    fn compile(&mut self, f: &Formula) -> Result<usize> {
        if let Some(&i) = self.memo.get(f) {
            return Ok(i);
        }
        let node = match f {
            Formula::Atom(p) => Node::Atom(p.clone()),
            Formula::Not(g) => Node::Not(self.compile(g)?),
            Formula::And(a, b) => Node::And(self.compile(a)?, self.compile(b)?),
            Formula::Or(a, b) => Node::Or(self.compile(a)?, self.compile(b)?),
            Formula::Box(g, h) => {
                let dual = Formula::not(Formula::diamond(g, Formula::not((**h).clone())));
                let i = self.compile(&dual)?;
                self.memo.insert(f.clone(), i);
                return Ok(i);
            }
            Formula::Diamond(g, h) => {
                let operand = self.compile(h)?;
                let tvpa = self.table.resolve(g)?;
                let tests = (0..tvpa.vps.state_count())
                    .map(|q| tvpa.test(q).map(|t| self.compile(t)).transpose())
                    .collect::<Result<_>>()?;
                self.diamonds.push(DiamondNode {
                    tvpa,
                    operand,
                    tests,
                });
                Node::Diamond(self.diamonds.len() - 1)
            }
        };
        self.nodes.push(node);
        self.formulas.push(f.clone());
        self.memo.insert(f.clone(), self.nodes.len() - 1);
        Ok(self.nodes.len() - 1)
    }
}

const ANY: u32 = 0;
const FINAL: u32 = 1;

/// Stack automaton shared by all levels of the search; nodes added for a
/// level are dropped when the search backtracks past it.
struct Arena {
    edges: Vec<Vec<(u32, u32)>>,
    finals: Vec<bool>,
}

impl Arena {
    fn add(&mut self, edges: Vec<(u32, u32)>, is_final: bool) -> u32 {
        self.edges.push(edges);
        self.finals.push(is_final);
        (self.edges.len() - 1) as u32
    }

    fn truncate(&mut self, len: usize) {
        self.edges.truncate(len);
        self.finals.truncate(len);
    }

    fn accepts_bottom(&self, set: &[u32]) -> bool {
        set.iter().any(|&n| {
            self.edges[n as usize]
                .iter()
                .any(|&(s, m)| s == 0 && self.finals[m as usize])
        })
    }
}

struct Level {
    values: Vec<bool>,
    /// `entries[d][q]`: arena nodes whose union accepts the good stacks.
    entries: Vec<Vec<Vec<u32>>>,
}

/// Enumerates `u` right to left for one fixed period.
pub(super) struct SuffixSearch<'c, 'a> {
    compiled: &'c Compiled<'a>,
    alphabet: &'a PushdownAlphabet,
    letters: &'c [LetterId],
    arenas: Vec<Arena>,
}

impl<'c, 'a> SuffixSearch<'c, 'a> {
    /// Sets up the search for `period`, returning it with the base level
    /// (`u = ε`).
    pub(super) fn new(
        compiled: &'c Compiled<'a>,
        letters: &'c [LetterId],
        period: &[LetterId],
    ) -> Result<(Self, Vec<bool>, Vec<Vec<Vec<u32>>>)> {
        let word = LassoWord::new(Vec::new(), period.to_vec())?;
        let mut ev = Evaluator::new(compiled.table, &word)?;
        let tables: Vec<SatTable> = compiled
            .formulas
            .iter()
            .map(|f| ev.evaluate(f))
            .collect::<Result<_>>()?;
        let classes = word.class_count();
        let mut arenas = Vec::new();
        let mut entries = Vec::new();
        for d in &compiled.diamonds {
            let tests: Vec<Option<&SatTable>> =
                d.tests.iter().map(|t| t.map(|i| &tables[i])).collect();
            let operand = &tables[d.operand];
            let pa = guard_pre_star(d.tvpa, &word, &tests, &|c| operand.class(c));
            let symbols = d.tvpa.vps.stack_symbol_count() as u32;
            let mut arena = Arena {
                edges: Vec::new(),
                finals: Vec::new(),
            };
            arena.add((0..symbols).map(|s| (s, ANY)).collect(), true);
            arena.add(Vec::new(), true);
            let offset = arena.edges.len() as u32;
            for s in 0..pa.states() {
                arena.add(Vec::new(), pa.is_final(s));
            }
            for (from, sym, to) in pa.transitions() {
                arena.edges[from + offset as usize].push((sym.0 as u32, to as u32 + offset));
            }
            entries.push(
                (0..d.tvpa.vps.state_count())
                    .map(|q| vec![(q * classes) as u32 + offset])
                    .collect(),
            );
            arenas.push(arena);
        }
        let values = tables.iter().map(|t| t.class(0)).collect();
        let alphabet = compiled.table.alphabet();
        Ok((
            SuffixSearch {
                compiled,
                alphabet,
                letters,
                arenas,
            },
            values,
            entries,
        ))
    }

    /// Runs the search below the base level. `visit(u, holds)` is called
    /// for every prefix `u` (including the empty one) and returns whether
    /// longer prefixes are still of interest.
    pub(super) fn run(
        &mut self,
        base_values: Vec<bool>,
        base_entries: Vec<Vec<Vec<u32>>>,
        max_prefix: usize,
        visit: &mut dyn FnMut(&[LetterId], bool) -> bool,
    ) {
        let root = self.compiled.root;
        let base = Level {
            values: base_values,
            entries: base_entries,
        };
        let mut rev = Vec::new();
        if visit(&[], base.values[root]) {
            self.descend(&base, &mut rev, max_prefix, visit);
        }
    }

    fn descend(
        &mut self,
        level: &Level,
        rev: &mut Vec<LetterId>,
        max_prefix: usize,
        visit: &mut dyn FnMut(&[LetterId], bool) -> bool,
    ) {
        if rev.len() >= max_prefix {
            return;
        }
        for &a in self.letters {
            let marks: Vec<usize> = self.arenas.iter().map(|ar| ar.edges.len()).collect();
            let next = self.prepend(level, a);
            rev.push(a);
            let u: Vec<LetterId> = rev.iter().rev().copied().collect();
            if visit(&u, next.values[self.compiled.root]) {
                self.descend(&next, rev, max_prefix, visit);
            }
            rev.pop();
            for (ar, m) in self.arenas.iter_mut().zip(marks) {
                ar.truncate(m);
            }
        }
    }

    fn prepend(&mut self, prev: &Level, a: LetterId) -> Level {
        let compiled = self.compiled;
        let mut values = vec![false; compiled.nodes.len()];
        let mut entries = vec![Vec::new(); compiled.diamonds.len()];
        for (i, node) in compiled.nodes.iter().enumerate() {
            values[i] = match *node {
                Node::Atom(ref p) => self.alphabet.holds(a, p),
                Node::Not(x) => !values[x],
                Node::And(x, y) => values[x] && values[y],
                Node::Or(x, y) => values[x] || values[y],
                Node::Diamond(d) => {
                    let e = self.step_diamond(d, &prev.entries[d], a, &values);
                    let tvpa = compiled.diamonds[d].tvpa;
                    let holds = tvpa
                        .initial
                        .iter()
                        .any(|&q| self.arenas[d].accepts_bottom(&e[q]));
                    entries[d] = e;
                    holds
                }
            };
        }
        Level { values, entries }
    }

    fn step_diamond(
        &mut self,
        d: usize,
        prev: &[Vec<u32>],
        a: LetterId,
        values: &[bool],
    ) -> Vec<Vec<u32>> {
        let node = &self.compiled.diamonds[d];
        let arena = &mut self.arenas[d];
        let vps = &node.tvpa.vps;
        let mut out = Vec::with_capacity(vps.state_count());
        for q in 0..vps.state_count() {
            if !node.tests[q].map_or(true, |t| values[t]) {
                out.push(Vec::new());
                continue;
            }
            let mut set = Vec::new();
            if node.tvpa.finals.contains(&q) && values[node.operand] {
                set.push(ANY);
            }
            let mut pops: Vec<(u32, u32)> = Vec::new();
            for rule in vps.rules_from(q, a) {
                match *rule {
                    Rule::Local { to, .. } => set.extend_from_slice(&prev[to]),
                    Rule::Call { to, push, .. } => {
                        for &n in &prev[to] {
                            set.extend(
                                arena.edges[n as usize]
                                    .iter()
                                    .filter(|&&(s, _)| s == push.0 as u32)
                                    .map(|&(_, m)| m),
                            );
                        }
                    }
                    Rule::Return { pop, to, .. } if pop == BOTTOM => {
                        if arena.accepts_bottom(&prev[to]) {
                            pops.push((0, FINAL));
                        }
                    }
                    Rule::Return { pop, to, .. } => {
                        pops.extend(prev[to].iter().map(|&n| (pop.0 as u32, n)));
                    }
                }
            }
            if !pops.is_empty() {
                pops.sort_unstable();
                pops.dedup();
                set.push(arena.add(pops, false));
            }
            set.sort_unstable();
            set.dedup();
            out.push(set);
        }
        out
    }
}
