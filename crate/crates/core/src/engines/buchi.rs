//! Büchi non-emptiness for pushdown systems via repeating heads.

use std::collections::{HashMap, VecDeque};

use super::pds::{PushdownSystem, RuleKind};
use super::sccs;
use crate::automata::{Configuration, StackSym, BOTTOM};

/// Key of a pop summary `(p, γ) ⇒⁺ (p', ε)`; `bit` records whether an
/// accepting control was visited (excluding `p'`).
type SummaryKey = (usize, usize, usize, bool);

#[derive(Debug, Clone, Copy)]
enum Derivation {
    Pop(usize),
    Internal(usize, SummaryKey),
    Push(usize, SummaryKey, SummaryKey),
}

#[derive(Debug, Clone, Copy)]
enum HeadEdge {
    Rule(usize),
    PushSummary(usize, SummaryKey),
}

struct Analysis<'a> {
    pds: &'a PushdownSystem,
    accepting: Vec<bool>,
    summaries: HashMap<SummaryKey, Derivation>,
    /// head id → (successor head, accepting bit, edge)
    edges: Vec<Vec<(usize, bool, HeadEdge)>>,
}

impl<'a> Analysis<'a> {
    fn new(pds: &'a PushdownSystem, accepting: &[usize]) -> Self {
        let mut acc = vec![false; pds.controls()];
        for &p in accepting {
            acc[p] = true;
        }
        let mut a = Analysis {
            pds,
            accepting: acc,
            summaries: HashMap::new(),
            edges: Vec::new(),
        };
        a.compute_summaries();
        a.build_head_graph();
        a
    }

    fn head(&self, p: usize, sym: usize) -> usize {
        p * self.pds.symbols() + sym
    }

    fn compute_summaries(&mut self) {
        let rules = self.pds.rules();
        let n = self.pds.controls();
        let mut internal_into: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut push_into: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, r) in rules.iter().enumerate() {
            match r.kind {
                RuleKind::Internal => internal_into[r.to].push(i),
                RuleKind::Push(_) => push_into[r.to].push(i),
                _ => {}
            }
        }
        let mut by_start: HashMap<(usize, usize), Vec<(usize, bool)>> = HashMap::new();
        let mut by_end: Vec<Vec<SummaryKey>> = vec![Vec::new(); n];
        let mut worklist: VecDeque<(SummaryKey, Derivation)> = VecDeque::new();
        for (i, r) in rules.iter().enumerate() {
            if let RuleKind::Pop(a) = r.kind {
                worklist.push_back((
                    (r.from, a.0, r.to, self.accepting[r.from]),
                    Derivation::Pop(i),
                ));
            }
        }
        while let Some((key, der)) = worklist.pop_front() {
            if self.summaries.contains_key(&key) {
                continue;
            }
            self.summaries.insert(key, der);
            let (p, sym, p2, bit) = key;
            by_start.entry((p, sym)).or_default().push((p2, bit));
            by_end[p2].push(key);
            for &ri in &internal_into[p] {
                let r = rules[ri];
                let k = (r.from, sym, p2, bit || self.accepting[r.from]);
                worklist.push_back((k, Derivation::Internal(ri, key)));
            }
            // `key` as the inner summary of a push into `p`
            for &ri in &push_into[p] {
                let r = rules[ri];
                if r.kind != RuleKind::Push(StackSym(sym)) {
                    continue;
                }
                for gamma in 0..self.pds.symbols() {
                    for &(p3, b2) in by_start.get(&(p2, gamma)).into_iter().flatten() {
                        let k = (r.from, gamma, p3, self.accepting[r.from] || bit || b2);
                        worklist.push_back((k, Derivation::Push(ri, key, (p2, gamma, p3, b2))));
                    }
                }
            }
            // `key` as the outer summary after some inner summary ending in `p`
            for &inner in &by_end[p] {
                for &ri in &push_into[inner.0] {
                    let r = rules[ri];
                    if r.kind != RuleKind::Push(StackSym(inner.1)) {
                        continue;
                    }
                    let k = (r.from, sym, p2, self.accepting[r.from] || inner.3 || bit);
                    worklist.push_back((k, Derivation::Push(ri, inner, key)));
                }
            }
        }
    }

    fn build_head_graph(&mut self) {
        let symbols = self.pds.symbols();
        let mut edges = vec![Vec::new(); self.pds.controls() * symbols];
        let mut by_start: HashMap<(usize, usize), Vec<SummaryKey>> = HashMap::new();
        for &k in self.summaries.keys() {
            by_start.entry((k.0, k.1)).or_default().push(k);
        }
        for v in by_start.values_mut() {
            v.sort();
        }
        for (i, r) in self.pds.rules().iter().enumerate() {
            let acc = self.accepting[r.from];
            match r.kind {
                RuleKind::Internal => {
                    for g in 0..symbols {
                        edges[self.head(r.from, g)].push((
                            self.head(r.to, g),
                            acc,
                            HeadEdge::Rule(i),
                        ));
                    }
                }
                RuleKind::BottomRead => {
                    edges[self.head(r.from, 0)].push((self.head(r.to, 0), acc, HeadEdge::Rule(i)));
                }
                RuleKind::Push(b) => {
                    for g in 0..symbols {
                        edges[self.head(r.from, g)].push((
                            self.head(r.to, b.0),
                            acc,
                            HeadEdge::Rule(i),
                        ));
                    }
                    for &k in by_start.get(&(r.to, b.0)).into_iter().flatten() {
                        for g in 0..symbols {
                            edges[self.head(r.from, g)].push((
                                self.head(k.2, g),
                                acc || k.3,
                                HeadEdge::PushSummary(i, k),
                            ));
                        }
                    }
                }
                RuleKind::Pop(_) => {}
            }
        }
        self.edges = edges;
    }

    /// Heads lying on a cycle through an accepting edge.
    fn repeating_heads(&self) -> Vec<bool> {
        let succ: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|es| es.iter().map(|e| e.0).collect())
            .collect();
        let mut comp = vec![usize::MAX; succ.len()];
        let components = sccs(&succ);
        for (ci, c) in components.iter().enumerate() {
            for &v in c {
                comp[v] = ci;
            }
        }
        let mut repeating = vec![false; succ.len()];
        for (v, es) in self.edges.iter().enumerate() {
            for &(w, bit, _) in es {
                if bit && comp[v] == comp[w] {
                    for &x in &components[comp[v]] {
                        repeating[x] = true;
                    }
                }
            }
        }
        repeating
    }

    /// Heads reachable from the start configuration, level by level.
    fn reachable_heads(&self, start: &Configuration) -> Vec<bool> {
        let symbols = self.pds.symbols();
        let mut reached = vec![false; self.edges.len()];
        let mut controls = vec![start.state];
        for (level, sym) in start.stack.iter().enumerate() {
            let mut queue: VecDeque<usize> =
                controls.iter().map(|&p| self.head(p, sym.0)).collect();
            let mut local = vec![false; self.edges.len()];
            for &h in &queue {
                local[h] = true;
            }
            while let Some(h) = queue.pop_front() {
                for &(w, _, _) in &self.edges[h] {
                    if !local[w] {
                        local[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            let mut next = Vec::new();
            for (h, &on) in local.iter().enumerate() {
                if on {
                    reached[h] = true;
                    let (p, g) = (h / symbols, h % symbols);
                    if g == sym.0 && level + 1 < start.stack.len() {
                        for k in self.summaries.keys().filter(|k| k.0 == p && k.1 == g) {
                            next.push(k.2);
                        }
                    }
                }
            }
            next.sort();
            next.dedup();
            controls = next;
        }
        reached
    }

    fn expand_summary(&self, key: SummaryKey, out: &mut Vec<usize>) {
        match self.summaries[&key] {
            Derivation::Pop(ri) => out.push(self.pds.rules()[ri].label),
            Derivation::Internal(ri, k) => {
                out.push(self.pds.rules()[ri].label);
                self.expand_summary(k, out);
            }
            Derivation::Push(ri, k1, k2) => {
                out.push(self.pds.rules()[ri].label);
                self.expand_summary(k1, out);
                self.expand_summary(k2, out);
            }
        }
    }

    fn expand_edge(&self, e: HeadEdge, out: &mut Vec<usize>) {
        match e {
            HeadEdge::Rule(ri) => out.push(self.pds.rules()[ri].label),
            HeadEdge::PushSummary(ri, k) => {
                out.push(self.pds.rules()[ri].label);
                self.expand_summary(k, out);
            }
        }
    }

    /// Shortest edge path `from → to` (BFS), restricted to `allowed`.
    fn path(
        &self,
        from: usize,
        to: usize,
        allowed: &dyn Fn(usize) -> bool,
    ) -> Option<Vec<HeadEdge>> {
        let mut prev: HashMap<usize, (usize, HeadEdge)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; self.edges.len()];
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (p, e) = prev[&cur];
                    path.push(e);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &(w, _, e) in &self.edges[v] {
                if !seen[w] && allowed(w) {
                    seen[w] = true;
                    prev.insert(w, (v, e));
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Whether some infinite run from `start` visits `accepting` controls
/// infinitely often.
pub fn buchi_nonempty(pds: &PushdownSystem, start: &Configuration, accepting: &[usize]) -> bool {
    if accepting.is_empty() {
        return false;
    }
    let a = Analysis::new(pds, accepting);
    let repeating = a.repeating_heads();
    let reached = a.reachable_heads(start);
    repeating.iter().zip(&reached).any(|(r, s)| *r && *s)
}

/// Labels of an accepting lasso run `u · v^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiWitness {
    pub prefix: Vec<usize>,
    pub period: Vec<usize>,
}

/// Like [`buchi_nonempty`] for a start stack `⊥`, returning the rule labels
/// of an accepting lasso run.
pub fn buchi_witness(
    pds: &PushdownSystem,
    start_control: usize,
    accepting: &[usize],
) -> Option<BuchiWitness> {
    if accepting.is_empty() {
        return None;
    }
    let a = Analysis::new(pds, accepting);
    let repeating = a.repeating_heads();
    let start = a.head(start_control, BOTTOM.0);
    let succ: Vec<Vec<usize>> = a
        .edges
        .iter()
        .map(|es| es.iter().map(|e| e.0).collect())
        .collect();
    let mut comp = vec![0; succ.len()];
    for (ci, c) in sccs(&succ).iter().enumerate() {
        for &v in c {
            comp[v] = ci;
        }
    }
    // candidate accepting edges inside an SCC, nearest first
    let mut dist = vec![usize::MAX; succ.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut best: Option<(usize, usize, usize, HeadEdge)> = None;
    for (v, es) in a.edges.iter().enumerate() {
        if dist[v] == usize::MAX || !repeating[v] {
            continue;
        }
        for &(w, bit, e) in es {
            if bit && comp[v] == comp[w] && best.as_ref().map_or(true, |b| dist[v] < b.0) {
                best = Some((dist[v], v, w, e));
            }
        }
    }
    let (_, x, y, edge) = best?;
    let to_x = a.path(start, x, &|_| true)?;
    let c = comp[x];
    let back = a.path(y, x, &|w| comp[w] == c)?;
    let mut prefix = Vec::new();
    for e in to_x {
        a.expand_edge(e, &mut prefix);
    }
    let mut period = Vec::new();
    a.expand_edge(edge, &mut period);
    for e in back {
        a.expand_edge(e, &mut period);
    }
    Some(BuchiWitness { prefix, period })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepting_self_loop() {
        let mut pds = PushdownSystem::new(1, 1);
        pds.add_internal(0, 0);
        assert!(buchi_nonempty(&pds, &Configuration::initial(0), &[0]));
        assert!(!buchi_nonempty(&pds, &Configuration::initial(0), &[]));
        let w = buchi_witness(&pds, 0, &[0]).unwrap();
        assert!(w.prefix.is_empty());
        assert_eq!(w.period.len(), 1);
    }

    #[test]
    fn pushing_forever_is_an_infinite_run() {
        let mut pds = PushdownSystem::new(2, 2);
        pds.add_push(0, 1, StackSym(1));
        pds.add_internal(1, 0);
        assert!(buchi_nonempty(&pds, &Configuration::initial(0), &[1]));
    }

    #[test]
    fn finite_runs_only() {
        let mut pds = PushdownSystem::new(2, 2);
        pds.add_push(0, 1, StackSym(1));
        pds.add_pop(1, StackSym(1), 0);
        pds.add_bottom_read(0, 1);
        // 0 ⊥ → 1 A⊥ → 0 ⊥ → ... is infinite; drop the push and nothing is
        assert!(buchi_nonempty(&pds, &Configuration::initial(0), &[0]));
        let mut dead = PushdownSystem::new(2, 2);
        dead.add_pop(1, StackSym(1), 0);
        dead.add_bottom_read(0, 1);
        assert!(!buchi_nonempty(&dead, &Configuration::initial(0), &[0, 1]));
    }

    #[test]
    fn matched_loop_witness_replays() {
        let mut pds = PushdownSystem::new(2, 2);
        pds.add_rule(super::super::PdsRule {
            from: 0,
            kind: RuleKind::Push(StackSym(1)),
            to: 1,
            label: 7,
        });
        pds.add_rule(super::super::PdsRule {
            from: 1,
            kind: RuleKind::Pop(StackSym(1)),
            to: 0,
            label: 8,
        });
        let w = buchi_witness(&pds, 0, &[1]).unwrap();
        assert_eq!(w.period, vec![7, 8]);
    }
}
