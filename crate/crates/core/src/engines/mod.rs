//! Decision engines: pushdown reachability by saturation, Büchi pushdown
//! non-emptiness via repeating heads, and parity games.

mod buchi;
mod parity;
mod pds;

pub use buchi::{buchi_nonempty, buchi_witness, BuchiWitness};
pub use parity::{check_strategy, solve_parity, ParityGame, Player, Solution};
pub use pds::{pre_star, PAutomaton, PdsRule, PushdownSystem, RuleKind};

/// Strongly connected components of a graph given by successor lists.
pub(crate) fn sccs(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut g = petgraph::graph::DiGraph::<(), ()>::with_capacity(succ.len(), 0);
    let nodes: Vec<_> = (0..succ.len()).map(|_| g.add_node(())).collect();
    for (v, row) in succ.iter().enumerate() {
        for &w in row {
            g.add_edge(nodes[v], nodes[w], ());
        }
    }
    petgraph::algo::tarjan_scc(&g)
        .into_iter()
        .map(|c| c.into_iter().map(|n| n.index()).collect())
        .collect()
}
