//! Max-parity games: the existential player wins a play iff the largest
//! color seen infinitely often is even.

use std::collections::VecDeque;

use super::sccs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Exists,
    All,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Exists => Player::All,
            Player::All => Player::Exists,
        }
    }

    /// The player favoured by a color.
    fn of_color(c: u32) -> Player {
        if c % 2 == 0 {
            Player::Exists
        } else {
            Player::All
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParityGame {
    owner: Vec<Player>,
    color: Vec<u32>,
    succ: Vec<Vec<usize>>,
}

impl ParityGame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, owner: Player, color: u32) -> usize {
        self.owner.push(owner);
        self.color.push(color);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        if !self.succ[from].contains(&to) {
            self.succ[from].push(to);
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn color(&self, v: usize) -> u32 {
        self.color[v]
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    /// Sends every dead end to a sink won by its owner's opponent (a player
    /// who cannot move loses).
    pub fn complete(&mut self) {
        let dead: Vec<usize> = (0..self.len())
            .filter(|&v| self.succ[v].is_empty())
            .collect();
        if dead.is_empty() {
            return;
        }
        let mut sinks = [None, None];
        for v in dead {
            let winner = self.owner[v].opponent();
            let slot = (winner == Player::All) as usize;
            let sink = *sinks[slot].get_or_insert_with(|| {
                let s = self.add_node(winner, slot as u32);
                self.succ[s].push(s);
                s
            });
            self.succ[v].push(sink);
        }
    }
}

/// Winning regions and positional winning strategies for both players.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub exists_wins: Vec<bool>,
    /// For each node, the winner's chosen successor when the node's owner
    /// wins it; `None` otherwise.
    pub strategy: Vec<Option<usize>>,
}

impl Solution {
    pub fn winner(&self, v: usize) -> Player {
        if self.exists_wins[v] {
            Player::Exists
        } else {
            Player::All
        }
    }
}

/// Attractor of `target` for `player` inside `alive`, recording attracting
/// moves into `strategy`.
fn attractor(
    game: &ParityGame,
    alive: &[bool],
    target: &[usize],
    player: Player,
    strategy: &mut [Option<usize>],
    pred: &[Vec<usize>],
) -> Vec<bool> {
    let n = game.len();
    let mut inside = vec![false; n];
    let mut count: Vec<usize> = (0..n)
        .map(|v| game.succ[v].iter().filter(|&&w| alive[w]).count())
        .collect();
    let mut queue = VecDeque::new();
    for &t in target {
        if !inside[t] {
            inside[t] = true;
            queue.push_back(t);
        }
    }
    while let Some(w) = queue.pop_front() {
        for &v in &pred[w] {
            if !alive[v] || inside[v] {
                continue;
            }
            if game.owner[v] == player {
                inside[v] = true;
                strategy[v] = Some(w);
                queue.push_back(v);
            } else {
                count[v] -= 1;
                if count[v] == 0 {
                    inside[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    inside
}

fn zielonka(
    game: &ParityGame,
    alive: &[bool],
    pred: &[Vec<usize>],
    win: &mut [Player],
    strategy: &mut [Option<usize>],
) {
    let Some(d) = (0..game.len())
        .filter(|&v| alive[v])
        .map(|v| game.color[v])
        .max()
    else {
        return;
    };
    let player = Player::of_color(d);
    let top: Vec<usize> = (0..game.len())
        .filter(|&v| alive[v] && game.color[v] == d)
        .collect();
    let mut scratch = strategy.to_vec();
    let a = attractor(game, alive, &top, player, &mut scratch, pred);
    let rest: Vec<bool> = (0..game.len()).map(|v| alive[v] && !a[v]).collect();
    zielonka(game, &rest, pred, win, strategy);
    let lost: Vec<usize> = (0..game.len())
        .filter(|&v| rest[v] && win[v] != player)
        .collect();
    if lost.is_empty() {
        for v in 0..game.len() {
            if a[v] {
                win[v] = player;
                strategy[v] = if game.owner[v] != player {
                    None
                } else if game.color[v] == d {
                    // any move inside the region will do
                    game.succ[v].iter().copied().find(|&w| alive[w])
                } else {
                    scratch[v]
                };
            }
        }
        return;
    }
    let opponent = player.opponent();
    let b = attractor(game, alive, &lost, opponent, strategy, pred);
    for v in 0..game.len() {
        if b[v] {
            win[v] = opponent;
        }
    }
    let rest: Vec<bool> = (0..game.len()).map(|v| alive[v] && !b[v]).collect();
    zielonka(game, &rest, pred, win, strategy);
}

/// Solves a max-parity game. Dead ends must have been removed (see
/// [`ParityGame::complete`]).
pub fn solve_parity(game: &ParityGame) -> Solution {
    let n = game.len();
    assert!(
        game.succ.iter().all(|s| !s.is_empty()),
        "game has dead ends"
    );
    let mut pred = vec![Vec::new(); n];
    for v in 0..n {
        for &w in &game.succ[v] {
            pred[w].push(v);
        }
    }
    let mut win = vec![Player::Exists; n];
    let mut strategy = vec![None; n];
    zielonka(game, &vec![true; n], &pred, &mut win, &mut strategy);
    for v in 0..n {
        if game.owner[v] != win[v] {
            strategy[v] = None;
        }
    }
    Solution {
        exists_wins: win.iter().map(|p| *p == Player::Exists).collect(),
        strategy,
    }
}

/// Independently checks that `solution` is consistent: each player's
/// strategy stays in their region and wins every play against any
/// counter-strategy of the opponent.
pub fn check_strategy(game: &ParityGame, solution: &Solution) -> bool {
    let n = game.len();
    for player in [Player::Exists, Player::All] {
        let region: Vec<bool> = (0..n).map(|v| solution.winner(v) == player).collect();
        // graph restricted to the player's choices inside the region
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in (0..n).filter(|&v| region[v]) {
            if game.owner[v] == player {
                match solution.strategy[v] {
                    Some(w) if game.succ[v].contains(&w) && region[w] => succ[v].push(w),
                    _ => return false,
                }
            } else {
                for &w in &game.succ[v] {
                    if !region[w] {
                        return false;
                    }
                    succ[v].push(w);
                }
            }
        }
        // no cycle whose maximal color favours the opponent
        let mut colors: Vec<u32> = game.color.clone();
        colors.sort();
        colors.dedup();
        for &c in colors.iter().filter(|&&c| Player::of_color(c) != player) {
            let keep: Vec<bool> = (0..n).map(|v| region[v] && game.color[v] <= c).collect();
            let sub: Vec<Vec<usize>> = (0..n)
                .map(|v| {
                    if keep[v] {
                        succ[v].iter().copied().filter(|&w| keep[w]).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            for comp in sccs(&sub) {
                let cyclic = comp.len() > 1 || sub[comp[0]].contains(&comp[0]);
                if cyclic && comp.iter().any(|&v| game.color[v] == c) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::random_game;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exists wins from `v` iff some positional strategy wins against every
    /// opponent play: enumerate Exists strategies, then look for an
    /// odd-dominated cycle reachable in the induced graph.
    fn brute_force(game: &ParityGame) -> Vec<bool> {
        let n = game.len();
        let choices: Vec<usize> = (0..n)
            .filter(|&v| game.owner(v) == Player::Exists)
            .collect();
        let mut best = vec![false; n];
        let mut idx = vec![0usize; choices.len()];
        loop {
            let succ: Vec<Vec<usize>> = (0..n)
                .map(|v| match choices.iter().position(|&c| c == v) {
                    Some(i) => vec![game.successors(v)[idx[i]]],
                    None => game.successors(v).to_vec(),
                })
                .collect();
            // bad[v]: v lies on a reachable cycle whose max color is odd
            let mut bad = vec![false; n];
            for c in (1..=game.color.iter().copied().max().unwrap_or(0)).step_by(2) {
                let sub: Vec<Vec<usize>> = (0..n)
                    .map(|v| {
                        if game.color(v) <= c {
                            succ[v]
                                .iter()
                                .copied()
                                .filter(|&w| game.color(w) <= c)
                                .collect()
                        } else {
                            Vec::new()
                        }
                    })
                    .collect();
                for comp in sccs(&sub) {
                    let cyclic = comp.len() > 1 || sub[comp[0]].contains(&comp[0]);
                    if cyclic && comp.iter().any(|&v| game.color(v) == c) {
                        for &v in &comp {
                            bad[v] = true;
                        }
                    }
                }
            }
            for v in 0..n {
                let mut seen = vec![false; n];
                let mut stack = vec![v];
                let mut lost = false;
                while let Some(x) = stack.pop() {
                    if seen[x] {
                        continue;
                    }
                    seen[x] = true;
                    lost |= bad[x];
                    stack.extend(&succ[x]);
                }
                best[v] |= !lost;
            }
            let mut i = 0;
            loop {
                if i == idx.len() {
                    return best;
                }
                idx[i] += 1;
                if idx[i] < game.successors(choices[i]).len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn self_loops() {
        let mut g = ParityGame::new();
        let even = g.add_node(Player::All, 2);
        let odd = g.add_node(Player::Exists, 3);
        g.add_edge(even, even);
        g.add_edge(odd, odd);
        let s = solve_parity(&g);
        assert_eq!(s.exists_wins, vec![true, false]);
        assert!(check_strategy(&g, &s));
    }

    #[test]
    fn dead_ends_lose_for_their_owner() {
        let mut g = ParityGame::new();
        let a = g.add_node(Player::Exists, 0);
        let b = g.add_node(Player::All, 0);
        g.complete();
        let s = solve_parity(&g);
        assert!(!s.exists_wins[a]);
        assert!(s.exists_wins[b]);
    }

    #[test]
    fn choice_matters() {
        let mut g = ParityGame::new();
        let v = g.add_node(Player::Exists, 0);
        let good = g.add_node(Player::All, 4);
        let bad = g.add_node(Player::All, 5);
        g.add_edge(v, bad);
        g.add_edge(v, good);
        g.add_edge(good, v);
        g.add_edge(bad, v);
        let s = solve_parity(&g);
        assert!(s.exists_wins[v]);
        assert_eq!(s.strategy[v], Some(good));
        assert!(check_strategy(&g, &s));
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let g = random_game(&mut rng, 7, 4);
            let s = solve_parity(&g);
            assert_eq!(s.exists_wins, brute_force(&g), "{g:?}");
            assert!(check_strategy(&g, &s));
        }
    }
}
