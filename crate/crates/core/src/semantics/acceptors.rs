use std::collections::HashMap;

use super::class_product;
use crate::automata::{Bvpa, Configuration, Direction, Dpsa, OneAja, PositiveBool, BOTTOM};
use crate::engines::{buchi_nonempty, solve_parity, ParityGame, Player};
use crate::error::Result;
use crate::word::{LassoWord, StackProfile};

/// Whether some initial run of `b` on `word` visits accepting states
/// infinitely often.
pub fn bvpa_accepts(b: &Bvpa, word: &LassoWord) -> Result<bool> {
    word.check_alphabet(b.vps.alphabet())?;
    let classes = word.class_count();
    let pds = class_product(&b.vps, word, &|_, _| true);
    let accepting: Vec<usize> = b
        .accepting
        .iter()
        .flat_map(|&q| (0..classes).map(move |c| q * classes + c))
        .collect();
    Ok(b.initial
        .iter()
        .any(|&q| buchi_nonempty(&pds, &Configuration::initial(q * classes), &accepting)))
}

/// Runs the deterministic stair automaton, evaluating colors at steps only.
/// A run that gets stuck rejects.
pub fn dpsa_accepts(d: &Dpsa, word: &LassoWord) -> Result<bool> {
    let profile = StackProfile::build(d.vps.alphabet(), word)?;
    let (threshold, period) = profile.periodicity();
    let fold = |k: usize| {
        if k < threshold {
            k
        } else {
            threshold + (k - threshold) % period
        }
    };
    let mut config = Configuration::initial(d.initial);
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut colors: Vec<u32> = Vec::new();
    for k in 0.. {
        if profile.is_step(k) {
            // nothing below the current height is ever popped again
            config.stack = vec![BOTTOM];
            let key = (config.state, fold(k));
            if let Some(&first) = seen.get(&key) {
                let max = colors[first..].iter().max().copied().unwrap_or(1);
                return Ok(max % 2 == 0);
            }
            seen.insert(key, colors.len());
            colors.push(d.coloring[config.state]);
        }
        match d
            .vps
            .config_successors(&config, word.letter_at(k))
            .into_iter()
            .next()
        {
            Some(next) => config = next,
            None => return Ok(false),
        }
    }
    unreachable!()
}

struct GameBuilder<'a> {
    aja: &'a OneAja,
    word: &'a LassoWord,
    profile: StackProfile,
    game: ParityGame,
    state_nodes: HashMap<(usize, usize), usize>,
    pending: Vec<(usize, usize, usize)>,
    win: usize,
    lose: usize,
}

impl GameBuilder<'_> {
    fn state_node(&mut self, q: usize, c: usize) -> usize {
        if let Some(&v) = self.state_nodes.get(&(q, c)) {
            return v;
        }
        let v = self.game.add_node(Player::Exists, self.aja.coloring[q] + 2);
        self.state_nodes.insert((q, c), v);
        self.pending.push((v, q, c));
        v
    }

    fn formula_node(&mut self, f: &PositiveBool, c: usize) -> Result<usize> {
        Ok(match f {
            PositiveBool::True => self.win,
            PositiveBool::False => self.lose,
            PositiveBool::Cmd(cmd) => {
                let jump = cmd.direction == Direction::Jump && self.profile.is_call(c);
                let (q, target) = match jump
                    .then(|| self.profile.matching_return(c))
                    .transpose()?
                    .flatten()
                {
                    Some(m) => (cmd.jump, self.word.suffix_class(m + 1)),
                    None => (cmd.advance, self.word.next_class(c)),
                };
                let v = self.game.add_node(Player::Exists, 0);
                let w = self.state_node(q, target);
                self.game.add_edge(v, w);
                v
            }
            PositiveBool::And(parts) | PositiveBool::Or(parts) => {
                let owner = if matches!(f, PositiveBool::And(_)) {
                    Player::All
                } else {
                    Player::Exists
                };
                let v = self.game.add_node(owner, 0);
                for part in parts {
                    let w = self.formula_node(part, c)?;
                    self.game.add_edge(v, w);
                }
                v
            }
        })
    }
}

/// Acceptance via the membership game: the existential player resolves
/// disjunctions, the universal player picks conjuncts, and every state
/// copy must satisfy the parity condition.
pub fn aja_accepts(aja: &OneAja, word: &LassoWord) -> Result<bool> {
    let profile = StackProfile::build(&aja.alphabet, word)?;
    let mut game = ParityGame::new();
    let win = game.add_node(Player::Exists, 0);
    game.add_edge(win, win);
    let lose = game.add_node(Player::Exists, 1);
    game.add_edge(lose, lose);
    let mut b = GameBuilder {
        aja,
        word,
        profile,
        game,
        state_nodes: HashMap::new(),
        pending: Vec::new(),
        win,
        lose,
    };
    let starts: Vec<usize> = aja.initial.iter().map(|&q| b.state_node(q, 0)).collect();
    while let Some((v, q, c)) = b.pending.pop() {
        let f = aja.transition(q, word.letter_at(c));
        let w = b.formula_node(f, c)?;
        b.game.add_edge(v, w);
    }
    b.game.complete();
    let solution = solve_parity(&b.game);
    Ok(starts.iter().any(|&v| solution.exists_wins[v]))
}
