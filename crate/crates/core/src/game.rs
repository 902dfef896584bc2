//! The alternating-selection ("Ethiopian dinner") game with the crossout
//! strategy as engine.
//!
//! Morsels are positions `1..=N`; morsel `i` carries the value `w(i)`. Bob
//! prefers morsels further right, Alice prefers larger values. Players
//! alternate and Bob always moves last, so Alice opens when `N` is even.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marking::Mark;
use crate::permutation::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "A", alias = "alice", alias = "Alice")]
    Alice,
    #[serde(rename = "B", alias = "bob", alias = "Bob")]
    Bob,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }

    pub fn mark(self) -> Mark {
        match self {
            Player::Alice => Mark::A,
            Player::Bob => Mark::B,
        }
    }

    /// Who makes move `number` (1-based) out of `total`: Bob makes the last
    /// one and turns alternate backwards from there.
    pub fn mover(number: usize, total: usize) -> Player {
        if (total - number).is_multiple_of(2) {
            Player::Bob
        } else {
            Player::Alice
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "Alice",
            Player::Bob => "Bob",
        })
    }
}

impl FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "alice" => Ok(Player::Alice),
            "b" | "bob" => Ok(Player::Bob),
            _ => Err(Error::invalid(format!("unknown player {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    #[serde(rename = "move")]
    pub number: usize,
    pub player: Player,
    pub position: usize,
    pub value: usize,
}

pub enum GameSetup {
    Permutation(Permutation),
    /// Uniformly random preferences of the given size, fixed by `seed`.
    Random {
        size: usize,
        seed: u64,
    },
}

/// Immutable snapshot of a game. Moves return a new state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    w: Permutation,
    remaining: BTreeSet<usize>,
    history: Vec<Move>,
    human_role: Option<Player>,
}

pub fn new_game(setup: GameSetup, human_role: Option<Player>) -> Result<GameState> {
    let w = match setup {
        GameSetup::Permutation(w) => w,
        GameSetup::Random { size, seed } => Permutation::random(size, seed)?,
    };
    Ok(GameState { remaining: (1..=w.len()).collect(), w, history: Vec::new(), human_role })
}

/// Reverse-induction assignment over `remaining`, where the remaining moves
/// alternate and Bob moves last. Walking backwards from the last move, Bob is
/// handed Alice's least favorite unassigned morsel (smallest value) and
/// Alice is handed Bob's least favorite (leftmost). Returns the morsel of
/// each remaining move in play order.
fn crossout_schedule(w: &Permutation, remaining: &BTreeSet<usize>) -> Vec<(Player, usize)> {
    let total = remaining.len();
    let by_position: Vec<usize> = remaining.iter().copied().collect();
    let mut by_value = by_position.clone();
    by_value.sort_unstable_by_key(|&p| w.get(p));
    let mut taken = BTreeSet::new();
    let (mut left, mut low) = (0, 0);
    let mut schedule = vec![(Player::Bob, 0); total];
    for number in (1..=total).rev() {
        let player = Player::mover(number, total);
        let pick = match player {
            Player::Bob => {
                while taken.contains(&by_value[low]) {
                    low += 1;
                }
                by_value[low]
            }
            Player::Alice => {
                while taken.contains(&by_position[left]) {
                    left += 1;
                }
                by_position[left]
            }
        };
        taken.insert(pick);
        schedule[number - 1] = (player, pick);
    }
    schedule
}

impl GameState {
    pub fn w(&self) -> &Permutation {
        &self.w
    }

    pub fn remaining(&self) -> &BTreeSet<usize> {
        &self.remaining
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn human_role(&self) -> Option<Player> {
        self.human_role
    }

    pub fn is_over(&self) -> bool {
        self.remaining.is_empty()
    }

    /// Player to move, or `None` once every morsel is eaten.
    pub fn turn(&self) -> Option<Player> {
        (!self.is_over()).then(|| Player::mover(1, self.remaining.len()))
    }

    pub fn is_engine_turn(&self) -> bool {
        matches!(self.turn(), Some(p) if Some(p) != self.human_role)
    }

    pub fn legal_moves(&self) -> BTreeSet<usize> {
        self.remaining.clone()
    }

    pub fn apply_move(&self, position: usize) -> Result<GameState> {
        let player = self.turn().ok_or_else(|| Error::State("the game is over".into()))?;
        if !self.remaining.contains(&position) {
            return Err(Error::IllegalMove("not in remaining".into()));
        }
        let mut next = self.clone();
        next.remaining.remove(&position);
        next.history.push(Move { number: self.history.len() + 1, player, position, value: self.w.get(position) });
        Ok(next)
    }

    /// The crossout move for whoever is to move.
    pub fn optimal_move(&self) -> Result<usize> {
        if self.is_over() {
            return Err(Error::State("the game is over".into()));
        }
        Ok(crossout_schedule(&self.w, &self.remaining)[0].1)
    }

    /// The engine's reply; refuses when it is the human's turn.
    pub fn engine_move(&self) -> Result<usize> {
        match self.turn() {
            None => Err(Error::State("the game is over".into())),
            Some(p) if Some(p) == self.human_role => Err(Error::State(format!("it is the human's ({p}) turn"))),
            Some(_) => self.optimal_move(),
        }
    }

    /// Predicted eater of every remaining morsel under optimal play from here.
    pub fn analysis(&self) -> BTreeMap<usize, Player> {
        crossout_schedule(&self.w, &self.remaining).into_iter().map(|(p, pos)| (pos, p)).collect()
    }

    /// Predicted remaining moves, in play order.
    pub fn predicted_moves(&self) -> Vec<(Player, usize)> {
        crossout_schedule(&self.w, &self.remaining)
    }

    /// Who has eaten what so far.
    pub fn allocation(&self) -> BTreeMap<usize, Player> {
        self.history.iter().map(|m| (m.position, m.player)).collect()
    }

    pub fn eaten_by(&self, player: Player) -> Vec<usize> {
        self.history.iter().filter(|m| m.player == player).map(|m| m.position).collect()
    }

    /// `true` iff no pair `i < j` has `i` eaten by Bob, `j` by Alice and
    /// `w(i) > w(j)`, i.e. no swap both players would accept.
    pub fn no_trade_check(&self) -> Result<bool> {
        if !self.is_over() {
            return Err(Error::State("the game is not over".into()));
        }
        let alloc = self.allocation();
        let n = self.w.len();
        for i in 1..=n {
            if alloc[&i] != Player::Bob {
                continue;
            }
            if (i + 1..=n).any(|j| alloc[&j] == Player::Alice && self.w.get(i) > self.w.get(j)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Serialize)]
struct StateJson<'a> {
    w: &'a Permutation,
    remaining: &'a BTreeSet<usize>,
    turn: Option<Player>,
    history: &'a [Move],
    human_role: Option<Player>,
    over: bool,
}

impl Serialize for GameState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson {
            w: &self.w,
            remaining: &self.remaining,
            turn: self.turn(),
            history: &self.history,
            human_role: self.human_role,
            over: self.is_over(),
        }
        .serialize(serializer)
    }
}

/// Plays the whole game with the crossout strategy on both sides.
pub fn playout_optimal(w: &Permutation) -> Vec<Move> {
    let mut state = new_game(GameSetup::Permutation(w.clone()), None).expect("valid permutation");
    while !state.is_over() {
        let pos = state.optimal_move().expect("game not over");
        state = state.apply_move(pos).expect("optimal move is legal");
    }
    state.history
}
