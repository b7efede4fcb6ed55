//! Game tree languages over `{∃,∀} × {0,1}`.
//!
//! A tree `t` induces a game on its nodes: `∃`-nodes belong to Eve,
//! `∀`-nodes to Adam, and Eve wins a play when the second label component
//! is `1` only finitely often. `W01` collects the trees where Eve wins;
//! `W01'` is its image under the renaming `0↔1, ∃↔∀`.

mod borel;

use std::fmt;
use std::str::FromStr;

use crate::automata::{accepts, binary_alphabet, builtin};
use crate::error::{Error, Result};
use crate::parity_games::{solve, ParityGame, Player};
use crate::trees::{rename_tree, Alphabet, LetterRenaming, RegularTree};

pub use borel::{eval_borel, random_code, reduce_fb, BorelCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// A letter `(owner, bit)` of the game alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GameLabel {
    pub owner: Quantifier,
    pub bit: bool,
}

impl GameLabel {
    pub const EVE_ZERO: &'static str = "(E,0)";
    pub const EVE_ONE: &'static str = "(E,1)";
    pub const ADAM_ZERO: &'static str = "(A,0)";
    pub const ADAM_ONE: &'static str = "(A,1)";

    pub fn new(owner: Quantifier, bit: bool) -> Self {
        Self { owner, bit }
    }

    pub fn player(self) -> Player {
        match self.owner {
            Quantifier::Exists => Player::Eve,
            Quantifier::Forall => Player::Adam,
        }
    }

    pub fn priority(self) -> u32 {
        self.bit as u32
    }

    /// Both components renamed: `0↔1` and `∃↔∀`.
    pub fn dual(self) -> Self {
        Self {
            owner: match self.owner {
                Quantifier::Exists => Quantifier::Forall,
                Quantifier::Forall => Quantifier::Exists,
            },
            bit: !self.bit,
        }
    }

    pub fn all() -> [GameLabel; 4] {
        [
            GameLabel::new(Quantifier::Exists, false),
            GameLabel::new(Quantifier::Exists, true),
            GameLabel::new(Quantifier::Forall, false),
            GameLabel::new(Quantifier::Forall, true),
        ]
    }
}

impl fmt::Display for GameLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match self.owner {
            Quantifier::Exists => 'E',
            Quantifier::Forall => 'A',
        };
        write!(f, "({},{})", q, self.bit as u8)
    }
}

impl FromStr for GameLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "(E,0)" => Ok(GameLabel::new(Quantifier::Exists, false)),
            "(E,1)" => Ok(GameLabel::new(Quantifier::Exists, true)),
            "(A,0)" => Ok(GameLabel::new(Quantifier::Forall, false)),
            "(A,1)" => Ok(GameLabel::new(Quantifier::Forall, true)),
            _ => Err(Error::UnknownSymbol(s.to_string())),
        }
    }
}

/// The four-letter alphabet `(E,0), (E,1), (A,0), (A,1)`.
pub fn game_alphabet() -> Alphabet {
    Alphabet::new(GameLabel::all().map(|l| l.to_string())).expect("static alphabet")
}

/// The involution `0↔1, ∃↔∀` on the game alphabet.
pub fn duality() -> LetterRenaming {
    LetterRenaming::swaps(
        game_alphabet(),
        &[
            (GameLabel::EVE_ZERO, GameLabel::ADAM_ONE),
            (GameLabel::EVE_ONE, GameLabel::ADAM_ZERO),
        ],
    )
    .expect("static renaming")
}

/// The renaming `0↔1` on the binary alphabet.
pub fn bit_flip() -> LetterRenaming {
    LetterRenaming::swaps(binary_alphabet(), &[("0", "1")]).expect("static renaming")
}

pub fn constant_tree(label: &str) -> RegularTree {
    RegularTree::constant(game_alphabet(), label).expect("game label")
}

/// The constant `(E,0)` tree, a member of `W01`.
pub fn t_plus() -> RegularTree {
    constant_tree(GameLabel::EVE_ZERO)
}

/// The constant `(A,1)` tree, a member of `W01'`.
pub fn t_minus() -> RegularTree {
    constant_tree(GameLabel::ADAM_ONE)
}

fn require_game_alphabet(t: &RegularTree) -> Result<RegularTree> {
    t.conform_to(&game_alphabet())
}

/// The game `G(t)` on the generator: node owner from the first component,
/// priority from the second, moves to both children.
pub fn game_of_tree(t: &RegularTree) -> Result<ParityGame> {
    let t = require_game_alphabet(t)?;
    let mut g = ParityGame::new();
    for v in t.nodes() {
        let label: GameLabel = t.label(v).parse()?;
        g.add_position(label.player(), label.priority());
        g.set_name(v, format!("{v}:{label}"));
    }
    for v in t.nodes() {
        for c in t.children(v) {
            g.add_edge(v, c);
        }
    }
    Ok(g)
}

/// `t ∈ W01`: Eve wins `G(t)` from the root.
pub fn in_w01(t: &RegularTree) -> Result<bool> {
    let g = game_of_tree(t)?;
    Ok(solve(&g).winner(0) == Some(Player::Eve))
}

/// `t ∈ W01'`, decided as membership of the dual tree in `W01`.
pub fn in_w01_prime(t: &RegularTree) -> Result<bool> {
    let t = require_game_alphabet(t)?;
    in_w01(&rename_tree(&t, &duality())?)
}

/// Finitely many 1s on the rightmost branch, decided with the
/// deterministic automaton for that language.
pub fn milewski_member(t: &RegularTree) -> Result<bool> {
    accepts(&builtin("K-det")?, t)
}

/// Every path has an even limsup of labels, where labels are the integers
/// `i..=k`. Decided as a game in which Adam owns every node.
pub fn parity_lang_member(t: &RegularTree, i: u32, k: u32) -> Result<bool> {
    let mut g = ParityGame::new();
    for v in t.nodes() {
        let label = t.label(v);
        let value: u32 = label
            .parse()
            .map_err(|_| Error::LabelOutOfRange(label.to_string()))?;
        if value < i || value > k {
            return Err(Error::LabelOutOfRange(label.to_string()));
        }
        g.add_position(Player::Adam, value);
    }
    for v in t.nodes() {
        for c in t.children(v) {
            g.add_edge(v, c);
        }
    }
    Ok(solve(&g).winner(0) == Some(Player::Eve))
}
