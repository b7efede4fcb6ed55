//! Executable constructions over regular infinite binary trees.
//!
//! Trees are finitely presented by labelled generator graphs ([`RegularTree`]).
//! On top of them the crate offers max-parity games with a Zielonka solver,
//! nondeterministic and alternating parity tree automata decided through
//! acceptance games, the game tree languages `W01` / `W01'` together with the
//! reduction of coded Borel sets into them, and a separator synthesis for
//! disjoint Büchi tree automata.

pub mod automata;
pub mod error;
pub mod formats;
pub mod game_langs;
pub mod parity_games;
pub mod separation;
pub mod trees;

pub use automata::{Apta, Index, Npta, PosBool, RunWitness, Transition};
pub use error::{Error, Result};
pub use game_langs::{BorelCode, GameLabel, Quantifier};
pub use parity_games::{ParityGame, Player, SolveResult, Strategy};
pub use separation::{KHierarchy, SeparationReport};
pub use trees::{Alphabet, Direction, Distance, LetterRenaming, NodeWord, RegularTree};
