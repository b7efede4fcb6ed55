use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::trees::{graft_spine, rename_tree, Direction, NodeWord, RegularTree};

use super::{duality, game_alphabet, t_minus, t_plus, GameLabel};

/// Finite syntax for Borel sets of game-labelled trees.
///
/// `Union { head, tail }` denotes `head[0] ∪ head[1] ∪ … ∪ tail ∪ tail ∪ …`:
/// a countable union whose summands are eventually the constant `tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BorelCode {
    /// The clopen set of trees `u` with `u(w) = σ` for every `(w, σ)`.
    Cyl(BTreeMap<NodeWord, GameLabel>),
    Neg(Box<BorelCode>),
    Union {
        head: Vec<BorelCode>,
        tail: Option<Box<BorelCode>>,
    },
}

impl BorelCode {
    /// The whole space.
    pub fn everything() -> Self {
        BorelCode::Cyl(BTreeMap::new())
    }

    pub fn negate(self) -> Self {
        BorelCode::Neg(Box::new(self))
    }

    pub fn rank(&self) -> usize {
        match self {
            BorelCode::Cyl(_) => 0,
            BorelCode::Neg(c) => c.rank(),
            BorelCode::Union { head, tail } => {
                1 + head.iter().chain(tail.as_deref()).map(|c| c.rank()).max().unwrap_or(0)
            }
        }
    }

    /// Number of tree levels inspected by evaluation: one more than the
    /// longest word in any cylinder, `0` if no label is read at all.
    pub fn read_depth(&self) -> usize {
        match self {
            BorelCode::Cyl(assign) => assign.keys().map(|w| w.len() + 1).max().unwrap_or(0),
            BorelCode::Neg(c) => c.read_depth(),
            BorelCode::Union { head, tail } => head
                .iter()
                .chain(tail.as_deref())
                .map(|c| c.read_depth())
                .max()
                .unwrap_or(0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BorelCode::Cyl(_) => Ok(()),
            BorelCode::Neg(c) => c.validate(),
            BorelCode::Union { head, tail } => {
                if head.is_empty() && tail.is_none() {
                    return Err(Error::InvalidCode("union with empty head needs a tail".into()));
                }
                head.iter().chain(tail.as_deref()).try_for_each(|c| c.validate())
            }
        }
    }
}

/// Membership of `u` in the set coded by `c`.
pub fn eval_borel(c: &BorelCode, u: &RegularTree) -> Result<bool> {
    let u = u.conform_to(&game_alphabet())?;
    c.validate()?;
    Ok(eval(c, &u))
}

fn eval(c: &BorelCode, u: &RegularTree) -> bool {
    match c {
        BorelCode::Cyl(assign) => assign
            .iter()
            .all(|(w, l)| u.label_at(w) == l.to_string()),
        BorelCode::Neg(c) => !eval(c, u),
        BorelCode::Union { head, tail } => head.iter().chain(tail.as_deref()).any(|c| eval(c, u)),
    }
}

/// The continuous reduction `f_c`: the output lies in `W01` when `u` is in
/// the coded set and in `W01'` otherwise.
///
/// Cylinders map to one of two fixed trees, complements apply the duality
/// renaming, and unions hang the summands' images off an `(E,1)`-labelled
/// rightmost spine at the nodes `2^n 1`.
pub fn reduce_fb(c: &BorelCode, u: &RegularTree) -> Result<RegularTree> {
    let u = u.conform_to(&game_alphabet())?;
    c.validate()?;
    reduce(c, &u)
}

fn reduce(c: &BorelCode, u: &RegularTree) -> Result<RegularTree> {
    match c {
        BorelCode::Cyl(_) => Ok(if eval(c, u) { t_plus() } else { t_minus() }),
        BorelCode::Neg(inner) => rename_tree(&reduce(inner, u)?, &duality()),
        BorelCode::Union { head, tail } => {
            let head = head.iter().map(|h| reduce(h, u)).collect::<Result<Vec<_>>>()?;
            let tail = tail.as_deref().map(|t| reduce(t, u)).transpose()?;
            graft_spine(&head, tail.as_ref(), GameLabel::EVE_ONE)
        }
    }
}

/// A random code of rank at most `max_rank`, deterministic in `seed`.
pub fn random_code(max_rank: usize, seed: u64) -> BorelCode {
    random_code_with(&mut ChaCha8Rng::seed_from_u64(seed), max_rank)
}

pub fn random_code_with<R: Rng + ?Sized>(rng: &mut R, max_rank: usize) -> BorelCode {
    let code = if max_rank == 0 || rng.gen_bool(0.25) {
        random_cylinder(rng)
    } else {
        let sub = max_rank - 1;
        let mut head: Vec<BorelCode> =
            (0..rng.gen_range(0..=3)).map(|_| random_code_with(rng, sub)).collect();
        let tail = if head.is_empty() || rng.gen_bool(0.5) {
            Some(Box::new(random_code_with(rng, sub)))
        } else {
            None
        };
        if head.is_empty() && tail.is_none() {
            head.push(random_cylinder(rng));
        }
        BorelCode::Union { head, tail }
    };
    if rng.gen_bool(0.3) {
        code.negate()
    } else {
        code
    }
}

fn random_cylinder<R: Rng + ?Sized>(rng: &mut R) -> BorelCode {
    let labels = GameLabel::all();
    let mut assign = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=2) {
        let len = rng.gen_range(0..=2);
        let w = NodeWord((0..len).map(|_| Direction::BOTH[rng.gen_range(0..2)]).collect());
        assign.insert(w, labels[rng.gen_range(0..labels.len())]);
    }
    BorelCode::Cyl(assign)
}
