//! Nondeterministic and alternating parity tree automata.
//!
//! Acceptance is decided through parity games: membership of a regular tree
//! and emptiness of the recognised language both reduce to solving a finite
//! game whose priorities are the automaton ranks.

mod alternating;
mod builtins;
mod product;

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::parity_games::{check_strategy, solve, ParityGame, Player, Strategy};
use crate::trees::{bisimilar, join, random_regular_tree_with, Alphabet, Direction, RegularTree};

pub use alternating::{member_alt, Apta, PosBool};
pub use builtins::{binary_alphabet, builtin, Builtin};
pub use product::{intersection_product, rename_automaton};

/// `from --letter--> left, right`, with states and letters as indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: usize,
    pub letter: usize,
    pub left: usize,
    pub right: usize,
}

impl Transition {
    pub fn target(&self, d: Direction) -> usize {
        match d {
            Direction::Left => self.left,
            Direction::Right => self.right,
        }
    }
}

/// A nondeterministic parity tree automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Npta {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    transitions: Vec<Transition>,
    ranks: Vec<u32>,
}

impl Npta {
    /// Transitions are stored sorted and deduplicated.
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: usize,
        mut transitions: Vec<Transition>,
        ranks: Vec<u32>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidAutomaton("no states".into()));
        }
        let mut names = HashSet::new();
        if let Some(dup) = states.iter().find(|s| !names.insert(s.as_str())) {
            return Err(Error::InvalidAutomaton(format!("duplicate state `{dup}`")));
        }
        if initial >= n {
            return Err(Error::InvalidAutomaton(format!("initial state {initial} missing")));
        }
        if ranks.len() != n {
            return Err(Error::InvalidAutomaton(format!(
                "{} ranks for {} states",
                ranks.len(),
                n
            )));
        }
        for t in &transitions {
            if t.from >= n || t.left >= n || t.right >= n {
                return Err(Error::InvalidAutomaton(format!("transition {t:?} has unknown state")));
            }
            if t.letter >= alphabet.len() {
                return Err(Error::InvalidAutomaton(format!("transition {t:?} has unknown letter")));
            }
        }
        transitions.sort_unstable();
        transitions.dedup();
        Ok(Self {
            alphabet,
            states,
            initial,
            transitions,
            ranks,
        })
    }

    /// Builds an automaton from state names: `states` lists `(name, rank)`
    /// and `transitions` lists `(from, letter, left, right)`.
    pub fn from_table(
        alphabet: Alphabet,
        states: &[(&str, u32)],
        initial: &str,
        transitions: &[(&str, &str, &str, &str)],
    ) -> Result<Self> {
        let names: Vec<String> = states.iter().map(|(s, _)| s.to_string()).collect();
        let ranks = states.iter().map(|&(_, r)| r).collect();
        let state = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::InvalidAutomaton(format!("unknown state `{s}`")))
        };
        let transitions = transitions
            .iter()
            .map(|&(from, letter, left, right)| {
                Ok(Transition {
                    from: state(from)?,
                    letter: alphabet.require(letter)?,
                    left: state(left)?,
                    right: state(right)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let initial = state(initial)?;
        Self::new(alphabet, names, initial, transitions, ranks)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn rank(&self, q: usize) -> u32 {
        self.ranks[q]
    }

    pub fn transitions_from(&self, q: usize, letter: usize) -> impl Iterator<Item = &Transition> {
        self.transitions
            .iter()
            .filter(move |t| t.from == q && t.letter == letter)
    }

    /// Transitions as `(from, letter, left, right)` name tuples.
    pub fn transition_names(&self) -> BTreeSet<(String, String, String, String)> {
        self.transitions
            .iter()
            .map(|t| {
                (
                    self.states[t.from].clone(),
                    self.alphabet.symbol(t.letter).to_string(),
                    self.states[t.left].clone(),
                    self.states[t.right].clone(),
                )
            })
            .collect()
    }

    /// All ranks lie in `{1, 2}`.
    pub fn is_buchi(&self) -> bool {
        self.ranks.iter().all(|&r| r == 1 || r == 2)
    }

    /// At most one transition per state and letter.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = HashSet::new();
        self.transitions.iter().all(|t| seen.insert((t.from, t.letter)))
    }

    pub fn with_initial(&self, q: usize) -> Self {
        assert!(q < self.states.len(), "unknown state");
        Self {
            initial: q,
            ..self.clone()
        }
    }

    pub fn with_ranks(&self, ranks: Vec<u32>) -> Result<Self> {
        Self::new(
            self.alphabet.clone(),
            self.states.clone(),
            self.initial,
            self.transitions.clone(),
            ranks,
        )
    }

    pub(crate) fn require_buchi(&self, what: &str) -> Result<()> {
        if self.is_buchi() {
            Ok(())
        } else {
            Err(Error::NotBuchi(format!("{what} has ranks outside {{1,2}}")))
        }
    }
}

/// Rabin–Mostowski index: the least and greatest rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Index {
    pub lo: u32,
    pub hi: u32,
}

/// The index of `a`, shifted down by an even amount so that `lo ∈ {0, 1}`.
pub fn index_of(a: &Npta) -> Index {
    let lo = *a.ranks.iter().min().expect("automata have states");
    let hi = *a.ranks.iter().max().expect("automata have states");
    let shift = lo - lo % 2;
    Index {
        lo: lo - shift,
        hi: hi - shift,
    }
}

/// Position kinds of the membership game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MemberPosition {
    /// Eve picks a transition for `state` at tree `node`.
    State { state: usize, node: usize },
    /// Adam picks the direction after Eve committed to `transition`.
    Move { transition: usize, node: usize },
}

/// The membership game of an automaton on a tree, restricted to the part
/// reachable from `start`.
#[derive(Clone, Debug)]
pub struct MembershipGame {
    pub game: ParityGame,
    pub start: usize,
    pub positions: Vec<MemberPosition>,
}

/// Eve chooses transitions matching the node label, Adam chooses
/// directions. Both kinds of positions carry the rank of the source state,
/// so the limsup of a play equals the limsup of the run path it follows.
pub fn membership_game(a: &Npta, t: &RegularTree) -> Result<MembershipGame> {
    let t = t.conform_to(a.alphabet())?;
    let mut game = ParityGame::new();
    let mut positions = Vec::new();
    let mut index: HashMap<MemberPosition, usize> = HashMap::new();
    let mut edges: Vec<(usize, MemberPosition)> = Vec::new();

    let mut intern = |pos: MemberPosition,
                      game: &mut ParityGame,
                      positions: &mut Vec<MemberPosition>,
                      stack: &mut Vec<usize>|
     -> usize {
        *index.entry(pos).or_insert_with(|| {
            let (owner, state) = match pos {
                MemberPosition::State { state, .. } => (Player::Eve, state),
                MemberPosition::Move { transition, .. } => {
                    (Player::Adam, a.transitions[transition].from)
                }
            };
            let id = game.add_position(owner, a.rank(state));
            positions.push(pos);
            stack.push(id);
            id
        })
    };

    let mut stack = Vec::new();
    let start = intern(
        MemberPosition::State {
            state: a.initial(),
            node: t.root(),
        },
        &mut game,
        &mut positions,
        &mut stack,
    );
    while let Some(id) = stack.pop() {
        match positions[id] {
            MemberPosition::State { state, node } => {
                let letter = t.label_index(node);
                for (i, tr) in a.transitions.iter().enumerate() {
                    if tr.from == state && tr.letter == letter {
                        edges.push((id, MemberPosition::Move { transition: i, node }));
                    }
                }
            }
            MemberPosition::Move { transition, node } => {
                let tr = a.transitions[transition];
                for d in Direction::BOTH {
                    edges.push((
                        id,
                        MemberPosition::State {
                            state: tr.target(d),
                            node: t.child(node, d),
                        },
                    ));
                }
            }
        }
        for (from, to) in edges.drain(..) {
            let to = intern(to, &mut game, &mut positions, &mut stack);
            game.add_edge(from, to);
        }
    }
    for (id, pos) in positions.iter().enumerate() {
        let name = match *pos {
            MemberPosition::State { state, node } => format!("{}@{}", a.states[state], node),
            MemberPosition::Move { transition, node } => {
                let tr = a.transitions[transition];
                format!(
                    "{}>{},{}@{}",
                    a.states[tr.from], a.states[tr.left], a.states[tr.right], node
                )
            }
        };
        game.set_name(id, name);
    }
    Ok(MembershipGame {
        game,
        start,
        positions,
    })
}

/// Finite presentation of an accepting run: Eve's winning strategy in the
/// membership game.
#[derive(Clone, Debug)]
pub struct RunWitness {
    pub game: ParityGame,
    pub start: usize,
    pub region: BTreeSet<usize>,
    pub strategy: Strategy,
}

impl RunWitness {
    pub fn verify(&self) -> bool {
        self.region.contains(&self.start)
            && check_strategy(&self.game, &self.strategy, &self.region).is_ok()
    }
}

#[derive(Clone, Debug)]
pub struct Membership {
    pub accepted: bool,
    pub witness: Option<RunWitness>,
}

/// Decides `t ∈ T(a)`, returning Eve's winning strategy on acceptance.
pub fn member(a: &Npta, t: &RegularTree) -> Result<Membership> {
    let mg = membership_game(a, t)?;
    let result = solve(&mg.game);
    let accepted = result.eve_region.contains(&mg.start);
    let witness = accepted.then_some(RunWitness {
        game: mg.game,
        start: mg.start,
        region: result.eve_region,
        strategy: result.eve_strategy,
    });
    Ok(Membership { accepted, witness })
}

pub fn accepts(a: &Npta, t: &RegularTree) -> Result<bool> {
    Ok(member(a, t)?.accepted)
}

/// The emptiness game: Eve picks a letter and a transition, Adam a direction.
#[derive(Clone, Debug)]
pub struct EmptinessGame {
    pub game: ParityGame,
    pub start: usize,
    /// For Adam positions, the transition Eve committed to.
    pub committed: Vec<Option<usize>>,
}

pub fn emptiness_game(a: &Npta) -> EmptinessGame {
    let plan = Guide::trivial();
    let (game, start, committed, _) = guided_game(a, &plan, None);
    EmptinessGame {
        game,
        start,
        committed: committed.into_iter().map(|c| c.map(|(tr, _)| tr)).collect(),
    }
}

pub fn is_empty(a: &Npta) -> bool {
    witness(a).is_none()
}

/// A regular tree accepted by `a`, or `None` iff `T(a)` is empty.
pub fn witness(a: &Npta) -> Option<RegularTree> {
    guided_witness(a, &Guide::trivial(), None)
}

/// Auxiliary finite memory steering witness extraction: Eve's positions are
/// pairs of a state and a guide cell, and Adam's moves follow the guide's
/// edges. Larger guides let positional strategies produce larger trees.
#[derive(Clone, Debug)]
pub(crate) struct Guide {
    children: Vec<[usize; 2]>,
    hint: Vec<Option<usize>>,
    /// Hints exclude other letters instead of merely being preferred.
    strict: bool,
}

impl Guide {
    fn trivial() -> Self {
        Self {
            children: vec![[0, 0]],
            hint: vec![None],
            strict: false,
        }
    }

    fn random<R: Rng>(rng: &mut R, cells: usize, letters: usize, strict: bool) -> Self {
        let children = (0..cells)
            .map(|_| [rng.gen_range(0..cells), rng.gen_range(0..cells)])
            .collect();
        let hint = (0..cells)
            .map(|_| rng.gen_bool(0.8).then(|| rng.gen_range(0..letters)))
            .collect();
        Self {
            children,
            hint,
            strict,
        }
    }
}

type Committed = Vec<Option<(usize, usize)>>;

/// Builds the guided emptiness game. Eve positions are `(state, cell)`;
/// Adam positions are `(transition, cell)`. `order` permutes the preference
/// among transitions.
fn guided_game(
    a: &Npta,
    guide: &Guide,
    order: Option<&[usize]>,
) -> (ParityGame, usize, Committed, Vec<Option<(usize, usize)>>) {
    let natural: Vec<usize> = (0..a.transitions.len()).collect();
    let order = order.unwrap_or(&natural);
    let mut game = ParityGame::new();
    let mut committed: Committed = Vec::new();
    let mut eve_key: Vec<Option<(usize, usize)>> = Vec::new();
    let mut eve_ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut adam_ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut stack = Vec::new();

    let start = game.add_position(Player::Eve, a.rank(a.initial));
    committed.push(None);
    eve_key.push(Some((a.initial, 0)));
    eve_ids.insert((a.initial, 0), start);
    stack.push(start);

    while let Some(id) = stack.pop() {
        if let Some((state, cell)) = eve_key[id] {
            let mut moves: Vec<usize> = order
                .iter()
                .copied()
                .filter(|&i| a.transitions[i].from == state)
                .collect();
            if let Some(h) = guide.hint[cell] {
                moves.sort_by_key(|&i| a.transitions[i].letter != h);
                if guide.strict && moves.first().is_some_and(|&i| a.transitions[i].letter == h) {
                    moves.retain(|&i| a.transitions[i].letter == h);
                }
            }
            for i in moves {
                let adam = *adam_ids.entry((i, cell)).or_insert_with(|| {
                    let p = game.add_position(Player::Adam, a.rank(state));
                    committed.push(Some((i, cell)));
                    eve_key.push(None);
                    stack.push(p);
                    p
                });
                game.add_edge(id, adam);
            }
        } else {
            let (i, cell) = committed[id].expect("adam position");
            let tr = a.transitions[i];
            for d in Direction::BOTH {
                let key = (tr.target(d), guide.children[cell][d.index()]);
                let eve = *eve_ids.entry(key).or_insert_with(|| {
                    let p = game.add_position(Player::Eve, a.rank(key.0));
                    committed.push(None);
                    eve_key.push(Some(key));
                    stack.push(p);
                    p
                });
                game.add_edge(id, eve);
            }
        }
    }
    (game, start, committed, eve_key)
}

/// Reads a tree off Eve's winning strategy in the guided emptiness game.
fn guided_witness(a: &Npta, guide: &Guide, order: Option<&[usize]>) -> Option<RegularTree> {
    let (game, start, committed, _) = guided_game(a, guide, order);
    let result = solve(&game);
    if !result.eve_region.contains(&start) {
        return None;
    }
    // tree nodes are the Eve positions reachable under her strategy
    let mut node_of: HashMap<usize, usize> = HashMap::from([(start, 0)]);
    let mut order_eve = vec![start];
    let mut labels = Vec::new();
    let mut children = Vec::new();
    let mut i = 0;
    while i < order_eve.len() {
        let eve = order_eve[i];
        let adam = result.eve_strategy.get(eve).expect("strategy defined on winning region");
        let (tr_index, _) = committed[adam].expect("eve moves to adam positions");
        let tr = a.transitions[tr_index];
        labels.push(tr.letter);
        let mut kids = [0; 2];
        for (slot, &next) in game.successors(adam).iter().enumerate() {
            let len = node_of.len();
            kids[slot] = *node_of.entry(next).or_insert_with(|| {
                order_eve.push(next);
                len
            });
        }
        children.push(kids);
        i += 1;
    }
    Some(
        RegularTree::from_parts(a.alphabet.clone(), 0, labels, children)
            .expect("witness generator is well formed"),
    )
}

/// Up to `n` pairwise distinct trees accepted by an automaton.
#[derive(Clone, Debug)]
pub struct LanguageSample {
    pub trees: Vec<RegularTree>,
    pub requested: usize,
    /// Fewer than `requested` distinct trees were found within the budget.
    pub short: bool,
}

/// Diversified witness extraction: solves guided emptiness games under
/// random guides and transition orders, and additionally tries random
/// regular trees as candidates. Every kept tree is member-checked and not
/// bisimilar to an earlier one. Deterministic in `seed`.
pub fn sample_language(a: &Npta, n: usize, seed: u64) -> Result<LanguageSample> {
    let first = witness(a).ok_or(Error::EmptyLanguage)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trees: Vec<RegularTree> = Vec::new();
    let consider = |t: RegularTree, trees: &mut Vec<RegularTree>| -> Result<()> {
        if trees.len() < n && accepts(a, &t)? {
            let fresh = trees
                .iter()
                .all(|u| !bisimilar(u, &t).expect("same alphabet"));
            if fresh {
                trees.push(t);
            }
        }
        Ok(())
    };
    consider(first, &mut trees)?;
    let budget = 20 * n + 20;
    let mut order: Vec<usize> = (0..a.transitions.len()).collect();
    for _ in 0..budget {
        if trees.len() >= n {
            break;
        }
        let cells = rng.gen_range(1..=6);
        let mut guide = Guide::random(&mut rng, cells, a.alphabet.len(), true);
        order.shuffle(&mut rng);
        // strict hints force letters a preference order never would
        let guided = guided_witness(a, &guide, Some(&order)).or_else(|| {
            guide.strict = false;
            guided_witness(a, &guide, Some(&order))
        });
        if let Some(t) = guided {
            consider(t, &mut trees)?;
        }
        let size = rng.gen_range(1..=8);
        consider(random_regular_tree_with(&mut rng, &a.alphabet, size), &mut trees)?;
        // a fresh root above parts of earlier members
        let part = |rng: &mut ChaCha8Rng| {
            let t = &trees[rng.gen_range(0..trees.len())];
            t.rerooted(rng.gen_range(0..t.node_count()))
        };
        let (l, r) = (part(&mut rng), part(&mut rng));
        let letter = a.alphabet.symbol(rng.gen_range(0..a.alphabet.len()));
        consider(join(letter, &l, &r)?, &mut trees)?;
    }
    Ok(LanguageSample {
        short: trees.len() < n,
        trees,
        requested: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::NodeWord;

    fn bin() -> Alphabet {
        binary_alphabet()
    }

    fn all(symbol: &str) -> RegularTree {
        RegularTree::constant(bin(), symbol).unwrap()
    }

    /// Ones exactly on the leftmost path.
    fn leftmost_ones() -> RegularTree {
        RegularTree::from_nodes(bin(), &[("1", 0, 1), ("0", 1, 1)]).unwrap()
    }

    #[test]
    fn index_examples() {
        assert_eq!(index_of(&builtin("L").unwrap()), Index { lo: 1, hi: 2 });
        assert_eq!(index_of(&builtin("M01").unwrap()), Index { lo: 0, hi: 1 });
        assert_eq!(index_of(&builtin("W01").unwrap()), Index { lo: 0, hi: 1 });
        assert_eq!(index_of(&builtin("K-det").unwrap()), Index { lo: 0, hi: 1 });
        assert_eq!(index_of(&builtin("UBbin").unwrap()), Index { lo: 0, hi: 2 });
        let shifted = builtin("L").unwrap().with_ranks(vec![3, 4, 4]).unwrap();
        assert_eq!(index_of(&shifted), Index { lo: 1, hi: 2 });
    }

    #[test]
    fn membership_of_l() {
        let l = builtin("L").unwrap();
        assert!(accepts(&l, &all("1")).unwrap());
        assert!(!accepts(&l, &all("0")).unwrap());
        // the run q -> p along the leftmost path, T elsewhere
        let m = member(&l, &leftmost_ones()).unwrap();
        assert!(m.accepted);
        assert!(m.witness.unwrap().verify());
    }

    #[test]
    fn membership_of_m01() {
        let m = builtin("M01").unwrap();
        assert!(accepts(&m, &all("0")).unwrap());
        assert!(!accepts(&m, &all("1")).unwrap());
        assert!(member(&m, &all("1")).unwrap().witness.is_none());
    }

    #[test]
    fn membership_game_shape() {
        let m = builtin("M01").unwrap();
        let mg = membership_game(&m, &all("0")).unwrap();
        // (0,root) -> move -> (0,root) twice
        assert_eq!(mg.game.len(), 2);
        for p in mg.game.positions() {
            if mg.game.owner(p) == Player::Eve {
                assert_eq!(mg.game.successors(p).len(), 1);
            }
        }
    }

    #[test]
    fn membership_rejects_other_alphabets() {
        let l = builtin("L").unwrap();
        let t = RegularTree::constant(Alphabet::new(["a"]).unwrap(), "a").unwrap();
        assert!(matches!(member(&l, &t), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn ub_bin_examples() {
        let ub = builtin("UBbin").unwrap();
        assert!(accepts(&ub, &leftmost_ones()).unwrap());
        assert!(!accepts(&ub, &all("1")).unwrap());
        assert!(!accepts(&ub, &all("0")).unwrap());
    }

    #[test]
    fn emptiness_examples() {
        let dead = Npta::from_table(bin(), &[("q", 2)], "q", &[]).unwrap();
        assert!(is_empty(&dead));
        assert!(matches!(sample_language(&dead, 3, 0), Err(Error::EmptyLanguage)));
        let eg = emptiness_game(&dead);
        assert_eq!(eg.game.len(), 1);

        let l = builtin("L").unwrap();
        let t = witness(&l).unwrap();
        assert!(accepts(&l, &t).unwrap());

        let w01 = builtin("W01").unwrap();
        let t = witness(&w01).unwrap();
        assert!(accepts(&w01, &t).unwrap());
    }

    #[test]
    fn sampling_singleton_language_is_flagged_short() {
        let zeros = Npta::from_table(bin(), &[("s", 2)], "s", &[("s", "0", "s", "s")]).unwrap();
        let s = sample_language(&zeros, 3, 11).unwrap();
        assert_eq!(s.trees.len(), 1);
        assert!(s.short);
        assert!(bisimilar(&s.trees[0], &all("0")).unwrap());
    }

    #[test]
    fn sampling_l_is_sound_and_deterministic() {
        let l = builtin("L").unwrap();
        let s = sample_language(&l, 10, 5).unwrap();
        assert_eq!(s.trees.len(), 10);
        assert!(!s.short);
        for t in &s.trees {
            assert!(accepts(&l, t).unwrap());
        }
        let again = sample_language(&l, 10, 5).unwrap();
        assert_eq!(s.trees, again.trees);
    }

    #[test]
    fn witness_labels_follow_the_run() {
        let k = builtin("K-buchi").unwrap();
        let t = witness(&k).unwrap();
        // rightmost branch eventually all 0
        let late = NodeWord::rightmost(t.node_count() + 3);
        assert_eq!(t.label_at(&late), "0");
    }
}
