use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::parity_games::{solve, ParityGame, Player};
use crate::trees::{Alphabet, Direction, RegularTree};

use super::Npta;

/// Positive boolean transition condition over `(direction, state)` atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PosBool {
    True,
    False,
    Atom(Direction, usize),
    And(Vec<PosBool>),
    Or(Vec<PosBool>),
}

impl PosBool {
    /// `Or` of the operands, `False` when there are none.
    pub fn any(mut operands: Vec<PosBool>) -> Self {
        match operands.len() {
            0 => PosBool::False,
            1 => operands.pop().unwrap(),
            _ => PosBool::Or(operands),
        }
    }

    /// `And` of the operands, `True` when there are none.
    pub fn all(mut operands: Vec<PosBool>) -> Self {
        match operands.len() {
            0 => PosBool::True,
            1 => operands.pop().unwrap(),
            _ => PosBool::And(operands),
        }
    }

    fn validate(&self, states: usize) -> Result<()> {
        match self {
            PosBool::True | PosBool::False => Ok(()),
            PosBool::Atom(_, q) if *q < states => Ok(()),
            PosBool::Atom(_, q) => Err(Error::InvalidAutomaton(format!("atom names unknown state {q}"))),
            PosBool::And(xs) | PosBool::Or(xs) => {
                if xs.is_empty() {
                    return Err(Error::InvalidAutomaton("empty and/or".into()));
                }
                xs.iter().try_for_each(|x| x.validate(states))
            }
        }
    }

    pub fn atoms(&self) -> Vec<(Direction, usize)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<(Direction, usize)>) {
        match self {
            PosBool::Atom(d, q) => out.push((*d, *q)),
            PosBool::And(xs) | PosBool::Or(xs) => xs.iter().for_each(|x| x.collect_atoms(out)),
            _ => {}
        }
    }
}

/// An alternating parity tree automaton with a total transition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Apta {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    /// Indexed by `state * |alphabet| + letter`.
    delta: Vec<PosBool>,
    ranks: Vec<u32>,
}

impl Apta {
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: usize,
        delta: Vec<PosBool>,
        ranks: Vec<u32>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 || initial >= n {
            return Err(Error::InvalidAutomaton("missing initial state".into()));
        }
        let mut names = HashSet::new();
        if let Some(dup) = states.iter().find(|s| !names.insert(s.as_str())) {
            return Err(Error::InvalidAutomaton(format!("duplicate state `{dup}`")));
        }
        if ranks.len() != n {
            return Err(Error::InvalidAutomaton("rank table is not total".into()));
        }
        if delta.len() != n * alphabet.len() {
            return Err(Error::InvalidAutomaton("transition table is not total".into()));
        }
        delta.iter().try_for_each(|f| f.validate(n))?;
        Ok(Self {
            alphabet,
            states,
            initial,
            delta,
            ranks,
        })
    }

    /// The same condition for every state and letter.
    pub fn uniform(alphabet: Alphabet, condition: PosBool, rank: u32) -> Result<Self> {
        let len = alphabet.len();
        Self::new(alphabet, vec!["s".into()], 0, vec![condition; len], vec![rank])
    }

    /// Embeds a nondeterministic automaton: each transition set becomes an
    /// `Or` over `And(Atom(1, left), Atom(2, right))`.
    pub fn from_npta(a: &Npta) -> Self {
        let sigma = a.alphabet().len();
        let mut delta = Vec::with_capacity(a.state_count() * sigma);
        for q in 0..a.state_count() {
            for letter in 0..sigma {
                let options = a
                    .transitions_from(q, letter)
                    .map(|t| {
                        PosBool::And(vec![
                            PosBool::Atom(Direction::Left, t.left),
                            PosBool::Atom(Direction::Right, t.right),
                        ])
                    })
                    .collect();
                delta.push(PosBool::any(options));
            }
        }
        Self::new(
            a.alphabet().clone(),
            a.states().to_vec(),
            a.initial(),
            delta,
            a.ranks().to_vec(),
        )
        .expect("embedding preserves well-formedness")
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

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn rank(&self, q: usize) -> u32 {
        self.ranks[q]
    }

    pub fn delta(&self, q: usize, letter: usize) -> &PosBool {
        &self.delta[q * self.alphabet.len() + letter]
    }

    pub fn with_initial(&self, q: usize) -> Self {
        assert!(q < self.states.len(), "unknown state");
        Self {
            initial: q,
            ..self.clone()
        }
    }
}

/// A transition condition flattened into an arena; node `0` is the root.
enum Flat {
    True,
    False,
    Atom(Direction, usize),
    And(Vec<usize>),
    Or(Vec<usize>),
}

fn flatten(f: &PosBool, arena: &mut Vec<Flat>) -> usize {
    let id = arena.len();
    arena.push(Flat::True);
    let node = match f {
        PosBool::True => Flat::True,
        PosBool::False => Flat::False,
        PosBool::Atom(d, q) => Flat::Atom(*d, *q),
        PosBool::And(xs) => Flat::And(xs.iter().map(|x| flatten(x, arena)).collect()),
        PosBool::Or(xs) => Flat::Or(xs.iter().map(|x| flatten(x, arena)).collect()),
    };
    arena[id] = node;
    id
}

/// Acceptance game for alternating automata: `Or` nodes belong to Eve,
/// `And` nodes to Adam, `True` is a dead end of Adam and `False` a dead end
/// of Eve. Every position carries the rank of the state whose condition it
/// belongs to.
pub fn acceptance_game(k: &Apta, t: &RegularTree) -> Result<(ParityGame, usize)> {
    let t = t.conform_to(k.alphabet())?;
    let sigma = k.alphabet.len();
    let flats: Vec<Vec<Flat>> = k
        .delta
        .iter()
        .map(|f| {
            let mut arena = Vec::new();
            flatten(f, &mut arena);
            arena
        })
        .collect();

    // key: (state, tree node, formula node)
    let mut ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut keys: Vec<(usize, usize, usize)> = Vec::new();
    let mut game = ParityGame::new();
    let mut stack = Vec::new();
    let mut intern = |key: (usize, usize, usize),
                      game: &mut ParityGame,
                      keys: &mut Vec<(usize, usize, usize)>,
                      stack: &mut Vec<usize>| {
        *ids.entry(key).or_insert_with(|| {
            let (q, node, f) = key;
            let owner = match flats[q * sigma + t.label_index(node)][f] {
                Flat::And(_) | Flat::True => Player::Adam,
                _ => Player::Eve,
            };
            let id = game.add_position(owner, k.rank(q));
            keys.push(key);
            stack.push(id);
            id
        })
    };

    let start = intern((k.initial, t.root(), 0), &mut game, &mut keys, &mut stack);
    let mut pending = Vec::new();
    while let Some(id) = stack.pop() {
        let (q, node, f) = keys[id];
        match &flats[q * sigma + t.label_index(node)][f] {
            Flat::True | Flat::False => {}
            Flat::Atom(d, p) => pending.push((*p, t.child(node, *d), 0)),
            Flat::And(xs) | Flat::Or(xs) => pending.extend(xs.iter().map(|&x| (q, node, x))),
        }
        for key in pending.drain(..) {
            let to = intern(key, &mut game, &mut keys, &mut stack);
            game.add_edge(id, to);
        }
    }
    Ok((game, start))
}

/// Decides whether the alternating automaton accepts `t`.
pub fn member_alt(k: &Apta, t: &RegularTree) -> Result<bool> {
    let (game, start) = acceptance_game(k, t)?;
    Ok(solve(&game).winner(start) == Some(Player::Eve))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts, binary_alphabet, builtin};
    use crate::trees::random_regular_tree;

    #[test]
    fn constant_conditions() {
        let bin = binary_alphabet();
        let yes = Apta::uniform(bin.clone(), PosBool::True, 0).unwrap();
        let no = Apta::uniform(bin.clone(), PosBool::False, 0).unwrap();
        for seed in 0..20 {
            let t = random_regular_tree(&bin, 5, seed);
            assert!(member_alt(&yes, &t).unwrap());
            assert!(!member_alt(&no, &t).unwrap());
        }
    }

    #[test]
    fn malformed_conditions_are_rejected() {
        let bin = binary_alphabet();
        assert!(Apta::uniform(bin.clone(), PosBool::And(vec![]), 0).is_err());
        assert!(Apta::uniform(bin, PosBool::Atom(Direction::Left, 3), 0).is_err());
    }

    #[test]
    fn looping_atom_uses_state_rank() {
        let bin = binary_alphabet();
        let stay = PosBool::Atom(Direction::Left, 0);
        assert!(member_alt(&Apta::uniform(bin.clone(), stay.clone(), 2).unwrap(), &random_regular_tree(&bin, 3, 1)).unwrap());
        assert!(!member_alt(&Apta::uniform(bin.clone(), stay, 1).unwrap(), &random_regular_tree(&bin, 3, 1)).unwrap());
    }

    #[test]
    fn embedding_agrees_with_nondeterministic_membership() {
        let bin = binary_alphabet();
        for name in ["L", "M01", "K-det", "K-buchi", "UBbin"] {
            let a = builtin(name).unwrap();
            let k = Apta::from_npta(&a);
            for seed in 0..60 {
                let t = random_regular_tree(&bin, 6, seed);
                assert_eq!(member_alt(&k, &t).unwrap(), accepts(&a, &t).unwrap(), "{name} seed {seed}");
            }
        }
    }
}
