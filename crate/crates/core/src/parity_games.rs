//! Finite max-parity games.
//!
//! Eve wins an infinite play iff the highest priority seen infinitely often
//! is even. A play that reaches a position without successors is lost by the
//! owner of that position.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Self {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }

    /// The player favoured by a priority: Eve for even, Adam for odd.
    pub fn favoured_by(priority: u32) -> Self {
        if priority.is_multiple_of(2) {
            Player::Eve
        } else {
            Player::Adam
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::Eve => 0,
            Player::Adam => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Eve => write!(f, "Eve"),
            Player::Adam => write!(f, "Adam"),
        }
    }
}

/// A finite arena: positions `0..len()` with owner, priority and successors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityGame {
    owners: Vec<Player>,
    priorities: Vec<u32>,
    successors: Vec<Vec<usize>>,
    names: Vec<Option<String>>,
}

impl ParityGame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(
        owners: Vec<Player>,
        priorities: Vec<u32>,
        successors: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = owners.len();
        if priorities.len() != n || successors.len() != n {
            return Err(Error::InvalidGame(
                "owner, priority and successor tables differ in length".into(),
            ));
        }
        for (p, succ) in successors.iter().enumerate() {
            if let Some(&q) = succ.iter().find(|&&q| q >= n) {
                return Err(Error::InvalidGame(format!(
                    "position {p} has successor {q}, which does not exist"
                )));
            }
        }
        Ok(Self {
            owners,
            priorities,
            successors,
            names: vec![None; n],
        })
    }

    pub fn add_position(&mut self, owner: Player, priority: u32) -> usize {
        self.owners.push(owner);
        self.priorities.push(priority);
        self.successors.push(Vec::new());
        self.names.push(None);
        self.owners.len() - 1
    }

    /// Adds the edge `from -> to`; both positions must already exist.
    pub fn add_edge(&mut self, from: usize, to: usize) {
        assert!(from < self.len() && to < self.len(), "edge between unknown positions");
        self.successors[from].push(to);
    }

    pub fn set_name(&mut self, position: usize, name: impl Into<String>) {
        self.names[position] = Some(name.into());
    }

    pub fn len(&self) -> usize {
        self.owners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owners.is_empty()
    }

    pub fn positions(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn owner(&self, p: usize) -> Player {
        self.owners[p]
    }

    pub fn priority(&self, p: usize) -> u32 {
        self.priorities[p]
    }

    pub fn successors(&self, p: usize) -> &[usize] {
        &self.successors[p]
    }

    pub fn name(&self, p: usize) -> Option<&str> {
        self.names[p].as_deref()
    }

    pub fn is_dead_end(&self, p: usize) -> bool {
        self.successors[p].is_empty()
    }

    pub fn max_priority(&self) -> Option<u32> {
        self.priorities.iter().copied().max()
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.len()];
        for p in self.positions() {
            for &q in &self.successors[p] {
                if preds[q].last() != Some(&p) {
                    preds[q].push(p);
                }
            }
        }
        preds
    }

    /// Same arena with every priority raised by `delta`.
    pub fn shifted(&self, delta: u32) -> Self {
        let mut g = self.clone();
        g.priorities.iter_mut().for_each(|p| *p += delta);
        g
    }

    /// The dual game: owners swapped and priorities raised by one, which
    /// exchanges the winning regions.
    pub fn dual(&self) -> Self {
        let mut g = self.shifted(1);
        g.owners.iter_mut().for_each(|o| *o = o.opponent());
        g
    }
}

/// A positional strategy, defined on (some of) the owner's positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub player: Player,
    pub choice: BTreeMap<usize, usize>,
}

impl Strategy {
    pub fn new(player: Player) -> Self {
        Self {
            player,
            choice: BTreeMap::new(),
        }
    }

    pub fn get(&self, p: usize) -> Option<usize> {
        self.choice.get(&p).copied()
    }
}

/// Winning regions and positional winning strategies for both players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub eve_region: BTreeSet<usize>,
    pub adam_region: BTreeSet<usize>,
    pub eve_strategy: Strategy,
    pub adam_strategy: Strategy,
}

impl SolveResult {
    pub fn winner(&self, p: usize) -> Option<Player> {
        if self.eve_region.contains(&p) {
            Some(Player::Eve)
        } else if self.adam_region.contains(&p) {
            Some(Player::Adam)
        } else {
            None
        }
    }

    pub fn region(&self, player: Player) -> &BTreeSet<usize> {
        match player {
            Player::Eve => &self.eve_region,
            Player::Adam => &self.adam_region,
        }
    }

    pub fn strategy(&self, player: Player) -> &Strategy {
        match player {
            Player::Eve => &self.eve_strategy,
            Player::Adam => &self.adam_strategy,
        }
    }

    fn from_masks(game: &ParityGame, eve_mask: &[bool], strat: &[Vec<Option<usize>>; 2]) -> Self {
        let eve_region: BTreeSet<usize> = game.positions().filter(|&p| eve_mask[p]).collect();
        let adam_region: BTreeSet<usize> = game.positions().filter(|&p| !eve_mask[p]).collect();
        let pick = |player: Player, region: &BTreeSet<usize>| {
            let mut s = Strategy::new(player);
            for &p in region {
                if game.owner(p) == player && !game.is_dead_end(p) {
                    let q = strat[player.index()][p]
                        .expect("solver assigns a move to every owned winning position");
                    s.choice.insert(p, q);
                }
            }
            s
        };
        let eve_strategy = pick(Player::Eve, &eve_region);
        let adam_strategy = pick(Player::Adam, &adam_region);
        Self {
            eve_region,
            adam_region,
            eve_strategy,
            adam_strategy,
        }
    }
}

type Mask = Vec<bool>;

struct Zielonka<'a> {
    game: &'a ParityGame,
    preds: Vec<Vec<usize>>,
    strat: [Vec<Option<usize>>; 2],
}

impl<'a> Zielonka<'a> {
    fn new(game: &'a ParityGame) -> Self {
        Self {
            game,
            preds: game.predecessors(),
            strat: [vec![None; game.len()], vec![None; game.len()]],
        }
    }

    /// `player`'s attractor to `target` inside `domain`, recording the
    /// attracting move for `player`'s positions.
    fn attractor(&mut self, player: Player, domain: &[bool], target: &[bool]) -> Mask {
        let g = self.game;
        let mut attr = target.to_vec();
        let mut remaining: Vec<usize> = g
            .positions()
            .map(|p| g.successors(p).iter().filter(|&&q| domain[q]).count())
            .collect();
        let mut queue: VecDeque<usize> = g.positions().filter(|&p| attr[p]).collect();
        while let Some(v) = queue.pop_front() {
            for &u in &self.preds[v] {
                if !domain[u] || attr[u] {
                    continue;
                }
                if g.owner(u) == player {
                    attr[u] = true;
                    self.strat[player.index()][u] = Some(v);
                    queue.push_back(u);
                } else {
                    // one decrement per distinct edge u -> v
                    remaining[u] -= g.successors(u).iter().filter(|&&q| q == v).count();
                    if remaining[u] == 0 {
                        attr[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        attr
    }

    /// Solves the subgame on `domain`, which must be free of dead ends.
    /// Returns Eve's and Adam's winning masks.
    fn solve(&mut self, domain: Mask) -> [Mask; 2] {
        let g = self.game;
        let Some(top) = g
            .positions()
            .filter(|&p| domain[p])
            .map(|p| g.priority(p))
            .max()
        else {
            return [domain.clone(), domain];
        };
        let alpha = Player::favoured_by(top);
        let beta = alpha.opponent();
        let u: Mask = g
            .positions()
            .map(|p| domain[p] && g.priority(p) == top)
            .collect();
        let a = self.attractor(alpha, &domain, &u);
        let rest: Mask = g.positions().map(|p| domain[p] && !a[p]).collect();
        let w1 = self.solve(rest);
        if !w1[beta.index()].iter().any(|&b| b) {
            for p in g.positions().filter(|&p| u[p] && g.owner(p) == alpha) {
                let q = *g
                    .successors(p)
                    .iter()
                    .filter(|&&q| domain[q])
                    .min()
                    .expect("subgames have no dead ends");
                self.strat[alpha.index()][p] = Some(q);
            }
            let mut out = [Vec::new(), Vec::new()];
            out[alpha.index()] = domain;
            out[beta.index()] = vec![false; g.len()];
            out
        } else {
            let b = self.attractor(beta, &domain, &w1[beta.index()]);
            let rest: Mask = g.positions().map(|p| domain[p] && !b[p]).collect();
            let mut w2 = self.solve(rest);
            for p in g.positions().filter(|&p| b[p]) {
                w2[beta.index()][p] = true;
            }
            w2
        }
    }
}

/// Solves the game with Zielonka's recursive algorithm.
pub fn solve(game: &ParityGame) -> SolveResult {
    let n = game.len();
    let mut z = Zielonka::new(game);
    let all = vec![true; n];

    // dead ends are settled by attractors first so the recursion only ever
    // sees subgames in which every position can move
    let adam_stuck: Mask = game
        .positions()
        .map(|p| game.is_dead_end(p) && game.owner(p) == Player::Adam)
        .collect();
    let eve_attr = z.attractor(Player::Eve, &all, &adam_stuck);
    let rest: Mask = game.positions().map(|p| !eve_attr[p]).collect();
    let eve_stuck: Mask = game
        .positions()
        .map(|p| rest[p] && game.is_dead_end(p) && game.owner(p) == Player::Eve)
        .collect();
    let adam_attr = z.attractor(Player::Adam, &rest, &eve_stuck);
    let core: Mask = game.positions().map(|p| rest[p] && !adam_attr[p]).collect();
    let [core_eve, _] = z.solve(core);

    let eve_mask: Mask = game
        .positions()
        .map(|p| eve_attr[p] || core_eve[p])
        .collect();
    let result = SolveResult::from_masks(game, &eve_mask, &z.strat);
    debug_assert!(result.eve_region.is_disjoint(&result.adam_region));
    debug_assert_eq!(result.eve_region.len() + result.adam_region.len(), n);
    result
}

pub fn winner_from(game: &ParityGame, p: usize) -> Result<Player> {
    if p >= game.len() {
        return Err(Error::UnknownPosition(p));
    }
    Ok(solve(game).winner(p).expect("regions cover all positions"))
}

pub const DEFAULT_BRUTE_FORCE_BOUND: u128 = 1_000_000;

/// Oracle solver enumerating all pairs of positional strategies.
pub fn brute_force_solve(game: &ParityGame) -> Result<SolveResult> {
    brute_force_solve_bounded(game, DEFAULT_BRUTE_FORCE_BOUND)
}

pub fn brute_force_solve_bounded(game: &ParityGame, bound: u128) -> Result<SolveResult> {
    let choice_points = |player: Player| -> Vec<usize> {
        game.positions()
            .filter(|&p| game.owner(p) == player && !game.is_dead_end(p))
            .collect()
    };
    let eve_pts = choice_points(Player::Eve);
    let adam_pts = choice_points(Player::Adam);
    let count_of = |pts: &[usize]| -> u128 {
        pts.iter()
            .map(|&p| game.successors(p).len() as u128)
            .try_fold(1u128, |acc, d| acc.checked_mul(d))
            .unwrap_or(u128::MAX)
    };
    let eve_count = count_of(&eve_pts);
    let adam_count = count_of(&adam_pts);
    let count = eve_count.saturating_mul(adam_count);
    if count > bound {
        return Err(Error::BoundExceeded { count, bound });
    }

    let decode = |pts: &[usize], mut index: u128, moves: &mut [usize]| {
        for &p in pts {
            let d = game.successors(p).len() as u128;
            moves[p] = game.successors(p)[(index % d) as usize];
            index /= d;
        }
    };
    let n = game.len();
    let mut moves = vec![usize::MAX; n];

    // wins[s] = positions from which the strategy with index s wins against
    // every strategy of the opponent
    let mut eve_wins: Vec<Mask> = Vec::with_capacity(eve_count as usize);
    for e in 0..eve_count {
        decode(&eve_pts, e, &mut moves);
        let mut wins = vec![true; n];
        for a in 0..adam_count {
            decode(&adam_pts, a, &mut moves);
            for (start, w) in wins.iter_mut().enumerate() {
                if *w && play_winner(game, &moves, start) != Player::Eve {
                    *w = false;
                }
            }
        }
        eve_wins.push(wins);
    }
    let mut adam_wins: Vec<Mask> = Vec::with_capacity(adam_count as usize);
    for a in 0..adam_count {
        decode(&adam_pts, a, &mut moves);
        let mut wins = vec![true; n];
        for e in 0..eve_count {
            decode(&eve_pts, e, &mut moves);
            for (start, w) in wins.iter_mut().enumerate() {
                if *w && play_winner(game, &moves, start) != Player::Adam {
                    *w = false;
                }
            }
        }
        adam_wins.push(wins);
    }

    let union = |wins: &[Mask]| -> Mask {
        (0..n).map(|p| wins.iter().any(|w| w[p])).collect()
    };
    let eve_mask = union(&eve_wins);
    let adam_mask = union(&adam_wins);
    debug_assert!((0..n).all(|p| eve_mask[p] != adam_mask[p]));

    // a single strategy winning on the whole region exists by positional
    // determinacy; take the first one found
    let mut strat = [vec![None; n], vec![None; n]];
    for (player, pts, wins, mask) in [
        (Player::Eve, &eve_pts, &eve_wins, &eve_mask),
        (Player::Adam, &adam_pts, &adam_wins, &adam_mask),
    ] {
        let s = wins
            .iter()
            .position(|w| w == mask)
            .expect("uniform positional winning strategy exists");
        decode(pts, s as u128, &mut moves);
        for &p in pts.iter() {
            strat[player.index()][p] = Some(moves[p]);
        }
    }
    Ok(SolveResult::from_masks(game, &eve_mask, &strat))
}

/// Winner of the unique play from `start` when every position moves to
/// `moves[p]`.
fn play_winner(game: &ParityGame, moves: &[usize], start: usize) -> Player {
    let mut visited_at = vec![usize::MAX; game.len()];
    let mut path = Vec::new();
    let mut p = start;
    loop {
        if game.is_dead_end(p) {
            return game.owner(p).opponent();
        }
        if visited_at[p] != usize::MAX {
            let top = path[visited_at[p]..]
                .iter()
                .map(|&q| game.priority(q))
                .max()
                .expect("cycle is nonempty");
            return Player::favoured_by(top);
        }
        visited_at[p] = path.len();
        path.push(p);
        p = moves[p];
    }
}

/// Why a strategy fails to win on a region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyViolation {
    MissingChoice(usize),
    IllegalMove { from: usize, to: usize },
    LeavesRegion { from: usize, to: usize },
    OwnDeadEnd(usize),
    /// A cycle whose top priority is favourable to the opponent, witnessed
    /// by the position carrying that priority.
    LosingCycle(usize),
    UnknownPosition(usize),
}

impl fmt::Display for StrategyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingChoice(p) => write!(f, "no move chosen at position {p}"),
            Self::IllegalMove { from, to } => write!(f, "{from} -> {to} is not an edge"),
            Self::LeavesRegion { from, to } => write!(f, "{from} -> {to} leaves the region"),
            Self::OwnDeadEnd(p) => write!(f, "play can be stuck at own dead end {p}"),
            Self::LosingCycle(p) => write!(f, "losing cycle through position {p}"),
            Self::UnknownPosition(p) => write!(f, "position {p} does not exist"),
        }
    }
}

/// Checks that every play from `region` consistent with `s` is won by
/// `s.player`.
pub fn check_strategy(
    game: &ParityGame,
    s: &Strategy,
    region: &BTreeSet<usize>,
) -> std::result::Result<(), StrategyViolation> {
    let n = game.len();
    if let Some(&p) = region.iter().find(|&&p| p >= n) {
        return Err(StrategyViolation::UnknownPosition(p));
    }
    let mut inside = vec![false; n];
    region.iter().for_each(|&p| inside[p] = true);

    // restricted successor lists
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &p in region {
        if game.owner(p) == s.player {
            if game.is_dead_end(p) {
                return Err(StrategyViolation::OwnDeadEnd(p));
            }
            let q = s.get(p).ok_or(StrategyViolation::MissingChoice(p))?;
            if !game.successors(p).contains(&q) {
                return Err(StrategyViolation::IllegalMove { from: p, to: q });
            }
            if !inside[q] {
                return Err(StrategyViolation::LeavesRegion { from: p, to: q });
            }
            edges[p].push(q);
        } else {
            for &q in game.successors(p) {
                if !inside[q] {
                    return Err(StrategyViolation::LeavesRegion { from: p, to: q });
                }
                edges[p].push(q);
            }
        }
    }

    // a position with a bad top priority d lying on a cycle through
    // positions of priority <= d witnesses a losing play
    let bad = |d: u32| Player::favoured_by(d) != s.player;
    for &v in region.iter().filter(|&&v| bad(game.priority(v))) {
        let d = game.priority(v);
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = edges[v].clone();
        while let Some(u) = stack.pop() {
            if u == v {
                return Err(StrategyViolation::LosingCycle(v));
            }
            if seen[u] || game.priority(u) > d {
                continue;
            }
            seen[u] = true;
            stack.extend(edges[u].iter().copied());
        }
    }
    Ok(())
}

pub fn verify_strategy(game: &ParityGame, s: &Strategy, region: &BTreeSet<usize>) -> bool {
    check_strategy(game, s, region).is_ok()
}

/// A random arena with exactly `positions` positions, priorities in
/// `0..=max_priority` and out-degrees in `0..=max_out_degree` (distinct
/// successors). Deterministic in `seed`.
pub fn random_parity_game(
    positions: usize,
    max_priority: u32,
    max_out_degree: usize,
    seed: u64,
) -> ParityGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = ParityGame::new();
    for _ in 0..positions {
        let owner = if rng.gen_bool(0.5) { Player::Eve } else { Player::Adam };
        g.add_position(owner, rng.gen_range(0..=max_priority));
    }
    for p in 0..positions {
        let degree = rng.gen_range(0..=max_out_degree.min(positions));
        let succ = rand::seq::index::sample(&mut rng, positions, degree);
        let mut succ: Vec<usize> = succ.into_iter().collect();
        succ.sort_unstable();
        for q in succ {
            g.add_edge(p, q);
        }
    }
    g
}
