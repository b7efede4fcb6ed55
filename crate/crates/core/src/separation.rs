//! Separator synthesis for disjoint Büchi tree automata.
//!
//! For a Büchi automaton `A` the hierarchy `K^0 ⊇ K^1 ⊇ …` is materialised
//! as alternating automata. Level 0 only asks for some run (all ranks 0).
//! Level `n+1` asks for a run whose every path is Büchi-accepting and which,
//! at each visit of an accepting state `p`, additionally satisfies the level
//! `n` condition from `p` on the subtree below. For disjoint `A`, `B` the
//! level `M = 2^{|A|·|B|} + 1` from the initial state is expected to contain
//! `T(A)` and to miss `T(B)`; [`verify_separation`] checks this on samples.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::{intersection_product, member_alt, sample_language, witness, Apta, Npta, PosBool};
use crate::error::{Error, Result};
use crate::formats::TreeDoc;
use crate::trees::{Direction, NodeWord, RegularTree};

/// Levels above this are refused rather than materialised.
pub const MAX_LEVEL: usize = 4096;

/// `2^(na·nb) + 1`.
pub fn bound_m(na: usize, nb: usize) -> Result<u64> {
    if na == 0 || nb == 0 {
        return Err(Error::InvalidAutomaton("state counts must be positive".into()));
    }
    na.checked_mul(nb)
        .and_then(|e| u32::try_from(e).ok())
        .and_then(|e| 1u64.checked_shl(e).filter(|_| e < 64))
        .and_then(|p| p.checked_add(1))
        .ok_or(Error::Overflow(na, nb))
}

fn state_index(na: usize, q: usize, level: usize) -> usize {
    level * na + q
}

fn level_condition(a: &Npta, q: usize, letter: usize, level: usize) -> PosBool {
    let na = a.state_count();
    let step = |p: usize, d: Direction| {
        let here = PosBool::Atom(d, state_index(na, p, level));
        if level > 0 && a.rank(p) == 2 {
            PosBool::And(vec![here, PosBool::Atom(d, state_index(na, p, level - 1))])
        } else {
            here
        }
    };
    PosBool::any(
        a.transitions_from(q, letter)
            .map(|t| PosBool::And(vec![step(t.left, Direction::Left), step(t.right, Direction::Right)]))
            .collect(),
    )
}

fn level_states(a: &Npta, level: usize) -> impl Iterator<Item = String> + '_ {
    a.states().iter().map(move |q| format!("{q}^{level}"))
}

/// Level 0: states `q^0` of rank 0, accepting exactly the trees that admit
/// some (not necessarily accepting) run from `q`.
pub fn k_level_zero(a: &Npta) -> Apta {
    let sigma = a.alphabet().len();
    let delta = (0..a.state_count())
        .flat_map(|q| (0..sigma).map(move |l| (q, l)))
        .map(|(q, l)| level_condition(a, q, l, 0))
        .collect();
    Apta::new(
        a.alphabet().clone(),
        level_states(a, 0).collect(),
        a.initial(),
        delta,
        vec![0; a.state_count()],
    )
    .expect("level 0 is well formed")
}

/// Extends the level-`n` automaton `prev` by the states `q^{n+1}`, whose
/// rank is the rank of `q` in `a`. The initial state becomes
/// `q_I^{n+1}`.
pub fn k_level_succ(a: &Npta, prev: &Apta, n: usize) -> Result<Apta> {
    a.require_buchi("hierarchy base")?;
    let na = a.state_count();
    if prev.state_count() != (n + 1) * na || !prev.alphabet().same_symbols(a.alphabet()) {
        return Err(Error::InvalidAutomaton(format!(
            "expected the level-{n} automaton of the same base"
        )));
    }
    let prev = conform_apta(prev, a)?;
    let sigma = a.alphabet().len();
    let mut states = prev.states().to_vec();
    states.extend(level_states(a, n + 1));
    let mut ranks = prev.ranks().to_vec();
    ranks.extend_from_slice(a.ranks());
    let mut delta: Vec<PosBool> = (0..prev.state_count())
        .flat_map(|q| (0..sigma).map(move |l| (q, l)))
        .map(|(q, l)| prev.delta(q, l).clone())
        .collect();
    for q in 0..na {
        for l in 0..sigma {
            delta.push(level_condition(a, q, l, n + 1));
        }
    }
    Apta::new(
        a.alphabet().clone(),
        states,
        state_index(na, a.initial(), n + 1),
        delta,
        ranks,
    )
}

fn conform_apta(k: &Apta, a: &Npta) -> Result<Apta> {
    if k.alphabet() == a.alphabet() {
        return Ok(k.clone());
    }
    let sigma = a.alphabet().len();
    let mut delta = Vec::with_capacity(k.state_count() * sigma);
    for q in 0..k.state_count() {
        for l in 0..sigma {
            let old = k.alphabet().require(a.alphabet().symbol(l))?;
            delta.push(k.delta(q, old).clone());
        }
    }
    Apta::new(
        a.alphabet().clone(),
        k.states().to_vec(),
        k.initial(),
        delta,
        k.ranks().to_vec(),
    )
}

/// The levels `0..=n` built over a Büchi automaton.
#[derive(Clone, Debug)]
pub struct KHierarchy {
    pub base: Npta,
    /// `levels[n]` contains the states of all levels `≤ n`; its initial
    /// state is `q_I^n`.
    pub levels: Vec<Apta>,
}

impl KHierarchy {
    pub fn build(a: &Npta, up_to: usize) -> Result<Self> {
        a.require_buchi("hierarchy base")?;
        if up_to > MAX_LEVEL {
            return Err(Error::LevelTooLarge {
                level: up_to as u64,
                max: MAX_LEVEL,
            });
        }
        let mut levels = vec![k_level_zero(a)];
        for n in 0..up_to {
            let next = k_level_succ(a, &levels[n], n)?;
            levels.push(next);
        }
        Ok(Self {
            base: a.clone(),
            levels,
        })
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &Apta {
        &self.levels[n]
    }

    /// Level `n` started in `q^n` instead of `q_I^n`.
    pub fn level_from(&self, n: usize, q: usize) -> Apta {
        self.levels[n].with_initial(state_index(self.base.state_count(), q, n))
    }

    /// Levels (from the top down) `n` with `t` accepted at `n+1` but
    /// rejected at `n`.
    pub fn monotonicity_violations(&self, t: &RegularTree) -> Result<Vec<usize>> {
        let verdicts = self
            .levels
            .iter()
            .map(|k| member_alt(k, t))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..self.top()).filter(|&n| verdicts[n + 1] && !verdicts[n]).collect())
    }
}

/// A tree in `T(a) ∩ T(b)`, or `None` when the languages are disjoint.
pub fn disjointness_witness(a: &Npta, b: &Npta) -> Result<Option<RegularTree>> {
    a.require_buchi("first automaton")?;
    b.require_buchi("second automaton")?;
    Ok(witness(&intersection_product(a, b)?))
}

pub fn check_disjoint_buchi(a: &Npta, b: &Npta) -> Result<bool> {
    Ok(disjointness_witness(a, b)?.is_none())
}

fn require_disjoint(a: &Npta, b: &Npta) -> Result<()> {
    match disjointness_witness(a, b)? {
        None => Ok(()),
        Some(t) => Err(Error::NotDisjoint(Box::new(t))),
    }
}

/// The separator at level `M = bound_m(|a|, |b|)`.
pub fn synthesize_separator(a: &Npta, b: &Npta) -> Result<Apta> {
    let m = bound_m(a.state_count(), b.state_count())?;
    let level = usize::try_from(m)
        .ok()
        .filter(|&l| l <= MAX_LEVEL)
        .ok_or(Error::LevelTooLarge { level: m, max: MAX_LEVEL })?;
    synthesize_separator_at(a, b, level)
}

/// The hierarchy level `level` as a candidate separator, with the same
/// preconditions as [`synthesize_separator`].
pub fn synthesize_separator_at(a: &Npta, b: &Npta, level: usize) -> Result<Apta> {
    require_disjoint(a, b)?;
    let h = KHierarchy::build(a, level)?;
    Ok(h.levels[level].clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Samples of the language to be contained.
    A,
    /// Samples of the language to be avoided.
    B,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationFailure {
    pub tree: TreeDoc,
    pub side: Side,
    pub expected: bool,
    pub got: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairsTested {
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub pass: bool,
    pub pairs_tested: PairsTested,
    pub failures: Vec<SeparationFailure>,
    /// Both inputs are Büchi and their intersection was found empty.
    pub disjointness_checked: bool,
    pub samples_per_side: usize,
    pub seed: u64,
    /// Fewer distinct samples than requested were found on some side.
    pub short_sample: bool,
}

fn samples(a: &Npta, n: usize, seed: u64) -> Result<(Vec<RegularTree>, bool)> {
    match sample_language(a, n, seed) {
        Ok(s) => Ok((s.trees, s.short)),
        Err(Error::EmptyLanguage) => Ok((Vec::new(), n > 0)),
        Err(e) => Err(e),
    }
}

/// Checks `k` against `n` samples of each language: members of `T(a)` must
/// be accepted and members of `T(b)` rejected. Side `b` is sampled with
/// `seed + 1`.
pub fn verify_separation(k: &Apta, a: &Npta, b: &Npta, n: usize, seed: u64) -> Result<SeparationReport> {
    let (sa, short_a) = samples(a, n, seed)?;
    let (sb, short_b) = samples(b, n, seed.wrapping_add(1))?;
    let jobs: Vec<(Side, &RegularTree)> = sa
        .iter()
        .map(|t| (Side::A, t))
        .chain(sb.iter().map(|t| (Side::B, t)))
        .collect();
    let verdicts = jobs
        .par_iter()
        .map(|(_, t)| member_alt(k, t))
        .collect::<Result<Vec<_>>>()?;
    let failures = jobs
        .iter()
        .zip(verdicts)
        .filter_map(|(&(side, t), got)| {
            let expected = side == Side::A;
            (got != expected).then(|| SeparationFailure {
                tree: TreeDoc::from_tree(t),
                side,
                expected,
                got,
            })
        })
        .collect::<Vec<_>>();
    let disjointness_checked =
        a.is_buchi() && b.is_buchi() && check_disjoint_buchi(a, b).unwrap_or(false);
    Ok(SeparationReport {
        pass: failures.is_empty(),
        pairs_tested: PairsTested { a: sa.len(), b: sb.len() },
        failures,
        disjointness_checked,
        samples_per_side: n,
        seed,
        short_sample: short_a || short_b,
    })
}

/// A cut: a finite maximal antichain of nodes under the prefix order, i.e.
/// a finite set met exactly once by every infinite path.
///
/// The hierarchy above replaces quantification over cuts by a coinductive
/// condition; this type only makes the notion concrete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    antichain: BTreeSet<NodeWord>,
}

impl Cut {
    pub fn new(antichain: BTreeSet<NodeWord>) -> Result<Self> {
        let depth = antichain.iter().map(NodeWord::len).max().unwrap_or(0);
        if !Self::covers(&antichain, &NodeWord::root(), depth) {
            return Err(Error::InvalidTree("not a maximal antichain".into()));
        }
        Ok(Self { antichain })
    }

    /// Exactly one element on every path through `w`, none above `w`.
    fn covers(set: &BTreeSet<NodeWord>, w: &NodeWord, depth: usize) -> bool {
        if set.contains(w) {
            return !set.iter().any(|v| v != w && v.0.starts_with(&w.0));
        }
        w.len() < depth && Direction::BOTH.iter().all(|&d| Self::covers(set, &w.child(d), depth))
    }

    pub fn nodes(&self) -> &BTreeSet<NodeWord> {
        &self.antichain
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts, binary_alphabet, builtin};
    use crate::trees::random_regular_tree;

    fn singleton(symbol: &str) -> Npta {
        Npta::from_table(binary_alphabet(), &[("s", 2)], "s", &[("s", symbol, "s", "s")]).unwrap()
    }

    fn all(symbol: &str) -> RegularTree {
        RegularTree::constant(binary_alphabet(), symbol).unwrap()
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bound_m(1, 1).unwrap(), 3);
        assert_eq!(bound_m(2, 1).unwrap(), 5);
        assert_eq!(bound_m(2, 2).unwrap(), 17);
        assert_eq!(bound_m(3, 5).unwrap(), bound_m(5, 3).unwrap());
        assert!(matches!(bound_m(8, 8), Err(Error::Overflow(8, 8))));
        assert!(bound_m(0, 1).is_err());
    }

    #[test]
    fn level_zero_examples() {
        let bin = binary_alphabet();
        let total = Npta::from_table(bin.clone(), &[("s", 1)], "s", &[("s", "0", "s", "s"), ("s", "1", "s", "s")]).unwrap();
        let k0 = k_level_zero(&total);
        assert!(k0.ranks().iter().all(|&r| r == 0));
        let stuck = Npta::from_table(bin.clone(), &[("s", 1)], "s", &[]).unwrap();
        let l = builtin("L").unwrap();
        for seed in 0..30 {
            let t = random_regular_tree(&bin, 5, seed);
            assert!(member_alt(&k0, &t).unwrap());
            assert!(!member_alt(&k_level_zero(&stuck), &t).unwrap());
        }
        assert!(member_alt(&k_level_zero(&l), &all("0")).unwrap());
    }

    #[test]
    fn level_zero_is_run_existence() {
        let bin = binary_alphabet();
        for name in ["L", "K-buchi"] {
            let a = builtin(name).unwrap();
            let h = KHierarchy::build(&a, 0).unwrap();
            let zero = a.with_ranks(vec![0; a.state_count()]).unwrap();
            for q in 0..a.state_count() {
                for seed in 0..40 {
                    let t = random_regular_tree(&bin, 6, seed);
                    assert_eq!(
                        member_alt(&h.level_from(0, q), &t).unwrap(),
                        accepts(&zero.with_initial(q), &t).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn succ_rejects_non_buchi() {
        let m = builtin("M01").unwrap();
        assert!(matches!(k_level_succ(&m, &k_level_zero(&m), 0), Err(Error::NotBuchi(_))));
    }

    #[test]
    fn no_accepting_states_means_empty_levels() {
        let bin = binary_alphabet();
        let a = Npta::from_table(bin.clone(), &[("s", 1)], "s", &[("s", "0", "s", "s"), ("s", "1", "s", "s")]).unwrap();
        let h = KHierarchy::build(&a, 3).unwrap();
        let accepting = singleton("0").with_ranks(vec![2]).unwrap();
        let full = Npta::from_table(bin.clone(), &[("s", 2)], "s", &[("s", "0", "s", "s"), ("s", "1", "s", "s")]).unwrap();
        let hf = KHierarchy::build(&full, 3).unwrap();
        for seed in 0..30 {
            let t = random_regular_tree(&bin, 5, seed);
            for n in 1..=3 {
                assert!(!member_alt(h.level(n), &t).unwrap());
            }
            for n in 0..=3 {
                assert!(member_alt(hf.level(n), &t).unwrap());
            }
        }
        assert!(member_alt(KHierarchy::build(&accepting, 2).unwrap().level(2), &all("0")).unwrap());
    }

    #[test]
    fn levels_carry_previous_states() {
        let l = builtin("L").unwrap();
        let h = KHierarchy::build(&l, 2).unwrap();
        assert_eq!(h.level(2).state_count(), 9);
        assert_eq!(&h.level(2).ranks()[..6], h.level(1).ranks());
        assert_eq!(h.level(2).states()[h.level(2).initial()], "q^2");
    }

    #[test]
    fn monotone_on_random_trees() {
        let l = builtin("L").unwrap();
        let h = KHierarchy::build(&l, 3).unwrap();
        let bin = binary_alphabet();
        for seed in 0..200 {
            let t = random_regular_tree(&bin, 6, seed);
            assert!(h.monotonicity_violations(&t).unwrap().is_empty());
        }
    }

    #[test]
    fn disjointness() {
        assert!(check_disjoint_buchi(&singleton("0"), &singleton("1")).unwrap());
        assert!(!check_disjoint_buchi(&singleton("0"), &singleton("0")).unwrap());
        assert!(check_disjoint_buchi(&builtin("L").unwrap(), &singleton("0")).unwrap());
        assert!(check_disjoint_buchi(&builtin("M01").unwrap(), &singleton("0")).is_err());
    }

    #[test]
    fn singleton_pair_separates() {
        let (a, b) = (singleton("0"), singleton("1"));
        let k = synthesize_separator(&a, &b).unwrap();
        assert_eq!(k.state_count(), 4);
        let r = verify_separation(&k, &a, &b, 100, 7).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.disjointness_checked);
        assert!(r.short_sample);
        assert_eq!(r.pairs_tested, PairsTested { a: 1, b: 1 });
    }

    #[test]
    fn l_against_all_zero() {
        let (a, b) = (builtin("L").unwrap(), singleton("0"));
        let k = synthesize_separator_at(&a, &b, 3).unwrap();
        let r = verify_separation(&k, &a, &b, 20, 1).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(!member_alt(&k, &all("0")).unwrap());
        let swapped = synthesize_separator_at(&b, &a, 3).unwrap();
        assert!(verify_separation(&swapped, &b, &a, 20, 1).unwrap().pass);
    }

    #[test]
    fn non_disjoint_inputs_yield_witness() {
        let a = builtin("L").unwrap();
        match synthesize_separator(&a, &a) {
            Err(Error::NotDisjoint(t)) => assert!(accepts(&a, &t).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn forced_failures() {
        let bin = binary_alphabet();
        let (a, b) = (builtin("L").unwrap(), singleton("0"));
        let yes = Apta::uniform(bin.clone(), PosBool::True, 0).unwrap();
        let no = Apta::uniform(bin, PosBool::False, 0).unwrap();
        let r = verify_separation(&yes, &a, &b, 10, 3).unwrap();
        assert_eq!(r.failures.len(), r.pairs_tested.b);
        assert!(r.failures.iter().all(|f| f.side == Side::B));
        let r = verify_separation(&no, &a, &b, 10, 3).unwrap();
        assert_eq!(r.failures.len(), r.pairs_tested.a);
        assert!(!r.pass);
    }

    #[test]
    fn cuts() {
        let set = |ws: &[&str]| ws.iter().map(|w| w.parse().unwrap()).collect::<BTreeSet<NodeWord>>();
        assert!(Cut::new(set(&[""])).is_ok());
        assert!(Cut::new(set(&["1", "21", "22"])).is_ok());
        assert!(Cut::new(set(&["1", "21"])).is_err());
        assert!(Cut::new(set(&["1", "2", "11"])).is_err());
        assert!(Cut::new(set(&[])).is_err());
    }
}
