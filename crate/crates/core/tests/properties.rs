use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use gtl_core::automata::{accepts, binary_alphabet, builtin, member_alt, Apta, Npta};
use gtl_core::formats::{
    code_to_json, npta_to_json, parse_code, parse_game, parse_npta, parse_tree, tree_to_json, write_game,
};
use gtl_core::game_langs::{duality, eval_borel, game_alphabet, in_w01, in_w01_prime, random_code, reduce_fb};
use gtl_core::parity_games::{brute_force_solve, random_parity_game, solve, verify_strategy};
use gtl_core::trees::{bisimilar, random_regular_tree, rename_tree, tree_distance, Direction, Distance, NodeWord};
use gtl_core::{Alphabet, RegularTree};

fn tree(alphabet: Alphabet) -> impl Strategy<Value = RegularTree> {
    (1usize..8, any::<u64>()).prop_map(move |(n, seed)| random_regular_tree(&alphabet, n, seed))
}

fn word() -> impl Strategy<Value = NodeWord> {
    prop::collection::vec(prop_oneof![Just(Direction::Left), Just(Direction::Right)], 0..6).prop_map(NodeWord)
}

fn dist(a: &RegularTree, b: &RegularTree) -> Distance {
    tree_distance(a, b, 1000).unwrap()
}

/// Membership for deterministic automata by direct inspection of the
/// unique run: accepted iff the run graph is total and every reachable
/// cycle has an even maximal rank.
fn deterministic_oracle(a: &Npta, t: &RegularTree) -> bool {
    let step = |q: usize, v: usize| {
        let letter = a.alphabet().index_of(t.label(v)).unwrap();
        a.transitions_from(q, letter).next().copied()
    };
    let start = (a.initial(), 0usize);
    let mut reach = vec![start];
    let mut seen = HashSet::from([start]);
    let mut edges: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    while let Some((q, v)) = reach.pop() {
        let Some(tr) = step(q, v) else { return false };
        let succ: Vec<_> = Direction::BOTH.iter().map(|&d| (tr.target(d), t.child(v, d))).collect();
        for &s in &succ {
            if seen.insert(s) {
                reach.push(s);
            }
        }
        edges.insert((q, v), succ);
    }
    // an odd-rank node r lies on a bad cycle iff r reaches itself through
    // nodes of rank ≤ rank(r)
    for &r in &seen {
        let top = a.rank(r.0);
        if top.is_multiple_of(2) {
            continue;
        }
        let mut stack = edges[&r].clone();
        let mut visited = HashSet::new();
        while let Some(x) = stack.pop() {
            if a.rank(x.0) > top || !visited.insert(x) {
                continue;
            }
            if x == r {
                return false;
            }
            stack.extend(edges[&x].iter().copied());
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn distance_is_an_ultrametric(x in tree(binary_alphabet()), y in tree(binary_alphabet()), z in tree(binary_alphabet())) {
        prop_assert_eq!(dist(&x, &y), dist(&y, &x));
        prop_assert!(dist(&x, &z) <= dist(&x, &y).max(dist(&y, &z)));
        prop_assert_eq!(dist(&x, &x), Distance::Zero);
    }

    #[test]
    fn zero_distance_iff_bisimilar(x in tree(binary_alphabet()), y in tree(binary_alphabet())) {
        prop_assert_eq!(dist(&x, &y) == Distance::Zero, bisimilar(&x, &y).unwrap());
    }

    #[test]
    fn label_at_steps_into_subtrees(t in tree(game_alphabet()), w in word(), v in word()) {
        let mut wv = w.clone();
        wv.0.extend(v.0.iter().copied());
        let sub = t.subtree(&w);
        prop_assert_eq!(t.label_at(&wv), sub.label_at(&v));
    }

    #[test]
    fn duality_is_an_involution_on_trees(t in tree(game_alphabet())) {
        let twice = rename_tree(&rename_tree(&t, &duality()).unwrap(), &duality()).unwrap();
        prop_assert!(bisimilar(&twice, &t).unwrap());
    }

    #[test]
    fn solver_matches_brute_force(n in 1usize..6, p in 0u32..4, seed in any::<u64>()) {
        let g = random_parity_game(n, p, 2, seed);
        let r = solve(&g);
        let oracle = brute_force_solve(&g).unwrap();
        prop_assert_eq!(&r.eve_region, &oracle.eve_region);
        prop_assert_eq!(&r.adam_region, &oracle.adam_region);
        prop_assert!(verify_strategy(&g, &r.eve_strategy, &r.eve_region));
        prop_assert!(verify_strategy(&g, &r.adam_strategy, &r.adam_region));
    }

    #[test]
    fn even_shift_keeps_and_dual_swaps_winners(n in 1usize..9, seed in any::<u64>(), k in 0u32..3) {
        let g = random_parity_game(n, 4, 3, seed);
        let r = solve(&g);
        let shifted = solve(&g.shifted(2 * k));
        prop_assert_eq!(&shifted.eve_region, &r.eve_region);
        let dual = solve(&g.dual());
        prop_assert_eq!(&dual.eve_region, &r.adam_region);
        prop_assert_eq!(&dual.adam_region, &r.eve_region);
    }

    #[test]
    fn documents_round_trip(t in tree(game_alphabet()), seed in any::<u64>(), rank in 0usize..4) {
        prop_assert_eq!(parse_tree(&tree_to_json(&t)).unwrap(), t);
        let g = random_parity_game(1 + (seed % 9) as usize, 5, 3, seed);
        prop_assert_eq!(parse_game(&write_game(&g)).unwrap(), g);
        let c = random_code(rank, seed);
        prop_assert_eq!(parse_code(&code_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn w_dichotomy_and_duality(t in tree(game_alphabet())) {
        let (w, wp) = (in_w01(&t).unwrap(), in_w01_prime(&t).unwrap());
        prop_assert!(!(w && wp));
        prop_assert_eq!(w, in_w01_prime(&rename_tree(&t, &duality()).unwrap()).unwrap());
    }

    #[test]
    fn reduction_lands_on_the_right_side(rank in 0usize..4, seed in any::<u64>(), u in tree(game_alphabet())) {
        let c = random_code(rank, seed);
        let image = reduce_fb(&c, &u).unwrap();
        if eval_borel(&c, &u).unwrap() {
            prop_assert!(in_w01(&image).unwrap());
        } else {
            prop_assert!(in_w01_prime(&image).unwrap());
        }
    }

    #[test]
    fn deterministic_membership_matches_cycle_oracle(t in tree(binary_alphabet())) {
        for name in ["M01", "K-det"] {
            let a = builtin(name).unwrap();
            prop_assert_eq!(accepts(&a, &t).unwrap(), deterministic_oracle(&a, &t), "{}", name);
        }
    }

    #[test]
    fn alternating_embedding_agrees(t in tree(binary_alphabet())) {
        for name in ["L", "K-buchi", "UBbin"] {
            let a = builtin(name).unwrap();
            prop_assert_eq!(member_alt(&Apta::from_npta(&a), &t).unwrap(), accepts(&a, &t).unwrap());
        }
    }
}

#[test]
fn builtin_documents_round_trip() {
    for name in ["L", "M01", "Mik(1,4)", "K-det", "K-buchi", "W01", "W01-prime", "UBbin"] {
        let a = builtin(name).unwrap();
        assert_eq!(parse_npta(&npta_to_json(&a)).unwrap(), a);
    }
}

#[test]
fn parity_language_oracle_on_higher_indices() {
    let a = builtin("Mik(1,3)").unwrap();
    let sigma = a.alphabet().clone();
    for seed in 0..200 {
        let t = random_regular_tree(&sigma, 6, seed);
        assert_eq!(accepts(&a, &t).unwrap(), deterministic_oracle(&a, &t), "seed {seed}");
        assert_eq!(
            accepts(&a, &t).unwrap(),
            gtl_core::game_langs::parity_lang_member(&t, 1, 3).unwrap()
        );
    }
}

#[test]
fn ub_bin_examples() {
    let ub = builtin("UBbin").unwrap();
    let bin = binary_alphabet();
    // all 0: no path with infinitely many 1s
    assert!(!accepts(&ub, &RegularTree::constant(bin.clone(), "0").unwrap()).unwrap());
    // all 1: every path is bad
    assert!(!accepts(&ub, &RegularTree::constant(bin.clone(), "1").unwrap()).unwrap());
    // 1s exactly on the rightmost branch: a unique bad path
    let spine = RegularTree::from_nodes(bin, &[("1", 1, 0), ("0", 1, 1)]).unwrap();
    assert!(accepts(&ub, &spine).unwrap());
}
