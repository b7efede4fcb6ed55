use crate::error::{Error, Result};
use crate::trees::LetterRenaming;

use super::{Npta, Transition};

fn ranks_within(a: &Npta, allowed: &[u32]) -> bool {
    a.ranks().iter().all(|r| allowed.contains(r))
}

/// Product automaton recognising `T(a) ∩ T(b)`.
///
/// Two rank combinations are supported:
/// * both Büchi (ranks in `{1,2}`): a two-phase counter waits alternately
///   for an accepting state of `a` and of `b`;
/// * one side with ranks in `{0,1}` and the other Büchi: ranks `{1,2,3}`,
///   where `3` marks a rank-1 state of the `{0,1}` side, `2` an accepting
///   state of the Büchi side and `1` everything else.
///
/// Anything else is rejected with [`Error::UnsupportedProduct`].
pub fn intersection_product(a: &Npta, b: &Npta) -> Result<Npta> {
    a.alphabet().ensure_same(b.alphabet())?;
    let b = conform(b, a)?;
    if a.is_buchi() && b.is_buchi() {
        Ok(buchi_product(a, &b))
    } else if ranks_within(a, &[0, 1]) && b.is_buchi() {
        Ok(cobuchi_buchi_product(a, &b, false))
    } else if a.is_buchi() && ranks_within(&b, &[0, 1]) {
        Ok(cobuchi_buchi_product(&b, a, true))
    } else {
        Err(Error::UnsupportedProduct(format!(
            "ranks {:?} and {:?}; supported: Büchi x Büchi and {{0,1}} x Büchi",
            a.ranks(),
            b.ranks()
        )))
    }
}

/// `b` re-expressed over `a`'s alphabet order.
fn conform(b: &Npta, a: &Npta) -> Result<Npta> {
    if b.alphabet() == a.alphabet() {
        return Ok(b.clone());
    }
    let transitions = b
        .transitions()
        .iter()
        .map(|t| {
            Ok(Transition {
                letter: a.alphabet().require(b.alphabet().symbol(t.letter))?,
                ..*t
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Npta::new(
        a.alphabet().clone(),
        b.states().to_vec(),
        b.initial(),
        transitions,
        b.ranks().to_vec(),
    )
}

fn pair_transitions(
    a: &Npta,
    b: &Npta,
    index: impl Fn(usize, usize, usize) -> usize,
    phase_of: impl Fn(usize, usize, usize) -> usize,
    phases: usize,
) -> Vec<Transition> {
    let mut out = Vec::new();
    for ta in a.transitions() {
        for tb in b.transitions().iter().filter(|tb| tb.letter == ta.letter) {
            for c in 0..phases {
                let next = phase_of(ta.from, tb.from, c);
                out.push(Transition {
                    from: index(ta.from, tb.from, c),
                    letter: ta.letter,
                    left: index(ta.left, tb.left, next),
                    right: index(ta.right, tb.right, next),
                });
            }
        }
    }
    out
}

fn buchi_product(a: &Npta, b: &Npta) -> Npta {
    let nb = b.state_count();
    let index = |p: usize, q: usize, c: usize| (p * nb + q) * 2 + c;
    let mut states = Vec::new();
    let mut ranks = Vec::new();
    for p in 0..a.state_count() {
        for q in 0..nb {
            for c in 0..2 {
                states.push(format!("{}|{}|{}", a.states()[p], b.states()[q], c));
                // a round completes when phase 1 meets an accepting state of b
                ranks.push(if c == 1 && b.rank(q) == 2 { 2 } else { 1 });
            }
        }
    }
    let next_phase = |p: usize, q: usize, c: usize| match c {
        0 if a.rank(p) == 2 => 1,
        1 if b.rank(q) == 2 => 0,
        c => c,
    };
    let transitions = pair_transitions(a, b, index, next_phase, 2);
    Npta::new(
        a.alphabet().clone(),
        states,
        index(a.initial(), b.initial(), 0),
        transitions,
        ranks,
    )
    .expect("product is well formed")
}

/// `co` has ranks in `{0,1}`, `bu` is Büchi. `swapped` only affects state
/// names, keeping the argument order of the caller visible.
fn cobuchi_buchi_product(co: &Npta, bu: &Npta, swapped: bool) -> Npta {
    let nb = bu.state_count();
    let index = |p: usize, q: usize, _c: usize| p * nb + q;
    let mut states = Vec::new();
    let mut ranks = Vec::new();
    for p in 0..co.state_count() {
        for q in 0..nb {
            let (x, y) = if swapped {
                (&bu.states()[q], &co.states()[p])
            } else {
                (&co.states()[p], &bu.states()[q])
            };
            states.push(format!("{x}|{y}"));
            ranks.push(if co.rank(p) == 1 {
                3
            } else if bu.rank(q) == 2 {
                2
            } else {
                1
            });
        }
    }
    let transitions = pair_transitions(co, bu, index, |_, _, _| 0, 1);
    Npta::new(
        co.alphabet().clone(),
        states,
        index(co.initial(), bu.initial(), 0),
        transitions,
        ranks,
    )
    .expect("product is well formed")
}

/// Applies `r` to every transition letter, so `T(result) = r(T(a))`.
pub fn rename_automaton(a: &Npta, r: &LetterRenaming) -> Result<Npta> {
    r.ensure_domain(a.alphabet())?;
    let transitions = a
        .transitions()
        .iter()
        .map(|t| {
            let image = r.apply(a.alphabet().symbol(t.letter))?;
            Ok(Transition {
                letter: a.alphabet().require(image)?,
                ..*t
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Npta::new(
        a.alphabet().clone(),
        a.states().to_vec(),
        a.initial(),
        transitions,
        a.ranks().to_vec(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts, binary_alphabet, builtin, witness};
    use crate::trees::{random_regular_tree, rename_tree, RegularTree};

    fn singleton(symbol: &str) -> Npta {
        Npta::from_table(binary_alphabet(), &[("s", 2)], "s", &[("s", symbol, "s", "s")]).unwrap()
    }

    fn flip() -> LetterRenaming {
        LetterRenaming::swaps(binary_alphabet(), &[("0", "1")]).unwrap()
    }

    #[test]
    fn disjoint_singletons_have_empty_product() {
        let p = intersection_product(&singleton("0"), &singleton("1")).unwrap();
        assert!(witness(&p).is_none());
    }

    #[test]
    fn l_with_itself_is_nonempty() {
        let l = builtin("L").unwrap();
        let p = intersection_product(&l, &l).unwrap();
        let t = witness(&p).unwrap();
        assert!(accepts(&l, &t).unwrap());
    }

    #[test]
    fn m01_with_k_buchi() {
        let m = builtin("M01").unwrap();
        let k = builtin("K-buchi").unwrap();
        let p = intersection_product(&m, &k).unwrap();
        let t = witness(&p).unwrap();
        assert!(accepts(&m, &t).unwrap());
        assert!(accepts(&k, &t).unwrap());
        // argument order does not matter
        let q = intersection_product(&k, &m).unwrap();
        assert!(accepts(&q, &t).unwrap());
    }

    #[test]
    fn product_soundness_on_samples() {
        let bin = binary_alphabet();
        let cases = [
            (builtin("L").unwrap(), builtin("K-buchi").unwrap()),
            (builtin("M01").unwrap(), builtin("L").unwrap()),
            (builtin("K-det").unwrap(), builtin("K-buchi").unwrap()),
        ];
        for (a, b) in &cases {
            let p = intersection_product(a, b).unwrap();
            for seed in 0..300 {
                let t = random_regular_tree(&bin, 6, seed);
                assert_eq!(
                    accepts(&p, &t).unwrap(),
                    accepts(a, &t).unwrap() && accepts(b, &t).unwrap(),
                    "seed {seed}"
                );
            }
        }
    }

    #[test]
    fn unsupported_combination_is_reported() {
        let ub = builtin("UBbin").unwrap();
        assert!(matches!(
            intersection_product(&ub, &builtin("L").unwrap()),
            Err(Error::UnsupportedProduct(_))
        ));
    }

    #[test]
    fn double_renaming_restores_transitions() {
        let l = builtin("L").unwrap();
        let twice = rename_automaton(&rename_automaton(&l, &flip()).unwrap(), &flip()).unwrap();
        assert_eq!(twice.transitions(), l.transitions());
    }

    #[test]
    fn renaming_commutes_with_membership() {
        let bin = binary_alphabet();
        let r = flip();
        for (i, name) in ["L", "M01", "K-det", "K-buchi", "UBbin"].iter().cycle().take(300).enumerate() {
            let a = builtin(name).unwrap();
            let t = random_regular_tree(&bin, 6, i as u64);
            let ra = rename_automaton(&a, &r).unwrap();
            let rt = rename_tree(&t, &r).unwrap();
            assert_eq!(accepts(&ra, &rt).unwrap(), accepts(&a, &t).unwrap());
        }
        let all0 = RegularTree::constant(bin, "0").unwrap();
        assert!(accepts(&rename_automaton(&builtin("M01").unwrap(), &r).unwrap(), &rename_tree(&all0, &r).unwrap()).unwrap());
    }
}
