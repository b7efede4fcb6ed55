//! Finitely presented infinite binary trees.
//!
//! A [`RegularTree`] is a finite graph whose nodes carry a label and a left and
//! right successor. The infinite tree it generates maps a node word
//! `w ∈ {1,2}*` to the label of the node reached by walking `w` from the root.
//! Generators are kept reachability-trimmed and numbered in breadth-first
//! order from the root, which is always node `0`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// An ordered, duplicate-free set of symbol names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        let mut seen = HashSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn require(&self, symbol: &str) -> Result<usize> {
        self.index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index_of(symbol).is_some()
    }

    /// True when both alphabets hold the same symbols, in any order.
    pub fn same_symbols(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.symbols.iter().all(|s| other.contains(s))
    }

    pub(crate) fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self.same_symbols(other) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.symbols, other.symbols
            )))
        }
    }
}

/// One step down the tree: `1` is the left child, `2` the right child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Left, Direction::Right];

    pub fn index(self) -> usize {
        match self {
            Direction::Left => 0,
            Direction::Right => 1,
        }
    }

    /// `1` or `2`.
    pub fn digit(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_digit(d: u8) -> Option<Self> {
        match d {
            1 => Some(Direction::Left),
            2 => Some(Direction::Right),
            _ => None,
        }
    }
}

/// A finite word over `{1, 2}`, addressing a node of the infinite tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeWord(pub Vec<Direction>);

impl NodeWord {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Direction> + '_ {
        self.0.iter().copied()
    }

    pub fn child(&self, d: Direction) -> Self {
        let mut w = self.0.clone();
        w.push(d);
        Self(w)
    }

    /// The word `2^n`, i.e. the `n`-th node of the rightmost path.
    pub fn rightmost(n: usize) -> Self {
        Self(vec![Direction::Right; n])
    }
}

impl fmt::Display for NodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{}", d.digit())?;
        }
        Ok(())
    }
}

impl FromStr for NodeWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '1' => Ok(Direction::Left),
                '2' => Ok(Direction::Right),
                _ => Err(Error::InvalidTree(format!(
                    "node word `{s}` contains `{c}`, expected only 1 and 2"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(NodeWord)
    }
}

/// A finite generator of an infinite binary labelled tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularTree {
    alphabet: Alphabet,
    labels: Vec<usize>,
    children: Vec<[usize; 2]>,
}

impl RegularTree {
    /// Builds a generator from raw parts, trimming nodes unreachable from
    /// `root` and renumbering the rest breadth-first.
    pub fn from_parts(
        alphabet: Alphabet,
        root: usize,
        labels: Vec<usize>,
        children: Vec<[usize; 2]>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidTree("generator has no nodes".into()));
        }
        if children.len() != n {
            return Err(Error::InvalidTree(format!(
                "{} labels but {} child pairs",
                n,
                children.len()
            )));
        }
        if root >= n {
            return Err(Error::InvalidTree(format!("root {root} is not a node")));
        }
        for (v, (&label, kids)) in labels.iter().zip(&children).enumerate() {
            if label >= alphabet.len() {
                return Err(Error::InvalidTree(format!(
                    "node {v} has label index {label} outside the alphabet"
                )));
            }
            if let Some(&c) = kids.iter().find(|&&c| c >= n) {
                return Err(Error::InvalidTree(format!(
                    "node {v} points to missing node {c}"
                )));
            }
        }

        let mut renumber = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        renumber[root] = 0;
        order.push(root);
        while let Some(v) = queue.pop_front() {
            for c in children[v] {
                if renumber[c] == usize::MAX {
                    renumber[c] = order.len();
                    order.push(c);
                    queue.push_back(c);
                }
            }
        }
        let labels = order.iter().map(|&v| labels[v]).collect();
        let children = order
            .iter()
            .map(|&v| [renumber[children[v][0]], renumber[children[v][1]]])
            .collect();
        Ok(Self {
            alphabet,
            labels,
            children,
        })
    }

    /// Builds a generator from `(label, left, right)` rows; row `0` is the root.
    pub fn from_nodes(alphabet: Alphabet, nodes: &[(&str, usize, usize)]) -> Result<Self> {
        let labels = nodes
            .iter()
            .map(|(s, _, _)| alphabet.require(s))
            .collect::<Result<Vec<_>>>()?;
        let children = nodes.iter().map(|&(_, l, r)| [l, r]).collect();
        Self::from_parts(alphabet, 0, labels, children)
    }

    /// The tree labelled `symbol` everywhere.
    pub fn constant(alphabet: Alphabet, symbol: &str) -> Result<Self> {
        let label = alphabet.require(symbol)?;
        Ok(Self {
            alphabet,
            labels: vec![label],
            children: vec![[0, 0]],
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    pub fn label(&self, node: usize) -> &str {
        self.alphabet.symbol(self.labels[node])
    }

    pub fn label_index(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn child(&self, node: usize, d: Direction) -> usize {
        self.children[node][d.index()]
    }

    pub fn children(&self, node: usize) -> [usize; 2] {
        self.children[node]
    }

    /// The generator node reached from the root along `w`.
    pub fn walk(&self, w: &NodeWord) -> usize {
        w.iter().fold(self.root(), |v, d| self.child(v, d))
    }

    /// The label `t(w)` of the generated tree.
    pub fn label_at(&self, w: &NodeWord) -> &str {
        self.label(self.walk(w))
    }

    /// The subtree `t.w`, as the same generator re-rooted.
    pub fn subtree(&self, w: &NodeWord) -> Self {
        self.rerooted(self.walk(w))
    }

    pub(crate) fn rerooted(&self, node: usize) -> Self {
        Self::from_parts(
            self.alphabet.clone(),
            node,
            self.labels.clone(),
            self.children.clone(),
        )
        .expect("re-rooting a valid generator")
    }

    /// Checks the generator invariants: totality of labels and edges and
    /// reachability of every node from the root.
    pub fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        if n == 0 || self.children.len() != n {
            return Err(Error::InvalidTree("malformed node tables".into()));
        }
        if self.labels.iter().any(|&l| l >= self.alphabet.len()) {
            return Err(Error::InvalidTree("label outside the alphabet".into()));
        }
        if self.children.iter().flatten().any(|&c| c >= n) {
            return Err(Error::InvalidTree("edge to a missing node".into()));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for c in self.children[v] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(Error::InvalidTree(format!("node {v} is unreachable"))),
            None => Ok(()),
        }
    }

    /// The same tree presented over `alphabet`, which must hold the same
    /// symbols (possibly in another order).
    pub fn conform_to(&self, alphabet: &Alphabet) -> Result<Self> {
        self.alphabet.ensure_same(alphabet)?;
        if &self.alphabet == alphabet {
            return Ok(self.clone());
        }
        let labels = self
            .labels
            .iter()
            .map(|&l| alphabet.require(self.alphabet.symbol(l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alphabet: alphabet.clone(),
            labels,
            children: self.children.clone(),
        })
    }

    /// Relabels pointwise through `f`, leaving the structure unchanged.
    pub fn map_labels(&self, alphabet: Alphabet, f: impl Fn(&str) -> Result<usize>) -> Result<Self> {
        let labels = self
            .labels
            .iter()
            .map(|&l| f(self.alphabet.symbol(l)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(alphabet, 0, labels, self.children.clone())
    }
}

/// A letter-to-letter bijection on an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterRenaming {
    alphabet: Alphabet,
    image: Vec<usize>,
}

impl LetterRenaming {
    /// Symbols absent from `pairs` are mapped to themselves.
    pub fn new(alphabet: Alphabet, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut image: Vec<usize> = (0..alphabet.len()).collect();
        let mut assigned = vec![false; alphabet.len()];
        for (from, to) in pairs {
            let i = alphabet.require(from)?;
            let j = alphabet.require(to)?;
            if assigned[i] {
                return Err(Error::InvalidRenaming(format!("`{from}` mapped twice")));
            }
            assigned[i] = true;
            image[i] = j;
        }
        let mut hit = vec![false; alphabet.len()];
        for &j in &image {
            if hit[j] {
                return Err(Error::InvalidRenaming(format!(
                    "`{}` has two preimages",
                    alphabet.symbol(j)
                )));
            }
            hit[j] = true;
        }
        Ok(Self { alphabet, image })
    }

    /// The involution exchanging each listed pair.
    pub fn swaps(alphabet: Alphabet, pairs: &[(&str, &str)]) -> Result<Self> {
        let both: Vec<(&str, &str)> = pairs
            .iter()
            .flat_map(|&(a, b)| [(a, b), (b, a)])
            .collect();
        Self::new(alphabet, &both)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn apply(&self, symbol: &str) -> Result<&str> {
        let i = self.alphabet.require(symbol)?;
        Ok(self.alphabet.symbol(self.image[i]))
    }

    pub fn is_involution(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| self.image[j] == i)
    }

    pub(crate) fn ensure_domain(&self, alphabet: &Alphabet) -> Result<()> {
        if self.alphabet.same_symbols(alphabet) {
            Ok(())
        } else {
            let outside = alphabet
                .symbols()
                .iter()
                .find(|s| !self.alphabet.contains(s))
                .cloned()
                .unwrap_or_else(|| "?".into());
            Err(Error::InvalidRenaming(format!(
                "symbol `{outside}` is outside the renaming domain"
            )))
        }
    }
}

/// Pointwise renaming of the labels of `t`.
pub fn rename_tree(t: &RegularTree, r: &LetterRenaming) -> Result<RegularTree> {
    r.ensure_domain(t.alphabet())?;
    t.map_labels(t.alphabet().clone(), |s| {
        let image = r.apply(s)?;
        t.alphabet().require(image)
    })
}

/// Equality of the generated trees, via label checks on the reachable part
/// of the product of both generators.
pub fn bisimilar(t1: &RegularTree, t2: &RegularTree) -> Result<bool> {
    t1.alphabet().ensure_same(t2.alphabet())?;
    let mut seen = HashSet::from([(t1.root(), t2.root())]);
    let mut stack = vec![(t1.root(), t2.root())];
    while let Some((a, b)) = stack.pop() {
        if t1.label(a) != t2.label(b) {
            return Ok(false);
        }
        for d in Direction::BOTH {
            let next = (t1.child(a, d), t2.child(b, d));
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    Ok(true)
}

/// Value of the Cantor metric: `0` or `2^-n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Distance {
    Zero,
    /// `2^-n` where `n` is the length of a shortest disagreeing word.
    PowerOfHalf(u32),
}

impl Distance {
    pub fn value(self) -> f64 {
        match self {
            Distance::Zero => 0.0,
            Distance::PowerOfHalf(n) => 0.5f64.powi(n as i32),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Distance::Zero, Distance::Zero) => Ordering::Equal,
            (Distance::Zero, _) => Ordering::Less,
            (_, Distance::Zero) => Ordering::Greater,
            (Distance::PowerOfHalf(a), Distance::PowerOfHalf(b)) => b.cmp(a),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Zero => write!(f, "0"),
            Distance::PowerOfHalf(n) => write!(f, "2^-{n}"),
        }
    }
}

/// Distance between the generated trees, computed exactly by breadth-first
/// search over the product of the generators.
pub fn tree_distance(t1: &RegularTree, t2: &RegularTree, depth_cap: usize) -> Result<Distance> {
    t1.alphabet().ensure_same(t2.alphabet())?;
    let start = (t1.root(), t2.root());
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some(((a, b), depth)) = queue.pop_front() {
        if t1.label(a) != t2.label(b) {
            if depth > depth_cap {
                return Err(Error::DepthCapExceeded {
                    cap: depth_cap,
                    found: depth,
                });
            }
            return Ok(Distance::PowerOfHalf(depth as u32));
        }
        for d in Direction::BOTH {
            let next = (t1.child(a, d), t2.child(b, d));
            if seen.insert(next) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    Ok(Distance::Zero)
}

/// A shortest node word on which the two trees disagree, if any.
pub fn first_disagreement(t1: &RegularTree, t2: &RegularTree) -> Result<Option<NodeWord>> {
    t1.alphabet().ensure_same(t2.alphabet())?;
    let start = (t1.root(), t2.root());
    let mut parent: HashMap<(usize, usize), ((usize, usize), Direction)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = HashSet::from([start]);
    while let Some((a, b)) = queue.pop_front() {
        if t1.label(a) != t2.label(b) {
            let mut word = Vec::new();
            let mut cur = (a, b);
            while let Some(&(prev, d)) = parent.get(&cur) {
                word.push(d);
                cur = prev;
            }
            word.reverse();
            return Ok(Some(NodeWord(word)));
        }
        for d in Direction::BOTH {
            let next = (t1.child(a, d), t2.child(b, d));
            if seen.insert(next) {
                parent.insert(next, ((a, b), d));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// Builds the tree whose rightmost path `2^n` is labelled `spine_label` and
/// whose node `2^n 1` roots `head[n]` for `n < head.len()` and `tail` beyond.
///
/// The spine loops on its last node so all positions past the head share one
/// copy of `tail`. When `tail` is absent the constant `(A,1)` tree is used,
/// so the alphabet must then contain that symbol.
pub fn graft_spine(
    head: &[RegularTree],
    tail: Option<&RegularTree>,
    spine_label: &str,
) -> Result<RegularTree> {
    let alphabet = match (head.first(), tail) {
        (Some(t), _) | (None, Some(t)) => t.alphabet().clone(),
        (None, None) => {
            return Err(Error::InvalidTree(
                "graft_spine needs at least one subtree to fix the alphabet".into(),
            ))
        }
    };
    for t in head.iter().chain(tail) {
        t.alphabet().ensure_same(&alphabet)?;
    }
    let spine = alphabet.require(spine_label)?;
    let default_tail;
    let tail = match tail {
        Some(t) => t.conform_to(&alphabet)?,
        None => {
            default_tail =
                RegularTree::constant(alphabet.clone(), crate::game_langs::GameLabel::ADAM_ONE)?;
            default_tail
        }
    };

    let h = head.len();
    // nodes 0..=h form the spine; subtrees are appended after it
    let mut labels = vec![spine; h + 1];
    let mut children = vec![[0, 0]; h + 1];
    let append = |t: &RegularTree, labels: &mut Vec<usize>, children: &mut Vec<[usize; 2]>| {
        let offset = labels.len();
        labels.extend(t.labels.iter().copied());
        children.extend(t.children.iter().map(|[l, r]| [l + offset, r + offset]));
        offset
    };
    for (i, t) in head.iter().enumerate() {
        let t = t.conform_to(&alphabet)?;
        let root = append(&t, &mut labels, &mut children);
        children[i] = [root, i + 1];
    }
    let tail_root = append(&tail, &mut labels, &mut children);
    children[h] = [tail_root, h];
    RegularTree::from_parts(alphabet, 0, labels, children)
}

/// The tree with root label `label`, left subtree `left` and right
/// subtree `right`.
pub fn join(label: &str, left: &RegularTree, right: &RegularTree) -> Result<RegularTree> {
    let alphabet = left.alphabet().clone();
    right.alphabet().ensure_same(&alphabet)?;
    let right = right.conform_to(&alphabet)?;
    let root = alphabet.require(label)?;
    let mut labels = vec![root];
    let mut children = vec![[1, 1 + left.node_count()]];
    for t in [left, &right] {
        let offset = labels.len();
        labels.extend(t.labels.iter().copied());
        children.extend(t.children.iter().map(|[l, r]| [l + offset, r + offset]));
    }
    RegularTree::from_parts(alphabet, 0, labels, children)
}

/// A pseudo-random generator with at most `max_nodes` nodes, all reachable.
/// Deterministic in `seed`.
pub fn random_regular_tree(alphabet: &Alphabet, max_nodes: usize, seed: u64) -> RegularTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_regular_tree_with(&mut rng, alphabet, max_nodes)
}

pub fn random_regular_tree_with<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: &Alphabet,
    max_nodes: usize,
) -> RegularTree {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..alphabet.len())).collect();
    let mut children = vec![[usize::MAX; 2]; n];
    // a random spanning tree from the root keeps every node reachable
    let mut free: Vec<(usize, usize)> = vec![(0, 0), (0, 1)];
    for v in 1..n {
        let k = rng.gen_range(0..free.len());
        let (parent, slot) = free.swap_remove(k);
        children[parent][slot] = v;
        free.push((v, 0));
        free.push((v, 1));
    }
    free.shuffle(rng);
    for (v, slot) in free {
        children[v][slot] = rng.gen_range(0..n);
    }
    RegularTree::from_parts(alphabet.clone(), 0, labels, children)
        .expect("random generator is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn xy() -> RegularTree {
        RegularTree::from_nodes(
            Alphabet::new(["x", "y"]).unwrap(),
            &[("x", 1, 0), ("y", 1, 1)],
        )
        .unwrap()
    }

    fn w(s: &str) -> NodeWord {
        s.parse().unwrap()
    }

    #[test]
    fn join_places_subtrees() {
        let t = join("b", &xy().map_labels(ab(), |l| Ok(if l == "x" { 0 } else { 1 })).unwrap(), &RegularTree::constant(ab(), "a").unwrap()).unwrap();
        assert_eq!(t.label_at(&w("")), "b");
        assert_eq!(t.label_at(&w("1")), "a");
        assert_eq!(t.label_at(&w("11")), "b");
        assert_eq!(t.label_at(&w("222")), "a");
        assert!(join("z", &t, &t).is_err());
    }

    #[test]
    fn label_at_examples() {
        let all_a = RegularTree::constant(ab(), "a").unwrap();
        assert_eq!(all_a.label_at(&w("121")), "a");
        let t = xy();
        assert_eq!(t.label_at(&w("")), "x");
        assert_eq!(t.label_at(&w("1")), "y");
        assert_eq!(t.label_at(&w("2")), "x");
        assert_eq!(t.label_at(&w("2212")), "y");
    }

    #[test]
    fn node_word_parsing() {
        assert_eq!(w("").len(), 0);
        assert_eq!(w("1221").to_string(), "1221");
        assert!("13".parse::<NodeWord>().is_err());
    }

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn from_parts_trims_unreachable_nodes() {
        let t = RegularTree::from_parts(ab(), 1, vec![0, 1, 0], vec![[0, 0], [1, 2], [2, 2]])
            .unwrap();
        assert_eq!(t.node_count(), 2);
        assert_eq!(t.label(0), "b");
        t.validate().unwrap();
    }

    #[test]
    fn from_parts_rejects_dangling_edges() {
        assert!(RegularTree::from_parts(ab(), 0, vec![0], vec![[0, 3]]).is_err());
        assert!(RegularTree::from_parts(ab(), 0, vec![5], vec![[0, 0]]).is_err());
    }

    #[test]
    fn distance_examples() {
        let a = RegularTree::constant(ab(), "a").unwrap();
        let b = RegularTree::constant(ab(), "b").unwrap();
        assert_eq!(tree_distance(&a, &a, 10).unwrap(), Distance::Zero);
        assert_eq!(tree_distance(&a, &b, 10).unwrap(), Distance::PowerOfHalf(0));
        assert_eq!(tree_distance(&a, &b, 10).unwrap().value(), 1.0);
        // agrees on ε, 1, 2; node 11 is labelled b
        let deep = RegularTree::from_nodes(ab(), &[("a", 1, 2), ("a", 3, 2), ("a", 2, 2), ("b", 3, 3)])
            .unwrap();
        let d = tree_distance(&a, &deep, 10).unwrap();
        assert_eq!(d, Distance::PowerOfHalf(2));
        assert_eq!(d.value(), 0.25);
        assert_eq!(first_disagreement(&a, &deep).unwrap(), Some(w("11")));
    }

    #[test]
    fn distance_depth_cap_is_enforced() {
        let a = RegularTree::constant(ab(), "a").unwrap();
        let deep = RegularTree::from_nodes(ab(), &[("a", 1, 2), ("a", 3, 2), ("a", 2, 2), ("b", 3, 3)])
            .unwrap();
        assert!(matches!(
            tree_distance(&a, &deep, 1),
            Err(Error::DepthCapExceeded { cap: 1, found: 2 })
        ));
    }

    #[test]
    fn distance_rejects_alphabet_mismatch() {
        let a = RegularTree::constant(ab(), "a").unwrap();
        assert!(matches!(
            tree_distance(&a, &xy(), 4),
            Err(Error::AlphabetMismatch(_))
        ));
        assert!(bisimilar(&a, &xy()).is_err());
    }

    #[test]
    fn bisimilar_examples() {
        let a = RegularTree::constant(ab(), "a").unwrap();
        let b = RegularTree::constant(ab(), "b").unwrap();
        let a2 = RegularTree::from_nodes(ab(), &[("a", 1, 1), ("a", 0, 1)]).unwrap();
        assert!(bisimilar(&a, &a).unwrap());
        assert!(bisimilar(&a, &a2).unwrap());
        assert!(!bisimilar(&a, &b).unwrap());
    }

    #[test]
    fn conform_to_reorders_alphabet() {
        let ba = Alphabet::new(["b", "a"]).unwrap();
        let t = RegularTree::from_nodes(ab(), &[("a", 1, 0), ("b", 0, 1)]).unwrap();
        let u = t.conform_to(&ba).unwrap();
        assert_eq!(u.alphabet(), &ba);
        assert!(bisimilar(&t, &u).unwrap());
    }

    #[test]
    fn renaming_examples() {
        let r = LetterRenaming::swaps(ab(), &[("a", "b")]).unwrap();
        assert!(r.is_involution());
        let a = RegularTree::constant(ab(), "a").unwrap();
        let renamed = rename_tree(&a, &r).unwrap();
        assert_eq!(renamed.label_at(&w("12")), "b");
        let back = rename_tree(&renamed, &r).unwrap();
        assert!(bisimilar(&a, &back).unwrap());
        assert!(rename_tree(&xy(), &r).is_err());
    }

    #[test]
    fn renaming_must_be_bijective() {
        let abc = Alphabet::new(["a", "b", "c"]).unwrap();
        assert!(LetterRenaming::new(abc.clone(), &[("a", "b")]).is_err());
        let cycle = LetterRenaming::new(abc, &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        assert!(!cycle.is_involution());
    }

    #[test]
    fn graft_spine_examples() {
        let ab = ab();
        let ta = RegularTree::constant(ab.clone(), "a").unwrap();
        let tb = RegularTree::constant(ab.clone(), "b").unwrap();
        let g = graft_spine(std::slice::from_ref(&ta), Some(&tb), "b").unwrap();
        assert_eq!(g.label_at(&w("")), "b");
        assert_eq!(g.label_at(&w("1")), "a");
        assert_eq!(g.label_at(&w("1212")), "a");
        for n in 1..8 {
            let mut word = NodeWord::rightmost(n);
            assert_eq!(g.label_at(&word), "b");
            word = word.child(Direction::Left);
            assert_eq!(g.label_at(&word.child(Direction::Right)), "b");
        }
        assert!(graft_spine(&[], None, "a").is_err());
        // absent tail requires (A,1) in the alphabet
        assert!(graft_spine(&[ta], None, "a").is_err());
    }

    #[test]
    fn random_trees_are_deterministic() {
        let s = ab();
        let single = random_regular_tree(&s, 1, 3);
        assert_eq!(single.node_count(), 1);
        assert_eq!(single.children(0), [0, 0]);
        assert_eq!(random_regular_tree(&s, 8, 42), random_regular_tree(&s, 8, 42));
    }

    #[test]
    fn random_trees_pass_invariant_checker() {
        let s = Alphabet::new(["a", "b", "c"]).unwrap();
        for seed in 0..1000 {
            let t = random_regular_tree(&s, 8, seed);
            assert!(t.node_count() <= 8);
            t.validate().unwrap();
        }
    }
}
