//! Document formats: JSON for trees, automata, codes and results; a
//! line-oriented text format for parity games; DOT for visualisation.

mod dot;
mod pgsolver;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automata::{Apta, Npta, PosBool, Transition};
use crate::error::{Error, Result};
use crate::game_langs::{BorelCode, GameLabel};
use crate::parity_games::{SolveResult, Strategy};
use crate::trees::{Alphabet, Direction, NodeWord, RegularTree};

pub use dot::to_dot;
pub use pgsolver::{parse_game, write_game};

/// Node identifiers in tree documents may be numbers or strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeId {
    Num(u64),
    Name(String),
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Num(n) => write!(f, "{n}"),
            NodeId::Name(s) => write!(f, "\"{s}\""),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: NodeId,
    pub label: String,
    pub left: NodeId,
    pub right: NodeId,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub alphabet: Vec<String>,
    pub root: NodeId,
    pub nodes: Vec<NodeDoc>,
}

impl TreeDoc {
    pub fn from_tree(t: &RegularTree) -> Self {
        let id = |v: usize| NodeId::Num(v as u64);
        Self {
            alphabet: t.alphabet().symbols().to_vec(),
            root: id(t.root()),
            nodes: t
                .nodes()
                .map(|v| {
                    let [l, r] = t.children(v);
                    NodeDoc {
                        id: id(v),
                        label: t.label(v).to_string(),
                        left: id(l),
                        right: id(r),
                    }
                })
                .collect(),
        }
    }

    pub fn to_tree(&self) -> Result<RegularTree> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let mut index: HashMap<&NodeId, usize> = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if index.insert(&n.id, i).is_some() {
                return Err(Error::InvalidTree(format!("duplicate node id {}", n.id)));
            }
        }
        let lookup = |id: &NodeId| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidTree(format!("unknown node id {id}")))
        };
        let labels = self
            .nodes
            .iter()
            .map(|n| alphabet.require(&n.label))
            .collect::<Result<Vec<_>>>()?;
        let children = self
            .nodes
            .iter()
            .map(|n| Ok([lookup(&n.left)?, lookup(&n.right)?]))
            .collect::<Result<Vec<_>>>()?;
        RegularTree::from_parts(alphabet, lookup(&self.root)?, labels, children)
    }
}

pub fn parse_tree(json: &str) -> Result<RegularTree> {
    serde_json::from_str::<TreeDoc>(json)?.to_tree()
}

pub fn tree_to_json(t: &RegularTree) -> String {
    to_pretty(&TreeDoc::from_tree(t))
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialise")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: String,
    pub letter: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NptaDoc {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub transitions: Vec<TransitionDoc>,
    pub ranks: BTreeMap<String, u32>,
}

fn state_lookup(states: &[String]) -> impl Fn(&str) -> Result<usize> + '_ {
    move |name| {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::InvalidAutomaton(format!("unknown state `{name}`")))
    }
}

fn rank_table(states: &[String], ranks: &BTreeMap<String, u32>) -> Result<Vec<u32>> {
    if let Some(extra) = ranks.keys().find(|k| !states.contains(k)) {
        return Err(Error::InvalidAutomaton(format!("rank given for unknown state `{extra}`")));
    }
    states
        .iter()
        .map(|s| {
            ranks
                .get(s)
                .copied()
                .ok_or_else(|| Error::InvalidAutomaton(format!("state `{s}` has no rank")))
        })
        .collect()
}

fn rank_map(states: &[String], ranks: &[u32]) -> BTreeMap<String, u32> {
    states.iter().cloned().zip(ranks.iter().copied()).collect()
}

impl NptaDoc {
    pub fn from_npta(a: &Npta) -> Self {
        let name = |q: usize| a.states()[q].clone();
        Self {
            alphabet: a.alphabet().symbols().to_vec(),
            states: a.states().to_vec(),
            initial: name(a.initial()),
            transitions: a
                .transitions()
                .iter()
                .map(|t| TransitionDoc {
                    from: name(t.from),
                    letter: a.alphabet().symbol(t.letter).to_string(),
                    left: name(t.left),
                    right: name(t.right),
                })
                .collect(),
            ranks: rank_map(a.states(), a.ranks()),
        }
    }

    pub fn to_npta(&self) -> Result<Npta> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let state = state_lookup(&self.states);
        let transitions = self
            .transitions
            .iter()
            .map(|t| {
                Ok(Transition {
                    from: state(&t.from)?,
                    letter: alphabet.require(&t.letter)?,
                    left: state(&t.left)?,
                    right: state(&t.right)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let ranks = rank_table(&self.states, &self.ranks)?;
        Npta::new(alphabet, self.states.clone(), state(&self.initial)?, transitions, ranks)
    }
}

pub fn parse_npta(json: &str) -> Result<Npta> {
    serde_json::from_str::<NptaDoc>(json)?.to_npta()
}

pub fn npta_to_json(a: &Npta) -> String {
    to_pretty(&NptaDoc::from_npta(a))
}

/// Transition formula of an alternating automaton.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
pub enum FormulaDoc {
    True,
    False,
    Atom { dir: u8, state: String },
    And { args: Vec<FormulaDoc> },
    Or { args: Vec<FormulaDoc> },
}

impl FormulaDoc {
    fn from_posbool(f: &PosBool, states: &[String]) -> Self {
        let many = |xs: &[PosBool]| xs.iter().map(|x| Self::from_posbool(x, states)).collect();
        match f {
            PosBool::True => FormulaDoc::True,
            PosBool::False => FormulaDoc::False,
            PosBool::Atom(d, q) => FormulaDoc::Atom {
                dir: d.digit(),
                state: states[*q].clone(),
            },
            PosBool::And(xs) => FormulaDoc::And { args: many(xs) },
            PosBool::Or(xs) => FormulaDoc::Or { args: many(xs) },
        }
    }

    fn to_posbool(&self, state: &impl Fn(&str) -> Result<usize>) -> Result<PosBool> {
        let many = |xs: &[FormulaDoc]| xs.iter().map(|x| x.to_posbool(state)).collect::<Result<Vec<_>>>();
        Ok(match self {
            FormulaDoc::True => PosBool::True,
            FormulaDoc::False => PosBool::False,
            FormulaDoc::Atom { dir, state: s } => PosBool::Atom(
                Direction::from_digit(*dir)
                    .ok_or_else(|| Error::InvalidAutomaton(format!("direction {dir} is not 1 or 2")))?,
                state(s)?,
            ),
            FormulaDoc::And { args } => PosBool::And(many(args)?),
            FormulaDoc::Or { args } => PosBool::Or(many(args)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaDoc {
    pub state: String,
    pub letter: String,
    pub formula: FormulaDoc,
}

/// Entries absent from `delta` are `false`; `false` entries are omitted on
/// output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AptaDoc {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub delta: Vec<DeltaDoc>,
    pub ranks: BTreeMap<String, u32>,
}

impl AptaDoc {
    pub fn from_apta(k: &Apta) -> Self {
        let sigma = k.alphabet().len();
        let mut delta = Vec::new();
        for q in 0..k.state_count() {
            for l in 0..sigma {
                let f = k.delta(q, l);
                if *f != PosBool::False {
                    delta.push(DeltaDoc {
                        state: k.states()[q].clone(),
                        letter: k.alphabet().symbol(l).to_string(),
                        formula: FormulaDoc::from_posbool(f, k.states()),
                    });
                }
            }
        }
        Self {
            alphabet: k.alphabet().symbols().to_vec(),
            states: k.states().to_vec(),
            initial: k.states()[k.initial()].clone(),
            delta,
            ranks: rank_map(k.states(), k.ranks()),
        }
    }

    pub fn to_apta(&self) -> Result<Apta> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let state = state_lookup(&self.states);
        let sigma = alphabet.len();
        let mut delta = vec![None; self.states.len() * sigma];
        for d in &self.delta {
            let slot = state(&d.state)? * sigma + alphabet.require(&d.letter)?;
            if delta[slot].is_some() {
                return Err(Error::InvalidAutomaton(format!(
                    "two formulas for state `{}` and letter `{}`",
                    d.state, d.letter
                )));
            }
            delta[slot] = Some(d.formula.to_posbool(&state)?);
        }
        let delta = delta.into_iter().map(|f| f.unwrap_or(PosBool::False)).collect();
        let ranks = rank_table(&self.states, &self.ranks)?;
        Apta::new(alphabet, self.states.clone(), state(&self.initial)?, delta, ranks)
    }
}

pub fn parse_apta(json: &str) -> Result<Apta> {
    serde_json::from_str::<AptaDoc>(json)?.to_apta()
}

pub fn apta_to_json(k: &Apta) -> String {
    to_pretty(&AptaDoc::from_apta(k))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CodeDoc {
    Cyl {
        assign: BTreeMap<String, String>,
    },
    Neg {
        of: Box<CodeDoc>,
    },
    Union {
        head: Vec<CodeDoc>,
        #[serde(default)]
        tail: Option<Box<CodeDoc>>,
    },
}

impl CodeDoc {
    pub fn from_code(c: &BorelCode) -> Self {
        match c {
            BorelCode::Cyl(assign) => CodeDoc::Cyl {
                assign: assign.iter().map(|(w, l)| (w.to_string(), l.to_string())).collect(),
            },
            BorelCode::Neg(c) => CodeDoc::Neg {
                of: Box::new(Self::from_code(c)),
            },
            BorelCode::Union { head, tail } => CodeDoc::Union {
                head: head.iter().map(Self::from_code).collect(),
                tail: tail.as_deref().map(|t| Box::new(Self::from_code(t))),
            },
        }
    }

    pub fn to_code(&self) -> Result<BorelCode> {
        let code = match self {
            CodeDoc::Cyl { assign } => BorelCode::Cyl(
                assign
                    .iter()
                    .map(|(w, l)| {
                        let w: NodeWord = w
                            .parse()
                            .map_err(|_| Error::InvalidCode(format!("`{w}` is not a word over 1, 2")))?;
                        Ok((w, l.parse::<GameLabel>()?))
                    })
                    .collect::<Result<_>>()?,
            ),
            CodeDoc::Neg { of } => BorelCode::Neg(Box::new(of.to_code()?)),
            CodeDoc::Union { head, tail } => BorelCode::Union {
                head: head.iter().map(CodeDoc::to_code).collect::<Result<_>>()?,
                tail: tail.as_deref().map(CodeDoc::to_code).transpose()?.map(Box::new),
            },
        };
        code.validate()?;
        Ok(code)
    }
}

pub fn parse_code(json: &str) -> Result<BorelCode> {
    serde_json::from_str::<CodeDoc>(json)?.to_code()
}

pub fn code_to_json(c: &BorelCode) -> String {
    to_pretty(&CodeDoc::from_code(c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveDoc {
    pub eve_region: Vec<usize>,
    pub adam_region: Vec<usize>,
    pub eve_strategy: BTreeMap<usize, usize>,
    pub adam_strategy: BTreeMap<usize, usize>,
}

impl SolveDoc {
    pub fn from_result(r: &SolveResult) -> Self {
        Self {
            eve_region: r.eve_region.iter().copied().collect(),
            adam_region: r.adam_region.iter().copied().collect(),
            eve_strategy: r.eve_strategy.choice.clone(),
            adam_strategy: r.adam_strategy.choice.clone(),
        }
    }

    pub fn to_result(&self) -> SolveResult {
        use crate::parity_games::Player;
        SolveResult {
            eve_region: self.eve_region.iter().copied().collect(),
            adam_region: self.adam_region.iter().copied().collect(),
            eve_strategy: Strategy {
                player: Player::Eve,
                choice: self.eve_strategy.clone(),
            },
            adam_strategy: Strategy {
                player: Player::Adam,
                choice: self.adam_strategy.clone(),
            },
        }
    }
}

pub fn solve_result_to_json(r: &SolveResult) -> String {
    to_pretty(&SolveDoc::from_result(r))
}
