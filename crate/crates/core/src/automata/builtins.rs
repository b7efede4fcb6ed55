use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::game_langs::{duality, game_alphabet};
use crate::trees::Alphabet;

use super::{rename_automaton, Npta};

/// The alphabet `{0, 1}`.
pub fn binary_alphabet() -> Alphabet {
    Alphabet::new(["0", "1"]).expect("static alphabet")
}

/// Named automata with fixed transition tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Some path carries infinitely many 1s (Büchi).
    L,
    /// Every path carries finitely many 1s (deterministic, index (0,1)).
    M01,
    /// Every path has an even limsup over labels `i..=k`.
    Mik(u32, u32),
    /// Finitely many 1s on the rightmost branch, deterministic co-Büchi form.
    KDet,
    /// Same language as `KDet`, nondeterministic Büchi form.
    KBuchi,
    /// Eve wins the induced game.
    W01,
    /// Adam forces eventually-only-1s in the induced game.
    W01Prime,
    /// Exactly one path carries infinitely many 1s.
    UbBin,
}

impl Builtin {
    pub const ALL_NAMES: [&'static str; 8] =
        ["L", "M01", "Mik(i,k)", "K-det", "K-buchi", "W01", "W01-prime", "UBbin"];

    pub fn automaton(self) -> Result<Npta> {
        match self {
            Builtin::L => l_automaton(),
            Builtin::M01 => parity_language(0, 1),
            Builtin::Mik(i, k) => parity_language(i, k),
            Builtin::KDet => k_det(),
            Builtin::KBuchi => k_buchi(),
            Builtin::W01 => w01(),
            Builtin::W01Prime => rename_automaton(&w01()?, &duality()),
            Builtin::UbBin => ub_bin(),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::L => write!(f, "L"),
            Builtin::M01 => write!(f, "M01"),
            Builtin::Mik(i, k) => write!(f, "Mik({i},{k})"),
            Builtin::KDet => write!(f, "K-det"),
            Builtin::KBuchi => write!(f, "K-buchi"),
            Builtin::W01 => write!(f, "W01"),
            Builtin::W01Prime => write!(f, "W01-prime"),
            Builtin::UbBin => write!(f, "UBbin"),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownBuiltin(s.to_string());
        Ok(match s {
            "L" => Builtin::L,
            "M01" => Builtin::M01,
            "K-det" => Builtin::KDet,
            "K-buchi" => Builtin::KBuchi,
            "W01" => Builtin::W01,
            "W01-prime" => Builtin::W01Prime,
            "UBbin" => Builtin::UbBin,
            _ => {
                let args = s
                    .strip_prefix("Mik(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(unknown)?;
                let (i, k) = args.split_once(',').ok_or_else(unknown)?;
                let i: u32 = i.trim().parse().map_err(|_| unknown())?;
                let k: u32 = k.trim().parse().map_err(|_| unknown())?;
                if i > 1 || k < i {
                    return Err(Error::UnknownBuiltin(format!(
                        "{s}: need i in {{0,1}} and k >= i"
                    )));
                }
                Builtin::Mik(i, k)
            }
        })
    }
}

/// Looks up a builtin automaton by name.
pub fn builtin(name: &str) -> Result<Npta> {
    name.parse::<Builtin>()?.automaton()
}

fn l_automaton() -> Result<Npta> {
    let mut rows = Vec::new();
    for s in ["q", "p"] {
        rows.push((s, "0", "q", "T"));
        rows.push((s, "0", "T", "q"));
        rows.push((s, "1", "p", "T"));
        rows.push((s, "1", "T", "p"));
    }
    rows.push(("T", "0", "T", "T"));
    rows.push(("T", "1", "T", "T"));
    Npta::from_table(binary_alphabet(), &[("q", 1), ("p", 2), ("T", 2)], "q", &rows)
}

/// States `i..=k`; state `l` reading `σ` sends `σ` to both children and
/// has rank `l`.
fn parity_language(i: u32, k: u32) -> Result<Npta> {
    if i > 1 || k < i {
        return Err(Error::UnknownBuiltin(format!("Mik({i},{k})")));
    }
    let names: Vec<String> = (i..=k).map(|l| l.to_string()).collect();
    let alphabet = Alphabet::new(names.clone())?;
    let states: Vec<(&str, u32)> = names.iter().map(|s| s.as_str()).zip(i..=k).collect();
    let rows: Vec<(&str, &str, &str, &str)> = names
        .iter()
        .flat_map(|l| names.iter().map(move |s| (l.as_str(), s.as_str(), s.as_str(), s.as_str())))
        .collect();
    Npta::from_table(alphabet, &states, &names[0], &rows)
}

fn k_det() -> Result<Npta> {
    let mut rows = Vec::new();
    for s in ["0", "1"] {
        rows.push((s, "0", "T", "0"));
        rows.push((s, "1", "T", "1"));
    }
    rows.push(("T", "0", "T", "T"));
    rows.push(("T", "1", "T", "T"));
    Npta::from_table(binary_alphabet(), &[("0", 0), ("1", 1), ("T", 0)], "0", &rows)
}

fn k_buchi() -> Result<Npta> {
    let rows = [
        ("q", "0", "T", "q"),
        ("q", "1", "T", "q"),
        ("q", "0", "T", "p"),
        ("q", "1", "T", "p"),
        ("p", "0", "T", "p"),
        ("T", "0", "T", "T"),
        ("T", "1", "T", "T"),
    ];
    Npta::from_table(binary_alphabet(), &[("q", 1), ("p", 2), ("T", 2)], "q", &rows)
}

fn w01() -> Result<Npta> {
    let alphabet = game_alphabet();
    let mut rows = Vec::new();
    for l in ["0", "1"] {
        for m in ["0", "1"] {
            let forall: &'static str = if m == "0" { "(A,0)" } else { "(A,1)" };
            let exists: &'static str = if m == "0" { "(E,0)" } else { "(E,1)" };
            rows.push((l, forall, m, m));
            rows.push((l, exists, m, "T"));
            rows.push((l, exists, "T", m));
        }
    }
    for s in ["(E,0)", "(E,1)", "(A,0)", "(A,1)"] {
        rows.push(("T", s, "T", "T"));
    }
    Npta::from_table(alphabet, &[("0", 0), ("1", 1), ("T", 0)], "0", &rows)
}

/// Guesses the unique bad path with on-path states `s0`/`s1` (rank 1/2,
/// remembering the last label) and sends every sibling subtree to the
/// deterministic no-bad-path checker `c0`/`c1` (rank 0/1).
fn ub_bin() -> Result<Npta> {
    let mut rows = Vec::new();
    for from in ["s0", "s1"] {
        rows.push((from, "0", "s0", "c0"));
        rows.push((from, "0", "c0", "s0"));
        rows.push((from, "1", "s1", "c1"));
        rows.push((from, "1", "c1", "s1"));
    }
    for from in ["c0", "c1"] {
        rows.push((from, "0", "c0", "c0"));
        rows.push((from, "1", "c1", "c1"));
    }
    Npta::from_table(
        binary_alphabet(),
        &[("s0", 1), ("s1", 2), ("c0", 0), ("c1", 1)],
        "s0",
        &rows,
    )
}
