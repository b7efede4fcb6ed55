//! Command implementations behind the `gtl` binary.
//!
//! Every command returns its exit status: `0` success, `1` negative
//! decision. Errors map to `2` (bad input) or `3` (violated precondition)
//! through [`exit_code`].

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gtl_core::automata::{accepts, builtin, is_empty, member_alt, sample_language, witness, Apta, Npta};
use gtl_core::formats::{
    apta_to_json, npta_to_json, parse_apta, parse_code, parse_game, parse_npta, parse_tree,
    solve_result_to_json, to_dot, tree_to_json, write_game, AptaDoc, TreeDoc,
};
use gtl_core::game_langs::{duality, eval_borel, game_of_tree, in_w01, in_w01_prime, reduce_fb};
use gtl_core::parity_games::{solve, ParityGame, Player, Strategy};
use gtl_core::separation::{bound_m, synthesize_separator_at, verify_separation, MAX_LEVEL};
use gtl_core::trees::{first_disagreement, rename_tree, tree_distance, RegularTree};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;

/// A precondition of the requested construction does not hold.
#[derive(Debug)]
pub struct Precondition(pub String);

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "precondition failed: {}", self.0)
    }
}

impl std::error::Error for Precondition {}

/// Exit status for a failed command.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    use gtl_core::Error as E;
    for cause in err.chain() {
        if cause.is::<Precondition>() {
            return EXIT_PRECONDITION;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::NotBuchi(_)
                | E::NotDisjoint(_)
                | E::EmptyLanguage
                | E::UnsupportedProduct(_)
                | E::LevelTooLarge { .. }
                | E::Overflow(..) => EXIT_PRECONDITION,
                _ => EXIT_INPUT,
            };
        }
    }
    EXIT_INPUT
}

#[derive(Parser, Debug)]
#[command(name = "gtl", version, about = "Parity games, tree automata and game tree languages on regular trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Eve,
    Adam,
}

impl From<Side> for Player {
    fn from(s: Side) -> Self {
        match s {
            Side::Eve => Player::Eve,
            Side::Adam => Player::Adam,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a parity game given in the text format.
    Solve {
        #[arg(long)]
        game: PathBuf,
        /// Also write a DOT rendering with coloured regions.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Decide membership of a tree in a nondeterministic automaton.
    Member {
        #[arg(long)]
        automaton: String,
        #[arg(long)]
        tree: PathBuf,
    },
    /// Decide membership of a tree in an alternating automaton.
    MemberAlt {
        #[arg(long)]
        automaton: String,
        #[arg(long)]
        tree: PathBuf,
    },
    /// Decide emptiness; a witness tree is emitted when non-empty.
    Empty {
        #[arg(long)]
        automaton: String,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Report membership in W01 and W01' for a game-labelled tree.
    Gtl {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Apply the reduction of a coded Borel set to a tree.
    Reduce {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Synthesise and verify a separator for two disjoint Büchi automata.
    Separate {
        /// Give twice: the language to contain, then the one to avoid.
        #[arg(long, num_args = 1, required = true)]
        automaton: Vec<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Hierarchy level to emit instead of the bound M.
        #[arg(long)]
        level: Option<usize>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Dual game (players swapped, priorities shifted) or dual tree.
    Dual {
        #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
        game: Option<PathBuf>,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Play the game of a tree against the solver.
    Play {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long = "as", value_enum)]
        side: Side,
    },
    /// Sample distinct members of an automaton's language.
    Sample {
        #[arg(long)]
        automaton: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Print a builtin automaton.
    Builtin {
        /// L, M01, Mik(i,k), K-det, K-buchi, W01, W01-prime or UBbin.
        name: String,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Distance between two trees.
    Distance {
        #[arg(long, num_args = 1, required = true)]
        tree: Vec<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load_tree(path: &Path) -> Result<RegularTree> {
    parse_tree(&read(path)?).with_context(|| format!("in tree document {}", path.display()))
}

/// `builtin:NAME` or a path to an automaton document.
pub fn load_npta(source: &str) -> Result<Npta> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return Ok(builtin(name)?);
    }
    let path = Path::new(source);
    parse_npta(&read(path)?).with_context(|| format!("in automaton document {source}"))
}

/// Alternating documents, or any nondeterministic source embedded.
pub fn load_apta(source: &str) -> Result<Apta> {
    if source.starts_with("builtin:") {
        return Ok(Apta::from_npta(&load_npta(source)?));
    }
    let text = read(Path::new(source))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("in automaton document {source}"))?;
    if value.get("transitions").is_some() {
        return Ok(Apta::from_npta(&load_npta(source)?));
    }
    parse_apta(&text).with_context(|| format!("in automaton document {source}"))
}

pub fn load_game(path: &Path) -> Result<ParityGame> {
    parse_game(&read(path)?).with_context(|| format!("in game file {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => fs::write(path, ensure_newline(text))
            .with_context(|| format!("cannot write {}", path.display())),
        None => Ok(write!(out, "{}", ensure_newline(text))?),
    }
}

fn ensure_newline(text: &str) -> String {
    if text.ends_with('\n') {
        text.to_string()
    } else {
        format!("{text}\n")
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise")
}

/// Runs one command. `input` feeds interactive play.
pub fn run(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Solve { game, dot, output } => {
            let g = load_game(&game)?;
            let result = solve(&g);
            if let Some(path) = dot {
                fs::write(&path, to_dot(&g, Some(&result)))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            emit(&solve_result_to_json(&result), output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Member { automaton, tree } => {
            let a = load_npta(&automaton)?;
            let accepted = accepts(&a, &load_tree(&tree)?)?;
            writeln!(out, "{}", json!({ "accepted": accepted }))?;
            Ok(if accepted { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::MemberAlt { automaton, tree } => {
            let k = load_apta(&automaton)?;
            let accepted = member_alt(&k, &load_tree(&tree)?)?;
            writeln!(out, "{}", json!({ "accepted": accepted }))?;
            Ok(if accepted { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Empty { automaton, output } => {
            let a = load_npta(&automaton)?;
            match witness(&a) {
                None => {
                    debug_assert!(is_empty(&a));
                    writeln!(out, "empty")?;
                    Ok(EXIT_OK)
                }
                Some(t) => {
                    writeln!(out, "nonempty")?;
                    emit(&tree_to_json(&t), output.as_deref(), out)?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Gtl { tree } => {
            let t = load_tree(&tree)?;
            let (w, wp) = (in_w01(&t)?, in_w01_prime(&t)?);
            if w && wp {
                bail!("tree reported in both W01 and W01'; the languages are disjoint");
            }
            writeln!(out, "{}", json!({ "in_W01": w, "in_W01_prime": wp }))?;
            Ok(EXIT_OK)
        }
        Command::Reduce { code, tree, output } => {
            let c = parse_code(&read(&code)?).with_context(|| format!("in code document {}", code.display()))?;
            let u = load_tree(&tree)?;
            let image = reduce_fb(&c, &u)?;
            let holds = eval_borel(&c, &u)?;
            let (w, wp) = (in_w01(&image)?, in_w01_prime(&image)?);
            let summary = json!({
                "eval": holds,
                "in_W01": w,
                "in_W01_prime": wp,
                "nodes": image.node_count(),
            });
            match output.as_deref() {
                Some(path) => {
                    emit(&tree_to_json(&image), Some(path), out)?;
                    writeln!(out, "{summary}")?;
                }
                None => {
                    emit(&tree_to_json(&image), None, out)?;
                    eprintln!("{summary}");
                }
            }
            let consistent = if holds { w } else { wp };
            Ok(if consistent { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Separate {
            automaton,
            samples,
            seed,
            level,
            output,
        } => separate(&automaton, samples, seed, level, output.as_deref(), out),
        Command::Dual { game, tree, output } => {
            let text = match (game, tree) {
                (Some(g), _) => write_game(&load_game(&g)?.dual()),
                (None, Some(t)) => tree_to_json(&rename_tree(&load_tree(&t)?, &duality())?),
                (None, None) => bail!("give --game or --tree"),
            };
            emit(&text, output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Play { tree, side } => {
            let t = load_tree(&tree)?;
            let mut session = PlaySession::new(&t, Some(side.into()))?;
            match session.run(input, out)? {
                Some(winner) => {
                    writeln!(out, "winner: {winner}")?;
                    Ok(EXIT_OK)
                }
                None => Ok(EXIT_INPUT),
            }
        }
        Command::Sample {
            automaton,
            samples,
            seed,
            output,
        } => {
            let a = load_npta(&automaton)?;
            let s = sample_language(&a, samples, seed)?;
            let trees: Vec<TreeDoc> = s.trees.iter().map(TreeDoc::from_tree).collect();
            let doc = json!({
                "requested": s.requested,
                "found": trees.len(),
                "short": s.short,
                "seed": seed,
                "trees": trees,
            });
            emit(&pretty(&doc), output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Builtin { name, output } => {
            emit(&npta_to_json(&builtin(&name)?), output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Distance { tree } => {
            let [a, b] = tree.as_slice() else {
                bail!("give exactly two --tree arguments");
            };
            let (t1, t2) = (load_tree(a)?, load_tree(b)?);
            let cap = t1.node_count() * t2.node_count() + 1;
            let d = tree_distance(&t1, &t2, cap)?;
            let at = first_disagreement(&t1, &t2)?.map(|w| w.to_string());
            writeln!(
                out,
                "{}",
                json!({ "distance": d.to_string(), "value": d.value(), "first_disagreement": at })
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn separate(
    automata: &[String],
    samples: usize,
    seed: u64,
    level: Option<usize>,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8> {
    let [a, b] = automata else {
        bail!("give exactly two --automaton arguments");
    };
    let (a, b) = (load_npta(a)?, load_npta(b)?);
    let m = bound_m(a.state_count(), b.state_count())?;
    let level = match level {
        Some(l) => l,
        None => usize::try_from(m).ok().filter(|&l| l <= MAX_LEVEL).ok_or_else(|| {
            Precondition(format!("bound M = {m} exceeds {MAX_LEVEL}; choose --level"))
        })?,
    };
    let k = match synthesize_separator_at(&a, &b, level) {
        Ok(k) => k,
        Err(gtl_core::Error::NotDisjoint(t)) => {
            writeln!(out, "{}", json!({ "error": "languages are not disjoint", "witness": TreeDoc::from_tree(&t) }))?;
            return Ok(EXIT_PRECONDITION);
        }
        Err(e) => return Err(e.into()),
    };
    let report = verify_separation(&k, &a, &b, samples, seed)?;
    let report_json = serde_json::to_value(&report)?;
    let doc = match output {
        Some(path) => {
            emit(&apta_to_json(&k), Some(path), out)?;
            json!({ "bound": m, "level": level, "report": report_json })
        }
        None => json!({
            "bound": m,
            "level": level,
            "separator": AptaDoc::from_apta(&k),
            "report": report_json,
        }),
    };
    writeln!(out, "{}", pretty(&doc))?;
    Ok(if report.pass { EXIT_OK } else { EXIT_NEGATIVE })
}

/// An interactive play of `G(t)`. The engine follows the solver's
/// strategies; the play ends once a position repeats, and the winner is
/// read off the maximal priority on the closed cycle.
pub struct PlaySession {
    pub game: ParityGame,
    pub current: usize,
    /// `None`: the engine plays both sides.
    pub human: Option<Player>,
    pub engine_strategy: [Strategy; 2],
    pub transcript: Vec<usize>,
}

impl PlaySession {
    pub fn new(t: &RegularTree, human: Option<Player>) -> Result<Self> {
        let game = game_of_tree(t)?;
        let solution = solve(&game);
        // outside its winning region a player still needs a move
        let complete = |p: Player| {
            let mut s = solution.strategy(p).clone();
            for v in game.positions().filter(|&v| game.owner(v) == p) {
                if let Some(&first) = game.successors(v).first() {
                    s.choice.entry(v).or_insert(first);
                }
            }
            s
        };
        let engine_strategy = [complete(Player::Eve), complete(Player::Adam)];
        Ok(Self {
            current: 0,
            human,
            engine_strategy,
            transcript: vec![0],
            game,
        })
    }

    fn describe(&self, v: usize) -> String {
        format!(
            "node {v} ({}, priority {})",
            self.game.owner(v),
            self.game.priority(v)
        )
    }

    /// Plays until a cycle closes. Returns the winner, or `None` when the
    /// input ended first (the transcript is printed).
    pub fn run(&mut self, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<Option<Player>> {
        let mut seen: HashMap<usize, usize> = HashMap::from([(self.current, 0)]);
        writeln!(out, "start at {}", self.describe(self.current))?;
        loop {
            let v = self.current;
            let owner = self.game.owner(v);
            let succ = self.game.successors(v).to_vec();
            let next = if self.human == Some(owner) {
                match self.ask(input, out, &succ)? {
                    Some(n) => n,
                    None => {
                        writeln!(out, "input ended; transcript: {:?}", self.transcript)?;
                        return Ok(None);
                    }
                }
            } else {
                let n = self.engine_strategy[owner.index()]
                    .get(v)
                    .ok_or_else(|| anyhow!("no move at {v}"))?;
                let dir = if succ[0] == n { 1 } else { 2 };
                writeln!(out, "{owner} moves {dir} to {}", self.describe(n))?;
                n
            };
            self.current = next;
            self.transcript.push(next);
            if let Some(&first) = seen.get(&next) {
                let cycle = &self.transcript[first..self.transcript.len() - 1];
                let top = cycle.iter().map(|&p| self.game.priority(p)).max().unwrap_or(0);
                let winner = Player::favoured_by(top);
                writeln!(out, "cycle {cycle:?} closed, maximal priority {top}")?;
                return Ok(Some(winner));
            }
            seen.insert(next, self.transcript.len() - 1);
        }
    }

    fn ask(&self, input: &mut dyn BufRead, out: &mut dyn Write, succ: &[usize]) -> Result<Option<usize>> {
        loop {
            write!(out, "at {}: move 1 (left) or 2 (right)? ", self.describe(self.current))?;
            out.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                return Ok(None);
            }
            match line.trim() {
                "1" => return Ok(Some(succ[0])),
                "2" => return Ok(Some(succ[1])),
                other => writeln!(out, "`{other}` is not a move, type 1 or 2")?,
            }
        }
    }
}
