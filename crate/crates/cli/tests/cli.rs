use std::path::{Path, PathBuf};

use clap::Parser;

use gtl_cli::{exit_code, load_apta, load_npta, run, Cli, PlaySession, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK};
use gtl_core::game_langs::t_plus;
use gtl_core::parity_games::Player;

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(name).to_string_lossy().into_owned()
}

fn invoke(args: &[&str], stdin: &str) -> (anyhow::Result<u8>, String) {
    let cli = Cli::try_parse_from(std::iter::once("gtl").chain(args.iter().copied())).expect("valid flags");
    let mut out = Vec::new();
    let code = run(cli, &mut stdin.as_bytes(), &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn dot_output_colours_regions_and_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let dot: PathBuf = dir.path().join("g.dot");
    let (code, _) = invoke(&["solve", "--game", &corpus("game_mixed.pg"), "--dot", dot.to_str().unwrap()], "");
    assert_eq!(code.unwrap(), EXIT_OK);
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("penwidth=3"));
    assert!(text.contains("lightblue") || text.contains("salmon"));
}

#[test]
fn builtin_prefix_and_embedding() {
    assert_eq!(load_npta("builtin:L").unwrap().state_count(), 3);
    let embedded = load_apta(&corpus("aut_root0.json")).unwrap();
    let (code, out) = invoke(
        &["member-alt", "--automaton", &corpus("aut_root0.json"), "--tree", &corpus("tree_all0.json")],
        "",
    );
    assert_eq!(code.unwrap(), EXIT_OK);
    assert!(out.contains("\"accepted\":true"));
    assert!(embedded.state_count() >= 2);
    assert!(load_npta("builtin:Nope").is_err());
}

#[test]
fn negative_decisions_and_input_errors() {
    let (code, out) = invoke(&["member", "--automaton", "builtin:L", "--tree", &corpus("tree_all0.json")], "");
    assert_eq!(code.unwrap(), EXIT_NEGATIVE);
    assert!(out.contains("false"));
    let (code, _) = invoke(&["gtl", "--tree", &corpus("bad_tree_label.json")], "");
    assert_eq!(exit_code(&code.unwrap_err()), EXIT_INPUT);
}

#[test]
fn play_session_retries_bad_input() {
    let mut session = PlaySession::new(&t_plus(), Some(Player::Eve)).unwrap();
    let mut out = Vec::new();
    let winner = session.run(&mut "x\n3\n1\n".as_bytes(), &mut out).unwrap();
    assert_eq!(winner, Some(Player::Eve));
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("`x` is not a move"));
    assert!(text.contains("`3` is not a move"));
}

#[test]
fn unknown_flags_are_rejected() {
    assert!(Cli::try_parse_from(["gtl", "solve", "--game", "x.pg", "--nope"]).is_err());
    assert!(Cli::try_parse_from(["gtl", "play", "--tree", "t.json", "--as", "both"]).is_err());
}
