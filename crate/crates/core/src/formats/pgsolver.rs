//! The line-oriented game format:
//!
//! ```text
//! parity 2;
//! 0 2 0 1,2 "start";
//! 1 1 1 0;
//! 2 0 0 ;
//! ```
//!
//! The header gives the largest position id; ids must be exactly
//! `0..=N` in any order. Each record is `id priority owner successors
//! ["name"];` with owner `0` for Eve and `1` for Adam. An empty successor
//! field marks a dead end.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::parity_games::{ParityGame, Player};

struct Record {
    line: usize,
    id: usize,
    priority: u32,
    owner: Player,
    successors: Vec<usize>,
    name: Option<String>,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn number<T: std::str::FromStr>(line: usize, token: Option<&str>, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| err(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| err(line, format!("{what} `{token}` is not a number")))
}

fn parse_record(line: usize, body: &str) -> Result<Record> {
    // split off an optional trailing quoted name first
    let (fields, name) = match body.find('"') {
        Some(start) => {
            let rest = &body[start + 1..];
            let end = rest
                .find('"')
                .ok_or_else(|| err(line, "unterminated name"))?;
            if !rest[end + 1..].trim().is_empty() {
                return Err(err(line, "unexpected text after name"));
            }
            (&body[..start], Some(rest[..end].to_string()))
        }
        None => (body, None),
    };
    let mut tokens = fields.split_whitespace();
    let id = number(line, tokens.next(), "position id")?;
    let priority = number(line, tokens.next(), "priority")?;
    let owner = match tokens.next() {
        Some("0") => Player::Eve,
        Some("1") => Player::Adam,
        Some(other) => return Err(err(line, format!("owner `{other}` must be 0 or 1"))),
        None => return Err(err(line, "missing owner")),
    };
    let successors = match tokens.next() {
        None => Vec::new(),
        Some(list) => list
            .split(',')
            .map(|s| number(line, Some(s), "successor"))
            .collect::<Result<Vec<_>>>()?,
    };
    if let Some(extra) = tokens.next() {
        return Err(err(line, format!("unexpected token `{extra}`")));
    }
    Ok(Record {
        line,
        id,
        priority,
        owner,
        successors,
        name,
    })
}

pub fn parse_game(text: &str) -> Result<ParityGame> {
    let mut header: Option<(usize, i64)> = None;
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let body = trimmed
            .strip_suffix(';')
            .ok_or_else(|| err(line, "record must end with `;`"))?;
        if header.is_none() {
            let n = body
                .strip_prefix("parity")
                .ok_or_else(|| err(line, "expected header `parity N;`"))?;
            let n: i64 = number(line, Some(n.trim()), "header size")?;
            if n < -1 {
                return Err(err(line, "header size must be at least -1"));
            }
            header = Some((line, n));
            continue;
        }
        records.push(parse_record(line, body)?);
    }
    let (header_line, max_id) = header.ok_or_else(|| err(1, "missing header `parity N;`"))?;
    let n = (max_id + 1) as usize;
    if records.len() != n {
        return Err(err(
            header_line,
            format!("header announces {n} positions, found {}", records.len()),
        ));
    }
    let mut slots: Vec<Option<Record>> = (0..n).map(|_| None).collect();
    for r in records {
        if r.id >= n {
            return Err(err(r.line, format!("position {} exceeds header bound {max_id}", r.id)));
        }
        if let Some(&s) = r.successors.iter().find(|&&s| s >= n) {
            return Err(err(r.line, format!("successor {s} does not exist")));
        }
        if slots[r.id].is_some() {
            return Err(err(r.line, format!("position {} defined twice", r.id)));
        }
        let id = r.id;
        slots[id] = Some(r);
    }
    let mut game = ParityGame::new();
    let records: Vec<Record> = slots.into_iter().map(|r| r.expect("all ids present")).collect();
    for r in &records {
        game.add_position(r.owner, r.priority);
    }
    for r in records {
        for s in r.successors {
            game.add_edge(r.id, s);
        }
        if let Some(name) = r.name {
            game.set_name(r.id, name);
        }
    }
    Ok(game)
}

pub fn write_game(game: &ParityGame) -> String {
    let mut out = format!("parity {};\n", game.len() as i64 - 1);
    for p in game.positions() {
        let owner = match game.owner(p) {
            Player::Eve => 0,
            Player::Adam => 1,
        };
        let succ: Vec<String> = game.successors(p).iter().map(|s| s.to_string()).collect();
        write!(out, "{p} {} {owner} {}", game.priority(p), succ.join(",")).unwrap();
        if let Some(name) = game.name(p) {
            write!(out, " \"{}\"", name.replace('"', "'")).unwrap();
        }
        out.push_str(";\n");
    }
    out
}
