use std::fmt::Write;

use crate::parity_games::{ParityGame, Player, SolveResult};

/// Graphviz rendering: Eve's positions as circles, Adam's as boxes. With a
/// solution, winning regions are filled (Eve blue, Adam red) and strategy
/// edges drawn bold.
pub fn to_dot(game: &ParityGame, solution: Option<&SolveResult>) -> String {
    let mut out = String::from("digraph parity_game {\n  node [style=filled, fillcolor=white];\n");
    for p in game.positions() {
        let shape = match game.owner(p) {
            Player::Eve => "circle",
            Player::Adam => "box",
        };
        let label = match game.name(p) {
            Some(name) => format!("{p}:{}\\n{name}", game.priority(p)),
            None => format!("{p}:{}", game.priority(p)),
        };
        let fill = match solution.and_then(|s| s.winner(p)) {
            Some(Player::Eve) => ", fillcolor=lightblue",
            Some(Player::Adam) => ", fillcolor=salmon",
            None => "",
        };
        writeln!(out, "  {p} [shape={shape}, label=\"{}\"{fill}];", label.replace('"', "'")).unwrap();
    }
    for p in game.positions() {
        let chosen = solution.and_then(|s| {
            s.winner(p)
                .filter(|&w| w == game.owner(p))
                .and_then(|w| s.strategy(w).get(p))
        });
        for &q in game.successors(p) {
            let style = if chosen == Some(q) { " [penwidth=3]" } else { "" };
            writeln!(out, "  {p} -> {q}{style};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity_games::solve;

    #[test]
    fn colours_regions() {
        let mut g = ParityGame::new();
        let a = g.add_position(Player::Eve, 0);
        let b = g.add_position(Player::Adam, 1);
        g.add_edge(a, a);
        g.add_edge(a, b);
        g.add_edge(b, b);
        let plain = to_dot(&g, None);
        assert!(plain.contains("0 [shape=circle"));
        assert!(!plain.contains("lightblue"));
        let dot = to_dot(&g, Some(&solve(&g)));
        assert!(dot.contains("0 [shape=circle, label=\"0:0\", fillcolor=lightblue]"));
        assert!(dot.contains("1 [shape=box, label=\"1:1\", fillcolor=salmon]"));
        assert!(dot.contains("0 -> 0 [penwidth=3]"));
        assert!(dot.ends_with("}\n"));
    }
}
