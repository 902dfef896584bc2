//! Terminal game: the human enters positions, the crossout engine replies.

use std::io::{BufRead, Write};

use crossout::{encode, stat_bundle, GameState, Player};

fn board(state: &GameState, out: &mut impl Write) -> std::io::Result<()> {
    let n = state.w().len();
    let alloc = state.allocation();
    let cell = |s: String| format!("{s:>4}");
    let positions: String = (1..=n).map(|p| cell(p.to_string())).collect();
    let values: String = (1..=n).map(|p| cell(state.w().get(p).to_string())).collect();
    let eaten: String = (1..=n)
        .map(|p| match alloc.get(&p) {
            Some(Player::Alice) => cell("A".into()),
            Some(Player::Bob) => cell("B".into()),
            None => cell(".".into()),
        })
        .collect();
    writeln!(out, "position{positions}")?;
    writeln!(out, "value   {values}")?;
    writeln!(out, "eaten   {eaten}")
}

fn analysis(state: &GameState, out: &mut impl Write) -> std::io::Result<()> {
    let row: Vec<String> = state.analysis().iter().map(|(p, who)| format!("{p}:{}", who.mark())).collect();
    writeln!(out, "predicted under optimal play: {}", row.join(" "))
}

fn summary(state: &GameState, out: &mut impl Write) -> anyhow::Result<()> {
    writeln!(out, "game over")?;
    for player in [Player::Alice, Player::Bob] {
        let eaten: Vec<String> = state.eaten_by(player).iter().map(|p| p.to_string()).collect();
        writeln!(out, "{player} ate positions {}", eaten.join(", "))?;
    }
    writeln!(out, "no trade pair: {}", state.no_trade_check()?)?;
    writeln!(out, "crossout tuple: {}", serde_json::to_string(&encode(state.w()))?)?;
    writeln!(out, "statistics: {}", serde_json::to_string(&stat_bundle(state.w()))?)?;
    Ok(())
}

/// Runs a game until it ends, input runs out, or the human quits. Returns
/// the last state.
pub fn play(initial: GameState, input: impl BufRead, out: &mut impl Write) -> anyhow::Result<GameState> {
    let human = initial.human_role();
    let mut state = initial;
    // snapshots at the human's decision points, for undo
    let mut undo: Vec<GameState> = Vec::new();
    let mut lines = input.lines();
    writeln!(out, "w = {}", state.w())?;
    if let Some(h) = human {
        writeln!(out, "you are {h}; commands: <position>, a (analysis), h (hint), u (undo), q (quit)")?;
    }
    loop {
        if state.is_over() {
            board(&state, out)?;
            summary(&state, out)?;
            return Ok(state);
        }
        let turn = state.turn().expect("game not over");
        if Some(turn) != human {
            let pos = state.optimal_move()?;
            writeln!(out, "{turn} eats position {pos} (value {})", state.w().get(pos))?;
            state = state.apply_move(pos)?;
            continue;
        }
        board(&state, out)?;
        write!(out, "{turn} to move> ")?;
        out.flush()?;
        let Some(line) = lines.next() else {
            writeln!(out)?;
            return Ok(state);
        };
        let line = line?;
        match line.trim() {
            "q" | "quit" => return Ok(state),
            "a" | "analysis" => analysis(&state, out)?,
            "h" | "hint" => writeln!(out, "hint: position {}", state.optimal_move()?)?,
            "u" | "undo" => match undo.pop() {
                Some(prev) => state = prev,
                None => writeln!(out, "nothing to undo")?,
            },
            "" => {}
            tok => match tok.parse::<usize>() {
                Ok(pos) => match state.apply_move(pos) {
                    Ok(next) => {
                        undo.push(state);
                        state = next;
                    }
                    Err(e) => writeln!(out, "{e}")?,
                },
                Err(_) => writeln!(out, "unrecognized input {tok:?}")?,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crossout::{new_game, GameSetup};

    fn run(w: &str, human: Option<Player>, input: &str) -> (GameState, String) {
        let state = new_game(GameSetup::Permutation(w.parse().unwrap()), human).unwrap();
        let mut out = Vec::new();
        let end = play(state, input.as_bytes(), &mut out).unwrap();
        (end, String::from_utf8(out).unwrap())
    }

    #[test]
    fn engine_only_game_finishes() {
        let (end, text) = run("2 6 4 1 3 11 5 7 10 12 9 8", None, "");
        assert!(end.is_over());
        assert!(text.contains("Alice eats position 10 (value 12)"));
        assert!(text.contains("no trade pair: true"));
    }

    #[test]
    fn human_moves_undo_and_analysis() {
        let (end, text) = run("1 2 3 4", Some(Player::Alice), "a\n9\n1\nu\nh\n4\n2\n");
        assert!(text.contains("predicted under optimal play: 1:B 2:A 3:B 4:A"));
        assert!(text.contains("illegal move: not in remaining"));
        assert!(text.contains("hint: position 4"));
        assert!(end.is_over());
        assert_eq!(end.eaten_by(Player::Alice), vec![4, 2]);
    }

    #[test]
    fn quitting_keeps_state() {
        let (end, _) = run("1 2", Some(Player::Alice), "q\n");
        assert_eq!(end.remaining().len(), 2);
    }
}
