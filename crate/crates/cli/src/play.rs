//! Interactive terminal games: a human against the solver or a strategy.

use std::io::{self, BufRead, Write};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use rach_core::{GameStatus, Limits, Player, Position, Solver, StrategyId, StrategyPlayer};

use crate::{bad, CliError, GameArgs};

#[derive(Clone, Copy, ValueEnum)]
pub enum Side {
    /// First player (blue).
    Alice,
    /// Second player (red).
    Bob,
}

#[derive(Args)]
pub struct PlayArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, value_enum)]
    human: Side,
    /// `solver` or `strategy:<ID>`.
    #[arg(long)]
    engine: String,
    /// Allow a strategy outside its declared domain.
    #[arg(long)]
    force: bool,
}

enum Engine {
    Solver(Box<Solver>),
    Strategy(StrategyPlayer),
}

pub fn run(a: PlayArgs) -> Result<u8, CliError> {
    let stdin = io::stdin();
    let stdout = io::stdout();
    play(a, &mut stdin.lock(), &mut stdout.lock())
}

fn play(a: PlayArgs, input: &mut impl BufRead, out: &mut impl Write) -> Result<u8, CliError> {
    let (pattern, board) = a.game.parse()?;
    let human = match a.human {
        Side::Alice => Player::First,
        Side::Bob => Player::Second,
    };
    let pattern = Arc::new(pattern);
    let board = Arc::new(board);
    let mut engine = match a.engine.split_once(':') {
        None if a.engine == "solver" => {
            Engine::Solver(Box::new(Solver::new(pattern.clone(), board.clone(), Limits::default())?))
        }
        Some(("strategy", id)) => {
            let id: StrategyId = id.parse().map_err(bad)?;
            if id.role() == human {
                return Err(bad(format!("{id} plays the same side as the human")));
            }
            if !a.force {
                id.check_domain(&pattern, &board).map_err(bad)?;
            }
            Engine::Strategy(StrategyPlayer::new(id))
        }
        _ => return Err(bad(format!("unknown engine `{}` (use solver or strategy:<ID>)", a.engine))),
    };

    writeln!(out, "game {} {} vs {}", pattern, board.spec(), a.engine)?;
    writeln!(out, "enter moves as two vertex numbers, e.g. `0 1`")?;
    let mut pos = Position::new(board.clone());
    loop {
        let status = pos.status(&pattern);
        if status != GameStatus::Ongoing {
            writeln!(out, "result {status}")?;
            return Ok(0);
        }
        let mover = pos.to_move();
        let edge = if mover == human {
            match read_move(&pos, input, out)? {
                Some(e) => e,
                None => return Err(bad("input ended before the game did")),
            }
        } else {
            match &mut engine {
                Engine::Solver(s) => s.best_move(&pos)?,
                Engine::Strategy(p) => p.next_move(&pattern, &pos).map_err(bad)?,
            }
        };
        let (u, v) = board.endpoints(edge);
        writeln!(out, ",{} {} {u} {v}", pos.ply(), mover.letter())?;
        pos = pos.apply_move(edge).map_err(bad)?;
    }
}

/// Prompts until a legal move is entered; `None` on end of input.
fn read_move(pos: &Position, input: &mut impl BufRead, out: &mut impl Write) -> Result<Option<usize>, CliError> {
    loop {
        write!(out, "> ")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            return Ok(None);
        }
        let nums: Vec<usize> = line.split(|c: char| c.is_whitespace() || c == ',').filter_map(|t| t.parse().ok()).collect();
        let reply = match nums[..] {
            [u, v] => match pos.board().edge_between(u, v) {
                Some(e) if pos.coloring().colored() >> e & 1 == 0 => return Ok(Some(e)),
                Some(_) => format!("edge {u} {v} is already colored"),
                None => format!("{u} {v} is not an edge of {}", pos.board().spec()),
            },
            _ => "expected two vertex numbers".to_string(),
        };
        writeln!(out, "illegal move: {reply}; try again")?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(pattern: &str, board: &str, human: Side, engine: &str) -> PlayArgs {
        PlayArgs {
            game: GameArgs { pattern: pattern.into(), board: board.into() },
            human,
            engine: engine.into(),
            force: false,
        }
    }

    #[test]
    fn colored_edge_is_reprompted() {
        let mut input = io::Cursor::new("0 1\n0 1\n2 3\n0 2\n0 3\n1 2\n1 3\n");
        let mut out = Vec::new();
        play(args("2K2", "K4", Side::Bob, "solver"), &mut input, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("illegal move"), "{text}");
        assert!(text.contains("result"), "{text}");
    }

    #[test]
    fn engine_on_same_side_is_rejected() {
        let a = args("3K2", "K6", Side::Alice, "strategy:ALICE_MATCHING_COMPLETE");
        assert!(play(a, &mut io::Cursor::new(""), &mut Vec::new()).is_err());
    }
}
