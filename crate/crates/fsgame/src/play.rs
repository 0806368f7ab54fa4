//! Text-mode play against a solver-driven opponent.
//!
//! Commands typed by a human S:
//!
//! ```text
//! lsplit M1 K1 i j …   split the left side; listed members go to the first part
//! rsplit M1 K1 i j …   same on the right side
//! lsucc j0 j1 …        one successor index per left member, in member order
//! rsucc j0 j1 …        same on the right side
//! quit
//! ```
//!
//! A human D answers splits with `left` or `right` (or `quit`).

use std::io::{BufRead, Write};

use fsgame_core::game::{
    apply_move, legal_moves, terminal_status, DChoice, GamePosition, Move, Solver, SolverConfig, Split, Terminal,
    Verdict,
};
use fsgame_core::hierarchy::HfSet;
use fsgame_core::logic::Literal;
use fsgame_core::{ChoiceMap, ModelSet, PointedModel};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Spoiler,
    Duplicator,
}

/// How a session ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    SpoilerWon(Literal),
    DuplicatorWon,
    Quit,
}

fn io(e: std::io::Error) -> CliError {
    CliError::Internal(e.to_string())
}

fn describe(p: &PointedModel) -> String {
    if let Some(set) = HfSet::decode(p) {
        return format!("{set}");
    }
    let m = p.model();
    let edges: Vec<String> = m
        .edges()
        .map(|(a, b)| format!("{}->{}", m.world_name(a), m.world_name(b)))
        .collect();
    let val: Vec<String> = m
        .valuation()
        .into_iter()
        .map(|(q, ws)| format!("{q}={{{}}}", ws.into_iter().collect::<Vec<_>>().join(",")))
        .collect();
    format!("{} in [{}; {}]", p.point_name(), edges.join(" "), val.join(" "))
}

fn literal_text(l: &Literal) -> String {
    l.to_formula().to_string()
}

fn print_side(out: &mut impl Write, tag: char, side: &ModelSet) -> Result<(), CliError> {
    for (i, p) in side.iter().enumerate() {
        let succ: Vec<String> = p.successor_iter().enumerate().map(|(j, s)| format!("{j}:{}", describe(&s))).collect();
        let succ = if succ.is_empty() { "none".to_string() } else { succ.join("  ") };
        writeln!(out, "  {tag}{i}: {}    successors: {succ}", describe(p)).map_err(io)?;
    }
    Ok(())
}

fn print_position(out: &mut impl Write, pos: &GamePosition) -> Result<(), CliError> {
    writeln!(out, "position m={} k={}", pos.m, pos.k).map_err(io)?;
    writeln!(out, " left ({}):", pos.left.len()).map_err(io)?;
    print_side(out, 'L', &pos.left)?;
    writeln!(out, " right ({}):", pos.right.len()).map_err(io)?;
    print_side(out, 'R', &pos.right)
}

fn indices(side: &ModelSet, part: &ModelSet) -> String {
    let ids: Vec<String> = side
        .iter()
        .enumerate()
        .filter(|(_, p)| part.contains(p))
        .map(|(i, _)| i.to_string())
        .collect();
    ids.join(" ")
}

fn move_text(pos: &GamePosition, mv: &Move) -> String {
    let succ = |side: &ModelSet, f: &ChoiceMap| -> String {
        let picks: Vec<String> = side
            .iter()
            .map(|p| {
                let target = &f[p];
                p.successor_iter().position(|s| &s == target).map_or("?".into(), |j| j.to_string())
            })
            .collect();
        picks.join(" ")
    };
    match mv {
        Move::LeftSplit(s) => format!("lsplit {} {} {}", s.m1, s.k1, indices(&pos.left, &s.part1)),
        Move::RightSplit(s) => format!("rsplit {} {} {}", s.m1, s.k1, indices(&pos.right, &s.part1)),
        Move::LeftSucc(f) => format!("lsucc {}", succ(&pos.left, f)),
        Move::RightSucc(f) => format!("rsucc {}", succ(&pos.right, f)),
    }
    .trim_end()
    .to_string()
}

/// Parses a move typed by S; `Ok(None)` means `quit`.
pub fn parse_move(pos: &GamePosition, line: &str) -> Result<Option<Move>, String> {
    let mut words = line.split_whitespace();
    let cmd = words.next().ok_or("empty command")?;
    let nums: Vec<usize> = words
        .map(|w| w.parse::<usize>().map_err(|_| format!("`{w}` is not a number")))
        .collect::<Result<_, _>>()?;
    let split = |side: &ModelSet| -> Result<Split, String> {
        let (&m1, &k1) = match nums.as_slice() {
            [m1, k1, ..] => (m1, k1),
            _ => return Err("usage: lsplit|rsplit M1 K1 i j …".into()),
        };
        let (m1, k1) = (m1 as u32, k1 as u32);
        if m1 > pos.m || k1 + 1 > pos.k {
            return Err(format!("budgets must satisfy M1 ≤ {} and K1 ≤ k−1", pos.m));
        }
        let chosen = &nums[2..];
        if let Some(&i) = chosen.iter().find(|&&i| i >= side.len()) {
            return Err(format!("no member {i} on that side"));
        }
        let (mut part1, mut part2) = (ModelSet::new(), ModelSet::new());
        for (i, p) in side.iter().enumerate() {
            if chosen.contains(&i) { part1.insert(p.clone()) } else { part2.insert(p.clone()) };
        }
        Ok(Split { m1, k1, part1, m2: pos.m - m1, k2: pos.k - 1 - k1, part2 })
    };
    let succ = |side: &ModelSet| -> Result<ChoiceMap, String> {
        if nums.len() != side.len() {
            return Err(format!("give one successor index for each of the {} members", side.len()));
        }
        side.iter()
            .zip(&nums)
            .map(|(p, &j)| {
                p.successor_iter()
                    .nth(j)
                    .map(|s| (p.clone(), s))
                    .ok_or_else(|| format!("member {} has no successor {j}", describe(p)))
            })
            .collect()
    };
    Ok(Some(match cmd {
        "quit" | "q" => return Ok(None),
        "lsplit" => Move::LeftSplit(split(&pos.left)?),
        "rsplit" => Move::RightSplit(split(&pos.right)?),
        "lsucc" => Move::LeftSucc(succ(&pos.left)?),
        "rsucc" => Move::RightSucc(succ(&pos.right)?),
        other => return Err(format!("unknown command `{other}`")),
    }))
}

/// Reads the next non-blank line; `None` at end of input.
fn read_line(input: &mut impl BufRead, out: &mut impl Write, prompt: &str) -> Result<Option<String>, CliError> {
    loop {
        write!(out, "{prompt}").map_err(io)?;
        out.flush().map_err(io)?;
        let mut line = String::new();
        if input.read_line(&mut line).map_err(io)? == 0 {
            return Ok(None);
        }
        let line = line.trim();
        if !line.is_empty() {
            return Ok(Some(line.to_string()));
        }
    }
}

fn machine_move(solver: &mut Solver, pos: &GamePosition) -> Result<Move, CliError> {
    match solver.solve(pos)? {
        Verdict::SpoilerWins(s) => s.root_move().ok_or_else(|| CliError::Internal("winning strategy ends in a leaf".into())),
        Verdict::DuplicatorWins => legal_moves(pos)
            .into_iter()
            .next()
            .ok_or_else(|| CliError::Internal("ongoing position without moves".into())),
    }
}

fn machine_choice(solver: &mut Solver, pos: &GamePosition, mv: &Move) -> Result<DChoice, CliError> {
    for c in [DChoice::Left, DChoice::Right] {
        if !solver.wins(&apply_move(pos, mv, Some(c))?)? {
            return Ok(c);
        }
    }
    Ok(DChoice::Left)
}

/// Runs one game on the given streams with the human in `role`.
pub fn play<R: BufRead, W: Write>(
    start: GamePosition,
    role: Role,
    config: SolverConfig,
    input: &mut R,
    out: &mut W,
) -> Result<Outcome, CliError> {
    let mut solver = Solver::for_position(&start, config)?;
    let mut pos = start;
    loop {
        print_position(out, &pos)?;
        match terminal_status(&pos) {
            Terminal::SWin(l) => {
                writeln!(out, "S wins: {} separates the sides", literal_text(&l)).map_err(io)?;
                return Ok(Outcome::SpoilerWon(l));
            }
            Terminal::DWin => {
                writeln!(out, "D wins: no literal separates and S has no move left").map_err(io)?;
                return Ok(Outcome::DuplicatorWon);
            }
            Terminal::Ongoing => {}
        }
        let mv = match role {
            Role::Duplicator => {
                let mv = machine_move(&mut solver, &pos)?;
                writeln!(out, "S plays: {}", move_text(&pos, &mv)).map_err(io)?;
                mv
            }
            Role::Spoiler => loop {
                let Some(line) = read_line(input, out, "S> ")? else {
                    return Ok(Outcome::Quit);
                };
                match parse_move(&pos, &line) {
                    Ok(None) => return Ok(Outcome::Quit),
                    Ok(Some(mv)) if apply_move(&pos, &mv, mv.is_split().then_some(DChoice::Left)).is_ok() => break mv,
                    Ok(Some(_)) => writeln!(out, "illegal move, try again").map_err(io)?,
                    Err(e) => writeln!(out, "{e}, try again").map_err(io)?,
                }
            },
        };
        let choice = if !mv.is_split() {
            None
        } else if role == Role::Spoiler {
            let c = machine_choice(&mut solver, &pos, &mv)?;
            writeln!(out, "D chooses: {}", if c == DChoice::Left { "left" } else { "right" }).map_err(io)?;
            Some(c)
        } else {
            loop {
                let Some(line) = read_line(input, out, "D (left|right)> ")? else {
                    return Ok(Outcome::Quit);
                };
                match line.as_str() {
                    "left" | "l" => break Some(DChoice::Left),
                    "right" | "r" => break Some(DChoice::Right),
                    "quit" | "q" => return Ok(Outcome::Quit),
                    _ => writeln!(out, "answer left or right").map_err(io)?,
                }
            }
        };
        pos = apply_move(&pos, &mv, choice)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fsgame_core::hierarchy::{ee_set, vv_set};

    fn empty_vs_singleton(m: u32, k: u32) -> GamePosition {
        let a: HfSet = "{}".parse().unwrap();
        let b: HfSet = "{{}}".parse().unwrap();
        GamePosition::new(m, k, [a.model()].into_iter().collect(), [b.model()].into_iter().collect())
    }

    fn run(pos: GamePosition, role: Role, script: &str) -> (Outcome, String) {
        let mut out = Vec::new();
        let o = play(pos, role, SolverConfig::default(), &mut script.as_bytes(), &mut out).unwrap();
        (o, String::from_utf8(out).unwrap())
    }

    #[test]
    fn machine_spoiler_wins_in_one_move() {
        let (o, text) = run(empty_vs_singleton(1, 0), Role::Duplicator, "");
        assert_eq!(o, Outcome::SpoilerWon(Literal::Bot));
        assert_eq!(text.matches("S plays").count(), 1);
        assert!(text.contains("S plays: rsucc 0"));
    }

    #[test]
    fn machine_duplicator_survives() {
        let pos = GamePosition::new(1, 0, vv_set(1).unwrap(), ee_set(1).unwrap());
        let (o, text) = run(pos, Role::Spoiler, "rsucc 0\n");
        assert_eq!(o, Outcome::DuplicatorWon, "{text}");
    }

    #[test]
    fn illegal_moves_are_reprompted_and_quit_ends() {
        let (o, text) = run(empty_vs_singleton(1, 0), Role::Spoiler, "lsucc 0\nfrobnicate\nlsplit 0 0\nquit\n");
        assert_eq!(o, Outcome::Quit);
        assert_eq!(text.matches("try again").count(), 3);
    }

    #[test]
    fn human_spoiler_can_win() {
        let (o, _) = run(empty_vs_singleton(1, 0), Role::Spoiler, "rsucc 0\n");
        assert_eq!(o, Outcome::SpoilerWon(Literal::Bot));
    }
}
