//! Text formats for games and local strategies.
//!
//! Game file:
//!
//! ```text
//! name parity
//! # party NAME |A| |X| [p_0 .. p_{|A|-1}]   (uniform when omitted)
//! party R 2 2
//! party S 2 2 1/4 3/4
//! # shared |M| [p_0 ..]                        (size 1 when omitted)
//! shared 2
//! # win m | a_1 .. a_n | x_1 .. x_n           (every other row loses)
//! win 0 | 0 1 | 1 0
//! ```
//!
//! Strategy file, one block per party:
//!
//! ```text
//! # party NAME |U| |I| |X| |O|
//! party R 2 2 2 2
//! # u i | x o : p
//! 0 0 | 0 0 : 1
//! ```
//!
//! Omitted strategy entries are 0 and every `(u, i)` column must sum to 1.

use std::collections::HashSet;

use super::GameSpec;
use crate::classical::{LocalStrategy, PartyStrategy};
use crate::exact::{rat, MixedRadix, Rational, RationalMatrix, StochasticMatrix};
use crate::text::{check_range, lines, rational_at, split_entry, usize_at, usizes};
use crate::{Error, Result};

pub fn parse_game(text: &str) -> Result<GameSpec> {
    let mut name = String::from("custom");
    let mut parties = Vec::new();
    let mut dists: Vec<Vec<Rational>> = Vec::new();
    let mut outputs = Vec::new();
    let mut shared: Option<Vec<Rational>> = None;
    let mut wins: HashSet<(usize, Vec<usize>, Vec<usize>)> = HashSet::new();
    for (n, line) in lines(text) {
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match keyword {
            "name" => name = rest.trim().to_string(),
            "party" => {
                if !wins.is_empty() {
                    return Err(Error::parse(n, "party declarations must precede win rows"));
                }
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                if tokens.len() < 3 {
                    return Err(Error::parse(n, "expected 'party NAME |A| |X| [distribution]'"));
                }
                let size = usize_at(n, tokens[1], "an input alphabet size")?;
                let out = usize_at(n, tokens[2], "an output alphabet size")?;
                let dist = distribution(n, &tokens[3..], size)?;
                parties.push(tokens[0].to_string());
                dists.push(dist);
                outputs.push(out);
            }
            "shared" => {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let size = usize_at(n, tokens.first().copied().unwrap_or(""), "a shared alphabet size")?;
                shared = Some(distribution(n, &tokens[1..], size)?);
            }
            "win" => {
                let mut parts = rest.split('|');
                let (Some(m), Some(a), Some(x), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                    return Err(Error::parse(n, "expected 'win m | a.. | x..'"));
                };
                let m = usize_at(n, m.trim(), "a shared value")?;
                let shared_size = shared.as_ref().map_or(1, Vec::len);
                if m >= shared_size {
                    return Err(Error::parse(n, format!("shared value {m} outside alphabet of size {shared_size}")));
                }
                let a = usizes(n, a, "an input value")?;
                let x = usizes(n, x, "an output value")?;
                check_range(n, &a, &dists.iter().map(Vec::len).collect::<Vec<_>>(), "input")?;
                check_range(n, &x, &outputs, "output")?;
                if !wins.insert((m, a, x)) {
                    return Err(Error::parse(n, "duplicate win row"));
                }
            }
            other => return Err(Error::parse(n, format!("unknown keyword '{other}'"))),
        }
    }
    if parties.is_empty() {
        return Err(Error::parse(1, "no parties declared"));
    }
    GameSpec::new(name, parties, dists, outputs, shared.unwrap_or_else(|| vec![rat(1, 1)]), |m, a, x| {
        wins.contains(&(m, a.to_vec(), x.to_vec()))
    })
}

fn distribution(line: usize, tokens: &[&str], size: usize) -> Result<Vec<Rational>> {
    if size == 0 {
        return Err(Error::parse(line, "alphabet sizes must be at least 1"));
    }
    if tokens.is_empty() {
        return Ok(vec![rat(1, size as i64); size]);
    }
    if tokens.len() != size {
        return Err(Error::parse(line, format!("expected {size} probabilities, found {}", tokens.len())));
    }
    let dist = tokens.iter().map(|t| rational_at(line, t)).collect::<Result<Vec<_>>>()?;
    if dist.iter().any(|p| *p < Rational::from_integer(0.into())) || dist.iter().sum::<Rational>() != rat(1, 1) {
        return Err(Error::parse(line, "probabilities must be non-negative and sum to 1"));
    }
    Ok(dist)
}

pub fn render_game(game: &GameSpec) -> String {
    let mut out = format!("name {}\n", game.name());
    let fmt_dist = |d: &[Rational]| d.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    for ((p, d), x) in game.parties().iter().zip(game.private_dists()).zip(game.output_sizes()) {
        out.push_str(&format!("party {p} {} {x} {}\n", d.len(), fmt_dist(d)));
    }
    out.push_str(&format!("shared {} {}\n", game.shared_size(), fmt_dist(game.shared_dist())));
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    for m in 0..game.shared_size() {
        for a in MixedRadix::new(&game.private_sizes()).tuples() {
            for x in game.winning_outputs(m, &a) {
                out.push_str(&format!("win {m} | {} | {}\n", join(&a), join(&x)));
            }
        }
    }
    out
}

pub fn parse_strategy(text: &str) -> Result<LocalStrategy> {
    struct Block {
        line: usize,
        sizes: [usize; 4],
        table: RationalMatrix,
        seen: HashSet<(usize, usize)>,
    }
    let mut blocks: Vec<Block> = Vec::new();
    for (n, line) in lines(text) {
        if let Some(rest) = line.strip_prefix("party ") {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            if tokens.len() != 5 {
                return Err(Error::parse(n, "expected 'party NAME |U| |I| |X| |O|'"));
            }
            let mut sizes = [0; 4];
            for (slot, t) in sizes.iter_mut().zip(&tokens[1..]) {
                *slot = usize_at(n, t, "an alphabet size")?;
            }
            if sizes.contains(&0) {
                return Err(Error::parse(n, "alphabet sizes must be at least 1"));
            }
            let [u, i, x, o] = sizes;
            blocks.push(Block { line: n, sizes, table: RationalMatrix::zeros(x * o, u * i), seen: HashSet::new() });
        } else {
            let block = blocks.last_mut().ok_or_else(|| Error::parse(n, "entry before any party declaration"))?;
            let [u, i, x, o] = block.sizes;
            let (lhs, rhs, p) = split_entry(n, line)?;
            check_range(n, &lhs, &[u, i], "(game input, environment input)")?;
            check_range(n, &rhs, &[x, o], "(game output, environment output)")?;
            let (row, col) = (rhs[0] * o + rhs[1], lhs[0] * i + lhs[1]);
            if !block.seen.insert((row, col)) {
                return Err(Error::parse(n, "duplicate entry"));
            }
            block.table.set(row, col, p);
        }
    }
    if blocks.is_empty() {
        return Err(Error::parse(1, "no parties declared"));
    }
    let parties = blocks
        .into_iter()
        .map(|b| {
            let [u, i, x, o] = b.sizes;
            let matrix = StochasticMatrix::new(b.table).map_err(|e| Error::parse(b.line, e.to_string()))?;
            PartyStrategy::new(u, i, x, o, matrix)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalStrategy::new(parties))
}

pub fn render_strategy(strategy: &LocalStrategy) -> String {
    let mut out = String::new();
    for (k, s) in strategy.parties().iter().enumerate() {
        out.push_str(&format!("party P{k} {} {} {} {}\n", s.game_in(), s.env_in(), s.game_out(), s.env_out()));
        for u in 0..s.game_in() {
            for i in 0..s.env_in() {
                for x in 0..s.game_out() {
                    for o in 0..s.env_out() {
                        let p = s.probability(x, o, u, i);
                        if *p != Rational::from_integer(0.into()) {
                            out.push_str(&format!("{u} {i} | {x} {o} : {p}\n"));
                        }
                    }
                }
            }
        }
    }
    out
}
