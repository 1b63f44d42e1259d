//! Text formats for processes and conditional distributions.
//!
//! A process file declares its parties and then lists non-zero entries:
//!
//! ```text
//! # name |I| |O| [|A| |X|]
//! party R 2 2
//! party S 2 2
//! 0 1 | 1 0 : 1/2
//! ```
//!
//! Each entry line is `i_1 .. i_n | o_1 .. o_n : p`. Omitted entries are 0
//! and a position may appear only once. Game alphabets default to binary.
//!
//! A distribution file uses the same layout with `party NAME |A| |X|` and
//! entries `a_1 .. a_n | x_1 .. x_n : p`.

use std::collections::HashSet;

use super::{ClassicalProcess, ConditionalDistribution, PartySpec};
use crate::exact::{MixedRadix, Rational};
use crate::text::{check_range, lines, split_entry, usize_at};
use crate::{Error, Result};
use num_traits::Zero;

struct Parsed {
    parties: Vec<(String, Vec<usize>)>,
    entries: Vec<(usize, Vec<usize>, Vec<usize>, Rational)>,
}

fn parse_common(text: &str, min_sizes: usize, max_sizes: usize) -> Result<Parsed> {
    let mut parties: Vec<(String, Vec<usize>)> = Vec::new();
    let mut entries = Vec::new();
    for (n, line) in lines(text) {
        if let Some(rest) = line.strip_prefix("party ") {
            if !entries.is_empty() {
                return Err(Error::parse(n, "party declarations must precede entries"));
            }
            let mut tokens = rest.split_whitespace();
            let name = tokens.next().ok_or_else(|| Error::parse(n, "missing party name"))?;
            let sizes = tokens.map(|t| usize_at(n, t, "an alphabet size")).collect::<Result<Vec<_>>>()?;
            if sizes.len() < min_sizes || sizes.len() > max_sizes {
                return Err(Error::parse(n, format!("party '{name}' needs {min_sizes} or {max_sizes} alphabet sizes")));
            }
            if sizes.contains(&0) {
                return Err(Error::parse(n, format!("party '{name}' has an empty alphabet")));
            }
            if parties.iter().any(|(p, _)| p == name) {
                return Err(Error::parse(n, format!("duplicate party '{name}'")));
            }
            parties.push((name.to_string(), sizes));
        } else {
            if parties.is_empty() {
                return Err(Error::parse(n, "entries before any party declaration"));
            }
            let (lhs, rhs, p) = split_entry(n, line)?;
            entries.push((n, lhs, rhs, p));
        }
    }
    if parties.is_empty() {
        return Err(Error::parse(1, "no parties declared"));
    }
    Ok(Parsed { parties, entries })
}

/// Fills a dense row-major table from sparse entries with range and
/// duplicate checks.
fn fill(
    entries: Vec<(usize, Vec<usize>, Vec<usize>, Rational)>,
    rows: &MixedRadix,
    cols: &MixedRadix,
    names: (&str, &str),
) -> Result<Vec<Rational>> {
    let mut table = vec![Rational::zero(); rows.len() * cols.len()];
    let mut seen = HashSet::new();
    for (n, r, c, p) in entries {
        check_range(n, &r, rows.sizes(), names.0)?;
        check_range(n, &c, cols.sizes(), names.1)?;
        let k = rows.flatten(&r) * cols.len() + cols.flatten(&c);
        if !seen.insert(k) {
            return Err(Error::parse(n, "duplicate entry"));
        }
        table[k] = p;
    }
    Ok(table)
}

pub fn parse_process(text: &str) -> Result<ClassicalProcess> {
    let parsed = parse_common(text, 2, 4)?;
    let mut parties = Vec::new();
    for (name, sizes) in parsed.parties {
        let spec = match sizes[..] {
            [i, o] => PartySpec::new(name, i, o),
            [i, o, a, x] => PartySpec::new(name, i, o).with_game(a, x),
            _ => return Err(Error::parse(1, format!("party '{name}' needs 2 or 4 alphabet sizes"))),
        };
        parties.push(spec);
    }
    let ins = MixedRadix::new(&parties.iter().map(|p| p.env_in).collect::<Vec<_>>());
    let outs = MixedRadix::new(&parties.iter().map(|p| p.env_out).collect::<Vec<_>>());
    let table = fill(parsed.entries, &ins, &outs, ("input", "output"))?;
    let matrix = crate::exact::RationalMatrix::from_rows(ins.len(), outs.len(), table)?;
    ClassicalProcess::new(parties, matrix)
}

pub fn render_process(process: &ClassicalProcess) -> String {
    let mut out = String::new();
    for p in process.parties() {
        if (p.game_in, p.game_out) == (2, 2) {
            out.push_str(&format!("party {} {} {}\n", p.name, p.env_in, p.env_out));
        } else {
            out.push_str(&format!("party {} {} {} {} {}\n", p.name, p.env_in, p.env_out, p.game_in, p.game_out));
        }
    }
    let (ins, outs) = (process.in_radix(), process.out_radix());
    for (r, i) in ins.tuples().enumerate() {
        for (c, o) in outs.tuples().enumerate() {
            let v = process.table().get(r, c);
            if !v.is_zero() {
                out.push_str(&format!("{} | {} : {}\n", join(&i), join(&o), v));
            }
        }
    }
    out
}

pub fn parse_distribution(text: &str) -> Result<ConditionalDistribution> {
    let parsed = parse_common(text, 2, 2)?;
    let ins: Vec<usize> = parsed.parties.iter().map(|(_, s)| s[0]).collect();
    let outs: Vec<usize> = parsed.parties.iter().map(|(_, s)| s[1]).collect();
    let table = fill(parsed.entries, &MixedRadix::new(&ins), &MixedRadix::new(&outs), ("input", "output"))?;
    ConditionalDistribution::new(&ins, &outs, table)
}

/// Renders with generic party names `P0`, `P1`, ...
pub fn render_distribution(dist: &ConditionalDistribution) -> String {
    let ins = dist.input_radix();
    let outs = dist.output_radix();
    let mut out = String::new();
    for (k, (a, x)) in ins.sizes().iter().zip(outs.sizes()).enumerate() {
        out.push_str(&format!("party P{k} {a} {x}\n"));
    }
    for a in ins.tuples() {
        for x in outs.tuples() {
            let v = dist.probability(&a, &x);
            if !v.is_zero() {
                out.push_str(&format!("{} | {} : {}\n", join(&a), join(&x), v));
            }
        }
    }
    out
}

fn join(values: &[usize]) -> String {
    values.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}
