//! Text format for process matrices.
//!
//! ```text
//! party R 2 2        # name, input dimension, output dimension
//! party S 2 2
//! entries            # row-major, "re,im" or "re" per entry
//! 0.25,0 0,0 ...
//! ```

use super::{c, Operator, ProcessMatrix, QuantumParty};
use crate::text::{lines, usize_at};
use crate::{Error, Result};

fn parse_complex(line: usize, token: &str) -> Result<num_complex::Complex64> {
    let bad = || Error::parse(line, format!("malformed complex entry '{token}'"));
    let (re, im) = token.split_once(',').unwrap_or((token, "0"));
    Ok(c(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?))
}

pub fn parse_process_matrix(text: &str) -> Result<ProcessMatrix> {
    let mut parties = Vec::new();
    let mut entries = Vec::new();
    let mut in_entries = false;
    let mut last_line = 0;
    for (n, line) in lines(text) {
        last_line = n;
        if in_entries {
            for token in line.split_whitespace() {
                entries.push(parse_complex(n, token)?);
            }
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["party", name, d_in, d_out] => {
                let d_in = usize_at(n, d_in, "an input dimension")?;
                let d_out = usize_at(n, d_out, "an output dimension")?;
                if d_in == 0 || d_out == 0 {
                    return Err(Error::parse(n, "dimensions must be positive"));
                }
                parties.push(QuantumParty::new(*name, d_in, d_out));
            }
            ["entries"] => in_entries = true,
            _ => return Err(Error::parse(n, format!("unexpected line '{line}'"))),
        }
    }
    if parties.is_empty() {
        return Err(Error::parse(last_line, "no party declared"));
    }
    let d: usize = parties.iter().map(|p| p.dim_in * p.dim_out).product();
    if entries.len() != d * d {
        return Err(Error::parse(last_line, format!("expected {} entries, found {}", d * d, entries.len())));
    }
    ProcessMatrix::new(parties, Operator::from_row_slice(d, d, &entries))
}

pub fn render_process_matrix(w: &ProcessMatrix) -> String {
    let mut out = String::new();
    for p in w.parties() {
        out.push_str(&format!("party {} {} {}\n", p.name, p.dim_in, p.dim_out));
    }
    out.push_str("entries\n");
    let op = w.operator();
    for r in 0..op.nrows() {
        let row: Vec<String> = (0..op.ncols()).map(|k| format!("{},{}", op[(r, k)].re, op[(r, k)].im)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
