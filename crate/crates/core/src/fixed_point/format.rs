//! Decomposition files: one weighted 0/1 process per component.
//!
//! ```text
//! component 1/2 preset:cyclic-identity
//! component 1/4 tables/flip.txt
//! component 1/4 inline
//! party R 2 2
//! 0 | 1 : 1
//! 1 | 0 : 1
//! end
//! ```
//!
//! References other than `inline` are passed to a caller-supplied resolver.
//! Inline blocks use the process format and end with a line `end`.

use super::{as_function, DeterministicDecomposition};
use crate::classical::format::parse_process;
use crate::classical::ClassicalProcess;
use crate::text::{lines, rational_at};
use crate::{Error, Result};

pub fn parse_decomposition(
    text: &str,
    resolve: impl Fn(&str) -> Result<ClassicalProcess>,
) -> Result<DeterministicDecomposition> {
    let mut components = Vec::new();
    let mut all = lines(text).peekable();
    while let Some((n, line)) = all.next() {
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("component") {
            return Err(Error::parse(n, format!("expected 'component', found '{line}'")));
        }
        let weight = rational_at(n, tokens.next().ok_or_else(|| Error::parse(n, "missing weight"))?)?;
        let reference = tokens.next().ok_or_else(|| Error::parse(n, "missing process reference"))?;
        if let Some(extra) = tokens.next() {
            return Err(Error::parse(n, format!("unexpected '{extra}'")));
        }
        let process = if reference == "inline" {
            let mut block = String::new();
            let mut closed = false;
            for (_, inner) in all.by_ref() {
                if inner == "end" {
                    closed = true;
                    break;
                }
                block.push_str(inner);
                block.push('\n');
            }
            if !closed {
                return Err(Error::parse(n, "inline block without 'end'"));
            }
            parse_process(&block).map_err(|e| Error::parse(n, format!("in inline block: {e}")))?
        } else {
            resolve(reference).map_err(|e| Error::parse(n, format!("cannot load '{reference}': {e}")))?
        };
        let f = as_function(&process).map_err(|e| Error::parse(n, e.to_string()))?;
        components.push((weight, f));
    }
    DeterministicDecomposition::new(components)
}
