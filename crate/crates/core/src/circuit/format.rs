//! Netlist format.
//!
//! ```text
//! gate C cnot 4
//! gate B oracle 4 : 3 3 0 3      # function table of the box
//! gate K constant 2 4            # value, alphabet
//! gate I identity 4
//! gate N not 2
//! gate M matrix 2 2 / 2          # input alphabets / output alphabets
//!   0 0 | 0 : 1                  # inputs | outputs : probability
//!   ...
//! end
//! wire C.out1 -> B.in0
//! wire B.out0 -> C.in1
//! input C.in0
//! output C.out0
//! ```
//!
//! Matrix entries not listed are 0. Circuit inputs and outputs are ordered
//! by declaration.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use super::{Behavior, Circuit, CountingOracle, Gate, Port, Wire};
use crate::exact::{format_rational, MixedRadix, RationalMatrix, StochasticMatrix};
use crate::text::{check_range, lines, split_entry, usize_at, usizes};
use crate::{Error, Result};

struct PendingMatrix {
    name: String,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    matrix: RationalMatrix,
    line: usize,
}

fn add(gates: &mut Vec<Gate>, names: &mut HashMap<String, usize>, line: usize, gate: Gate) -> Result<()> {
    if names.insert(gate.name().to_string(), gates.len()).is_some() {
        return Err(Error::parse(line, format!("gate '{}' declared twice", gate.name())));
    }
    gates.push(gate);
    Ok(())
}

fn port(line: usize, token: &str, dir: &str, names: &HashMap<String, usize>) -> Result<Port> {
    let (gate, p) = token
        .split_once('.')
        .ok_or_else(|| Error::parse(line, format!("expected GATE.{dir}K, found '{token}'")))?;
    let g = *names.get(gate).ok_or_else(|| Error::parse(line, format!("unknown gate '{gate}'")))?;
    let k = p
        .strip_prefix(dir)
        .ok_or_else(|| Error::parse(line, format!("expected an '{dir}' port, found '{p}'")))?;
    Ok((g, usize_at(line, k, "a port index")?))
}

pub fn parse_netlist(text: &str) -> Result<Circuit> {
    let mut gates: Vec<Gate> = Vec::new();
    let mut names = HashMap::new();
    let mut wires = Vec::new();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut pending: Option<PendingMatrix> = None;
    let mut last = 0;
    for (n, line) in lines(text) {
        last = n;
        if let Some(m) = pending.as_mut() {
            if line == "end" {
                let m = pending.take().expect("pending matrix");
                let matrix = StochasticMatrix::new(m.matrix).map_err(|e| Error::parse(m.line, e.to_string()))?;
                let gate = Gate::new(m.name, m.inputs, m.outputs, matrix).map_err(|e| Error::parse(m.line, e.to_string()))?;
                add(&mut gates, &mut names, n, gate)?;
            } else {
                let (i, o, p) = split_entry(n, line)?;
                check_range(n, &i, &m.inputs, "input")?;
                check_range(n, &o, &m.outputs, "output")?;
                let (r, c) = (MixedRadix::new(&m.outputs).flatten(&o), MixedRadix::new(&m.inputs).flatten(&i));
                if !m.matrix.get(r, c).is_zero() {
                    return Err(Error::parse(n, "duplicate entry"));
                }
                m.matrix.set(r, c, p);
            }
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["gate", name, "matrix", rest @ ..] => {
                let joined = rest.join(" ");
                let (ins, outs) = joined
                    .split_once('/')
                    .ok_or_else(|| Error::parse(n, "expected 'matrix IN.. / OUT..'"))?;
                let inputs = usizes(n, ins, "an alphabet size")?;
                let outputs = usizes(n, outs, "an alphabet size")?;
                if inputs.contains(&0) || outputs.contains(&0) {
                    return Err(Error::parse(n, "alphabet sizes must be positive"));
                }
                let matrix = RationalMatrix::zeros(MixedRadix::new(&outputs).len(), MixedRadix::new(&inputs).len());
                pending = Some(PendingMatrix { name: name.to_string(), inputs, outputs, matrix, line: n });
            }
            ["gate", name, "oracle", size, ":", table @ ..] => {
                let size = usize_at(n, size, "an alphabet size")?;
                let table = usizes(n, &table.join(" "), "an oracle value")?;
                if table.len() != size {
                    return Err(Error::parse(n, format!("oracle table needs {size} values, found {}", table.len())));
                }
                let o = CountingOracle::from_table(table).map_err(|e| Error::parse(n, e.to_string()))?;
                add(&mut gates, &mut names, n, Gate::oracle(*name, Arc::new(o)))?;
            }
            ["gate", name, kind, args @ ..] => {
                let nums = usizes(n, &args.join(" "), "a number")?;
                let positive = |v: usize| if v == 0 { Err(Error::parse(n, "alphabet sizes must be positive")) } else { Ok(v) };
                let gate = match (*kind, nums.as_slice()) {
                    ("identity", [size]) => Gate::identity(*name, positive(*size)?),
                    ("not", [size]) => Gate::not(*name, positive(*size)?),
                    ("cnot", [size]) => Gate::cnot(*name, positive(*size)?),
                    ("constant", [k, size]) => Gate::constant(*name, *size, *k).map_err(|e| Error::parse(n, e.to_string()))?,
                    _ => return Err(Error::parse(n, format!("unknown gate kind or arguments: '{line}'"))),
                };
                add(&mut gates, &mut names, n, gate)?;
            }
            ["wire", from, "->", to] => {
                let from = port(n, from, "out", &names)?;
                let to = port(n, to, "in", &names)?;
                wires.push(Wire { from, to });
            }
            ["input", p] => inputs.push(port(n, p, "in", &names)?),
            ["output", p] => outputs.push(port(n, p, "out", &names)?),
            _ => return Err(Error::parse(n, format!("unexpected line '{line}'"))),
        }
    }
    if let Some(m) = pending {
        return Err(Error::parse(m.line, "matrix gate is missing 'end'"));
    }
    Circuit::new(gates, wires, inputs, outputs).map_err(|e| Error::parse(last, e.to_string()))
}

/// Renders every gate as a matrix gate, or an oracle table.
pub fn render_netlist(c: &Circuit) -> String {
    let mut out = String::new();
    for g in c.gates() {
        match g.behavior() {
            Behavior::Oracle(o) => {
                let table: Vec<String> = (0..o.size()).map(|i| o.lookup(i).to_string()).collect();
                out.push_str(&format!("gate {} oracle {} : {}\n", g.name(), o.size(), table.join(" ")));
            }
            Behavior::Matrix(m) => {
                let list = |v: &[usize]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
                out.push_str(&format!("gate {} matrix {} / {}\n", g.name(), list(g.inputs()), list(g.outputs())));
                let (ins, outs) = (MixedRadix::new(g.inputs()), MixedRadix::new(g.outputs()));
                for (ci, i) in ins.tuples().enumerate() {
                    for (ro, o) in outs.tuples().enumerate() {
                        let p = m.get(ro, ci);
                        if !p.is_zero() {
                            out.push_str(&format!("  {} | {} : {}\n", list(&i), list(&o), format_rational(p)));
                        }
                    }
                }
                out.push_str("end\n");
            }
        }
    }
    let name = |g: usize| c.gates()[g].name();
    for w in c.wires() {
        out.push_str(&format!("wire {}.out{} -> {}.in{}\n", name(w.from.0), w.from.1, name(w.to.0), w.to.1));
    }
    for &(g, p) in c.inputs() {
        out.push_str(&format!("input {}.in{p}\n", name(g)));
    }
    for &(g, p) in c.outputs() {
        out.push_str(&format!("output {}.out{p}\n", name(g)));
    }
    out
}
