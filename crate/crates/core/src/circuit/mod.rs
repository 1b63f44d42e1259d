//! Circuits whose gates may be wired in cycles.
//!
//! A value is assigned to every gate output port; an input port reads the
//! output port wired to it or, if open, a circuit input. The weight of an
//! assignment is the product of the gates' conditional probabilities, and a
//! circuit is logically consistent when the weights sum to 1 for every
//! choice of circuit inputs. Weights are never renormalised.

pub mod format;
mod search;

pub use search::{baseline_search, fixed_point_circuit, fixed_point_search, SearchResult};

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::exact::{checked_product, ensure_within_cap, sum, DeterministicOp, MixedRadix, Rational, StochasticMatrix};
use crate::{Error, Result};

/// Black box `{0..n} -> {0..n}` that counts how often it is used.
pub struct CountingOracle {
    size: usize,
    f: Box<dyn Fn(usize) -> usize + Send + Sync>,
    queries: AtomicU64,
}

impl std::fmt::Debug for CountingOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CountingOracle").field("size", &self.size).field("queries", &self.queries()).finish()
    }
}

impl CountingOracle {
    /// `f` must map `0..size` into `0..size`; this is checked on use.
    pub fn new(size: usize, f: impl Fn(usize) -> usize + Send + Sync + 'static) -> Self {
        Self { size, f: Box::new(f), queries: AtomicU64::new(0) }
    }

    pub fn from_table(table: Vec<usize>) -> Result<Self> {
        let size = table.len();
        if size == 0 {
            return Err(Error::Invalid("oracle over an empty alphabet".into()));
        }
        if let Some(v) = table.iter().find(|&&v| v >= size) {
            return Err(Error::Invalid(format!("oracle value {v} outside 0..{size}")));
        }
        Ok(Self::new(size, move |i| table[i]))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::SeqCst)
    }

    pub fn reset(&self) {
        self.queries.store(0, Ordering::SeqCst);
    }

    /// One classical query.
    pub fn query(&self, input: usize) -> usize {
        self.queries.fetch_add(1, Ordering::SeqCst);
        self.lookup(input)
    }

    /// One use of the box inside a circuit evaluation. The evaluator reads
    /// the box's transition through the returned handle while it searches
    /// the wire assignments; in the circuit that search is a single pass of
    /// the wires through the box, so it counts as one query.
    pub fn use_once(&self) -> OracleUse<'_> {
        self.queries.fetch_add(1, Ordering::SeqCst);
        OracleUse(self)
    }

    fn lookup(&self, input: usize) -> usize {
        let out = (self.f)(input);
        assert!(out < self.size, "oracle returned {out} outside 0..{}", self.size);
        out
    }
}

pub struct OracleUse<'a>(&'a CountingOracle);

impl OracleUse<'_> {
    pub fn transition(&self, input: usize) -> usize {
        self.0.lookup(input)
    }
}

#[derive(Clone, Debug)]
pub enum Behavior {
    /// Rows are joint outputs, columns joint inputs.
    Matrix(StochasticMatrix),
    Oracle(Arc<CountingOracle>),
}

#[derive(Clone, Debug)]
pub struct Gate {
    name: String,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    behavior: Behavior,
}

impl Gate {
    pub fn new(name: impl Into<String>, inputs: Vec<usize>, outputs: Vec<usize>, matrix: StochasticMatrix) -> Result<Self> {
        let name = name.into();
        let (rows, cols) = (MixedRadix::new(&outputs).len(), MixedRadix::new(&inputs).len());
        if inputs.contains(&0) || outputs.contains(&0) {
            return Err(Error::Invalid(format!("gate '{name}' has an empty wire alphabet")));
        }
        if matrix.rows() != rows || matrix.cols() != cols {
            return Err(Error::Dimension(format!(
                "gate '{name}' needs a {rows}x{cols} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { name, inputs, outputs, behavior: Behavior::Matrix(matrix) })
    }

    pub fn deterministic(name: impl Into<String>, op: &DeterministicOp) -> Self {
        Self {
            name: name.into(),
            inputs: vec![op.in_size()],
            outputs: vec![op.out_size()],
            behavior: Behavior::Matrix(op.to_matrix()),
        }
    }

    pub fn identity(name: impl Into<String>, n: usize) -> Self {
        Self::deterministic(name, &DeterministicOp::identity(n))
    }

    /// `i -> i + 1 mod n`.
    pub fn not(name: impl Into<String>, n: usize) -> Self {
        Self::deterministic(name, &DeterministicOp::not(n))
    }

    pub fn constant(name: impl Into<String>, n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::Invalid(format!("constant {k} outside 0..{n}")));
        }
        Ok(Self::deterministic(name, &DeterministicOp::constant(n, n, k)))
    }

    /// `(i, j) -> (i + j mod n, j)`.
    pub fn cnot(name: impl Into<String>, n: usize) -> Self {
        let radix = MixedRadix::new(&[n, n]);
        let table = radix.tuples().map(|t| radix.flatten(&[(t[0] + t[1]) % n, t[1]])).collect();
        let op = DeterministicOp::new(n * n, table).expect("values in range");
        Self { name: name.into(), inputs: vec![n, n], outputs: vec![n, n], behavior: Behavior::Matrix(op.to_matrix()) }
    }

    pub fn oracle(name: impl Into<String>, oracle: Arc<CountingOracle>) -> Self {
        let n = oracle.size();
        Self { name: name.into(), inputs: vec![n], outputs: vec![n], behavior: Behavior::Oracle(oracle) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn behavior(&self) -> &Behavior {
        &self.behavior
    }
}

/// `(gate index, port index)`.
pub type Port = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wire {
    pub from: Port,
    pub to: Port,
}

#[derive(Clone, Debug)]
pub struct Circuit {
    gates: Vec<Gate>,
    wires: Vec<Wire>,
    inputs: Vec<Port>,
    outputs: Vec<Port>,
    /// For each gate input port, where its value comes from.
    sources: Vec<Vec<Source>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    Wire(Port),
    Input(usize),
}

impl Circuit {
    /// `inputs` lists open gate input ports, `outputs` open gate output
    /// ports. Every input port must be wired or open exactly once, every
    /// output port wired or open exactly once, and wired ports must share
    /// an alphabet.
    pub fn new(gates: Vec<Gate>, wires: Vec<Wire>, inputs: Vec<Port>, outputs: Vec<Port>) -> Result<Self> {
        let mut sources: Vec<Vec<Option<Source>>> = gates.iter().map(|g| vec![None; g.inputs.len()]).collect();
        let mut used: Vec<Vec<bool>> = gates.iter().map(|g| vec![false; g.outputs.len()]).collect();
        let port_name = |(g, p): Port, dir: &str| match gates.get(g) {
            Some(gate) => format!("{}.{dir}{p}", gate.name),
            None => format!("#{g}.{dir}{p}"),
        };
        let mut claim_out = |port: Port| -> Result<usize> {
            let gate = gates.get(port.0).ok_or_else(|| Error::Invalid(format!("no gate {}", port.0)))?;
            let size = *gate.outputs.get(port.1).ok_or_else(|| Error::Invalid(format!("no port {}", port_name(port, "out"))))?;
            if std::mem::replace(&mut used[port.0][port.1], true) {
                return Err(Error::Invalid(format!("output port {} used twice", port_name(port, "out"))));
            }
            Ok(size)
        };
        let mut wire_sizes = Vec::new();
        for w in &wires {
            wire_sizes.push(claim_out(w.from)?);
        }
        for &o in &outputs {
            claim_out(o)?;
        }
        let mut claim_in = |port: Port, source: Source, size: Option<usize>| -> Result<()> {
            let gate = gates.get(port.0).ok_or_else(|| Error::Invalid(format!("no gate {}", port.0)))?;
            let in_size = *gate.inputs.get(port.1).ok_or_else(|| Error::Invalid(format!("no port {}", port_name(port, "in"))))?;
            if let Some(s) = size.filter(|&s| s != in_size) {
                return Err(Error::Dimension(format!(
                    "wire into {} carries {s} values, port expects {in_size}",
                    port_name(port, "in")
                )));
            }
            if sources[port.0][port.1].replace(source).is_some() {
                return Err(Error::Invalid(format!("input port {} connected twice", port_name(port, "in"))));
            }
            Ok(())
        };
        for (w, &size) in wires.iter().zip(&wire_sizes) {
            claim_in(w.to, Source::Wire(w.from), Some(size))?;
        }
        for (k, &i) in inputs.iter().enumerate() {
            claim_in(i, Source::Input(k), None)?;
        }
        for (g, ports) in used.iter().enumerate() {
            if let Some(p) = ports.iter().position(|u| !u) {
                return Err(Error::Invalid(format!("output port {} is not connected", port_name((g, p), "out"))));
            }
        }
        let sources = sources
            .into_iter()
            .enumerate()
            .map(|(g, ports)| {
                ports
                    .into_iter()
                    .enumerate()
                    .map(|(p, s)| s.ok_or_else(|| Error::Invalid(format!("input port {} is not connected", port_name((g, p), "in")))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { gates, wires, inputs, outputs, sources })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn inputs(&self) -> &[Port] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Port] {
        &self.outputs
    }

    pub fn input_sizes(&self) -> Vec<usize> {
        self.inputs.iter().map(|&(g, p)| self.gates[g].inputs[p]).collect()
    }

    pub fn output_sizes(&self) -> Vec<usize> {
        self.outputs.iter().map(|&(g, p)| self.gates[g].outputs[p]).collect()
    }

    /// Every gate output port in gate order: the variables of an assignment.
    pub fn output_ports(&self) -> Vec<Port> {
        self.gates.iter().enumerate().flat_map(|(g, gate)| (0..gate.outputs.len()).map(move |p| (g, p))).collect()
    }

    fn assignment_radix(&self) -> MixedRadix {
        MixedRadix::new(&self.gates.iter().flat_map(|g| g.outputs.iter().copied()).collect::<Vec<_>>())
    }

    pub fn assignment_count(&self) -> Option<u128> {
        checked_product(self.gates.iter().flat_map(|g| g.outputs.iter().map(|&s| Some(s as u128))))
    }
}

/// Weighted wire assignments for one choice of circuit inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    /// Assignments with non-zero weight, values listed as in
    /// [`Circuit::output_ports`].
    pub assignments: Vec<(Vec<usize>, Rational)>,
    /// Weight of each circuit output tuple.
    pub outputs: BTreeMap<Vec<usize>, Rational>,
    pub total_weight: Rational,
}

struct Prepared<'a> {
    circuit: &'a Circuit,
    uses: Vec<Option<OracleUse<'a>>>,
    offsets: Vec<usize>,
}

impl<'a> Prepared<'a> {
    fn new(circuit: &'a Circuit) -> Self {
        let uses = circuit
            .gates
            .iter()
            .map(|g| match &g.behavior {
                Behavior::Oracle(o) => Some(o.use_once()),
                Behavior::Matrix(_) => None,
            })
            .collect();
        let mut offsets = Vec::new();
        let mut acc = 0;
        for g in &circuit.gates {
            offsets.push(acc);
            acc += g.outputs.len();
        }
        Self { circuit, uses, offsets }
    }

    fn weight(&self, values: &[usize], inputs: &[usize]) -> Rational {
        let mut w = Rational::one();
        for (g, gate) in self.circuit.gates.iter().enumerate() {
            let ins: Vec<usize> = self.circuit.sources[g]
                .iter()
                .map(|s| match *s {
                    Source::Wire((h, p)) => values[self.offsets[h] + p],
                    Source::Input(k) => inputs[k],
                })
                .collect();
            let outs = &values[self.offsets[g]..self.offsets[g] + gate.outputs.len()];
            let p = match (&gate.behavior, &self.uses[g]) {
                (Behavior::Oracle(_), Some(u)) => {
                    if u.transition(ins[0]) == outs[0] {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }
                (Behavior::Matrix(m), _) => {
                    m.get(MixedRadix::new(&gate.outputs).flatten(outs), MixedRadix::new(&gate.inputs).flatten(&ins)).clone()
                }
                _ => unreachable!("oracle gates are prepared"),
            };
            if p.is_zero() {
                return p;
            }
            w *= p;
        }
        w
    }

    fn outputs_of(&self, values: &[usize]) -> Vec<usize> {
        self.circuit.outputs.iter().map(|&(g, p)| values[self.offsets[g] + p]).collect()
    }
}

fn check_inputs(circuit: &Circuit, inputs: &[usize]) -> Result<()> {
    let sizes = circuit.input_sizes();
    if inputs.len() != sizes.len() {
        return Err(Error::Dimension(format!("circuit has {} inputs, {} values given", sizes.len(), inputs.len())));
    }
    if let Some(k) = (0..sizes.len()).find(|&k| inputs[k] >= sizes[k]) {
        return Err(Error::Invalid(format!("input {k} value {} outside 0..{}", inputs[k], sizes[k])));
    }
    Ok(())
}

fn enumerate(
    prepared: &Prepared<'_>,
    radix: &MixedRadix,
    inputs: &[usize],
) -> Vec<(Vec<usize>, Rational)> {
    (0..radix.len())
        .into_par_iter()
        .filter_map(|k| {
            let values = radix.unflatten(k);
            let w = prepared.weight(&values, inputs);
            (!w.is_zero()).then_some((values, w))
        })
        .collect()
}

/// Enumerates every wire assignment for the given circuit inputs. Each
/// oracle gate counts one query.
pub fn evaluate(circuit: &Circuit, inputs: &[usize], cap: u64) -> Result<Evaluation> {
    check_inputs(circuit, inputs)?;
    ensure_within_cap(circuit.assignment_count(), cap)?;
    let prepared = Prepared::new(circuit);
    let assignments = enumerate(&prepared, &circuit.assignment_radix(), inputs);
    let mut outputs = BTreeMap::new();
    for (values, w) in &assignments {
        *outputs.entry(prepared.outputs_of(values)).or_insert_with(Rational::zero) += w;
    }
    let total_weight = sum(assignments.iter().map(|(_, w)| w));
    Ok(Evaluation { assignments, outputs, total_weight })
}

/// Output weights when the circuit inputs are drawn from `input_dist`
/// (indexed by flattened input tuples). The input values are enumerated
/// together with the wires.
pub fn evaluate_mixture(circuit: &Circuit, input_dist: &[Rational], cap: u64) -> Result<BTreeMap<Vec<usize>, Rational>> {
    let in_radix = MixedRadix::new(&circuit.input_sizes());
    if input_dist.len() != in_radix.len() {
        return Err(Error::Dimension(format!("input distribution needs {} entries", in_radix.len())));
    }
    let count = checked_product([circuit.assignment_count(), Some(in_radix.len() as u128)]);
    ensure_within_cap(count, cap)?;
    let prepared = Prepared::new(circuit);
    let wires = circuit.assignment_radix();
    let mut out = BTreeMap::new();
    for k in 0..in_radix.len() * wires.len() {
        let (i, v) = (k / wires.len(), k % wires.len());
        if input_dist[i].is_zero() {
            continue;
        }
        let values = wires.unflatten(v);
        let w = prepared.weight(&values, &in_radix.unflatten(i));
        if !w.is_zero() {
            *out.entry(prepared.outputs_of(&values)).or_insert_with(Rational::zero) += w * &input_dist[i];
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyCheck {
    /// Total weight for every circuit input tuple, in flattening order.
    pub per_input: Vec<(Vec<usize>, Rational)>,
    pub consistent: bool,
}

pub fn is_consistent(circuit: &Circuit, cap: u64) -> Result<ConsistencyCheck> {
    let in_radix = MixedRadix::new(&circuit.input_sizes());
    let count = checked_product([circuit.assignment_count(), Some(in_radix.len() as u128)]);
    ensure_within_cap(count, cap)?;
    let per_input = in_radix
        .tuples()
        .map(|a| evaluate(circuit, &a, cap).map(|e| (a, e.total_weight)))
        .collect::<Result<Vec<_>>>()?;
    let consistent = per_input.iter().all(|(_, w)| w.is_one());
    Ok(ConsistencyCheck { per_input, consistent })
}

pub const CIRCUIT_PRESETS: &[&str] = &["not-loop", "identity-loop", "cnot", "fixed-point-4"];

/// Small built-in netlists: the two bit loops, an open CNOT and the
/// fixed-point circuit around the box `3, 3, 0, 3`.
pub fn circuit_preset(name: &str) -> Result<Circuit> {
    match name {
        "not-loop" => loop_circuit(Gate::not("N", 2)),
        "identity-loop" => loop_circuit(Gate::identity("I", 2)),
        "cnot" => Circuit::new(vec![Gate::cnot("C", 2)], vec![], vec![(0, 0), (0, 1)], vec![(0, 0), (0, 1)]),
        "fixed-point-4" => Ok(fixed_point_circuit(Arc::new(CountingOracle::from_table(vec![3, 3, 0, 3])?))),
        _ => Err(Error::Unknown { kind: "circuit preset", name: name.into() }),
    }
}

/// A single gate of the given kind whose only output feeds its only input.
pub fn loop_circuit(gate: Gate) -> Result<Circuit> {
    Circuit::new(vec![gate], vec![Wire { from: (0, 0), to: (0, 0) }], vec![], vec![])
}
