//! The function view of deterministic processes and the fixed-point
//! characterisations of logical consistency.
//!
//! A deterministic process is a function `e` from joint environment outputs
//! to joint environment inputs. Composed with deterministic local operations
//! `f_k : I_k -> O_k` it becomes a self-map of the joint input alphabet, and
//! the trace of the composed stochastic matrix counts its fixed points.

pub mod format;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::classical::{ClassicalProcess, PartySpec};
use crate::exact::{DeterministicOp, MixedRadix, Rational, RationalMatrix};
use crate::{Error, Result, Verdict};

/// Total map from joint output tuples to joint input tuples, stored on
/// flattened indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessFunction {
    parties: Vec<PartySpec>,
    map: Vec<usize>,
}

impl ProcessFunction {
    pub fn new(parties: Vec<PartySpec>, map: Vec<usize>) -> Result<Self> {
        let ins: usize = parties.iter().map(|p| p.env_in).product();
        let outs: usize = parties.iter().map(|p| p.env_out).product();
        if map.len() != outs {
            return Err(Error::Dimension(format!("function has {} values, expected {outs}", map.len())));
        }
        if let Some(&v) = map.iter().find(|&&v| v >= ins) {
            return Err(Error::Invalid(format!("function value {v} outside the joint input alphabet")));
        }
        Ok(Self { parties, map })
    }

    pub fn from_fn(parties: Vec<PartySpec>, f: impl Fn(&[usize]) -> Vec<usize>) -> Result<Self> {
        ProcessFunction::from_process(&ClassicalProcess::deterministic(parties, f)?)
    }

    fn from_process(process: &ClassicalProcess) -> Result<Self> {
        as_function(process)
    }

    pub fn parties(&self) -> &[PartySpec] {
        &self.parties
    }

    pub fn in_radix(&self) -> MixedRadix {
        MixedRadix::new(&self.parties.iter().map(|p| p.env_in).collect::<Vec<_>>())
    }

    pub fn out_radix(&self) -> MixedRadix {
        MixedRadix::new(&self.parties.iter().map(|p| p.env_out).collect::<Vec<_>>())
    }

    /// Flattened map, indexed by flattened output tuple.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, outputs: &[usize]) -> Vec<usize> {
        self.in_radix().unflatten(self.map[self.out_radix().flatten(outputs)])
    }

    /// The 0/1 process with `P(e(o) | o) = 1`.
    pub fn to_process(&self) -> ClassicalProcess {
        let mut table = RationalMatrix::zeros(self.in_radix().len(), self.map.len());
        for (o, &i) in self.map.iter().enumerate() {
            table.set(i, o, Rational::one());
        }
        ClassicalProcess::new(self.parties.clone(), table).expect("dimensions follow the parties")
    }

    fn check_ops(&self, ops: &[DeterministicOp]) -> Result<()> {
        if ops.len() != self.parties.len() {
            return Err(Error::Dimension(format!("{} operations for {} parties", ops.len(), self.parties.len())));
        }
        for (op, p) in ops.iter().zip(&self.parties) {
            if op.in_size() != p.env_in || op.out_size() != p.env_out {
                return Err(Error::Dimension(format!(
                    "operation {} does not map {} values to {} for '{}'",
                    op.name(),
                    p.env_in,
                    p.env_out,
                    p.name
                )));
            }
        }
        Ok(())
    }
}

/// Reads a 0/1 process as a function: `e(o)` is the unique input tuple with
/// entry 1 in column `o`.
pub fn as_function(process: &ClassicalProcess) -> Result<ProcessFunction> {
    let table = process.table();
    let mut map = Vec::with_capacity(table.cols());
    for c in 0..table.cols() {
        let mut hit = None;
        for r in 0..table.rows() {
            let v = table.get(r, c);
            if v.is_one() && hit.is_none() {
                hit = Some(r);
            } else if !v.is_zero() {
                return Err(Error::NotDeterministic { column: c });
            }
        }
        map.push(hit.ok_or(Error::NotDeterministic { column: c })?);
    }
    ProcessFunction::new(process.parties().to_vec(), map)
}

/// `t -> e(f_1(t_1), ..., f_n(t_n))` on flattened joint input indices.
pub fn composed_table(e: &ProcessFunction, ops: &[DeterministicOp]) -> Result<Vec<usize>> {
    e.check_ops(ops)?;
    let ins = e.in_radix();
    let outs = e.out_radix();
    Ok(ins
        .tuples()
        .map(|t| {
            let o: Vec<usize> = t.iter().zip(ops).map(|(&v, op)| op.apply(v)).collect();
            e.map[outs.flatten(&o)]
        })
        .collect())
}

/// All `t` with `t = e(ops(t))`, in canonical order.
pub fn fixed_points(e: &ProcessFunction, ops: &[DeterministicOp]) -> Result<Vec<Vec<usize>>> {
    let ins = e.in_radix();
    Ok(composed_table(e, ops)?
        .into_iter()
        .enumerate()
        .filter(|(t, image)| t == image)
        .map(|(t, _)| ins.unflatten(t))
        .collect())
}

fn fixed_point_count(e: &ProcessFunction, ops: &[DeterministicOp]) -> usize {
    composed_table(e, ops)
        .expect("operations checked by caller")
        .into_iter()
        .enumerate()
        .filter(|(t, image)| t == image)
        .count()
}

/// Local operations under which the composed function does not have exactly
/// one fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointViolation {
    pub ops: Vec<DeterministicOp>,
    pub fixed_points: Vec<Vec<usize>>,
}

fn op_tuples(parties: &[PartySpec], cap: u64) -> Result<(Vec<Vec<DeterministicOp>>, MixedRadix)> {
    let ops = ClassicalProcess::new(
        parties.to_vec(),
        RationalMatrix::zeros(
            parties.iter().map(|p| p.env_in).product(),
            parties.iter().map(|p| p.env_out).product(),
        ),
    )?
    .local_ops(cap)?;
    let radix = MixedRadix::new(&ops.iter().map(Vec::len).collect::<Vec<_>>());
    Ok((ops, radix))
}

fn pick(ops: &[Vec<DeterministicOp>], choice: &[usize]) -> Vec<DeterministicOp> {
    choice.iter().enumerate().map(|(k, &c)| ops[k][c].clone()).collect()
}

/// Whether every tuple of deterministic local operations leaves exactly one
/// fixed point. Returns the first failing tuple in canonical order.
pub fn is_deterministic_extremal(e: &ProcessFunction, cap: u64) -> Result<Verdict<FixedPointViolation>> {
    let (ops, radix) = op_tuples(&e.parties, cap)?;
    let found = (0..radix.len()).into_par_iter().find_map_first(|t| {
        let tuple = pick(&ops, &radix.unflatten(t));
        (fixed_point_count(e, &tuple) != 1).then(|| FixedPointViolation {
            fixed_points: fixed_points(e, &tuple).expect("checked"),
            ops: tuple,
        })
    });
    Ok(found.map_or(Verdict::Pass, Verdict::Fail))
}

/// A convex combination of deterministic processes over the same parties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicDecomposition {
    components: Vec<(Rational, ProcessFunction)>,
}

impl DeterministicDecomposition {
    /// Weights must be positive and sum to 1; all components share parties.
    pub fn new(components: Vec<(Rational, ProcessFunction)>) -> Result<Self> {
        let (_, first) = components.first().ok_or_else(|| Error::Invalid("empty decomposition".into()))?;
        if components.iter().any(|(_, f)| f.parties != first.parties) {
            return Err(Error::Dimension("decomposition components have different parties".into()));
        }
        if let Some((w, _)) = components.iter().find(|(w, _)| *w <= Rational::zero()) {
            return Err(Error::Invalid(format!("non-positive weight {w}")));
        }
        let total: Rational = components.iter().map(|(w, _)| w).sum();
        if !total.is_one() {
            return Err(Error::Normalization { total: total.to_string() });
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(Rational, ProcessFunction)] {
        &self.components
    }

    pub fn parties(&self) -> &[PartySpec] {
        self.components[0].1.parties()
    }

    /// The mixed table `sum_k w_k D_k`.
    pub fn mixture(&self) -> ClassicalProcess {
        let processes: Vec<ClassicalProcess> = self.components.iter().map(|(_, f)| f.to_process()).collect();
        let weighted: Vec<(Rational, &ClassicalProcess)> =
            self.components.iter().zip(&processes).map(|((w, _), p)| (w.clone(), p)).collect();
        ClassicalProcess::mixture(&weighted).expect("same parties")
    }
}

/// `sum_k w_k |fixed_points(d_k, ops)|`.
pub fn average_fixed_points(d: &DeterministicDecomposition, ops: &[DeterministicOp]) -> Result<Rational> {
    d.components[0].1.check_ops(ops)?;
    Ok(d.components
        .iter()
        .map(|(w, f)| w * Rational::from_integer(fixed_point_count(f, ops).into()))
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AverageViolation {
    pub ops: Vec<DeterministicOp>,
    pub average: Rational,
}

/// Whether the weighted number of fixed points is 1 under every tuple of
/// deterministic local operations. Returns the first failing tuple.
pub fn verify_average_fixed_points(d: &DeterministicDecomposition, cap: u64) -> Result<Verdict<AverageViolation>> {
    let (ops, radix) = op_tuples(d.parties(), cap)?;
    let found = (0..radix.len()).into_par_iter().find_map_first(|t| {
        let tuple = pick(&ops, &radix.unflatten(t));
        let average = average_fixed_points(d, &tuple).expect("checked");
        (!average.is_one()).then_some(AverageViolation { ops: tuple, average })
    });
    Ok(found.map_or(Verdict::Pass, Verdict::Fail))
}

/// Splits a column-stochastic table into deterministic components by
/// repeatedly taking, in every column, the first row with remaining mass
/// and removing the smallest of those masses from all of them.
///
/// This always yields a valid decomposition of the table, but not
/// necessarily one whose average fixed-point count is 1 even when such a
/// decomposition exists.
pub fn greedy_decomposition(process: &ClassicalProcess) -> Result<DeterministicDecomposition> {
    let table = process.table();
    if !table.is_nonnegative() || !table.is_column_stochastic() {
        return Err(Error::Invalid("greedy decomposition needs a column-stochastic table".into()));
    }
    let mut rest = table.clone();
    let mut components = Vec::new();
    loop {
        let choice: Option<Vec<usize>> = (0..rest.cols())
            .map(|c| (0..rest.rows()).find(|&r| !rest.get(r, c).is_zero()))
            .collect();
        let Some(choice) = choice else { break };
        let w = choice
            .iter()
            .enumerate()
            .map(|(c, &r)| rest.get(r, c).clone())
            .min()
            .expect("at least one column");
        for (c, &r) in choice.iter().enumerate() {
            let v = rest.get(r, c) - &w;
            rest.set(r, c, v);
        }
        components.push((w, ProcessFunction::new(process.parties().to_vec(), choice)?));
    }
    DeterministicDecomposition::new(components)
}
