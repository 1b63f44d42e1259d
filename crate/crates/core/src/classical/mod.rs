//! Classical processes: conditional distributions from the parties'
//! environment outputs to their environment inputs.
//!
//! A process over parties `P_1..P_n` is stored as a rational matrix whose
//! rows index the joint environment-input tuple `(i_1, ..., i_n)` and whose
//! columns index the joint environment-output tuple `(o_1, ..., o_n)`, both
//! flattened leftmost-most-significant. Entry `(i, o)` is `P(i | o)`.
//!
//! Logical consistency is non-negativity of every entry together with the
//! trace condition `Tr(E * (D_1 (x) ... (x) D_n)) = 1` for every tuple of
//! deterministic local operations `D_k : I_k -> O_k`. By linearity in the
//! local operations the deterministic tuples suffice.

mod distribution;
pub mod format;
mod membership;
pub mod presets;
mod relations;
mod strategy;

pub use distribution::ConditionalDistribution;
pub use membership::{two_party_causal_membership, CausalDecomposition, Membership};
pub use relations::{classify, infer_relations, CausalRelationReport, Classification};
pub use strategy::{induced_conditional, induced_distribution, LocalStrategy, PartyStrategy};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::exact::{
    checked_pow, checked_product, ensure_within_cap, enumerate_deterministic_ops, DeterministicOp,
    MixedRadix, Rational, RationalMatrix, StochasticMatrix,
};
use crate::{Error, Result, Verdict};

/// One party's alphabets. `env_in`/`env_out` are the sizes of the systems
/// received from and returned to the environment; `game_in`/`game_out` the
/// sizes of its private input and its output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartySpec {
    pub name: String,
    pub env_in: usize,
    pub env_out: usize,
    pub game_in: usize,
    pub game_out: usize,
}

impl PartySpec {
    /// Party with binary game input and output.
    pub fn new(name: impl Into<String>, env_in: usize, env_out: usize) -> Self {
        Self { name: name.into(), env_in, env_out, game_in: 2, game_out: 2 }
    }

    pub fn bit(name: impl Into<String>) -> Self {
        Self::new(name, 2, 2)
    }

    pub fn with_game(mut self, game_in: usize, game_out: usize) -> Self {
        self.game_in = game_in;
        self.game_out = game_out;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalProcess {
    parties: Vec<PartySpec>,
    table: RationalMatrix,
}

impl ClassicalProcess {
    /// Wraps a table after checking its dimensions. Entries are not required
    /// to be non-negative or normalised; that is what the checks decide.
    pub fn new(parties: Vec<PartySpec>, table: RationalMatrix) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::Invalid("a process needs at least one party".into()));
        }
        for p in &parties {
            if p.env_in == 0 || p.env_out == 0 || p.game_in == 0 || p.game_out == 0 {
                return Err(Error::Invalid(format!("party '{}' has an empty alphabet", p.name)));
            }
        }
        let rows: usize = parties.iter().map(|p| p.env_in).product();
        let cols: usize = parties.iter().map(|p| p.env_out).product();
        if table.rows() != rows || table.cols() != cols {
            return Err(Error::Dimension(format!(
                "table is {}x{}, parties need {rows}x{cols}",
                table.rows(),
                table.cols()
            )));
        }
        Ok(Self { parties, table })
    }

    /// Builds a table from `(i, o, p)` entries; repeated positions add up.
    pub fn from_entries(
        parties: Vec<PartySpec>,
        entries: impl IntoIterator<Item = (Vec<usize>, Vec<usize>, Rational)>,
    ) -> Result<Self> {
        let ins = MixedRadix::new(&parties.iter().map(|p| p.env_in).collect::<Vec<_>>());
        let outs = MixedRadix::new(&parties.iter().map(|p| p.env_out).collect::<Vec<_>>());
        let mut table = RationalMatrix::zeros(ins.len(), outs.len());
        for (i, o, p) in entries {
            if i.len() != parties.len() || o.len() != parties.len() {
                return Err(Error::Dimension("entry tuple length differs from party count".into()));
            }
            let (r, c) = (ins.flatten(&i), outs.flatten(&o));
            let v = table.get(r, c) + p;
            table.set(r, c, v);
        }
        Self::new(parties, table)
    }

    /// The 0/1 process of a function from joint outputs to joint inputs.
    pub fn deterministic(parties: Vec<PartySpec>, f: impl Fn(&[usize]) -> Vec<usize>) -> Result<Self> {
        let outs = MixedRadix::new(&parties.iter().map(|p| p.env_out).collect::<Vec<_>>());
        let ins = MixedRadix::new(&parties.iter().map(|p| p.env_in).collect::<Vec<_>>());
        let mut entries = Vec::with_capacity(outs.len());
        for o in outs.tuples() {
            let i = f(&o);
            if i.len() != parties.len() || i.iter().zip(ins.sizes()).any(|(&v, &s)| v >= s) {
                return Err(Error::Invalid(format!("function value {i:?} out of range at output {o:?}")));
            }
            entries.push((i, o, Rational::one()));
        }
        Self::from_entries(parties, entries)
    }

    /// Convex (or arbitrary linear) combination of processes over the same
    /// parties.
    pub fn mixture(components: &[(Rational, &ClassicalProcess)]) -> Result<Self> {
        let (_, first) = components
            .first()
            .ok_or_else(|| Error::Invalid("empty mixture".into()))?;
        let mut table = RationalMatrix::zeros(first.table.rows(), first.table.cols());
        for (w, p) in components {
            if p.parties != first.parties {
                return Err(Error::Dimension("mixture components have different parties".into()));
            }
            for r in 0..table.rows() {
                for c in 0..table.cols() {
                    let e = p.table.get(r, c);
                    if !e.is_zero() {
                        let v = table.get(r, c) + w * e;
                        table.set(r, c, v);
                    }
                }
            }
        }
        Self::new(first.parties.clone(), table)
    }

    pub fn parties(&self) -> &[PartySpec] {
        &self.parties
    }

    /// Same table, different party metadata (e.g. game alphabets).
    pub fn with_parties(&self, parties: Vec<PartySpec>) -> Result<Self> {
        Self::new(parties, self.table.clone())
    }

    pub fn table(&self) -> &RationalMatrix {
        &self.table
    }

    pub fn in_radix(&self) -> MixedRadix {
        MixedRadix::new(&self.parties.iter().map(|p| p.env_in).collect::<Vec<_>>())
    }

    pub fn out_radix(&self) -> MixedRadix {
        MixedRadix::new(&self.parties.iter().map(|p| p.env_out).collect::<Vec<_>>())
    }

    /// `P(i | o)`.
    pub fn probability(&self, i: &[usize], o: &[usize]) -> &Rational {
        self.table.get(self.in_radix().flatten(i), self.out_radix().flatten(o))
    }

    pub fn is_deterministic(&self) -> bool {
        self.table.is_zero_one() && self.table.is_column_stochastic()
    }

    /// Number of deterministic local-operation tuples, `prod_k |O_k|^|I_k|`.
    pub fn op_tuple_count(&self) -> Option<u128> {
        checked_product(self.parties.iter().map(|p| checked_pow(p.env_out, p.env_in)))
    }

    /// Per-party lists of deterministic local operations `I_k -> O_k`.
    pub fn local_ops(&self, cap: u64) -> Result<Vec<Vec<DeterministicOp>>> {
        ensure_within_cap(self.op_tuple_count(), cap)?;
        self.parties
            .iter()
            .map(|p| enumerate_deterministic_ops(p.env_in, p.env_out, cap))
            .collect()
    }
}

/// Every table entry is non-negative.
pub fn check_nonnegativity(process: &ClassicalProcess) -> bool {
    process.table.is_nonnegative()
}

/// `Tr(E * (M_1 (x) ... (x) M_n))` for local operations `M_k : I_k -> O_k`
/// given as stochastic matrices.
pub fn trace_with_ops(process: &ClassicalProcess, ops: &[StochasticMatrix]) -> Result<Rational> {
    if ops.len() != process.parties.len() {
        return Err(Error::Dimension(format!(
            "{} operations for {} parties",
            ops.len(),
            process.parties.len()
        )));
    }
    for (op, p) in ops.iter().zip(&process.parties) {
        if op.cols() != p.env_in || op.rows() != p.env_out {
            return Err(Error::Dimension(format!(
                "operation for '{}' is {}x{}, expected {}x{}",
                p.name,
                op.rows(),
                op.cols(),
                p.env_out,
                p.env_in
            )));
        }
    }
    let joint = ops[1..]
        .iter()
        .fold(ops[0].as_matrix().clone(), |acc, m| acc.tensor(m.as_matrix()));
    process.table.trace_of_product(&joint)
}

/// A tuple of deterministic operations under which the trace is not 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceViolation {
    pub ops: Vec<DeterministicOp>,
    pub trace: Rational,
}

/// Checks the trace condition on every deterministic operation tuple and
/// returns the first violating tuple in canonical order.
pub fn check_total_probability(process: &ClassicalProcess, cap: u64) -> Result<Verdict<TraceViolation>> {
    let ops = process.local_ops(cap)?;
    let matrices: Vec<Vec<StochasticMatrix>> = ops
        .iter()
        .map(|list| list.iter().map(DeterministicOp::to_matrix).collect())
        .collect();
    let radix = MixedRadix::new(&ops.iter().map(Vec::len).collect::<Vec<_>>());
    let violation = (0..radix.len()).into_par_iter().find_map_first(|t| {
        let choice = radix.unflatten(t);
        let tuple: Vec<StochasticMatrix> =
            choice.iter().enumerate().map(|(k, &c)| matrices[k][c].clone()).collect();
        let trace = trace_with_ops(process, &tuple).expect("dimensions checked");
        (!trace.is_one()).then(|| TraceViolation {
            ops: choice.iter().enumerate().map(|(k, &c)| ops[k][c].clone()).collect(),
            trace,
        })
    });
    Ok(match violation {
        Some(v) => Verdict::Fail(v),
        None => Verdict::Pass,
    })
}

/// Both halves of the logical-consistency decision with their witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyReport {
    /// First negative entry as `(row, column)` of the table, if any.
    pub negative_entry: Option<(usize, usize)>,
    pub total_probability: Verdict<TraceViolation>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.negative_entry.is_none() && self.total_probability.is_pass()
    }
}

pub fn consistency(process: &ClassicalProcess, cap: u64) -> Result<ConsistencyReport> {
    Ok(ConsistencyReport {
        negative_entry: process.table.first_negative(),
        total_probability: check_total_probability(process, cap)?,
    })
}

pub fn is_logically_consistent(process: &ClassicalProcess, cap: u64) -> Result<bool> {
    Ok(consistency(process, cap)?.is_consistent())
}

#[cfg(test)]
mod tests {
    use super::presets::*;
    use super::*;
    use crate::exact::{int, rat};
    use crate::DEFAULT_CAP;

    #[test]
    fn nonnegativity() {
        assert!(check_nonnegativity(&circular_mixture()));
        assert!(check_nonnegativity(&majority()));
        let mut table = identity_loop().table().clone();
        table.set(0, 0, rat(5, 4));
        table.set(1, 0, rat(-1, 4));
        let bad = ClassicalProcess::new(identity_loop().parties().to_vec(), table).unwrap();
        assert!(!check_nonnegativity(&bad));
        let report = consistency(&bad, DEFAULT_CAP).unwrap();
        assert_eq!(report.negative_entry, Some((1, 0)));
        assert!(!report.is_consistent());
    }

    #[test]
    fn named_processes_satisfy_trace_condition() {
        for p in [circular_mixture(), majority(), identity_chain()] {
            assert_eq!(check_total_probability(&p, DEFAULT_CAP).unwrap(), Verdict::Pass);
            assert!(is_logically_consistent(&p, DEFAULT_CAP).unwrap());
        }
    }

    #[test]
    fn grandfather_loop_fails_with_not() {
        // i = o on one bit; with d_not the composed map has no fixed point.
        let p = identity_loop();
        let not = DeterministicOp::not(2).to_matrix();
        assert_eq!(trace_with_ops(&p, &[not]).unwrap(), int(0));
        let id = DeterministicOp::identity(2).to_matrix();
        assert_eq!(trace_with_ops(&p, &[id]).unwrap(), int(2));
        let Verdict::Fail(v) = check_total_probability(&p, DEFAULT_CAP).unwrap() else {
            panic!("identity loop must fail")
        };
        // Canonical order starts with d_0, which has exactly one fixed
        // point, then d_id with two.
        assert_eq!(v.ops[0].name(), "d_id");
        assert_eq!(v.trace, int(2));
    }

    #[test]
    fn perturbed_mixture_has_trace_51_over_50() {
        let p = perturbed_mixture();
        let ids: Vec<StochasticMatrix> = (0..3).map(|_| DeterministicOp::identity(2).to_matrix()).collect();
        assert_eq!(trace_with_ops(&p, &ids).unwrap(), rat(51, 50));
        assert!(!is_logically_consistent(&p, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn opposite_channels_are_inconsistent() {
        assert!(!is_logically_consistent(&two_way_channels(), DEFAULT_CAP).unwrap());
        // Each channel alone is fine.
        let parties = two_way_channels().parties().to_vec();
        let r_to_s = ClassicalProcess::deterministic(parties.clone(), |o| vec![0, o[0]]).unwrap();
        let s_to_r = ClassicalProcess::deterministic(parties, |o| vec![o[1], 0]).unwrap();
        assert!(is_logically_consistent(&r_to_s, DEFAULT_CAP).unwrap());
        assert!(is_logically_consistent(&s_to_r, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn stochastic_ops_follow_from_deterministic_ones() {
        // A mixed local operation on a consistent process still gives trace 1.
        let p = majority();
        let half = StochasticMatrix::new(
            RationalMatrix::from_rows(2, 2, vec![rat(1, 3), rat(1, 2), rat(2, 3), rat(1, 2)]).unwrap(),
        )
        .unwrap();
        let ops = [half.clone(), DeterministicOp::not(2).to_matrix(), half];
        assert_eq!(trace_with_ops(&p, &ops).unwrap(), int(1));
    }

    #[test]
    fn dimension_errors() {
        let p = majority();
        assert!(trace_with_ops(&p, &[StochasticMatrix::identity(2)]).is_err());
        let parties = vec![PartySpec::bit("A")];
        assert!(ClassicalProcess::new(parties, RationalMatrix::identity(3)).is_err());
        assert!(matches!(
            check_total_probability(&p, 10),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }
}
