//! Exact verification and simulation toolkit for processes without a
//! predefined causal order.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: rational scalars, stochastic matrices, tensor products,
//!   deterministic-operation enumeration and an exact LP feasibility solver.
//! * [`classical`]: classical processes, logical consistency, causal
//!   relations inferred from distributions, causal/non-causal classification
//!   and two-party causal-polytope membership.
//! * [`fixed_point`]: the function view of deterministic processes and the
//!   fixed-point characterisations of logical consistency.
//! * [`games`]: the causal games, exact success probabilities and causal
//!   bounds computed by exhaustive optimisation.
//! * [`quantum`]: process matrices over small Hilbert spaces.
//! * [`circuit`]: circuits whose gates may be wired in cycles.
//! * [`cli`]: the command-line surface used by the `causalkit` binary.
//!
//! Classical quantities are exact rationals throughout. The quantum side is
//! floating point with an explicit tolerance.

pub mod circuit;
pub mod classical;
pub mod cli;
pub mod error;
pub mod exact;
pub mod fixed_point;
pub mod games;
pub mod quantum;
mod text;

pub use error::{Error, Result};
pub use exact::Rational;

/// Default bound on the number of items any exhaustive enumeration may visit.
pub const DEFAULT_CAP: u64 = 1 << 24;

/// Outcome of a check that carries a counterexample when it fails.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<W> {
    Pass,
    Fail(W),
}

impl<W> Verdict<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}
