use std::sync::Arc;

use num_traits::One;

use super::{evaluate, Circuit, CountingOracle, Gate, Wire};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub value: usize,
    pub queries: u64,
}

/// CNOT-style gate `C` (mod-n addition) with the box `B` in a loop: `C`
/// reads the circuit input `a` and `b = B(y)`, outputs `x = a + b` to the
/// circuit and `y = b` back into `B`.
pub fn fixed_point_circuit(oracle: Arc<CountingOracle>) -> Circuit {
    let n = oracle.size();
    Circuit::new(
        vec![Gate::cnot("C", n), Gate::oracle("B", oracle)],
        vec![Wire { from: (0, 1), to: (1, 0) }, Wire { from: (1, 0), to: (0, 1) }],
        vec![(0, 0)],
        vec![(0, 0)],
    )
    .expect("fixed wiring")
}

/// Evaluates [`fixed_point_circuit`] once with `a = 0`. The total weight is
/// the number of fixed points of the box, so anything but 1 breaks the
/// promise and no value is returned.
pub fn fixed_point_search(oracle: Arc<CountingOracle>, cap: u64) -> Result<SearchResult> {
    let before = oracle.queries();
    let circuit = fixed_point_circuit(oracle.clone());
    let eval = evaluate(&circuit, &[0], cap)?;
    let queries = oracle.queries() - before;
    if !eval.total_weight.is_one() {
        return Err(Error::PromiseViolation { total_weight: eval.total_weight });
    }
    let (x, _) = eval.outputs.iter().next().expect("weight one means one assignment");
    Ok(SearchResult { value: x[0], queries })
}

/// Queries `0, 1, ..., n - 2` in turn and stops at the first fixed point;
/// if there is none so far the promise leaves only `n - 1`.
pub fn baseline_search(oracle: &CountingOracle) -> Result<SearchResult> {
    let before = oracle.queries();
    let n = oracle.size();
    let value = (0..n.saturating_sub(1)).find(|&i| oracle.query(i) == i).unwrap_or(n - 1);
    Ok(SearchResult { value, queries: oracle.queries() - before })
}
