use num_traits::{One, Signed, Zero};

use crate::exact::{sum, MixedRadix, Rational};
use crate::{Error, Result};

/// `P(x_1..x_n | a_1..a_n)` over finite alphabets. Row `a` (flattened
/// inputs) holds the distribution over flattened outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalDistribution {
    inputs: MixedRadix,
    outputs: MixedRadix,
    table: Vec<Rational>,
}

impl ConditionalDistribution {
    /// Validates that every row is a probability distribution.
    pub fn new(input_sizes: &[usize], output_sizes: &[usize], table: Vec<Rational>) -> Result<Self> {
        if input_sizes.len() != output_sizes.len() || input_sizes.is_empty() {
            return Err(Error::Dimension("need one input and one output alphabet per party".into()));
        }
        if input_sizes.iter().chain(output_sizes).any(|&s| s == 0) {
            return Err(Error::Invalid("alphabet sizes must be at least 1".into()));
        }
        let inputs = MixedRadix::new(input_sizes);
        let outputs = MixedRadix::new(output_sizes);
        if table.len() != inputs.len() * outputs.len() {
            return Err(Error::Dimension(format!(
                "{} entries, expected {}",
                table.len(),
                inputs.len() * outputs.len()
            )));
        }
        for a in 0..inputs.len() {
            let row = &table[a * outputs.len()..(a + 1) * outputs.len()];
            if row.iter().any(|v| v.is_negative()) {
                return Err(Error::Invalid(format!("negative probability for inputs {:?}", inputs.unflatten(a))));
            }
            let total = sum(row);
            if !total.is_one() {
                return Err(Error::Normalization { total: total.to_string() });
            }
        }
        Ok(Self { inputs, outputs, table })
    }

    pub fn from_fn(
        input_sizes: &[usize],
        output_sizes: &[usize],
        f: impl Fn(&[usize], &[usize]) -> Rational,
    ) -> Result<Self> {
        let inputs = MixedRadix::new(input_sizes);
        let outputs = MixedRadix::new(output_sizes);
        let mut table = Vec::with_capacity(inputs.len() * outputs.len());
        for a in inputs.tuples() {
            for x in outputs.tuples() {
                table.push(f(&a, &x));
            }
        }
        Self::new(input_sizes, output_sizes, table)
    }

    pub fn parties(&self) -> usize {
        self.inputs.sizes().len()
    }

    pub fn input_radix(&self) -> &MixedRadix {
        &self.inputs
    }

    pub fn output_radix(&self) -> &MixedRadix {
        &self.outputs
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn probability(&self, a: &[usize], x: &[usize]) -> &Rational {
        &self.table[self.inputs.flatten(a) * self.outputs.len() + self.outputs.flatten(x)]
    }

    pub fn row(&self, a: &[usize]) -> &[Rational] {
        let k = self.inputs.flatten(a) * self.outputs.len();
        &self.table[k..k + self.outputs.len()]
    }

    /// Distribution of party `party`'s output given the joint inputs.
    pub fn output_marginal(&self, party: usize, a: &[usize]) -> Vec<Rational> {
        let mut m = vec![Rational::zero(); self.outputs.sizes()[party]];
        for (x, p) in self.row(a).iter().enumerate() {
            if !p.is_zero() {
                m[self.outputs.unflatten(x)[party]] += p;
            }
        }
        m
    }
}
