use num_traits::{One, Zero};

use super::{ClassicalProcess, ConditionalDistribution};
use crate::exact::{sum, MixedRadix, Rational, RationalMatrix, StochasticMatrix};
use crate::{Error, Result};

/// A party's local operation: a conditional distribution of
/// `(game output x, environment output o)` given
/// `(game input a, environment input i)`.
///
/// Stored as a column-stochastic matrix with column `a * env_in + i` and
/// row `x * env_out + o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyStrategy {
    game_in: usize,
    env_in: usize,
    game_out: usize,
    env_out: usize,
    matrix: StochasticMatrix,
}

impl PartyStrategy {
    pub fn new(
        game_in: usize,
        env_in: usize,
        game_out: usize,
        env_out: usize,
        matrix: StochasticMatrix,
    ) -> Result<Self> {
        if matrix.cols() != game_in * env_in || matrix.rows() != game_out * env_out {
            return Err(Error::Dimension(format!(
                "strategy matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                game_out * env_out,
                game_in * env_in
            )));
        }
        Ok(Self { game_in, env_in, game_out, env_out, matrix })
    }

    /// Deterministic strategy `(a, i) -> (x, o)`.
    pub fn deterministic(
        game_in: usize,
        env_in: usize,
        game_out: usize,
        env_out: usize,
        f: impl Fn(usize, usize) -> (usize, usize),
    ) -> Self {
        let mut m = RationalMatrix::zeros(game_out * env_out, game_in * env_in);
        for a in 0..game_in {
            for i in 0..env_in {
                let (x, o) = f(a, i);
                assert!(x < game_out && o < env_out, "strategy value out of range");
                m.set(x * env_out + o, a * env_in + i, Rational::one());
            }
        }
        Self {
            game_in,
            env_in,
            game_out,
            env_out,
            matrix: StochasticMatrix::new(m).expect("one entry per column"),
        }
    }

    /// `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &PartyStrategy, weight: &Rational) -> Result<Self> {
        if self.matrix.rows() != other.matrix.rows() || self.matrix.cols() != other.matrix.cols() {
            return Err(Error::Dimension("cannot mix strategies over different alphabets".into()));
        }
        let rest = Rational::one() - weight;
        let entries = self
            .matrix
            .as_matrix()
            .entries()
            .iter()
            .zip(other.matrix.as_matrix().entries())
            .map(|(a, b)| weight * a + &rest * b)
            .collect();
        let m = RationalMatrix::from_rows(self.matrix.rows(), self.matrix.cols(), entries)?;
        Self::new(self.game_in, self.env_in, self.game_out, self.env_out, StochasticMatrix::new(m)?)
    }

    pub fn game_in(&self) -> usize {
        self.game_in
    }

    pub fn env_in(&self) -> usize {
        self.env_in
    }

    pub fn game_out(&self) -> usize {
        self.game_out
    }

    pub fn env_out(&self) -> usize {
        self.env_out
    }

    pub fn matrix(&self) -> &StochasticMatrix {
        &self.matrix
    }

    pub fn probability(&self, x: usize, o: usize, a: usize, i: usize) -> &Rational {
        self.matrix.get(x * self.env_out + o, a * self.env_in + i)
    }

    pub fn is_deterministic(&self) -> bool {
        self.matrix.is_deterministic()
    }

    /// Non-zero `(x, p)` pairs for the given `(o, a, i)`.
    fn outputs_for(&self, o: usize, a: usize, i: usize) -> Vec<(usize, &Rational)> {
        (0..self.game_out)
            .map(|x| (x, self.probability(x, o, a, i)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }
}

/// One local operation per party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalStrategy {
    parties: Vec<PartyStrategy>,
}

impl LocalStrategy {
    pub fn new(parties: Vec<PartyStrategy>) -> Self {
        Self { parties }
    }

    pub fn parties(&self) -> &[PartyStrategy] {
        &self.parties
    }

    pub fn is_deterministic(&self) -> bool {
        self.parties.iter().all(PartyStrategy::is_deterministic)
    }

    pub fn check_compatible(&self, process: &ClassicalProcess) -> Result<()> {
        if self.parties.len() != process.parties().len() {
            return Err(Error::Dimension(format!(
                "{} strategies for {} parties",
                self.parties.len(),
                process.parties().len()
            )));
        }
        for (s, p) in self.parties.iter().zip(process.parties()) {
            if s.env_in != p.env_in || s.env_out != p.env_out {
                return Err(Error::Dimension(format!(
                    "strategy for '{}' uses environment alphabets {}->{}, process has {}->{}",
                    p.name, s.env_in, s.env_out, p.env_in, p.env_out
                )));
            }
        }
        Ok(())
    }

    pub fn game_input_sizes(&self) -> Vec<usize> {
        self.parties.iter().map(|s| s.game_in).collect()
    }

    pub fn game_output_sizes(&self) -> Vec<usize> {
        self.parties.iter().map(|s| s.game_out).collect()
    }
}

/// `P(x | a) = sum_{i,o} prod_k S_k(x_k, o_k | a_k, i_k) * E(i | o)` for one
/// joint input `a`, as a vector over flattened joint outputs.
///
/// Fails with [`Error::Normalization`] when the total is not exactly 1,
/// which only happens for a logically inconsistent process.
pub fn induced_distribution(
    process: &ClassicalProcess,
    strategy: &LocalStrategy,
    inputs: &[usize],
) -> Result<Vec<Rational>> {
    strategy.check_compatible(process)?;
    if inputs.len() != strategy.parties.len()
        || inputs.iter().zip(&strategy.parties).any(|(&a, s)| a >= s.game_in)
    {
        return Err(Error::Dimension(format!("inputs {inputs:?} do not match the strategy alphabets")));
    }
    let outs = MixedRadix::new(&strategy.game_output_sizes());
    let in_radix = process.in_radix();
    let out_radix = process.out_radix();
    let table = process.table();
    let mut dist = vec![Rational::zero(); outs.len()];
    for r in 0..table.rows() {
        let i = in_radix.unflatten(r);
        for c in 0..table.cols() {
            let e = table.get(r, c);
            if e.is_zero() {
                continue;
            }
            let o = out_radix.unflatten(c);
            // Running product over parties of the outcome branches.
            let mut partial: Vec<(usize, Rational)> = vec![(0, e.clone())];
            for (k, s) in strategy.parties.iter().enumerate() {
                let branches = s.outputs_for(o[k], inputs[k], i[k]);
                if branches.is_empty() {
                    partial.clear();
                    break;
                }
                partial = partial
                    .iter()
                    .flat_map(|(x, w)| branches.iter().map(move |(xk, p)| (x * s.game_out + xk, w * *p)))
                    .collect();
            }
            for (x, w) in partial {
                dist[x] += w;
            }
        }
    }
    let total = sum(&dist);
    if !total.is_one() {
        return Err(Error::Normalization { total: total.to_string() });
    }
    Ok(dist)
}

/// [`induced_distribution`] for every joint input.
pub fn induced_conditional(
    process: &ClassicalProcess,
    strategy: &LocalStrategy,
) -> Result<ConditionalDistribution> {
    let ins = MixedRadix::new(&strategy.game_input_sizes());
    let mut table = Vec::new();
    for a in ins.tuples() {
        table.extend(induced_distribution(process, strategy, &a)?);
    }
    ConditionalDistribution::new(&strategy.game_input_sizes(), &strategy.game_output_sizes(), table)
}

#[cfg(test)]
mod tests {
    use super::super::presets::*;
    use super::super::{is_logically_consistent, PartySpec};
    use super::*;
    use crate::exact::{int, rat};
    use crate::DEFAULT_CAP;
    use proptest::prelude::*;

    fn copy_forward(n: usize) -> LocalStrategy {
        LocalStrategy::new((0..n).map(|_| PartyStrategy::deterministic(2, 2, 2, 2, |a, i| (i, a))).collect())
    }

    #[test]
    fn majority_copy_forward_row_001() {
        let d = induced_distribution(&majority(), &copy_forward(3), &[0, 0, 1]).unwrap();
        let outs = MixedRadix::new(&[2, 2, 2]);
        assert_eq!(d[outs.flatten(&[1, 0, 0])], int(1));
    }

    #[test]
    fn ignoring_the_environment_gives_product() {
        // Each party outputs a noisy copy of its input and sends 0.
        let noisy = |p: Rational| {
            let q = Rational::one() - &p;
            let mut m = RationalMatrix::zeros(4, 4);
            for a in 0..2 {
                for i in 0..2 {
                    m.set(a * 2, a * 2 + i, p.clone());
                    m.set((1 - a) * 2, a * 2 + i, q.clone());
                }
            }
            PartyStrategy::new(2, 2, 2, 2, StochasticMatrix::new(m).unwrap()).unwrap()
        };
        let s = LocalStrategy::new(vec![noisy(rat(2, 3)), noisy(rat(3, 4)), noisy(rat(1, 5))]);
        for process in [majority(), circular_mixture(), identity_chain()] {
            let cond = induced_conditional(&process, &s).unwrap();
            for a in MixedRadix::new(&[2, 2, 2]).tuples() {
                for x in MixedRadix::new(&[2, 2, 2]).tuples() {
                    let expected = [rat(2, 3), rat(3, 4), rat(1, 5)]
                        .iter()
                        .zip(a.iter().zip(&x))
                        .map(|(p, (a, x))| if a == x { p.clone() } else { Rational::one() - p })
                        .fold(Rational::one(), |acc, v| acc * v);
                    assert_eq!(cond.probability(&a, &x), &expected);
                }
            }
        }
    }

    #[test]
    fn inconsistent_process_fails_normalisation() {
        let s = LocalStrategy::new(vec![PartyStrategy::deterministic(1, 2, 1, 2, |_, i| (0, i))]);
        assert!(matches!(
            induced_distribution(&identity_loop(), &s, &[0]),
            Err(Error::Normalization { .. })
        ));
    }

    #[test]
    fn mismatched_alphabets_rejected() {
        let s = LocalStrategy::new(vec![PartyStrategy::deterministic(2, 3, 2, 2, |_, _| (0, 0))]);
        assert!(induced_distribution(&identity_loop(), &s, &[0]).is_err());
    }

    fn party_map() -> impl Strategy<Value = Vec<(usize, usize)>> {
        prop::collection::vec((0usize..2, 0usize..2), 4)
    }

    proptest! {
        // Linearity: mixtures of deterministic strategies on a consistent
        // process are still normalised for every input.
        #[test]
        fn mixed_strategies_normalise(
            maps in prop::collection::vec((party_map(), party_map()), 3),
            w in 0i64..=8,
            which in 0usize..3,
        ) {
            let process = [majority(), circular_mixture(), identity_chain()][which].clone();
            prop_assert!(is_logically_consistent(&process, DEFAULT_CAP).unwrap());
            let weight = rat(w, 8);
            let parties: Vec<PartyStrategy> = maps
                .iter()
                .map(|(m1, m2)| {
                    let d1 = PartyStrategy::deterministic(2, 2, 2, 2, |a, i| m1[a * 2 + i]);
                    let d2 = PartyStrategy::deterministic(2, 2, 2, 2, |a, i| m2[a * 2 + i]);
                    d1.mix(&d2, &weight).unwrap()
                })
                .collect();
            let s = LocalStrategy::new(parties);
            prop_assert!(induced_conditional(&process, &s).is_ok());
        }
    }

    #[test]
    fn party_spec_defaults_binary_game() {
        let p = PartySpec::new("R", 3, 4);
        assert_eq!((p.game_in, p.game_out), (2, 2));
    }
}
