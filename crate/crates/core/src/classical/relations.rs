use num_traits::Zero;
use rayon::prelude::*;

use super::{
    consistency, induced_conditional, ClassicalProcess, ConditionalDistribution, LocalStrategy, PartyStrategy,
};
use crate::exact::{checked_pow, checked_product, ensure_within_cap, MixedRadix, Rational};
use crate::{Error, Result};

/// Party-level causal relations read off a conditional distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalRelationReport {
    /// `correlated[p][q]`: party `p`'s input is correlated with party `q`'s
    /// output. The diagonal is always false.
    pub correlated: Vec<Vec<bool>>,
    /// Pairs `(p, q)` with `p` in the causal past of `q`: `p`'s input is
    /// correlated with `q`'s output and `q`'s input is not correlated with
    /// `p`'s output.
    pub precedes: Vec<(usize, usize)>,
    /// Some party's output is uncorrelated with every other party's input.
    pub some_party_unaffected: bool,
}

impl CausalRelationReport {
    pub fn precedes(&self, p: usize, q: usize) -> bool {
        self.precedes.contains(&(p, q))
    }

    /// Parties whose output no other party's input influences.
    pub fn unaffected_parties(&self) -> Vec<usize> {
        let n = self.correlated.len();
        (0..n).filter(|&q| (0..n).all(|p| !self.correlated[p][q])).collect()
    }
}

/// Decides, for every ordered pair of parties, whether varying the first
/// party's input changes the second party's output marginal.
///
/// Correlation is tested by comparing `P(x_q | a)` and `P(x_q | a')` for all
/// joint inputs `a`, `a'` that differ only in coordinate `p`. A fully
/// supported input distribution correlates `a_p` with `x_q` exactly when such
/// a pair exists, so this is the existential reading of correlation. Averaging
/// over the other inputs first would miss dependence that cancels on
/// average, such as `x = b xor c`.
pub fn infer_relations(dist: &ConditionalDistribution) -> CausalRelationReport {
    let n = dist.parties();
    let ins = dist.input_radix().clone();
    let mut correlated = vec![vec![false; n]; n];
    for a in ins.tuples() {
        let marginals: Vec<Vec<Rational>> = (0..n).map(|q| dist.output_marginal(q, &a)).collect();
        for p in 0..n {
            // Only compare against larger values of a_p; the pair is symmetric.
            for v in a[p] + 1..ins.sizes()[p] {
                let mut b = a.clone();
                b[p] = v;
                for q in 0..n {
                    if q != p && !correlated[p][q] && dist.output_marginal(q, &b) != marginals[q] {
                        correlated[p][q] = true;
                    }
                }
            }
        }
    }
    let mut precedes = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if p != q && correlated[p][q] && !correlated[q][p] {
                precedes.push((p, q));
            }
        }
    }
    let some_party_unaffected = (0..n).any(|q| (0..n).all(|p| !correlated[p][q]));
    CausalRelationReport { correlated, precedes, some_party_unaffected }
}

/// Result of [`classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Every deterministic strategy tuple leaves some party's output
    /// uninfluenced by the other parties' inputs.
    Causal { strategies_checked: u64 },
    /// A deterministic strategy tuple under which every party's output
    /// depends on another party's input.
    NonCausal { strategy: LocalStrategy, report: CausalRelationReport },
}

impl Classification {
    pub fn is_causal(&self) -> bool {
        matches!(self, Classification::Causal { .. })
    }
}

/// Decides whether some deterministic local strategies make every party's
/// output depend on another party's input, using the game alphabets in the
/// process's [`PartySpec`](super::PartySpec)s.
///
/// A deterministic strategy splits into the environment part
/// `g_k(a_k, i_k) = o_k` and the game part `x_k = h_k(a_k, i_k)`. Only the
/// environment parts shape `P(i | a) = E(i | g(a, i))`, and a suitable `h_k`
/// makes `x_k` depend on `a_q` exactly when `P(i_k | a)` changes with `a_q`
/// (and `x_k` has at least two values). So the search runs over the `g`
/// tuples alone and builds the game parts for the witness, which is then
/// re-checked through [`induced_conditional`] and [`infer_relations`].
///
/// Fails with [`Error::Inconsistent`] for a logically inconsistent process.
pub fn classify(process: &ClassicalProcess, cap: u64) -> Result<Classification> {
    if !consistency(process, cap)?.is_consistent() {
        return Err(Error::Inconsistent);
    }
    let parties = process.parties();
    let maps_per_party = |p: &super::PartySpec| checked_pow(p.env_out, p.game_in * p.env_in);
    let count = ensure_within_cap(checked_product(parties.iter().map(maps_per_party)), cap)?;
    // Within the cap, so every factor fits in usize.
    let per_party: Vec<usize> = parties.iter().map(|p| maps_per_party(p).unwrap() as usize).collect();
    let radix = MixedRadix::new(&per_party);
    let found = (0..radix.len()).into_par_iter().find_map_first(|t| {
        let maps: Vec<Vec<usize>> = radix
            .unflatten(t)
            .iter()
            .zip(parties)
            .map(|(&code, p)| {
                MixedRadix::new(&vec![p.env_out; p.game_in * p.env_in]).unflatten(code)
            })
            .collect();
        signalling_witness(process, &maps)
    });
    match found {
        None => Ok(Classification::Causal { strategies_checked: count }),
        Some(strategy) => {
            let report = infer_relations(&induced_conditional(process, &strategy)?);
            debug_assert!(!report.some_party_unaffected);
            if report.some_party_unaffected {
                return Err(Error::Invalid("constructed witness failed re-verification".into()));
            }
            Ok(Classification::NonCausal { strategy, report })
        }
    }
}

/// For environment maps `maps[k][a_k * env_in + i_k] = o_k`, returns full
/// strategies witnessing that every party is signalled, if they exist.
fn signalling_witness(process: &ClassicalProcess, maps: &[Vec<usize>]) -> Option<LocalStrategy> {
    let parties = process.parties();
    let n = parties.len();
    let games = MixedRadix::new(&parties.iter().map(|p| p.game_in).collect::<Vec<_>>());
    let in_radix = process.in_radix();
    let out_radix = process.out_radix();
    // marginals[a][k][i_k] = P(i_k | a).
    let marginals: Vec<Vec<Vec<Rational>>> = games
        .tuples()
        .map(|a| {
            let mut m: Vec<Vec<Rational>> = parties.iter().map(|p| vec![Rational::zero(); p.env_in]).collect();
            for (r, i) in in_radix.tuples().enumerate() {
                let o: Vec<usize> =
                    (0..n).map(|k| maps[k][a[k] * parties[k].env_in + i[k]]).collect();
                let p = process.table().get(r, out_radix.flatten(&o));
                if !p.is_zero() {
                    for k in 0..n {
                        m[k][i[k]] += p;
                    }
                }
            }
            m
        })
        .collect();

    // For each party, the first pair of inputs differing in another
    // coordinate that changes its marginal.
    let mut sets = Vec::with_capacity(n);
    for k in 0..n {
        if parties[k].game_out < 2 {
            return None;
        }
        let mut found = None;
        'search: for a in games.tuples() {
            for q in (0..n).filter(|&q| q != k) {
                for v in a[q] + 1..games.sizes()[q] {
                    let mut b = a.clone();
                    b[q] = v;
                    let (ma, mb) = (&marginals[games.flatten(&a)][k], &marginals[games.flatten(&b)][k]);
                    if ma != mb {
                        found = Some(ma.iter().zip(mb).map(|(x, y)| x > y).collect::<Vec<bool>>());
                        break 'search;
                    }
                }
            }
        }
        sets.push(found?);
    }
    let strategies = parties
        .iter()
        .zip(maps)
        .zip(sets)
        .map(|((p, g), set)| {
            PartyStrategy::deterministic(p.game_in, p.env_in, p.game_out, p.env_out, |a, i| {
                (usize::from(set[i]), g[a * p.env_in + i])
            })
        })
        .collect();
    Some(LocalStrategy::new(strategies))
}

#[cfg(test)]
mod tests {
    use super::super::presets::*;
    use super::super::{is_logically_consistent, PartySpec};
    use super::*;
    use crate::exact::{int, rat};
    use crate::DEFAULT_CAP;
    use proptest::prelude::*;

    #[test]
    fn one_way_signalling() {
        let r = infer_relations(&one_way_signaling());
        // Party 1 (S) is in the causal past of party 0 (R).
        assert_eq!(r.precedes, vec![(1, 0)]);
        assert!(r.some_party_unaffected);
        assert_eq!(r.unaffected_parties(), vec![1]);
    }

    #[test]
    fn two_way_signalling() {
        let r = infer_relations(&two_way_signaling());
        assert!(!r.some_party_unaffected);
        assert!(r.precedes.is_empty());
    }

    #[test]
    fn product_distribution_has_no_relations() {
        let d = ConditionalDistribution::from_fn(&[2, 2], &[2, 2], |a, x| {
            let px = if x[0] == a[0] { rat(2, 3) } else { rat(1, 3) };
            let py = if x[1] == a[1] { rat(1, 4) } else { rat(3, 4) };
            px * py
        })
        .unwrap();
        let r = infer_relations(&d);
        assert!(r.precedes.is_empty());
        assert!(r.some_party_unaffected);
    }

    #[test]
    fn parity_dependence_is_detected() {
        // x = b xor c: on average over c, x does not depend on b.
        let d = ConditionalDistribution::from_fn(&[2, 2, 2], &[2, 2, 2], |a, x| {
            if x == [a[1] ^ a[2], 0, 0] {
                int(1)
            } else {
                int(0)
            }
        })
        .unwrap();
        let r = infer_relations(&d);
        assert!(r.correlated[1][0] && r.correlated[2][0]);
    }

    #[test]
    fn classify_presets() {
        assert!(classify(&identity_chain(), DEFAULT_CAP).unwrap().is_causal());
        for p in [majority(), circular_mixture()] {
            let Classification::NonCausal { strategy, report } = classify(&p, DEFAULT_CAP).unwrap() else {
                panic!("expected non-causal")
            };
            assert!(!report.some_party_unaffected);
            assert!(strategy.is_deterministic());
            assert_eq!(report, infer_relations(&induced_conditional(&p, &strategy).unwrap()));
        }
    }

    #[test]
    fn majority_copy_forward_signals_everyone() {
        let s = LocalStrategy::new((0..3).map(|_| PartyStrategy::deterministic(2, 2, 2, 2, |a, i| (i, a))).collect());
        let r = infer_relations(&induced_conditional(&majority(), &s).unwrap());
        assert!(!r.some_party_unaffected);
    }

    #[test]
    fn classify_rejects_inconsistent() {
        assert!(matches!(classify(&two_way_channels(), DEFAULT_CAP), Err(Error::Inconsistent)));
    }

    #[test]
    fn unary_game_output_is_always_causal() {
        let parties: Vec<PartySpec> = majority().parties().iter().map(|p| p.clone().with_game(2, 1)).collect();
        let p = majority().with_parties(parties).unwrap();
        assert!(classify(&p, DEFAULT_CAP).unwrap().is_causal());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // A causal verdict means no sampled deterministic strategy tuple
        // breaks the necessary condition, checked on the full strategy.
        #[test]
        fn causal_verdict_holds_for_sampled_strategies(
            tables in prop::collection::vec(prop::collection::vec((0usize..2, 0usize..2), 4), 3)
        ) {
            let p = identity_chain();
            prop_assert!(is_logically_consistent(&p, DEFAULT_CAP).unwrap());
            let s = LocalStrategy::new(
                tables.iter().map(|t| PartyStrategy::deterministic(2, 2, 2, 2, |a, i| t[a * 2 + i])).collect(),
            );
            let r = infer_relations(&induced_conditional(&p, &s).unwrap());
            prop_assert!(r.some_party_unaffected);
        }
    }
}
