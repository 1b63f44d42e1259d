use num_traits::{One, Zero};

use super::ConditionalDistribution;
use crate::exact::{lp_feasible, Feasibility, LinearSystem, Rational, Relation};
use crate::{Error, Result};

/// `P = p * first + (1 - p) * second` with `first` compatible with `R` before
/// `S` (the `X` marginal ignores `b`) and `second` with `S` before `R` (the
/// `Y` marginal ignores `a`). A component with zero weight is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalDecomposition {
    pub p: Rational,
    pub first: Option<ConditionalDistribution>,
    pub second: Option<ConditionalDistribution>,
}

impl CausalDecomposition {
    /// Recombines the components into one table.
    pub fn reconstruct(&self) -> ConditionalDistribution {
        let reference = self.first.as_ref().or(self.second.as_ref()).expect("at least one component");
        let ins = reference.input_radix().sizes().to_vec();
        let outs = reference.output_radix().sizes().to_vec();
        let q = Rational::one() - &self.p;
        let part = |d: &Option<ConditionalDistribution>, w: &Rational, k: usize| {
            d.as_ref().map_or_else(Rational::zero, |d| w * &d.table()[k])
        };
        let table = (0..reference.table().len())
            .map(|k| part(&self.first, &self.p, k) + part(&self.second, &q, k))
            .collect();
        ConditionalDistribution::new(&ins, &outs, table).expect("convex combination of distributions")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(CausalDecomposition),
    NotMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Exact membership of a two-party distribution `P(x, y | a, b)` in the set
/// of convex combinations of the two causal orders.
///
/// The LP variables are the unnormalised first component `r(x, y | a, b)`
/// with `0 <= r <= P`; the second component is `P - r`. Both must have a
/// mass independent of `(a, b)` and the required no-signalling marginal.
pub fn two_party_causal_membership(dist: &ConditionalDistribution) -> Result<Membership> {
    if dist.parties() != 2 {
        return Err(Error::Dimension(format!("expected two parties, got {}", dist.parties())));
    }
    let ins = dist.input_radix().clone();
    let outs = dist.output_radix().clone();
    let (na, nb) = (ins.sizes()[0], ins.sizes()[1]);
    let (nx, ny) = (outs.sizes()[0], outs.sizes()[1]);
    let cell = |a: usize, b: usize, x: usize, y: usize| ins.flatten(&[a, b]) * outs.len() + outs.flatten(&[x, y]);
    let pr = |a, b, x, y| dist.table()[cell(a, b, x, y)].clone();

    let mut lp = LinearSystem::new();
    let r: Vec<usize> = (0..dist.table().len()).map(|_| lp.add_var(true)).collect();
    let mass = lp.add_var(true);
    for (k, &v) in r.iter().enumerate() {
        lp.add_constraint(vec![(v, Rational::one())], Relation::Le, dist.table()[k].clone());
    }
    let neg = -Rational::one();
    for a in 0..na {
        for b in 0..nb {
            let mut coeffs: Vec<(usize, Rational)> = (0..nx)
                .flat_map(|x| (0..ny).map(move |y| (x, y)))
                .map(|(x, y)| (r[cell(a, b, x, y)], Rational::one()))
                .collect();
            coeffs.push((mass, neg.clone()));
            lp.add_constraint(coeffs, Relation::Eq, Rational::zero());
        }
    }
    // First component: sum_y r(x, y | a, b) = sum_y r(x, y | a, 0).
    for a in 0..na {
        for b in 1..nb {
            for x in 0..nx {
                let mut coeffs = Vec::new();
                for y in 0..ny {
                    coeffs.push((r[cell(a, b, x, y)], Rational::one()));
                    coeffs.push((r[cell(a, 0, x, y)], neg.clone()));
                }
                lp.add_constraint(coeffs, Relation::Eq, Rational::zero());
            }
        }
    }
    // Second component: sum_x (P - r)(x, y | a, b) = sum_x (P - r)(x, y | 0, b).
    for b in 0..nb {
        for a in 1..na {
            for y in 0..ny {
                let mut coeffs = Vec::new();
                let mut rhs = Rational::zero();
                for x in 0..nx {
                    coeffs.push((r[cell(a, b, x, y)], Rational::one()));
                    coeffs.push((r[cell(0, b, x, y)], neg.clone()));
                    rhs += pr(a, b, x, y) - pr(0, b, x, y);
                }
                lp.add_constraint(coeffs, Relation::Eq, rhs);
            }
        }
    }

    let Feasibility::Feasible(solution) = lp_feasible(&lp) else {
        return Ok(Membership::NotMember);
    };
    let p = solution[mass].clone();
    let q = Rational::one() - &p;
    let component = |w: &Rational, value: &dyn Fn(usize) -> Rational| {
        (!w.is_zero()).then(|| {
            let table = (0..r.len()).map(|k| value(k) / w).collect();
            ConditionalDistribution::new(ins.sizes(), outs.sizes(), table).expect("normalised by the mass constraints")
        })
    };
    let first = component(&p, &|k| solution[r[k]].clone());
    let second = component(&q, &|k| &dist.table()[k] - &solution[r[k]]);
    Ok(Membership::Member(CausalDecomposition { p, first, second }))
}

#[cfg(test)]
mod tests {
    use super::super::presets::{one_way_signaling, two_way_signaling};
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn one_way_is_member_with_all_weight_on_s_first() {
        let d = one_way_signaling();
        let Membership::Member(dec) = two_party_causal_membership(&d).unwrap() else {
            panic!("one-way signalling is causal")
        };
        assert_eq!(dec.p, int(0));
        assert!(dec.first.is_none());
        assert_eq!(dec.reconstruct(), d);
    }

    #[test]
    fn two_way_is_not_member() {
        assert_eq!(two_party_causal_membership(&two_way_signaling()).unwrap(), Membership::NotMember);
    }

    #[test]
    fn uniform_noise_is_member() {
        let d = ConditionalDistribution::from_fn(&[2, 2], &[2, 2], |_, _| rat(1, 4)).unwrap();
        let Membership::Member(dec) = two_party_causal_membership(&d).unwrap() else {
            panic!("no-signalling point is causal")
        };
        assert!(dec.p >= int(0) && dec.p <= int(1));
        assert_eq!(dec.reconstruct(), d);
    }

    #[test]
    fn rejects_three_parties() {
        let d = ConditionalDistribution::from_fn(&[1, 1, 1], &[1, 1, 1], |_, _| int(1)).unwrap();
        assert!(two_party_causal_membership(&d).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        // Mixtures of a one-way channel each way plus input-independent
        // noise are members, and the witness reconstructs the input exactly.
        #[test]
        fn mixtures_of_orders_reconstruct(w in 0i64..=6, noise in prop::collection::vec(1i64..5, 4)) {
            let weight = rat(w, 6);
            let total: i64 = noise.iter().sum();
            let d = ConditionalDistribution::from_fn(&[2, 2], &[2, 2], |a, x| {
                let r_first = if x[1] == a[0] { rat(1, 2) } else { int(0) };
                let s_first = if x[0] == a[1] { rat(1, 2) } else { int(0) };
                let n = rat(noise[x[0] * 2 + x[1]], total);
                let base = &weight * r_first + (int(1) - &weight) * s_first;
                base * rat(9, 10) + n * rat(1, 10)
            })
            .unwrap();
            let Membership::Member(dec) = two_party_causal_membership(&d).unwrap() else {
                panic!("mixture of orders must be causal")
            };
            prop_assert_eq!(dec.reconstruct(), d);
        }
    }
}
