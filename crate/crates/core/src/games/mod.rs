//! Multi-party guessing games: exact success probabilities of a process
//! with local strategies, and causal bounds by exhaustive search.
//!
//! Each party `k` receives a private input `a_k` and, when the game has one,
//! the shared input `m`. Local strategies see the two combined into one game
//! input `u_k = a_k * |M| + m`.

pub mod format;
mod presets;

pub use presets::{builtin_game, constant_zero, copy_forward, game2_strategies, strategy_preset, GAMES, STRATEGIES};

use num_traits::{One, Zero};

use crate::classical::{induced_distribution, ClassicalProcess, LocalStrategy, PartySpec, PartyStrategy};
use crate::exact::{checked_product, ensure_within_cap, sum, MixedRadix, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSpec {
    name: String,
    parties: Vec<String>,
    private_dists: Vec<Vec<Rational>>,
    output_sizes: Vec<usize>,
    shared_dist: Vec<Rational>,
    /// Indexed by `(m, a, x)` flattened with `m` most significant.
    win: Vec<bool>,
}

fn check_distribution(what: &str, dist: &[Rational]) -> Result<()> {
    if dist.is_empty() {
        return Err(Error::Invalid(format!("{what} has an empty alphabet")));
    }
    if dist.iter().any(|p| *p < Rational::zero()) || !sum(dist).is_one() {
        return Err(Error::Invalid(format!("{what} is not a probability distribution")));
    }
    Ok(())
}

impl GameSpec {
    /// `win(m, a, x)` is evaluated once for every combination.
    pub fn new(
        name: impl Into<String>,
        parties: Vec<String>,
        private_dists: Vec<Vec<Rational>>,
        output_sizes: Vec<usize>,
        shared_dist: Vec<Rational>,
        win: impl Fn(usize, &[usize], &[usize]) -> bool,
    ) -> Result<Self> {
        let n = parties.len();
        if n == 0 || private_dists.len() != n || output_sizes.len() != n {
            return Err(Error::Dimension("need one input distribution and output size per party".into()));
        }
        for (p, d) in parties.iter().zip(&private_dists) {
            check_distribution(&format!("input of '{p}'"), d)?;
        }
        check_distribution("shared input", &shared_dist)?;
        if output_sizes.contains(&0) {
            return Err(Error::Invalid("output alphabets must be non-empty".into()));
        }
        let private_sizes: Vec<usize> = private_dists.iter().map(Vec::len).collect();
        let mut table = Vec::new();
        for m in 0..shared_dist.len() {
            for a in MixedRadix::new(&private_sizes).tuples() {
                for x in MixedRadix::new(&output_sizes).tuples() {
                    table.push(win(m, &a, &x));
                }
            }
        }
        Ok(Self { name: name.into(), parties, private_dists, output_sizes, shared_dist, win: table })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parties(&self) -> &[String] {
        &self.parties
    }

    pub fn party_count(&self) -> usize {
        self.parties.len()
    }

    pub fn private_sizes(&self) -> Vec<usize> {
        self.private_dists.iter().map(Vec::len).collect()
    }

    pub fn private_dists(&self) -> &[Vec<Rational>] {
        &self.private_dists
    }

    pub fn output_sizes(&self) -> &[usize] {
        &self.output_sizes
    }

    pub fn shared_size(&self) -> usize {
        self.shared_dist.len()
    }

    pub fn shared_dist(&self) -> &[Rational] {
        &self.shared_dist
    }

    /// Size of the combined game input each strategy sees.
    pub fn game_input_sizes(&self) -> Vec<usize> {
        self.private_sizes().iter().map(|s| s * self.shared_size()).collect()
    }

    pub fn game_input(&self, private: usize, shared: usize) -> usize {
        private * self.shared_size() + shared
    }

    pub fn wins(&self, m: usize, a: &[usize], x: &[usize]) -> bool {
        let ins = MixedRadix::new(&self.private_sizes());
        let outs = MixedRadix::new(&self.output_sizes);
        self.win[(m * ins.len() + ins.flatten(a)) * outs.len() + outs.flatten(x)]
    }

    /// Probability of the private inputs `a`.
    pub fn input_probability(&self, a: &[usize]) -> Rational {
        a.iter().zip(&self.private_dists).map(|(&v, d)| d[v].clone()).product()
    }

    /// Output tuples that win for `(m, a)`.
    pub fn winning_outputs(&self, m: usize, a: &[usize]) -> Vec<Vec<usize>> {
        MixedRadix::new(&self.output_sizes).tuples().filter(|x| self.wins(m, a, x)).collect()
    }

    /// Combines the game with environment alphabets into party specs.
    pub fn party_specs(&self, env: &[(usize, usize)]) -> Vec<PartySpec> {
        self.parties
            .iter()
            .zip(env)
            .zip(self.game_input_sizes().into_iter().zip(&self.output_sizes))
            .map(|((name, &(i, o)), (u, &x))| PartySpec::new(name.clone(), i, o).with_game(u, x))
            .collect()
    }
}

/// Exact success probability with its breakdown by shared input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameResult {
    pub success: Rational,
    /// Success probability conditioned on each shared value.
    pub per_shared: Vec<Rational>,
}

/// Exact success probability of the strategies on the process.
pub fn play(game: &GameSpec, process: &ClassicalProcess, strategy: &LocalStrategy) -> Result<GameResult> {
    let n = game.party_count();
    if strategy.parties().len() != n {
        return Err(Error::Dimension(format!("{} strategies for a {n}-party game", strategy.parties().len())));
    }
    for (k, s) in strategy.parties().iter().enumerate() {
        if s.game_in() != game.game_input_sizes()[k] || s.game_out() != game.output_sizes[k] {
            return Err(Error::Dimension(format!(
                "strategy for '{}' maps {} game inputs to {} outputs, game needs {} to {}",
                game.parties[k],
                s.game_in(),
                s.game_out(),
                game.game_input_sizes()[k],
                game.output_sizes[k]
            )));
        }
    }
    let outs = MixedRadix::new(&game.output_sizes);
    let privates = MixedRadix::new(&game.private_sizes());
    let mut per_shared = Vec::with_capacity(game.shared_size());
    for m in 0..game.shared_size() {
        let mut value = Rational::zero();
        for a in privates.tuples() {
            let pa = game.input_probability(&a);
            if pa.is_zero() {
                continue;
            }
            let codes: Vec<usize> = a.iter().map(|&v| game.game_input(v, m)).collect();
            let dist = induced_distribution(process, strategy, &codes)?;
            let won: Rational =
                dist.iter().enumerate().filter(|(x, _)| game.wins(m, &a, &outs.unflatten(*x))).map(|(_, p)| p).sum();
            value += pa * won;
        }
        per_shared.push(value);
    }
    let success = per_shared.iter().zip(&game.shared_dist).map(|(v, p)| v * p).sum();
    Ok(GameResult { success, per_shared })
}

/// One decision point of a causal strategy: `party` acts next and, for each
/// of its private inputs, produces an output and hands over to the next
/// decision point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub party: usize,
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub output: usize,
    pub next: Option<Box<Node>>,
}

/// A deterministic strategy with a dynamic causal order. The first party is
/// the same for every shared value; later parties are chosen from, and see,
/// everything that happened before them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalStrategy {
    pub first: usize,
    /// The decision tree for each shared value; every root is `first`.
    pub per_shared: Vec<Node>,
}

impl CausalStrategy {
    /// Outputs and the order in which the parties act, for one input.
    pub fn run(&self, m: usize, a: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut x = vec![0; a.len()];
        let mut order = Vec::with_capacity(a.len());
        let mut node = Some(&self.per_shared[m]);
        while let Some(current) = node {
            let branch = &current.branches[a[current.party]];
            x[current.party] = branch.output;
            order.push(current.party);
            node = branch.next.as_deref();
        }
        (x, order)
    }

    /// Success probability computed by running the tree on every input.
    pub fn evaluate(&self, game: &GameSpec) -> GameResult {
        let privates = MixedRadix::new(&game.private_sizes());
        let per_shared: Vec<Rational> = (0..game.shared_size())
            .map(|m| {
                privates
                    .tuples()
                    .filter(|a| game.wins(m, a, &self.run(m, a).0))
                    .map(|a| game.input_probability(&a))
                    .sum()
            })
            .collect();
        let success = per_shared.iter().zip(&game.shared_dist).map(|(v, p)| v * p).sum();
        GameResult { success, per_shared }
    }

    /// Whether every root is the first party and every path visits each
    /// party exactly once.
    pub fn is_well_formed(&self, game: &GameSpec) -> bool {
        fn check(node: &Node, seen: &mut Vec<bool>, game: &GameSpec) -> bool {
            if node.party >= seen.len() || seen[node.party] {
                return false;
            }
            if node.branches.len() != game.private_sizes()[node.party] {
                return false;
            }
            seen[node.party] = true;
            let ok = node.branches.iter().all(|b| {
                b.output < game.output_sizes[node.party]
                    && match &b.next {
                        Some(next) => check(next, seen, game),
                        None => seen.iter().all(|&s| s),
                    }
            });
            seen[node.party] = false;
            ok
        }
        self.per_shared.len() == game.shared_size()
            && self.per_shared.iter().all(|root| {
                root.party == self.first && check(root, &mut vec![false; game.party_count()], game)
            })
    }
}

/// The causal bound and a strategy attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalBound {
    pub result: GameResult,
    pub strategy: CausalStrategy,
}

/// Maximum success over deterministic strategies with a dynamic causal
/// order in which every party sees the inputs and outputs of all parties
/// acting before it.
///
/// The first party cannot depend on any input, so it is fixed across shared
/// values; everything after it may depend on the shared value. Randomising
/// over strategies cannot beat the best deterministic one. Ties go to the
/// lowest party index and then the lowest output.
pub fn causal_bound(game: &GameSpec, cap: u64) -> Result<CausalBound> {
    let n = game.party_count();
    // Every leaf of the search is one order of parties with one input and
    // output per party.
    let per_party = (0..n).map(|k| Some((game.private_sizes()[k] * game.output_sizes[k]) as u128));
    let leaves = checked_product(
        per_party
            .chain((1..=n).map(|k| Some(k as u128)))
            .chain(std::iter::once(Some(game.shared_size() as u128))),
    );
    ensure_within_cap(leaves, cap)?;

    let mut best: Option<(Rational, usize, Vec<(Rational, Node)>)> = None;
    for first in 0..n {
        let trees: Vec<(Rational, Node)> = (0..game.shared_size())
            .map(|m| {
                let mut known = vec![None; n];
                act(game, m, first, &mut known)
            })
            .collect();
        let value: Rational = trees.iter().zip(&game.shared_dist).map(|((v, _), p)| v * p).sum();
        if best.as_ref().map_or(true, |(b, _, _)| value > *b) {
            best = Some((value, first, trees));
        }
    }
    let (success, first, trees) = best.expect("at least one party");
    let (per_shared, roots) = trees.into_iter().unzip();
    Ok(CausalBound {
        result: GameResult { success, per_shared },
        strategy: CausalStrategy { first, per_shared: roots },
    })
}

/// Best expected win when `party` acts next, given the inputs and outputs
/// in `known`. Returns the value and the decision node.
fn act(game: &GameSpec, m: usize, party: usize, known: &mut Vec<Option<(usize, usize)>>) -> (Rational, Node) {
    let mut value = Rational::zero();
    let mut branches = Vec::with_capacity(game.private_sizes()[party]);
    for (a, pa) in game.private_dists[party].iter().enumerate() {
        let mut best: Option<(Rational, Branch)> = None;
        for x in 0..game.output_sizes[party] {
            known[party] = Some((a, x));
            let (v, next) = continue_from(game, m, known);
            if best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, Branch { output: x, next: next.map(Box::new) }));
            }
        }
        known[party] = None;
        let (v, branch) = best.expect("non-empty output alphabet");
        value += pa * v;
        branches.push(branch);
    }
    (value, Node { party, branches })
}

fn continue_from(game: &GameSpec, m: usize, known: &mut Vec<Option<(usize, usize)>>) -> (Rational, Option<Node>) {
    if known.iter().all(Option::is_some) {
        let (a, x): (Vec<usize>, Vec<usize>) = known.iter().map(|k| k.expect("all known")).unzip();
        let v = if game.wins(m, &a, &x) { Rational::one() } else { Rational::zero() };
        return (v, None);
    }
    let mut best: Option<(Rational, Node)> = None;
    for next in 0..known.len() {
        if known[next].is_none() {
            let (v, node) = act(game, m, next, known);
            if best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, node));
            }
        }
    }
    let (v, node) = best.expect("some party unknown");
    (v, Some(node))
}

/// A causal process and local strategies that reproduce a causal strategy
/// exactly when played.
///
/// Each party returns its game input to the environment. Its environment
/// input lists, for every other party, `0` if that party does not act
/// before it and `1 + u` if it does, where `u` is that party's game input.
/// The process follows the decision tree to determine who acts before whom.
pub fn realize(game: &GameSpec, strategy: &CausalStrategy, cap: u64) -> Result<(ClassicalProcess, LocalStrategy)> {
    if !strategy.is_well_formed(game) {
        return Err(Error::Invalid("malformed causal strategy".into()));
    }
    let n = game.party_count();
    let codes = game.game_input_sizes();
    let history_sizes: Vec<Vec<usize>> =
        (0..n).map(|k| (0..n).filter(|&j| j != k).map(|j| codes[j] + 1).collect()).collect();
    let env_in: Vec<usize> = history_sizes.iter().map(|s| s.iter().product()).collect();
    let rows = checked_product(env_in.iter().map(|&s| Some(s as u128)));
    let cols = checked_product(codes.iter().map(|&s| Some(s as u128)));
    ensure_within_cap(rows.and_then(|r| cols.and_then(|c| r.checked_mul(c))), cap)?;

    let env: Vec<(usize, usize)> = env_in.iter().zip(&codes).map(|(&i, &o)| (i, o)).collect();
    let parties = game.party_specs(&env);
    let shared = game.shared_size();
    let history = |k: usize, before: &[usize], u: &[usize]| {
        let digits: Vec<usize> = (0..n)
            .filter(|&j| j != k)
            .map(|j| if before.contains(&j) { u[j] + 1 } else { 0 })
            .collect();
        MixedRadix::new(&history_sizes[k]).flatten(&digits)
    };

    let process = ClassicalProcess::deterministic(parties, |u| {
        let m = u[strategy.first] % shared;
        let a: Vec<usize> = u.iter().map(|&v| v / shared).collect();
        let (_, order) = strategy.run(m, &a);
        (0..n).map(|k| {
            let pos = order.iter().position(|&p| p == k).expect("every party acts");
            history(k, &order[..pos], u)
        })
        .collect()
    })?;

    let locals = (0..n)
        .map(|k| {
            PartyStrategy::deterministic(codes[k], env_in[k], game.output_sizes[k], codes[k], |u, i| {
                let digits = MixedRadix::new(&history_sizes[k]).unflatten(i);
                let mut seen = vec![None; n];
                for (j, d) in (0..n).filter(|&j| j != k).zip(digits) {
                    seen[j] = d.checked_sub(1);
                }
                seen[k] = Some(u);
                (decide(strategy, shared, k, &seen), u)
            })
        })
        .collect();
    Ok((process, LocalStrategy::new(locals)))
}

/// Party `k`'s output given the game inputs it has seen. Histories that the
/// tree cannot produce get output 0.
fn decide(strategy: &CausalStrategy, shared: usize, k: usize, seen: &[Option<usize>]) -> usize {
    let m = seen[k].expect("own input") % shared;
    let mut node = &strategy.per_shared[m];
    loop {
        let Some(u) = seen[node.party] else { return 0 };
        let branch = &node.branches[u / shared];
        if node.party == k {
            return branch.output;
        }
        match &branch.next {
            Some(next) => node = next,
            None => return 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::presets::{circular_mixture, identity_chain, majority};
    use crate::classical::is_logically_consistent;
    use crate::exact::{int, rat};
    use crate::DEFAULT_CAP;
    use proptest::prelude::*;

    #[test]
    fn game3_truth_table() {
        let g = builtin_game("game3").unwrap();
        let table = [
            ([0, 0, 0], [0, 0, 0]),
            ([0, 0, 1], [1, 0, 0]),
            ([0, 1, 0], [0, 0, 1]),
            ([0, 1, 1], [0, 0, 1]),
            ([1, 0, 0], [0, 1, 0]),
            ([1, 0, 1], [1, 0, 0]),
            ([1, 1, 0], [0, 1, 0]),
            ([1, 1, 1], [0, 0, 0]),
        ];
        for (a, x) in table {
            assert_eq!(g.winning_outputs(0, &a), vec![x.to_vec()], "inputs {a:?}");
        }
    }

    #[test]
    fn game2_clauses() {
        let g = builtin_game("game2").unwrap();
        // m = 1: only y = a xor c matters.
        for a in MixedRadix::new(&[2, 2, 2]).tuples() {
            for x in MixedRadix::new(&[2, 2, 2]).tuples() {
                assert_eq!(g.wins(1, &a, &x), x[1] == a[0] ^ a[2]);
                assert_eq!(g.wins(0, &a, &x), x[0] == a[1] ^ a[2]);
            }
        }
    }

    #[test]
    fn perfect_plays() {
        let g2 = builtin_game("game2").unwrap();
        let r = play(&g2, &circular_mixture(), &game2_strategies()).unwrap();
        assert_eq!(r.success, int(1));
        assert_eq!(r.per_shared, vec![int(1); 3]);
        let g3 = builtin_game("game3").unwrap();
        assert_eq!(play(&g3, &majority(), &copy_forward(3)).unwrap().success, int(1));
    }

    #[test]
    fn game2_strategy_guesses_parity() {
        let s = game2_strategies();
        let g = builtin_game("game2").unwrap();
        let outs = MixedRadix::new(&[2, 2, 2]);
        for a in MixedRadix::new(&[2, 2, 2]).tuples() {
            let codes: Vec<usize> = a.iter().map(|&v| g.game_input(v, 0)).collect();
            let d = induced_distribution(&circular_mixture(), &s, &codes).unwrap();
            let x: Rational = (0..8).filter(|&k| outs.unflatten(k)[0] == a[1] ^ a[2]).map(|k| d[k].clone()).sum();
            assert_eq!(x, int(1));
        }
    }

    #[test]
    fn constant_zero_on_game3_wins_two_rows() {
        let g = builtin_game("game3").unwrap();
        // Independent count: rows of the truth table whose required
        // outputs are all zero.
        let rows = MixedRadix::new(&[2, 2, 2])
            .tuples()
            .filter(|a| g.winning_outputs(0, a).contains(&vec![0, 0, 0]))
            .count();
        assert_eq!(rows, 2);
        for p in [majority(), identity_chain(), circular_mixture()] {
            let s = constant_zero(&g, &p);
            assert_eq!(play(&g, &p, &s).unwrap().success, rat(rows as i64, 8));
        }
    }

    #[test]
    fn bounds() {
        for (name, value) in [("game1", rat(3, 4)), ("game2", rat(5, 6)), ("game3", rat(3, 4))] {
            let g = builtin_game(name).unwrap();
            let b = causal_bound(&g, DEFAULT_CAP).unwrap();
            assert_eq!(b.result.success, value, "{name}");
            assert!(b.strategy.is_well_formed(&g));
            assert_eq!(b.strategy.evaluate(&g), b.result, "{name}");
        }
    }

    #[test]
    fn realized_bound_strategies_play_the_bound() {
        for name in ["game1", "game3"] {
            let g = builtin_game(name).unwrap();
            let b = causal_bound(&g, DEFAULT_CAP).unwrap();
            let (process, strategy) = realize(&g, &b.strategy, DEFAULT_CAP).unwrap();
            assert_eq!(play(&g, &process, &strategy).unwrap(), b.result, "{name}");
        }
        let g2 = builtin_game("game2").unwrap();
        let b = causal_bound(&g2, DEFAULT_CAP).unwrap();
        assert!(matches!(realize(&g2, &b.strategy, DEFAULT_CAP), Err(Error::EnumerationTooLarge { .. })));
    }

    #[test]
    fn realized_game1_process_is_consistent() {
        let g = builtin_game("game1").unwrap();
        let b = causal_bound(&g, DEFAULT_CAP).unwrap();
        let (process, _) = realize(&g, &b.strategy, DEFAULT_CAP).unwrap();
        assert!(is_logically_consistent(&process, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let g = builtin_game("game2").unwrap();
        assert!(matches!(causal_bound(&g, 100), Err(Error::EnumerationTooLarge { .. })));
    }

    #[test]
    fn play_is_invariant_under_party_relabelling() {
        // Rotate (R, S, T) to (S, T, R) in the game, the process and the
        // strategies together.
        let g = builtin_game("game2").unwrap();
        let rot = |v: &[usize]| vec![v[1], v[2], v[0]];
        let rotated_game = GameSpec::new(
            "game2-rotated",
            rot(&[0, 1, 2]).iter().map(|&k| g.parties()[k].clone()).collect(),
            vec![vec![rat(1, 2); 2]; 3],
            vec![2, 2, 2],
            g.shared_dist().to_vec(),
            |m, a, x| {
                // a, x are in rotated order (S, T, R); undo it.
                let a0 = [a[2], a[0], a[1]];
                let x0 = [x[2], x[0], x[1]];
                g.wins(m, &a0, &x0)
            },
        )
        .unwrap();
        let e = circular_mixture();
        let parties = rot(&[0, 1, 2]).iter().map(|&k| e.parties()[k].clone()).collect();
        let bits = MixedRadix::new(&[2, 2, 2]);
        let mut entries = Vec::new();
        for i in bits.tuples() {
            for o in bits.tuples() {
                entries.push((rot(&i), rot(&o), e.probability(&i, &o).clone()));
            }
        }
        let rotated_process = ClassicalProcess::from_entries(parties, entries).unwrap();
        let s = game2_strategies();
        let rotated_strategy = LocalStrategy::new(rot(&[0, 1, 2]).iter().map(|&k| s.parties()[k].clone()).collect());
        assert_eq!(
            play(&rotated_game, &rotated_process, &rotated_strategy).unwrap(),
            play(&g, &e, &s).unwrap()
        );
    }

    fn random_tree(game: &GameSpec, first: usize, choices: &[usize]) -> CausalStrategy {
        fn build(game: &GameSpec, party: usize, remaining: Vec<usize>, choices: &[usize], pos: &mut usize) -> Node {
            let mut branches = Vec::new();
            for _ in 0..game.private_sizes()[party] {
                let output = choices[*pos % choices.len()] % game.output_sizes()[party];
                *pos += 1;
                let next = if remaining.is_empty() {
                    None
                } else {
                    let idx = choices[*pos % choices.len()] % remaining.len();
                    *pos += 1;
                    let mut rest = remaining.clone();
                    let next_party = rest.remove(idx);
                    Some(Box::new(build(game, next_party, rest, choices, pos)))
                };
                branches.push(Branch { output, next });
            }
            Node { party, branches }
        }
        let mut pos = 0;
        let rest: Vec<usize> = (0..game.party_count()).filter(|&k| k != first).collect();
        let per_shared = (0..game.shared_size())
            .map(|_| build(game, first, rest.clone(), choices, &mut pos))
            .collect();
        CausalStrategy { first, per_shared }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Every explicitly built causal strategy stays at or below the
        // bound.
        #[test]
        fn bound_dominates_causal_strategies(
            which in 0usize..3,
            first in 0usize..3,
            choices in prop::collection::vec(0usize..64, 1..200),
        ) {
            let g = builtin_game(["game1", "game2", "game3"][which]).unwrap();
            let first = first % g.party_count();
            let tree = random_tree(&g, first, &choices);
            prop_assert!(tree.is_well_formed(&g));
            let bound = causal_bound(&g, DEFAULT_CAP).unwrap();
            let value = tree.evaluate(&g).success;
            prop_assert!(value >= int(0) && value <= int(1));
            prop_assert!(value <= bound.result.success);
        }

        // Deterministic strategies on a causal process cannot beat the
        // bound either.
        #[test]
        fn identity_chain_stays_below_game3_bound(
            tables in prop::collection::vec(prop::collection::vec((0usize..2, 0usize..2), 4), 3)
        ) {
            let g = builtin_game("game3").unwrap();
            let s = LocalStrategy::new(
                tables.iter().map(|t| PartyStrategy::deterministic(2, 2, 2, 2, |a, i| t[a * 2 + i])).collect(),
            );
            let r = play(&g, &identity_chain(), &s).unwrap();
            prop_assert!(r.success <= rat(3, 4));
        }
    }
}
