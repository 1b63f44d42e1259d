use super::GameSpec;
use crate::classical::{ClassicalProcess, LocalStrategy, PartyStrategy};
use crate::exact::rat;
use crate::{Error, Result};

pub const GAMES: &[&str] = &["game1", "game2", "game3"];

fn uniform_bits(n: usize) -> Vec<Vec<crate::Rational>> {
    vec![vec![rat(1, 2); 2]; n]
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn builtin_game(name: &str) -> Result<GameSpec> {
    match name {
        // S holds (b, b') encoded as 2b + b'. If b' = 0, R must output b;
        // otherwise S must output a.
        "game1" => GameSpec::new(
            name,
            names(&["R", "S"]),
            vec![vec![rat(1, 2); 2], vec![rat(1, 4); 4]],
            vec![2, 2],
            vec![rat(1, 1)],
            |_, a, x| {
                let (b, b_prime) = (a[1] / 2, a[1] % 2);
                if b_prime == 0 {
                    x[0] == b
                } else {
                    x[1] == a[0]
                }
            },
        ),
        // The shared trit m names the party that must output the parity of
        // the other two inputs.
        "game2" => GameSpec::new(name, names(&["R", "S", "T"]), uniform_bits(3), vec![2, 2, 2], vec![rat(1, 3); 3], |m, a, x| {
            let others: usize = (0..3).filter(|&k| k != m).map(|k| a[k]).sum();
            x[m] == others % 2
        }),
        // Majority 0: guess the neighbour's input one way round; majority
        // 1: guess the other neighbour's inverted input.
        "game3" => GameSpec::new(name, names(&["R", "S", "T"]), uniform_bits(3), vec![2, 2, 2], vec![rat(1, 1)], |_, a, x| {
            let (p, q, r) = (a[0], a[1], a[2]);
            let target = if p + q + r < 2 { [r, p, q] } else { [q ^ 1, r ^ 1, p ^ 1] };
            x == target
        }),
        _ => Err(Error::Unknown { kind: "game", name: name.into() }),
    }
}

/// Every party outputs its environment input and sends its game input.
pub fn copy_forward(n: usize) -> LocalStrategy {
    LocalStrategy::new((0..n).map(|_| PartyStrategy::deterministic(2, 2, 2, 2, |a, i| (i, a))).collect())
}

/// Strategies for the three-party parity game on bit wires. The guesser
/// reads its environment input; the party just before it in the cycle
/// `R -> S -> T -> R` sends its input xor its environment input; the
/// remaining party sends its input.
pub fn game2_strategies() -> LocalStrategy {
    LocalStrategy::new(
        (0..3)
            .map(|k| {
                PartyStrategy::deterministic(6, 2, 2, 2, move |u, i| {
                    let (a, m) = (u / 3, u % 3);
                    if m == k {
                        (i, 0)
                    } else if (k + 1) % 3 == m {
                        (0, i ^ a)
                    } else {
                        (0, a)
                    }
                })
            })
            .collect(),
    )
}

/// Output 0 and send 0, whatever happens.
pub fn constant_zero(game: &GameSpec, process: &ClassicalProcess) -> LocalStrategy {
    LocalStrategy::new(
        game.game_input_sizes()
            .iter()
            .zip(game.output_sizes())
            .zip(process.parties())
            .map(|((&u, &x), p)| PartyStrategy::deterministic(u, p.env_in, x, p.env_out, |_, _| (0, 0)))
            .collect(),
    )
}

pub const STRATEGIES: &[&str] = &["copy-forward", "parity-relay", "constant-zero"];

pub fn strategy_preset(name: &str, game: &GameSpec, process: &ClassicalProcess) -> Result<LocalStrategy> {
    match name {
        "copy-forward" => Ok(copy_forward(game.party_count())),
        "parity-relay" => Ok(game2_strategies()),
        "constant-zero" => Ok(constant_zero(game, process)),
        _ => Err(Error::Unknown { kind: "strategy preset", name: name.into() }),
    }
}
