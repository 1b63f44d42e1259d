//! Built-in processes and distributions. Parties `R`, `S`, `T` exchange
//! single bits with the environment and have binary game alphabets.

use super::{ClassicalProcess, ConditionalDistribution, PartySpec};
use crate::exact::{int, rat};
use crate::{Error, Result};

fn bits(names: &[&str]) -> Vec<PartySpec> {
    names.iter().map(|n| PartySpec::bit(*n)).collect()
}

fn rst_function(f: impl Fn(usize, usize, usize) -> [usize; 3]) -> ClassicalProcess {
    ClassicalProcess::deterministic(bits(&["R", "S", "T"]), |o| f(o[0], o[1], o[2]).to_vec())
        .expect("bit-valued function")
}

/// `i_R = o_T`, `i_S = o_R`, `i_T = o_S`.
pub fn cyclic_identity() -> ClassicalProcess {
    rst_function(|o, p, q| [q, o, p])
}

/// The cyclic channel with every bit flipped.
pub fn cyclic_flip() -> ClassicalProcess {
    rst_function(|o, p, q| [q ^ 1, o ^ 1, p ^ 1])
}

/// Uniform mixture of [`cyclic_identity`] and [`cyclic_flip`].
pub fn circular_mixture() -> ClassicalProcess {
    ClassicalProcess::mixture(&[(rat(1, 2), &cyclic_identity()), (rat(1, 2), &cyclic_flip())]).expect("same parties")
}

/// `51/100` cyclic identity plus `49/100` cyclic flip.
pub fn perturbed_mixture() -> ClassicalProcess {
    ClassicalProcess::mixture(&[(rat(51, 100), &cyclic_identity()), (rat(49, 100), &cyclic_flip())])
        .expect("same parties")
}

/// Forward cycle when the majority of outputs is 0, inverted backward cycle
/// otherwise.
pub fn majority() -> ClassicalProcess {
    rst_function(|o, p, q| {
        if o + p + q < 2 {
            [q, o, p]
        } else {
            [p ^ 1, q ^ 1, o ^ 1]
        }
    })
}

/// `R` receives 0 and forwards to `S`, which forwards to `T`.
pub fn identity_chain() -> ClassicalProcess {
    rst_function(|o, p, _| [0, o, p])
}

/// Bit channels `R -> S` and `S -> R` at the same time.
pub fn two_way_channels() -> ClassicalProcess {
    ClassicalProcess::deterministic(bits(&["R", "S"]), |o| vec![o[1], o[0]]).expect("bit-valued function")
}

/// One party whose output comes straight back as its input.
pub fn identity_loop() -> ClassicalProcess {
    ClassicalProcess::deterministic(bits(&["P"]), |o| vec![o[0]]).expect("bit-valued function")
}

/// `x = b` with `y` uniform.
pub fn one_way_signaling() -> ConditionalDistribution {
    ConditionalDistribution::from_fn(&[2, 2], &[2, 2], |a, x| if x[0] == a[1] { rat(1, 2) } else { int(0) })
        .expect("normalised")
}

/// `x = b` and `y = a`.
pub fn two_way_signaling() -> ConditionalDistribution {
    ConditionalDistribution::from_fn(&[2, 2], &[2, 2], |a, x| {
        if x[0] == a[1] && x[1] == a[0] {
            int(1)
        } else {
            int(0)
        }
    })
    .expect("normalised")
}

pub const PROCESS_PRESETS: &[&str] = &[
    "circular-mixture",
    "majority",
    "identity-chain",
    "cyclic-identity",
    "cyclic-flip",
    "perturbed-mixture",
    "two-way-channels",
    "identity-loop",
];

pub fn process_preset(name: &str) -> Result<ClassicalProcess> {
    Ok(match name {
        "circular-mixture" => circular_mixture(),
        "majority" => majority(),
        "identity-chain" => identity_chain(),
        "cyclic-identity" => cyclic_identity(),
        "cyclic-flip" => cyclic_flip(),
        "perturbed-mixture" => perturbed_mixture(),
        "two-way-channels" => two_way_channels(),
        "identity-loop" => identity_loop(),
        _ => return Err(Error::Unknown { kind: "process preset", name: name.into() }),
    })
}

pub const DISTRIBUTION_PRESETS: &[&str] = &["one-way-signaling", "two-way-signaling"];

pub fn distribution_preset(name: &str) -> Result<ConditionalDistribution> {
    match name {
        "one-way-signaling" => Ok(one_way_signaling()),
        "two-way-signaling" => Ok(two_way_signaling()),
        _ => Err(Error::Unknown { kind: "distribution preset", name: name.into() }),
    }
}
