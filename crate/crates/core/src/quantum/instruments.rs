use num_traits::ToPrimitive;
use rand::Rng;

use super::{
    c, cj_of, identity, ket, partial_trace, pauli_x, pauli_z, probability, projector, Operator, ProcessMatrix,
};
use crate::exact::MixedRadix;
use crate::games::{builtin_game, GameSpec};
use crate::{Error, Result};

/// Local quantum instrument: for every input `a` a family of CP maps indexed
/// by the outcome `x`, stored as transposed Choi operators on `I (x) O`.
#[derive(Clone, Debug, PartialEq)]
pub struct Instrument {
    dim_in: usize,
    dim_out: usize,
    ops: Vec<Vec<Operator>>,
}

impl Instrument {
    /// Takes `ops[a][x]` directly and checks that every `sum_x ops[a][x]` is
    /// trace preserving within `eps`.
    pub fn from_operators(dim_in: usize, dim_out: usize, ops: Vec<Vec<Operator>>, eps: f64) -> Result<Self> {
        let d = dim_in * dim_out;
        if ops.is_empty() || ops.iter().any(Vec::is_empty) {
            return Err(Error::Invalid("instrument needs at least one input and one outcome".into()));
        }
        let outcomes = ops[0].len();
        for family in &ops {
            if family.len() != outcomes {
                return Err(Error::Dimension("every input needs the same number of outcomes".into()));
            }
            if family.iter().any(|o| o.nrows() != d || o.ncols() != d) {
                return Err(Error::Dimension(format!("instrument operators must be {d}x{d}")));
            }
        }
        let ins = Self { dim_in, dim_out, ops };
        for a in 0..ins.inputs() {
            let err = ins.trace_preservation_error(a);
            if err > eps {
                return Err(Error::Invalid(format!(
                    "instrument for input {a} is not trace preserving (deviation {err:.3e})"
                )));
            }
        }
        Ok(ins)
    }

    /// `kraus[a][x]` lists the Kraus operators of the map for outcome `x`.
    pub fn from_kraus(dim_in: usize, dim_out: usize, kraus: &[Vec<Vec<Operator>>], eps: f64) -> Result<Self> {
        let ops = kraus
            .iter()
            .map(|family| family.iter().map(|k| cj_of(k, dim_in, dim_out)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_operators(dim_in, dim_out, ops, eps)
    }

    /// One input, one outcome: apply `u`.
    pub fn unitary(u: &Operator, eps: f64) -> Result<Self> {
        let d = u.nrows();
        if !u.is_square() || (u.adjoint() * u - identity(d)).iter().any(|v| v.norm() > eps) {
            return Err(Error::Invalid("operator is not unitary".into()));
        }
        Self::from_kraus(d, d, &[vec![vec![u.clone()]]], eps)
    }

    /// One input, no output system: the POVM with the given effects.
    pub fn measurement(effects: Vec<Operator>, eps: f64) -> Result<Self> {
        let d = effects.first().map_or(0, |e| e.nrows());
        Self::from_operators(d, 1, vec![effects], eps)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn inputs(&self) -> usize {
        self.ops.len()
    }

    pub fn outcomes(&self) -> usize {
        self.ops[0].len()
    }

    pub fn operator(&self, a: usize, x: usize) -> &Operator {
        &self.ops[a][x]
    }

    /// Largest entry of `Tr_O(sum_x C[a][x]) - 1_I`.
    pub fn trace_preservation_error(&self, a: usize) -> f64 {
        let total: Operator = self.ops[a].iter().sum();
        let marginal = partial_trace(&total, &[self.dim_in, self.dim_out], &[1]);
        (marginal - identity(self.dim_in)).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Local operations for the two-party guessing game on the operator
/// [`w_ocb`](super::w_ocb).
///
/// R measures `sigma_z` to get `x` and prepares `|a>`. S has input
/// `2b + b'`. When `b' = 0` it measures `sigma_x` to get `y` and prepares
/// `|b xor y>`; when `b' = 1` it measures `sigma_z` to get `y` and prepares
/// `rho`.
pub fn ocb_instruments(rho: &Operator, eps: f64) -> Result<[Instrument; 2]> {
    if rho.nrows() != 2 || rho.ncols() != 2 {
        return Err(Error::Dimension("rho must be a qubit operator".into()));
    }
    let half = |sign: f64, p: &Operator| (identity(2) + p * c(sign, 0.)) * c(0.5, 0.);
    let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let r = (0..2)
        .map(|a| (0..2).map(|x| half(sign(x), &pauli_z()).kronecker(&half(sign(a), &pauli_z()))).collect())
        .collect();
    let s = (0..4)
        .map(|u| {
            let (b, b_prime) = (u / 2, u % 2);
            (0..2)
                .map(|y| {
                    if b_prime == 0 {
                        half(sign(y), &pauli_x()).kronecker(&half(sign(b + y), &pauli_z()))
                    } else {
                        half(sign(y), &pauli_z()).kronecker(rho)
                    }
                })
                .collect()
        })
        .collect();
    Ok([Instrument::from_operators(2, 2, r, eps)?, Instrument::from_operators(2, 2, s, eps)?])
}

/// Success probability of `game` when the parties share `w` and use
/// `instruments`, whose inputs are the combined game inputs.
pub fn quantum_game_value(game: &GameSpec, w: &ProcessMatrix, instruments: &[Instrument], eps: f64) -> Result<f64> {
    let sizes = game.game_input_sizes();
    if instruments.len() != game.party_count() {
        return Err(Error::Dimension("need one instrument per game party".into()));
    }
    for (k, ins) in instruments.iter().enumerate() {
        if ins.inputs() != sizes[k] || ins.outcomes() != game.output_sizes()[k] {
            return Err(Error::Dimension(format!("instrument {k} does not match the game's alphabets")));
        }
    }
    let outs = MixedRadix::new(game.output_sizes());
    let mut value = 0.0;
    for (m, pm) in game.shared_dist().iter().enumerate() {
        for a in MixedRadix::new(&game.private_sizes()).tuples() {
            let weight = (pm * game.input_probability(&a)).to_f64().unwrap_or(0.0);
            if weight == 0.0 {
                continue;
            }
            let u: Vec<usize> = a.iter().map(|&ak| game.game_input(ak, m)).collect();
            let dist = probability(w, instruments, &u, eps)?;
            let won: f64 = outs.tuples().zip(&dist).filter(|(x, _)| game.wins(m, &a, x)).map(|(_, p)| p).sum();
            value += weight * won;
        }
    }
    Ok(value)
}

/// Value of the two-party guessing game with [`w_ocb`](super::w_ocb),
/// [`ocb_instruments`] and `rho = 1/2`.
pub fn ocb_value(eps: f64) -> Result<f64> {
    let game = builtin_game("game1")?;
    let instruments = ocb_instruments(&(identity(2) * c(0.5, 0.)), eps)?;
    quantum_game_value(&game, &super::w_ocb(), &instruments, eps)
}

fn random_entries(rng: &mut impl Rng, rows: usize, cols: usize) -> Operator {
    Operator::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Orthonormalised columns of `g` (the `Q` factor of its QR
/// decomposition), an isometry when `g` has full column rank.
pub(crate) fn isometry_from(g: &Operator) -> Operator {
    g.clone().qr().q()
}

pub(crate) fn random_unitary(rng: &mut impl Rng, d: usize) -> Operator {
    isometry_from(&random_entries(rng, d, d))
}

/// Random instrument: each input gets an isometry from `I` into
/// `outcome (x) O (x) K`, split into Kraus operators by outcome.
pub fn random_instrument(rng: &mut impl Rng, dim_in: usize, dim_out: usize, inputs: usize, outcomes: usize) -> Instrument {
    // Enough Kraus operators per outcome for the isometry to exist.
    let rank = dim_in.div_ceil(dim_out * outcomes).max(1) + 1;
    let kraus: Vec<Vec<Vec<Operator>>> = (0..inputs)
        .map(|_| {
            let v = isometry_from(&random_entries(rng, outcomes * rank * dim_out, dim_in));
            (0..outcomes)
                .map(|x| (0..rank).map(|k| v.rows((x * rank + k) * dim_out, dim_out).into_owned()).collect())
                .collect()
        })
        .collect();
    Instrument::from_kraus(dim_in, dim_out, &kraus, 1e-8).expect("isometry blocks form an instrument")
}

/// `|k><k|` effects of the computational-basis measurement.
pub fn basis_measurement(d: usize) -> Instrument {
    Instrument::measurement((0..d).map(|k| projector(&ket(d, k))).collect(), 1e-12).expect("basis projectors")
}
