use rand::Rng;

use super::instruments::random_unitary;
use super::{
    c, hadamard, identity, ket, pauli_x, pauli_y, pauli_z, probability, projector, w_superposed_channel,
    Instrument, Operator,
};
use crate::{Error, Result};

/// Decides whether `b` and `c` commute (0) or anticommute (1) using each of
/// them once in the superposed-channel configuration. T measures the
/// control in the `|+>, |->` basis and ignores the target.
pub fn commute_test(b: &Operator, c_op: &Operator, eps: f64) -> Result<usize> {
    let dist = switch_distribution(b, c_op, eps)?;
    match dist.iter().position(|&p| (p - 1.0).abs() <= eps) {
        Some(bit) => Ok(bit),
        None => Err(Error::Indeterminate(format!("control outcome probabilities {dist:?}"))),
    }
}

/// Distribution of T's control outcome in [`commute_test`].
pub fn switch_distribution(b: &Operator, c_op: &Operator, eps: f64) -> Result<Vec<f64>> {
    for u in [b, c_op] {
        if u.nrows() != 2 || u.ncols() != 2 {
            return Err(Error::Dimension("commute_test needs qubit unitaries".into()));
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = (ket(2, 0) + ket(2, 1)) * c(h, 0.);
    let minus = (ket(2, 0) - ket(2, 1)) * c(h, 0.);
    let t = Instrument::measurement(
        vec![identity(2).kronecker(&projector(&plus)), identity(2).kronecker(&projector(&minus))],
        eps,
    )?;
    let ins = [Instrument::unitary(b, eps)?, Instrument::unitary(c_op, eps)?, t];
    probability(&w_superposed_channel(), &ins, &[0, 0, 0], eps)
}

/// Outcome distribution of the control measurement on
/// `(CB|0>|0> + BC|0>|1>) / sqrt 2`, computed with state vectors.
pub fn simulate_switch(b: &Operator, c_op: &Operator) -> [f64; 2] {
    let zero = ket(2, 0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let state = ((c_op * b * &zero).kronecker(&ket(2, 0)) + (b * c_op * &zero).kronecker(&ket(2, 1))) * c(h, 0.);
    let plus = (ket(2, 0) + ket(2, 1)) * c(h, 0.);
    let p_plus = (identity(2).kronecker(&projector(&plus)) * &state).norm_squared();
    [p_plus, 1.0 - p_plus]
}

/// Qubit unitaries by name: `i`, `x`, `y`, `z`, `h`, `s`, `t`.
pub fn named_unitary(name: &str) -> Result<Operator> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "i" => identity(2),
        "x" => pauli_x(),
        "y" => pauli_y(),
        "z" => pauli_z(),
        "h" => hadamard(),
        "s" => Operator::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1., 0.), c(0., 1.)])),
        "t" => {
            let phase = c(0., std::f64::consts::FRAC_PI_4).exp();
            Operator::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1., 0.), phase]))
        }
        _ => return Err(Error::Unknown { kind: "unitary", name: name.into() }),
    })
}

/// `V D_1 V^dag` and `V D_2 V^dag` with random phases: a commuting pair.
pub fn random_commuting_pair(rng: &mut impl Rng) -> (Operator, Operator) {
    let v = random_unitary(rng, 2);
    let mut diag = || {
        let phases: Vec<_> = (0..2).map(|_| c(0., rng.gen_range(0.0..std::f64::consts::TAU)).exp()).collect();
        Operator::from_diagonal(&nalgebra::DVector::from_vec(phases))
    };
    let (d1, d2) = (diag(), diag());
    (&v * d1 * v.adjoint(), &v * d2 * v.adjoint())
}

/// `e^{i alpha} n.sigma` and `e^{i beta} m.sigma` with random orthogonal unit
/// vectors `n`, `m`: an anticommuting pair.
pub fn random_anticommuting_pair(rng: &mut impl Rng) -> (Operator, Operator) {
    let unit = |rng: &mut dyn rand::RngCore| {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|x| x / n)
    };
    let n = unit(rng);
    let r = unit(rng);
    let mut m = [n[1] * r[2] - n[2] * r[1], n[2] * r[0] - n[0] * r[2], n[0] * r[1] - n[1] * r[0]];
    let norm = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
    m = m.map(|x| x / norm);
    let dot = |v: [f64; 3]| pauli_x() * c(v[0], 0.) + pauli_y() * c(v[1], 0.) + pauli_z() * c(v[2], 0.);
    let alpha = c(0., rng.gen_range(0.0..std::f64::consts::TAU)).exp();
    let beta = c(0., rng.gen_range(0.0..std::f64::consts::TAU)).exp();
    (dot(n) * alpha, dot(m) * beta)
}
