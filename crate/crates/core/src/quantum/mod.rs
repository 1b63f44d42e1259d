//! Process matrices over small Hilbert spaces.
//!
//! Factors are ordered `I_1, O_1, I_2, O_2, ...` and flattened with the
//! leftmost factor most significant, as on the classical side.
//!
//! Local operations are represented by the transposed Choi operator
//! `C = (sum_ij |i><j| (x) M(|i><j|))^T` on `I (x) O`. With this convention a
//! measurement with effect `P` that discards its output system has operator
//! `P (x) 1`, so a process matrix `rho (x) 1` hands the state `rho` to the
//! parties unchanged and joint probabilities are `Tr((C_1 (x) ... ) W)`.

pub mod format;
mod instruments;
mod presets;
mod switch;

pub use instruments::{basis_measurement, ocb_instruments, ocb_value, quantum_game_value, random_instrument, Instrument};
pub use presets::{
    w_channel, w_ocb, w_state, w_superposed_channel, w_two_way_channels, quantum_preset, QUANTUM_PRESETS,
};
pub use switch::{
    commute_test, named_unitary, random_anticommuting_pair, random_commuting_pair, simulate_switch, switch_distribution,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::exact::MixedRadix;
use crate::{Error, Result};

pub type Operator = DMatrix<Complex64>;

pub const DEFAULT_EPSILON: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> Operator {
    Operator::identity(d, d)
}

pub fn pauli_x() -> Operator {
    Operator::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> Operator {
    Operator::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> Operator {
    Operator::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn hadamard() -> Operator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Operator::from_row_slice(2, 2, &[c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)])
}

/// Column vector `|k>` in dimension `d`.
pub fn ket(d: usize, k: usize) -> Operator {
    let mut v = Operator::zeros(d, 1);
    v[(k, 0)] = c(1., 0.);
    v
}

/// `|v><v|` for a column vector.
pub fn projector(v: &Operator) -> Operator {
    v * v.adjoint()
}

pub fn kron_all(factors: &[Operator]) -> Operator {
    factors[1..].iter().fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

/// `(|00> + |11>) / sqrt 2`.
pub fn bell() -> Operator {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    (ket(4, 0) + ket(4, 3)) * c(h, 0.)
}

/// `Tr(A B)` without forming the product.
pub fn trace_of_product(a: &Operator, b: &Operator) -> Complex64 {
    let mut acc = c(0., 0.);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Reorders the tensor factors of an operator: factor `k` of the result is
/// factor `perm[k]` of the input.
pub fn permute_factors(op: &Operator, dims: &[usize], perm: &[usize]) -> Operator {
    let src = MixedRadix::new(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let dst = MixedRadix::new(&new_dims);
    let map: Vec<usize> = (0..src.len())
        .map(|s| {
            let digits = src.unflatten(s);
            dst.flatten(&perm.iter().map(|&p| digits[p]).collect::<Vec<_>>())
        })
        .collect();
    let mut out = Operator::zeros(op.nrows(), op.ncols());
    let cols_permuted = op.ncols() == src.len();
    for r in 0..op.nrows() {
        for col in 0..op.ncols() {
            let target_col = if cols_permuted { map[col] } else { col };
            out[(map[r], target_col)] = op[(r, col)];
        }
    }
    out
}

/// Partial trace over the factors listed in `traced`.
pub fn partial_trace(op: &Operator, dims: &[usize], traced: &[usize]) -> Operator {
    let full = MixedRadix::new(dims);
    let kept: Vec<usize> = (0..dims.len()).filter(|k| !traced.contains(k)).collect();
    let kept_radix = MixedRadix::new(&kept.iter().map(|&k| dims[k]).collect::<Vec<_>>());
    let mut out = Operator::zeros(kept_radix.len(), kept_radix.len());
    for r in 0..full.len() {
        let rd = full.unflatten(r);
        for col in 0..full.len() {
            let cd = full.unflatten(col);
            if traced.iter().all(|&t| rd[t] == cd[t]) {
                let kr = kept_radix.flatten(&kept.iter().map(|&k| rd[k]).collect::<Vec<_>>());
                let kc = kept_radix.flatten(&kept.iter().map(|&k| cd[k]).collect::<Vec<_>>());
                out[(kr, kc)] += op[(r, col)];
            }
        }
    }
    out
}

pub fn is_hermitian(op: &Operator, eps: f64) -> bool {
    op.is_square() && (op - op.adjoint()).iter().all(|v| v.norm() <= eps)
}

/// Eigenvalues of a Hermitian operator, ascending.
///
/// Computed from the real symmetric embedding `[[A, -B], [B, A]]` of
/// `A + iB`, whose spectrum is that of the operator with every value
/// doubled.
pub fn eigenvalues(op: &Operator) -> Vec<f64> {
    let d = op.nrows();
    let real = DMatrix::<f64>::from_fn(2 * d, 2 * d, |r, k| {
        let v = op[(r % d, k % d)];
        match (r < d, k < d) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    });
    let mut values: Vec<f64> = real.clone().symmetric_eigenvalues().iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        // The QR iteration can break down on operators made mostly of exact
        // zeros (a rank-one projector, say); a shift by the identity avoids it.
        let shift = 1.0 + real.norm();
        let shifted = real + DMatrix::<f64>::identity(2 * d, 2 * d) * shift;
        values = shifted.symmetric_eigenvalues().iter().map(|v| v - shift).collect();
    }
    values.sort_by(f64::total_cmp);
    values.into_iter().step_by(2).collect()
}

/// Transposed Choi operator on `I (x) O` of the map with the given Kraus
/// operators (each `d_out x d_in`).
pub fn cj_of(kraus: &[Operator], d_in: usize, d_out: usize) -> Result<Operator> {
    if let Some(k) = kraus.iter().find(|k| k.nrows() != d_out || k.ncols() != d_in) {
        return Err(Error::Dimension(format!(
            "Kraus operator is {}x{}, expected {d_out}x{d_in}",
            k.nrows(),
            k.ncols()
        )));
    }
    let mut choi = Operator::zeros(d_in * d_out, d_in * d_out);
    for i in 0..d_in {
        for j in 0..d_in {
            let unit = ket(d_in, i) * ket(d_in, j).adjoint();
            let image: Operator = kraus.iter().map(|k| k * &unit * k.adjoint()).sum();
            choi += unit.kronecker(&image);
        }
    }
    Ok(choi.transpose())
}

/// Applies the map with transposed Choi operator `cj` to `rho`.
pub fn apply_cj(cj: &Operator, rho: &Operator, d_in: usize, d_out: usize) -> Operator {
    let choi = cj.transpose();
    let lifted = rho.transpose().kronecker(&identity(d_out));
    partial_trace(&(lifted * choi), &[d_in, d_out], &[0])
}

/// One party's Hilbert space dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumParty {
    pub name: String,
    pub dim_in: usize,
    pub dim_out: usize,
}

impl QuantumParty {
    pub fn new(name: impl Into<String>, dim_in: usize, dim_out: usize) -> Self {
        Self { name: name.into(), dim_in, dim_out }
    }
}

/// Operator on `I_1 (x) O_1 (x) I_2 (x) O_2 ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessMatrix {
    parties: Vec<QuantumParty>,
    op: Operator,
}

impl ProcessMatrix {
    pub fn new(parties: Vec<QuantumParty>, op: Operator) -> Result<Self> {
        if parties.is_empty() || parties.iter().any(|p| p.dim_in == 0 || p.dim_out == 0) {
            return Err(Error::Invalid("process matrix needs parties with non-empty systems".into()));
        }
        let d: usize = parties.iter().map(|p| p.dim_in * p.dim_out).product();
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::Dimension(format!("operator is {}x{}, parties need {d}x{d}", op.nrows(), op.ncols())));
        }
        Ok(Self { parties, op })
    }

    pub fn parties(&self) -> &[QuantumParty] {
        &self.parties
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    /// Dimensions of all factors in order.
    pub fn dims(&self) -> Vec<usize> {
        self.parties.iter().flat_map(|p| [p.dim_in, p.dim_out]).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { parties: self.parties.clone(), op: &self.op * c(factor, 0.) }
    }

    /// `W_1 (x) W_2` with the parties of both, reordered so each party's
    /// factors stay adjacent.
    pub fn tensor(&self, other: &ProcessMatrix) -> Self {
        let mut parties = self.parties.clone();
        parties.extend(other.parties.iter().cloned());
        Self { parties, op: self.op.kronecker(&other.op) }
    }

    /// `Tr((C_1 (x) ... (x) C_n) W)`.
    pub fn pair(&self, ops: &[&Operator]) -> Result<Complex64> {
        if ops.len() != self.parties.len() {
            return Err(Error::Dimension(format!("{} operators for {} parties", ops.len(), self.parties.len())));
        }
        for (op, p) in ops.iter().zip(&self.parties) {
            let d = p.dim_in * p.dim_out;
            if op.nrows() != d || op.ncols() != d {
                return Err(Error::Dimension(format!("operator for '{}' must be {d}x{d}", p.name)));
            }
        }
        let owned: Vec<Operator> = ops.iter().map(|o| (*o).clone()).collect();
        Ok(trace_of_product(&kron_all(&owned), &self.op))
    }
}

/// Findings of [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Validation {
    pub hermitian: bool,
    pub min_eigenvalue: f64,
    /// Largest `|Tr(W (C_1 (x) ...)) - 1|` over the generating tuples.
    pub max_normalization_error: f64,
    /// The generator indices of the worst tuple, when it exceeds epsilon.
    pub worst_tuple: Option<Vec<usize>>,
    pub tuples_checked: usize,
    pub valid: bool,
}

/// Generators of the affine hull of trace-preserving Choi operators on
/// `I (x) O`: the point `1/d_O` and that point plus each `H_I (x) T_O` with
/// `H_I` from a Hermitian basis and `T_O` from a traceless Hermitian basis.
pub fn affine_generators(d_in: usize, d_out: usize) -> Vec<Operator> {
    let base = identity(d_in * d_out) * c(1.0 / d_out as f64, 0.);
    let mut out = vec![base.clone()];
    for h in hermitian_basis(d_in, false) {
        for t in hermitian_basis(d_out, true) {
            out.push(&base + h.kronecker(&t));
        }
    }
    out
}

fn hermitian_basis(d: usize, traceless: bool) -> Vec<Operator> {
    let unit = |i: usize, j: usize| ket(d, i) * ket(d, j).adjoint();
    let mut basis = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            basis.push(unit(i, j) + unit(j, i));
            basis.push((unit(i, j) - unit(j, i)) * c(0., 1.));
        }
    }
    for i in 0..d {
        if traceless {
            if i + 1 < d {
                basis.push(unit(i, i) - unit(d - 1, d - 1));
            }
        } else {
            basis.push(unit(i, i));
        }
    }
    basis
}

/// Checks Hermiticity, positive semidefiniteness and the normalisation
/// `Tr(W (C_1 (x) ... (x) C_n)) = 1` on every tuple of affine generators.
pub fn validate(w: &ProcessMatrix, eps: f64) -> Validation {
    let hermitian = is_hermitian(&w.op, eps);
    let min_eigenvalue = if hermitian {
        eigenvalues(&w.op).first().copied().unwrap_or(0.0)
    } else {
        f64::NAN
    };
    let generators: Vec<Vec<Operator>> =
        w.parties.iter().map(|p| affine_generators(p.dim_in, p.dim_out)).collect();
    let radix = MixedRadix::new(&generators.iter().map(Vec::len).collect::<Vec<_>>());
    let mut worst = (0.0f64, None);
    for t in 0..radix.len() {
        let choice = radix.unflatten(t);
        let ops: Vec<&Operator> = choice.iter().enumerate().map(|(k, &g)| &generators[k][g]).collect();
        let value = w.pair(&ops).expect("generator dimensions match");
        let err = (value - c(1., 0.)).norm();
        if err > worst.0 {
            worst = (err, Some(choice));
        }
    }
    let normalized = worst.0 <= eps;
    Validation {
        hermitian,
        min_eigenvalue,
        max_normalization_error: worst.0,
        worst_tuple: if normalized { None } else { worst.1 },
        tuples_checked: radix.len(),
        valid: hermitian && min_eigenvalue >= -eps && normalized,
    }
}

/// `P(x | a) = Tr((C_1[a_1][x_1] (x) ...) W)` for every joint outcome `x`,
/// flattened. Fails when an outcome has a non-negligible imaginary part or
/// the distribution does not sum to 1 within `eps`.
pub fn probability(w: &ProcessMatrix, instruments: &[Instrument], inputs: &[usize], eps: f64) -> Result<Vec<f64>> {
    if instruments.len() != w.parties.len() || inputs.len() != w.parties.len() {
        return Err(Error::Dimension("need one instrument and one input per party".into()));
    }
    for ((ins, p), &a) in instruments.iter().zip(&w.parties).zip(inputs) {
        if ins.dim_in() != p.dim_in || ins.dim_out() != p.dim_out {
            return Err(Error::Dimension(format!("instrument for '{}' acts on the wrong systems", p.name)));
        }
        if a >= ins.inputs() {
            return Err(Error::Dimension(format!("input {a} outside the instrument for '{}'", p.name)));
        }
    }
    let outs = MixedRadix::new(&instruments.iter().map(Instrument::outcomes).collect::<Vec<_>>());
    let mut dist = Vec::with_capacity(outs.len());
    for x in outs.tuples() {
        let ops: Vec<&Operator> = instruments
            .iter()
            .zip(inputs)
            .zip(&x)
            .map(|((ins, &a), &xk)| ins.operator(a, xk))
            .collect();
        let value = w.pair(&ops)?;
        if value.im.abs() > eps {
            return Err(Error::Invalid(format!("probability {value} is not real")));
        }
        dist.push(value.re);
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > eps {
        return Err(Error::Normalization { total: format!("{total:.12}") });
    }
    Ok(dist)
}
