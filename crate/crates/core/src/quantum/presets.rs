use super::{
    bell, c, eigenvalues, identity, is_hermitian, kron_all, ket, permute_factors, pauli_x, pauli_z, projector,
    Operator, ProcessMatrix, QuantumParty,
};
use crate::{Error, Result};

pub const QUANTUM_PRESETS: &[&str] = &["w-state", "w-channel", "w-superposed", "w-ocb", "w-two-way-channels"];

fn qubit_pair() -> Vec<QuantumParty> {
    vec![QuantumParty::new("R", 2, 2), QuantumParty::new("S", 2, 2)]
}

/// `rho (x) 1` on the outputs: the two-qubit state `rho` (given on
/// `I_R (x) I_S`) is sent to both parties.
pub fn w_state(rho: &Operator) -> Result<ProcessMatrix> {
    let eps = 1e-9;
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::Dimension("rho must be a two-qubit operator".into()));
    }
    if !is_hermitian(rho, eps) || (rho.trace() - c(1., 0.)).norm() > eps || eigenvalues(rho)[0] < -eps {
        return Err(Error::Invalid("rho is not a density operator".into()));
    }
    // Built as I_R I_S O_R O_S, then reordered.
    let op = rho.kronecker(&identity(4));
    ProcessMatrix::new(qubit_pair(), permute_factors(&op, &[2, 2, 2, 2], &[0, 2, 1, 3]))
}

/// `1 (x) |Psi><Psi| (x) 1`: a qubit channel from R to S.
pub fn w_channel() -> ProcessMatrix {
    let op = kron_all(&[identity(2), projector(&bell()), identity(2)]);
    ProcessMatrix::new(qubit_pair(), op).expect("dimensions fixed")
}

/// Channels R to S and S to R at once.
pub fn w_two_way_channels() -> ProcessMatrix {
    // Built as O_R I_S O_S I_R, then reordered.
    let op = projector(&bell()).kronecker(&projector(&bell())) * c(4., 0.);
    let op = permute_factors(&op, &[2, 2, 2, 2], &[3, 0, 1, 2]);
    ProcessMatrix::new(qubit_pair(), op).expect("dimensions fixed")
}

/// Superposition of the orders R, S, T and S, R, T, controlled by the qubit
/// `I_T'`. T has no output system and receives target and control as one
/// four-dimensional input `I_T (x) I_T'`.
pub fn w_superposed_channel() -> ProcessMatrix {
    let dims = [2, 2, 2, 2, 2, 2];
    let rs = kron_all(&[ket(2, 0), bell(), bell(), ket(2, 0)]);
    // Listed as I_S O_S I_R O_R I_T I_T'.
    let sr = permute_factors(&kron_all(&[ket(2, 0), bell(), bell(), ket(2, 1)]), &dims, &[2, 3, 0, 1, 4, 5]);
    let w = (rs + sr) * c(std::f64::consts::FRAC_1_SQRT_2, 0.);
    let parties = vec![QuantumParty::new("R", 2, 2), QuantumParty::new("S", 2, 2), QuantumParty::new("T", 4, 1)];
    // The normalised vector gives trace 1; scaling to the product of the
    // output dimensions makes it a valid process matrix.
    ProcessMatrix::new(parties, projector(&w) * c(4., 0.)).expect("dimensions fixed")
}

/// The two-party operator that beats the causal bound of the guessing game.
pub fn w_ocb() -> ProcessMatrix {
    let one = identity(2);
    let a = kron_all(&[one.clone(), pauli_z(), pauli_z(), one.clone()]);
    let b = kron_all(&[pauli_z(), one.clone(), pauli_x(), pauli_z()]);
    let op = (identity(16) + (a + b) * c(std::f64::consts::FRAC_1_SQRT_2, 0.)) * c(0.25, 0.);
    ProcessMatrix::new(qubit_pair(), op).expect("dimensions fixed")
}

pub fn quantum_preset(name: &str) -> Result<ProcessMatrix> {
    match name {
        "w-state" => w_state(&projector(&bell())),
        "w-channel" => Ok(w_channel()),
        "w-superposed" => Ok(w_superposed_channel()),
        "w-ocb" => Ok(w_ocb()),
        "w-two-way-channels" => Ok(w_two_way_channels()),
        _ => Err(Error::Unknown { kind: "quantum preset", name: name.into() }),
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    const EPS: f64 = DEFAULT_EPSILON;

    #[test]
    fn presets_validate() {
        for name in ["w-state", "w-channel", "w-superposed", "w-ocb"] {
            let v = validate(&quantum_preset(name).unwrap(), EPS);
            assert!(v.valid, "{name}: {v:?}");
        }
        let v = validate(&w_two_way_channels(), EPS);
        assert!(!v.valid && v.worst_tuple.is_some());
        let doubled = w_state(&projector(&bell())).unwrap().scaled(2.0);
        let v = validate(&doubled, EPS);
        assert!(!v.valid && v.min_eigenvalue >= -EPS && v.max_normalization_error > 0.5);
    }

    #[test]
    fn ocb_is_positive() {
        let values = eigenvalues(w_ocb().operator());
        assert!(values[0] >= -1e-12);
        assert!(values.iter().all(|v| v.abs() < 1e-12 || (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn channel_marginal() {
        let w = w_channel();
        // Tracing out I_R and O_S leaves |Psi><Psi| scaled by the traced dims.
        let reduced = partial_trace(w.operator(), &w.dims(), &[0, 3]);
        assert!((reduced - projector(&bell()) * c(4., 0.)).iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn superposed_is_rank_one() {
        let w = w_superposed_channel();
        let nonzero = eigenvalues(w.operator()).iter().filter(|v| v.abs() > 1e-9).count();
        assert_eq!(nonzero, 1);
        assert!((w.operator().trace() - c(4., 0.)).norm() < 1e-12);
    }

    #[test]
    fn state_rejects_bad_rho() {
        assert!(w_state(&identity(4)).is_err());
        assert!(w_state(&identity(2)).is_err());
    }
}
