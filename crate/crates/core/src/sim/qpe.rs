use num_complex::Complex64;

use super::op::apply_matrix_to_slice;
use super::{
    apply_register_qft, check_capacity, gates, qubits_for_dim, Operator, SimError, StateVector,
};

/// Phase estimation of `op` on `input` with an `n_bits` register in front.
///
/// The register is Hadamard-initialized, drives the controlled `op^{2^j}`
/// ladder (register qubit 0 controls the largest power), and is read out
/// through the inverse QFT. An eigenvector with eigenvalue
/// `exp(2 pi i y / 2^n)` leaves the register in `|y>`.
pub fn phase_estimation(
    op: &dyn Operator,
    input: &StateVector,
    n_bits: usize,
) -> Result<StateVector, SimError> {
    if n_bits == 0 {
        return Err(SimError::InvalidArgument(
            "phase register needs at least one qubit".into(),
        ));
    }
    if input.dim() != op.dim() {
        return Err(SimError::DimensionMismatch {
            expected: op.dim(),
            found: input.dim(),
        });
    }
    let total = n_bits + input.num_qubits();
    check_capacity(total)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << total];
    amps[..input.dim()].copy_from_slice(input.amplitudes());
    qpe_forward_in_place(&mut amps, n_bits, op)?;
    Ok(StateVector::from_raw(total, amps))
}

fn hadamard_register(
    amps: &mut [Complex64],
    n_bits: usize,
    sys_dim: usize,
) -> Result<(), SimError> {
    let total = n_bits + qubits_for_dim(sys_dim)?;
    let h = gates::hadamard();
    for q in 0..n_bits {
        apply_matrix_to_slice(amps, total, h.matrix(), &[q]);
    }
    Ok(())
}

fn controlled_ladder(amps: &mut [Complex64], n_bits: usize, op: &dyn Operator, inverse: bool) {
    let dim = op.dim();
    for j in 0..n_bits {
        let bit = n_bits - 1 - j;
        let k = 1i64 << bit;
        let pw = op.power(if inverse { -k } else { k });
        for (c, slot) in amps.chunks_mut(dim).enumerate() {
            if (c >> bit) & 1 == 1 {
                pw.apply_to(slot);
            }
        }
    }
}

/// Forward phase-estimation circuit on a `[register][system]` slice whose
/// register starts in any state.
pub fn qpe_forward_in_place(
    amps: &mut [Complex64],
    n_bits: usize,
    op: &dyn Operator,
) -> Result<(), SimError> {
    let dim = op.dim();
    if amps.len() != dim << n_bits {
        return Err(SimError::DimensionMismatch {
            expected: dim << n_bits,
            found: amps.len(),
        });
    }
    hadamard_register(amps, n_bits, dim)?;
    controlled_ladder(amps, n_bits, op, false);
    apply_register_qft(amps, n_bits, dim, true);
    Ok(())
}

/// Adjoint of [`qpe_forward_in_place`].
pub fn qpe_inverse_in_place(
    amps: &mut [Complex64],
    n_bits: usize,
    op: &dyn Operator,
) -> Result<(), SimError> {
    let dim = op.dim();
    if amps.len() != dim << n_bits {
        return Err(SimError::DimensionMismatch {
            expected: dim << n_bits,
            found: amps.len(),
        });
    }
    apply_register_qft(amps, n_bits, dim, false);
    controlled_ladder(amps, n_bits, op, true);
    hadamard_register(amps, n_bits, dim)?;
    Ok(())
}

/// Distribution of the leading `n_bits` register of a `[register][system]`
/// amplitude slice.
pub fn register_marginal(amps: &[Complex64], n_bits: usize) -> Vec<f64> {
    let reg = 1usize << n_bits;
    let sys = amps.len() / reg;
    amps.chunks(sys)
        .map(|c| c.iter().map(|a| a.norm_sqr()).sum())
        .collect()
}

/// Two's-complement reading of a register value.
pub fn signed_register(y: usize, n_bits: usize) -> i64 {
    let half = 1i64 << (n_bits - 1);
    let y = y as i64;
    if y >= half {
        y - (1i64 << n_bits)
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{gates, UnitaryOp};
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    fn phase_gate(phi: f64) -> UnitaryOp {
        UnitaryOp::new(DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::from_polar(1.0, 2.0 * PI * phi),
            ],
        ))
        .unwrap()
    }

    #[test]
    fn z_on_one_reads_half() {
        let out =
            phase_estimation(&gates::pauli_z(), &StateVector::basis(1, 1).unwrap(), 3).unwrap();
        let m = out.marginal(&[0, 1, 2]).unwrap();
        assert!((m[0b100] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_reads_zero() {
        let input =
            StateVector::normalized(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)])
                .unwrap();
        let out = phase_estimation(&UnitaryOp::identity(1), &input, 2).unwrap();
        let m = register_marginal(out.amplitudes(), 2);
        assert!((m[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn every_dyadic_phase_is_exact() {
        for n in 1..=5 {
            for y in 0..(1usize << n) {
                let op = phase_gate(y as f64 / (1 << n) as f64);
                let out = phase_estimation(&op, &StateVector::basis(1, 1).unwrap(), n).unwrap();
                let m = register_marginal(out.amplitudes(), n);
                assert!((m[y] - 1.0).abs() < 1e-10, "n={n} y={y} p={}", m[y]);
            }
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        let op = phase_gate(0.2137).compose(&gates::hadamard()).unwrap();
        let input =
            StateVector::normalized(vec![Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.7)])
                .unwrap();
        let out = phase_estimation(&op, &input, 4).unwrap();
        let mut amps = out.amplitudes().to_vec();
        qpe_inverse_in_place(&mut amps, 4, &op).unwrap();
        for (i, a) in amps.iter().enumerate() {
            let expected = if i < 2 {
                input.amplitudes()[i]
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!((a - expected).norm() < 1e-12);
        }
        assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn non_dyadic_peak_within_one_cell() {
        let n = 5;
        for phi in [0.1234, 0.5, 0.77777, 0.01] {
            let out =
                phase_estimation(&phase_gate(phi), &StateVector::basis(1, 1).unwrap(), n).unwrap();
            let m = register_marginal(out.amplitudes(), n);
            let (best, p) =
                m.iter().enumerate().fold(
                    (0, 0.0),
                    |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc },
                );
            let est = best as f64 / 32.0;
            let dist = (phi - est).abs().min(1.0 - (phi - est).abs());
            assert!(dist <= 1.0 / 32.0);
            assert!(p >= 4.0 / (PI * PI) - 1e-9);
        }
    }

    #[test]
    fn signed_reading() {
        assert_eq!(signed_register(0, 3), 0);
        assert_eq!(signed_register(3, 3), 3);
        assert_eq!(signed_register(4, 3), -4);
        assert_eq!(signed_register(7, 3), -1);
    }
}
