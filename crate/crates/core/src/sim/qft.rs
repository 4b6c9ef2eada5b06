use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{check_capacity, SimError, UnitaryOp};

/// Dense quantum Fourier transform on `n` qubits: entries `w^{jk} / sqrt(2^n)`
/// with `w = exp(2 pi i / 2^n)`. The inverse is the conjugate transpose.
pub fn qft(n: usize, inverse: bool) -> Result<UnitaryOp, SimError> {
    if n == 0 {
        return Err(SimError::InvalidArgument(
            "QFT needs at least one qubit".into(),
        ));
    }
    check_capacity(2 * n)?;
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let sign = if inverse { -1.0 } else { 1.0 };
    let m = DMatrix::from_fn(dim, dim, |j, k| {
        let angle = sign * 2.0 * PI * ((j * k) % dim) as f64 / dim as f64;
        Complex64::from_polar(scale, angle)
    });
    Ok(UnitaryOp::from_matrix_unchecked(m))
}

/// Applies the (inverse) QFT to a register embedded in a raw amplitude slice.
///
/// The slice is laid out as `[high][register][low]` where the register has
/// `reg_bits` qubits and the low part has `low_dim` entries. This is the
/// same map as [`qft`] applied to the register's qubits, done with an FFT.
pub fn apply_register_qft(amps: &mut [Complex64], reg_bits: usize, low_dim: usize, inverse: bool) {
    let reg = 1usize << reg_bits;
    let block = reg * low_dim;
    debug_assert_eq!(amps.len() % block, 0);
    let mut planner = FftPlanner::<f64>::new();
    // rustfft's inverse transform carries exp(+2 pi i jk / N), matching the QFT
    let fft = if inverse {
        planner.plan_fft_forward(reg)
    } else {
        planner.plan_fft_inverse(reg)
    };
    let scale = 1.0 / (reg as f64).sqrt();
    let mut column = vec![Complex64::new(0.0, 0.0); reg];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for chunk in amps.chunks_mut(block) {
        for l in 0..low_dim {
            for (c, v) in column.iter_mut().enumerate() {
                *v = chunk[c * low_dim + l];
            }
            fft.process_with_scratch(&mut column, &mut scratch);
            for (c, v) in column.iter().enumerate() {
                chunk[c * low_dim + l] = v * scale;
            }
        }
    }
}
