use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{HhlConfig, HhlError};
use crate::linalg::{CVector, ExtendedMatrix};
use crate::sim::{
    check_capacity, qpe_forward_in_place, qpe_inverse_in_place, qubits_to_hold, Evolution,
    StateVector,
};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Width of the system register for `ext`'s dilation.
pub fn system_qubits(ext: &ExtendedMatrix) -> usize {
    qubits_to_hold(ext.dilation_dim())
}

/// Qubits that must all read `|0>` in the good branch of [`residual_state`].
pub fn residual_good_qubits(n_phase_bits: usize) -> Vec<usize> {
    (0..4 + n_phase_bits).collect()
}

/// `b / ‖b‖` on the first `b.len()` basis states of a `width`-qubit register.
pub fn prepare_b_state(b: &CVector, width: usize) -> Result<StateVector, HhlError> {
    check_capacity(width)?;
    if b.len() > 1usize << width {
        return Err(HhlError::WidthTooSmall {
            width,
            needed: b.len(),
        });
    }
    let norm = b.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(HhlError::ZeroRhs);
    }
    let mut amps = vec![ZERO; 1 << width];
    for (a, v) in amps.iter_mut().zip(b.iter()) {
        *a = v / norm;
    }
    Ok(StateVector::from_amplitudes(amps)?)
}

fn check_inputs(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
    extra: usize,
) -> Result<usize, HhlError> {
    if b.len() != ext.rows() {
        return Err(HhlError::RhsLength {
            expected: ext.rows(),
            found: b.len(),
        });
    }
    cfg.validate(ext)?;
    let s = system_qubits(ext);
    check_capacity(extra + cfg.n_phase_bits + s)?;
    Ok(s)
}

/// Eigenvalue-conditioned rotation of a flag: the `|0>` block keeps
/// amplitude `a(λ)` and `sqrt(1 - a²)` moves into the `|1>` block, which must
/// start empty. Both blocks are `[phase][system]`.
fn conditioned_rotation(
    keep: &mut [Complex64],
    moved: &mut [Complex64],
    cfg: &HhlConfig,
    t: f64,
    amplitude: impl Fn(usize, f64) -> f64,
) {
    let sys = keep.len() >> cfg.n_phase_bits;
    for (y, (k, m)) in keep.chunks_mut(sys).zip(moved.chunks_mut(sys)).enumerate() {
        let a = amplitude(y, cfg.eigenvalue_of(y, t)).clamp(-1.0, 1.0);
        let r = (1.0 - a * a).max(0.0).sqrt();
        for (kv, mv) in k.iter_mut().zip(m.iter_mut()) {
            *mv = *kv * r;
            *kv *= a;
        }
    }
}

fn solution_amplitudes(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
) -> Result<Vec<Complex64>, HhlError> {
    let s = check_inputs(ext, b, cfg, 1)?;
    let sys = 1usize << s;
    let block = sys << cfg.n_phase_bits;
    let evo = Evolution::new(&ext.dilation, cfg.t_evolution)?;
    let b_state = prepare_b_state(b, s)?;
    let mut amps = vec![ZERO; 2 * block];
    amps[..sys].copy_from_slice(b_state.amplitudes());
    let (good, bad) = amps.split_at_mut(block);
    qpe_forward_in_place(good, cfg.n_phase_bits, &evo)?;
    // the signed eigenvalue sends the good branch into the solution block;
    // a zero reading sends everything to the flagged branch
    conditioned_rotation(good, bad, cfg, cfg.t_evolution, |y, lambda| {
        if y == 0 {
            0.0
        } else {
            cfg.c_tilde / lambda
        }
    });
    qpe_inverse_in_place(good, cfg.n_phase_bits, &evo)?;
    qpe_inverse_in_place(bad, cfg.n_phase_bits, &evo)?;
    Ok(amps)
}

/// `C̃ ‖x‖ |x>|0> + P₁|φ₁>|1>` over `[flag1][phase][system]`, for the
/// normalized right-hand side.
pub fn hhl_solution_state(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
) -> Result<StateVector, HhlError> {
    Ok(StateVector::from_amplitudes(solution_amplitudes(
        ext, b, cfg,
    )?)?)
}

/// Multiplies the good branch of the solution state by `A`, giving
/// `C ‖x‖ A|x>` (`C = C̃/σ_max`) over `[flag1][flag2][phase][system]`.
pub fn apply_a_state(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
) -> Result<StateVector, HhlError> {
    Ok(StateVector::from_amplitudes(multiplied_amplitudes(
        ext, b, cfg,
    )?)?)
}

fn multiplied_amplitudes(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
) -> Result<Vec<Complex64>, HhlError> {
    check_inputs(ext, b, cfg, 2)?;
    let sol = solution_amplitudes(ext, b, cfg)?;
    let block = sol.len() / 2;
    let mut amps = vec![ZERO; 4 * block];
    amps[..block].copy_from_slice(&sol[..block]);
    amps[2 * block..3 * block].copy_from_slice(&sol[block..]);
    let evo = Evolution::new(&ext.unregularized_dilation(), cfg.t_multiply)?;
    let (good, rest) = amps.split_at_mut(block);
    let moved = &mut rest[..block];
    // the phase register is back at |0> and gets reused
    qpe_forward_in_place(good, cfg.n_phase_bits, &evo)?;
    conditioned_rotation(good, moved, cfg, cfg.t_multiply, |_, lambda| {
        lambda / cfg.sigma_max
    });
    qpe_inverse_in_place(good, cfg.n_phase_bits, &evo)?;
    qpe_inverse_in_place(moved, cfg.n_phase_bits, &evo)?;
    Ok(amps)
}

/// The residual construction over `[sel][last][flag1][flag2][phase][system]`.
///
/// Its component with every ancilla at `|0>` is `(t/2)(A x - b̂)` for the
/// normalized `b̂`, where `t = min(1, C)`.
pub fn residual_state(
    ext: &ExtendedMatrix,
    b: &CVector,
    cfg: &HhlConfig,
) -> Result<StateVector, HhlError> {
    let s = check_inputs(ext, b, cfg, 4)?;
    let psi = multiplied_amplitudes(ext, b, cfg)?;
    let quarter = psi.len();
    let mut amps = vec![ZERO; 4 * quarter];
    let b_state = prepare_b_state(b, s)?;
    // step 1: (|ψ>|0> - |b̂, 0>|1>) / sqrt 2, selector in front
    for (a, p) in amps[..quarter].iter_mut().zip(&psi) {
        *a = p * FRAC_1_SQRT_2;
    }
    for (a, v) in amps[2 * quarter..].iter_mut().zip(b_state.amplitudes()) {
        *a = -v * FRAC_1_SQRT_2;
    }
    // step 2: balance the two branches on the `last` ancilla; the radicand
    // is sqrt(1 - t²/C²) so that the rotation stays unitary
    let c = cfg.multiplied_scale();
    let t = cfg.residual_balance();
    for (sel_block, a) in [(0usize, t / c), (1, t)] {
        let a = a.min(1.0);
        let r = (1.0 - a * a).max(0.0).sqrt();
        let base = 2 * sel_block * quarter;
        let (keep, moved) = amps[base..base + 2 * quarter].split_at_mut(quarter);
        for (k, m) in keep.iter_mut().zip(moved.iter_mut()) {
            *m = *k * r;
            *k *= a;
        }
    }
    // step 3: Hadamard on the selector
    let (lo, hi) = amps.split_at_mut(2 * quarter);
    for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
        let (p, q) = (*x, *y);
        *x = (p + q) * FRAC_1_SQRT_2;
        *y = (p - q) * FRAC_1_SQRT_2;
    }
    Ok(StateVector::from_amplitudes(amps)?)
}

/// System amplitudes of the branch where the leading `ancillas` qubits all
/// read `|0>`.
pub fn good_block(state: &StateVector, ext: &ExtendedMatrix, ancillas: usize) -> CVector {
    let s = system_qubits(ext);
    debug_assert_eq!(state.num_qubits(), ancillas + s);
    CVector::from_column_slice(&state.amplitudes()[..1 << s])
}
