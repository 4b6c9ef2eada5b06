use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{AmplitudeError, StatePrep};
use crate::sim::{check_capacity, Operator, UnitaryOp};

/// Widest preparation for which the dense Grover matrix is built.
const DENSE_LIMIT: usize = 12;

/// `G = (2|φ><φ| - I) S` applied without forming a matrix.
pub struct GroverOperator<'a> {
    prep: &'a StatePrep,
}

impl<'a> GroverOperator<'a> {
    pub fn new(prep: &'a StatePrep) -> Self {
        Self { prep }
    }

    fn reflect_about_state(&self, amps: &mut [Complex64]) {
        let phi = self.prep.state().amplitudes();
        let overlap: Complex64 = phi.iter().zip(amps.iter()).map(|(p, a)| p.conj() * a).sum();
        for (a, p) in amps.iter_mut().zip(phi) {
            *a = p * (2.0 * overlap) - *a;
        }
    }
}

impl Operator for GroverOperator<'_> {
    fn dim(&self) -> usize {
        self.prep.state().dim()
    }

    fn apply_to(&self, amps: &mut [Complex64]) {
        self.prep.reflect_flags(amps);
        self.reflect_about_state(amps);
    }

    fn apply_adjoint_to(&self, amps: &mut [Complex64]) {
        self.reflect_about_state(amps);
        self.prep.reflect_flags(amps);
    }
}

/// Dense Grover matrix, for small preparations.
pub fn grover_operator(prep: &StatePrep) -> Result<UnitaryOp, AmplitudeError> {
    let k = prep.num_qubits();
    check_capacity(2 * k)?;
    if k > DENSE_LIMIT {
        return Err(crate::sim::SimError::Capacity {
            requested: k,
            max: DENSE_LIMIT,
        }
        .into());
    }
    let dim = prep.state().dim();
    let g = GroverOperator::new(prep);
    let mut m = DMatrix::zeros(dim, dim);
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        col[j] = Complex64::new(1.0, 0.0);
        g.apply_to(&mut col);
        m.set_column(j, &nalgebra::DVector::from_column_slice(&col));
    }
    Ok(UnitaryOp::new(m)?)
}

/// `G` restricted to its invariant plane `span{φ, Sφ}`.
///
/// The plane basis is `e1 = φ` and `e2` the normalized part of `Sφ`
/// orthogonal to `φ`. Starting from `φ`, the Grover iteration never leaves
/// the plane, so phase estimation on this 2x2 unitary reproduces the full
/// circuit exactly. When `φ` is entirely good or entirely bad the plane
/// collapses to a line and `e2` is zero.
#[derive(Debug, Clone)]
pub struct GroverPlane {
    pub e1: Vec<Complex64>,
    pub e2: Vec<Complex64>,
    pub op: UnitaryOp,
}

impl GroverPlane {
    /// Full-space vector with plane coordinates `(c1, c2)`.
    pub fn embed(&self, c1: Complex64, c2: Complex64) -> Vec<Complex64> {
        self.e1
            .iter()
            .zip(&self.e2)
            .map(|(a, b)| a * c1 + b * c2)
            .collect()
    }
}

pub fn grover_plane(prep: &StatePrep) -> Result<GroverPlane, AmplitudeError> {
    let phi = prep.state().amplitudes().to_vec();
    let mut s_phi = phi.clone();
    prep.reflect_flags(&mut s_phi);
    let overlap: Complex64 = phi.iter().zip(&s_phi).map(|(p, s)| p.conj() * s).sum();
    let mut w: Vec<Complex64> = s_phi
        .iter()
        .zip(&phi)
        .map(|(s, p)| s - p * overlap)
        .collect();
    let w_norm = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    if w_norm < 1e-12 {
        // G φ = <φ|Sφ> φ with <φ|Sφ> = ±1
        let sign = if overlap.re >= 0.0 { one } else { -one };
        let op = UnitaryOp::from_matrix_unchecked(DMatrix::from_row_slice(
            2,
            2,
            &[sign, zero, zero, one],
        ));
        return Ok(GroverPlane {
            e1: phi,
            e2: vec![zero; w.len()],
            op,
        });
    }
    w.iter_mut().for_each(|a| *a /= w_norm);
    let g = GroverOperator::new(prep);
    let basis = [&phi, &w];
    let mut m = DMatrix::zeros(2, 2);
    for (j, e) in basis.iter().enumerate() {
        let mut ge = e.to_vec();
        g.apply_to(&mut ge);
        for (i, f) in basis.iter().enumerate() {
            m[(i, j)] = f
                .iter()
                .zip(&ge)
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>();
        }
    }
    // rounding in large preparations leaves m a hair off unitary; snap it to
    // the nearest unitary (polar factor) before the exact check
    let svd = m.svd(true, true);
    let polar = svd.u.expect("requested") * svd.v_t.expect("requested");
    Ok(GroverPlane {
        e1: phi,
        e2: w,
        op: UnitaryOp::new(polar)?,
    })
}
