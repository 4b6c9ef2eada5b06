use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_capacity, qubits_for_dim, SimError, StateVector, UNITARY_TOLERANCE};

/// Anything that acts linearly and unitarily on a vector of fixed dimension.
///
/// Phase estimation only needs powers of an operator applied to slices, so
/// implicit operators (reflections, evolutions) never have to be formed as
/// matrices.
pub trait Operator {
    fn dim(&self) -> usize;

    fn apply_to(&self, amps: &mut [Complex64]);

    fn apply_adjoint_to(&self, amps: &mut [Complex64]);

    /// `self^k`; negative `k` is a power of the adjoint.
    fn power(&self, k: i64) -> Box<dyn Operator + '_> {
        Box::new(RepeatedPower { op: self, k })
    }
}

struct RepeatedPower<'a, O: ?Sized> {
    op: &'a O,
    k: i64,
}

impl<O: Operator + ?Sized> Operator for RepeatedPower<'_, O> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply_to(&self, amps: &mut [Complex64]) {
        for _ in 0..self.k.unsigned_abs() {
            if self.k > 0 {
                self.op.apply_to(amps)
            } else {
                self.op.apply_adjoint_to(amps)
            }
        }
    }

    fn apply_adjoint_to(&self, amps: &mut [Complex64]) {
        for _ in 0..self.k.unsigned_abs() {
            if self.k > 0 {
                self.op.apply_adjoint_to(amps)
            } else {
                self.op.apply_to(amps)
            }
        }
    }

    fn power(&self, k: i64) -> Box<dyn Operator + '_> {
        Box::new(RepeatedPower {
            op: self.op,
            k: self.k * k,
        })
    }
}

/// A dense unitary on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    num_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl UnitaryOp {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, SimError> {
        if matrix.nrows() != matrix.ncols() {
            return Err(SimError::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let num_qubits = qubits_for_dim(matrix.nrows())?;
        check_capacity(num_qubits)?;
        let deviation = unitary_deviation(&matrix);
        if deviation > UNITARY_TOLERANCE {
            return Err(SimError::NotUnitary { deviation });
        }
        Ok(Self { num_qubits, matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<Complex64>) -> Self {
        let num_qubits = matrix.nrows().trailing_zeros() as usize;
        Self { num_qubits, matrix }
    }

    pub fn identity(num_qubits: usize) -> Self {
        let d = 1 << num_qubits;
        Self {
            num_qubits,
            matrix: DMatrix::identity(d, d),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            num_qubits: self.num_qubits,
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &UnitaryOp) -> Result<Self, SimError> {
        if self.num_qubits != other.num_qubits {
            return Err(SimError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `self ⊗ other`.
    pub fn kron(&self, other: &UnitaryOp) -> Result<Self, SimError> {
        check_capacity(self.num_qubits + other.num_qubits)?;
        Ok(Self {
            num_qubits: self.num_qubits + other.num_qubits,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 {
            self.matrix.adjoint()
        } else {
            self.matrix.clone()
        };
        let d = base.nrows();
        let mut acc = DMatrix::identity(d, d);
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Self {
            num_qubits: self.num_qubits,
            matrix: acc,
        }
    }

    pub fn unitary_deviation(&self) -> f64 {
        unitary_deviation(&self.matrix)
    }
}

impl Operator for UnitaryOp {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply_to(&self, amps: &mut [Complex64]) {
        matvec(&self.matrix, amps, false);
    }

    fn apply_adjoint_to(&self, amps: &mut [Complex64]) {
        matvec(&self.matrix, amps, true);
    }

    fn power(&self, k: i64) -> Box<dyn Operator + '_> {
        Box::new(self.pow(k))
    }
}

fn matvec(m: &DMatrix<Complex64>, amps: &mut [Complex64], adjoint: bool) {
    let d = m.nrows();
    debug_assert_eq!(amps.len(), d);
    let input = amps.to_vec();
    for (i, out) in amps.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, x) in input.iter().enumerate() {
            let e = if adjoint { m[(j, i)].conj() } else { m[(i, j)] };
            acc += e * x;
        }
        *out = acc;
    }
}

pub(crate) fn unitary_deviation(m: &DMatrix<Complex64>) -> f64 {
    let d = m.nrows();
    let prod = m.adjoint() * m;
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `op` acting on the high part of a `op.dim() * low_dim` space, identity on
/// the low part.
pub struct KronIdentity<'a> {
    pub op: &'a dyn Operator,
    pub low_dim: usize,
}

impl KronIdentity<'_> {
    fn for_each_column(&self, amps: &mut [Complex64], f: impl Fn(&mut [Complex64])) {
        let hi = self.op.dim();
        let mut column = vec![Complex64::new(0.0, 0.0); hi];
        for l in 0..self.low_dim {
            for (h, c) in column.iter_mut().enumerate() {
                *c = amps[h * self.low_dim + l];
            }
            f(&mut column);
            for (h, c) in column.iter().enumerate() {
                amps[h * self.low_dim + l] = *c;
            }
        }
    }
}

impl Operator for KronIdentity<'_> {
    fn dim(&self) -> usize {
        self.op.dim() * self.low_dim
    }

    fn apply_to(&self, amps: &mut [Complex64]) {
        self.for_each_column(amps, |c| self.op.apply_to(c));
    }

    fn apply_adjoint_to(&self, amps: &mut [Complex64]) {
        self.for_each_column(amps, |c| self.op.apply_adjoint_to(c));
    }

    fn power(&self, k: i64) -> Box<dyn Operator + '_> {
        Box::new(OwnedKron {
            op: self.op.power(k),
            low_dim: self.low_dim,
        })
    }
}

struct OwnedKron<'a> {
    op: Box<dyn Operator + 'a>,
    low_dim: usize,
}

impl Operator for OwnedKron<'_> {
    fn dim(&self) -> usize {
        self.op.dim() * self.low_dim
    }

    fn apply_to(&self, amps: &mut [Complex64]) {
        KronIdentity {
            op: self.op.as_ref(),
            low_dim: self.low_dim,
        }
        .apply_to(amps)
    }

    fn apply_adjoint_to(&self, amps: &mut [Complex64]) {
        KronIdentity {
            op: self.op.as_ref(),
            low_dim: self.low_dim,
        }
        .apply_adjoint_to(amps)
    }
}

/// Applies a `2^k × 2^k` matrix to the listed qubits of a raw amplitude slice.
/// `targets[0]` is the most significant qubit of the gate's basis.
pub(crate) fn apply_matrix_to_slice(
    amps: &mut [Complex64],
    num_qubits: usize,
    matrix: &DMatrix<Complex64>,
    targets: &[usize],
) {
    let k = targets.len();
    let local = 1usize << k;
    let offsets: Vec<usize> = (0..local)
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .filter(|(i, _)| (l >> (k - 1 - i)) & 1 == 1)
                .map(|(_, &t)| 1usize << (num_qubits - 1 - t))
                .sum()
        })
        .collect();
    let mask: usize = offsets[local - 1];
    let mut gathered = vec![Complex64::new(0.0, 0.0); local];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (g, &o) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base + o];
        }
        for (r, &o) in offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, g) in gathered.iter().enumerate() {
                acc += matrix[(r, c)] * g;
            }
            amps[base + o] = acc;
        }
    }
}

pub fn apply_in_place(
    state: &mut StateVector,
    op: &UnitaryOp,
    targets: &[usize],
) -> Result<(), SimError> {
    let expected = 1usize << targets.len();
    if op.dim() != expected {
        return Err(SimError::DimensionMismatch {
            expected,
            found: op.dim(),
        });
    }
    state.check_qubits(targets)?;
    let n = state.num_qubits();
    apply_matrix_to_slice(state.amplitudes_mut(), n, op.matrix(), targets);
    Ok(())
}

/// Applies `op` to `targets` and returns the new state.
pub fn apply(
    state: &StateVector,
    op: &UnitaryOp,
    targets: &[usize],
) -> Result<StateVector, SimError> {
    let mut out = state.clone();
    apply_in_place(&mut out, op, targets)?;
    Ok(out)
}

/// Block diagonal `(I, op^power)` with the control as the leading qubit.
pub fn controlled(op: &UnitaryOp, power: u64) -> Result<UnitaryOp, SimError> {
    check_capacity(op.num_qubits() + 1)?;
    let d = op.dim();
    let p = op.pow(power as i64);
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        m[(i, i)] = Complex64::new(1.0, 0.0);
    }
    m.view_mut((d, d), (d, d)).copy_from(p.matrix());
    Ok(UnitaryOp::from_matrix_unchecked(m))
}

pub mod gates {
    //! Fixed single-qubit gates.

    use super::UnitaryOp;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn two(entries: [Complex64; 4]) -> UnitaryOp {
        UnitaryOp::from_matrix_unchecked(DMatrix::from_row_slice(2, 2, &entries))
    }

    fn r(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    pub fn pauli_x() -> UnitaryOp {
        two([r(0.0), r(1.0), r(1.0), r(0.0)])
    }

    pub fn pauli_z() -> UnitaryOp {
        two([r(1.0), r(0.0), r(0.0), r(-1.0)])
    }

    pub fn hadamard() -> UnitaryOp {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        two([r(h), r(h), r(h), r(-h)])
    }

    /// Real rotation taking `|0>` to `cos(angle)|0> + sin(angle)|1>`.
    pub fn rotation(angle: f64) -> UnitaryOp {
        let (s, c) = angle.sin_cos();
        two([r(c), r(-s), r(s), r(c)])
    }

    /// Rotation taking `|0>` to `a|0> + sqrt(1 - a^2)|1>` for `a` in [-1, 1].
    pub fn amplitude_rotation(a: f64) -> UnitaryOp {
        let a = a.clamp(-1.0, 1.0);
        let s = (1.0 - a * a).max(0.0).sqrt();
        two([r(a), r(-s), r(s), r(a)])
    }
}
