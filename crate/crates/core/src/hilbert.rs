//! Composite Hilbert space of `N` qubits and one truncated cavity mode.
//!
//! Basis convention: a product state `|x̄, n⟩` is indexed by reading the
//! qubit bit string `x̄` as a big-endian binary integer (qubit 1 most
//! significant, `g = 0`, `e = 1`) and appending the photon number as the
//! least-significant digit:
//!
//! ```text
//! index(|x̄, n⟩) = int(x̄) · (n_max + 1) + n
//! ```
//!
//! The cavity factor always sits in the last slot. Reduced spaces produced
//! by [`partial_trace`] keep the surviving factors in their original order,
//! with qubits renumbered from 1.

use crate::error::{Result, SimError};
use crate::linalg::{self, c, CMatrix, CVector, C64, ONE, ZERO};

/// Hermiticity tolerance for density-matrix validation.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Trace tolerance for density-matrix validation.
pub const TRACE_TOL: f64 = 1e-8;
/// Numerical positivity slack for density-matrix validation.
pub const POSITIVITY_TOL: f64 = 1e-7;
/// Eigenvalues below this magnitude are treated as zero in entropy and
/// negativity inputs.
pub const EIGENVALUE_CLAMP: f64 = 1e-7;

/// One tensor factor of the composite space. Qubits are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subsystem {
    Qubit(usize),
    Cavity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    num_qubits: usize,
    photon_cutoff: Option<usize>,
}

impl HilbertSpace {
    /// Space of `num_qubits` qubits and one cavity mode truncated at Fock
    /// number `photon_cutoff`.
    pub fn new(num_qubits: usize, photon_cutoff: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(SimError::InvalidParameter(
                "num_qubits must be at least 1".into(),
            ));
        }
        Ok(Self {
            num_qubits,
            photon_cutoff: Some(photon_cutoff),
        })
    }

    /// Space of qubits only, as produced by tracing out the cavity.
    pub fn qubits_only(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(SimError::InvalidParameter(
                "num_qubits must be at least 1".into(),
            ));
        }
        Ok(Self {
            num_qubits,
            photon_cutoff: None,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn photon_cutoff(&self) -> Option<usize> {
        self.photon_cutoff
    }

    pub fn has_cavity(&self) -> bool {
        self.photon_cutoff.is_some()
    }

    pub fn cavity_dim(&self) -> usize {
        self.photon_cutoff.map_or(1, |n| n + 1)
    }

    pub fn dim(&self) -> usize {
        (1usize << self.num_qubits) * self.cavity_dim()
    }

    /// Factors in slot order: qubits 1..=N, then the cavity if present.
    pub fn factors(&self) -> Vec<Subsystem> {
        let mut f: Vec<Subsystem> = (1..=self.num_qubits).map(Subsystem::Qubit).collect();
        if self.has_cavity() {
            f.push(Subsystem::Cavity);
        }
        f
    }

    pub fn factor_dims(&self) -> Vec<usize> {
        let mut dims = vec![2usize; self.num_qubits];
        if let Some(n) = self.photon_cutoff {
            dims.push(n + 1);
        }
        dims
    }

    /// Index of the basis state `|x̄, n⟩`. `bits` is big-endian with qubit 1
    /// first; `g = 0`, `e = 1`.
    pub fn index_of(&self, bits: &[u8], photons: usize) -> Result<usize> {
        if bits.len() != self.num_qubits {
            return Err(SimError::DimensionMismatch {
                expected: self.num_qubits,
                actual: bits.len(),
            });
        }
        match self.photon_cutoff {
            Some(n_max) if photons > n_max => {
                return Err(SimError::InvalidParameter(format!(
                    "photon number {photons} exceeds cutoff {n_max}"
                )))
            }
            None if photons != 0 => {
                return Err(SimError::InvalidParameter(
                    "space has no cavity factor".into(),
                ))
            }
            _ => {}
        }
        let mut qubit_part = 0usize;
        for &b in bits {
            debug_assert!(b <= 1);
            qubit_part = qubit_part * 2 + b as usize;
        }
        Ok(qubit_part * self.cavity_dim() + photons)
    }

    /// Inverse of [`Self::index_of`]: bit string and photon number.
    pub fn decode(&self, index: usize) -> (Vec<u8>, usize) {
        debug_assert!(index < self.dim());
        let cav = self.cavity_dim();
        let photons = index % cav;
        let mut qubit_part = index / cav;
        let mut bits = vec![0u8; self.num_qubits];
        for slot in (0..self.num_qubits).rev() {
            bits[slot] = (qubit_part & 1) as u8;
            qubit_part >>= 1;
        }
        (bits, photons)
    }

    /// Human-readable label such as `"eg,1"` (or `"eg"` without cavity).
    pub fn basis_label(&self, index: usize) -> String {
        let (bits, photons) = self.decode(index);
        let qubits: String = bits.iter().map(|&b| if b == 0 { 'g' } else { 'e' }).collect();
        if self.has_cavity() {
            format!("{qubits},{photons}")
        } else {
            qubits
        }
    }

    /// Basis state from a label like `"ge"` plus a photon number.
    pub fn ket(&self, qubits: &str, photons: usize) -> Result<StateVector> {
        let bits: Vec<u8> = qubits
            .chars()
            .map(|ch| match ch {
                'g' => Ok(0u8),
                'e' => Ok(1u8),
                other => Err(SimError::InvalidParameter(format!(
                    "unknown qubit label '{other}'"
                ))),
            })
            .collect::<Result<_>>()?;
        let index = self.index_of(&bits, photons)?;
        let mut amplitudes = CVector::zeros(self.dim());
        amplitudes[index] = ONE;
        Ok(StateVector {
            space: *self,
            amplitudes,
        })
    }

    /// The global ground state `|gg…g, 0⟩`.
    pub fn ground_state(&self) -> StateVector {
        let mut amplitudes = CVector::zeros(self.dim());
        amplitudes[0] = ONE;
        StateVector {
            space: *self,
            amplitudes,
        }
    }

    fn slot_of(&self, s: Subsystem) -> Result<usize> {
        match s {
            Subsystem::Qubit(q) if q >= 1 && q <= self.num_qubits => Ok(q - 1),
            Subsystem::Cavity if self.has_cavity() => Ok(self.num_qubits),
            Subsystem::Qubit(q) => Err(SimError::QubitIndexOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            }),
            Subsystem::Cavity => Err(SimError::NoCavity),
        }
    }

    /// Slot positions for a subsystem selection, deduplicated and sorted.
    fn slots_of(&self, selection: &[Subsystem]) -> Result<Vec<usize>> {
        if selection.is_empty() {
            return Err(SimError::EmptySubsystemSelection);
        }
        let mut slots: Vec<usize> = selection
            .iter()
            .map(|&s| self.slot_of(s))
            .collect::<Result<_>>()?;
        slots.sort_unstable();
        slots.dedup();
        Ok(slots)
    }
}

/// Big-endian strides for a factor-dimension list.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn digits_of(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for slot in (0..dims.len()).rev() {
        out[slot] = index % dims[slot];
        index /= dims[slot];
    }
}

/// A dense operator tied to a space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl OperatorMatrix {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(SimError::DimensionMismatch {
                expected: space.dim(),
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: HilbertSpace) -> Self {
        Self {
            space,
            matrix: CMatrix::identity(space.dim(), space.dim()),
        }
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self {
            space: self.space,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::is_hermitian(&self.matrix, tol)
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.space != self.space {
            return Err(SimError::DimensionMismatch {
                expected: self.space.dim(),
                actual: state.space.dim(),
            });
        }
        Ok(StateVector {
            space: self.space,
            amplitudes: &self.matrix * &state.amplitudes,
        })
    }

    /// `⟨ψ|O|ψ⟩`
    pub fn expectation_state(&self, state: &StateVector) -> C64 {
        (state.amplitudes.adjoint() * &self.matrix * &state.amplitudes)[(0, 0)]
    }

    /// `Tr(ρ O)`
    pub fn expectation_density(&self, rho: &DensityMatrix) -> C64 {
        let mut acc = ZERO;
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                acc += rho.matrix[(i, j)] * self.matrix[(j, i)];
            }
        }
        acc
    }
}

/// A pure state tied to a space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    space: HilbertSpace,
    amplitudes: CVector,
}

impl StateVector {
    /// Wraps amplitudes without a normalization requirement.
    pub fn raw(space: HilbertSpace, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(SimError::DimensionMismatch {
                expected: space.dim(),
                actual: amplitudes.len(),
            });
        }
        Ok(Self { space, amplitudes })
    }

    /// Wraps amplitudes that must already be normalized to within 1e-9.
    pub fn normalized(space: HilbertSpace, amplitudes: CVector) -> Result<Self> {
        let state = Self::raw(space, amplitudes)?;
        let deviation = (state.norm() - 1.0).abs();
        if deviation > 1e-9 {
            return Err(SimError::NotNormalized { deviation });
        }
        Ok(state)
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(SimError::InvalidParameter(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(Self {
            space: self.space,
            amplitudes: &self.amplitudes * c(1.0 / n),
        })
    }

    pub fn amplitude(&self, bits: &[u8], photons: usize) -> Result<C64> {
        Ok(self.amplitudes[self.space.index_of(bits, photons)?])
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix {
            space: self.space,
            matrix: m,
        }
    }
}

/// A density matrix tied to a space. [`DensityMatrix::new`] enforces
/// hermiticity, unit trace and numerical positivity.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(SimError::DimensionMismatch {
                expected: space.dim(),
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        let herm = linalg::hermiticity_deviation(&matrix);
        if herm > HERMITICITY_TOL {
            return Err(SimError::NotHermitian { deviation: herm });
        }
        let trace_dev = (matrix.trace().re - 1.0).abs().max(matrix.trace().im.abs());
        if trace_dev > TRACE_TOL {
            return Err(SimError::TraceDeviation {
                deviation: trace_dev,
            });
        }
        let min_eig = linalg::eigh_values(&matrix)[0];
        if min_eig < -POSITIVITY_TOL {
            return Err(SimError::NotPositive { eigenvalue: min_eig });
        }
        Ok(Self { space, matrix })
    }

    /// Skips the eigenvalue check; used by the evolution engine which
    /// verifies positivity on its own schedule.
    pub(crate) fn trusted(space: HilbertSpace, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), space.dim());
        Self { space, matrix }
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Maximally mixed state `I/dim`.
    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            matrix: CMatrix::identity(d, d) * c(1.0 / d as f64),
        }
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must sum to one.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let space = parts
            .first()
            .ok_or(SimError::EmptySubsystemSelection)?
            .1
            .space;
        let mut m = CMatrix::zeros(space.dim(), space.dim());
        let mut total = 0.0;
        for (w, rho) in parts {
            if rho.space != space {
                return Err(SimError::DimensionMismatch {
                    expected: space.dim(),
                    actual: rho.space.dim(),
                });
            }
            m += &rho.matrix * c(*w);
            total += w;
        }
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(SimError::TraceDeviation {
                deviation: (total - 1.0).abs(),
            });
        }
        DensityMatrix::new(space, m)
    }
}

/// 2×2 qubit operators in the `(g, e)` basis ordering.
pub mod qubit_ops {
    use super::*;

    pub fn sigma_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn sigma_y() -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[ZERO, -crate::linalg::I, crate::linalg::I, ZERO],
        )
    }

    /// `σ³` with `σ³|e⟩ = |e⟩`, `σ³|g⟩ = -|g⟩`.
    pub fn sigma_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[-ONE, ZERO, ZERO, ONE])
    }

    /// `σ⁺ = |e⟩⟨g|`
    pub fn sigma_plus() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO])
    }

    /// `σ⁻ = |g⟩⟨e|`
    pub fn sigma_minus() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
    }
}

/// Embeds a 2×2 operator on qubit `qubit_index` (1-based), identity on all
/// other factors, cavity slot last.
pub fn embed_qubit_op(
    space: HilbertSpace,
    qubit_index: usize,
    local_op: &CMatrix,
) -> Result<OperatorMatrix> {
    if local_op.nrows() != 2 || local_op.ncols() != 2 {
        return Err(SimError::DimensionMismatch {
            expected: 2,
            actual: local_op.nrows().max(local_op.ncols()),
        });
    }
    if qubit_index < 1 || qubit_index > space.num_qubits() {
        return Err(SimError::QubitIndexOutOfRange {
            index: qubit_index,
            num_qubits: space.num_qubits(),
        });
    }
    let left_dim = 1usize << (qubit_index - 1);
    let right_dim = (1usize << (space.num_qubits() - qubit_index)) * space.cavity_dim();
    let m = linalg::kron(
        &linalg::kron(&CMatrix::identity(left_dim, left_dim), local_op),
        &CMatrix::identity(right_dim, right_dim),
    );
    OperatorMatrix::new(space, m)
}

/// Cavity annihilation operator: `â|x̄, n⟩ = √n |x̄, n-1⟩`, with the
/// truncation acting as a hard wall (upward matrix elements out of the
/// `n_max` layer simply do not exist).
pub fn annihilation_op(space: HilbertSpace) -> Result<OperatorMatrix> {
    let n_max = space.photon_cutoff().ok_or(SimError::NoCavity)?;
    let cav = n_max + 1;
    let qubit_dim = 1usize << space.num_qubits();
    let mut local = CMatrix::zeros(cav, cav);
    for n in 1..cav {
        local[(n - 1, n)] = c((n as f64).sqrt());
    }
    let m = linalg::kron(&CMatrix::identity(qubit_dim, qubit_dim), &local);
    OperatorMatrix::new(space, m)
}

/// Photon-number operator `â†â`.
pub fn number_op(space: HilbertSpace) -> Result<OperatorMatrix> {
    let a = annihilation_op(space)?;
    let m = a.matrix().adjoint() * a.matrix();
    OperatorMatrix::new(space, m)
}

/// Reduced density matrix on the kept factors, tracing everything else out.
pub fn partial_trace(rho: &DensityMatrix, keep: &[Subsystem]) -> Result<DensityMatrix> {
    let space = rho.space();
    let keep_slots = space.slots_of(keep)?;
    let dims = space.factor_dims();
    let n_slots = dims.len();
    let traced_slots: Vec<usize> = (0..n_slots).filter(|s| !keep_slots.contains(s)).collect();

    // reduced space: kept qubits renumbered in original order, cavity kept if selected
    let kept_qubits = keep_slots.iter().filter(|&&s| s < space.num_qubits()).count();
    let keeps_cavity = space.has_cavity() && keep_slots.contains(&space.num_qubits());
    let out_space = if kept_qubits == 0 {
        // cavity only: model as zero qubits is not representable; promote the
        // cavity to a standalone Fock space via a one-qubit-free encoding.
        return trace_to_cavity_only(rho, &keep_slots);
    } else if keeps_cavity {
        HilbertSpace::new(kept_qubits, space.photon_cutoff().unwrap())?
    } else {
        HilbertSpace::qubits_only(kept_qubits)?
    };

    let out_dims: Vec<usize> = keep_slots.iter().map(|&s| dims[s]).collect();
    let full_strides = strides(&dims);
    let out_dim: usize = out_dims.iter().product();
    let traced_dim: usize = traced_slots.iter().map(|&s| dims[s]).product();
    let traced_dims: Vec<usize> = traced_slots.iter().map(|&s| dims[s]).collect();

    let mut out = CMatrix::zeros(out_dim, out_dim);
    let mut kept_row = vec![0usize; keep_slots.len()];
    let mut kept_col = vec![0usize; keep_slots.len()];
    let mut traced = vec![0usize; traced_slots.len()];
    for row_out in 0..out_dim {
        digits_of(row_out, &out_dims, &mut kept_row);
        for col_out in 0..out_dim {
            digits_of(col_out, &out_dims, &mut kept_col);
            let mut acc = ZERO;
            for t in 0..traced_dim {
                digits_of(t, &traced_dims, &mut traced);
                let mut row_full = 0usize;
                let mut col_full = 0usize;
                for (k, &slot) in keep_slots.iter().enumerate() {
                    row_full += kept_row[k] * full_strides[slot];
                    col_full += kept_col[k] * full_strides[slot];
                }
                for (k, &slot) in traced_slots.iter().enumerate() {
                    row_full += traced[k] * full_strides[slot];
                    col_full += traced[k] * full_strides[slot];
                }
                acc += rho.matrix()[(row_full, col_full)];
            }
            out[(row_out, col_out)] = acc;
        }
    }
    Ok(DensityMatrix::trusted(out_space, out))
}

/// Cavity-only reduction, represented on a one-qubit space with the qubit
/// frozen in `|g⟩` so downstream code keeps a uniform state type.
fn trace_to_cavity_only(rho: &DensityMatrix, keep_slots: &[usize]) -> Result<DensityMatrix> {
    let space = rho.space();
    debug_assert_eq!(keep_slots, &[space.num_qubits()]);
    let cav = space.cavity_dim();
    let qubit_dim = 1usize << space.num_qubits();
    let mut reduced = CMatrix::zeros(cav, cav);
    for n in 0..cav {
        for m in 0..cav {
            let mut acc = ZERO;
            for q in 0..qubit_dim {
                acc += rho.matrix()[(q * cav + n, q * cav + m)];
            }
            reduced[(n, m)] = acc;
        }
    }
    let out_space = HilbertSpace::new(1, cav - 1)?;
    let mut out = CMatrix::zeros(2 * cav, 2 * cav);
    out.view_mut((0, 0), (cav, cav)).copy_from(&reduced);
    Ok(DensityMatrix::trusted(out_space, out))
}

/// Transposes the chosen factors only. The result is hermitian with trace
/// one but may have negative eigenvalues, so it is returned as a plain
/// operator.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: &[Subsystem]) -> Result<OperatorMatrix> {
    let space = rho.space();
    let slots = space.slots_of(subsystem)?;
    let dims = space.factor_dims();
    if slots.len() == dims.len() {
        return Err(SimError::ImproperSubsystemSelection);
    }
    let full_strides = strides(&dims);
    let dim = space.dim();
    let mut out = CMatrix::zeros(dim, dim);
    let mut row_digits = vec![0usize; dims.len()];
    let mut col_digits = vec![0usize; dims.len()];
    for row in 0..dim {
        digits_of(row, &dims, &mut row_digits);
        for col in 0..dim {
            digits_of(col, &dims, &mut col_digits);
            let mut row_t = row;
            let mut col_t = col;
            for &slot in &slots {
                let delta = (col_digits[slot] as isize - row_digits[slot] as isize)
                    * full_strides[slot] as isize;
                row_t = (row_t as isize + delta) as usize;
                col_t = (col_t as isize - delta) as usize;
            }
            out[(row_t, col_t)] = rho.matrix()[(row, col)];
        }
    }
    OperatorMatrix::new(space, out)
}

/// Sum of singular values.
pub fn trace_norm(m: &OperatorMatrix) -> f64 {
    linalg::trace_norm(m.matrix())
}

/// `-Σ λ log₂ λ` over the spectrum, with `0·log 0 = 0`. Eigenvalues below
/// [`EIGENVALUE_CLAMP`] are treated as zero and the spectrum is clamped to
/// `[0, 1]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let mut entropy = 0.0;
    for lambda in linalg::eigh_values(rho.matrix()) {
        let lambda = lambda.min(1.0);
        if lambda > EIGENVALUE_CLAMP {
            entropy -= lambda * lambda.log2();
        }
    }
    entropy
}

/// `(|gg⟩ + |ee⟩)/√2` on a two-qubit space.
pub fn bell_state() -> StateVector {
    let space = HilbertSpace::qubits_only(2).unwrap();
    let mut v = CVector::zeros(4);
    v[0] = c(std::f64::consts::FRAC_1_SQRT_2);
    v[3] = c(std::f64::consts::FRAC_1_SQRT_2);
    StateVector::normalized(space, v).unwrap()
}

/// `(|ggg⟩ + |eee⟩)/√2` on a three-qubit space.
pub fn ghz_state() -> StateVector {
    let space = HilbertSpace::qubits_only(3).unwrap();
    let mut v = CVector::zeros(8);
    v[0] = c(std::f64::consts::FRAC_1_SQRT_2);
    v[7] = c(std::f64::consts::FRAC_1_SQRT_2);
    StateVector::normalized(space, v).unwrap()
}

/// `(|gge⟩ + |geg⟩ + |egg⟩)/√3`.
pub fn w_state() -> StateVector {
    let space = HilbertSpace::qubits_only(3).unwrap();
    let mut v = CVector::zeros(8);
    let w = c(1.0 / 3.0f64.sqrt());
    v[1] = w;
    v[2] = w;
    v[4] = w;
    StateVector::normalized(space, v).unwrap()
}

/// Werner state `p |Φ⁺⟩⟨Φ⁺| + (1-p) I/4`.
pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SimError::InvalidParameter(format!(
            "werner parameter {p} outside [0, 1]"
        )));
    }
    let bell = bell_state().projector();
    let mixed = DensityMatrix::maximally_mixed(bell.space());
    DensityMatrix::mixture(&[(p, bell), (1.0 - p, mixed)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I as IM;
    use approx::assert_abs_diff_eq;

    #[test]
    fn index_layout_matches_big_endian_convention() {
        let space = HilbertSpace::new(2, 1).unwrap();
        // order: gg0 gg1 ge0 ge1 eg0 eg1 ee0 ee1
        assert_eq!(space.index_of(&[0, 0], 0).unwrap(), 0);
        assert_eq!(space.index_of(&[0, 0], 1).unwrap(), 1);
        assert_eq!(space.index_of(&[0, 1], 0).unwrap(), 2);
        assert_eq!(space.index_of(&[1, 0], 0).unwrap(), 4);
        assert_eq!(space.index_of(&[1, 1], 1).unwrap(), 7);
        assert_eq!(space.dim(), 8);
        assert_eq!(space.basis_label(5), "eg,1");
    }

    #[test]
    fn index_round_trips_for_every_basis_state() {
        for (n, n_max) in [(1, 0), (2, 1), (3, 4), (2, 4)] {
            let space = HilbertSpace::new(n, n_max).unwrap();
            for k in 0..space.dim() {
                let (bits, photons) = space.decode(k);
                assert_eq!(space.index_of(&bits, photons).unwrap(), k);
            }
        }
    }

    #[test]
    fn embed_single_qubit_is_identity_mapping() {
        let space = HilbertSpace::new(1, 0).unwrap();
        let op = embed_qubit_op(space, 1, &qubit_ops::sigma_y()).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[ZERO, -IM, IM, ZERO]);
        assert_eq!(op.matrix(), &expected);
    }

    #[test]
    fn embed_second_slot_matches_hand_kronecker() {
        let space = HilbertSpace::new(2, 0).unwrap();
        let op = embed_qubit_op(space, 2, &qubit_ops::sigma_y()).unwrap();
        // I₂ ⊗ σ₂ written out element-wise
        let expected = CMatrix::from_row_slice(
            4,
            4,
            &[
                ZERO, -IM, ZERO, ZERO, //
                IM, ZERO, ZERO, ZERO, //
                ZERO, ZERO, ZERO, -IM, //
                ZERO, ZERO, IM, ZERO,
            ],
        );
        assert_eq!(op.matrix(), &expected);
    }

    #[test]
    fn embedded_raising_operator_acts_on_the_right_slot() {
        // brute-force check over all 8 basis states of (N=2, n_max=1)
        let space = HilbertSpace::new(2, 1).unwrap();
        let op = embed_qubit_op(space, 1, &qubit_ops::sigma_plus()).unwrap();
        for k in 0..space.dim() {
            let (bits, photons) = space.decode(k);
            let mut source = CVector::zeros(space.dim());
            source[k] = ONE;
            let image = op
                .apply(&StateVector::raw(space, source).unwrap())
                .unwrap();
            if bits[0] == 0 {
                let target = space.index_of(&[1, bits[1]], photons).unwrap();
                for idx in 0..space.dim() {
                    let expected = if idx == target { ONE } else { ZERO };
                    assert_eq!(image.amplitudes()[idx], expected, "source {k} target {idx}");
                }
            } else {
                assert_eq!(image.norm(), 0.0);
            }
        }
        let out = op.apply(&space.ket("gg", 0).unwrap()).unwrap();
        assert_eq!(out.amplitude(&[1, 0], 0).unwrap(), ONE);
    }

    #[test]
    fn embed_rejects_out_of_range_index() {
        let space = HilbertSpace::new(2, 1).unwrap();
        assert!(matches!(
            embed_qubit_op(space, 0, &qubit_ops::sigma_x()),
            Err(SimError::QubitIndexOutOfRange { .. })
        ));
        assert!(matches!(
            embed_qubit_op(space, 3, &qubit_ops::sigma_x()),
            Err(SimError::QubitIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn annihilation_ladder_and_vacuum() {
        let space = HilbertSpace::new(1, 2).unwrap();
        let a = annihilation_op(space).unwrap();
        let from_two = a.apply(&space.ket("g", 2).unwrap()).unwrap();
        assert_abs_diff_eq!(
            from_two.amplitude(&[0], 1).unwrap().re,
            2.0f64.sqrt(),
            epsilon = 1e-15
        );
        let from_vacuum = a.apply(&space.ket("g", 0).unwrap()).unwrap();
        assert_eq!(from_vacuum.norm(), 0.0);
    }

    #[test]
    fn number_operator_spectrum_under_truncation() {
        let space = HilbertSpace::new(1, 2).unwrap();
        let n = number_op(space).unwrap();
        let mut eigs = linalg::eigh_values(n.matrix());
        eigs.iter_mut().for_each(|v| *v = v.round());
        assert_eq!(eigs, vec![0.0, 0.0, 1.0, 1.0, 2.0, 2.0]);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let rho = bell_state().projector();
        let reduced = partial_trace(&rho, &[Subsystem::Qubit(1)]).unwrap();
        let expected = CMatrix::identity(2, 2) * c(0.5);
        assert!(linalg::one_norm(&(reduced.matrix() - expected)) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state_factorizes() {
        let space = HilbertSpace::qubits_only(2).unwrap();
        let rho = space.ket("ge", 0).unwrap().projector();
        let reduced = partial_trace(&rho, &[Subsystem::Qubit(2)]).unwrap();
        let mut expected = CMatrix::zeros(2, 2);
        expected[(1, 1)] = ONE;
        assert!(linalg::one_norm(&(reduced.matrix() - expected)) < 1e-14);
    }

    #[test]
    fn partial_trace_matches_explicit_double_loop() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let space = HilbertSpace::qubits_only(2).unwrap();
        for _ in 0..20 {
            let rho = crate::random::random_density_matrix(&mut rng, space);
            let reduced = partial_trace(&rho, &[Subsystem::Qubit(1)]).unwrap();
            assert_abs_diff_eq!(reduced.trace().re, 1.0, epsilon = 1e-10);
            // independent summation over explicit basis pairs
            let m = rho.matrix();
            for i in 0..2 {
                for j in 0..2 {
                    let expected = m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)];
                    assert!((reduced.matrix()[(i, j)] - expected).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn partial_trace_rejects_empty_keep_set() {
        let rho = bell_state().projector();
        assert!(matches!(
            partial_trace(&rho, &[]),
            Err(SimError::EmptySubsystemSelection)
        ));
    }

    #[test]
    fn partial_transpose_of_bell_state_has_one_negative_eigenvalue() {
        let rho = bell_state().projector();
        let pt = partial_transpose(&rho, &[Subsystem::Qubit(1)]).unwrap();
        let eigs = linalg::eigh_values(pt.matrix());
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (got, want) in eigs.iter().zip(expected.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn partial_transpose_keeps_product_state_spectrum() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let space = HilbertSpace::qubits_only(2).unwrap();
        for _ in 0..10 {
            let a = crate::random::random_density_matrix(
                &mut rng,
                HilbertSpace::qubits_only(1).unwrap(),
            );
            let b = crate::random::random_density_matrix(
                &mut rng,
                HilbertSpace::qubits_only(1).unwrap(),
            );
            let prod = DensityMatrix::new(space, linalg::kron(a.matrix(), b.matrix())).unwrap();
            let pt = partial_transpose(&prod, &[Subsystem::Qubit(1)]).unwrap();
            let before = linalg::eigh_values(prod.matrix());
            let after = linalg::eigh_values(pt.matrix());
            for (x, y) in before.iter().zip(after.iter()) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let space = HilbertSpace::new(2, 1).unwrap();
        let rho = crate::random::random_density_matrix(&mut rng, space);
        let pt = partial_transpose(&rho, &[Subsystem::Qubit(1)]).unwrap();
        let back = partial_transpose(
            &DensityMatrix::trusted(space, pt.matrix().clone()),
            &[Subsystem::Qubit(1)],
        )
        .unwrap();
        assert!(linalg::one_norm(&(back.matrix() - rho.matrix())) < 1e-14);
    }

    #[test]
    fn partial_transpose_rejects_empty_and_full_selections() {
        let rho = bell_state().projector();
        assert!(partial_transpose(&rho, &[]).is_err());
        assert!(partial_transpose(&rho, &[Subsystem::Qubit(1), Subsystem::Qubit(2)]).is_err());
    }

    #[test]
    fn trace_norm_reference_values() {
        let space = HilbertSpace::qubits_only(2).unwrap();
        let id = OperatorMatrix::identity(space);
        assert_abs_diff_eq!(trace_norm(&id), 4.0, epsilon = 1e-12);
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(0.5),
            c(0.5),
            c(0.5),
            c(-0.5),
        ]));
        let op = OperatorMatrix::new(space, d).unwrap();
        assert_abs_diff_eq!(trace_norm(&op), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_reference_values() {
        let space = HilbertSpace::qubits_only(1).unwrap();
        let pure = space.ket("g", 0).unwrap().projector();
        assert_abs_diff_eq!(von_neumann_entropy(&pure), 0.0, epsilon = 1e-12);
        let mixed = DensityMatrix::maximally_mixed(space);
        assert_abs_diff_eq!(von_neumann_entropy(&mixed), 1.0, epsilon = 1e-12);
        let skewed = DensityMatrix::new(
            space,
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.75), c(0.25)])),
        )
        .unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&skewed), 0.811278, epsilon = 1e-5);
    }

    #[test]
    fn density_matrix_validation_rejects_bad_inputs() {
        let space = HilbertSpace::qubits_only(1).unwrap();
        let non_hermitian = CMatrix::from_row_slice(2, 2, &[c(0.5), ONE, ZERO, c(0.5)]);
        assert!(matches!(
            DensityMatrix::new(space, non_hermitian),
            Err(SimError::NotHermitian { .. })
        ));
        let bad_trace = CMatrix::identity(2, 2);
        assert!(matches!(
            DensityMatrix::new(space, bad_trace),
            Err(SimError::TraceDeviation { .. })
        ));
        let negative = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.5), c(-0.5)]));
        assert!(matches!(
            DensityMatrix::new(space, negative),
            Err(SimError::NotPositive { .. })
        ));
    }
}
