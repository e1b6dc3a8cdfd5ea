//! Seeded random states and unitaries.
//!
//! Used by the property-test suites; exposed publicly because randomized
//! spot checks are routinely useful when exploring entanglement measures.

use rand::Rng;

use crate::hilbert::{DensityMatrix, HilbertSpace, StateVector};
use crate::linalg::{c, kron, CMatrix, CVector, C64};

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    C64::new(standard_normal(rng), standard_normal(rng))
}

/// Ginibre matrix: i.i.d. complex Gaussian entries.
pub fn random_ginibre<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_normal(rng))
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng>(rng: &mut R, space: HilbertSpace) -> StateVector {
    let v = CVector::from_fn(space.dim(), |_, _| complex_normal(rng));
    StateVector::raw(space, v).unwrap().normalize().unwrap()
}

/// Random full-rank density matrix from the Hilbert-Schmidt ensemble,
/// `ρ = GG†/Tr(GG†)`.
pub fn random_density_matrix<R: Rng>(rng: &mut R, space: HilbertSpace) -> DensityMatrix {
    let g = random_ginibre(rng, space.dim());
    let m = &g * g.adjoint();
    let m = &m * c(1.0 / m.trace().re);
    DensityMatrix::new(space, m).unwrap()
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = random_ginibre(rng, n);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { c(1.0) } else { d / c(d.norm()) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random separable mixture `Σ pᵢ ρᵢᴬ ⊗ ρᵢᴮ` of two qubits.
pub fn random_separable_two_qubit<R: Rng>(rng: &mut R, terms: usize) -> DensityMatrix {
    let qubit = HilbertSpace::qubits_only(1).unwrap();
    let space = HilbertSpace::qubits_only(2).unwrap();
    let mut weights: Vec<f64> = (0..terms.max(1)).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut m = CMatrix::zeros(4, 4);
    for w in weights {
        let a = random_density_matrix(rng, qubit);
        let b = random_density_matrix(rng, qubit);
        m += kron(a.matrix(), b.matrix()) * c(w);
    }
    DensityMatrix::new(space, m).unwrap()
}

/// Random product state `|a⟩ ⊗ |b⟩ ⊗ …` over the factors of `space`.
pub fn random_product_state<R: Rng>(rng: &mut R, space: HilbertSpace) -> StateVector {
    let mut v = CVector::from_vec(vec![c(1.0)]);
    for dim in space.factor_dims() {
        let factor = CVector::from_fn(dim, |_, _| complex_normal(rng)).normalize();
        v = v.kronecker(&factor);
    }
    StateVector::raw(space, v).unwrap().normalize().unwrap()
}
