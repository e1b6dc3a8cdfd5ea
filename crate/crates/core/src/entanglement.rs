//! Entanglement and correlation measures for two- and three-qubit states.
//!
//! Negativity conventions: the Vidal-Werner definition halves the trace-norm
//! excess, `N = (‖ρ^{T_A}‖₁ - 1)/2`, so a Bell pair scores 1/2. The residual
//! entanglement π_A and its permutation average three-π are conventionally
//! quoted with the unhalved excess `‖ρ^{T_A}‖₁ - 1`, which puts a GHZ state
//! at exactly 1. Both conventions are selectable everywhere; see
//! [`Conventions`] for the defaults used in reports.

use std::collections::BTreeMap;

use crate::error::{Result, SimError};
use crate::hilbert::{
    partial_trace, partial_transpose, qubit_ops, von_neumann_entropy, DensityMatrix, Subsystem,
    EIGENVALUE_CLAMP,
};
use crate::linalg::{self, kron, sqrt_psd};

/// Which factor to apply to the trace-norm excess of the partial transpose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NegativityConvention {
    /// `(‖ρ^{T_A}‖₁ - 1)/2`; Bell pair ↦ 1/2.
    Halved,
    /// `‖ρ^{T_A}‖₁ - 1`; Bell pair ↦ 1, GHZ three-π ↦ 1.
    Unhalved,
}

/// Spin-flip recipe used inside the concurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinFlip {
    /// Standard Wootters: conjugate in the computational basis, take square
    /// roots of the eigenvalues of `ρρ̃`. Bell pair ↦ 1.
    Wootters,
    /// `ρ̃ = (σ₂⊗σ₂) ρ (σ₂⊗σ₂)` without conjugation and without square
    /// roots, kept for comparison.
    Literal,
}

/// Conventions used when assembling a [`MeasureRecord`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conventions {
    pub negativity: NegativityConvention,
    pub three_pi: NegativityConvention,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            negativity: NegativityConvention::Halved,
            three_pi: NegativityConvention::Unhalved,
        }
    }
}

/// A named measure that the harness can be asked to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Measure {
    Concurrence,
    MutualInformation,
    Negativity,
    PairwiseNegativity,
    ThreePi,
}

impl Measure {
    pub fn name(&self) -> &'static str {
        match self {
            Measure::Concurrence => "concurrence",
            Measure::MutualInformation => "mutual_information",
            Measure::Negativity => "negativity",
            Measure::PairwiseNegativity => "pairwise_negativity",
            Measure::ThreePi => "three_pi",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "concurrence" => Some(Measure::Concurrence),
            "mutual_information" => Some(Measure::MutualInformation),
            "negativity" => Some(Measure::Negativity),
            "pairwise_negativity" => Some(Measure::PairwiseNegativity),
            "three_pi" => Some(Measure::ThreePi),
            _ => None,
        }
    }
}

/// Values of the requested measures at one instant.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MeasureRecord {
    pub concurrence: Option<f64>,
    /// Interpretable as a correlation measure only for pure global states;
    /// reported as a diagnostic elsewhere.
    pub mutual_information: Option<f64>,
    pub negativity_per_qubit: Vec<f64>,
    pub pairwise_negativity: BTreeMap<(usize, usize), f64>,
    pub three_pi: Option<f64>,
}

fn require_qubits(rho: &DensityMatrix, n: usize) -> Result<()> {
    let space = rho.space();
    if space.num_qubits() != n || space.has_cavity() {
        return Err(SimError::DimensionMismatch {
            expected: 1 << n,
            actual: space.dim(),
        });
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit state (see [`SpinFlip`] for the
/// literal variant).
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    concurrence_with(rho, SpinFlip::Wootters)
}

pub fn concurrence_with(rho: &DensityMatrix, flip: SpinFlip) -> Result<f64> {
    require_qubits(rho, 2)?;
    let yy = kron(&qubit_ops::sigma_y(), &qubit_ops::sigma_y());
    let flipped = match flip {
        SpinFlip::Wootters => &yy * rho.matrix().conjugate() * &yy,
        SpinFlip::Literal => &yy * rho.matrix() * &yy,
    };
    // ρρ̃ is a product of two PSD hermitians, so its spectrum equals that of
    // the hermitian S ρ S with S = ρ̃^{1/2}.
    let s = sqrt_psd(&flipped);
    let herm = &s * rho.matrix() * &s;
    let raw = linalg::eigh_values(&herm);
    if let Some(&worst) = raw.iter().find(|&&v| v < -1e-10) {
        return Err(SimError::NotPositive { eigenvalue: worst });
    }
    // clamp the roundoff floor before the square roots amplify it
    let mut lambdas: Vec<f64> = raw
        .into_iter()
        .map(|v| if v < 1e-14 { 0.0 } else { v })
        .collect();
    if matches!(flip, SpinFlip::Wootters) {
        lambdas.iter_mut().for_each(|v| *v = v.sqrt());
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// `I(ρ_AB) = S(ρ_A) + S(ρ_B) - S(ρ_AB)` with base-2 entropies. `part_a`
/// selects subsystem A; B is the complement.
pub fn mutual_information(rho: &DensityMatrix, part_a: &[Subsystem]) -> Result<f64> {
    let space = rho.space();
    let part_b: Vec<Subsystem> = space
        .factors()
        .into_iter()
        .filter(|f| !part_a.contains(f))
        .collect();
    if part_a.is_empty() || part_b.is_empty() {
        return Err(SimError::ImproperSubsystemSelection);
    }
    let rho_a = partial_trace(rho, part_a)?;
    let rho_b = partial_trace(rho, &part_b)?;
    Ok(von_neumann_entropy(&rho_a) + von_neumann_entropy(&rho_b) - von_neumann_entropy(rho))
}

/// Negativity via the trace norm of the partial transpose.
pub fn negativity(
    rho: &DensityMatrix,
    subsystem: &[Subsystem],
    convention: NegativityConvention,
) -> Result<f64> {
    let pt = partial_transpose(rho, subsystem)?;
    let excess = linalg::trace_norm(pt.matrix()) - 1.0;
    let excess = if excess.abs() < EIGENVALUE_CLAMP { 0.0 } else { excess };
    Ok(match convention {
        NegativityConvention::Halved => excess / 2.0,
        NegativityConvention::Unhalved => excess,
    })
}

/// Negativity via the absolute sum of negative eigenvalues of the partial
/// transpose. Agrees with [`negativity`] to 1e-10 on valid states; the two
/// routes are kept separate so they can check each other.
pub fn negativity_eigensum(
    rho: &DensityMatrix,
    subsystem: &[Subsystem],
    convention: NegativityConvention,
) -> Result<f64> {
    let pt = partial_transpose(rho, subsystem)?;
    let neg_sum: f64 = linalg::eigh_values(pt.matrix())
        .into_iter()
        .map(|v| (v.abs() - v) / 2.0)
        .sum();
    let neg_sum = if neg_sum < EIGENVALUE_CLAMP { 0.0 } else { neg_sum };
    Ok(match convention {
        NegativityConvention::Halved => neg_sum,
        NegativityConvention::Unhalved => 2.0 * neg_sum,
    })
}

/// Residual entanglement `π_A = N²_{A(BC)} - N²_{AB} - N²_{AC}` for a
/// three-qubit state; may be negative for an individual pivot.
pub fn residual_pi(
    rho: &DensityMatrix,
    pivot: usize,
    convention: NegativityConvention,
) -> Result<f64> {
    require_qubits(rho, 3)?;
    if pivot < 1 || pivot > 3 {
        return Err(SimError::QubitIndexOutOfRange {
            index: pivot,
            num_qubits: 3,
        });
    }
    let others: Vec<usize> = (1..=3).filter(|&q| q != pivot).collect();
    let n_rest = negativity(rho, &[Subsystem::Qubit(pivot)], convention)?;
    let mut value = n_rest * n_rest;
    for &other in &others {
        let pair = partial_trace(
            rho,
            &[Subsystem::Qubit(pivot), Subsystem::Qubit(other)],
        )?;
        // pivot is qubit 1 of the reduced pair when pivot < other
        let reduced_pivot = if pivot < other { 1 } else { 2 };
        let n_pair = negativity(&pair, &[Subsystem::Qubit(reduced_pivot)], convention)?;
        value -= n_pair * n_pair;
    }
    Ok(value)
}

/// `π_ABC = (π_A + π_B + π_C)/3`, invariant under qubit permutations.
pub fn three_pi(rho: &DensityMatrix, convention: NegativityConvention) -> Result<f64> {
    let sum: f64 = (1..=3)
        .map(|pivot| residual_pi(rho, pivot, convention))
        .sum::<Result<f64>>()?;
    Ok(sum / 3.0)
}

/// Evaluates the requested measures on a qubits-only density matrix.
pub fn evaluate_measures(
    rho_qubits: &DensityMatrix,
    measures: &[Measure],
    conventions: Conventions,
) -> Result<MeasureRecord> {
    let n = rho_qubits.space().num_qubits();
    let mut record = MeasureRecord::default();
    for measure in measures {
        match measure {
            Measure::Concurrence => {
                record.concurrence = Some(concurrence(rho_qubits)?);
            }
            Measure::MutualInformation => {
                record.mutual_information =
                    Some(mutual_information(rho_qubits, &[Subsystem::Qubit(1)])?);
            }
            Measure::Negativity => {
                record.negativity_per_qubit = (1..=n)
                    .map(|q| negativity(rho_qubits, &[Subsystem::Qubit(q)], conventions.negativity))
                    .collect::<Result<_>>()?;
            }
            Measure::PairwiseNegativity => {
                for i in 1..=n {
                    for j in (i + 1)..=n {
                        let value = if n == 2 {
                            negativity(rho_qubits, &[Subsystem::Qubit(1)], conventions.negativity)?
                        } else {
                            let pair = partial_trace(
                                rho_qubits,
                                &[Subsystem::Qubit(i), Subsystem::Qubit(j)],
                            )?;
                            negativity(&pair, &[Subsystem::Qubit(1)], conventions.negativity)?
                        };
                        record.pairwise_negativity.insert((i, j), value);
                    }
                }
            }
            Measure::ThreePi => {
                record.three_pi = Some(three_pi(rho_qubits, conventions.three_pi)?);
            }
        }
    }
    Ok(record)
}
