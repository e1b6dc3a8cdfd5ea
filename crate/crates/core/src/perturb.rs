//! Second-order perturbative solutions for single-switch constant coupling.
//!
//! These are the analytical cross-checks for the exact propagators: the
//! wavefunction is expanded in powers of `g₀/2` around the free evolution,
//!
//! ```text
//! |ψ(t)⟩ = |ψ⟩⁽⁰⁾ + (g₀/2)|ψ⟩⁽¹⁾ + (g₀/2)²|ψ⟩⁽²⁾ + …
//! ```
//!
//! and each order solves a driven linear equation whose source is the order
//! below. [`closed_form_2q`] and [`closed_form_3q`] evaluate the explicit
//! second-order solutions on the one-photon truncation; [`generic_recursion`]
//! integrates the coefficient equations order by order for any qubit count
//! and cutoff, which makes the two routes independent checks of each other.
//!
//! Starting from the global ground state, first order populates the
//! single-excitation one-photon states, all with amplitude
//! `(e^{-iΩt} - 1)/Ω`, `Ω = ω_c + E₀`. Second order feeds the ground state
//! back and populates the two-excitation zero-photon states. Triple
//! excitations cannot appear at second order: each power of the interaction
//! flips exactly one qubit.

use crate::dynamics;
use crate::entanglement::{self, Conventions, Measure, MeasureRecord};
use crate::error::{Result, SimError};
use crate::hilbert::{partial_trace, HilbertSpace, StateVector, Subsystem};
use crate::linalg::{c, CVector, C64, I, ONE};
use crate::model::{build_h0, build_hi_unit, SystemParams};

/// Resonance guard: `|E₀ - ω_c|` below this (rad/ns) makes the second-order
/// denominators blow up and the closed forms are refused.
pub const RESONANCE_GUARD: f64 = 1e-6;

/// Quadrature density used by [`generic_recursion`] (points per ns).
pub const QUADRATURE_DENSITY: f64 = 2000.0;

/// A truncated perturbative state: the raw expansion and its normalized
/// copy. Measures are always computed from the normalized state, since the
/// truncation violates the unit norm at `O(g₀²)`.
#[derive(Clone, Debug)]
pub struct PerturbedState {
    pub raw: StateVector,
    pub normalized: StateVector,
}

impl PerturbedState {
    fn from_raw(raw: StateVector) -> Result<Self> {
        let normalized = raw.normalize()?;
        Ok(Self { raw, normalized })
    }
}

fn equal_frequency(params: &SystemParams) -> Result<f64> {
    let e0 = params.qubit_freqs[0];
    if params
        .qubit_freqs
        .iter()
        .any(|&f| (f - e0).abs() > 1e-12 * e0.abs().max(1.0))
    {
        return Err(SimError::UnequalQubitFrequencies(params.qubit_freqs.clone()));
    }
    Ok(e0)
}

fn resonance_guard(params: &SystemParams) -> Result<()> {
    let gap = (params.qubit_freqs[0] - params.cavity_freq).abs();
    if gap < RESONANCE_GUARD {
        return Err(SimError::NearResonance { gap });
    }
    Ok(())
}

/// `(e^{-iΩt} - 1)/Ω` — the first-order amplitude.
fn first_order(omega: f64, t: f64) -> C64 {
    ((-I * c(omega * t)).exp() - ONE) / c(omega)
}

/// `k (iΩt + e^{-iΩt} - 1)/Ω²` — the second-order ground-state feedback,
/// `k` the number of first-order source states.
fn second_order_ground(omega: f64, t: f64, k: f64) -> C64 {
    (I * c(omega * t) + (-I * c(omega * t)).exp() - ONE) * c(k / (omega * omega))
}

/// `[2E₀ - 2E₀e^{-iΩt} + Ω(e^{-2iE₀t} - 1)] / [E₀ Ω (E₀ - ω_c)]` — the
/// second-order two-excitation amplitude.
fn second_order_double(e0: f64, w: f64, t: f64) -> C64 {
    let omega = w + e0;
    let num = c(2.0 * e0) - c(2.0 * e0) * (-I * c(omega * t)).exp()
        + c(omega) * ((-I * c(2.0 * e0 * t)).exp() - ONE);
    num / c(e0 * omega * (e0 - w))
}

/// Second-order single-switch solution for two equal qubits on the
/// one-photon truncation: amplitudes on `|gg,0⟩`, `|ge,1⟩`, `|eg,1⟩` and
/// `|ee,0⟩`.
pub fn closed_form_2q(params: &SystemParams, t: f64) -> Result<PerturbedState> {
    let e0 = equal_frequency(params)?;
    resonance_guard(params)?;
    let w = params.cavity_freq;
    let omega = w + e0;
    let g_half = c(params.coupling_strength / 2.0);
    let space = HilbertSpace::new(2, 1)?;

    let mut amps = CVector::zeros(space.dim());
    amps[space.index_of(&[0, 0], 0)?] = ONE + g_half * g_half * second_order_ground(omega, t, 2.0);
    let f1 = g_half * first_order(omega, t);
    amps[space.index_of(&[0, 1], 1)?] = f1;
    amps[space.index_of(&[1, 0], 1)?] = f1;
    amps[space.index_of(&[1, 1], 0)?] = g_half * g_half * second_order_double(e0, w, t);

    PerturbedState::from_raw(StateVector::raw(space, amps)?)
}

/// Second-order single-switch solution for three equal qubits: the ground
/// feedback carries a factor 3 (three first-order sources) and the
/// two-excitation amplitude appears on each of `|eeg,0⟩`, `|ege,0⟩`,
/// `|gee,0⟩`.
pub fn closed_form_3q(params: &SystemParams, t: f64) -> Result<PerturbedState> {
    let e0 = equal_frequency(params)?;
    resonance_guard(params)?;
    let w = params.cavity_freq;
    let omega = w + e0;
    let g_half = c(params.coupling_strength / 2.0);
    let space = HilbertSpace::new(3, 1)?;

    let mut amps = CVector::zeros(space.dim());
    amps[space.index_of(&[0, 0, 0], 0)?] =
        ONE + g_half * g_half * second_order_ground(omega, t, 3.0);
    let f1 = g_half * first_order(omega, t);
    amps[space.index_of(&[0, 0, 1], 1)?] = f1;
    amps[space.index_of(&[0, 1, 0], 1)?] = f1;
    amps[space.index_of(&[1, 0, 0], 1)?] = f1;
    let f2 = g_half * g_half * second_order_double(e0, w, t);
    amps[space.index_of(&[1, 1, 0], 0)?] = f2;
    amps[space.index_of(&[1, 0, 1], 0)?] = f2;
    amps[space.index_of(&[0, 1, 1], 0)?] = f2;

    PerturbedState::from_raw(StateVector::raw(space, amps)?)
}

/// Per-order coefficient tables on a uniform time grid.
#[derive(Clone, Debug)]
pub struct PerturbativeSolution {
    space: HilbertSpace,
    times: Vec<f64>,
    /// `orders[j][k]` holds the unweighted coefficients α⁽ʲ⁾(t_k).
    orders: Vec<Vec<CVector>>,
}

impl PerturbativeSolution {
    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn order_count(&self) -> usize {
        self.orders.len()
    }

    pub fn coefficients(&self, order: usize, time_index: usize) -> &CVector {
        &self.orders[order][time_index]
    }

    /// Sums the orders with weights `(g₀/2)ʲ` at one grid node.
    pub fn state_at(&self, time_index: usize, coupling_strength: f64) -> Result<PerturbedState> {
        let g_half = c(coupling_strength / 2.0);
        let mut amps = CVector::zeros(self.space.dim());
        let mut weight = ONE;
        for order in &self.orders {
            amps += &order[time_index] * weight;
            weight *= g_half;
        }
        PerturbedState::from_raw(StateVector::raw(self.space, amps)?)
    }
}

/// Cumulative composite-Simpson integral of uniformly sampled values;
/// odd nodes use the quadratic through the three surrounding points.
fn cumulative_simpson(y: &[C64], h: f64) -> Vec<C64> {
    let n = y.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = (y[0] + y[1]) * c(h / 2.0);
        return out;
    }
    out[1] = (y[0] * c(5.0) + y[1] * c(8.0) - y[2]) * c(h / 12.0);
    for i in 2..n {
        out[i] = if i % 2 == 0 {
            out[i - 2] + (y[i - 2] + y[i - 1] * c(4.0) + y[i]) * c(h / 3.0)
        } else {
            out[i - 1] + (-y[i - 2] + y[i - 1] * c(8.0) + y[i] * c(5.0)) * c(h / 12.0)
        };
    }
    out
}

/// Solves the coefficient equations order by order for an arbitrary qubit
/// count, cutoff and initial state.
///
/// Order zero is the free phase evolution, solved exactly. Every higher
/// order `j` is the driven equation
///
/// ```text
/// i dα⁽ʲ⁾/dt = E α⁽ʲ⁾ + (H_I^unit α⁽ʲ⁻¹⁾)
/// ```
///
/// integrated in the interaction picture as an explicit quadrature over the
/// known lower order, with composite Simpson on a grid of at least
/// [`QUADRATURE_DENSITY`] points per ns (the supplied grid is refined
/// internally if coarser). Deterministic for a fixed grid.
pub fn generic_recursion(
    space: HilbertSpace,
    params: &SystemParams,
    order_max: usize,
    initial: &StateVector,
    t_grid: &[f64],
) -> Result<PerturbativeSolution> {
    if t_grid.len() < 2 {
        return Err(SimError::InvalidTimeGrid("need at least two nodes".into()));
    }
    if t_grid[0] != 0.0 {
        return Err(SimError::InvalidTimeGrid("grid must start at 0".into()));
    }
    let step = t_grid[1] - t_grid[0];
    if step <= 0.0 {
        return Err(SimError::InvalidTimeGrid("grid must be increasing".into()));
    }
    for pair in t_grid.windows(2) {
        if ((pair[1] - pair[0]) - step).abs() > 1e-9 * step {
            return Err(SimError::InvalidTimeGrid("grid must be uniform".into()));
        }
    }
    if initial.space() != space {
        return Err(SimError::DimensionMismatch {
            expected: space.dim(),
            actual: initial.space().dim(),
        });
    }

    let refine = (step * QUADRATURE_DENSITY).ceil().max(1.0) as usize;
    let fine_step = step / refine as f64;
    let fine_len = (t_grid.len() - 1) * refine + 1;
    let dim = space.dim();

    let energies: Vec<f64> = {
        let h0 = build_h0(space, params)?;
        (0..dim).map(|k| h0.matrix()[(k, k)].re).collect()
    };
    let hi = build_hi_unit(space)?;

    // order 0: exact phases
    let mut fine_orders: Vec<Vec<CVector>> = Vec::with_capacity(order_max + 1);
    let mut zero = Vec::with_capacity(fine_len);
    for node in 0..fine_len {
        let t = node as f64 * fine_step;
        let amps = CVector::from_fn(dim, |k, _| {
            initial.amplitudes()[k] * (-I * c(energies[k] * t)).exp()
        });
        zero.push(amps);
    }
    fine_orders.push(zero);

    for j in 1..=order_max {
        let lower = &fine_orders[j - 1];
        // integrand per component: e^{+iE t} (H_I^unit α⁽ʲ⁻¹⁾)(t)
        let mut integrands: Vec<Vec<C64>> = vec![Vec::with_capacity(fine_len); dim];
        for (node, coeffs) in lower.iter().enumerate() {
            let t = node as f64 * fine_step;
            let source = hi.matrix() * coeffs;
            for k in 0..dim {
                integrands[k].push((I * c(energies[k] * t)).exp() * source[k]);
            }
        }
        let mut order_j = vec![CVector::zeros(dim); fine_len];
        for k in 0..dim {
            let integral = cumulative_simpson(&integrands[k], fine_step);
            for node in 0..fine_len {
                let t = node as f64 * fine_step;
                order_j[node][k] = -I * (-I * c(energies[k] * t)).exp() * integral[node];
            }
        }
        fine_orders.push(order_j);
    }

    let orders = fine_orders
        .into_iter()
        .map(|fine| {
            (0..t_grid.len())
                .map(|idx| fine[idx * refine].clone())
                .collect()
        })
        .collect();

    Ok(PerturbativeSolution {
        space,
        times: t_grid.to_vec(),
        orders,
    })
}

/// Entanglement measures of a perturbative state: the density matrix is
/// formed from the normalized expansion, the cavity is traced out, and the
/// standard suite for the qubit count is evaluated (concurrence, mutual
/// information and negativity for two qubits; negativity and three-π for
/// three).
pub fn perturbative_measures(state: &PerturbedState) -> Result<MeasureRecord> {
    let space = state.normalized.space();
    let rho = state.normalized.projector();
    let keep: Vec<Subsystem> = (1..=space.num_qubits()).map(Subsystem::Qubit).collect();
    let rho_qubits = if space.has_cavity() {
        partial_trace(&rho, &keep)?
    } else {
        rho
    };
    let measures: &[Measure] = match space.num_qubits() {
        2 => &[Measure::Concurrence, Measure::MutualInformation, Measure::Negativity],
        3 => &[Measure::Negativity, Measure::ThreePi],
        _ => &[Measure::Negativity],
    };
    entanglement::evaluate_measures(&rho_qubits, measures, Conventions::default())
}

/// Measures along an exact trajectory, for comparison against the
/// perturbative route; see [`crate::harness::run_validate`].
pub fn trajectory_measures(
    traj: &dynamics::Trajectory,
    index: usize,
) -> Result<MeasureRecord> {
    let rho = traj.density_at(index);
    let space = rho.space();
    let keep: Vec<Subsystem> = (1..=space.num_qubits()).map(Subsystem::Qubit).collect();
    let rho_qubits = partial_trace(&rho, &keep)?;
    let measures: &[Measure] = match space.num_qubits() {
        2 => &[Measure::Concurrence, Measure::MutualInformation, Measure::Negativity],
        3 => &[Measure::Negativity, Measure::ThreePi],
        _ => &[Measure::Negativity],
    };
    entanglement::evaluate_measures(&rho_qubits, measures, Conventions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    const TWO_PI: f64 = 2.0 * PI;

    fn perturb_params(n: usize) -> SystemParams {
        // single-switch preset: g₀/2 = 2π × 0.050 rad/ns
        SystemParams::new(
            vec![TWO_PI * 5.439; n],
            TWO_PI * 4.343,
            TWO_PI * 0.1,
            2.0 * TWO_PI * 5.439,
        )
        .unwrap()
    }

    #[test]
    fn closed_forms_start_exactly_in_the_ground_state() {
        let two = closed_form_2q(&perturb_params(2), 0.0).unwrap();
        assert_abs_diff_eq!(two.raw.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            (two.raw.amplitudes().norm() - 1.0).abs(),
            0.0,
            epsilon = 1e-15
        );
        let three = closed_form_3q(&perturb_params(3), 0.0).unwrap();
        assert_abs_diff_eq!(three.raw.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        for k in 1..three.raw.space().dim() {
            assert_eq!(three.raw.amplitudes()[k].norm(), 0.0);
        }
    }

    #[test]
    fn first_order_amplitudes_match_the_explicit_formula() {
        let params = perturb_params(2);
        let space = HilbertSpace::new(2, 1).unwrap();
        let omega = params.cavity_freq + params.qubit_freqs[0];
        for t in [0.3, 1.1, 4.7] {
            let state = closed_form_2q(&params, t).unwrap();
            let expected = c(params.coupling_strength / 2.0)
                * (((-I * c(omega * t)).exp() - ONE) / c(omega));
            let ge1 = state.raw.amplitudes()[space.index_of(&[0, 1], 1).unwrap()];
            let eg1 = state.raw.amplitudes()[space.index_of(&[1, 0], 1).unwrap()];
            assert!((ge1 - expected).norm() < 1e-15);
            assert_eq!(ge1, eg1);
        }
    }

    #[test]
    fn first_order_magnitude_peaks_at_half_period() {
        let params = perturb_params(2);
        let omega = params.cavity_freq + params.qubit_freqs[0];
        let t_star = PI / omega;
        let peak = first_order(omega, t_star).norm();
        assert_abs_diff_eq!(peak, 2.0 / omega, epsilon = 1e-12);
        for dt in [-0.4, -0.1, 0.1, 0.4] {
            assert!(first_order(omega, t_star * (1.0 + dt)).norm() <= peak + 1e-15);
        }
    }

    #[test]
    fn three_qubit_first_order_amplitudes_are_all_equal() {
        let params = perturb_params(3);
        let space = HilbertSpace::new(3, 1).unwrap();
        for t in [0.2, 0.9, 3.3] {
            let state = closed_form_3q(&params, t).unwrap();
            let a = state.raw.amplitudes()[space.index_of(&[0, 0, 1], 1).unwrap()];
            let b = state.raw.amplitudes()[space.index_of(&[0, 1, 0], 1).unwrap()];
            let c_ = state.raw.amplitudes()[space.index_of(&[1, 0, 0], 1).unwrap()];
            assert_eq!(a, b);
            assert_eq!(b, c_);
        }
    }

    #[test]
    fn ground_feedback_ratio_three_halves() {
        let p2 = perturb_params(2);
        let p3 = perturb_params(3);
        let t = 2.1;
        let s2 = closed_form_2q(&p2, t).unwrap();
        let s3 = closed_form_3q(&p3, t).unwrap();
        let g2 = s2.raw.amplitudes()[0] - ONE;
        let g3 = s3.raw.amplitudes()[0] - ONE;
        let ratio = g3 / g2;
        assert_abs_diff_eq!(ratio.re, 1.5, epsilon = 1e-10);
        assert_abs_diff_eq!(ratio.im, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn closed_form_rejects_resonance_and_unequal_frequencies() {
        let resonant = SystemParams::new(
            vec![TWO_PI * 5.0; 2],
            TWO_PI * 5.0,
            TWO_PI * 0.1,
            TWO_PI,
        )
        .unwrap();
        assert!(matches!(
            closed_form_2q(&resonant, 1.0),
            Err(SimError::NearResonance { .. })
        ));
        let unequal = SystemParams::new(
            vec![TWO_PI * 5.0, TWO_PI * 6.0],
            TWO_PI * 4.0,
            TWO_PI * 0.1,
            TWO_PI,
        )
        .unwrap();
        assert!(matches!(
            closed_form_2q(&unequal, 1.0),
            Err(SimError::UnequalQubitFrequencies(_))
        ));
    }

    #[test]
    fn order_zero_of_the_recursion_is_static_for_the_ground_state() {
        let params = perturb_params(2);
        let space = HilbertSpace::new(2, 1).unwrap();
        let grid: Vec<f64> = (0..=100).map(|k| k as f64 * 0.01).collect();
        let solution =
            generic_recursion(space, &params, 0, &space.ground_state(), &grid).unwrap();
        for idx in 0..grid.len() {
            let coeffs = solution.coefficients(0, idx);
            assert_eq!(coeffs[0], ONE);
            for k in 1..space.dim() {
                assert_eq!(coeffs[k].norm(), 0.0);
            }
        }
    }

    #[test]
    fn recursion_matches_2q_closed_form() {
        let params = perturb_params(2);
        let space = HilbertSpace::new(2, 1).unwrap();
        let grid: Vec<f64> = (0..=250).map(|k| k as f64 * 0.02).collect();
        let solution =
            generic_recursion(space, &params, 2, &space.ground_state(), &grid).unwrap();
        let mut max_err = 0.0f64;
        for (idx, &t) in grid.iter().enumerate() {
            let numeric = solution.state_at(idx, params.coupling_strength).unwrap();
            let closed = closed_form_2q(&params, t).unwrap();
            let err = (numeric.raw.amplitudes() - closed.raw.amplitudes()).norm();
            max_err = max_err.max(err);
        }
        assert!(max_err < 1e-8, "max deviation {max_err:.3e}");
    }

    #[test]
    fn recursion_matches_3q_closed_form() {
        let params = perturb_params(3);
        let space = HilbertSpace::new(3, 1).unwrap();
        let grid: Vec<f64> = (0..=250).map(|k| k as f64 * 0.02).collect();
        let solution =
            generic_recursion(space, &params, 2, &space.ground_state(), &grid).unwrap();
        let mut max_err = 0.0f64;
        for (idx, &t) in grid.iter().enumerate() {
            let numeric = solution.state_at(idx, params.coupling_strength).unwrap();
            let closed = closed_form_3q(&params, t).unwrap();
            let err = (numeric.raw.amplitudes() - closed.raw.amplitudes()).norm();
            max_err = max_err.max(err);
        }
        assert!(max_err < 1e-8, "max deviation {max_err:.3e}");
    }

    #[test]
    fn orders_scale_with_the_expected_powers_of_the_coupling() {
        let mut params = perturb_params(2);
        let space = HilbertSpace::new(2, 1).unwrap();
        let t = 1.7;
        let full = closed_form_2q(&params, t).unwrap();
        params.coupling_strength /= 2.0;
        let half = closed_form_2q(&params, t).unwrap();
        let idx1 = space.index_of(&[0, 1], 1).unwrap();
        let idx2 = space.index_of(&[1, 1], 0).unwrap();
        let r1 = full.raw.amplitudes()[idx1].norm() / half.raw.amplitudes()[idx1].norm();
        let r2 = full.raw.amplitudes()[idx2].norm() / half.raw.amplitudes()[idx2].norm();
        assert_abs_diff_eq!(r1, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(r2, 4.0, epsilon = 1e-10);
    }

    #[test]
    fn truncation_norm_defect_is_fourth_order_in_the_coupling() {
        // the order-by-order expansion is norm-preserving through O(g²): the
        // second-order ground feedback cancels the first-order norm gain, so
        // halving g₀ shrinks the defect 16-fold
        let mut params = perturb_params(2);
        let t = 2.4;
        let defect_full = (closed_form_2q(&params, t).unwrap().raw.norm() - 1.0).abs();
        params.coupling_strength /= 2.0;
        let defect_half = (closed_form_2q(&params, t).unwrap().raw.norm() - 1.0).abs();
        let ratio = defect_full / defect_half;
        assert!((ratio - 16.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn measures_vanish_at_the_initial_product_state() {
        let state = closed_form_2q(&perturb_params(2), 0.0).unwrap();
        let record = perturbative_measures(&state).unwrap();
        assert_abs_diff_eq!(record.concurrence.unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(record.mutual_information.unwrap(), 0.0, epsilon = 1e-9);
        assert!(record.negativity_per_qubit.iter().all(|&n| n < 1e-10));
    }

    #[test]
    fn pure_state_concurrence_is_twice_the_halved_negativity() {
        let params = perturb_params(2);
        for t in [0.5, 1.5, 3.0, 4.5] {
            let record = perturbative_measures(&closed_form_2q(&params, t).unwrap()).unwrap();
            let c_val = record.concurrence.unwrap();
            let n_val = record.negativity_per_qubit[0];
            assert_abs_diff_eq!(c_val, 2.0 * n_val, epsilon = 1e-9);
        }
    }
}
