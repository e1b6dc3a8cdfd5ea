//! Physical model: Hamiltonians, the switched coupling waveform and the
//! dissipation channels.
//!
//! All frequencies are angular, in rad/ns. The full Hamiltonian is
//!
//! ```text
//! H(t) = ω_c â†â + Σᵢ E₀⁽ⁱ⁾ σᵢ⁺σᵢ⁻  +  g(t) (â + â†) Σᵢ (σᵢ⁻ + σᵢ⁺)
//! ```
//!
//! with the counter-rotating terms kept: they are what the sudden switching
//! of `g(t)` excites.

use crate::error::{Result, SimError};
use crate::hilbert::{annihilation_op, embed_qubit_op, qubit_ops, HilbertSpace, OperatorMatrix};
use crate::linalg::{c, CMatrix};

/// Static model parameters. `switch_freq` is the angular switching frequency
/// ϖ_s of the square-wave coupling.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub qubit_freqs: Vec<f64>,
    pub cavity_freq: f64,
    pub coupling_strength: f64,
    pub switch_freq: f64,
}

impl SystemParams {
    pub fn new(
        qubit_freqs: Vec<f64>,
        cavity_freq: f64,
        coupling_strength: f64,
        switch_freq: f64,
    ) -> Result<Self> {
        if qubit_freqs.is_empty() {
            return Err(SimError::InvalidParameter("no qubit frequencies".into()));
        }
        if qubit_freqs.iter().any(|&f| f <= 0.0) {
            return Err(SimError::InvalidParameter(
                "qubit frequencies must be strictly positive".into(),
            ));
        }
        if cavity_freq <= 0.0 || switch_freq <= 0.0 {
            return Err(SimError::InvalidParameter(
                "cavity and switching frequencies must be strictly positive".into(),
            ));
        }
        if coupling_strength < 0.0 {
            return Err(SimError::InvalidParameter(
                "coupling strength must be non-negative".into(),
            ));
        }
        Ok(Self {
            qubit_freqs,
            cavity_freq,
            coupling_strength,
            switch_freq,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.qubit_freqs.len()
    }
}

/// Time dependence of the qubit/cavity coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CouplingWaveform {
    /// `g(t) = g₀ θ(cos ϖ_s t)`, alternating between `g₀` and `0`.
    SquareWave { amplitude: f64, switch_freq: f64 },
    /// `g(t) = g_eff` for `t ≥ 0`, zero before; the single-switch
    /// time-averaged model with `g_eff = g₀/2`.
    ConstantAfterSwitch { value: f64 },
    Off,
}

impl CouplingWaveform {
    /// Coupling value at time `t`. The Heaviside edge is defined as
    /// `θ(0) = 1`; the integrator splits segments at the switch instants so
    /// the choice only affects the sampled label of a measure-zero set.
    pub fn coupling_value(&self, t: f64) -> f64 {
        match *self {
            CouplingWaveform::SquareWave {
                amplitude,
                switch_freq,
            } => {
                if (switch_freq * t).cos() >= 0.0 {
                    amplitude
                } else {
                    0.0
                }
            }
            CouplingWaveform::ConstantAfterSwitch { value } => {
                if t >= 0.0 {
                    value
                } else {
                    0.0
                }
            }
            CouplingWaveform::Off => 0.0,
        }
    }

    /// Discontinuity instants in the open interval `(t0, t1)`, strictly
    /// increasing: the zeros of `cos ϖ_s t` at `t = (π/2 + kπ)/ϖ_s`.
    pub fn switch_times(&self, t0: f64, t1: f64) -> Vec<f64> {
        assert!(t0 < t1, "switch_times requires t0 < t1");
        match *self {
            CouplingWaveform::SquareWave { switch_freq, .. } => {
                let half_pi = std::f64::consts::FRAC_PI_2;
                let pi = std::f64::consts::PI;
                // smallest k with (π/2 + kπ)/ϖ_s > t0
                let mut k = ((t0 * switch_freq - half_pi) / pi).floor() as i64;
                while (half_pi + k as f64 * pi) / switch_freq <= t0 {
                    k += 1;
                }
                let mut times = Vec::new();
                loop {
                    let t = (half_pi + k as f64 * pi) / switch_freq;
                    if t >= t1 {
                        break;
                    }
                    times.push(t);
                    k += 1;
                }
                times
            }
            _ => Vec::new(),
        }
    }
}

/// Decay rates for the cavity and each qubit, in rad/ns.
#[derive(Clone, Debug, PartialEq)]
pub struct DissipationSpec {
    pub cavity_decay: f64,
    pub qubit_decay: Vec<f64>,
    pub qubit_dephasing: Vec<f64>,
}

impl DissipationSpec {
    pub fn new(cavity_decay: f64, qubit_decay: Vec<f64>, qubit_dephasing: Vec<f64>) -> Result<Self> {
        if qubit_decay.len() != qubit_dephasing.len() {
            return Err(SimError::DimensionMismatch {
                expected: qubit_decay.len(),
                actual: qubit_dephasing.len(),
            });
        }
        if cavity_decay < 0.0
            || qubit_decay.iter().any(|&r| r < 0.0)
            || qubit_dephasing.iter().any(|&r| r < 0.0)
        {
            return Err(SimError::InvalidParameter(
                "dissipation rates must be non-negative".into(),
            ));
        }
        Ok(Self {
            cavity_decay,
            qubit_decay,
            qubit_dephasing,
        })
    }

    /// All rates zero for `n` qubits.
    pub fn none(n: usize) -> Self {
        Self {
            cavity_decay: 0.0,
            qubit_decay: vec![0.0; n],
            qubit_dephasing: vec![0.0; n],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.qubit_decay.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.cavity_decay == 0.0
            && self.qubit_decay.iter().all(|&r| r == 0.0)
            && self.qubit_dephasing.iter().all(|&r| r == 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    CavityDecay,
    QubitRelaxation(usize),
    QubitDephasing(usize),
}

/// One dissipation channel: jump operator, rate, and what it models.
#[derive(Clone, Debug)]
pub struct CollapseChannel {
    pub op: OperatorMatrix,
    pub rate: f64,
    pub kind: ChannelKind,
}

impl CollapseChannel {
    /// Zero-rate channels are returned but can be skipped by solvers.
    pub fn is_active(&self) -> bool {
        self.rate > 0.0
    }

    /// Dephasing enters the master equation as `γ_φ (σ³ρσ³ - ρ)`; the
    /// relaxation channels as `(rate/2)(2AρA† - ρA†A - A†Aρ)`.
    pub fn is_dephasing(&self) -> bool {
        matches!(self.kind, ChannelKind::QubitDephasing(_))
    }
}

/// The diagonal free Hamiltonian `ω_c â†â + Σᵢ E₀⁽ⁱ⁾ σᵢ⁺σᵢ⁻`.
pub fn build_h0(space: HilbertSpace, params: &SystemParams) -> Result<OperatorMatrix> {
    if params.num_qubits() != space.num_qubits() {
        return Err(SimError::DimensionMismatch {
            expected: space.num_qubits(),
            actual: params.num_qubits(),
        });
    }
    let dim = space.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        let (bits, photons) = space.decode(k);
        let mut energy = params.cavity_freq * photons as f64;
        for (bit, freq) in bits.iter().zip(params.qubit_freqs.iter()) {
            energy += *bit as f64 * freq;
        }
        m[(k, k)] = c(energy);
    }
    OperatorMatrix::new(space, m)
}

/// The interaction Hamiltonian without its coupling prefactor:
/// `(â + â†) Σᵢ (σᵢ⁻ + σᵢ⁺)`.
pub fn build_hi_unit(space: HilbertSpace) -> Result<OperatorMatrix> {
    let a = annihilation_op(space)?;
    let field = a.matrix() + a.matrix().adjoint();
    let dim = space.dim();
    let mut sum_sigma_x = CMatrix::zeros(dim, dim);
    for q in 1..=space.num_qubits() {
        sum_sigma_x += embed_qubit_op(space, q, &qubit_ops::sigma_x())?.matrix();
    }
    OperatorMatrix::new(space, field * sum_sigma_x)
}

/// Time-averaged single-switch Hamiltonian `H₀ + (g₀/2) (â + â†) Σᵢ σᵢˣ`.
pub fn build_h_avg(space: HilbertSpace, params: &SystemParams) -> Result<OperatorMatrix> {
    let h0 = build_h0(space, params)?;
    let hi = build_hi_unit(space)?;
    let m = h0.matrix() + hi.matrix() * c(params.coupling_strength / 2.0);
    OperatorMatrix::new(space, m)
}

/// Full Hamiltonian at a given coupling value `g`.
pub fn build_hamiltonian(
    space: HilbertSpace,
    params: &SystemParams,
    coupling: f64,
) -> Result<OperatorMatrix> {
    let h0 = build_h0(space, params)?;
    if coupling == 0.0 {
        return Ok(h0);
    }
    let hi = build_hi_unit(space)?;
    let m = h0.matrix() + hi.matrix() * c(coupling);
    OperatorMatrix::new(space, m)
}

/// The `2N + 1` dissipation channels `(â, κ)`, `(σⱼ⁻, γⱼ)`, `(σⱼ³, γ_φⱼ)`.
/// Zero-rate channels are included and flagged inactive.
pub fn build_collapse_ops(
    space: HilbertSpace,
    spec: &DissipationSpec,
) -> Result<Vec<CollapseChannel>> {
    if spec.num_qubits() != space.num_qubits() {
        return Err(SimError::DimensionMismatch {
            expected: space.num_qubits(),
            actual: spec.num_qubits(),
        });
    }
    let mut channels = Vec::with_capacity(2 * space.num_qubits() + 1);
    channels.push(CollapseChannel {
        op: annihilation_op(space)?,
        rate: spec.cavity_decay,
        kind: ChannelKind::CavityDecay,
    });
    for (j, &rate) in spec.qubit_decay.iter().enumerate() {
        channels.push(CollapseChannel {
            op: embed_qubit_op(space, j + 1, &qubit_ops::sigma_minus())?,
            rate,
            kind: ChannelKind::QubitRelaxation(j + 1),
        });
    }
    for (j, &rate) in spec.qubit_dephasing.iter().enumerate() {
        channels.push(CollapseChannel {
            op: embed_qubit_op(space, j + 1, &qubit_ops::sigma_z())?,
            rate,
            kind: ChannelKind::QubitDephasing(j + 1),
        });
    }
    Ok(channels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    const TWO_PI: f64 = 2.0 * PI;

    fn paper_params(n: usize) -> SystemParams {
        let e0 = TWO_PI * 5.439;
        SystemParams::new(vec![e0; n], TWO_PI * 4.343, TWO_PI * 0.3, 2.0 * e0).unwrap()
    }

    #[test]
    fn square_wave_endpoints_and_average() {
        let w = CouplingWaveform::SquareWave {
            amplitude: 2.0,
            switch_freq: PI,
        };
        assert_eq!(w.coupling_value(0.0), 2.0); // cos 0 = 1
        assert_eq!(w.coupling_value(1.0), 0.0); // cos π = -1
        // midpoint-sampled time average over one full period 2π/ϖ_s is g₀/2
        let period = TWO_PI / PI;
        let samples = 100_000;
        let mean: f64 = (0..samples)
            .map(|k| w.coupling_value((k as f64 + 0.5) * period / samples as f64))
            .sum::<f64>()
            / samples as f64;
        assert_abs_diff_eq!(mean, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn square_wave_duty_cycle_is_one_half() {
        let w = CouplingWaveform::SquareWave {
            amplitude: 1.0,
            switch_freq: 7.3,
        };
        let period = TWO_PI / 7.3;
        let samples = 40_000;
        let on: usize = (0..samples)
            .filter(|&k| w.coupling_value((k as f64 + 0.5) * period / samples as f64) > 0.0)
            .count();
        assert!((on as f64 / samples as f64 - 0.5).abs() <= 1.0 / samples as f64);
    }

    #[test]
    fn square_wave_is_periodic_away_from_switch_instants() {
        let w = CouplingWaveform::SquareWave {
            amplitude: 1.0,
            switch_freq: 11.0,
        };
        let period = TWO_PI / 11.0;
        for k in 0..200 {
            let t = 0.013 + 0.91 * k as f64 * period / 200.0;
            assert_eq!(w.coupling_value(t), w.coupling_value(t + period));
        }
    }

    #[test]
    fn switch_times_for_unit_frequency() {
        let w = CouplingWaveform::SquareWave {
            amplitude: 1.0,
            switch_freq: PI,
        };
        let times = w.switch_times(0.0, 2.0);
        assert_eq!(times.len(), 2);
        assert_abs_diff_eq!(times[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(times[1], 1.5, epsilon = 1e-12);
    }

    #[test]
    fn switch_times_of_smooth_waveforms_are_empty() {
        let w = CouplingWaveform::ConstantAfterSwitch { value: 1.0 };
        assert!(w.switch_times(0.0, 10.0).is_empty());
        assert!(CouplingWaveform::Off.switch_times(0.0, 10.0).is_empty());
    }

    #[test]
    fn switch_count_matches_sign_change_scan() {
        let e0 = TWO_PI * 5.439;
        let switch_freq = 2.0 * e0;
        let w = CouplingWaveform::SquareWave {
            amplitude: 1.0,
            switch_freq,
        };
        let times = w.switch_times(0.0, 1.0);
        // oracle: count sign changes of cos(ϖ_s t) on a dense grid
        let grid = 1_000_000;
        let mut changes = 0usize;
        let mut prev = (switch_freq * 0.5 / grid as f64).cos().signum();
        for k in 1..grid {
            let t = (k as f64 + 0.5) / grid as f64;
            let s = (switch_freq * t).cos().signum();
            if s != prev {
                changes += 1;
                prev = s;
            }
        }
        assert_eq!(times.len(), changes);
        let expected = (switch_freq * 1.0 / PI).floor() as usize;
        assert!(times.len() == expected || times.len() == expected + 1);
        assert!(times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn h0_is_diagonal_with_excitation_energies() {
        let space = HilbertSpace::new(1, 1).unwrap();
        let params = SystemParams::new(vec![3.0], 2.0, 0.0, 1.0).unwrap();
        let h0 = build_h0(space, &params).unwrap();
        // order: g0 g1 e0 e1
        let diag: Vec<f64> = (0..4).map(|k| h0.matrix()[(k, k)].re).collect();
        assert_eq!(diag, vec![0.0, 2.0, 3.0, 5.0]);
        assert!(h0.is_hermitian(1e-12));
    }

    #[test]
    fn h0_counts_double_excitation() {
        let space = HilbertSpace::new(2, 1).unwrap();
        let params = paper_params(2);
        let h0 = build_h0(space, &params).unwrap();
        let idx = space.index_of(&[1, 1], 1).unwrap();
        let expected = params.cavity_freq + 2.0 * params.qubit_freqs[0];
        assert_abs_diff_eq!(h0.matrix()[(idx, idx)].re, expected, epsilon = 1e-12);
    }

    #[test]
    fn h0_commutes_with_total_excitation_number() {
        let space = HilbertSpace::new(2, 2).unwrap();
        let params = paper_params(2);
        let h0 = build_h0(space, &params).unwrap();
        let mut total = crate::hilbert::number_op(space).unwrap().into_matrix();
        for q in 1..=2 {
            let sp = embed_qubit_op(space, q, &qubit_ops::sigma_plus()).unwrap();
            total += sp.matrix() * sp.matrix().adjoint();
        }
        let comm = h0.matrix() * &total - &total * h0.matrix();
        assert!(linalg::one_norm(&comm) < 1e-12);
    }

    #[test]
    fn interaction_unit_matrix_elements() {
        let space = HilbertSpace::new(2, 1).unwrap();
        let hi = build_hi_unit(space).unwrap();
        let from = space.ket("gg", 0).unwrap();
        let to = space.ket("ge", 1).unwrap();
        let element = (to.amplitudes().adjoint() * hi.matrix() * from.amplitudes())[(0, 0)];
        assert_abs_diff_eq!(element.re, 1.0, epsilon = 1e-14);
        let diag = (from.amplitudes().adjoint() * hi.matrix() * from.amplitudes())[(0, 0)];
        assert_eq!(diag.norm(), 0.0);
        assert!(hi.is_hermitian(1e-12));
    }

    #[test]
    fn interaction_unit_spreads_ground_state_symmetrically() {
        let space = HilbertSpace::new(3, 1).unwrap();
        let hi = build_hi_unit(space).unwrap();
        let image = hi.apply(&space.ket("ggg", 0).unwrap()).unwrap();
        let expected = [("gge", 1usize), ("geg", 1), ("egg", 1)];
        let mut total = 0.0;
        for (label, photons) in expected {
            let k = space.ket(label, photons).unwrap();
            let overlap = (k.amplitudes().adjoint() * image.amplitudes())[(0, 0)];
            assert_abs_diff_eq!(overlap.re, 1.0, epsilon = 1e-14);
            total += overlap.norm_sqr();
        }
        assert_abs_diff_eq!(total, image.norm() * image.norm(), epsilon = 1e-12);
    }

    #[test]
    fn h_avg_reduces_to_h0_without_coupling() {
        let space = HilbertSpace::new(2, 1).unwrap();
        let mut params = paper_params(2);
        params.coupling_strength = 0.0;
        let h_avg = build_h_avg(space, &params).unwrap();
        let h0 = build_h0(space, &params).unwrap();
        assert_eq!(h_avg.matrix(), h0.matrix());
    }

    #[test]
    fn h_avg_carries_half_coupling_matrix_element() {
        let space = HilbertSpace::new(2, 1).unwrap();
        let params = paper_params(2);
        let h_avg = build_h_avg(space, &params).unwrap();
        let from = space.ket("gg", 0).unwrap();
        let to = space.ket("ge", 1).unwrap();
        let element = (to.amplitudes().adjoint() * h_avg.matrix() * from.amplitudes())[(0, 0)];
        assert_abs_diff_eq!(element.re, params.coupling_strength / 2.0, epsilon = 1e-12);
        assert!(h_avg.is_hermitian(1e-12));
    }

    #[test]
    fn h_avg_minus_h0_is_linear_in_coupling() {
        let space = HilbertSpace::new(2, 1).unwrap();
        let mut params = paper_params(2);
        let h0 = build_h0(space, &params).unwrap();
        params.coupling_strength = 1.0;
        let d1 = build_h_avg(space, &params).unwrap().into_matrix() - h0.matrix();
        params.coupling_strength = 2.5;
        let d2 = build_h_avg(space, &params).unwrap().into_matrix() - h0.matrix();
        assert!(linalg::one_norm(&(d2 - &d1 * c(2.5))) < 1e-12);
    }

    #[test]
    fn collapse_ops_paper_preset_rates() {
        let space = HilbertSpace::new(2, 1).unwrap();
        let spec = DissipationSpec::new(
            TWO_PI * 0.0016,
            vec![TWO_PI * 0.0076; 2],
            vec![TWO_PI * 0.003; 2],
        )
        .unwrap();
        let channels = build_collapse_ops(space, &spec).unwrap();
        assert_eq!(channels.len(), 5);
        let rates: Vec<f64> = channels.iter().map(|ch| ch.rate).collect();
        let expected = [
            TWO_PI * 0.0016,
            TWO_PI * 0.0076,
            TWO_PI * 0.0076,
            TWO_PI * 0.003,
            TWO_PI * 0.003,
        ];
        for (got, want) in rates.iter().zip(expected.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
        for ch in &channels {
            assert_eq!(ch.op.matrix().nrows(), space.dim());
            assert!(ch.is_active());
        }
    }

    #[test]
    fn collapse_ops_all_zero_rates_are_inactive() {
        let space = HilbertSpace::new(2, 1).unwrap();
        let channels = build_collapse_ops(space, &DissipationSpec::none(2)).unwrap();
        assert_eq!(channels.len(), 5);
        assert!(channels.iter().all(|ch| !ch.is_active()));
    }
}
