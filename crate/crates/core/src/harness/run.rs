//! Drivers behind the CLI subcommands: single evolutions, parameter sweeps
//! and the perturbative validation mode.

use rayon::prelude::*;

use crate::dynamics::{self, EvolutionRequest, InitialState, Trajectory};
use crate::entanglement::{evaluate_measures, Conventions, Measure, MeasureRecord};
use crate::error::{Result, SimError};
use crate::hilbert::{partial_trace, DensityMatrix, Subsystem};
use crate::perturb;

use super::config::{ExperimentConfig, SweepParameter, WaveformKind};
use super::csv::{quantize, SweepGrid, TimeSeriesTable};

/// Validation-mode acceptance threshold on the max absolute deviation
/// between the perturbative and exact measure traces.
pub const VALIDATE_THRESHOLD: f64 = 0.02;

/// CSV column names for a measure selection, in request order. Per-qubit
/// and per-pair measures expand to one column each.
pub fn column_names(measures: &[Measure], num_qubits: usize) -> Vec<String> {
    let mut out = Vec::new();
    for measure in measures {
        match measure {
            Measure::Concurrence => out.push("concurrence".to_string()),
            Measure::MutualInformation => out.push("mutual_information".to_string()),
            Measure::Negativity => {
                out.extend((1..=num_qubits).map(|q| format!("negativity_q{q}")))
            }
            Measure::PairwiseNegativity => {
                for i in 1..=num_qubits {
                    for j in (i + 1)..=num_qubits {
                        out.push(format!("negativity_q{i}q{j}"));
                    }
                }
            }
            Measure::ThreePi => out.push("three_pi".to_string()),
        }
    }
    out
}

fn flatten_record(record: &MeasureRecord, measures: &[Measure], num_qubits: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for measure in measures {
        match measure {
            Measure::Concurrence => out.push(record.concurrence.unwrap_or(f64::NAN)),
            Measure::MutualInformation => {
                out.push(record.mutual_information.unwrap_or(f64::NAN))
            }
            Measure::Negativity => out.extend_from_slice(&record.negativity_per_qubit),
            Measure::PairwiseNegativity => {
                for i in 1..=num_qubits {
                    for j in (i + 1)..=num_qubits {
                        out.push(*record.pairwise_negativity.get(&(i, j)).unwrap_or(&f64::NAN));
                    }
                }
            }
            Measure::ThreePi => out.push(record.three_pi.unwrap_or(f64::NAN)),
        }
    }
    out
}

/// Traces the cavity out of a full-system state.
fn qubit_reduction(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let keep: Vec<Subsystem> = (1..=rho.space().num_qubits()).map(Subsystem::Qubit).collect();
    partial_trace(rho, &keep)
}

fn build_request(cfg: &ExperimentConfig) -> EvolutionRequest {
    EvolutionRequest {
        initial: InitialState::Pure(cfg.space.ground_state()),
        params: cfg.params.clone(),
        waveform: cfg.waveform(),
        dissipation: cfg.dissipation.clone(),
        t_final: cfg.t_final,
        sample_interval: cfg.sample_interval,
        drive_stop: cfg.drive_stop,
    }
}

fn with_override(cfg: &ExperimentConfig, parameter: SweepParameter, value: f64) -> ExperimentConfig {
    let mut cfg = cfg.clone();
    match parameter {
        SweepParameter::SwitchFreq => cfg.params.switch_freq = value,
        SweepParameter::CavityFreq => cfg.params.cavity_freq = value,
        SweepParameter::CavityDecay => {
            if let Some(diss) = cfg.dissipation.as_mut() {
                diss.cavity_decay = value;
            }
        }
    }
    cfg
}

fn measures_along(
    traj: &Trajectory,
    sample_indices: &[usize],
    measures: &[Measure],
    num_qubits: usize,
) -> Result<Vec<Vec<f64>>> {
    let mut columns = vec![Vec::with_capacity(sample_indices.len()); column_names(measures, num_qubits).len()];
    for &idx in sample_indices {
        let rho_q = qubit_reduction(&traj.density_at(idx))?;
        let record = evaluate_measures(&rho_q, measures, Conventions::default())?;
        for (column, value) in columns.iter_mut().zip(flatten_record(&record, measures, num_qubits)) {
            column.push(quantize(value));
        }
    }
    Ok(columns)
}

/// Runs the configured evolution and reports every requested measure at
/// every recorded sample (requested grid plus switch instants).
pub fn run_evolve(cfg: &ExperimentConfig) -> Result<TimeSeriesTable> {
    if cfg.sweep.is_some() {
        return Err(SimError::InvalidRequest(
            "config has a [sweep] section; use the sweep mode".into(),
        ));
    }
    let traj = dynamics::evolve(&build_request(cfg))?;
    let all: Vec<usize> = (0..traj.len()).collect();
    let columns = measures_along(&traj, &all, &cfg.measures, cfg.num_qubits())?;
    let names = column_names(&cfg.measures, cfg.num_qubits());
    Ok(TimeSeriesTable {
        times: traj.times().iter().map(|&t| quantize(t)).collect(),
        columns: names.into_iter().zip(columns).collect(),
    })
}

/// A sweep point that failed, with the reason; the grid simply omits it.
#[derive(Clone, Debug)]
pub struct PointDiagnostic {
    pub index: usize,
    pub param_value: f64,
    pub error: String,
}

/// Runs the configured sweep, one independent evolution per grid point,
/// in parallel. Points are reported on the uniform requested time grid so
/// the measure matrices stay rectangular across points whose switch
/// instants differ. Failed points are dropped from the grid and recorded
/// as diagnostics; the run continues.
pub fn run_sweep(
    cfg: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<(SweepGrid, Vec<PointDiagnostic>)> {
    let sweep = cfg
        .sweep
        .clone()
        .ok_or_else(|| SimError::InvalidRequest("config has no [sweep] section".into()))?;
    let values = sweep.values();
    let grid_times = dynamics::uniform_samples(cfg.t_final, cfg.sample_interval);

    let evaluate_point = |value: f64| -> Result<Vec<Vec<f64>>> {
        let point_cfg = with_override(cfg, sweep.parameter, value);
        let traj = dynamics::evolve(&build_request(&point_cfg))?;
        let indices = locate_samples(traj.times(), &grid_times)?;
        measures_along(&traj, &indices, &point_cfg.measures, point_cfg.num_qubits())
    };

    let results: Vec<Result<Vec<Vec<f64>>>> = match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| SimError::InvalidRequest(format!("thread pool: {e}")))?
            .install(|| values.par_iter().map(|&v| evaluate_point(v)).collect()),
        None => values.par_iter().map(|&v| evaluate_point(v)).collect(),
    };

    let names = column_names(&cfg.measures, cfg.num_qubits());
    let mut param_values = Vec::new();
    let mut grid_values = vec![Vec::new(); names.len()];
    let mut diagnostics = Vec::new();
    for (index, (value, result)) in values.iter().zip(results).enumerate() {
        let unit_value = quantize(value / sweep.parameter.unit_scale());
        match result {
            Ok(columns) => {
                param_values.push(unit_value);
                for (matrix, column) in grid_values.iter_mut().zip(columns) {
                    matrix.push(column);
                }
            }
            Err(error) => diagnostics.push(PointDiagnostic {
                index,
                param_value: unit_value,
                error: error.to_string(),
            }),
        }
    }

    Ok((
        SweepGrid {
            parameter: sweep.parameter,
            param_values,
            times: grid_times.iter().map(|&t| quantize(t)).collect(),
            measure_names: names,
            values: grid_values,
        },
        diagnostics,
    ))
}

/// Matches the uniform grid against the (snapped) trajectory times.
fn locate_samples(times: &[f64], targets: &[f64]) -> Result<Vec<usize>> {
    let mut indices = Vec::with_capacity(targets.len());
    let mut ptr = 0usize;
    for &target in targets {
        while ptr < times.len() && times[ptr] < target - 2e-9 {
            ptr += 1;
        }
        if ptr >= times.len() || (times[ptr] - target).abs() > 2e-9 {
            return Err(SimError::InvalidRequest(format!(
                "sample at t = {target} ns missing from trajectory"
            )));
        }
        indices.push(ptr);
    }
    Ok(indices)
}

#[derive(Clone, Debug)]
pub struct ValidationRow {
    pub measure: String,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Side-by-side comparison of the closed-form perturbative measures and the
/// exact propagator.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
    pub threshold: f64,
    pub passed: bool,
}

impl ValidationReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&format!(
                "{:<20} max |perturbative - exact| = {:.6}  [{}]\n",
                row.measure,
                row.max_deviation,
                if row.passed { "pass" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "validation {} (threshold {})\n",
            if self.passed { "passed" } else { "FAILED" },
            self.threshold
        ));
        out
    }
}

/// Compares the second-order closed forms against the exact propagator on
/// the configured single-switch run. Requires 2 or 3 qubits, the
/// `constant-after-switch` waveform at `g₀/2`, and no dissipation.
pub fn run_validate(cfg: &ExperimentConfig) -> Result<ValidationReport> {
    let n = cfg.num_qubits();
    if n != 2 && n != 3 {
        return Err(SimError::InvalidRequest(
            "validation mode supports 2 or 3 qubits".into(),
        ));
    }
    if cfg.waveform_kind != WaveformKind::ConstantAfterSwitch {
        return Err(SimError::InvalidRequest(
            "validation mode requires the constant-after-switch waveform".into(),
        ));
    }
    if cfg.dissipation.as_ref().is_some_and(|d| !d.is_trivial()) {
        return Err(SimError::InvalidRequest(
            "validation mode requires a dissipation-free run".into(),
        ));
    }
    let g_half = cfg.params.coupling_strength / 2.0;
    if (cfg.constant_value - g_half).abs() > 1e-12 * g_half.max(1.0) {
        return Err(SimError::InvalidRequest(
            "validation mode requires the drive value g₀/2 the closed forms expand around".into(),
        ));
    }

    let mut request = build_request(cfg);
    request.dissipation = None;
    let traj = dynamics::evolve_schrodinger(&request)?;

    let closed_form = |t: f64| -> Result<MeasureRecord> {
        let state = match n {
            2 => perturb::closed_form_2q(&cfg.params, t)?,
            _ => perturb::closed_form_3q(&cfg.params, t)?,
        };
        perturb::perturbative_measures(&state)
    };

    let measures: &[Measure] = match n {
        2 => &[Measure::Concurrence, Measure::MutualInformation, Measure::Negativity],
        _ => &[Measure::Negativity, Measure::ThreePi],
    };
    let names = column_names(measures, n);
    let mut max_dev = vec![0.0f64; names.len()];
    for (idx, &t) in traj.times().iter().enumerate() {
        let exact = perturb::trajectory_measures(&traj, idx)?;
        let approx = closed_form(t)?;
        let exact_row = flatten_record(&exact, measures, n);
        let approx_row = flatten_record(&approx, measures, n);
        for ((dev, x), y) in max_dev.iter_mut().zip(exact_row).zip(approx_row) {
            *dev = dev.max((x - y).abs());
        }
    }

    let rows: Vec<ValidationRow> = names
        .into_iter()
        .zip(max_dev)
        .map(|(measure, max_deviation)| ValidationRow {
            measure,
            max_deviation,
            passed: max_deviation <= VALIDATE_THRESHOLD,
        })
        .collect();
    let passed = rows.iter().all(|r| r.passed);
    Ok(ValidationReport {
        rows,
        threshold: VALIDATE_THRESHOLD,
        passed,
    })
}
