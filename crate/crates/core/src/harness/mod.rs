//! Configuration ingestion, experiment presets, parameter sweeps,
//! validation mode and CSV emission — the machinery behind the CLI.

pub mod config;
pub mod csv;
pub mod presets;
pub mod run;

pub use config::{load_config, ExperimentConfig, SweepParameter, SweepSpec, WaveformKind};
pub use csv::{SweepGrid, TimeSeriesTable};
pub use presets::{preset, PRESET_NAMES};
pub use run::{
    run_evolve, run_sweep, run_validate, PointDiagnostic, ValidationReport, VALIDATE_THRESHOLD,
};

use crate::model::CouplingWaveform;

/// Run manifest: the resolved parameters and software version, emitted as a
/// JSON sidecar next to file outputs so results stay attributable.
pub fn manifest(cfg: &ExperimentConfig, mode: &str) -> serde_json::Value {
    let waveform = match cfg.waveform() {
        CouplingWaveform::SquareWave { amplitude, switch_freq } => serde_json::json!({
            "kind": "square",
            "amplitude_rad_per_ns": amplitude,
            "switch_freq_rad_per_ns": switch_freq,
        }),
        CouplingWaveform::ConstantAfterSwitch { value } => serde_json::json!({
            "kind": "constant-after-switch",
            "value_rad_per_ns": value,
        }),
        CouplingWaveform::Off => serde_json::json!({ "kind": "off" }),
    };
    let dissipation = cfg.dissipation.as_ref().map(|d| {
        serde_json::json!({
            "cavity_decay_rad_per_ns": d.cavity_decay,
            "qubit_decay_rad_per_ns": d.qubit_decay,
            "qubit_dephasing_rad_per_ns": d.qubit_dephasing,
        })
    });
    let sweep = cfg.sweep.as_ref().map(|s| {
        serde_json::json!({
            "parameter": s.parameter.key(),
            "min_rad_per_ns": s.min,
            "max_rad_per_ns": s.max,
            "num_points": s.num_points,
        })
    });
    serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "mode": mode,
        "system": {
            "num_qubits": cfg.num_qubits(),
            "photon_cutoff": cfg.space.photon_cutoff(),
            "qubit_freqs_rad_per_ns": cfg.params.qubit_freqs,
            "cavity_freq_rad_per_ns": cfg.params.cavity_freq,
            "coupling_rad_per_ns": cfg.params.coupling_strength,
            "switch_freq_rad_per_ns": cfg.params.switch_freq,
        },
        "waveform": waveform,
        "drive_stop_ns": cfg.drive_stop,
        "dissipation": dissipation,
        "run": {
            "t_final_ns": cfg.t_final,
            "sample_interval_ns": cfg.sample_interval,
            "measures": cfg.measures.iter().map(|m| m.name()).collect::<Vec<_>>(),
        },
        "sweep": sweep,
    })
}
