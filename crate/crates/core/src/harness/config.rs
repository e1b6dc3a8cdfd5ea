//! Configuration files: schema, validation and unit conversion.
//!
//! Configs are TOML with unit-suffixed keys — linear frequencies in GHz,
//! rates in MHz, times in ns — converted to angular rad/ns on ingestion
//! (×2π, with MHz scaled by 10⁻³). Every field is optional; missing values
//! fall back to the two-qubit dissipative preset. Validation walks the whole
//! document and reports all problems at once, each with its key path.
//!
//! ```toml
//! [system]
//! qubit_freqs_ghz = [5.439, 5.439]
//! cavity_freq_ghz = 4.343
//! coupling_ghz = 0.300          # g₀
//! switch_freq_ghz = 10.878      # ϖ_s/2π; 2E₀ here
//! photon_cutoff = 4
//!
//! [waveform]
//! kind = "square"               # "square" | "constant-after-switch" | "off"
//! value_ghz = 0.050             # constant-after-switch only; default g₀/2
//! stop_drive_at_ns = 7.0        # optional: force the drive off afterwards
//!
//! [dissipation]
//! enabled = true
//! cavity_decay_mhz = 1.6
//! qubit_decay_mhz = [7.6, 7.6]
//! qubit_dephasing_mhz = [3.0, 3.0]
//!
//! [run]
//! t_final_ns = 20.0
//! sample_interval_ns = 0.02
//! measures = ["concurrence", "negativity"]
//!
//! [sweep]                       # optional
//! parameter = "switch_freq"     # "switch_freq" | "cavity_freq" | "cavity_decay"
//! min_ghz = 5.439               # min_mhz/max_mhz when sweeping cavity_decay
//! max_ghz = 21.756
//! num_points = 64
//! ```

use std::f64::consts::TAU;

use crate::entanglement::Measure;
use crate::error::{Result, SimError};
use crate::hilbert::HilbertSpace;
use crate::model::{CouplingWaveform, DissipationSpec, SystemParams};

pub const GHZ_TO_RAD_PER_NS: f64 = TAU;
pub const MHZ_TO_RAD_PER_NS: f64 = TAU * 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WaveformKind {
    Square,
    ConstantAfterSwitch,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParameter {
    SwitchFreq,
    CavityFreq,
    CavityDecay,
}

impl SweepParameter {
    pub fn key(&self) -> &'static str {
        match self {
            SweepParameter::SwitchFreq => "switch_freq",
            SweepParameter::CavityFreq => "cavity_freq",
            SweepParameter::CavityDecay => "cavity_decay",
        }
    }

    /// Column header carrying the unit the CSV reports the parameter in.
    pub fn column_header(&self) -> &'static str {
        match self {
            SweepParameter::SwitchFreq => "switch_freq_ghz",
            SweepParameter::CavityFreq => "cavity_freq_ghz",
            SweepParameter::CavityDecay => "cavity_decay_mhz",
        }
    }

    /// rad/ns per config unit.
    pub fn unit_scale(&self) -> f64 {
        match self {
            SweepParameter::SwitchFreq | SweepParameter::CavityFreq => GHZ_TO_RAD_PER_NS,
            SweepParameter::CavityDecay => MHZ_TO_RAD_PER_NS,
        }
    }
}

/// Sweep request with bounds already in rad/ns.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub min: f64,
    pub max: f64,
    pub num_points: usize,
}

impl SweepSpec {
    /// Uniformly spaced parameter values, inclusive of both ends.
    pub fn values(&self) -> Vec<f64> {
        let n = self.num_points;
        (0..n)
            .map(|k| self.min + (self.max - self.min) * k as f64 / (n - 1) as f64)
            .collect()
    }
}

/// A fully resolved experiment: everything in rad/ns and ns.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub space: HilbertSpace,
    pub params: SystemParams,
    pub waveform_kind: WaveformKind,
    /// Coupling used by `constant-after-switch`; defaults to g₀/2.
    pub constant_value: f64,
    pub drive_stop: Option<f64>,
    pub dissipation: Option<DissipationSpec>,
    pub t_final: f64,
    pub sample_interval: f64,
    pub measures: Vec<Measure>,
    pub sweep: Option<SweepSpec>,
}

impl ExperimentConfig {
    pub fn waveform(&self) -> CouplingWaveform {
        match self.waveform_kind {
            WaveformKind::Square => CouplingWaveform::SquareWave {
                amplitude: self.params.coupling_strength,
                switch_freq: self.params.switch_freq,
            },
            WaveformKind::ConstantAfterSwitch => CouplingWaveform::ConstantAfterSwitch {
                value: self.constant_value,
            },
            WaveformKind::Off => CouplingWaveform::Off,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.space.num_qubits()
    }
}

/// Default experiment: the paper's two-qubit dissipative setup.
pub fn default_config() -> ExperimentConfig {
    let e0 = 5.439 * GHZ_TO_RAD_PER_NS;
    let params = SystemParams::new(
        vec![e0; 2],
        4.343 * GHZ_TO_RAD_PER_NS,
        0.300 * GHZ_TO_RAD_PER_NS,
        2.0 * e0,
    )
    .unwrap();
    ExperimentConfig {
        space: HilbertSpace::new(2, 4).unwrap(),
        params,
        waveform_kind: WaveformKind::Square,
        constant_value: 0.150 * GHZ_TO_RAD_PER_NS,
        drive_stop: None,
        dissipation: Some(
            DissipationSpec::new(
                1.6 * MHZ_TO_RAD_PER_NS,
                vec![7.6 * MHZ_TO_RAD_PER_NS; 2],
                vec![3.0 * MHZ_TO_RAD_PER_NS; 2],
            )
            .unwrap(),
        ),
        t_final: 20.0,
        sample_interval: 0.02,
        measures: vec![Measure::Concurrence, Measure::Negativity],
        sweep: None,
    }
}

struct Walker {
    errors: Vec<String>,
}

impl Walker {
    fn new() -> Self {
        Self { errors: Vec::new() }
    }

    fn fail(&mut self, path: &str, message: impl AsRef<str>) {
        self.errors.push(format!("{path}: {}", message.as_ref()));
    }

    fn check_keys(&mut self, table: &toml::Table, path: &str, allowed: &[&str]) {
        for key in table.keys() {
            if !allowed.contains(&key.as_str()) {
                self.fail(&format!("{path}{key}"), "unknown key");
            }
        }
    }

    fn number(&mut self, table: &toml::Table, path: &str, key: &str) -> Option<f64> {
        match table.get(key) {
            None => None,
            Some(toml::Value::Float(f)) => Some(*f),
            Some(toml::Value::Integer(i)) => Some(*i as f64),
            Some(_) => {
                self.fail(&format!("{path}{key}"), "expected a number");
                None
            }
        }
    }

    fn integer(&mut self, table: &toml::Table, path: &str, key: &str) -> Option<i64> {
        match table.get(key) {
            None => None,
            Some(toml::Value::Integer(i)) => Some(*i),
            Some(_) => {
                self.fail(&format!("{path}{key}"), "expected an integer");
                None
            }
        }
    }

    fn boolean(&mut self, table: &toml::Table, path: &str, key: &str) -> Option<bool> {
        match table.get(key) {
            None => None,
            Some(toml::Value::Boolean(b)) => Some(*b),
            Some(_) => {
                self.fail(&format!("{path}{key}"), "expected a boolean");
                None
            }
        }
    }

    fn string(&mut self, table: &toml::Table, path: &str, key: &str) -> Option<String> {
        match table.get(key) {
            None => None,
            Some(toml::Value::String(s)) => Some(s.clone()),
            Some(_) => {
                self.fail(&format!("{path}{key}"), "expected a string");
                None
            }
        }
    }

    fn number_list(&mut self, table: &toml::Table, path: &str, key: &str) -> Option<Vec<f64>> {
        match table.get(key) {
            None => None,
            Some(toml::Value::Array(items)) => {
                let mut out = Vec::with_capacity(items.len());
                for (idx, item) in items.iter().enumerate() {
                    match item {
                        toml::Value::Float(f) => out.push(*f),
                        toml::Value::Integer(i) => out.push(*i as f64),
                        _ => {
                            self.fail(&format!("{path}{key}[{idx}]"), "expected a number");
                            return None;
                        }
                    }
                }
                Some(out)
            }
            Some(_) => {
                self.fail(&format!("{path}{key}"), "expected an array of numbers");
                None
            }
        }
    }

    fn string_list(&mut self, table: &toml::Table, path: &str, key: &str) -> Option<Vec<String>> {
        match table.get(key) {
            None => None,
            Some(toml::Value::Array(items)) => {
                let mut out = Vec::with_capacity(items.len());
                for (idx, item) in items.iter().enumerate() {
                    match item {
                        toml::Value::String(s) => out.push(s.clone()),
                        _ => {
                            self.fail(&format!("{path}{key}[{idx}]"), "expected a string");
                            return None;
                        }
                    }
                }
                Some(out)
            }
            Some(_) => {
                self.fail(&format!("{path}{key}"), "expected an array of strings");
                None
            }
        }
    }
}

fn empty_table() -> toml::Table {
    toml::Table::new()
}

/// Parses and validates a configuration document, filling defaults from
/// [`default_config`]. All validation problems are reported together.
pub fn load_config(text: &str) -> Result<ExperimentConfig> {
    let root: toml::Table = toml::from_str(text)
        .map_err(|e| SimError::Config(vec![format!("toml syntax: {e}")]))?;
    let mut w = Walker::new();
    w.check_keys(&root, "", &["system", "waveform", "dissipation", "run", "sweep"]);

    let defaults = default_config();

    let system = match root.get("system") {
        Some(toml::Value::Table(t)) => t.clone(),
        Some(_) => {
            w.fail("system", "expected a table");
            empty_table()
        }
        None => empty_table(),
    };
    w.check_keys(
        &system,
        "system.",
        &[
            "qubit_freqs_ghz",
            "cavity_freq_ghz",
            "coupling_ghz",
            "switch_freq_ghz",
            "photon_cutoff",
        ],
    );
    let qubit_freqs_ghz = w
        .number_list(&system, "system.", "qubit_freqs_ghz")
        .unwrap_or_else(|| {
            defaults
                .params
                .qubit_freqs
                .iter()
                .map(|f| f / GHZ_TO_RAD_PER_NS)
                .collect()
        });
    if qubit_freqs_ghz.is_empty() {
        w.fail("system.qubit_freqs_ghz", "at least one qubit required");
    }
    for (idx, &f) in qubit_freqs_ghz.iter().enumerate() {
        if f <= 0.0 {
            w.fail(
                &format!("system.qubit_freqs_ghz[{idx}]"),
                "must be strictly positive",
            );
        }
    }
    let cavity_freq_ghz = w
        .number(&system, "system.", "cavity_freq_ghz")
        .unwrap_or(defaults.params.cavity_freq / GHZ_TO_RAD_PER_NS);
    if cavity_freq_ghz <= 0.0 {
        w.fail("system.cavity_freq_ghz", "must be strictly positive");
    }
    let coupling_ghz = w
        .number(&system, "system.", "coupling_ghz")
        .unwrap_or(defaults.params.coupling_strength / GHZ_TO_RAD_PER_NS);
    if coupling_ghz < 0.0 {
        w.fail("system.coupling_ghz", "must be non-negative");
    }
    let switch_freq_ghz = w
        .number(&system, "system.", "switch_freq_ghz")
        .unwrap_or(defaults.params.switch_freq / GHZ_TO_RAD_PER_NS);
    if switch_freq_ghz <= 0.0 {
        w.fail("system.switch_freq_ghz", "must be strictly positive");
    }
    let photon_cutoff = match w.integer(&system, "system.", "photon_cutoff") {
        Some(n) if n < 0 => {
            w.fail("system.photon_cutoff", "must be non-negative");
            4
        }
        Some(n) => n as usize,
        None => defaults.space.photon_cutoff().unwrap(),
    };
    let num_qubits = qubit_freqs_ghz.len().max(1);

    let waveform = match root.get("waveform") {
        Some(toml::Value::Table(t)) => t.clone(),
        Some(_) => {
            w.fail("waveform", "expected a table");
            empty_table()
        }
        None => empty_table(),
    };
    w.check_keys(&waveform, "waveform.", &["kind", "value_ghz", "stop_drive_at_ns"]);
    let waveform_kind = match w.string(&waveform, "waveform.", "kind").as_deref() {
        None => defaults.waveform_kind,
        Some("square") => WaveformKind::Square,
        Some("constant-after-switch") => WaveformKind::ConstantAfterSwitch,
        Some("off") => WaveformKind::Off,
        Some(other) => {
            w.fail(
                "waveform.kind",
                format!("unknown kind '{other}' (square | constant-after-switch | off)"),
            );
            defaults.waveform_kind
        }
    };
    let constant_value_ghz = w.number(&waveform, "waveform.", "value_ghz");
    if constant_value_ghz.is_some() && waveform_kind != WaveformKind::ConstantAfterSwitch {
        w.fail(
            "waveform.value_ghz",
            "only valid for kind = \"constant-after-switch\"",
        );
    }
    let drive_stop = w.number(&waveform, "waveform.", "stop_drive_at_ns");
    if let Some(t) = drive_stop {
        if t <= 0.0 {
            w.fail("waveform.stop_drive_at_ns", "must be positive");
        }
    }

    let (dissipation_table, dissipation_given) = match root.get("dissipation") {
        Some(toml::Value::Table(t)) => (t.clone(), true),
        Some(_) => {
            w.fail("dissipation", "expected a table");
            (empty_table(), false)
        }
        None => (empty_table(), false),
    };
    w.check_keys(
        &dissipation_table,
        "dissipation.",
        &["enabled", "cavity_decay_mhz", "qubit_decay_mhz", "qubit_dephasing_mhz"],
    );
    let dissipation_enabled = w
        .boolean(&dissipation_table, "dissipation.", "enabled")
        .unwrap_or(true);
    let default_diss = defaults.dissipation.clone().unwrap();
    let cavity_decay_mhz = w
        .number(&dissipation_table, "dissipation.", "cavity_decay_mhz")
        .unwrap_or(default_diss.cavity_decay / MHZ_TO_RAD_PER_NS);
    let qubit_decay_mhz = w
        .number_list(&dissipation_table, "dissipation.", "qubit_decay_mhz")
        .unwrap_or_else(|| vec![default_diss.qubit_decay[0] / MHZ_TO_RAD_PER_NS; num_qubits]);
    let qubit_dephasing_mhz = w
        .number_list(&dissipation_table, "dissipation.", "qubit_dephasing_mhz")
        .unwrap_or_else(|| vec![default_diss.qubit_dephasing[0] / MHZ_TO_RAD_PER_NS; num_qubits]);
    if cavity_decay_mhz < 0.0 {
        w.fail("dissipation.cavity_decay_mhz", "must be non-negative");
    }
    for (key, list) in [
        ("qubit_decay_mhz", &qubit_decay_mhz),
        ("qubit_dephasing_mhz", &qubit_dephasing_mhz),
    ] {
        if list.len() != num_qubits {
            w.fail(
                &format!("dissipation.{key}"),
                format!("expected {num_qubits} entries, got {}", list.len()),
            );
        }
        for (idx, &r) in list.iter().enumerate() {
            if r < 0.0 {
                w.fail(&format!("dissipation.{key}[{idx}]"), "must be non-negative");
            }
        }
    }
    let _ = dissipation_given;

    let run = match root.get("run") {
        Some(toml::Value::Table(t)) => t.clone(),
        Some(_) => {
            w.fail("run", "expected a table");
            empty_table()
        }
        None => empty_table(),
    };
    w.check_keys(&run, "run.", &["t_final_ns", "sample_interval_ns", "measures"]);
    let t_final = w.number(&run, "run.", "t_final_ns").unwrap_or(defaults.t_final);
    let sample_interval = w
        .number(&run, "run.", "sample_interval_ns")
        .unwrap_or(defaults.sample_interval);
    if sample_interval <= 0.0 {
        w.fail("run.sample_interval_ns", "must be positive");
    }
    if t_final < sample_interval {
        w.fail("run.t_final_ns", "must be at least one sample interval");
    }
    let measures: Vec<Measure> = match w.string_list(&run, "run.", "measures") {
        None => defaults.measures.clone(),
        Some(names) => {
            let mut out = Vec::new();
            for (idx, name) in names.iter().enumerate() {
                match Measure::parse(name) {
                    Some(m) => out.push(m),
                    None => w.fail(
                        &format!("run.measures[{idx}]"),
                        format!("unknown measure '{name}'"),
                    ),
                }
            }
            out
        }
    };
    if measures.is_empty() {
        w.fail("run.measures", "at least one measure required");
    }
    for m in &measures {
        match m {
            Measure::Concurrence | Measure::MutualInformation if num_qubits != 2 => {
                w.fail(
                    "run.measures",
                    format!("{} requires exactly 2 qubits (got {num_qubits})", m.name()),
                );
            }
            Measure::ThreePi if num_qubits != 3 => {
                w.fail(
                    "run.measures",
                    format!("three_pi requires exactly 3 qubits (got {num_qubits})"),
                );
            }
            Measure::PairwiseNegativity if num_qubits < 2 => {
                w.fail("run.measures", "pairwise_negativity requires at least 2 qubits");
            }
            _ => {}
        }
    }

    let sweep = match root.get("sweep") {
        None => None,
        Some(toml::Value::Table(t)) => {
            w.check_keys(
                t,
                "sweep.",
                &["parameter", "min_ghz", "max_ghz", "min_mhz", "max_mhz", "num_points"],
            );
            let parameter = match w.string(t, "sweep.", "parameter").as_deref() {
                Some("switch_freq") => Some(SweepParameter::SwitchFreq),
                Some("cavity_freq") => Some(SweepParameter::CavityFreq),
                Some("cavity_decay") => Some(SweepParameter::CavityDecay),
                Some(other) => {
                    w.fail(
                        "sweep.parameter",
                        format!("unknown parameter '{other}' (switch_freq | cavity_freq | cavity_decay)"),
                    );
                    None
                }
                None => {
                    w.fail("sweep.parameter", "required");
                    None
                }
            };
            let (min_key, max_key, wrong_min, wrong_max) = match parameter {
                Some(SweepParameter::CavityDecay) => ("min_mhz", "max_mhz", "min_ghz", "max_ghz"),
                _ => ("min_ghz", "max_ghz", "min_mhz", "max_mhz"),
            };
            for wrong in [wrong_min, wrong_max] {
                if t.contains_key(wrong) {
                    w.fail(
                        &format!("sweep.{wrong}"),
                        format!("wrong unit for this parameter; use {min_key}/{max_key}"),
                    );
                }
            }
            let min = w.number(t, "sweep.", min_key);
            let max = w.number(t, "sweep.", max_key);
            let num_points = w.integer(t, "sweep.", "num_points");
            match (parameter, min, max, num_points) {
                (Some(parameter), Some(min), Some(max), Some(n)) => {
                    if min >= max {
                        w.fail(&format!("sweep.{min_key}"), "sweep bounds require min < max");
                    }
                    if n < 2 {
                        w.fail("sweep.num_points", "must be at least 2");
                    }
                    if parameter != SweepParameter::CavityDecay && min <= 0.0 {
                        w.fail(&format!("sweep.{min_key}"), "must be strictly positive");
                    }
                    if parameter == SweepParameter::CavityDecay && min < 0.0 {
                        w.fail(&format!("sweep.{min_key}"), "must be non-negative");
                    }
                    if parameter == SweepParameter::CavityDecay && !dissipation_enabled {
                        w.fail(
                            "sweep.parameter",
                            "cavity_decay sweep requires dissipation.enabled = true",
                        );
                    }
                    Some(SweepSpec {
                        parameter,
                        min: min * parameter.unit_scale(),
                        max: max * parameter.unit_scale(),
                        num_points: n.max(2) as usize,
                    })
                }
                (Some(_), _, _, _) => {
                    if min.is_none() {
                        w.fail(&format!("sweep.{min_key}"), "required");
                    }
                    if max.is_none() {
                        w.fail(&format!("sweep.{max_key}"), "required");
                    }
                    if num_points.is_none() {
                        w.fail("sweep.num_points", "required");
                    }
                    None
                }
                _ => None,
            }
        }
        Some(_) => {
            w.fail("sweep", "expected a table");
            None
        }
    };

    if !w.errors.is_empty() {
        return Err(SimError::Config(w.errors));
    }

    let params = SystemParams::new(
        qubit_freqs_ghz.iter().map(|f| f * GHZ_TO_RAD_PER_NS).collect(),
        cavity_freq_ghz * GHZ_TO_RAD_PER_NS,
        coupling_ghz * GHZ_TO_RAD_PER_NS,
        switch_freq_ghz * GHZ_TO_RAD_PER_NS,
    )?;
    let constant_value = constant_value_ghz
        .map(|v| v * GHZ_TO_RAD_PER_NS)
        .unwrap_or(params.coupling_strength / 2.0);
    let dissipation = if dissipation_enabled {
        Some(DissipationSpec::new(
            cavity_decay_mhz * MHZ_TO_RAD_PER_NS,
            qubit_decay_mhz.iter().map(|r| r * MHZ_TO_RAD_PER_NS).collect(),
            qubit_dephasing_mhz
                .iter()
                .map(|r| r * MHZ_TO_RAD_PER_NS)
                .collect(),
        )?)
    } else {
        None
    };

    Ok(ExperimentConfig {
        space: HilbertSpace::new(num_qubits, photon_cutoff)?,
        params,
        waveform_kind,
        constant_value,
        drive_stop,
        dissipation,
        t_final,
        sample_interval,
        measures,
        sweep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn empty_config_yields_the_paper_preset() {
        let cfg = load_config("").unwrap();
        assert_eq!(cfg.num_qubits(), 2);
        assert_abs_diff_eq!(cfg.params.qubit_freqs[0], TAU * 5.439, epsilon = 1e-12);
        assert_abs_diff_eq!(cfg.params.cavity_freq, TAU * 4.343, epsilon = 1e-12);
        assert_abs_diff_eq!(cfg.params.coupling_strength, TAU * 0.300, epsilon = 1e-12);
        let diss = cfg.dissipation.unwrap();
        assert_abs_diff_eq!(diss.cavity_decay, TAU * 0.0016, epsilon = 1e-12);
        assert_abs_diff_eq!(diss.qubit_decay[0], TAU * 0.0076, epsilon = 1e-12);
        assert_abs_diff_eq!(diss.qubit_dephasing[1], TAU * 0.003, epsilon = 1e-12);
        assert_eq!(cfg.waveform_kind, WaveformKind::Square);
    }

    #[test]
    fn three_distinct_frequencies_convert_to_angular_units() {
        let cfg = load_config(
            r#"
            [system]
            qubit_freqs_ghz = [5.0, 6.0, 7.0]
            [run]
            measures = ["negativity", "three_pi"]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.num_qubits(), 3);
        for (freq, ghz) in cfg.params.qubit_freqs.iter().zip([5.0, 6.0, 7.0]) {
            assert_abs_diff_eq!(*freq, TAU * ghz, epsilon = 1e-12);
        }
        // dissipation defaults are broadcast to all three qubits
        assert_eq!(cfg.dissipation.unwrap().qubit_decay.len(), 3);
    }

    #[test]
    fn single_point_sweep_is_rejected_with_the_key_named() {
        let err = load_config(
            r#"
            [sweep]
            parameter = "switch_freq"
            min_ghz = 5.0
            max_ghz = 20.0
            num_points = 1
            "#,
        )
        .unwrap_err();
        let SimError::Config(errors) = err else {
            panic!("expected aggregated config errors")
        };
        assert!(errors.iter().any(|e| e.contains("sweep.num_points")));
    }

    #[test]
    fn validation_aggregates_multiple_errors_with_paths() {
        let err = load_config(
            r#"
            [system]
            qubit_freqs_ghz = [5.0, -1.0]
            typo_key = 3
            [run]
            sample_interval_ns = -0.5
            measures = ["three_pi"]
            "#,
        )
        .unwrap_err();
        let SimError::Config(errors) = err else {
            panic!("expected aggregated config errors")
        };
        assert!(errors.iter().any(|e| e.contains("system.qubit_freqs_ghz[1]")));
        assert!(errors.iter().any(|e| e.contains("system.typo_key")));
        assert!(errors.iter().any(|e| e.contains("run.sample_interval_ns")));
        assert!(errors.iter().any(|e| e.contains("three_pi")));
        assert!(errors.len() >= 4);
    }

    #[test]
    fn decay_sweep_uses_mhz_keys() {
        let cfg = load_config(
            r#"
            [sweep]
            parameter = "cavity_decay"
            min_mhz = 0.0
            max_mhz = 1600.0
            num_points = 16
            "#,
        )
        .unwrap();
        let sweep = cfg.sweep.unwrap();
        assert_eq!(sweep.parameter, SweepParameter::CavityDecay);
        assert_abs_diff_eq!(sweep.max, TAU * 1.6, epsilon = 1e-12);
        let err = load_config(
            r#"
            [sweep]
            parameter = "cavity_decay"
            min_ghz = 0.0
            max_ghz = 1.6
            num_points = 16
            "#,
        )
        .unwrap_err();
        let SimError::Config(errors) = err else { panic!() };
        assert!(errors.iter().any(|e| e.contains("wrong unit")));
    }

    #[test]
    fn disabled_dissipation_yields_a_closed_system() {
        let cfg = load_config("[dissipation]\nenabled = false\n").unwrap();
        assert!(cfg.dissipation.is_none());
    }
}
