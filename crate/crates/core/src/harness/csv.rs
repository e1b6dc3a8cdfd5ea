//! CSV emission and parsing.
//!
//! Reproducibility contract: every float is written with 9 significant
//! digits (`{:.8e}`), `.` decimal separator, `\n` newlines, fixed row
//! order. Grid values are quantized through that same formatting when they
//! are stored, so `parse(emit(grid)) == grid` holds exactly.

use crate::error::{Result, SimError};

use super::config::SweepParameter;

/// 9-significant-digit scientific form; the wire format for every number.
pub fn format_value(x: f64) -> String {
    format!("{x:.8e}")
}

/// Rounds a value to exactly what the CSV will carry.
pub fn quantize(x: f64) -> f64 {
    format_value(x).parse().expect("formatted float reparses")
}

/// Time-series output of a single evolution: `time_ns` plus one column per
/// measure component.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeriesTable {
    pub times: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl TimeSeriesTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time_ns");
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (idx, &t) in self.times.iter().enumerate() {
            out.push_str(&format_value(t));
            for (_, column) in &self.columns {
                out.push(',');
                out.push_str(&format_value(column[idx]));
            }
            out.push('\n');
        }
        out
    }
}

/// Sweep output: one value matrix per measure over (parameter, time).
/// Failed sweep points do not appear; their diagnostics live in the sidecar.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub parameter: SweepParameter,
    /// Parameter values in the unit of [`SweepParameter::column_header`].
    pub param_values: Vec<f64>,
    pub times: Vec<f64>,
    pub measure_names: Vec<String>,
    /// `values[measure][point][sample]`
    pub values: Vec<Vec<Vec<f64>>>,
}

impl SweepGrid {
    /// Long format: `<param>,time_ns,measure,value`, parameter-major, then
    /// time, then measure.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},time_ns,measure,value\n", self.parameter.column_header());
        for (p_idx, &p) in self.param_values.iter().enumerate() {
            for (t_idx, &t) in self.times.iter().enumerate() {
                for (m_idx, name) in self.measure_names.iter().enumerate() {
                    out.push_str(&format_value(p));
                    out.push(',');
                    out.push_str(&format_value(t));
                    out.push(',');
                    out.push_str(name);
                    out.push(',');
                    out.push_str(&format_value(self.values[m_idx][p_idx][t_idx]));
                    out.push('\n');
                }
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(SimError::CsvParse {
            line: 1,
            message: "empty document".into(),
        })?;
        let header_fields: Vec<&str> = header.split(',').collect();
        if header_fields.len() != 4 || header_fields[1] != "time_ns" {
            return Err(SimError::CsvParse {
                line: 1,
                message: format!("unexpected header '{header}'"),
            });
        }
        let parameter = match header_fields[0] {
            "switch_freq_ghz" => SweepParameter::SwitchFreq,
            "cavity_freq_ghz" => SweepParameter::CavityFreq,
            "cavity_decay_mhz" => SweepParameter::CavityDecay,
            other => {
                return Err(SimError::CsvParse {
                    line: 1,
                    message: format!("unknown parameter column '{other}'"),
                })
            }
        };

        let mut param_values: Vec<f64> = Vec::new();
        let mut times: Vec<f64> = Vec::new();
        let mut measure_names: Vec<String> = Vec::new();
        let mut rows: Vec<(f64, f64, String, f64)> = Vec::new();
        for (line_idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(SimError::CsvParse {
                    line: line_idx + 1,
                    message: format!("expected 4 fields, got {}", fields.len()),
                });
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse().map_err(|_| SimError::CsvParse {
                    line: line_idx + 1,
                    message: format!("bad number '{s}'"),
                })
            };
            let p = parse(fields[0])?;
            let t = parse(fields[1])?;
            let v = parse(fields[3])?;
            if param_values.last() != Some(&p) && !param_values.contains(&p) {
                param_values.push(p);
            }
            if !times.contains(&t) {
                times.push(t);
            }
            if !measure_names.iter().any(|m| m == fields[2]) {
                measure_names.push(fields[2].to_string());
            }
            rows.push((p, t, fields[2].to_string(), v));
        }

        let mut values =
            vec![vec![vec![f64::NAN; times.len()]; param_values.len()]; measure_names.len()];
        for (p, t, m, v) in rows {
            let p_idx = param_values.iter().position(|&x| x == p).unwrap();
            let t_idx = times.iter().position(|&x| x == t).unwrap();
            let m_idx = measure_names.iter().position(|x| *x == m).unwrap();
            values[m_idx][p_idx][t_idx] = v;
        }
        if values
            .iter()
            .any(|m| m.iter().any(|row| row.iter().any(|v| v.is_nan())))
        {
            return Err(SimError::CsvParse {
                line: 0,
                message: "grid is not rectangular".into(),
            });
        }
        Ok(Self {
            parameter,
            param_values,
            times,
            measure_names,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_are_written_with_nine_significant_digits() {
        assert_eq!(format_value(0.02), "2.00000000e-2");
        assert_eq!(format_value(5.439), "5.43900000e0");
        assert_eq!(format_value(-1.0 / 3.0), "-3.33333333e-1");
        assert_eq!(format_value(0.0), "0.00000000e0");
    }

    #[test]
    fn quantize_is_idempotent() {
        for x in [std::f64::consts::PI, 1.0 / 7.0, 6.626e-34, -0.123456789123] {
            let q = quantize(x);
            assert_eq!(quantize(q), q);
            assert_eq!(format_value(q).parse::<f64>().unwrap(), q);
        }
    }

    #[test]
    fn long_format_round_trips_exactly() {
        let grid = SweepGrid {
            parameter: SweepParameter::SwitchFreq,
            param_values: vec![quantize(5.439), quantize(10.878)],
            times: vec![quantize(0.0), quantize(0.02), quantize(0.04)],
            measure_names: vec!["concurrence".into(), "negativity_q1".into()],
            values: vec![
                vec![
                    vec![quantize(0.0), quantize(0.1234567891234), quantize(0.25)],
                    vec![quantize(0.0), quantize(0.5), quantize(0.9999999999)],
                ],
                vec![
                    vec![quantize(0.0), quantize(0.05), quantize(0.125)],
                    vec![quantize(0.0), quantize(0.25), quantize(0.5)],
                ],
            ],
        };
        let text = grid.to_csv();
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
        let parsed = SweepGrid::from_csv(&text).unwrap();
        assert_eq!(parsed, grid);
        // row count = points × samples × measures (+ header)
        assert_eq!(text.lines().count(), 1 + 2 * 3 * 2);
    }

    #[test]
    fn time_series_header_follows_column_order() {
        let table = TimeSeriesTable {
            times: vec![0.0, 1.0],
            columns: vec![
                ("concurrence".into(), vec![0.0, 0.5]),
                ("negativity_q1".into(), vec![0.0, 0.25]),
            ],
        };
        let text = table.to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "time_ns,concurrence,negativity_q1");
        assert_eq!(
            lines.next().unwrap(),
            "0.00000000e0,0.00000000e0,0.00000000e0"
        );
    }
}
