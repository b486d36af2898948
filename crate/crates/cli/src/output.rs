// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON artifacts. Floats are written in scientific notation with
//! 17 significant digits so values round-trip exactly.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use ddme_core::control::{PulseSet, TimeGrid};
use ddme_core::krotov::SweepSeries;
use ddme_core::propagation::Trajectory;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::CliError;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON with every float in `{:.16e}` form.
struct SciFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    std::fs::write(path, to_json_string(value)).map_err(|e| CliError::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn finish(path: &Path, mut w: csv::Writer<BufWriter<File>>) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Column names for a pulse set: `name` for one control, `name_1..name_M`
/// otherwise.
pub fn pulse_columns(name: &str, count: usize) -> Vec<String> {
    if count == 1 {
        vec![name.to_string()]
    } else {
        (1..=count).map(|m| format!("{name}_{m}")).collect()
    }
}

/// `k, t_mid` followed by every control of every named pulse set.
pub fn write_pulses_csv(
    path: &Path,
    grid: &TimeGrid,
    columns: &[(&str, &PulseSet)],
) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["k".to_string(), "t_mid".to_string()];
    for (name, pulses) in columns {
        header.extend(pulse_columns(name, pulses.count()));
    }
    w.write_record(&header).map_err(csv_err(path))?;
    for i in 0..grid.steps() {
        let mut row = vec![(i + 1).to_string(), fmt_f64(grid.midpoint(i))];
        for (_, pulses) in columns {
            row.extend((0..pulses.count()).map(|m| fmt_f64(pulses.get(m, i))));
        }
        w.write_record(&row).map_err(csv_err(path))?;
    }
    finish(path, w)
}

/// `s, t, purity, fidelity, bloch_x, bloch_y, bloch_z`; Bloch columns stay
/// empty unless the system is a qubit.
pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(["s", "t", "purity", "fidelity", "bloch_x", "bloch_y", "bloch_z"])
        .map_err(csv_err(path))?;
    let bloch = traj.bloch().ok();
    for s in 0..traj.states().len() {
        let mut row = vec![
            s.to_string(),
            fmt_f64(traj.grid().node(s)),
            fmt_f64(traj.purity()[s]),
            fmt_f64(traj.fidelity()[s]),
        ];
        match &bloch {
            Some(b) => row.extend(b[s].iter().map(|&x| fmt_f64(x))),
            None => row.extend(std::iter::repeat_n(String::new(), 3)),
        }
        w.write_record(&row).map_err(csv_err(path))?;
    }
    finish(path, w)
}

pub fn write_trace_csv(path: &Path, costs: &[f64]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(["iteration", "J_T"]).map_err(csv_err(path))?;
    for (i, c) in costs.iter().enumerate() {
        w.write_record([i.to_string(), fmt_f64(*c)])
            .map_err(csv_err(path))?;
    }
    finish(path, w)
}

pub fn write_sweep_csv(path: &Path, series: &[SweepSeries]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(["t_corr", "iteration", "J_T"])
        .map_err(csv_err(path))?;
    for s in series {
        for (i, c) in s.costs.iter().enumerate() {
            w.write_record([fmt_f64(s.t_corr), i.to_string(), fmt_f64(*c)])
                .map_err(csv_err(path))?;
        }
    }
    finish(path, w)
}

/// A pulse column reference `path#name`; the name defaults to `f_ddme`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseRef {
    pub path: PathBuf,
    pub column: String,
}

impl PulseRef {
    pub fn parse(spec: &str) -> Self {
        match spec.rsplit_once('#') {
            Some((path, column)) if !column.is_empty() => Self {
                path: PathBuf::from(path),
                column: column.to_string(),
            },
            _ => Self {
                path: PathBuf::from(spec.trim_end_matches('#')),
                column: "f_ddme".to_string(),
            },
        }
    }

    /// Short name for output files: the column without its `f_` prefix.
    pub fn label(&self) -> &str {
        self.column.strip_prefix("f_").unwrap_or(&self.column)
    }

    /// Reads the referenced column(s) and checks them against `grid`.
    pub fn read(&self, grid: &TimeGrid, count: usize) -> Result<PulseSet, CliError> {
        let path = &self.path;
        let fail = |message: String| CliError::Format {
            path: path.clone(),
            message,
        };
        let file = File::open(path).map_err(|e| CliError::io(path, e))?;
        let mut reader = csv::Reader::from_reader(file);
        let headers = reader.headers().map_err(|e| fail(e.to_string()))?.clone();
        let find = |name: &str| headers.iter().position(|h| h == name);
        let t_col = find("t_mid").ok_or_else(|| fail("missing t_mid column".into()))?;
        let wanted = pulse_columns(&self.column, count);
        let cols = wanted
            .iter()
            .map(|name| find(name).ok_or_else(|| fail(format!("missing column {name}"))))
            .collect::<Result<Vec<_>, _>>()?;

        let mut values = vec![Vec::with_capacity(grid.steps()); count];
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| fail(e.to_string()))?;
            let parse = |c: usize| -> Result<f64, CliError> {
                record
                    .get(c)
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| fail(format!("row {}: unreadable value in column {c}", i + 1)))
            };
            if i >= grid.steps() {
                return Err(CliError::config(format!(
                    "{}: more rows than the configured {} time steps",
                    path.display(),
                    grid.steps()
                )));
            }
            let t = parse(t_col)?;
            if (t - grid.midpoint(i)).abs() > 1e-9 * grid.final_time().max(1.0) {
                return Err(CliError::config(format!(
                    "{}: row {} has t_mid = {t}, but the configured grid has {}",
                    path.display(),
                    i + 1,
                    grid.midpoint(i)
                )));
            }
            for (m, &c) in cols.iter().enumerate() {
                values[m].push(parse(c)?);
            }
        }
        if values[0].len() != grid.steps() {
            return Err(CliError::config(format!(
                "{}: {} rows, but the configured grid has {} time steps",
                path.display(),
                values[0].len(),
                grid.steps()
            )));
        }
        PulseSet::new(values).map_err(|e| fail(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 123456.789] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_uses_scientific_floats() {
        #[derive(Serialize)]
        struct S {
            a: f64,
            b: Vec<f64>,
            n: usize,
            nan: f64,
        }
        let text = to_json_string(&S {
            a: 0.5,
            b: vec![1.0],
            n: 3,
            nan: f64::NAN,
        });
        assert!(text.contains("\"a\": 5.0000000000000000e-1"));
        assert!(text.contains("1.0000000000000000e0"));
        assert!(text.contains("\"n\": 3"));
        assert!(text.contains("\"nan\": null"));
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.5));
    }

    #[test]
    fn pulse_ref_parsing() {
        let r = PulseRef::parse("out/pulses.csv#f_se");
        assert_eq!(r.path, PathBuf::from("out/pulses.csv"));
        assert_eq!(r.label(), "se");
        let d = PulseRef::parse("pulses.csv");
        assert_eq!(d.column, "f_ddme");
    }

    #[test]
    fn pulses_roundtrip_through_csv() {
        let dir = tempfile::tempdir().unwrap();
        let grid = TimeGrid::new(2.0, 7).unwrap();
        let a = PulseSet::from_fn(&grid, 1, |_, t| t.sin() / 3.0).unwrap();
        let b = PulseSet::from_fn(&grid, 1, |_, t| t * t).unwrap();
        let path = dir.path().join("pulses.csv");
        write_pulses_csv(&path, &grid, &[("f_a", &a), ("f_b", &b)]).unwrap();
        let read = PulseRef::parse(&format!("{}#f_b", path.display()))
            .read(&grid, 1)
            .unwrap();
        assert_eq!(read, b);

        let other = TimeGrid::new(2.0, 8).unwrap();
        let err = PulseRef::parse(&format!("{}#f_a", path.display())).read(&other, 1);
        assert!(matches!(err, Err(CliError::Config(_))));
        let missing = PulseRef::parse(&format!("{}#f_c", path.display())).read(&grid, 1);
        assert!(matches!(missing, Err(CliError::Format { .. })));
    }
}
