//! CSV tables: header row, `,` separator, LF line endings, shortest
//! round-trip floats, status column last.

use std::io::{Read, Write};

use blockade_core::correlations::CorrelationCurve;

use crate::error::{LabError, Result};
use crate::sweep::{Axis, Column, PointStatus, SweepParam, SweepResult};

pub const STATUS: &str = "status";

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// `{:?}` prints the shortest decimal that parses back to the same bits.
fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_sweep<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = writer(out);
    let mut header: Vec<&str> = result.axes.iter().map(|a| a.param.name()).collect();
    header.extend(result.columns.iter().map(|c| c.name.as_str()));
    header.push(STATUS);
    w.write_record(&header)?;

    let coords: Vec<Vec<f64>> = (0..result.axes.len())
        .map(|k| result.coordinates(k))
        .collect();
    let mut record = Vec::with_capacity(header.len());
    for r in 0..result.rows() {
        record.clear();
        record.extend(coords.iter().map(|c| fmt_float(c[r])));
        record.extend(result.columns.iter().map(|c| fmt_float(c.values[r])));
        record.push(result.status[r].to_string());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn sweep_to_string(result: &SweepResult) -> Result<String> {
    let mut buf = Vec::new();
    write_sweep(result, &mut buf)?;
    String::from_utf8(buf).map_err(|e| LabError::config(e.to_string()))
}

fn parse_float(s: &str, row: usize) -> Result<f64> {
    s.parse()
        .map_err(|_| LabError::config(format!("row {row}: `{s}` is not a number")))
}

/// Rebuilds an axis from its coordinate column and checks it is uniform.
fn infer_axis(param: SweepParam, distinct: &[f64]) -> Result<Axis> {
    let axis = Axis::new(
        param,
        distinct[0],
        distinct[distinct.len() - 1],
        distinct.len(),
    )?;
    let expected = axis.values();
    let tol = 1e-9 * (axis.max - axis.min);
    if expected
        .iter()
        .zip(distinct)
        .any(|(a, b)| (a - b).abs() > tol)
    {
        return Err(LabError::config(format!(
            "axis `{param}` is not evenly spaced"
        )));
    }
    Ok(axis)
}

pub fn read_sweep<R: Read>(input: R) -> Result<SweepResult> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header.last().map(String::as_str) != Some(STATUS) {
        return Err(LabError::config("last column must be `status`"));
    }
    let n_axes = header
        .iter()
        .take_while(|h| h.parse::<SweepParam>().is_ok())
        .count();
    if !(1..=2).contains(&n_axes) {
        return Err(LabError::config("expected one or two axis columns"));
    }
    let params: Vec<SweepParam> = header[..n_axes]
        .iter()
        .map(|h| h.parse())
        .collect::<Result<_>>()?;
    let names = &header[n_axes..header.len() - 1];

    let mut coords: Vec<Vec<f64>> = vec![Vec::new(); n_axes];
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    let mut status = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for (k, c) in coords.iter_mut().enumerate() {
            c.push(parse_float(&rec[k], row)?);
        }
        for (k, v) in values.iter_mut().enumerate() {
            v.push(parse_float(&rec[n_axes + k], row)?);
        }
        status.push(rec[header.len() - 1].parse::<PointStatus>()?);
    }
    if status.len() < 2 {
        return Err(LabError::config("a sweep needs at least two rows"));
    }

    let axes = if n_axes == 1 {
        vec![infer_axis(params[0], &coords[0])?]
    } else {
        let inner = coords[0].iter().take_while(|&&x| x == coords[0][0]).count();
        if inner < 2 || status.len() % inner != 0 {
            return Err(LabError::config("2D rows do not form a full grid"));
        }
        let outer: Vec<f64> = coords[0].iter().step_by(inner).copied().collect();
        let a1 = infer_axis(params[0], &outer)?;
        let a2 = infer_axis(params[1], &coords[1][..inner])?;
        vec![a1, a2]
    };
    let result = SweepResult {
        axes,
        columns: names
            .iter()
            .cloned()
            .zip(values)
            .map(|(name, values)| Column { name, values })
            .collect(),
        status,
    };
    for (k, c) in coords.iter().enumerate() {
        let tol = 1e-9 * (result.axes[k].max - result.axes[k].min);
        let grid = result.coordinates(k);
        if grid.iter().zip(c).any(|(a, b)| (a - b).abs() > tol) {
            return Err(LabError::config("coordinates do not follow the grid order"));
        }
    }
    Ok(result)
}

pub fn write_curve<W: Write>(curve: &CorrelationCurve, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["tau", "g2_tau"])?;
    for (t, v) in curve.tau.iter().zip(&curve.values) {
        w.write_record([fmt_float(*t), fmt_float(*v)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SweepResult {
        SweepResult {
            axes: vec![Axis::new(SweepParam::Delta, -1.0, 1.0, 3).unwrap()],
            columns: vec![Column {
                name: "g2_analytic".into(),
                values: vec![0.1, f64::NAN, 1e-300],
            }],
            status: vec![
                PointStatus::default(),
                "g2_analytic:singular_z".parse().unwrap(),
                PointStatus::default(),
            ],
        }
    }

    #[test]
    fn layout() {
        let text = sweep_to_string(&tiny()).unwrap();
        assert_eq!(
            text,
            "Delta,g2_analytic,status\n-1.0,0.1,ok\n0.0,NaN,g2_analytic:singular_z\n1.0,1e-300,ok\n"
        );
    }

    #[test]
    fn round_trip() {
        let r = tiny();
        let back = read_sweep(sweep_to_string(&r).unwrap().as_bytes()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn rejects_uneven_axis() {
        let text = "Delta,g2_analytic,status\n0.0,1.0,ok\n0.3,1.0,ok\n1.0,1.0,ok\n";
        assert!(read_sweep(text.as_bytes()).is_err());
        let text = "Delta,g2_analytic\n0.0,1.0\n1.0,1.0\n";
        assert!(read_sweep(text.as_bytes()).is_err());
    }

    #[test]
    fn curve_layout() {
        let c = CorrelationCurve {
            tau: vec![0.0, 0.5],
            values: vec![0.25, 1.0],
            mean_photon: 1e-3,
        };
        let mut buf = Vec::new();
        write_curve(&c, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "tau,g2_tau\n0.0,0.25\n0.5,1.0\n"
        );
    }
}
