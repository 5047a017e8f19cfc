//! One- and two-dimensional parameter sweeps through both solver branches.

use std::fmt;
use std::str::FromStr;

use blockade_core::analytic::{atom_coherence_analytic, g2_zero_analytic};
use blockade_core::correlations::{atom_coherence_numeric, g2_zero_numeric, mean_photon};
use blockade_core::extrema::{self, Extremum};
use blockade_core::lindblad::{steady_state, LiouvillianBasis};
use blockade_core::{Error, HilbertConfig, SystemParams};
use rayon::prelude::*;

use crate::error::{LabError, Result};

/// A swept quantity. `Delta` moves Δ_a and δ together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    G,
    Kappa,
    Gamma,
    Eta,
    DeltaA,
    DeltaAtom,
    Delta,
}

impl SweepParam {
    pub const ALL: [Self; 7] = [
        Self::G,
        Self::Kappa,
        Self::Gamma,
        Self::Eta,
        Self::DeltaA,
        Self::DeltaAtom,
        Self::Delta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::G => "g",
            Self::Kappa => "kappa",
            Self::Gamma => "gamma",
            Self::Eta => "eta",
            Self::DeltaA => "delta_a",
            Self::DeltaAtom => "delta",
            Self::Delta => "Delta",
        }
    }

    pub fn apply(self, p: &mut SystemParams, value: f64) {
        match self {
            Self::G => p.g = value,
            Self::Kappa => p.kappa = value,
            Self::Gamma => p.gamma = value,
            Self::Eta => p.eta = value,
            Self::DeltaA => p.delta_a = value,
            Self::DeltaAtom => p.delta = value,
            Self::Delta => {
                p.delta_a = value;
                p.delta = value;
            }
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| LabError::config(format!("unknown sweep parameter `{s}`")))
    }
}

/// Evenly spaced samples of one parameter, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(param: SweepParam, min: f64, max: f64, count: usize) -> Result<Self> {
        let axis = Self {
            param,
            min,
            max,
            count,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(LabError::config(format!(
                "axis `{}` needs at least 2 points",
                self.param
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(LabError::config(format!(
                "axis `{}` needs finite min < max",
                self.param
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Output {
    G2Analytic,
    G2Numeric,
    CoherenceAnalytic,
    CoherenceNumeric,
    MeanPhoton,
}

impl Output {
    /// Column order of the emitted table.
    pub const ALL: [Self; 5] = [
        Self::G2Analytic,
        Self::G2Numeric,
        Self::CoherenceAnalytic,
        Self::CoherenceNumeric,
        Self::MeanPhoton,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Self::G2Analytic => "g2_analytic",
            Self::G2Numeric => "g2_numeric",
            Self::CoherenceAnalytic => "coh_analytic",
            Self::CoherenceNumeric => "coh_numeric",
            Self::MeanPhoton => "mean_photon",
        }
    }

    fn is_numeric(self) -> bool {
        matches!(
            self,
            Self::G2Numeric | Self::CoherenceNumeric | Self::MeanPhoton
        )
    }
}

impl FromStr for Output {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let out = match s {
            "g2_analytic" => Self::G2Analytic,
            "g2_numeric" => Self::G2Numeric,
            "coherence_analytic" | "coh_analytic" => Self::CoherenceAnalytic,
            "coherence_numeric" | "coh_numeric" => Self::CoherenceNumeric,
            "mean_photon" => Self::MeanPhoton,
            _ => return Err(LabError::config(format!("unknown output `{s}`"))),
        };
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutputSet {
    pub g2_analytic: bool,
    pub g2_numeric: bool,
    pub coherence_analytic: bool,
    pub coherence_numeric: bool,
    pub mean_photon: bool,
}

impl OutputSet {
    pub fn all() -> Self {
        Self {
            g2_analytic: true,
            g2_numeric: true,
            coherence_analytic: true,
            coherence_numeric: true,
            mean_photon: true,
        }
    }

    pub fn analytic_only() -> Self {
        Self {
            g2_analytic: true,
            coherence_analytic: true,
            ..Self::default()
        }
    }

    pub fn contains(&self, o: Output) -> bool {
        match o {
            Output::G2Analytic => self.g2_analytic,
            Output::G2Numeric => self.g2_numeric,
            Output::CoherenceAnalytic => self.coherence_analytic,
            Output::CoherenceNumeric => self.coherence_numeric,
            Output::MeanPhoton => self.mean_photon,
        }
    }

    pub fn insert(&mut self, o: Output) {
        match o {
            Output::G2Analytic => self.g2_analytic = true,
            Output::G2Numeric => self.g2_numeric = true,
            Output::CoherenceAnalytic => self.coherence_analytic = true,
            Output::CoherenceNumeric => self.coherence_numeric = true,
            Output::MeanPhoton => self.mean_photon = true,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Output> + '_ {
        Output::ALL.into_iter().filter(|&o| self.contains(o))
    }

    pub fn is_empty(&self) -> bool {
        self.iter().next().is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub hilbert: HilbertConfig,
    pub outputs: OutputSet,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base
            .validate()
            .map_err(|e| LabError::config(e.to_string()))?;
        self.axis1.validate()?;
        if let Some(a2) = &self.axis2 {
            a2.validate()?;
            if a2.param == self.axis1.param {
                return Err(LabError::config("both axes sweep the same parameter"));
            }
        }
        if self.outputs.is_empty() {
            return Err(LabError::config("no outputs requested"));
        }
        Ok(())
    }

    pub fn axes(&self) -> Vec<Axis> {
        std::iter::once(self.axis1).chain(self.axis2).collect()
    }

    pub fn row_count(&self) -> usize {
        self.axes().iter().map(|a| a.count).product()
    }
}

/// Failures at one grid point, each as `column:code`. Empty means converged.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointStatus {
    pub flags: Vec<String>,
}

impl PointStatus {
    pub fn is_ok(&self) -> bool {
        self.flags.is_empty()
    }

    fn flag(&mut self, column: &str, code: &str) {
        self.flags.push(format!("{column}:{code}"));
    }
}

impl fmt::Display for PointStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.flags.is_empty() {
            f.write_str("ok")
        } else {
            f.write_str(&self.flags.join(";"))
        }
    }
}

impl FromStr for PointStatus {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "ok" {
            return Ok(Self::default());
        }
        if s.is_empty() {
            return Err(LabError::config("empty status field"));
        }
        Ok(Self {
            flags: s.split(';').map(str::to_owned).collect(),
        })
    }
}

pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::InvalidParameter { .. } => "invalid_parameter",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NoDissipation => "no_dissipation",
        Error::DegenerateNullSpace { .. } => "degenerate_null_space",
        Error::SingularSystem => "singular_system",
        Error::StepTooLarge(_) => "step_too_large",
        Error::VacuumState(_) => "vacuum_state",
        Error::ComplexResidue(_) => "complex_residue",
        Error::UnequalDetunings { .. } => "unequal_detunings",
        Error::SingularDenominator(_) => "singular_denominator",
        Error::SingularZ => "singular_z",
        Error::NotConverged(_) => "not_converged",
        Error::NoInteriorExtremum => "no_interior_extremum",
    }
}

#[derive(Debug, Clone)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Bitwise, except that any two NaNs (failed points) compare equal.
impl PartialEq for Column {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()))
    }
}

/// Rows run over axis 1 slowest, axis 2 fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    pub columns: Vec<Column>,
    pub status: Vec<PointStatus>,
}

impl SweepResult {
    pub fn rows(&self) -> usize {
        self.status.len()
    }

    pub fn is_2d(&self) -> bool {
        self.axes.len() == 2
    }

    /// Coordinate of `axis` on every row.
    pub fn coordinates(&self, axis: usize) -> Vec<f64> {
        let values = self.axes[axis].values();
        let inner: usize = self.axes[axis + 1..].iter().map(|a| a.count).product();
        (0..self.rows())
            .map(|r| values[(r / inner) % values.len()])
            .collect()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    /// The 1D sweep along axis 2 at index `i` of axis 1.
    pub fn row(&self, i: usize) -> Option<SweepResult> {
        let inner = *self.axes.get(1)?;
        if i >= self.axes[0].count {
            return None;
        }
        let range = i * inner.count..(i + 1) * inner.count;
        Some(SweepResult {
            axes: vec![inner],
            columns: self
                .columns
                .iter()
                .map(|c| Column {
                    name: c.name.clone(),
                    values: c.values[range.clone()].to_vec(),
                })
                .collect(),
            status: self.status[range].to_vec(),
        })
    }
}

struct PointValues {
    values: Vec<f64>,
    status: PointStatus,
}

fn evaluate(spec: &SweepSpec, basis: Option<&LiouvillianBasis>, coords: &[f64]) -> PointValues {
    let outputs: Vec<Output> = spec.outputs.iter().collect();
    let mut values = vec![f64::NAN; outputs.len()];
    let mut status = PointStatus::default();

    let mut p = spec.base;
    for (axis, &x) in spec.axes().iter().zip(coords) {
        axis.param.apply(&mut p, x);
    }
    if let Err(e) = p.validate() {
        status.flag("params", error_code(&e));
        return PointValues { values, status };
    }

    let numeric = basis.and_then(|b| match b.assemble(&p).and_then(|l| steady_state(&l)) {
        Ok(rho) => Some(rho),
        Err(e) => {
            for o in outputs.iter().filter(|o| o.is_numeric()) {
                status.flag(o.column(), error_code(&e));
            }
            None
        }
    });
    let h = spec.hilbert;

    for (slot, &o) in values.iter_mut().zip(&outputs) {
        let r = match o {
            Output::G2Analytic => g2_zero_analytic(&p),
            Output::CoherenceAnalytic => Ok(atom_coherence_analytic(&p)),
            Output::G2Numeric => match &numeric {
                Some(rho) => g2_zero_numeric(rho, &h),
                None => continue,
            },
            Output::CoherenceNumeric => match &numeric {
                Some(rho) => atom_coherence_numeric(rho, &h),
                None => continue,
            },
            Output::MeanPhoton => match &numeric {
                Some(rho) => mean_photon(rho, &h),
                None => continue,
            },
        };
        match r {
            Ok(v) if v.is_finite() => *slot = v,
            Ok(_) => status.flag(o.column(), "non_finite"),
            Err(e) => status.flag(o.column(), error_code(&e)),
        }
    }
    PointValues { values, status }
}

fn log10_or_nan(v: f64) -> f64 {
    if v > 0.0 {
        v.log10()
    } else {
        f64::NAN
    }
}

/// Evaluates every grid point. Points run in parallel; failures are
/// recorded in the status column and never abort the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let axes = spec.axes();
    let grids: Vec<Vec<f64>> = axes.iter().map(Axis::values).collect();
    let rows = spec.row_count();
    let inner = axes.get(1).map_or(1, |a| a.count);

    let needs_numeric = spec.outputs.iter().any(Output::is_numeric);
    let basis = needs_numeric.then(|| LiouvillianBasis::new(spec.hilbert));

    let points: Vec<PointValues> = (0..rows)
        .into_par_iter()
        .map(|r| {
            let coords: Vec<f64> = if axes.len() == 2 {
                vec![grids[0][r / inner], grids[1][r % inner]]
            } else {
                vec![grids[0][r]]
            };
            evaluate(spec, basis.as_ref(), &coords)
        })
        .collect();

    let outputs: Vec<Output> = spec.outputs.iter().collect();
    let mut columns: Vec<Column> = outputs
        .iter()
        .enumerate()
        .map(|(k, o)| Column {
            name: o.column().to_owned(),
            values: points.iter().map(|pt| pt.values[k]).collect(),
        })
        .collect();
    if axes.len() == 2 {
        for o in [Output::G2Analytic, Output::G2Numeric] {
            if let Some(k) = outputs.iter().position(|&x| x == o) {
                columns.push(Column {
                    name: format!("log10_{}", o.column()),
                    values: points.iter().map(|pt| log10_or_nan(pt.values[k])).collect(),
                });
            }
        }
    }
    Ok(SweepResult {
        axes,
        columns,
        status: points.into_iter().map(|pt| pt.status).collect(),
    })
}

/// Interior extrema of one output column of a 1D sweep.
pub fn locate_extrema(result: &SweepResult, column: &str) -> Result<Vec<Extremum>> {
    if result.is_2d() {
        return Err(LabError::config(
            "extrema need a 1D sweep; slice a 2D result with `row`",
        ));
    }
    let values = result
        .column(column)
        .ok_or_else(|| LabError::MissingColumn(column.to_owned()))?;
    Ok(extrema::locate_extrema(&result.coordinates(0), values)?)
}
