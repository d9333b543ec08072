//! Parallel 1D/2D field sweeps with deterministic CSV output.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::error::{QcaError, Result};
use crate::icha::{icha_solve_circuit, IchaOptions};
use crate::model::{BuiltinLayout, ElectrodeMode, FieldSpec, FieldUnit, Layout, LayoutDocument, PhysParams};
use crate::observables::CircuitReport;
use crate::solver::SolverOptions;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "QCASIM_THREADS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayoutSource {
    Builtin(BuiltinLayout),
    File(PathBuf),
}

impl LayoutSource {
    /// A built-in name if it is one, otherwise a file path.
    pub fn parse(s: &str) -> Self {
        match s.parse::<BuiltinLayout>() {
            Ok(b) => LayoutSource::Builtin(b),
            Err(_) => LayoutSource::File(PathBuf::from(s)),
        }
    }

    pub fn load(&self) -> Result<LayoutDocument> {
        match self {
            LayoutSource::Builtin(b) => {
                let params = PhysParams::default();
                Ok(LayoutDocument { layout: b.build(&params), params })
            }
            LayoutSource::File(path) => LayoutDocument::read(path),
        }
    }
}

impl fmt::Display for LayoutSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayoutSource::Builtin(b) => write!(f, "{b}"),
            LayoutSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverChoice {
    #[default]
    Exact,
    Icha,
}

impl FromStr for SolverChoice {
    type Err = QcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SolverChoice::Exact),
            "icha" => Ok(SolverChoice::Icha),
            _ => Err(QcaError::Sweep(format!("unknown solver `{s}` (expected exact or icha)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Ey,
    Ez,
    Ex,
    Pdrv,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Ey => "ey",
            SweepVar::Ez => "ez",
            SweepVar::Ex => "ex",
            SweepVar::Pdrv => "pdrv",
        }
    }
}

impl FromStr for SweepVar {
    type Err = QcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ey" => Ok(SweepVar::Ey),
            "ez" => Ok(SweepVar::Ez),
            "ex" => Ok(SweepVar::Ex),
            "pdrv" => Ok(SweepVar::Pdrv),
            _ => Err(QcaError::Sweep(format!("unknown sweep variable `{s}` (expected ey, ez, ex or pdrv)"))),
        }
    }
}

/// Evenly spaced samples `start..=stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub var: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(var: SweepVar, start: f64, stop: f64, count: usize) -> Self {
        Axis { var, start, stop, count }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            return self.start;
        }
        if i + 1 == self.count {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.count < 1 {
            return Err(QcaError::Sweep(format!("axis {} needs at least one point", self.var.name())));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(QcaError::Sweep(format!("axis {} has non-finite bounds", self.var.name())));
        }
        if self.start > self.stop {
            return Err(QcaError::Sweep(format!(
                "axis {}: start {} is greater than stop {}",
                self.var.name(),
                self.start,
                self.stop
            )));
        }
        Ok(())
    }
}

/// Parses `var:start:stop:count`.
impl FromStr for Axis {
    type Err = QcaError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || QcaError::Sweep(format!("axis `{s}` is not of the form var:start:stop:count"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        Ok(Axis {
            var: parts[0].trim().parse()?,
            start: num(parts[1])?,
            stop: num(parts[2])?,
            count: parts[3].trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Values of the variables that are not swept. `pdrv = None` keeps the
/// drivers as declared in the layout.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FixedValues {
    pub ex: f64,
    pub ey: f64,
    pub ez: f64,
    pub pdrv: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub layout: LayoutSource,
    pub solver: SolverChoice,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub fixed: FixedValues,
    pub mode: ElectrodeMode,
    /// Unit of the field axes and fixed field values.
    pub units: FieldUnit,
    pub output: PathBuf,
    /// Worker count; falls back to the environment, then to the core count.
    pub threads: Option<usize>,
    pub solver_options: SolverOptions,
    pub icha_options: IchaOptions,
}

impl SweepSpec {
    pub fn new(layout: LayoutSource, axis1: Axis, output: impl Into<PathBuf>) -> Self {
        SweepSpec {
            layout,
            solver: SolverChoice::Exact,
            axis1,
            axis2: None,
            fixed: FixedValues::default(),
            mode: ElectrodeMode::NanoElectrode,
            units: FieldUnit::Eo,
            output: output.into(),
            threads: None,
            solver_options: SolverOptions::default(),
            icha_options: IchaOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.axis1.validate()?;
        if let Some(a2) = &self.axis2 {
            a2.validate()?;
            if a2.var == self.axis1.var {
                return Err(QcaError::Sweep(format!("axis {} is swept twice", a2.var.name())));
            }
        }
        if self.threads == Some(0) {
            return Err(QcaError::Sweep("thread count must be at least 1".into()));
        }
        Ok(())
    }

    fn axes(&self) -> Vec<&Axis> {
        std::iter::once(&self.axis1).chain(self.axis2.as_ref()).collect()
    }

    pub fn point_count(&self) -> usize {
        self.axes().iter().map(|a| a.count).product()
    }

    /// Axis values of grid point `index`, row-major over (axis2, axis1).
    pub fn point(&self, index: usize) -> Vec<(SweepVar, f64)> {
        let n1 = self.axis1.count;
        let mut out = vec![(self.axis1.var, self.axis1.value(index % n1))];
        if let Some(a2) = &self.axis2 {
            out.push((a2.var, a2.value(index / n1)));
        }
        out
    }
}

/// Resolve the worker count: explicit value, then the environment.
pub fn resolve_threads(explicit: Option<usize>) -> Result<Option<usize>> {
    if explicit.is_some() {
        return Ok(explicit);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(QcaError::Sweep(format!("{THREADS_ENV}=`{v}` is not a positive integer"))),
        },
        _ => Ok(None),
    }
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column names shared by sweep output and single solves.
pub fn report_columns(layout: &Layout, solver: SolverChoice) -> Vec<String> {
    let mut h: Vec<String> = vec!["E0_meV".into(), "gap_meV".into(), "degenerate".into()];
    h.extend(layout.cells.iter().map(|c| format!("P_{}", c.id)));
    h.extend(layout.cells.iter().map(|c| format!("A_{}", c.id)));
    h.extend(layout.functional_pairs.iter().map(|&(k, _)| format!("Pf_{k}")));
    if solver == SolverChoice::Icha {
        h.push("iterations".into());
    }
    h
}

pub fn report_values(report: &CircuitReport, solver: SolverChoice) -> Vec<String> {
    let mut v = vec![format_number(report.energy), format_number(report.gap), report.degenerate.to_string()];
    v.extend(report.cells.iter().map(|c| format_number(c.p)));
    v.extend(report.cells.iter().map(|c| format_number(c.a)));
    v.extend(report.functional.iter().map(|(_, p)| format_number(*p)));
    if solver == SolverChoice::Icha {
        v.push(report.iterations.to_string());
    }
    v
}

/// Solve one field point.
pub fn solve_point(
    circuit: &Circuit,
    field: &FieldSpec,
    solver: SolverChoice,
    solver_options: &SolverOptions,
    icha_options: &IchaOptions,
) -> Result<CircuitReport> {
    match solver {
        SolverChoice::Exact => circuit.solve(field, solver_options),
        SolverChoice::Icha => Ok(icha_solve_circuit(circuit, field, icha_options, None)?.report),
    }
}

/// Every evaluated grid point of a sweep, in row order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub axes: Vec<SweepVar>,
    pub layout: Layout,
    pub solver: SolverChoice,
    pub points: Vec<Vec<f64>>,
    pub reports: Vec<CircuitReport>,
}

impl SweepOutcome {
    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = self.axes.iter().map(|a| a.name().to_string()).collect();
        h.extend(report_columns(&self.layout, self.solver));
        h
    }

    pub fn rows(&self) -> Vec<Vec<String>> {
        self.points
            .iter()
            .zip(&self.reports)
            .map(|(pt, rep)| {
                let mut row: Vec<String> = pt.iter().map(|&v| format_number(v)).collect();
                row.extend(report_values(rep, self.solver));
                row
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header().join(",");
        s.push('\n');
        for r in self.rows() {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// A sweep that stopped at a failing point, with the rows preceding it.
#[derive(Debug)]
pub struct SweepFailure {
    pub completed: Option<SweepOutcome>,
    pub error: QcaError,
}

impl From<QcaError> for SweepFailure {
    fn from(error: QcaError) -> Self {
        SweepFailure { completed: None, error }
    }
}

/// Evaluate every grid point on a worker pool; results are placed by index.
pub fn evaluate_sweep(spec: &SweepSpec) -> std::result::Result<SweepOutcome, SweepFailure> {
    spec.validate()?;
    let doc = spec.layout.load()?;
    let circuit = Circuit::new(doc.layout, doc.params)?;
    let threads = resolve_threads(spec.threads)?;

    let swept_pdrv = spec.axes().iter().any(|a| a.var == SweepVar::Pdrv);
    if swept_pdrv && circuit.layout().drivers.is_empty() {
        return Err(QcaError::Sweep("pdrv is swept but the layout has no classical drivers".into()).into());
    }
    let base = match spec.fixed.pdrv {
        Some(p) if !swept_pdrv => circuit.with_driver_polarization(p)?,
        _ => circuit,
    };

    let params = *base.params();
    let eval = |index: usize| -> Result<CircuitReport> {
        let point = spec.point(index);
        let (mut ex, mut ey, mut ez) = (spec.fixed.ex, spec.fixed.ey, spec.fixed.ez);
        let mut pdrv = None;
        for &(var, v) in &point {
            match var {
                SweepVar::Ex => ex = v,
                SweepVar::Ey => ey = v,
                SweepVar::Ez => ez = v,
                SweepVar::Pdrv => pdrv = Some(v),
            }
        }
        let wrap = |e: QcaError| QcaError::SweepPoint {
            index,
            point: point.iter().map(|(var, v)| format!("{}={v}", var.name())).collect::<Vec<_>>().join(", "),
            source: Box::new(e),
        };
        let field = FieldSpec {
            ex: spec.units.to_v_per_nm(ex, &params).map_err(wrap)?,
            ey: spec.units.to_v_per_nm(ey, &params).map_err(wrap)?,
            ez: spec.units.to_v_per_nm(ez, &params).map_err(wrap)?,
            mode: spec.mode,
        };
        let owned;
        let circuit = match pdrv {
            Some(p) => {
                owned = base.with_driver_polarization(p).map_err(wrap)?;
                &owned
            }
            None => &base,
        };
        solve_point(circuit, &field, spec.solver, &spec.solver_options, &spec.icha_options).map_err(wrap)
    };

    let n = spec.point_count();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| QcaError::Sweep(format!("worker pool: {e}")))?;
    let results: Vec<Result<CircuitReport>> = pool.install(|| (0..n).into_par_iter().map(eval).collect());

    let mut outcome = SweepOutcome {
        axes: spec.axes().iter().map(|a| a.var).collect(),
        layout: base.layout().clone(),
        solver: spec.solver,
        points: Vec::with_capacity(n),
        reports: Vec::with_capacity(n),
    };
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rep) => {
                outcome.points.push(spec.point(i).iter().map(|&(_, v)| v).collect());
                outcome.reports.push(rep);
            }
            Err(error) => return Err(SweepFailure { completed: Some(outcome), error }),
        }
    }
    Ok(outcome)
}

/// `<output>.partial`.
pub fn partial_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".partial");
    PathBuf::from(s)
}

/// Evaluate the sweep and write the CSV to `spec.output`. On a failing point
/// the completed prefix goes to `<output>.partial` and the final path is not
/// touched.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    let partial = partial_path(&spec.output);
    match evaluate_sweep(spec) {
        Ok(outcome) => {
            fs::write(&spec.output, outcome.to_csv())?;
            if partial.exists() {
                fs::remove_file(&partial)?;
            }
            Ok(outcome)
        }
        Err(SweepFailure { completed, error }) => {
            if let Some(done) = completed {
                fs::write(&partial, done.to_csv())?;
            }
            Err(error)
        }
    }
}

/// Single-row table of every report field.
pub fn format_report(layout: &Layout, report: &CircuitReport, solver: SolverChoice, units: FieldUnit, params: &PhysParams) -> Result<String> {
    let f = &report.field;
    let mut header: Vec<String> =
        ["ex", "ey", "ez", "mode", "solver", "iterations"].iter().map(|s| s.to_string()).collect();
    let mut values = vec![
        format_number(units.from_v_per_nm(f.ex, params)?),
        format_number(units.from_v_per_nm(f.ey, params)?),
        format_number(units.from_v_per_nm(f.ez, params)?),
        f.mode.to_string(),
        report.solver.as_str().to_string(),
        report.iterations.to_string(),
    ];
    let mut cols = report_columns(layout, solver);
    let mut vals = report_values(report, solver);
    if solver == SolverChoice::Icha {
        cols.pop();
        vals.pop();
    }
    header.extend(cols);
    values.extend(vals);
    Ok(format!("{}\n{}\n", header.join(","), values.join(",")))
}
