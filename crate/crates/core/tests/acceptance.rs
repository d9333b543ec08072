//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`. Exits non-zero if any
//! criterion fails.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcasim::circuit::Circuit;
use qcasim::icha::{icha_solve_circuit, IchaOptions};
use qcasim::model::{
    kink_energy, BuiltinLayout, CellGeometry, ClassicalDriver, ElectrodeMode, FieldSpec, Layout, LayoutLimits,
    PhysParams, Role,
};
use qcasim::observables::{driver_target_response, CellObservables, CircuitReport};
use qcasim::solver::{SolverMethod, SolverOptions};
use qcasim::sweep::{run_sweep, Axis, LayoutSource, SweepOutcome, SweepSpec, SweepVar};

// Pinned thresholds.
const KINK_REL_TOL: f64 = 1e-10;
const KINK_PAPER_MEV: f64 = 422.0;
const NULL_THRESHOLD_BRACKET: (f64, f64) = (-5.2, -4.3);
const CONGESTION_MARGIN: f64 = 0.05;
const WIRE_SIGN_MIN_EY: f64 = 0.01;
const WIRE_CORRECT_BELOW: f64 = 0.4;
const WIRE_WRONG_ABOVE: f64 = 0.6;
const IMMUNITY_TOL: f64 = 1e-12;
const WINDOW_INNER: (f64, f64) = (-0.4, 0.8);
const WINDOW_OUTER: (f64, f64) = (-0.9, 1.3);
const WINDOW_MIN_P: f64 = 0.5;
const WINDOW_MAX_FAIL_P: f64 = 0.1;
const CROSS_INSTANCES: usize = 20;
const CROSS_E0_REL_TOL: f64 = 1e-9;
const CROSS_DIAG_REL_TOL: f64 = 1e-10;
const SUM_RHO_TOL: f64 = 1e-12;
const ANTISYMMETRY_TOL: f64 = 1e-8;
const ICHA_EXACT_TOL: f64 = 1e-10;
const GRID_EPS: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Solved states gathered for the invariant checks.
#[derive(Default)]
struct Collected {
    /// (label, layout, axis names, axis values, report)
    states: Vec<(String, Layout, Vec<SweepVar>, Vec<f64>, CircuitReport)>,
    /// Driver-target states.
    targets: Vec<CellObservables>,
    /// `P(P_drv) + P(-P_drv)` of the driver-target pair.
    driver_antisymmetry: Vec<f64>,
}

impl Collected {
    fn add_sweep(&mut self, label: &str, out: &SweepOutcome) {
        for (pt, rep) in out.points.iter().zip(&out.reports) {
            self.states.push((label.to_string(), out.layout.clone(), out.axes.clone(), pt.clone(), rep.clone()));
        }
    }
}

fn params() -> PhysParams {
    PhysParams::default()
}

fn spec(layout: BuiltinLayout, axis1: &str, out: &Path) -> SweepSpec {
    let mut s = SweepSpec::new(LayoutSource::Builtin(layout), axis1.parse::<Axis>().unwrap(), out);
    s.threads = Some(1);
    s
}

fn value_of(out: &SweepOutcome, i: usize, var: SweepVar) -> f64 {
    let k = out.axes.iter().position(|&v| v == var).unwrap();
    out.points[i][k]
}

fn cell_p(layout: &Layout, rep: &CircuitReport, id: usize) -> f64 {
    rep.cells[layout.index_of(id).unwrap()].p
}

fn pf(rep: &CircuitReport, k: usize) -> f64 {
    rep.functional.iter().find(|((a, _), _)| *a == k).unwrap().1
}

/// Electrostatic energy of two point charges [meV], charges in units of e,
/// distances in nm; Coulomb constant from SI constants.
fn coulomb(q1: f64, r1: [f64; 3], q2: f64, r2: [f64; 3]) -> f64 {
    const E: f64 = 1.602_176_634e-19;
    // CODATA 2018
    const EPS0: f64 = 8.854_187_812_8e-12;
    let k_mev_nm = E / (4.0 * std::f64::consts::PI * EPS0) * 1e9 * 1e3;
    let d = ((r1[0] - r2[0]).powi(2) + (r1[1] - r2[1]).powi(2) + (r1[2] - r2[2]).powi(2)).sqrt();
    k_mev_nm * q1 * q2 / d
}

/// Dot positions (0, N, 1) of a cell.
fn dots(cx: f64, cy: f64, ux: f64, uy: f64, p: &PhysParams) -> [[f64; 3]; 3] {
    let h = 0.5 * p.a;
    [[cx + h * ux, cy + h * uy, p.h], [cx, cy, 0.0], [cx - h * ux, cy - h * uy, p.h]]
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut at_1nm = f64::NAN;
    for a in [1.0, 0.5, 2.0, 3.7] {
        let p = PhysParams { a, h: 0.5 * a, ..params() };
        // two y-oriented cells side by side, one with its charge on dot 0
        let c1 = dots(0.0, 0.0, 0.0, 1.0, &p);
        let c2 = dots(a, 0.0, 0.0, 1.0, &p);
        let energy = |x1: usize, x2: usize| {
            coulomb(-1.0, c1[x1], -1.0, c2[x2])
                + coulomb(-1.0, c1[x1], 1.0, c2[1])
                + coulomb(1.0, c1[1], -1.0, c2[x2])
                + coulomb(1.0, c1[1], 1.0, c2[1])
        };
        let brute = energy(0, 0) - energy(0, 2);
        assert!((energy(2, 2) - energy(0, 0)).abs() < 1e-9);
        let closed = kink_energy(&p).unwrap();
        // the same closed form from SI constants
        let closed_si = coulomb(1.0, [0.0; 3], 1.0, [a, 0.0, 0.0]) * (1.0 - FRAC_1_SQRT_2);
        worst = worst.max(((brute - closed) / closed).abs()).max(((closed_si - closed) / closed).abs());
        if a == 1.0 {
            at_1nm = closed;
        }
    }
    let rounded = (at_1nm).round();
    outcome(
        worst < KINK_REL_TOL && rounded == KINK_PAPER_MEV,
        format!("E_k(a=1nm) = {at_1nm:.4} meV, max rel err vs closed form {worst:.2e}"),
    )
}

/// Clock field at which `activation` crosses 0.5, searched on a 201-point
/// scan of [-10, 0] E_o and refined by bisection.
fn a_threshold(scan: &[(f64, f64)], activation: impl Fn(f64) -> f64) -> Option<f64> {
    let i = scan.windows(2).position(|w| (w[0].1 - 0.5) * (w[1].1 - 0.5) <= 0.0)?;
    let (mut lo, mut hi) = (scan[i].0, scan[i + 1].0);
    let f_lo = activation(lo) - 0.5;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if (activation(mid) - 0.5) * f_lo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn criterion_2(dir: &Path, col: &mut Collected) -> (Outcome, Option<f64>) {
    let p = params();
    let mut s = spec(BuiltinLayout::SingleCell, "ez:-10:0:201", &dir.join("c2.csv"));
    s.axis2 = Some("ey:-0.2:0.2:2".parse().unwrap());
    let out = run_sweep(&s).unwrap();
    col.add_sweep("single_cell", &out);
    let circuit = Circuit::new(BuiltinLayout::SingleCell.build(&p), p).unwrap();
    let mut thresholds = Vec::new();
    for ey in [-0.2, 0.2] {
        let scan: Vec<(f64, f64)> = (0..out.reports.len())
            .filter(|&i| value_of(&out, i, SweepVar::Ey) == ey)
            .map(|i| (value_of(&out, i, SweepVar::Ez), out.reports[i].cells[0].a))
            .collect();
        let act = |ez: f64| {
            let f = FieldSpec::from_eo(0.0, ey, ez, ElectrodeMode::NanoElectrode, &p).unwrap();
            circuit.solve(&f, &SolverOptions::default()).unwrap().cells[0].a
        };
        thresholds.push(a_threshold(&scan, act));
    }
    let ok = thresholds
        .iter()
        .all(|t| matches!(t, Some(t) if *t >= NULL_THRESHOLD_BRACKET.0 && *t <= NULL_THRESHOLD_BRACKET.1));
    let t = thresholds.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    (
        outcome(ok, format!("A = 0.5 at E_z = {:?} E_o for E_y = -0.2, +0.2", thresholds)),
        thresholds.iter().all(Option::is_some).then_some(t),
    )
}

fn criterion_3(isolated: Option<f64>, col: &mut Collected) -> Outcome {
    let p = params();
    let Some(isolated) = isolated else {
        return outcome(false, "no isolated-cell threshold");
    };
    let mut thresholds = Vec::new();
    for pd in [-1.0, 1.0] {
        let scan: Vec<(f64, f64)> = (0..201)
            .map(|i| {
                let ez = -10.0 + 10.0 * i as f64 / 200.0;
                let o = driver_target_response(pd, ez, &p).unwrap();
                let mirrored = driver_target_response(-pd, ez, &p).unwrap();
                col.driver_antisymmetry.push(o.p + mirrored.p);
                col.targets.push(o);
                (ez, o.a)
            })
            .collect();
        thresholds.push(a_threshold(&scan, |ez| driver_target_response(pd, ez, &p).unwrap().a));
    }
    let ok = thresholds.iter().all(|t| matches!(t, Some(t) if *t < isolated - CONGESTION_MARGIN));
    outcome(ok, format!("target threshold {thresholds:?} E_o vs isolated {isolated:.4} E_o"))
}

fn criterion_4(dir: &Path, col: &mut Collected) -> (Outcome, Vec<(String, Vec<u8>)>) {
    let mut csvs = Vec::new();
    let mut problems = Vec::new();
    let mut crossings = Vec::new();
    for mode in [ElectrodeMode::NanoElectrode, ElectrodeMode::LargeElectrode] {
        let path = dir.join(format!("c4_{mode}.csv"));
        let mut s = spec(BuiltinLayout::InputWire, "ey:-1:1:201", &path);
        s.fixed.ez = -10.0;
        s.mode = mode;
        let out = run_sweep(&s).unwrap();
        csvs.push((mode.to_string(), fs::read(&path).unwrap()));
        col.add_sweep(&format!("input_wire/{mode}"), &out);
        let series: Vec<(f64, f64)> = (0..out.reports.len())
            .map(|i| (value_of(&out, i, SweepVar::Ey), cell_p(&out.layout, &out.reports[i], 6)))
            .collect();
        for &(ey, p6) in &series {
            let mag = ey.abs();
            let correct = p6 * ey > 0.0;
            let must_be_correct = match mode {
                ElectrodeMode::NanoElectrode => mag >= WIRE_SIGN_MIN_EY - GRID_EPS,
                ElectrodeMode::LargeElectrode => mag >= WIRE_SIGN_MIN_EY - GRID_EPS && mag < WIRE_CORRECT_BELOW,
            };
            let must_be_wrong = mode == ElectrodeMode::LargeElectrode && mag > WIRE_WRONG_ABOVE;
            if must_be_correct && !correct {
                problems.push(format!("{mode}: wrong sign at E_y = {ey:.3}"));
            }
            if must_be_wrong && (correct || p6 == 0.0) {
                problems.push(format!("{mode}: correct sign at E_y = {ey:.3}"));
            }
        }
        if mode == ElectrodeMode::LargeElectrode {
            for side in [-1.0, 1.0] {
                let half: Vec<&(f64, f64)> = series.iter().filter(|(ey, _)| ey * side > 0.0).collect();
                let flips: Vec<f64> = half
                    .windows(2)
                    .filter(|w| (w[0].1 * w[0].0 > 0.0) != (w[1].1 * w[1].0 > 0.0))
                    .map(|w| 0.5 * (w[0].0 + w[1].0).abs())
                    .collect();
                if flips.len() != 1 || flips[0] < WIRE_CORRECT_BELOW || flips[0] > WIRE_WRONG_ABOVE {
                    problems.push(format!("large: sign changes on side {side} at |E_y| = {flips:?}"));
                }
                crossings.extend(flips);
            }
        }
    }
    let detail = if problems.is_empty() {
        format!("nano sign correct on all samples; large-mode crossings at |E_y| = {crossings:?} E_o")
    } else {
        problems.join("; ")
    };
    (outcome(problems.is_empty(), detail), csvs)
}

fn criterion_5(dir: &Path, col: &mut Collected) -> Outcome {
    let mut columns = Vec::new();
    for mode in [ElectrodeMode::NanoElectrode, ElectrodeMode::LargeElectrode] {
        let mut s = spec(BuiltinLayout::InputRotated, "ey:-1:1:201", &dir.join(format!("c5_{mode}.csv")));
        s.fixed.ez = -10.0;
        s.mode = mode;
        s.threads = None;
        let out = run_sweep(&s).unwrap();
        col.add_sweep(&format!("input_rotated/{mode}"), &out);
        columns.push(out.reports.iter().map(|r| pf(r, 6)).collect::<Vec<f64>>());
    }
    let worst = columns[0].iter().zip(&columns[1]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let beyond = columns[0]
        .iter()
        .enumerate()
        .filter(|&(i, _)| (-1.0 + 2.0 * i as f64 / 200.0).abs() > 0.5)
        .count();
    outcome(
        worst <= IMMUNITY_TOL,
        format!("max |P6'(nano) - P6'(large)| = {worst:.2e} over 201 points ({beyond} with |E_y| > E_o/2)"),
    )
}

fn criterion_6(dir: &Path, col: &mut Collected) -> Outcome {
    let mut s = spec(BuiltinLayout::InputRotated, "ex:-1.5:1.5:61", &dir.join("c6.csv"));
    s.axis2 = Some("ey:-0.5:0.5:2".parse().unwrap());
    s.fixed.ez = -7.0;
    s.mode = ElectrodeMode::LargeElectrode;
    s.threads = None;
    let out = run_sweep(&s).unwrap();
    col.add_sweep("input_rotated/large/ex", &out);
    let mut problems = Vec::new();
    let (mut min_inner, mut max_outer) = (f64::INFINITY, 0.0f64);
    for (i, rep) in out.reports.iter().enumerate() {
        let ex = value_of(&out, i, SweepVar::Ex);
        let ey = value_of(&out, i, SweepVar::Ey);
        let p6 = pf(rep, 6);
        if ex >= WINDOW_INNER.0 - GRID_EPS && ex <= WINDOW_INNER.1 + GRID_EPS {
            min_inner = min_inner.min(p6 * ey.signum());
            if !(p6.abs() >= WINDOW_MIN_P && p6 * ey > 0.0) {
                problems.push(format!("P6' = {p6:.3} at E_x = {ex:.2}, E_y = {ey}"));
            }
        }
        if ex <= WINDOW_OUTER.0 + GRID_EPS || ex >= WINDOW_OUTER.1 - GRID_EPS {
            max_outer = max_outer.max(p6.abs());
            if p6.abs() > WINDOW_MAX_FAIL_P {
                problems.push(format!("|P6'| = {:.3} at E_x = {ex:.2}, E_y = {ey}", p6.abs()));
            }
        }
    }
    let detail = if problems.is_empty() {
        format!("min sign(E_y) P6' inside window {min_inner:.3}; max |P6'| outside {max_outer:.3}")
    } else {
        problems.join("; ")
    };
    outcome(problems.is_empty(), detail)
}

fn random_layout(rng: &mut ChaCha8Rng, p: &PhysParams) -> Layout {
    loop {
        let m = rng.random_range(1..=5);
        let cells: Vec<CellGeometry> = (0..m)
            .map(|k| {
                let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let x = rng.random_range(0..4) as f64 * p.a + rng.random_range(-0.2..0.2);
                let y = rng.random_range(0..4) as f64 * p.a + rng.random_range(-0.2..0.2);
                CellGeometry::new(k + 1, x, y, t.cos(), t.sin(), if k == 0 { Role::Input } else { Role::Register })
            })
            .collect();
        let mut drivers = Vec::new();
        if rng.random_bool(0.5) {
            let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let pol: f64 = rng.random_range(-1.0..1.0);
            let act = rng.random_range(pol.abs()..=1.0);
            drivers.push(ClassicalDriver::new(-1.5 * p.a, rng.random_range(-1.0..1.0), t.cos(), t.sin(), pol, act));
        }
        let input_mask = cells.iter().filter(|c| c.role == Role::Input).map(|c| c.id).collect();
        let layout = Layout { cells, input_mask, functional_pairs: Vec::new(), drivers };
        if layout.validate(p, &LayoutLimits::default()).is_ok() {
            return layout;
        }
    }
}

/// Diagonal of the circuit Hamiltonian by direct enumeration of charges.
fn brute_force_diagonal(layout: &Layout, field: &FieldSpec, p: &PhysParams) -> Vec<f64> {
    let m = layout.cells.len();
    let cell_dots: Vec<[[f64; 3]; 3]> = layout
        .cells
        .iter()
        .map(|c| dots(c.center.x, c.center.y, c.orientation.x, c.orientation.y, p))
        .collect();
    let local: Vec<[f64; 3]> = layout
        .cells
        .iter()
        .zip(&cell_dots)
        .map(|(c, d)| {
            let in_plane = field.mode == ElectrodeMode::LargeElectrode || layout.input_mask.contains(&c.id);
            let e = if in_plane { [field.ex, field.ey, field.ez] } else { [0.0, 0.0, field.ez] };
            // potential energy of the mobile charge, V/nm * nm * e -> meV
            let u: Vec<f64> = d.iter().map(|r| -p.mobile_charge * (e[0] * r[0] + e[1] * r[1] + e[2] * r[2]) * 1e3).collect();
            let mid = 0.5 * (u[0] + u[2]);
            [u[0] - mid, u[1] - mid - p.e_a, u[2] - mid]
        })
        .collect();
    let drivers: Vec<Vec<(f64, [f64; 3])>> = layout
        .drivers
        .iter()
        .map(|d| {
            let dd = dots(d.center.x, d.center.y, d.orientation.x, d.orientation.y, p);
            let rho = [(d.activation - d.polarization) / 2.0, 1.0 - d.activation, (d.activation + d.polarization) / 2.0];
            let mut q: Vec<(f64, [f64; 3])> = (0..3).map(|x| (p.mobile_charge * rho[x], dd[x])).collect();
            q.push((p.neutralizing_charge, dd[1]));
            q
        })
        .collect();
    let charges = |k: usize, x: usize| -> Vec<(f64, [f64; 3])> {
        if x == 1 {
            Vec::new()
        } else {
            vec![(p.mobile_charge, cell_dots[k][x]), (p.neutralizing_charge, cell_dots[k][1])]
        }
    };
    (0..3usize.pow(m as u32))
        .map(|idx| {
            let xs: Vec<usize> = (0..m).map(|k| (idx / 3usize.pow(k as u32)) % 3).collect();
            let mut e = 0.0;
            for k in 0..m {
                e += local[k][xs[k]];
                for drv in &drivers {
                    for &(q1, r1) in &charges(k, xs[k]) {
                        for &(q2, r2) in drv {
                            e += coulomb(q1, r1, q2, r2);
                        }
                    }
                }
                for j in 0..k {
                    for &(q1, r1) in &charges(k, xs[k]) {
                        for &(q2, r2) in &charges(j, xs[j]) {
                            e += coulomb(q1, r1, q2, r2);
                        }
                    }
                }
            }
            e
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let p = params();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_807);
    let (mut worst_e0, mut worst_diag) = (0.0f64, 0.0f64);
    let mut offdiag_ok = true;
    for _ in 0..CROSS_INSTANCES {
        let layout = random_layout(&mut rng, &p);
        let mode = if rng.random_bool(0.5) { ElectrodeMode::NanoElectrode } else { ElectrodeMode::LargeElectrode };
        let f = FieldSpec::from_eo(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            mode,
            &p,
        )
        .unwrap();
        let circuit = Circuit::new(layout.clone(), p).unwrap();
        let h = circuit.hamiltonian(&f).unwrap();
        let dense = qcasim::solver::ground_state(&h, &SolverOptions { method: SolverMethod::Dense, ..Default::default() })
            .unwrap();
        let iter =
            qcasim::solver::ground_state(&h, &SolverOptions { method: SolverMethod::Iterative, ..Default::default() })
                .unwrap();
        worst_e0 = worst_e0.max(((dense.energy - iter.energy) / dense.energy).abs());
        for (a, b) in h.diagonal.iter().zip(brute_force_diagonal(&layout, &f, &p)) {
            worst_diag = worst_diag.max((a - b).abs() / b.abs().max(1.0));
        }
        let m = layout.cells.len();
        offdiag_ok &= h.upper.len() == 2 * m * 3usize.pow(m as u32 - 1)
            && h.upper.iter().all(|&(i, j, v)| {
                // a single cell hops 0 -> N or N -> 1
                let k = (0..m).find(|&k| 3usize.pow(k as u32) == j - i);
                v == -p.gamma && k.is_some_and(|k| (i / 3usize.pow(k as u32)) % 3 != 2)
            });
    }
    outcome(
        worst_e0 < CROSS_E0_REL_TOL && worst_diag < CROSS_DIAG_REL_TOL && offdiag_ok,
        format!(
            "{CROSS_INSTANCES} instances: max E0 rel diff {worst_e0:.2e}, max diagonal rel diff {worst_diag:.2e}, hopping structure {}",
            if offdiag_ok { "ok" } else { "WRONG" }
        ),
    )
}

fn criterion_8(col: &Collected) -> Outcome {
    let mut worst_sum: f64 = 0.0;
    let mut worst_pa: f64 = 0.0;
    let cells = col.states.iter().flat_map(|s| s.4.cells.iter()).chain(&col.targets);
    {
        for c in cells {
            worst_sum = worst_sum.max((c.occupations.iter().sum::<f64>() - 1.0).abs());
            worst_pa = worst_pa.max(c.p.abs() - c.a);
        }
    }
    // P_k(E_y) = s P_sigma(k)(-E_y) under the mirror y -> -y
    let mut index: HashMap<(String, Vec<u64>), usize> = HashMap::new();
    for (i, (label, _, _, pt, _)) in col.states.iter().enumerate() {
        index.insert((label.clone(), pt.iter().map(|v| v.to_bits()).collect()), i);
    }
    let (mut checked, mut skipped) = (0usize, 0usize);
    let mut worst_anti: f64 = 0.0;
    for (label, layout, axes, pt, rep) in &col.states {
        let Some(ky) = axes.iter().position(|&v| v == SweepVar::Ey) else { continue };
        let mut mirrored = pt.clone();
        mirrored[ky] = -pt[ky];
        let Some(&j) = index.get(&(label.clone(), mirrored.iter().map(|v| v.to_bits()).collect())) else { continue };
        let other = &col.states[j].4;
        if rep.degenerate || other.degenerate {
            skipped += 1;
            continue;
        }
        let sigma = layout.y_mirror().expect("built-ins are mirror symmetric");
        for (k, &(s, swapped)) in sigma.iter().enumerate() {
            let sign = if swapped { -1.0 } else { 1.0 };
            worst_anti = worst_anti.max((rep.cells[k].p - sign * other.cells[s].p).abs());
        }
        checked += 1;
    }
    for v in &col.driver_antisymmetry {
        worst_anti = worst_anti.max(v.abs());
    }
    let pass = worst_sum < SUM_RHO_TOL && worst_pa <= SUM_RHO_TOL && worst_anti < ANTISYMMETRY_TOL && checked > 0;
    outcome(
        pass,
        format!(
            "{} states: max |sum rho - 1| {worst_sum:.1e}, max |P|-A {worst_pa:.1e}; mirror antisymmetry on {checked} states ({skipped} degenerate skipped) + {} driver pairs, max dev {worst_anti:.1e}",
            col.states.len() + col.targets.len(),
            col.driver_antisymmetry.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let p = params();
    let opts = IchaOptions::default();
    let exact_opts = SolverOptions::default();
    let mut worst_m1: f64 = 0.0;
    let mut worst_bound: f64 = f64::INFINITY;
    let mut instances = 0;
    let mut check = |circuit: &Circuit, f: &FieldSpec, compare: bool| {
        let mf = icha_solve_circuit(circuit, f, &opts, None).unwrap().report;
        let ex = circuit.solve(f, &exact_opts).unwrap();
        if compare {
            for (a, b) in mf.cells.iter().zip(&ex.cells) {
                worst_m1 = worst_m1.max((a.p - b.p).abs()).max((a.a - b.a).abs());
            }
        }
        worst_bound = worst_bound.min(mf.energy - ex.energy + 1e-9 * ex.energy.abs());
        instances += 1;
    };
    let single = Circuit::new(BuiltinLayout::SingleCell.build(&p), p).unwrap();
    let pair = Circuit::new(BuiltinLayout::DriverTarget.build(&p), p).unwrap();
    for i in 0..21 {
        let ez = -10.0 + 0.5 * i as f64;
        for ey in [-0.8, -0.2, 0.0, 0.3, 1.0] {
            check(&single, &FieldSpec::from_eo(0.0, ey, ez, ElectrodeMode::NanoElectrode, &p).unwrap(), true);
        }
        for pd in [-1.0, -0.5, 0.0, 0.25, 1.0] {
            let c = pair.with_driver_polarization(pd).unwrap();
            check(&c, &FieldSpec::from_eo(0.0, 0.0, ez, ElectrodeMode::NanoElectrode, &p).unwrap(), true);
        }
    }
    for layout in [BuiltinLayout::InputWire, BuiltinLayout::InputRotated] {
        let c = Circuit::new(layout.build(&p), p).unwrap();
        for mode in [ElectrodeMode::NanoElectrode, ElectrodeMode::LargeElectrode] {
            for i in 0..11 {
                let ey = -1.0 + 0.2 * i as f64;
                for ez in [-10.0, -7.0, -4.0] {
                    check(&c, &FieldSpec::from_eo(0.2, ey, ez, mode, &p).unwrap(), false);
                }
            }
        }
    }
    outcome(
        worst_m1 < ICHA_EXACT_TOL && worst_bound >= 0.0,
        format!("M = 1 max |ICHA - exact| {worst_m1:.1e}; E_MF >= E0 on all {instances} instances (min margin {worst_bound:.3} meV)"),
    )
}

fn criterion_10(dir: &Path, reference: &[(String, Vec<u8>)]) -> Outcome {
    let mut same = true;
    for (mode, bytes) in reference {
        let path = dir.join(format!("c10_{mode}.csv"));
        let mut s = spec(BuiltinLayout::InputWire, "ey:-1:1:201", &path);
        s.fixed.ez = -10.0;
        s.mode = mode.parse().unwrap();
        s.threads = Some(8);
        run_sweep(&s).unwrap();
        same &= fs::read(&path).unwrap() == *bytes;
    }
    outcome(same && !reference.is_empty(), "input_wire sweeps with 1 and 8 workers, both modes: CSV bytes identical")
}

fn report(n: usize, name: &str, started: Instant, o: &Outcome, failures: &mut usize) {
    if !o.pass {
        *failures += 1;
    }
    println!(
        "criterion {n:>2} [{}] {name}: {} ({:.1} s)",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        started.elapsed().as_secs_f64()
    );
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let mut col = Collected::default();
    let mut failures = 0;

    let t = Instant::now();
    report(1, "kink energy", t, &criterion_1(), &mut failures);
    let t = Instant::now();
    let (o, isolated) = criterion_2(dir, &mut col);
    report(2, "isolated-cell null region", t, &o, &mut failures);
    let t = Instant::now();
    report(3, "driver-target congestion", t, &criterion_3(isolated, &mut col), &mut failures);
    let t = Instant::now();
    let (o, csvs) = criterion_4(dir, &mut col);
    report(4, "input wire correctness and failure", t, &o, &mut failures);
    let t = Instant::now();
    report(5, "rotated-register immunity", t, &criterion_5(dir, &mut col), &mut failures);
    let t = Instant::now();
    report(6, "E_x tolerance window", t, &criterion_6(dir, &mut col), &mut failures);
    let t = Instant::now();
    report(7, "solver cross-validation", t, &criterion_7(), &mut failures);
    let t = Instant::now();
    report(8, "observable invariants", t, &criterion_8(&col), &mut failures);
    let t = Instant::now();
    report(9, "mean-field consistency", t, &criterion_9(), &mut failures);
    let t = Instant::now();
    report(10, "determinism across worker counts", t, &criterion_10(dir, &csvs), &mut failures);

    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
