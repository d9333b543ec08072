use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qcasim::circuit::Circuit;
use qcasim::icha::IchaOptions;
use qcasim::model::{BuiltinLayout, ElectrodeMode, FieldSpec, FieldUnit, LayoutDocument, LayoutLimits};
use qcasim::solver::SolverOptions;
use qcasim::sweep::{self, Axis, FixedValues, LayoutSource, SolverChoice, SweepSpec};
use qcasim::{QcaError, Result};

#[derive(Parser)]
#[command(name = "qcasim", version, about = "Electric-field-clocked molecular QCA simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Units {
    /// Multiples of the kink-energy field scale E_o
    Eo,
    /// Volts per nanometre
    VPerNm,
}

impl From<Units> for FieldUnit {
    fn from(u: Units) -> Self {
        match u {
            Units::Eo => FieldUnit::Eo,
            Units::VPerNm => FieldUnit::VoltsPerNm,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a layout file (or built-in name) for schema and geometry errors
    Validate { layout: String },

    /// Solve a single field point and print the report
    Solve {
        /// Built-in layout name or path to a layout JSON file
        #[arg(long)]
        layout: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        ex: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        ey: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        ez: f64,
        /// Override the polarization of every classical driver
        #[arg(long, allow_negative_numbers = true)]
        pdrv: Option<f64>,
        #[arg(long, default_value = "nano", value_parser = parse_mode)]
        mode: ElectrodeMode,
        #[arg(long, default_value = "exact", value_parser = parse_solver)]
        solver: SolverChoice,
        #[arg(long, value_enum, default_value = "eo")]
        units: Units,
        /// Write the assembled Hamiltonian in coordinate format
        #[arg(long)]
        dump_matrix: Option<PathBuf>,
    },

    /// Sweep one or two field variables and write a CSV table
    Sweep {
        #[arg(long)]
        layout: String,
        /// var:start:stop:count with var one of ey, ez, ex, pdrv
        #[arg(long, allow_hyphen_values = true)]
        axis1: String,
        #[arg(long, allow_hyphen_values = true)]
        axis2: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        ex: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        ey: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        ez: f64,
        #[arg(long, allow_negative_numbers = true)]
        pdrv: Option<f64>,
        #[arg(long, default_value = "nano", value_parser = parse_mode)]
        mode: ElectrodeMode,
        #[arg(long, default_value = "exact", value_parser = parse_solver)]
        solver: SolverChoice,
        #[arg(long, value_enum, default_value = "eo")]
        units: Units,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: $QCASIM_THREADS, then all cores)
        #[arg(long)]
        threads: Option<usize>,
    },

    /// Write a built-in layout to a JSON file
    Builtin {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_mode(s: &str) -> std::result::Result<ElectrodeMode, String> {
    s.parse().map_err(|e: QcaError| e.to_string())
}

fn parse_solver(s: &str) -> std::result::Result<SolverChoice, String> {
    s.parse().map_err(|e: QcaError| e.to_string())
}

fn load(layout: &str) -> Result<(LayoutDocument, Circuit)> {
    let doc = LayoutSource::parse(layout).load()?;
    let circuit = Circuit::new(doc.layout.clone(), doc.params)?;
    Ok((doc, circuit))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { layout } => {
            let doc = LayoutSource::parse(&layout).load()?;
            doc.params.validate()?;
            doc.layout.validate(&doc.params, &LayoutLimits::default())?;
            println!("{layout}: valid ({} cells, {} drivers)", doc.layout.len(), doc.layout.drivers.len());
        }
        Command::Solve { layout, ex, ey, ez, pdrv, mode, solver, units, dump_matrix } => {
            let (doc, mut circuit) = load(&layout)?;
            if let Some(p) = pdrv {
                circuit = circuit.with_driver_polarization(p)?;
            }
            let u = FieldUnit::from(units);
            let field = FieldSpec {
                ex: u.to_v_per_nm(ex, &doc.params)?,
                ey: u.to_v_per_nm(ey, &doc.params)?,
                ez: u.to_v_per_nm(ez, &doc.params)?,
                mode,
            };
            if let Some(path) = dump_matrix {
                circuit.hamiltonian(&field)?.write_coordinate(BufWriter::new(File::create(path)?))?;
            }
            let report =
                sweep::solve_point(&circuit, &field, solver, &SolverOptions::default(), &IchaOptions::default())?;
            print!("{}", sweep::format_report(circuit.layout(), &report, solver, u, &doc.params)?);
        }
        Command::Sweep { layout, axis1, axis2, ex, ey, ez, pdrv, mode, solver, units, out, threads } => {
            let mut spec = SweepSpec::new(LayoutSource::parse(&layout), axis1.parse::<Axis>()?, out);
            spec.axis2 = axis2.map(|a| a.parse()).transpose()?;
            spec.fixed = FixedValues { ex, ey, ez, pdrv };
            spec.mode = mode;
            spec.solver = solver;
            spec.units = units.into();
            spec.threads = threads;
            let outcome = sweep::run_sweep(&spec)?;
            eprintln!("wrote {} rows to {}", outcome.reports.len(), spec.output.display());
        }
        Command::Builtin { name, out } => {
            let b: BuiltinLayout = name.parse()?;
            let params = Default::default();
            LayoutDocument { layout: b.build(&params), params }.write(&out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
