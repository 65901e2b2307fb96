//! Command-line front end. Output is one JSON document (or CSV table) with a
//! header block; `--out` redirects it to a file.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Result, WitnessError};
use crate::geometry::{
    classical_polytope_vertices, sample_region, support_compare_with, RegionExport,
};
use crate::lmg::{critical_temperature, lmg_hamiltonian, thermal_scan, LmgParams, TcritOptions};
use crate::optimizer::{
    chi_minimum, dicke_sweep, minimize_eigen_witness, minimize_witness, omega_window,
    parity_trends, source_expectation, theta_window, OptOptions,
};
use crate::oracle::verify_suite;
use crate::report::{angle_cell, json_document, write_text, Cell, Format, Header, Table};
use crate::states::{
    dicke, dicke_ghz_superposition, ghz, spin_squeezed, MeasurementSettings, Mode,
    SymmetricState, WitnessParams,
};
use crate::witness::{correlation_point, separable_bound};

#[derive(Parser, Debug, Serialize)]
#[command(name = "symwit", version, about = "Symmetric two-body entanglement witnesses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct OutputArgs {
    /// Seed for randomized checks; recorded in every header.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads. Changes wall time only.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub workers: Option<usize>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub format: OutFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Separable bound F.
    Bound {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        witness: WitnessArgs,
        #[command(flatten)]
        meas: MeasArgs,
    },
    /// Witness expectation for a state.
    Expect {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        witness: WitnessArgs,
        #[command(flatten)]
        meas: MeasArgs,
    },
    /// Minimize the witness expectation for a state, or its lowest eigenvalue with --eigen.
    Optimize {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        general: bool,
        /// Minimize over all states instead of the given one.
        #[arg(long)]
        eigen: bool,
    },
    /// Optimized minimum for central Dicke states over a range of N.
    DickeSweep {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 30)]
        n_max: usize,
        #[arg(long)]
        general: bool,
    },
    /// Detection window in the planar angle for fixed coefficients.
    ThetaWindow {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    /// Optimized minimum for spin-squeezed states over a geometric chi grid.
    ChiScan {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-4)]
        chi_min: f64,
        #[arg(long, default_value_t = 1.0)]
        chi_max: f64,
        #[arg(long, default_value_t = 60)]
        grid: usize,
    },
    /// Planar minimum on cos(omega) Dicke + sin(omega) GHZ for omega in [0, pi].
    OmegaScan {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 181)]
        grid: usize,
    },
    /// Planar minimum for LMG thermal states on T in [0, t-max].
    ThermalScan {
        #[command(flatten)]
        lmg: LmgArgs,
        #[arg(long, default_value_t = 2.0)]
        t_max: f64,
        #[arg(long, default_value_t = 41)]
        grid: usize,
    },
    /// Temperature at which the LMG thermal state stops being detected.
    Tcrit {
        #[command(flatten)]
        lmg: LmgArgs,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Sampled witness half-spaces, polytope vertices and state points as JSON.
    Region {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        meas: MeasArgs,
        #[arg(long, default_value_t = 500)]
        directions: usize,
        /// Reduce the polytope to its extreme points.
        #[arg(long)]
        hull: bool,
    },
    /// Classical polytope vertices; with --compare, support comparison against the witness region.
    Polytope {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        hull: bool,
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        meas: MeasArgs,
        #[arg(long, default_value_t = 1000)]
        directions: usize,
    },
    /// Cross-check fast paths against brute-force full-space references.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 100)]
        draws: usize,
        /// Random product states per parameter draw.
        #[arg(long, default_value_t = 10_000)]
        products: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Dicke,
    Ghz,
    Squeezed,
    Superposition,
}

#[derive(Args, Debug, Serialize)]
pub struct StateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Family::Dicke)]
    pub state: Family,
    /// Dicke excitation number; defaults to ceil(N/2).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub chi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub omega: f64,
}

impl StateArgs {
    fn build(&self) -> Result<SymmetricState> {
        match self.state {
            Family::Dicke => dicke(self.n, self.k.unwrap_or(self.n.div_ceil(2))),
            Family::Ghz => ghz(self.n),
            Family::Squeezed => spin_squeezed(self.n, self.chi),
            Family::Superposition => dicke_ghz_superposition(self.n, self.omega),
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct WitnessArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
}

impl WitnessArgs {
    fn params(&self) -> Result<WitnessParams> {
        WitnessParams::new(self.alpha, self.beta, self.gamma)
    }
}

/// Radians throughout.
#[derive(Args, Debug, Serialize)]
pub struct MeasArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Use --theta0/--phi0/--theta1/--phi1 instead of --theta.
    #[arg(long)]
    pub general: bool,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi1: f64,
}

impl MeasArgs {
    fn settings(&self) -> Result<MeasurementSettings> {
        let m = if self.general {
            MeasurementSettings::general(self.theta0, self.phi0, self.theta1, self.phi1)
        } else {
            MeasurementSettings::planar(self.theta)
        };
        m.validate()?;
        Ok(m)
    }
}

#[derive(Args, Debug, Serialize)]
pub struct LmgArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub h: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
}

impl LmgArgs {
    fn params(&self) -> Result<LmgParams> {
        LmgParams::new(self.n, self.lambda, self.h)
    }
}

/// A result plus its CSV rendering.
struct Output {
    json: serde_json::Value,
    table: Table,
}

fn output<T: Serialize>(value: &T, table: Table) -> Result<Output> {
    Ok(Output {
        json: serde_json::to_value(value)?,
        table,
    })
}

fn mode(general: bool) -> Mode {
    if general {
        Mode::General
    } else {
        Mode::Planar
    }
}

fn witness_cells(p: &WitnessParams, m: &MeasurementSettings) -> Vec<Cell> {
    vec![p.alpha.into(), p.beta.into(), p.gamma.into(), angle_cell(&m.angles())]
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < 2 {
        return Err(WitnessError::domain("--grid needs at least 2 points"));
    }
    Ok(())
}

fn execute(cmd: &Command, opts: &OptOptions) -> Result<Output> {
    match cmd {
        Command::Bound { n, witness, meas } => {
            let b = separable_bound(&witness.params()?, &meas.settings()?, *n);
            let mut t = Table::new(["F", "active_branch"]);
            t.push(vec![b.value.into(), serde_json::to_value(b.active_branch)?.as_str().unwrap_or("").into()]);
            output(&b, t)
        }
        Command::Expect { state, witness, meas } => {
            let s = state.build()?;
            let (p, m) = (witness.params()?, meas.settings()?);
            let value = source_expectation(&s, &p, &m)?;
            let point = correlation_point(&s, &m)?;
            let mut t = Table::new(["expectation", "s00", "s01", "s11"]);
            t.push(vec![value.into(), point.s00.into(), point.s01.into(), point.s11.into()]);
            output(&serde_json::json!({ "expectation": value, "point": point }), t)
        }
        Command::Optimize { state, general, eigen } => {
            let r = if *eigen {
                minimize_eigen_witness(state.n, mode(*general), opts)?
            } else {
                minimize_witness(&state.build()?, mode(*general), opts)?
            };
            let mut t = Table::new(["min_expectation", "alpha", "beta", "gamma", "angles"]);
            let mut row = vec![r.best_value.into()];
            row.extend(witness_cells(&r.best_params, &r.best_meas));
            t.push(row);
            output(&r, t)
        }
        Command::DickeSweep { n_min, n_max, general } => {
            let records = dicke_sweep(*n_min, *n_max, mode(*general), opts)?;
            let trends = parity_trends(&records, 1e-6);
            let mut t = Table::new(["n", "k", "min_expectation", "alpha", "beta", "gamma", "angles"]);
            for r in &records {
                let mut row = vec![r.n.into(), r.k.into(), r.min_expectation.into()];
                row.extend(witness_cells(&r.params, &r.meas));
                t.push(row);
            }
            output(&serde_json::json!({ "records": records, "trends": trends }), t)
        }
        Command::ThetaWindow { state, witness } => {
            let w = theta_window(&state.build()?, &witness.params()?);
            let mut t = Table::new(["theta_lo", "theta_hi", "primary"]);
            for &(lo, hi) in &w.intervals {
                t.push(vec![lo.into(), hi.into(), (w.primary == Some((lo, hi))).to_string().into()]);
            }
            output(&w, t)
        }
        Command::ChiScan { n, chi_min, chi_max, grid } => {
            check_grid(*grid)?;
            if !(*chi_min > 0.0 && chi_max > chi_min) {
                return Err(WitnessError::domain("need 0 < --chi-min < --chi-max"));
            }
            let ratio = (chi_max / chi_min).powf(1.0 / (*grid - 1) as f64);
            let chis: Vec<f64> = (0..*grid).map(|i| chi_min * ratio.powi(i as i32)).collect();
            let (best, records) = chi_minimum(*n, &chis, opts)?;
            let mut t = Table::new(["chi", "min_expectation", "alpha", "beta", "gamma", "angles"]);
            for r in &records {
                let mut row = vec![r.variable.into(), r.min_expectation.into()];
                row.extend(witness_cells(&r.params, &r.meas));
                t.push(row);
            }
            output(&serde_json::json!({ "best": best, "records": records }), t)
        }
        Command::OmegaScan { n, grid } => {
            check_grid(*grid)?;
            let omegas: Vec<f64> = (0..*grid)
                .map(|i| std::f64::consts::PI * i as f64 / (*grid - 1) as f64)
                .collect();
            let (window, best, records) = omega_window(*n, &omegas, opts)?;
            let mut t = Table::new(["omega", "min_expectation", "alpha", "beta", "gamma", "angles"]);
            for r in &records {
                let mut row = vec![r.variable.into(), r.min_expectation.into()];
                row.extend(witness_cells(&r.params, &r.meas));
                t.push(row);
            }
            output(&serde_json::json!({ "window": window, "best": best, "records": records }), t)
        }
        Command::ThermalScan { lmg, t_max, grid } => {
            check_grid(*grid)?;
            if !(*t_max > 0.0 && t_max.is_finite()) {
                return Err(WitnessError::domain("--t-max must be positive"));
            }
            let ham = lmg_hamiltonian(&lmg.params()?)?;
            let temps: Vec<f64> = (0..*grid).map(|i| t_max * i as f64 / (*grid - 1) as f64).collect();
            let records = thermal_scan(&ham, &temps, opts)?;
            let mut t = Table::new(["T", "min_expectation", "s00", "s01", "s11"]);
            for r in &records {
                t.push(vec![r.t.into(), r.min_expectation.into(), r.point.s00.into(), r.point.s01.into(), r.point.s11.into()]);
            }
            output(&records, t)
        }
        Command::Tcrit { lmg, t_max, tol } => {
            let r = critical_temperature(
                &lmg.params()?,
                &TcritOptions {
                    t_max: *t_max,
                    tol: *tol,
                    opt: *opts,
                    ..TcritOptions::default()
                },
            )?;
            let mut t = Table::new(["t_crit", "g_zero", "lo", "hi", "steps"]);
            t.push(vec![r.t_crit.into(), r.g_zero.into(), r.bracket.0.into(), r.bracket.1.into(), r.steps.into()]);
            output(&r, t)
        }
        Command::Region { n, meas, directions, hull } => {
            let m = meas.settings()?;
            let halfspaces = sample_region(*n, &m, *directions)?;
            let poly = classical_polytope_vertices(*n, *hull)?;
            let mut region = RegionExport::new(*n, m, halfspaces, poly.vertices);
            region = region.with_state("ghz", &correlation_point(&ghz(*n)?, &m)?);
            region = region.with_state(
                format!("dicke_{}", n.div_ceil(2)),
                &correlation_point(&dicke(*n, n.div_ceil(2))?, &m)?,
            );
            let mut t = Table::new(["n0", "n1", "n2", "offset"]);
            for h in &region.halfspaces {
                t.push(vec![h.normal[0].into(), h.normal[1].into(), h.normal[2].into(), h.offset.into()]);
            }
            output(&region, t)
        }
        Command::Polytope { n, hull, compare, meas, directions } => {
            let poly = classical_polytope_vertices(*n, *hull)?;
            poly.validate()?;
            if *compare {
                let r = crate::parallel::with_workers(opts.workers, || {
                    support_compare_with(&poly, &meas.settings()?, *directions)
                })??;
                let mut t = Table::new(["index", "d0", "d1", "d2", "witness_support", "polytope_support", "excess"]);
                for p in &r.protrusions {
                    t.push(vec![
                        p.index.into(),
                        p.direction[0].into(),
                        p.direction[1].into(),
                        p.direction[2].into(),
                        p.witness_support.into(),
                        p.polytope_support.into(),
                        p.excess.into(),
                    ]);
                }
                return output(&r, t);
            }
            let mut t = Table::new(["s00", "s01", "s11", "n1", "n2", "n3", "n4"]);
            for (v, c) in poly.vertices.iter().zip(&poly.counts) {
                let mut row: Vec<Cell> = v.iter().map(|&x| x.into()).collect();
                row.extend(c.iter().map(|&x| Cell::from(x)));
                t.push(row);
            }
            output(&poly, t)
        }
        Command::Verify { .. } => unreachable!("handled by dispatch"),
    }
}

fn render(cli: &Cli, out: &Output) -> Result<String> {
    let header = Header::new(cli.output.seed, cli);
    match Format::from(cli.output.format) {
        Format::Json => json_document(&header, &out.json),
        Format::Csv => out.table.to_csv(&header),
    }
}

fn emit(cli: &Cli, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &cli.output.out {
        Some(path) => write_text(path, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| WitnessError::io("<stdout>", e)),
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<bool> {
    let opts = OptOptions {
        workers: cli.output.workers,
        ..OptOptions::default()
    };
    if let Command::Verify { max_n, draws, products } = &cli.command {
        let r = verify_suite(*max_n, *draws, *products, cli.output.seed)?;
        let mut t = Table::new(["check", "cases", "max_deviation", "tolerance", "passed"]);
        for c in &r.checks {
            t.push(vec![c.name.clone().into(), c.cases.into(), c.max_deviation.into(), c.tolerance.into(), c.passed.to_string().into()]);
        }
        let text = render(cli, &output(&r, t)?)?;
        emit(cli, &text, stdout)?;
        return Ok(r.passed);
    }
    let out = execute(&cli.command, &opts)?;
    emit(cli, &render(cli, &out)?, stdout)?;
    Ok(true)
}

/// Parse `args`, run, and return the process exit code: 0 on success, 1 on a
/// domain error or failed verification, 2 on a usage error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(stderr, "{}", e.render());
            // --help and --version exit 0; everything else is a usage error
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(&cli, stdout) {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(stderr, "verification failed");
            1
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
