//! The `morsekit` command line.
//!
//! ```text
//! morsekit <classify|phase-diagram|spectrum|wavefunction|pps-table|plateau>
//!     --A <f> --B <f> --C <f> --q <f> [--lambda <f=1>] [--method <m>]
//!     [--gamma <f>] [--basis-size <n=200>] [--out <path>] [--format csv|json]
//! ```
//!
//! Tables go to `--out` (or stdout) as CSV with a header, or as a JSON array
//! of records with the same fields. Numbers carry 12 significant digits.
//! `phase-diagram` and `wavefunction` write several files into the `--out`
//! directory. Errors are reported on one stderr line,
//! `error: <code>: <message>`, with exit status 2 for usage and domain errors
//! and 3 for numerical failures. `MORSEKIT_THREADS` sets the size of the
//! worker pool.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::fdm::{fdm_spectrum, fdm_wavefunction, FdmConfig};
use crate::nhd::{default_gamma_grid, nhd_spectrum, nhd_states, nhd_wavefunction, plateau_scan, NhdConfig};
use crate::potential::{
    boundary_blue_green, boundary_green_red, boundary_min_zero, boundary_red_grey, classify, classify_morse_branch,
    find_extrema_report, linspace, phase_diagram_grid, tra_limit, PotentialParams,
};
use crate::pps::{pps_scan, pps_spectrum, pps_wavefunction, PpsConfig};
use crate::spectrum::Spectrum;
use crate::tra::diag_spectrum;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "morsekit", version, about = "Spectra and phase diagrams of the deformed Morse-like potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral class and extrema of one configuration.
    #[command(allow_negative_numbers = true)]
    Classify {
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Class grids over (A/C, B/C) and the boundary curves.
    #[command(allow_negative_numbers = true)]
    PhaseDiagram(PhaseArgs),
    /// Bound-state energies.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Sampled eigenfunctions, one file per level.
    #[command(allow_negative_numbers = true)]
    Wavefunction(WavefunctionArgs),
    /// Raw parameter-spectrum scan in long format.
    #[command(allow_negative_numbers = true)]
    PpsTable(PpsTableArgs),
    /// Laguerre-basis spectra across gamma with stability scores.
    #[command(allow_negative_numbers = true)]
    Plateau(PlateauArgs),
}

#[derive(Debug, Args)]
struct PotentialArgs {
    #[arg(long = "A")]
    a: f64,
    #[arg(long = "B")]
    b: f64,
    #[arg(long = "C")]
    c: f64,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
}

impl PotentialArgs {
    fn params(&self) -> Result<PotentialParams, Error> {
        let p = PotentialParams::new(self.a, self.b, self.c, self.q).with_lambda(self.lambda);
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpectrumMethod {
    Pps,
    Nhd,
    Fdm,
    Diag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WaveMethod {
    Pps,
    Nhd,
    Fdm,
}

#[derive(Debug, Args)]
struct PhaseArgs {
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
    #[arg(long, required_unless_present = "q_sweep")]
    q: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// `start,stop,step` for a sequence of frames.
    #[arg(long)]
    q_sweep: Option<String>,
    #[arg(long, default_value_t = -3.0)]
    a_min: f64,
    #[arg(long, default_value_t = 3.0)]
    a_max: f64,
    #[arg(long, default_value_t = -3.0)]
    b_min: f64,
    #[arg(long, default_value_t = 3.0)]
    b_max: f64,
    #[arg(long, default_value_t = 200)]
    na: usize,
    #[arg(long, default_value_t = 200)]
    nb: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Laguerre parameter; chosen from the plateau of stability when absent.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 200)]
    basis_size: usize,
    /// Energies in the parameter-spectrum scan.
    #[arg(long, default_value_t = 200)]
    m_points: usize,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    /// Defaults to nhd when C > 0 and diag otherwise.
    #[arg(long, value_enum)]
    method: Option<SpectrumMethod>,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = -30.0)]
    x_min: f64,
    #[arg(long, default_value_t = 8.0)]
    x_max: f64,
    /// Interior finite-difference points.
    #[arg(long, default_value_t = 8000)]
    n_points: usize,
    #[arg(long)]
    no_richardson: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct WavefunctionArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long, value_enum, default_value_t = WaveMethod::Pps)]
    method: WaveMethod,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, conflicts_with = "levels")]
    level: Option<usize>,
    /// Comma-separated level list.
    #[arg(long)]
    levels: Option<String>,
    #[arg(long, default_value_t = -25.0)]
    x_min: f64,
    #[arg(long, default_value_t = 4.0)]
    x_max: f64,
    #[arg(long, default_value_t = 29001)]
    x_points: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct PpsTableArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long)]
    e_min: Option<f64>,
    #[arg(long)]
    e_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    m_points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PlateauArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    /// Comma-separated gamma values; a default grid is used when absent.
    #[arg(long)]
    gammas: Option<String>,
    #[arg(long, default_value_t = 200)]
    basis_size: usize,
    #[command(flatten)]
    output: OutputArgs,
}

/// Failure of a command: a library error or an I/O problem.
#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Lib(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }

    fn line(&self) -> String {
        let (code, msg) = match self {
            Failure::Lib(e) => (e.code(), e.to_string()),
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Io(m) => ("io", m.clone()),
        };
        format!("error: {code}: {}", msg.replace('\n', " "))
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// `printf("%.12g")`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone)]
enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) if s.contains(',') || s.contains('"') => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => {
                let rounded: f64 = fmt_num(*x).parse().expect("round trip");
                json!(rounded)
            }
            Cell::Num(x) => json!(fmt_num(*x)),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for row in &self.rows {
                    let line: Vec<String> = row.iter().map(Cell::csv).collect();
                    s.push_str(&line.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut m = Map::new();
                        for (k, v) in self.header.iter().zip(row) {
                            m.insert((*k).to_string(), v.json());
                        }
                        Value::Object(m)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Array(records)).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

fn emit(text: &str, out: &Option<PathBuf>, stdout: &mut dyn Write) -> CmdResult {
    match out {
        Some(path) => write_file(path, text),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_list(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("cannot parse '{t}' as a number")))
        })
        .collect()
}

fn cmd_classify(potential: &PotentialArgs, output: &OutputArgs, stdout: &mut dyn Write) -> CmdResult {
    let p = potential.params()?;
    let class = if p.c > 0.0 {
        classify(&p)?
    } else {
        classify_morse_branch(&p)?
    };
    let report = find_extrema_report(&p)?;
    let (a, b, c, q) = (p.a, p.b, p.c, p.q);
    let mut flags: Vec<(&str, bool)> = vec![
        ("a_above_blue_green", a > boundary_blue_green(b, c, q)),
        ("b_above_red_grey", b > boundary_red_grey(a, c)),
    ];
    if b >= 0.0 {
        flags.push(("a_above_green_red", a > boundary_green_red(b, c, q)?));
    }
    let admissible = a >= tra_limit(q, p.lambda);

    let text = match output.format {
        Format::Csv => {
            let mut t = Table::new(vec!["key", "value"]);
            let mut push = |k: String, v: Cell| t.rows.push(vec![Cell::Text(k), v]);
            push("class".into(), Cell::Text(class.to_string()));
            push("extrema".into(), Cell::Int(report.extrema.len()));
            for (i, e) in report.extrema.iter().enumerate() {
                push(format!("extremum{i}_kind"), Cell::Text(format!("{:?}", e.kind).to_lowercase()));
                push(format!("extremum{i}_x0"), Cell::Num(e.x0));
                push(format!("extremum{i}_z0"), Cell::Num(e.z0));
                push(format!("extremum{i}_value"), Cell::Num(e.value));
            }
            push("boundary_degenerate".into(), Cell::Bool(report.boundary_degenerate));
            push("merged_root".into(), Cell::Bool(report.merged_root));
            for (k, v) in &flags {
                push((*k).into(), Cell::Bool(*v));
            }
            push("tra_admissible".into(), Cell::Bool(admissible));
            t.render(Format::Csv)
        }
        Format::Json => {
            let extrema: Vec<Value> = report
                .extrema
                .iter()
                .map(|e| {
                    json!({
                        "kind": format!("{:?}", e.kind).to_lowercase(),
                        "x0": Cell::Num(e.x0).json(),
                        "z0": Cell::Num(e.z0).json(),
                        "value": Cell::Num(e.value).json(),
                    })
                })
                .collect();
            let mut ineq = Map::new();
            for (k, v) in &flags {
                ineq.insert((*k).into(), json!(v));
            }
            let v = json!({
                "class": class.to_string(),
                "extrema": extrema,
                "boundary_degenerate": report.boundary_degenerate,
                "merged_root": report.merged_root,
                "inequalities": ineq,
                "tra_admissible": admissible,
            });
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
    };
    emit(&text, &output.out, stdout)
}

fn q_values(args: &PhaseArgs) -> Result<Vec<f64>, Failure> {
    match (&args.q_sweep, args.q) {
        (Some(s), _) => {
            let v = parse_list(s)?;
            let [start, stop, step] = v[..] else {
                return Err(Failure::Usage("--q-sweep expects start,stop,step".into()));
            };
            if !(step > 0.0) || stop < start {
                return Err(Failure::Usage("--q-sweep needs step > 0 and stop >= start".into()));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + step * i as f64).collect())
        }
        (None, Some(q)) => Ok(vec![q]),
        (None, None) => Err(Failure::Usage("either --q or --q-sweep is required".into())),
    }
}

fn cmd_phase_diagram(args: &PhaseArgs, stdout: &mut dyn Write) -> CmdResult {
    let qs = q_values(args)?;
    let c = args.c;
    let mut bounds = Table::new(vec!["q", "curve", "a_over_c", "b_over_c"]);
    for &q in &qs {
        let grid = phase_diagram_grid(
            (args.a_min, args.a_max),
            (args.b_min, args.b_max),
            args.na,
            args.nb,
            c,
            q,
            args.lambda,
        )?;
        let mut t = Table::new(vec!["a_over_c", "b_over_c", "class"]);
        for (i, &a) in grid.a_over_c.iter().enumerate() {
            for (j, &b) in grid.b_over_c.iter().enumerate() {
                t.rows.push(vec![Cell::Num(a), Cell::Num(b), Cell::Text(grid.get(i, j).to_string())]);
            }
        }
        let name = format!("phase_q{}.{}", fmt_num(q), args.format.extension());
        let path = args.out.join(&name);
        write_file(&path, &t.render(args.format))?;
        writeln!(stdout, "{}", path.display())?;

        let row = |curve: &str, a: f64, b: f64| {
            vec![Cell::Num(q), Cell::Text(curve.into()), Cell::Num(a), Cell::Num(b)]
        };
        for b in linspace(args.b_min, args.b_max, args.nb) {
            bounds.rows.push(row("blue_green", boundary_blue_green(b * c, c, q) / c, b));
        }
        if args.b_max >= 0.0 {
            for b in linspace(args.b_min.max(0.0), args.b_max, args.nb) {
                bounds.rows.push(row("green_red", boundary_green_red(b * c, c, q)? / c, b));
            }
            for b in linspace(args.b_min.max(0.0), args.b_max, args.nb) {
                bounds.rows.push(row("min_zero", boundary_min_zero(b * c, c, q)? / c, b));
            }
        }
        if args.a_min <= 0.0 {
            for a in linspace(args.a_min, args.a_max.min(0.0), args.na) {
                bounds.rows.push(row("red_grey", a, boundary_red_grey(a * c, c) / c));
            }
        }
        let limit = tra_limit(q, args.lambda) / c;
        for b in linspace(args.b_min, args.b_max, args.nb) {
            bounds.rows.push(row("tra_limit", limit, b));
        }
    }
    let path = args.out.join(format!("boundaries.{}", args.format.extension()));
    write_file(&path, &bounds.render(args.format))?;
    writeln!(stdout, "{}", path.display())?;
    Ok(())
}

fn choose_gamma(p: &PotentialParams, solver: &SolverArgs) -> Result<f64, Failure> {
    match solver.gamma {
        Some(g) => Ok(g),
        None => Ok(plateau_scan(p, solver.basis_size, &default_gamma_grid())?.best_gamma()),
    }
}

fn pps_default(p: &PotentialParams, m_points: usize) -> Result<Option<PpsConfig>, Failure> {
    Ok(PpsConfig::default_window(p)?.map(|(lo, hi)| PpsConfig {
        m_points,
        ..PpsConfig::new(lo, hi)
    }))
}

fn run_pps_spectrum(p: &PotentialParams, m_points: usize) -> Result<Spectrum, Failure> {
    match pps_default(p, m_points)? {
        Some(cfg) => Ok(pps_spectrum(p, &cfg)?),
        None => Ok(Spectrum::from_levels(crate::Method::Pps, *p, Vec::new())),
    }
}

fn cmd_spectrum(args: &SpectrumArgs, stdout: &mut dyn Write) -> CmdResult {
    let p = args.potential.params()?;
    let method = args.method.unwrap_or(if p.c > 0.0 {
        SpectrumMethod::Nhd
    } else {
        SpectrumMethod::Diag
    });
    let spectrum = match method {
        SpectrumMethod::Diag => diag_spectrum(&p)?,
        SpectrumMethod::Nhd => {
            let gamma = choose_gamma(&p, &args.solver)?;
            nhd_spectrum(&p, &NhdConfig::new(args.solver.basis_size, gamma))?
        }
        SpectrumMethod::Pps => run_pps_spectrum(&p, args.solver.m_points)?,
        SpectrumMethod::Fdm => {
            let mut cfg = FdmConfig::new(args.x_min, args.x_max, args.n_points);
            cfg.richardson = !args.no_richardson;
            fdm_spectrum(&p, &cfg)?
        }
    };
    let mut t = Table::new(vec!["method", "level", "energy", "diagnostics"]);
    for l in &spectrum.levels {
        t.rows.push(vec![
            Cell::Text(spectrum.method.to_string()),
            Cell::Int(l.index),
            Cell::Num(l.energy),
            Cell::Text(l.diagnostics_string()),
        ]);
    }
    emit(&t.render(args.output.format), &args.output.out, stdout)
}

fn requested_levels(args: &WavefunctionArgs) -> Result<Vec<usize>, Failure> {
    if let Some(l) = args.level {
        return Ok(vec![l]);
    }
    match &args.levels {
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::Usage(format!("cannot parse '{t}' as a level")))
            })
            .collect(),
        None => Ok(vec![0]),
    }
}

fn out_of_range(level: usize, available: usize) -> Failure {
    Failure::Lib(Error::Domain(format!(
        "level {level} requested but only {available} bound levels are available"
    )))
}

fn cmd_wavefunction(args: &WavefunctionArgs, stdout: &mut dyn Write) -> CmdResult {
    let p = args.potential.params()?;
    let levels = requested_levels(args)?;
    if args.x_points < 2 || !(args.x_min < args.x_max) {
        return Err(Failure::Usage("the x grid needs x_min < x_max and at least 2 points".into()));
    }
    let xs = linspace(args.x_min, args.x_max, args.x_points);
    let mut curves: Vec<(usize, Vec<f64>, Vec<f64>)> = Vec::new();
    match args.method {
        WaveMethod::Pps => {
            let spectrum = run_pps_spectrum(&p, args.solver.m_points)?;
            for &m in &levels {
                let e = spectrum.levels.get(m).ok_or_else(|| out_of_range(m, spectrum.len()))?.energy;
                curves.push((m, xs.clone(), pps_wavefunction(&p, e, &xs)?));
            }
        }
        WaveMethod::Nhd => {
            let gamma = choose_gamma(&p, &args.solver)?;
            let cfg = NhdConfig::new(args.solver.basis_size, gamma);
            let (spectrum, coeffs) = nhd_states(&p, &cfg)?;
            for &m in &levels {
                if m >= spectrum.len() {
                    return Err(out_of_range(m, spectrum.len()));
                }
                let c: Vec<f64> = coeffs.column(m).iter().copied().collect();
                curves.push((m, xs.clone(), nhd_wavefunction(&p, &cfg, &c, &xs)?));
            }
        }
        WaveMethod::Fdm => {
            let cfg = FdmConfig::new(args.x_min, args.x_max, args.x_points.saturating_sub(2)).fixed();
            for &m in &levels {
                let (x, psi) = fdm_wavefunction(&p, &cfg, m)?;
                curves.push((m, x, psi));
            }
        }
    }
    for (m, x, psi) in curves {
        let mut t = Table::new(vec!["x", "psi"]);
        for (a, b) in x.iter().zip(&psi) {
            t.rows.push(vec![Cell::Num(*a), Cell::Num(*b)]);
        }
        let path = args.out.join(format!("psi_level{m}.{}", args.format.extension()));
        write_file(&path, &t.render(args.format))?;
        writeln!(stdout, "{}", path.display())?;
    }
    Ok(())
}

fn cmd_pps_table(args: &PpsTableArgs, stdout: &mut dyn Write) -> CmdResult {
    let p = args.potential.params()?;
    let mut t = Table::new(vec!["energy", "rank", "b_value"]);
    let window = match (args.e_min, args.e_max) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (lo, hi) => PpsConfig::default_window(&p)?.map(|(dlo, dhi)| (lo.unwrap_or(dlo), hi.unwrap_or(dhi))),
    };
    if let Some((lo, hi)) = window {
        let cfg = PpsConfig {
            m_points: args.m_points,
            ..PpsConfig::new(lo, hi)
        };
        match pps_scan(&p, &cfg) {
            Ok(table) => {
                for row in &table.rows {
                    for (n, b) in row.b_values.iter().enumerate() {
                        t.rows.push(vec![Cell::Num(row.energy), Cell::Int(n), Cell::Num(*b)]);
                    }
                }
            }
            Err(Error::EmptyTable) => {}
            Err(e) => return Err(e.into()),
        }
    }
    emit(&t.render(args.output.format), &args.output.out, stdout)
}

fn cmd_plateau(args: &PlateauArgs, stdout: &mut dyn Write) -> CmdResult {
    let p = args.potential.params()?;
    let gammas = match &args.gammas {
        Some(s) => parse_list(s)?,
        None => default_gamma_grid(),
    };
    let scan = plateau_scan(&p, args.basis_size, &gammas)?;
    let mut t = Table::new(vec!["gamma", "level", "energy", "score", "recommended"]);
    for row in &scan.rows {
        let rec = scan.recommended == Some(row.gamma);
        if row.spectrum.is_empty() {
            t.rows.push(vec![Cell::Num(row.gamma), Cell::Empty, Cell::Empty, Cell::Num(row.score), Cell::Bool(rec)]);
        }
        for l in &row.spectrum.levels {
            t.rows.push(vec![
                Cell::Num(row.gamma),
                Cell::Int(l.index),
                Cell::Num(l.energy),
                Cell::Num(row.score),
                Cell::Bool(rec),
            ]);
        }
    }
    emit(&t.render(args.output.format), &args.output.out, stdout)
}

fn configure_threads() -> CmdResult {
    let Ok(raw) = std::env::var("MORSEKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("MORSEKIT_THREADS = '{raw}' is not a positive integer")))?;
    // a pool that already exists (repeated calls in one process) is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(stderr, "error: usage: {first}");
            return EXIT_USAGE;
        }
    };
    let result = configure_threads().and_then(|_| match &cli.command {
        Command::Classify { potential, output } => cmd_classify(potential, output, stdout),
        Command::PhaseDiagram(a) => cmd_phase_diagram(a, stdout),
        Command::Spectrum(a) => cmd_spectrum(a, stdout),
        Command::Wavefunction(a) => cmd_wavefunction(a, stdout),
        Command::PpsTable(a) => cmd_pps_table(a, stdout),
        Command::Plateau(a) => cmd_plateau(a, stdout),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.line());
            f.exit_code()
        }
    }
}
