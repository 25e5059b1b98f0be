//! Command-line driver: correlator tables from exact diagonalization, the
//! integral equations and the closed forms, verification reports and
//! finite-size plot data.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use irfcorr::density_correlators::{correlators_from_jet, Correlator, CorrelatorTable};
use irfcorr::exact_diag::{correlators_ed, seeded_qkz_case, verify_qkz, GroundState, ED_MAX_LENGTH};
use irfcorr::face_model::SpectralPoint;
use irfcorr::nlie_solver::{
    solve_aux, RapidityGrid, DEFAULT_MAX_ITER, DEFAULT_N_POINTS, DEFAULT_SHIFT, DEFAULT_TOL, DEFAULT_X_MAX,
};
use irfcorr::omega::{omega_jet, verify_omega_fe, EdOmega, NlieOmega};
use irfcorr::thermo_limit::{difference_equation_residual, thermo_jet};
use irfcorr::{ChainLength, Complex64};

pub const CSV_HEADER: [&str; 7] = ["L", "x1", "x1x2", "x1x2x3", "x1x3", "y1y3", "method"];
pub const VERIFY_HEADER: [&str; 6] = ["L", "check", "method", "residual", "threshold", "pass"];

/// Tolerances of the table command against the reference rows.
pub const ED_TOL: f64 = 1e-8;
pub const NLIE_TOL: f64 = 1e-6;
/// The thermodynamic reference row is quoted to 8 decimals.
pub const THERMO_TOL: f64 = 1e-8;

pub const QKZ_THRESHOLD: f64 = 1e-9;
pub const FE_ED_THRESHOLD: f64 = 1e-9;
pub const FE_NLIE_THRESHOLD: f64 = 1e-8;
pub const FE_THERMO_THRESHOLD: f64 = 1e-12;

/// Reference correlators (x1, x1x2, x1x2x3, x1x3, y1y3) quoted to 8 decimals.
pub const REFERENCE_ROWS: [(ChainLength, [f64; 5]); 11] = [
    (
        ChainLength::Finite(4),
        [-0.66666667, 0.33333333, -0.66666667, 1.00000000, 0.66666667],
    ),
    (
        ChainLength::Finite(8),
        [-0.60851556, 0.26103720, -0.25193710, 0.55630211, 0.21746487],
    ),
    (
        ChainLength::Finite(12),
        [-0.59859899, 0.25044371, -0.22109565, 0.51802986, 0.18542814],
    ),
    (
        ChainLength::Finite(16),
        [-0.59519136, 0.24696584, -0.21183645, 0.50601523, 0.17583391],
    ),
    (
        ChainLength::Finite(32),
        [-0.59193864, 0.24374937, -0.20358916, 0.49500263, 0.16727766],
    ),
    (
        ChainLength::Finite(64),
        [-0.59113127, 0.24297329, -0.20163433, 0.49232982, 0.16524315],
    ),
    (
        ChainLength::Finite(128),
        [-0.59092994, 0.24278223, -0.20115366, 0.49166622, 0.16474172],
    ),
    (
        ChainLength::Finite(256),
        [-0.59087965, 0.24273481, -0.20103420, 0.49150058, 0.16461694],
    ),
    (
        ChainLength::Finite(512),
        [-0.59086709, 0.24272301, -0.20100442, 0.49145918, 0.16458580],
    ),
    (
        ChainLength::Finite(1024),
        [-0.59086395, 0.24272006, -0.20099698, 0.49144884, 0.16457802],
    ),
    (
        ChainLength::Infinite,
        [-0.59086290, 0.24271907, -0.20099450, 0.49144539, 0.16457543],
    ),
];

pub fn reference_row(length: ChainLength) -> Option<[f64; 5]> {
    REFERENCE_ROWS.iter().find(|(l, _)| *l == length).map(|(_, v)| *v)
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("L = {length}, {stage}: {source}")]
    Job {
        length: ChainLength,
        stage: &'static str,
        #[source]
        source: irfcorr::Error,
    },
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Table,
    Ed,
    Nlie,
    Thermo,
    VerifyQkz,
    VerifyOmegaFe,
    Figure5,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Csv,
}

/// A chain length as given on the command line: an even integer or `inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LengthArg(pub ChainLength);

impl FromStr for LengthArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if matches!(s, "inf" | "∞" | "infinity") {
            return Ok(Self(ChainLength::Infinite));
        }
        let l: usize = s
            .parse()
            .map_err(|_| format!("`{s}` is neither an integer nor `inf`"))?;
        if l == 0 || !l.is_multiple_of(2) {
            return Err(format!("chain length {l} must be even and positive"));
        }
        Ok(Self(ChainLength::Finite(l)))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "irfcorr",
    version,
    about = "Short-distance correlators of the IRF six-vertex model"
)]
pub struct Cli {
    #[arg(long, value_enum)]
    pub command: Command,
    /// Comma-separated even lengths; `inf` selects the thermodynamic limit.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Option<Vec<LengthArg>>,
    #[arg(long, default_value_t = DEFAULT_X_MAX)]
    pub x_max: f64,
    #[arg(long, default_value_t = DEFAULT_N_POINTS)]
    pub n_points: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for the qKZ inhomogeneity draws.
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
}

/// Validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub lengths: Vec<ChainLength>,
    pub grid: RapidityGrid,
    pub tol: f64,
    pub max_iter: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

fn finite(ls: &[usize]) -> Vec<ChainLength> {
    ls.iter().map(|&l| ChainLength::Finite(l)).collect()
}

pub fn default_lengths(command: Command) -> Vec<ChainLength> {
    match command {
        Command::Table => REFERENCE_ROWS.iter().map(|(l, _)| *l).collect(),
        Command::Ed => finite(&[4, 8, 12]),
        Command::Nlie | Command::Figure5 => finite(&[16, 32, 64, 128, 256, 512, 1024]),
        Command::Thermo => vec![ChainLength::Infinite],
        Command::VerifyQkz => finite(&[4, 8]),
        Command::VerifyOmegaFe => vec![
            ChainLength::Finite(4),
            ChainLength::Finite(8),
            ChainLength::Finite(12),
            ChainLength::Infinite,
        ],
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> CliResult<Self> {
        let lengths: Vec<ChainLength> = match cli.lengths {
            Some(v) if !v.is_empty() => v.into_iter().map(|l| l.0).collect(),
            _ => default_lengths(cli.command),
        };
        let grid =
            RapidityGrid::new(cli.x_max, cli.n_points, DEFAULT_SHIFT).map_err(|e| CliError::Config(e.to_string()))?;
        if cli.tol.is_nan() || cli.tol <= 0.0 || cli.max_iter == 0 {
            return Err(CliError::Config("--tol must be positive and --max-iter nonzero".into()));
        }
        let finite_only = |what: &str| -> CliResult<()> {
            if lengths.contains(&ChainLength::Infinite) {
                return Err(CliError::Config(format!("{what} needs finite lengths")));
            }
            Ok(())
        };
        match cli.command {
            Command::Ed => {
                finite_only("ed")?;
                if let Some(l) = lengths.iter().find(|l| **l > ChainLength::Finite(ED_MAX_LENGTH)) {
                    return Err(CliError::Config(format!(
                        "exact diagonalization is limited to L ≤ {ED_MAX_LENGTH}, got {l}"
                    )));
                }
            }
            Command::Nlie => finite_only("nlie")?,
            Command::Thermo => {
                if lengths.iter().any(|l| *l != ChainLength::Infinite) {
                    return Err(CliError::Config("thermo only accepts `inf`".into()));
                }
            }
            Command::VerifyQkz => {
                if let Some(l) = lengths
                    .iter()
                    .find(|l| !matches!(l, ChainLength::Finite(4) | ChainLength::Finite(8)))
                {
                    return Err(CliError::Config(format!(
                        "verify-qkz supports L ∈ {{4, 8}} only (the supported verification set), got {l}"
                    )));
                }
            }
            Command::Figure5 => {
                finite_only("figure5")?;
                if lengths.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(CliError::Config("figure5 lengths must be strictly ascending".into()));
                }
            }
            Command::Table | Command::VerifyOmegaFe => {}
        }
        Ok(Self {
            command: cli.command,
            lengths,
            grid,
            tol: cli.tol,
            max_iter: cli.max_iter,
            format: cli.format,
            out: cli.out,
            seed: cli.seed,
        })
    }
}

// ---- computations ------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Ed,
    Nlie,
    Thermo,
    /// ED minus NLIE.
    EdMinusNlie,
    /// c_L / c_∞ from an ED table.
    EdRatio,
    /// c_L / c_∞ from an NLIE table.
    NlieRatio,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ed => "ed",
            Method::Nlie => "nlie",
            Method::Thermo => "thermo",
            Method::EdMinusNlie => "ed-nlie",
            Method::EdRatio => "ed-ratio",
            Method::NlieRatio => "nlie-ratio",
        })
    }
}

/// One output row: the five table correlators for one length and method.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub length: ChainLength,
    pub values: [f64; 5],
    pub method: Method,
}

impl Row {
    fn from_table(t: &CorrelatorTable, method: Method) -> Self {
        let mut values = [0.0; 5];
        for (v, c) in values.iter_mut().zip(Correlator::TABLE) {
            *v = t.get(c).unwrap_or(f64::NAN);
        }
        Self {
            length: t.length,
            values,
            method,
        }
    }
}

fn ed_table(l: usize) -> CliResult<CorrelatorTable> {
    correlators_ed(l).map_err(|source| CliError::Job {
        length: ChainLength::Finite(l),
        stage: "exact diagonalization",
        source,
    })
}

fn nlie_table(l: usize, cfg: &RunConfig) -> CliResult<CorrelatorTable> {
    let length = ChainLength::Finite(l);
    let aux = solve_aux(l, &cfg.grid, cfg.tol, cfg.max_iter).map_err(|source| CliError::Job {
        length,
        stage: "auxiliary functions",
        source,
    })?;
    let jet = omega_jet(&aux).map_err(|source| CliError::Job {
        length,
        stage: "omega jet",
        source,
    })?;
    Ok(correlators_from_jet(&jet))
}

fn thermo_table() -> CorrelatorTable {
    correlators_from_jet(&thermo_jet())
}

/// Runs one job per length concurrently and returns the results in input order.
fn per_length<T: Send>(lengths: &[ChainLength], job: impl Fn(ChainLength) -> CliResult<T> + Sync) -> CliResult<Vec<T>> {
    let job = &job;
    let results: Vec<CliResult<T>> = std::thread::scope(|s| {
        let handles: Vec<_> = lengths.iter().map(|&l| s.spawn(move || job(l))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}

/// A reference entry missed by more than its tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Miss {
    pub length: String,
    pub method: String,
    pub column: &'static str,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Default)]
pub struct TableReport {
    pub rows: Vec<Row>,
    pub misses: Vec<Miss>,
}

fn check_row(row: &Row, tol: f64, misses: &mut Vec<Miss>) {
    let Some(reference) = reference_row(row.length) else {
        return;
    };
    for ((&v, r), c) in row.values.iter().zip(reference).zip(Correlator::TABLE) {
        let d = (v - r).abs();
        if d.is_nan() || d >= tol {
            misses.push(Miss {
                length: row.length.to_string(),
                method: row.method.to_string(),
                column: c.name(),
                value: v,
                reference: r,
                tolerance: tol,
            });
        }
    }
}

/// The table command: ED and NLIE for L ≤ 12 (with their difference), NLIE
/// beyond, closed forms for `inf`; every row with a reference is checked.
pub fn run_table(cfg: &RunConfig) -> CliResult<TableReport> {
    let blocks = per_length(&cfg.lengths, |l| -> CliResult<Vec<Row>> {
        Ok(match l {
            ChainLength::Infinite => vec![Row::from_table(&thermo_table(), Method::Thermo)],
            ChainLength::Finite(n) if n <= ED_MAX_LENGTH => {
                let ed = Row::from_table(&ed_table(n)?, Method::Ed);
                let nlie = Row::from_table(&nlie_table(n, cfg)?, Method::Nlie);
                let mut diff = ed.values;
                for (d, v) in diff.iter_mut().zip(nlie.values) {
                    *d -= v;
                }
                let diff = Row {
                    length: l,
                    values: diff,
                    method: Method::EdMinusNlie,
                };
                vec![ed, nlie, diff]
            }
            ChainLength::Finite(n) => vec![Row::from_table(&nlie_table(n, cfg)?, Method::Nlie)],
        })
    })?;
    let mut report = TableReport::default();
    for row in blocks.into_iter().flatten() {
        let tol = match row.method {
            Method::Ed => ED_TOL,
            Method::Nlie => NLIE_TOL,
            Method::Thermo => THERMO_TOL,
            _ => f64::INFINITY,
        };
        if tol.is_finite() {
            check_row(&row, tol, &mut report.misses);
        }
        report.rows.push(row);
    }
    Ok(report)
}

/// Single-method rows for the `ed`, `nlie` and `thermo` commands.
pub fn run_single(cfg: &RunConfig) -> CliResult<Vec<Row>> {
    per_length(&cfg.lengths, |l| match (cfg.command, l) {
        (Command::Ed, ChainLength::Finite(n)) => Ok(Row::from_table(&ed_table(n)?, Method::Ed)),
        (Command::Nlie, ChainLength::Finite(n)) => Ok(Row::from_table(&nlie_table(n, cfg)?, Method::Nlie)),
        (_, ChainLength::Infinite) => Ok(Row::from_table(&thermo_table(), Method::Thermo)),
        _ => Err(CliError::Config(format!("{:?} cannot run at L = {l}", cfg.command))),
    })
}

/// Finite-size rows normalized by the thermodynamic values.
pub fn run_figure5(cfg: &RunConfig) -> CliResult<Vec<Row>> {
    let inf = Row::from_table(&thermo_table(), Method::Thermo);
    if let Some((v, c)) = inf.values.iter().zip(Correlator::TABLE).find(|(v, _)| v.abs() < 1e-14) {
        return Err(CliError::Config(format!(
            "thermodynamic {c} = {v} is too small to normalize by"
        )));
    }
    per_length(&cfg.lengths, |l| {
        let ChainLength::Finite(n) = l else {
            return Err(CliError::Config("figure5 needs finite lengths".into()));
        };
        let (t, method) = if n <= ED_MAX_LENGTH {
            (ed_table(n)?, Method::EdRatio)
        } else {
            (nlie_table(n, cfg)?, Method::NlieRatio)
        };
        let mut row = Row::from_table(&t, method);
        for (v, c) in row.values.iter_mut().zip(inf.values) {
            *v /= c;
        }
        Ok(row)
    })
}

/// One residual of a verification command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    #[serde(rename = "L")]
    pub length: String,
    pub check: String,
    pub method: &'static str,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Residual {
    fn new(length: ChainLength, check: String, method: &'static str, residual: f64, threshold: f64) -> Self {
        Self {
            length: length.to_string(),
            check,
            method,
            residual,
            threshold,
            pass: residual < threshold,
        }
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const FE_POINTS: [f64; 3] = [0.3, -0.2, -0.45];

fn qkz_residuals(l: usize, seed: u64) -> CliResult<Vec<Residual>> {
    let length = ChainLength::Finite(l);
    let job = |source| CliError::Job {
        length,
        stage: "qKZ verification",
        source,
    };
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let (u, lambdas) = seeded_qkz_case(l, n, seed.wrapping_add(n as u64));
        let u: Vec<Complex64> = u.into_iter().map(c).collect();
        let pts = lambdas
            .iter()
            .map(|&x| SpectralPoint::real(x))
            .collect::<Result<Vec<_>, _>>()
            .map_err(job)?;
        let r = verify_qkz(&pts, &u).map_err(job)?;
        out.push(Residual::new(length, format!("qkz n={n}"), "ed", r, QKZ_THRESHOLD));
    }
    Ok(out)
}

fn fe_residuals(l: ChainLength, cfg: &RunConfig) -> CliResult<Vec<Residual>> {
    let job = |source| CliError::Job {
        length: l,
        stage: "functional equation",
        source,
    };
    let mut out = Vec::new();
    match l {
        ChainLength::Infinite => {
            for x in FE_POINTS {
                let r = difference_equation_residual(x).map_err(job)?;
                out.push(Residual::new(l, format!("fe λ={x}"), "thermo", r, FE_THERMO_THRESHOLD));
            }
        }
        ChainLength::Finite(n) => {
            if n <= 8 {
                let mut ed = EdOmega(GroundState::homogeneous(n).map_err(job)?);
                for x in FE_POINTS {
                    let r = verify_omega_fe(&mut ed, c(x), c(0.0)).map_err(job)?;
                    out.push(Residual::new(l, format!("fe λ={x}"), "ed", r, FE_ED_THRESHOLD));
                }
            }
            if n >= 8 {
                let aux = solve_aux(n, &cfg.grid, cfg.tol, cfg.max_iter).map_err(job)?;
                let mut nlie = NlieOmega(&aux);
                for x in FE_POINTS {
                    let r = verify_omega_fe(&mut nlie, c(x), c(0.0)).map_err(job)?;
                    out.push(Residual::new(l, format!("fe λ={x}"), "nlie", r, FE_NLIE_THRESHOLD));
                }
            }
        }
    }
    Ok(out)
}

pub fn run_verify(cfg: &RunConfig) -> CliResult<Vec<Residual>> {
    let blocks = per_length(&cfg.lengths, |l| match (cfg.command, l) {
        (Command::VerifyQkz, ChainLength::Finite(n)) => qkz_residuals(n, cfg.seed),
        (Command::VerifyOmegaFe, _) => fe_residuals(l, cfg),
        _ => Err(CliError::Config(format!("no verification for L = {l}"))),
    })?;
    Ok(blocks.into_iter().flatten().collect())
}

// ---- output ------------------------------------------------------------------

/// Formats a value with 10 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.9e}")
    }
}

fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

#[derive(Serialize)]
struct JsonRow {
    #[serde(rename = "L")]
    length: String,
    x1: f64,
    x1x2: f64,
    x1x2x3: f64,
    x1x3: f64,
    y1y3: f64,
    method: String,
}

impl From<&Row> for JsonRow {
    fn from(r: &Row) -> Self {
        let v = r.values.map(round_sig);
        Self {
            length: r.length.to_string(),
            x1: v[0],
            x1x2: v[1],
            x1x2x3: v[2],
            x1x3: v[3],
            y1y3: v[4],
            method: r.method.to_string(),
        }
    }
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    command: &'static str,
    rows: Vec<JsonRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residuals: Option<Vec<Residual>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    misses: Option<&'a [Miss]>,
}

pub fn command_name(c: Command) -> &'static str {
    match c {
        Command::Table => "table",
        Command::Ed => "ed",
        Command::Nlie => "nlie",
        Command::Thermo => "thermo",
        Command::VerifyQkz => "verify-qkz",
        Command::VerifyOmegaFe => "verify-omega-fe",
        Command::Figure5 => "figure5",
    }
}

pub fn write_rows<W: Write>(
    w: W,
    rows: &[Row],
    format: Format,
    command: Command,
    misses: Option<&[Miss]>,
) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(CSV_HEADER)?;
            for r in rows {
                let mut rec: Vec<String> = vec![r.length.to_string()];
                rec.extend(r.values.iter().map(|&v| fmt_sig(v)));
                rec.push(r.method.to_string());
                out.write_record(&rec)?;
            }
            out.flush()?;
        }
        Format::Json => {
            let doc = JsonOutput {
                command: command_name(command),
                rows: rows.iter().map(JsonRow::from).collect(),
                residuals: None,
                misses,
            };
            write_json(w, &doc)?;
        }
    }
    Ok(())
}

pub fn write_residuals<W: Write>(w: W, residuals: &[Residual], format: Format, command: Command) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(VERIFY_HEADER)?;
            for r in residuals {
                out.write_record([
                    r.length.clone(),
                    r.check.clone(),
                    r.method.to_string(),
                    fmt_sig(r.residual),
                    fmt_sig(r.threshold),
                    r.pass.to_string(),
                ])?;
            }
            out.flush()?;
        }
        Format::Json => {
            let rounded: Vec<Residual> = residuals
                .iter()
                .map(|r| Residual {
                    residual: round_sig(r.residual),
                    ..r.clone()
                })
                .collect();
            let doc = JsonOutput {
                command: command_name(command),
                rows: Vec::new(),
                residuals: Some(rounded),
                misses: None,
            };
            write_json(w, &doc)?;
        }
    }
    Ok(())
}

fn write_json<W: Write, T: Serialize>(mut w: W, doc: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)?;
    Ok(())
}

/// Outcome of a run: whether every check passed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

fn sink(cfg: &RunConfig) -> CliResult<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

/// Runs a validated configuration, writing results to the configured sink.
/// Failed checks are summarized on standard error.
pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    match cfg.command {
        Command::Table => {
            let report = run_table(cfg)?;
            write_rows(sink(cfg)?, &report.rows, cfg.format, cfg.command, Some(&report.misses))?;
            for m in &report.misses {
                eprintln!(
                    "MISS L={} {} {}: {} vs reference {} (tolerance {:e})",
                    m.length, m.method, m.column, m.value, m.reference, m.tolerance
                );
            }
            Ok(if report.misses.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
        Command::Ed | Command::Nlie | Command::Thermo => {
            let rows = run_single(cfg)?;
            write_rows(sink(cfg)?, &rows, cfg.format, cfg.command, None)?;
            Ok(Outcome::Pass)
        }
        Command::Figure5 => {
            let rows = run_figure5(cfg)?;
            write_rows(sink(cfg)?, &rows, cfg.format, cfg.command, None)?;
            Ok(Outcome::Pass)
        }
        Command::VerifyQkz | Command::VerifyOmegaFe => {
            let res = run_verify(cfg)?;
            write_residuals(sink(cfg)?, &res, cfg.format, cfg.command)?;
            for r in res.iter().filter(|r| !r.pass) {
                eprintln!(
                    "FAIL L={} {} ({}): {:e} ≥ {:e}",
                    r.length, r.check, r.method, r.residual, r.threshold
                );
            }
            Ok(if res.iter().all(|r| r.pass) {
                Outcome::Pass
            } else {
                Outcome::Fail
            })
        }
    }
}
