//! Command-line front end: argument parsing, fractal loading, dispatch and
//! result envelopes.

mod commands;

use crate::error::{Error, Result};
use crate::ifs::{presets, FractalFile, NestedFractal, DEFAULT_BUDGET};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "fractal-triple", version, about = "Spectral triples on nested fractals")]
pub struct Cli {
    /// Maximum number of oriented edges any graph approximation may carry.
    #[arg(long, global = true, env = "FRACTAL_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the result here (atomically) instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

/// Fractal source: a preset name, a JSON file, or `-` for stdin.
#[derive(Debug, Clone, Args)]
pub struct Source {
    /// gasket | gasket3 | vicsek | interval | rhombic-vicsek:<theta> | FILE | -
    pub fractal: String,
}

/// How a function on the fractal is specified.
#[derive(Debug, Clone, Default, Args)]
pub struct FunctionArgs {
    /// Harmonic extension of boundary values (comma separated, one per V_0 vertex).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub boundary: Option<Vec<f64>>,

    /// The i-th ambient coordinate.
    #[arg(long)]
    pub coordinate: Option<usize>,

    /// Indicator of the cell w_τ(K); word as `1,2` or `12`.
    #[arg(long)]
    pub cell: Option<String>,

    /// CSV of `x1,…,xN,value` rows.
    #[arg(long)]
    pub values: Option<PathBuf>,

    /// Named function: `x0`, `x1`, … (coordinates) or `one`.
    #[arg(long)]
    pub function: Option<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Summary of the fractal: V_0, E_0, nesting check.
    Info {
        #[command(flatten)]
        source: Source,
        /// Level at which the nesting condition is checked.
        #[arg(long, default_value_t = 1)]
        level: usize,
    },
    /// Metric dimension log k / log(1/λ).
    Dim {
        #[command(flatten)]
        source: Source,
    },
    /// Zeta function at s = re + i·im.
    Zeta {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_negative_numbers = true)]
        re: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        im: f64,
        /// Also sum the level series up to this level (needs Re s > d).
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Complex dimensions and residues.
    Spectrum {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = -3, allow_negative_numbers = true)]
        n_min: i64,
        #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
        n_max: i64,
    },
    /// Noncommutative integral of a cell indicator or a sampled function.
    Integrate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        function: FunctionArgs,
        /// Graph level used for quadrature.
        #[arg(long, default_value_t = 6)]
        level: usize,
    },
    /// Renormalization eigenform by iteration of the trace map.
    Eigenform {
        #[command(flatten)]
        source: Source,
        /// Initial conductances as CSV `p,q,c` (defaults to all ones).
        #[arg(long, conflicts_with = "random")]
        init: Option<PathBuf>,
        /// Start from random positive conductances drawn with `--seed`.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = crate::energy::EIGENFORM_TOL)]
        tol: f64,
        #[arg(long, default_value_t = crate::energy::EIGENFORM_MAX_ITER)]
        max_iter: usize,
    },
    /// Renormalized energies ρ^{-n} S_n(ℰ)[f].
    Energy {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
    },
    /// Residue of the commutator zeta function at the energy dimension.
    Residue {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.03, 0.01])]
        eps: Vec<f64>,
        /// Deepest level; defaults to the largest n with kⁿ·|E_0| ≤ 10⁶.
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Graph distances d_n(x, y) and their limit.
    Distance {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y: Vec<f64>,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        /// Include the witness geodesic at the finest level.
        #[arg(long)]
        path: bool,
    },
    /// Whether boundary edges split into level-1 edges.
    SubdivisionCheck {
        #[command(flatten)]
        source: Source,
    },
    /// Lipschitz seminorm of a function on V_n for d_n.
    Lip {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, default_value_t = 4)]
        level: usize,
    },
    /// Table of sup-over-levels Lipschitz quotients.
    Esslip {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, default_value_t = 0)]
        nmin: usize,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
    },
    /// Vicsek eigenform data, from the rhombus half-angle θ or from
    /// functional weights (a, f, g).
    Vicsek {
        #[arg(
            long,
            allow_negative_numbers = true,
            required_unless_present = "lengths",
            conflicts_with = "lengths"
        )]
        theta: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        lengths: Option<Vec<f64>>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Info { .. } => "info",
            Command::Dim { .. } => "dim",
            Command::Zeta { .. } => "zeta",
            Command::Spectrum { .. } => "spectrum",
            Command::Integrate { .. } => "integrate",
            Command::Eigenform { .. } => "eigenform",
            Command::Energy { .. } => "energy",
            Command::Residue { .. } => "residue",
            Command::Distance { .. } => "distance",
            Command::SubdivisionCheck { .. } => "subdivision-check",
            Command::Lip { .. } => "lip",
            Command::Esslip { .. } => "esslip",
            Command::Vicsek { .. } => "vicsek",
        }
    }

    fn source(&self) -> Option<&str> {
        match self {
            Command::Info { source, .. }
            | Command::Dim { source }
            | Command::Zeta { source, .. }
            | Command::Spectrum { source, .. }
            | Command::Integrate { source, .. }
            | Command::Eigenform { source, .. }
            | Command::Energy { source, .. }
            | Command::Residue { source, .. }
            | Command::Distance { source, .. }
            | Command::SubdivisionCheck { source }
            | Command::Lip { source, .. }
            | Command::Esslip { source, .. } => Some(&source.fractal),
            Command::Vicsek { .. } => None,
        }
    }
}

/// A parsed invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub budget: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        Self {
            command: cli.command,
            budget: cli.budget,
            format: cli.format,
            output: cli.output,
            seed: cli.seed,
        }
    }
}

/// Identifies the map data a result was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fingerprint {
    pub k: usize,
    pub lambda: f64,
    pub v0: usize,
    pub hash: String,
}

/// Quantum of the canonical rounding applied before hashing map data.
const FINGERPRINT_QUANTUM: f64 = 1e-15;

impl Fingerprint {
    pub fn of(fractal: &NestedFractal) -> Self {
        let mut hasher = Sha256::new();
        let mut put = |x: f64| {
            let q = (x / FINGERPRINT_QUANTUM).round();
            // normalise -0
            let q = if q == 0.0 { 0.0 } else { q };
            hasher.update(q.to_le_bytes());
        };
        put(fractal.ambient_dim() as f64);
        for m in fractal.maps() {
            put(m.ratio());
            m.rotation().iter().for_each(|&x| put(x));
            m.translation().iter().for_each(|&x| put(x));
        }
        let digest = hasher.finalize();
        Self {
            k: fractal.k(),
            lambda: fractal.ratio(),
            v0: fractal.v0().len(),
            hash: digest.iter().take(16).map(|b| format!("{b:02x}")).collect(),
        }
    }
}

/// Plot-ready series emitted in CSV mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| fmt_num(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Output of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultEnvelope {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<Fingerprint>,
    pub values: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub wall_time_s: f64,
}

impl ResultEnvelope {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }

    /// The series table if the command produced one, `key,value` rows of
    /// the numeric values otherwise.
    pub fn to_csv(&self) -> String {
        if let Some(t) = &self.table {
            return t.to_csv();
        }
        let mut out = String::from("key,value\n");
        for (k, v) in &self.values {
            if let Some(x) = v.as_f64() {
                out.push_str(&format!("{k},{}\n", fmt_num(x)));
            }
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json() + "\n",
            Format::Csv => self.to_csv(),
        }
    }
}

/// Resolves a preset name, a JSON file path, or `-` (JSON on stdin).
pub fn load_fractal(source: &str) -> Result<NestedFractal> {
    if source == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        return FractalFile::from_json(&text)?.build();
    }
    let is_preset = presets::PRESET_NAMES.contains(&source) || source.starts_with("rhombic-vicsek:");
    if is_preset || !Path::new(source).exists() {
        return presets::preset(source);
    }
    FractalFile::from_json(&std::fs::read_to_string(source)?)?.build()
}

/// Runs one command and returns its envelope.
pub fn run(config: &RunConfig) -> Result<ResultEnvelope> {
    if config.budget == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    let start = Instant::now();
    let fractal = config.command.source().map(load_fractal).transpose()?;
    let outcome = commands::dispatch(config, fractal.as_ref())?;
    Ok(ResultEnvelope {
        command: config.command.name().to_string(),
        fingerprint: fractal.as_ref().map(Fingerprint::of),
        values: outcome.values,
        diagnostics: outcome.diagnostics,
        table: outcome.table,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_DATA,
    }
}

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let mut file = std::fs::File::create(&tmp)?;
    file.write_all(contents.as_bytes())?;
    file.sync_all()?;
    drop(file);
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Parses `args`, runs the command, prints or writes the result and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_DATA } else { EXIT_OK };
        }
    };
    let config = RunConfig::from(cli);
    let result = run(&config).and_then(|env| {
        let text = env.render(config.format);
        match &config.output {
            Some(path) => write_atomic(path, &text),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
