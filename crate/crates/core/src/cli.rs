//! Command-line front end.
//!
//! Every option can also come from a `--config FILE` of `key=value` lines
//! (keys are the long flag names without dashes, e.g. `er`, `twice-j`);
//! flags given on the command line win. Exit codes: 0 success, 2 validation
//! error, 1 internal error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::resonance::{
    canonical_state, make_pole, ArrowConvention, Half, Kind, Regime, ResonancePole,
};
use crate::scenario::{
    decay_table, lineshape, lineshape_table, linspace, run_decay, Output, Scenario, Table,
    TimeGrid,
};
use crate::semigroup::{branch_for, evolve, BranchId};
use crate::symmetry::{
    build_representation_with, check_conjugation_identities, verify_group_relations, CReading,
    ConjugationReport, GroupRelationReport, SpinJ,
};
use crate::transform::{cross_identify, derive_table, StateDescriptor};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArrowArg {
    Prep,
    Exc,
}

impl From<ArrowArg> for ArrowConvention {
    fn from(a: ArrowArg) -> Self {
        match a {
            ArrowArg::Prep => ArrowConvention::PREPARATION_REGISTRATION,
            ArrowArg::Exc => ArrowConvention::EXCITATION_DEEXCITATION,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Grow,
    Decay,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Grow => Kind::Growing,
            KindArg::Decay => Kind::Decaying,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadingArg {
    AntiDiagonal,
    Diagonal,
}

#[derive(Debug, Parser)]
#[command(name = "time-arrows", version, about = "Gamow-vector semigroups and time reversal")]
pub struct Cli {
    /// key=value file supplying defaults for any flag
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one state's evolution factor at a single time
    Evolve {
        #[command(flatten)]
        state: StateArgs,
        /// Time at which to evaluate (required)
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        /// Real part of the initial amplitude (default 1)
        #[arg(long, allow_hyphen_values = true)]
        amp_re: Option<f64>,
        /// Imaginary part of the initial amplitude (default 0)
        #[arg(long, allow_hyphen_values = true)]
        amp_im: Option<f64>,
    },
    /// Survival and factor over a time grid
    Decay {
        #[command(flatten)]
        state: StateArgs,
        /// Grid start (default 0 or -10, by branch domain)
        #[arg(long, allow_hyphen_values = true)]
        tmin: Option<f64>,
        /// Grid end (default 10 or 0, by branch domain)
        #[arg(long, allow_hyphen_values = true)]
        tmax: Option<f64>,
        /// Number of grid points, at least 2 (default 101)
        #[arg(long)]
        steps: Option<usize>,
        /// Comma-separated subset of survival,factor_real,factor_imag
        #[arg(long)]
        outputs: Option<String>,
    },
    /// Breit-Wigner density over an energy grid
    Lineshape {
        #[command(flatten)]
        pole: PoleArgs,
        /// Lowest energy (default E_R - 10 Γ)
        #[arg(long, allow_hyphen_values = true)]
        emin: Option<f64>,
        /// Highest energy (default E_R + 10 Γ)
        #[arg(long, allow_hyphen_values = true)]
        emax: Option<f64>,
        /// Number of energies (default 201)
        #[arg(long)]
        points: Option<usize>,
    },
    /// Derive the growing/decaying table for one arrow convention
    Table {
        /// Arrow convention (default prep)
        #[arg(long, value_enum)]
        arrow: Option<ArrowArg>,
    },
    /// Check group relations and conjugation identities of a co-representation
    RepCheck {
        /// Representation row, 1 to 4 (required)
        #[arg(long, allow_hyphen_values = true)]
        row: Option<i64>,
        /// Twice the spin, so 1 means j = 1/2 (required)
        #[arg(long)]
        twice_j: Option<u32>,
        /// Layout of the spin conjugation matrix (default anti-diagonal)
        #[arg(long, value_enum)]
        c_reading: Option<ReadingArg>,
    },
    /// Regime identification of an excitation/de-excitation decay branch
    CrossId {
        /// 5a or 5b
        branch: Option<String>,
    },
}

#[derive(Debug, Args)]
struct PoleArgs {
    /// Resonance energy E_R (default 1)
    #[arg(long, allow_hyphen_values = true)]
    er: Option<f64>,
    /// Resonance width Γ > 0 (default 0.2)
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
}

#[derive(Debug, Args)]
struct StateArgs {
    #[command(flatten)]
    pole: PoleArgs,
    /// Arrow convention (default prep)
    #[arg(long, value_enum)]
    arrow: Option<ArrowArg>,
    /// Growing or decaying state (default decay)
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Regime index r, 0 or 1 (default 0)
    #[arg(long, allow_hyphen_values = true)]
    regime: Option<i64>,
}

/// Parsed `key=value` config file.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("config line {}: expected key=value", n + 1))
            })?;
            let key = k.trim().trim_start_matches("--").replace('_', "-");
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Validation(format!("config: bad value for {key}: {v:?}")))
            })
            .transpose()
    }

    fn get_enum<T: ValueEnum>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.raw(key)
            .map(|v| {
                T::from_str(v, true)
                    .map_err(|_| CliError::Validation(format!("config: bad value for {key}: {v:?}")))
            })
            .transpose()
    }
}

fn pick<T: FromStr>(flag: Option<T>, cfg: &Config, key: &str) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

fn pick_enum<T: ValueEnum>(flag: Option<T>, cfg: &Config, key: &str) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get_enum(key),
    }
}

fn resolve_pole(args: &PoleArgs, cfg: &Config) -> Result<ResonancePole, CliError> {
    let er = pick(args.er, cfg, "er")?.unwrap_or(1.0);
    let gamma = pick(args.gamma, cfg, "gamma")?.unwrap_or(0.2);
    Ok(make_pole(er, gamma)?)
}

struct ResolvedState {
    pole: ResonancePole,
    arrow: ArrowConvention,
    kind: Kind,
    regime: Regime,
}

fn resolve_state(args: &StateArgs, cfg: &Config) -> Result<ResolvedState, CliError> {
    Ok(ResolvedState {
        pole: resolve_pole(&args.pole, cfg)?,
        arrow: pick_enum(args.arrow, cfg, "arrow")?
            .unwrap_or(ArrowArg::Prep)
            .into(),
        kind: pick_enum(args.kind, cfg, "kind")?
            .unwrap_or(KindArg::Decay)
            .into(),
        regime: Regime::new(pick(args.regime, cfg, "regime")?.unwrap_or(0))?,
    })
}

/// JSON document emitted by `decay`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayDocument {
    pub scenario: Scenario,
    pub branch: BranchId,
    #[serde(flatten)]
    pub table: Table,
}

/// JSON document emitted by `lineshape`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineshapeDocument {
    pub pole: ResonancePole,
    #[serde(flatten)]
    pub table: Table,
}

/// JSON document emitted by `evolve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveDocument {
    pub state: StateDescriptor,
    pub pole: ResonancePole,
    pub branch: BranchId,
    pub t: f64,
    pub amplitude: Complex64,
    pub factor_real: f64,
    pub factor_imag: f64,
    pub modulus: f64,
}

/// JSON document emitted by `rep-check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepCheckDocument {
    pub row: u8,
    pub twice_j: u32,
    pub c_reading: CReading,
    pub eps_r: i64,
    pub eps_t: i64,
    pub group_relations: GroupRelationReport,
    pub conjugation: ConjugationReport,
    pub all_pass: bool,
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(internal)?;
    s.push('\n');
    Ok(s)
}

fn unsupported(cmd: &str, format: Format) -> CliError {
    CliError::Validation(format!("{cmd} does not support --format {format:?}").to_lowercase())
}

/// Parses `args` (including the program name) and runs the command, writing
/// to `--out` or to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(stdout, "{e}").map_err(internal)?;
                return Ok(());
            }
            let msg = e.render().to_string();
            let msg = msg.strip_prefix("error: ").unwrap_or(&msg).trim_end();
            return Err(CliError::Validation(msg.to_string()));
        }
    };
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let format = pick_enum(cli.format, &cfg, "format")?;
    let text = render(&cli.command, &cfg, format)?;
    let out: Option<PathBuf> = match cli.out {
        Some(p) => Some(p),
        None => cfg.raw("out").map(PathBuf::from),
    };
    match out {
        Some(path) => fs::write(&path, text).map_err(|e| internal(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(internal),
    }
}

fn render(cmd: &Command, cfg: &Config, format: Option<Format>) -> Result<String, CliError> {
    match cmd {
        Command::Evolve {
            state,
            t,
            amp_re,
            amp_im,
        } => {
            let st = resolve_state(state, cfg)?;
            let t = pick(*t, cfg, "t")?
                .ok_or_else(|| CliError::Validation("evolve needs --t".into()))?;
            let amplitude = Complex64::new(
                pick(*amp_re, cfg, "amp-re")?.unwrap_or(1.0),
                pick(*amp_im, cfg, "amp-im")?.unwrap_or(0.0),
            );
            let s = canonical_state(st.arrow, st.kind, st.regime, st.pole).with_amplitude(amplitude);
            let f = evolve(&s, t)?.value;
            let doc = EvolveDocument {
                state: (&s).into(),
                pole: st.pole,
                branch: branch_for(&s).id(),
                t,
                amplitude,
                factor_real: f.re,
                factor_imag: f.im,
                modulus: f.norm(),
            };
            match format.unwrap_or(Format::Csv) {
                Format::Json => json(&doc),
                Format::Csv => Table {
                    columns: ["t", "factor_real", "factor_imag", "modulus"]
                        .map(String::from)
                        .to_vec(),
                    rows: vec![vec![t, f.re, f.im, f.norm()]],
                }
                .to_csv()
                .map_err(CliError::from),
                f => Err(unsupported("evolve", f)),
            }
        }
        Command::Decay {
            state,
            tmin,
            tmax,
            steps,
            outputs,
        } => {
            let st = resolve_state(state, cfg)?;
            let probe = canonical_state(st.arrow, st.kind, st.regime, st.pole);
            let branch = branch_for(&probe);
            let (dmin, dmax) = match branch.domain().half() {
                Half::Nonneg => (0.0, 10.0),
                Half::Nonpos => (-10.0, 0.0),
            };
            let grid = TimeGrid::new(
                pick(*tmin, cfg, "tmin")?.unwrap_or(dmin),
                pick(*tmax, cfg, "tmax")?.unwrap_or(dmax),
                pick(*steps, cfg, "steps")?.unwrap_or(101),
            )?;
            let mut scenario = Scenario::new(st.pole, st.arrow, st.kind, st.regime, grid);
            if let Some(list) = pick::<String>(outputs.clone(), cfg, "outputs")? {
                scenario.outputs = list
                    .split(',')
                    .map(Output::from_str)
                    .collect::<Result<_, _>>()?;
            }
            let table = decay_table(&scenario, &run_decay(&scenario)?);
            match format.unwrap_or(Format::Csv) {
                Format::Csv => Ok(table.to_csv()?),
                Format::Json => json(&DecayDocument {
                    scenario,
                    branch: branch.id(),
                    table,
                }),
                f => Err(unsupported("decay", f)),
            }
        }
        Command::Lineshape {
            pole,
            emin,
            emax,
            points,
        } => {
            let pole = resolve_pole(pole, cfg)?;
            let emin = pick(*emin, cfg, "emin")?.unwrap_or(pole.energy() - 10.0 * pole.width());
            let emax = pick(*emax, cfg, "emax")?.unwrap_or(pole.energy() + 10.0 * pole.width());
            let points = pick(*points, cfg, "points")?.unwrap_or(201);
            if !(emin <= emax) {
                return Err(CliError::Validation(format!(
                    "need emin <= emax, got [{emin}, {emax}]"
                )));
            }
            let table = lineshape_table(&lineshape(&pole, &linspace(emin, emax, points))?);
            match format.unwrap_or(Format::Csv) {
                Format::Csv => Ok(table.to_csv()?),
                Format::Json => json(&LineshapeDocument { pole, table }),
                f => Err(unsupported("lineshape", f)),
            }
        }
        Command::Table { arrow } => {
            let arrow: ArrowConvention = pick_enum(*arrow, cfg, "arrow")?
                .unwrap_or(ArrowArg::Prep)
                .into();
            let table = derive_table(arrow);
            match format.unwrap_or(Format::Json) {
                Format::Json => Ok(table.to_canonical_json() + "\n"),
                Format::Text => Ok(table.to_text()),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for cell in &table.cells {
                        w.serialize(cell).map_err(internal)?;
                    }
                    String::from_utf8(w.into_inner().map_err(internal)?).map_err(internal)
                }
            }
        }
        Command::RepCheck {
            row,
            twice_j,
            c_reading,
        } => {
            let row = pick(*row, cfg, "row")?
                .ok_or_else(|| CliError::Validation("rep-check needs --row".into()))?;
            let twice_j = pick(*twice_j, cfg, "twice-j")?
                .ok_or_else(|| CliError::Validation("rep-check needs --twice-j".into()))?;
            let reading = match pick_enum(*c_reading, cfg, "c-reading")? {
                Some(ReadingArg::Diagonal) => CReading::Diagonal,
                _ => CReading::AntiDiagonal,
            };
            if let Some(f @ (Format::Csv | Format::Text)) = format {
                return Err(unsupported("rep-check", f));
            }
            let rep = build_representation_with(row, SpinJ::from_twice(twice_j), reading)?;
            let group_relations = verify_group_relations(&rep);
            let conjugation = check_conjugation_identities(&rep);
            let all_pass = group_relations.all_hold && conjugation.all_pass;
            json(&RepCheckDocument {
                row: rep.row(),
                twice_j,
                c_reading: reading,
                eps_r: rep.eps_r(),
                eps_t: rep.eps_t(),
                group_relations,
                conjugation,
                all_pass,
            })
        }
        Command::CrossId { branch } => {
            let label = pick(branch.clone(), cfg, "branch")?
                .ok_or_else(|| CliError::Validation("cross-id needs a branch (5a or 5b)".into()))?;
            let id: BranchId = label.parse()?;
            let ident = cross_identify(id)?;
            match format.unwrap_or(Format::Json) {
                Format::Json => json(&ident),
                Format::Text => Ok(format!(
                    "{} -> r={} ({})\n",
                    ident.branch,
                    ident.regime.index(),
                    ident.provenance
                )),
                f => Err(unsupported("cross-id", f)),
            }
        }
    }
}
