//! Argument parsing, config merging, artifact and manifest persistence.

use crate::commands::{execute, COMMANDS};
use crate::config::{flag_value, RunConfig, OUT_DIR_ENV};
use crate::error::CliError;
use crate::records::Format;
use clap::parser::ValueSource;
use clap::{Arg, ArgAction, ArgMatches, Command};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const MANIFEST: &str = "manifest.json";
const GLOBAL: [&str; 7] = ["seed", "threads", "format", "out", "config", "replicas", "tol"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub core_version: String,
    pub config: RunConfig,
    pub artifacts: Vec<ArtifactEntry>,
}

fn param(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name).long(name).value_name("VALUE").allow_hyphen_values(true).help(help)
}

fn subcommand_params(name: &str) -> Vec<Arg> {
    match name {
        "sample" => vec![
            param("model", "plancherel | permutation | plane"),
            param("theta", "Poissonized Plancherel parameter"),
            param("n", "number of samples"),
            param("size", "permutation length"),
            param("a", "plane partition rows"),
            param("b", "plane partition columns"),
            param("q", "plane partition weight q^volume"),
            param("cutoff", "largest part considered by the plane partition sampler"),
        ],
        "kernel" => vec![
            param("kernel", "plancherel | sine | airy"),
            param("theta", "Plancherel parameter"),
            param("phi", "sine kernel angle in (0, π)"),
            param("sites", "lattice sites a:b or a comma list; site m stands for m + 1/2"),
            param("points", "Airy grid start:stop:step"),
        ],
        "fredholm" => vec![
            param("kernel", "airy"),
            param("s-grid", "start:stop:step"),
            param("method", "nystrom | painleve"),
        ],
        "moments" => vec![
            param("k", "moment order"),
            param("N", "number of variables"),
            param("q", "q in (0,1)"),
            param("tau", "Plancherel time"),
        ],
        "lpp" => vec![
            param("rows", "grid rows"),
            param("cols", "grid columns"),
            param("weights", "exponential | geometric"),
            param("p", "geometric success probability"),
        ],
        "polymer" => vec![
            param("model", "loggamma | oy"),
            param("rows", "log-gamma grid rows"),
            param("cols", "log-gamma grid columns"),
            param("theta", "log-gamma shape"),
            param("N", "semi-discrete polymer level"),
            param("t", "semi-discrete polymer time"),
            param("paths", "Monte Carlo paths"),
        ],
        "qtasep" => vec![param("N", "particle index"), param("q", "q in (0,1)"), param("tau", "time")],
        "bd" => vec![
            param("width", "ring width"),
            param("steps", "number of dropped blocks"),
            param("sweeps", "comma list of sweep counts; reports the growth exponent"),
        ],
        "accept" => vec![param("only", "comma list of criterion ids")],
        _ => Vec::new(),
    }
}

fn about(name: &str) -> &'static str {
    match name {
        "sample" => "Draw random partitions, permutation shapes or plane partitions",
        "kernel" => "Tabulate a correlation kernel",
        "fredholm" => "Tabulate the GUE Tracy-Widom distribution",
        "moments" => "q-Whittaker moments E q^{k λ_N}",
        "lpp" => "Last-passage times",
        "polymer" => "Directed polymer partition functions",
        "qtasep" => "Monte Carlo q-TASEP moment against its contour formula",
        "bd" => "Ballistic deposition",
        _ => "Run the acceptance suite",
    }
}

pub fn command() -> Command {
    let mut cmd = Command::new("ipkit")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Samplers, kernels and Fredholm determinants for integrable probability")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(Arg::new("seed").long("seed").global(true).value_name("U64").help("master seed"))
        .arg(Arg::new("threads").long("threads").global(true).value_name("N").help("worker threads"))
        .arg(Arg::new("format").long("format").global(true).value_name("csv|json").help("artifact format"))
        .arg(
            Arg::new("out")
                .long("out")
                .global(true)
                .value_name("DIR")
                .help(format!("output directory (default: ${OUT_DIR_ENV}); writes the artifact and {MANIFEST}")),
        )
        .arg(Arg::new("config").long("config").global(true).value_name("FILE").help("JSON config or manifest"))
        .arg(Arg::new("replicas").long("replicas").global(true).value_name("N").help("replica count"))
        .arg(
            Arg::new("tol")
                .long("tol")
                .global(true)
                .value_name("KEY=VALUE")
                .action(ArgAction::Append)
                .help("tolerance override"),
        );
    for name in COMMANDS {
        cmd = cmd.subcommand(Command::new(name).about(about(name)).args(subcommand_params(name)));
    }
    cmd
}

fn from_cli(m: &ArgMatches, id: &str) -> Option<String> {
    (m.value_source(id) == Some(ValueSource::CommandLine)).then(|| m.get_one::<String>(id).cloned()).flatten()
}

fn parse_num<T: std::str::FromStr>(flag: &str, raw: &str) -> Result<T, CliError> {
    raw.parse().map_err(|_| CliError::Validation(format!("--{flag}: cannot parse `{raw}`")))
}

/// Defaults < config file < environment (output dir) < flags.
pub fn resolve(m: &ArgMatches) -> Result<RunConfig, CliError> {
    let (name, sub) = m.subcommand().ok_or_else(|| CliError::Validation("missing subcommand".into()))?;
    let mut cfg = match from_cli(sub, "config") {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Validation(format!("{path}: {e}")))?;
            let c = RunConfig::from_json(&text)?;
            if c.command != name {
                return Err(CliError::Validation(format!("config is for `{}`, not `{name}`", c.command)));
            }
            c
        }
        None => RunConfig { command: name.to_string(), ..RunConfig::default() },
    };
    if cfg.output.is_none() {
        cfg.output = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    }
    if let Some(v) = from_cli(sub, "seed") {
        cfg.seed = Some(parse_num("seed", &v)?);
    }
    if let Some(v) = from_cli(sub, "threads") {
        cfg.threads = Some(parse_num("threads", &v)?);
    }
    if let Some(v) = from_cli(sub, "replicas") {
        cfg.replicas = Some(parse_num("replicas", &v)?);
    }
    if let Some(v) = from_cli(sub, "format") {
        cfg.format = match v.as_str() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            _ => return Err(CliError::Validation(format!("--format must be csv or json, got `{v}`"))),
        };
    }
    if let Some(v) = from_cli(sub, "out") {
        cfg.output = Some(PathBuf::from(v));
    }
    if sub.value_source("tol") == Some(ValueSource::CommandLine) {
        for kv in sub.get_many::<String>("tol").into_iter().flatten() {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Validation(format!("--tol expects KEY=VALUE, got `{kv}`")))?;
            cfg.tolerances.insert(k.to_string(), parse_num("tol", v)?);
        }
    }
    for id in sub.ids().map(|i| i.as_str().to_string()) {
        if GLOBAL.contains(&id.as_str()) {
            continue;
        }
        if let Some(v) = from_cli(sub, &id) {
            cfg.params.insert(id, flag_value(&v));
        }
    }
    if cfg.threads == Some(0) {
        return Err(CliError::Validation("--threads must be at least 1".into()));
    }
    Ok(cfg)
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `<command>.<ext>` and the manifest into `dir`; returns the manifest.
pub fn persist(dir: &Path, cfg: &RunConfig, artifact: &[u8]) -> Result<Manifest, CliError> {
    std::fs::create_dir_all(dir)?;
    let file = format!("{}.{}", cfg.command, cfg.format.extension());
    std::fs::write(dir.join(&file), artifact)?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        core_version: ipkit_core::VERSION.to_string(),
        config: cfg.clone(),
        artifacts: vec![ArtifactEntry { file, sha256: sha256_hex(artifact), bytes: artifact.len() }],
    };
    let mut text = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push(b'\n');
    std::fs::write(dir.join(MANIFEST), text)?;
    Ok(manifest)
}

/// Runs a resolved config on a pool of `cfg.threads` workers.
pub fn run_config(cfg: &RunConfig, log: &mut dyn Write) -> Result<crate::commands::Output, CliError> {
    match cfg.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let mut buf = Vec::new();
            let out = pool.install(|| execute(cfg, &mut buf));
            log.write_all(&buf)?;
            out
        }
        None => execute(cfg, log),
    }
}

/// Entry point; returns the process exit code. The artifact goes to
/// `stdout`, diagnostics and error JSON to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let err = CliError::Validation(e.kind().to_string());
                    let _ = write!(stderr, "{}", e.render());
                    let _ = writeln!(stderr, "{}", err.to_json());
                    err.exit_code()
                }
            };
        }
    };
    let result = resolve(&matches).and_then(|cfg| {
        let out = run_config(&cfg, stderr)?;
        stdout.write_all(&out.bytes)?;
        if let Some(dir) = &cfg.output {
            persist(dir, &cfg, &out.bytes)?;
        }
        Ok(out.failed)
    });
    match result {
        Ok(false) => 0,
        Ok(true) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}
