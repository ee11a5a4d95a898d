use std::fs;
use std::path::{Path, PathBuf};

use cfml_core::{Category, Error};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.category() {
                Category::Validation => 2,
                Category::Budget => 3,
                Category::Numerical => 4,
                Category::Io => 1,
            },
            CliError::Config(_) => 2,
            CliError::Output(_) => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Expand,
    Cylinder,
    Dimension,
    Sn,
    PrimeTail,
    McMeasure,
    Series,
    CeRatio,
    CantorAudit,
}

impl CommandName {
    pub fn name(self) -> &'static str {
        match self {
            CommandName::Expand => "expand",
            CommandName::Cylinder => "cylinder",
            CommandName::Dimension => "dimension",
            CommandName::Sn => "sn",
            CommandName::PrimeTail => "prime-tail",
            CommandName::McMeasure => "mc-measure",
            CommandName::Series => "series",
            CommandName::CeRatio => "ce-ratio",
            CommandName::CantorAudit => "cantor-audit",
        }
    }

    pub fn stochastic(self) -> bool {
        matches!(self, CommandName::McMeasure | CommandName::CeRatio | CommandName::CantorAudit)
    }
}

/// On-disk run configuration.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<CommandName>,
    #[serde(default)]
    params: Map<String, Value>,
    output_path: Option<PathBuf>,
    seed: Option<u64>,
    workers: Option<usize>,
    precision_bits: Option<u32>,
}

/// Parameter values given as flags.
#[derive(Debug, Default)]
pub struct Overrides(Map<String, Value>);

impl Overrides {
    pub fn set<T: Serialize>(&mut self, key: &str, v: &Option<T>) {
        if let Some(v) = v {
            self.0.insert(key.into(), serde_json::to_value(v).expect("flag values serialize"));
        }
    }

    /// A flag whose value is itself JSON.
    pub fn set_json(&mut self, key: &str, v: &Option<String>) -> Result<(), CliError> {
        if let Some(text) = v {
            let parsed: Value =
                serde_json::from_str(text).map_err(|e| CliError::Config(format!("--{key}: {e}")))?;
            self.0.insert(key.into(), parsed);
        }
        Ok(())
    }
}

pub struct Globals {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub precision_bits: Option<u32>,
}

#[derive(Debug)]
pub struct Run {
    pub command: CommandName,
    pub params: Map<String, Value>,
    pub output_path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub precision_bits: u32,
}

impl Run {
    /// Typed parameters; unknown keys are rejected.
    pub fn params<T: serde::de::DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| CliError::Config(format!("{} params: {e}", self.command.name())))
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::Config("a seed is required for stochastic commands".into()))
    }
}

pub fn resolve(
    path: Option<&Path>,
    command: Option<CommandName>,
    flags: Overrides,
    globals: Globals,
) -> Result<Run, CliError> {
    let file = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let command = match (command, file.command) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Config(format!(
                "subcommand {} does not match config command {}",
                a.name(),
                b.name()
            )))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(CliError::Config("no command given".into())),
    };
    let mut params = file.params;
    params.extend(flags.0);
    let run = Run {
        command,
        params,
        output_path: globals.out.or(file.output_path),
        seed: globals.seed.or(file.seed),
        workers: globals.workers.or(file.workers),
        precision_bits: globals
            .precision_bits
            .or(file.precision_bits)
            .unwrap_or(cfml_core::DEFAULT_PRECISION_BITS),
    };
    if run.command.stochastic() && run.seed.is_none() {
        return Err(CliError::Config(format!("{} needs --seed", command.name())));
    }
    if run.workers == Some(0) {
        return Err(CliError::Config("workers must be >= 1".into()));
    }
    Ok(run)
}
