use std::fmt;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, preset or flag; exit code 2.
    Config(String),
    /// Every run of the invocation diverged; exit code 3.
    AllDiverged(usize),
    Io(String),
    Run(String),
}

impl CliError {
    pub fn message(&self) -> String {
        match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Run(m) => m.clone(),
            CliError::AllDiverged(n) => format!("all {n} runs diverged"),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::AllDiverged(_) => 3,
            CliError::Io(_) | CliError::Run(_) => 1,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            other => f.write_str(&other.message()),
        }
    }
}

impl From<sponge_core::Error> for CliError {
    fn from(e: sponge_core::Error) -> Self {
        use sponge_core::Error as E;
        match e {
            E::Config(_) | E::Geometry(_) => CliError::Config(e.to_string()),
            other => CliError::Run(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
