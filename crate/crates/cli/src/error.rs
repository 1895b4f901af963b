use reflectwalk::WalkError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}:{line}:{column}: {message}")]
    Config {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{origin}: field `{field}` {message}")]
    Field {
        origin: String,
        field: String,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("[{code}] {source}", code = .source.code())]
    Walk {
        #[from]
        source: WalkError,
    },
    #[error("missing `{0}`: pass --{0} or set it in the config")]
    Missing(&'static str),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    /// 1 for failed checks, 2 for anything that stopped the run.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            _ => 2,
        }
    }
}
