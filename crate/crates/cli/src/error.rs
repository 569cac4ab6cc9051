use grouppst_core::Error as CoreError;

/// Every failure the front end reports, each tied to one exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("no PST target: {0}")]
    NoTarget(String),
    #[error("{0}")]
    SearchExhausted(String),
    #[error("fidelity failure: {0}")]
    Fidelity(String),
    #[error("group hash mismatch: plan has {expected}, group gives {found}")]
    HashMismatch { expected: String, found: String },
    #[error("{0}")]
    Core(CoreError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::NotAGroup(_) => 3,
            CliError::NoTarget(_) => 4,
            CliError::SearchExhausted(_) => 5,
            CliError::Fidelity(_) => 6,
            CliError::HashMismatch { .. } => 7,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(m) => CliError::Parse(m),
            CoreError::SizeLimit { .. } | CoreError::IndexOutOfRange { .. } => CliError::Parse(e.to_string()),
            CoreError::MalformedTable(m) | CoreError::NotAGroup(m) => CliError::NotAGroup(m),
            CoreError::NoPstTarget(m) => CliError::NoTarget(m),
            CoreError::NoSingletonClass(i) => CliError::NoTarget(format!("class {i} is not a singleton")),
            CoreError::SearchExhausted { .. } => CliError::SearchExhausted(e.to_string()),
            other => CliError::Core(other),
        }
    }
}
