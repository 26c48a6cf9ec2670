use kform_core::action::ActionError;
use kform_core::bertini::BertiniError;
use kform_core::construct::ConstructError;
use kform_core::ideals::IdealError;

/// Failures of a command, each with its own process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Certificate(_) => 5,
            CliError::Io(_) => 6,
        }
    }

    pub(crate) fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ConstructError> for CliError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::Params(_) | ConstructError::Group(_) | ConstructError::Rep(_) => CliError::Validation(e.to_string()),
            ConstructError::Action(ActionError::ModularCharacteristic { .. }) => CliError::Validation(e.to_string()),
            ConstructError::Ideal { stage, source } => match CliError::from(source) {
                CliError::Budget(m) => CliError::Budget(format!("{stage}: {m}")),
                other => other,
            },
            ConstructError::GenerationExhausted { .. } => CliError::Budget(e.to_string()),
            ConstructError::Slicing(BertiniError::Ideal(source)) => CliError::from(source),
            ConstructError::Slicing(BertiniError::Exhausted { .. }) => CliError::Budget(e.to_string()),
            ConstructError::Certificates { failed, .. } => CliError::Certificate(failed),
        }
    }
}
