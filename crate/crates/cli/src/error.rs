use std::fmt;

use symlen_core::bounds::BoundsError;
use symlen_core::cohomology::OracleError;
use symlen_core::construction::{ConstructionError, ParseError};
use symlen_core::fpgroup::GroupError;
use symlen_core::homomorph::HomError;

/// Failure of a command, carrying its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Io(String),
    Parse(String),
    InvalidHom(Vec<String>),
    Verify(String),
    Hypothesis(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Failed(_) => 1,
            CliError::Parse(_) => 2,
            CliError::InvalidHom(_) => 3,
            CliError::Verify(_) => 4,
            CliError::Hypothesis(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "io error: {}", m),
            CliError::Parse(m) => write!(f, "parse error: {}", m),
            CliError::InvalidHom(v) => {
                write!(f, "invalid homomorphism:")?;
                for r in v {
                    write!(f, "\n  {}", r)?;
                }
                Ok(())
            }
            CliError::Verify(m) => write!(f, "verification failed: {}", m),
            CliError::Hypothesis(m) => write!(f, "hypothesis violated: {}", m),
            CliError::Failed(m) => write!(f, "error: {}", m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(format!("line {} column {}: {}", e.line(), e.column(), e))
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(format!("{} (position {})", e, e.position()))
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Parse(p) => p.into(),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BadMatrix(_) | GroupError::BadParameters(_) => CliError::Parse(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<HomError> for CliError {
    fn from(e: HomError) -> Self {
        match e {
            HomError::InvalidHom(v) => CliError::InvalidHom(v),
            HomError::MissingImage(_) | HomError::ExtraImage(_) | HomError::BadImage { .. } | HomError::PrimeMismatch(..) => {
                CliError::InvalidHom(vec![e.to_string()])
            }
            HomError::Construction(c) => c.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Group(g) => g.into(),
            other => CliError::Hypothesis(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BadVector { .. } => CliError::Parse(e.to_string()),
            other => CliError::Hypothesis(other.to_string()),
        }
    }
}
