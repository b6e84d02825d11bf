use serde_json::json;

/// Failures surfaced by the CLI, each with an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] gkz_core::Error),
    #[error("no nondegenerate point found in {attempts} attempts")]
    Exhausted { attempts: u32 },
}

impl CliError {
    /// 2 for usage and config errors, 3 for budget and precision errors.
    pub fn exit_code(&self) -> i32 {
        use gkz_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Exhausted { .. } => 3,
            CliError::Core(E::BudgetExceeded { .. } | E::WeightNotIntegral { .. } | E::ZeroEigenvalue) => 3,
            CliError::Core(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            3 => "budget_or_precision",
            _ => "usage",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "code": self.exit_code(), "message": self.to_string() } })
    }
}
