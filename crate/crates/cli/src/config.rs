use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use reflectwalk::JumpDistribution;

use crate::error::CliError;

pub const DEFAULT_N_VALUES: [u64; 6] = [10, 20, 50, 100, 200, 400];

fn default_n_values() -> Vec<u64> {
    DEFAULT_N_VALUES.to_vec()
}

/// One run of the tool, read from a JSON document.
///
/// ```json
/// { "probs": ["3/10", "1/10", "1/10", "1/2"], "j": 5, "n_values": [10, 100] }
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub probs: Vec<String>,
    #[serde(default)]
    pub j: usize,
    #[serde(default = "default_n_values")]
    pub n_values: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl RunConfig {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, CliError> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        config.check_fields(origin)?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn check_fields(&self, origin: &str) -> Result<(), CliError> {
        let field = |name: &str, message: String| CliError::Field {
            origin: origin.to_string(),
            field: name.to_string(),
            message,
        };
        if self.n_values.is_empty() {
            return Err(field("n_values", "must not be empty".into()));
        }
        if let Some(pos) = self.n_values.iter().position(|&n| n == 0) {
            return Err(field(&format!("n_values[{pos}]"), "must be a positive integer".into()));
        }
        if let Some(pos) = self.n_values.windows(2).position(|w| w[0] >= w[1]) {
            return Err(field(
                &format!("n_values[{}]", pos + 1),
                format!("{} does not exceed {}", self.n_values[pos + 1], self.n_values[pos]),
            ));
        }
        if self.paths == Some(0) {
            return Err(field("paths", "must be a positive integer".into()));
        }
        Ok(())
    }

    pub fn distribution(&self) -> Result<JumpDistribution, CliError> {
        Ok(JumpDistribution::from_strs(&self.probs)?)
    }
}
