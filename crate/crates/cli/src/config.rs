use blocksmith::caps::Caps;
use serde::{Deserialize, Serialize};

use crate::exit::{CliError, CliResult};

/// Settings shared by every subcommand. Loaded from `--config`, then
/// overridden by explicit flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub caps: Caps,
    pub seed: u64,
    pub verbose: bool,
}

impl RunConfig {
    pub fn load(path: &str) -> CliResult<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::usage(format!("config {path}: {e}")))?;
        cfg.caps.validate()?;
        Ok(cfg)
    }
}

/// Worker count from `BLOCKSMITH_THREADS`, if set.
pub fn thread_override() -> CliResult<Option<usize>> {
    match std::env::var("BLOCKSMITH_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::usage(format!("BLOCKSMITH_THREADS must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}
