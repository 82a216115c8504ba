use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Enumeration limits shared by every exhaustive check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    pub points: u128,
    pub hyperplanes: u128,
    pub codim2: u128,
    pub codewords: u128,
    /// `q^k` limit for the pairwise minimal-codeword check.
    pub minimal_codewords: u128,
    pub integrity_guard: usize,
    pub z_guard: usize,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps {
            points: 1 << 22,
            hyperplanes: 1 << 22,
            codim2: 1 << 22,
            codewords: 1 << 22,
            minimal_codewords: 1 << 12,
            integrity_guard: 25,
            z_guard: 30,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.points,
            self.hyperplanes,
            self.codim2,
            self.codewords,
            self.minimal_codewords,
            self.integrity_guard as u128,
            self.z_guard as u128,
        ];
        if all.contains(&0) {
            return Err(Error::DomainError("caps must be positive".into()));
        }
        Ok(())
    }
}
