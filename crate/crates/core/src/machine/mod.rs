//! The reference machine: a deterministic bit-register interpreter, its
//! configuration, and the set codec.
//!
//! All complexity values produced by this crate are relative to the machine
//! pinned by [`MACHINE_ID`]. The opcode table is normative; see
//! [`interp`] for the full execution rules.

pub mod codec;
pub mod interp;

pub use codec::{decode_set, encode_set, frame, pair};
pub use interp::{run, ExecutionOutcome, Instr, Program, ProgramId, Status};

use crate::error::{LabError, Result};

/// Identifier of the interpreter revision. Bumped whenever the opcode table
/// or the step accounting changes.
pub const MACHINE_ID: &str = "rb8-v1";

/// Largest supported program length. Program indices are `u32`.
pub const MAX_SUPPORTED_PROG_LEN: u32 = 30;

/// The enumeration universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MachineConfig {
    pub machine_id: String,
    /// L: maximal program length in bits.
    pub max_prog_len: u32,
    /// T: step budget per run.
    pub step_budget: u32,
    /// N: totality is judged over every condition of at most this many bits.
    pub cond_universe: u32,
}

impl Default for MachineConfig {
    fn default() -> Self {
        MachineConfig {
            machine_id: MACHINE_ID.to_string(),
            max_prog_len: 20,
            step_budget: 1024,
            cond_universe: 6,
        }
    }
}

impl MachineConfig {
    pub fn new(max_prog_len: u32, step_budget: u32, cond_universe: u32) -> Result<Self> {
        let c = MachineConfig {
            machine_id: MACHINE_ID.to_string(),
            max_prog_len,
            step_budget,
            cond_universe,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.machine_id != MACHINE_ID {
            return Err(LabError::Config(format!(
                "unknown machine id {:?} (this build implements {MACHINE_ID})",
                self.machine_id
            )));
        }
        if self.max_prog_len > MAX_SUPPORTED_PROG_LEN {
            return Err(LabError::Config(format!(
                "max_prog_len {} exceeds {MAX_SUPPORTED_PROG_LEN}",
                self.max_prog_len
            )));
        }
        if self.step_budget == 0 {
            return Err(LabError::Config("step_budget must be at least 1".into()));
        }
        if self.cond_universe > 16 {
            return Err(LabError::Config(format!(
                "cond_universe {} exceeds 16",
                self.cond_universe
            )));
        }
        Ok(())
    }

    /// Number of programs of length at most L: `2^(L+1) - 1`.
    pub fn program_count(&self) -> u32 {
        ProgramId::count_up_to(self.max_prog_len)
    }

    /// One-line description used in file headers.
    pub fn describe(&self) -> String {
        format!(
            "machine_id={} L={} T={} N={}",
            self.machine_id, self.max_prog_len, self.step_budget, self.cond_universe
        )
    }
}
