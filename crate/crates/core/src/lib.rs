pub mod bitstring;
pub mod error;
pub mod machine;
pub mod par;

pub use bitstring::{bits, Bitstring};
pub use error::{LabError, Result};
pub use machine::{MachineConfig, ProgramId};
pub use par::Schedule;
pub mod enumeration;
pub use enumeration::{build_table, omega_ledger, Complexity, HaltingTable, OmegaLedger};
pub mod models;
pub use models::{ModelSet, Profile};
pub mod calibration;
pub mod constructions;
pub mod suites;
pub mod universal;
pub use calibration::Calibration;
