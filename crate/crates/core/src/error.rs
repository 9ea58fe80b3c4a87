use thiserror::Error;

use crate::bitstring::Bitstring;

/// Errors raised by laboratory operations. Each variant names the
/// operation family that failed.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid machine config: {0}")]
    Config(String),

    #[error("build_table: projected table size {projected} bytes exceeds the memory ceiling of {ceiling} bytes; shrink max-prog-len or the condition list")]
    ResourceLimit { projected: u64, ceiling: u64 },

    #[error("build_table: condition of {len} bits exceeds the {bound}-bit condition bound")]
    ConditionTooLong { len: usize, bound: usize },

    #[error("query: condition {0} has not been recorded in the halting table")]
    UnrecordedCondition(Bitstring),

    #[error("locate: {x} is not in L_{m}")]
    NotInList { x: Bitstring, m: u32 },

    #[error("{op}: scale exceeded: {detail}")]
    Scale { op: &'static str, detail: String },

    #[error("strongify_partition: program is not total at scale (n={n}, T)")]
    NotTotal { n: usize },

    #[error("strongify_partition: program does not map x to the code of A")]
    NotMapped,

    #[error("improve_sequence: no strong witness within slack {alpha} at complexity {complexity}")]
    NoStrongWitness { complexity: u32, alpha: u32 },

    #[error("{op}: precondition failed: {detail}")]
    Precondition { op: &'static str, detail: String },

    #[error("cache: {0}")]
    CacheMismatch(String),

    #[error("format: {0}")]
    Format(String),

    #[error("calibration: {0}")]
    Calibration(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
