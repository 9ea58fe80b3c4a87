//! Exhaustive enumeration: the halting table and everything derived from it.

pub mod cache;
pub mod ledger;
pub mod symmetry;
pub mod table;

use std::fmt;
use std::str::FromStr;

use crate::error::LabError;

pub use ledger::{omega_ledger, DiscoveryKey, OmegaLedger};
pub use symmetry::{symmetry_report, SymmetryReport};
pub use table::{build_table, CondCatalog, HaltingTable, SetCatalog, SetEntry, TableOptions};

/// A program length, or +∞ when no program of length ≤ L qualifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Complexity {
    Finite(u32),
    Infinite,
}

impl Complexity {
    pub fn finite(self) -> Option<u32> {
        match self {
            Complexity::Finite(v) => Some(v),
            Complexity::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Complexity::Finite(_))
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Complexity::Finite(v) => v as f64,
            Complexity::Infinite => f64::INFINITY,
        }
    }

    /// `self - other` as a signed value, `None` if either side is infinite.
    pub fn diff(self, other: Complexity) -> Option<i64> {
        Some(self.finite()? as i64 - other.finite()? as i64)
    }

    pub fn min_len(a: Option<u32>, b: Option<u32>) -> Complexity {
        match (a, b) {
            (Some(x), Some(y)) => Complexity::Finite(x.min(y)),
            (Some(x), None) | (None, Some(x)) => Complexity::Finite(x),
            (None, None) => Complexity::Infinite,
        }
    }
}

impl From<Option<u32>> for Complexity {
    fn from(v: Option<u32>) -> Self {
        v.map_or(Complexity::Infinite, Complexity::Finite)
    }
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Complexity::Finite(v) => write!(f, "{v}"),
            Complexity::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Complexity {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" => Ok(Complexity::Infinite),
            t => t
                .parse()
                .map(Complexity::Finite)
                .map_err(|_| LabError::Parse(format!("not a complexity: {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_is_largest() {
        assert!(Complexity::Finite(u32::MAX) < Complexity::Infinite);
        assert_eq!(Complexity::Finite(3).diff(Complexity::Finite(5)), Some(-2));
        assert_eq!(Complexity::Infinite.diff(Complexity::Finite(5)), None);
        assert_eq!("inf".parse::<Complexity>().unwrap(), Complexity::Infinite);
        assert_eq!(Complexity::Finite(7).to_string(), "7");
    }
}
