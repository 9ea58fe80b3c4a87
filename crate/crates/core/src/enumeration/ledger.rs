//! Discovery order, the lists L_m and the counts Ω_m.
//!
//! The dovetailer runs, at stage t = 1, 2, …, every program of length
//! ≤ min(t, L) for t steps, in (length, lex) order. A program of length ℓ
//! halting after s steps is therefore first observed at stage
//! max(1, ℓ, s), and within a stage programs are visited in index order.
//! A string's discovery key is the least (stage, program index) over the
//! programs that output it on Λ.

use std::fmt::Write as _;

use crate::bitstring::Bitstring;
use crate::enumeration::table::HaltingTable;
use crate::machine::ProgramId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscoveryKey {
    pub stage: u32,
    pub program: u32,
}

impl DiscoveryKey {
    pub const NEVER: DiscoveryKey = DiscoveryKey {
        stage: u32::MAX,
        program: u32::MAX,
    };

    pub fn of(program: ProgramId, steps: u32) -> DiscoveryKey {
        DiscoveryKey {
            stage: 1.max(program.len()).max(steps),
            program: program.0,
        }
    }
}

/// One entry of the global enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub x: Bitstring,
    pub complexity: u32,
    pub key: DiscoveryKey,
}

/// Ω_m and L_m for every m ≤ m_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaLedger {
    pub m_max: u32,
    /// Every string with C ≤ m_max, in discovery order.
    pub order: Vec<LedgerEntry>,
    /// `omega[m]` = Ω_m.
    pub omega: Vec<u64>,
}

pub fn omega_ledger(table: &HaltingTable, m_max: u32) -> OmegaLedger {
    let m_max = m_max.min(table.config().max_prog_len);
    let mut order: Vec<LedgerEntry> = (0..table.outputs().len() as u32)
        .filter(|&o| table.complexity_of_output(o) <= m_max)
        .map(|o| LedgerEntry {
            x: table.outputs()[o as usize].clone(),
            complexity: table.complexity_of_output(o),
            key: table.discovery_key(o),
        })
        .collect();
    order.sort_by_key(|e| e.key);
    let mut omega = vec![0u64; m_max as usize + 1];
    for e in &order {
        omega[e.complexity as usize] += 1;
    }
    for m in 1..omega.len() {
        omega[m] += omega[m - 1];
    }
    OmegaLedger {
        m_max,
        order,
        omega,
    }
}

impl OmegaLedger {
    pub fn omega(&self, m: u32) -> u64 {
        self.omega[m as usize]
    }

    /// L_m in discovery order.
    pub fn members(&self, m: u32) -> Vec<&Bitstring> {
        self.order
            .iter()
            .filter(|e| e.complexity <= m)
            .map(|e| &e.x)
            .collect()
    }

    /// Position of `x` in L_m, if present.
    pub fn position(&self, x: &Bitstring, m: u32) -> Option<usize> {
        self.order
            .iter()
            .filter(|e| e.complexity <= m)
            .position(|e| e.x == *x)
    }

    /// CSV: `m,omega` rows, then a blank line, then
    /// `index,stage,program,complexity,x` rows in discovery order.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,omega\n");
        for (m, w) in self.omega.iter().enumerate() {
            let _ = writeln!(s, "{m},{w}");
        }
        s.push_str("\nindex,stage,program,complexity,x\n");
        for (i, e) in self.order.iter().enumerate() {
            let _ = writeln!(
                s,
                "{i},{},{},{},{}",
                e.key.stage,
                ProgramId(e.key.program).bits(),
                e.complexity,
                e.x
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::build_table;
    use crate::machine::MachineConfig;

    #[test]
    fn level_zero_is_empty_string() {
        let t = build_table(&MachineConfig::new(10, 256, 2).unwrap(), &[]).unwrap();
        let l = omega_ledger(&t, 10);
        assert_eq!(l.omega(0), 1);
        assert_eq!(l.members(0), vec![&Bitstring::empty()]);
        for m in 0..10 {
            assert!(l.omega(m) <= l.omega(m + 1));
            assert!(l.omega(m) < 1 << (m + 1));
        }
    }

    #[test]
    fn stage_accounts_for_length_and_time() {
        assert_eq!(DiscoveryKey::of(ProgramId(0), 0).stage, 1);
        let p = ProgramId::from_bits(&crate::bitstring::bits("101111")).unwrap();
        assert_eq!(DiscoveryKey::of(p, 128).stage, 128);
        assert_eq!(DiscoveryKey::of(p, 2).stage, 6);
    }
}
