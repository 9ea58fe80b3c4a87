//! Universal models: the groups S_{m,s} cut from L_m by the binary
//! expansion of Ω_m.

pub mod reports;

use std::fmt::Write as _;

pub use reports::{
    lemma1_report, lemma8_sweep, verify_theorem4, Lemma1Report, Lemma8Sweep, Theorem4Witness,
};

use crate::bitstring::Bitstring;
use crate::enumeration::{HaltingTable, OmegaLedger};
use crate::error::{LabError, Result};
use crate::models::ModelSet;

/// Exponents of the set bits of `omega`, most significant first.
pub fn omega_decomposition(omega: u64) -> Vec<u32> {
    (0..64).rev().filter(|&s| omega >> s & 1 == 1).collect()
}

/// One block S_{m,s}: `count = 2^s` consecutive entries of L_m starting at
/// `first_index` (positions in L_m's discovery order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Group {
    pub s: u32,
    pub first_index: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDecomposition {
    pub m: u32,
    pub omega: u64,
    pub s_values: Vec<u32>,
    pub groups: Vec<Group>,
}

pub fn universal_groups(ledger: &OmegaLedger, m: u32) -> Result<GroupDecomposition> {
    if m > ledger.m_max {
        return Err(LabError::Precondition {
            op: "universal_groups",
            detail: format!("level {m} exceeds the ledger's m_max {}", ledger.m_max),
        });
    }
    let omega = ledger.omega(m);
    let s_values = omega_decomposition(omega);
    let mut first = 0u64;
    let groups = s_values
        .iter()
        .map(|&s| {
            let g = Group {
                s,
                first_index: first,
                count: 1 << s,
            };
            first += 1 << s;
            g
        })
        .collect();
    Ok(GroupDecomposition {
        m,
        omega,
        s_values,
        groups,
    })
}

impl GroupDecomposition {
    /// Elements of one group, in discovery order.
    pub fn members<'a>(&self, ledger: &'a OmegaLedger, group: &Group) -> Vec<&'a Bitstring> {
        ledger
            .members(self.m)
            .into_iter()
            .skip(group.first_index as usize)
            .take(group.count as usize)
            .collect()
    }

    pub fn group_with_s(&self, s: u32) -> Option<&Group> {
        self.groups.iter().find(|g| g.s == s)
    }

    /// Index of the group containing position `pos` of L_m.
    pub fn group_of_position(&self, pos: u64) -> Option<&Group> {
        self.groups
            .iter()
            .find(|g| g.first_index <= pos && pos < g.first_index + g.count)
    }

    pub fn model(&self, table: &HaltingTable, ledger: &OmegaLedger, group: &Group) -> ModelSet {
        ModelSet::new(table, self.members(ledger, group).into_iter().cloned())
    }
}

/// The group S_{m,s} containing `x`, with s and the group as a model.
pub fn locate(
    table: &HaltingTable,
    ledger: &OmegaLedger,
    x: &Bitstring,
    m: u32,
) -> Result<(u32, ModelSet)> {
    let dec = universal_groups(ledger, m)?;
    let pos = ledger
        .position(x, m)
        .ok_or_else(|| LabError::NotInList { x: x.clone(), m })?;
    let g = dec.group_of_position(pos as u64).expect("groups cover L_m");
    Ok((g.s, dec.model(table, ledger, g)))
}

/// Group dump: `m,s,first_index,count` for every m ≤ `m_max`.
pub fn group_dump(ledger: &OmegaLedger, m_max: u32) -> Result<String> {
    let mut s = String::from("m,s,first_index,count\n");
    for m in 0..=m_max.min(ledger.m_max) {
        for g in universal_groups(ledger, m)?.groups {
            let _ = writeln!(s, "{m},{},{},{}", g.s, g.first_index, g.count);
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{build_table, omega_ledger};
    use crate::machine::MachineConfig;
    use proptest::prelude::*;

    #[test]
    fn decompositions() {
        assert_eq!(omega_decomposition(13), vec![3, 2, 0]);
        assert_eq!(omega_decomposition(8), vec![3]);
        assert_eq!(omega_decomposition(0), Vec::<u32>::new());
    }

    #[test]
    fn groups_partition_each_level() {
        let t = build_table(&MachineConfig::new(12, 256, 2).unwrap(), &[]).unwrap();
        let l = omega_ledger(&t, 12);
        for m in 0..=12 {
            let d = universal_groups(&l, m).unwrap();
            let mut all: Vec<&Bitstring> = Vec::new();
            for g in &d.groups {
                let mem = d.members(&l, g);
                assert_eq!(mem.len() as u64, 1 << g.s);
                all.extend(mem);
            }
            assert_eq!(all, l.members(m));
            for x in l.members(m) {
                let (s, a) = locate(&t, &l, x, m).unwrap();
                assert!(a.contains(x));
                assert!(d.s_values.contains(&s));
            }
        }
        assert!(matches!(
            locate(&t, &l, &Bitstring::from_u64(0, 40), 12),
            Err(LabError::NotInList { .. })
        ));
    }

    proptest! {
        #[test]
        fn decomposition_sums(omega in 0u64..1 << 40) {
            let s = omega_decomposition(omega);
            prop_assert_eq!(s.iter().map(|&e| 1u64 << e).sum::<u64>(), omega);
            prop_assert!(s.windows(2).all(|w| w[0] > w[1]));
        }
    }
}
