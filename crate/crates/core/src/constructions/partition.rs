//! Turning a strong model into a member of a simple partition.

use std::collections::BTreeMap;

use crate::bitstring::Bitstring;
use crate::enumeration::{Complexity, HaltingTable};
use crate::error::{LabError, Result};
use crate::machine::{decode_set, run};
use crate::models::ModelSet;

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionRecord {
    /// A_1 = {x′ ∈ A ∩ {0,1}^n : p(x′) = [A]}.
    pub a1: ModelSet,
    /// The classes B′ = {x′ ∈ B ∩ {0,1}^n : p(x′) = [B]}, one per distinct
    /// valid code B in the image of p on {0,1}^n, ordered by that code.
    pub partition: Vec<ModelSet>,
    /// CT([A] | [A_1])
    pub ct_a_given_a1: Complexity,
    /// CT([A_1] | [A])
    pub ct_a1_given_a: Complexity,
    /// CT([A_1] | x)
    pub strength: Complexity,
}

impl PartitionRecord {
    /// Classes are pairwise disjoint.
    pub fn is_partition(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.partition
            .iter()
            .flat_map(|b| b.elements())
            .all(|e| seen.insert(e.clone()))
    }
}

/// Whether `p` halts within T on every condition of length ≤ `n`.
pub fn total_at_scale(p: &Bitstring, n: usize, budget: u32) -> bool {
    Bitstring::all_up_to(n).all(|u| run(p, &u, budget).halted())
}

pub fn strongify_partition(
    table: &HaltingTable,
    a: &ModelSet,
    x: &Bitstring,
    p: &Bitstring,
    n: usize,
) -> Result<PartitionRecord> {
    if n > 16 {
        return Err(LabError::Scale {
            op: "strongify_partition",
            detail: format!("n = {n} exceeds 16"),
        });
    }
    let budget = table.config().step_budget;
    if !total_at_scale(p, n, budget) {
        return Err(LabError::NotTotal { n });
    }
    if run(p, x, budget).output() != Some(a.code()) {
        return Err(LabError::NotMapped);
    }
    let mut classes: BTreeMap<Bitstring, Vec<Bitstring>> = BTreeMap::new();
    for x2 in Bitstring::all_of_len(n) {
        let out = run(p, &x2, budget).output;
        classes.entry(out).or_default().push(x2);
    }
    let mut partition = Vec::new();
    let mut a1 = None;
    for (code, preimage) in classes {
        let Some(b) = decode_set(&code) else { continue };
        let members: Vec<Bitstring> = preimage
            .into_iter()
            .filter(|e| b.binary_search(e).is_ok())
            .collect();
        if members.is_empty() {
            continue;
        }
        let set = ModelSet::new(table, members);
        if &code == a.code() {
            a1 = Some(set.clone());
        }
        partition.push(set);
    }
    let a1 = a1.expect("x maps to [A] and lies in A");
    let l = table.config().max_prog_len;
    Ok(PartitionRecord {
        ct_a_given_a1: table.total_cond_complexity_upto(a.code(), a1.code(), l)?,
        ct_a1_given_a: table.total_cond_complexity_upto(a1.code(), a.code(), l)?,
        strength: table.total_cond_complexity_upto(a1.code(), x, l)?,
        a1,
        partition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;
    use crate::enumeration::build_table;
    use crate::machine::MachineConfig;

    #[test]
    fn constant_program_gives_single_class() {
        let t = build_table(&MachineConfig::new(12, 256, 2).unwrap(), &[]).unwrap();
        // CYL 2 QUOTE 1: the constant program printing {100,101,110,111}
        let p = bits("101010111").concat(&bits("1"));
        let a = ModelSet::cylinder(&t, &bits("1"), 3);
        let x = bits("101");
        let r = strongify_partition(&t, &a, &x, &p, 3).unwrap();
        assert_eq!(r.a1, a);
        assert_eq!(r.partition.len(), 1);
        assert!(r.is_partition());
    }

    #[test]
    fn prefix_program_partitions_into_cylinders() {
        let t = build_table(&MachineConfig::new(12, 256, 2).unwrap(), &[]).unwrap();
        // READ 1; CYL 2
        let p = bits("110001101010");
        let x = bits("011");
        let a = ModelSet::cylinder(&t, &bits("0"), 3);
        let r = strongify_partition(&t, &a, &x, &p, 3).unwrap();
        assert_eq!(r.partition.len(), 2);
        assert!(r.is_partition());
        assert!(r.a1.contains(&x));
        assert!(r.a1.cardinality() <= a.cardinality());
    }

    #[test]
    fn errors() {
        let t = build_table(&MachineConfig::new(12, 256, 2).unwrap(), &[]).unwrap();
        let a = ModelSet::singleton(&t, &bits("01"));
        assert!(matches!(
            strongify_partition(&t, &a, &bits("01"), &bits("000"), 2),
            Err(LabError::NotTotal { n: 2 })
        ));
        assert!(matches!(
            strongify_partition(&t, &a, &bits("01"), &bits("111"), 2),
            Err(LabError::NotMapped)
        ));
    }
}
