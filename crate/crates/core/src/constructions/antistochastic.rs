use std::collections::HashSet;

use crate::bitstring::Bitstring;
use crate::enumeration::{Complexity, HaltingTable};
use crate::error::{LabError, Result};
use crate::machine::decode_set;
use crate::models::{profile, ModelSet, Profile};

/// The lexicographically first n-bit string outside every model A with
/// C(A) < k and |A| ≤ 2^(n−k).
pub fn antistochastic(table: &HaltingTable, n: usize, k: usize) -> Result<Bitstring> {
    if k > n || n > 24 {
        return Err(LabError::Precondition {
            op: "antistochastic",
            detail: format!("need k ≤ n ≤ 24, got n={n} k={k}"),
        });
    }
    let covered = covered_strings(table, n, k);
    Bitstring::all_of_len(n)
        .find(|x| !covered.contains(x))
        .ok_or_else(|| LabError::Precondition {
            op: "antistochastic",
            detail: "every n-bit string is covered".into(),
        })
}

/// Union of the n-bit elements of the qualifying models.
pub fn covered_strings(table: &HaltingTable, n: usize, k: usize) -> HashSet<Bitstring> {
    let cap = 1u64 << (n - k);
    let cat = table.set_catalog();
    let mut covered = HashSet::new();
    for e in &cat.sets {
        if (e.complexity as usize) < k && e.cardinality <= cap {
            let els = decode_set(&table.outputs()[e.output as usize]).expect("catalogued code");
            covered.extend(els.into_iter().filter(|s| s.len() == n));
        }
    }
    covered
}

/// One prefix-cylinder witness A_i with its measured parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub i: usize,
    pub model: ModelSet,
    /// CT([A_i] | x)
    pub strength: Complexity,
}

/// A_i = the n-bit strings sharing x's first i bits, for i < k, and A_k = {x}.
pub fn antistochastic_witnesses(
    table: &HaltingTable,
    x: &Bitstring,
    k: usize,
) -> Result<Vec<Witness>> {
    let n = x.len();
    if k > n {
        return Err(LabError::Precondition {
            op: "antistochastic_witnesses",
            detail: format!("k={k} exceeds l(x)={n}"),
        });
    }
    let l = table.config().max_prog_len;
    (0..=k)
        .map(|i| {
            let model = if i == k {
                ModelSet::singleton(table, x)
            } else {
                ModelSet::cylinder(table, &x.prefix(i), n)
            };
            let strength = table.total_cond_complexity_upto(model.code(), x, l)?;
            Ok(Witness { i, model, strength })
        })
        .collect()
}

/// The target set {(m, l) : m ≥ k or m + l ≥ n}.
pub fn l_shape(n: u32, k: u32) -> Profile {
    Profile::from_points(
        (0..k.min(n))
            .map(|j| (j, n - j))
            .chain(std::iter::once((k, 0))),
    )
}

/// How close a profile is to the antistochastic shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeReport {
    pub profile: Profile,
    /// Least ε with every frontier point satisfying m > k − ε or m + l > n − ε.
    pub antistochastic_epsilon: u32,
    /// ℓ∞ distance between the profile and the L-shaped target.
    pub distance_to_target: Option<u32>,
}

pub fn shape_report(table: &HaltingTable, x: &Bitstring, k: u32, m_max: u32) -> ShapeReport {
    let n = x.len() as u32;
    let p = profile(table, x, m_max);
    let eps = p
        .frontier()
        .iter()
        .map(|&(m, l)| {
            // least ε with m > k − ε, or m + l > n − ε
            let e1 = (k as i64 - m as i64 + 1).max(0);
            let e2 = (n as i64 - (m + l) as i64 + 1).max(0);
            e1.min(e2) as u32
        })
        .max()
        .unwrap_or(0);
    ShapeReport {
        distance_to_target: p.distance(&l_shape(n, k)),
        antistochastic_epsilon: eps,
        profile: p,
    }
}

/// Profile spanned by the witnesses of strength ≤ ε.
pub fn witness_profile(witnesses: &[Witness], epsilon: u32) -> Profile {
    Profile::from_points(witnesses.iter().filter_map(|w| {
        let c = w.model.complexity().finite()?;
        (w.strength <= Complexity::Finite(epsilon)).then_some((c, w.model.log_bucket()))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;
    use crate::enumeration::build_table;
    use crate::machine::MachineConfig;

    #[test]
    fn zero_k_gives_zero_string() {
        let t = build_table(&MachineConfig::new(12, 256, 2).unwrap(), &[]).unwrap();
        assert_eq!(antistochastic(&t, 5, 0).unwrap(), bits("00000"));
    }

    #[test]
    fn witnesses_have_cylinder_sizes() {
        let t = build_table(&MachineConfig::new(14, 256, 2).unwrap(), &[]).unwrap();
        let x = bits("01101");
        let w = antistochastic_witnesses(&t, &x, 3).unwrap();
        assert_eq!(w.len(), 4);
        for wi in &w[..3] {
            assert_eq!(wi.model.cardinality(), 1 << (5 - wi.i));
            assert!(wi.model.contains(&x));
        }
        assert_eq!(w[3].model.cardinality(), 1);
    }

    #[test]
    fn l_shape_frontier() {
        assert_eq!(l_shape(6, 3).frontier(), &[(0, 6), (1, 5), (2, 4), (3, 0)]);
    }
}
