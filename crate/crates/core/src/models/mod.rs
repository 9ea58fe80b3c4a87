//! Finite-set models of a string: profiles, deficiency, sufficiency and
//! minimality predicates.

pub mod family;
pub mod model_set;
pub mod profile;
pub mod stats;

pub use family::{
    is_acceptable, Acceptability, AcceptabilityReport, AllSetsFragment, CylinderFamily,
    ModelFamily, Polynomial, SingletonFamily,
};
pub use model_set::{ceil_log2, floor_log2, ModelSet};
pub use profile::{Profile, ProfileHeader};
pub use stats::{
    deficiency, is_mss, is_sufficient, normality_gap, GapRecord, MssReport, Sufficiency,
};

use crate::bitstring::Bitstring;
use crate::enumeration::HaltingTable;
use crate::error::Result;
use crate::machine::decode_set;

/// A model found by a scan: its code, C([A]) and |A|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScannedModel {
    pub code: Bitstring,
    pub complexity: u32,
    pub cardinality: u64,
}

impl ScannedModel {
    pub fn point(&self) -> (u32, u32) {
        (self.complexity, ceil_log2(self.cardinality))
    }
}

/// Every model A ∋ x whose code is output on Λ by a program of length
/// ≤ `m_max`.
pub fn models_of(table: &HaltingTable, x: &Bitstring, m_max: u32) -> Vec<ScannedModel> {
    let cat = table.set_catalog();
    cat.containing(x)
        .iter()
        .map(|&s| &cat.sets[s as usize])
        .filter(|e| e.complexity <= m_max)
        .map(|e| ScannedModel {
            code: table.outputs()[e.output as usize].clone(),
            complexity: e.complexity,
            cardinality: e.cardinality,
        })
        .collect()
}

/// The profile P_x restricted to models of complexity ≤ `m_max`.
pub fn profile(table: &HaltingTable, x: &Bitstring, m_max: u32) -> Profile {
    let cat = table.set_catalog();
    Profile::from_points(
        cat.containing(x)
            .iter()
            .map(|&s| &cat.sets[s as usize])
            .filter(|e| e.complexity <= m_max)
            .map(|e| (e.complexity, ceil_log2(e.cardinality))),
    )
}

/// Models A ∋ x with CT([A]|x) ≤ `epsilon` and C([A]) ≤ `m_max`, each with
/// its measured strength.
pub fn strong_models_of(
    table: &HaltingTable,
    x: &Bitstring,
    epsilon: u32,
    m_max: u32,
) -> Result<Vec<(ScannedModel, u32)>> {
    let cat = table.cond_catalog(x, epsilon, true)?;
    let mut out = Vec::new();
    for (code, _, ct) in cat.entries {
        let Some(ct) = ct.finite() else { continue };
        let Some(c) = table.complexity(&code).finite() else {
            continue;
        };
        if c > m_max {
            continue;
        }
        let Some(elements) = decode_set(&code) else {
            continue;
        };
        if elements.binary_search(x).is_err() {
            continue;
        }
        out.push((
            ScannedModel {
                code,
                complexity: c,
                cardinality: elements.len() as u64,
            },
            ct,
        ));
    }
    Ok(out)
}

/// P_x^ε: the profile over models with CT([A]|x) ≤ ε. `None` means ε = ∞,
/// which reproduces [`profile`].
pub fn strong_profile(
    table: &HaltingTable,
    x: &Bitstring,
    epsilon: Option<u32>,
    m_max: u32,
) -> Result<Profile> {
    match epsilon {
        None => Ok(profile(table, x, m_max)),
        Some(e) => Ok(Profile::from_points(
            strong_models_of(table, x, e, m_max)?
                .iter()
                .map(|(m, _)| m.point()),
        )),
    }
}

/// P_x^𝒜: the profile over members of `family` that contain x.
pub fn restricted_profile(
    table: &HaltingTable,
    x: &Bitstring,
    family: &dyn ModelFamily,
    m_max: u32,
) -> Profile {
    Profile::from_points(family.members_containing(x).into_iter().filter_map(|m| {
        let card = m.len() as u64;
        let a = ModelSet::new(table, m);
        let c = a.complexity().finite()?;
        (c <= m_max).then_some((c, ceil_log2(card)))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;
    use crate::enumeration::build_table;
    use crate::machine::MachineConfig;

    #[test]
    fn profile_contains_singleton_and_cube() {
        let t = build_table(&MachineConfig::new(14, 256, 3).unwrap(), &[]).unwrap();
        for x in Bitstring::all_up_to(4) {
            let p = profile(&t, &x, 14);
            let single = ModelSet::singleton(&t, &x).complexity().finite().unwrap();
            let cube = ModelSet::cube(&t, x.len()).complexity().finite().unwrap();
            assert!(p.contains(single, 0));
            assert!(p.contains(cube, x.len() as u32));
            assert!(p.is_well_formed());
        }
    }

    #[test]
    fn strong_profile_chain() {
        let t = build_table(&MachineConfig::new(14, 256, 3).unwrap(), &[]).unwrap();
        let x = bits("0110");
        let full = profile(&t, &x, 14);
        let mut prev = Profile::empty();
        for e in [0, 6, 9, 12, 14] {
            let s = strong_profile(&t, &x, Some(e), 14).unwrap();
            assert!(prev.is_subset_of(&s));
            assert!(s.is_subset_of(&full));
            prev = s;
        }
        assert_eq!(strong_profile(&t, &x, None, 14).unwrap(), full);
    }

    #[test]
    fn cylinder_profile_uses_every_prefix() {
        let t = build_table(&MachineConfig::new(14, 256, 3).unwrap(), &[]).unwrap();
        let x = bits("101");
        let r = restricted_profile(&t, &x, &CylinderFamily, 14);
        let direct = Profile::from_points((0..=3).filter_map(|i| {
            let a = ModelSet::cylinder(&t, &x.prefix(i), 3);
            Some((a.complexity().finite()?, 3 - i as u32))
        }));
        assert_eq!(r, direct);
        assert!(r.is_subset_of(&profile(&t, &x, 14)));
    }
}
