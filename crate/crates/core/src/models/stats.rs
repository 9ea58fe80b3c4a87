use crate::bitstring::Bitstring;
use crate::enumeration::HaltingTable;
use crate::error::{LabError, Result};
use crate::models::model_set::ModelSet;
use crate::models::{models_of, profile, strong_profile, Profile};

/// Optimality deficiency C(A) + log2|A| − C(x), or `None` when C(A) or
/// C(x) is infinite.
pub fn deficiency(table: &HaltingTable, x: &Bitstring, a: &ModelSet) -> Result<Option<f64>> {
    if !a.contains(x) {
        return Err(LabError::Precondition {
            op: "deficiency",
            detail: format!("{x} is not an element of the model"),
        });
    }
    let (Some(ca), Some(cx)) = (a.complexity().finite(), table.complexity(x).finite()) else {
        return Ok(None);
    };
    Ok(Some(ca as f64 + a.log2_cardinality() - cx as f64))
}

/// Result of a sufficiency test; `unreachable` flags an infinite deficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sufficiency {
    pub holds: bool,
    pub unreachable: bool,
    pub deficiency: Option<f64>,
}

pub fn is_sufficient(
    table: &HaltingTable,
    x: &Bitstring,
    a: &ModelSet,
    epsilon: f64,
) -> Result<Sufficiency> {
    let d = deficiency(table, x, a)?;
    Ok(Sufficiency {
        holds: d.is_some_and(|d| d <= epsilon + 1e-9),
        unreachable: d.is_none(),
        deficiency: d,
    })
}

/// Outcome of the (δ, ε, D) minimality test.
#[derive(Debug, Clone, PartialEq)]
pub struct MssReport {
    pub sufficient: Sufficiency,
    /// First counterexample B in scan order: (C(B), |B|).
    pub counterexample: Option<(u32, u64)>,
    pub models_scanned: usize,
}

impl MssReport {
    pub fn holds(&self) -> bool {
        self.sufficient.holds && self.counterexample.is_none()
    }
}

/// A is a (δ, ε, D)-MSS for x iff A is ε-sufficient and no model B ∋ x with
/// C(B) ≤ `m_max` has C(B) < C(A) − δ and
/// C(B) + log2|B| − C(x) < ε + D·log2 C(x).
pub fn is_mss(
    table: &HaltingTable,
    x: &Bitstring,
    a: &ModelSet,
    delta: u32,
    epsilon: f64,
    d: f64,
    m_max: u32,
) -> Result<MssReport> {
    let sufficient = is_sufficient(table, x, a, epsilon)?;
    let mut report = MssReport {
        sufficient,
        counterexample: None,
        models_scanned: 0,
    };
    let (Some(ca), Some(cx)) = (a.complexity().finite(), table.complexity(x).finite()) else {
        return Ok(report);
    };
    let bound = epsilon + d * (cx.max(1) as f64).log2();
    let mut scanned = models_of(table, x, m_max);
    scanned.sort_by(|p, q| {
        (p.complexity, p.cardinality, &p.code).cmp(&(q.complexity, q.cardinality, &q.code))
    });
    report.models_scanned = scanned.len();
    for b in scanned {
        if (b.complexity as i64) < ca as i64 - delta as i64
            && b.complexity as f64 + (b.cardinality as f64).log2() - (cx as f64) < bound - 1e-9
        {
            report.counterexample = Some((b.complexity, b.cardinality));
            break;
        }
    }
    Ok(report)
}

/// How far the strong profile P_x^ε lags behind P_x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRecord {
    pub epsilon: Option<u32>,
    /// Least δ such that every frontier point (a, b) of P_x has
    /// (a + δ, b + δ) ∈ P_x^ε; `None` for +∞.
    pub gap: Option<u32>,
    pub profile: Profile,
    pub strong: Profile,
}

pub fn normality_gap(
    table: &HaltingTable,
    x: &Bitstring,
    epsilon: Option<u32>,
    m_max: u32,
) -> Result<GapRecord> {
    let p = profile(table, x, m_max);
    let s = strong_profile(table, x, epsilon, m_max)?;
    Ok(GapRecord {
        epsilon,
        gap: p.excess_over(&s),
        profile: p,
        strong: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;
    use crate::enumeration::build_table;
    use crate::machine::MachineConfig;

    #[test]
    fn singleton_deficiency_and_sufficiency() {
        let t = build_table(&MachineConfig::new(14, 256, 3).unwrap(), &[]).unwrap();
        let x = bits("0110");
        let a = ModelSet::singleton(&t, &x);
        let d = deficiency(&t, &x, &a).unwrap().unwrap();
        let expect =
            a.complexity().finite().unwrap() as f64 - t.complexity(&x).finite().unwrap() as f64;
        assert_eq!(d, expect);
        assert!(is_sufficient(&t, &x, &a, d).unwrap().holds);
        assert!(is_sufficient(&t, &x, &a, d + 1.0).unwrap().holds);
        assert!(!is_sufficient(&t, &x, &a, d - 1.0).unwrap().holds);
        assert!(deficiency(&t, &bits("1"), &a).is_err());
    }

    #[test]
    fn large_delta_makes_mss_trivial() {
        let t = build_table(&MachineConfig::new(14, 256, 3).unwrap(), &[]).unwrap();
        let x = bits("0110");
        let a = ModelSet::singleton(&t, &x);
        let ca = a.complexity().finite().unwrap();
        let r = is_mss(&t, &x, &a, ca, 100.0, 1.0, 14).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn gap_is_zero_without_filter_and_shrinks_with_epsilon() {
        let t = build_table(&MachineConfig::new(14, 256, 3).unwrap(), &[]).unwrap();
        let x = bits("011");
        assert_eq!(normality_gap(&t, &x, None, 14).unwrap().gap, Some(0));
        let mut prev: Option<u32> = None;
        for e in [6, 9, 12, 14] {
            let g = normality_gap(&t, &x, Some(e), 14).unwrap().gap;
            if let (Some(p), Some(c)) = (prev, g) {
                assert!(c <= p);
            }
            if prev.is_some() {
                assert!(g.is_some());
            }
            prev = g;
        }
    }
}
