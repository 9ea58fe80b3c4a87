//! Measured-slack reports around universal models. Every report uses the
//! single global dovetailer as the enumerator of L_m; its own description
//! length is not charged to any quantity below.

use crate::bitstring::Bitstring;
use crate::enumeration::{Complexity, HaltingTable, OmegaLedger};
use crate::error::{LabError, Result};
use crate::models::{deficiency, ModelSet};
use crate::universal::{locate, universal_groups};

/// One candidate group for x.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCandidate {
    pub m: u32,
    pub s: u32,
    pub complexity: Complexity,
    pub deficiency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem4Witness {
    /// Every level m with C(x) ≤ m ≤ m_max has a group containing x.
    pub exists_at_every_level: bool,
    pub candidates: Vec<GroupCandidate>,
    /// Index into `candidates` of the first deficiency-minimizing group.
    pub best: Option<usize>,
    pub best_group: Option<ModelSet>,
    /// C(S|A) for the best group.
    pub c_group_given_model: Complexity,
    /// δ(x|S) − δ(x|A) for the raw model A.
    pub delta_gap_raw: Option<f64>,
    /// δ(x|S) − δ(x|A′) with A′ = {y ∈ A : l(y) = l(x)}.
    pub delta_gap_sliced: Option<f64>,
    pub enumerator: &'static str,
}

pub const ENUMERATOR_NOTE: &str = "single global dovetailer, description length uncharged";

/// Searches every level m ≤ the ledger's m_max for the group containing x.
pub fn verify_theorem4(
    table: &HaltingTable,
    ledger: &OmegaLedger,
    x: &Bitstring,
    a: &ModelSet,
) -> Result<Theorem4Witness> {
    if !a.contains(x) {
        return Err(LabError::Precondition {
            op: "verify_theorem4",
            detail: format!("{x} is not an element of the model"),
        });
    }
    let cx = table.complexity(x);
    let mut candidates = Vec::new();
    let mut groups = Vec::new();
    let mut exists = true;
    if let Some(cx) = cx.finite() {
        for m in cx..=ledger.m_max {
            match locate(table, ledger, x, m) {
                Ok((s, g)) => {
                    candidates.push(GroupCandidate {
                        m,
                        s,
                        complexity: g.complexity(),
                        deficiency: deficiency(table, x, &g)?,
                    });
                    groups.push(g);
                }
                Err(LabError::NotInList { .. }) => exists = false,
                Err(e) => return Err(e),
            }
        }
    } else {
        exists = false;
    }
    let best = candidates
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.deficiency.map(|d| (i, d)))
        .fold(None, |acc: Option<(usize, f64)>, (i, d)| match acc {
            Some((_, bd)) if bd <= d => acc,
            _ => Some((i, d)),
        })
        .map(|(i, _)| i);
    let best_group = best.map(|i| groups[i].clone());
    let l = table.config().max_prog_len;
    let (c_group_given_model, delta_gap_raw, delta_gap_sliced) = match (&best_group, best) {
        (Some(g), Some(i)) => {
            let c = table.cond_complexity_upto(g.code(), a.code(), l)?;
            let ds = candidates[i].deficiency;
            let da = deficiency(table, x, a)?;
            let sliced = ModelSet::new(
                table,
                a.elements().iter().filter(|e| e.len() == x.len()).cloned(),
            );
            let dsl = deficiency(table, x, &sliced)?;
            (
                c,
                ds.zip(da).map(|(s, a)| s - a),
                ds.zip(dsl).map(|(s, a)| s - a),
            )
        }
        _ => (Complexity::Infinite, None, None),
    };
    Ok(Theorem4Witness {
        exists_at_every_level: exists,
        candidates,
        best,
        best_group,
        c_group_given_model,
        delta_gap_raw,
        delta_gap_sliced,
        enumerator: ENUMERATOR_NOTE,
    })
}

/// Ω_m as a binary numeral.
pub fn omega_numeral(ledger: &OmegaLedger, m: u32) -> Bitstring {
    Bitstring::numeral(ledger.omega(m))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Report {
    pub a: u32,
    pub b: u32,
    pub m: u32,
    pub s: u32,
    /// C(Ω_a | Ω_b)
    pub c_omega_a_given_b: Complexity,
    /// C(Ω_{m−s} | S_{m,s})
    pub c_omega_given_group: Complexity,
    /// C(S_{m,s} | Ω_{m−s})
    pub c_group_given_omega: Complexity,
    /// C(Ω_a) − a
    pub c_omega_a_minus_a: Option<i64>,
    pub enumerator: &'static str,
}

pub fn lemma1_report(
    table: &HaltingTable,
    ledger: &OmegaLedger,
    a: u32,
    b: u32,
    m: u32,
    s: u32,
) -> Result<Lemma1Report> {
    if a > b || b > ledger.m_max || m > ledger.m_max || s > m {
        return Err(LabError::Precondition {
            op: "lemma1_report",
            detail: format!("need a ≤ b ≤ {0}, s ≤ m ≤ {0}", ledger.m_max),
        });
    }
    let dec = universal_groups(ledger, m)?;
    let group = dec.group_with_s(s).ok_or_else(|| LabError::Precondition {
        op: "lemma1_report",
        detail: format!("Ω_{m} = {} has no group of size 2^{s}", dec.omega),
    })?;
    let code = dec.model(table, ledger, group).code().clone();
    let l = table.config().max_prog_len;
    let om_a = omega_numeral(ledger, a);
    let om_b = omega_numeral(ledger, b);
    let om_ms = omega_numeral(ledger, m - s);
    Ok(Lemma1Report {
        a,
        b,
        m,
        s,
        c_omega_a_given_b: table.cond_complexity_upto(&om_a, &om_b, l)?,
        c_omega_given_group: table.cond_complexity_upto(&om_ms, &code, l)?,
        c_group_given_omega: table.cond_complexity_upto(&code, &om_ms, l)?,
        c_omega_a_minus_a: table.complexity(&om_a).diff(Complexity::Finite(a)),
        enumerator: ENUMERATOR_NOTE,
    })
}

/// Largest C(Ω_a|Ω_b) − |a − b| over a, b ≤ `m_max`; `None` if some pair is
/// unreachable, with the count of unreachable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma8Sweep {
    pub m_max: u32,
    pub max_slack: Option<i64>,
    pub unreachable_pairs: usize,
    pub pairs: usize,
}

pub fn lemma8_sweep(table: &HaltingTable, ledger: &OmegaLedger, m_max: u32) -> Result<Lemma8Sweep> {
    let m_max = m_max.min(ledger.m_max);
    let l = table.config().max_prog_len;
    let mut max_slack: Option<i64> = None;
    let mut unreachable = 0;
    let mut pairs = 0;
    for b in 0..=m_max {
        let om_b = omega_numeral(ledger, b);
        for a in 0..=m_max {
            pairs += 1;
            match table
                .cond_complexity_upto(&omega_numeral(ledger, a), &om_b, l)?
                .finite()
            {
                Some(c) => {
                    let slack = c as i64 - (a as i64 - b as i64).abs();
                    max_slack = Some(max_slack.map_or(slack, |m| m.max(slack)));
                }
                None => unreachable += 1,
            }
        }
    }
    Ok(Lemma8Sweep {
        m_max,
        max_slack,
        unreachable_pairs: unreachable,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{build_table, omega_ledger};
    use crate::machine::MachineConfig;

    #[test]
    fn singleton_model_finds_group_at_its_level() {
        let t = build_table(&MachineConfig::new(14, 256, 2).unwrap(), &[]).unwrap();
        let l = omega_ledger(&t, 14);
        let x = crate::bitstring::bits("0110");
        let a = ModelSet::singleton(&t, &x);
        let w = verify_theorem4(&t, &l, &x, &a).unwrap();
        assert!(w.exists_at_every_level);
        assert_eq!(w.candidates[0].m, t.complexity(&x).finite().unwrap());
    }

    #[test]
    fn equal_levels_use_copy() {
        let t = build_table(&MachineConfig::new(14, 256, 2).unwrap(), &[]).unwrap();
        let l = omega_ledger(&t, 14);
        let r = lemma1_report(&t, &l, 3, 3, 0, 0).unwrap();
        assert_eq!(l.omega(0), 1);
        // READ 0; EMIT
        assert!(r.c_omega_a_given_b <= Complexity::Finite(9));
    }
}
