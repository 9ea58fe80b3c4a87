//! The normal string whose universal groups are not strong sufficient
//! statistics, and the measurements around it.

use crate::bitstring::Bitstring;
use crate::constructions::antistochastic;
use crate::enumeration::{Complexity, HaltingTable, OmegaLedger};
use crate::error::{LabError, Result};
use crate::models::{
    ceil_log2, deficiency, is_mss, is_sufficient, profile, ModelSet, MssReport, Profile,
    Sufficiency,
};
use crate::universal::locate;
use crate::universal::reports::{omega_numeral, ENUMERATOR_NOTE};

/// x = y·z with y antistochastic of length 2k and z a hardest 2k-bit
/// extension, plus the cylinder A = {y·z′ : l(z′) = 2k}.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3String {
    pub k: usize,
    pub y: Bitstring,
    pub z: Bitstring,
    pub x: Bitstring,
    pub a: ModelSet,
    /// C(z|y), which is the maximum over all 2k-bit strings.
    pub c_z_given_y: Complexity,
}

/// Largest cylinder the table can describe: CYL 2k QUOTE y has 9 + 2k bits.
fn check_scale(table: &HaltingTable, k: usize) -> Result<()> {
    let l = table.config().max_prog_len as usize;
    if k == 0 || 9 + 2 * k > l || 4 * k > 24 {
        return Err(LabError::Scale {
            op: "theorem3_string",
            detail: format!("k = {k} needs 1 ≤ k, 9 + 2k ≤ L = {l} and 4k ≤ 24"),
        });
    }
    Ok(())
}

pub fn theorem3_string(table: &HaltingTable, k: usize) -> Result<Theorem3String> {
    check_scale(table, k)?;
    let l = table.config().max_prog_len;
    let y = antistochastic(table, 2 * k, k)?;
    let mut best: Option<(Complexity, Bitstring)> = None;
    for z in Bitstring::all_of_len(2 * k) {
        let c = table.cond_complexity_upto(&z, &y, l)?;
        if best.as_ref().is_none_or(|(bc, _)| c > *bc) {
            best = Some((c, z));
        }
    }
    let (c_z_given_y, z) = best.expect("2k ≥ 2");
    let x = y.concat(&z);
    let a = ModelSet::cylinder(table, &y, 4 * k);
    Ok(Theorem3String {
        k,
        y,
        z,
        x,
        a,
        c_z_given_y,
    })
}

/// Thresholds of the minimality and strength tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MssParams {
    pub delta: u32,
    pub epsilon: f64,
    pub d: f64,
}

/// The universal group S_{m,s} ∋ x at one level m ≥ C(x).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSweepEntry {
    pub m: u32,
    pub s: u32,
    pub complexity: Complexity,
    /// C(S) ≤ C(A) + δ
    pub within_ceiling: bool,
    /// CT([S]|x)
    pub strength: Complexity,
    pub deficiency: Option<f64>,
    pub strong: bool,
    pub sufficient: bool,
    /// CT([S]|[A])
    pub ct_given_model: Complexity,
    /// Least ε′ making S ε′-strong and ε′-sufficient.
    pub epsilon_needed: Option<f64>,
    /// max(0, C(S) − C(A))
    pub delta_needed: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Bundle {
    pub string: Theorem3String,
    pub params: MssParams,
    pub c_x: Complexity,
    pub c_y: Complexity,
    pub c_model: Complexity,
    pub mss: MssReport,
    /// CT([A]|x)
    pub strength: Complexity,
    pub groups: Vec<GroupSweepEntry>,
    /// k − ⌈log2 k⌉, the right-hand side the group quantities are read against.
    pub reference: i64,
    /// Only the canonical dovetailer is swept.
    pub enumerator: &'static str,
}

impl Theorem3Bundle {
    /// Groups within the complexity ceiling that are ε-strong and
    /// ε-sufficient at the bundle's ε.
    pub fn qualifying(&self) -> impl Iterator<Item = &GroupSweepEntry> {
        self.groups
            .iter()
            .filter(|g| g.within_ceiling && g.strong && g.sufficient)
    }
}

pub fn theorem3_bundle(
    table: &HaltingTable,
    ledger: &OmegaLedger,
    string: Theorem3String,
    params: MssParams,
) -> Result<Theorem3Bundle> {
    let l = table.config().max_prog_len;
    let x = &string.x;
    let a = &string.a;
    let mss = is_mss(table, x, a, params.delta, params.epsilon, params.d, l)?;
    let strength = table.total_cond_complexity_upto(a.code(), x, l)?;
    let c_model = a.complexity();
    let c_x = table.complexity(x);
    let ceiling = c_model.finite().map(|c| c + params.delta);
    let mut groups = Vec::new();
    if let (Some(cx), Some(ceiling)) = (c_x.finite(), ceiling) {
        if cx > ledger.m_max {
            return Err(LabError::Scale {
                op: "theorem3_bundle",
                detail: format!("C(x) = {cx} exceeds the ledger's m_max {}", ledger.m_max),
            });
        }
        for m in cx..=ledger.m_max {
            let (s, g) = locate(table, ledger, x, m)?;
            let cg = g.complexity().finite();
            let st = table.total_cond_complexity_upto(g.code(), x, l)?;
            let suff = is_sufficient(table, x, &g, params.epsilon)?;
            let strong = st
                .finite()
                .is_some_and(|v| v as f64 <= params.epsilon + 1e-9);
            let epsilon_needed = match (st.finite(), suff.deficiency) {
                (Some(v), Some(d)) => Some((v as f64).max(d)),
                _ => None,
            };
            groups.push(GroupSweepEntry {
                m,
                s,
                complexity: g.complexity(),
                within_ceiling: cg.is_some_and(|c| c <= ceiling),
                strength: st,
                deficiency: suff.deficiency,
                strong,
                sufficient: suff.holds,
                ct_given_model: table.total_cond_complexity_upto(g.code(), a.code(), l)?,
                epsilon_needed,
                delta_needed: c_model
                    .finite()
                    .zip(cg)
                    .map(|(ca, cg)| cg.saturating_sub(ca)),
            });
        }
    }
    let k = string.k as i64;
    Ok(Theorem3Bundle {
        c_y: table.complexity(&string.y),
        c_x,
        c_model,
        mss,
        strength,
        groups,
        reference: k - ceil_log2(string.k as u64) as i64,
        params,
        string,
        enumerator: ENUMERATOR_NOTE,
    })
}

/// C(Ω_{C(A)} | [A]).
pub fn mss_omega_report(
    table: &HaltingTable,
    ledger: &OmegaLedger,
    a: &ModelSet,
) -> Result<Complexity> {
    let Some(ca) = a.complexity().finite() else {
        return Ok(Complexity::Infinite);
    };
    if ca > ledger.m_max {
        return Err(LabError::Precondition {
            op: "mss_omega_report",
            detail: format!("C(A) = {ca} exceeds the ledger's m_max {}", ledger.m_max),
        });
    }
    let l = table.config().max_prog_len;
    table.cond_complexity_upto(&omega_numeral(ledger, ca), a.code(), l)
}

/// Comparison of P_x with P_[A] lifted by ⌈log2|A|⌉.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationRecord {
    pub strength: Complexity,
    pub sufficiency: Sufficiency,
    /// A is ε-strong and ε-sufficient.
    pub preconditions_hold: bool,
    pub shift: u32,
    pub profile_x: Profile,
    pub profile_model: Profile,
    /// ℓ∞ distance of the two profiles restricted to l ≥ shift.
    pub region_epsilon: Option<u32>,
    /// max over l < shift of |min_m(l) + l − C(x)|; `None` if some row is
    /// empty or C(x) is infinite.
    pub below_slack: Option<u32>,
}

pub fn profile_translation_check(
    table: &HaltingTable,
    x: &Bitstring,
    a: &ModelSet,
    epsilon: f64,
) -> Result<TranslationRecord> {
    let l = table.config().max_prog_len;
    let strength = table.total_cond_complexity_upto(a.code(), x, l)?;
    let sufficiency = is_sufficient(table, x, a, epsilon)?;
    let shift = a.log_bucket();
    let px = profile(table, x, l);
    let pa = profile(table, a.code(), l);
    let region_epsilon = px.clip_below(shift).distance(&pa.shift_up(shift));
    let below_slack = table.complexity(x).finite().and_then(|cx| {
        (0..shift)
            .map(|b| {
                px.min_m(b)
                    .map(|m| (m as i64 + b as i64 - cx as i64).unsigned_abs() as u32)
            })
            .try_fold(0, |acc, v| v.map(|v| acc.max(v)))
    });
    Ok(TranslationRecord {
        preconditions_hold: strength
            .finite()
            .is_some_and(|s| s as f64 <= epsilon + 1e-9)
            && sufficiency.holds,
        strength,
        sufficiency,
        shift,
        profile_x: px,
        profile_model: pa,
        region_epsilon,
        below_slack,
    })
}

/// δ(x|A) for the record's model.
pub fn model_deficiency(table: &HaltingTable, s: &Theorem3String) -> Result<Option<f64>> {
    deficiency(table, &s.x, &s.a)
}
