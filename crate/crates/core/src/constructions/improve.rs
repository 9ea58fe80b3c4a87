//! Alternating group / strong-witness improvement of a strong model.

use crate::bitstring::Bitstring;
use crate::enumeration::{Complexity, HaltingTable, OmegaLedger};
use crate::error::{LabError, Result};
use crate::models::{deficiency, strong_models_of, ModelSet};
use crate::universal::reports::omega_numeral;
use crate::universal::verify_theorem4;

/// θ = ⌈√n⌉ and α = ⌈√n / 2⌉ − 1, so that α < θ/2.
pub fn default_thresholds(n: usize) -> (u32, u32) {
    let r = (n as f64).sqrt();
    let theta = r.ceil() as u32;
    let alpha = ((r / 2.0).ceil() as u32).saturating_sub(1);
    (theta.max(1), alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// A_i, a strong model.
    Model,
    /// B_i = f(A_i), a universal group.
    Group,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub kind: StepKind,
    /// 1-based index i of A_i or B_i.
    pub index: usize,
    pub model: ModelSet,
    pub complexity: Complexity,
    pub log_cardinality: f64,
    pub deficiency: Option<f64>,
    /// CT([·]|x)
    pub strength: Complexity,
    /// For A_{i+1}: δ(x|A_1) + Σ_{j ≤ i} (2α + f-slack_j), the accumulated
    /// deficiency allowance. `None` for A_1 and for groups.
    pub deficiency_bound: Option<f64>,
    /// For B_i: δ(x|B_i) − δ(x|A_i).
    pub f_slack: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// C(A_i) − C(B_i) ≤ θ.
    NotBigStep,
    CapReached,
    /// No group containing x has finite deficiency, so f is undefined.
    UnreachableGroup,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementTrace {
    pub theta: u32,
    pub alpha: u32,
    pub epsilon: u32,
    pub steps: Vec<TraceStep>,
    pub stop_reason: StopReason,
    pub big_steps: usize,
    /// The last A_i.
    pub h: ModelSet,
    /// C([H] | Ω_{C(H)})
    pub c_h_given_omega: Complexity,
}

impl ImprovementTrace {
    pub fn models(&self) -> impl Iterator<Item = &TraceStep> {
        self.steps.iter().filter(|s| s.kind == StepKind::Model)
    }

    /// ⌈C(A_1) / (θ − α)⌉.
    pub fn iteration_bound(&self) -> Option<u64> {
        let c = self.steps.first()?.complexity.finite()? as u64;
        let gap = self.theta.checked_sub(self.alpha).filter(|&g| g > 0)? as u64;
        Some(c.div_ceil(gap))
    }

    /// The A-complexities strictly decrease across every big step.
    pub fn complexities_decrease(&self) -> bool {
        let cs: Vec<Complexity> = self.models().map(|s| s.complexity).collect();
        cs.windows(2).all(|w| w[1] < w[0])
    }

    /// Each A_{i+1} respects its accumulated deficiency allowance.
    pub fn deficiency_within_bound(&self) -> bool {
        self.models()
            .all(|s| match (s.deficiency, s.deficiency_bound) {
                (Some(d), Some(b)) => d <= b + 1e-9,
                (_, None) => true,
                (None, Some(_)) => false,
            })
    }
}

fn step(
    table: &HaltingTable,
    x: &Bitstring,
    kind: StepKind,
    index: usize,
    model: ModelSet,
) -> Result<TraceStep> {
    let l = table.config().max_prog_len;
    Ok(TraceStep {
        kind,
        index,
        complexity: model.complexity(),
        log_cardinality: model.log2_cardinality(),
        deficiency: deficiency(table, x, &model)?,
        strength: table.total_cond_complexity_upto(model.code(), x, l)?,
        deficiency_bound: None,
        f_slack: None,
        model,
    })
}

/// g(B): the least (C, |A|, [A]) strong model for x with C(A) ≤ C(B) + α
/// and log2|A| ≤ log2|B| + α.
pub fn strong_witness(
    table: &HaltingTable,
    x: &Bitstring,
    b: &ModelSet,
    epsilon: u32,
    alpha: u32,
) -> Result<Option<ModelSet>> {
    let Some(cb) = b.complexity().finite() else {
        return Ok(None);
    };
    let l = table.config().max_prog_len;
    let log_cap = b.log2_cardinality() + alpha as f64;
    let best = strong_models_of(table, x, epsilon, l)?
        .into_iter()
        .map(|(m, _)| m)
        .filter(|m| m.complexity <= cb + alpha && (m.cardinality as f64).log2() <= log_cap + 1e-9)
        .min_by(|p, q| {
            (p.complexity, p.cardinality, &p.code).cmp(&(q.complexity, q.cardinality, &q.code))
        });
    Ok(best.and_then(|m| ModelSet::from_code(table, &m.code)))
}

#[allow(clippy::too_many_arguments)]
pub fn improve_sequence(
    table: &HaltingTable,
    ledger: &OmegaLedger,
    x: &Bitstring,
    a: &ModelSet,
    epsilon: u32,
    alpha: u32,
    theta: u32,
    cap: usize,
) -> Result<ImprovementTrace> {
    if theta <= alpha {
        return Err(LabError::Precondition {
            op: "improve_sequence",
            detail: format!("need theta > alpha, got theta={theta} alpha={alpha}"),
        });
    }
    let first = step(table, x, StepKind::Model, 1, a.clone())?;
    if !first.strength.finite().is_some_and(|s| s <= epsilon) {
        return Err(LabError::Precondition {
            op: "improve_sequence",
            detail: format!("A is not {epsilon}-strong for x (CT = {})", first.strength),
        });
    }
    let mut steps = vec![first];
    let mut current = a.clone();
    let mut allowance = steps[0].deficiency;
    let mut big_steps = 0;
    let stop_reason = loop {
        let i = big_steps + 1;
        let witness = verify_theorem4(table, ledger, x, &current)?;
        let Some(b) = witness.best_group else {
            break StopReason::UnreachableGroup;
        };
        let mut bs = step(table, x, StepKind::Group, i, b.clone())?;
        let da = steps.last().expect("nonempty").deficiency;
        bs.f_slack = bs.deficiency.zip(da).map(|(db, da)| db - da);
        let drop = current.complexity().diff(b.complexity());
        let f_slack = bs.f_slack;
        steps.push(bs);
        if drop.is_none_or(|d| d <= theta as i64) {
            break StopReason::NotBigStep;
        }
        if big_steps >= cap {
            break StopReason::CapReached;
        }
        let Some(next) = strong_witness(table, x, &b, epsilon, alpha)? else {
            return Err(LabError::NoStrongWitness {
                complexity: b.complexity().finite().unwrap_or(u32::MAX),
                alpha,
            });
        };
        allowance = allowance
            .zip(f_slack)
            .map(|(d, f)| d + 2.0 * alpha as f64 + f);
        let mut ns = step(table, x, StepKind::Model, i + 1, next.clone())?;
        ns.deficiency_bound = allowance;
        debug_assert!(ns.complexity < steps[steps.len() - 2].complexity);
        steps.push(ns);
        current = next;
        big_steps += 1;
    };
    let c_h_given_omega = match current.complexity().finite() {
        Some(c) if c <= ledger.m_max => table.cond_complexity_upto(
            current.code(),
            &omega_numeral(ledger, c),
            table.config().max_prog_len,
        )?,
        _ => Complexity::Infinite,
    };
    Ok(ImprovementTrace {
        theta,
        alpha,
        epsilon,
        steps,
        stop_reason,
        big_steps,
        h: current,
        c_h_given_omega,
    })
}

/// CSV rows `kind,index,complexity,log_cardinality,deficiency,strength,deficiency_bound,f_slack`.
pub fn trace_csv(trace: &ImprovementTrace) -> String {
    use std::fmt::Write as _;
    let opt = |v: Option<f64>| v.map_or_else(|| "inf".to_string(), |v| format!("{v:.4}"));
    let mut s = String::from(
        "kind,index,complexity,log_cardinality,deficiency,strength,deficiency_bound,f_slack\n",
    );
    for st in &trace.steps {
        let kind = match st.kind {
            StepKind::Model => "A",
            StepKind::Group => "B",
        };
        let _ = writeln!(
            s,
            "{kind},{},{},{:.4},{},{},{},{}",
            st.index,
            st.complexity,
            st.log_cardinality,
            opt(st.deficiency),
            st.strength,
            st.deficiency_bound
                .map_or_else(String::new, |v| format!("{v:.4}")),
            st.f_slack.map_or_else(String::new, |v| format!("{v:.4}")),
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;
    use crate::enumeration::{build_table, omega_ledger};
    use crate::machine::MachineConfig;

    #[test]
    fn thresholds() {
        assert_eq!(default_thresholds(8), (3, 1));
        assert_eq!(default_thresholds(16), (4, 1));
        assert_eq!(default_thresholds(4), (2, 0));
    }

    #[test]
    fn singleton_stops_or_improves_lawfully() {
        let t = build_table(&MachineConfig::new(14, 256, 2).unwrap(), &[]).unwrap();
        let l = omega_ledger(&t, 14);
        let x = bits("0110");
        let a = ModelSet::singleton(&t, &x);
        let tr = improve_sequence(&t, &l, &x, &a, 14, 1, 3, 8).unwrap();
        assert!(tr.complexities_decrease());
        assert!(tr.deficiency_within_bound());
        assert!(tr.big_steps as u64 <= tr.iteration_bound().unwrap());
        assert_eq!(tr.steps[0].model, a);
        assert!(trace_csv(&tr).lines().count() == tr.steps.len() + 1);
    }

    #[test]
    fn rejects_bad_thresholds() {
        let t = build_table(&MachineConfig::new(12, 256, 2).unwrap(), &[]).unwrap();
        let l = omega_ledger(&t, 12);
        let x = bits("01");
        let a = ModelSet::singleton(&t, &x);
        assert!(improve_sequence(&t, &l, &x, &a, 12, 2, 2, 4).is_err());
    }
}
