//! End-to-end check that a strong minimal sufficient statistic of a normal
//! string has a normal code, run stage by stage at every frontier point.

use crate::bitstring::Bitstring;
use crate::constructions::improve::{improve_sequence, ImprovementTrace};
use crate::constructions::partition::{strongify_partition, total_at_scale, PartitionRecord};
use crate::constructions::theorem3::MssParams;
use crate::enumeration::{Complexity, HaltingTable, OmegaLedger};
use crate::error::{LabError, Result};
use crate::machine::run;
use crate::models::{
    floor_log2, is_mss, normality_gap, profile, strong_models_of, GapRecord, ModelSet, Profile,
};

/// Everything besides the model that drives the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HereditaryParams {
    pub mss: MssParams,
    /// Strength threshold ε for every strong model in the pipeline.
    pub epsilon: u32,
    pub alpha: u32,
    pub theta: u32,
    pub cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Lift,
    StrongWitness,
    Improve,
    Strongify,
    BuildH,
    MapBack,
}

/// The stage a frontier point stopped at and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageFailure {
    pub stage: Stage,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessStage {
    pub model: ModelSet,
    /// CT([W]|x)
    pub strength: u32,
    /// ℓ∞ excess of (C(W), ⌈log|W|⌉) over the lifted point.
    pub excess: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HStage {
    /// ⌊log2 |A_1 ∩ M_1|⌋
    pub bucket: u32,
    pub a1_cap_m1: u64,
    pub m1_size: u64,
    /// The members A′ of the partition with the same bucket, as codes.
    pub h: ModelSet,
    /// |H| ≤ |M_1| / (2·|A_1 ∩ M_1|)
    pub halved_bound_holds: bool,
    /// |H| ≤ |M_1| / 2^bucket, which follows from disjointness alone.
    pub disjointness_bound_holds: bool,
    /// CT(H | [A_1])
    pub strength: Complexity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapStage {
    /// The total program carrying [A_1] to [A].
    pub program: Bitstring,
    pub d: ModelSet,
    pub contains_code: bool,
    /// log2|D| ≤ log2|B| with B = H.
    pub size_bound_holds: bool,
    /// CT(D | [A])
    pub strength: Complexity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointReport {
    /// A frontier point (a, b) of P_[A_1].
    pub point: (u32, u32),
    /// a ≥ C(A), where the conclusion needs no pipeline; the stages run
    /// anyway.
    pub trivial_region: bool,
    pub lifted: (u32, u32),
    pub lift_in_profile: bool,
    pub witness: Option<WitnessStage>,
    pub trace: Option<ImprovementTrace>,
    pub m1: Option<PartitionRecord>,
    pub h: Option<HStage>,
    pub map: Option<MapStage>,
    pub failure: Option<StageFailure>,
}

impl PointReport {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }

    /// The strong-profile point for [A] produced by the map stage.
    pub fn strong_point(&self) -> Option<(u32, u32)> {
        let m = self.map.as_ref()?;
        Some((m.d.complexity().finite()?, m.d.log_bucket()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HereditaryReport {
    pub params: HereditaryParams,
    pub mss_holds: bool,
    /// CT([A]|x)
    pub strength: Complexity,
    pub x_gap: GapRecord,
    /// First total program (length, lex) carrying x to [A], total at scale
    /// l(x) as well.
    pub program: Bitstring,
    pub a1: PartitionRecord,
    pub profile_a1: Profile,
    pub points: Vec<PointReport>,
    pub gap_a1: GapRecord,
    pub gap_a: GapRecord,
}

impl HereditaryReport {
    /// Strong-profile points for [A] reached by the map stage.
    pub fn strong_points(&self) -> Profile {
        Profile::from_points(self.points.iter().filter_map(PointReport::strong_point))
    }

    /// Every reached H and map stage satisfies its exact bounds; `halved`
    /// selects the factor-2 H bound instead of the disjointness bound.
    pub fn stage_bounds_hold(&self, halved: bool) -> bool {
        self.points.iter().all(|p| {
            p.h.as_ref().is_none_or(|h| {
                if halved {
                    h.halved_bound_holds
                } else {
                    h.disjointness_bound_holds
                }
            }) && p
                .map
                .as_ref()
                .is_none_or(|m| m.contains_code && m.size_bound_holds)
        })
    }
}

/// The first program of length ≤ L carrying `from` to `to` that is total
/// at scale (N, T) and halts on every condition of length ≤ `n`.
fn total_program(
    table: &HaltingTable,
    to: &Bitstring,
    from: &Bitstring,
    n: usize,
) -> Result<Option<Bitstring>> {
    let l = table.config().max_prog_len;
    let budget = table.config().step_budget;
    Ok(table
        .find_program_where(to, from, l, true, |p| total_at_scale(&p.bits(), n, budget))?
        .map(|p| p.bits()))
}

pub fn hereditary_check(
    table: &HaltingTable,
    ledger: &OmegaLedger,
    x: &Bitstring,
    a: &ModelSet,
    params: HereditaryParams,
) -> Result<HereditaryReport> {
    let l = table.config().max_prog_len;
    let n = x.len();
    let mss = is_mss(
        table,
        x,
        a,
        params.mss.delta,
        params.mss.epsilon,
        params.mss.d,
        l,
    )?;
    let strength = table.total_cond_complexity_upto(a.code(), x, l)?;
    let x_gap = normality_gap(table, x, Some(params.epsilon), l)?;
    let program = total_program(table, a.code(), x, n)?.ok_or_else(|| LabError::Precondition {
        op: "hereditary_check",
        detail: "no total program of length ≤ L carries x to [A]".into(),
    })?;
    let a1 = strongify_partition(table, a, x, &program, n)?;
    let profile_a1 = profile(table, a1.a1.code(), l);
    let points = table
        .schedule()
        .map_indexed(profile_a1.frontier().len(), |i| {
            run_point(table, ledger, x, a, &a1, profile_a1.frontier()[i], params)
        });
    let points = points.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(HereditaryReport {
        params,
        mss_holds: mss.holds(),
        strength,
        x_gap,
        program,
        gap_a1: normality_gap(table, a1.a1.code(), Some(params.epsilon), l)?,
        gap_a: normality_gap(table, a.code(), Some(params.epsilon), l)?,
        a1,
        profile_a1,
        points,
    })
}

fn run_point(
    table: &HaltingTable,
    ledger: &OmegaLedger,
    x: &Bitstring,
    a: &ModelSet,
    part: &PartitionRecord,
    (pa, pb): (u32, u32),
    params: HereditaryParams,
) -> Result<PointReport> {
    let l = table.config().max_prog_len;
    let n = x.len();
    let a1 = &part.a1;
    let lifted = (pa, pb + a1.log_bucket());
    let mut r = PointReport {
        point: (pa, pb),
        trivial_region: a.complexity().finite().is_none_or(|ca| pa >= ca),
        lifted,
        lift_in_profile: profile(table, x, l).contains(lifted.0, lifted.1),
        witness: None,
        trace: None,
        m1: None,
        h: None,
        map: None,
        failure: None,
    };
    let fail = |r: &mut PointReport, stage, reason: String| {
        r.failure = Some(StageFailure { stage, reason })
    };

    // strong witness nearest to the lifted point
    let best = strong_models_of(table, x, params.epsilon, l)?
        .into_iter()
        .map(|(m, ct)| {
            let (c, b) = m.point();
            let excess = c.saturating_sub(lifted.0).max(b.saturating_sub(lifted.1));
            (excess, m, ct)
        })
        .min_by(|p, q| {
            (p.0, p.1.complexity, p.1.cardinality, &p.1.code).cmp(&(
                q.0,
                q.1.complexity,
                q.1.cardinality,
                &q.1.code,
            ))
        });
    let Some((excess, m, ct)) = best else {
        fail(
            &mut r,
            Stage::StrongWitness,
            format!("x has no {}-strong model", params.epsilon),
        );
        return Ok(r);
    };
    let w = ModelSet::from_code(table, &m.code).expect("decoded above");
    r.witness = Some(WitnessStage {
        model: w.clone(),
        strength: ct,
        excess,
    });

    let trace = match improve_sequence(
        table,
        ledger,
        x,
        &w,
        params.epsilon,
        params.alpha,
        params.theta,
        params.cap,
    ) {
        Ok(t) => t,
        Err(e @ (LabError::NoStrongWitness { .. } | LabError::Precondition { .. })) => {
            fail(&mut r, Stage::Improve, e.to_string());
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let m_model = trace.h.clone();
    r.trace = Some(trace);

    let Some(pm) = total_program(table, m_model.code(), x, n)? else {
        fail(
            &mut r,
            Stage::Strongify,
            "no total program carries x to [M]".into(),
        );
        return Ok(r);
    };
    let m1 = match strongify_partition(table, &m_model, x, &pm, n) {
        Ok(m1) => m1,
        Err(e @ (LabError::NotTotal { .. } | LabError::NotMapped)) => {
            fail(&mut r, Stage::Strongify, e.to_string());
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let m1_set = m1.a1.clone();
    r.m1 = Some(m1);

    let inter = |s: &ModelSet| s.elements().iter().filter(|e| m1_set.contains(e)).count() as u64;
    let cap = inter(a1);
    if cap == 0 {
        fail(&mut r, Stage::BuildH, "A_1 ∩ M_1 is empty".into());
        return Ok(r);
    }
    let bucket = floor_log2(cap);
    let codes: Vec<Bitstring> = part
        .partition
        .iter()
        .filter(|s| {
            let c = inter(s);
            c > 0 && floor_log2(c) == bucket
        })
        .map(|s| s.code().clone())
        .collect();
    let h = ModelSet::new(table, codes);
    let size = h.cardinality() as u128;
    let m1_size = m1_set.cardinality();
    r.h = Some(HStage {
        bucket,
        a1_cap_m1: cap,
        m1_size,
        halved_bound_holds: size * 2 * cap as u128 <= m1_size as u128,
        disjointness_bound_holds: size << bucket <= m1_size as u128,
        strength: table.total_cond_complexity_upto(h.code(), a1.code(), l)?,
        h: h.clone(),
    });

    let budget = table.config().step_budget;
    let pa_prog = match table.find_program(a.code(), a1.code(), l, true)? {
        Some(p) => p.bits(),
        None => {
            fail(
                &mut r,
                Stage::MapBack,
                "no total program carries [A_1] to [A]".into(),
            );
            return Ok(r);
        }
    };
    let mut image = Vec::with_capacity(h.elements().len());
    for t in h.elements() {
        let out = run(&pa_prog, t, budget);
        if !out.halted() {
            fail(
                &mut r,
                Stage::MapBack,
                format!(
                    "the [A_1] → [A] program diverges on a member of H ({} bits)",
                    t.len()
                ),
            );
            return Ok(r);
        }
        image.push(out.output);
    }
    let d = ModelSet::new(table, image);
    r.map = Some(MapStage {
        program: pa_prog,
        contains_code: d.contains(a.code()),
        size_bound_holds: d.cardinality() <= h.cardinality(),
        strength: table.total_cond_complexity_upto(d.code(), a.code(), l)?,
        d,
    });
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{build_table, omega_ledger};
    use crate::machine::MachineConfig;

    #[test]
    fn singleton_model_pipeline_is_lawful() {
        let t = build_table(&MachineConfig::new(14, 256, 2).unwrap(), &[]).unwrap();
        let lg = omega_ledger(&t, 14);
        let x = crate::bitstring::bits("0110");
        let a = ModelSet::singleton(&t, &x);
        let params = HereditaryParams {
            mss: MssParams {
                delta: 2,
                epsilon: 14.0,
                d: 1.0,
            },
            epsilon: 14,
            alpha: 0,
            theta: 2,
            cap: 4,
        };
        let r = hereditary_check(&t, &lg, &x, &a, params).unwrap();
        assert!(r.a1.is_partition());
        assert!(r.a1.a1.contains(&x));
        assert!(r.stage_bounds_hold(false));
        for p in &r.points {
            if let Some(m) = &p.map {
                assert!(m.contains_code);
            }
        }
    }
}
