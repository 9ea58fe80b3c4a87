//! Machine-relative slack constants: measured once by [`measure`], frozen in
//! a versioned `key=value` file, and asserted against afterwards.
//!
//! File format: UTF-8 text, one `key=value` per line, `#` starts a comment
//! line. The first keys are `version`, `machine_id`, `L`, `T`, `N`; a value
//! of `inf` stands for an unreachable (infinite) quantity.

use std::fmt::Write as _;

use crate::bitstring::Bitstring;
use crate::constructions::{
    antistochastic, antistochastic_witnesses, mss_omega_report, profile_translation_check,
    shape_report, theorem3_string, witness_profile,
};
use crate::enumeration::{symmetry_report, Complexity, HaltingTable, OmegaLedger};
use crate::error::{LabError, Result};
use crate::machine::{MachineConfig, ProgramId};
use crate::models::{deficiency, models_of, profile, CylinderFamily, ModelFamily, ModelSet};
use crate::universal::{lemma8_sweep, universal_groups, verify_theorem4};

pub const FORMAT_VERSION: u32 = 1;

/// Strings of length ≤ this feed the profile-shape constants.
pub const PROFILE_MAX_LEN: usize = 6;
/// Strings of length ≤ this feed the symmetry sweep.
pub const SYMMETRY_MAX_LEN: usize = 4;
/// Levels m ≤ this feed the group and Ω-distance constants.
pub const GROUP_MAX_LEVEL: u32 = 12;
/// D in every minimality test.
pub const MSS_D: f64 = 1.0;
/// Antistochastic parameters (n, k) that are calibrated.
pub const ANTISTOCHASTIC_CASES: [(usize, usize); 2] = [(6, 3), (8, 4)];
pub const THEOREM3_K: usize = 2;

const FROZEN_RB8: &str = include_str!("../calibration/rb8-v1.cal");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Calibration {
    entries: Vec<(String, String)>,
}

impl Calibration {
    fn new(config: &MachineConfig) -> Calibration {
        let mut c = Calibration {
            entries: Vec::new(),
        };
        c.set("version", FORMAT_VERSION);
        c.set("machine_id", &config.machine_id);
        c.set("L", config.max_prog_len);
        c.set("T", config.step_budget);
        c.set("N", config.cond_universe);
        c
    }

    /// The checked-in constants for the default configuration.
    pub fn frozen() -> Calibration {
        Calibration::parse(FROZEN_RB8).expect("checked-in calibration parses")
    }

    pub fn parse(text: &str) -> Result<Calibration> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                LabError::Format(format!("calibration line {}: missing '='", i + 1))
            })?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        let c = Calibration { entries };
        if c.get_u32("version")? != FORMAT_VERSION {
            return Err(LabError::Calibration(format!(
                "unsupported calibration version {}",
                c.raw("version").unwrap_or("?")
            )));
        }
        Ok(c)
    }

    pub fn render(&self) -> String {
        let mut s = String::from("# algostat calibration constants\n");
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    fn set(&mut self, key: &str, value: impl ToString) {
        let v = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = v,
            None => self.entries.push((key.to_string(), v)),
        }
    }

    fn set_opt<T: ToString>(&mut self, key: &str, value: Option<T>) {
        self.set(
            key,
            value.map_or_else(|| "inf".to_string(), |v| v.to_string()),
        );
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.raw(key)
            .ok_or_else(|| LabError::Calibration(format!("missing key {key}")))
    }

    fn bad(key: &str, v: &str) -> LabError {
        LabError::Calibration(format!("bad value for {key}: {v}"))
    }

    pub fn get_u32(&self, key: &str) -> Result<u32> {
        let v = self.require(key)?;
        v.parse().map_err(|_| Self::bad(key, v))
    }

    pub fn get_i64(&self, key: &str) -> Result<i64> {
        let v = self.require(key)?;
        v.parse().map_err(|_| Self::bad(key, v))
    }

    pub fn get_f64(&self, key: &str) -> Result<f64> {
        let v = self.require(key)?;
        v.parse().map_err(|_| Self::bad(key, v))
    }

    /// `None` for `inf`.
    pub fn get_opt_i64(&self, key: &str) -> Result<Option<i64>> {
        match self.require(key)? {
            "inf" => Ok(None),
            v => v.parse().map(Some).map_err(|_| Self::bad(key, v)),
        }
    }

    pub fn get_opt_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.require(key)? {
            "inf" => Ok(None),
            v => v.parse().map(Some).map_err(|_| Self::bad(key, v)),
        }
    }

    /// Whether the constants were measured under `config`.
    pub fn matches(&self, config: &MachineConfig) -> bool {
        self.raw("machine_id") == Some(config.machine_id.as_str())
            && self.get_u32("L").ok() == Some(config.max_prog_len)
            && self.get_u32("T").ok() == Some(config.step_budget)
            && self.get_u32("N").ok() == Some(config.cond_universe)
    }

    /// Frozen constants for `config`, refusing a mismatched file.
    pub fn for_config(config: &MachineConfig) -> Result<Calibration> {
        let c = Calibration::frozen();
        if !c.matches(config) {
            return Err(LabError::Calibration(format!(
                "no frozen calibration for {}; run `algostat calibrate`",
                config.describe()
            )));
        }
        Ok(c)
    }

    /// Keys whose values differ between `self` and `other`.
    pub fn diff(&self, other: &Calibration) -> Vec<(String, Option<String>, Option<String>)> {
        let mut keys: Vec<&str> = self.entries.iter().map(|(k, _)| k.as_str()).collect();
        for (k, _) in &other.entries {
            if !keys.contains(&k.as_str()) {
                keys.push(k);
            }
        }
        keys.into_iter()
            .filter_map(|k| {
                let a = self.raw(k);
                let b = other.raw(k);
                (a != b).then(|| (k.to_string(), a.map(String::from), b.map(String::from)))
            })
            .collect()
    }
}

fn max_opt(acc: Option<Option<i64>>, v: Option<i64>) -> Option<Option<i64>> {
    // outer None: nothing seen; inner None: some value was infinite
    Some(match (acc, v) {
        (None, v) => v,
        (Some(None), _) | (_, None) => None,
        (Some(Some(a)), Some(b)) => Some(a.max(b)),
    })
}

/// max over l(x) ≤ `max_len` of C(x) − l(x); `None` if some such x is
/// unreachable.
pub fn embed_overhead(table: &HaltingTable, max_len: usize) -> Option<i64> {
    Bitstring::all_up_to(max_len)
        .map(|x| {
            table
                .complexity(&x)
                .finite()
                .map(|c| c as i64 - x.len() as i64)
        })
        .fold(None, max_opt)
        .flatten()
}

/// Least c with (a + b + c, l) ∈ P_x for every frontier point (a, b + l)
/// and every split; `None` when some row l is empty.
pub fn slice_slack(table: &HaltingTable, x: &Bitstring) -> Option<i64> {
    let p = profile(table, x, table.config().max_prog_len);
    let mut worst = i64::MIN;
    for &(a, bl) in p.frontier() {
        for l in 0..=bl {
            let b = bl - l;
            let m = p.min_m(l)? as i64;
            worst = worst.max(m - (a + b) as i64);
        }
    }
    Some(worst.max(0))
}

/// Least c with a + b ≥ C(x) − c at every profile point.
pub fn two_part_slack(table: &HaltingTable, x: &Bitstring) -> Option<i64> {
    let cx = table.complexity(x).finite()? as i64;
    let p = profile(table, x, table.config().max_prog_len);
    p.frontier()
        .iter()
        .map(|&(a, b)| cx - (a + b) as i64)
        .max()
        .map(|v| v.max(0))
}

/// Largest CT([A]|x) over cylinder models A ∋ x of finite complexity.
pub fn cylinder_overhead(table: &HaltingTable, x: &Bitstring) -> Result<Option<i64>> {
    let l = table.config().max_prog_len;
    let mut worst: Option<Option<i64>> = None;
    for m in CylinderFamily.members_containing(x) {
        let a = ModelSet::new(table, m);
        if !a.complexity().is_finite() {
            continue;
        }
        let ct = table.total_cond_complexity_upto(a.code(), x, l)?;
        worst = max_opt(worst, ct.finite().map(i64::from));
    }
    Ok(worst.unwrap_or(Some(0)))
}

/// max C(S_{m,s}) − (m − s) over reachable groups with m ≤ `max_level`,
/// with the count of unreachable groups.
pub fn group_overhead(
    table: &HaltingTable,
    ledger: &OmegaLedger,
    max_level: u32,
) -> Result<(Option<i64>, usize, usize)> {
    let mut worst = None;
    let mut unreachable = 0;
    let mut total = 0;
    for m in 0..=max_level.min(ledger.m_max) {
        let dec = universal_groups(ledger, m)?;
        for g in &dec.groups {
            total += 1;
            match dec.model(table, ledger, g).complexity().finite() {
                Some(c) => {
                    let v = c as i64 - (m as i64 - g.s as i64);
                    worst = Some(worst.map_or(v, |w: i64| w.max(v)));
                }
                None => unreachable += 1,
            }
        }
    }
    Ok((worst, unreachable, total))
}

/// Length of the first program (length, lex) that copies every condition
/// of length ≤ N and halts on all of them.
pub fn copy_constant(config: &MachineConfig) -> Option<u32> {
    let conds: Vec<Bitstring> = Bitstring::all_up_to(config.cond_universe as usize).collect();
    (0..ProgramId::count_up_to(config.max_prog_len))
        .map(ProgramId)
        .find_map(|p| {
            let bits = p.bits();
            conds
                .iter()
                .all(|u| crate::machine::run(&bits, u, config.step_budget).output() == Some(u))
                .then_some(p.len())
        })
}

/// Largest symmetry-of-information gap over l(x), l(y) ≤ `max_len`.
pub fn symmetry_max_gap(table: &HaltingTable, max_len: usize) -> Result<Option<i64>> {
    let strings: Vec<Bitstring> = Bitstring::all_up_to(max_len).collect();
    let mut worst: Option<Option<i64>> = None;
    for x in &strings {
        for y in &strings {
            let r = symmetry_report(table, x, y)?;
            worst = max_opt(worst, r.gap_x_first.map(|g| g as i64));
            worst = max_opt(worst, r.gap_y_first.map(|g| g as i64));
        }
    }
    Ok(worst.flatten())
}

/// The Theorem-3 minimality thresholds: ε = ⌈δ(x|A)⌉ and the least δ
/// leaving no counterexample at that ε.
pub fn mss_thresholds(
    table: &HaltingTable,
    x: &Bitstring,
    a: &ModelSet,
) -> Result<Option<(u32, f64)>> {
    let l = table.config().max_prog_len;
    let (Some(d), Some(ca), Some(cx)) = (
        deficiency(table, x, a)?,
        a.complexity().finite(),
        table.complexity(x).finite(),
    ) else {
        return Ok(None);
    };
    let eps = d.max(0.0).ceil();
    let bound = eps + MSS_D * (cx.max(1) as f64).log2();
    let delta = models_of(table, x, l)
        .into_iter()
        .filter(|b| {
            b.complexity as f64 + (b.cardinality as f64).log2() - (cx as f64) < bound - 1e-9
        })
        .map(|b| ca.saturating_sub(b.complexity))
        .max()
        .unwrap_or(0);
    Ok(Some((delta, eps)))
}

/// x = 0^4·r with r a 4-bit string of largest C(r|0^4), first in lex order,
/// and A = {0^4·v : l(v) = 4}.
pub fn example1_pair(table: &HaltingTable) -> Result<(Bitstring, ModelSet)> {
    let zeros = Bitstring::from_u64(0, 4);
    let l = table.config().max_prog_len;
    let mut best: Option<(Complexity, Bitstring)> = None;
    for r in Bitstring::all_of_len(4) {
        let c = table.cond_complexity_upto(&r, &zeros, l)?;
        if best.as_ref().is_none_or(|(bc, _)| c > *bc) {
            best = Some((c, r));
        }
    }
    let r = best.expect("16 candidates").1;
    Ok((zeros.concat(&r), ModelSet::cylinder(table, &zeros, 8)))
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Runs every calibration oracle under the table's configuration.
pub fn measure(table: &HaltingTable, ledger: &OmegaLedger) -> Result<Calibration> {
    let config = table.config();
    let l = config.max_prog_len;
    let mut c = Calibration::new(config);

    c.set_opt(
        "c_embed",
        embed_overhead(table, (l as usize).saturating_sub(6).min(16)),
    );

    let mut slice = None;
    let mut two_part = None;
    let mut cyl = None;
    for x in Bitstring::all_up_to(PROFILE_MAX_LEN) {
        slice = max_opt(slice, slice_slack(table, &x));
        two_part = max_opt(two_part, two_part_slack(table, &x));
        cyl = max_opt(cyl, cylinder_overhead(table, &x)?);
    }
    c.set_opt("c_slice", slice.flatten());
    c.set_opt("c_two_part", two_part.flatten());
    let eps_cyl = cyl.flatten();
    c.set_opt("eps_cylinder", eps_cyl);

    let (cg, unreachable, total) = group_overhead(table, ledger, GROUP_MAX_LEVEL)?;
    c.set_opt("c_group", cg);
    c.set("c_group_unreachable", unreachable);
    c.set("c_group_total", total);

    c.set_opt("copy_constant", copy_constant(config));
    c.set_opt(
        "symmetry_max_gap",
        symmetry_max_gap(table, SYMMETRY_MAX_LEN)?,
    );

    let sweep = lemma8_sweep(table, ledger, GROUP_MAX_LEVEL)?;
    c.set_opt("lemma8_slack", sweep.max_slack);
    c.set("lemma8_unreachable", sweep.unreachable_pairs);

    for (n, k) in ANTISTOCHASTIC_CASES {
        let x = antistochastic(table, n, k)?;
        let shape = shape_report(table, &x, k as u32, l);
        let w = antistochastic_witnesses(table, &x, k)?;
        let wp = witness_profile(&w, eps_cyl.unwrap_or(i64::from(l)) as u32);
        let prefix = format!("anti_{n}_{k}");
        c.set(&format!("{prefix}_x"), &x);
        c.set(&format!("{prefix}_epsilon"), shape.antistochastic_epsilon);
        c.set_opt(&format!("{prefix}_distance"), shape.distance_to_target);
        c.set_opt(
            &format!("{prefix}_witness_gap"),
            shape.profile.excess_over(&wp),
        );
    }

    match measure_theorem3(table, ledger, &mut c) {
        Err(LabError::Scale { .. }) => {
            for k in THEOREM3_KEYS {
                c.set(k, "na");
            }
        }
        r => r?,
    }

    let (ex, ea) = example1_pair(table)?;
    c.set_opt(
        "example1_deficiency",
        deficiency(table, &ex, &ea)?.map(fmt_f64),
    );
    let w = verify_theorem4(table, ledger, &ex, &ea)?;
    c.set_opt("theorem4_delta_gap_raw", w.delta_gap_raw.map(fmt_f64));
    c.set_opt("theorem4_delta_gap_sliced", w.delta_gap_sliced.map(fmt_f64));
    Ok(c)
}

/// Keys written by the Theorem-3 oracle; `na` when the table is too small.
pub const THEOREM3_KEYS: [&str; 7] = [
    "t3_delta",
    "t3_epsilon",
    "t3_d",
    "t3_strength",
    "t3_mss_omega",
    "t3_translation_epsilon",
    "t3_translation_below_slack",
];

fn measure_theorem3(table: &HaltingTable, ledger: &OmegaLedger, c: &mut Calibration) -> Result<()> {
    let l = table.config().max_prog_len;
    let t3 = theorem3_string(table, THEOREM3_K)?;
    let (delta, eps) = mss_thresholds(table, &t3.x, &t3.a)?.ok_or_else(|| {
        LabError::Calibration("the Theorem-3 model has infinite deficiency".into())
    })?;
    c.set("t3_delta", delta);
    c.set("t3_epsilon", fmt_f64(eps));
    c.set("t3_d", fmt_f64(MSS_D));
    c.set_opt(
        "t3_strength",
        table
            .total_cond_complexity_upto(t3.a.code(), &t3.x, l)?
            .finite(),
    );
    c.set_opt(
        "t3_mss_omega",
        mss_omega_report(table, ledger, &t3.a)?.finite(),
    );
    let tr = profile_translation_check(table, &t3.x, &t3.a, eps.max(tr_strength(table, &t3)?))?;
    c.set_opt("t3_translation_epsilon", tr.region_epsilon);
    c.set_opt("t3_translation_below_slack", tr.below_slack);
    Ok(())
}

fn tr_strength(table: &HaltingTable, t3: &crate::constructions::Theorem3String) -> Result<f64> {
    let l = table.config().max_prog_len;
    Ok(table
        .total_cond_complexity_upto(t3.a.code(), &t3.x, l)?
        .finite()
        .map_or(f64::INFINITY, f64::from))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::build_table;

    #[test]
    fn frozen_file_parses_and_matches_default() {
        let c = Calibration::frozen();
        assert!(c.matches(&MachineConfig::default()));
        assert!(c.get_u32("c_slice").is_ok());
        assert_eq!(Calibration::parse(&c.render()).unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        assert!(Calibration::parse("version=1\nnoequals\n").is_err());
        assert!(Calibration::parse("version=9\n").is_err());
        let c = Calibration::parse("version=1\na=inf\nb=3\n").unwrap();
        assert_eq!(c.get_opt_i64("a").unwrap(), None);
        assert_eq!(c.get_opt_i64("b").unwrap(), Some(3));
        assert!(c.get_u32("zz").is_err());
    }

    #[test]
    fn copy_constant_is_read_then_emit() {
        assert_eq!(
            copy_constant(&MachineConfig::new(12, 256, 3).unwrap()),
            Some(9)
        );
    }

    #[test]
    fn small_table_slacks() {
        let t = build_table(&MachineConfig::new(14, 256, 2).unwrap(), &[]).unwrap();
        for x in Bitstring::all_up_to(3) {
            assert!(two_part_slack(&t, &x).is_some());
            assert!(slice_slack(&t, &x).is_some());
        }
        assert_eq!(embed_overhead(&t, 3), Some(6));
    }
}
