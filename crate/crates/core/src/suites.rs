//! Verification suites: exhaustive sweeps that check exact invariants and
//! calibrated inequalities, collecting every violation instead of stopping
//! at the first.

use std::collections::HashSet;
use std::fmt;

use crate::bitstring::Bitstring;
use crate::calibration::Calibration;
use crate::enumeration::{Complexity, HaltingTable, OmegaLedger};
use crate::error::{LabError, Result};
use crate::machine::{decode_set, encode_set};
use crate::models::{profile, restricted_profile, strong_profile, CylinderFamily, ModelSet};
use crate::universal::{locate, omega_decomposition, universal_groups};

pub const SUITES: [&str; 6] = ["codec", "ledger", "groups", "theorem1", "containment", "ct"];

/// Outcome of one suite run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: u64,
    pub violations: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            checks: 0,
            violations: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} checks, {} violations)",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks,
            self.violations.len()
        )
    }
}

/// Runs the suite called `name` with size parameter `n` (string length for
/// string sweeps, level for ledger and group sweeps).
pub fn run_suite(
    name: &str,
    table: &HaltingTable,
    ledger: &OmegaLedger,
    calibration: &Calibration,
    n: usize,
) -> Result<SuiteReport> {
    match name {
        "codec" => Ok(codec_suite(n)),
        "ledger" => Ok(ledger_suite(table, ledger, n as u32)),
        "groups" => groups_suite(table, ledger, n as u32),
        "theorem1" => theorem1_suite(table, calibration, n),
        "containment" => containment_suite(table, calibration, n),
        "ct" => ct_suite(table, n),
        other => Err(LabError::Parse(format!(
            "verify: unknown suite {other:?} (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

/// Set codec round trip on every set of at most three strings of length
/// ≤ `max_len`, and code → set → code on every valid code of length ≤ 16.
pub fn codec_suite(max_len: usize) -> SuiteReport {
    let mut r = SuiteReport::new("codec");
    let strings: Vec<Bitstring> = Bitstring::all_up_to(max_len).collect();
    let mut round = |set: Vec<&Bitstring>| {
        let mut sorted: Vec<Bitstring> = set.iter().map(|s| (*s).clone()).collect();
        sorted.sort();
        sorted.dedup();
        let code = encode_set(set.iter().copied());
        r.check(decode_set(&code).as_ref() == Some(&sorted), || {
            format!("decode(encode({sorted:?})) differs")
        });
    };
    round(Vec::new());
    for (i, a) in strings.iter().enumerate() {
        round(vec![a]);
        for (j, b) in strings.iter().enumerate().skip(i + 1) {
            round(vec![b, a]);
            for c in &strings[j + 1..] {
                round(vec![c, a, b]);
            }
        }
    }
    for code in Bitstring::all_up_to(16) {
        if let Some(set) = decode_set(&code) {
            r.check(encode_set(set.iter()) == code, || {
                format!("encode(decode({code})) differs")
            });
        }
    }
    r
}

/// Ω_m nondecreasing, L_m ⊆ L_{m+1}, and L_m = {x : C(x) ≤ m} for m ≤ `m_max`.
pub fn ledger_suite(table: &HaltingTable, ledger: &OmegaLedger, m_max: u32) -> SuiteReport {
    let mut r = SuiteReport::new("ledger");
    let m_max = m_max.min(ledger.m_max);
    for m in 0..=m_max {
        let members = ledger.members(m);
        r.check(members.len() as u64 == ledger.omega(m), || {
            format!(
                "|L_{m}| = {} but Ω_{m} = {}",
                members.len(),
                ledger.omega(m)
            )
        });
        let mut expected: Vec<&Bitstring> = table
            .outputs()
            .iter()
            .filter(|x| table.complexity(x) <= Complexity::Finite(m))
            .collect();
        let mut got = members.clone();
        expected.sort();
        got.sort();
        r.check(got == expected, || {
            format!("L_{m} differs from {{x : C(x) ≤ {m}}}")
        });
        if m < m_max {
            r.check(ledger.omega(m) <= ledger.omega(m + 1), || {
                format!("Ω_{m} > Ω_{}", m + 1)
            });
            let next: HashSet<&Bitstring> = ledger.members(m + 1).into_iter().collect();
            r.check(members.iter().all(|x| next.contains(x)), || {
                format!("L_{m} ⊄ L_{}", m + 1)
            });
        }
    }
    r
}

/// Groups partition L_m into blocks matching the binary digits of Ω_m, and
/// `locate` agrees with a linear scan of the blocks.
pub fn groups_suite(table: &HaltingTable, ledger: &OmegaLedger, m_max: u32) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("groups");
    for m in 0..=m_max.min(ledger.m_max) {
        let dec = universal_groups(ledger, m)?;
        let omega = ledger.omega(m);
        let sizes: Vec<u32> = dec.groups.iter().map(|g| g.s).collect();
        r.check(sizes == omega_decomposition(omega), || {
            format!("m={m}: group exponents {sizes:?} vs digits of Ω_{m}={omega}")
        });
        let mut next = 0u64;
        for g in &dec.groups {
            r.check(g.first_index == next && g.count == 1u64 << g.s, || {
                format!("m={m}: group s={} is not the next block of size 2^s", g.s)
            });
            next += g.count;
        }
        r.check(next == omega, || {
            format!("m={m}: groups cover {next} of {omega}")
        });
        for x in ledger.members(m) {
            let scan = dec
                .groups
                .iter()
                .find(|g| dec.members(ledger, g).contains(&x))
                .map(|g| g.s);
            let located = locate(table, ledger, x, m)?.0;
            r.check(scan == Some(located), || {
                format!("m={m}: locate({x}) = {located}, scan {scan:?}")
            });
        }
    }
    Ok(r)
}

/// Profile shape for every x with l(x) ≤ `max_len`: well-formed frontier,
/// the singleton and cube points, and the slice and two-part inequalities
/// with the calibrated constants.
pub fn theorem1_suite(
    table: &HaltingTable,
    calibration: &Calibration,
    max_len: usize,
) -> Result<SuiteReport> {
    // `inf` constants mean no finite slack was measurable: the slice check
    // then only asks that row c be reached, and the two-part check is void.
    let c_slice = calibration.get_opt_i64("c_slice")?;
    let c_two_part = calibration.get_opt_i64("c_two_part")?;
    let l = table.config().max_prog_len;
    let mut r = SuiteReport::new("theorem1");
    for x in Bitstring::all_up_to(max_len) {
        let p = profile(table, &x, l);
        r.check(p.is_well_formed(), || {
            format!("{x}: frontier not well formed")
        });
        if let Some(c) = ModelSet::singleton(table, &x).complexity().finite() {
            r.check(p.contains(c, 0), || {
                format!("{x}: (C({{x}}), 0) = ({c}, 0) missing")
            });
        }
        let n = x.len() as u32;
        if let Some(c) = ModelSet::cube(table, x.len()).complexity().finite() {
            r.check(p.contains(c, n), || {
                format!("{x}: (C(cube), n) = ({c}, {n}) missing")
            });
        }
        for &(a, bc) in p.frontier() {
            for c in 0..=bc {
                let ok = match c_slice {
                    Some(k) => p.contains((a + bc - c) + k as u32, c),
                    None => p.min_m(c).is_some(),
                };
                r.check(ok, || {
                    format!("{x}: slice point for row {c} from ({a}, {bc}) missing")
                });
            }
        }
        if let (Some(cx), Some(k)) = (table.complexity(&x).finite(), c_two_part) {
            for &(a, b) in p.frontier() {
                r.check(i64::from(a + b) + k >= i64::from(cx), || {
                    format!("{x}: two-part bound fails at ({a}, {b}), C(x) = {cx}")
                });
            }
        }
    }
    Ok(r)
}

/// restricted(cylinders) ⊆ strong(ε_𝓑) ⊆ profile for every x with l(x) ≤ `max_len`.
pub fn containment_suite(
    table: &HaltingTable,
    calibration: &Calibration,
    max_len: usize,
) -> Result<SuiteReport> {
    let eps = calibration.get_opt_i64("eps_cylinder")?.map(|e| e as u32);
    let l = table.config().max_prog_len;
    let mut r = SuiteReport::new("containment");
    for x in Bitstring::all_up_to(max_len) {
        let full = profile(table, &x, l);
        let strong = strong_profile(table, &x, eps, l)?;
        let restricted = restricted_profile(table, &x, &CylinderFamily, l);
        r.check(restricted.is_subset_of(&strong), || {
            format!("{x}: cylinder profile ⊄ strong profile")
        });
        r.check(strong.is_subset_of(&full), || {
            format!("{x}: strong profile ⊄ profile")
        });
    }
    Ok(r)
}

/// C(y|x) ≤ CT(y|x) for all l(x), l(y) ≤ `max_len`.
pub fn ct_suite(table: &HaltingTable, max_len: usize) -> Result<SuiteReport> {
    let l = table.config().max_prog_len;
    let strings: Vec<Bitstring> = Bitstring::all_up_to(max_len).collect();
    let mut r = SuiteReport::new("ct");
    for x in &strings {
        for y in &strings {
            let c = table.cond_complexity_upto(y, x, l)?;
            let ct = table.total_cond_complexity_upto(y, x, l)?;
            r.check(c <= ct, || format!("C({y}|{x}) = {c} > CT = {ct}"));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{build_table, omega_ledger};
    use crate::machine::MachineConfig;

    #[test]
    fn small_suites_pass() {
        let t = build_table(&MachineConfig::new(14, 256, 2).unwrap(), &[]).unwrap();
        let ledger = omega_ledger(&t, 10);
        assert!(codec_suite(2).passed());
        assert!(ledger_suite(&t, &ledger, 10).passed());
        assert!(groups_suite(&t, &ledger, 10).unwrap().passed());
        assert!(ct_suite(&t, 2).unwrap().passed());
    }

    #[test]
    fn unknown_suite_is_a_parse_error() {
        let t = build_table(&MachineConfig::new(8, 64, 1).unwrap(), &[]).unwrap();
        let ledger = omega_ledger(&t, 4);
        let err = run_suite("nope", &t, &ledger, &Calibration::frozen(), 1).unwrap_err();
        assert!(matches!(err, LabError::Parse(_)));
    }
}
