//! The halting table: outcomes of every program of length ≤ L on recorded
//! conditions.
//!
//! Programs are first run on Λ. A run that never executes `READ` is
//! independent of the condition, so its Λ outcome is shared by every
//! condition; only the remaining *reading* programs are re-run per
//! condition. Per-condition records are filled in program-length tiers and
//! extended on demand, so short conditional queries never pay for the full
//! program space.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use crate::bitstring::Bitstring;
use crate::enumeration::ledger::DiscoveryKey;
use crate::enumeration::Complexity;
use crate::error::{LabError, Result};
use crate::machine::interp::{trace, Program};
use crate::machine::{decode_set, ExecutionOutcome, MachineConfig, ProgramId, Status};
use crate::par::Schedule;

/// Program lengths at which on-demand conditional searches first stop.
const SEARCH_TIERS: [u32; 2] = [13, 16];

/// Longest condition accepted by the table, in bits.
pub const COND_BOUND: usize = 1 << 16;

/// Default memory ceiling for projected table size (3 GiB).
pub const DEFAULT_MEMORY_CEILING: u64 = 3 << 30;

pub(crate) const NONE: u32 = u32::MAX;
pub(crate) const LOCAL: u32 = 1 << 31;
pub(crate) const READS: u32 = 1 << 31;
const CHUNK: usize = 1 << 14;
const NO_LEN: u8 = u8::MAX;

#[derive(Debug, Clone, Copy)]
pub struct TableOptions {
    pub schedule: Schedule,
    pub memory_ceiling: u64,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            schedule: Schedule::Auto,
            memory_ceiling: DEFAULT_MEMORY_CEILING,
        }
    }
}

/// Outcomes of the reading programs on one condition, for every program of
/// length ≤ `covered_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CondRecord {
    pub covered_len: u32,
    /// Per reading program (by rank): `NONE`, a global output id, or
    /// `LOCAL | i` indexing `locals`.
    pub out: Vec<u32>,
    pub steps: Vec<u32>,
    /// Outputs never produced on Λ, in order of first appearance.
    pub locals: Vec<Bitstring>,
}

pub struct HaltingTable {
    config: MachineConfig,
    options: TableOptions,
    outputs: Vec<Bitstring>,
    index: HashMap<Bitstring, u32>,
    base_out: Vec<u32>,
    base_steps: Vec<u32>,
    reading: Vec<u32>,
    min_len: Vec<u8>,
    static_min_len: Vec<u8>,
    first_key: Vec<DiscoveryKey>,
    conds: RwLock<BTreeMap<Bitstring, Arc<CondRecord>>>,
    totality: Vec<AtomicU8>,
    totality_conditions: Vec<Bitstring>,
    sets: OnceLock<SetCatalog>,
}

impl std::fmt::Debug for HaltingTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HaltingTable")
            .field("config", &self.config)
            .field("outputs", &self.outputs.len())
            .field("reading", &self.reading.len())
            .finish()
    }
}

/// Builds the table for `config` and records every listed condition over
/// the full program space.
pub fn build_table(config: &MachineConfig, conditions: &[Bitstring]) -> Result<HaltingTable> {
    build_table_with(config, conditions, TableOptions::default())
}

pub fn build_table_with(
    config: &MachineConfig,
    conditions: &[Bitstring],
    options: TableOptions,
) -> Result<HaltingTable> {
    config.validate()?;
    if config.step_budget >= READS {
        return Err(LabError::Config("step_budget must be below 2^31".into()));
    }
    for y in conditions {
        if y.len() > COND_BOUND {
            return Err(LabError::ConditionTooLong {
                len: y.len(),
                bound: COND_BOUND,
            });
        }
    }
    let programs = config.program_count() as u64;
    let mut distinct: Vec<&Bitstring> = conditions.iter().filter(|y| !y.is_empty()).collect();
    distinct.sort();
    distinct.dedup();
    // Reading programs are roughly a quarter of all programs; project the
    // worst case where every program reads.
    let projected = programs * 9 + distinct.len() as u64 * programs * 8;
    if projected > options.memory_ceiling {
        return Err(LabError::ResourceLimit {
            projected,
            ceiling: options.memory_ceiling,
        });
    }

    let budget = config.step_budget;
    let empty = Bitstring::empty();
    let mut outputs: Vec<Bitstring> = Vec::new();
    let mut index: HashMap<Bitstring, u32> = HashMap::new();
    let mut base_out = Vec::with_capacity(programs as usize);
    let mut base_steps = Vec::with_capacity(programs as usize);
    let chunks = (programs as usize).div_ceil(CHUNK);
    for batch in (0..chunks).collect::<Vec<_>>().chunks(64) {
        let results = options.schedule.map_indexed(batch.len(), |j| {
            let c = batch[j];
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(programs as usize);
            (lo..hi)
                .map(|id| {
                    let t = trace(&Program::from_id(ProgramId(id as u32)), &empty, budget);
                    let flag = if t.read_condition { READS } else { 0 };
                    (t.halted.then_some(t.output), t.steps | flag)
                })
                .collect::<Vec<_>>()
        });
        for (out, steps) in results.into_iter().flatten() {
            let code = match out {
                None => NONE,
                Some(o) => intern(&mut outputs, &mut index, o),
            };
            base_out.push(code);
            base_steps.push(steps);
        }
    }
    let table = HaltingTable::assemble(
        config.clone(),
        options,
        outputs,
        index,
        base_out,
        base_steps,
    );
    for y in distinct {
        table.ensure_condition(y, config.max_prog_len)?;
    }
    Ok(table)
}

fn intern(outputs: &mut Vec<Bitstring>, index: &mut HashMap<Bitstring, u32>, o: Bitstring) -> u32 {
    if let Some(&i) = index.get(&o) {
        return i;
    }
    let i = outputs.len() as u32;
    index.insert(o.clone(), i);
    outputs.push(o);
    i
}

impl HaltingTable {
    pub(crate) fn assemble(
        config: MachineConfig,
        options: TableOptions,
        outputs: Vec<Bitstring>,
        index: HashMap<Bitstring, u32>,
        base_out: Vec<u32>,
        base_steps: Vec<u32>,
    ) -> HaltingTable {
        let n_out = outputs.len();
        let mut min_len = vec![NO_LEN; n_out];
        let mut static_min_len = vec![NO_LEN; n_out];
        let mut first_key = vec![DiscoveryKey::NEVER; n_out];
        let mut reading = Vec::new();
        for (id, (&o, &s)) in base_out.iter().zip(&base_steps).enumerate() {
            let pid = ProgramId(id as u32);
            let reads = s & READS != 0;
            if reads {
                reading.push(id as u32);
            }
            if o == NONE {
                continue;
            }
            let len = pid.len() as u8;
            let o = o as usize;
            min_len[o] = min_len[o].min(len);
            if !reads {
                static_min_len[o] = static_min_len[o].min(len);
            }
            let key = DiscoveryKey::of(pid, s & !READS);
            if key < first_key[o] {
                first_key[o] = key;
            }
        }
        let totality = (0..reading.len()).map(|_| AtomicU8::new(0)).collect();
        let totality_conditions = Bitstring::all_up_to(config.cond_universe as usize).collect();
        HaltingTable {
            config,
            options,
            outputs,
            index,
            base_out,
            base_steps,
            reading,
            min_len,
            static_min_len,
            first_key,
            conds: RwLock::new(BTreeMap::new()),
            totality,
            totality_conditions,
            sets: OnceLock::new(),
        }
    }

    pub fn config(&self) -> &MachineConfig {
        &self.config
    }

    pub fn schedule(&self) -> Schedule {
        self.options.schedule
    }

    pub fn program_count(&self) -> u32 {
        self.base_out.len() as u32
    }

    /// Number of condition-dependent programs.
    pub fn reading_count(&self) -> usize {
        self.reading.len()
    }

    /// Distinct outputs of programs halting on Λ, in order of first appearance.
    pub fn outputs(&self) -> &[Bitstring] {
        &self.outputs
    }

    pub fn output_id(&self, x: &Bitstring) -> Option<u32> {
        self.index.get(x).copied()
    }

    pub(crate) fn base_raw(&self) -> (&[u32], &[u32]) {
        (&self.base_out, &self.base_steps)
    }

    pub(crate) fn records(&self) -> Vec<(Bitstring, Arc<CondRecord>)> {
        let g = self.conds.read().expect("table lock poisoned");
        g.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub(crate) fn insert_record(&self, y: Bitstring, rec: CondRecord) {
        let mut g = self.conds.write().expect("table lock poisoned");
        g.insert(y, Arc::new(rec));
    }

    /// Conditions recorded over the full program space (Λ is always recorded).
    pub fn recorded_conditions(&self) -> Vec<Bitstring> {
        let mut v = vec![Bitstring::empty()];
        let g = self.conds.read().expect("table lock poisoned");
        v.extend(
            g.iter()
                .filter(|(_, r)| r.covered_len >= self.config.max_prog_len)
                .map(|(k, _)| k.clone()),
        );
        v
    }

    pub fn is_recorded(&self, y: &Bitstring) -> bool {
        y.is_empty() || self.covered_len(y) >= Some(self.config.max_prog_len)
    }

    fn covered_len(&self, y: &Bitstring) -> Option<u32> {
        let g = self.conds.read().expect("table lock poisoned");
        g.get(y).map(|r| r.covered_len)
    }

    /// Drops a condition record to bound memory. Λ cannot be forgotten.
    pub fn forget_condition(&self, y: &Bitstring) {
        let mut g = self.conds.write().expect("table lock poisoned");
        g.remove(y);
    }

    fn reading_below(&self, len: u32) -> usize {
        let limit = ProgramId::count_up_to(len.min(self.config.max_prog_len));
        self.reading.partition_point(|&id| id < limit)
    }

    /// Records `y` for every program of length ≤ `len` (clamped to L).
    /// Cheap when the condition is already covered.
    pub fn ensure_condition(&self, y: &Bitstring, len: u32) -> Result<()> {
        if y.is_empty() {
            return Ok(());
        }
        if y.len() > COND_BOUND {
            return Err(LabError::ConditionTooLong {
                len: y.len(),
                bound: COND_BOUND,
            });
        }
        let len = len.min(self.config.max_prog_len);
        let existing = {
            let g = self.conds.read().expect("table lock poisoned");
            g.get(y).cloned()
        };
        if existing.as_ref().is_some_and(|r| r.covered_len >= len) {
            return Ok(());
        }
        let have = existing.as_ref().map_or(0, |r| r.out.len());
        let want = self.reading_below(len);
        let recorded = self.conds.read().expect("table lock poisoned").len() as u64;
        let projected =
            self.base_out.len() as u64 * 9 + (recorded + 1) * self.reading.len() as u64 * 8;
        if projected > self.options.memory_ceiling {
            return Err(LabError::ResourceLimit {
                projected,
                ceiling: self.options.memory_ceiling,
            });
        }
        let fresh = self.run_reading(y, have..want);
        let mut rec = match existing {
            Some(r) => (*r).clone(),
            None => CondRecord {
                covered_len: 0,
                out: Vec::new(),
                steps: Vec::new(),
                locals: Vec::new(),
            },
        };
        let mut local_index: HashMap<Bitstring, u32> = rec
            .locals
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i as u32))
            .collect();
        for (out, steps) in fresh {
            let code = match out {
                None => NONE,
                Some(o) => match self.index.get(&o) {
                    Some(&g) => g,
                    None => LOCAL | intern(&mut rec.locals, &mut local_index, o),
                },
            };
            rec.out.push(code);
            rec.steps.push(steps);
        }
        rec.covered_len = len;
        let mut g = self.conds.write().expect("table lock poisoned");
        match g.get(y) {
            Some(cur) if cur.covered_len >= len => {}
            _ => {
                g.insert(y.clone(), Arc::new(rec));
            }
        }
        Ok(())
    }

    fn run_reading(
        &self,
        y: &Bitstring,
        ranks: std::ops::Range<usize>,
    ) -> Vec<(Option<Bitstring>, u32)> {
        let budget = self.config.step_budget;
        let lo = ranks.start;
        let n = ranks.len();
        let chunks = n.div_ceil(CHUNK);
        self.options
            .schedule
            .map_indexed(chunks, |c| {
                let a = lo + c * CHUNK;
                let b = (a + CHUNK).min(ranks.end);
                self.reading[a..b]
                    .iter()
                    .map(|&id| {
                        let t = trace(&Program::from_id(ProgramId(id)), y, budget);
                        (t.halted.then_some(t.output), t.steps)
                    })
                    .collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect()
    }

    fn record(&self, y: &Bitstring) -> Option<Arc<CondRecord>> {
        let g = self.conds.read().expect("table lock poisoned");
        g.get(y).cloned()
    }

    fn require_recorded(&self, y: &Bitstring) -> Result<Option<Arc<CondRecord>>> {
        if y.is_empty() {
            return Ok(None);
        }
        match self.record(y) {
            Some(r) if r.covered_len >= self.config.max_prog_len => Ok(Some(r)),
            _ => Err(LabError::UnrecordedCondition(y.clone())),
        }
    }

    fn decode_out<'a>(&'a self, code: u32, rec: Option<&'a CondRecord>) -> Option<&'a Bitstring> {
        if code == NONE {
            None
        } else if code & LOCAL != 0 {
            rec.map(|r| &r.locals[(code & !LOCAL) as usize])
        } else {
            Some(&self.outputs[code as usize])
        }
    }

    /// Outcome of one program on a recorded condition.
    pub fn outcome(&self, program: ProgramId, y: &Bitstring) -> Result<ExecutionOutcome> {
        let rec = self.require_recorded(y)?;
        let i = program.0 as usize;
        if i >= self.base_out.len() {
            return Err(LabError::Precondition {
                op: "outcome",
                detail: format!("program length {} exceeds L", program.len()),
            });
        }
        let (code, steps) = if self.base_steps[i] & READS == 0 || rec.is_none() {
            (self.base_out[i], self.base_steps[i] & !READS)
        } else {
            let r = rec.as_deref().expect("checked above");
            let rank = self
                .reading
                .binary_search(&program.0)
                .expect("reading program");
            (r.out[rank], r.steps[rank])
        };
        let out = self.decode_out(code, rec.as_deref()).cloned();
        Ok(into_outcome_parts(out, steps, self.config.step_budget))
    }

    /// C(x) = C(x|Λ).
    pub fn complexity(&self, x: &Bitstring) -> Complexity {
        match self.index.get(x) {
            Some(&o) => Complexity::Finite(self.min_len[o as usize] as u32),
            None => Complexity::Infinite,
        }
    }

    pub(crate) fn complexity_of_output(&self, o: u32) -> u32 {
        self.min_len[o as usize] as u32
    }

    pub(crate) fn discovery_key(&self, o: u32) -> DiscoveryKey {
        self.first_key[o as usize]
    }

    /// C(x|y) over all programs of length ≤ L; `y` must be recorded.
    pub fn cond_complexity(&self, x: &Bitstring, y: &Bitstring) -> Result<Complexity> {
        let rec = self.require_recorded(y)?;
        Ok(self.cond_search(x, rec.as_deref(), self.config.max_prog_len, false))
    }

    /// CT(y|x): shortest program of length ≤ L mapping `x` to `y` that is
    /// total at scale (N, T). `x` must be recorded.
    pub fn total_cond_complexity(&self, y: &Bitstring, x: &Bitstring) -> Result<Complexity> {
        let rec = self.require_recorded(x)?;
        Ok(self.cond_search(y, rec.as_deref(), self.config.max_prog_len, true))
    }

    /// C(x|y) restricted to programs of length ≤ `max_len`, recording `y`
    /// on demand.
    pub fn cond_complexity_upto(
        &self,
        x: &Bitstring,
        y: &Bitstring,
        max_len: u32,
    ) -> Result<Complexity> {
        self.tiered_search(x, y, max_len, false)
    }

    /// CT(y|x) restricted to programs of length ≤ `max_len`, recording `x`
    /// on demand.
    pub fn total_cond_complexity_upto(
        &self,
        y: &Bitstring,
        x: &Bitstring,
        max_len: u32,
    ) -> Result<Complexity> {
        self.tiered_search(y, x, max_len, true)
    }

    /// Records `cond` in growing length tiers and stops at the first tier
    /// that already contains a program for `target`: a hit at tier t is the
    /// shortest program overall, so the answer does not depend on tiering.
    fn tiered_search(
        &self,
        target: &Bitstring,
        cond: &Bitstring,
        max_len: u32,
        total: bool,
    ) -> Result<Complexity> {
        let max_len = max_len.min(self.config.max_prog_len);
        for tier in SEARCH_TIERS
            .iter()
            .copied()
            .filter(|&t| t < max_len)
            .chain([max_len])
        {
            self.ensure_condition(cond, tier)?;
            let rec = if cond.is_empty() {
                None
            } else {
                self.record(cond)
            };
            let c = self.cond_search(target, rec.as_deref(), tier, total);
            if c.is_finite() || tier == max_len {
                return Ok(c);
            }
        }
        unreachable!("the last tier is max_len")
    }

    fn cond_search(
        &self,
        x: &Bitstring,
        rec: Option<&CondRecord>,
        max_len: u32,
        total: bool,
    ) -> Complexity {
        let global = self.index.get(x).copied();
        let stat = global
            .map(|o| self.static_min_len[o as usize])
            .filter(|&l| l != NO_LEN && (l as u32) <= max_len)
            .map(|l| l as u32);
        let limit = self.reading_below(max_len);
        let target: Option<u32> = match rec {
            None => global,
            Some(r) => global.or_else(|| {
                r.locals
                    .iter()
                    .position(|b| b == x)
                    .map(|i| LOCAL | i as u32)
            }),
        };
        let Some(target) = target else {
            return stat.into();
        };
        let outs: &[u32] = match rec {
            None => &self.base_out,
            Some(r) => &r.out,
        };
        let mut dynamic = None;
        for rank in 0..limit {
            let id = self.reading[rank];
            let code = if rec.is_some() {
                outs[rank]
            } else {
                outs[id as usize]
            };
            if code != target {
                continue;
            }
            let len = ProgramId(id).len();
            if stat.is_some_and(|s| s <= len) {
                break;
            }
            if !total || self.is_total_rank(rank) {
                dynamic = Some(len);
                break;
            }
        }
        Complexity::min_len(stat, dynamic)
    }

    /// The first program in (length, lex) order of length ≤ `max_len` that
    /// maps `y` to `x` (and is total at scale (N, T) when `total` is set).
    pub fn find_program(
        &self,
        x: &Bitstring,
        y: &Bitstring,
        max_len: u32,
        total: bool,
    ) -> Result<Option<ProgramId>> {
        self.find_program_where(x, y, max_len, total, |_| true)
    }

    /// Like [`HaltingTable::find_program`], skipping candidates rejected by
    /// `accept`.
    pub fn find_program_where(
        &self,
        x: &Bitstring,
        y: &Bitstring,
        max_len: u32,
        total: bool,
        mut accept: impl FnMut(ProgramId) -> bool,
    ) -> Result<Option<ProgramId>> {
        let max_len = max_len.min(self.config.max_prog_len);
        self.ensure_condition(y, max_len)?;
        let rec = if y.is_empty() { None } else { self.record(y) };
        let rec = rec.as_deref();
        let global = self.index.get(x).copied();
        let local = rec.and_then(|r| {
            r.locals
                .iter()
                .position(|b| b == x)
                .map(|i| LOCAL | i as u32)
        });
        let limit = ProgramId::count_up_to(max_len) as usize;
        let mut rank = 0usize;
        for id in 0..limit {
            let reads = self.base_steps[id] & READS != 0;
            let code = match (reads, rec) {
                (true, Some(r)) => r.out[rank],
                _ => self.base_out[id],
            };
            let this_rank = rank;
            if reads {
                rank += 1;
            }
            if code == NONE || (Some(code) != global && Some(code) != local) {
                continue;
            }
            if (!total || !reads || self.is_total_rank(this_rank)) && accept(ProgramId(id as u32)) {
                return Ok(Some(ProgramId(id as u32)));
            }
        }
        Ok(None)
    }

    /// Whether a program halts within T on every condition of length ≤ N.
    pub fn is_total(&self, program: ProgramId) -> bool {
        let i = program.0 as usize;
        if i >= self.base_out.len() {
            return false;
        }
        if self.base_steps[i] & READS == 0 {
            return self.base_out[i] != NONE;
        }
        let rank = self
            .reading
            .binary_search(&program.0)
            .expect("reading program");
        self.is_total_rank(rank)
    }

    fn is_total_rank(&self, rank: usize) -> bool {
        match self.totality[rank].load(Ordering::Relaxed) {
            1 => return true,
            2 => return false,
            _ => {}
        }
        let id = self.reading[rank];
        let total = self.base_out[id as usize] != NONE && {
            let p = Program::from_id(ProgramId(id));
            self.totality_conditions
                .iter()
                .all(|u| trace(&p, u, self.config.step_budget).halted)
        };
        self.totality[rank].store(if total { 1 } else { 2 }, Ordering::Relaxed);
        total
    }

    /// Every distinct output on condition `y` among programs of length
    /// ≤ `max_len`, with its conditional complexity and (when `with_total`)
    /// its total conditional complexity, both restricted to `max_len`.
    pub fn cond_catalog(
        &self,
        y: &Bitstring,
        max_len: u32,
        with_total: bool,
    ) -> Result<CondCatalog> {
        let max_len = max_len.min(self.config.max_prog_len);
        self.ensure_condition(y, max_len)?;
        let rec = if y.is_empty() { None } else { self.record(y) };
        let rec = rec.as_deref();
        let limit = ProgramId::count_up_to(max_len) as usize;
        let mut by_code: BTreeMap<u32, (u32, Option<u32>)> = BTreeMap::new();
        let mut touch = |code: u32, len: u32, total: Option<bool>, tot_fn: &dyn Fn() -> bool| {
            let e = by_code.entry(code).or_insert((len, None));
            if with_total && e.1.is_none() {
                let t = total.unwrap_or_else(tot_fn);
                if t {
                    e.1 = Some(len);
                }
            }
        };
        let mut rank = 0usize;
        for id in 0..limit {
            let reads = self.base_steps[id] & READS != 0;
            if reads {
                let r = rank;
                rank += 1;
                let code = match rec {
                    None => self.base_out[id],
                    Some(rc) => rc.out[r],
                };
                if code != NONE {
                    touch(code, ProgramId(id as u32).len(), None, &|| {
                        self.is_total_rank(r)
                    });
                }
            } else if self.base_out[id] != NONE {
                touch(
                    self.base_out[id],
                    ProgramId(id as u32).len(),
                    Some(true),
                    &|| true,
                );
            }
        }
        let entries = by_code
            .into_iter()
            .map(|(code, (c, ct))| {
                let out = self.decode_out(code, rec).expect("halting output").clone();
                (out, c, Complexity::from(ct))
            })
            .collect();
        Ok(CondCatalog { entries })
    }

    /// Decoded set codes among the Λ outputs, with an element index.
    pub fn set_catalog(&self) -> &SetCatalog {
        self.sets.get_or_init(|| SetCatalog::build(self))
    }
}

fn into_outcome_parts(out: Option<Bitstring>, steps: u32, budget: u32) -> ExecutionOutcome {
    match out {
        Some(o) => ExecutionOutcome {
            status: Status::Halted,
            output: o,
            steps_used: steps,
        },
        None => ExecutionOutcome {
            status: Status::Exhausted,
            output: Bitstring::empty(),
            steps_used: budget,
        },
    }
}

/// Distinct outputs on one condition: `(output, C(out|y), CT(out|y))`,
/// in (length, lex) order of the output.
#[derive(Debug, Clone)]
pub struct CondCatalog {
    pub entries: Vec<(Bitstring, u32, Complexity)>,
}

/// A valid set code among the Λ outputs.
#[derive(Debug, Clone)]
pub struct SetEntry {
    pub output: u32,
    pub complexity: u32,
    pub cardinality: u64,
}

/// All set-valued Λ outputs, indexed by element.
#[derive(Debug)]
pub struct SetCatalog {
    pub sets: Vec<SetEntry>,
    by_element: HashMap<Bitstring, Vec<u32>>,
}

impl SetCatalog {
    fn build(table: &HaltingTable) -> SetCatalog {
        let decoded = table
            .options
            .schedule
            .map_indexed(table.outputs.len(), |o| decode_set(&table.outputs[o]));
        let mut sets = Vec::new();
        let mut by_element: HashMap<Bitstring, Vec<u32>> = HashMap::new();
        for (o, d) in decoded.into_iter().enumerate() {
            let Some(elements) = d else { continue };
            let s = sets.len() as u32;
            sets.push(SetEntry {
                output: o as u32,
                complexity: table.min_len[o] as u32,
                cardinality: elements.len() as u64,
            });
            for e in elements {
                by_element.entry(e).or_default().push(s);
            }
        }
        SetCatalog { sets, by_element }
    }

    /// Sets (as indices into `sets`) that contain `x`, in first-appearance order.
    pub fn containing(&self, x: &Bitstring) -> &[u32] {
        self.by_element.get(x).map_or(&[], |v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;
    use crate::machine::run;

    fn small() -> MachineConfig {
        MachineConfig::new(12, 256, 3).unwrap()
    }

    #[test]
    fn trivial_table() {
        let cfg = MachineConfig::new(0, 1, 0).unwrap();
        let t = build_table(&cfg, &[Bitstring::empty()]).unwrap();
        assert_eq!(t.program_count(), 1);
        let o = t.outcome(ProgramId(0), &Bitstring::empty()).unwrap();
        assert!(o.halted());
        assert_eq!(o.output, Bitstring::empty());
        assert_eq!(t.complexity(&Bitstring::empty()), Complexity::Finite(0));
        assert_eq!(
            t.total_cond_complexity(&Bitstring::empty(), &Bitstring::empty())
                .unwrap(),
            Complexity::Finite(0)
        );
        assert_eq!(
            t.total_cond_complexity(&bits("0"), &Bitstring::empty())
                .unwrap(),
            Complexity::Infinite
        );
    }

    #[test]
    fn outcomes_match_interpreter() {
        let cfg = small();
        let ys = [bits("01"), bits("1101")];
        let t = build_table(&cfg, &ys).unwrap();
        for y in ys.iter().chain(std::iter::once(&Bitstring::empty())) {
            for id in (0..cfg.program_count()).step_by(7) {
                let p = ProgramId(id);
                assert_eq!(t.outcome(p, y).unwrap(), run(&p.bits(), y, cfg.step_budget));
            }
        }
    }

    #[test]
    fn unrecorded_condition_is_an_error() {
        let t = build_table(&small(), &[]).unwrap();
        assert!(matches!(
            t.cond_complexity(&bits("0"), &bits("1")),
            Err(LabError::UnrecordedCondition(_))
        ));
    }

    #[test]
    fn memory_ceiling_is_enforced() {
        let opts = TableOptions {
            memory_ceiling: 1000,
            ..TableOptions::default()
        };
        let r = build_table_with(&small(), &[bits("0")], opts);
        assert!(matches!(r, Err(LabError::ResourceLimit { .. })));
    }

    #[test]
    fn tiers_agree_with_full_records() {
        let cfg = small();
        let y = bits("0110");
        let full = build_table(&cfg, &[y.clone()]).unwrap();
        let lazy = build_table(&cfg, &[]).unwrap();
        lazy.ensure_condition(&y, 6).unwrap();
        lazy.ensure_condition(&y, 9).unwrap();
        lazy.ensure_condition(&y, 12).unwrap();
        assert_eq!(*full.record(&y).unwrap(), *lazy.record(&y).unwrap());
    }

    #[test]
    fn copy_program_gives_conditional_constant() {
        let t = build_table(&small(), &[bits("10110")]).unwrap();
        // READ 0; EMIT is 9 bits and total
        assert!(
            t.cond_complexity(&bits("10110"), &bits("10110")).unwrap() <= Complexity::Finite(9)
        );
        assert_eq!(
            t.total_cond_complexity(&bits("10110"), &bits("10110"))
                .unwrap(),
            Complexity::Finite(9)
        );
    }
}
