//! On-disk container for halting tables.
//!
//! ```text
//! algostat-cache\n
//! format=1\n
//! machine_id=<id>\n
//! L=<max_prog_len>\n
//! T=<step_budget>\n
//! N=<cond_universe>\n
//! end\n
//! <binary body, little-endian>
//! ```
//!
//! Body: the Λ outputs (`u64` count, then each string as `u32` bit length
//! followed by its packed `u64` words), the per-program Λ outcomes (`u64`
//! count, then `u32` output ids with `0xFFFFFFFF` for exhausted runs, then
//! `u32` step counts whose top bit marks condition-dependent programs),
//! and the condition records sorted by condition (`u64` count; per record
//! the condition string, `u32` covered length, `u64` entry count, the
//! `u32` outputs and `u32` steps of the reading programs, and the local
//! output strings). Output ids are assigned in program order, so a table
//! serializes to the same bytes under every schedule.

use std::io::{Read, Write};
use std::path::Path;

use crate::bitstring::Bitstring;
use crate::enumeration::table::{CondRecord, HaltingTable, TableOptions};
use crate::error::{LabError, Result};
use crate::machine::MachineConfig;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "algostat-cache";

fn header(config: &MachineConfig) -> String {
    format!(
        "{MAGIC}\nformat={FORMAT_VERSION}\nmachine_id={}\nL={}\nT={}\nN={}\nend\n",
        config.machine_id, config.max_prog_len, config.step_budget, config.cond_universe
    )
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_bits(out: &mut Vec<u8>, b: &Bitstring) {
    put_u32(out, b.len() as u32);
    for w in b.words() {
        put_u64(out, *w);
    }
}

fn put_u32s(out: &mut Vec<u8>, v: &[u32]) {
    put_u64(out, v.len() as u64);
    for x in v {
        put_u32(out, *x);
    }
}

/// Serializes a table to bytes.
pub fn to_bytes(table: &HaltingTable) -> Vec<u8> {
    let mut out = header(table.config()).into_bytes();
    put_u64(&mut out, table.outputs().len() as u64);
    for o in table.outputs() {
        put_bits(&mut out, o);
    }
    let (base_out, base_steps) = table.base_raw();
    put_u32s(&mut out, base_out);
    put_u32s(&mut out, base_steps);
    let records = table.records();
    put_u64(&mut out, records.len() as u64);
    for (y, r) in records {
        put_bits(&mut out, &y);
        put_u32(&mut out, r.covered_len);
        put_u32s(&mut out, &r.out);
        put_u32s(&mut out, &r.steps);
        put_u64(&mut out, r.locals.len() as u64);
        for l in &r.locals {
            put_bits(&mut out, l);
        }
    }
    out
}

pub fn save(table: &HaltingTable, path: &Path) -> Result<()> {
    let bytes = to_bytes(table);
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.pos + n > self.buf.len() {
            return Err(LabError::Format("cache file truncated".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(
            self.take(8)?.try_into().expect("8 bytes"),
        ))
    }

    fn count(&mut self) -> Result<usize> {
        let n = self.u64()?;
        if n > (self.buf.len() - self.pos) as u64 {
            return Err(LabError::Format(format!("implausible count {n}")));
        }
        Ok(n as usize)
    }

    fn bits(&mut self) -> Result<Bitstring> {
        let len = self.u32()? as usize;
        let words = (0..len.div_ceil(64))
            .map(|_| self.u64())
            .collect::<Result<Vec<_>>>()?;
        Bitstring::from_words(words, len)
    }

    fn u32s(&mut self) -> Result<Vec<u32>> {
        let n = self.count()?;
        (0..n).map(|_| self.u32()).collect()
    }
}

/// Parses the text header into a config.
pub fn read_header(bytes: &[u8]) -> Result<(MachineConfig, usize)> {
    let mut fields = std::collections::HashMap::new();
    let mut pos = 0;
    let mut first = true;
    loop {
        let rest = &bytes[pos..];
        let nl = rest
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| LabError::Format("cache header not terminated".into()))?;
        let line = std::str::from_utf8(&rest[..nl])
            .map_err(|_| LabError::Format("cache header is not text".into()))?;
        pos += nl + 1;
        if first {
            if line != MAGIC {
                return Err(LabError::Format("not an algostat cache file".into()));
            }
            first = false;
            continue;
        }
        if line == "end" {
            break;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| LabError::Format(format!("bad header line {line:?}")))?;
        fields.insert(k.to_string(), v.to_string());
    }
    let get = |k: &str| {
        fields
            .get(k)
            .cloned()
            .ok_or_else(|| LabError::Format(format!("cache header lacks {k}")))
    };
    let num = |k: &str| -> Result<u32> {
        get(k)?
            .parse()
            .map_err(|_| LabError::Format(format!("cache header field {k} is not a number")))
    };
    if num("format")? != FORMAT_VERSION {
        return Err(LabError::CacheMismatch(format!(
            "format version {} (expected {FORMAT_VERSION})",
            num("format")?
        )));
    }
    let config = MachineConfig {
        machine_id: get("machine_id")?,
        max_prog_len: num("L")?,
        step_budget: num("T")?,
        cond_universe: num("N")?,
    };
    Ok((config, pos))
}

/// Loads a table, refusing files whose header disagrees with `expected`.
pub fn from_bytes(
    bytes: &[u8],
    expected: &MachineConfig,
    options: TableOptions,
) -> Result<HaltingTable> {
    let (config, pos) = read_header(bytes)?;
    if config != *expected {
        return Err(LabError::CacheMismatch(format!(
            "file has {}, active config is {}",
            config.describe(),
            expected.describe()
        )));
    }
    config.validate()?;
    let mut r = Reader { buf: bytes, pos };
    let n_out = r.count()?;
    let mut outputs = Vec::with_capacity(n_out);
    let mut index = std::collections::HashMap::with_capacity(n_out);
    for i in 0..n_out {
        let b = r.bits()?;
        index.insert(b.clone(), i as u32);
        outputs.push(b);
    }
    let base_out = r.u32s()?;
    let base_steps = r.u32s()?;
    if base_out.len() != config.program_count() as usize || base_steps.len() != base_out.len() {
        return Err(LabError::Format(
            "program count does not match header".into(),
        ));
    }
    if base_out
        .iter()
        .any(|&o| o != u32::MAX && o as usize >= n_out)
    {
        return Err(LabError::Format("output id out of range".into()));
    }
    let table = HaltingTable::assemble(config, options, outputs, index, base_out, base_steps);
    let n_rec = r.count()?;
    for _ in 0..n_rec {
        let y = r.bits()?;
        let covered_len = r.u32()?;
        let out = r.u32s()?;
        let steps = r.u32s()?;
        let n_loc = r.count()?;
        let locals = (0..n_loc).map(|_| r.bits()).collect::<Result<Vec<_>>>()?;
        if out.len() != steps.len() || out.len() > table.reading_count() {
            return Err(LabError::Format(
                "condition record has the wrong size".into(),
            ));
        }
        table.insert_record(
            y,
            CondRecord {
                covered_len,
                out,
                steps,
                locals,
            },
        );
    }
    if r.pos != bytes.len() {
        return Err(LabError::Format("trailing bytes after cache body".into()));
    }
    Ok(table)
}

pub fn load(path: &Path, expected: &MachineConfig, options: TableOptions) -> Result<HaltingTable> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    from_bytes(&bytes, expected, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;
    use crate::enumeration::build_table;

    #[test]
    fn roundtrip_is_byte_identical() {
        let cfg = MachineConfig::new(11, 128, 2).unwrap();
        let t = build_table(&cfg, &[bits("01"), bits("111")]).unwrap();
        let bytes = to_bytes(&t);
        let back = from_bytes(&bytes, &cfg, TableOptions::default()).unwrap();
        assert_eq!(to_bytes(&back), bytes);
        assert_eq!(
            back.cond_complexity(&bits("01"), &bits("01")).unwrap(),
            t.cond_complexity(&bits("01"), &bits("01")).unwrap()
        );
    }

    #[test]
    fn mismatched_header_is_refused() {
        let cfg = MachineConfig::new(8, 64, 2).unwrap();
        let t = build_table(&cfg, &[]).unwrap();
        let bytes = to_bytes(&t);
        let other = MachineConfig::new(8, 65, 2).unwrap();
        assert!(matches!(
            from_bytes(&bytes, &other, TableOptions::default()),
            Err(LabError::CacheMismatch(_))
        ));
        assert!(from_bytes(b"garbage\n", &cfg, TableOptions::default()).is_err());
    }
}
