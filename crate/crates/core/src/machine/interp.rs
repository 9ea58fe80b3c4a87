//! Program decoding and execution.
//!
//! # Opcode table (`rb8-v1`)
//!
//! A program is read left to right in 3-bit groups, most significant bit
//! first. Two opcodes take a 3-bit immediate `k` from the following group.
//!
//! | bits  | op      | effect |
//! |-------|---------|--------|
//! | `000` | `OPEN`  | if `F = 0`, jump past the matching `CLOSE` |
//! | `001` | `CLOSE` | if `F = 1`, jump back to just after the matching `OPEN` |
//! | `010` | `EMIT`  | append the register `W` to the output |
//! | `011` | `POP`   | remove the last bit of `W` and copy it to `F` (`F = 0` if `W` is empty) |
//! | `100` | `WRAP`  | replace the output `O` by the code of the singleton `{O}` |
//! | `101 k` | `CYL k` | append the framed strings `W v`, for every `v` of `k` bits in lex order |
//! | `110 k` | `READ k` | append the next `k` condition bits to `W` (`k = 0`: all remaining); `F = 1` iff a bit was read |
//! | `111` | `QUOTE` | end of code; every remaining program bit is the initial `W` |
//!
//! Machine state is the register `W` (initially the quoted data, or Λ), the
//! flag `F` (initially 1), the output `O` (initially Λ), and a read cursor
//! into the condition. Falling off the end of the code halts with output
//! `O`; `QUOTE` with no data is therefore the halt opcode. One or two
//! trailing bits, or an opcode whose immediate is cut off, are ignored.
//! Executing an unmatched `OPEN` or `CLOSE` spins in place until the budget
//! runs out.
//!
//! Step costs: `CYL k` costs `2^k`, `WRAP` costs `1 + |O|`, every other
//! instruction costs 1. A run that would exceed the budget is reported as
//! exhausted with `steps_used = T`.

use crate::bitstring::Bitstring;
use crate::machine::codec::push_framed;

/// Position of a program in the (length, lex) enumeration of all strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProgramId(pub u32);

impl ProgramId {
    /// Number of programs of length at most `len`.
    pub fn count_up_to(len: u32) -> u32 {
        ((1u64 << (len + 1)) - 1) as u32
    }

    pub fn len(self) -> u32 {
        31 - (self.0 + 1).leading_zeros()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The program's bits as an integer (most significant bit first).
    pub fn value(self) -> u64 {
        (self.0 as u64 + 1) - (1u64 << self.len())
    }

    pub fn bits(self) -> Bitstring {
        Bitstring::from_index(self.0 as u64)
    }

    pub fn from_bits(bits: &Bitstring) -> Option<ProgramId> {
        let idx = bits.index()?;
        u32::try_from(idx).ok().map(ProgramId)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instr {
    /// Jump target is the index of the matching `CLOSE`, if any.
    Open(Option<u16>),
    /// Jump target is the index of the matching `OPEN`, if any.
    Close(Option<u16>),
    Emit,
    Pop,
    Wrap,
    Cyl(u8),
    Read(u8),
}

/// A decoded program: its code and the quoted data that seeds `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub code: Vec<Instr>,
    pub data: Bitstring,
}

impl Program {
    /// Decodes a program from a `len`-bit value (most significant bit first).
    pub fn decode_value(value: u64, len: u32) -> Program {
        let bit = |i: u32| (value >> (len - 1 - i)) & 1;
        let group = |at: u32| (bit(at) << 2) | (bit(at + 1) << 1) | bit(at + 2);
        let mut code = Vec::new();
        let mut data = Bitstring::empty();
        let mut pos = 0u32;
        while len - pos >= 3 {
            let op = group(pos);
            pos += 3;
            let instr = match op {
                0b000 => Instr::Open(None),
                0b001 => Instr::Close(None),
                0b010 => Instr::Emit,
                0b011 => Instr::Pop,
                0b100 => Instr::Wrap,
                0b101 | 0b110 => {
                    if len - pos < 3 {
                        break;
                    }
                    let k = group(pos) as u8;
                    pos += 3;
                    if op == 0b101 {
                        Instr::Cyl(k)
                    } else {
                        Instr::Read(k)
                    }
                }
                _ => {
                    data = Bitstring::from_bits((pos..len).map(|i| bit(i) == 1));
                    break;
                }
            };
            code.push(instr);
        }
        match_brackets(&mut code);
        Program { code, data }
    }

    pub fn decode(bits: &Bitstring) -> Program {
        if bits.len() <= 64 {
            return Program::decode_value(bits.to_u64().unwrap_or(0), bits.len() as u32);
        }
        // Long programs only arise from hand-built inputs; decode via prefix.
        let head = bits.prefix(63);
        let mut p = Program::decode_value(head.to_u64().unwrap_or(0), 63);
        let consumed = consumed_bits(&p);
        if p.data.len() + consumed == 63 && ends_in_quote(&head, consumed) {
            p.data = bits.slice(consumed, bits.len() - consumed);
        }
        p
    }

    pub fn from_id(id: ProgramId) -> Program {
        Program::decode_value(id.value(), id.len())
    }
}

fn consumed_bits(p: &Program) -> usize {
    p.code
        .iter()
        .map(|i| match i {
            Instr::Cyl(_) | Instr::Read(_) => 6,
            _ => 3,
        })
        .sum::<usize>()
        + 3
}

fn ends_in_quote(head: &Bitstring, consumed: usize) -> bool {
    consumed >= 3
        && consumed <= head.len()
        && head.slice(consumed - 3, 3) == Bitstring::from_u64(0b111, 3)
}

fn match_brackets(code: &mut [Instr]) {
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..code.len() {
        match code[i] {
            Instr::Open(_) => stack.push(i),
            Instr::Close(_) => {
                if let Some(j) = stack.pop() {
                    code[j] = Instr::Open(Some(i as u16));
                    code[i] = Instr::Close(Some(j as u16));
                }
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Halted,
    Exhausted,
}

/// Result of a budgeted run. `output` is Λ for exhausted runs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExecutionOutcome {
    pub status: Status,
    pub output: Bitstring,
    pub steps_used: u32,
}

impl ExecutionOutcome {
    pub fn halted(&self) -> bool {
        self.status == Status::Halted
    }

    pub fn output(&self) -> Option<&Bitstring> {
        self.halted().then_some(&self.output)
    }
}

/// Outcome plus whether the run ever executed `READ`. A run that never
/// reads behaves identically on every condition.
#[derive(Debug, Clone)]
pub(crate) struct Trace {
    pub halted: bool,
    pub output: Bitstring,
    pub steps: u32,
    pub read_condition: bool,
}

/// Runs `program` on `condition` for at most `budget` steps.
pub fn run(program: &Bitstring, condition: &Bitstring, budget: u32) -> ExecutionOutcome {
    let t = trace(&Program::decode(program), condition, budget);
    into_outcome(t, budget)
}

pub(crate) fn into_outcome(t: Trace, budget: u32) -> ExecutionOutcome {
    if t.halted {
        ExecutionOutcome {
            status: Status::Halted,
            output: t.output,
            steps_used: t.steps,
        }
    } else {
        ExecutionOutcome {
            status: Status::Exhausted,
            output: Bitstring::empty(),
            steps_used: budget,
        }
    }
}

pub(crate) fn trace(program: &Program, condition: &Bitstring, budget: u32) -> Trace {
    let code = &program.code;
    let mut w = program.data.clone();
    let mut out = Bitstring::empty();
    let mut flag = true;
    let mut cursor = 0usize;
    let mut steps: u32 = 0;
    let mut pc = 0usize;
    let mut read_condition = false;

    let exhausted = |read_condition| Trace {
        halted: false,
        output: Bitstring::empty(),
        steps: budget,
        read_condition,
    };

    while pc < code.len() {
        let cost: u64 = match code[pc] {
            Instr::Cyl(k) => 1u64 << k,
            Instr::Wrap => 1 + out.len() as u64,
            _ => 1,
        };
        if steps as u64 + cost > budget as u64 {
            return exhausted(read_condition);
        }
        steps += cost as u32;
        match code[pc] {
            Instr::Open(target) => match target {
                None => return exhausted(read_condition),
                Some(close) => {
                    pc = if flag { pc + 1 } else { close as usize + 1 };
                }
            },
            Instr::Close(target) => match target {
                None => return exhausted(read_condition),
                Some(open) => {
                    pc = if flag { open as usize + 1 } else { pc + 1 };
                }
            },
            Instr::Emit => {
                out.extend_from(&w);
                pc += 1;
            }
            Instr::Pop => {
                flag = w.pop().unwrap_or(false);
                pc += 1;
            }
            Instr::Wrap => {
                let mut wrapped = Bitstring::with_capacity(2 * out.len() + 2);
                push_framed(&mut wrapped, &out);
                out = wrapped;
                pc += 1;
            }
            Instr::Cyl(k) => {
                let mut elem = w.clone();
                for v in 0..1u64 << k {
                    elem.extend_from(&Bitstring::from_u64(v, k as usize));
                    push_framed(&mut out, &elem);
                    for _ in 0..k {
                        elem.pop();
                    }
                }
                pc += 1;
            }
            Instr::Read(k) => {
                read_condition = true;
                let remaining = condition.len() - cursor;
                let take = if k == 0 {
                    remaining
                } else {
                    remaining.min(k as usize)
                };
                for i in cursor..cursor + take {
                    w.push(condition.get(i));
                }
                cursor += take;
                flag = take > 0;
                pc += 1;
            }
        }
    }
    Trace {
        halted: true,
        output: out,
        steps,
        read_condition,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;
    use crate::machine::codec::{encode_set, frame};

    fn out(p: &str, y: &str) -> Option<Bitstring> {
        run(&bits(p), &bits(y), 1024).output().cloned()
    }

    #[test]
    fn empty_program_halts_with_empty_output() {
        let o = run(&bits(""), &bits(""), 100);
        assert_eq!(o.status, Status::Halted);
        assert_eq!(o.output, Bitstring::empty());
        assert_eq!(o.steps_used, 0);
    }

    #[test]
    fn halt_opcode_ignores_condition() {
        for y in Bitstring::all_up_to(4) {
            let o = run(&bits("111"), &y, 100);
            assert!(o.halted());
            assert!(o.output.is_empty());
        }
    }

    #[test]
    fn unmatched_open_spins() {
        let o = run(&bits("000"), &bits(""), 77);
        assert_eq!(o.status, Status::Exhausted);
        assert_eq!(o.steps_used, 77);
    }

    #[test]
    fn literal_emit() {
        // EMIT QUOTE 0110
        assert_eq!(
            out("010 111 0110".replace(' ', "").as_str(), ""),
            Some(bits("0110"))
        );
    }

    #[test]
    fn cylinder_and_singleton() {
        // CYL 2 QUOTE 1 -> {100, 101, 110, 111}
        let o = out("101010 111 1".replace(' ', "").as_str(), "").unwrap();
        let want: Vec<Bitstring> = ["100", "101", "110", "111"]
            .iter()
            .map(|s| bits(s))
            .collect();
        assert_eq!(o, encode_set(want.iter()));
        // CYL 0 QUOTE 01 -> {01}
        assert_eq!(
            out("101000 111 01".replace(' ', "").as_str(), ""),
            Some(frame(&bits("01")))
        );
        // CYL 3 with empty register -> the cube of 3-bit strings
        let cube: Vec<Bitstring> = Bitstring::all_of_len(3).collect();
        assert_eq!(out("101011", ""), Some(encode_set(cube.iter())));
    }

    #[test]
    fn read_copies_condition() {
        // READ 0; EMIT
        assert_eq!(out("110000010", "10110"), Some(bits("10110")));
        // READ 2; EMIT
        assert_eq!(out("110010010", "10110"), Some(bits("10")));
        assert_eq!(out("110010010", ""), Some(bits("")));
    }

    #[test]
    fn wrap_makes_singleton_of_output() {
        // EMIT WRAP QUOTE 1
        assert_eq!(
            out("010100 111 1".replace(' ', "").as_str(), ""),
            Some(frame(&bits("1")))
        );
    }

    #[test]
    fn pop_loop_terminates_on_zero() {
        // OPEN EMIT POP CLOSE QUOTE 0111
        let p = "000 010 011 001 111 0111".replace(' ', "");
        assert_eq!(
            out(&p, ""),
            Some(
                bits("0111" /* */)
                    .concat(&bits("011"))
                    .concat(&bits("01"))
                    .concat(&bits("0"))
            )
        );
    }

    #[test]
    fn infinite_loop_exhausts() {
        // OPEN CLOSE with F = 1 spins forever
        let o = run(&bits("000001"), &bits(""), 50);
        assert_eq!(o.status, Status::Exhausted);
        assert_eq!(o.steps_used, 50);
    }

    #[test]
    fn trailing_bits_ignored() {
        assert_eq!(out("01011", ""), out("010", ""));
        // CYL with a cut-off immediate is dropped
        assert_eq!(out("10101", ""), Some(Bitstring::empty()));
    }

    #[test]
    fn budget_monotone_on_cylinder() {
        // CYL 7 costs 128 steps
        let p = bits("101111");
        assert_eq!(run(&p, &bits(""), 127).status, Status::Exhausted);
        let a = run(&p, &bits(""), 128);
        let b = run(&p, &bits(""), 1000);
        assert!(a.halted());
        assert_eq!(a, b);
    }

    #[test]
    fn program_ids() {
        let id = ProgramId::from_bits(&bits("0101")).unwrap();
        assert_eq!(id.len(), 4);
        assert_eq!(id.value(), 0b0101);
        assert_eq!(id.bits(), bits("0101"));
        assert_eq!(ProgramId::count_up_to(2), 7);
        assert!(ProgramId(0).is_empty());
    }

    #[test]
    fn long_program_decodes_quoted_tail() {
        let data = Bitstring::from_bits((0..100).map(|i| i % 7 == 0));
        let p = bits("010111").concat(&data);
        assert_eq!(run(&p, &bits(""), 10).output, data);
    }
}
