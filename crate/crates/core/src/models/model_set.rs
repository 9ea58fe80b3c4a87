use std::fmt;

use crate::bitstring::Bitstring;
use crate::enumeration::{Complexity, HaltingTable};
use crate::machine::{decode_set, encode_set};

/// A finite set of strings together with its canonical code and the
/// table's complexity of that code.
#[derive(Clone, PartialEq, Eq)]
pub struct ModelSet {
    elements: Vec<Bitstring>,
    code: Bitstring,
    complexity: Complexity,
}

impl ModelSet {
    pub fn new<I: IntoIterator<Item = Bitstring>>(table: &HaltingTable, elements: I) -> ModelSet {
        let mut elements: Vec<Bitstring> = elements.into_iter().collect();
        elements.sort();
        elements.dedup();
        let code = encode_set(elements.iter());
        let complexity = table.complexity(&code);
        ModelSet {
            elements,
            code,
            complexity,
        }
    }

    /// The set whose code is `code`, or `None` for an invalid code.
    pub fn from_code(table: &HaltingTable, code: &Bitstring) -> Option<ModelSet> {
        let elements = decode_set(code)?;
        Some(ModelSet {
            elements,
            code: code.clone(),
            complexity: table.complexity(code),
        })
    }

    pub fn singleton(table: &HaltingTable, x: &Bitstring) -> ModelSet {
        ModelSet::new(table, [x.clone()])
    }

    /// All strings of length `n`.
    pub fn cube(table: &HaltingTable, n: usize) -> ModelSet {
        ModelSet::new(table, Bitstring::all_of_len(n))
    }

    /// The strings of length `n` that start with `u`.
    pub fn cylinder(table: &HaltingTable, u: &Bitstring, n: usize) -> ModelSet {
        assert!(u.len() <= n);
        let free = n - u.len();
        ModelSet::new(table, Bitstring::all_of_len(free).map(|v| u.concat(&v)))
    }

    pub fn elements(&self) -> &[Bitstring] {
        &self.elements
    }

    pub fn code(&self) -> &Bitstring {
        &self.code
    }

    pub fn complexity(&self) -> Complexity {
        self.complexity
    }

    pub fn cardinality(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn log2_cardinality(&self) -> f64 {
        (self.elements.len() as f64).log2()
    }

    /// ⌈log2 |A|⌉, the least l with |A| ≤ 2^l.
    pub fn log_bucket(&self) -> u32 {
        ceil_log2(self.cardinality())
    }

    pub fn contains(&self, x: &Bitstring) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModelSet(|A|={}, C={}, {:?})",
            self.elements.len(),
            self.complexity,
            self.elements
                .iter()
                .take(4)
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
        )
    }
}

/// ⌈log2 n⌉ for n ≥ 1; 0 for n ≤ 1.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// ⌊log2 n⌋ for n ≥ 1.
pub fn floor_log2(n: u64) -> u32 {
    assert!(n >= 1);
    63 - n.leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_helpers() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(16), 4);
        assert_eq!(ceil_log2(17), 5);
        assert_eq!(floor_log2(1), 0);
        assert_eq!(floor_log2(17), 4);
    }
}
