//! Packed binary strings with the (length, lexicographic) order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::LabError;

/// A finite binary string.
///
/// Bits are packed most-significant-first into 64-bit words, and bits past
/// `len` are always zero, so equality, hashing and same-length comparison
/// work directly on the words.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Bitstring {
    words: Vec<u64>,
    len: usize,
}

impl Bitstring {
    /// The empty string Λ.
    pub const fn empty() -> Self {
        Bitstring {
            words: Vec::new(),
            len: 0,
        }
    }

    pub fn with_capacity(bits: usize) -> Self {
        Bitstring {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut s = Bitstring::empty();
        for b in bits {
            s.push(b);
        }
        s
    }

    /// The `width` low bits of `value`, most significant first.
    pub fn from_u64(value: u64, width: usize) -> Self {
        assert!(width <= 64);
        let mut s = Bitstring::with_capacity(width);
        for i in (0..width).rev() {
            s.push((value >> i) & 1 == 1);
        }
        s
    }

    /// Shortest binary numeral of `n` (most significant bit first); `0` is "0".
    pub fn numeral(n: u64) -> Self {
        if n == 0 {
            return Bitstring::from_u64(0, 1);
        }
        let width = 64 - n.leading_zeros() as usize;
        Bitstring::from_u64(n, width)
    }

    /// Value of a string read as a binary numeral. `None` past 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.len > 64 {
            return None;
        }
        Some(self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64))
    }

    /// The string at position `index` of the (length, lex) enumeration
    /// Λ, 0, 1, 00, 01, ...
    pub fn from_index(index: u64) -> Self {
        let len = 63 - (index + 1).leading_zeros() as usize;
        let value = index + 1 - (1u64 << len);
        Bitstring::from_u64(value, len)
    }

    /// Inverse of [`Bitstring::from_index`]. `None` for strings of 64 or more bits.
    pub fn index(&self) -> Option<u64> {
        if self.len >= 64 {
            return None;
        }
        Some((1u64 << self.len) - 1 + self.to_u64()?)
    }

    /// All strings of exactly `n` bits, in lexicographic order.
    pub fn all_of_len(n: usize) -> impl Iterator<Item = Bitstring> {
        assert!(n < 64);
        (0..1u64 << n).map(move |v| Bitstring::from_u64(v, n))
    }

    /// All strings of at most `n` bits, in (length, lex) order.
    pub fn all_up_to(n: usize) -> impl Iterator<Item = Bitstring> {
        (0..=n).flat_map(Bitstring::all_of_len)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (63 - i % 64)) & 1 == 1
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        let off = self.len % 64;
        if off == 0 {
            self.words.push(0);
        }
        if bit {
            let last = self.words.len() - 1;
            self.words[last] |= 1u64 << (63 - off);
        }
        self.len += 1;
    }

    /// Removes and returns the last bit.
    pub fn pop(&mut self) -> Option<bool> {
        if self.len == 0 {
            return None;
        }
        let i = self.len - 1;
        let bit = self.get(i);
        let w = i / 64;
        self.words[w] &= !(1u64 << (63 - i % 64));
        if i % 64 == 0 {
            self.words.pop();
        }
        self.len = i;
        Some(bit)
    }

    pub fn extend_from(&mut self, other: &Bitstring) {
        if self.len % 64 == 0 {
            self.words.extend_from_slice(&other.words);
            self.len += other.len;
            return;
        }
        for b in other.iter() {
            self.push(b);
        }
    }

    pub fn concat(&self, other: &Bitstring) -> Bitstring {
        let mut s = self.clone();
        s.extend_from(other);
        s
    }

    /// The first `n` bits (the whole string when shorter).
    pub fn prefix(&self, n: usize) -> Bitstring {
        let n = n.min(self.len);
        let mut s = Bitstring {
            words: self.words[..n.div_ceil(64)].to_vec(),
            len: n,
        };
        s.clear_tail();
        s
    }

    /// Bits `[start, start + n)`, clipped at the end of the string.
    pub fn slice(&self, start: usize, n: usize) -> Bitstring {
        let end = (start + n).min(self.len);
        Bitstring::from_bits((start.min(end)..end).map(|i| self.get(i)))
    }

    pub fn starts_with(&self, prefix: &Bitstring) -> bool {
        prefix.len <= self.len && self.prefix(prefix.len) == *prefix
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Packed words, most significant bit first; bits past `len` are zero.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn from_words(words: Vec<u64>, len: usize) -> Result<Self, LabError> {
        if words.len() != len.div_ceil(64) {
            return Err(LabError::Format(format!(
                "bitstring of {len} bits needs {} words, got {}",
                len.div_ceil(64),
                words.len()
            )));
        }
        let mut s = Bitstring { words, len };
        s.clear_tail();
        Ok(s)
    }

    fn clear_tail(&mut self) {
        let off = self.len % 64;
        if off != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 << (64 - off);
            }
        }
    }

    /// Display form with `Λ` for the empty string.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Ord for Bitstring {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.cmp(&other.words))
    }
}

impl PartialOrd for Bitstring {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return f.write_str("Λ");
        }
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

impl FromStr for Bitstring {
    type Err = LabError;

    /// Accepts `0`/`1` digits; `Λ`, `-` and the empty string denote Λ.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "Λ" || s == "-" {
            return Ok(Bitstring::empty());
        }
        let mut out = Bitstring::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                _ => return Err(LabError::Parse(format!("not a bitstring: {s:?}"))),
            }
        }
        Ok(out)
    }
}

/// Shorthand for tests and examples. Panics on malformed input.
pub fn bits(s: &str) -> Bitstring {
    s.parse().expect("valid bitstring literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_has_length_zero() {
        let e = Bitstring::empty();
        assert_eq!(e.len(), 0);
        assert_eq!(e.to_string(), "Λ");
        assert_eq!(bits(""), e);
        assert_eq!(bits("Λ"), e);
    }

    #[test]
    fn order_is_length_then_lex() {
        let mut v: Vec<Bitstring> = ["11", "0", "", "10", "1", "000", "01"]
            .iter()
            .map(|s| bits(s))
            .collect();
        v.sort();
        let shown: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, ["Λ", "0", "1", "01", "10", "11", "000"]);
    }

    #[test]
    fn index_enumeration() {
        let first: Vec<String> = (0..7)
            .map(|i| Bitstring::from_index(i).to_string())
            .collect();
        assert_eq!(first, ["Λ", "0", "1", "00", "01", "10", "11"]);
        assert_eq!(bits("000").index(), Some(7));
    }

    #[test]
    fn numerals() {
        assert_eq!(Bitstring::numeral(13).to_string(), "1101");
        assert_eq!(Bitstring::numeral(1).to_string(), "1");
        assert_eq!(Bitstring::numeral(0).to_string(), "0");
    }

    #[test]
    fn pop_across_word_boundary() {
        let mut s = Bitstring::from_bits((0..65).map(|i| i % 2 == 0));
        assert_eq!(s.pop(), Some(true));
        assert_eq!(s.len(), 64);
        assert_eq!(s.words().len(), 1);
        assert_eq!(s, Bitstring::from_bits((0..64).map(|i| i % 2 == 0)));
    }

    #[test]
    fn rejects_garbage() {
        assert!("012".parse::<Bitstring>().is_err());
    }

    proptest! {
        #[test]
        fn index_roundtrip(i in 0u64..1_000_000) {
            prop_assert_eq!(Bitstring::from_index(i).index(), Some(i));
        }

        #[test]
        fn order_matches_index_order(a in 0u64..100_000, b in 0u64..100_000) {
            let (x, y) = (Bitstring::from_index(a), Bitstring::from_index(b));
            prop_assert_eq!(x.cmp(&y), a.cmp(&b));
        }

        #[test]
        fn concat_and_slices(a in proptest::collection::vec(any::<bool>(), 0..150),
                             b in proptest::collection::vec(any::<bool>(), 0..150)) {
            let x = Bitstring::from_bits(a.clone());
            let y = Bitstring::from_bits(b.clone());
            let xy = x.concat(&y);
            prop_assert_eq!(xy.len(), a.len() + b.len());
            prop_assert_eq!(xy.prefix(a.len()), x.clone());
            prop_assert_eq!(xy.slice(a.len(), b.len()), y);
            prop_assert!(xy.starts_with(&x));
        }
    }
}
