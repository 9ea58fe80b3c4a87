//! The canonical bijection between finite sets of strings and their codes.
//!
//! Every element is rendered with each bit doubled (`0 -> 00`, `1 -> 11`)
//! and terminated by the pair `01`; elements appear in strictly increasing
//! (length, lex) order. The pair `10` never occurs in a valid code.

use crate::bitstring::Bitstring;

/// Appends the framed rendering of `x` (doubled bits, then `01`) to `out`.
#[inline]
pub fn push_framed(out: &mut Bitstring, x: &Bitstring) {
    for b in x.iter() {
        out.push(b);
        out.push(b);
    }
    out.push(false);
    out.push(true);
}

/// Framed rendering of a single string, i.e. the code of `{x}`.
pub fn frame(x: &Bitstring) -> Bitstring {
    let mut out = Bitstring::with_capacity(2 * x.len() + 2);
    push_framed(&mut out, x);
    out
}

/// Encoding of the ordered pair `<x, y>`: the framed `x` followed by `y` verbatim.
pub fn pair(x: &Bitstring, y: &Bitstring) -> Bitstring {
    let mut out = frame(x);
    out.extend_from(y);
    out
}

/// Canonical code of a finite set. Duplicates in the input are merged.
pub fn encode_set<'a, I>(elements: I) -> Bitstring
where
    I: IntoIterator<Item = &'a Bitstring>,
{
    let mut v: Vec<&Bitstring> = elements.into_iter().collect();
    v.sort();
    v.dedup();
    let mut out = Bitstring::with_capacity(v.iter().map(|e| 2 * e.len() + 2).sum());
    for e in v {
        push_framed(&mut out, e);
    }
    out
}

/// Decodes a set code into its elements in canonical order, or `None` when
/// `code` is not a valid code (odd length, a `10` pair, a missing terminator,
/// or elements out of strictly increasing order).
pub fn decode_set(code: &Bitstring) -> Option<Vec<Bitstring>> {
    if code.len() % 2 != 0 {
        return None;
    }
    let mut elements: Vec<Bitstring> = Vec::new();
    let mut cur = Bitstring::empty();
    let mut i = 0;
    while i < code.len() {
        match (code.get(i), code.get(i + 1)) {
            (false, false) => cur.push(false),
            (true, true) => cur.push(true),
            (false, true) => {
                let done = std::mem::take(&mut cur);
                if let Some(prev) = elements.last() {
                    if *prev >= done {
                        return None;
                    }
                }
                elements.push(done);
            }
            (true, false) => return None,
        }
        i += 2;
    }
    if !cur.is_empty() {
        return None;
    }
    Some(elements)
}

/// Cheap structural check that avoids building the element list.
pub fn is_valid_code(code: &Bitstring) -> bool {
    decode_set(code).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;
    use proptest::prelude::*;

    #[test]
    fn spec_examples() {
        assert_eq!(encode_set(std::iter::empty()), Bitstring::empty());
        assert_eq!(encode_set([&bits("")]), bits("01"));
        assert_eq!(encode_set([&bits("0"), &bits("")]), bits("010001"));
        assert_eq!(decode_set(&bits("010001")), Some(vec![bits(""), bits("0")]));
        assert_eq!(decode_set(&bits("1")), None);
        assert_eq!(decode_set(&bits("0001")), Some(vec![bits("0")]));
    }

    #[test]
    fn out_of_order_and_duplicates_are_invalid() {
        // {0} then {Λ}: reversed canonical order
        assert_eq!(decode_set(&bits("000101")), None);
        // 0 twice
        assert_eq!(decode_set(&bits("00010001")), None);
        // missing terminator
        assert_eq!(decode_set(&bits("0100")), None);
        // forbidden pair
        assert_eq!(decode_set(&bits("10")), None);
    }

    #[test]
    fn frame_is_singleton_code() {
        let x = bits("0110");
        assert_eq!(frame(&x), encode_set([&x]));
        assert_eq!(pair(&x, &bits("1")), bits("00111100011"));
    }

    proptest! {
        #[test]
        fn decode_encode_identity(idx in proptest::collection::btree_set(0u64..200, 0..12)) {
            let set: Vec<Bitstring> = idx.iter().map(|&i| Bitstring::from_index(i)).collect();
            let code = encode_set(set.iter());
            prop_assert_eq!(decode_set(&code), Some(set));
        }

        #[test]
        fn encode_decode_identity_on_valid(v in 0u64..(1 << 16), len in 0usize..=16) {
            let code = Bitstring::from_u64(v & ((1u64 << len) - 1), len);
            if let Some(set) = decode_set(&code) {
                prop_assert_eq!(encode_set(set.iter()), code);
            }
        }
    }
}
