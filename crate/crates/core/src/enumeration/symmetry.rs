use crate::bitstring::Bitstring;
use crate::enumeration::table::HaltingTable;
use crate::enumeration::Complexity;
use crate::error::Result;
use crate::machine::pair;

/// The five quantities of the symmetry-of-information relation and the
/// two gaps against C(x,y). A gap is `None` when a term is infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryReport {
    pub c_x: Complexity,
    pub c_y: Complexity,
    pub c_x_given_y: Complexity,
    pub c_y_given_x: Complexity,
    pub c_xy: Complexity,
    /// |C(x) + C(y|x) − C(x,y)|
    pub gap_x_first: Option<u64>,
    /// |C(y) + C(x|y) − C(x,y)|
    pub gap_y_first: Option<u64>,
}

fn gap(a: Complexity, b: Complexity, joint: Complexity) -> Option<u64> {
    let lhs = a.finite()? as i64 + b.finite()? as i64;
    Some((lhs - joint.finite()? as i64).unsigned_abs())
}

/// Measures C(x), C(y), C(x|y), C(y|x) and C(x,y) with the pair code
/// frame(x)·y. Records `x` and `y` as conditions on demand.
pub fn symmetry_report(
    table: &HaltingTable,
    x: &Bitstring,
    y: &Bitstring,
) -> Result<SymmetryReport> {
    let l = table.config().max_prog_len;
    let c_x = table.complexity(x);
    let c_y = table.complexity(y);
    let c_x_given_y = table.cond_complexity_upto(x, y, l)?;
    let c_y_given_x = table.cond_complexity_upto(y, x, l)?;
    let c_xy = table.complexity(&pair(x, y));
    Ok(SymmetryReport {
        c_x,
        c_y,
        c_x_given_y,
        c_y_given_x,
        c_xy,
        gap_x_first: gap(c_x, c_y_given_x, c_xy),
        gap_y_first: gap(c_y, c_x_given_y, c_xy),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;
    use crate::enumeration::build_table;
    use crate::machine::MachineConfig;

    #[test]
    fn empty_pair() {
        let t = build_table(&MachineConfig::new(14, 256, 2).unwrap(), &[]).unwrap();
        let r = symmetry_report(&t, &Bitstring::empty(), &Bitstring::empty()).unwrap();
        assert_eq!(r.c_x_given_y, Complexity::Finite(0));
        let expect = r.c_xy.diff(r.c_x).map(|d| d.unsigned_abs());
        assert_eq!(r.gap_x_first, expect);
        assert_eq!(r.gap_y_first, expect);
    }

    #[test]
    fn swapping_swaps_sides() {
        let t = build_table(&MachineConfig::new(14, 256, 2).unwrap(), &[]).unwrap();
        let (x, y) = (bits("01"), bits("1"));
        let a = symmetry_report(&t, &x, &y).unwrap();
        let b = symmetry_report(&t, &y, &x).unwrap();
        assert_eq!(a.c_x_given_y, b.c_y_given_x);
        assert_eq!(a.c_x, b.c_y);
    }
}
