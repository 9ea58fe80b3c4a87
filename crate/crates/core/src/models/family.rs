//! Model families and the acceptability checker.

use crate::bitstring::Bitstring;

/// A deterministic enumerable class of finite sets. Implementations expose
/// a finite fragment: the members made of `n`-bit strings.
pub trait ModelFamily: Sync {
    fn name(&self) -> String;

    /// Members whose elements all have length `n`, duplicate-free, in a
    /// fixed order. Each member is sorted.
    fn members(&self, n: usize) -> Vec<Vec<Bitstring>>;

    /// Membership test for a sorted set.
    fn contains(&self, set: &[Bitstring]) -> bool;

    /// Members containing `x`.
    fn members_containing(&self, x: &Bitstring) -> Vec<Vec<Bitstring>> {
        self.members(x.len())
            .into_iter()
            .filter(|m| m.binary_search(x).is_ok())
            .collect()
    }
}

fn cylinder(u: &Bitstring, n: usize) -> Vec<Bitstring> {
    Bitstring::all_of_len(n - u.len())
        .map(|v| u.concat(&v))
        .collect()
}

/// The family 𝓑 of prefix cylinders {uv : l(v) = m}.
#[derive(Debug, Clone, Copy, Default)]
pub struct CylinderFamily;

impl ModelFamily for CylinderFamily {
    fn name(&self) -> String {
        "cylinders".into()
    }

    fn members(&self, n: usize) -> Vec<Vec<Bitstring>> {
        (0..=n)
            .flat_map(|i| Bitstring::all_of_len(i).map(move |u| cylinder(&u, n)))
            .collect()
    }

    fn contains(&self, set: &[Bitstring]) -> bool {
        let Some(first) = set.first() else {
            return false;
        };
        let n = first.len();
        if !set.len().is_power_of_two() {
            return false;
        }
        let m = set.len().trailing_zeros() as usize;
        if m > n {
            return false;
        }
        set == cylinder(&first.prefix(n - m), n).as_slice()
    }

    fn members_containing(&self, x: &Bitstring) -> Vec<Vec<Bitstring>> {
        (0..=x.len())
            .map(|i| cylinder(&x.prefix(i), x.len()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SingletonFamily;

impl ModelFamily for SingletonFamily {
    fn name(&self) -> String {
        "singletons".into()
    }

    fn members(&self, n: usize) -> Vec<Vec<Bitstring>> {
        Bitstring::all_of_len(n).map(|x| vec![x]).collect()
    }

    fn contains(&self, set: &[Bitstring]) -> bool {
        set.len() == 1
    }

    fn members_containing(&self, x: &Bitstring) -> Vec<Vec<Bitstring>> {
        vec![vec![x.clone()]]
    }
}

/// All nonempty sets of equal-length strings, enumerable for n ≤ `max_n`.
#[derive(Debug, Clone, Copy)]
pub struct AllSetsFragment {
    pub max_n: usize,
}

impl Default for AllSetsFragment {
    fn default() -> Self {
        AllSetsFragment { max_n: 3 }
    }
}

impl ModelFamily for AllSetsFragment {
    fn name(&self) -> String {
        format!("all-sets(n<={})", self.max_n)
    }

    fn members(&self, n: usize) -> Vec<Vec<Bitstring>> {
        if n > self.max_n {
            return Vec::new();
        }
        let strings: Vec<Bitstring> = Bitstring::all_of_len(n).collect();
        (1u64..1 << strings.len())
            .map(|mask| {
                strings
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, s)| s.clone())
                    .collect()
            })
            .collect()
    }

    fn contains(&self, set: &[Bitstring]) -> bool {
        match set.first() {
            None => false,
            Some(f) => f.len() <= self.max_n && set.iter().all(|s| s.len() == f.len()),
        }
    }
}

/// A polynomial bound p(n) = Σ coeffs[i]·n^i.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn eval(&self, n: usize) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * n as f64 + c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Acceptability {
    Accepted,
    /// Property (1): enumeration is not reproducible or has duplicates.
    NotEnumerable {
        n: usize,
    },
    /// Property (2): the cube {0,1}^n is missing.
    MissingCube {
        n: usize,
    },
    /// Property (3): the greedy cover of `set` by members of size ≤ c
    /// needed `used` sets, more than the allowed p(n)·|A|/c.
    CoverTooLarge {
        n: usize,
        set: Vec<Bitstring>,
        c: usize,
        used: usize,
        allowed: f64,
    },
    /// The greedy search ran out of its evaluation budget.
    BudgetExhausted {
        n: usize,
        evaluated: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcceptabilityReport {
    pub family: String,
    pub n_range: (usize, usize),
    pub outcome: Acceptability,
    pub covers_checked: u64,
}

impl AcceptabilityReport {
    pub fn accepted(&self) -> bool {
        self.outcome == Acceptability::Accepted
    }
}

/// Checks the three acceptability properties on the fragment n ∈ `n_range`
/// (inclusive). `budget` bounds the number of candidate evaluations made by
/// the greedy cover search.
pub fn is_acceptable(
    family: &dyn ModelFamily,
    n_range: (usize, usize),
    p: &Polynomial,
    budget: u64,
) -> AcceptabilityReport {
    let report = |outcome, covers_checked| AcceptabilityReport {
        family: family.name(),
        n_range,
        outcome,
        covers_checked,
    };
    let mut evaluated = 0u64;
    let mut covers = 0u64;
    for n in n_range.0..=n_range.1 {
        let members = family.members(n);
        let mut sorted = members.clone();
        sorted.sort();
        sorted.dedup();
        if members != family.members(n) || sorted.len() != members.len() {
            return report(Acceptability::NotEnumerable { n }, covers);
        }
        let cube: Vec<Bitstring> = Bitstring::all_of_len(n).collect();
        if !members.contains(&cube) || !family.contains(&cube) {
            return report(Acceptability::MissingCube { n }, covers);
        }
        for a in &members {
            for c in 1..a.len() {
                let candidates: Vec<&Vec<Bitstring>> =
                    members.iter().filter(|m| m.len() <= c).collect();
                let mut uncovered: Vec<&Bitstring> = a.iter().collect();
                let mut used = 0usize;
                while !uncovered.is_empty() {
                    evaluated += candidates.len() as u64;
                    if evaluated > budget {
                        return report(Acceptability::BudgetExhausted { n, evaluated }, covers);
                    }
                    let best = candidates
                        .iter()
                        .map(|m| {
                            uncovered
                                .iter()
                                .filter(|u| m.binary_search(u).is_ok())
                                .count()
                        })
                        .enumerate()
                        .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)));
                    match best {
                        Some((i, gain)) if gain > 0 => {
                            let m = candidates[i];
                            uncovered.retain(|u| m.binary_search(u).is_err());
                            used += 1;
                        }
                        _ => {
                            used = usize::MAX;
                            break;
                        }
                    }
                }
                covers += 1;
                let allowed = p.eval(n) * a.len() as f64 / c as f64;
                if used as f64 > allowed {
                    return report(
                        Acceptability::CoverTooLarge {
                            n,
                            set: a.clone(),
                            c,
                            used,
                            allowed,
                        },
                        covers,
                    );
                }
            }
        }
    }
    report(Acceptability::Accepted, covers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::bits;

    const BUDGET: u64 = 50_000_000;

    #[test]
    fn cylinders_are_acceptable_with_linear_overhead() {
        let r = is_acceptable(&CylinderFamily, (0, 6), &Polynomial(vec![1.0, 1.0]), BUDGET);
        assert!(r.accepted(), "{r:?}");
    }

    #[test]
    fn cylinders_need_more_than_constant_one() {
        // c = 3 inside a 4-element cylinder needs 4 singletons or 2 pairs
        let r = is_acceptable(&CylinderFamily, (0, 3), &Polynomial(vec![1.0]), BUDGET);
        assert!(
            matches!(
                r.outcome,
                Acceptability::CoverTooLarge { c: 3, used: 2, .. }
            ),
            "{r:?}"
        );
    }

    #[test]
    fn singletons_lack_cubes() {
        let r = is_acceptable(
            &SingletonFamily,
            (1, 3),
            &Polynomial(vec![1.0, 1.0]),
            BUDGET,
        );
        assert_eq!(r.outcome, Acceptability::MissingCube { n: 1 });
    }

    #[test]
    fn all_sets_are_acceptable() {
        let r = is_acceptable(
            &AllSetsFragment::default(),
            (0, 2),
            &Polynomial(vec![1.0, 1.0]),
            BUDGET,
        );
        assert!(r.accepted(), "{r:?}");
    }

    #[test]
    fn tiny_budget_is_reported_distinctly() {
        let r = is_acceptable(&CylinderFamily, (0, 4), &Polynomial(vec![1.0, 1.0]), 10);
        assert!(matches!(r.outcome, Acceptability::BudgetExhausted { .. }));
    }

    #[test]
    fn cylinder_membership() {
        assert!(CylinderFamily.contains(&[bits("010"), bits("011")]));
        assert!(!CylinderFamily.contains(&[bits("010"), bits("100")]));
        assert_eq!(CylinderFamily.members_containing(&bits("01")).len(), 3);
        let via_filter: Vec<_> = CylinderFamily
            .members(3)
            .into_iter()
            .filter(|m| m.contains(&bits("101")))
            .collect();
        let mut direct = CylinderFamily.members_containing(&bits("101"));
        direct.sort();
        let mut v = via_filter;
        v.sort();
        assert_eq!(v, direct);
    }

    #[test]
    fn polynomial_eval() {
        assert_eq!(Polynomial(vec![1.0, 2.0, 3.0]).eval(2), 1.0 + 4.0 + 12.0);
    }
}
