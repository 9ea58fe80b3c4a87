//! Upward-closed subsets of ℕ², stored by their Pareto frontier.

use std::fmt::Write as _;

use crate::machine::MachineConfig;

/// An upward-closed set of (complexity, log-cardinality) pairs.
///
/// `(m, l)` belongs to the profile iff some frontier point `(a, b)` has
/// `a ≤ m` and `b ≤ l`. The frontier is sorted by ascending `a` with
/// strictly descending `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Profile {
    frontier: Vec<(u32, u32)>,
}

impl Profile {
    pub fn empty() -> Profile {
        Profile::default()
    }

    /// The upward closure of `points`.
    pub fn from_points<I: IntoIterator<Item = (u32, u32)>>(points: I) -> Profile {
        let mut pts: Vec<(u32, u32)> = points.into_iter().collect();
        pts.sort_unstable();
        let mut frontier: Vec<(u32, u32)> = Vec::new();
        for (a, b) in pts {
            if frontier.last().is_none_or(|&(_, lb)| b < lb) {
                frontier.push((a, b));
            }
        }
        Profile { frontier }
    }

    pub fn frontier(&self) -> &[(u32, u32)] {
        &self.frontier
    }

    pub fn is_empty(&self) -> bool {
        self.frontier.is_empty()
    }

    pub fn contains(&self, m: u32, l: u32) -> bool {
        self.frontier.iter().any(|&(a, b)| a <= m && b <= l)
    }

    /// Least l with (m, l) in the profile.
    pub fn min_l(&self, m: u32) -> Option<u32> {
        self.frontier
            .iter()
            .filter(|&&(a, _)| a <= m)
            .map(|&(_, b)| b)
            .min()
    }

    /// Least m with (m, l) in the profile.
    pub fn min_m(&self, l: u32) -> Option<u32> {
        self.frontier
            .iter()
            .filter(|&&(_, b)| b <= l)
            .map(|&(a, _)| a)
            .min()
    }

    pub fn is_subset_of(&self, other: &Profile) -> bool {
        self.frontier.iter().all(|&(a, b)| other.contains(a, b))
    }

    /// The frontier is sorted and mutually non-dominating.
    pub fn is_well_formed(&self) -> bool {
        self.frontier
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1 > w[1].1)
    }

    /// Least ε such that `self` lies in the ℓ∞ ε-dilation of `other`,
    /// i.e. every point (a, b) of `self` has (a + ε, b + ε) in `other`.
    /// `None` when no finite ε works.
    pub fn excess_over(&self, other: &Profile) -> Option<u32> {
        let mut worst = 0;
        for &(a, b) in &self.frontier {
            let best = other
                .frontier
                .iter()
                .map(|&(c, d)| c.saturating_sub(a).max(d.saturating_sub(b)))
                .min()?;
            worst = worst.max(best);
        }
        Some(worst)
    }

    /// Least ε at which the two profiles are ε-close: each is contained in
    /// the other's ε-dilation.
    pub fn distance(&self, other: &Profile) -> Option<u32> {
        Some(self.excess_over(other)?.max(other.excess_over(self)?))
    }

    /// `(m, l) ↦ (m, l + shift)`.
    pub fn shift_up(&self, shift: u32) -> Profile {
        Profile::from_points(self.frontier.iter().map(|&(a, b)| (a, b + shift)))
    }

    /// Restriction to points with l ≥ `floor`: frontier points below the
    /// floor are raised onto it.
    pub fn clip_below(&self, floor: u32) -> Profile {
        Profile::from_points(self.frontier.iter().map(|&(a, b)| (a, b.max(floor))))
    }

    /// CSV export: a `#`-comment header followed by `m,l_min` rows.
    pub fn to_csv(&self, header: &ProfileHeader) -> String {
        let mut s = header.render();
        s.push_str("m,l_min\n");
        for &(a, b) in &self.frontier {
            let _ = writeln!(s, "{a},{b}");
        }
        s
    }

    /// Parses the CSV produced by [`Profile::to_csv`], ignoring the header.
    pub fn from_csv(text: &str) -> Option<Profile> {
        let mut pts = Vec::new();
        for line in text.lines() {
            if line.starts_with('#') || line == "m,l_min" || line.is_empty() {
                continue;
            }
            let (a, b) = line.split_once(',')?;
            pts.push((a.parse().ok()?, b.parse().ok()?));
        }
        Some(Profile::from_points(pts))
    }
}

/// Provenance lines written above a profile CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileHeader {
    pub config: MachineConfig,
    pub kind: String,
    pub x: String,
    pub epsilon: Option<u32>,
    pub family: Option<String>,
    pub m_max: u32,
}

impl ProfileHeader {
    pub fn render(&self) -> String {
        let eps = self.epsilon.map_or("inf".to_string(), |e| e.to_string());
        format!(
            "# profile={} x={}\n# machine_id={} L={} T={} N={}\n# epsilon={} family={} m_max={}\n",
            self.kind,
            self.x,
            self.config.machine_id,
            self.config.max_prog_len,
            self.config.step_budget,
            self.config.cond_universe,
            eps,
            self.family.as_deref().unwrap_or("all"),
            self.m_max
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn frontier_drops_dominated_points() {
        let p = Profile::from_points([(5, 3), (3, 5), (4, 5), (5, 0), (7, 0), (3, 6)]);
        assert_eq!(p.frontier(), &[(3, 5), (5, 0)]);
        assert!(p.contains(4, 5));
        assert!(!p.contains(4, 4));
        assert_eq!(p.min_l(4), Some(5));
        assert_eq!(p.min_m(0), Some(5));
    }

    #[test]
    fn distances() {
        let a = Profile::from_points([(2, 4), (6, 0)]);
        let b = Profile::from_points([(3, 4), (6, 1)]);
        assert_eq!(a.excess_over(&b), Some(1));
        assert_eq!(b.excess_over(&a), Some(0));
        assert_eq!(a.distance(&b), Some(1));
        assert_eq!(a.distance(&a), Some(0));
        assert_eq!(a.excess_over(&Profile::empty()), None);
        assert_eq!(Profile::empty().excess_over(&a), Some(0));
    }

    #[test]
    fn csv_roundtrip() {
        let p = Profile::from_points([(2, 4), (6, 0)]);
        let h = ProfileHeader {
            config: MachineConfig::default(),
            kind: "plain".into(),
            x: "01".into(),
            epsilon: None,
            family: None,
            m_max: 20,
        };
        let csv = p.to_csv(&h);
        assert!(csv.starts_with("# profile=plain x=01\n# machine_id=rb8-v1"));
        assert_eq!(Profile::from_csv(&csv), Some(p));
    }

    proptest! {
        #[test]
        fn closure_laws(pts in proptest::collection::vec((0u32..20, 0u32..20), 0..30),
                        m in 0u32..22, l in 0u32..22) {
            let p = Profile::from_points(pts.clone());
            prop_assert!(p.is_well_formed());
            for &(a, b) in &pts {
                prop_assert!(p.contains(a, b));
            }
            if p.contains(m, l) {
                prop_assert!(p.contains(m + 1, l));
                prop_assert!(p.contains(m, l + 1));
            }
            prop_assert_eq!(p.contains(m, l), pts.iter().any(|&(a, b)| a <= m && b <= l));
        }

        #[test]
        fn dilation_is_monotone(p in proptest::collection::vec((0u32..10, 0u32..10), 1..8),
                                q in proptest::collection::vec((0u32..10, 0u32..10), 1..8)) {
            let a = Profile::from_points(p);
            let b = Profile::from_points(q);
            let e = a.excess_over(&b).unwrap();
            for &(x, y) in a.frontier() {
                prop_assert!(b.contains(x + e, y + e));
            }
            if a.is_subset_of(&b) {
                prop_assert_eq!(e, 0);
            }
        }
    }
}
