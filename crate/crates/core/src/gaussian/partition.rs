use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A bipartition `A × Aᶜ` of `n_modes` modes (0-based indices).
///
/// A set and its complement describe the same cut. The stored side is the
/// smaller one; for equal sizes it is the side containing mode 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModePartition {
    n_modes: usize,
    alice: Vec<usize>,
}

impl ModePartition {
    pub fn new(n_modes: usize, modes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut a: Vec<usize> = modes.into_iter().collect();
        a.sort_unstable();
        a.dedup();
        if let Some(&bad) = a.iter().find(|&&j| j >= n_modes) {
            return invalid(format!("mode index {bad} out of range for {n_modes} modes"));
        }
        if a.is_empty() || a.len() == n_modes {
            return invalid("a partition needs a nonempty proper subset of modes");
        }
        let b: Vec<usize> = (0..n_modes).filter(|j| !a.contains(j)).collect();
        let alice = if b.len() < a.len() || (b.len() == a.len() && b[0] == 0) { b } else { a };
        Ok(Self { n_modes, alice })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// The canonical side, ascending.
    pub fn modes(&self) -> &[usize] {
        &self.alice
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.n_modes).filter(|j| !self.alice.contains(j)).collect()
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.alice.contains(&mode)
    }

    /// `{a,b,..}` with indices shifted by `base` (0 or 1).
    pub fn label(&self, base: usize) -> String {
        format!("{{{}}}", self.alice.iter().map(|j| j + base).join(","))
    }
}

impl fmt::Display for ModePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label(0))
    }
}

/// All `2^{N−1} − 1` bipartitions, ordered by size of the canonical side and
/// then lexicographically.
pub fn enumerate_bipartitions(n_modes: usize) -> Result<Vec<ModePartition>> {
    if n_modes < 2 {
        return invalid("bipartitions need at least two modes");
    }
    if n_modes > 30 {
        return invalid("too many modes to enumerate bipartitions");
    }
    let mut out = Vec::with_capacity((1usize << (n_modes - 1)) - 1);
    for k in 1..=n_modes / 2 {
        for combo in (0..n_modes).combinations(k) {
            if 2 * k == n_modes && combo[0] != 0 {
                continue;
            }
            out.push(ModePartition {
                n_modes,
                alice: combo,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        assert_eq!(enumerate_bipartitions(2).unwrap().len(), 1);
        assert_eq!(enumerate_bipartitions(3).unwrap().len(), 3);
        for n in 2..=10 {
            let parts = enumerate_bipartitions(n).unwrap();
            assert_eq!(parts.len(), (1 << (n - 1)) - 1);
            let set: HashSet<_> = parts.iter().cloned().collect();
            assert_eq!(set.len(), parts.len());
        }
        assert!(enumerate_bipartitions(1).is_err());
    }

    #[test]
    fn four_mode_order_matches_labels() {
        let labels: Vec<String> = enumerate_bipartitions(4).unwrap().iter().map(|p| p.label(1)).collect();
        assert_eq!(labels, ["{1}", "{2}", "{3}", "{4}", "{1,2}", "{1,3}", "{1,4}"]);
    }

    #[test]
    fn complement_is_same_partition() {
        let a = ModePartition::new(4, [2, 3]).unwrap();
        let b = ModePartition::new(4, [0, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(ModePartition::new(3, [1, 2]).unwrap().modes(), &[0]);
        assert_eq!(a.complement(), vec![2, 3]);
    }

    #[test]
    fn rejects_trivial_and_out_of_range() {
        assert!(ModePartition::new(3, []).is_err());
        assert!(ModePartition::new(3, [0, 1, 2]).is_err());
        assert!(ModePartition::new(3, [3]).is_err());
    }
}
