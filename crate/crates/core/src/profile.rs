//! Ranked-choice profiles.

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Per-voter total orders over candidates (0-based candidate indices,
/// most preferred first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankedProfile {
    m: usize,
    orders: Vec<Vec<usize>>,
    /// `positions[v * m + c]` is the 1-based rank of `c` for `v`.
    positions: Vec<usize>,
}

impl RankedProfile {
    /// Builds a profile from preference orders; each row must be a permutation of `0..m`.
    pub fn new(m: usize, orders: Vec<Vec<usize>>) -> Result<Self> {
        let mut positions = vec![0usize; orders.len() * m];
        for (v, order) in orders.iter().enumerate() {
            if order.len() != m {
                return Err(Error::ProfileShapeMismatch(format!(
                    "voter {} ranks {} candidates, expected {m}",
                    v + 1,
                    order.len()
                )));
            }
            for (rank, &c) in order.iter().enumerate() {
                if c >= m || positions[v * m + c] != 0 {
                    return Err(Error::ProfileShapeMismatch(format!(
                        "ranking of voter {} is not a permutation of 1..{m}",
                        v + 1
                    )));
                }
                positions[v * m + c] = rank + 1;
            }
        }
        Ok(RankedProfile {
            m,
            orders,
            positions,
        })
    }

    pub fn n(&self) -> usize {
        self.orders.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `π_v⁻¹(rank)` for a 1-based rank.
    pub fn at_rank(&self, v: usize, rank: usize) -> usize {
        self.orders[v][rank - 1]
    }

    /// `π_v(c)`, 1-based.
    pub fn position(&self, v: usize, c: usize) -> usize {
        self.positions[v * self.m + c]
    }

    pub fn order(&self, v: usize) -> &[usize] {
        &self.orders[v]
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    pub fn top(&self, v: usize) -> usize {
        self.orders[v][0]
    }

    /// Whether `c ≻_v c' ⇒ d(v,c) ≤ d(v,c')` holds everywhere. Returns the
    /// first offending `(v, c, c')` otherwise.
    pub fn inconsistency_with(&self, inst: &Instance) -> Option<(usize, usize, usize)> {
        if inst.n() != self.n() || inst.m() != self.m {
            return Some((usize::MAX, usize::MAX, usize::MAX));
        }
        for (v, order) in self.orders.iter().enumerate() {
            for pair in order.windows(2) {
                if inst.cmp_for_voter(v, pair[0], pair[1]).is_gt() {
                    return Some((v, pair[0], pair[1]));
                }
            }
        }
        None
    }

    pub fn is_consistent_with(&self, inst: &Instance) -> bool {
        self.inconsistency_with(inst).is_none()
    }
}

/// Ranks candidates by non-decreasing distance; ties go to the lower index.
pub fn derive_rankings(inst: &Instance) -> RankedProfile {
    let m = inst.m();
    let orders = (0..inst.n())
        .map(|v| {
            let mut order: Vec<usize> = (0..m).collect();
            // stable sort keeps ascending index among equal distances
            order.sort_by(|&a, &b| inst.cmp_for_voter(v, a, b));
            order
        })
        .collect();
    RankedProfile::new(m, orders).expect("sorted index lists are permutations")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Norm;
    use crate::scalar::parse_rational;

    fn line(voters: &[&str], candidates: &[&str], k: usize) -> Instance {
        let pts = voters
            .iter()
            .chain(candidates)
            .map(|x| vec![parse_rational(x).unwrap()])
            .collect();
        Instance::from_coordinates(voters.len(), candidates.len(), k, Norm::L1, pts).unwrap()
    }

    #[test]
    fn rankings_follow_distances() {
        let inst = line(&["0", "10"], &["1", "9", "50"], 1);
        let profile = derive_rankings(&inst);
        assert_eq!(profile.order(0), &[0, 1, 2]);
        assert_eq!(profile.order(1), &[1, 0, 2]);
        assert_eq!(profile.position(1, 0), 2);
        assert!(profile.is_consistent_with(&inst));
    }

    #[test]
    fn equal_distances_rank_by_index() {
        let inst = line(&["0", "0"], &["1", "-1", "1"], 1);
        let profile = derive_rankings(&inst);
        assert_eq!(profile.order(0), &[0, 1, 2]);
        assert_eq!(profile.order(1), &[0, 1, 2]);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(RankedProfile::new(3, vec![vec![0, 1, 1]]).is_err());
        assert!(RankedProfile::new(3, vec![vec![0, 1]]).is_err());
        assert!(RankedProfile::new(2, vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn detects_inconsistent_profile() {
        let inst = line(&["0"], &["1", "5"], 1);
        let bad = RankedProfile::new(2, vec![vec![1, 0]]).unwrap();
        assert_eq!(bad.inconsistency_with(&inst), Some((0, 1, 0)));
    }
}
