//! Ordinal selection: the Expanding Approvals Rule and a two-candidate
//! single-winner rule built from the same idea.
//!
//! Both rules see only the ranked profile. The expanding-approvals loop
//! deepens a tolerance `τ` one rank at a time; in each round every uncovered
//! voter (ascending index) approves its rank-`τ` candidate, and the first
//! candidate whose neighborhood reaches the Hare quota is selected and its
//! voters are covered.

use crate::coverage::{Algorithm, CoverageRecord, OpCounts, Representative, Threshold};
use crate::error::{Error, Result};
use crate::instance::hare_quota;
use crate::profile::RankedProfile;

/// Neighborhood state shared by the ordinal and cardinal simulations.
///
/// Removal is lazy: a neighborhood's member list is append-only, and a
/// member is live while its voter is uncovered. `ledger[v]` lists every
/// neighborhood `v` joined, so covering `v` only touches those.
pub(crate) struct Neighborhoods {
    quota: usize,
    members: Vec<Vec<usize>>,
    live: Vec<usize>,
    ledger: Vec<Vec<usize>>,
    pub(crate) uncovered: Vec<bool>,
    pub(crate) selected: Vec<bool>,
    pub(crate) ops: OpCounts,
    pub(crate) remaining: usize,
}

impl Neighborhoods {
    pub(crate) fn new(n: usize, m: usize, quota: usize) -> Self {
        Neighborhoods {
            quota,
            members: vec![Vec::new(); m],
            live: vec![0; m],
            ledger: vec![Vec::new(); n],
            uncovered: vec![true; n],
            selected: vec![false; m],
            ops: OpCounts::default(),
            remaining: n,
        }
    }

    /// Adds uncovered voter `v` to `N_c` for unselected `c`. Returns the
    /// covered neighborhood (ascending) if `c` reached the quota.
    pub(crate) fn insert(&mut self, v: usize, c: usize) -> Option<Vec<usize>> {
        debug_assert!(self.uncovered[v] && !self.selected[c]);
        self.members[c].push(v);
        self.ledger[v].push(c);
        self.live[c] += 1;
        self.ops.inserts += 1;
        if self.live[c] < self.quota {
            return None;
        }
        self.selected[c] = true;
        let mut covered = Vec::with_capacity(self.quota);
        for &u in &self.members[c] {
            self.ops.probes += 1;
            if self.uncovered[u] {
                covered.push(u);
            }
        }
        debug_assert_eq!(covered.len(), self.quota);
        for &u in &covered {
            self.uncovered[u] = false;
            for &other in &self.ledger[u] {
                self.ops.probes += 1;
                if other != c && !self.selected[other] {
                    self.live[other] -= 1;
                    self.ops.removals += 1;
                }
            }
        }
        self.remaining -= covered.len();
        covered.sort_unstable();
        Some(covered)
    }

    pub(crate) fn finish(
        self,
        algorithm: Algorithm,
        k: usize,
        mut representatives: Vec<Representative>,
    ) -> CoverageRecord {
        let n = self.uncovered.len();
        let m = self.selected.len();
        let mut selected = self.selected;
        for (c, taken) in selected.iter_mut().enumerate() {
            if representatives.len() >= k {
                break;
            }
            if !*taken {
                *taken = true;
                representatives.push(Representative {
                    candidate: c,
                    voters: Vec::new(),
                    threshold: Threshold::Filler,
                });
            }
        }
        CoverageRecord {
            algorithm,
            n,
            m,
            k,
            quota: hare_quota(n, k),
            representatives,
            uncovered: (0..n).filter(|&v| self.uncovered[v]).collect(),
            ops: self.ops,
        }
    }
}

pub(crate) fn check_shape(n: usize, m: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInstance("need at least one voter".into()));
    }
    if k == 0 || k >= m {
        return Err(Error::InvalidInstance(format!(
            "need 1 <= k < m, got k = {k}, m = {m}"
        )));
    }
    Ok(())
}

/// Runs the Expanding Approvals Rule with ascending-index voter order in each
/// round and lowest-index filler candidates.
pub fn ear_select(profile: &RankedProfile, n: usize, m: usize, k: usize) -> Result<CoverageRecord> {
    if profile.n() != n || profile.m() != m {
        return Err(Error::ProfileShapeMismatch(format!(
            "profile is {}x{}, election is {n}x{m}",
            profile.n(),
            profile.m()
        )));
    }
    check_shape(n, m, k)?;
    let quota = hare_quota(n, k).get();
    let mut state = Neighborhoods::new(n, m, quota);
    let mut representatives = Vec::with_capacity(k);
    for tau in 1..=m {
        if state.remaining == 0 {
            break;
        }
        for v in 0..n {
            if !state.uncovered[v] {
                continue;
            }
            let c = profile.at_rank(v, tau);
            if state.selected[c] {
                continue;
            }
            if let Some(voters) = state.insert(v, c) {
                representatives.push(Representative {
                    candidate: c,
                    voters,
                    threshold: Threshold::Tolerance(tau),
                });
            }
        }
    }
    Ok(state.finish(Algorithm::Ear, k, representatives))
}

/// Voters in `group` prefer `a` to `b` strictly.
fn preferring(
    profile: &RankedProfile,
    voters: impl Iterator<Item = usize>,
    a: usize,
    b: usize,
) -> usize {
    voters
        .filter(|&v| profile.position(v, a) < profile.position(v, b))
        .count()
}

/// Majority winner between `first` and `second`; an exact tie goes to `first`.
pub fn majority_winner(profile: &RankedProfile, first: usize, second: usize) -> usize {
    if first == second {
        return first;
    }
    let for_first = preferring(profile, 0..profile.n(), first, second);
    let for_second = preferring(profile, 0..profile.n(), second, first);
    if for_second > for_first {
        second
    } else {
        first
    }
}

/// Smallest depth `τ` at which some candidate sits in the top `τ` of at
/// least `need` of `voters`; returns that candidate (lowest index on ties).
fn shallowest_common(profile: &RankedProfile, voters: &[usize], need: usize) -> usize {
    let mut counts = vec![0usize; profile.m()];
    for tau in 1..=profile.m() {
        for &v in voters {
            counts[profile.at_rank(v, tau)] += 1;
        }
        if let Some(c) = counts.iter().position(|&x| x >= need) {
            return c;
        }
    }
    unreachable!("at depth m every candidate is ranked by every voter")
}

/// The two-candidate single-winner rule: `c` is the shallowest candidate
/// shared by a majority half of the voters, `c'` the shallowest shared by all
/// of the remaining voters, and the pairwise majority between them wins.
pub fn single_winner(profile: &RankedProfile) -> usize {
    let n = profile.n();
    assert!(n >= 1, "single_winner needs a voter");
    let everyone: Vec<usize> = (0..n).collect();
    let half = n.div_ceil(2);
    let first = shallowest_common(profile, &everyone, half);
    let depth = (1..=profile.m())
        .find(|&tau| {
            everyone
                .iter()
                .filter(|&&v| profile.position(v, first) <= tau)
                .count()
                >= half
        })
        .expect("first was found at some depth");
    let supporters: Vec<usize> = everyone
        .iter()
        .copied()
        .filter(|&v| profile.position(v, first) <= depth)
        .take(half)
        .collect();
    let rest: Vec<usize> = everyone
        .into_iter()
        .filter(|v| !supporters.contains(v))
        .collect();
    if rest.is_empty() {
        return first;
    }
    let second = shallowest_common(profile, &rest, rest.len());
    majority_winner(profile, first, second)
}

/// Same guarantee via the committee rule: run expanding approvals with
/// `k = 2` and return the pairwise-majority winner of the two members.
pub fn single_winner_via_ear(profile: &RankedProfile) -> Result<usize> {
    let record = ear_select(profile, profile.n(), profile.m(), 2)?;
    let members = record.committee();
    Ok(majority_winner(
        profile,
        members.members()[0],
        members.members()[1],
    ))
}
