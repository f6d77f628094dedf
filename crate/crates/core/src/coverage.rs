//! Committees and the coverage records the selection rules emit.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::HareQuota;
use crate::scalar::ExactScalar;

/// A set of `k` distinct candidates, kept in selection order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Committee(Vec<usize>);

impl Committee {
    pub fn new(members: Vec<usize>, m: usize) -> Result<Self> {
        let mut seen = vec![false; m];
        for &c in &members {
            if c >= m {
                return Err(Error::InvalidCommittee(format!(
                    "candidate {} out of range 1..{m}",
                    c + 1
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidCommittee(format!(
                    "candidate {} listed twice",
                    c + 1
                )));
            }
        }
        if members.is_empty() {
            return Err(Error::InvalidCommittee("committee is empty".into()));
        }
        Ok(Committee(members))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0.contains(&c)
    }

    /// Membership mask over `0..m`.
    pub fn mask(&self, m: usize) -> Vec<bool> {
        let mut mask = vec![false; m];
        for &c in &self.0 {
            mask[c] = true;
        }
        mask
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ear,
    Tgc,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ear => "ear",
            Algorithm::Tgc => "tgc",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "ear" => Ok(Algorithm::Ear),
            "tgc" => Ok(Algorithm::Tgc),
            other => Err(Error::Parse(format!("unknown algorithm `{other}`"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// When a representative joined the committee.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Threshold {
    /// Expanding approvals: the tolerance `τ` (1-based rank depth).
    Tolerance(usize),
    /// Greedy capture: the ball radius `δ`.
    Radius(ExactScalar),
    /// Greedy capture on Euclidean coordinates: `δ²`.
    SquaredRadius(ExactScalar),
    /// Padding candidate added after the main loop.
    Filler,
}

impl Threshold {
    pub fn is_filler(&self) -> bool {
        matches!(self, Threshold::Filler)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representative {
    pub candidate: usize,
    /// `N_r`, ascending voter indices; empty for fillers.
    pub voters: Vec<usize>,
    pub threshold: Threshold,
}

/// Neighborhood bookkeeping counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OpCounts {
    pub inserts: u64,
    pub removals: u64,
    /// Ledger entries inspected while purging covered voters.
    pub probes: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.inserts + self.removals + self.probes
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverageRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub quota: HareQuota,
    /// Selection order; fillers last.
    pub representatives: Vec<Representative>,
    pub uncovered: Vec<usize>,
    pub ops: OpCounts,
}

impl CoverageRecord {
    pub fn committee(&self) -> Committee {
        Committee(self.representatives.iter().map(|r| r.candidate).collect())
    }

    /// For each voter, the index into `representatives` of the one covering it.
    pub fn owners(&self) -> Vec<Option<usize>> {
        let mut owner = vec![None; self.n];
        for (i, rep) in self.representatives.iter().enumerate() {
            for &v in &rep.voters {
                owner[v] = Some(i);
            }
        }
        owner
    }

    /// `R[S]`: candidates whose covered neighborhood meets `coalition`.
    pub fn representatives_of(&self, coalition: &[usize]) -> Vec<usize> {
        let owner = self.owners();
        let mut hit = vec![false; self.representatives.len()];
        for &v in coalition {
            if let Some(i) = owner[v] {
                hit[i] = true;
            }
        }
        self.representatives
            .iter()
            .zip(hit)
            .filter_map(|(r, h)| h.then_some(r.candidate))
            .collect()
    }

    /// Post-conditions shared by both rules: committee size, disjoint
    /// neighborhoods of exactly `p` voters, and `|U| < p` when some candidate
    /// was left unselected. Returns a description of each violation.
    pub fn structural_violations(&self) -> Vec<String> {
        let p = self.quota.get();
        let mut problems = Vec::new();
        if self.representatives.len() != self.k {
            problems.push(format!(
                "committee has {} members, expected {}",
                self.representatives.len(),
                self.k
            ));
        }
        let mut seen_candidate = vec![false; self.m];
        let mut seen_voter = vec![false; self.n];
        for rep in &self.representatives {
            if std::mem::replace(&mut seen_candidate[rep.candidate], true) {
                problems.push(format!("candidate {} selected twice", rep.candidate + 1));
            }
            if rep.threshold.is_filler() {
                if !rep.voters.is_empty() {
                    problems.push(format!("filler {} covers voters", rep.candidate + 1));
                }
                continue;
            }
            if rep.voters.len() != p {
                problems.push(format!(
                    "representative {} covers {} voters, expected {p}",
                    rep.candidate + 1,
                    rep.voters.len()
                ));
            }
            for &v in &rep.voters {
                if std::mem::replace(&mut seen_voter[v], true) {
                    problems.push(format!("voter {} covered twice", v + 1));
                }
            }
        }
        for &v in &self.uncovered {
            if seen_voter[v] {
                problems.push(format!("voter {} is both covered and uncovered", v + 1));
            }
        }
        let accounted = seen_voter.iter().filter(|&&s| s).count() + self.uncovered.len();
        if accounted != self.n {
            problems.push(format!(
                "{accounted} voters accounted for, expected {}",
                self.n
            ));
        }
        if self.k < self.m && self.uncovered.len() >= p {
            problems.push(format!(
                "{} voters uncovered at exit with quota {p}",
                self.uncovered.len()
            ));
        }
        problems
    }
}
