//! Integer kernels behind the audits. All values are ratios of scaled sums,
//! compared by cross-multiplication.

use std::cmp::Ordering;

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::Block;
use crate::scalar::Measure;
use crate::weight::{to_rational, Weight};

/// A non-negative ratio with positive denominator, or `+∞`.
#[derive(Clone, Debug)]
pub(crate) enum Frac<W> {
    Finite(W, W),
    Infinite,
}

impl<W: Weight> Frac<W> {
    pub(crate) fn zero() -> Self {
        Frac::Finite(W::zero(), W::from_big(&BigInt::from(1)))
    }

    pub(crate) fn one() -> Self {
        Frac::Finite(W::from_big(&BigInt::from(1)), W::from_big(&BigInt::from(1)))
    }

    /// `num/den`; `0/0` yields `zero_over_zero` (`None` = constraint vacuous).
    pub(crate) fn of(num: W, den: W, zero_over_zero: Option<Frac<W>>) -> Option<Self> {
        if den.is_zero() {
            if num.is_zero() {
                zero_over_zero
            } else {
                Some(Frac::Infinite)
            }
        } else {
            Some(Frac::Finite(num, den))
        }
    }

    pub(crate) fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Frac::Finite(a, b), Frac::Finite(c, d)) => a.times(d).cmp(&c.times(b)),
            (Frac::Finite(..), Frac::Infinite) => Ordering::Less,
            (Frac::Infinite, Frac::Finite(..)) => Ordering::Greater,
            (Frac::Infinite, Frac::Infinite) => Ordering::Equal,
        }
    }

    pub(crate) fn to_measure(&self) -> Measure {
        match self {
            Frac::Finite(a, b) => Measure::Finite(to_rational(a, b)),
            Frac::Infinite => Measure::Infinite,
        }
    }
}

/// Running maximum that keeps the first witness attaining it.
pub(crate) struct Best<W, T> {
    pub(crate) value: Option<Frac<W>>,
    pub(crate) witness: Option<T>,
}

impl<W: Weight, T> Best<W, T> {
    pub(crate) fn new() -> Self {
        Best {
            value: None,
            witness: None,
        }
    }

    pub(crate) fn beats(&self, candidate: &Frac<W>) -> bool {
        match &self.value {
            None => true,
            Some(v) => candidate.cmp(v) == Ordering::Greater,
        }
    }

    pub(crate) fn offer(&mut self, value: Frac<W>, witness: impl FnOnce() -> T) {
        if self.beats(&value) {
            self.value = Some(value);
            self.witness = Some(witness());
        }
    }

    pub(crate) fn measure(&self) -> Measure {
        self.value
            .as_ref()
            .map_or_else(Measure::zero, Frac::to_measure)
    }
}

/// `cost_R(v) = min_{r∈R} d(v, r)` for every voter.
pub(crate) fn committee_costs<W: Weight>(b: &Block<W>, members: &[usize]) -> Vec<W> {
    (0..b.n)
        .map(|v| {
            members
                .iter()
                .map(|&r| b.d(v, r))
                .min()
                .cloned()
                .expect("committee is non-empty")
        })
        .collect()
}

/// Per-voter ratio `num / d(v,c)` under the proportional-fairness zero
/// conventions: `0/0 = 1`, `x/0 = ∞`.
fn pf_ratio<W: Weight>(num: &W, den: &W) -> Frac<W> {
    Frac::of(num.clone(), den.clone(), Some(Frac::one())).expect("0/0 is mapped to one")
}

/// Proportional fairness: for each candidate, the `p`-th largest of
/// `cost_R(v)/d(v,c)`; maximized over candidates. Witness: `(c, top-p voters)`.
pub(crate) fn pf<W: Weight>(
    b: &Block<W>,
    members: &[usize],
    p: usize,
) -> (Measure, Option<(usize, Vec<usize>)>) {
    let costs = committee_costs(b, members);
    let mut best = Best::new();
    let mut ratios: Vec<(Frac<W>, usize)> = Vec::with_capacity(b.n);
    for c in 0..b.m {
        ratios.clear();
        ratios.extend((0..b.n).map(|v| (pf_ratio(&costs[v], b.d(v, c)), v)));
        ratios.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let (value, _) = ratios[p - 1].clone();
        best.offer(value, || {
            let mut voters: Vec<usize> = ratios[..p].iter().map(|x| x.1).collect();
            voters.sort_unstable();
            (c, voters)
        });
    }
    (best.measure(), best.witness)
}

/// Largest `Σ_S cost / Σ_S d(·,c)` over coalitions `|S| ≥ min_size`, by
/// Dinkelbach iteration on exact ratios. `0/0` coalitions are vacuous.
fn max_core_ratio<W: Weight>(
    costs: &[W],
    dists: &[W],
    min_size: usize,
) -> (Option<Frac<W>>, Option<Vec<usize>>) {
    let n = costs.len();
    if min_size > n {
        return (None, None);
    }
    let zero_dist: Vec<usize> = (0..n).filter(|&v| dists[v].is_zero()).collect();
    if zero_dist.len() >= min_size {
        if let Some(&bad) = zero_dist.iter().find(|&&v| costs[v].is_positive()) {
            let mut s: Vec<usize> = std::iter::once(bad)
                .chain(
                    zero_dist
                        .iter()
                        .copied()
                        .filter(|&v| v != bad)
                        .take(min_size - 1),
                )
                .collect();
            s.sort_unstable();
            return (Some(Frac::Infinite), Some(s));
        }
    }
    let mut num = W::zero();
    let mut den = W::from_big(&BigInt::from(1));
    let mut witness: Option<Vec<usize>> = None;
    let mut value: Option<Frac<W>> = None;
    let mut order: Vec<(W, usize)> = Vec::with_capacity(n);
    loop {
        order.clear();
        order.extend((0..n).map(|v| (costs[v].times(&den).minus(&num.times(&dists[v])), v)));
        order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut gain = W::zero();
        let mut chosen = Vec::with_capacity(n);
        for (i, (term, v)) in order.iter().enumerate() {
            if i < min_size || term.is_positive() {
                gain.add_to(term);
                chosen.push(*v);
            } else {
                break;
            }
        }
        if !gain.is_positive() {
            if value.is_none() {
                // all costs vanish: every coalition has ratio 0 or is vacuous
                let Some(anchor) = (0..n).find(|&v| dists[v].is_positive()) else {
                    return (None, None);
                };
                let mut s: Vec<usize> = std::iter::once(anchor)
                    .chain(
                        (0..n)
                            .filter(|&v| v != anchor)
                            .take(min_size.saturating_sub(1)),
                    )
                    .collect();
                s.sort_unstable();
                return (Some(Frac::zero()), Some(s));
            }
            return (value, witness);
        }
        let mut s_cost = W::zero();
        let mut s_dist = W::zero();
        for &v in &chosen {
            s_cost.add_to(&costs[v]);
            s_dist.add_to(&dists[v]);
        }
        debug_assert!(s_dist.is_positive(), "infinite ratios are handled up front");
        num = s_cost;
        den = s_dist;
        chosen.sort_unstable();
        value = Some(Frac::Finite(num.clone(), den.clone()));
        witness = Some(chosen);
    }
}

/// Approximate core: max over candidates of the best coalition ratio.
pub(crate) fn core<W: Weight>(
    b: &Block<W>,
    members: &[usize],
    min_size: usize,
) -> (Measure, Option<(usize, Vec<usize>)>) {
    let costs = committee_costs(b, members);
    let mut best = Best::new();
    let mut dists = Vec::with_capacity(b.n);
    for c in 0..b.m {
        dists.clear();
        dists.extend((0..b.n).map(|v| b.d(v, c).clone()));
        let (value, witness) = max_core_ratio(&costs, &dists, min_size);
        if let (Some(value), Some(s)) = (value, witness) {
            best.offer(value, || (c, s));
        }
    }
    (best.measure(), best.witness)
}

/// Depth-first enumeration of all coalitions of size `≥ min_size`, with
/// incremental push/pop hooks so visitors can maintain running sums.
pub(crate) trait CoalitionVisitor {
    fn push(&mut self, v: usize);
    fn pop(&mut self, v: usize);
    fn visit(&mut self, members: &[usize]);
}

pub(crate) fn enumerate_coalitions<V: CoalitionVisitor>(
    n: usize,
    min_size: usize,
    visitor: &mut V,
) {
    fn go<V: CoalitionVisitor>(
        n: usize,
        min_size: usize,
        start: usize,
        stack: &mut Vec<usize>,
        visitor: &mut V,
    ) {
        for v in start..n {
            if stack.len() + (n - v) < min_size {
                break;
            }
            stack.push(v);
            visitor.push(v);
            if stack.len() >= min_size {
                visitor.visit(stack);
            }
            go(n, min_size, v + 1, stack, visitor);
            visitor.pop(v);
            stack.pop();
        }
    }
    let mut stack = Vec::with_capacity(n);
    go(n, min_size.max(1), 0, &mut stack, visitor);
}

/// Uniformly sized random coalitions, for the lower-bound-only mode.
pub(crate) fn sample_coalitions<V: CoalitionVisitor>(
    n: usize,
    min_size: usize,
    samples: usize,
    seed: u64,
    visitor: &mut V,
) {
    let min_size = min_size.max(1);
    if min_size > n {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let size = rng.gen_range(min_size..=n);
        let mut members = sample(&mut rng, n, size).into_vec();
        members.sort_unstable();
        for &v in &members {
            visitor.push(v);
        }
        visitor.visit(&members);
        for &v in members.iter().rev() {
            visitor.pop(v);
        }
    }
}

/// Witness for the representation audits.
#[derive(Clone, Debug)]
pub(crate) struct PrWitness {
    pub(crate) coalition: Vec<usize>,
    pub(crate) t: usize,
    pub(crate) deviation: Vec<usize>,
}

/// Enumerative (α,γ)-representation audit; evaluates the per-voter and the
/// common-subcommittee left-hand sides in one pass.
pub(crate) struct PrVisitor<'a, W> {
    b: &'a Block<W>,
    members: &'a [usize],
    /// `thresholds[t-1] = ⌈t·α·p⌉`, for `t` in the audited range.
    t_lo: usize,
    thresholds: Vec<usize>,
    /// `prefix[v][t]` = sum of the `t` smallest `d(v, r)`, `r ∈ R`.
    prefix: Vec<Vec<W>>,
    columns: Vec<W>,
    per_voter: Vec<W>,
    size: usize,
    scratch: Vec<(W, usize)>,
    committee_scratch: Vec<W>,
    pub(crate) weak: Best<W, PrWitness>,
    pub(crate) strong: Best<W, PrWitness>,
}

impl<'a, W: Weight> PrVisitor<'a, W> {
    pub(crate) fn new(
        b: &'a Block<W>,
        members: &'a [usize],
        t_lo: usize,
        thresholds: Vec<usize>,
    ) -> Self {
        let t_hi = t_lo + thresholds.len() - 1;
        let prefix = (0..b.n)
            .map(|v| {
                let mut ds: Vec<W> = members.iter().map(|&r| b.d(v, r).clone()).collect();
                ds.sort();
                let mut acc = W::zero();
                let mut out = vec![W::zero()];
                for d in ds.iter().take(t_hi) {
                    acc.add_to(d);
                    out.push(acc.clone());
                }
                out
            })
            .collect();
        PrVisitor {
            b,
            members,
            t_lo,
            thresholds,
            prefix,
            columns: vec![W::zero(); b.m],
            per_voter: vec![W::zero(); t_hi + 1],
            size: 0,
            scratch: Vec::with_capacity(b.m),
            committee_scratch: Vec::with_capacity(members.len()),
            weak: Best::new(),
            strong: Best::new(),
        }
    }

    pub(crate) fn min_size(&self) -> usize {
        self.thresholds.iter().copied().min().unwrap_or(usize::MAX)
    }
}

impl<W: Weight> CoalitionVisitor for PrVisitor<'_, W> {
    fn push(&mut self, v: usize) {
        self.size += 1;
        for c in 0..self.b.m {
            self.columns[c].add_to(self.b.d(v, c));
        }
        for t in 1..self.per_voter.len() {
            self.per_voter[t].add_to(&self.prefix[v][t]);
        }
    }

    fn pop(&mut self, v: usize) {
        self.size -= 1;
        for c in 0..self.b.m {
            self.columns[c].sub_from(self.b.d(v, c));
        }
        for t in 1..self.per_voter.len() {
            self.per_voter[t].sub_from(&self.prefix[v][t]);
        }
    }

    fn visit(&mut self, coalition: &[usize]) {
        self.scratch.clear();
        self.scratch.extend(self.columns.iter().cloned().zip(0..));
        self.scratch.sort();
        self.committee_scratch.clear();
        self.committee_scratch
            .extend(self.members.iter().map(|&r| self.columns[r].clone()));
        self.committee_scratch.sort();
        let mut rhs = W::zero();
        let mut strong_lhs = W::zero();
        for t in 1..=(self.t_lo + self.thresholds.len() - 1) {
            rhs.add_to(&self.scratch[t - 1].0);
            strong_lhs.add_to(&self.committee_scratch[t - 1]);
            if t < self.t_lo || self.size < self.thresholds[t - self.t_lo] {
                continue;
            }
            let witness = || PrWitness {
                coalition: coalition.to_vec(),
                t,
                deviation: {
                    let mut d: Vec<usize> = self.scratch[..t].iter().map(|x| x.1).collect();
                    d.sort_unstable();
                    d
                },
            };
            if let Some(value) = Frac::of(self.per_voter[t].clone(), rhs.clone(), None) {
                self.weak.offer(value, witness);
            }
            if let Some(value) = Frac::of(strong_lhs.clone(), rhs.clone(), None) {
                self.strong.offer(value, witness);
            }
        }
    }
}

/// Per-coalition tracking of `R[S]` through neighborhood hit counts.
pub(crate) struct RepresentativeTracker {
    owner: Vec<Option<usize>>,
    hits: Vec<usize>,
}

impl RepresentativeTracker {
    /// `owner[v]` = index into the committee of the representative covering `v`.
    pub(crate) fn new(owner: Vec<Option<usize>>, committee_size: usize) -> Self {
        RepresentativeTracker {
            owner,
            hits: vec![0; committee_size],
        }
    }

    fn push(&mut self, v: usize) {
        if let Some(i) = self.owner[v] {
            self.hits[i] += 1;
        }
    }

    fn pop(&mut self, v: usize) {
        if let Some(i) = self.owner[v] {
            self.hits[i] -= 1;
        }
    }

    fn active(&self) -> impl Iterator<Item = usize> + '_ {
        self.hits
            .iter()
            .enumerate()
            .filter(|(_, &h)| h > 0)
            .map(|(i, _)| i)
    }
}

/// `min_{r∈R[S]} d_sum(S, r) ≤ β · min_{c∉R} d_sum(S, c)`.
pub(crate) struct CorSingleVisitor<'a, W> {
    b: &'a Block<W>,
    members: &'a [usize],
    outside: Vec<usize>,
    tracker: RepresentativeTracker,
    columns: Vec<W>,
    pub(crate) best: Best<W, (Vec<usize>, usize)>,
}

impl<'a, W: Weight> CorSingleVisitor<'a, W> {
    pub(crate) fn new(b: &'a Block<W>, members: &'a [usize], owner: Vec<Option<usize>>) -> Self {
        let outside = (0..b.m).filter(|c| !members.contains(c)).collect();
        CorSingleVisitor {
            b,
            members,
            outside,
            tracker: RepresentativeTracker::new(owner, members.len()),
            columns: vec![W::zero(); b.m],
            best: Best::new(),
        }
    }
}

impl<W: Weight> CoalitionVisitor for CorSingleVisitor<'_, W> {
    fn push(&mut self, v: usize) {
        self.tracker.push(v);
        for c in 0..self.b.m {
            self.columns[c].add_to(self.b.d(v, c));
        }
    }

    fn pop(&mut self, v: usize) {
        self.tracker.pop(v);
        for c in 0..self.b.m {
            self.columns[c].sub_from(self.b.d(v, c));
        }
    }

    fn visit(&mut self, coalition: &[usize]) {
        let Some(&target) = self
            .outside
            .iter()
            .min_by(|&&a, &&b| self.columns[a].cmp(&self.columns[b]))
        else {
            return;
        };
        let rhs = self.columns[target].clone();
        let lhs = self
            .tracker
            .active()
            .map(|i| &self.columns[self.members[i]])
            .min()
            .cloned();
        let value = match lhs {
            None => Some(Frac::Infinite),
            Some(lhs) => Frac::of(lhs, rhs, None),
        };
        if let Some(value) = value {
            self.best.offer(value, || (coalition.to_vec(), target));
        }
    }
}

/// Stability: for every `c ∉ R`, some `v ∈ S` has
/// `min_{r∈R[S]} d(v,r) ≤ ρ · d(v,c)`.
pub(crate) struct StabilityVisitor<'a, W> {
    b: &'a Block<W>,
    members: &'a [usize],
    outside: Vec<usize>,
    tracker: RepresentativeTracker,
    nearest: Vec<Option<W>>,
    pub(crate) best: Best<W, (Vec<usize>, usize)>,
}

impl<'a, W: Weight> StabilityVisitor<'a, W> {
    pub(crate) fn new(b: &'a Block<W>, members: &'a [usize], owner: Vec<Option<usize>>) -> Self {
        let outside = (0..b.m).filter(|c| !members.contains(c)).collect();
        StabilityVisitor {
            b,
            members,
            outside,
            tracker: RepresentativeTracker::new(owner, members.len()),
            nearest: vec![None; b.n],
            best: Best::new(),
        }
    }
}

impl<W: Weight> CoalitionVisitor for StabilityVisitor<'_, W> {
    fn push(&mut self, v: usize) {
        self.tracker.push(v);
    }

    fn pop(&mut self, v: usize) {
        self.tracker.pop(v);
    }

    fn visit(&mut self, coalition: &[usize]) {
        let active: Vec<usize> = self.tracker.active().map(|i| self.members[i]).collect();
        for &v in coalition {
            self.nearest[v] = active.iter().map(|&r| self.b.d(v, r)).min().cloned();
        }
        for &c in &self.outside {
            let mut least: Option<Frac<W>> = None;
            for &v in coalition {
                let ratio = match &self.nearest[v] {
                    None => Frac::Infinite,
                    Some(num) => pf_ratio(num, self.b.d(v, c)),
                };
                if least
                    .as_ref()
                    .is_none_or(|l| ratio.cmp(l) == Ordering::Less)
                {
                    least = Some(ratio);
                }
            }
            if let Some(value) = least {
                self.best.offer(value, || (coalition.to_vec(), c));
            }
        }
    }
}

/// Exact column sums `d_sum(V, c)` for every candidate.
pub(crate) fn column_sums<W: Weight>(b: &Block<W>) -> Vec<W> {
    let mut cols = vec![W::zero(); b.m];
    for v in 0..b.n {
        for (c, col) in cols.iter_mut().enumerate() {
            col.add_to(b.d(v, c));
        }
    }
    cols
}
