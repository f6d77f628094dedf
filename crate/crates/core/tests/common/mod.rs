//! Brute-force reference implementations. Everything here works on plain
//! `BigRational` distances read back from the instance and enumerates
//! coalitions and subcommittees explicitly; nothing is shared with the
//! library's kernels.

#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Zero};
use proprep_core::instances::gen_random;
use proprep_core::{CoverageRecord, Instance, Measure, Norm, RankedProfile};

pub fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn dist(inst: &Instance) -> Vec<Vec<BigRational>> {
    (0..inst.n())
        .map(|v| {
            (0..inst.m())
                .map(|c| inst.d_vc(v, c).as_rational().clone())
                .collect()
        })
        .collect()
}

pub fn ceil_mul(alpha: &BigRational, x: usize) -> usize {
    let y = alpha * BigRational::from_integer(x.into());
    let c = y.ceil().to_integer();
    c.try_into().unwrap()
}

/// All subsets of `0..n` as bit masks, with their members.
pub fn subsets(n: usize, min_size: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..(1u64 << n))
        .filter(move |mask| mask.count_ones() as usize >= min_size)
        .map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// All `t`-subsets of `items`.
pub fn choose(items: &[usize], t: usize) -> Vec<Vec<usize>> {
    if t == 0 {
        return vec![vec![]];
    }
    if items.len() < t {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in choose(&items[i + 1..], t - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn min_of(xs: impl Iterator<Item = BigRational>) -> Option<BigRational> {
    xs.fold(None, |acc: Option<BigRational>, x| match acc {
        Some(a) if a <= x => Some(a),
        _ => Some(x),
    })
}

pub fn cost(d: &[Vec<BigRational>], v: usize, reps: &[usize]) -> Option<BigRational> {
    min_of(reps.iter().map(|&r| d[v][r].clone()))
}

fn colsum(d: &[Vec<BigRational>], s: &[usize], c: usize) -> BigRational {
    s.iter().fold(BigRational::zero(), |a, &v| a + &d[v][c])
}

fn pf_ratio(num: BigRational, den: BigRational) -> Measure {
    Measure::ratio(num, den, Measure::one())
}

/// Max over `|S| ≥ p` and `c` of `min_{v∈S} cost(v)/d(v,c)`.
pub fn pf_brute(inst: &Instance, members: &[usize]) -> Measure {
    let d = dist(inst);
    let p = inst.quota().get();
    let mut best = Measure::zero();
    for s in subsets(inst.n(), p) {
        for c in 0..inst.m() {
            let worst = s
                .iter()
                .map(|&v| pf_ratio(cost(&d, v, members).unwrap(), d[v][c].clone()))
                .min()
                .unwrap();
            best = best.max(worst);
        }
    }
    best
}

/// `a/b` with `0/0` vacuous.
fn strict(num: BigRational, den: BigRational) -> Option<Measure> {
    if num.is_zero() && den.is_zero() {
        None
    } else {
        Some(Measure::ratio(num, den, Measure::zero()))
    }
}

pub fn core_brute(inst: &Instance, members: &[usize], alpha: &BigRational) -> Measure {
    let d = dist(inst);
    let min_size = ceil_mul(alpha, inst.quota().get());
    let mut best = Measure::zero();
    for s in subsets(inst.n(), min_size) {
        let lhs = s.iter().fold(BigRational::zero(), |a, &v| {
            a + cost(&d, v, members).unwrap()
        });
        for c in 0..inst.m() {
            if let Some(x) = strict(lhs.clone(), colsum(&d, &s, c)) {
                best = best.max(x);
            }
        }
    }
    best
}

/// `(weak, strong)` representation values over `t ∈ lo..=hi`.
pub fn pr_brute(
    inst: &Instance,
    members: &[usize],
    alpha: &BigRational,
    lo: usize,
    hi: usize,
) -> (Measure, Measure) {
    let d = dist(inst);
    let p = inst.quota().get();
    let all: Vec<usize> = (0..inst.m()).collect();
    let (mut weak, mut strong) = (Measure::zero(), Measure::zero());
    for t in lo..=hi {
        let min_size = ceil_mul(alpha, t * p);
        for s in subsets(inst.n(), min_size) {
            let rhs = min_of(
                choose(&all, t)
                    .into_iter()
                    .map(|tt| tt.iter().map(|&c| colsum(&d, &s, c)).sum()),
            )
            .unwrap();
            let per_voter: BigRational = s
                .iter()
                .map(|&v| {
                    min_of(
                        choose(members, t)
                            .into_iter()
                            .map(|tt| tt.iter().map(|&r| d[v][r].clone()).sum()),
                    )
                    .unwrap()
                })
                .sum();
            let common = min_of(
                choose(members, t)
                    .into_iter()
                    .map(|tt| tt.iter().map(|&r| colsum(&d, &s, r)).sum()),
            )
            .unwrap();
            if let Some(x) = strict(per_voter, rhs.clone()) {
                weak = weak.max(x);
            }
            if let Some(x) = strict(common, rhs) {
                strong = strong.max(x);
            }
        }
    }
    (weak, strong)
}

pub fn reps_of(rec: &CoverageRecord, s: &[usize]) -> Vec<usize> {
    rec.representatives
        .iter()
        .filter(|rep| rep.voters.iter().any(|v| s.contains(v)))
        .map(|rep| rep.candidate)
        .collect()
}

pub fn cor_single_brute(inst: &Instance, rec: &CoverageRecord, alpha: &BigRational) -> Measure {
    let d = dist(inst);
    let members: Vec<usize> = rec.representatives.iter().map(|x| x.candidate).collect();
    let outside: Vec<usize> = (0..inst.m()).filter(|c| !members.contains(c)).collect();
    let min_size = ceil_mul(alpha, inst.quota().get());
    let mut best = Measure::zero();
    for s in subsets(inst.n(), min_size) {
        let reps = reps_of(rec, &s);
        let Some(rhs) = min_of(outside.iter().map(|&c| colsum(&d, &s, c))) else {
            continue;
        };
        let value = match min_of(reps.iter().map(|&x| colsum(&d, &s, x))) {
            None => Some(Measure::Infinite),
            Some(lhs) => strict(lhs, rhs),
        };
        if let Some(x) = value {
            best = best.max(x);
        }
    }
    best
}

pub fn stability_brute(inst: &Instance, rec: &CoverageRecord) -> Measure {
    let d = dist(inst);
    let members: Vec<usize> = rec.representatives.iter().map(|x| x.candidate).collect();
    let p = inst.quota().get();
    let mut best = Measure::zero();
    for s in subsets(inst.n(), p) {
        let reps = reps_of(rec, &s);
        for c in (0..inst.m()).filter(|c| !members.contains(c)) {
            let worst = s
                .iter()
                .map(|&v| match cost(&d, v, &reps) {
                    None => Measure::Infinite,
                    Some(x) => pf_ratio(x, d[v][c].clone()),
                })
                .min()
                .unwrap();
            best = best.max(worst);
        }
    }
    best
}

pub fn distortion_brute(inst: &Instance, w: usize) -> Measure {
    let d = dist(inst);
    let all: Vec<usize> = (0..inst.n()).collect();
    let opt = min_of((0..inst.m()).map(|c| colsum(&d, &all, c))).unwrap();
    Measure::ratio(colsum(&d, &all, w), opt, Measure::one())
}

/// A committee and its neighborhoods, `(candidate, voters, threshold)` with
/// thresholds as rationals (`τ` for EAR); fillers have no voters.
pub type Trace = Vec<(usize, Vec<usize>, Option<BigRational>)>;

/// Literal expanding approvals with explicit neighborhood sets.
pub fn ear_oracle(profile: &RankedProfile, k: usize) -> Trace {
    let (n, m) = (profile.n(), profile.m());
    let p = n.div_ceil(k);
    let mut hood: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut covered = vec![false; n];
    let mut selected = vec![false; m];
    let mut out: Trace = Vec::new();
    'outer: for tau in 1..=m {
        for v in 0..n {
            if covered.iter().all(|&x| x) {
                break 'outer;
            }
            if covered[v] {
                continue;
            }
            let c = profile.order(v)[tau - 1];
            if selected[c] {
                continue;
            }
            hood[c].push(v);
            if hood[c].len() == p {
                selected[c] = true;
                let mut got = hood[c].clone();
                got.sort();
                for &u in &got {
                    covered[u] = true;
                }
                for h in hood.iter_mut() {
                    h.retain(|u| !covered[*u]);
                }
                out.push((c, got, Some(BigRational::from_integer(tau.into()))));
            }
        }
    }
    for (c, &taken) in selected.iter().enumerate().take(m) {
        if out.len() < k && !taken {
            out.push((c, vec![], None));
        }
    }
    out
}

/// Greedy capture by repeated linear scan for the least unprocessed
/// `(d, v, c)` triple.
pub fn tgc_oracle(inst: &Instance) -> Trace {
    let d = dist(inst);
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    let p = n.div_ceil(k);
    let mut done = vec![vec![false; m]; n];
    let mut covered = vec![false; n];
    let mut selected = vec![false; m];
    let mut ball: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut out: Trace = Vec::new();
    while covered.iter().any(|&x| !x) {
        let mut next: Option<(BigRational, usize, usize)> = None;
        for v in 0..n {
            for c in 0..m {
                if done[v][c] || covered[v] || selected[c] {
                    continue;
                }
                let key = (d[v][c].clone(), v, c);
                if next.as_ref().is_none_or(|x| key < *x) {
                    next = Some(key);
                }
            }
        }
        let Some((radius, v, c)) = next else { break };
        done[v][c] = true;
        ball[c].push(v);
        let live: Vec<usize> = ball[c].iter().copied().filter(|&u| !covered[u]).collect();
        if live.len() == p {
            selected[c] = true;
            for &u in &live {
                covered[u] = true;
            }
            let mut got = live;
            got.sort();
            out.push((c, got, Some(radius)));
        }
    }
    for (c, &taken) in selected.iter().enumerate().take(m) {
        if out.len() < k && !taken {
            out.push((c, vec![], None));
        }
    }
    out
}

pub fn trace_of(rec: &CoverageRecord) -> Trace {
    use proprep_core::Threshold;
    rec.representatives
        .iter()
        .map(|rep| {
            let t = match &rep.threshold {
                Threshold::Tolerance(t) => Some(BigRational::from_integer((*t).into())),
                Threshold::Radius(x) | Threshold::SquaredRadius(x) => Some(x.as_rational().clone()),
                Threshold::Filler => None,
            };
            (rep.candidate, rep.voters.clone(), t)
        })
        .collect()
}

/// Literal two-candidate rule: the first candidate reaching a majority of
/// top-`τ` approvals, a common top-`τ'` candidate for the rest, then the
/// pairwise majority.
pub fn single_winner_oracle(profile: &RankedProfile) -> usize {
    let (n, m) = (profile.n(), profile.m());
    let half = n.div_ceil(2);
    let in_top = |v: usize, c: usize, t: usize| profile.order(v)[..t].contains(&c);
    let (first, tau) = (1..=m)
        .find_map(|t| {
            (0..m)
                .find(|&c| (0..n).filter(|&v| in_top(v, c, t)).count() >= half)
                .map(|c| (c, t))
        })
        .unwrap();
    let group: Vec<usize> = (0..n)
        .filter(|&v| in_top(v, first, tau))
        .take(half)
        .collect();
    let rest: Vec<usize> = (0..n).filter(|v| !group.contains(v)).collect();
    let second = if rest.is_empty() {
        first
    } else {
        (1..=m)
            .find_map(|t| (0..m).find(|&c| rest.iter().all(|&v| in_top(v, c, t))))
            .unwrap()
    };
    if second == first {
        return first;
    }
    let prefer_first = (0..n)
        .filter(|&v| profile.position(v, first) < profile.position(v, second))
        .count();
    if 2 * prefer_first >= n {
        first
    } else {
        second
    }
}

/// Seeded L1 lattice instance in the plane.
pub fn random_l1(n: usize, m: usize, k: usize, seed: u64) -> Instance {
    gen_random(n, m, k, 2, Norm::L1, seed).unwrap()
}

pub fn one() -> BigRational {
    BigRational::one()
}

/// Points on `{0, 1, 2, 3}` so ties and zero distances are common.
pub fn crowded_l1(n: usize, m: usize, k: usize, seed: u64) -> Instance {
    let mut s = seed | 1;
    let pts = (0..n + m)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            vec![BigRational::from_integer(((s >> 11) % 4).into())]
        })
        .collect();
    Instance::from_coordinates(n, m, k, Norm::L1, pts).unwrap()
}
