//! Cardinal selection: Truncated Greedy Capture.
//!
//! Balls grow around every unselected candidate at the same rate. A voter
//! enters a ball exactly when the radius reaches `d(v, c)`, so the continuous
//! process is simulated by sweeping the `n·m` breakpoints in ascending order,
//! ties broken by voter then candidate index. A candidate whose ball holds `p`
//! uncovered voters is selected and its ball stops growing.

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::coverage::{Algorithm, CoverageRecord, Representative, Threshold};
use crate::ear::{check_shape, Neighborhoods};
use crate::error::Result;
use crate::instance::{hare_quota, Instance};
use crate::scalar::ExactScalar;
use crate::weight::{scale_values, ScaledValues};

/// The moment voter `voter` enters the ball around `candidate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallEvent {
    /// `d(v, c)`, or its square on Euclidean instances.
    pub radius: BigRational,
    pub voter: usize,
    pub candidate: usize,
}

impl PartialOrd for BallEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BallEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.radius, self.voter, self.candidate).cmp(&(
            &other.radius,
            other.voter,
            other.candidate,
        ))
    }
}

/// Event order as `(v, c)` pairs, ascending by `(radius, v, c)`.
fn sorted_pairs(inst: &Instance) -> Vec<(usize, usize)> {
    let (n, m) = (inst.n(), inst.m());
    let keys: Vec<ExactScalar> = (0..n)
        .flat_map(|v| (0..m).map(move |c| (v, c)))
        .map(|(v, c)| {
            ExactScalar::try_from(inst.vc_order_key(v, c)).expect("distances are non-negative")
        })
        .collect();
    let mut order: Vec<usize> = (0..n * m).collect();
    // index order is (v, c) lexicographic, so a stable sort on the key alone
    // yields the full (radius, v, c) order
    match scale_values(&keys, 1) {
        ScaledValues::Small(k) => order.sort_by_key(|&i| k[i]),
        ScaledValues::Big(k) => order.sort_by(|&a, &b| k[a].cmp(&k[b])),
    }
    order.into_iter().map(|i| (i / m, i % m)).collect()
}

/// All `n·m` ball events in processing order.
pub fn ball_events(inst: &Instance) -> Vec<BallEvent> {
    sorted_pairs(inst)
        .into_iter()
        .map(|(voter, candidate)| BallEvent {
            radius: inst.vc_order_key(voter, candidate),
            voter,
            candidate,
        })
        .collect()
}

pub fn tgc_select(inst: &Instance) -> Result<CoverageRecord> {
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    check_shape(n, m, k)?;
    let squared = inst.order_key_is_squared();
    let quota = hare_quota(n, k).get();
    let mut state = Neighborhoods::new(n, m, quota);
    let mut representatives = Vec::with_capacity(k);
    for (v, c) in sorted_pairs(inst) {
        if state.remaining == 0 {
            break;
        }
        if !state.uncovered[v] || state.selected[c] {
            continue;
        }
        if let Some(voters) = state.insert(v, c) {
            let radius = ExactScalar::try_from(inst.vc_order_key(v, c)).expect("non-negative");
            representatives.push(Representative {
                candidate: c,
                voters,
                threshold: if squared {
                    Threshold::SquaredRadius(radius)
                } else {
                    Threshold::Radius(radius)
                },
            });
        }
    }
    Ok(state.finish(Algorithm::Tgc, k, representatives))
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
    fn single_voter_takes_nearest() {
        let inst = line(&["4"], &["0", "5", "7"], 1);
        let rec = tgc_select(&inst).unwrap();
        assert_eq!(rec.committee().members(), &[1]);
        assert_eq!(
            rec.representatives[0].threshold,
            Threshold::Radius("1".parse().unwrap())
        );
    }

    #[test]
    fn colocated_ties_follow_event_order() {
        let inst = line(&["0", "0"], &["0", "0", "9"], 2);
        let rec = tgc_select(&inst).unwrap();
        assert_eq!(rec.committee().members(), &[0, 1]);
        assert_eq!(rec.representatives[0].voters, vec![0]);
        assert_eq!(rec.representatives[1].voters, vec![1]);
        assert_eq!(
            rec.representatives[1].threshold,
            Threshold::Radius(ExactScalar::zero())
        );
    }

    #[test]
    fn events_are_sorted_and_complete() {
        let inst = line(&["0", "3"], &["1", "2", "3"], 1);
        let events = ball_events(&inst);
        assert_eq!(events.len(), 6);
        assert!(events.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!((events[0].voter, events[0].candidate), (1, 2));
    }

    #[test]
    fn euclidean_runs_on_squared_radii() {
        let pts = [(0, 0), (3, 4), (1, 0), (10, 10)]
            .iter()
            .map(|&(x, y)| {
                vec![
                    BigRational::from_integer(x.into()),
                    BigRational::from_integer(y.into()),
                ]
            })
            .collect();
        let inst = Instance::from_coordinates(2, 2, 1, Norm::Euclidean, pts).unwrap();
        let rec = tgc_select(&inst).unwrap();
        // d²(v1,c1)=1, d²(v2,c1)=4+16=20, d²(v2,c2)=49+36=85
        assert_eq!(rec.committee().members(), &[0]);
        assert_eq!(
            rec.representatives[0].threshold,
            Threshold::SquaredRadius("20".parse().unwrap())
        );
    }
}
