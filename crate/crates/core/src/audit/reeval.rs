//! Independent re-evaluation of a reported witness, straight from the
//! rational distances. Used to cross-check the integer kernels.

use num_rational::BigRational;
use num_traits::Zero;

use crate::audit::{AuditReport, Check, Target};
use crate::coverage::{Committee, CoverageRecord};
use crate::error::{Error, Result};
use crate::instance::{Instance, Point};
use crate::scalar::Measure;

fn d(inst: &Instance, v: usize, c: usize) -> Result<BigRational> {
    Ok(inst
        .distance(Point::Voter(v), Point::Candidate(c))?
        .into_rational())
}

fn cost(inst: &Instance, v: usize, reps: &[usize]) -> Result<Option<BigRational>> {
    let mut best: Option<BigRational> = None;
    for &r in reps {
        let x = d(inst, v, r)?;
        if best.as_ref().is_none_or(|b| x < *b) {
            best = Some(x);
        }
    }
    Ok(best)
}

fn col(inst: &Instance, s: &[usize], c: usize) -> Result<BigRational> {
    s.iter()
        .try_fold(BigRational::zero(), |acc, &v| Ok(acc + d(inst, v, c)?))
}

fn ratio_pf(num: &BigRational, den: &BigRational) -> Measure {
    Measure::ratio(num.clone(), den.clone(), Measure::one())
}

/// `num/den` where `0/0` makes the constraint vacuous.
fn strict_ratio(num: BigRational, den: BigRational) -> Option<Measure> {
    if num.is_zero() && den.is_zero() {
        None
    } else {
        Some(Measure::ratio(num, den, Measure::zero()))
    }
}

fn target_single(report: &AuditReport) -> Result<usize> {
    match report.witness.as_ref().map(|w| &w.target) {
        Some(Target::Candidate(c)) => Ok(*c),
        _ => Err(Error::InvalidParameter(
            "witness has no single target".into(),
        )),
    }
}

/// The value the report's witness attains, or `None` for vacuous witnesses.
pub fn witness_value(
    inst: &Instance,
    committee: &Committee,
    coverage: Option<&CoverageRecord>,
    report: &AuditReport,
) -> Result<Option<Measure>> {
    let Some(w) = &report.witness else {
        return Ok(None);
    };
    let s = &w.coalition;
    let members = committee.members();
    let costs: Vec<BigRational> = (0..inst.n())
        .map(|v| cost(inst, v, members).map(|c| c.expect("non-empty committee")))
        .collect::<Result<_>>()?;
    let need_cov = || coverage.ok_or(Error::InvalidParameter("coverage record required".into()));
    Ok(match report.check {
        Check::Pf => {
            let c = target_single(report)?;
            let mut least: Option<Measure> = None;
            for &v in s {
                let r = ratio_pf(&costs[v], &d(inst, v, c)?);
                if least.as_ref().is_none_or(|l| r < *l) {
                    least = Some(r);
                }
            }
            least
        }
        Check::Core => {
            let c = target_single(report)?;
            let num = s.iter().fold(BigRational::zero(), |a, &v| a + &costs[v]);
            strict_ratio(num, col(inst, s, c)?)
        }
        Check::Pr | Check::PrStrong => {
            let t =
                w.t.ok_or(Error::InvalidParameter("witness lacks t".into()))?;
            let Target::Candidates(dev) = &w.target else {
                return Err(Error::InvalidParameter("witness lacks deviation".into()));
            };
            let mut rhs = BigRational::zero();
            for &c in dev {
                rhs += col(inst, s, c)?;
            }
            let lhs = if report.check == Check::Pr {
                let mut total = BigRational::zero();
                for &v in s {
                    let mut ds: Vec<BigRational> = members
                        .iter()
                        .map(|&r| d(inst, v, r))
                        .collect::<Result<_>>()?;
                    ds.sort();
                    total += ds
                        .into_iter()
                        .take(t)
                        .fold(BigRational::zero(), |a, x| a + x);
                }
                total
            } else {
                let mut cols: Vec<BigRational> = members
                    .iter()
                    .map(|&r| col(inst, s, r))
                    .collect::<Result<_>>()?;
                cols.sort();
                cols.into_iter()
                    .take(t)
                    .fold(BigRational::zero(), |a, x| a + x)
            };
            strict_ratio(lhs, rhs)
        }
        Check::CorSingle => {
            let c = target_single(report)?;
            let reps = need_cov()?.representatives_of(s);
            if reps.is_empty() {
                return Ok(Some(Measure::Infinite));
            }
            let mut lhs: Option<BigRational> = None;
            for r in reps {
                let x = col(inst, s, r)?;
                if lhs.as_ref().is_none_or(|l| x < *l) {
                    lhs = Some(x);
                }
            }
            strict_ratio(lhs.expect("non-empty"), col(inst, s, c)?)
        }
        Check::Stability | Check::StabilityCardinal => {
            let c = target_single(report)?;
            let reps = need_cov()?.representatives_of(s);
            let mut least: Option<Measure> = None;
            for &v in s {
                let r = match cost(inst, v, &reps)? {
                    None => Measure::Infinite,
                    Some(num) => ratio_pf(&num, &d(inst, v, c)?),
                };
                if least.as_ref().is_none_or(|l| r < *l) {
                    least = Some(r);
                }
            }
            least
        }
        Check::Distortion => {
            let c = target_single(report)?;
            let all: Vec<usize> = (0..inst.n()).collect();
            let winner = members[0];
            Some(Measure::ratio(
                col(inst, &all, winner)?,
                col(inst, &all, c)?,
                Measure::one(),
            ))
        }
    })
}
