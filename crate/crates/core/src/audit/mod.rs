//! Exact measurement of the fairness and representation definitions.
//!
//! Every audit returns the smallest parameter (γ, β or ρ) for which the
//! committee satisfies the definition, together with a coalition attaining
//! it. Proportional fairness and the approximate core are solved in
//! polynomial time; the remaining definitions enumerate coalitions and are
//! capped by voter count.

pub mod bounds;
mod kernels;
pub mod reeval;
mod report;

use num_rational::BigRational;
use num_traits::One;

pub use report::{witness_summary, AuditReport, Check, Target, Witness};

use crate::coverage::{Committee, CoverageRecord};
use crate::error::{Error, Result};
use crate::instance::{Instance, ScaledBlock};
use crate::scalar::{ceil_to_usize, Measure};
use kernels::{
    enumerate_coalitions, sample_coalitions, CoalitionVisitor, CorSingleVisitor, PrVisitor,
    StabilityVisitor,
};

/// Default voter-count ceiling for coalition enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// How enumerative audits visit coalitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoalitionMode {
    /// Every coalition; fails when `n` exceeds `cap`.
    Exact { cap: usize },
    /// Seeded random coalitions; the result is only a lower bound.
    Sampled { samples: usize, seed: u64 },
}

impl Default for CoalitionMode {
    fn default() -> Self {
        CoalitionMode::Exact {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityVariant {
    Ordinal,
    Cardinal,
}

/// Note attached to proportional-fairness style reports.
pub const ZERO_RATIO_NOTE: &str = "ratio convention: d(v,c)=0 and cost=0 counts as 1";

macro_rules! with_block {
    ($inst:expr, |$b:ident| $body:expr) => {
        match $inst.scaled_block()? {
            ScaledBlock::Small($b) => $body,
            ScaledBlock::Big($b) => $body,
        }
    };
}

fn check_committee(inst: &Instance, committee: &Committee) -> Result<()> {
    if committee.len() != inst.k() {
        return Err(Error::InvalidCommittee(format!(
            "committee has {} members, instance has k = {}",
            committee.len(),
            inst.k()
        )));
    }
    if committee.members().iter().any(|&c| c >= inst.m()) {
        return Err(Error::InvalidCommittee(
            "candidate index out of range".into(),
        ));
    }
    Ok(())
}

fn check_coverage(inst: &Instance, coverage: &CoverageRecord) -> Result<()> {
    if coverage.n != inst.n() || coverage.m != inst.m() || coverage.k != inst.k() {
        return Err(Error::InvalidCommittee(format!(
            "coverage record is for n={}, m={}, k={}, instance has n={}, m={}, k={}",
            coverage.n,
            coverage.m,
            coverage.k,
            inst.n(),
            inst.m(),
            inst.k()
        )));
    }
    Ok(())
}

fn check_alpha(alpha: &BigRational) -> Result<()> {
    if *alpha < BigRational::one() {
        Err(Error::AlphaOutOfRange(crate::scalar::format_rational(
            alpha,
        )))
    } else {
        Ok(())
    }
}

fn check_cap(n: usize, mode: CoalitionMode) -> Result<()> {
    match mode {
        CoalitionMode::Exact { cap } if n > cap => Err(Error::EnumerationCapExceeded { n, cap }),
        _ => Ok(()),
    }
}

fn run_coalitions<V: CoalitionVisitor>(
    n: usize,
    min_size: usize,
    mode: CoalitionMode,
    visitor: &mut V,
) {
    match mode {
        CoalitionMode::Exact { .. } => enumerate_coalitions(n, min_size, visitor),
        CoalitionMode::Sampled { samples, seed } => {
            sample_coalitions(n, min_size, samples, seed, visitor)
        }
    }
}

/// `⌈α·x⌉` for a positive integer `x`.
pub fn scaled_threshold(alpha: &BigRational, x: usize) -> usize {
    ceil_to_usize(&(alpha * BigRational::from_integer(x.into())))
}

/// Minimal γ for which the committee is γ-proportionally fair.
pub fn pf_gamma(inst: &Instance, committee: &Committee) -> Result<AuditReport> {
    check_committee(inst, committee)?;
    let p = inst.quota().get();
    let (value, witness) = with_block!(inst, |b| kernels::pf(&b, committee.members(), p));
    let mut report = AuditReport::new(
        Check::Pf,
        value,
        witness.map(|(c, s)| Witness {
            coalition: s,
            target: Target::Candidate(c),
            t: None,
        }),
    );
    report.notes.push(ZERO_RATIO_NOTE.into());
    Ok(report)
}

/// Minimal β for which the committee lies in the (α, β)-core.
pub fn core_beta(
    inst: &Instance,
    committee: &Committee,
    alpha: &BigRational,
) -> Result<AuditReport> {
    check_alpha(alpha)?;
    check_committee(inst, committee)?;
    let min_size = scaled_threshold(alpha, inst.quota().get());
    let (value, witness) = with_block!(inst, |b| kernels::core(&b, committee.members(), min_size));
    let mut report = AuditReport::new(
        Check::Core,
        value,
        witness.map(|(c, s)| Witness {
            coalition: s,
            target: Target::Candidate(c),
            t: Some(1),
        }),
    );
    report.alpha = Some(alpha.clone());
    if min_size > inst.n() {
        report
            .notes
            .push(format!("no coalition reaches size {min_size}"));
    }
    Ok(report)
}

fn resolve_t_range(inst: &Instance, t_range: Option<(usize, usize)>) -> Result<(usize, usize)> {
    let k = inst.k();
    let (lo, hi) = t_range.unwrap_or((1, k));
    if lo == 0 || lo > hi || hi > k {
        return Err(Error::InvalidTRange { lo, hi, k });
    }
    Ok((lo, hi))
}

fn pr_reports(
    inst: &Instance,
    committee: &Committee,
    alpha: &BigRational,
    t_range: Option<(usize, usize)>,
    mode: CoalitionMode,
) -> Result<(AuditReport, AuditReport)> {
    check_alpha(alpha)?;
    check_committee(inst, committee)?;
    let (lo, hi) = resolve_t_range(inst, t_range)?;
    check_cap(inst.n(), mode)?;
    let p = inst.quota().get();
    let thresholds: Vec<usize> = (lo..=hi).map(|t| scaled_threshold(alpha, t * p)).collect();
    let to_report = |check, value: Measure, witness: Option<kernels::PrWitness>| {
        let mut r = AuditReport::new(
            check,
            value,
            witness.map(|w| Witness {
                coalition: w.coalition,
                target: Target::Candidates(w.deviation),
                t: Some(w.t),
            }),
        );
        r.alpha = Some(alpha.clone());
        r.t_range = Some((lo, hi));
        r.lower_bound_only = matches!(mode, CoalitionMode::Sampled { .. });
        r
    };
    let members = committee.members();
    let (weak, strong) = with_block!(inst, |b| {
        let mut visitor = PrVisitor::new(&b, members, lo, thresholds.clone());
        let min_size = visitor.min_size();
        run_coalitions(inst.n(), min_size, mode, &mut visitor);
        (
            to_report(Check::Pr, visitor.weak.measure(), visitor.weak.witness),
            to_report(
                Check::PrStrong,
                visitor.strong.measure(),
                visitor.strong.witness,
            ),
        )
    });
    Ok((weak, strong))
}

/// Minimal γ for which the committee is (α, γ)-proportionally representative,
/// over subcommittee sizes `t_range` (default `1..=k`).
pub fn pr_gamma(
    inst: &Instance,
    committee: &Committee,
    alpha: &BigRational,
    t_range: Option<(usize, usize)>,
    mode: CoalitionMode,
) -> Result<AuditReport> {
    pr_reports(inst, committee, alpha, t_range, mode).map(|(weak, _)| weak)
}

/// Like [`pr_gamma`], but the committee side must use one common size-`t`
/// subcommittee for the whole coalition.
pub fn pr_strong_gamma(
    inst: &Instance,
    committee: &Committee,
    alpha: &BigRational,
    t_range: Option<(usize, usize)>,
    mode: CoalitionMode,
) -> Result<AuditReport> {
    pr_reports(inst, committee, alpha, t_range, mode).map(|(_, strong)| strong)
}

/// Both representation audits from a single enumeration.
pub fn pr_gamma_pair(
    inst: &Instance,
    committee: &Committee,
    alpha: &BigRational,
    t_range: Option<(usize, usize)>,
    mode: CoalitionMode,
) -> Result<(AuditReport, AuditReport)> {
    pr_reports(inst, committee, alpha, t_range, mode)
}

/// Minimal β with `min_{r∈R[S]} d_sum(S,r) ≤ β·min_{c∉R} d_sum(S,c)` for all
/// `|S| ≥ ⌈α·p⌉`.
pub fn cor_single_audit(
    inst: &Instance,
    coverage: &CoverageRecord,
    alpha: &BigRational,
    cap: usize,
) -> Result<AuditReport> {
    check_alpha(alpha)?;
    check_coverage(inst, coverage)?;
    check_cap(inst.n(), CoalitionMode::Exact { cap })?;
    let committee = coverage.committee();
    let members = committee.members();
    let min_size = scaled_threshold(alpha, inst.quota().get());
    let owners = coverage.owners();
    let (value, witness) = with_block!(inst, |b| {
        let mut visitor = CorSingleVisitor::new(&b, members, owners.clone());
        enumerate_coalitions(inst.n(), min_size, &mut visitor);
        (visitor.best.measure(), visitor.best.witness)
    });
    let mut report = AuditReport::new(
        Check::CorSingle,
        value,
        witness.map(|(s, c)| Witness {
            coalition: s,
            target: Target::Candidate(c),
            t: Some(1),
        }),
    );
    report.alpha = Some(alpha.clone());
    Ok(report)
}

/// Minimal ρ such that every `|S| ≥ p` and every `c ∉ R` admit some `v ∈ S`
/// with `min_{r∈R[S]} d(v,r) ≤ ρ·d(v,c)`.
pub fn stability_rho(
    inst: &Instance,
    coverage: &CoverageRecord,
    variant: StabilityVariant,
    cap: usize,
) -> Result<AuditReport> {
    check_coverage(inst, coverage)?;
    check_cap(inst.n(), CoalitionMode::Exact { cap })?;
    let committee = coverage.committee();
    let members = committee.members();
    let owners = coverage.owners();
    let p = inst.quota().get();
    let (value, witness) = with_block!(inst, |b| {
        let mut visitor = StabilityVisitor::new(&b, members, owners.clone());
        enumerate_coalitions(inst.n(), p, &mut visitor);
        (visitor.best.measure(), visitor.best.witness)
    });
    let check = match variant {
        StabilityVariant::Ordinal => Check::Stability,
        StabilityVariant::Cardinal => Check::StabilityCardinal,
    };
    let mut report = AuditReport::new(
        check,
        value,
        witness.map(|(s, c)| Witness {
            coalition: s,
            target: Target::Candidate(c),
            t: None,
        }),
    );
    report.notes.push(ZERO_RATIO_NOTE.into());
    Ok(report)
}

/// `d_sum(V, winner) / min_c d_sum(V, c)`; `0/0` is 1.
pub fn distortion(inst: &Instance, winner: usize) -> Result<Measure> {
    Ok(distortion_report(inst, winner)?.value)
}

// the block macro instantiates this for i128 as well as BigInt
#[allow(clippy::clone_on_copy)]
pub fn distortion_report(inst: &Instance, winner: usize) -> Result<AuditReport> {
    if winner >= inst.m() {
        return Err(Error::InvalidCommittee(format!(
            "winner {} out of range",
            winner + 1
        )));
    }
    let (value, best) = with_block!(inst, |b| {
        let cols = kernels::column_sums(&b);
        let (best, min) = cols
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.cmp(y.1))
            .expect("at least two candidates");
        let value = kernels::Frac::of(
            cols[winner].clone(),
            min.clone(),
            Some(kernels::Frac::one()),
        )
        .expect("0/0 maps to one")
        .to_measure();
        (value, best)
    });
    Ok(AuditReport::new(
        Check::Distortion,
        value,
        Some(Witness {
            coalition: (0..inst.n()).collect(),
            target: Target::Candidate(best),
            t: None,
        }),
    ))
}

/// The `α = 1` representation value, reported next to `n/k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoAugmentationReport {
    pub report: AuditReport,
    /// `γ / (n/k)`.
    pub ratio_to_n_over_k: Measure,
}

pub fn no_augmentation_monitor(
    inst: &Instance,
    committee: &Committee,
    cap: usize,
) -> Result<NoAugmentationReport> {
    let mut report = pr_gamma(
        inst,
        committee,
        &BigRational::one(),
        None,
        CoalitionMode::Exact { cap },
    )?;
    let n_over_k = BigRational::new(inst.n().into(), inst.k().into());
    let ratio = match &report.value {
        Measure::Finite(g) => Measure::Finite(g / n_over_k),
        Measure::Infinite => Measure::Infinite,
    };
    report
        .notes
        .push(format!("gamma/(n/k) = {ratio} (~{})", ratio.to_decimal(6)));
    Ok(NoAugmentationReport {
        report,
        ratio_to_n_over_k: ratio,
    })
}
