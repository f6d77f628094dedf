//! Committee selection for voters and candidates in a metric space, with
//! exact audits of proportional representation, proportional fairness and
//! approximate-core guarantees.
//!
//! Two rules are provided: [`ear_select`] needs only each voter's ranking of
//! the candidates, [`tgc_select`] uses the distances themselves. Both return
//! a [`CoverageRecord`] that the audits in [`audit`] consume.

pub mod audit;
pub mod coverage;
pub mod ear;
pub mod error;
pub mod instance;
pub mod instances;
pub mod io;
pub mod profile;
pub mod scalar;
pub mod tgc;
mod weight;

pub use audit::{
    bounds, cor_single_audit, core_beta, distortion, distortion_report, no_augmentation_monitor,
    pf_gamma, pr_gamma, pr_gamma_pair, pr_strong_gamma, stability_rho, AuditReport, Check,
    CoalitionMode, StabilityVariant, Target, Witness, DEFAULT_ENUMERATION_CAP,
};
pub use coverage::{Algorithm, Committee, CoverageRecord, OpCounts, Representative, Threshold};
pub use ear::{ear_select, majority_winner, single_winner, single_winner_via_ear};
pub use error::{Error, Result};
pub use instance::{
    d_sum, hare_quota, validate_metric, HareQuota, Instance, MetricViolation, Norm, Point, Source,
    ValidationStatus,
};
pub use profile::{derive_rankings, RankedProfile};
pub use scalar::{parse_rational, ExactScalar, Measure, SurdBound};
pub use tgc::{ball_events, tgc_select, BallEvent};

/// Runs the named rule on an instance. EAR derives rankings from the
/// distances unless `rankings` is given.
pub fn select(
    inst: &Instance,
    algorithm: Algorithm,
    rankings: Option<&RankedProfile>,
) -> Result<CoverageRecord> {
    match algorithm {
        Algorithm::Ear => match rankings {
            Some(p) => ear_select(p, inst.n(), inst.m(), inst.k()),
            None => ear_select(&derive_rankings(inst), inst.n(), inst.m(), inst.k()),
        },
        Algorithm::Tgc => tgc_select(inst),
    }
}
