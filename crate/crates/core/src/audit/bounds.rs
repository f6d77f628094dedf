//! Closed-form guarantees, exactly comparable.

use num_rational::BigRational;
use num_traits::One;

use crate::audit::Check;
use crate::coverage::Algorithm;
use crate::scalar::{rat, SurdBound};

/// `(5 + √41)/2`, the ordinal stability and proportional-fairness constant.
pub fn rho_ordinal() -> SurdBound {
    SurdBound::new(rat(5, 2), rat(1, 2), 41)
}

/// `1 + √2`, the cardinal stability constant.
pub fn rho_cardinal() -> SurdBound {
    SurdBound::new(rat(1, 1), rat(1, 1), 2)
}

fn augmentation_factor(alpha: &BigRational) -> Option<BigRational> {
    if *alpha <= BigRational::one() {
        None
    } else {
        Some(alpha / (alpha - BigRational::one()))
    }
}

/// `1 + ((7+√41)/2)·α/(α−1)` for `α > 1`.
pub fn gamma_ordinal(alpha: &BigRational) -> Option<SurdBound> {
    let s = augmentation_factor(alpha)?;
    Some(SurdBound::new(
        BigRational::one() + &s * rat(7, 2),
        s * rat(1, 2),
        41,
    ))
}

/// `1 + (2+√2)·α/(α−1)` for `α > 1`.
pub fn gamma_cardinal(alpha: &BigRational) -> Option<SurdBound> {
    let s = augmentation_factor(alpha)?;
    Some(SurdBound::new(BigRational::one() + &s * rat(2, 1), s, 2))
}

/// Distortion guarantee of the two-candidate single-winner rule.
pub fn single_winner_distortion() -> SurdBound {
    SurdBound::rational(rat(44, 1))
}

/// `2 + √5`, the ordinal proportional-fairness lower bound.
pub fn separation_limit() -> SurdBound {
    SurdBound::new(rat(2, 1), rat(1, 1), 5)
}

/// The guarantee a rule carries for a given check, if any.
pub fn guarantee(
    check: Check,
    algorithm: Algorithm,
    alpha: Option<&BigRational>,
) -> Option<SurdBound> {
    match (check, algorithm) {
        (Check::Pf, Algorithm::Ear) | (Check::Stability, Algorithm::Ear) => Some(rho_ordinal()),
        (Check::Pf, Algorithm::Tgc)
        | (Check::Stability, Algorithm::Tgc)
        | (Check::StabilityCardinal, _) => Some(rho_cardinal()),
        (Check::Core | Check::Pr | Check::PrStrong | Check::CorSingle, Algorithm::Ear) => {
            alpha.and_then(gamma_ordinal)
        }
        (Check::Core | Check::Pr | Check::PrStrong, Algorithm::Tgc) => {
            alpha.and_then(gamma_cardinal)
        }
        (Check::CorSingle, Algorithm::Tgc) => None,
        (Check::Distortion, _) => Some(single_winner_distortion()),
    }
}
