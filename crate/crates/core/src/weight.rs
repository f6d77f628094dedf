//! Integer arithmetic backends for the hot loops.
//!
//! Every audit quantity is a ratio of two sums of distances, so the distances
//! can be multiplied by the common denominator of all entries without changing
//! any measured value. Small instances then run on `i128`; anything whose
//! products might overflow falls back to `BigInt`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::ExactScalar;

pub trait Weight: Clone + Ord + Debug + Send + Sync {
    fn zero() -> Self;
    fn from_big(value: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn add_to(&mut self, other: &Self);
    fn sub_from(&mut self, other: &Self);
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
}

impl Weight for i128 {
    fn zero() -> Self {
        0
    }
    fn from_big(value: &BigInt) -> Self {
        value.to_i128().expect("value exceeds i128 backend")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_from(&mut self, other: &Self) {
        *self -= other;
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
}

impl Weight for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(value: &BigInt) -> Self {
        value.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_from(&mut self, other: &Self) {
        *self -= other;
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

pub fn to_rational<W: Weight>(num: &W, den: &W) -> BigRational {
    BigRational::new(num.to_big(), den.to_big())
}

/// Scaled integer copy of a list of non-negative rationals.
#[derive(Clone, Debug)]
pub enum ScaledValues {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

/// Multiply `values` by the lcm of their denominators. `headroom` is an upper
/// bound on the number of entries any downstream sum may add up; products of
/// two such sums must fit for the `i128` backend to be chosen.
pub fn scale_values(values: &[ExactScalar], headroom: usize) -> ScaledValues {
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.as_rational().denom());
    }
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| {
            let r = v.as_rational();
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let max = ints
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(<BigInt as num_traits::Zero>::zero);
    let bound = max * BigInt::from(headroom.max(1));
    let limit = BigInt::one() << 62u32;
    if bound < limit {
        ScaledValues::Small(ints.iter().map(|x| x.to_i128().unwrap()).collect())
    } else {
        ScaledValues::Big(ints)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_clears_denominators() {
        let vals: Vec<ExactScalar> = ["1/2", "1/3", "2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        match scale_values(&vals, 10) {
            ScaledValues::Small(v) => assert_eq!(v, vec![3, 2, 12]),
            ScaledValues::Big(_) => panic!("small values should use i128"),
        }
    }

    #[test]
    fn huge_values_fall_back_to_bigint() {
        let vals: Vec<ExactScalar> = vec!["1000000000000000000000".parse().unwrap()];
        assert!(matches!(scale_values(&vals, 1), ScaledValues::Big(_)));
    }
}
