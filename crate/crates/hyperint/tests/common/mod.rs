#![allow(dead_code)]

use hyperint::exact::rat;
use hyperint::{ParamPair, Rational};
use proptest::prelude::*;

/// Reference parameter pairs with known behaviour, as `(alpha, beta)` strings.
pub const REFERENCE_PAIRS: [(&str, &str); 6] = [
    ("1/5,2/5,3/5,4/5", "1,1,1,1"),
    ("1/6,1/2,2/3", "1/3,1,1"),
    ("1/7,1/4,3/7,6/7", "1,1,1,1"),
    ("1/4,1/2,3/4,1/2", "1,1,1,1"),
    ("1/2", "1"),
    ("1/5,1/3,3/5", "1/2,1,1"),
];

pub fn pair(a: &str, b: &str) -> ParamPair {
    ParamPair::parse(a, b).unwrap()
}

pub fn reference_pairs() -> Vec<ParamPair> {
    REFERENCE_PAIRS.iter().map(|(a, b)| pair(a, b)).collect()
}

/// A rational `n/d` that is not a nonpositive integer, with `d ≤ max_den`.
pub fn parameter(max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den, -3i64..=3, 1i64..=24)
        .prop_map(|(d, whole, k)| rat(whole * d + (k % d) + 1, d))
        .prop_filter("not a nonpositive integer", |x| !(x.is_integer() && *x <= rat(0, 1)))
}

/// A parameter in `(0, 1]` with denominator `≤ max_den`.
pub fn unit_parameter(max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den, 0i64..1000).prop_map(|(d, k)| rat(k % d + 1, d))
}

/// A parameter whose denominator is coprime to `p`.
pub fn zp_parameter(p: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    parameter(max_den).prop_filter("denominator coprime to p", move |x| {
        !(x.denom() % num_bigint::BigInt::from(p) == num_bigint::BigInt::from(0))
    })
}

pub fn any_pair(max_len: usize, max_den: i64) -> impl Strategy<Value = ParamPair> {
    (
        prop::collection::vec(parameter(max_den), 1..=max_len),
        prop::collection::vec(parameter(max_den), 1..=max_len),
    )
        .prop_map(|(a, b)| ParamPair::new(a, b).unwrap())
}

pub fn unit_pair(max_len: usize, max_den: i64) -> impl Strategy<Value = ParamPair> {
    (
        prop::collection::vec(unit_parameter(max_den), 1..=max_len),
        prop::collection::vec(unit_parameter(max_den), 1..=max_len),
    )
        .prop_map(|(a, b)| ParamPair::new(a, b).unwrap())
}

pub fn zp_pair(p: i64, max_len: usize, max_den: i64) -> impl Strategy<Value = ParamPair> {
    (
        prop::collection::vec(zp_parameter(p, max_den), 1..=max_len),
        prop::collection::vec(zp_parameter(p, max_den), 1..=max_len),
    )
        .prop_map(|(a, b)| ParamPair::new(a, b).unwrap())
}

pub fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

/// Pairs with `r = s` and entries in `(0, 1]`.
pub fn balanced_unit_pair(max_len: usize, max_den: i64) -> impl Strategy<Value = ParamPair> {
    (1..=max_len).prop_flat_map(move |r| {
        (
            prop::collection::vec(unit_parameter(max_den), r),
            prop::collection::vec(unit_parameter(max_den), r),
        )
            .prop_map(|(a, b)| ParamPair::new(a, b).unwrap())
    })
}
