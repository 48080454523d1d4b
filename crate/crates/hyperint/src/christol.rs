//! The total order ≼ on `Q`, Christol's counting functions ξ and the
//! effective criteria built on them: N-integrality of `F`, the window
//! assertion H, and the interlacing (algebraicity) test.
//!
//! ξ(a,·) is a step function in the ≼ order that only moves at the keys
//! `a·γ`, γ ranging over both tuples. Every "for all x ∈ R" statement is
//! therefore decided by a scan over those keys.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    coprime_residues, fmt_rational, frac, is_nonpositive_integer, parse_tuple, ser_rational, ser_rationals, Rational,
};

/// The representative of `x + Z` in `(0, 1]`.
pub fn frac_rep(x: &Rational) -> Rational {
    let one = Rational::one();
    &one - frac(&(&one - x))
}

/// Comparison in ≼: first by [`frac_rep`], then larger values come first.
pub fn order_cmp(x: &Rational, y: &Rational) -> Ordering {
    frac_rep(x).cmp(&frac_rep(y)).then_with(|| y.cmp(x))
}

/// `x ≼ y`.
pub fn order_le(x: &Rational, y: &Rational) -> bool {
    order_cmp(x, y) != Ordering::Greater
}

/// `x ≺ y`.
pub fn order_lt(x: &Rational, y: &Rational) -> bool {
    order_cmp(x, y) == Ordering::Less
}

/// A rational with its (0,1] representative cached, ordered by ≼.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderKey {
    #[serde(serialize_with = "ser_rational")]
    pub frac: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub orig: Rational,
}

impl OrderKey {
    pub fn new(x: Rational) -> Self {
        OrderKey { frac: frac_rep(&x), orig: x }
    }
}

impl Ord for OrderKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.frac.cmp(&other.frac).then_with(|| other.orig.cmp(&self.orig))
    }
}

impl PartialOrd for OrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The parameter tuples `(α, β)` with their common denominator `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamPair {
    #[serde(serialize_with = "ser_rationals")]
    alpha: Vec<Rational>,
    #[serde(serialize_with = "ser_rationals")]
    beta: Vec<Rational>,
    d: u64,
}

impl ParamPair {
    /// Validates that no entry is a nonpositive integer and that `d` fits a `u64`.
    pub fn new(alpha: Vec<Rational>, beta: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = alpha.iter().chain(&beta).find(|x| is_nonpositive_integer(x)) {
            return Err(Error::Domain(format!("parameter {} is a nonpositive integer", fmt_rational(bad))));
        }
        let d = alpha
            .iter()
            .chain(&beta)
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
            .to_u64()
            .ok_or_else(|| Error::Parameter("common denominator exceeds 2^64".into()))?;
        Ok(ParamPair { alpha, beta, d })
    }

    /// Parses two comma-separated fraction lists.
    pub fn parse(alpha: &str, beta: &str) -> Result<Self> {
        ParamPair::new(parse_tuple(alpha)?, parse_tuple(beta)?)
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    /// lcm of the exact denominators of all entries.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn r(&self) -> usize {
        self.alpha.len()
    }

    pub fn s(&self) -> usize {
        self.beta.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.alpha.iter().chain(&self.beta)
    }

    /// `{a ∈ 1..=d : gcd(a, d) = 1}`.
    pub fn units(&self) -> Vec<u64> {
        coprime_residues(self.d)
    }

    /// `(⟨α⟩, ⟨β⟩)`.
    pub fn reduced(&self) -> ParamPair {
        self.scaled_reduced(1)
    }

    /// `(⟨aα⟩, ⟨aβ⟩)`; the common denominator is unchanged for coprime `a`.
    pub fn scaled_reduced(&self, a: u64) -> ParamPair {
        let a = Rational::from_integer(BigInt::from(a));
        let map = |v: &[Rational]| v.iter().map(|x| frac_rep(&(&a * x))).collect::<Vec<_>>();
        ParamPair::new(map(&self.alpha), map(&self.beta)).expect("(0,1] representatives are valid parameters")
    }

    /// Removes entries common to both tuples (as multisets). `F` is unchanged.
    pub fn cancel_common(&self) -> ParamPair {
        let mut beta = self.beta.clone();
        let mut alpha = Vec::with_capacity(self.alpha.len());
        for x in &self.alpha {
            if let Some(pos) = beta.iter().position(|y| y == x) {
                beta.remove(pos);
            } else {
                alpha.push(x.clone());
            }
        }
        ParamPair::new(alpha, beta).expect("sub-tuples of valid tuples are valid")
    }

    /// Whether `⟨α⟩` and `⟨β⟩` share no value (irreducibility of the operator).
    pub fn reduced_disjoint(&self) -> bool {
        let ra: Vec<Rational> = self.alpha.iter().map(frac_rep).collect();
        self.beta.iter().map(frac_rep).all(|b| !ra.contains(&b))
    }

    pub fn beta_all_integers(&self) -> bool {
        self.beta.iter().all(|b| b.is_integer())
    }

    pub fn entries_in_unit_interval(&self) -> bool {
        let one = Rational::one();
        self.entries().all(|x| x > &Rational::from_integer(BigInt::from(0)) && x <= &one)
    }

    fn check_unit(&self, a: u64) -> Result<()> {
        if a == 0 || a > self.d || a.gcd(&self.d) != 1 {
            return Err(Error::Parameter(format!("a = {a} must lie in 1..={} and be coprime to it", self.d)));
        }
        Ok(())
    }

    /// Echo of the tuples as exact strings.
    pub fn describe(&self) -> String {
        let f = |v: &[Rational]| v.iter().map(fmt_rational).collect::<Vec<_>>().join(",");
        format!("({}; {})", f(&self.alpha), f(&self.beta))
    }
}

/// ξ(a,·) as a step function in ≼: the value right after each key, and the
/// limit `r - s` reached at the top of the order.
#[derive(Debug, Clone, Serialize)]
pub struct XiProfile {
    pub a: u64,
    pub jumps: Vec<(OrderKey, i64)>,
    pub limit_at_minus_infinity: i64,
}

impl XiProfile {
    /// The set of values ξ(a,·) takes on `R`.
    pub fn range(&self) -> Vec<i64> {
        let mut vals: Vec<i64> = std::iter::once(0).chain(self.jumps.iter().map(|(_, v)| *v)).collect();
        vals.sort_unstable();
        vals.dedup();
        vals
    }

    /// ≼-smallest key: `m(a)`.
    pub fn minimum(&self) -> Option<&OrderKey> {
        self.jumps.first().map(|(k, _)| k)
    }
}

fn scaled_keys(v: &[Rational], a: u64) -> Vec<OrderKey> {
    let a = Rational::from_integer(BigInt::from(a));
    v.iter().map(|x| OrderKey::new(&a * x)).collect()
}

fn xi_raw(pair: &ParamPair, a: u64, x: &OrderKey) -> i64 {
    let count = |v: &[Rational]| scaled_keys(v, a).iter().filter(|k| *k <= x).count() as i64;
    count(&pair.alpha) - count(&pair.beta)
}

/// ξ(a, x) = #{i : aα_i ≼ x} − #{j : aβ_j ≼ x}.
pub fn xi(pair: &ParamPair, a: u64, x: &Rational) -> Result<i64> {
    pair.check_unit(a)?;
    Ok(xi_raw(pair, a, &OrderKey::new(x.clone())))
}

/// The full step profile of ξ(a,·). Equal keys are merged, so each jump
/// already accounts for every tuple entry sitting at that key.
pub fn xi_profile(pair: &ParamPair, a: u64) -> Result<XiProfile> {
    pair.check_unit(a)?;
    let mut keys: Vec<(OrderKey, i64)> = scaled_keys(&pair.alpha, a)
        .into_iter()
        .map(|k| (k, 1))
        .chain(scaled_keys(&pair.beta, a).into_iter().map(|k| (k, -1)))
        .collect();
    keys.sort_by(|x, y| x.0.cmp(&y.0));
    let mut jumps: Vec<(OrderKey, i64)> = Vec::new();
    let mut running = 0;
    for (k, step) in keys {
        running += step;
        match jumps.last_mut() {
            Some(last) if last.0 == k => last.1 = running,
            _ => jumps.push((k, running)),
        }
    }
    Ok(XiProfile { a, jumps, limit_at_minus_infinity: pair.r() as i64 - pair.s() as i64 })
}

/// A point where a ξ-inequality fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XiWitness {
    pub a: u64,
    #[serde(serialize_with = "ser_rational")]
    pub x: Rational,
    pub xi: i64,
}

/// Outcome of Christol's N-integrality test.
#[derive(Debug, Clone, Serialize)]
pub struct NiVerdict {
    pub n_integral: bool,
    pub witness: Option<XiWitness>,
}

/// `F` is N-integral iff ξ(a,·) ≥ 0 for every unit `a`.
pub fn christol_ni_check(pair: &ParamPair) -> NiVerdict {
    for a in pair.units() {
        let prof = xi_profile(pair, a).expect("units are valid");
        if let Some((k, v)) = prof.jumps.iter().find(|(_, v)| *v < 0) {
            return NiVerdict { n_integral: false, witness: Some(XiWitness { a, x: k.orig.clone(), xi: *v }) };
        }
    }
    NiVerdict { n_integral: true, witness: None }
}

/// `m(a)`: the ≼-minimum of `{aα_i} ∪ {aβ_j}`.
pub fn m_min(pair: &ParamPair, a: u64) -> Result<Rational> {
    let prof = xi_profile(pair, a)?;
    prof.minimum()
        .map(|k| k.orig.clone())
        .ok_or_else(|| Error::Domain("both tuples are empty".into()))
}

/// Outcome of the window assertion H.
#[derive(Debug, Clone, Serialize)]
pub struct HVerdict {
    pub holds: bool,
    pub witness: Option<XiWitness>,
}

/// H: for every unit `a` and every `x` with `m(a) ≼ x ≺ a`, ξ(a, x) ≥ 1.
pub fn h_check(pair: &ParamPair) -> HVerdict {
    for a in pair.units() {
        let prof = xi_profile(pair, a).expect("units are valid");
        let upper = OrderKey::new(Rational::from_integer(BigInt::from(a)));
        // The window starts at the first key, so only keys inside it matter.
        if let Some((k, v)) = prof.jumps.iter().take_while(|(k, _)| *k < upper).find(|(_, v)| *v < 1) {
            return HVerdict { holds: false, witness: Some(XiWitness { a, x: k.orig.clone(), xi: *v }) };
        }
    }
    HVerdict { holds: true, witness: None }
}

/// Beukers–Heckman restated: every ξ(a,·) has range exactly `{0, 1}`.
///
/// Requires `r = s`, `β_s = 1` and disjoint reduced tuples.
pub fn interlacing_check(pair: &ParamPair) -> Result<bool> {
    if pair.r() != pair.s() {
        return Err(Error::Domain(format!("interlacing needs r = s (got r = {}, s = {})", pair.r(), pair.s())));
    }
    if pair.beta.last() != Some(&Rational::one()) {
        return Err(Error::Domain("interlacing needs the last β entry to be 1".into()));
    }
    if !pair.reduced_disjoint() {
        return Err(Error::Domain("interlacing needs disjoint reduced tuples".into()));
    }
    for a in pair.units() {
        if xi_profile(pair, a)?.range() != [0, 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn pair(a: &str, b: &str) -> ParamPair {
        ParamPair::parse(a, b).unwrap()
    }

    #[test]
    fn frac_rep_examples() {
        assert_eq!(frac_rep(&int(1)), int(1));
        assert_eq!(frac_rep(&rat(10, 3)), rat(1, 3));
        assert_eq!(frac_rep(&rat(-1, 2)), rat(1, 2));
        assert_eq!(frac_rep(&int(-4)), int(1));
    }

    #[test]
    fn order_chains() {
        let chain = |v: &[Rational]| v.windows(2).all(|w| order_lt(&w[0], &w[1]));
        assert!(chain(&[rat(1, 6), rat(1, 3), rat(1, 2), rat(2, 3), int(1)]));
        assert!(chain(&[rat(10, 3), rat(5, 2), rat(5, 3), rat(5, 6), int(5)]));
        assert!(order_le(&rat(7, 3), &rat(7, 3)));
        assert!(order_lt(&int(5), &int(1)));
    }

    #[test]
    fn m_min_examples() {
        let p = pair("1/6,1/2,2/3", "1/3,1,1");
        assert_eq!(m_min(&p, 1).unwrap(), rat(1, 6));
        assert_eq!(m_min(&p, 5).unwrap(), rat(10, 3));
        assert_eq!(m_min(&pair("3/7", "1"), 1).unwrap(), rat(3, 7));
    }

    #[test]
    fn xi_basics() {
        let p = pair("1/6,1/2,2/3", "1/3,1,1");
        assert_eq!(xi(&p, 1, &rat(1, 12)).unwrap(), 0);
        assert_eq!(xi(&p, 1, &int(-50)).unwrap(), 0);
        assert!(xi(&p, 2, &int(1)).is_err());
        let q = pair("1/2,1/3", "1");
        assert_eq!(xi(&q, 1, &int(-1000)).unwrap(), 1);
    }

    #[test]
    fn christol_examples() {
        assert!(christol_ni_check(&pair("1/6,1/2,2/3", "1/3,1,1")).n_integral);
        assert!(christol_ni_check(&pair("1/2", "1")).n_integral);
        let bad = christol_ni_check(&pair("1/5,1/3,3/5", "1/2,1,1"));
        assert!(!bad.n_integral);
        assert!(bad.witness.unwrap().xi < 0);
    }

    #[test]
    fn h_examples() {
        assert!(h_check(&pair("1/5,2/5,3/5,4/5", "1,1,1,1")).holds);
        assert!(h_check(&pair("1/7,1/4,3/7,6/7", "1,1,1,1")).holds);
        let v = h_check(&pair("1/3", "2/3"));
        assert!(!v.holds);
        assert!(v.witness.is_some());
    }

    #[test]
    fn interlacing_examples() {
        assert!(interlacing_check(&pair("1/2", "1")).unwrap());
        assert!(!interlacing_check(&pair("1/5,2/5,3/5,4/5", "1,1,1,1")).unwrap());
        assert!(interlacing_check(&pair("1/6,5/6", "1/2,1")).unwrap());
        assert!(!interlacing_check(&pair("1/6,5/6", "1,1")).unwrap());
        assert!(interlacing_check(&pair("1/2", "1/2")).is_err());
        assert!(interlacing_check(&pair("1/2,1/3", "1")).is_err());
    }

    #[test]
    fn rejects_nonpositive_integers() {
        assert!(ParamPair::parse("0", "1").is_err());
        assert!(ParamPair::parse("1/2", "-3").is_err());
        assert!(ParamPair::parse("-1/2", "1").is_ok());
    }
}
