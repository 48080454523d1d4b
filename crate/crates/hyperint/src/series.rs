//! Truncated exact power series and the hypergeometric objects built on them:
//! `F`, `G`, the q-coordinate, the residue sum `S`, roots and the mirror map,
//! plus the integrality, positivity and Dieudonné–Dwork scanners.
//!
//! Every "∈ Z[[z]]" verdict here is a verdict *to the truncation order*.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::christol::{xi_profile, ParamPair};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, require_prime, vp_unchecked, Rational, Valuation};

/// Coefficients `c_0, …, c_N` of a power series known modulo `z^{N+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Fails on an empty coefficient list (the order would be undefined).
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Series("a truncated series needs at least one coefficient".into()));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        TruncatedSeries { coeffs: (0..=order).map(f).collect() }
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        TruncatedSeries::new(values.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries::from_fn(order, |_| Rational::zero())
    }

    pub fn one(order: usize) -> Self {
        TruncatedSeries::from_fn(order, |k| if k == 0 { Rational::one() } else { Rational::zero() })
    }

    /// The series `z`.
    pub fn variable(order: usize) -> Self {
        TruncatedSeries::from_fn(order, |k| if k == 1 { Rational::one() } else { Rational::zero() })
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    /// Drops coefficients above `order` (never extends).
    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `f(z) ↦ f(c·z)`.
    pub fn rescale(&self, c: &Rational) -> Self {
        let mut power = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|x| {
                let out = x * &power;
                power *= c;
                out
            })
            .collect();
        TruncatedSeries { coeffs }
    }

    /// `f(z) ↦ f(z^p)`, same truncation order.
    pub fn dilate(&self, p: usize) -> Self {
        assert!(p >= 1, "dilation factor must be positive");
        TruncatedSeries::from_fn(self.order(), |k| {
            if k % p == 0 {
                self.coeffs[k / p].clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// `f(z)/z`; needs `c_0 = 0` and loses one order.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("dividing by z needs a zero constant term".into()));
        }
        if self.order() == 0 {
            return Err(Error::Series("dividing by z needs order at least 1".into()));
        }
        Ok(TruncatedSeries { coeffs: self.coeffs[1..].to_vec() })
    }

    /// `z·f(z)`, gaining one order.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs }
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return TruncatedSeries::zero(0);
        }
        TruncatedSeries::from_fn(self.order() - 1, |k| &self.coeffs[k + 1] * BigInt::from(k + 1))
    }

    /// The antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        TruncatedSeries::from_fn(self.order() + 1, |k| {
            if k == 0 {
                Rational::zero()
            } else {
                &self.coeffs[k - 1] / BigInt::from(k)
            }
        })
    }

    /// `1/f`; needs `c_0 ≠ 0`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Series("inverting needs a nonzero constant term".into()));
        }
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..=self.order() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// `exp(f)`; needs `c_0 = 0`. Uses `n·e_n = Σ k·f_k·e_{n−k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("exp needs a zero constant term".into()));
        }
        let weighted: Vec<Rational> =
            self.coeffs.iter().enumerate().map(|(k, c)| c * BigInt::from(k)).collect();
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(Rational::one());
        for n in 1..=self.order() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !weighted[k].is_zero() {
                    acc += &weighted[k] * &out[n - k];
                }
            }
            out.push(acc / BigInt::from(n));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `log(f)`; needs `c_0 = 1`. Uses `n·l_n = n·f_n − Σ_{k<n} k·l_k·f_{n−k}`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("log needs constant term 1".into()));
        }
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(Rational::zero());
        for n in 1..=self.order() {
            let mut acc = &self.coeffs[n] * BigInt::from(n);
            for k in 1..n {
                if !out[k].is_zero() && !self.coeffs[n - k].is_zero() {
                    acc -= &out[k] * &self.coeffs[n - k] * BigInt::from(k);
                }
            }
            out.push(acc / BigInt::from(n));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `f^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = TruncatedSeries::one(self.order());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The `v`-th root with constant term 1, as `exp(log(f)/v)`.
    pub fn root(&self, v: u64) -> Result<Self> {
        if v == 0 {
            return Err(Error::Parameter("root index must be at least 1".into()));
        }
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("roots need constant term 1".into()));
        }
        if v == 1 {
            return Ok(self.clone());
        }
        self.log()?.scale(&Rational::new(BigInt::one(), BigInt::from(v))).exp()
    }

    /// `f(g(z))` for `g` with zero constant term (Horner), at the smaller order.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Series("composition needs an inner series with zero constant term".into()));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = TruncatedSeries::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse `w(q)` with `f(w(q)) = q`; needs `c_0 = 0`,
    /// `c_1 ≠ 0`. Lagrange: `w_n = (1/n)[z^{n−1}] (z/f(z))^n`.
    pub fn lagrange_inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.order() == 0 || self.coeffs[1].is_zero() {
            return Err(Error::Series("inversion needs c_0 = 0 and c_1 ≠ 0".into()));
        }
        let n_max = self.order();
        let recip = self.shift_down()?.inverse()?;
        let mut power = recip.clone();
        let mut out = vec![Rational::zero(); n_max + 1];
        for n in 1..=n_max {
            out[n] = &power.coeffs[n - 1] / BigInt::from(n);
            if n < n_max {
                power = &power * &recip;
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Exact `num/den` strings, one per coefficient.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(fmt_rational).collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let order = self.order().min(other.order());
        TruncatedSeries::from_fn(order, |k| f(&self.coeffs[k], &other.coeffs[k]))
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(fmt_rational))
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, other: &TruncatedSeries) -> TruncatedSeries {
        self.zip_with(other, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, other: &TruncatedSeries) -> TruncatedSeries {
        self.zip_with(other, |a, b| a - b)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, other: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(other.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

/// Rising factorial `(x)_n`.
pub fn pochhammer(x: &Rational, n: u64) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// `∏(α_i)_n / ∏(β_j)_n`.
pub fn pochhammer_ratio(pair: &ParamPair, n: u64) -> Rational {
    let num = pair.alpha().iter().fold(Rational::one(), |acc, a| acc * pochhammer(a, n));
    let den = pair.beta().iter().fold(Rational::one(), |acc, b| acc * pochhammer(b, n));
    num / den
}

/// `H_x(n) = Σ_{k=0}^{n−1} 1/(x + k)`.
pub fn harmonic(x: &Rational, n: u64) -> Rational {
    (0..n).map(|k| (x + Rational::from_integer(BigInt::from(k))).recip()).sum()
}

/// Pochhammer ratios `Q(0..=order)` built incrementally.
fn ratios(pair: &ParamPair, order: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(order + 1);
    let mut q = Rational::one();
    out.push(q.clone());
    for n in 0..order {
        let shift = Rational::from_integer(BigInt::from(n));
        for a in pair.alpha() {
            q *= a + &shift;
        }
        for b in pair.beta() {
            q /= b + &shift;
        }
        out.push(q.clone());
    }
    out
}

/// `ΣH_{α_i}(n) − ΣH_{β_j}(n)` for `n = 0..=order`.
pub fn harmonic_differences(pair: &ParamPair, order: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(order + 1);
    let mut h = Rational::zero();
    out.push(h.clone());
    for n in 0..order {
        let shift = Rational::from_integer(BigInt::from(n));
        for a in pair.alpha() {
            h += (a + &shift).recip();
        }
        for b in pair.beta() {
            h -= (b + &shift).recip();
        }
        out.push(h.clone());
    }
    out
}

/// `F_{α,β}(scale·z)` to order `order`.
pub fn f_series(pair: &ParamPair, scale: &Rational, order: usize) -> TruncatedSeries {
    TruncatedSeries { coeffs: ratios(pair, order) }.rescale(scale)
}

/// `G_{α,β}(scale·z)`: coefficient `n` is `Q(n)·(ΣH_{α_i}(n) − ΣH_{β_j}(n))`.
pub fn g_series(pair: &ParamPair, scale: &Rational, order: usize) -> TruncatedSeries {
    let q = ratios(pair, order);
    let h = harmonic_differences(pair, order);
    TruncatedSeries { coeffs: q.iter().zip(&h).map(|(a, b)| a * b).collect() }.rescale(scale)
}

/// `(G/F)(scale·z)`; constant term 0.
pub fn g_over_f(pair: &ParamPair, scale: &Rational, order: usize) -> TruncatedSeries {
    g_series(pair, scale, order)
        .div(&f_series(pair, scale, order))
        .expect("F has constant term 1")
}

/// The unit series `q(scale·z)/(scale·z) = exp((G/F)(scale·z))`.
pub fn q_coordinate(pair: &ParamPair, scale: &Rational, order: usize) -> TruncatedSeries {
    g_over_f(pair, scale, order).exp().expect("G/F has zero constant term")
}

/// The unit series `z(scale·w)/(scale·w)` of the mirror map, the
/// compositional inverse of the q-coordinate.
pub fn mirror_map(pair: &ParamPair, scale: &Rational, order: usize) -> TruncatedSeries {
    let q = q_coordinate(pair, scale, order).shift_up();
    q.lagrange_inverse()
        .and_then(|z| z.shift_down())
        .expect("q(z) = z + O(z^2)")
}

/// `S(scale·z) = Σ_{a coprime to d} (G/F)_{⟨aα⟩,⟨aβ⟩}(scale·z)`; needs `r = s`.
pub fn s_series(pair: &ParamPair, scale: &Rational, order: usize) -> Result<TruncatedSeries> {
    if pair.r() != pair.s() {
        return Err(Error::Domain("S is defined for r = s".into()));
    }
    let parts: Vec<TruncatedSeries> = pair
        .units()
        .into_par_iter()
        .map(|a| g_over_f(&pair.scaled_reduced(a), scale, order))
        .collect();
    Ok(parts.iter().fold(TruncatedSeries::zero(order), |acc, s| &acc + s))
}

/// `exp(S(scale·z)/v)`, computed from the exact series `S/v`.
pub fn exp_s_root(pair: &ParamPair, scale: &Rational, order: usize, v: u64) -> Result<TruncatedSeries> {
    if v == 0 {
        return Err(Error::Parameter("root index must be at least 1".into()));
    }
    s_series(pair, scale, order)?.scale(&Rational::new(BigInt::one(), BigInt::from(v))).exp()
}

/// Outcome of an integrality scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityVerdict {
    pub integral: bool,
    /// Truncation order the verdict refers to.
    pub order: usize,
    pub prime: Option<u64>,
    pub first_bad_index: Option<usize>,
    pub coefficient: Option<String>,
    /// `v_p` of the offending coefficient (with a prime only).
    pub valuation: Option<i64>,
}

/// First coefficient that is not an integer (or, with `p`, has `v_p < 0`).
pub fn integrality_scan(s: &TruncatedSeries, p: Option<u64>) -> Result<IntegralityVerdict> {
    if let Some(p) = p {
        require_prime(p)?;
    }
    let bad = s.coeffs.iter().enumerate().find_map(|(k, c)| match p {
        None => (!c.is_integer()).then_some((k, None)),
        Some(p) => match vp_unchecked(c, p) {
            Valuation::Finite(v) if v < 0 => Some((k, Some(v))),
            _ => None,
        },
    });
    Ok(IntegralityVerdict {
        integral: bad.is_none(),
        order: s.order(),
        prime: p,
        first_bad_index: bad.map(|(k, _)| k),
        coefficient: bad.map(|(k, _)| fmt_rational(&s.coeffs[k])),
        valuation: bad.and_then(|(_, v)| v),
    })
}

/// Outcome of the Dieudonné–Dwork test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DieudonneDworkVerdict {
    pub holds: bool,
    pub order: usize,
    pub p: u64,
    /// First index `k ≥ 1` with `v_p(c_k) < 1`.
    pub witness_index: Option<usize>,
    pub witness_coefficient: Option<String>,
}

/// Checks `F(scale·z^p)/F(scale·z)^p ∈ 1 + p·z·Z_p[[z]]` to order `order`.
pub fn dieudonne_dwork_check(
    pair: &ParamPair,
    scale: &Rational,
    p: u64,
    order: usize,
) -> Result<DieudonneDworkVerdict> {
    require_prime(p)?;
    let f = f_series(pair, scale, order);
    let ratio = f.dilate(p as usize).div(&f.pow(p))?;
    let bad = (1..=order).find(|&k| !vp_unchecked(&ratio.coeffs[k], p).at_least(1));
    Ok(DieudonneDworkVerdict {
        holds: bad.is_none(),
        order,
        p,
        witness_index: bad,
        witness_coefficient: bad.map(|k| fmt_rational(&ratio.coeffs[k])),
    })
}

/// Per-residue positivity of the q-coordinate coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityVerdict {
    pub all_positive: bool,
    pub order: usize,
    /// Residues `a` with `ξ(a,·) ≥ 0`, which were tested.
    pub tested: Vec<u64>,
    /// Residues skipped because `ξ(a,·)` takes a negative value.
    pub skipped: Vec<u64>,
    /// `(a, k)`: coefficient `k ≥ 1` of `q_{⟨aα⟩,⟨aβ⟩}` is not positive.
    pub failures: Vec<(u64, usize)>,
}

/// Checks that `q_{⟨aα⟩,⟨aβ⟩}` has positive coefficients `1..=order` for
/// each coprime `a` with `ξ(a,·) ≥ 0`.
pub fn positivity_scan(pair: &ParamPair, order: usize) -> PositivityVerdict {
    let (mut tested, mut skipped) = (Vec::new(), Vec::new());
    for a in pair.units() {
        let nonneg = xi_profile(pair, a).map(|p| p.range().iter().all(|&v| v >= 0)).unwrap_or(false);
        if nonneg { tested.push(a) } else { skipped.push(a) }
    }
    let failures: Vec<(u64, usize)> = tested
        .par_iter()
        .flat_map_iter(|&a| {
            // q = z·exp(G/F): coefficient k of q is coefficient k−1 of the unit series.
            let unit = q_coordinate(&pair.scaled_reduced(a), &Rational::one(), order.saturating_sub(1));
            unit.coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_positive())
                .map(move |(k, _)| (a, k + 1))
                .collect::<Vec<_>>()
        })
        .collect();
    PositivityVerdict { all_positive: failures.is_empty(), order, tested, skipped, failures }
}

/// First `n ∈ 1..order` with `Q(n+1)Q(n−1) ≤ Q(n)²` for the Pochhammer ratios
/// of `pair`, or `None` if the sequence is strictly log-convex to `order`.
pub fn log_convexity_failure(pair: &ParamPair, order: usize) -> Option<usize> {
    let q = ratios(pair, order);
    (1..order).find(|&n| &q[n + 1] * &q[n - 1] <= &q[n] * &q[n])
}

/// First `n < order` where `ΣH_{α_i}(n) − ΣH_{β_j}(n)` fails to increase strictly.
pub fn harmonic_increase_failure(pair: &ParamPair, order: usize) -> Option<usize> {
    let h = harmonic_differences(pair, order);
    (0..order).find(|&n| h[n + 1] <= h[n])
}

/// Whether `q_{α,β} = q_{⟨aα⟩,⟨aβ⟩}` holds on the first `coefficients`
/// coefficients, decided by `F·G_a = F_a·G`.
pub fn q_identity_check(pair: &ParamPair, a: u64, coefficients: usize) -> bool {
    if coefficients == 0 {
        return true;
    }
    let order = coefficients - 1;
    let one = Rational::one();
    let other = pair.scaled_reduced(a);
    let lhs = &f_series(pair, &one, order) * &g_series(&other, &one, order);
    let rhs = &f_series(&other, &one, order) * &g_series(pair, &one, order);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn pair(a: &str, b: &str) -> ParamPair {
        ParamPair::parse(a, b).unwrap()
    }

    fn quintic() -> ParamPair {
        pair("1/5,2/5,3/5,4/5", "1,1,1,1")
    }

    fn factorial_ratio(n: u64) -> BigInt {
        let fact = |k: u64| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
        fact(5 * n) / fact(n).pow(5)
    }

    #[test]
    fn pochhammer_basics() {
        assert_eq!(pochhammer_ratio(&quintic(), 0), int(1));
        assert_eq!(pochhammer_ratio(&quintic(), 1), rat(24, 625));
        assert_eq!(pochhammer_ratio(&pair("1/2", "1"), 2), rat(3, 8));
        assert_eq!(harmonic(&rat(1, 2), 2), rat(2, 1) + rat(2, 3));
    }

    #[test]
    fn quintic_f_and_g() {
        let f = f_series(&quintic(), &int(3125), 20);
        let g = g_series(&quintic(), &int(3125), 20);
        assert_eq!(*g.coeff(0), int(0));
        for n in 0..=20u64 {
            let a = Rational::from_integer(factorial_ratio(n));
            assert_eq!(*f.coeff(n as usize), a);
            let h5: Rational = harmonic(&int(1), 5 * n);
            let h1: Rational = harmonic(&int(1), n);
            assert_eq!(*g.coeff(n as usize), a * (h5 * int(5) - h1 * int(5)));
        }
        assert_eq!(f_series(&quintic(), &int(0), 5), TruncatedSeries::one(5));
    }

    #[test]
    fn half_g_coefficient() {
        assert_eq!(*g_series(&pair("1/2", "1"), &int(1), 3).coeff(1), rat(1, 2));
    }

    #[test]
    fn exp_log_and_roots() {
        let z = TruncatedSeries::variable(6);
        let e = z.exp().unwrap();
        let mut fact = Rational::one();
        for n in 0..=6u64 {
            if n > 0 {
                fact *= int(n as i64);
            }
            assert_eq!(*e.coeff(n as usize), fact.recip());
        }
        assert_eq!(e.log().unwrap(), z);
        assert_eq!(TruncatedSeries::zero(4).exp().unwrap(), TruncatedSeries::one(4));
        let s = TruncatedSeries::from_integers(&[1, 3, -2, 7, 5]).unwrap();
        assert_eq!(s.pow(3).root(3).unwrap(), s);
        assert_eq!(s.root(1).unwrap(), s);
        assert!(TruncatedSeries::from_integers(&[2, 1]).unwrap().root(2).is_err());
        assert!(z.log().is_err());
    }

    #[test]
    fn lagrange_inversion() {
        let z = TruncatedSeries::variable(8);
        assert_eq!(z.lagrange_inverse().unwrap(), z);
        // z/(1−z) ↦ q/(1+q)
        let f = TruncatedSeries::from_fn(8, |k| if k == 0 { int(0) } else { int(1) });
        let inv = f.lagrange_inverse().unwrap();
        let expected = TruncatedSeries::from_fn(8, |k| if k == 0 { int(0) } else { int(if k % 2 == 1 { 1 } else { -1 }) });
        assert_eq!(inv, expected);
        assert_eq!(f.compose(&inv).unwrap(), z);
    }

    #[test]
    fn dilate_and_shift() {
        let s = TruncatedSeries::from_integers(&[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(s.dilate(2).to_strings(), ["1", "0", "2", "0", "3"]);
        assert_eq!(s.shift_up().shift_down().unwrap(), s);
        assert!(s.shift_down().is_err());
    }

    #[test]
    fn counterexample_pair_series_values() {
        let p = pair("1/7,1/4,3/7,6/7", "1,1,1,1");
        let c = int(19208);
        let e12 = exp_s_root(&p, &c, 3, 12).unwrap();
        assert_eq!(e12.to_strings(), ["1", "4802", "81541341/2", "1328534273395/3"]);
        let e28 = exp_s_root(&p, &c, 2, 28).unwrap();
        assert_eq!(e28.to_strings(), ["1", "2058", "29299137/2"]);
        let e2 = exp_s_root(&p, &c, 12, 2).unwrap();
        assert!(e2.is_integral());
        let v = integrality_scan(&e12, None).unwrap();
        assert_eq!(v.first_bad_index, Some(2));
        assert_eq!(v.coefficient.as_deref(), Some("81541341/2"));
    }

    #[test]
    fn s_with_trivial_denominator_is_g_over_f() {
        let p = pair("1,1", "1,1");
        assert_eq!(s_series(&p, &int(1), 5).unwrap(), g_over_f(&p, &int(1), 5));
        assert!(s_series(&pair("1/2", "1,1"), &int(1), 3).is_err());
    }

    #[test]
    fn integrality_with_prime() {
        let f = f_series(&quintic(), &int(1), 3);
        let v = integrality_scan(&f, Some(5)).unwrap();
        assert_eq!((v.integral, v.first_bad_index, v.valuation), (false, Some(1), Some(-4)));
        assert!(integrality_scan(&f_series(&quintic(), &int(3125), 30), Some(5)).unwrap().integral);
        assert!(integrality_scan(&f, Some(4)).is_err());
    }

    #[test]
    fn dieudonne_dwork() {
        let q = quintic();
        assert!(dieudonne_dwork_check(&q, &int(3125), 2, 30).unwrap().holds);
        assert!(dieudonne_dwork_check(&q, &int(3125), 3, 30).unwrap().holds);
        let bad = dieudonne_dwork_check(&q, &int(625), 5, 30).unwrap();
        assert!(!bad.holds && bad.witness_index.is_some());
    }

    #[test]
    fn positivity_and_log_convexity() {
        let v = positivity_scan(&quintic(), 20);
        assert!(v.all_positive);
        assert_eq!(v.tested, vec![1, 2, 3, 4]);
        assert!(positivity_scan(&pair("1/2", "1"), 20).all_positive);
        assert_eq!(log_convexity_failure(&quintic(), 60), None);
        assert_eq!(harmonic_increase_failure(&quintic(), 60), None);
    }

    #[test]
    fn q_identity() {
        let q = quintic();
        for a in 1..=4 {
            assert!(q_identity_check(&q, a, 16));
        }
        // Under a = 5 the tuple (1/6,1/2,2/3; 1/3,1,1) becomes (5/6,1/2,1/3; 2/3,1,1).
        assert!(!q_identity_check(&pair("1/6,1/2,2/3", "1/3,1,1"), 5, 9));
    }

    #[test]
    fn serializes_as_strings() {
        let s = TruncatedSeries::new(vec![int(1), rat(-3, 4)]).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"["1","-3/4"]"#);
    }
}
