//! Exact rationals, p-adic valuations, residue helpers, Dwork's map and
//! Morita's p-adic Gamma function.
//!
//! Everything here is a pure function over immutable values. Integers that
//! index residues (`d`, `p`, moduli) are `u64`; anything that can grow with
//! the series order is a `BigInt`/[`Rational`].

use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The universal scalar: an arbitrary-precision fraction in lowest terms
/// with positive denominator.
pub type Rational = BigRational;

/// `n/d` as a [`Rational`]. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `num/den` or a bare integer. Whitespace and decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("`{s}` is not an exact fraction (expected num/den or an integer)"));
    if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '.') {
        return Err(bad());
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("`{s}` has a zero denominator")));
    }
    Ok(Rational::new(n, d))
}

/// Parses a comma-separated tuple of fractions.
pub fn parse_tuple(s: &str) -> Result<Vec<Rational>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde helper: a rational as its exact string.
pub fn ser_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(x))
}

/// Serde helper: a slice of rationals as exact strings.
pub fn ser_rationals<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(fmt_rational))
}

/// Largest integer `<= x`.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Fractional part `x - floor(x)` in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - Rational::from_integer(floor(x))
}

/// The exact denominator `d(x)`.
pub fn exact_denominator(x: &Rational) -> BigInt {
    x.denom().clone()
}

/// p-adic valuation with a distinguished `+inf` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// `self >= bound`, treating `+inf` as above everything.
    pub fn at_least(self, bound: i64) -> bool {
        self >= Valuation::Finite(bound)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m`.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Errors unless `p` is prime.
pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `v_p(n)` for a nonzero machine integer.
pub fn vp_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `v_p(n)`, `+inf` at zero.
pub fn vp_bigint(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p_big = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(&p_big);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    Valuation::Finite(v)
}

/// `v_p(x) = v_p(num) - v_p(den)`; `+inf` for `x = 0`.
pub fn vp(x: &Rational, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    Ok(vp_unchecked(x, p))
}

/// [`vp`] without the primality check, for hot loops with a validated `p`.
pub fn vp_unchecked(x: &Rational, p: u64) -> Valuation {
    match vp_bigint(x.numer(), p) {
        Valuation::Infinite => Valuation::Infinite,
        Valuation::Finite(a) => {
            let b = vp_bigint(x.denom(), p).finite().unwrap_or(0);
            Valuation::Finite(a - b)
        }
    }
}

/// Legendre's formula for `v_p(n!)`.
pub fn vp_factorial(n: u64, p: u64) -> u64 {
    let mut acc = 0;
    let mut q = n / p;
    while q > 0 {
        acc += q;
        q /= p;
    }
    acc
}

/// Whether `x` lies in `Z_p`, i.e. `p` does not divide its denominator.
pub fn in_zp(x: &Rational, p: u64) -> bool {
    !(x.denom() % BigInt::from(p)).is_zero()
}

/// A rational known to lie in `Z_p ∩ Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicInt {
    value: Rational,
    prime: u64,
}

impl PadicInt {
    pub fn new(value: Rational, prime: u64) -> Result<Self> {
        require_prime(prime)?;
        if !in_zp(&value, prime) {
            return Err(Error::NotPadicInteger { value: fmt_rational(&value), prime });
        }
        Ok(PadicInt { value, prime })
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dwork_map(&self) -> PadicInt {
        PadicInt { value: dwork_step(&self.value, self.prime), prime: self.prime }
    }

    pub fn dwork_iter(&self, ell: u32) -> PadicInt {
        let mut y = self.value.clone();
        for _ in 0..ell {
            y = dwork_step(&y, self.prime);
        }
        PadicInt { value: y, prime: self.prime }
    }
}

// Picks the unique candidate (x + k)/p, k in 0..p, that stays in Z_p.
fn dwork_step(x: &Rational, p: u64) -> Rational {
    let pb = BigInt::from(p);
    let (a, b) = (x.numer(), x.denom());
    for k in 0..p {
        let num = a + BigInt::from(k) * b;
        if (&num % &pb).is_zero() {
            return Rational::new(num / &pb, b.clone());
        }
    }
    unreachable!("a p-adic integer always has exactly one Dwork preimage digit")
}

/// Dwork's map: the unique `y ∈ Z_p ∩ Q` with `p·y - x ∈ {0, …, p-1}`.
pub fn dwork_map(x: &Rational, p: u64) -> Result<Rational> {
    Ok(PadicInt::new(x.clone(), p)?.dwork_map().value)
}

/// `ell`-fold iterate of [`dwork_map`].
pub fn dwork_iter(x: &Rational, p: u64, ell: u32) -> Result<Rational> {
    Ok(PadicInt::new(x.clone(), p)?.dwork_iter(ell).value)
}

/// `p^ell·D_p^ell(x) - x`, the integer in `{0, …, p^ell - 1}` congruent to
/// `-x` modulo `p^ell`.
pub fn dwork_shift(x: &Rational, p: u64, ell: u32) -> Result<BigInt> {
    let m = BigInt::from(p).pow(ell);
    varpi_big(&m, &-x)
}

/// The representative in `{0, …, c-1}` of `a·b^{-1} mod c` for `x = a/b`.
pub fn varpi(c: u64, x: &Rational) -> Result<u64> {
    if c == 0 {
        return Err(Error::Parameter("varpi modulus must be >= 1".into()));
    }
    Ok(varpi_big(&BigInt::from(c), x)?.to_u64().expect("residue below a u64 modulus"))
}

/// [`varpi`] with an arbitrary-precision modulus.
pub fn varpi_big(c: &BigInt, x: &Rational) -> Result<BigInt> {
    if !c.is_positive() {
        return Err(Error::Parameter("varpi modulus must be >= 1".into()));
    }
    let b = x.denom().mod_floor(c);
    let inv = mod_inverse_big(&b, c).ok_or_else(|| {
        Error::Parameter(format!("denominator of {} is not invertible mod {c}", fmt_rational(x)))
    })?;
    Ok((x.numer().mod_floor(c) * inv).mod_floor(c))
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Morita's p-adic Gamma at a nonnegative integer:
/// `(-1)^n · ∏_{1 <= k < n, p ∤ k} k`.
pub fn gamma_p(n: u64, p: u64) -> Result<BigInt> {
    require_prime(p)?;
    let mut acc = BigInt::one();
    for k in 1..n {
        if k % p != 0 {
            acc *= k;
        }
    }
    if n % 2 == 1 {
        acc = -acc;
    }
    Ok(acc)
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    mod_inverse_big(&BigInt::from(a), &BigInt::from(m)).and_then(|v| v.to_u64())
}

/// The unique `x mod m1·m2` with `x ≡ r1 (m1)` and `x ≡ r2 (m2)`, coprime moduli.
pub fn crt(r1: u64, m1: u64, r2: u64, m2: u64) -> Option<u64> {
    if m1.gcd(&m2) != 1 {
        return None;
    }
    let m = m1 as u128 * m2 as u128;
    let inv = mod_inv(m1 % m2, m2)? as u128;
    let diff = ((r2 % m2) as u128 + m2 as u128 - (r1 % m1) as u128 % m2 as u128) % m2 as u128;
    let k = diff * inv % m2 as u128;
    Some(((r1 % m1) as u128 + m1 as u128 * k) as u64 % m as u64)
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    prime_divisors(n).iter().fold(n, |acc, &p| acc / p * (p - 1))
}

/// `{a ∈ 1..=d : gcd(a, d) = 1}`; `[1]` when `d = 1`.
pub fn coprime_residues(d: u64) -> Vec<u64> {
    (1..=d).filter(|a| a.gcd(&d) == 1).collect()
}

/// Lowest-terms numerator and denominator as machine integers, when they fit.
pub fn small_parts(x: &Rational) -> Option<(i64, u64)> {
    Some((x.numer().to_i64()?, x.denom().to_u64()?))
}

/// Positive-integer check used for tuple entries.
pub fn is_nonpositive_integer(x: &Rational) -> bool {
    x.is_integer() && x.numer().sign() != Sign::Plus
}
