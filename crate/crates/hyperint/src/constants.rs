//! Scalar invariants of a parameter pair: λ_p, the Eisenstein constant and
//! its rescaling, the root exponents, and the factorial-ratio special case.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::christol::{christol_ni_check, h_check, ParamPair};
use crate::error::{Error, Result};
use crate::exact::{
    euler_phi, is_prime, prime_divisors, require_prime, ser_rational, vp_unchecked, Rational, Valuation,
};

/// λ_p = #{α_i ∈ Z_p} − #{β_j ∈ Z_p}.
pub fn lambda_p(pair: &ParamPair, p: u64) -> Result<i64> {
    require_prime(p)?;
    Ok(lambda_unchecked(pair, p))
}

fn lambda_unchecked(pair: &ParamPair, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let count = |v: &[Rational]| v.iter().filter(|x| !(x.denom() % &pb).is_zero()).count() as i64;
    count(pair.alpha()) - count(pair.beta())
}

/// `⌊λ_p / (p − 1)⌋`.
pub fn lambda_floor(pair: &ParamPair, p: u64) -> i64 {
    Integer::div_floor(&lambda_unchecked(pair, p), &(p as i64 - 1))
}

fn pow_rat(p: u64, e: i64) -> Rational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(base)
    } else {
        Rational::new(BigInt::one(), base)
    }
}

/// The constant `C₀` and whether it is certified to equal the Eisenstein constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EisensteinConstant {
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    /// `true` when `r = s` and every entry lies in `(0, 1]`; otherwise `value`
    /// is only the formula core and the true constant is unknown.
    pub exact: bool,
}

/// `C₀ = (∏d(α_i)/∏d(β_j))·∏ p^{−⌊λ_p/(p−1)⌋}` over [`exceptional_primes`].
pub fn eisenstein_constant(pair: &ParamPair) -> Result<EisensteinConstant> {
    if !christol_ni_check(pair).n_integral {
        return Err(Error::Domain(format!("F is not N-integral for {}", pair.describe())));
    }
    Ok(EisensteinConstant {
        value: c0_core(pair),
        exact: pair.r() == pair.s() && pair.entries_in_unit_interval(),
    })
}

/// The prime set of the constant formula: divisors of `d` and primes `≤ r − s + 1`.
pub fn exceptional_primes(pair: &ParamPair) -> Vec<u64> {
    let mut primes = prime_divisors(pair.d());
    let extra = pair.r() as i64 - pair.s() as i64 + 1;
    primes.extend((2..=extra.max(0) as u64).filter(|&q| is_prime(q)));
    primes.sort_unstable();
    primes.dedup();
    primes
}

fn c0_core(pair: &ParamPair) -> Rational {
    let prod = |v: &[Rational]| v.iter().fold(BigInt::one(), |acc, x| acc * x.denom());
    let mut c = Rational::new(prod(pair.alpha()), prod(pair.beta()));
    for p in exceptional_primes(pair) {
        c *= pow_rat(p, -lambda_floor(pair, p));
    }
    c
}

/// 𝔪: entries of both tuples whose exact denominator is divisible by 4.
pub fn m_count(pair: &ParamPair) -> usize {
    let four = BigInt::from(4);
    pair.entries().filter(|x| (x.denom() % &four).is_zero()).count()
}

/// `d*`: `d` divided by the product of its distinct prime divisors.
pub fn d_star(d: u64) -> u64 {
    prime_divisors(d).iter().fold(d, |acc, p| acc / p)
}

fn doubled(pair: &ParamPair) -> bool {
    !pair.beta_all_integers() && m_count(pair) % 2 == 1
}

/// `C' = 2·C_{⟨α⟩,⟨β⟩}` when β is not integral and 𝔪 is odd, else `C_{⟨α⟩,⟨β⟩}`.
pub fn c_prime(pair: &ParamPair) -> Result<Rational> {
    let base = eisenstein_constant(&pair.reduced())?.value;
    Ok(if doubled(pair) { base * Rational::from_integer(BigInt::from(2)) } else { base })
}

/// `d' = 2d*` or `d*`, following the same rule as [`c_prime`].
pub fn d_prime(pair: &ParamPair) -> u64 {
    let ds = d_star(pair.d());
    if doubled(pair) {
        2 * ds
    } else {
        ds
    }
}

fn to_positive_integer(x: Rational, what: &str) -> Result<u64> {
    if !x.is_integer() || x <= Rational::zero() {
        return Err(Error::Domain(format!("{what} evaluated to the non-integer {x}")));
    }
    x.to_integer().to_u64().ok_or_else(|| Error::Domain(format!("{what} exceeds 2^64")))
}

/// Root exponent `𝔫` for `exp(S(C'z)/𝔫)`. Requires `r = s` and H.
pub fn frak_n(pair: &ParamPair) -> Result<u64> {
    if pair.r() != pair.s() {
        return Err(Error::Domain("the root exponent needs r = s".into()));
    }
    if !h_check(pair).holds {
        return Err(Error::Domain("the root exponent needs the window assertion H".into()));
    }
    let d = pair.d();
    let value = if pair.beta_all_integers() {
        prime_divisors(d).into_iter().fold(Rational::from_integer(BigInt::from(d)), |acc, p| {
            acc * pow_rat(p, -2 - lambda_floor(pair, p))
        })
    } else {
        let dp = d_prime(pair);
        prime_divisors(dp)
            .into_iter()
            .filter(|&p| lambda_unchecked(pair, p) % (p as i64 - 1) == 0)
            .fold(Rational::from_integer(BigInt::from(dp)), |acc, p| acc * pow_rat(p, -1))
    };
    to_positive_integer(value, "the root exponent")
}

/// Root exponent `𝔫'` for the q-coordinate itself when β consists of positive integers.
pub fn frak_n_prime(pair: &ParamPair) -> Result<u64> {
    if !pair.beta_all_integers() {
        return Err(Error::Domain("the q-root exponent needs β to consist of positive integers".into()));
    }
    if !pair.reduced_disjoint() {
        return Err(Error::Domain("the q-root exponent needs disjoint reduced tuples".into()));
    }
    let value = prime_divisors(pair.d())
        .into_iter()
        .fold(Rational::one(), |acc, p| acc * pow_rat(p, -1 - lambda_floor(pair, p)));
    to_positive_integer(value, "the q-root exponent")
}

/// One prime's verdict in the numerator condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumeratorCheck {
    pub p: u64,
    pub valuation: Valuation,
    pub bound: i64,
    pub holds: bool,
}

/// Necessary condition `v_p(∏n_i / ∏n'_j) ≥ ⌊λ_p/(p−1)⌋` on the numerators of
/// `⟨α⟩, ⟨β⟩`. Checked at every prime dividing `d` or one of the numerators,
/// since failures can occur at primes coprime to `d`.
pub fn numerator_condition(pair: &ParamPair) -> Result<Vec<NumeratorCheck>> {
    if pair.r() != pair.s() {
        return Err(Error::Domain("the numerator condition needs r = s".into()));
    }
    let red = pair.reduced();
    let prod = |v: &[Rational]| v.iter().fold(BigInt::one(), |acc, x| acc * x.numer());
    let ratio = Rational::new(prod(red.alpha()), prod(red.beta()));
    let mut primes: Vec<u64> = prime_divisors(pair.d());
    for x in red.entries() {
        let n = x.numer().to_u64().ok_or_else(|| Error::Parameter("numerator exceeds 2^64".into()))?;
        primes.extend(prime_divisors(n));
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes
        .into_iter()
        .map(|p| {
            let valuation = vp_unchecked(&ratio, p);
            let bound = lambda_floor(pair, p);
            NumeratorCheck { p, valuation, bound, holds: valuation.at_least(bound) }
        })
        .collect())
}

/// Every scalar invariant of a pair in one place.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantSheet {
    pub d: u64,
    pub lambda: BTreeMap<u64, i64>,
    pub m_count: usize,
    pub d_star: u64,
    pub d_prime: u64,
    pub c0: EisensteinConstant,
    #[serde(serialize_with = "ser_rational")]
    pub c_prime: Rational,
    pub frak_n: Option<u64>,
    pub frak_n_prime: Option<u64>,
}

/// Builds the [`ConstantSheet`]; fails only when `F` is not N-integral.
///
/// λ is tabulated over primes dividing `d` and primes `≤ r − s + 1`.
pub fn constant_sheet(pair: &ParamPair) -> Result<ConstantSheet> {
    let c0 = eisenstein_constant(pair)?;
    Ok(ConstantSheet {
        d: pair.d(),
        lambda: exceptional_primes(pair).into_iter().map(|p| (p, lambda_unchecked(pair, p))).collect(),
        m_count: m_count(pair),
        d_star: d_star(pair.d()),
        d_prime: d_prime(pair),
        c0,
        c_prime: c_prime(pair)?,
        frak_n: frak_n(pair).ok(),
        frak_n_prime: frak_n_prime(pair).ok(),
    })
}

/// Factorial-ratio sequences `∏(e_i n)! / ∏(f_j n)!`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorialRatio {
    pub e: Vec<u64>,
    pub f: Vec<u64>,
}

impl FactorialRatio {
    pub fn new(e: Vec<u64>, f: Vec<u64>) -> Result<Self> {
        if e.iter().chain(&f).any(|&x| x == 0) {
            return Err(Error::Parameter("factorial-ratio entries must be positive".into()));
        }
        Ok(FactorialRatio { e, f })
    }

    fn expand(v: &[u64]) -> Vec<Rational> {
        v.iter()
            .flat_map(|&m| (1..=m).map(move |b| Rational::new(BigInt::from(b), BigInt::from(m))))
            .collect()
    }

    /// The reduced-residue tuples with common entries cancelled, so that
    /// `F(C₀z)` is the factorial-ratio generating function.
    pub fn pair(&self) -> ParamPair {
        ParamPair::new(Self::expand(&self.e), Self::expand(&self.f))
            .expect("fractions in (0,1] are valid parameters")
            .cancel_common()
    }

    /// The `n`-th term `∏(e_i n)! / ∏(f_j n)!` as an exact rational.
    pub fn term(&self, n: u64) -> Rational {
        let fact = |k: u64| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
        let prod = |v: &[u64]| v.iter().fold(BigInt::one(), |acc, &m| acc * fact(m * n));
        Rational::new(prod(&self.e), prod(&self.f))
    }

    /// `C₀` from the cyclotomic families: each `m` contributes, for every
    /// divisor `N | m`, the factor `N^{φ(N)}·∏_{p|N} p^{φ(N)/(p−1)}`.
    pub fn c0_from_families(&self) -> Rational {
        let family = |v: &[u64]| {
            let mut acc = BigInt::one();
            for &m in v {
                for n in (1..=m).filter(|n| m % n == 0) {
                    let phi = euler_phi(n);
                    acc *= BigInt::from(n).pow(phi as u32);
                    for p in prime_divisors(n) {
                        acc *= BigInt::from(p).pow((phi / (p - 1)) as u32);
                    }
                }
            }
            acc
        };
        Rational::new(family(&self.e), family(&self.f))
    }

    /// Landau's step function `Σ⌊e_i x⌋ − Σ⌊f_j x⌋`.
    pub fn landau_delta(&self, x: &Rational) -> i64 {
        let sum = |v: &[u64]| {
            v.iter()
                .map(|&m| (x * Rational::from_integer(BigInt::from(m))).floor().to_integer().to_i64().unwrap())
                .sum::<i64>()
        };
        sum(&self.e) - sum(&self.f)
    }

    /// `Σe = Σf` and `Δ_{e,f} ≥ 1` on `[1/M, 1)`, M the largest entry.
    ///
    /// Δ is right-continuous with jumps at `k/m`, so its values on the
    /// interval are exactly the values at `1/M` and at the jumps inside it.
    pub fn landau_criterion(&self) -> bool {
        if self.e.iter().sum::<u64>() != self.f.iter().sum::<u64>() {
            return false;
        }
        let big_m = self.e.iter().chain(&self.f).copied().max().unwrap_or(1);
        let lo = Rational::new(BigInt::one(), BigInt::from(big_m));
        let one = Rational::one();
        let mut points = vec![lo.clone()];
        for &m in self.e.iter().chain(&self.f) {
            for k in 1..m {
                let x = Rational::new(BigInt::from(k), BigInt::from(m));
                if x >= lo && x < one {
                    points.push(x);
                }
            }
        }
        points.iter().all(|x| self.landau_delta(x) >= 1)
    }
}
