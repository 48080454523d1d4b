//! The step functions `δ_{p,ℓ}`, `Δ^{p,ℓ}_{α,β}` and the closed formulas for
//! `v_p` of Pochhammer ratios, with a direct oracle to check them against.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::christol::{christol_ni_check, ParamPair};
use crate::constants::lambda_p;
use crate::error::{Error, Result};
use crate::exact::{
    crt, dwork_iter, euler_phi, floor, fmt_rational, frac, in_zp, require_prime, ser_rational, varpi,
    vp_factorial, vp_unchecked, Rational, Valuation,
};

/// One jump of `Δ`: `+1` (α-side) or `−1` (β-side) once `x ≥ value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Threshold {
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    pub sign: i8,
}

/// `Δ^{p,ℓ}_{α,β}` represented by its per-parameter thresholds
/// `𝔇_p^ℓ(α) + ⌊1−α⌋/p^ℓ`, each in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaFunction {
    pub p: u64,
    pub ell: u32,
    pub thresholds: Vec<Threshold>,
}

impl DeltaFunction {
    /// Needs every entry in `Z_p`.
    pub fn new(pair: &ParamPair, p: u64, ell: u32) -> Result<Self> {
        require_prime(p)?;
        if ell == 0 {
            return Err(Error::Parameter("ℓ must be at least 1".into()));
        }
        let pl = Rational::from_integer(BigInt::from(p).pow(ell));
        let threshold = |x: &Rational, sign: i8| -> Result<Threshold> {
            let shift = floor(&(Rational::one() - x));
            let value = dwork_iter(x, p, ell)? + Rational::from_integer(shift) / &pl;
            Ok(Threshold { value, sign })
        };
        let thresholds = pair
            .alpha()
            .iter()
            .map(|a| threshold(a, 1))
            .chain(pair.beta().iter().map(|b| threshold(b, -1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DeltaFunction { p, ell, thresholds })
    }

    /// `Σ ±δ(γ, x)` with `δ(γ, x) = k ⟺ x − θ_γ ∈ [k−1, k)`.
    pub fn eval(&self, x: &Rational) -> i64 {
        self.thresholds
            .iter()
            .map(|t| {
                let k = floor(&(x - &t.value)) + BigInt::one();
                i64::from(t.sign) * k.to_i64().expect("step value fits i64")
            })
            .sum()
    }

    /// The set `Δ([0, 1])`: values at 0, at each threshold, and at 1.
    pub fn value_set(&self) -> BTreeSet<i64> {
        let mut points: Vec<Rational> = self.thresholds.iter().map(|t| t.value.clone()).collect();
        points.push(Rational::zero());
        points.push(Rational::one());
        points.iter().map(|x| self.eval(x)).collect()
    }
}

/// `Δ^{p,ℓ}_{α,β}(x)`; every entry must lie in `Z_p`.
pub fn delta_eval(pair: &ParamPair, p: u64, ell: u32, x: &Rational) -> Result<i64> {
    Ok(DeltaFunction::new(pair, p, ell)?.eval(x))
}

fn require_zp(pair: &ParamPair, p: u64) -> Result<()> {
    require_prime(p)?;
    match pair.entries().find(|x| !in_zp(x, p)) {
        Some(x) => Err(Error::NotPadicInteger { value: fmt_rational(x), prime: p }),
        None => Ok(()),
    }
}

/// Largest `d(γ)·(|⌊1−γ⌋| + 1)` over the entries; past `p^ℓ > n` times this,
/// every `Δ^{p,ℓ}({n/p^ℓ})` vanishes.
fn jump_scale(pair: &ParamPair) -> BigInt {
    pair.entries()
        .map(|x| x.denom() * (floor(&(Rational::one() - x)).abs() + BigInt::one()))
        .max()
        .unwrap_or_else(BigInt::one)
}

/// `v_p(∏(α_i)_n/∏(β_j)_n) = Σ_ℓ Δ^{p,ℓ}({n/p^ℓ}) + (r−s)·v_p(n!)` for
/// entries in `Z_p`.
pub fn vp_ratio_formula(pair: &ParamPair, p: u64, n: u64) -> Result<i64> {
    require_zp(pair, p)?;
    if n == 0 {
        return Ok(0);
    }
    let bound = jump_scale(pair) * n;
    let nr = Rational::from_integer(BigInt::from(n));
    let mut total = 0i64;
    let mut pl = BigInt::from(p);
    let mut ell = 1u32;
    while pl <= bound {
        let x = frac(&(&nr / &pl));
        total += delta_eval(pair, p, ell, &x)?;
        pl *= p;
        ell += 1;
    }
    let rs = pair.r() as i64 - pair.s() as i64;
    Ok(total + rs * vp_factorial(n, p) as i64)
}

/// `v_p` of the Pochhammer ratio by summing `v_p(γ + k)` over every factor.
pub fn vp_ratio_oracle(pair: &ParamPair, p: u64, n: u64) -> Result<i64> {
    require_prime(p)?;
    let side = |v: &[Rational]| -> i64 {
        v.iter()
            .map(|x| {
                (0..n)
                    .map(|k| match vp_unchecked(&(x + Rational::from_integer(BigInt::from(k))), p) {
                        Valuation::Finite(v) => v,
                        Valuation::Infinite => unreachable!("entries are not nonpositive integers"),
                    })
                    .sum::<i64>()
            })
            .sum()
    };
    Ok(side(pair.alpha()) - side(pair.beta()))
}

/// `𝔇_q(γ)` for `γ = k/N ∈ (0,1]` with `N` coprime to `q`, knowing only
/// `q mod N`: `ϖ_N(k/q)/N`, with residue 0 read as `N/N = 1`.
fn dwork_from_residue(x: &Rational, q_mod: u64) -> Rational {
    let n = x.denom().to_u64().expect("denominator divides d");
    if n == 1 {
        return Rational::one();
    }
    let k = x.numer().to_u64().expect("entry in (0,1]");
    let res = varpi(n, &Rational::new(BigInt::from(k), BigInt::from(q_mod % n))).expect("q is a unit mod N");
    let res = if res == 0 { n } else { res };
    Rational::new(BigInt::from(res), BigInt::from(n))
}

/// Right side of the closed formula for `v_p(C₀ⁿ·∏(α_i)_n/∏(β_j)_n)` when
/// `p | d`: an average over the classes `q ≡ p^ℓ (mod D)`, `q ≡ a (mod p^f)` of
/// `Δ^{q,1}`, plus `n·{λ_p/(p−1)}`. Each `Δ^{q,1}` depends only on `q mod d`,
/// so no auxiliary prime is searched for.
pub fn magie_valuation(pair: &ParamPair, p: u64, n: u64) -> Result<Rational> {
    require_prime(p)?;
    if pair.r() != pair.s() {
        return Err(Error::Domain("the closed formula needs r = s".into()));
    }
    if !pair.entries_in_unit_interval() {
        return Err(Error::Domain("the closed formula needs entries in (0,1]".into()));
    }
    let d = pair.d();
    if !d.is_multiple_of(p) {
        return Err(Error::Domain(format!("the closed formula needs p | d; {p} ∤ {d}")));
    }
    if !christol_ni_check(pair).n_integral {
        return Err(Error::Domain("the closed formula needs F to be N-integral".into()));
    }
    let lambda = lambda_p(pair, p)?;
    let frac_term = Rational::new(BigInt::from(lambda.mod_floor(&(p as i64 - 1))), BigInt::from(p - 1))
        * BigInt::from(n);
    if n == 0 {
        return Ok(Rational::zero());
    }
    let mut pf = 1u64;
    while d.is_multiple_of(pf * p) {
        pf *= p;
    }
    let big_d = d / pf;
    let units: Vec<u64> = (1..=pf).filter(|a| a % p != 0).collect();
    let nb = BigInt::from(n);
    let limit = BigInt::from(n) * BigInt::from(d);
    let mut sum = 0i64;
    let mut pl = BigInt::from(p);
    while pl <= limit {
        let x = Rational::new(nb.mod_floor(&pl), pl.clone());
        let pl_mod_d = (&pl % BigInt::from(big_d)).to_u64().expect("reduced mod D");
        for &a in &units {
            let q = crt(pl_mod_d, big_d, a, pf).expect("D and p^f are coprime");
            let delta: i64 = pair
                .alpha()
                .iter()
                .map(|g| (x >= dwork_from_residue(g, q)) as i64)
                .sum::<i64>()
                - pair.beta().iter().map(|g| (x >= dwork_from_residue(g, q)) as i64).sum::<i64>();
            sum += delta;
        }
        pl *= p;
    }
    Ok(Rational::new(BigInt::from(sum), BigInt::from(euler_phi(pf))) + frac_term)
}

/// One row of a [`ValuationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationRow {
    pub n: u64,
    pub formula: i64,
    pub oracle: i64,
}

/// Per-`n` valuations of the Pochhammer ratio by formula and oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationReport {
    pub p: u64,
    pub rows: Vec<ValuationRow>,
    pub mismatches: Vec<u64>,
}

/// Formula vs oracle for `n = 0..=n_max`; entries must lie in `Z_p`.
pub fn valuation_report(pair: &ParamPair, p: u64, n_max: u64) -> Result<ValuationReport> {
    let rows = (0..=n_max)
        .map(|n| Ok(ValuationRow { n, formula: vp_ratio_formula(pair, p, n)?, oracle: vp_ratio_oracle(pair, p, n)? }))
        .collect::<Result<Vec<_>>>()?;
    let mismatches = rows.iter().filter(|r| r.formula != r.oracle).map(|r| r.n).collect();
    Ok(ValuationReport { p, rows, mismatches })
}
