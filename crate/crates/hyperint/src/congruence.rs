//! Dwork-style formal congruences, the Frobenius-twisted expansion check on
//! residue frames `Ω_b(p^ν, D)`, and the full q-coordinate criterion.
//!
//! The algebras of `Z_p`-valued functions on `Ω_b` are never materialised:
//! membership is checked as valuation bounds plus congruences in `t` up to a
//! finite depth.

use std::collections::{BTreeSet, HashMap};
use std::sync::RwLock;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::christol::{christol_ni_check, frac_rep, h_check, interlacing_check, HVerdict, NiVerdict, ParamPair};
use crate::constants::{c_prime, constant_sheet, frak_n, lambda_floor, lambda_p, m_count, ConstantSheet, FactorialRatio};
use crate::error::{Error, Result};
use crate::exact::{
    crt, dwork_iter, fmt_rational, frac, mod_inv, require_prime, ser_rational, vp_unchecked, Rational, Valuation,
};
use crate::series::{exp_s_root, g_over_f, integrality_scan, positivity_scan, q_coordinate, q_identity_check, IntegralityVerdict};

/// Largest `|Ω_b|` verified exhaustively by [`twisted_expansion_verify`]; larger
/// frames are sampled evenly down to this size.
pub const MAX_EXHAUSTIVE_FRAME: usize = 48;

/// A finite prefix `(𝒩_0, …, 𝒩_R)` of an exception sequence: each `𝒩_r` is a
/// set of pairs `(n, t)` with `t ≥ 1`, `0 ≤ n < p^t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionSequence {
    pub p: u64,
    sets: Vec<BTreeSet<(u64, u32)>>,
}

impl ExceptionSequence {
    pub fn new(p: u64, sets: Vec<BTreeSet<(u64, u32)>>) -> Result<Self> {
        require_prime(p)?;
        for set in &sets {
            if let Some(&(n, t)) = set.iter().find(|&&(n, t)| t == 0 || n >= p.pow(t)) {
                return Err(Error::Parameter(format!("({n}, {t}) violates t ≥ 1 and n < p^t")));
            }
        }
        Ok(ExceptionSequence { p, sets })
    }

    /// `𝒩_r = ∅` for `r ≤ r_max`.
    pub fn empty(p: u64, r_max: usize) -> Result<Self> {
        ExceptionSequence::new(p, vec![BTreeSet::new(); r_max + 1])
    }

    pub fn get(&self, r: usize) -> Option<&BTreeSet<(u64, u32)>> {
        self.sets.get(r)
    }

    /// Largest `r` with a configured `𝒩_r`.
    pub fn r_max(&self) -> usize {
        self.sets.len().saturating_sub(1)
    }
}

/// `Ψ_𝒩(r, s)`: the `u ∈ {0, …, p^s − 1}` not of the form `j + p^{s−t}·n` with
/// `(n, t) ∈ 𝒩_{r+s−t+1}`, `t ≤ s`, `j < p^{s−t}`.
pub fn psi_set(ns: &ExceptionSequence, r: i64, s: u32) -> Result<BTreeSet<u64>> {
    if r < -1 {
        return Err(Error::Parameter("Ψ needs r ≥ −1".into()));
    }
    let p = ns.p;
    let mut excluded = BTreeSet::new();
    for t in 1..=s {
        let idx = r + i64::from(s) - i64::from(t) + 1;
        let set = ns
            .get(idx as usize)
            .ok_or_else(|| Error::Parameter(format!("𝒩_{idx} is outside the configured range 0..={}", ns.r_max())))?;
        let block = p.pow(s - t);
        for &(n, nt) in set.iter().filter(|&&(_, nt)| nt == t) {
            debug_assert_eq!(nt, t);
            excluded.extend((0..block).map(|j| j + block * n));
        }
    }
    Ok((0..p.pow(s)).filter(|u| !excluded.contains(u)).collect())
}

/// `Ω_b(p^ν, D)` for `d = p^ν·D`, together with the twist `t ↦ t^{(r)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueFrame {
    pub p: u64,
    pub nu: u32,
    pub big_d: u64,
    pub b: u64,
    pub omega_b: Vec<u64>,
}

impl ResidueFrame {
    /// Splits `d = p^ν·D`; `b` must lie in `1..=D` and be coprime to `D`.
    pub fn new(p: u64, d: u64, b: u64) -> Result<Self> {
        require_prime(p)?;
        if d == 0 {
            return Err(Error::Parameter("d must be positive".into()));
        }
        let (mut nu, mut big_d) = (0u32, d);
        while big_d % p == 0 {
            big_d /= p;
            nu += 1;
        }
        if b == 0 || b > big_d || b.gcd(&big_d) != 1 {
            return Err(Error::Parameter(format!("b = {b} must lie in 1..={big_d} and be coprime to it")));
        }
        let modulus = p.pow(nu) * big_d;
        let omega_b = (1..=modulus).filter(|t| t.gcd(&modulus) == 1 && t % big_d == b % big_d).collect();
        Ok(ResidueFrame { p, nu, big_d, b, omega_b })
    }

    pub fn for_pair(pair: &ParamPair, p: u64, b: u64) -> Result<Self> {
        ResidueFrame::new(p, pair.d(), b)
    }

    /// `p^ν·D`.
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.nu) * self.big_d
    }

    /// `t^{(r)}`: the element of `1..=p^ν·D` with `t^{(r)} ≡ t (mod p^ν)` and
    /// `p^r·t^{(r)} ≡ t (mod D)`.
    pub fn twist(&self, t: u64, r: u32) -> u64 {
        let pn = self.p.pow(self.nu);
        let inv = mod_inv(self.p % self.big_d, self.big_d).expect("p is a unit mod D");
        let mut mod_d = t % self.big_d;
        for _ in 0..r {
            mod_d = (mod_d as u128 * inv as u128 % self.big_d as u128) as u64;
        }
        let x = crt(t % pn, pn, mod_d, self.big_d).expect("p^ν and D are coprime");
        if x == 0 {
            self.modulus()
        } else {
            x
        }
    }
}

fn zp_entries(pair: &ParamPair, p: u64) -> Vec<Rational> {
    let pb = BigInt::from(p);
    pair.entries().filter(|x| !(x.denom() % &pb).is_zero()).cloned().collect()
}

/// `τ(r, ℓ)`: the least `𝔇_p^ℓ(underline(t^{(r)}γ))` over entries `γ ∈ Z_p`;
/// independent of `t ∈ Ω_b`. With no such entry the value 1 is used, which
/// makes every indicator `[{x} ≥ τ]` vanish.
pub fn tau(pair: &ParamPair, frame: &ResidueFrame, r: u32, ell: u32) -> Rational {
    let t = Rational::from_integer(BigInt::from(frame.twist(frame.omega_b[0], r)));
    zp_entries(pair, frame.p)
        .iter()
        .map(|x| dwork_iter(&frac_rep(&(&t * x)), frame.p, ell).expect("entry lies in Z_p"))
        .min()
        .unwrap_or_else(Rational::one)
}

/// `μ_r(m) = #{ℓ ≥ 1 : {m/p^ℓ} ≥ τ(r, ℓ)}`; terms vanish once `p^ℓ > m·D`.
pub fn mu(pair: &ParamPair, frame: &ResidueFrame, r: u32, m: u64) -> u32 {
    let limit = BigInt::from(m) * BigInt::from(frame.big_d);
    let mb = Rational::from_integer(BigInt::from(m));
    let mut pl = BigInt::from(frame.p);
    let mut ell = 1;
    let mut count = 0;
    while pl <= limit {
        if frac(&(&mb / &pl)) >= tau(pair, frame, r, ell) {
            count += 1;
        }
        pl *= frame.p;
        ell += 1;
    }
    count
}

/// `g_r(m) = p^{μ_r(m)}`.
pub fn g_weight(pair: &ParamPair, frame: &ResidueFrame, r: u32, m: u64) -> Rational {
    Rational::from_integer(BigInt::from(frame.p).pow(mu(pair, frame, r, m)))
}

/// `𝒩_r = ⋃_t {n < p^t : {n/p^ℓ} ≥ τ(r, ℓ) for all ℓ ≤ t} × {t}` for
/// `r ≤ r_max`, `t ≤ t_max`.
pub fn hypergeometric_exceptions(
    pair: &ParamPair,
    frame: &ResidueFrame,
    r_max: u32,
    t_max: u32,
) -> ExceptionSequence {
    let p = frame.p;
    let sets = (0..=r_max)
        .map(|r| {
            let taus: Vec<Rational> = (1..=t_max).map(|ell| tau(pair, frame, r, ell)).collect();
            let mut set = BTreeSet::new();
            for t in 1..=t_max {
                for n in 0..p.pow(t) {
                    let nb = Rational::from_integer(BigInt::from(n));
                    let ok = (1..=t).all(|ell| {
                        frac(&(&nb / Rational::from_integer(BigInt::from(p).pow(ell)))) >= taus[ell as usize - 1]
                    });
                    if ok {
                        set.insert((n, t));
                    }
                }
            }
            set
        })
        .collect();
    ExceptionSequence { p, sets }
}

/// `{u < p^s : {u/p^s} < τ(r+1, s)}`, the threshold form of `Ψ(r, s)`.
pub fn psi_by_threshold(pair: &ParamPair, frame: &ResidueFrame, r: i64, s: u32) -> BTreeSet<u64> {
    if s == 0 {
        return BTreeSet::from([0]);
    }
    let bound = tau(pair, frame, (r + 1) as u32, s);
    let ps = BigInt::from(frame.p).pow(s);
    (0..frame.p.pow(s)).filter(|&u| Rational::new(BigInt::from(u), ps.clone()) < bound).collect()
}

/// A family of sequences `A_r(n)`, `n ≥ 0`. Implementations are expected to
/// memoise: grid checks request the same terms many times.
pub trait SequenceProvider: Sync {
    fn term(&self, r: u32, n: u64) -> Rational;
}

/// Thread-safe memoisation around a closure `(r, n) ↦ A_r(n)`.
pub struct MemoSequence<F> {
    f: F,
    cache: RwLock<HashMap<(u32, u64), Rational>>,
}

impl<F: Fn(u32, u64) -> Rational + Sync> MemoSequence<F> {
    pub fn new(f: F) -> Self {
        MemoSequence { f, cache: RwLock::new(HashMap::new()) }
    }
}

impl<F: Fn(u32, u64) -> Rational + Sync + Send> SequenceProvider for MemoSequence<F> {
    fn term(&self, r: u32, n: u64) -> Rational {
        if let Some(v) = self.cache.read().expect("cache lock").get(&(r, n)) {
            return v.clone();
        }
        let v = (self.f)(r, n);
        self.cache.write().expect("cache lock").insert((r, n), v.clone());
        v
    }
}

/// `(5n)!/(n!)^5`-style factorial ratios as an `r`-independent provider.
pub fn factorial_ratio_sequence(ratio: FactorialRatio) -> MemoSequence<impl Fn(u32, u64) -> Rational + Sync + Send> {
    MemoSequence::new(move |_, n| ratio.term(n))
}

fn term_or_zero(a: &dyn SequenceProvider, r: u32, n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        a.term(r, n as u64)
    }
}

/// `S_r(a, K, s, p, m) = Σ_{j=mp^s}^{(m+1)p^s−1} [A_r(a+(K−j)p)·A_{r+1}(j) − A_{r+1}(K−j)·A_r(a+jp)]`,
/// with `A_r(n) = 0` for `n < 0`.
pub fn s_sum(a_seq: &dyn SequenceProvider, a: u64, k: i64, s: u32, p: u64, m: u64, r: u32) -> Rational {
    let (a, p) = (a as i64, p as i64);
    let lo = m as i64 * p.pow(s);
    let hi = (m as i64 + 1) * p.pow(s);
    let mut acc = Rational::zero();
    for j in lo..hi {
        let left = term_or_zero(a_seq, r, a + (k - j) * p);
        if !left.is_zero() {
            acc += left * a_seq.term(r + 1, j as u64);
        }
        let right = term_or_zero(a_seq, r + 1, k - j);
        if !right.is_zero() {
            acc -= right * a_seq.term(r, (a + j * p) as u64);
        }
    }
    acc
}

/// The finite grid `a < p`, `K ≤ k_max`, `s ≤ s_max`, `m ≤ m_max`, `r ≤ r_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceGrid {
    pub p: u64,
    pub k_max: u64,
    pub s_max: u32,
    pub m_max: u64,
    pub r_max: u32,
}

impl CongruenceGrid {
    fn points(&self) -> Vec<(u64, u64, u32, u64, u32)> {
        let mut out = Vec::new();
        for r in 0..=self.r_max {
            for s in 0..=self.s_max {
                for m in 0..=self.m_max {
                    for k in 0..=self.k_max {
                        for a in 0..self.p {
                            out.push((a, k, s, m, r));
                        }
                    }
                }
            }
        }
        out
    }
}

/// One grid point where `v_p(S_r) < s + 1 + v_p(g_{r+s+1}(m))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceFailure {
    pub a: u64,
    pub k: u64,
    pub s: u32,
    pub m: u64,
    pub r: u32,
    #[serde(serialize_with = "ser_rational")]
    pub sum: Rational,
    pub valuation: Valuation,
    pub required: i64,
}

/// Outcome of [`formal_congruence_check`]. At most 100 failures are listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub grid: CongruenceGrid,
    pub points: usize,
    pub failure_count: usize,
    pub failures: Vec<CongruenceFailure>,
    pub holds: bool,
    pub notes: Vec<String>,
}

/// Asserts `v_p(S_r(a,K,s,p,m)) ≥ s + 1 + v_p(g_{r+s+1}(m))` on every grid point.
pub fn formal_congruence_check(
    a_seq: &dyn SequenceProvider,
    g: &(dyn Fn(u32, u64) -> Rational + Sync),
    grid: &CongruenceGrid,
) -> Result<CongruenceReport> {
    require_prime(grid.p)?;
    let p = grid.p;
    let points = grid.points();
    let mut failures: Vec<CongruenceFailure> = points
        .par_iter()
        .filter_map(|&(a, k, s, m, r)| {
            let sum = s_sum(a_seq, a, k as i64, s, p, m, r);
            let gv = g(r + s + 1, m);
            assert!(!gv.is_zero(), "g must not vanish");
            let required = i64::from(s) + 1 + vp_unchecked(&gv, p).finite().expect("g is nonzero");
            let valuation = vp_unchecked(&sum, p);
            (!valuation.at_least(required)).then_some(CongruenceFailure { a, k, s, m, r, sum, valuation, required })
        })
        .collect();
    failures.sort_by_key(|f| (f.r, f.s, f.m, f.k, f.a));
    let failure_count = failures.len();
    failures.truncate(100);
    let mut notes = vec!["coefficients live in Q ⊂ Q_p, where 2 is never a zero divisor".to_string()];
    if p == 2 {
        notes.push("p = 2: the regularity of 2 required by the congruence theorem holds automatically".into());
    }
    Ok(CongruenceReport { grid: grid.clone(), points: points.len(), failure_count, failures, holds: failure_count == 0, notes })
}

/// Which algebra the coefficient functions `R_k` must belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraCase {
    /// `p ∤ d`: `Ω_b = {b}`, only `R_k(b) ∈ Z_p` is asserted.
    Point,
    /// `β ∈ Z^r`, `p | d`: `R_k ∈ p^e·𝒜_b` with `e = −1 − ⌊λ_p/(p−1)⌋`.
    Scaled,
    /// `𝒜_b`: congruences modulo `p^m`.
    Strict,
    /// `𝒜*_b`: congruences modulo `p^{m−1}`.
    Relaxed,
}

/// Congruence-in-`t` outcome at one depth `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthRow {
    pub m: u32,
    /// Pairs `t₁ ≠ t₂` in the sample with `t₁ ≡ t₂ (mod p^m)`.
    pub pairs: usize,
    /// Least `v_p(R_k(t₁) − R_k(t₂))` over those pairs and all `k`.
    pub min_valuation: Valuation,
    /// Holds modulo `p^{m + e}` (the `𝒜_b` depth, shifted by `e` in the scaled case).
    pub strict_holds: bool,
    /// Holds modulo `p^{m − 1 + e}` (the `𝒜*_b` depth).
    pub relaxed_holds: bool,
}

/// A coefficient or a pair of residues violating the required bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistedExpansionWitness {
    pub t: u64,
    pub other: Option<u64>,
    pub k: usize,
    pub valuation: Valuation,
    pub required: i64,
}

/// Outcome of [`twisted_expansion_verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistedExpansionReport {
    pub p: u64,
    pub frame: ResidueFrame,
    pub sampled: Vec<u64>,
    pub exhaustive: bool,
    #[serde(serialize_with = "ser_rational")]
    pub scale: Rational,
    pub order: usize,
    pub mod_depth: u32,
    pub case: AlgebraCase,
    /// Lower bound asserted for every `v_p(R_k(t))`.
    pub required_valuation: i64,
    pub min_valuation: Valuation,
    pub depths: Vec<DepthRow>,
    pub holds: bool,
    pub witness: Option<TwistedExpansionWitness>,
}

fn algebra_case(pair: &ParamPair, p: u64) -> (AlgebraCase, i64) {
    if !pair.d().is_multiple_of(p) {
        return (AlgebraCase::Point, 0);
    }
    if pair.beta_all_integers() {
        return (AlgebraCase::Scaled, -1 - lambda_floor(pair, p));
    }
    let lambda = lambda_p(pair, p).expect("p is prime");
    if lambda % (p as i64 - 1) != 0 || (p == 2 && m_count(pair) % 2 == 1) {
        (AlgebraCase::Strict, 0)
    } else {
        (AlgebraCase::Relaxed, 0)
    }
}

fn even_sample(all: &[u64]) -> Vec<u64> {
    if all.len() <= MAX_EXHAUSTIVE_FRAME {
        return all.to_vec();
    }
    let step = all.len().div_ceil(MAX_EXHAUSTIVE_FRAME);
    all.iter().step_by(step).copied().collect()
}

/// Desk-scale check of the twisted expansion: for `t` in `Ω_b` (all of it
/// when small, otherwise `samples` or an even sample), computes
/// `R_k(t) = (1/p)·[(G/F)_{⟨t^{(1)}α⟩,⟨t^{(1)}β⟩}(C'z^p) − p·(G/F)_{⟨tα⟩,⟨tβ⟩}(C'z)]_k`
/// for `k ≤ order` and asserts the valuation bound and the congruences in `t`
/// of the applicable algebra for depths `m ≤ mod_depth`.
pub fn twisted_expansion_verify(
    pair: &ParamPair,
    p: u64,
    b: u64,
    samples: Option<&[u64]>,
    order: usize,
    mod_depth: u32,
) -> Result<TwistedExpansionReport> {
    expansion_report(pair, p, b, samples, order, mod_depth, true)
}

/// [`twisted_expansion_verify`] with the H precondition optionally skipped, so the
/// numbers can still be inspected when the theorem does not apply.
pub(crate) fn expansion_report(
    pair: &ParamPair,
    p: u64,
    b: u64,
    samples: Option<&[u64]>,
    order: usize,
    mod_depth: u32,
    require_h: bool,
) -> Result<TwistedExpansionReport> {
    require_prime(p)?;
    if pair.r() != pair.s() {
        return Err(Error::Domain("the twisted expansion needs r = s".into()));
    }
    if !pair.reduced_disjoint() {
        return Err(Error::Domain("the twisted expansion needs disjoint reduced tuples".into()));
    }
    if require_h && !h_check(pair).holds {
        return Err(Error::Domain("the twisted expansion needs the window assertion H".into()));
    }
    let frame = ResidueFrame::for_pair(pair, p, b)?;
    let sampled = match samples {
        Some(ts) => {
            if let Some(t) = ts.iter().find(|t| !frame.omega_b.contains(t)) {
                return Err(Error::Parameter(format!("sample t = {t} is not in Ω_{b}")));
            }
            ts.to_vec()
        }
        None => even_sample(&frame.omega_b),
    };
    let exhaustive = sampled.len() == frame.omega_b.len();
    let scale = c_prime(pair)?;
    let (case, shift) = algebra_case(pair, p);
    let pr = Rational::from_integer(BigInt::from(p));
    let rows: Vec<(u64, Vec<Rational>)> = sampled
        .par_iter()
        .map(|&t| {
            let twisted = g_over_f(&pair.scaled_reduced(frame.twist(t, 1)), &scale, order).dilate(p as usize);
            let plain = g_over_f(&pair.scaled_reduced(t), &scale, order);
            let r = (&twisted - &plain.scale(&pr)).scale(&pr.recip());
            (t, r.into_coeffs())
        })
        .collect();

    let required_valuation = shift;
    let mut witness = None;
    let mut min_valuation = Valuation::Infinite;
    for (t, coeffs) in &rows {
        for (k, c) in coeffs.iter().enumerate() {
            let v = vp_unchecked(c, p);
            min_valuation = min_valuation.min(v);
            if witness.is_none() && !v.at_least(required_valuation) {
                witness = Some(TwistedExpansionWitness { t: *t, other: None, k, valuation: v, required: required_valuation });
            }
        }
    }

    let mut depths = Vec::new();
    for m in 1..=mod_depth {
        let pm = p.pow(m);
        let mut pairs = 0;
        let mut min_v = Valuation::Infinite;
        let mut first_bad: Option<(u64, u64, usize, Valuation)> = None;
        for (i, (t1, c1)) in rows.iter().enumerate() {
            for (t2, c2) in &rows[i + 1..] {
                if t1 % pm != t2 % pm {
                    continue;
                }
                pairs += 1;
                for (k, (x, y)) in c1.iter().zip(c2).enumerate() {
                    let v = vp_unchecked(&(x - y), p);
                    if v < min_v {
                        min_v = v;
                        first_bad = Some((*t1, *t2, k, v));
                    }
                }
            }
        }
        let strict_bound = i64::from(m) + shift;
        let relaxed_bound = strict_bound - 1;
        let row = DepthRow {
            m,
            pairs,
            min_valuation: min_v,
            strict_holds: min_v.at_least(strict_bound),
            relaxed_holds: min_v.at_least(relaxed_bound),
        };
        let required = match case {
            AlgebraCase::Relaxed => relaxed_bound,
            _ => strict_bound,
        };
        if witness.is_none() && !min_v.at_least(required) {
            let (t, other, k, valuation) = first_bad.expect("a finite minimum has a witness");
            witness = Some(TwistedExpansionWitness { t, other: Some(other), k, valuation, required });
        }
        depths.push(row);
    }
    Ok(TwistedExpansionReport {
        p,
        frame,
        sampled,
        exhaustive,
        scale,
        order,
        mod_depth,
        case,
        required_valuation,
        min_valuation,
        depths,
        holds: witness.is_none(),
        witness,
    })
}

/// Three-valued outcome of the full criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionVerdict {
    /// (i) ⟺ (ii) ⟺ (iii) hold.
    Holds,
    /// The criterion applies and fails.
    Fails,
    /// `F` is not N-integral, so the criterion does not apply.
    NotApplicable,
}

/// Every verdict of [`criterion_full`], each tied to its truncation order.
#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    pub n_integral: bool,
    pub r_equals_s: bool,
    pub h_holds: bool,
    /// Residues `a` with `q ≠ q_{⟨aα⟩,⟨aβ⟩}` on the first `r²` coefficients.
    pub q_identity_failures: Vec<u64>,
    /// Whether the `r²` verdicts agree with a `3r²`-coefficient recheck.
    pub q_identity_crosscheck: bool,
    pub criterion: CriterionVerdict,
    /// `q(C'z)/(C'z)` scanned to `order` (present when `F` is N-integral).
    pub q_integral: Option<IntegralityVerdict>,
    /// `exp(S(C'z)/𝔫)` scanned to `order` (when `r = s` and H holds).
    pub exp_s_root_integral: Option<IntegralityVerdict>,
    /// Positivity of the `q_{⟨aα⟩,⟨aβ⟩}` coefficients, to `positivity_order`.
    pub q_positive: Option<bool>,
    pub positivity_order: usize,
    /// Algebraicity (interlacing) when its preconditions hold.
    pub interlacing: Option<bool>,
    /// Holds when `α = (1/2), β = (1)` or `s ≥ 2` with two 1's in `⟨β⟩`.
    pub structure_ok: bool,
    /// The log-solution (and q) are genuine only with two 1's in β.
    pub two_ones_in_beta: bool,
}

/// Machine-readable result of [`criterion_full`].
#[derive(Debug, Clone, Serialize)]
pub struct CertReport {
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub order: usize,
    pub verdicts: Verdicts,
    pub constants: Option<ConstantSheet>,
    pub ni_witness: Option<NiVerdict>,
    pub h_witness: Option<HVerdict>,
    /// Leading coefficients of `q(C'z)/(C'z)`.
    pub q_prefix: Vec<String>,
    pub elapsed_ms: u128,
}

fn count_ones(v: &[Rational]) -> usize {
    v.iter().filter(|x| x.is_one()).count()
}

/// Runs the q-coordinate criterion: N-integrality, `r = s`, H, the identities
/// `q = q_{⟨aα⟩,⟨aβ⟩}` (via `F·G_a = F_a·G` on `r²` coefficients), all
/// constants, and truncation-order confirmations of the integrality claims.
pub fn criterion_full(pair: &ParamPair, order: usize) -> Result<CertReport> {
    let start = Instant::now();
    if !pair.reduced_disjoint() {
        return Err(Error::Domain("⟨α⟩ and ⟨β⟩ share a value: the operator is reducible".into()));
    }
    let ni = christol_ni_check(pair);
    let r_equals_s = pair.r() == pair.s();
    let h = h_check(pair);
    let r2 = pair.r() * pair.r();
    let units = pair.units();
    let failing = |n: usize| -> Vec<u64> { units.iter().copied().filter(|&a| !q_identity_check(pair, a, n)).collect() };
    let q_identity_failures = failing(r2.max(1));
    let q_identity_crosscheck = failing(3 * r2.max(1)) == q_identity_failures;
    let criterion = if !ni.n_integral {
        CriterionVerdict::NotApplicable
    } else if r_equals_s && h.holds && q_identity_failures.is_empty() {
        CriterionVerdict::Holds
    } else {
        CriterionVerdict::Fails
    };

    let reduced_beta: Vec<Rational> = pair.beta().iter().map(frac_rep).collect();
    let two_ones_in_beta = count_ones(&reduced_beta) >= 2;
    let half_case = pair.r() == 1
        && pair.s() == 1
        && pair.alpha()[0] == Rational::new(BigInt::one(), BigInt::from(2))
        && pair.beta()[0].is_one();
    let structure_ok = half_case || (pair.s() >= 2 && two_ones_in_beta);

    let (constants, q_integral, exp_s_root_integral, q_positive, q_prefix) = if ni.n_integral {
        let sheet = constant_sheet(pair)?;
        let unit = q_coordinate(pair, &sheet.c_prime, order);
        let q_prefix = unit.coeffs().iter().take(8).map(fmt_rational).collect();
        let q_int = integrality_scan(&unit, None)?;
        let exp_s = match frak_n(pair) {
            Ok(n) => Some(integrality_scan(&exp_s_root(pair, &sheet.c_prime, order, n)?, None)?),
            Err(_) => None,
        };
        let positive = positivity_scan(pair, order.min(50)).all_positive;
        (Some(sheet), Some(q_int), exp_s, Some(positive), q_prefix)
    } else {
        (None, None, None, None, Vec::new())
    };

    let interlacing = interlacing_check(pair).ok();
    let verdicts = Verdicts {
        n_integral: ni.n_integral,
        r_equals_s,
        h_holds: h.holds,
        q_identity_failures,
        q_identity_crosscheck,
        criterion,
        q_integral,
        exp_s_root_integral,
        q_positive,
        positivity_order: order.min(50),
        interlacing,
        structure_ok,
        two_ones_in_beta,
    };
    Ok(CertReport {
        alpha: pair.alpha().iter().map(fmt_rational).collect(),
        beta: pair.beta().iter().map(fmt_rational).collect(),
        order,
        verdicts,
        constants,
        ni_witness: (!ni.n_integral).then_some(ni),
        h_witness: (!h.holds).then_some(h),
        q_prefix,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Landau's criterion and the general criterion on a factorial ratio.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LandauComparison {
    pub e: Vec<u64>,
    pub f: Vec<u64>,
    pub landau: bool,
    pub criterion: CriterionVerdict,
    pub agree: bool,
}

/// Compares `Σe = Σf ∧ Δ_{e,f} ≥ 1 on [1/M, 1)` with [`criterion_full`] on the
/// associated (cancelled) parameter pair.
pub fn landau_cross_check(ratio: &FactorialRatio, order: usize) -> Result<LandauComparison> {
    let landau = ratio.landau_criterion();
    let criterion = criterion_full(&ratio.pair(), order)?.verdicts.criterion;
    Ok(LandauComparison {
        e: ratio.e.clone(),
        f: ratio.f.clone(),
        landau,
        criterion,
        agree: landau == (criterion == CriterionVerdict::Holds),
    })
}
