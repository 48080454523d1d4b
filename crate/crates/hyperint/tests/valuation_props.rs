mod common;

use std::collections::BTreeSet;

use common::*;
use hyperint::christol::{order_le, xi_profile};
use hyperint::exact::{dwork_iter, int, is_prime, mod_inv, pow_mod};
use hyperint::valuation::{vp_ratio_formula, vp_ratio_oracle, DeltaFunction};
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn formula_matches_oracle(
        (p, pr, n) in prime().prop_flat_map(|p| (Just(p), zp_pair(p as i64, 4, 12), 0u64..300))
    ) {
        prop_assert_eq!(vp_ratio_formula(&pr, p, n).unwrap(), vp_ratio_oracle(&pr, p, n).unwrap(), "{}", pr.describe());
    }

    /// With `p^ℓ·a ≡ 1 (mod d)`, scaling by `a` orders entries of `(0, 1]`
    /// exactly as the ℓ-th Dwork iterate does.
    #[test]
    fn dwork_iterates_follow_the_twisted_order(x in unit_parameter(30), y in unit_parameter(30), p in prime(), ell in 1u32..4) {
        let d = x.denom().lcm(y.denom()).to_u64().unwrap();
        prop_assume!(d % p != 0);
        let a = mod_inv(pow_mod(p, ell as u64, d), d).unwrap_or(1).max(1);
        let (ax, ay) = (int(a as i64) * &x, int(a as i64) * &y);
        let (dx, dy) = (dwork_iter(&x, p, ell).unwrap(), dwork_iter(&y, p, ell).unwrap());
        prop_assert_eq!(order_le(&ax, &ay), dx <= dy);
    }
}

/// The values of `Δ^{p,ℓ}` on `[0, 1]` are the values of `ξ(a, ·)` on `R`
/// when `p^ℓ·a ≡ 1 (mod d)`.
#[test]
fn delta_values_are_xi_values() {
    for pr in reference_pairs().into_iter().filter(|p| p.entries_in_unit_interval()) {
        let d = pr.d();
        for p in (2u64..40).filter(|&p| is_prime(p) && d % p != 0) {
            for ell in 1..=2u32 {
                let a = if d == 1 { 1 } else { mod_inv(pow_mod(p, ell as u64, d), d).unwrap() };
                let delta = DeltaFunction::new(&pr, p, ell).unwrap().value_set();
                let xi: BTreeSet<i64> = xi_profile(&pr, a).unwrap().range().into_iter().collect();
                assert_eq!(delta, xi, "{} p={p} ℓ={ell}", pr.describe());
            }
        }
    }
}
