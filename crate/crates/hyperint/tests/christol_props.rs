mod common;

use std::cmp::Ordering;

use common::*;
use hyperint::christol::{christol_ni_check, frac_rep, h_check, order_cmp, order_le, xi};
use hyperint::exact::int;
use proptest::prelude::*;

proptest! {
    #[test]
    fn order_is_total(x in parameter(12), y in parameter(12), z in parameter(12)) {
        prop_assert!(order_le(&x, &y) || order_le(&y, &x));
        if order_le(&x, &y) && order_le(&y, &x) {
            prop_assert_eq!(&x, &y);
        }
        if order_le(&x, &y) && order_le(&y, &z) {
            prop_assert!(order_le(&x, &z));
        }
        prop_assert_eq!(order_cmp(&x, &y), order_cmp(&y, &x).reverse());
    }

    #[test]
    fn reduction_keeps_d_and_integrality(p in any_pair(4, 12), pick in 0usize..64) {
        let units = p.units();
        let a = units[pick % units.len()];
        prop_assert_eq!(p.scaled_reduced(a).d(), p.d());
        if christol_ni_check(&p).n_integral {
            prop_assert!(christol_ni_check(&p.reduced()).n_integral);
        }
    }

    #[test]
    fn xi_is_constant_between_keys(p in any_pair(4, 10), pick in 0usize..64, shift in -3i64..3) {
        let units = p.units();
        let a = units[pick % units.len()];
        let scale = int(a as i64);
        let mut keys: Vec<_> = p.entries().map(|g| &scale * g).collect();
        keys.sort_by(order_cmp);
        for pair in keys.windows(2) {
            let (lo, hi) = (frac_rep(&pair[0]), frac_rep(&pair[1]));
            if lo == hi {
                continue;
            }
            let mid = (&lo + &hi) / int(2) + int(shift);
            prop_assert_eq!(xi(&p, a, &mid).unwrap(), xi(&p, a, &pair[0]).unwrap());
        }
    }
}

#[test]
fn h_transfers_to_every_twist() {
    for p in reference_pairs() {
        if h_check(&p).holds {
            for a in p.units() {
                assert!(h_check(&p.scaled_reduced(a)).holds, "{} a={a}", p.describe());
            }
        }
    }
}

#[test]
fn reference_order_chains() {
    let chain = |xs: &[(i64, i64)]| {
        xs.windows(2)
            .all(|w| order_cmp(&hyperint::exact::rat(w[0].0, w[0].1), &hyperint::exact::rat(w[1].0, w[1].1)) == Ordering::Less)
    };
    assert!(chain(&[(1, 6), (1, 3), (1, 2), (2, 3), (1, 1)]));
    assert!(chain(&[(10, 3), (5, 2), (5, 3), (5, 6), (5, 1)]));
}
