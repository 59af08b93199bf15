use num_bigint::BigUint;
use num_rational::BigRational;

use pentagons::bounds::{c5_ratio, conjecture_limit, conjectured_ratio, folklore_lower_bound, known_values};

#[test]
fn table_ratios_never_decrease() {
    let table = known_values();
    let ratios: Vec<BigRational> = table
        .iter()
        .map(|(&n, &mu)| c5_ratio(n, &BigUint::from(mu)).unwrap())
        .collect();
    assert!(ratios.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn consecutive_table_entries_are_consistent() {
    let table = known_values();
    for (&n, &mu) in table.range(6..) {
        let prev = BigUint::from(table[&(n - 1)]);
        let bound = folklore_lower_bound(5, n - 1, &prev, n).unwrap();
        assert!(bound <= BigUint::from(mu), "n = {n}");
        if n >= 12 && n % 2 == 0 {
            assert_eq!(bound, BigUint::from(mu), "odd-to-even step at n = {n}");
        }
    }
}

#[test]
fn conjectured_ratios_approach_the_limit() {
    // The ratios approach 1/16 from below.
    let limit = conjecture_limit();
    let gap = |n| &limit - conjectured_ratio(n).unwrap();
    let small = |d: i64| BigRational::new(1.into(), d.into());
    let (g3, g4) = (gap(1000), gap(10_000));
    assert!(g3 > BigRational::from_integer(0.into()) && g3 < small(1000));
    assert!(g4 > BigRational::from_integer(0.into()) && g4 < small(10_000));
    assert!(g4 < g3);
}
