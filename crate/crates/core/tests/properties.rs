use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use pentagons::combin::{binomial, for_each_tuple, num_triples};
use pentagons::constructions::conjectured_mu5;
use pentagons::encoder::{
    encode_maxsat, encode_sat, make_cubes, parse_wcnf, wcnf_bytes, SoftClause, VarMap, WcnfFormula, WcnfStyle,
};
use pentagons::geom::{count_convex_kgons, is_general_position, orientation, signotope_of, Orientation, Point, PointSet};
use pentagons::maxsat_bb::solve_exact;
use pentagons::signotope::{check_axioms, convex_case, count_convex_cases, count_convex_pentagons, SignotopeAssignment};

fn rational() -> impl Strategy<Value = BigRational> {
    (-60i64..60, 1i64..6).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

fn point() -> impl Strategy<Value = Point> {
    (rational(), rational()).prop_map(|(x, y)| Point::new(x, y))
}

/// Rational point sets in general position with distinct x-coordinates.
fn point_set(min: usize, max: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(point(), min..=max)
        .prop_filter_map("needs distinct x and general position", |pts| {
            PointSet::from_unsorted(pts).ok().filter(is_general_position)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn geometric_and_signotope_counts_agree(ps in point_set(5, 10)) {
        let sig = signotope_of(&ps).unwrap();
        prop_assert!(check_axioms(&sig).is_empty());
        let geometric = count_convex_kgons(&ps, 5).unwrap();
        prop_assert_eq!(count_convex_pentagons(&sig).unwrap(), geometric);
        let clauses = encode_sat(ps.len(), false).unwrap();
        prop_assert_eq!(clauses.count_falsified(sig.values()) as u64, geometric);
    }

    #[test]
    fn soft_cost_counts_convex_pentagons(ps in point_set(5, 8)) {
        let n = ps.len();
        let sig = signotope_of(&ps).unwrap();
        let f = encode_maxsat(n, false).unwrap();
        let vm = VarMap::new(n, true);
        let mut assignment = sig.values().to_vec();
        assignment.resize(vm.num_vars(), false);
        let mut convex = Vec::new();
        for_each_tuple::<5>(n, |&t| {
            if convex_case(&sig, t).is_some() {
                convex.push(t);
                assignment[vm.relax(t) as usize - 1] = true;
            }
        });
        prop_assert_eq!(f.cost(&assignment), Some(convex.len() as u64));
        // Each relaxation of a convex 5-tuple is forced.
        if let Some(&t) = convex.first() {
            assignment[vm.relax(t) as usize - 1] = false;
            prop_assert_eq!(f.cost(&assignment), None);
        }
    }

    #[test]
    fn orientation_symmetries(a in point(), b in point(), c in point(), num in 1i64..20, den in 1i64..20) {
        let o = orientation(&a, &b, &c);
        prop_assert_eq!(orientation(&b, &a, &c), o.reversed());
        prop_assert_eq!(orientation(&a, &c, &b), o.reversed());
        prop_assert_eq!(orientation(&b, &c, &a), o);
        let s = BigRational::new(BigInt::from(num), BigInt::from(den));
        let scale = |p: &Point| Point::new(&p.x * &s, &p.y * &s);
        prop_assert_eq!(orientation(&scale(&a), &scale(&b), &scale(&c)), o);
        let shift = |p: &Point| Point::new(&p.x + &s, &p.y - &s);
        prop_assert_eq!(orientation(&shift(&a), &shift(&b), &shift(&c)), o);
        let mirror = |p: &Point| Point::new(-p.x.clone(), p.y.clone());
        prop_assert_eq!(orientation(&mirror(&a), &mirror(&b), &mirror(&c)), o.reversed());
        prop_assert_eq!(orientation(&a, &a, &c), Orientation::Collinear);
    }

    #[test]
    fn point_set_json_round_trip(ps in point_set(1, 10)) {
        let back = PointSet::from_json(&ps.to_json()).unwrap();
        prop_assert_eq!(back, ps);
    }

    #[test]
    fn signotope_text_round_trip(n in 3usize..9, bits in prop::collection::vec(any::<bool>(), 84)) {
        let values = bits[..num_triples(n)].to_vec();
        let a = SignotopeAssignment::from_values(n, values).unwrap();
        prop_assert_eq!(SignotopeAssignment::from_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn every_assignment_lies_in_exactly_one_cube(bits in prop::collection::vec(any::<bool>(), 84)) {
        let cubes = make_cubes(9).unwrap();
        let inside = cubes
            .iter()
            .filter(|c| c.literals.iter().all(|&l| bits[l.unsigned_abs() as usize - 1] == (l > 0)))
            .count();
        prop_assert_eq!(inside, 1);
    }
}

fn small_wcnf() -> impl Strategy<Value = WcnfFormula> {
    let lit = (1i32..=6, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
    let hard = prop::collection::vec(prop::collection::vec(lit.clone(), 1..4), 0..8);
    let soft = prop::collection::vec((1u64..5, prop::collection::vec(lit, 1..3)), 1..8);
    (hard, soft).prop_map(|(hard, soft)| {
        let soft: Vec<SoftClause> = soft.into_iter().map(|(weight, lits)| SoftClause { weight, lits }).collect();
        let top = soft.iter().map(|s| s.weight).sum::<u64>() + 1;
        WcnfFormula { num_vars: 6, hard, soft, top }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_solver_matches_enumeration(f in small_wcnf()) {
        let brute = (0u32..64)
            .filter_map(|bits| f.cost(&(0..6).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>()))
            .min();
        match solve_exact(&f, None) {
            Ok(s) => {
                prop_assert_eq!(Some(s.optimum), brute);
                let a: Vec<bool> = s.model.iter().map(|&l| l > 0).collect();
                prop_assert_eq!(f.cost(&a), Some(s.optimum));
                // A valid hint never changes the answer.
                prop_assert_eq!(solve_exact(&f, Some(s.optimum)).unwrap().optimum, s.optimum);
                prop_assert_eq!(solve_exact(&f, Some(s.optimum + 3)).unwrap().optimum, s.optimum);
            }
            Err(_) => prop_assert_eq!(brute, None),
        }
    }
}

#[test]
fn five_point_case_clause_duality() {
    let t = [1, 2, 3, 4, 5];
    let f = encode_sat(5, false).unwrap();
    let mut consistent = 0;
    for bits in 0u32..1 << 10 {
        let values: Vec<bool> = (0..10).map(|i| bits >> i & 1 == 1).collect();
        let a = SignotopeAssignment::from_values(5, values.clone()).unwrap();
        // Some convexity clause fails exactly when some case holds; without
        // the axioms several cases may hold at once.
        let falsified = f.count_falsified(&values) as u64;
        assert_eq!(falsified > 0, count_convex_cases(&a) == 1);
        if check_axioms(&a).is_empty() {
            assert!(falsified <= 1);
            consistent += 1;
            assert_eq!(count_convex_pentagons(&a).unwrap(), falsified);
            assert_eq!(convex_case(&a, t).is_some(), falsified == 1);
        }
    }
    // Rank-3 signotopes on five elements.
    assert_eq!(consistent, 62);
}

#[test]
fn four_element_signotopes_are_monotone_sequences() {
    let consistent = (0u32..16)
        .filter(|bits| {
            let a = SignotopeAssignment::from_values(4, (0..4).map(|i| bits >> i & 1 == 1).collect()).unwrap();
            check_axioms(&a).is_empty()
        })
        .count();
    assert_eq!(consistent, 8);
}

#[test]
fn wcnf_round_trips() {
    for n in 5..=9 {
        for symmetry in [false, true] {
            let f = encode_maxsat(n, symmetry).unwrap();
            for style in [WcnfStyle::Classic, WcnfStyle::Modern] {
                let back = parse_wcnf(&wcnf_bytes(&f, style)[..]).unwrap();
                assert_eq!(back.hard, f.hard);
                assert_eq!(back.soft, f.soft);
                assert_eq!(back.num_vars, f.num_vars);
            }
        }
    }
}

#[test]
fn conjectured_value_identities() {
    for n in 0..300u64 {
        assert_eq!(conjectured_mu5(2 * n), 2 * binomial(n, 5));
        if n >= 1 {
            assert_eq!(conjectured_mu5(2 * n - 1), binomial(n, 5) + binomial(n - 1, 5));
        }
    }
}
