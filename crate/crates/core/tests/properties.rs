//! Exhaustive and randomized invariants across modules. Expected counts were
//! computed by an independent brute-force script (pairwise closure over all
//! families; all-pairs axiom checks over every candidate table).

use std::collections::BTreeSet;

use proptest::prelude::*;
use reflexpoly::classify::{
    analyze_sweep, default_cap, facet_prediction_holds, group_by_family, lattice_points_agree,
    sweep_rank_functions, theorem_a_findings,
};
use reflexpoly::polymatroid::{
    bases, facet_family, is_closed, is_discrete_polymatroid, points_of_rank, rank_from_sublattice,
    rank_of_points, transversal_points, transversal_rank, PointSet, Presentation, RankFunction,
};
use reflexpoly::polytope::{
    contains, dimension, dual_vertices, independence_hrep, interior_lattice_points, irredundant,
    is_reflexive_direct, vertices,
};
use reflexpoly::rational::RationalVector;
use reflexpoly::setfam::{
    enumerate_sublattices, full_mask, is_sublattice, lattice_closure, SetFamily, Subset,
};

/// Brute-force sublattice test on explicit element sets.
fn naive_sublattice(d: usize, family: &[BTreeSet<usize>]) -> bool {
    let full: BTreeSet<usize> = (1..=d).collect();
    let has = |s: &BTreeSet<usize>| family.iter().any(|t| t == s);
    has(&BTreeSet::new())
        && has(&full)
        && family.iter().all(|a| {
            family.iter().all(|b| {
                has(&a.union(b).cloned().collect()) && has(&a.intersection(b).cloned().collect())
            })
        })
}

#[test]
fn sublattice_counts_match_naive_oracle() {
    for (d, expected) in [(1, 1), (2, 4), (3, 29), (4, 355)] {
        let got = enumerate_sublattices(d).unwrap();
        assert_eq!(got.len(), expected, "d = {d}");
        let unique: BTreeSet<Vec<u32>> = got.iter().map(SetFamily::masks).collect();
        assert_eq!(unique.len(), got.len());
        assert!(got.windows(2).all(|w| w[0] < w[1]));
        for f in &got {
            assert!(is_sublattice(f));
            let sets: Vec<BTreeSet<usize>> = f
                .iter()
                .map(|s| s.elements().into_iter().collect())
                .collect();
            assert!(naive_sublattice(d, &sets));
        }
        let trivial = SetFamily::from_masks(d, [0, full_mask(d)]).unwrap();
        let boolean = SetFamily::from_masks(d, 0..=full_mask(d)).unwrap();
        assert!(got.contains(&trivial) && got.contains(&boolean));
    }
    let chain = SetFamily::from_element_lists(3, &[&[][..], &[3], &[2, 3], &[1, 2, 3]]).unwrap();
    assert!(enumerate_sublattices(3).unwrap().contains(&chain));
}

#[test]
fn naive_oracle_agrees_on_all_d3_families() {
    let d = 3;
    let mut count = 0;
    for code in 0u32..(1 << 8) {
        let masks: Vec<u32> = (0..8).filter(|m| code >> m & 1 == 1).collect();
        let family = SetFamily::from_masks(d, masks).unwrap();
        let sets: Vec<BTreeSet<usize>> = family
            .iter()
            .map(|s| s.elements().into_iter().collect())
            .collect();
        assert_eq!(
            is_sublattice(&family),
            naive_sublattice(d, &sets),
            "{family}"
        );
        count += usize::from(is_sublattice(&family));
    }
    assert_eq!(count, 29);
}

fn family_strategy() -> impl Strategy<Value = SetFamily> {
    (1usize..=4).prop_flat_map(|d| {
        proptest::collection::vec(0..=full_mask(d), 0..6)
            .prop_map(move |masks| SetFamily::from_masks(d, masks).unwrap())
    })
}

proptest! {
    #[test]
    fn closure_is_an_extensive_idempotent_sublattice(f in family_strategy()) {
        let c = lattice_closure(&f);
        prop_assert!(is_sublattice(&c));
        prop_assert!(f.iter().all(|s| c.contains(s)));
        prop_assert_eq!(lattice_closure(&c), c.clone());
        // monotone: adding a member cannot shrink the closure
        let bigger = SetFamily::from_masks(f.d(), f.masks().into_iter().chain([1])).unwrap();
        let cb = lattice_closure(&bigger);
        prop_assert!(c.iter().all(|s| cb.contains(s)));
    }

    #[test]
    fn validate_matches_all_pairs_oracle(d in 1usize..=3, seed in proptest::collection::vec(0u64..5, 8)) {
        let n = 1usize << d;
        let mut values = seed[..n].to_vec();
        values[0] = 0;
        let r = RankFunction::new(d, values.clone()).unwrap();
        let mut ok = true;
        for x in 0..n {
            for y in 0..n {
                if x & y == x && values[x] > values[y] { ok = false; }
                if values[x] + values[y] < values[x | y] + values[x & y] { ok = false; }
            }
        }
        prop_assert_eq!(r.validate().is_valid(), ok);
    }

    #[test]
    fn transversal_points_round_trip(
        d in 1usize..=3,
        raw in proptest::collection::vec(1u32..8, 0..5),
    ) {
        let blocks: Vec<Subset> = raw
            .iter()
            .map(|m| Subset::new(d, m & full_mask(d)))
            .filter_map(Result::ok)
            .filter(|s| !s.is_empty())
            .collect();
        let p = Presentation::new(d, blocks).unwrap();
        let points = transversal_points(&p);
        prop_assert!(is_discrete_polymatroid(&points).is_ok());
        let rank = rank_of_points(&points).unwrap();
        prop_assert_eq!(&rank, &transversal_rank(&p));
        // round trip B
        prop_assert_eq!(points_of_rank(&rank).unwrap(), points);
    }
}

#[test]
fn sweep_counts_match_oracle() {
    for (d, expected) in [(1, 2), (2, 26), (3, 1723)] {
        let sweep = sweep_rank_functions(d, default_cap(d)).unwrap();
        assert_eq!(sweep.len(), expected, "d = {d}");
        assert!(sweep.windows(2).all(|w| w[0].values() < w[1].values()));
        for r in &sweep {
            let check = r.validate();
            assert!(check.is_valid() && check.loopless, "{r}");
            assert!(r.values().iter().all(|&v| v <= default_cap(d)));
        }
    }
}

#[test]
fn sweep_is_complete_against_candidate_filter_d2() {
    let mut expected = Vec::new();
    for a in 0..=4u64 {
        for b in 0..=4 {
            for c in 0..=4 {
                let r = RankFunction::new(2, vec![0, a, b, c]).unwrap();
                let check = r.validate();
                if check.is_valid() && check.loopless {
                    expected.push(r);
                }
            }
        }
    }
    assert_eq!(sweep_rank_functions(2, 4).unwrap(), expected);
}

#[test]
fn reflexive_counts_and_theorem_a_findings() {
    for (d, reflexive, negatives) in [(1, 1, 0), (2, 5, 1), (3, 58, 29)] {
        let entries = analyze_sweep(d, default_cap(d)).unwrap();
        assert_eq!(
            entries.iter().filter(|e| e.reflexive_direct).count(),
            reflexive
        );
        let findings = theorem_a_findings(&entries);
        assert_eq!(
            findings
                .iter()
                .filter(|f| !f.family_is_sublattice_with_empty)
                .count(),
            negatives
        );
    }
}

#[test]
fn larger_cap_finds_no_new_reflexive_functions_d2() {
    let at = |cap| -> BTreeSet<RankFunction> {
        analyze_sweep(2, cap)
            .unwrap()
            .into_iter()
            .filter(|e| e.reflexive_direct)
            .map(|e| e.rank)
            .collect()
    };
    assert_eq!(at(4), at(6));
    assert_eq!(group_by_family(&analyze_sweep(2, 6).unwrap()).len(), 5);
}

fn swept(dmax: usize) -> Vec<RankFunction> {
    (1..=dmax)
        .flat_map(|d| sweep_rank_functions(d, default_cap(d)).unwrap())
        .collect()
}

#[test]
fn closedness_matches_superset_definition() {
    for r in swept(3) {
        let d = r.d();
        let full = full_mask(d);
        for x in 0..=full {
            let by_supersets = (0..=full)
                .filter(|&y| y != x && y & x == x)
                .all(|y| r.value(y) > r.value(x));
            assert_eq!(
                is_closed(&r, &Subset::new(d, x).unwrap()),
                by_supersets,
                "{r} {x}"
            );
        }
    }
}

#[test]
fn rank_point_round_trips_and_axioms() {
    for r in swept(3) {
        let points = points_of_rank(&r).unwrap();
        assert_eq!(rank_of_points(&points).unwrap(), r);
        assert_eq!(bases(&points).moduli.len(), 1, "{r}");
    }
    // axiom check is quadratic in the point count; exhaustive through d = 2
    for r in swept(2) {
        assert!(
            is_discrete_polymatroid(&points_of_rank(&r).unwrap()).is_ok(),
            "{r}"
        );
    }
    for l in enumerate_sublattices(3).unwrap() {
        let r = rank_from_sublattice(&l).unwrap();
        assert!(
            is_discrete_polymatroid(&points_of_rank(&r).unwrap()).is_ok(),
            "{r}"
        );
    }
}

#[test]
fn geometry_matches_rank_criteria() {
    for r in swept(3) {
        let d = r.d();
        assert!(lattice_points_agree(&r).unwrap(), "{r}");
        assert!(facet_prediction_holds(&r).unwrap(), "{r}");

        let h = independence_hrep(&r, false).unwrap();
        assert_eq!(dimension(&h).unwrap(), Some(d));
        assert!(vertices(&h)
            .unwrap()
            .iter()
            .all(RationalVector::is_integral));
        assert_eq!(
            vertices(&h).unwrap(),
            vertices(&independence_hrep(&r, true).unwrap()).unwrap()
        );

        // every coordinate hyperplane is a facet for loopless ρ
        let facets = irredundant(&h).unwrap();
        let nonneg = facets.ineqs().iter().filter(|q| q.b == 0).count();
        assert_eq!(nonneg, d, "{r}");

        // union cover
        let family = facet_family(&r).unwrap();
        let cover = family.iter().fold(0u32, |m, s| m | s.mask());
        assert_eq!(cover, full_mask(d));
    }
}

#[test]
fn lattice_points_agree_sampled_d4() {
    // sublattice ranks plus a few non-reflexive tables
    let mut ranks: Vec<RankFunction> = enumerate_sublattices(4)
        .unwrap()
        .iter()
        .step_by(7)
        .map(|l| rank_from_sublattice(l).unwrap())
        .collect();
    ranks.push(RankFunction::from_fn(4, |m| u64::from(m.count_ones())).unwrap());
    ranks.push(RankFunction::from_fn(4, |m| u64::from(m.count_ones().min(2))).unwrap());
    for r in ranks {
        assert!(lattice_points_agree(&r).unwrap(), "{r}");
    }
}

#[test]
fn dual_integrality_matches_direct_verdict() {
    let mut reflexive = 0;
    for r in swept(3) {
        let h = independence_hrep(&r, false).unwrap();
        let report = is_reflexive_direct(&h).unwrap();
        // the dual is a lattice polytope exactly around the reported center
        for c in interior_lattice_points(&h).unwrap() {
            let integral = dual_vertices(&h, &c)
                .unwrap()
                .iter()
                .all(RationalVector::is_integral);
            assert_eq!(integral, report.center.as_ref() == Some(&c), "{r} at {c:?}");
        }
        if report.reflexive {
            reflexive += 1;
            let ones = vec![1i64; r.d()];
            assert_eq!(report.center.as_ref(), Some(&ones));
            assert!(contains(&h, &RationalVector::from_ints(&ones), true).unwrap());
        }
    }
    assert_eq!(reflexive, 1 + 5 + 58);
}

#[test]
fn theorem_b_round_trip_and_witness_law_d4() {
    for l in enumerate_sublattices(4).unwrap() {
        let r = rank_from_sublattice(&l).unwrap();
        let family = facet_family(&r).unwrap();
        assert_eq!(family, l.without_empty());
        for x in 1..=full_mask(4) {
            if !family.contains_mask(x) {
                assert!(r.value(x) > u64::from(x.count_ones()) + 1);
            }
        }
    }
}

#[test]
fn point_set_helpers() {
    let p = PointSet::new(2, vec![vec![1, 0], vec![0, 0], vec![1, 0]]).unwrap();
    assert_eq!(p.len(), 2);
    assert!(PointSet::new(2, vec![vec![1]]).is_err());
}
