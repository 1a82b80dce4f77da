//! Acceptance suite: nine end-to-end criteria, one PASS/FAIL line each.
//!
//! Runs with a custom main (`harness = false`) so that every criterion is
//! reported even when an earlier one fails. Exits nonzero on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use reflexpoly::audit::check_oracles;
use reflexpoly::classify::{
    analyze_sweep, chain_presentation, chain_sublattice, check_uniqueness, classify_sublattices,
    default_cap, find_transversal, group_by_family, is_reflexive_lemma, lemma_disagreements,
    theorem_a_report, verify_example_a, verify_example_b,
};
use reflexpoly::polymatroid::{
    bases, facet_family, points_of_rank, rank_from_sublattice, transversal_rank, PointSet,
    PolymatroidCheck, RankFunction,
};
use reflexpoly::polytope::{
    dual_vertices, eq2_witness, independence_hrep, irredundant, is_reflexive_direct,
    lattice_point_set, vertices,
};
use reflexpoly::setfam::{enumerate_sublattices, full_mask, SetFamily, Subset};
use serde::Deserialize;

type Outcome = Result<String, String>;

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn example_a() -> Outcome {
    let r = verify_example_a().map_err(err)?;
    ensure(r.center == Some(vec![1, 1, 1]), || {
        format!("center {:?}", r.center)
    })?;
    let expected = PolymatroidCheck::NoExchange {
        u: vec![0, 3, 0],
        v: vec![1, 2, 1],
    };
    ensure(r.polymatroid_check == expected, || {
        format!("axiom witness {:?}", r.polymatroid_check)
    })?;
    ensure(r.moduli == BTreeSet::from([3, 4]), || {
        format!("moduli {:?}", r.moduli)
    })?;
    Ok("reflexive, center (1,1,1), exchange fails at (0,3,0) vs (1,2,1), moduli {3,4}".into())
}

fn example_b() -> Outcome {
    for d in 1..=6 {
        ensure(verify_example_b(d).map_err(err)?, || {
            format!("chain tables differ at d = {d}")
        })?;
        // independent restatement of d + 2 - min(X)
        let r = transversal_rank(&chain_presentation(d).map_err(err)?);
        for m in 1..=full_mask(d) {
            let min = Subset::new(d, m).map_err(err)?.elements()[0] as u64;
            ensure(r.value(m) == d as u64 + 2 - min, || {
                format!("d = {d}, mask {m}: {}", r.value(m))
            })?;
        }
    }
    Ok("d = 1..6: construction = transversal rank = d + 2 - min(X)".into())
}

fn construction_round_trip() -> Outcome {
    let mut total = 0;
    for d in 1..=4 {
        let records = classify_sublattices(d, false).map_err(err)?;
        for (l, rec) in enumerate_sublattices(d).map_err(err)?.iter().zip(&records) {
            ensure(rec.sublattice == *l, || format!("record order at {l}"))?;
            let rank = rank_from_sublattice(l).map_err(err)?;
            ensure(
                facet_family(&rank).map_err(err)? == l.without_empty(),
                || format!("facet family of {rank} differs from {l}"),
            )?;
            ensure(rec.reflexive_lemma && rec.reflexive_direct, || {
                format!("{rank} not reflexive by both checks")
            })?;
            ensure(rec.center == Some(vec![1; d]), || {
                format!("{rank} center {:?}", rec.center)
            })?;
            for m in 1..=full_mask(d) {
                let x = Subset::new(d, m).map_err(err)?;
                if l.contains(&x) {
                    continue;
                }
                ensure(rank.rank(&x) > x.len() as u64 + 1, || {
                    format!("{rank}: rho({x}) <= |X| + 1")
                })?;
                let w = eq2_witness(&rank, &x).map_err(err)?;
                ensure(w.inside, || {
                    format!("{rank}: witness {} for {x} outside", w.v)
                })?;
            }
        }
        total += records.len();
    }
    Ok(format!("{total} sublattices for d = 1..4"))
}

fn lemma_sweep() -> Outcome {
    let mut summary = Vec::new();
    for d in 1..=3 {
        let entries = analyze_sweep(d, default_cap(d)).map_err(err)?;
        let bad = lemma_disagreements(&entries);
        ensure(bad.is_empty(), || {
            format!(
                "{} disagreements at d = {d}, first {}",
                bad.len(),
                bad[0].rank
            )
        })?;
        let reflexive = entries.iter().filter(|e| e.reflexive_direct).count();
        summary.push(format!("d={d}: {}/{reflexive}", entries.len()));
    }
    Ok(format!(
        "100% agreement (swept/reflexive) {}",
        summary.join(", ")
    ))
}

fn uniqueness() -> Outcome {
    let mut summary = Vec::new();
    for d in 1..=3 {
        let groups = group_by_family(&analyze_sweep(d, default_cap(d)).map_err(err)?);
        let n = check_uniqueness(d, &groups).map_err(err)?;
        summary.push(format!("d={d}: {n}"));
    }
    Ok(format!(
        "each sublattice has exactly its constructed function ({})",
        summary.join(", ")
    ))
}

fn oracle_equivalences() -> Outcome {
    let mut summary = Vec::new();
    for d in 1..=3 {
        let c = check_oracles(d);
        ensure(c.passed, || c.detail.clone())?;
        summary.push(format!("d={d}: {}", c.detail));
    }
    Ok(summary.join("; "))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Golden {
    sublattice: SetFamily,
    rank: RankFunction,
    points: PointSet,
    bases: Vec<Vec<u64>>,
    vertices: Vec<Vec<String>>,
    facets: Vec<String>,
    center: Vec<i64>,
    dual_vertices: Vec<Vec<String>>,
}

fn rendered(vs: &[reflexpoly::rational::RationalVector]) -> Vec<Vec<String>> {
    vs.iter()
        .map(|v| {
            v.entries()
                .iter()
                .map(reflexpoly::rational::render)
                .collect()
        })
        .collect()
}

fn golden_instance() -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/chain2.json");
    let text = std::fs::read_to_string(path).map_err(err)?;
    let g: Golden = serde_json::from_str(&text).map_err(err)?;
    let rank = rank_from_sublattice(&g.sublattice).map_err(err)?;
    ensure(rank == g.rank, || format!("rank {rank}"))?;
    let points = points_of_rank(&rank).map_err(err)?;
    ensure(points == g.points && points.len() == 9, || {
        format!("points {:?}", points.points())
    })?;
    let b = bases(&points);
    ensure(b.bases == g.bases, || format!("bases {:?}", b.bases))?;
    let h = independence_hrep(&rank, false).map_err(err)?;
    ensure(lattice_point_set(&h).map_err(err)? == g.points, || {
        "lattice points of the polytope differ".into()
    })?;
    let v = rendered(&vertices(&h).map_err(err)?);
    ensure(v == g.vertices, || format!("vertices {v:?}"))?;
    let facets: Vec<String> = irredundant(&h)
        .map_err(err)?
        .ineqs()
        .iter()
        .map(ToString::to_string)
        .collect();
    ensure(facets == g.facets, || format!("facets {facets:?}"))?;
    let report = is_reflexive_direct(&h).map_err(err)?;
    ensure(report.center.as_ref() == Some(&g.center), || {
        format!("center {:?}", report.center)
    })?;
    let dual = rendered(&dual_vertices(&h, &g.center).map_err(err)?);
    ensure(dual == g.dual_vertices, || {
        format!("dual vertices {dual:?}")
    })?;
    Ok("rank, 9 points, bases, vertices, facets, center, dual vertices match".into())
}

fn sublattice_audit() -> Outcome {
    let first = theorem_a_report(2, 4).map_err(err)?;
    let second = theorem_a_report(2, 4).map_err(err)?;
    ensure(first == second, || "report is not deterministic".into())?;
    let entries = analyze_sweep(2, 4).map_err(err)?;
    let reflexive: Vec<&RankFunction> = entries
        .iter()
        .filter(|e| e.reflexive_direct)
        .map(|e| &e.rank)
        .collect();
    let covered: Vec<&RankFunction> = first.iter().map(|f| &f.rank).collect();
    ensure(covered == reflexive, || {
        format!(
            "report covers {} of {} reflexive",
            covered.len(),
            reflexive.len()
        )
    })?;
    let square = RankFunction::new(2, vec![0, 2, 2, 4]).map_err(err)?;
    let finding = first
        .iter()
        .find(|f| f.rank == square)
        .ok_or_else(|| format!("no finding for {square}"))?;
    // sanity: the lemma agrees that this instance is reflexive
    ensure(is_reflexive_lemma(&square).map_err(err)?, || {
        format!("{square} not reflexive by the lemma")
    })?;
    Ok(format!(
        "{} findings; {square}: family {} plus the empty set is a sublattice = {}",
        first.len(),
        finding.family,
        finding.family_is_sublattice_with_empty
    ))
}

fn transversal_explorer() -> Outcome {
    let mut found = Vec::new();
    for d in 1..=3 {
        let rank = rank_from_sublattice(&chain_sublattice(d).map_err(err)?).map_err(err)?;
        let p = find_transversal(&rank, rank.total())
            .map_err(err)?
            .ok_or_else(|| format!("no presentation for {rank}"))?;
        let pattern = chain_presentation(d).map_err(err)?;
        ensure(p.blocks() <= pattern.blocks(), || {
            format!("{p} is canonically after {pattern}")
        })?;
        ensure(transversal_rank(&p) == rank, || {
            format!("{p} does not realize {rank}")
        })?;
        found.push(p.to_string());
    }
    Ok(found.join(" "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 fixture polytope", example_a, Some(1)),
        ("2 chain polymatroid", example_b, Some(1)),
        (
            "3 construction round trip",
            construction_round_trip,
            Some(60),
        ),
        ("4 lemma equivalence sweep", lemma_sweep, Some(120)),
        ("5 uniqueness", uniqueness, Some(120)),
        ("6 oracle equivalences", oracle_equivalences, Some(120)),
        ("7 golden instance", golden_instance, None),
        ("8 sublattice audit", sublattice_audit, Some(10)),
        ("9 transversal explorer", transversal_explorer, Some(60)),
    ];
    let mut failures = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(secs)) = (&outcome, limit) {
            if elapsed > Duration::from_secs(secs) {
                outcome = Err(format!("took {elapsed:.2?}, limit {secs} s"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
