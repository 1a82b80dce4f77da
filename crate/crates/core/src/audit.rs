//! The one-shot verification suite behind `reflexpoly verify-paper`.
//!
//! Each check returns a [`CheckOutcome`] instead of panicking so that the
//! CLI can print one line per check and pick its exit code.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{
    analyze_sweep, chain_presentation, chain_sublattice, check_uniqueness, classify_sublattices,
    default_cap, find_transversal, group_by_family, lemma_disagreements, theorem_a_findings,
    verify_example_a, verify_example_b,
};
use crate::error::Result;
use crate::polymatroid::{
    bases, points_of_rank, rank_from_sublattice, rank_of_points, transversal_rank,
};
use crate::polytope::{independence_hrep, lattice_point_set, vertices};
use crate::rational::RationalVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_result(name: impl Into<String>, r: Result<String>) -> Self {
        let name = name.into();
        match r {
            Ok(detail) => CheckOutcome {
                name,
                passed: true,
                detail,
            },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: e.to_string(),
            },
        }
    }

    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} {}: {}", self.name, self.detail)
    }
}

fn fail(what: impl Into<String>, witness: impl Into<String>) -> crate::Error {
    crate::Error::verification(what, witness)
}

pub fn check_example_a() -> CheckOutcome {
    CheckOutcome::from_result(
        "example-a",
        verify_example_a().map(|r| {
            format!(
                "reflexive with center {:?}; lattice points rejected ({:?}); moduli {:?}",
                r.center.unwrap_or_default(),
                r.polymatroid_check,
                r.moduli
            )
        }),
    )
}

pub fn check_example_b(d: usize) -> CheckOutcome {
    CheckOutcome::from_result(
        format!("example-b d={d}"),
        verify_example_b(d).and_then(|ok| {
            if ok {
                Ok("chain construction = transversal rank = d + 2 - min(X)".to_string())
            } else {
                Err(fail(
                    "chain rank tables differ",
                    format!(
                        "{} vs {}",
                        rank_from_sublattice(&chain_sublattice(d)?)?,
                        transversal_rank(&chain_presentation(d)?)
                    ),
                ))
            }
        }),
    )
}

/// Construction round trip, both verdicts, center and witness law for
/// every sublattice of `2^[d]`.
pub fn check_sublattice_roundtrip(d: usize) -> CheckOutcome {
    CheckOutcome::from_result(
        format!("sublattice-roundtrip d={d}"),
        classify_sublattices(d, false).and_then(|records| {
            match records.iter().find(|r| !r.is_consistent()) {
                Some(bad) => Err(fail("inconsistent classification record", bad.to_tsv())),
                None => Ok(format!(
                    "{} sublattices; facet families, reflexivity, centers and witnesses verified",
                    records.len()
                )),
            }
        }),
    )
}

/// Lemma equivalence, uniqueness and the sublattice audit share one sweep.
pub fn check_sweep(d: usize) -> Vec<CheckOutcome> {
    let cap = default_cap(d);
    let entries = match analyze_sweep(d, cap) {
        Ok(e) => e,
        Err(e) => {
            return vec![CheckOutcome::from_result(format!("sweep d={d}"), Err(e))];
        }
    };
    let reflexive = entries.iter().filter(|e| e.reflexive_direct).count();
    let disagreements = lemma_disagreements(&entries);
    let lemma = CheckOutcome::from_result(
        format!("lemma-equivalence d={d} cap={cap}"),
        match disagreements.first() {
            Some(e) => Err(fail(
                format!("{} verdict disagreements", disagreements.len()),
                format!("first at {}", e.rank),
            )),
            None => Ok(format!(
                "{} rank functions, {reflexive} reflexive, verdicts agree",
                entries.len()
            )),
        },
    );
    let groups = group_by_family(&entries);
    let unique = CheckOutcome::from_result(
        format!("uniqueness d={d}"),
        check_uniqueness(d, &groups).map(|n| {
            format!("each of {n} sublattices realized by exactly one reflexive rank function")
        }),
    );
    let findings = theorem_a_findings(&entries);
    let negatives = findings
        .iter()
        .filter(|f| !f.family_is_sublattice_with_empty)
        .count();
    let first_negative = findings
        .iter()
        .find(|f| !f.family_is_sublattice_with_empty)
        .map(|f| format!("; first: {} with family {}", f.rank, f.family))
        .unwrap_or_default();
    let audit = CheckOutcome {
        name: format!("sublattice-audit d={d}"),
        passed: findings.len() == reflexive,
        detail: format!(
            "finding: {negatives} of {} reflexive families plus the empty set are not sublattices{first_negative}",
            findings.len()
        ),
    };
    vec![lemma, unique, audit]
}

/// Point sets, rank tables and vertices agree across both routes for every
/// swept rank function.
pub fn check_oracles(d: usize) -> CheckOutcome {
    let run = || -> Result<String> {
        let sweep = crate::classify::sweep_rank_functions(d, default_cap(d))?;
        let failures: Vec<String> = sweep
            .par_iter()
            .map(|rank| -> Result<Option<String>> {
                let points = points_of_rank(rank)?;
                let hrep = independence_hrep(rank, false)?;
                if lattice_point_set(&hrep)? != points {
                    return Ok(Some(format!("{rank}: lattice points differ")));
                }
                if rank_of_points(&points)? != *rank {
                    return Ok(Some(format!("{rank}: rank round trip fails")));
                }
                if !vertices(&hrep)?.iter().all(RationalVector::is_integral) {
                    return Ok(Some(format!("{rank}: fractional vertex")));
                }
                if bases(&points).moduli.len() != 1 {
                    return Ok(Some(format!("{rank}: bases of several moduli")));
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        match failures.first() {
            Some(f) => Err(fail(
                format!("{} oracle mismatches", failures.len()),
                f.clone(),
            )),
            None => Ok(format!("{} rank functions agree", sweep.len())),
        }
    };
    CheckOutcome::from_result(format!("oracles d={d}"), run())
}

pub fn check_transversal_chain(d: usize) -> CheckOutcome {
    let run = || -> Result<String> {
        let rank = rank_from_sublattice(&chain_sublattice(d)?)?;
        let found = find_transversal(&rank, rank.total())?
            .ok_or_else(|| fail("no transversal presentation", rank.to_string()))?;
        if transversal_rank(&found) != rank {
            return Err(fail(
                "presentation does not realize the rank",
                found.to_string(),
            ));
        }
        Ok(format!("{found}"))
    };
    CheckOutcome::from_result(format!("transversal-chain d={d}"), run())
}

/// The whole suite. Chain checks run for `1..=dmax`; sweeps for `d ≤ 3`;
/// sublattice round trips for `d ≤ 4`.
pub fn verification_suite(
    dmax: usize,
    mut on_result: impl FnMut(&CheckOutcome),
) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let mut push = |c: CheckOutcome, out: &mut Vec<CheckOutcome>| {
        on_result(&c);
        out.push(c);
    };
    push(check_example_a(), &mut out);
    for d in 1..=dmax {
        push(check_example_b(d), &mut out);
    }
    for d in 1..=dmax.min(4) {
        push(check_sublattice_roundtrip(d), &mut out);
    }
    for d in 1..=dmax.min(3) {
        for c in check_sweep(d) {
            push(c, &mut out);
        }
        push(check_oracles(d), &mut out);
        push(check_transversal_chain(d), &mut out);
    }
    out
}
