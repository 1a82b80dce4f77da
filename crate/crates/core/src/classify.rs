//! End-to-end classification: the rank criterion for reflexivity, the
//! per-sublattice construction with its internal checks, exhaustive sweeps
//! over small rank functions, and the transversal presentation search.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polymatroid::{
    bases, facet_family, facet_family_unchecked, is_discrete_polymatroid, modulus, points_of_rank,
    rank_from_sublattice, transversal_rank, PolymatroidCheck, Presentation, RankFunction,
};
use crate::polytope::{
    analyze, binomial, eq2_witness, independence_hrep, irredundant, is_reflexive_direct,
    lattice_point_set, HPolytope, Inequality,
};
use crate::setfam::{enumerate_sublattices, full_mask, is_sublattice, SetFamily, Subset};

/// Largest number of candidate tables a rank-function sweep will consider.
pub const SWEEP_BUDGET: u64 = 100_000_000;
/// Largest number of block multisets the transversal search will consider.
pub const TRANSVERSAL_BUDGET: u64 = 10_000_000;

/// Default value cap of the rank-function sweep.
pub fn default_cap(d: usize) -> u64 {
    2 * d as u64
}

/// Reflexive iff `ρ(X) = |X| + 1` for every closed inseparable `X`.
pub fn is_reflexive_lemma(rank: &RankFunction) -> Result<bool> {
    Ok(facet_family(rank)?
        .iter()
        .all(|x| rank.rank(x) == x.len() as u64 + 1))
}

/// One classified sublattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationRecord {
    pub sublattice: SetFamily,
    pub rank: RankFunction,
    pub point_count: usize,
    /// Number of facets of the independence polytope.
    pub facet_count: usize,
    pub reflexive_lemma: bool,
    pub reflexive_direct: bool,
    pub center: Option<Vec<i64>>,
    /// Closed inseparable family equals the sublattice minus `∅`.
    pub roundtrip_ok: bool,
    pub transversal: Option<Presentation>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ClassificationRecord {
    /// Both verdicts true, round trip intact and center at the all-ones point.
    pub fn is_consistent(&self) -> bool {
        let ones = vec![1; self.rank.d()];
        self.reflexive_lemma
            && self.reflexive_direct
            && self.roundtrip_ok
            && self.center.as_ref() == Some(&ones)
    }

    /// Tab-separated row in the documented column order.
    pub fn to_tsv(&self) -> String {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        let table: Vec<i64> = self.rank.values().iter().map(|&v| v as i64).collect();
        [
            self.sublattice.to_string(),
            join(&table),
            self.point_count.to_string(),
            self.facet_count.to_string(),
            self.reflexive_lemma.to_string(),
            self.reflexive_direct.to_string(),
            self.center.as_deref().map_or_else(|| "-".to_string(), join),
            self.roundtrip_ok.to_string(),
            self.transversal
                .as_ref()
                .map_or_else(|| "-".to_string(), |t| t.to_string()),
        ]
        .join("\t")
    }
}

/// Column names of [`ClassificationRecord::to_tsv`].
pub const TSV_HEADER: &str = "sublattice\trank\tpoint_count\tfacet_count\treflexive_lemma\treflexive_direct\tcenter\troundtrip_ok\ttransversal";

/// Checks `ρ(X) > |X| + 1` and membership of the witness point for every
/// nonempty `X` outside the facet family.
fn check_witness_law(rank: &RankFunction, family: &SetFamily) -> Result<()> {
    let d = rank.d();
    for mask in 1..=full_mask(d) {
        if family.contains_mask(mask) {
            continue;
        }
        let x = Subset::new(d, mask)?;
        if rank.rank(&x) <= x.len() as u64 + 1 {
            return Err(Error::verification(
                format!("rank {rank}: ρ(X) ≤ |X| + 1 off the facet family"),
                format!("X={x}, ρ(X)={}", rank.rank(&x)),
            ));
        }
        let w = eq2_witness(rank, &x)?;
        if !w.inside || w.modulus <= crate::rational::int(x.len() as i64 + 1) {
            return Err(Error::verification(
                format!("rank {rank}: witness point fails"),
                format!("X={x}, v={}, inside={}", w.v, w.inside),
            ));
        }
    }
    Ok(())
}

/// Builds and checks the record for one sublattice.
pub fn classify_sublattice(
    lattice: &SetFamily,
    with_transversal: bool,
) -> Result<ClassificationRecord> {
    let start = Instant::now();
    let rank = rank_from_sublattice(lattice)?;
    let points = points_of_rank(&rank)?;
    let geometry = analyze(&independence_hrep(&rank, false)?)?;
    let family = facet_family(&rank)?;
    let direct = geometry.reflexivity;
    let roundtrip_ok = family == lattice.without_empty();
    check_witness_law(&rank, &family)?;
    let transversal = if with_transversal {
        find_transversal(&rank, rank.total())?
    } else {
        None
    };
    Ok(ClassificationRecord {
        sublattice: lattice.clone(),
        point_count: points.len(),
        facet_count: geometry.facets.len(),
        reflexive_lemma: is_reflexive_lemma(&rank)?,
        reflexive_direct: direct.reflexive,
        center: direct.center,
        roundtrip_ok,
        transversal,
        rank,
        elapsed: start.elapsed(),
    })
}

/// One record per sublattice of `2^[d]`, in canonical order.
pub fn classify_sublattices(d: usize, with_transversal: bool) -> Result<Vec<ClassificationRecord>> {
    enumerate_sublattices(d)?
        .par_iter()
        .map(|l| classify_sublattice(l, with_transversal))
        .collect()
}

/// Every valid loopless rank function on `[d]` with all values `≤ cap`,
/// exactly once, lexicographic on the value table.
///
/// Depth-first over masks in increasing order. Each new value is bounded
/// below by monotonicity and above by the local submodular inequalities
/// `ρ(S+i+j) ≤ ρ(S+i) + ρ(S+j) − ρ(S)`, whose union is equivalent to full
/// submodularity.
pub fn sweep_rank_functions(d: usize, cap: u64) -> Result<Vec<RankFunction>> {
    crate::setfam::check_ground(d)?;
    if cap < d as u64 + 1 {
        return Err(Error::input(format!(
            "sweep cap {cap} below d + 1 = {}",
            d + 1
        )));
    }
    let cells = (1u32 << d) - 1;
    let budget = (cap + 1).checked_pow(cells).filter(|&b| b <= SWEEP_BUDGET);
    if budget.is_none() {
        return Err(Error::capability(format!(
            "sweep over (cap + 1)^(2^d − 1) = {}^{cells} tables exceeds the budget of {SWEEP_BUDGET}",
            cap + 1
        )));
    }
    let mut out = Vec::new();
    let mut table = vec![0u64; 1 << d];
    sweep_fill(d, cap, 1, &mut table, &mut out);
    Ok(out)
}

fn sweep_fill(d: usize, cap: u64, mask: usize, table: &mut Vec<u64>, out: &mut Vec<RankFunction>) {
    if mask == table.len() {
        out.push(RankFunction::new(d, table.clone()).expect("table length is 2^d"));
        return;
    }
    let bits: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
    let mut lo = if bits.len() == 1 { 1 } else { 0 };
    for &i in &bits {
        lo = lo.max(table[mask ^ (1 << i)]);
    }
    let mut hi = cap;
    for (k, &i) in bits.iter().enumerate() {
        for &j in &bits[k + 1..] {
            let a = table[mask ^ (1 << i)] + table[mask ^ (1 << j)];
            let b = table[mask ^ (1 << i) ^ (1 << j)];
            hi = hi.min(a.saturating_sub(b));
        }
    }
    for v in lo..=hi {
        table[mask] = v;
        sweep_fill(d, cap, mask + 1, table, out);
    }
    table[mask] = 0;
}

/// Per-function data shared by the sweep reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub rank: RankFunction,
    pub family: SetFamily,
    pub reflexive_lemma: bool,
    pub reflexive_direct: bool,
    pub center: Option<Vec<i64>>,
}

/// Both reflexivity verdicts for every function of the sweep.
pub fn analyze_sweep(d: usize, cap: u64) -> Result<Vec<SweepEntry>> {
    sweep_rank_functions(d, cap)?
        .into_par_iter()
        .map(|rank| {
            let family = facet_family(&rank)?;
            let reflexive_lemma = is_reflexive_lemma(&rank)?;
            let direct = is_reflexive_direct(&independence_hrep(&rank, false)?)?;
            Ok(SweepEntry {
                rank,
                family,
                reflexive_lemma,
                reflexive_direct: direct.reflexive,
                center: direct.center,
            })
        })
        .collect()
}

/// Functions on which the two reflexivity verdicts disagree.
pub fn lemma_disagreements(entries: &[SweepEntry]) -> Vec<&SweepEntry> {
    entries
        .iter()
        .filter(|e| e.reflexive_lemma != e.reflexive_direct)
        .collect()
}

/// Geometrically reflexive functions of the sweep grouped by facet family.
pub fn uniqueness_report(d: usize, cap: u64) -> Result<BTreeMap<SetFamily, Vec<RankFunction>>> {
    Ok(group_by_family(&analyze_sweep(d, cap)?))
}

pub fn group_by_family(entries: &[SweepEntry]) -> BTreeMap<SetFamily, Vec<RankFunction>> {
    let mut groups: BTreeMap<SetFamily, Vec<RankFunction>> = BTreeMap::new();
    for e in entries.iter().filter(|e| e.reflexive_direct) {
        groups
            .entry(e.family.clone())
            .or_default()
            .push(e.rank.clone());
    }
    groups
}

/// For every sublattice `L` of `2^[d]`, the group keyed by `L \ {∅}` must
/// hold exactly the constructed rank function.
pub fn check_uniqueness(
    d: usize,
    groups: &BTreeMap<SetFamily, Vec<RankFunction>>,
) -> Result<usize> {
    let lattices = enumerate_sublattices(d)?;
    for l in &lattices {
        let expected = rank_from_sublattice(l)?;
        match groups.get(&l.without_empty()).map(Vec::as_slice) {
            Some([only]) if *only == expected => {}
            found => {
                return Err(Error::verification(
                    format!("sublattice {l} is not realized by exactly its constructed rank"),
                    format!("expected {expected}, found {found:?}"),
                ))
            }
        }
    }
    Ok(lattices.len())
}

/// Audit item for the sublattice claim about reflexive polytopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepFinding {
    pub rank: RankFunction,
    pub family: SetFamily,
    pub reflexive: bool,
    pub family_is_sublattice_with_empty: bool,
}

/// One finding per geometrically reflexive function of the sweep.
pub fn theorem_a_report(d: usize, cap: u64) -> Result<Vec<SweepFinding>> {
    Ok(theorem_a_findings(&analyze_sweep(d, cap)?))
}

pub fn theorem_a_findings(entries: &[SweepEntry]) -> Vec<SweepFinding> {
    entries
        .iter()
        .filter(|e| e.reflexive_direct)
        .map(|e| SweepFinding {
            rank: e.rank.clone(),
            family: e.family.clone(),
            reflexive: true,
            family_is_sublattice_with_empty: is_sublattice(&e.family.with_empty()),
        })
        .collect()
}

/// Block types: nonempty subsets of `[d]` in canonical order.
fn block_types(d: usize) -> Vec<Subset> {
    let mut types: Vec<Subset> = (1..=full_mask(d))
        .map(|m| Subset::new(d, m).expect("mask in range"))
        .collect();
    types.sort();
    types
}

fn check_transversal_search(rank: &RankFunction, n: u64) -> Result<()> {
    rank.require_valid(false)?;
    if n != rank.total() {
        return Err(Error::input(format!(
            "a presentation of {rank} needs ρ([d]) = {} blocks, not {n}",
            rank.total()
        )));
    }
    let types = full_mask(rank.d()) as usize;
    let n = n as usize;
    let cost = binomial(types + n - 1, n);
    if cost > TRANSVERSAL_BUDGET {
        return Err(Error::capability(format!(
            "C({}, {n}) = {cost} block multisets exceeds the budget of {TRANSVERSAL_BUDGET}",
            types + n - 1
        )));
    }
    Ok(())
}

/// First presentation with `n` blocks whose transversal rank is `ρ`, in
/// canonical multiset order, or `None` if there is none.
pub fn find_transversal(rank: &RankFunction, n: u64) -> Result<Option<Presentation>> {
    check_transversal_search(rank, n)?;
    let mut found = None;
    search_transversals(rank, n as usize, &mut |p| {
        found = Some(p);
        false
    });
    Ok(found)
}

/// Every presentation with `n` blocks realizing `ρ`, in canonical order.
pub fn find_all_transversals(rank: &RankFunction, n: u64) -> Result<Vec<Presentation>> {
    check_transversal_search(rank, n)?;
    let mut all = Vec::new();
    search_transversals(rank, n as usize, &mut |p| {
        all.push(p);
        true
    });
    Ok(all)
}

fn search_transversals(rank: &RankFunction, n: usize, emit: &mut dyn FnMut(Presentation) -> bool) {
    let d = rank.d();
    let types = block_types(d);
    let mut counts = vec![0u64; 1 << d];
    let mut chosen = Vec::with_capacity(n);
    transversal_dfs(rank, &types, 0, n, &mut counts, &mut chosen, emit);
}

/// Returns `false` once `emit` asks to stop.
fn transversal_dfs(
    rank: &RankFunction,
    types: &[Subset],
    start: usize,
    remaining: usize,
    counts: &mut [u64],
    chosen: &mut Vec<Subset>,
    emit: &mut dyn FnMut(Presentation) -> bool,
) -> bool {
    if remaining == 0 {
        if counts.iter().zip(rank.values()).all(|(c, r)| c == r) {
            let p = Presentation::new(rank.d(), chosen.clone()).expect("blocks are nonempty");
            return emit(p);
        }
        return true;
    }
    for (t, block) in types.iter().enumerate().skip(start) {
        let mask = block.mask();
        shift_counts(counts, mask, true);
        // each later block adds at most one to every count
        let feasible = counts
            .iter()
            .zip(rank.values())
            .all(|(&c, &r)| c <= r && c + (remaining as u64 - 1) >= r);
        let mut go_on = true;
        if feasible {
            chosen.push(*block);
            go_on = transversal_dfs(rank, types, t, remaining - 1, counts, chosen, emit);
            chosen.pop();
        }
        shift_counts(counts, mask, false);
        if !go_on {
            return false;
        }
    }
    true
}

/// Adds or removes one block: every set meeting it gains or loses one.
fn shift_counts(counts: &mut [u64], block: u32, add: bool) {
    for (x, c) in counts.iter_mut().enumerate().skip(1) {
        if x as u32 & block != 0 {
            if add {
                *c += 1;
            } else {
                *c -= 1;
            }
        }
    }
}

/// The chain `∅ ⊂ {d} ⊂ {d−1,d} ⊂ … ⊂ [d]`.
pub fn chain_sublattice(d: usize) -> Result<SetFamily> {
    crate::setfam::check_ground(d)?;
    SetFamily::from_masks(d, (0..=d).map(|k| full_mask(d) ^ full_mask(d - k)))
}

/// The presentation `{[d], [d], [d−1], …, [1]}`.
pub fn chain_presentation(d: usize) -> Result<Presentation> {
    crate::setfam::check_ground(d)?;
    let mut blocks = vec![Subset::full(d)?];
    for k in 1..=d {
        blocks.push(Subset::new(d, full_mask(k))?);
    }
    Presentation::new(d, blocks)
}

/// The reflexive polytope `x ≥ 0, x1+x2 ≤ 3, x2+x3 ≤ 3, x1+x2+x3 ≤ 4`
/// that is not an independence polytope.
pub fn example_a_polytope() -> HPolytope {
    let q = |a: [i64; 3], b| Inequality::new(a.to_vec(), b);
    HPolytope::new(
        3,
        vec![
            q([-1, 0, 0], 0),
            q([0, -1, 0], 0),
            q([0, 0, -1], 0),
            q([1, 1, 0], 3),
            q([0, 1, 1], 3),
            q([1, 1, 1], 4),
        ],
    )
    .expect("fixture is well formed")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleAReport {
    pub reflexive: bool,
    pub center: Option<Vec<i64>>,
    pub polymatroid_check: PolymatroidCheck,
    pub maximal: Vec<Vec<u64>>,
    pub moduli: BTreeSet<u64>,
}

/// Checks the fixture: reflexive with center `(1,1,1)`, lattice points not a
/// discrete polymatroid, `(0,3,0)` and `(1,2,1)` both maximal with moduli
/// 3 and 4.
pub fn verify_example_a() -> Result<ExampleAReport> {
    let h = example_a_polytope();
    let direct = is_reflexive_direct(&h)?;
    let points = lattice_point_set(&h)?;
    let b = bases(&points);
    let report = ExampleAReport {
        reflexive: direct.reflexive,
        center: direct.center,
        polymatroid_check: is_discrete_polymatroid(&points),
        maximal: b.bases,
        moduli: b.moduli,
    };
    let fail = |what: &str| Err(Error::verification(what, format!("{report:?}")));
    if !report.reflexive || report.center.as_deref() != Some(&[1, 1, 1][..]) {
        return fail("fixture is not reflexive with center (1,1,1)");
    }
    if report.polymatroid_check.is_ok() {
        return fail("fixture lattice points pass the polymatroid axioms");
    }
    let u = vec![0, 3, 0];
    let v = vec![1, 2, 1];
    if !report.maximal.contains(&u) || !report.maximal.contains(&v) {
        return fail("(0,3,0) and (1,2,1) are not both maximal");
    }
    if modulus(&u) != 3 || modulus(&v) != 4 || !report.moduli.is_superset(&BTreeSet::from([3, 4])) {
        return fail("moduli 3 and 4 not observed");
    }
    Ok(report)
}

/// The chain construction, the chain presentation and `d + 2 − min(X)` agree
/// on every subset.
pub fn verify_example_b(d: usize) -> Result<bool> {
    if !(1..=8).contains(&d) {
        return Err(Error::input(format!(
            "chain check supports 1 <= d <= 8, got {d}"
        )));
    }
    let constructed = rank_from_sublattice(&chain_sublattice(d)?)?;
    let transversal = transversal_rank(&chain_presentation(d)?);
    let formula = RankFunction::from_fn(d, |x| {
        if x == 0 {
            0
        } else {
            let min = x.trailing_zeros() as u64 + 1;
            d as u64 + 2 - min
        }
    })?;
    Ok(constructed == transversal && constructed == formula)
}

/// Geometric facets predicted by the closed inseparable sets: upper
/// inequalities of the irredundant system versus the facet family.
pub fn facet_prediction_holds(rank: &RankFunction) -> Result<bool> {
    let facets = irredundant(&independence_hrep(rank, false)?)?;
    let upper: BTreeSet<u32> = facets
        .ineqs()
        .iter()
        .filter(|q| q.a.iter().all(|&c| c >= 0))
        .map(|q| {
            q.a.iter()
                .enumerate()
                .filter(|(_, &c)| c == 1)
                .fold(0u32, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let predicted: BTreeSet<u32> = facet_family_unchecked(rank)?.masks().into_iter().collect();
    Ok(upper == predicted)
}

/// Lattice points of the inequality system agree with the point set of the
/// rank function.
pub fn lattice_points_agree(rank: &RankFunction) -> Result<bool> {
    Ok(lattice_point_set(&independence_hrep(rank, false)?)? == points_of_rank(rank)?)
}
