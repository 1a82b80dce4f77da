//! Ground-set rank functions, discrete polymatroids as finite point sets, and
//! the maps between them.
//!
//! A rank function is a dense table of `2^d` values indexed by subset mask.
//! A discrete polymatroid is stored as its complete, lexicographically sorted
//! list of lattice points.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setfam::{check_ground, full_mask, is_sublattice, SetFamily, Subset};

/// Ground-set rank function `ρ`, `values[mask] = ρ(X)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RankFunctionFile", into = "RankFunctionFile")]
pub struct RankFunction {
    d: usize,
    values: Vec<u64>,
}

/// On-disk form: `{"d":2,"values":[0,3,2,3]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankFunctionFile {
    pub d: usize,
    pub values: Vec<u64>,
}

impl TryFrom<RankFunctionFile> for RankFunction {
    type Error = Error;
    fn try_from(f: RankFunctionFile) -> Result<Self> {
        RankFunction::new(f.d, f.values)
    }
}

impl From<RankFunction> for RankFunctionFile {
    fn from(r: RankFunction) -> Self {
        RankFunctionFile {
            d: r.d,
            values: r.values,
        }
    }
}

/// First violated rank-function axiom, with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum RankViolation {
    /// `ρ(∅) ≠ 0`.
    NonzeroEmpty { value: u64 },
    /// `X ⊆ Y` but `ρ(X) > ρ(Y)`.
    NotMonotone { x: Subset, y: Subset },
    /// `ρ(X) + ρ(Y) < ρ(X ∪ Y) + ρ(X ∩ Y)`.
    NotSubmodular { x: Subset, y: Subset },
}

impl fmt::Display for RankViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankViolation::NonzeroEmpty { value } => write!(f, "rank of empty set is {value}"),
            RankViolation::NotMonotone { x, y } => write!(f, "not monotone at X={x}, Y={y}"),
            RankViolation::NotSubmodular { x, y } => {
                write!(f, "not submodular at X={x}, Y={y}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub violation: Option<RankViolation>,
    pub loopless: bool,
}

impl RankCheck {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

impl RankFunction {
    /// Wraps a raw table; only the length is checked here, see
    /// [`RankFunction::validate`] for the axioms.
    pub fn new(d: usize, values: Vec<u64>) -> Result<Self> {
        check_ground(d)?;
        if values.len() != 1usize << d {
            return Err(Error::input(format!(
                "rank table for d = {d} needs {} entries, got {}",
                1usize << d,
                values.len()
            )));
        }
        Ok(RankFunction { d, values })
    }

    /// Tabulates `f` over all masks of `[d]`.
    pub fn from_fn(d: usize, f: impl Fn(u32) -> u64) -> Result<Self> {
        check_ground(d)?;
        RankFunction::new(d, (0..=full_mask(d)).map(f).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn value(&self, mask: u32) -> u64 {
        self.values[mask as usize]
    }

    pub fn rank(&self, x: &Subset) -> u64 {
        self.value(x.mask())
    }

    /// `ρ([d])`.
    pub fn total(&self) -> u64 {
        self.value(full_mask(self.d))
    }

    fn subset(&self, mask: u32) -> Subset {
        Subset::new_unchecked(self.d, mask)
    }

    /// Checks `ρ(∅) = 0`, monotonicity and submodularity, reporting the first
    /// violation found together with the loopless flag.
    pub fn validate(&self) -> RankCheck {
        let loopless = (0..self.d).all(|i| self.value(1 << i) >= 1);
        RankCheck {
            violation: self.first_violation(),
            loopless,
        }
    }

    fn first_violation(&self) -> Option<RankViolation> {
        if self.values[0] != 0 {
            return Some(RankViolation::NonzeroEmpty {
                value: self.values[0],
            });
        }
        let full = full_mask(self.d);
        for y in 1..=full {
            for i in 0..self.d {
                let bit = 1u32 << i;
                if y & bit != 0 && self.value(y ^ bit) > self.value(y) {
                    return Some(RankViolation::NotMonotone {
                        x: self.subset(y ^ bit),
                        y: self.subset(y),
                    });
                }
            }
        }
        for x in 0..=full {
            for y in x + 1..=full {
                if self.value(x) + self.value(y) < self.value(x | y) + self.value(x & y) {
                    return Some(RankViolation::NotSubmodular {
                        x: self.subset(x),
                        y: self.subset(y),
                    });
                }
            }
        }
        None
    }

    /// Input error unless the table is a valid rank function (and loopless,
    /// when asked).
    pub fn require_valid(&self, loopless: bool) -> Result<()> {
        let check = self.validate();
        if let Some(v) = check.violation {
            return Err(Error::input(format!("invalid rank function {self}: {v}")));
        }
        if loopless && !check.loopless {
            return Err(Error::input(format!("rank function {self} has a loop")));
        }
        Ok(())
    }
}

impl fmt::Display for RankFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Convenience wrapper matching the free-function style of the other modules.
pub fn validate_rank(d: usize, values: Vec<u64>) -> Result<RankCheck> {
    Ok(RankFunction::new(d, values)?.validate())
}

/// Finite set of nonnegative integer vectors, lexicographically sorted.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "PointSetFile", into = "PointSetFile")]
pub struct PointSet {
    d: usize,
    points: Vec<Vec<u64>>,
}

/// On-disk form: `{"d":2,"points":[[0,0],[0,1],…]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetFile {
    pub d: usize,
    pub points: Vec<Vec<u64>>,
}

impl TryFrom<PointSetFile> for PointSet {
    type Error = Error;
    fn try_from(f: PointSetFile) -> Result<Self> {
        PointSet::new(f.d, f.points)
    }
}

impl From<PointSet> for PointSetFile {
    fn from(p: PointSet) -> Self {
        PointSetFile {
            d: p.d,
            points: p.points,
        }
    }
}

/// Sum of coordinates.
pub fn modulus(u: &[u64]) -> u64 {
    u.iter().sum()
}

impl PointSet {
    pub fn new(d: usize, points: Vec<Vec<u64>>) -> Result<Self> {
        check_ground(d)?;
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::input(format!(
                "point {p:?} does not have {d} coordinates"
            )));
        }
        let mut points = points;
        points.sort();
        points.dedup();
        Ok(PointSet { d, points })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[Vec<u64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, u: &[u64]) -> bool {
        self.points
            .binary_search_by(|p| p.as_slice().cmp(u))
            .is_ok()
    }

    /// Every `u − e_i` with `u_i > 0` is present, which implies full
    /// down-closure by induction.
    pub fn is_down_closed(&self) -> bool {
        self.down_closure_gap().is_none()
    }

    fn down_closure_gap(&self) -> Option<(Vec<u64>, Vec<u64>)> {
        for u in &self.points {
            for i in 0..self.d {
                if u[i] > 0 {
                    let mut w = u.clone();
                    w[i] -= 1;
                    if !self.contains(&w) {
                        return Some((u.clone(), w));
                    }
                }
            }
        }
        None
    }
}

/// `ρ(X) = max { Σ_{i∈X} u_i : u ∈ P }`.
pub fn rank_of_points(p: &PointSet) -> Result<RankFunction> {
    if p.is_empty() {
        return Err(Error::input("rank of an empty point set is undefined"));
    }
    RankFunction::from_fn(p.d(), |mask| {
        p.points()
            .iter()
            .map(|u| {
                u.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &c)| c)
                    .sum::<u64>()
            })
            .max()
            .unwrap_or(0)
    })
}

/// `P(ρ) = { u ∈ Z^d_+ : Σ_{i∈X} u_i ≤ ρ(X) for all nonempty X }`.
pub fn points_of_rank(rank: &RankFunction) -> Result<PointSet> {
    rank.require_valid(false)?;
    let d = rank.d();
    let mut out = Vec::new();
    let mut u = vec![0u64; d];
    // masks grouped by their highest element, so each constraint is checked
    // as soon as its last coordinate is fixed
    let by_top: Vec<Vec<u32>> = (0..d)
        .map(|k| ((1u32 << k)..(1u32 << (k + 1))).collect())
        .collect();
    fill_points(rank, &by_top, 0, &mut u, &mut out);
    PointSet::new(d, out)
}

fn fill_points(
    rank: &RankFunction,
    by_top: &[Vec<u32>],
    k: usize,
    u: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if k == u.len() {
        out.push(u.clone());
        return;
    }
    for c in 0..=rank.value(1 << k) {
        u[k] = c;
        let ok = by_top[k].iter().all(|&mask| {
            let s: u64 = (0..=k).filter(|i| mask >> i & 1 == 1).map(|i| u[i]).sum();
            s <= rank.value(mask)
        });
        if !ok {
            // constraints are monotone in u[k]
            break;
        }
        fill_points(rank, by_top, k + 1, u, out);
    }
    u[k] = 0;
}

/// Outcome of the discrete polymatroid axiom check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PolymatroidCheck {
    Ok,
    /// `point ∈ P` but `missing ≤ point` is not.
    NotDownClosed {
        point: Vec<u64>,
        missing: Vec<u64>,
    },
    /// `|u| < |v|` and no `i` with `u_i < v_i` has `u + e_i ∈ P`.
    NoExchange {
        u: Vec<u64>,
        v: Vec<u64>,
    },
    Empty,
}

impl PolymatroidCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, PolymatroidCheck::Ok)
    }
}

/// Checks down-closure and the exchange property.
///
/// On an exchange failure the witness is the lexicographically first
/// deficient `u`, paired with the violating `v` of smallest modulus and,
/// among those, closest to `u` in L1 distance.
pub fn is_discrete_polymatroid(p: &PointSet) -> PolymatroidCheck {
    if p.is_empty() {
        return PolymatroidCheck::Empty;
    }
    if let Some((point, missing)) = p.down_closure_gap() {
        return PolymatroidCheck::NotDownClosed { point, missing };
    }
    let d = p.d();
    let members: HashSet<&[u64]> = p.points().iter().map(Vec::as_slice).collect();
    for u in p.points() {
        let mu = modulus(u);
        let mut grow = u.clone();
        let extendable: Vec<bool> = (0..d)
            .map(|i| {
                grow[i] += 1;
                let inside = members.contains(grow.as_slice());
                grow[i] -= 1;
                inside
            })
            .collect();
        let witness = p
            .points()
            .iter()
            .filter(|v| modulus(v) > mu)
            .filter(|v| (0..d).all(|i| !(u[i] < v[i] && extendable[i])))
            .min_by_key(|v| (modulus(v), l1_distance(u, v), (*v).clone()));
        if let Some(v) = witness {
            return PolymatroidCheck::NoExchange {
                u: u.clone(),
                v: v.clone(),
            };
        }
    }
    PolymatroidCheck::Ok
}

fn l1_distance(u: &[u64], v: &[u64]) -> u64 {
    u.iter().zip(v).map(|(a, b)| a.abs_diff(*b)).sum()
}

/// Maximal elements of a point set and their moduli.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bases {
    pub bases: Vec<Vec<u64>>,
    pub moduli: BTreeSet<u64>,
}

/// Maximal elements of `P` under the componentwise order.
pub fn bases(p: &PointSet) -> Bases {
    let d = p.d();
    let down_closed = p.is_down_closed();
    let is_maximal = |u: &Vec<u64>| {
        if down_closed {
            // some v > u exists iff some u + e_i is present
            let mut w = u.clone();
            (0..d).all(|i| {
                w[i] += 1;
                let inside = p.contains(&w);
                w[i] -= 1;
                !inside
            })
        } else {
            !p.points()
                .iter()
                .any(|v| v != u && v.iter().zip(u).all(|(a, b)| a >= b))
        }
    };
    let bases: Vec<Vec<u64>> = p
        .points()
        .iter()
        .filter(|u| is_maximal(u))
        .cloned()
        .collect();
    let moduli = bases.iter().map(|b| modulus(b)).collect();
    Bases { bases, moduli }
}

/// `X` is closed iff `ρ(X ∪ {j}) > ρ(X)` for every `j ∉ X`.
pub fn is_closed(rank: &RankFunction, x: &Subset) -> bool {
    let m = x.mask();
    (0..rank.d())
        .map(|j| 1u32 << j)
        .filter(|bit| m & bit == 0)
        .all(|bit| rank.value(m | bit) > rank.value(m))
}

/// `X` is separable iff `ρ(X) = ρ(X₁) + ρ(X₂)` for a partition into two
/// nonempty parts.
pub fn is_inseparable(rank: &RankFunction, x: &Subset) -> Result<bool> {
    if x.is_empty() {
        return Err(Error::input(
            "inseparability is not defined for the empty set",
        ));
    }
    let m = x.mask();
    let low = m & m.wrapping_neg();
    let rest = m ^ low;
    // parts containing the lowest element, excluding X itself
    let mut sub = rest;
    loop {
        let part = sub | low;
        if part != m && rank.value(part) + rank.value(m ^ part) == rank.value(m) {
            return Ok(false);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    Ok(true)
}

/// All nonempty `ρ`-closed and `ρ`-inseparable subsets, canonically ordered.
pub fn facet_family(rank: &RankFunction) -> Result<SetFamily> {
    rank.require_valid(true)?;
    facet_family_unchecked(rank)
}

pub(crate) fn facet_family_unchecked(rank: &RankFunction) -> Result<SetFamily> {
    let d = rank.d();
    let mut sets = Vec::new();
    for mask in 1..=full_mask(d) {
        let x = Subset::new_unchecked(d, mask);
        if is_closed(rank, &x) && is_inseparable(rank, &x)? {
            sets.push(x);
        }
    }
    SetFamily::new(d, sets)
}

/// `ρ(X) = min { |A| + 1 : X ⊆ A, A ∈ L }` for nonempty `X`, `ρ(∅) = 0`.
pub fn rank_from_sublattice(lattice: &SetFamily) -> Result<RankFunction> {
    if !is_sublattice(lattice) {
        return Err(Error::input(format!("{lattice} is not a sublattice")));
    }
    let rank = RankFunction::from_fn(lattice.d(), |x| {
        if x == 0 {
            return 0;
        }
        lattice
            .iter()
            .filter(|a| x & !a.mask() == 0)
            .map(|a| a.len() as u64 + 1)
            .min()
            .expect("[d] is in every sublattice")
    })?;
    let check = rank.validate();
    if !check.is_valid() || !check.loopless {
        return Err(Error::internal(format!(
            "construction from {lattice} produced invalid rank {rank}: {check:?}"
        )));
    }
    Ok(rank)
}

/// A transversal presentation: a multiset of nonempty blocks.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "PresentationFile", into = "PresentationFile")]
pub struct Presentation {
    d: usize,
    blocks: Vec<Subset>,
}

/// On-disk form: `{"d":3,"blocks":[[1,2,3],[1,2,3],[1,2],[1]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub d: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl TryFrom<PresentationFile> for Presentation {
    type Error = Error;
    fn try_from(f: PresentationFile) -> Result<Self> {
        let blocks = f
            .blocks
            .iter()
            .map(|b| Subset::from_elements(f.d, b))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(f.d, blocks)
    }
}

impl From<Presentation> for PresentationFile {
    fn from(p: Presentation) -> Self {
        PresentationFile {
            d: p.d,
            blocks: p.blocks.iter().map(Subset::elements).collect(),
        }
    }
}

impl Presentation {
    pub fn new(d: usize, blocks: Vec<Subset>) -> Result<Self> {
        check_ground(d)?;
        if let Some(b) = blocks.iter().find(|b| b.d() != d) {
            return Err(Error::input(format!("block {b} is not a subset of [{d}]")));
        }
        if blocks.iter().any(Subset::is_empty) {
            return Err(Error::input("presentation blocks must be nonempty"));
        }
        let mut blocks = blocks;
        blocks.sort();
        Ok(Presentation { d, blocks })
    }

    pub fn from_element_lists<L: AsRef<[usize]>>(d: usize, lists: &[L]) -> Result<Self> {
        let blocks = lists
            .iter()
            .map(|l| Subset::from_elements(d, l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(d, blocks)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

/// `ρ(X) = #{ j : B_j ∩ X ≠ ∅ }`.
pub fn transversal_rank(presentation: &Presentation) -> RankFunction {
    RankFunction::from_fn(presentation.d(), |x| {
        presentation
            .blocks()
            .iter()
            .filter(|b| b.mask() & x != 0)
            .count() as u64
    })
    .expect("presentation ground set already checked")
}

/// All sums `Σ_{j∈S} e_{i_j}` with `i_j ∈ B_j`; the skip option makes the
/// result down-closed.
pub fn transversal_points(presentation: &Presentation) -> PointSet {
    let d = presentation.d();
    let mut reached: BTreeSet<Vec<u64>> = BTreeSet::from([vec![0; d]]);
    for block in presentation.blocks() {
        let mut next = reached.clone();
        for u in &reached {
            for i in block.elements() {
                let mut w = u.clone();
                w[i - 1] += 1;
                next.insert(w);
            }
        }
        reached = next;
    }
    PointSet::new(d, reached.into_iter().collect()).expect("coordinates match d")
}
