//! Exact H-polytopes: independence polytopes of rank functions, vertex and
//! lattice-point enumeration, facet extraction, and reflexivity through
//! facet lattice distances and the dual polytope.
//!
//! No floating point is used anywhere; every verdict is exact.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polymatroid::{facet_family, PointSet, RankFunction};
use crate::rational::{
    affine_dimension, int, one, solve_integer_square, solve_unique, Rational, RationalVector,
};
use crate::setfam::{check_ground, full_mask, Subset};

/// Ceiling on the number of `d`-subsets of inequalities examined by vertex
/// enumeration.
pub const VERTEX_BUDGET: u64 = 10_000_000;

/// `a · x ≤ b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inequality {
    pub a: Vec<i64>,
    pub b: i64,
}

impl Inequality {
    pub fn new(a: Vec<i64>, b: i64) -> Self {
        Inequality { a, b }
    }

    /// Left side evaluated exactly at `v`.
    pub fn lhs(&self, v: &RationalVector) -> Rational {
        v.dot_int(&self.a)
    }

    pub fn lhs_int(&self, v: &[i64]) -> i64 {
        self.a.iter().zip(v).map(|(a, x)| a * x).sum()
    }

    /// Normal divided by the gcd of its entries; the right side follows as
    /// an exact rational.
    pub fn primitive(&self) -> (Vec<i64>, Rational) {
        let g = self.a.iter().fold(0i64, |g, &x| g.gcd(&x));
        debug_assert!(g > 0);
        (
            self.a.iter().map(|x| x / g).collect(),
            Rational::new(self.b, g),
        )
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}x{}", i + 1)?;
            } else {
                write!(f, "{sign}{mag}x{}", i + 1)?;
            }
            first = false;
        }
        write!(f, "<={}", self.b)
    }
}

/// A system of integer inequalities in `d` variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "HPolytopeFile", into = "HPolytopeFile")]
pub struct HPolytope {
    d: usize,
    ineqs: Vec<Inequality>,
}

/// On-disk form: `{"d":2,"ineqs":[{"a":[-1,0],"b":0},…]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HPolytopeFile {
    pub d: usize,
    pub ineqs: Vec<Inequality>,
}

impl TryFrom<HPolytopeFile> for HPolytope {
    type Error = Error;
    fn try_from(f: HPolytopeFile) -> Result<Self> {
        HPolytope::new(f.d, f.ineqs)
    }
}

impl From<HPolytope> for HPolytopeFile {
    fn from(h: HPolytope) -> Self {
        HPolytopeFile {
            d: h.d,
            ineqs: h.ineqs,
        }
    }
}

impl HPolytope {
    pub fn new(d: usize, ineqs: Vec<Inequality>) -> Result<Self> {
        check_ground(d)?;
        for q in &ineqs {
            if q.a.len() != d {
                return Err(Error::input(format!(
                    "inequality {q} has wrong length for d = {d}"
                )));
            }
            if q.a.iter().all(|&c| c == 0) {
                return Err(Error::input("inequality with zero normal"));
            }
        }
        Ok(HPolytope { d, ineqs })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ineqs(&self) -> &[Inequality] {
        &self.ineqs
    }

    pub fn len(&self) -> usize {
        self.ineqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ineqs.is_empty()
    }

    /// Integer box `lo ≤ x ≤ hi` in every coordinate.
    pub fn cube(d: usize, lo: i64, hi: i64) -> Result<Self> {
        let mut ineqs = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut a = vec![0; d];
            a[i] = -1;
            ineqs.push(Inequality::new(a.clone(), -lo));
            a[i] = 1;
            ineqs.push(Inequality::new(a, hi));
        }
        HPolytope::new(d, ineqs)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.d {
            return Err(Error::input(format!(
                "dimension mismatch: polytope in R^{}, point in R^{n}",
                self.d
            )));
        }
        Ok(())
    }
}

impl fmt::Display for HPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, q) in self.ineqs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

/// `x_i ≥ 0` for every `i`, followed by `Σ_{i∈X} x_i ≤ ρ(X)` for every
/// nonempty `X` (or only for the closed inseparable `X` when `facets_only`),
/// in canonical subset order.
pub fn independence_hrep(rank: &RankFunction, facets_only: bool) -> Result<HPolytope> {
    let d = rank.d();
    let sets: Vec<Subset> = if facets_only {
        facet_family(rank)?.sets().to_vec()
    } else {
        rank.require_valid(true)?;
        let mut all: Vec<Subset> = (1..=full_mask(d))
            .map(|m| Subset::new(d, m))
            .collect::<Result<_>>()?;
        all.sort();
        all
    };
    let mut ineqs = Vec::with_capacity(d + sets.len());
    for i in 0..d {
        let mut a = vec![0; d];
        a[i] = -1;
        ineqs.push(Inequality::new(a, 0));
    }
    for x in sets {
        let a = (0..d).map(|i| i64::from(x.mask() >> i & 1)).collect();
        let b = i64::try_from(rank.rank(&x))
            .map_err(|_| Error::input(format!("rank value of {x} exceeds i64")))?;
        ineqs.push(Inequality::new(a, b));
    }
    HPolytope::new(d, ineqs)
}

/// Exact membership test, strict or not.
pub fn contains(h: &HPolytope, v: &RationalVector, strict: bool) -> Result<bool> {
    h.check_dim(v.dim())?;
    Ok(contains_unchecked(h, v, strict))
}

fn contains_unchecked(h: &HPolytope, v: &RationalVector, strict: bool) -> bool {
    h.ineqs.iter().all(|q| {
        let lhs = q.lhs(v);
        if strict {
            lhs < int(q.b)
        } else {
            lhs <= int(q.b)
        }
    })
}

fn contains_int(h: &HPolytope, v: &[i64], strict: bool) -> bool {
    h.ineqs.iter().all(|q| {
        let lhs = q.lhs_int(v);
        if strict {
            lhs < q.b
        } else {
            lhs <= q.b
        }
    })
}

/// Non-strict membership of a rational point, evaluated in integers after
/// clearing denominators.
fn feasible_scaled(h: &HPolytope, x: &[Rational]) -> bool {
    let common = x.iter().fold(1i64, |l, q| l.lcm(q.denom()));
    let scaled: Vec<i128> = x
        .iter()
        .map(|q| i128::from(*q.numer()) * i128::from(common / q.denom()))
        .collect();
    h.ineqs.iter().all(|q| {
        let lhs: i128 =
            q.a.iter()
                .zip(&scaled)
                .map(|(&a, &y)| i128::from(a) * y)
                .sum();
        lhs <= i128::from(q.b) * i128::from(common)
    })
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| {
        acc.saturating_mul((n - i) as u64) / (i as u64 + 1)
    })
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order, stopping
/// early when `f` returns `false`.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

fn check_budget(h: &HPolytope) -> Result<()> {
    let cost = binomial(h.len(), h.d());
    if cost > VERTEX_BUDGET {
        return Err(Error::capability(format!(
            "C({}, {}) = {cost} inequality subsets exceeds the budget of {VERTEX_BUDGET}",
            h.len(),
            h.d()
        )));
    }
    Ok(())
}

/// Whether `direction` is a nonnegative combination of the rows of `h`,
/// using supports of linearly independent rows (Carathéodory).
fn in_row_cone(h: &HPolytope, direction: &[Rational]) -> bool {
    let d = h.d();
    for size in 1..=d.min(h.len()) {
        let mut found = false;
        for_each_combination(h.len(), size, |idx| {
            // unknowns: multipliers of the chosen rows; equations: coordinates
            let rows: Vec<Vec<Rational>> = (0..d)
                .map(|c| idx.iter().map(|&r| int(h.ineqs[r].a[c])).collect())
                .collect();
            if let Some(lambda) = solve_unique(&rows, direction) {
                if lambda.iter().all(|l| !l.is_negative()) {
                    found = true;
                    return false;
                }
            }
            true
        });
        if found {
            return true;
        }
    }
    false
}

/// True iff every coordinate is bounded above and below on the feasible set
/// (vacuously true for an empty set only if the rows still certify it).
pub fn is_bounded(h: &HPolytope) -> Result<bool> {
    check_budget(h)?;
    let d = h.d();
    Ok((0..d).all(|k| {
        [1, -1].iter().all(|&s| {
            let mut e = vec![Rational::zero(); d];
            e[k] = int(s);
            in_row_cone(h, &e)
        })
    }))
}

fn require_bounded(h: &HPolytope) -> Result<()> {
    if !is_bounded(h)? {
        return Err(Error::capability(format!("polytope {h} is unbounded")));
    }
    Ok(())
}

/// All vertices: feasible unique solutions of `d` tight inequalities,
/// duplicate-free and lexicographically sorted.
pub fn vertices(h: &HPolytope) -> Result<Vec<RationalVector>> {
    require_bounded(h)?;
    Ok(vertices_unchecked(h))
}

fn vertices_unchecked(h: &HPolytope) -> Vec<RationalVector> {
    let d = h.d();
    let mut found = BTreeSet::new();
    for_each_combination(h.len(), d, |idx| {
        let rows: Vec<&[i64]> = idx.iter().map(|&r| h.ineqs[r].a.as_slice()).collect();
        let rhs: Vec<i64> = idx.iter().map(|&r| h.ineqs[r].b).collect();
        if let Some(x) = solve_integer_square(&rows, &rhs) {
            if feasible_scaled(h, &x) {
                found.insert(RationalVector(x));
            }
        }
        true
    });
    found.into_iter().collect()
}

/// Affine dimension of the feasible set, `None` when it is empty.
pub fn dimension(h: &HPolytope) -> Result<Option<usize>> {
    Ok(affine_dimension(&vertices(h)?))
}

/// Bounded, nonempty polytope together with its vertices.
struct Solved<'a> {
    h: &'a HPolytope,
    vertices: Vec<RationalVector>,
}

impl<'a> Solved<'a> {
    fn new(h: &'a HPolytope) -> Result<Self> {
        let vertices = vertices(h)?;
        Ok(Solved { h, vertices })
    }

    fn require_full_dimensional(&self) -> Result<()> {
        match affine_dimension(&self.vertices) {
            None => Err(Error::capability(format!("polytope {} is empty", self.h))),
            Some(k) if k < self.h.d() => Err(Error::capability(format!(
                "polytope {} has dimension {k} < {}",
                self.h,
                self.h.d()
            ))),
            Some(_) => Ok(()),
        }
    }

    fn lattice_points(&self) -> Vec<Vec<i64>> {
        let d = self.h.d();
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let lo: Vec<i64> = (0..d)
            .map(|k| {
                self.vertices
                    .iter()
                    .map(|v| v.0[k])
                    .min()
                    .unwrap()
                    .ceil()
                    .to_integer()
            })
            .collect();
        let hi: Vec<i64> = (0..d)
            .map(|k| {
                self.vertices
                    .iter()
                    .map(|v| v.0[k])
                    .max()
                    .unwrap()
                    .floor()
                    .to_integer()
            })
            .collect();
        let mut out = Vec::new();
        let mut x = lo.clone();
        loop {
            if contains_int(self.h, &x, false) {
                out.push(x.clone());
            }
            // odometer over the box, last coordinate fastest gives lex order
            let Some(k) = (0..d).rev().find(|&k| x[k] < hi[k]) else {
                break;
            };
            x[k] += 1;
            x[k + 1..].copy_from_slice(&lo[k + 1..]);
        }
        out
    }

    fn facets(&self) -> Result<HPolytope> {
        self.require_full_dimensional()?;
        let d = self.h.d();
        let mut kept = Vec::new();
        let mut seen = BTreeSet::new();
        for q in &self.h.ineqs {
            let tight: Vec<RationalVector> = self
                .vertices
                .iter()
                .filter(|v| q.lhs(v) == int(q.b))
                .cloned()
                .collect();
            if affine_dimension(&tight).is_some_and(|k| k + 1 == d) && seen.insert(q.primitive()) {
                kept.push(q.clone());
            }
        }
        HPolytope::new(d, kept)
    }
}

/// All integer points of a bounded polytope, lexicographically sorted.
pub fn lattice_points(h: &HPolytope) -> Result<Vec<Vec<i64>>> {
    Ok(Solved::new(h)?.lattice_points())
}

/// Lattice points as a [`PointSet`]; input error if any point has a
/// negative coordinate.
pub fn lattice_point_set(h: &HPolytope) -> Result<PointSet> {
    let points = lattice_points(h)?
        .into_iter()
        .map(|p| {
            p.into_iter()
                .map(|c| u64::try_from(c).map_err(|_| Error::input("negative lattice point")))
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(h.d(), points)
}

/// Integer points satisfying every inequality strictly.
pub fn interior_lattice_points(h: &HPolytope) -> Result<Vec<Vec<i64>>> {
    Ok(Solved::new(h)?
        .lattice_points()
        .into_iter()
        .filter(|p| contains_int(h, p, true))
        .collect())
}

/// The inequalities that define facets, i.e. are tight at `d` affinely
/// independent vertices. Repeated facets are kept once.
pub fn irredundant(h: &HPolytope) -> Result<HPolytope> {
    Solved::new(h)?.facets()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflexivityReport {
    pub reflexive: bool,
    pub center: Option<Vec<i64>>,
}

/// Reflexive iff some interior lattice point `c` has lattice distance one to
/// every facet: `a·c = b − 1` for each facet with primitive normal `a`.
pub fn is_reflexive_direct(h: &HPolytope) -> Result<ReflexivityReport> {
    Ok(analyze(h)?.reflexivity)
}

/// Everything the exact geometry computes about one bounded,
/// full-dimensional polytope, from a single vertex enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeAnalysis {
    pub vertices: Vec<RationalVector>,
    pub facets: HPolytope,
    pub lattice_points: Vec<Vec<i64>>,
    pub reflexivity: ReflexivityReport,
}

pub fn analyze(h: &HPolytope) -> Result<PolytopeAnalysis> {
    let solved = Solved::new(h)?;
    let facets = solved.facets()?;
    let lattice_points = solved.lattice_points();
    let reflexivity = reflexivity_from(h, &facets, &lattice_points)?;
    Ok(PolytopeAnalysis {
        vertices: solved.vertices,
        facets,
        lattice_points,
        reflexivity,
    })
}

fn reflexivity_from(
    h: &HPolytope,
    facets: &HPolytope,
    lattice_points: &[Vec<i64>],
) -> Result<ReflexivityReport> {
    let normals: Vec<(Vec<i64>, Rational)> =
        facets.ineqs().iter().map(Inequality::primitive).collect();
    let centers: Vec<&Vec<i64>> = lattice_points
        .iter()
        .filter(|c| contains_int(h, c, true))
        .filter(|c| {
            normals.iter().all(|(a, b)| {
                let ac: i64 = a.iter().zip(c.iter()).map(|(x, y)| x * y).sum();
                int(ac) == *b - one()
            })
        })
        .collect();
    match centers.as_slice() {
        [] => Ok(ReflexivityReport {
            reflexive: false,
            center: None,
        }),
        [c] => Ok(ReflexivityReport {
            reflexive: true,
            center: Some((*c).clone()),
        }),
        _ => Err(Error::internal(format!(
            "polytope {h} has several lattice-distance-one centers: {centers:?}"
        ))),
    }
}

/// Vertices `a / (b − a·c)` of the dual of `P − c`, one per facet with
/// primitive normal `a`, lexicographically sorted.
pub fn dual_vertices(h: &HPolytope, center: &[i64]) -> Result<Vec<RationalVector>> {
    h.check_dim(center.len())?;
    if !contains_int(h, center, true) {
        return Err(Error::input(format!(
            "center {center:?} is not in the interior of {h}"
        )));
    }
    let facets = irredundant(h)?;
    let mut out: Vec<RationalVector> = facets
        .ineqs()
        .iter()
        .map(|q| {
            let (a, b) = q.primitive();
            let ac: i64 = a.iter().zip(center).map(|(x, y)| x * y).sum();
            let dist = b - int(ac);
            RationalVector(a.iter().map(|&x| int(x) / dist).collect())
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub v: RationalVector,
    pub inside: bool,
    #[serde(serialize_with = "serialize_rational")]
    pub modulus: Rational,
}

fn serialize_rational<S: serde::Serializer>(
    q: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::rational::render(q))
}

/// Point certifying `ρ(X) > |X| + 1` for `X` off the facet family:
/// `(q/(q−1))·χ_X` when `q = |X| ≥ 2`, and `3e_i` when `X = {i}`.
pub fn eq2_witness(rank: &RankFunction, x: &Subset) -> Result<WitnessReport> {
    let family = facet_family(rank)?;
    if x.is_empty() {
        return Err(Error::input("witness needs a nonempty subset"));
    }
    if family.contains(x) {
        return Err(Error::input(format!(
            "{x} is closed and inseparable; the witness is only defined off the facet family"
        )));
    }
    let q = x.len() as i64;
    let scale = if q == 1 {
        int(3)
    } else {
        Rational::new(q, q - 1)
    };
    let v = RationalVector(
        (1..=rank.d())
            .map(|i| {
                if x.contains(i) {
                    scale
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    );
    let modulus = v.sum();
    let inside = contains_unchecked(&independence_hrep(rank, false)?, &v, false);
    Ok(WitnessReport { v, inside, modulus })
}
