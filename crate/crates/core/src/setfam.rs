//! Subsets of the ground set `[d] = {1, …, d}` encoded as bitmasks, canonical
//! families of subsets, and sublattices of the Boolean lattice `2^[d]`.
//!
//! Bit `i − 1` of a mask is set exactly when element `i` belongs to the
//! subset. Every cross-module API uses this encoding.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set accepted anywhere in the crate.
pub const MAX_GROUND: usize = 16;
/// Largest ground set for which sublattices are enumerated exhaustively.
pub const MAX_ENUM_GROUND: usize = 4;

/// Mask of the full ground set `[d]`.
pub fn full_mask(d: usize) -> u32 {
    debug_assert!(d <= MAX_GROUND);
    ((1u64 << d) - 1) as u32
}

pub(crate) fn check_ground(d: usize) -> Result<()> {
    if d == 0 || d > MAX_GROUND {
        return Err(Error::input(format!(
            "ground set size {d} outside 1..={MAX_GROUND}"
        )));
    }
    Ok(())
}

/// A subset of `[d]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Subset {
    d: u8,
    mask: u32,
}

impl Subset {
    pub fn new(d: usize, mask: u32) -> Result<Self> {
        check_ground(d)?;
        if mask > full_mask(d) {
            return Err(Error::input(format!(
                "mask {mask:#b} out of range for d = {d}"
            )));
        }
        Ok(Subset { d: d as u8, mask })
    }

    pub(crate) fn new_unchecked(d: usize, mask: u32) -> Self {
        debug_assert!(mask <= full_mask(d));
        Subset { d: d as u8, mask }
    }

    pub fn empty(d: usize) -> Result<Self> {
        Subset::new(d, 0)
    }

    pub fn full(d: usize) -> Result<Self> {
        check_ground(d)?;
        Ok(Subset::new_unchecked(d, full_mask(d)))
    }

    /// Builds a subset from 1-based elements. Duplicates are ignored.
    pub fn from_elements(d: usize, elements: &[usize]) -> Result<Self> {
        check_ground(d)?;
        let mut mask = 0u32;
        for &e in elements {
            if e == 0 || e > d {
                return Err(Error::input(format!("element {e} not in [1, {d}]")));
            }
            mask |= 1 << (e - 1);
        }
        Ok(Subset::new_unchecked(d, mask))
    }

    pub fn d(&self) -> usize {
        self.d as usize
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == full_mask(self.d())
    }

    /// Membership of the 1-based element `i`.
    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.d() && self.mask & (1 << (i - 1)) != 0
    }

    /// 1-based elements in ascending order.
    pub fn elements(&self) -> Vec<usize> {
        (1..=self.d()).filter(|&i| self.contains(i)).collect()
    }

    pub fn union(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.d, other.d);
        Subset::new_unchecked(self.d(), self.mask | other.mask)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.d, other.d);
        Subset::new_unchecked(self.d(), self.mask & other.mask)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.mask & !other.mask == 0
    }
}

/// Serialized as its ascending list of 1-based elements.
impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(serializer)
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: cardinality, then mask value.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.d, self.len(), self.mask).cmp(&(other.d, other.len(), other.mask))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.elements().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A duplicate-free family of subsets of `[d]` in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "SetFamilyFile", into = "SetFamilyFile")]
pub struct SetFamily {
    d: usize,
    sets: Vec<Subset>,
}

impl SetFamily {
    pub fn new(d: usize, sets: impl IntoIterator<Item = Subset>) -> Result<Self> {
        check_ground(d)?;
        let mut collected = BTreeSet::new();
        for s in sets {
            if s.d() != d {
                return Err(Error::input(format!(
                    "subset {s} lives in [{}], family is over [{d}]",
                    s.d()
                )));
            }
            collected.insert(s);
        }
        Ok(SetFamily {
            d,
            sets: collected.into_iter().collect(),
        })
    }

    pub fn from_masks(d: usize, masks: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_ground(d)?;
        let sets = masks
            .into_iter()
            .map(|m| Subset::new(d, m))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(d, sets)
    }

    /// Builds a family from 1-based element lists.
    pub fn from_element_lists<L: AsRef<[usize]>>(d: usize, lists: &[L]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| Subset::from_elements(d, l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(d, sets)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Subset> {
        self.sets.iter()
    }

    pub fn masks(&self) -> Vec<u32> {
        self.sets.iter().map(Subset::mask).collect()
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        self.sets
            .binary_search(&Subset::new_unchecked(self.d, mask))
            .is_ok()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        s.d() == self.d && self.contains_mask(s.mask())
    }

    /// The family with the empty set removed.
    pub fn without_empty(&self) -> SetFamily {
        SetFamily {
            d: self.d,
            sets: self
                .sets
                .iter()
                .copied()
                .filter(|s| !s.is_empty())
                .collect(),
        }
    }

    /// The family with the empty set adjoined.
    pub fn with_empty(&self) -> SetFamily {
        let mut sets = self.sets.clone();
        if !self.contains_mask(0) {
            sets.insert(0, Subset::new_unchecked(self.d, 0));
        }
        SetFamily { d: self.d, sets }
    }
}

impl PartialOrd for SetFamily {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the canonical mask sequence.
impl Ord for SetFamily {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d
            .cmp(&other.d)
            .then_with(|| self.masks().cmp(&other.masks()))
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, s) in self.sets.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// On-disk form: `{"d":3,"sets":[[],[3],[2,3],[1,2,3]]}` with 1-based elements.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFamilyFile {
    pub d: usize,
    pub sets: Vec<Vec<usize>>,
}

impl TryFrom<SetFamilyFile> for SetFamily {
    type Error = Error;

    fn try_from(file: SetFamilyFile) -> Result<Self> {
        SetFamily::from_element_lists(file.d, &file.sets)
    }
}

impl From<SetFamily> for SetFamilyFile {
    fn from(f: SetFamily) -> Self {
        SetFamilyFile {
            d: f.d,
            sets: f.sets.iter().map(Subset::elements).collect(),
        }
    }
}

/// True iff `F` contains `∅` and `[d]` and is closed under pairwise union
/// and intersection.
pub fn is_sublattice(family: &SetFamily) -> bool {
    let d = family.d();
    if !family.contains_mask(0) || !family.contains_mask(full_mask(d)) {
        return false;
    }
    let masks = family.masks();
    masks.iter().enumerate().all(|(k, &a)| {
        masks[k + 1..]
            .iter()
            .all(|&b| family.contains_mask(a | b) && family.contains_mask(a & b))
    })
}

/// Smallest sublattice of `2^[d]` containing `F ∪ {∅, [d]}`.
pub fn lattice_closure(family: &SetFamily) -> SetFamily {
    let d = family.d();
    let mut masks: BTreeSet<u32> = family.masks().into_iter().collect();
    masks.insert(0);
    masks.insert(full_mask(d));
    loop {
        let current: Vec<u32> = masks.iter().copied().collect();
        let before = masks.len();
        for (k, &a) in current.iter().enumerate() {
            for &b in &current[k + 1..] {
                masks.insert(a | b);
                masks.insert(a & b);
            }
        }
        if masks.len() == before {
            break;
        }
    }
    SetFamily {
        d,
        sets: {
            let mut sets: Vec<Subset> = masks
                .into_iter()
                .map(|m| Subset::new_unchecked(d, m))
                .collect();
            sets.sort();
            sets
        },
    }
}

/// Every sublattice of `2^[d]`, each exactly once, in canonical order.
///
/// Brute force over all families of proper nonempty subsets, filtered by
/// closure. Capped at `d ≤ 4`.
pub fn enumerate_sublattices(d: usize) -> Result<Vec<SetFamily>> {
    if d == 0 || d > MAX_ENUM_GROUND {
        return Err(Error::capability(format!(
            "sublattice enumeration supports 1 <= d <= {MAX_ENUM_GROUND}, got {d}"
        )));
    }
    let full = full_mask(d);
    let middle: Vec<u32> = (1..full).collect();
    let mut out = Vec::new();
    for choice in 0u64..(1u64 << middle.len()) {
        let mut masks = vec![0, full];
        masks.extend(
            middle
                .iter()
                .enumerate()
                .filter(|(k, _)| choice >> k & 1 == 1)
                .map(|(_, &m)| m),
        );
        let family = SetFamily::from_masks(d, masks)?;
        if is_sublattice(&family) {
            out.push(family);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(d: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_element_lists(d, lists).unwrap()
    }

    #[test]
    fn subset_encoding() {
        let s = Subset::from_elements(3, &[3, 2]).unwrap();
        assert_eq!(s.mask(), 0b110);
        assert_eq!(s.len(), 2);
        assert_eq!(s.elements(), vec![2, 3]);
        assert_eq!(s.to_string(), "{2,3}");
        assert!(Subset::new(2, 4).is_err());
        assert!(Subset::from_elements(2, &[3]).is_err());
        assert!(Subset::from_elements(2, &[0]).is_err());
        assert!(Subset::full(17).is_err());
    }

    #[test]
    fn canonical_order_is_cardinality_then_mask() {
        let f = SetFamily::from_masks(3, [7, 4, 3, 0, 1, 4]).unwrap();
        assert_eq!(f.masks(), vec![0, 1, 4, 3, 7]);
    }

    #[test]
    fn sublattice_examples() {
        assert!(is_sublattice(&fam(2, &[&[], &[1, 2]])));
        assert!(is_sublattice(&fam(2, &[&[], &[1], &[2], &[1, 2]])));
        assert!(is_sublattice(&fam(3, &[&[], &[3], &[2, 3], &[1, 2, 3]])));
        assert!(!is_sublattice(&fam(2, &[&[], &[1], &[2]])));
        // missing ∅
        assert!(!is_sublattice(&fam(2, &[&[1], &[1, 2]])));
    }

    #[test]
    fn closure_examples() {
        let empty = SetFamily::new(2, []).unwrap();
        assert_eq!(lattice_closure(&empty), fam(2, &[&[], &[1, 2]]));
        assert_eq!(
            lattice_closure(&fam(2, &[&[1], &[2]])),
            fam(2, &[&[], &[1], &[2], &[1, 2]])
        );
        assert_eq!(
            lattice_closure(&fam(3, &[&[3], &[2, 3]])),
            fam(3, &[&[], &[3], &[2, 3], &[1, 2, 3]])
        );
    }

    #[test]
    fn enumeration_small_cases() {
        let one = enumerate_sublattices(1).unwrap();
        assert_eq!(one, vec![fam(1, &[&[], &[1]])]);
        assert_eq!(enumerate_sublattices(2).unwrap().len(), 4);
        assert!(matches!(
            enumerate_sublattices(5),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            enumerate_sublattices(0),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn file_format() {
        let f: SetFamily =
            serde_json::from_str(r#"{"d":3,"sets":[[2,3],[],[3],[1,2,3]]}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"d":3,"sets":[[],[3],[2,3],[1,2,3]]}"#
        );
        assert!(serde_json::from_str::<SetFamily>(r#"{"d":2,"sets":[[3]]}"#).is_err());
    }
}
