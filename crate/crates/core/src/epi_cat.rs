//! The slice categories `Epi_{d,r} = (Epi_d)_{/[r]}`.
//!
//! An object is a surjection `[k] ↠ [r]`; up to isomorphism it is determined
//! by its fiber sizes `(k_1, ..., k_r)`, so every object is kept in the
//! canonical form where the elements `1..=k_1` map to 1, the next `k_2` map
//! to 2, and so on. `r = 1` is plain `Epi_d`.
//!
//! The global basis order used by every table in the crate is: total size
//! ascending, then fiber tuple lexicographically.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::finset::{compose, enumerate_surjections, surjection_count, FinMap};
use crate::par::{self, Exec};
use crate::{Error, Result};

/// A canonical object `[k] ↠ [r]` of `Epi_{d,r}`, identified with its fiber
/// tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SliceObject {
    fibers: Vec<usize>,
}

impl SliceObject {
    pub fn new(fibers: Vec<usize>) -> Result<Self> {
        if fibers.is_empty() {
            return Err(Error::InvalidInput("fiber tuple must be nonempty".into()));
        }
        if fibers.contains(&0) {
            return Err(Error::InvalidInput(format!(
                "fiber tuple {fibers:?} has an empty fiber"
            )));
        }
        Ok(SliceObject { fibers })
    }

    /// The final object `[r] = [r]`.
    pub fn terminal(r: usize) -> Self {
        SliceObject { fibers: vec![1; r] }
    }

    /// Canonicalizes an arbitrary surjection `[k] ↠ [r]`.
    ///
    /// Returns the canonical object and the relabeling `old element -> new
    /// element` (1-based, as a `FinMap`), which is an isomorphism over `[r]`.
    pub fn from_structure_map(structure: &FinMap) -> Result<(Self, FinMap)> {
        if !structure.is_surjective() {
            return Err(Error::InvalidInput(format!(
                "{structure} is not a surjection onto [r]"
            )));
        }
        let fibers = structure.fiber_sizes();
        let mut next: Vec<usize> = Vec::with_capacity(fibers.len());
        let mut start = 1;
        for &n in &fibers {
            next.push(start);
            start += n;
        }
        let relabel = structure
            .values()
            .iter()
            .map(|&i| {
                let new = next[i - 1];
                next[i - 1] += 1;
                new
            })
            .collect();
        let total = structure.source_size();
        Ok((SliceObject { fibers }, FinMap::from_parts(relabel, total)))
    }

    pub fn fibers(&self) -> &[usize] {
        &self.fibers
    }

    /// `r`, the size of the base.
    pub fn rank(&self) -> usize {
        self.fibers.len()
    }

    pub fn total_size(&self) -> usize {
        self.fibers.iter().sum()
    }

    /// The base point of the 1-based element `x`.
    pub fn structure_of(&self, x: usize) -> usize {
        let mut acc = 0;
        for (i, &n) in self.fibers.iter().enumerate() {
            acc += n;
            if x <= acc {
                return i + 1;
            }
        }
        panic!("element {x} outside object {self}")
    }

    pub fn structure_map(&self) -> FinMap {
        let values = self
            .fibers
            .iter()
            .enumerate()
            .flat_map(|(i, &n)| std::iter::repeat(i + 1).take(n))
            .collect();
        FinMap::from_parts(values, self.rank())
    }

    /// First element of fiber `i` (1-based) minus one.
    pub fn block_offset(&self, i: usize) -> usize {
        self.fibers[..i - 1].iter().sum()
    }

    /// The order used everywhere for bases: size, then lexicographic.
    pub fn basis_cmp(&self, other: &Self) -> Ordering {
        self.total_size()
            .cmp(&other.total_size())
            .then_with(|| self.fibers.cmp(&other.fibers))
    }
}

impl PartialOrd for SliceObject {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SliceObject {
    fn cmp(&self, other: &Self) -> Ordering {
        self.basis_cmp(other)
    }
}

impl fmt::Display for SliceObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.fibers.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// A surjection between canonical objects commuting with the maps to `[r]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SliceMorphism {
    source: SliceObject,
    target: SliceObject,
    map: FinMap,
}

impl SliceMorphism {
    pub fn new(source: SliceObject, target: SliceObject, map: FinMap) -> Result<Self> {
        if source.rank() != target.rank() {
            return Err(Error::SizeMismatch(format!(
                "{source} and {target} live over different bases"
            )));
        }
        if map.source_size() != source.total_size() || map.target_size() != target.total_size() {
            return Err(Error::SizeMismatch(format!(
                "{map} does not go from {source} to {target}"
            )));
        }
        if !map.is_surjective() {
            return Err(Error::InvalidInput(format!("{map} is not surjective")));
        }
        for x in 1..=source.total_size() {
            if target.structure_of(map.apply(x)) != source.structure_of(x) {
                return Err(Error::InvalidInput(format!(
                    "{map} does not commute with the maps to [{}]",
                    source.rank()
                )));
            }
        }
        Ok(SliceMorphism { source, target, map })
    }

    pub(crate) fn from_parts(source: SliceObject, target: SliceObject, map: FinMap) -> Self {
        SliceMorphism { source, target, map }
    }

    pub fn identity(u: &SliceObject) -> Self {
        SliceMorphism::from_parts(u.clone(), u.clone(), FinMap::identity(u.total_size()))
    }

    /// The unique map to the final object.
    pub fn to_terminal(u: &SliceObject) -> Self {
        SliceMorphism::from_parts(u.clone(), SliceObject::terminal(u.rank()), u.structure_map())
    }

    pub fn source(&self) -> &SliceObject {
        &self.source
    }

    pub fn target(&self) -> &SliceObject {
        &self.target
    }

    pub fn map(&self) -> &FinMap {
        &self.map
    }

    pub fn is_iso(&self) -> bool {
        self.map.is_bijective()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &SliceMorphism) -> Result<SliceMorphism> {
        if inner.target != self.source {
            return Err(Error::SizeMismatch(format!(
                "cannot compose through {} and {}",
                inner.target, self.source
            )));
        }
        Ok(SliceMorphism::from_parts(
            inner.source.clone(),
            self.target.clone(),
            compose(&self.map, &inner.map)?,
        ))
    }
}

impl fmt::Display for SliceMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} via {:?}", self.source, self.target, self.map.values())
    }
}

/// One canonical object per isomorphism class of `Epi_{d,r}`, in basis order.
pub fn enumerate_objects(d: usize, r: usize) -> Result<Vec<SliceObject>> {
    if r == 0 || r > d {
        return Err(Error::InvalidInput(format!("need 1 <= r <= d, got d={d}, r={r}")));
    }
    let mut out = Vec::new();
    for total in r..=d {
        let mut tuple = Vec::with_capacity(r);
        compositions(total, r, &mut tuple, &mut out);
    }
    Ok(out)
}

fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<SliceObject>) {
    if parts == 1 {
        prefix.push(total);
        out.push(SliceObject { fibers: prefix.clone() });
        prefix.pop();
        return;
    }
    for first in 1..=total - (parts - 1) {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// All morphisms `u -> v` over `[r]`, lexicographic in their value sequences.
///
/// Objects over different bases have no morphisms between them.
pub fn hom_set(u: &SliceObject, v: &SliceObject) -> Vec<SliceMorphism> {
    if u.rank() != v.rank() || u.fibers.iter().zip(&v.fibers).any(|(a, b)| a < b) {
        return Vec::new();
    }
    let blocks: Vec<Vec<FinMap>> = u
        .fibers
        .iter()
        .zip(&v.fibers)
        .map(|(&a, &b)| enumerate_surjections(a, b))
        .collect();
    let mut out = Vec::new();
    let mut values = Vec::with_capacity(u.total_size());
    hom_product(u, v, &blocks, 0, &mut values, &mut out);
    out
}

fn hom_product(
    u: &SliceObject,
    v: &SliceObject,
    blocks: &[Vec<FinMap>],
    block: usize,
    values: &mut Vec<usize>,
    out: &mut Vec<SliceMorphism>,
) {
    if block == blocks.len() {
        let map = FinMap::from_parts(values.clone(), v.total_size());
        out.push(SliceMorphism::from_parts(u.clone(), v.clone(), map));
        return;
    }
    let offset = v.block_offset(block + 1);
    for piece in &blocks[block] {
        let len = values.len();
        values.extend(piece.values().iter().map(|&x| x + offset));
        hom_product(u, v, blocks, block + 1, values, out);
        values.truncate(len);
    }
}

/// `|Hom(u, v)| = Π_i |Epi(u_i, v_i)|`.
pub fn hom_count(u: &SliceObject, v: &SliceObject) -> BigUint {
    if u.rank() != v.rank() {
        return BigUint::default();
    }
    u.fibers
        .iter()
        .zip(&v.fibers)
        .fold(BigUint::one(), |acc, (&a, &b)| acc * surjection_count(a, b))
}

/// Outcome of the mechanical atomic / inductive-orbital check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitalityReport {
    pub d: usize,
    pub r: usize,
    pub iso_classes: usize,
    pub morphisms: usize,
    /// Every endomorphism is an isomorphism.
    pub endomorphisms_invertible: bool,
    /// Whenever `g ∘ f` is an isomorphism, so are `f` and `g`.
    pub atomic: bool,
    pub counterexample: Option<String>,
    pub pass: bool,
}

pub fn check_atomic_orbital(d: usize, r: usize) -> Result<OrbitalityReport> {
    check_atomic_orbital_with(d, r, Exec::default())
}

pub fn check_atomic_orbital_with(d: usize, r: usize, exec: Exec) -> Result<OrbitalityReport> {
    let objects = enumerate_objects(d, r)?;
    let homs: Vec<Vec<Vec<SliceMorphism>>> = objects
        .iter()
        .map(|u| objects.iter().map(|v| hom_set(u, v)).collect())
        .collect();
    let morphisms = homs.iter().flatten().map(Vec::len).sum();

    let mut counterexample = None;
    let endo_bad = objects
        .iter()
        .enumerate()
        .flat_map(|(i, _)| homs[i][i].iter())
        .find(|f| !f.is_iso());
    if let Some(f) = endo_bad {
        counterexample = Some(format!("non-invertible endomorphism {f}"));
    }
    let endomorphisms_invertible = endo_bad.is_none();

    let pairs: Vec<(usize, usize)> = (0..objects.len())
        .flat_map(|i| (0..objects.len()).map(move |j| (i, j)))
        .collect();
    let retract_bad = par::find_first(exec, &pairs, |&(i, j)| {
        for f in &homs[i][j] {
            for g in &homs[j][i] {
                let gf = g.after(f).expect("composable by construction");
                if gf.is_iso() && !(f.is_iso() && g.is_iso()) {
                    return Some(format!("g∘f invertible but f={f}, g={g}"));
                }
            }
        }
        None
    });
    let atomic = retract_bad.is_none();
    if counterexample.is_none() {
        counterexample = retract_bad;
    }
    Ok(OrbitalityReport {
        d,
        r,
        iso_classes: objects.len(),
        morphisms,
        endomorphisms_invertible,
        atomic,
        pass: endomorphisms_invertible && atomic,
        counterexample,
    })
}
