//! Finite standard sets `[n] = {1, ..., n}`, functions between them and
//! surjection counting.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A function `[source_size] -> [target_size]`, stored as its 1-based value
/// sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinMap {
    target_size: usize,
    values: Vec<usize>,
}

impl FinMap {
    pub fn new(values: Vec<usize>, target_size: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("a map needs a nonempty source".into()));
        }
        if target_size == 0 {
            return Err(Error::InvalidInput("a map needs a nonempty target".into()));
        }
        if let Some(bad) = values.iter().find(|&&v| v == 0 || v > target_size) {
            return Err(Error::InvalidInput(format!(
                "value {bad} outside [1, {target_size}]"
            )));
        }
        Ok(FinMap { target_size, values })
    }

    /// Builds a map whose values are already known to be in range.
    pub(crate) fn from_parts(values: Vec<usize>, target_size: usize) -> Self {
        debug_assert!(values.iter().all(|&v| (1..=target_size).contains(&v)));
        FinMap { target_size, values }
    }

    pub fn identity(n: usize) -> Self {
        FinMap::from_parts((1..=n).collect(), n)
    }

    /// The unique map `[n] -> [1]`.
    pub fn collapse(n: usize) -> Self {
        FinMap::from_parts(vec![1; n], 1)
    }

    pub fn source_size(&self) -> usize {
        self.values.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Image of the 1-based element `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.values[x - 1]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target_size];
        for &v in &self.values {
            hit[v - 1] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.source_size() == self.target_size && self.is_surjective()
    }

    /// `fiber_sizes()[i - 1] = |f^{-1}(i)|`.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.target_size];
        for &v in &self.values {
            sizes[v - 1] += 1;
        }
        sizes
    }

    /// Preimages of each target element, each listed in increasing order.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.target_size];
        for (x, &v) in self.values.iter().enumerate() {
            fibers[v - 1].push(x + 1);
        }
        fibers
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &FinMap) -> Result<FinMap> {
        compose(self, inner)
    }
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]:[{}]->[{}]", self.source_size(), self.target_size)
    }
}

/// `g ∘ f`, defined when `f` lands in the source of `g`.
pub fn compose(g: &FinMap, f: &FinMap) -> Result<FinMap> {
    if f.target_size != g.source_size() {
        return Err(Error::SizeMismatch(format!(
            "cannot compose {g} after {f}: [{}] != [{}]",
            f.target_size,
            g.source_size()
        )));
    }
    let values = f.values.iter().map(|&x| g.apply(x)).collect();
    Ok(FinMap::from_parts(values, g.target_size))
}

/// All surjections `[k] ↠ [i]` in lexicographic order of their value
/// sequences.
pub fn enumerate_surjections(k: usize, i: usize) -> Vec<FinMap> {
    let mut out = Vec::new();
    if k == 0 || i == 0 || i > k {
        return out;
    }
    let mut values = Vec::with_capacity(k);
    let mut hits = vec![0usize; i];
    let mut missing = i;
    extend_surjections(k, i, &mut values, &mut hits, &mut missing, &mut out);
    out
}

fn extend_surjections(
    k: usize,
    i: usize,
    values: &mut Vec<usize>,
    hits: &mut [usize],
    missing: &mut usize,
    out: &mut Vec<FinMap>,
) {
    if values.len() == k {
        if *missing == 0 {
            out.push(FinMap::from_parts(values.clone(), i));
        }
        return;
    }
    // every still-missing value needs its own remaining slot
    if k - values.len() < *missing {
        return;
    }
    for v in 1..=i {
        hits[v - 1] += 1;
        if hits[v - 1] == 1 {
            *missing -= 1;
        }
        values.push(v);
        extend_surjections(k, i, values, hits, missing, out);
        values.pop();
        if hits[v - 1] == 1 {
            *missing += 1;
        }
        hits[v - 1] -= 1;
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

/// `|Epi(k, i)|` by inclusion–exclusion:
/// `Σ_{j=0}^{i} (-1)^j C(i, j) (i - j)^k`.
pub fn surjection_count(k: usize, i: usize) -> BigUint {
    let mut total = BigInt::zero();
    for j in 0..=i {
        let term = BigInt::from(binomial(i, j)) * BigInt::from(i - j).pow(k as u32);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    debug_assert!(!total.is_negative());
    total.to_biguint().expect("inclusion-exclusion count is nonnegative")
}

/// Surjection count narrowed to `u64`, for the small sizes where hom sets are
/// actually enumerated.
pub fn surjection_count_u64(k: usize, i: usize) -> Result<u64> {
    let c = surjection_count(k, i);
    u64::try_from(&c).map_err(|_| Error::Overflow(format!("|Epi({k},{i})| = {c}")))
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, j| acc * BigUint::from(j))
}

/// Splits a surjection `[k] ↠ [l]` into quotient maps `[n] ↠ [n - 1]`, each
/// identifying exactly two elements, followed by a bijection `[l] -> [l]`.
///
/// Composing the returned steps in order reproduces `f`.
pub fn elementary_factorization(f: &FinMap) -> Result<(Vec<FinMap>, FinMap)> {
    if !f.is_surjective() {
        return Err(Error::InvalidInput(format!("{f} is not surjective")));
    }
    let mut steps = Vec::new();
    let mut rest = f.clone();
    while rest.source_size() > rest.target_size() {
        let n = rest.source_size();
        let (x, y) = first_collision(&rest);
        // y is merged into x; elements after y shift down by one
        let quotient: Vec<usize> = (1..=n)
            .map(|z| match z.cmp(&y) {
                std::cmp::Ordering::Less => z,
                std::cmp::Ordering::Equal => x,
                std::cmp::Ordering::Greater => z - 1,
            })
            .collect();
        let reduced: Vec<usize> = (1..=n).filter(|&z| z != y).map(|z| rest.apply(z)).collect();
        steps.push(FinMap::from_parts(quotient, n - 1));
        rest = FinMap::from_parts(reduced, rest.target_size());
    }
    Ok((steps, rest))
}

fn first_collision(f: &FinMap) -> (usize, usize) {
    let mut seen = vec![0usize; f.target_size()];
    for x in 1..=f.source_size() {
        let v = f.apply(x);
        if seen[v - 1] != 0 {
            return (seen[v - 1], x);
        }
        seen[v - 1] = x;
    }
    unreachable!("called on an injective map")
}
