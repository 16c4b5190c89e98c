//! Grid posets: the subdivided cubes `Q_{d,r}` and the boxes
//! `Δ^{k_1} × ⋯ × Δ^{k_r}`, with the sub-posets that diagrams get extended
//! from.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which way the covering arrows point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `x → x - δ_i`, from larger tuples to smaller ones.
    Descending,
    /// `x → x + δ_i`.
    Ascending,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// `Q_{d,r} = [1, m]^r` with `m = d - r + 1`, arrows descending.
    Subdivided { d: usize, r: usize },
    /// `Π_i {0 → 1 → ⋯ → k_i}`, arrows ascending.
    Box { bounds: Vec<usize> },
}

/// The elements of a grid poset in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubePoset {
    shape: Shape,
    lo: Vec<usize>,
    hi: Vec<usize>,
    orientation: Orientation,
    elements: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl CubePoset {
    pub fn subdivided(d: usize, r: usize) -> Result<Self> {
        if r == 0 || r > d {
            return Err(Error::InvalidInput(format!("need 1 <= r <= d, got d={d}, r={r}")));
        }
        let m = d - r + 1;
        Ok(CubePoset::build(Shape::Subdivided { d, r }, vec![1; r], vec![m; r], Orientation::Descending))
    }

    pub fn boxed(bounds: Vec<usize>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidInput("a box needs at least one factor".into()));
        }
        let lo = vec![0; bounds.len()];
        Ok(CubePoset::build(Shape::Box { bounds: bounds.clone() }, lo, bounds, Orientation::Ascending))
    }

    pub fn from_shape(shape: &Shape) -> Result<Self> {
        match shape {
            Shape::Subdivided { d, r } => CubePoset::subdivided(*d, *r),
            Shape::Box { bounds } => CubePoset::boxed(bounds.clone()),
        }
    }

    fn build(shape: Shape, lo: Vec<usize>, hi: Vec<usize>, orientation: Orientation) -> Self {
        let mut elements = vec![lo.clone()];
        for i in 0..lo.len() {
            elements = elements
                .into_iter()
                .flat_map(|e| {
                    (lo[i]..=hi[i]).map(move |x| {
                        let mut e = e.clone();
                        e[i] = x;
                        e
                    })
                })
                .collect();
        }
        elements.sort();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        CubePoset { shape, lo, hi, orientation, elements, index }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &[usize] {
        &self.elements[i]
    }

    pub fn index_of(&self, x: &[usize]) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// One arrow from `x` in direction `i` (0-based), if it stays in the grid.
    pub fn step(&self, x: usize, i: usize) -> Option<usize> {
        let mut y = self.elements[x].clone();
        match self.orientation {
            Orientation::Descending if y[i] > self.lo[i] => y[i] -= 1,
            Orientation::Ascending if y[i] < self.hi[i] => y[i] += 1,
            _ => return None,
        }
        self.index_of(&y)
    }

    /// Directions in which an arrow leaves `x`.
    pub fn directions(&self, x: usize) -> Vec<usize> {
        (0..self.dimension()).filter(|&i| self.step(x, i).is_some()).collect()
    }

    /// Whether there is an arrow (possibly an identity) `a → b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        let (a, b) = (&self.elements[a], &self.elements[b]);
        match self.orientation {
            Orientation::Descending => a.iter().zip(b).all(|(x, y)| x >= y),
            Orientation::Ascending => a.iter().zip(b).all(|(x, y)| x <= y),
        }
    }

    /// The source of every arrow, the one with no incoming arrows.
    pub fn initial(&self) -> usize {
        match self.orientation {
            Orientation::Descending => self.elements.len() - 1,
            Orientation::Ascending => 0,
        }
    }

    pub fn terminal(&self) -> usize {
        match self.orientation {
            Orientation::Descending => 0,
            Orientation::Ascending => self.elements.len() - 1,
        }
    }

    /// Elements ordered so every arrow goes from a later one to an earlier
    /// one; building in this order sees targets before sources.
    pub fn sinks_first(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        match self.orientation {
            Orientation::Descending => order.sort_by_key(|&i| self.elements[i].iter().sum::<usize>()),
            Orientation::Ascending => order.sort_by_key(|&i| std::cmp::Reverse(self.elements[i].iter().sum::<usize>())),
        }
        order
    }

    /// Every covering arrow as `(source, direction, target)`.
    pub fn covering_arrows(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for i in 0..self.dimension() {
                if let Some(y) = self.step(x, i) {
                    out.push((x, i, y));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubShape {
    /// The truncated cube: coordinate sum at most `d`.
    Truncated,
    /// `B_n`: coordinate sum at least `n`.
    AtLeast { n: usize },
    Full,
}

/// A sub-poset closed under following arrows, so every value of a right Kan
/// extension from it is a limit over a part of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubPoset {
    shape: SubShape,
    member: Vec<bool>,
}

impl SubPoset {
    pub fn new(poset: &CubePoset, shape: SubShape) -> Result<Self> {
        let sum = |x: &[usize]| x.iter().sum::<usize>();
        let member: Vec<bool> = match (&shape, poset.shape()) {
            (SubShape::Truncated, Shape::Subdivided { d, .. }) => {
                poset.elements().iter().map(|x| sum(x) <= *d).collect()
            }
            (SubShape::AtLeast { n }, Shape::Box { .. }) => {
                poset.elements().iter().map(|x| sum(x) >= *n).collect()
            }
            (SubShape::Full, _) => vec![true; poset.len()],
            (s, p) => {
                return Err(Error::InvalidInput(format!(
                    "sub-poset {s:?} is not defined on {p:?}"
                )))
            }
        };
        Ok(SubPoset { shape, member })
    }

    pub fn truncated(poset: &CubePoset) -> Result<Self> {
        SubPoset::new(poset, SubShape::Truncated)
    }

    pub fn at_least(poset: &CubePoset, n: usize) -> Result<Self> {
        SubPoset::new(poset, SubShape::AtLeast { n })
    }

    pub fn full(poset: &CubePoset) -> Self {
        SubPoset { shape: SubShape::Full, member: vec![true; poset.len()] }
    }

    pub fn shape(&self) -> &SubShape {
        &self.shape
    }

    pub fn contains(&self, x: usize) -> bool {
        self.member[x]
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.member.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i)
    }

    pub fn count(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    pub fn len_of_poset(&self) -> usize {
        self.member.len()
    }
}
