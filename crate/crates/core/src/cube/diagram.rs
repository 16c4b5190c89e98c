//! Diagrams of finite-dimensional rational vector spaces over grid posets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::poset::{CubePoset, Shape, SubPoset};
use crate::linalg::QMatrix;
use crate::{Error, Result};

/// A functor from (part of) a grid poset to `Q`-vector spaces, given on
/// covering arrows. The arrow in direction `i` out of `x` is a
/// `dim(target) × dim(x)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectDiagram {
    poset: CubePoset,
    defined: Vec<bool>,
    dims: Vec<usize>,
    arrows: BTreeMap<(usize, usize), QMatrix>,
}

impl VectDiagram {
    /// Validates shapes and that every square of covering arrows commutes.
    ///
    /// `defined` marks the elements the diagram lives on; it must be closed
    /// under following arrows.
    pub fn new(
        poset: CubePoset,
        defined: Vec<bool>,
        dims: Vec<usize>,
        arrows: BTreeMap<(usize, usize), QMatrix>,
    ) -> Result<Self> {
        if defined.len() != poset.len() || dims.len() != poset.len() {
            return Err(Error::SizeMismatch(format!("expected data for {} elements", poset.len())));
        }
        for (x, i, y) in poset.covering_arrows() {
            if !defined[x] {
                if arrows.contains_key(&(x, i)) {
                    return Err(Error::InvalidInput(format!(
                        "arrow out of undefined element {:?}",
                        poset.element(x)
                    )));
                }
                continue;
            }
            if !defined[y] {
                return Err(Error::InvalidInput(format!(
                    "{:?} is defined but its arrow target {:?} is not",
                    poset.element(x),
                    poset.element(y)
                )));
            }
            let m = arrows.get(&(x, i)).ok_or_else(|| {
                Error::InvalidInput(format!("missing arrow {:?} -> {:?}", poset.element(x), poset.element(y)))
            })?;
            if (m.rows(), m.cols()) != (dims[y], dims[x]) {
                return Err(Error::SizeMismatch(format!(
                    "arrow {:?} -> {:?} should be {}x{}, got {}x{}",
                    poset.element(x),
                    poset.element(y),
                    dims[y],
                    dims[x],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if arrows.len() != poset.covering_arrows().iter().filter(|a| defined[a.0]).count() {
            return Err(Error::InvalidInput("arrow keys outside the poset".into()));
        }
        let diagram = VectDiagram { poset, defined, dims, arrows };
        diagram.check_commutes()?;
        Ok(diagram)
    }

    /// Every value `Q^dim`, every arrow the identity.
    pub fn constant(poset: CubePoset, dim: usize) -> Self {
        let arrows = poset
            .covering_arrows()
            .into_iter()
            .map(|(x, i, _)| ((x, i), QMatrix::identity(dim)))
            .collect();
        let n = poset.len();
        VectDiagram { poset, defined: vec![true; n], dims: vec![dim; n], arrows }
    }

    pub(crate) fn from_parts(
        poset: CubePoset,
        defined: Vec<bool>,
        dims: Vec<usize>,
        arrows: BTreeMap<(usize, usize), QMatrix>,
    ) -> Self {
        VectDiagram { poset, defined, dims, arrows }
    }

    pub fn poset(&self) -> &CubePoset {
        &self.poset
    }

    pub fn is_defined(&self, x: usize) -> bool {
        self.defined[x]
    }

    pub fn is_total(&self) -> bool {
        self.defined.iter().all(|&d| d)
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn arrow(&self, x: usize, i: usize) -> &QMatrix {
        &self.arrows[&(x, i)]
    }

    /// The first non-commuting square, as an error.
    pub fn check_commutes(&self) -> Result<()> {
        let p = &self.poset;
        for x in (0..p.len()).filter(|&x| self.defined[x]) {
            let dirs = p.directions(x);
            for (a, &i) in dirs.iter().enumerate() {
                for &j in &dirs[a + 1..] {
                    let (xi, xj) = (p.step(x, i).unwrap(), p.step(x, j).unwrap());
                    let Some(xij) = p.step(xi, j) else { continue };
                    let via_i = self.arrow(xi, j) * self.arrow(x, i);
                    let via_j = self.arrow(xj, i) * self.arrow(x, j);
                    debug_assert_eq!(p.step(xj, i), Some(xij));
                    if via_i != via_j {
                        return Err(Error::InvalidInput(format!(
                            "square at {:?} in directions {} and {} does not commute",
                            p.element(x),
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The composite `F(a) → F(b)` along any monotone path.
    pub fn map_between(&self, a: usize, b: usize) -> Result<QMatrix> {
        if !self.poset.leq(a, b) {
            return Err(Error::InvalidInput(format!(
                "no arrow {:?} -> {:?}",
                self.poset.element(a),
                self.poset.element(b)
            )));
        }
        let mut acc = QMatrix::identity(self.dims[a]);
        let mut x = a;
        while x != b {
            let i = (0..self.poset.dimension())
                .find(|&i| self.poset.element(x)[i] != self.poset.element(b)[i])
                .expect("x differs from b");
            acc = self.arrow(x, i) * &acc;
            x = self.poset.step(x, i).expect("b is reachable");
        }
        Ok(acc)
    }

    /// The part of the diagram living on `s`.
    pub fn restrict(&self, s: &SubPoset) -> Result<VectDiagram> {
        if s.len_of_poset() != self.poset.len() {
            return Err(Error::SizeMismatch("sub-poset of a different poset".into()));
        }
        let mut defined = vec![false; self.poset.len()];
        let mut dims = vec![0; self.poset.len()];
        for x in s.members() {
            if !self.defined[x] {
                return Err(Error::InvalidInput(format!(
                    "diagram is not defined at {:?}",
                    self.poset.element(x)
                )));
            }
            defined[x] = true;
            dims[x] = self.dims[x];
        }
        let arrows = self
            .arrows
            .iter()
            .filter(|((x, _), _)| defined[*x])
            .map(|(k, m)| (*k, m.clone()))
            .collect();
        Ok(VectDiagram { poset: self.poset.clone(), defined, dims, arrows })
    }

    pub fn to_json(&self) -> DiagramJson {
        let p = &self.poset;
        DiagramJson {
            shape: p.shape().clone(),
            dims: (0..p.len())
                .filter(|&x| self.defined[x])
                .map(|x| DimEntry { element: p.element(x).to_vec(), dim: self.dims[x] })
                .collect(),
            arrows: self
                .arrows
                .iter()
                .map(|(&(x, i), m)| ArrowEntry {
                    source: p.element(x).to_vec(),
                    direction: i + 1,
                    matrix: m.to_strings(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &DiagramJson) -> Result<Self> {
        let poset = CubePoset::from_shape(&json.shape)?;
        let mut defined = vec![false; poset.len()];
        let mut dims = vec![0; poset.len()];
        for e in &json.dims {
            let x = poset
                .index_of(&e.element)
                .ok_or_else(|| Error::InvalidInput(format!("{:?} is not in the poset", e.element)))?;
            if defined[x] {
                return Err(Error::InvalidInput(format!("{:?} listed twice", e.element)));
            }
            defined[x] = true;
            dims[x] = e.dim;
        }
        let mut arrows = BTreeMap::new();
        for a in &json.arrows {
            let x = poset
                .index_of(&a.source)
                .ok_or_else(|| Error::InvalidInput(format!("{:?} is not in the poset", a.source)))?;
            if a.direction == 0 || a.direction > poset.dimension() {
                return Err(Error::InvalidInput(format!("bad direction {}", a.direction)));
            }
            let i = a.direction - 1;
            let y = poset.step(x, i).ok_or_else(|| {
                Error::InvalidInput(format!("no arrow out of {:?} in direction {}", a.source, a.direction))
            })?;
            let m = if dims[y] == 0 {
                QMatrix::zeros(0, dims[x])
            } else {
                QMatrix::from_strings(dims[y], dims[x], &a.matrix)?
            };
            if arrows.insert((x, i), m).is_some() {
                return Err(Error::InvalidInput(format!("arrow {:?}/{} listed twice", a.source, a.direction)));
            }
        }
        VectDiagram::new(poset, defined, dims, arrows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEntry {
    pub element: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowEntry {
    pub source: Vec<usize>,
    /// 1-based coordinate.
    pub direction: usize,
    /// Entries as `"p"` or `"p/q"`, row by row.
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub shape: Shape,
    pub dims: Vec<DimEntry>,
    pub arrows: Vec<ArrowEntry>,
}
