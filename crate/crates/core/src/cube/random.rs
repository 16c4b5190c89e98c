//! Seeded random commuting diagrams and the batch comparison of the
//! unit-cube criterion against the pointwise oracle.
//!
//! Diagrams commute by construction: elements are filled in an order that
//! sees arrow targets first, and the new value maps into the limit of its
//! punctured unit cube, so every square at the new element commutes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::diagram::VectDiagram;
use super::kan::{is_rke_by_oracle, is_rke_from, limit_over, punctured_unit_cube};
use super::poset::{CubePoset, SubPoset};
use crate::linalg::QMatrix;
use crate::{par, Exec, Result};

pub const MAX_DIM: usize = 4;
const ENTRY: i64 = 3;

/// How values outside the sub-poset are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Random values everywhere.
    Free,
    /// Outside the sub-poset, values isomorphic to the punctured-cube limit
    /// whenever that limit is small enough.
    Faithful,
    /// Faithful except at one random element outside the sub-poset.
    Defect,
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> QMatrix {
    let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-ENTRY..=ENTRY)).collect();
    QMatrix::from_i64(rows, cols, &entries)
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    loop {
        let m = random_matrix(rng, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// A random commuting diagram on the whole poset.
pub fn random_diagram(p: &CubePoset, s: &SubPoset, mode: Mode, seed: u64) -> VectDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.len();
    let outside: Vec<usize> = (0..n).filter(|&x| !s.contains(x)).collect();
    let defect = match mode {
        Mode::Defect if !outside.is_empty() => Some(outside[rng.gen_range(0..outside.len())]),
        _ => None,
    };
    let mut defined = vec![false; n];
    let mut dims = vec![0; n];
    let mut arrows: BTreeMap<(usize, usize), QMatrix> = BTreeMap::new();
    for x in p.sinks_first() {
        let current = VectDiagram::from_parts(p.clone(), defined.clone(), dims.clone(), arrows.clone());
        let lim = limit_over(&current, &punctured_unit_cube(p, x));
        let faithful = mode != Mode::Free && !s.contains(x) && Some(x) != defect && lim.dim() <= MAX_DIM;
        let (dim, phi) = if faithful {
            (lim.dim(), random_invertible(&mut rng, lim.dim()))
        } else {
            let dim = rng.gen_range(0..=MAX_DIM);
            (dim, random_matrix(&mut rng, lim.dim(), dim))
        };
        for i in p.directions(x) {
            let y = p.step(x, i).expect("direction");
            let leg = &lim.projection(y).expect("neighbours are in the punctured cube") * &phi;
            debug_assert_eq!(leg.rows(), dims[y]);
            arrows.insert((x, i), leg);
        }
        defined[x] = true;
        dims[x] = dim;
    }
    VectDiagram::from_parts(p.clone(), defined, dims, arrows)
}

/// Changes basis at every element: `F'(x → y) = P_y F(x → y) P_x⁻¹`.
pub fn transport(f: &VectDiagram, seed: u64) -> VectDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = f.poset();
    let bases: Vec<QMatrix> = (0..p.len()).map(|x| random_invertible(&mut rng, f.dim(x))).collect();
    let inverses: Vec<QMatrix> = bases
        .iter()
        .map(|b| b.solve(&QMatrix::identity(b.rows())).unwrap().expect("invertible"))
        .collect();
    let mut arrows = BTreeMap::new();
    for (x, i, y) in p.covering_arrows() {
        if f.is_defined(x) {
            arrows.insert((x, i), &(&bases[y] * f.arrow(x, i)) * &inverses[x]);
        }
    }
    let defined = (0..p.len()).map(|x| f.is_defined(x)).collect();
    VectDiagram::from_parts(p.clone(), defined, f.dims().to_vec(), arrows)
}

/// Modes cycle with the seed so every batch contains all three.
pub fn mode_for(seed: u64) -> Mode {
    match seed % 3 {
        0 => Mode::Faithful,
        1 => Mode::Defect,
        _ => Mode::Free,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBatch {
    pub shape: String,
    pub diagrams: usize,
    /// Diagrams the criterion accepted.
    pub extended: usize,
    pub disagreements: usize,
    pub first_disagreement: Option<u64>,
    pub pass: bool,
}

/// Runs the unit-cube criterion and the pointwise oracle on `count` seeded
/// diagrams and counts disagreements.
pub fn oracle_batch(p: &CubePoset, s: &SubPoset, count: usize, seed: u64, exec: Exec) -> Result<OracleBatch> {
    let seeds: Vec<u64> = (0..count as u64).map(|k| seed.wrapping_add(k)).collect();
    let verdicts = par::map(exec, &seeds, |&sd| -> Result<(bool, bool)> {
        let f = random_diagram(p, s, mode_for(sd), sd);
        Ok((is_rke_from(&f, s)?.pass, is_rke_by_oracle(&f, s)?.pass))
    });
    let mut extended = 0;
    let mut disagreements = 0;
    let mut first_disagreement = None;
    for (sd, v) in seeds.iter().zip(verdicts) {
        let (fast, slow) = v?;
        extended += fast as usize;
        if fast != slow {
            disagreements += 1;
            first_disagreement.get_or_insert(*sd);
        }
    }
    Ok(OracleBatch {
        shape: format!("{:?} / {:?}", p.shape(), s.shape()),
        diagrams: count,
        extended,
        disagreements,
        first_disagreement,
        pass: disagreements == 0,
    })
}

/// The shapes of the standard oracle suite: every `Q_{d,r}` with
/// `r <= d <= max_d`, `r <= max_r` against its truncation, plus a few boxes
/// against their filtration stages.
pub fn standard_shapes(max_d: usize, max_r: usize) -> Result<Vec<(CubePoset, SubPoset)>> {
    let mut out = Vec::new();
    for d in 1..=max_d {
        for r in 1..=max_r.min(d) {
            let p = CubePoset::subdivided(d, r)?;
            let s = SubPoset::truncated(&p)?;
            out.push((p, s));
        }
    }
    for (bounds, n) in [(vec![1, 1], 1), (vec![1, 1, 1], 2), (vec![2, 1], 2), (vec![2, 2], 3), (vec![1, 1, 1], 1)] {
        let p = CubePoset::boxed(bounds)?;
        let s = SubPoset::at_least(&p, n)?;
        out.push((p, s));
    }
    Ok(out)
}

/// The box diagram that repeats `face` along `direction` with identity
/// arrows, so every unit cube is degenerate in that direction.
pub fn constant_in_direction(face: &VectDiagram, direction: usize, bounds: &[usize]) -> Result<VectDiagram> {
    let p = CubePoset::boxed(bounds.to_vec())?;
    let fp = face.poset();
    let project = |x: usize| -> usize {
        let mut e: Vec<usize> = p.element(x).to_vec();
        e.remove(direction);
        fp.index_of(&e).expect("face coordinates")
    };
    let dims: Vec<usize> = (0..p.len()).map(|x| face.dim(project(x))).collect();
    let mut arrows = BTreeMap::new();
    for (x, i, _) in p.covering_arrows() {
        let m = if i == direction {
            QMatrix::identity(dims[x])
        } else {
            let j = if i < direction { i } else { i - 1 };
            face.arrow(project(x), j).clone()
        };
        arrows.insert((x, i), m);
    }
    VectDiagram::new(p.clone(), vec![true; p.len()], dims, arrows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_diagrams_commute_and_are_deterministic() {
        for (p, s) in standard_shapes(4, 3).unwrap() {
            for seed in 0..6 {
                let f = random_diagram(&p, &s, mode_for(seed), seed);
                f.check_commutes().unwrap();
                assert!(f.dims().iter().all(|&d| d <= MAX_DIM));
                assert_eq!(f, random_diagram(&p, &s, mode_for(seed), seed));
            }
        }
    }

    #[test]
    fn faithful_diagrams_are_usually_extended() {
        let p = CubePoset::subdivided(4, 2).unwrap();
        let s = SubPoset::truncated(&p).unwrap();
        let accepted = (0..30)
            .filter(|&seed| is_rke_from(&random_diagram(&p, &s, Mode::Faithful, seed), &s).unwrap().pass)
            .count();
        assert!(accepted > 0);
    }

    #[test]
    fn small_oracle_batches_agree() {
        for (p, s) in standard_shapes(4, 2).unwrap() {
            let b = oracle_batch(&p, &s, 12, 7, Exec::Sequential).unwrap();
            assert!(b.pass, "{b:?}");
        }
    }
}
