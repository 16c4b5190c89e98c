//! Mackey functors on `Epi_{d,r}` with values in free abelian groups.
//!
//! A functor is stored on the skeleton: a rank `n_u` for each basis object
//! and, for every morphism `f: u → v` in `hom_set` order, a restriction
//! `R_f: M(v) → M(u)` and a transfer `T_f: M(u) → M(v)`. Matrices act on
//! column vectors, so `R_f` is `n_u × n_v` and `T_f` is `n_v × n_u`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::burnside::{self, BurnsideRing, StructureConstants};
use crate::epi_cat::{enumerate_objects, hom_set, SliceMorphism, SliceObject};
use crate::fin_coprod::good_subsets;
use crate::finset::FinMap;
use crate::matrix::IntMatrix;
use crate::par::{self, Exec};
use crate::span_cat::{compose, spans_between, SpanClass};
use crate::{Error, Result};

/// Basis objects of `Epi_{d,r}` with every hom set enumerated once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    d: usize,
    r: usize,
    objects: Vec<SliceObject>,
    index: HashMap<SliceObject, usize>,
    homs: Vec<Vec<Vec<SliceMorphism>>>,
    hom_index: Vec<Vec<HashMap<FinMap, usize>>>,
}

impl Skeleton {
    pub fn new(d: usize, r: usize) -> Result<Self> {
        let objects = enumerate_objects(d, r)?;
        let homs: Vec<Vec<Vec<SliceMorphism>>> = objects
            .iter()
            .map(|u| objects.iter().map(|v| hom_set(u, v)).collect())
            .collect();
        let hom_index = homs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|fs| fs.iter().enumerate().map(|(i, f)| (f.map().clone(), i)).collect())
                    .collect()
            })
            .collect();
        let index = objects.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
        Ok(Skeleton { d, r, objects, index, homs, hom_index })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn objects(&self) -> &[SliceObject] {
        &self.objects
    }

    pub fn index_of(&self, u: &SliceObject) -> Result<usize> {
        self.index
            .get(u)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("{u} is not an object of Epi_{{{},{}}}", self.d, self.r)))
    }

    pub fn homs(&self, u: usize, v: usize) -> &[SliceMorphism] {
        &self.homs[u][v]
    }

    /// Position of `f` in its hom set.
    pub fn morphism_index(&self, f: &SliceMorphism) -> Result<(usize, usize, usize)> {
        let u = self.index_of(f.source())?;
        let v = self.index_of(f.target())?;
        let i = self.hom_index[u][v]
            .get(f.map())
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("{f} is not a morphism")))?;
        Ok((u, v, i))
    }
}

/// The two matrices attached to one morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismMaps {
    pub restriction: IntMatrix,
    pub transfer: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyData {
    skeleton: Skeleton,
    ranks: Vec<usize>,
    /// `maps[u][v][i]` belongs to `skeleton.homs(u, v)[i]`.
    maps: Vec<Vec<Vec<MorphismMaps>>>,
}

impl MackeyData {
    /// Validates matrix shapes against the ranks.
    pub fn new(skeleton: Skeleton, ranks: Vec<usize>, maps: Vec<Vec<Vec<MorphismMaps>>>) -> Result<Self> {
        let n = skeleton.objects.len();
        if ranks.len() != n || maps.len() != n {
            return Err(Error::InvalidInput(format!("expected data for {n} objects")));
        }
        for u in 0..n {
            if maps[u].len() != n {
                return Err(Error::InvalidInput("maps table is not square".into()));
            }
            for v in 0..n {
                let homs = skeleton.homs(u, v);
                if maps[u][v].len() != homs.len() {
                    return Err(Error::InvalidInput(format!(
                        "{} morphisms {} -> {} but {} given",
                        homs.len(),
                        skeleton.objects[u],
                        skeleton.objects[v],
                        maps[u][v].len()
                    )));
                }
                for (f, m) in homs.iter().zip(&maps[u][v]) {
                    let (nu, nv) = (ranks[u], ranks[v]);
                    if (m.restriction.rows(), m.restriction.cols()) != (nu, nv)
                        || (m.transfer.rows(), m.transfer.cols()) != (nv, nu)
                    {
                        return Err(Error::InvalidInput(format!("matrices for {f} have the wrong shape")));
                    }
                }
            }
        }
        Ok(MackeyData { skeleton, ranks, maps })
    }

    pub fn zero(d: usize, r: usize) -> Result<Self> {
        let skeleton = Skeleton::new(d, r)?;
        let n = skeleton.objects.len();
        let maps = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| {
                        skeleton.homs(u, v).iter().map(|_| MorphismMaps {
                            restriction: IntMatrix::zeros(0, 0),
                            transfer: IntMatrix::zeros(0, 0),
                        })
                        .collect()
                    })
                    .collect()
            })
            .collect();
        MackeyData::new(skeleton, vec![0; n], maps)
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn d(&self) -> usize {
        self.skeleton.d
    }

    pub fn r(&self) -> usize {
        self.skeleton.r
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank_at(&self, u: &SliceObject) -> Result<usize> {
        Ok(self.ranks[self.skeleton.index_of(u)?])
    }

    pub fn maps(&self, f: &SliceMorphism) -> Result<&MorphismMaps> {
        let (u, v, i) = self.skeleton.morphism_index(f)?;
        Ok(&self.maps[u][v][i])
    }

    pub fn restriction(&self, f: &SliceMorphism) -> Result<&IntMatrix> {
        Ok(&self.maps(f)?.restriction)
    }

    pub fn transfer(&self, f: &SliceMorphism) -> Result<&IntMatrix> {
        Ok(&self.maps(f)?.transfer)
    }

    /// Basis objects where the value is the zero group.
    pub fn vanishing_locus(&self) -> Vec<SliceObject> {
        self.skeleton
            .objects
            .iter()
            .zip(&self.ranks)
            .filter(|(_, &n)| n == 0)
            .map(|(u, _)| u.clone())
            .collect()
    }

    pub fn vanishes_on(&self, family: &Family) -> bool {
        family.members().all(|u| self.rank_at(u).map_or(false, |n| n == 0))
    }

    pub fn check_axioms(&self) -> Result<AxiomReport> {
        self.check_axioms_with(Exec::default())
    }

    /// Functoriality of restrictions and transfers, then the double-coset
    /// identity `R_f T_g = Σ_U T_{p_A} R_{p_B}` for every cospan
    /// `f: A → E ← B :g` of basis objects, with `U` running over the good
    /// subsets of `A ×_E B` of size at most `d`.
    pub fn check_axioms_with(&self, exec: Exec) -> Result<AxiomReport> {
        let sk = &self.skeleton;
        let n = sk.objects.len();
        let mut report = AxiomReport::default();
        for u in 0..n {
            let id = SliceMorphism::identity(&sk.objects[u]);
            let m = self.maps(&id)?;
            let eye = IntMatrix::identity(self.ranks[u]);
            report.identities += 1;
            if m.restriction != eye || m.transfer != eye {
                report.failure = Some(AxiomFailure {
                    kind: FailureKind::Identity,
                    morphisms: vec![id.to_string()],
                    lhs: if m.restriction != eye { m.restriction.to_rows() } else { m.transfer.to_rows() },
                    rhs: eye.to_rows(),
                });
                return Ok(report);
            }
        }

        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|u| (0..n).flat_map(move |v| (0..n).map(move |w| (u, v, w))))
            .filter(|&(u, v, w)| !sk.homs(u, v).is_empty() && !sk.homs(v, w).is_empty())
            .collect();
        let composition = par::map(exec, &triples, |&(u, v, w)| self.check_compositions(u, v, w));
        for outcome in composition {
            let (count, failure) = outcome?;
            report.compositions += count;
            if failure.is_some() {
                report.failure = failure;
                return Ok(report);
            }
        }

        let cospans: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|e| (0..n).flat_map(move |a| (0..n).map(move |b| (a, b, e))))
            .filter(|&(a, b, e)| !sk.homs(a, e).is_empty() && !sk.homs(b, e).is_empty())
            .collect();
        let double_cosets = par::map(exec, &cospans, |&(a, b, e)| self.check_double_cosets(a, b, e));
        for outcome in double_cosets {
            let (count, failure) = outcome?;
            report.cospans += count;
            if failure.is_some() {
                report.failure = failure;
                return Ok(report);
            }
        }
        report.pass = true;
        Ok(report)
    }

    fn check_compositions(&self, u: usize, v: usize, w: usize) -> Result<(usize, Option<AxiomFailure>)> {
        let sk = &self.skeleton;
        let mut count = 0;
        for (i, f) in sk.homs(u, v).iter().enumerate() {
            for (j, g) in sk.homs(v, w).iter().enumerate() {
                count += 1;
                let gf = g.after(f)?;
                let (_, _, k) = sk.morphism_index(&gf)?;
                let (mf, mg, mgf) = (&self.maps[u][v][i], &self.maps[v][w][j], &self.maps[u][w][k]);
                let r = mf.restriction.mul(&mg.restriction)?;
                if r != mgf.restriction {
                    return Ok((count, Some(AxiomFailure {
                        kind: FailureKind::RestrictionComposition,
                        morphisms: vec![f.to_string(), g.to_string()],
                        lhs: mgf.restriction.to_rows(),
                        rhs: r.to_rows(),
                    })));
                }
                let t = mg.transfer.mul(&mf.transfer)?;
                if t != mgf.transfer {
                    return Ok((count, Some(AxiomFailure {
                        kind: FailureKind::TransferComposition,
                        morphisms: vec![f.to_string(), g.to_string()],
                        lhs: mgf.transfer.to_rows(),
                        rhs: t.to_rows(),
                    })));
                }
            }
        }
        Ok((count, None))
    }

    fn check_double_cosets(&self, a: usize, b: usize, e: usize) -> Result<(usize, Option<AxiomFailure>)> {
        let sk = &self.skeleton;
        let mut count = 0;
        for (i, f) in sk.homs(a, e).iter().enumerate() {
            for (j, g) in sk.homs(b, e).iter().enumerate() {
                count += 1;
                let lhs = self.maps[a][e][i].restriction.mul(&self.maps[b][e][j].transfer)?;
                let mut rhs = IntMatrix::zeros(self.ranks[a], self.ranks[b]);
                for s in good_subsets(f, g, sk.d)? {
                    let (ua, _, pa) = sk.morphism_index(&s.to_left)?;
                    let (ub, _, pb) = sk.morphism_index(&s.to_right)?;
                    let term = self.maps[ua][a][pa].transfer.mul(&self.maps[ub][b][pb].restriction)?;
                    rhs = rhs.add(&term)?;
                }
                if lhs != rhs {
                    return Ok((count, Some(AxiomFailure {
                        kind: FailureKind::DoubleCoset,
                        morphisms: vec![f.to_string(), g.to_string()],
                        lhs: lhs.to_rows(),
                        rhs: rhs.to_rows(),
                    })));
                }
            }
        }
        Ok((count, None))
    }

    pub fn to_json(&self) -> MackeyJson {
        let sk = &self.skeleton;
        let n = sk.objects.len();
        let ranks = sk
            .objects
            .iter()
            .zip(&self.ranks)
            .map(|(u, &rank)| RankEntry { object: u.fibers().to_vec(), rank })
            .collect();
        let mut morphisms = Vec::new();
        for u in 0..n {
            for v in 0..n {
                for (i, f) in sk.homs(u, v).iter().enumerate() {
                    let m = &self.maps[u][v][i];
                    morphisms.push(MorphismEntry {
                        source: sk.objects[u].fibers().to_vec(),
                        target: sk.objects[v].fibers().to_vec(),
                        index: i,
                        map: f.map().values().to_vec(),
                        restriction: m.restriction.to_rows(),
                        transfer: m.transfer.to_rows(),
                    });
                }
            }
        }
        MackeyJson { d: sk.d, r: sk.r, ranks, morphisms }
    }

    pub fn from_json(json: &MackeyJson) -> Result<Self> {
        let skeleton = Skeleton::new(json.d, json.r)?;
        let n = skeleton.objects.len();
        let mut ranks = vec![None; n];
        for entry in &json.ranks {
            let u = skeleton.index_of(&SliceObject::new(entry.object.clone())?)?;
            if ranks[u].replace(entry.rank).is_some() {
                return Err(Error::InvalidInput(format!("rank of {:?} given twice", entry.object)));
            }
        }
        let ranks: Vec<usize> = ranks
            .into_iter()
            .enumerate()
            .map(|(u, r)| r.ok_or_else(|| Error::InvalidInput(format!("missing rank for {}", skeleton.objects[u]))))
            .collect::<Result<_>>()?;
        let mut maps: Vec<Vec<Vec<Option<MorphismMaps>>>> = (0..n)
            .map(|u| (0..n).map(|v| vec![None; skeleton.homs(u, v).len()]).collect())
            .collect();
        for m in &json.morphisms {
            let u = skeleton.index_of(&SliceObject::new(m.source.clone())?)?;
            let v = skeleton.index_of(&SliceObject::new(m.target.clone())?)?;
            let f = skeleton.homs(u, v).get(m.index).ok_or_else(|| {
                Error::InvalidInput(format!("no morphism {} from {:?} to {:?}", m.index, m.source, m.target))
            })?;
            if f.map().values() != m.map.as_slice() {
                return Err(Error::InvalidInput(format!(
                    "morphism {} from {:?} to {:?} is {:?}, not {:?}",
                    m.index,
                    m.source,
                    m.target,
                    f.map().values(),
                    m.map
                )));
            }
            let restriction = shaped(ranks[u], ranks[v], &m.restriction)?;
            let transfer = shaped(ranks[v], ranks[u], &m.transfer)?;
            if maps[u][v][m.index].replace(MorphismMaps { restriction, transfer }).is_some() {
                return Err(Error::InvalidInput(format!("morphism {f} given twice")));
            }
        }
        let maps = maps
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|cell| {
                        cell.into_iter()
                            .map(|m| m.ok_or_else(|| Error::InvalidInput("missing morphism data".into())))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MackeyData::new(skeleton, ranks, maps)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json())?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        MackeyData::from_json(&serde_json::from_str(s)?)
    }
}

fn shaped(rows: usize, cols: usize, entries: &[Vec<i64>]) -> Result<IntMatrix> {
    if rows == 0 {
        if !entries.is_empty() {
            return Err(Error::InvalidInput("expected an empty matrix".into()));
        }
        return Ok(IntMatrix::zeros(0, cols));
    }
    IntMatrix::from_rows(rows, cols, entries.to_vec())
        .map_err(|_| Error::InvalidInput(format!("expected a {rows}x{cols} matrix")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Identity,
    RestrictionComposition,
    TransferComposition,
    DoubleCoset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomFailure {
    pub kind: FailureKind,
    /// The morphism, composable pair or cospan `(f, g)` at fault.
    pub morphisms: Vec<String>,
    pub lhs: Vec<Vec<i64>>,
    pub rhs: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub identities: usize,
    pub compositions: usize,
    pub cospans: usize,
    pub failure: Option<AxiomFailure>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub object: Vec<usize>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismEntry {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub index: usize,
    pub map: Vec<usize>,
    pub restriction: Vec<Vec<i64>>,
    pub transfer: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MackeyJson {
    pub d: usize,
    pub r: usize,
    pub ranks: Vec<RankEntry>,
    pub morphisms: Vec<MorphismEntry>,
}

/// A sieve of basis objects: anything mapping onto a member is a member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    d: usize,
    r: usize,
    members: BTreeSet<SliceObject>,
}

impl Family {
    /// Objects of total size greater than `b`.
    pub fn above(d: usize, r: usize, b: usize) -> Result<Self> {
        let members = enumerate_objects(d, r)?.into_iter().filter(|u| u.total_size() > b).collect();
        Ok(Family { d, r, members })
    }

    pub fn from_objects(d: usize, r: usize, members: BTreeSet<SliceObject>) -> Result<Self> {
        let objects = enumerate_objects(d, r)?;
        for v in &members {
            if !objects.contains(v) {
                return Err(Error::InvalidInput(format!("{v} is not an object of Epi_{{{d},{r}}}")));
            }
            for u in &objects {
                if !members.contains(u) && !hom_set(u, v).is_empty() {
                    return Err(Error::InvalidInput(format!(
                        "not a sieve: {u} maps onto member {v} but is missing"
                    )));
                }
            }
        }
        Ok(Family { d, r, members })
    }

    pub fn contains(&self, u: &SliceObject) -> bool {
        self.members.contains(u)
    }

    pub fn members(&self) -> impl Iterator<Item = &SliceObject> {
        self.members.iter()
    }
}

/// The representable `M(u) = ℤ{span classes u ← W → v, |W| <= d}`.
///
/// `R_f` precomposes with `u ← u → u'` and `T_f` with `u' ← u → u`, both
/// computed by span composition with the same truncation.
pub fn representable(d: usize, r: usize, v: &SliceObject) -> Result<MackeyData> {
    representable_with(d, r, v, Exec::default())
}

pub fn representable_with(d: usize, r: usize, v: &SliceObject, exec: Exec) -> Result<MackeyData> {
    let skeleton = Skeleton::new(d, r)?;
    skeleton.index_of(v)?;
    let n = skeleton.objects.len();
    let bases: Vec<Vec<SpanClass>> = skeleton.objects.iter().map(|u| spans_between(u, v, d)).collect();
    let positions: Vec<HashMap<&SpanClass, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let ranks: Vec<usize> = bases.iter().map(Vec::len).collect();

    let column = |target: usize, sum: &crate::span_cat::SpanSum, out: &mut IntMatrix, col: usize| -> Result<()> {
        for (class, &c) in sum.terms() {
            let row = positions[target].get(class).copied().ok_or_else(|| {
                Error::Inconsistent(format!("composite {class} is not a basis span"))
            })?;
            out.add_to(row, col, c)?;
        }
        Ok(())
    };

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |w| (u, w))).collect();
    let computed = par::map(exec, &pairs, |&(u, w)| -> Result<Vec<MorphismMaps>> {
        skeleton
            .homs(u, w)
            .iter()
            .map(|f| {
                let mut restriction = IntMatrix::zeros(ranks[u], ranks[w]);
                for (col, x) in bases[w].iter().enumerate() {
                    column(u, &compose(x, &SpanClass::forward(f), d)?, &mut restriction, col)?;
                }
                let mut transfer = IntMatrix::zeros(ranks[w], ranks[u]);
                for (col, x) in bases[u].iter().enumerate() {
                    column(w, &compose(x, &SpanClass::backward(f), d)?, &mut transfer, col)?;
                }
                Ok(MorphismMaps { restriction, transfer })
            })
            .collect()
    });
    let mut maps: Vec<Vec<Vec<MorphismMaps>>> = (0..n).map(|_| Vec::with_capacity(n)).collect();
    for (&(u, _), cell) in pairs.iter().zip(computed) {
        maps[u].push(cell?);
    }
    MackeyData::new(skeleton, ranks, maps)
}

/// Index restriction to the objects of size at most `b`, read as a functor
/// on `Epi_{b,r}`.
///
/// The double-coset sums shrink with the bound, so the restricted data is
/// only returned when it passes the axioms at level `b`.
pub fn restrict_to_cosieve(m: &MackeyData, b: usize) -> Result<MackeyData> {
    let (d, r) = (m.d(), m.r());
    if b < r || b > d {
        return Err(Error::InvalidInput(format!("need {r} <= b <= {d}, got b={b}")));
    }
    let skeleton = Skeleton::new(b, r)?;
    let n = skeleton.objects.len();
    // basis order is by size first, so the small objects are a prefix
    let ranks = m.ranks[..n].to_vec();
    let maps = (0..n).map(|u| m.maps[u][..n].to_vec()).collect();
    let restricted = MackeyData::new(skeleton, ranks, maps)?;
    let report = restricted.check_axioms()?;
    if !report.pass {
        return Err(Error::AxiomViolation(format!(
            "restriction to size <= {b} fails the axioms at that level: {:?}",
            report.failure
        )));
    }
    Ok(restricted)
}

/// Extends `n` on `Epi_{b,r}` to `Epi_{d,r}` by zero on objects of size
/// greater than `b`.
pub fn extend_by_zero(n: &MackeyData, d: usize) -> Result<MackeyData> {
    let (b, r) = (n.d(), n.r());
    if d < b {
        return Err(Error::InvalidInput(format!("cannot extend from {b} down to {d}")));
    }
    let skeleton = Skeleton::new(d, r)?;
    let total = skeleton.objects.len();
    let small = n.skeleton.objects.len();
    let mut ranks = n.ranks.clone();
    ranks.resize(total, 0);
    let maps = (0..total)
        .map(|u| {
            (0..total)
                .map(|v| {
                    if u < small && v < small {
                        n.maps[u][v].clone()
                    } else {
                        skeleton
                            .homs(u, v)
                            .iter()
                            .map(|_| MorphismMaps {
                                restriction: IntMatrix::zeros(ranks[u], ranks[v]),
                                transfer: IntMatrix::zeros(ranks[v], ranks[u]),
                            })
                            .collect()
                    }
                })
                .collect()
        })
        .collect();
    MackeyData::new(skeleton, ranks, maps)
}

pub fn endomorphism_ring_of_unit(d: usize, r: usize) -> Result<BurnsideRing> {
    endomorphism_ring_of_unit_with(d, r, Exec::default())
}

/// `A(d, r)` read off the representable at the final object: basis element
/// `u` acts on `M([r])` by `T_p R_p` with `p: u → [r]`. The table must agree
/// with [`burnside::build_ring`].
pub fn endomorphism_ring_of_unit_with(d: usize, r: usize, exec: Exec) -> Result<BurnsideRing> {
    let terminal = SliceObject::terminal(r);
    let m = representable_with(d, r, &terminal, exec)?;
    let objects = m.skeleton.objects.clone();
    let n = objects.len();
    if m.rank_at(&terminal)? != n {
        return Err(Error::Inconsistent(format!(
            "value at the final object has rank {} instead of {n}",
            m.rank_at(&terminal)?
        )));
    }
    // M([r]) has one span [r] <- W -> [r] per object W; its own order need
    // not match the object order
    let slot: Vec<usize> = spans_between(&terminal, &terminal, d)
        .iter()
        .map(|s| m.skeleton.index_of(&s.apex()))
        .collect::<Result<_>>()?;
    let mut table = StructureConstants::zeros(n);
    for (ui, u) in objects.iter().enumerate() {
        let p = SliceMorphism::to_terminal(u);
        let action = m.transfer(&p)?.mul(m.restriction(&p)?)?;
        for (i, &v) in slot.iter().enumerate() {
            for (j, &w) in slot.iter().enumerate() {
                table.set(ui, v, w, action.get(j, i));
            }
        }
    }
    let reference = burnside::build_ring_with(d, r, exec)?;
    if let Some((u, v, w)) = table.first_difference(reference.constants()) {
        return Err(Error::Inconsistent(format!(
            "endomorphism ring disagrees with A({d},{r}) at {} · {} -> {}",
            objects[u], objects[v], objects[w]
        )));
    }
    burnside::from_table_with(d, r, table, exec)
}
