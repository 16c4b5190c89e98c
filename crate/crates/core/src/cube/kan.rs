//! Limits over parts of a grid poset, the unit-cube criterion for right Kan
//! extensions and the pointwise extension that serves as its oracle.

use std::collections::BTreeMap;

use serde::Serialize;

use super::diagram::VectDiagram;
use super::poset::{CubePoset, SubPoset};
use crate::linalg::QMatrix;
use crate::{Error, Result};

/// A limit over a set of elements, presented as a subspace of the product
/// of their values. The columns of `basis` span the compatible families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limit {
    members: Vec<usize>,
    offsets: Vec<usize>,
    dims: Vec<usize>,
    basis: QMatrix,
}

impl Limit {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Inclusion of the limit into the product, `total × dim`.
    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    /// The cone map to `x`, or `None` if `x` is not a member.
    pub fn projection(&self, x: usize) -> Option<QMatrix> {
        let k = self.members.iter().position(|&m| m == x)?;
        Some(self.basis.row_block(self.offsets[k], self.dims[k]))
    }

    /// Rows of a product vector belonging to the members listed in `sub`.
    fn select(&self, column: &QMatrix, sub: &[usize]) -> QMatrix {
        let mut out = QMatrix::zeros(0, column.cols());
        for x in sub {
            let k = self.members.iter().position(|m| m == x).expect("sub is contained in members");
            out = out.vstack(&column.row_block(self.offsets[k], self.dims[k])).expect("same width");
        }
        out
    }
}

fn product_layout(f: &VectDiagram, members: &[usize]) -> (Vec<usize>, Vec<usize>, usize) {
    let dims: Vec<usize> = members.iter().map(|&x| f.dim(x)).collect();
    let mut offsets = Vec::with_capacity(dims.len());
    let mut total = 0;
    for &d in &dims {
        offsets.push(total);
        total += d;
    }
    (dims, offsets, total)
}

/// Kernel of the difference map over the given arrows `(p, q, F(p → q))`.
fn kernel_of_differences(
    members: &[usize],
    dims: &[usize],
    offsets: &[usize],
    total: usize,
    arrows: Vec<(usize, usize, QMatrix)>,
) -> QMatrix {
    let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let rows: usize = arrows.iter().map(|(_, q, _)| dims[pos[q]]).sum();
    let mut diff = QMatrix::zeros(rows, total);
    let mut row = 0;
    for (p, q, m) in arrows {
        let (kp, kq) = (pos[&p], pos[&q]);
        for i in 0..dims[kq] {
            for j in 0..dims[kp] {
                diff.set(row + i, offsets[kp] + j, m.get(i, j).clone());
            }
            let c = offsets[kq] + i;
            diff.set(row + i, c, diff.get(row + i, c) - crate::linalg::q(1));
        }
        row += dims[kq];
    }
    diff.kernel()
}

/// The limit of `f` over `members`, using only the covering arrows between
/// members. Correct whenever every relation between members factors through
/// members, which holds for every set this module passes in.
pub fn limit_over(f: &VectDiagram, members: &[usize]) -> Limit {
    let mut members = members.to_vec();
    members.sort_unstable();
    members.dedup();
    let (dims, offsets, total) = product_layout(f, &members);
    let inside: std::collections::BTreeSet<usize> = members.iter().copied().collect();
    let p = f.poset();
    let arrows = members
        .iter()
        .flat_map(|&x| p.directions(x).into_iter().map(move |i| (x, i)))
        .filter_map(|(x, i)| {
            let y = p.step(x, i)?;
            inside.contains(&y).then(|| (x, y, f.arrow(x, i).clone()))
        })
        .collect();
    let basis = kernel_of_differences(&members, &dims, &offsets, total, arrows);
    Limit { members, offsets, dims, basis }
}

/// The limit over `members` imposing every relation `F(p → q)` with `p ≤ q`,
/// not just covering ones.
pub fn limit_over_all_arrows(f: &VectDiagram, members: &[usize]) -> Limit {
    let mut members = members.to_vec();
    members.sort_unstable();
    members.dedup();
    let (dims, offsets, total) = product_layout(f, &members);
    let p = f.poset();
    let mut arrows = Vec::new();
    for &a in &members {
        for &b in &members {
            if a != b && p.leq(a, b) {
                arrows.push((a, b, f.map_between(a, b).expect("a <= b")));
            }
        }
    }
    let basis = kernel_of_differences(&members, &dims, &offsets, total, arrows);
    Limit { members, offsets, dims, basis }
}

/// `a + δ_T` for every nonempty set `T` of directions available at `a`.
pub fn punctured_unit_cube(p: &CubePoset, a: usize) -> Vec<usize> {
    let dirs = p.directions(a);
    let mut out = Vec::new();
    for mask in 1u32..(1 << dirs.len()) {
        let mut x = a;
        for (bit, &i) in dirs.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                x = p.step(x, i).expect("unit cube stays in the grid");
            }
        }
        out.push(x);
    }
    out.sort_unstable();
    out
}

/// Everything in `s` reachable from `a`.
pub fn comma(p: &CubePoset, s: &SubPoset, a: usize) -> Vec<usize> {
    s.members().filter(|&x| p.leq(a, x)).collect()
}

/// Whether the cone `F(a) → lim` is an isomorphism.
fn cone_is_iso(f: &VectDiagram, a: usize, lim: &Limit) -> bool {
    if f.dim(a) != lim.dim() {
        return false;
    }
    let mut stacked = QMatrix::zeros(0, f.dim(a));
    for &x in lim.members() {
        stacked = stacked.vstack(&f.map_between(a, x).expect("cone leg")).expect("same width");
    }
    stacked.rank() == f.dim(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RkeReport {
    /// Elements outside the sub-poset that were examined.
    pub checked: usize,
    /// The first element, in poset order, whose cone is not a limit.
    pub failing: Option<Vec<usize>>,
    pub pass: bool,
}

fn check_sub(f: &VectDiagram, s: &SubPoset) -> Result<()> {
    if s.len_of_poset() != f.poset().len() {
        return Err(Error::SizeMismatch("sub-poset of a different poset".into()));
    }
    if !f.is_total() {
        return Err(Error::InvalidInput("the diagram must be defined everywhere".into()));
    }
    Ok(())
}

fn rke_report<L>(f: &VectDiagram, s: &SubPoset, limit_at: L) -> Result<RkeReport>
where
    L: Fn(usize) -> Vec<usize>,
{
    check_sub(f, s)?;
    let outside: Vec<usize> = (0..f.poset().len()).filter(|&a| !s.contains(a)).collect();
    let failing = outside
        .iter()
        .find(|&&a| !cone_is_iso(f, a, &limit_over(f, &limit_at(a))))
        .map(|&a| f.poset().element(a).to_vec());
    Ok(RkeReport { checked: outside.len(), pass: failing.is_none(), failing })
}

/// Whether `f` is right Kan extended from `s`: at every element outside
/// `s`, the unit cube spanned by the available directions is a limit
/// diagram.
pub fn is_rke_from(f: &VectDiagram, s: &SubPoset) -> Result<RkeReport> {
    let p = f.poset();
    rke_report(f, s, |a| punctured_unit_cube(p, a))
}

/// The same question answered from the definition: at every element outside
/// `s`, the cone to the whole comma over `s` is a limit.
pub fn is_rke_by_oracle(f: &VectDiagram, s: &SubPoset) -> Result<RkeReport> {
    let p = f.poset();
    rke_report(f, s, |a| comma(p, s, a))
}

/// Fills the elements of `order` (none of them defined yet) with limits of
/// `members_of`, in an order that sees arrow targets first.
fn fill(g: &VectDiagram, order: &[usize], members_of: impl Fn(usize) -> Vec<usize>) -> Result<VectDiagram> {
    let p = g.poset().clone();
    let mut defined: Vec<bool> = (0..p.len()).map(|x| g.is_defined(x)).collect();
    let mut dims = g.dims().to_vec();
    let mut arrows: BTreeMap<(usize, usize), QMatrix> = BTreeMap::new();
    for (x, i, _) in p.covering_arrows() {
        if g.is_defined(x) {
            arrows.insert((x, i), g.arrow(x, i).clone());
        }
    }
    let mut current = VectDiagram::from_parts(p.clone(), defined.clone(), dims.clone(), arrows.clone());
    let mut limits: BTreeMap<usize, Limit> = BTreeMap::new();
    let rank = |x: usize| -> usize { p.element(x).iter().sum() };
    let mut order = order.to_vec();
    match p.orientation() {
        super::poset::Orientation::Descending => order.sort_by_key(|&x| rank(x)),
        super::poset::Orientation::Ascending => order.sort_by_key(|&x| std::cmp::Reverse(rank(x))),
    }
    for &a in &order {
        if defined[a] {
            return Err(Error::InvalidInput(format!("{:?} is already defined", p.element(a))));
        }
        let lim = limit_over(&current, &members_of(a));
        for i in p.directions(a) {
            let b = p.step(a, i).expect("direction");
            if !defined[b] {
                return Err(Error::InvalidInput(format!(
                    "{:?} points at undefined {:?}",
                    p.element(a),
                    p.element(b)
                )));
            }
            let m = match lim.projection(b) {
                Some(m) => m,
                None => {
                    // `b` was filled earlier; land in its limit coordinates.
                    let lb = &limits[&b];
                    let restricted = lim.select(lim.basis(), lb.members());
                    lb.basis()
                        .solve(&restricted)?
                        .ok_or_else(|| Error::Inconsistent("family does not restrict to a family".into()))?
                }
            };
            arrows.insert((a, i), m);
        }
        defined[a] = true;
        dims[a] = lim.dim();
        limits.insert(a, lim);
        current = VectDiagram::from_parts(p.clone(), defined.clone(), dims.clone(), arrows.clone());
    }
    current.check_commutes().map_err(|e| Error::Inconsistent(format!("extension does not commute: {e}")))?;
    Ok(current)
}

/// The pointwise right Kan extension of `g`, which must be defined exactly
/// on `s`: the value at `a ∉ s` is the limit over everything in `s` that
/// `a` maps to.
pub fn pointwise_rke(g: &VectDiagram, s: &SubPoset) -> Result<VectDiagram> {
    restricted_to(g, s)?;
    let p = g.poset();
    let outside: Vec<usize> = (0..p.len()).filter(|&a| !s.contains(a)).collect();
    fill(g, &outside, |a| comma(p, s, a))
}

/// Extends `g`, defined exactly on `B_n`, one layer at a time down to the
/// whole box: each new value is the limit of its punctured unit cube.
pub fn extend_by_layers(g: &VectDiagram, s: &SubPoset) -> Result<VectDiagram> {
    restricted_to(g, s)?;
    let p = g.poset();
    let outside: Vec<usize> = (0..p.len()).filter(|&a| !s.contains(a)).collect();
    fill(g, &outside, |a| punctured_unit_cube(p, a))
}

fn restricted_to(g: &VectDiagram, s: &SubPoset) -> Result<()> {
    if s.len_of_poset() != g.poset().len() {
        return Err(Error::SizeMismatch("sub-poset of a different poset".into()));
    }
    if (0..g.poset().len()).any(|x| g.is_defined(x) != s.contains(x)) {
        return Err(Error::InvalidInput("the diagram must be defined exactly on the sub-poset".into()));
    }
    Ok(())
}

/// The limit of `f` over the truncated cube, with its cone maps.
pub fn truncated_limit(f: &VectDiagram) -> Result<Limit> {
    let s = SubPoset::truncated(f.poset())?;
    for x in s.members() {
        if !f.is_defined(x) {
            return Err(Error::InvalidInput(format!("diagram undefined at {:?}", f.poset().element(x))));
        }
    }
    Ok(limit_over(f, &s.members().collect::<Vec<_>>()))
}
