//! Spans `u ← W → v` in `Fin_{Epi_{d,r}}` between connected feet, their
//! isomorphism classes and composition by pullback.
//!
//! A connected span is determined up to isomorphism of the apex by the
//! multiset of pairs `(left(x), right(x))`, so a class is stored as that
//! multiset in sorted order. Sorting also gives the lexicographically least
//! encoding among all relabelings of the apex.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::epi_cat::{SliceMorphism, SliceObject};
use crate::fin_coprod::good_subset_elements;
use crate::finset::FinMap;
use crate::{Error, Result};

/// A span whose apex is a single slice object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectedSpan {
    left: SliceMorphism,
    right: SliceMorphism,
}

impl ConnectedSpan {
    pub fn new(left: SliceMorphism, right: SliceMorphism) -> Result<Self> {
        if left.source() != right.source() {
            return Err(Error::SizeMismatch(format!(
                "legs start at {} and {}",
                left.source(),
                right.source()
            )));
        }
        Ok(ConnectedSpan { left, right })
    }

    pub fn apex(&self) -> &SliceObject {
        self.left.source()
    }

    pub fn left(&self) -> &SliceMorphism {
        &self.left
    }

    pub fn right(&self) -> &SliceMorphism {
        &self.right
    }
}

/// A span between connected feet whose apex is a formal coproduct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub left_foot: SliceObject,
    pub right_foot: SliceObject,
    pub components: Vec<ConnectedSpan>,
}

impl Span {
    pub fn new(
        left_foot: SliceObject,
        right_foot: SliceObject,
        components: Vec<ConnectedSpan>,
    ) -> Result<Self> {
        for c in &components {
            if c.left.target() != &left_foot || c.right.target() != &right_foot {
                return Err(Error::SizeMismatch(format!(
                    "component does not land in {left_foot} and {right_foot}"
                )));
            }
        }
        Ok(Span { left_foot, right_foot, components })
    }

    pub fn connected(c: ConnectedSpan) -> Self {
        Span {
            left_foot: c.left.target().clone(),
            right_foot: c.right.target().clone(),
            components: vec![c],
        }
    }
}

/// Isomorphism class of a connected span.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpanClass {
    left_foot: SliceObject,
    right_foot: SliceObject,
    /// Sorted `(left(x), right(x))` over apex elements `x`.
    pairs: Vec<(usize, usize)>,
}

impl SpanClass {
    /// Validates a pair multiset as a connected span between `left_foot` and
    /// `right_foot`.
    pub fn from_pairs(
        left_foot: SliceObject,
        right_foot: SliceObject,
        mut pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if left_foot.rank() != right_foot.rank() {
            return Err(Error::SizeMismatch("feet over different bases".into()));
        }
        let mut hit_l = vec![false; left_foot.total_size()];
        let mut hit_r = vec![false; right_foot.total_size()];
        for &(a, b) in &pairs {
            if a == 0 || a > hit_l.len() || b == 0 || b > hit_r.len() {
                return Err(Error::InvalidInput(format!("pair ({a},{b}) out of range")));
            }
            if left_foot.structure_of(a) != right_foot.structure_of(b) {
                return Err(Error::InvalidInput(format!("pair ({a},{b}) is not over a common point")));
            }
            hit_l[a - 1] = true;
            hit_r[b - 1] = true;
        }
        if !hit_l.iter().chain(&hit_r).all(|&h| h) {
            return Err(Error::InvalidInput("span legs must be surjective".into()));
        }
        pairs.sort_unstable();
        Ok(SpanClass { left_foot, right_foot, pairs })
    }

    pub fn identity(u: &SliceObject) -> Self {
        SpanClass {
            left_foot: u.clone(),
            right_foot: u.clone(),
            pairs: (1..=u.total_size()).map(|x| (x, x)).collect(),
        }
    }

    /// `u ← u → v` with right leg `f`.
    pub fn forward(f: &SliceMorphism) -> Self {
        let pairs = (1..=f.source().total_size()).map(|x| (x, f.map().apply(x))).collect();
        SpanClass { left_foot: f.source().clone(), right_foot: f.target().clone(), pairs }
    }

    /// `v ← u → u` with left leg `f`.
    pub fn backward(f: &SliceMorphism) -> Self {
        let pairs = (1..=f.source().total_size()).map(|x| (f.map().apply(x), x)).collect();
        SpanClass { left_foot: f.target().clone(), right_foot: f.source().clone(), pairs }
    }

    pub fn left_foot(&self) -> &SliceObject {
        &self.left_foot
    }

    pub fn right_foot(&self) -> &SliceObject {
        &self.right_foot
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn apex_size(&self) -> usize {
        self.pairs.len()
    }

    /// The apex in canonical form.
    pub fn apex(&self) -> SliceObject {
        let mut fibers = vec![0; self.left_foot.rank()];
        for &(a, _) in &self.pairs {
            fibers[self.left_foot.structure_of(a) - 1] += 1;
        }
        SliceObject::new(fibers).expect("legs are surjective")
    }

    /// A representative span; the apex elements follow the sorted pairs.
    pub fn to_span(&self) -> ConnectedSpan {
        let apex = self.apex();
        let l = FinMap::from_parts(self.pairs.iter().map(|p| p.0).collect(), self.left_foot.total_size());
        let r = FinMap::from_parts(self.pairs.iter().map(|p| p.1).collect(), self.right_foot.total_size());
        ConnectedSpan {
            left: SliceMorphism::from_parts(apex.clone(), self.left_foot.clone(), l),
            right: SliceMorphism::from_parts(apex, self.right_foot.clone(), r),
        }
    }

    /// The same span read backwards.
    pub fn reversed(&self) -> SpanClass {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(a, b)| (b, a)).collect();
        pairs.sort_unstable();
        SpanClass { left_foot: self.right_foot.clone(), right_foot: self.left_foot.clone(), pairs }
    }
}

impl fmt::Display for SpanClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <- {} -> {} {{", self.left_foot, self.apex(), self.right_foot)?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

pub fn canonicalize_connected(s: &ConnectedSpan) -> SpanClass {
    let l = s.left.map();
    let r = s.right.map();
    let mut pairs: Vec<_> = (1..=s.apex().total_size()).map(|x| (l.apply(x), r.apply(x))).collect();
    pairs.sort_unstable();
    SpanClass {
        left_foot: s.left.target().clone(),
        right_foot: s.right.target().clone(),
        pairs,
    }
}

/// Isomorphism class of a span: the sorted multiset of its component classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpanIsoClass {
    pub left_foot: SliceObject,
    pub right_foot: SliceObject,
    pub components: Vec<SpanClass>,
}

pub fn canonicalize(s: &Span) -> SpanIsoClass {
    let mut components: Vec<_> = s.components.iter().map(canonicalize_connected).collect();
    components.sort();
    SpanIsoClass { left_foot: s.left_foot.clone(), right_foot: s.right_foot.clone(), components }
}

/// A formal integer combination of connected span classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanSum {
    terms: BTreeMap<SpanClass, i64>,
}

impl SpanSum {
    pub fn zero() -> Self {
        SpanSum::default()
    }

    pub fn single(c: SpanClass) -> Self {
        SpanSum { terms: BTreeMap::from([(c, 1)]) }
    }

    pub fn from_span(s: &Span) -> Self {
        let mut out = SpanSum::zero();
        for c in &s.components {
            out.add_term(canonicalize_connected(c), 1);
        }
        out
    }

    pub fn add_term(&mut self, c: SpanClass, n: i64) {
        match self.terms.entry(c) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += n;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if n != 0 {
                    e.insert(n);
                }
            }
        }
    }

    pub fn add(&self, other: &SpanSum) -> SpanSum {
        let mut out = self.clone();
        for (c, &n) in &other.terms {
            out.add_term(c.clone(), n);
        }
        out
    }

    pub fn scale(&self, k: i64) -> SpanSum {
        if k == 0 {
            return SpanSum::zero();
        }
        SpanSum { terms: self.terms.iter().map(|(c, &n)| (c.clone(), n * k)).collect() }
    }

    pub fn coefficient(&self, c: &SpanClass) -> i64 {
        self.terms.get(c).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> &BTreeMap<SpanClass, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `second ∘ first`, extended bilinearly.
    pub fn compose(second: &SpanSum, first: &SpanSum, bound: usize) -> Result<SpanSum> {
        let mut out = SpanSum::zero();
        for (b, &m) in &second.terms {
            for (a, &n) in &first.terms {
                let c = compose(b, a, bound)?;
                out = out.add(&c.scale(m * n));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SpanSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, n)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{n}·[{c}]")?;
        }
        Ok(())
    }
}

/// Composite of `first: a ← V → b` followed by `second: b ← W → c`.
///
/// Each good subset `U` of `V ×_b W` with `|U| <= bound` contributes the span
/// `a ← U → c` once.
pub fn compose(second: &SpanClass, first: &SpanClass, bound: usize) -> Result<SpanSum> {
    if first.right_foot != second.left_foot {
        return Err(Error::SizeMismatch(format!(
            "cannot compose through {} and {}",
            first.right_foot, second.left_foot
        )));
    }
    let b = first.right_foot.total_size();
    let f = FinMap::from_parts(first.pairs.iter().map(|p| p.1).collect(), b);
    let g = FinMap::from_parts(second.pairs.iter().map(|p| p.0).collect(), b);
    let mut out = SpanSum::zero();
    for u in good_subset_elements(&f, &g, bound)? {
        let mut pairs: Vec<_> = u
            .iter()
            .map(|&(x, y)| (first.pairs[x - 1].0, second.pairs[y - 1].1))
            .collect();
        pairs.sort_unstable();
        let class = SpanClass {
            left_foot: first.left_foot.clone(),
            right_foot: second.right_foot.clone(),
            pairs,
        };
        out.add_term(class, 1);
    }
    Ok(out)
}

/// Every connected span class `u ← W → v` with `|W| <= bound`, ordered by apex
/// size and then by the sorted pair list.
pub fn spans_between(u: &SliceObject, v: &SliceObject, bound: usize) -> Vec<SpanClass> {
    if u.rank() != v.rank() {
        return Vec::new();
    }
    let product: Vec<(usize, usize)> = (1..=u.total_size())
        .flat_map(|a| {
            (1..=v.total_size())
                .filter(move |&b| u.structure_of(a) == v.structure_of(b))
                .map(move |b| (a, b))
        })
        .collect();
    let mut out = Vec::new();
    let lo = u.total_size().max(v.total_size());
    for size in lo..=bound {
        let mut counts = vec![0usize; product.len()];
        multisets(&product, size, 0, &mut counts, &mut |counts| {
            let mut hit_l = vec![false; u.total_size()];
            let mut hit_r = vec![false; v.total_size()];
            let mut pairs = Vec::with_capacity(size);
            for (i, &c) in counts.iter().enumerate() {
                if c > 0 {
                    let (a, b) = product[i];
                    hit_l[a - 1] = true;
                    hit_r[b - 1] = true;
                    pairs.extend(std::iter::repeat(product[i]).take(c));
                }
            }
            if hit_l.iter().chain(&hit_r).all(|&h| h) {
                out.push(SpanClass { left_foot: u.clone(), right_foot: v.clone(), pairs });
            }
        });
    }
    // multisets() yields decreasing lex order of count vectors; sort for the
    // documented order
    out.sort_by(|x, y| (x.pairs.len(), &x.pairs).cmp(&(y.pairs.len(), &y.pairs)));
    out
}

fn multisets(
    product: &[(usize, usize)],
    remaining: usize,
    from: usize,
    counts: &mut [usize],
    visit: &mut dyn FnMut(&[usize]),
) {
    if from == product.len() {
        if remaining == 0 {
            visit(counts);
        }
        return;
    }
    for c in (0..=remaining).rev() {
        counts[from] = c;
        multisets(product, remaining - c, from + 1, counts, visit);
    }
    counts[from] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epi_cat::{enumerate_objects, hom_set};
    use crate::finset::FinMap;

    fn obj(f: &[usize]) -> SliceObject {
        SliceObject::new(f.to_vec()).unwrap()
    }

    fn class(l: &[usize], r: &[usize], pairs: &[(usize, usize)]) -> SpanClass {
        SpanClass::from_pairs(obj(l), obj(r), pairs.to_vec()).unwrap()
    }

    /// Brute-force isomorphism test between connected spans via apex
    /// permutations.
    fn isomorphic(s: &ConnectedSpan, t: &ConnectedSpan) -> bool {
        if s.apex() != t.apex() || s.left.target() != t.left.target() || s.right.target() != t.right.target() {
            return false;
        }
        let n = s.apex().total_size();
        permutations(n).into_iter().any(|p| {
            (1..=n).all(|x| {
                let y = p[x - 1];
                s.apex().structure_of(x) == t.apex().structure_of(y)
                    && s.left.map().apply(x) == t.left.map().apply(y)
                    && s.right.map().apply(x) == t.right.map().apply(y)
            })
        })
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n);
                out.push(q);
            }
        }
        out
    }

    fn all_spans(u: &SliceObject, v: &SliceObject, d: usize) -> Vec<ConnectedSpan> {
        let mut out = Vec::new();
        for w in enumerate_objects(d, u.rank()).unwrap() {
            for l in hom_set(&w, u) {
                for r in hom_set(&w, v) {
                    out.push(ConnectedSpan::new(l.clone(), r).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn canonicalize_examples() {
        let u = obj(&[2]);
        let id = ConnectedSpan::new(SliceMorphism::identity(&u), SliceMorphism::identity(&u)).unwrap();
        assert_eq!(canonicalize_connected(&id), SpanClass::identity(&u));

        let swap = SliceMorphism::new(u.clone(), u.clone(), FinMap::new(vec![2, 1], 2).unwrap()).unwrap();
        let graph_id = SpanClass::identity(&u);
        let graph_swap = SpanClass::forward(&swap);
        assert_ne!(graph_id, graph_swap);
        // relabeling the apex of the swap graph does not change its class
        let relabeled = ConnectedSpan::new(swap.clone(), SliceMorphism::identity(&u)).unwrap();
        assert_eq!(canonicalize_connected(&relabeled), graph_swap);
    }

    #[test]
    fn classes_match_brute_force_isomorphism() {
        for d in 1..=4 {
            for r in 1..=2.min(d) {
                let objs = enumerate_objects(d, r).unwrap();
                for u in &objs {
                    for v in &objs {
                        let spans = all_spans(u, v, d);
                        for s in &spans {
                            for t in &spans {
                                assert_eq!(
                                    canonicalize_connected(s) == canonicalize_connected(t),
                                    isomorphic(s, t)
                                );
                            }
                        }
                        let mut classes: Vec<_> = spans.iter().map(canonicalize_connected).collect();
                        classes.sort();
                        classes.dedup();
                        let mut listed = spans_between(u, v, d);
                        listed.sort();
                        assert_eq!(classes, listed, "u={u} v={v} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn compose_examples() {
        let fold = class(&[1], &[1], &[(1, 1), (1, 1)]);
        let sq = compose(&fold, &fold, 4).unwrap();
        let w = |n: usize| class(&[1], &[1], &vec![(1, 1); n]);
        assert_eq!(sq.coefficient(&w(2)), 2);
        assert_eq!(sq.coefficient(&w(3)), 4);
        assert_eq!(sq.coefficient(&w(4)), 1);
        assert_eq!(sq.terms().len(), 3);

        let sq2 = compose(&fold, &fold, 2).unwrap();
        assert_eq!(sq2, SpanSum::single(w(2)).scale(2));

        let id = SpanClass::identity(&obj(&[1]));
        assert_eq!(compose(&fold, &id, 4).unwrap(), SpanSum::single(fold.clone()));
        assert_eq!(compose(&id, &fold, 4).unwrap(), SpanSum::single(fold));
    }

    #[test]
    fn compose_rejects_mismatched_feet() {
        let a = SpanClass::identity(&obj(&[1]));
        let b = SpanClass::identity(&obj(&[2]));
        assert!(matches!(compose(&a, &b, 3), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn c2_double_coset_monoid() {
        // End([1]) in d = 2: the unit and t = [1] ← [2] → [1] with t² = 2t
        let one = obj(&[1]);
        let classes = spans_between(&one, &one, 2);
        assert_eq!(classes.len(), 2);
        let t = classes[1].clone();
        assert_eq!(compose(&t, &t, 2).unwrap(), SpanSum::single(t).scale(2));
    }

    #[test]
    fn forward_and_backward_compose_to_morphisms() {
        let u = obj(&[2, 1]);
        let v = obj(&[1, 1]);
        for f in hom_set(&u, &v) {
            for g in hom_set(&v, &v) {
                let gf = g.after(&f).unwrap();
                assert_eq!(
                    compose(&SpanClass::forward(&g), &SpanClass::forward(&f), 3).unwrap(),
                    SpanSum::single(SpanClass::forward(&gf))
                );
            }
        }
    }

    #[test]
    fn reverse_is_an_involution() {
        for c in spans_between(&obj(&[2]), &obj(&[1]), 4) {
            assert_eq!(c.reversed().reversed(), c);
            assert_eq!(c.to_span().apex(), &c.apex());
            assert_eq!(canonicalize_connected(&c.to_span()), c);
        }
    }

    #[test]
    fn span_iso_class_is_order_independent() {
        let one = obj(&[1]);
        let cs = spans_between(&one, &one, 3);
        let a = Span::new(one.clone(), one.clone(), cs.iter().map(SpanClass::to_span).collect()).unwrap();
        let b = Span::new(one.clone(), one.clone(), cs.iter().rev().map(SpanClass::to_span).collect()).unwrap();
        assert_eq!(canonicalize(&a), canonicalize(&b));
        assert_eq!(SpanSum::from_span(&a), SpanSum::from_span(&b));
    }
}
