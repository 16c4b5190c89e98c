//! Formal finite coproducts of objects of `Epi_{d,r}` and their pullbacks.
//!
//! `Epi` itself has no pullbacks, but its finite-coproduct completion does:
//! the pullback of `f: A ↠ E ← B :g` is the disjoint union of the *good*
//! subsets `U ⊆ A ×_E B`, those whose projections to `A` and to `B` are both
//! surjective. In the truncated category only good subsets with `|U| <= d`
//! survive.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::epi_cat::{enumerate_objects, hom_count, hom_set, SliceMorphism, SliceObject};
use crate::finset::FinMap;
use crate::{Error, Result};

/// A finite (possibly empty) coproduct of canonical slice objects.
///
/// Components are kept in an explicit order so that maps can refer to them by
/// index; [`FormalCoproduct::multiset`] forgets that order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormalCoproduct {
    components: Vec<SliceObject>,
}

impl FormalCoproduct {
    pub fn new(components: Vec<SliceObject>) -> Result<Self> {
        if let Some(first) = components.first() {
            if components.iter().any(|c| c.rank() != first.rank()) {
                return Err(Error::SizeMismatch(
                    "components of a coproduct must share the base [r]".into(),
                ));
            }
        }
        Ok(FormalCoproduct { components })
    }

    pub fn empty() -> Self {
        FormalCoproduct::default()
    }

    pub fn connected(u: SliceObject) -> Self {
        FormalCoproduct { components: vec![u] }
    }

    pub fn components(&self) -> &[SliceObject] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Largest component size, 0 for the empty coproduct.
    pub fn max_size(&self) -> usize {
        self.components.iter().map(SliceObject::total_size).max().unwrap_or(0)
    }

    pub fn multiset(&self) -> BTreeMap<SliceObject, usize> {
        let mut m = BTreeMap::new();
        for c in &self.components {
            *m.entry(c.clone()).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for FormalCoproduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊔ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A map of formal coproducts: each source component goes to one target
/// component by a surjection over `[r]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoproductMap {
    source: FormalCoproduct,
    target: FormalCoproduct,
    parts: Vec<(usize, SliceMorphism)>,
}

impl CoproductMap {
    pub fn new(
        source: FormalCoproduct,
        target: FormalCoproduct,
        parts: Vec<(usize, SliceMorphism)>,
    ) -> Result<Self> {
        if parts.len() != source.len() {
            return Err(Error::SizeMismatch(format!(
                "{} components but {} parts",
                source.len(),
                parts.len()
            )));
        }
        for (c, (t, m)) in source.components.iter().zip(&parts) {
            let Some(tc) = target.components.get(*t) else {
                return Err(Error::InvalidInput(format!("no target component {t}")));
            };
            if m.source() != c || m.target() != tc {
                return Err(Error::SizeMismatch(format!("part {m} does not match {c} -> {tc}")));
            }
        }
        Ok(CoproductMap { source, target, parts })
    }

    pub fn from_morphism(f: SliceMorphism) -> Self {
        CoproductMap {
            source: FormalCoproduct::connected(f.source().clone()),
            target: FormalCoproduct::connected(f.target().clone()),
            parts: vec![(0, f)],
        }
    }

    pub fn source(&self) -> &FormalCoproduct {
        &self.source
    }

    pub fn target(&self) -> &FormalCoproduct {
        &self.target
    }

    pub fn parts(&self) -> &[(usize, SliceMorphism)] {
        &self.parts
    }
}

/// `{(a, b) : f(a) = g(b)}`, sorted lexicographically.
pub fn fiber_product_set(f: &FinMap, g: &FinMap) -> Result<Vec<(usize, usize)>> {
    if f.target_size() != g.target_size() {
        return Err(Error::SizeMismatch(format!(
            "{f} and {g} have different targets"
        )));
    }
    let g_fibers = g.fibers();
    let mut out = Vec::new();
    for a in 1..=f.source_size() {
        for &b in &g_fibers[f.apply(a) - 1] {
            out.push((a, b));
        }
    }
    Ok(out)
}

/// Good subsets of `A ×_E B` of size at most `bound`, as sorted pair lists.
///
/// Ordered by size, then lexicographically by the positions of their elements
/// in the sorted fiber product.
pub fn good_subset_elements(
    f: &FinMap,
    g: &FinMap,
    bound: usize,
) -> Result<Vec<Vec<(usize, usize)>>> {
    let product = fiber_product_set(f, g)?;
    let (na, nb) = (f.source_size(), g.source_size());
    let mut out = Vec::new();
    let lo = na.max(nb);
    let hi = bound.min(product.len());
    let mut chosen = Vec::new();
    for size in lo..=hi {
        let mut cover_a = vec![0usize; na];
        let mut cover_b = vec![0usize; nb];
        choose(&product, size, 0, &mut chosen, &mut cover_a, &mut cover_b, &mut out);
    }
    Ok(out)
}

fn choose(
    product: &[(usize, usize)],
    size: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    cover_a: &mut [usize],
    cover_b: &mut [usize],
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if chosen.len() == size {
        if cover_a.iter().all(|&c| c > 0) && cover_b.iter().all(|&c| c > 0) {
            out.push(chosen.iter().map(|&i| product[i]).collect());
        }
        return;
    }
    let remaining = size - chosen.len();
    let missing_a = cover_a.iter().filter(|&&c| c == 0).count();
    let missing_b = cover_b.iter().filter(|&&c| c == 0).count();
    if missing_a > remaining || missing_b > remaining {
        return;
    }
    for i in from..=product.len() - remaining {
        let (a, b) = product[i];
        cover_a[a - 1] += 1;
        cover_b[b - 1] += 1;
        chosen.push(i);
        choose(product, size, i + 1, chosen, cover_a, cover_b, out);
        chosen.pop();
        cover_a[a - 1] -= 1;
        cover_b[b - 1] -= 1;
    }
}

/// A good subset `U ⊆ A ×_E B` with its induced projections.
///
/// `object` is `U` relabeled in sorted order, which is already the canonical
/// fiber-contiguous form over `[r]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodSubset {
    pub elements: Vec<(usize, usize)>,
    pub object: SliceObject,
    pub to_left: SliceMorphism,
    pub to_right: SliceMorphism,
}

/// Good subsets for a cospan `f: A ↠ E ← B :g` of connected objects.
pub fn good_subsets(
    f: &SliceMorphism,
    g: &SliceMorphism,
    bound: usize,
) -> Result<Vec<GoodSubset>> {
    if f.target() != g.target() {
        return Err(Error::SizeMismatch(format!(
            "cospan legs end at {} and {}",
            f.target(),
            g.target()
        )));
    }
    let a = f.source();
    let b = g.source();
    let subsets = good_subset_elements(f.map(), g.map(), bound)?;
    Ok(subsets
        .into_iter()
        .map(|elements| {
            let mut fibers = vec![0usize; a.rank()];
            for &(x, _) in &elements {
                fibers[a.structure_of(x) - 1] += 1;
            }
            let object = SliceObject::new(fibers).expect("good subsets cover every fiber");
            let left = FinMap::from_parts(elements.iter().map(|p| p.0).collect(), a.total_size());
            let right = FinMap::from_parts(elements.iter().map(|p| p.1).collect(), b.total_size());
            GoodSubset {
                to_left: SliceMorphism::from_parts(object.clone(), a.clone(), left),
                to_right: SliceMorphism::from_parts(object.clone(), b.clone(), right),
                object,
                elements,
            }
        })
        .collect())
}

/// Number of good subsets per size.
pub fn good_subset_counts(
    f: &SliceMorphism,
    g: &SliceMorphism,
    bound: usize,
) -> Result<BTreeMap<usize, usize>> {
    let mut counts = BTreeMap::new();
    for u in good_subsets(f, g, bound)? {
        *counts.entry(u.elements.len()).or_insert(0) += 1;
    }
    Ok(counts)
}

/// A pullback square in `Fin_{Epi_{d,r}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pullback {
    pub apex: FormalCoproduct,
    pub to_left: CoproductMap,
    pub to_right: CoproductMap,
}

/// Pullback of `f: X -> E <- Y :g`, computed componentwise over `E`.
///
/// Components of the apex are listed by left component, then right
/// component, then good-subset order.
pub fn pullback(f: &CoproductMap, g: &CoproductMap, bound: usize) -> Result<Pullback> {
    if f.target != g.target {
        return Err(Error::SizeMismatch(format!(
            "cospan targets differ: {} vs {}",
            f.target, g.target
        )));
    }
    let mut components = Vec::new();
    let mut left_parts = Vec::new();
    let mut right_parts = Vec::new();
    for (i, (ei, fi)) in f.parts.iter().enumerate() {
        for (j, (ej, gj)) in g.parts.iter().enumerate() {
            if ei != ej {
                continue;
            }
            for u in good_subsets(fi, gj, bound)? {
                components.push(u.object.clone());
                left_parts.push((i, u.to_left));
                right_parts.push((j, u.to_right));
            }
        }
    }
    let apex = FormalCoproduct { components };
    Ok(Pullback {
        to_left: CoproductMap { source: apex.clone(), target: f.source.clone(), parts: left_parts },
        to_right: CoproductMap { source: apex.clone(), target: g.source.clone(), parts: right_parts },
        apex,
    })
}

/// One test object in a universal-property check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomComparison {
    pub test_object: SliceObject,
    /// `|Hom(T, P)|`.
    pub into_pullback: u64,
    /// `|Hom(T, X) ×_{Hom(T, E)} Hom(T, Y)|`.
    pub into_fiber_product: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalPropertyReport {
    pub comparisons: Vec<HomComparison>,
    pub failure: Option<HomComparison>,
    pub pass: bool,
}

/// Checks `Hom(T, P) ≅ Hom(T, X) ×_{Hom(T, E)} Hom(T, Y)` by counting, for
/// every connected test object `T` with `|T| <= d`.
///
/// The left side uses the computed pullback and hom counting; the right side
/// enumerates maps into `X` and `Y` and matches their composites into `E`.
pub fn verify_universal_property(
    f: &CoproductMap,
    g: &CoproductMap,
    d: usize,
) -> Result<UniversalPropertyReport> {
    let p = pullback(f, g, d)?;
    let Some(r) = f.target.components.first().map(SliceObject::rank) else {
        // everything is empty; Hom(T, ∅) = ∅ on both sides
        return Ok(UniversalPropertyReport { comparisons: Vec::new(), failure: None, pass: true });
    };
    if r > d {
        return Err(Error::InvalidInput(format!("base [{r}] exceeds the bound d={d}")));
    }
    let mut comparisons = Vec::new();
    for t in enumerate_objects(d, r)? {
        let into_pullback = p
            .apex
            .components
            .iter()
            .map(|u| hom_count(&t, u).to_u64().expect("small hom set"))
            .sum();
        let left = composites_into_base(&t, f);
        let right = composites_into_base(&t, g);
        let into_fiber_product = left
            .iter()
            .map(|(key, n)| n * right.get(key).copied().unwrap_or(0))
            .sum();
        comparisons.push(HomComparison { test_object: t, into_pullback, into_fiber_product });
    }
    let failure = comparisons.iter().find(|c| c.into_pullback != c.into_fiber_product).cloned();
    Ok(UniversalPropertyReport { pass: failure.is_none(), failure, comparisons })
}

/// Multiset of `h ∘ α` over all `α: T -> X`, keyed by the target component of
/// `E` and the composite's values.
fn composites_into_base(t: &SliceObject, h: &CoproductMap) -> HashMap<(usize, Vec<usize>), u64> {
    let mut out = HashMap::new();
    for (comp, (e, part)) in h.source.components.iter().zip(&h.parts) {
        for alpha in hom_set(t, comp) {
            let composite = part.after(&alpha).expect("composable by construction");
            *out.entry((*e, composite.map().values().to_vec())).or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(f: &[usize]) -> SliceObject {
        SliceObject::new(f.to_vec()).unwrap()
    }

    fn morph(s: &[usize], t: &[usize], v: &[usize]) -> SliceMorphism {
        let t = obj(t);
        SliceMorphism::new(obj(s), t.clone(), FinMap::new(v.to_vec(), t.total_size()).unwrap())
            .unwrap()
    }

    fn fold2() -> SliceMorphism {
        morph(&[2], &[1], &[1, 1])
    }

    /// All 2^n subsets of the fiber product, kept if good.
    fn brute_counts(f: &FinMap, g: &FinMap, bound: usize) -> BTreeMap<usize, usize> {
        let product = fiber_product_set(f, g).unwrap();
        let mut counts = BTreeMap::new();
        for mask in 0u32..(1 << product.len()) {
            let subset: Vec<_> = (0..product.len()).filter(|i| mask >> i & 1 == 1).map(|i| product[i]).collect();
            let covers_a = (1..=f.source_size()).all(|a| subset.iter().any(|p| p.0 == a));
            let covers_b = (1..=g.source_size()).all(|b| subset.iter().any(|p| p.1 == b));
            if covers_a && covers_b && subset.len() <= bound {
                *counts.entry(subset.len()).or_insert(0) += 1;
            }
        }
        counts
    }

    #[test]
    fn fiber_product_examples() {
        let id2 = FinMap::identity(2);
        assert_eq!(fiber_product_set(&id2, &id2).unwrap(), vec![(1, 1), (2, 2)]);
        let c = FinMap::collapse(2);
        assert_eq!(fiber_product_set(&c, &c).unwrap().len(), 4);
        let f = FinMap::new(vec![1, 1, 2], 2).unwrap();
        assert_eq!(fiber_product_set(&f, &id2).unwrap().len(), 3);
        assert!(fiber_product_set(&f, &c).is_err());
    }

    #[test]
    fn good_subset_examples() {
        let f = fold2();
        let c4 = good_subset_counts(&f, &f, 4).unwrap();
        assert_eq!(c4, BTreeMap::from([(2, 2), (3, 4), (4, 1)]));
        assert_eq!(c4, brute_counts(f.map(), f.map(), 4));
        assert_eq!(good_subset_counts(&f, &f, 2).unwrap(), BTreeMap::from([(2, 2)]));

        // pulling back along an identity leaves only the graph of the other leg
        let g = morph(&[3], &[2], &[1, 2, 2]);
        let id = SliceMorphism::identity(&obj(&[2]));
        let subs = good_subsets(&id, &g, 6).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].elements, vec![(1, 1), (2, 2), (2, 3)]);
    }

    #[test]
    fn good_subsets_match_power_set() {
        let objs: Vec<SliceObject> = enumerate_objects(4, 1).unwrap();
        for e in &objs {
            for a in &objs {
                for b in &objs {
                    for f in hom_set(a, e) {
                        for g in hom_set(b, e) {
                            assert_eq!(
                                good_subset_counts(&f, &g, 4).unwrap(),
                                brute_counts(f.map(), g.map(), 4)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pullback_examples() {
        let f = CoproductMap::from_morphism(fold2());
        let p = pullback(&f, &f, 3).unwrap();
        let sizes: Vec<usize> = p.apex.components().iter().map(SliceObject::total_size).collect();
        assert_eq!(sizes, vec![2, 2, 3, 3, 3, 3]);

        let h = CoproductMap::from_morphism(morph(&[2, 1], &[1, 1], &[1, 1, 2]));
        let p = pullback(&h, &h, 3).unwrap();
        assert_eq!(p.apex.components(), &[obj(&[2, 1]), obj(&[2, 1])]);

        // along an isomorphism the other leg comes back unchanged
        let swap = CoproductMap::from_morphism(morph(&[2], &[2], &[2, 1]));
        let g = CoproductMap::from_morphism(morph(&[3], &[2], &[1, 2, 2]));
        let p = pullback(&swap, &g, 5).unwrap();
        assert_eq!(p.apex.multiset(), g.source().multiset());
    }

    #[test]
    fn pullback_with_disconnected_legs() {
        let x = FormalCoproduct::new(vec![obj(&[2]), obj(&[1])]).unwrap();
        let e = FormalCoproduct::new(vec![obj(&[1]), obj(&[1])]).unwrap();
        let f = CoproductMap::new(
            x.clone(),
            e.clone(),
            vec![(0, fold2()), (1, SliceMorphism::identity(&obj(&[1])))],
        )
        .unwrap();
        let y = FormalCoproduct::connected(obj(&[2]));
        let g = CoproductMap::new(y, e, vec![(1, fold2())]).unwrap();
        let p = pullback(&f, &g, 4).unwrap();
        // only the [1] component of x sits over the same point as y
        assert_eq!(p.apex.components(), &[obj(&[2])]);
        assert!(verify_universal_property(&f, &g, 4).unwrap().pass);
    }

    #[test]
    fn universal_property_examples() {
        let f = CoproductMap::from_morphism(fold2());
        let rep = verify_universal_property(&f, &f, 4).unwrap();
        assert!(rep.pass);
        let t2 = rep.comparisons.iter().find(|c| c.test_object == obj(&[2])).unwrap();
        assert_eq!((t2.into_pullback, t2.into_fiber_product), (4, 4));
        assert!(verify_universal_property(&f, &f, 2).unwrap().pass);

        let iso = CoproductMap::from_morphism(SliceMorphism::identity(&obj(&[2])));
        assert!(verify_universal_property(&iso, &iso, 3).unwrap().pass);
    }

    #[test]
    fn pullback_is_symmetric() {
        let objs = enumerate_objects(4, 2).unwrap();
        for e in &objs {
            for a in &objs {
                for b in &objs {
                    for f in hom_set(a, e) {
                        for g in hom_set(b, e) {
                            let (fm, gm) = (CoproductMap::from_morphism(f.clone()), CoproductMap::from_morphism(g));
                            let p = pullback(&fm, &gm, 4).unwrap();
                            let q = pullback(&gm, &fm, 4).unwrap();
                            assert_eq!(p.apex.multiset(), q.apex.multiset());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn empty_coproduct_pullback() {
        let e = FormalCoproduct::connected(obj(&[1]));
        let empty = CoproductMap::new(FormalCoproduct::empty(), e, vec![]).unwrap();
        let f = CoproductMap::from_morphism(fold2());
        let p = pullback(&empty, &f, 4).unwrap();
        assert!(p.apex.is_empty());
        assert!(verify_universal_property(&empty, &f, 4).unwrap().pass);
    }
}
