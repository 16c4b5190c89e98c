//! The exhaustive verification suites, each reduced to a uniform report so
//! the command line and the acceptance tests can run them side by side.

use num_traits::Zero;
use serde::Serialize;

use crate::burnside::{
    build_ring_with, is_prime, segal_report, structure_constants_by_pullback, structure_constants_by_spans,
};
use crate::cube::pigeonhole::verify_pigeonhole;
use crate::cube::random::{oracle_batch, standard_shapes};
use crate::epi_cat::{check_atomic_orbital_with, enumerate_objects, hom_set, SliceMorphism, SliceObject};
use crate::fin_coprod::{verify_universal_property, CoproductMap};
use crate::finset::{enumerate_surjections, factorial, surjection_count};
use crate::mackey::{endomorphism_ring_of_unit_with, representable_with};
use crate::{par, Exec, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    /// Number of individual checks performed.
    pub cases: u64,
    pub failure: Option<String>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(name: &str, cases: u64, failure: Option<String>) -> Self {
        SuiteReport { name: name.into(), cases, pass: failure.is_none(), failure }
    }
}

/// The Segal table for each prime in `primes`.
pub fn segal(primes: &[u64]) -> Result<SuiteReport> {
    let mut cases = 0;
    for &p in primes {
        let report = segal_report(p)?;
        cases += report.rows.len() as u64;
        if let Some(row) = report.rows.iter().find(|r| !r.pass) {
            let failure = format!(
                "p={p}, k={}: raw image {}, with p {}, expected {}",
                row.k, row.raw_image, row.with_p, row.expected
            );
            return Ok(SuiteReport::new("segal", cases, Some(failure)));
        }
    }
    Ok(SuiteReport::new("segal", cases, None))
}

/// `p | Surj(p, i)` for every prime `p <= max_p` and `2 <= i <= p`.
pub fn divisibility(max_p: u64) -> SuiteReport {
    let mut cases = 0;
    for p in (2..=max_p).filter(|&p| is_prime(p)) {
        for i in 2..=p as usize {
            cases += 1;
            let s = surjection_count(p as usize, i);
            if !(&s % p).is_zero() {
                return SuiteReport::new("divisibility", cases, Some(format!("{p} does not divide Surj({p},{i}) = {s}")));
            }
        }
    }
    SuiteReport::new("divisibility", cases, None)
}

/// `Surj(k, k) = k!` for `k <= max_k`, and the counting formula against
/// enumeration for `k, i <= max_enum`.
pub fn surjection_counts(max_k: usize, max_enum: usize) -> SuiteReport {
    let mut cases = 0;
    for k in 1..=max_k {
        cases += 1;
        if surjection_count(k, k) != factorial(k) {
            return SuiteReport::new("surjection counts", cases, Some(format!("Surj({k},{k}) != {k}!")));
        }
    }
    for k in 1..=max_enum {
        for i in 1..=max_enum {
            cases += 1;
            let listed = enumerate_surjections(k, i).len();
            if surjection_count(k, i) != listed.into() {
                return SuiteReport::new(
                    "surjection counts",
                    cases,
                    Some(format!("Surj({k},{i}): formula {} but {listed} listed", surjection_count(k, i))),
                );
            }
        }
    }
    SuiteReport::new("surjection counts", cases, None)
}

fn grid(max_d: usize, max_r: usize) -> Vec<(usize, usize)> {
    (1..=max_d).flat_map(|d| (1..=max_r.min(d)).map(move |r| (d, r))).collect()
}

/// Marks are multiplicative on every basis triple.
pub fn marks_homomorphism(max_d: usize, max_r: usize, exec: Exec) -> Result<SuiteReport> {
    let mut cases = 0;
    for (d, r) in grid(max_d, max_r) {
        let report = build_ring_with(d, r, exec)?.check_marks_homomorphism_with(exec);
        cases += report.triples as u64;
        if let Some(f) = report.failure {
            let failure = format!(
                "d={d}, r={r}: mark {} of {}·{} is {} but the product of marks is {}",
                f.u, f.v, f.w, f.mark_of_product, f.product_of_marks
            );
            return Ok(SuiteReport::new("marks homomorphism", cases, Some(failure)));
        }
    }
    Ok(SuiteReport::new("marks homomorphism", cases, None))
}

/// Marks matrices are triangular with diagonal `Π k_i!`.
pub fn triangularity(max_d: usize, max_r: usize, exec: Exec) -> Result<SuiteReport> {
    let mut cases = 0;
    for (d, r) in grid(max_d, max_r) {
        let report = build_ring_with(d, r, exec)?.check_triangularity();
        cases += report.diagonal.len() as u64;
        if let Some(f) = report.failure {
            return Ok(SuiteReport::new("triangularity", cases, Some(format!("d={d}, r={r}: {f}"))));
        }
    }
    Ok(SuiteReport::new("triangularity", cases, None))
}

/// `[2]·[2] = 2[2]` in the ring for `d = 2`, and the representable at `[1]`
/// has `res ∘ tr = 2` on its value at `[2]`.
pub fn c2_sanity() -> Result<SuiteReport> {
    let ring = build_ring_with(2, 1, Exec::Sequential)?;
    let two = ring.element(&SliceObject::new(vec![2])?)?;
    let square = ring.mul(&two, &two)?;
    if square.coefficients != vec![0, 2] {
        return Ok(SuiteReport::new("c2 sanity", 1, Some(format!("[2]·[2] = {}", ring.format(&square)))));
    }
    let m = representable_with(2, 1, &SliceObject::new(vec![1])?, Exec::Sequential)?;
    let axioms = m.check_axioms_with(Exec::Sequential)?;
    if !axioms.pass {
        return Ok(SuiteReport::new("c2 sanity", 2, Some("representable fails the axioms".into())));
    }
    let fold = SliceMorphism::to_terminal(&SliceObject::new(vec![2])?);
    let rt = m.restriction(&fold)?.mul(m.transfer(&fold)?)?;
    let tr = m.transfer(&fold)?.mul(m.restriction(&fold)?)?;
    if rt.to_rows() != vec![vec![2]] || tr.to_rows() != vec![vec![0, 0], vec![1, 2]] {
        return Ok(SuiteReport::new(
            "c2 sanity",
            3,
            Some(format!("res∘tr = {:?}, tr∘res = {:?}", rt.to_rows(), tr.to_rows())),
        ));
    }
    Ok(SuiteReport::new("c2 sanity", 3, None))
}

/// Structure constants from the closed formula, from pullbacks, from span
/// composition and from endomorphisms of the representable at the final
/// object all agree.
pub fn triple_consistency(max_d: usize, max_r: usize, exec: Exec) -> Result<SuiteReport> {
    let mut cases = 0;
    for (d, r) in grid(max_d, max_r) {
        let ring = build_ring_with(d, r, exec)?;
        let routes = [
            ("pullbacks", structure_constants_by_pullback(d, r, exec)?),
            ("spans", structure_constants_by_spans(d, r, exec)?),
            ("endomorphisms", endomorphism_ring_of_unit_with(d, r, exec)?.constants().clone()),
        ];
        let n = ring.constants().size() as u64;
        cases += n * n * n * routes.len() as u64;
        for (name, table) in routes {
            if let Some((u, v, w)) = ring.constants().first_difference(&table) {
                let failure = format!(
                    "d={d}, r={r}: {name} give c({},{} -> {}) = {}, formula {}",
                    ring.basis_name(u),
                    ring.basis_name(v),
                    ring.basis_name(w),
                    table.get(u, v, w),
                    ring.constant(u, v, w)
                );
                return Ok(SuiteReport::new("triple consistency", cases, Some(failure)));
            }
        }
    }
    Ok(SuiteReport::new("triple consistency", cases, None))
}

/// Every representable passes the Mackey axioms, double cosets included.
pub fn representables(max_d: usize, max_r: usize, exec: Exec) -> Result<SuiteReport> {
    let mut cases = 0;
    for (d, r) in grid(max_d, max_r) {
        for v in enumerate_objects(d, r)? {
            let report = representable_with(d, r, &v, exec)?.check_axioms_with(exec)?;
            cases += (report.identities + report.compositions + report.cospans) as u64;
            if let Some(f) = report.failure {
                let failure = format!("d={d}, r={r}, at {v}: {:?} fails on {}", f.kind, f.morphisms.join(", "));
                return Ok(SuiteReport::new("representables", cases, Some(failure)));
            }
        }
    }
    Ok(SuiteReport::new("representables", cases, None))
}

/// The pullback universal property for every cospan `X → E ← Y` of
/// connected objects in `Epi_{d,r}`, for every `r <= d`.
pub fn universal_property(d: usize, exec: Exec) -> Result<SuiteReport> {
    let mut cospans = Vec::new();
    for r in 1..=d {
        let objects = enumerate_objects(d, r)?;
        for e in &objects {
            let into_e: Vec<SliceMorphism> = objects.iter().flat_map(|x| hom_set(x, e)).collect();
            for (a, f) in into_e.iter().enumerate() {
                // the check is symmetric in the two legs
                for g in &into_e[a..] {
                    cospans.push((f.clone(), g.clone()));
                }
            }
        }
    }
    let failure = par::find_first(exec, &cospans, |(f, g)| {
        let f_map = CoproductMap::from_morphism(f.clone());
        let g_map = CoproductMap::from_morphism(g.clone());
        match verify_universal_property(&f_map, &g_map, d) {
            Ok(report) if report.pass => None,
            Ok(report) => Some(format!("{f} and {g}: {:?}", report.failure)),
            Err(e) => Some(format!("{f} and {g}: {e}")),
        }
    });
    Ok(SuiteReport::new("universal property", cospans.len() as u64, failure))
}

/// Atomic orbitality of every slice `Epi_{d,r}` with `d <= max_d`.
pub fn orbitality(max_d: usize, exec: Exec) -> Result<SuiteReport> {
    let mut cases = 0;
    for (d, r) in grid(max_d, max_d) {
        let report = check_atomic_orbital_with(d, r, exec)?;
        cases += report.morphisms as u64;
        if !report.pass {
            let failure = format!("d={d}, r={r}: {}", report.counterexample.unwrap_or_default());
            return Ok(SuiteReport::new("orbitality", cases, Some(failure)));
        }
    }
    Ok(SuiteReport::new("orbitality", cases, None))
}

/// The unit-cube criterion against the pointwise oracle on `per_shape`
/// seeded diagrams for every standard shape.
pub fn cube_oracle(max_d: usize, max_r: usize, per_shape: usize, exec: Exec) -> Result<SuiteReport> {
    let mut cases = 0;
    for (p, s) in standard_shapes(max_d, max_r)? {
        let batch = oracle_batch(&p, &s, per_shape, 0, exec)?;
        cases += batch.diagrams as u64;
        if !batch.pass {
            let failure = format!(
                "{}: {} disagreements, first at seed {:?}",
                batch.shape, batch.disagreements, batch.first_disagreement
            );
            return Ok(SuiteReport::new("cube oracle", cases, Some(failure)));
        }
    }
    Ok(SuiteReport::new("cube oracle", cases, None))
}

/// The pigeonhole arithmetic for every `r <= s <= d <= max_d`.
pub fn pigeonhole(max_d: usize) -> Result<SuiteReport> {
    let mut cases = 0;
    for d in 1..=max_d {
        for r in 1..=d {
            for s in r..=d {
                let report = verify_pigeonhole(d, r, s)?;
                let c = &report.counts;
                cases += (c.crosseffect + c.diagonal + c.vanishing + c.degenerate) as u64;
                if let Some(f) = report.failure {
                    return Ok(SuiteReport::new("pigeonhole", cases, Some(format!("d={d}, r={r}, s={s}: {f}"))));
                }
            }
        }
    }
    Ok(SuiteReport::new("pigeonhole", cases, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let exec = Exec::Sequential;
        let reports = [
            segal(&[2, 3]).unwrap(),
            divisibility(7),
            surjection_counts(6, 5),
            marks_homomorphism(3, 2, exec).unwrap(),
            triangularity(3, 2, exec).unwrap(),
            c2_sanity().unwrap(),
            triple_consistency(3, 2, exec).unwrap(),
            representables(2, 2, exec).unwrap(),
            universal_property(2, exec).unwrap(),
            orbitality(3, exec).unwrap(),
            cube_oracle(3, 2, 5, exec).unwrap(),
            pigeonhole(4).unwrap(),
        ];
        for r in reports {
            assert!(r.pass, "{r:?}");
            assert!(r.cases > 0, "{r:?}");
        }
    }
}
