//! The Goodwillie-Burnside rings `A(d, r)` and their marks.
//!
//! `A(d, r)` is free abelian on the iso classes of `Epi_{d,r}`. The product
//! `u · v` is the pullback of `u → [r] ← v` split into good subsets, so the
//! coefficient of `w` counts the good subsets of `u ×_{[r]} v` of shape `w`.
//! Fiber by fiber that is the number of `w_t`-element subsets of a
//! `u_t × v_t` grid meeting every row and every column, which has a closed
//! inclusion-exclusion form. [`structure_constants_by_pullback`] and
//! [`structure_constants_by_spans`] recompute the same table by enumeration.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::epi_cat::{enumerate_objects, hom_count, SliceMorphism, SliceObject};
use crate::fin_coprod::good_subsets;
use crate::finset::{binomial, surjection_count};
use crate::matrix::IntMatrix;
use crate::par::{self, Exec};
use crate::span_cat::{compose, SpanClass};
use crate::{Error, Result};

/// An element of `A(d, r)`, as coefficients over the ring's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BurnsideElement {
    pub coefficients: Vec<i64>,
}

impl BurnsideElement {
    pub fn zero(n: usize) -> Self {
        BurnsideElement { coefficients: vec![0; n] }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut e = BurnsideElement::zero(n);
        e.coefficients[i] = 1;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }
}

/// A subgroup `gℤ` of the integers, `g >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdealImage {
    pub generator: u64,
}

impl fmt::Display for IdealImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.generator {
            0 => write!(f, "0"),
            1 => write!(f, "Z"),
            g => write!(f, "{g}Z"),
        }
    }
}

/// Structure constants, one dense `n × n × n` table indexed `[u][v][w]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    n: usize,
    data: Vec<i64>,
}

impl StructureConstants {
    pub fn zeros(n: usize) -> Self {
        StructureConstants { n, data: vec![0; n * n * n] }
    }

    pub fn get(&self, u: usize, v: usize, w: usize) -> i64 {
        self.data[(u * self.n + v) * self.n + w]
    }

    pub fn set(&mut self, u: usize, v: usize, w: usize, c: i64) {
        self.data[(u * self.n + v) * self.n + w] = c;
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// First `(u, v, w)` where the two tables differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize, usize)> {
        if self.n != other.n {
            return Some((0, 0, 0));
        }
        let n = self.n;
        (0..self.data.len())
            .find(|&i| self.data[i] != other.data[i])
            .map(|i| (i / (n * n), i / n % n, i % n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnsideRing {
    d: usize,
    r: usize,
    basis: Vec<SliceObject>,
    index: HashMap<SliceObject, usize>,
    constants: StructureConstants,
    marks: IntMatrix,
}

/// Number of `n`-element subsets of a `k × l` grid meeting every row and
/// every column.
pub fn covering_count(k: usize, l: usize, n: usize) -> BigInt {
    let mut total = BigInt::zero();
    for i in 0..=k {
        for j in 0..=l {
            let term = BigInt::from(binomial(k, i) * binomial(l, j) * binomial((k - i) * (l - j), n));
            if (i + j) % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    total
}

fn to_i64(x: &BigInt, what: &str) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(format!("{what} = {x} exceeds 64 bits")))
}

/// Coefficient of `w` in `u · v` by the closed covering formula.
pub fn structure_constant(u: &SliceObject, v: &SliceObject, w: &SliceObject, d: usize) -> Result<i64> {
    if w.total_size() > d || u.rank() != v.rank() || u.rank() != w.rank() {
        return Ok(0);
    }
    let mut acc = BigInt::from(1);
    for t in 0..u.rank() {
        acc *= covering_count(u.fibers()[t], v.fibers()[t], w.fibers()[t]);
        if acc.is_zero() {
            return Ok(0);
        }
    }
    to_i64(&acc, "structure constant")
}

pub fn build_ring(d: usize, r: usize) -> Result<BurnsideRing> {
    build_ring_with(d, r, Exec::default())
}

/// Builds `A(d, r)` and checks unit, commutativity and associativity before
/// returning it.
pub fn build_ring_with(d: usize, r: usize, exec: Exec) -> Result<BurnsideRing> {
    let basis = enumerate_objects(d, r)?;
    let n = basis.len();
    let rows: Vec<Result<Vec<i64>>> = par::map(exec, &(0..n).collect::<Vec<_>>(), |&u| {
        let mut row = Vec::with_capacity(n * n);
        for v in &basis {
            for w in &basis {
                row.push(structure_constant(&basis[u], v, w, d)?);
            }
        }
        Ok(row)
    });
    let mut constants = StructureConstants::zeros(n);
    for (u, row) in rows.into_iter().enumerate() {
        for (i, c) in row?.into_iter().enumerate() {
            constants.set(u, i / n, i % n, c);
        }
    }
    from_table_with(d, r, constants, exec)
}

pub fn from_table(d: usize, r: usize, constants: StructureConstants) -> Result<BurnsideRing> {
    from_table_with(d, r, constants, Exec::default())
}

/// Wraps an externally computed table, rejecting it unless it is a
/// commutative, associative, unital multiplication.
pub fn from_table_with(
    d: usize,
    r: usize,
    constants: StructureConstants,
    exec: Exec,
) -> Result<BurnsideRing> {
    let basis = enumerate_objects(d, r)?;
    let n = basis.len();
    if constants.size() != n {
        return Err(Error::SizeMismatch(format!(
            "table has size {} but A({d},{r}) has rank {n}",
            constants.size()
        )));
    }
    let marks = marks_matrix_of(&basis)?;
    let index = basis.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
    let ring = BurnsideRing { d, r, basis, index, constants, marks };
    ring.check_ring_axioms(exec)?;
    Ok(ring)
}

fn marks_matrix_of(basis: &[SliceObject]) -> Result<IntMatrix> {
    let n = basis.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let c = hom_count(u, v);
            let c = c.to_i64().ok_or_else(|| Error::Overflow(format!("|Hom({u},{v})| = {c}")))?;
            m.set(i, j, c);
        }
    }
    Ok(m)
}

/// `|Hom(u, v)|` over the basis of `Epi_{d,r}`.
pub fn marks_matrix(d: usize, r: usize) -> Result<IntMatrix> {
    marks_matrix_of(&enumerate_objects(d, r)?)
}

impl BurnsideRing {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn basis(&self) -> &[SliceObject] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, u: &SliceObject) -> Result<usize> {
        self.index
            .get(u)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("{u} is not a basis object of A({},{})", self.d, self.r)))
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn constant(&self, u: usize, v: usize, w: usize) -> i64 {
        self.constants.get(u, v, w)
    }

    pub fn marks(&self) -> &IntMatrix {
        &self.marks
    }

    pub fn unit(&self) -> BurnsideElement {
        // (1, ..., 1) is the only object of size r, so it comes first
        BurnsideElement::basis(self.rank(), 0)
    }

    pub fn element(&self, u: &SliceObject) -> Result<BurnsideElement> {
        Ok(BurnsideElement::basis(self.rank(), self.index_of(u)?))
    }

    fn check_len(&self, x: &BurnsideElement) -> Result<()> {
        if x.coefficients.len() != self.rank() {
            return Err(Error::SizeMismatch(format!(
                "element has {} coefficients, A({},{}) has rank {}",
                x.coefficients.len(),
                self.d,
                self.r,
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, x: &BurnsideElement, y: &BurnsideElement) -> Result<BurnsideElement> {
        self.check_len(x)?;
        self.check_len(y)?;
        let n = self.rank();
        let mut out = vec![0i128; n];
        for (u, &a) in x.coefficients.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (v, &b) in y.coefficients.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                for (w, slot) in out.iter_mut().enumerate() {
                    let c = self.constants.get(u, v, w);
                    if c != 0 {
                        *slot += a as i128 * b as i128 * c as i128;
                    }
                }
            }
        }
        let coefficients = out
            .into_iter()
            .map(|c| i64::try_from(c).map_err(|_| Error::Overflow("ring product".into())))
            .collect::<Result<_>>()?;
        Ok(BurnsideElement { coefficients })
    }

    /// `Φ^u(x) = Σ_v x_v |Hom(u, v)|`.
    pub fn mark(&self, u: &SliceObject, x: &BurnsideElement) -> Result<i64> {
        self.mark_at(self.index_of(u)?, x)
    }

    pub fn mark_at(&self, u: usize, x: &BurnsideElement) -> Result<i64> {
        self.check_len(x)?;
        let total: i128 = x
            .coefficients
            .iter()
            .enumerate()
            .map(|(v, &c)| c as i128 * self.marks.get(u, v) as i128)
            .sum();
        i64::try_from(total).map_err(|_| Error::Overflow("mark value".into()))
    }

    fn check_ring_axioms(&self, exec: Exec) -> Result<()> {
        let n = self.rank();
        let c = &self.constants;
        let unit = 0;
        for u in 0..n {
            for w in 0..n {
                let expected = i64::from(u == w);
                if c.get(unit, u, w) != expected || c.get(u, unit, w) != expected {
                    return Err(Error::Inconsistent(format!(
                        "{} is not a unit at {}",
                        self.basis[unit], self.basis[u]
                    )));
                }
            }
            for v in 0..n {
                for w in 0..n {
                    if c.get(u, v, w) != c.get(v, u, w) {
                        return Err(Error::Inconsistent(format!(
                            "{} · {} is not commutative",
                            self.basis[u], self.basis[v]
                        )));
                    }
                }
            }
        }
        let us: Vec<usize> = (0..n).collect();
        let failure = par::find_first(exec, &us, |&u| {
            for v in 0..n {
                for w in 0..n {
                    for y in 0..n {
                        let mut left = 0i128;
                        let mut right = 0i128;
                        for x in 0..n {
                            left += c.get(u, v, x) as i128 * c.get(x, w, y) as i128;
                            right += c.get(v, w, x) as i128 * c.get(u, x, y) as i128;
                        }
                        if left != right {
                            return Some((u, v, w));
                        }
                    }
                }
            }
            None
        });
        if let Some((u, v, w)) = failure {
            return Err(Error::Inconsistent(format!(
                "associativity fails for {}, {}, {}",
                self.basis[u], self.basis[v], self.basis[w]
            )));
        }
        Ok(())
    }

    /// Renders `x` as `2[2] + 4[3] + [4]`.
    pub fn format(&self, x: &BurnsideElement) -> String {
        let mut parts = Vec::new();
        for (u, &c) in x.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = self.basis_name(u);
            let term = match c {
                1 => name,
                -1 => format!("-{name}"),
                _ => format!("{c}{name}"),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" + ").replace("+ -", "- ")
    }

    pub fn basis_name(&self, u: usize) -> String {
        let obj = &self.basis[u];
        if self.r == 1 {
            format!("[{}]", obj.total_size())
        } else {
            obj.to_string()
        }
    }

    /// Ring-map test for every mark: `Φ^u(v · w) = Φ^u(v) Φ^u(w)` over all
    /// basis triples.
    pub fn check_marks_homomorphism(&self) -> MarksHomReport {
        self.check_marks_homomorphism_with(Exec::default())
    }

    pub fn check_marks_homomorphism_with(&self, exec: Exec) -> MarksHomReport {
        let n = self.rank();
        let us: Vec<usize> = (0..n).collect();
        let failure = par::find_first(exec, &us, |&u| {
            for v in 0..n {
                for w in 0..n {
                    let lhs: i128 = (0..n)
                        .map(|x| self.constants.get(v, w, x) as i128 * self.marks.get(u, x) as i128)
                        .sum();
                    let rhs = self.marks.get(u, v) as i128 * self.marks.get(u, w) as i128;
                    if lhs != rhs {
                        return Some(MarksFailure {
                            u: self.basis[u].clone(),
                            v: self.basis[v].clone(),
                            w: self.basis[w].clone(),
                            mark_of_product: lhs.to_string(),
                            product_of_marks: rhs.to_string(),
                        });
                    }
                }
            }
            None
        });
        MarksHomReport { d: self.d, r: self.r, triples: n * n * n, pass: failure.is_none(), failure }
    }

    /// Checks that the marks matrix is lower triangular in basis order with
    /// diagonal `Π k_i!`, and that `|Hom(u, v)| = 0` whenever `|u| < |v|`.
    pub fn check_triangularity(&self) -> TriangularityReport {
        let n = self.rank();
        let mut failure = None;
        let mut diagonal = Vec::with_capacity(n);
        'outer: for i in 0..n {
            let expected: i64 = self.basis[i]
                .fibers()
                .iter()
                .map(|&k| (1..=k as i64).product::<i64>())
                .product();
            diagonal.push(self.marks.get(i, i));
            if self.marks.get(i, i) != expected || expected == 0 {
                failure = Some(format!("diagonal at {} is {}", self.basis[i], self.marks.get(i, i)));
                break;
            }
            for j in i + 1..n {
                if self.marks.get(i, j) != 0 {
                    failure = Some(format!("entry ({}, {}) above the diagonal", self.basis[i], self.basis[j]));
                    break 'outer;
                }
            }
            for j in 0..n {
                if self.basis[i].total_size() < self.basis[j].total_size() && self.marks.get(i, j) != 0 {
                    failure = Some(format!("map from {} onto larger {}", self.basis[i], self.basis[j]));
                    break 'outer;
                }
            }
        }
        TriangularityReport { d: self.d, r: self.r, pass: failure.is_none(), diagonal, failure }
    }

    pub fn to_json(&self) -> BurnsideJson {
        let n = self.rank();
        let mut structure_constants = Vec::new();
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let c = self.constants.get(u, v, w);
                    if c != 0 {
                        structure_constants.push(ConstantEntry {
                            u: self.basis[u].fibers().to_vec(),
                            v: self.basis[v].fibers().to_vec(),
                            w: self.basis[w].fibers().to_vec(),
                            c,
                        });
                    }
                }
            }
        }
        BurnsideJson {
            d: self.d,
            r: self.r,
            basis: self.basis.iter().map(|u| u.fibers().to_vec()).collect(),
            structure_constants,
            marks: self.marks.to_rows(),
        }
    }

    /// The marks matrix as CSV: a header of basis tuples, then one row per
    /// marking object.
    pub fn marks_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["object".to_string()];
        header.extend(self.basis.iter().map(ToString::to_string));
        w.write_record(&header).map_err(csv_err)?;
        for (i, u) in self.basis.iter().enumerate() {
            let mut row = vec![u.to_string()];
            row.extend((0..self.rank()).map(|j| self.marks.get(i, j).to_string()));
            w.write_record(&row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    /// The image of the ideal generated by `generators` under `Φ^u`, joined
    /// with `p` if given.
    ///
    /// Each generator is also multiplied by every basis element first; marks
    /// are ring maps so this changes nothing, but the result must not lean on
    /// the property the suites are testing.
    pub fn image_of_ideal(
        &self,
        u: &SliceObject,
        generators: &[BurnsideElement],
        p: Option<u64>,
    ) -> Result<IdealImage> {
        let ui = self.index_of(u)?;
        let mut g: u64 = p.unwrap_or(0);
        for x in generators {
            g = g.gcd(&self.mark_at(ui, x)?.unsigned_abs());
            for b in 0..self.rank() {
                let xb = self.mul(x, &BurnsideElement::basis(self.rank(), b))?;
                g = g.gcd(&self.mark_at(ui, &xb)?.unsigned_abs());
            }
        }
        Ok(IdealImage { generator: g })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub w: Vec<usize>,
    pub c: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurnsideJson {
    pub d: usize,
    pub r: usize,
    pub basis: Vec<Vec<usize>>,
    pub structure_constants: Vec<ConstantEntry>,
    pub marks: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarksFailure {
    pub u: SliceObject,
    pub v: SliceObject,
    pub w: SliceObject,
    pub mark_of_product: String,
    pub product_of_marks: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarksHomReport {
    pub d: usize,
    pub r: usize,
    pub triples: usize,
    pub failure: Option<MarksFailure>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularityReport {
    pub d: usize,
    pub r: usize,
    pub diagonal: Vec<i64>,
    pub failure: Option<String>,
    pub pass: bool,
}

/// The `d - 1` generators `[i] - |Epi(d, i)|·[1]`, `2 <= i <= d`, of the
/// augmentation ideal `I(d) = ker Φ^[d]` in `A(d)`.
pub fn augmentation_ideal(d: usize) -> Result<Vec<BurnsideElement>> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be positive".into()));
    }
    (2..=d)
        .map(|i| {
            let mut e = BurnsideElement::basis(d, i - 1);
            let s = surjection_count(d, i);
            e.coefficients[0] = -s
                .to_i64()
                .ok_or_else(|| Error::Overflow(format!("|Epi({d},{i})| = {s}")))?;
            Ok(e)
        })
        .collect()
}

/// Trial division; enough for the sizes the ring builds can reach.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// `(p, Φ^[k](I(d)))`, with `p` required to be prime.
pub fn ideal_image(d: usize, k: usize, p: Option<u64>) -> Result<IdealImage> {
    if let Some(p) = p {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!(
                "{p} is not prime; use the composite variant to explore non-prime moduli"
            )));
        }
    }
    ideal_image_any_modulus(d, k, p)
}

/// As [`ideal_image`] but accepts any modulus.
pub fn ideal_image_any_modulus(d: usize, k: usize, p: Option<u64>) -> Result<IdealImage> {
    if k == 0 || k > d {
        return Err(Error::InvalidInput(format!("need 1 <= k <= d, got k={k}, d={d}")));
    }
    let ring = build_ring(d, 1)?;
    image_in(&ring, k, p)
}

fn image_in(ring: &BurnsideRing, k: usize, p: Option<u64>) -> Result<IdealImage> {
    let gens = augmentation_ideal(ring.d())?;
    ring.image_of_ideal(&SliceObject::new(vec![k])?, &gens, p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalRow {
    pub k: usize,
    /// Generator of `Φ^[k](I(p))` alone.
    pub raw_image: u64,
    /// Generator of `(p, Φ^[k](I(p)))`.
    pub with_p: u64,
    pub expected: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityWitness {
    pub i: usize,
    pub surjections: String,
    pub divisible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalReport {
    pub p: u64,
    pub rows: Vec<SegalRow>,
    pub witnesses: Vec<DivisibilityWitness>,
    pub pass: bool,
}

/// For each `1 <= k <= p`: `(p, Φ^[k](I(p)))` should be `pℤ` at `k = 1`, all
/// of `ℤ` strictly between, and the raw image vanishes at `k = p`.
pub fn segal_report(p: u64) -> Result<SegalReport> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let d = usize::try_from(p).map_err(|_| Error::InvalidInput("p too large".into()))?;
    let ring = build_ring(d, 1)?;
    let mut rows = Vec::with_capacity(d);
    for k in 1..=d {
        let raw = image_in(&ring, k, None)?.generator;
        let with_p = raw.gcd(&p);
        let expected = if k == 1 || k == d { p } else { 1 };
        let raw_ok = k != d || raw == 0;
        rows.push(SegalRow { k, raw_image: raw, with_p, expected, pass: with_p == expected && raw_ok });
    }
    let witnesses: Vec<DivisibilityWitness> = (2..=d)
        .map(|i| {
            let s = surjection_count(d, i);
            DivisibilityWitness {
                i,
                divisible: (&s % p).is_zero(),
                surjections: s.to_string(),
            }
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass) && witnesses.iter().all(|w| w.divisible);
    Ok(SegalReport { p, rows, witnesses, pass })
}

/// The table recomputed by enumerating good subsets of `u ×_{[r]} v` with
/// `|U| <= d`.
pub fn structure_constants_by_pullback(d: usize, r: usize, exec: Exec) -> Result<StructureConstants> {
    let basis = enumerate_objects(d, r)?;
    let index: HashMap<&SliceObject, usize> = basis.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let n = basis.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    let rows = par::map(exec, &pairs, |&(u, v)| -> Result<Vec<(usize, i64)>> {
        let f = SliceMorphism::to_terminal(&basis[u]);
        let g = SliceMorphism::to_terminal(&basis[v]);
        let mut counts = vec![0i64; n];
        for s in good_subsets(&f, &g, d)? {
            counts[index[&s.object]] += 1;
        }
        Ok(counts.into_iter().enumerate().filter(|(_, c)| *c != 0).collect())
    });
    let mut table = StructureConstants::zeros(n);
    for (&(u, v), row) in pairs.iter().zip(rows) {
        for (w, c) in row? {
            table.set(u, v, w, c);
        }
    }
    Ok(table)
}

/// The table recomputed by composing the spans `[r] ← u → [r]` and
/// `[r] ← v → [r]`.
pub fn structure_constants_by_spans(d: usize, r: usize, exec: Exec) -> Result<StructureConstants> {
    let basis = enumerate_objects(d, r)?;
    let n = basis.len();
    let spans: Vec<SpanClass> = basis
        .iter()
        .map(|u| {
            let to_final = SliceMorphism::to_terminal(u);
            compose(&SpanClass::forward(&to_final), &SpanClass::backward(&to_final), d)
                .map(|s| s.terms().keys().next().cloned().expect("one class"))
        })
        .collect::<Result<_>>()?;
    let index: HashMap<&SpanClass, usize> = spans.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    let rows = par::map(exec, &pairs, |&(u, v)| -> Result<Vec<(usize, i64)>> {
        let product = compose(&spans[v], &spans[u], d)?;
        product
            .terms()
            .iter()
            .map(|(c, &m)| {
                index
                    .get(c)
                    .map(|&w| (w, m))
                    .ok_or_else(|| Error::Inconsistent(format!("composite {c} is not a basis span")))
            })
            .collect()
    });
    let mut table = StructureConstants::zeros(n);
    for (&(u, v), row) in pairs.iter().zip(rows) {
        for (w, c) in row? {
            table.set(u, v, w, c);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::surjection_count_u64;
    use proptest::prelude::*;

    fn obj(f: &[usize]) -> SliceObject {
        SliceObject::new(f.to_vec()).unwrap()
    }

    /// Brute-force covering count over all subsets of the grid.
    fn brute_covering(k: usize, l: usize, n: usize) -> i64 {
        let cells = k * l;
        (0u32..1 << cells)
            .filter(|m| m.count_ones() as usize == n)
            .filter(|m| {
                (0..k).all(|i| (0..l).any(|j| m >> (i * l + j) & 1 == 1))
                    && (0..l).all(|j| (0..k).any(|i| m >> (i * l + j) & 1 == 1))
            })
            .count() as i64
    }

    #[test]
    fn covering_matches_brute_force() {
        for k in 1..=4 {
            for l in 1..=4 {
                for n in 0..=k * l {
                    assert_eq!(covering_count(k, l, n), BigInt::from(brute_covering(k, l, n)), "{k} {l} {n}");
                }
            }
        }
    }

    #[test]
    fn ring_examples() {
        let a2 = build_ring(2, 1).unwrap();
        let two = a2.element(&obj(&[2])).unwrap();
        assert_eq!(a2.format(&a2.mul(&two, &two).unwrap()), "2[2]");

        let a4 = build_ring(4, 1).unwrap();
        let two = a4.element(&obj(&[2])).unwrap();
        assert_eq!(a4.format(&a4.mul(&two, &two).unwrap()), "2[2] + 4[3] + [4]");

        let a32 = build_ring(3, 2).unwrap();
        let x = a32.element(&obj(&[2, 1])).unwrap();
        let y = a32.element(&obj(&[1, 2])).unwrap();
        assert_eq!(a32.mul(&x, &x).unwrap(), x.clone().scaled(2));
        assert_eq!(a32.mul(&y, &y).unwrap(), y.clone().scaled(2));
        assert!(a32.mul(&x, &y).unwrap().is_zero());

        let a1 = build_ring(1, 1).unwrap();
        assert_eq!(a1.rank(), 1);
        assert_eq!(a1.constant(0, 0, 0), 1);
    }

    impl BurnsideElement {
        fn scaled(mut self, k: i64) -> Self {
            self.coefficients.iter_mut().for_each(|c| *c *= k);
            self
        }
    }

    #[test]
    fn support_bounds() {
        for d in 1..=5 {
            for r in 1..=d.min(3) {
                let ring = build_ring(d, r).unwrap();
                let b = ring.basis();
                for u in 0..b.len() {
                    for v in 0..b.len() {
                        for w in 0..b.len() {
                            let (su, sv, sw) = (b[u].total_size(), b[v].total_size(), b[w].total_size());
                            if sw > (su + sv).min(d) || sw < su.max(sv) {
                                assert_eq!(ring.constant(u, v, w), 0);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mark_examples() {
        let a4 = build_ring(4, 1).unwrap();
        let unit = a4.unit();
        for k in 1..=4 {
            assert_eq!(a4.mark(&obj(&[k]), &unit).unwrap(), 1);
        }
        let two = a4.element(&obj(&[2])).unwrap();
        assert_eq!(a4.mark(&obj(&[3]), &two).unwrap(), 6);
        assert_eq!(a4.mark(&obj(&[2]), &two).unwrap(), 2);
        let sq = a4.mul(&two, &two).unwrap();
        assert_eq!(a4.mark(&obj(&[4]), &sq).unwrap(), 196);
        assert!(a4.mark(&obj(&[5]), &two).is_err());
    }

    #[test]
    fn marks_matrix_examples() {
        assert_eq!(marks_matrix(3, 1).unwrap().to_rows(), vec![vec![1, 0, 0], vec![1, 2, 0], vec![1, 6, 6]]);
        assert_eq!(marks_matrix(1, 1).unwrap().to_rows(), vec![vec![1]]);
        let m = marks_matrix(3, 2).unwrap();
        assert_eq!((0..3).map(|i| m.get(i, i)).collect::<Vec<_>>(), vec![1, 2, 2]);
        for d in 1..=6 {
            for r in 1..=d.min(3) {
                assert!(build_ring(d, r).unwrap().check_triangularity().pass);
            }
        }
    }

    #[test]
    fn marks_are_ring_maps() {
        for d in 1..=5 {
            for r in 1..=d.min(3) {
                let rep = build_ring(d, r).unwrap().check_marks_homomorphism();
                assert!(rep.pass, "{rep:?}");
            }
        }
    }

    #[test]
    fn marks_ignore_the_truncation_bound() {
        for d in 1..=4 {
            let small = build_ring(d, 1).unwrap();
            let big = build_ring(d + 2, 1).unwrap();
            let lift = |x: &BurnsideElement| {
                let mut c = x.coefficients.clone();
                c.resize(big.rank(), 0);
                BurnsideElement { coefficients: c }
            };
            for k in 1..=d {
                let u = obj(&[k]);
                for v in 0..small.rank() {
                    for w in 0..small.rank() {
                        let (ev, ew) = (BurnsideElement::basis(small.rank(), v), BurnsideElement::basis(small.rank(), w));
                        let p_small = small.mul(&ev, &ew).unwrap();
                        let p_big = big.mul(&lift(&ev), &lift(&ew)).unwrap();
                        assert_eq!(small.mark(&u, &p_small).unwrap(), big.mark(&u, &p_big).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn augmentation_examples() {
        let a2 = build_ring(2, 1).unwrap();
        let g2 = augmentation_ideal(2).unwrap();
        assert_eq!(g2.len(), 1);
        assert_eq!(a2.format(&g2[0]), "-2[1] + [2]");
        let g3 = augmentation_ideal(3).unwrap();
        assert_eq!(g3[0].coefficients, vec![-6, 1, 0]);
        assert_eq!(g3[1].coefficients, vec![-6, 0, 1]);
        assert!(augmentation_ideal(1).unwrap().is_empty());
        for d in 1..=6 {
            let ring = build_ring(d, 1).unwrap();
            for g in augmentation_ideal(d).unwrap() {
                assert_eq!(ring.mark(&obj(&[d]), &g).unwrap(), 0);
            }
        }
    }

    proptest! {
        /// Every integer vector killed by Φ^[d] is an integer combination of
        /// the generators, with coefficients read off from positions 2..d.
        #[test]
        fn generators_span_the_kernel(d in 1usize..=6, tail in proptest::collection::vec(-20i64..=20, 5)) {
            let gens = augmentation_ideal(d).unwrap();
            let ring = build_ring(d, 1).unwrap();
            let mut x = vec![0i64; d];
            for i in 1..d {
                x[i] = tail[i - 1];
                x[0] -= tail[i - 1] * surjection_count_u64(d, i + 1).unwrap() as i64;
            }
            let x = BurnsideElement { coefficients: x };
            prop_assert_eq!(ring.mark(&obj(&[d]), &x).unwrap(), 0);
            let mut recombined = vec![0i64; d];
            for (i, g) in gens.iter().enumerate() {
                for (slot, c) in recombined.iter_mut().zip(&g.coefficients) {
                    *slot += x.coefficients[i + 1] * c;
                }
            }
            prop_assert_eq!(recombined, x.coefficients);
        }
    }

    #[test]
    fn ideal_image_examples() {
        assert_eq!(ideal_image(3, 1, Some(3)).unwrap().generator, 3);
        assert_eq!(ideal_image(3, 2, Some(3)).unwrap().generator, 1);
        assert_eq!(ideal_image(3, 3, None).unwrap().generator, 0);
        assert!(matches!(ideal_image(3, 1, Some(4)), Err(Error::InvalidInput(_))));
        assert_eq!(ideal_image_any_modulus(4, 1, Some(4)).unwrap().generator, 2);
        assert!(ideal_image(3, 4, None).is_err());
    }

    #[test]
    fn segal_examples() {
        let r2 = segal_report(2).unwrap();
        assert!(r2.pass);
        assert_eq!(r2.rows[0].with_p, 2);
        let r3 = segal_report(3).unwrap();
        assert!(r3.pass);
        assert_eq!(r3.rows.iter().map(|r| r.with_p).collect::<Vec<_>>(), vec![3, 1, 3]);
        assert_eq!(r3.rows[2].raw_image, 0);
        let r5 = segal_report(5).unwrap();
        // gcd(-28, -150, -240, -120) = 2, and joining 5 gives everything
        assert_eq!(r5.rows[1].raw_image, 2);
        assert_eq!(r5.rows[1].with_p, 1);
        assert!(r5.pass);
        assert!(segal_report(6).is_err());
    }

    #[test]
    fn three_routes_agree() {
        for d in 1..=4 {
            for r in 1..=d.min(2) {
                let ring = build_ring(d, r).unwrap();
                assert_eq!(structure_constants_by_pullback(d, r, Exec::Sequential).unwrap(), *ring.constants());
                assert_eq!(structure_constants_by_spans(d, r, Exec::Sequential).unwrap(), *ring.constants());
            }
        }
    }

    #[test]
    fn from_table_rejects_non_rings() {
        let ring = build_ring(3, 1).unwrap();
        let mut bad = ring.constants().clone();
        bad.set(1, 2, 2, bad.get(1, 2, 2) + 1);
        assert!(matches!(from_table(3, 1, bad), Err(Error::Inconsistent(_))));
        assert!(from_table(3, 1, ring.constants().clone()).is_ok());
    }

    #[test]
    fn exports() {
        let ring = build_ring(2, 1).unwrap();
        let json = serde_json::to_string(&ring.to_json()).unwrap();
        assert!(json.contains(r#""marks":[[1,0],[1,2]]"#));
        let csv = ring.marks_csv().unwrap();
        assert_eq!(csv, "object,(1),(2)\n(1),1,0\n(2),1,2\n");
        let modes = [Exec::Sequential, Exec::Parallel];
        let reports: Vec<_> = modes.iter().map(|&e| build_ring(4, 2).unwrap().check_marks_homomorphism_with(e)).collect();
        assert_eq!(reports[0], reports[1]);
    }
}
