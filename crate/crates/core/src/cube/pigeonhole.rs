//! Degree bookkeeping for cross-effects and diagonals, and the exhaustive
//! check of the pigeonhole arithmetic on generator profiles.
//!
//! A generator profile over `[r]` is a tuple `ℓ` with `ℓ_i >= 1` and
//! `Σℓ <= d`; these index the truncated cube.

use serde::Serialize;

use crate::finset::{enumerate_surjections, FinMap};
use crate::{Error, Result};

/// Some 1-based `j` with `k_j <= ℓ_j - 1`, when `Σℓ > d`, `Σk <= d` and
/// `1 <= k_i <= d - r + 1`. The smallest such `j` is returned; `None` when
/// the hypothesis fails.
pub fn degenerate_direction(d: usize, profile: &[usize], k: &[usize]) -> Option<usize> {
    let r = profile.len();
    if k.len() != r || r == 0 || r > d {
        return None;
    }
    let m = d - r + 1;
    let hypothesis = profile.iter().sum::<usize>() > d
        && k.iter().sum::<usize>() <= d
        && k.iter().all(|&x| (1..=m).contains(&x));
    if !hypothesis {
        return None;
    }
    (0..r).find(|&j| k[j] + 1 <= profile[j]).map(|j| j + 1)
}

/// The degree profile of the cross-effect along `f: [s] ↠ [r]` of something
/// with profile `d⃗`: position `j` gets `d_{f(j)} - |f⁻¹(f(j))| + 1`. An
/// entry `<= 0` means the cross-effect vanishes.
pub fn crosseffect_degrees(profile: &[usize], f: &FinMap) -> Result<Vec<i64>> {
    check_surjection(profile.len(), f)?;
    let sizes = f.fiber_sizes();
    Ok(f.values()
        .iter()
        .map(|&i| profile[i - 1] as i64 - sizes[i - 1] as i64 + 1)
        .collect())
}

/// The degree profile of the diagonal along `f: [s] ↠ [r]` of something
/// with profile `e⃗` over `[s]`: position `i` gets `Σ_{j ∈ f⁻¹(i)} e_j`.
pub fn diagonal_degrees(profile: &[usize], f: &FinMap) -> Result<Vec<usize>> {
    if profile.len() != f.source_size() {
        return Err(Error::SizeMismatch(format!(
            "profile has {} entries, map has source [{}]",
            profile.len(),
            f.source_size()
        )));
    }
    if !f.is_surjective() {
        return Err(Error::InvalidInput(format!("{f} is not surjective")));
    }
    let mut out = vec![0; f.target_size()];
    for (j, &i) in f.values().iter().enumerate() {
        out[i - 1] += profile[j];
    }
    Ok(out)
}

fn check_surjection(r: usize, f: &FinMap) -> Result<()> {
    if f.target_size() != r {
        return Err(Error::SizeMismatch(format!("profile has {r} entries, map lands in [{}]", f.target_size())));
    }
    if !f.is_surjective() {
        return Err(Error::InvalidInput(format!("{f} is not surjective")));
    }
    Ok(())
}

/// All tuples of length `len` with entries in `[lo, hi]`, lexicographic.
fn tuples(len: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (lo..=hi).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Generator profiles over `[r]` for degree `d`.
pub fn generator_profiles(d: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 || r > d {
        return Vec::new();
    }
    tuples(r, 1, d - r + 1).into_iter().filter(|t| t.iter().sum::<usize>() <= d).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PigeonholeCounts {
    /// `(ℓ, f)` pairs for the cross-effect claim.
    pub crosseffect: usize,
    /// Of those, how many vanish.
    pub crosseffect_zero: usize,
    /// `(e, f)` pairs for the diagonal claim.
    pub diagonal: usize,
    /// `(k, ℓ)` pairs for the vanishing claim.
    pub vanishing: usize,
    /// `(ℓ, k)` pairs for the degenerate-direction lemma over `[r]`.
    pub degenerate: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PigeonholeReport {
    pub d: usize,
    pub r: usize,
    pub s: usize,
    pub counts: PigeonholeCounts,
    pub failure: Option<String>,
    pub pass: bool,
}

/// Exhaustively checks, for `r <= s <= d`:
///
/// * cross-effects: for every generator `ℓ` over `[r]` and surjection
///   `f: [s] ↠ [r]`, the cross-effect profile either has an entry `<= 0` or
///   all its entries are at most `d - s + 1`;
/// * diagonals: for every generator `e` over `[s]` and `f`, the diagonal
///   profile has entries at most `d - r + 1` and total at most `d`;
/// * vanishing: for every `k` over `[r]` with entries in `[1, d - r + 1]`
///   and `Σk > d`, and every generator `ℓ` over `[r]`, some `ℓ_i - k_i + 1`
///   is below 1;
/// * the degenerate-direction lemma for every qualifying `(ℓ, k)` over `[r]`.
pub fn verify_pigeonhole(d: usize, r: usize, s: usize) -> Result<PigeonholeReport> {
    if !(1 <= r && r <= s && s <= d) {
        return Err(Error::InvalidInput(format!("need 1 <= r <= s <= d, got d={d}, r={r}, s={s}")));
    }
    let mut counts =
        PigeonholeCounts { crosseffect: 0, crosseffect_zero: 0, diagonal: 0, vanishing: 0, degenerate: 0 };
    let mut failure = None;
    let surjections = enumerate_surjections(s, r);
    let gens_r = generator_profiles(d, r);
    let gens_s = generator_profiles(d, s);

    'cross: for l in &gens_r {
        for f in &surjections {
            counts.crosseffect += 1;
            let degrees = crosseffect_degrees(l, f)?;
            if degrees.iter().any(|&x| x <= 0) {
                counts.crosseffect_zero += 1;
            } else if degrees.iter().any(|&x| x > (d - s + 1) as i64) {
                failure = Some(format!("cross-effect of {l:?} along {f} has degrees {degrees:?}"));
                break 'cross;
            }
        }
    }
    if failure.is_none() {
        'diag: for e in &gens_s {
            for f in &surjections {
                counts.diagonal += 1;
                let degrees = diagonal_degrees(e, f)?;
                if degrees.iter().any(|&x| x > d - r + 1) || degrees.iter().sum::<usize>() > d {
                    failure = Some(format!("diagonal of {e:?} along {f} has degrees {degrees:?}"));
                    break 'diag;
                }
            }
        }
    }
    let ks = tuples(r, 1, d - r + 1);
    if failure.is_none() {
        'vanish: for k in ks.iter().filter(|k| k.iter().sum::<usize>() > d) {
            for l in &gens_r {
                counts.vanishing += 1;
                if !l.iter().zip(k).any(|(&li, &ki)| li < ki) {
                    failure = Some(format!("generator {l:?} survives fibers {k:?}"));
                    break 'vanish;
                }
            }
        }
    }
    if failure.is_none() {
        let small: Vec<&Vec<usize>> = ks.iter().filter(|k| k.iter().sum::<usize>() <= d).collect();
        'lemma: for l in ks.iter().filter(|l| l.iter().sum::<usize>() > d) {
            for k in &small {
                counts.degenerate += 1;
                match degenerate_direction(d, l, k) {
                    Some(j) if k[j - 1] < l[j - 1] => {}
                    other => {
                        failure = Some(format!("no degenerate direction for {l:?} at {k:?}: {other:?}"));
                        break 'lemma;
                    }
                }
            }
        }
    }
    Ok(PigeonholeReport { d, r, s, counts, pass: failure.is_none(), failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(degenerate_direction(3, &[2, 2], &[2, 1]), Some(2));
        assert_eq!(degenerate_direction(3, &[1, 1], &[1, 1]), None);
        let id = FinMap::identity(2);
        assert_eq!(crosseffect_degrees(&[2, 3], &id).unwrap(), vec![2, 3]);
        let c2 = FinMap::collapse(2);
        assert_eq!(crosseffect_degrees(&[3], &c2).unwrap(), vec![2, 2]);
        assert_eq!(crosseffect_degrees(&[2], &FinMap::collapse(3)).unwrap(), vec![0, 0, 0]);
        assert_eq!(diagonal_degrees(&[1, 1], &c2).unwrap(), vec![2]);
        let merge = FinMap::new(vec![1, 1, 2], 2).unwrap();
        assert_eq!(diagonal_degrees(&[2, 1, 1], &merge).unwrap(), vec![3, 1]);
        assert!(crosseffect_degrees(&[1, 1], &c2).is_err());
        assert!(diagonal_degrees(&[1], &c2).is_err());
    }

    #[test]
    fn reports() {
        // only the all-ones profile, against every permutation
        for (d, perms) in [(1, 1), (2, 2), (3, 6), (4, 24)] {
            let r = verify_pigeonhole(d, d, d).unwrap();
            assert!(r.pass);
            assert_eq!(r.counts.crosseffect, perms);
        }
        assert!(verify_pigeonhole(3, 1, 2).unwrap().pass);
        assert!(verify_pigeonhole(7, 2, 4).unwrap().pass);
        assert!(verify_pigeonhole(3, 2, 1).is_err());
    }

    #[test]
    fn degenerate_direction_is_exhaustive() {
        for d in 1..=7 {
            for r in 1..=d {
                let m = d - r + 1;
                let all = tuples(r, 1, m);
                for l in all.iter().filter(|l| l.iter().sum::<usize>() > d) {
                    for k in all.iter().filter(|k| k.iter().sum::<usize>() <= d) {
                        let j = degenerate_direction(d, l, k).expect("pigeonhole");
                        assert!(k[j - 1] < l[j - 1]);
                    }
                }
            }
        }
    }
}
