//! The correspondence between equivariant notions for a finite group and
//! their counterparts for degree-d functor calculus.

pub const ENTRIES: &[(&str, &str)] = &[
    ("finite group G", "degree d, via the category Epi_d"),
    ("transitive G-set G/H", "finite set [k] with k <= d"),
    ("orbit category", "Epi_d, surjections between sets of size <= d"),
    ("Burnside ring A(G)", "the ring A(d) on iso classes of Epi_d"),
    ("mark at H: |X^H|", "mark at [k]: |Epi(k, -)|"),
    ("table of marks", "marks matrix, triangular with diagonal k!"),
    ("Mackey functor for G", "Mackey functor on Epi_d"),
    ("double-coset formula", "sum over good subsets of a pullback"),
    ("family of subgroups", "family of sizes closed under surjections"),
    ("geometric fixed points", "the mark at [k] of the augmentation ideal"),
    ("Segal conjecture for C_p", "p-adic statement for the identity in degree p"),
    ("free C_p action on Epi(p, i)", "p divides Surj(p, i) for 2 <= i <= p"),
    ("isotropy separation", "stratification by set size"),
    ("product of groups", "slices Epi_{d,r} and multi-variable profiles"),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_are_distinct() {
        let mut left: Vec<&str> = ENTRIES.iter().map(|e| e.0).collect();
        left.sort_unstable();
        left.dedup();
        assert_eq!(left.len(), ENTRIES.len());
    }
}
