//! Batch evaluation helpers.
//!
//! The exhaustive verifiers in this crate are embarrassingly parallel: each
//! cospan, basis triple or random diagram is checked independently. With the
//! `parallel` feature (on by default) the work is spread over rayon's global
//! pool; without it, or when [`Exec::Sequential`] is requested explicitly,
//! the same closures run on the calling thread. Output order never depends on
//! the execution mode.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a batch of independent checks is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential execution when built without `parallel`.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Returns the result for the lowest-indexed item on which `f` yields `Some`.
pub fn find_first<T, R, F>(exec: Exec, items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().find_map_first(f);
    }
    let _ = exec;
    items.iter().find_map(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(Exec::Sequential, &xs, |x| x * x);
        let b = map(Exec::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        let pick = |x: &u64| (x % 97 == 50).then_some(*x);
        assert_eq!(find_first(Exec::Sequential, &xs, pick), Some(50));
        assert_eq!(find_first(Exec::Parallel, &xs, pick), Some(50));
    }
}
