//! Data-parallel helpers with a sequential fallback.
//!
//! Hot loops (transforms, sign-pattern scans, certificate checks) go
//! through these shims. With the `parallel` feature (default) they run
//! on the rayon pool; without it they run sequentially with identical
//! results, including "first match" semantics.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over an index range, collecting results in order.
pub fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// First `Some` over an index range, by index order.
pub fn find_first_indexed<U, F>(n: usize, f: F) -> Option<U>
where
    U: Send,
    F: Fn(usize) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).find_map(f)
    }
}

/// Fold an index range and combine; `combine` must be associative.
pub fn fold_indexed<U, F, C>(n: usize, identity: U, f: F, combine: C) -> U
where
    U: Send + Clone + Sync,
    F: Fn(usize) -> U + Sync + Send,
    C: Fn(U, U) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        let id = &identity;
        (0..n).into_par_iter().map(f).reduce(|| id.clone(), &combine)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).fold(identity, combine)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let v = map_indexed(100, |i| i * i);
        assert_eq!(v[7], 49);
        assert_eq!(v.len(), 100);
    }

    #[test]
    fn find_first_is_deterministic() {
        // Many matches; must return the lowest index every time.
        for _ in 0..10 {
            let hit = find_first_indexed(10_000, |i| if i % 7 == 3 { Some(i) } else { None });
            assert_eq!(hit, Some(3));
        }
    }

    #[test]
    fn fold_sums() {
        let s = fold_indexed(1000, 0u64, |i| i as u64, |a, b| a + b);
        assert_eq!(s, 499_500);
    }
}
