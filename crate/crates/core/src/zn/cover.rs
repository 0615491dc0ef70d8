//! Greedy Ruzsa covering: given `X` and a nonempty `B` in the same
//! ambient group, select `S` in ascending element order so that the
//! translates `s+B` are pairwise disjoint. Then `X ⊆ B−B+S` and
//! `|S| ≤ |X+B|/|B|` (the disjoint translates all sit inside `X+B`).

use super::ZnError;
use std::collections::BTreeSet;

/// Greedy cover over any ordered group elements; `add`/`sub` supply the
/// ambient operations. Scan order is ascending over `X`.
pub fn ruzsa_cover<P, A, S>(
    x: &BTreeSet<P>,
    b: &BTreeSet<P>,
    add: A,
    sub: S,
) -> Result<BTreeSet<P>, ZnError>
where
    P: Ord + Clone,
    A: Fn(&P, &P) -> P,
    S: Fn(&P, &P) -> P,
{
    if b.is_empty() {
        return Err(ZnError::EmptySet);
    }
    let mut selected: BTreeSet<P> = BTreeSet::new();
    let mut occupied: BTreeSet<P> = BTreeSet::new();
    for cand in x {
        let translate: Vec<P> = b.iter().map(|e| add(cand, e)).collect();
        if translate.iter().all(|t| !occupied.contains(t)) {
            selected.insert(cand.clone());
            occupied.extend(translate);
        }
    }
    // Guaranteed by construction; cheap to confirm while we have `sub`.
    debug_assert!(verify_cover(x, b, &selected, &sub));
    Ok(selected)
}

/// Check `X ⊆ B−B+S` exhaustively.
pub fn verify_cover<P, S>(
    x: &BTreeSet<P>,
    b: &BTreeSet<P>,
    s: &BTreeSet<P>,
    sub: &S,
) -> bool
where
    P: Ord + Clone,
    S: Fn(&P, &P) -> P,
{
    let mut bb: BTreeSet<P> = BTreeSet::new();
    for p in b {
        for q in b {
            bb.insert(sub(p, q));
        }
    }
    x.iter()
        .all(|e| s.iter().any(|t| bb.contains(&sub(e, t))))
}

/// Integer-set instantiation.
pub fn ruzsa_cover_int(x: &[i64], b: &[i64]) -> Result<BTreeSet<i64>, ZnError> {
    let xs: BTreeSet<i64> = x.iter().copied().collect();
    let bs: BTreeSet<i64> = b.iter().copied().collect();
    ruzsa_cover(&xs, &bs, |a, b| a + b, |a, b| a - b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_translates_collapse() {
        // X = B = {0..9}: every x+B meets 0+B, so S = {0}.
        let x: Vec<i64> = (0..10).collect();
        let s = ruzsa_cover_int(&x, &x).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn x_equals_b_selects_min() {
        let x = [3i64, 5, 9];
        let s = ruzsa_cover_int(&x, &x).unwrap();
        assert!(s.contains(&3));
        let xs: BTreeSet<i64> = x.iter().copied().collect();
        assert!(verify_cover(&xs, &xs, &s, &|a: &i64, b: &i64| a - b));
    }

    #[test]
    fn distant_translates_both_selected() {
        // X = {0,100}, B = {0,1}: translates disjoint, |S| = 2 = |X+B|/|B|.
        let s = ruzsa_cover_int(&[0, 100], &[0, 1]).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![0, 100]);
    }

    #[test]
    fn empty_b_rejected() {
        assert!(ruzsa_cover_int(&[1, 2], &[]).is_err());
    }

    #[test]
    fn cover_bound_holds() {
        // |S| <= |X+B|/|B| on a few ad-hoc sets.
        let cases: [(&[i64], &[i64]); 3] = [
            (&[0, 1, 2, 10, 11, 30], &[0, 1, 2]),
            (&[0, 7, 14, 21], &[0, 1]),
            (&[5], &[0, 2, 4]),
        ];
        for (x, b) in cases {
            let s = ruzsa_cover_int(x, b).unwrap();
            let xs = crate::zn::IntSet::new(x.iter().copied());
            let bs = crate::zn::IntSet::new(b.iter().copied());
            let xb = xs.sumset(&bs).unwrap();
            assert!(s.len() * bs.len() <= xb.len());
        }
    }
}
