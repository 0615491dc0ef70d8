//! Seeded instance generation.
//!
//! Generator specs (deterministic for fixed `(spec, seed)`):
//!
//! * `interval n` — `{0..n-1}` in `Z`.
//! * `random-density N p` — each residue of `Z/NZ` kept with
//!   probability `p` (element 0 forced so sets are nonempty).
//! * `ap-union k` — union of `k` random arithmetic progressions in
//!   `Z`, each with start in `[0,64)`, step in `[1,8]`, length in
//!   `[3,9]`.
//! * `zalpha-grid m` — `{i + j a : 0 <= i, j < m}` in `Z[a]`.

use addcomb::rng::SplitMix64;
use addcomb::zn::{IntSet, PolyInt, PolySet, SetLiteral, ZnSet};
use anyhow::{bail, Result};

pub fn generate(spec: &str, seed: u64) -> Result<SetLiteral> {
    let parts: Vec<&str> = spec.split_whitespace().collect();
    match parts.as_slice() {
        ["interval", n] => {
            let n: i64 = n.parse()?;
            if n < 1 {
                bail!("interval length must be positive");
            }
            Ok(SetLiteral::Int(IntSet::interval(0, n - 1)))
        }
        ["random-density", n, p] => {
            let n: u64 = n.parse()?;
            let p: f64 = p.parse()?;
            if n == 0 || !(0.0..=1.0).contains(&p) {
                bail!("need N >= 1 and p in [0,1]");
            }
            let mut rng = SplitMix64::substream(seed, 0x6E5D);
            let mut s = ZnSet::singleton(n, 0);
            for x in 1..n {
                if rng.coin(p) {
                    s.insert(x);
                }
            }
            Ok(SetLiteral::Mod(s))
        }
        ["ap-union", k] => {
            let k: u64 = k.parse()?;
            if k == 0 {
                bail!("need at least one progression");
            }
            let mut rng = SplitMix64::substream(seed, 0xA9);
            let mut all = Vec::new();
            for _ in 0..k {
                let start = rng.below(64) as i64;
                let step = 1 + rng.below(8) as i64;
                let len = 3 + rng.below(7) as i64;
                for i in 0..len {
                    all.push(start + step * i);
                }
            }
            Ok(SetLiteral::Int(IntSet::new(all)))
        }
        ["zalpha-grid", m] => {
            let m: i64 = m.parse()?;
            if m < 1 {
                bail!("grid side must be positive");
            }
            let mut elems = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    elems.push(PolyInt::from_coeffs(vec![i, j]));
                }
            }
            Ok(SetLiteral::Poly(PolySet::new(elems)))
        }
        _ => bail!("unrecognized generator spec '{spec}'"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_is_plain() {
        match generate("interval 8", 0).unwrap() {
            SetLiteral::Int(s) => assert_eq!(s.as_slice(), &[0, 1, 2, 3, 4, 5, 6, 7]),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn random_density_reproduces() {
        let a = generate("random-density 64 0.25", 1).unwrap();
        let b = generate("random-density 64 0.25", 1).unwrap();
        assert_eq!(a, b);
        let c = generate("random-density 64 0.25", 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zalpha_grid_counts() {
        match generate("zalpha-grid 3", 0).unwrap() {
            SetLiteral::Poly(s) => assert_eq!(s.len(), 9),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn malformed_specs_rejected() {
        assert!(generate("interval", 0).is_err());
        assert!(generate("random-density 0 0.5", 0).is_err());
        assert!(generate("frobnicate 3", 0).is_err());
    }
}
