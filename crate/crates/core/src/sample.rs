//! Seeded random sampling of Gaussian rationals with bounded numerators and denominators.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gluing_model::{AsymptoticData, CoverConfig, RestrictionProblem};
use crate::scalar::{GaussRat, Scalar};

pub const BOUND: i64 = 100;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational<R: Rng>(rng: &mut R) -> BigRational {
    rational_bounded(rng, BOUND)
}

/// Numerator in `[−bound, bound]`, denominator in `[1, bound]`.
pub fn rational_bounded<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    BigRational::new(num.into(), den.into())
}

pub fn gauss<R: Rng>(rng: &mut R) -> GaussRat {
    GaussRat::new(rational(rng), rational(rng))
}

pub fn gauss_bounded<R: Rng>(rng: &mut R, bound: i64) -> GaussRat {
    GaussRat::new(rational_bounded(rng, bound), rational_bounded(rng, bound))
}

pub fn nonzero_gauss<R: Rng>(rng: &mut R) -> GaussRat {
    loop {
        let z = gauss(rng);
        if z != GaussRat::from_ints(0, 0) {
            return z;
        }
    }
}

/// `k` pairwise distinct values, also distinct from everything in `avoid`.
pub fn distinct<R: Rng>(rng: &mut R, k: usize, avoid: &[GaussRat]) -> Vec<GaussRat> {
    distinct_bounded(rng, k, avoid, BOUND)
}

pub fn distinct_bounded<R: Rng>(rng: &mut R, k: usize, avoid: &[GaussRat], bound: i64) -> Vec<GaussRat> {
    let mut out: Vec<GaussRat> = Vec::with_capacity(k);
    while out.len() < k {
        let z = gauss_bounded(rng, bound);
        if !out.contains(&z) && !avoid.contains(&z) {
            out.push(z);
        }
    }
    out
}

/// Configuration with `n` positive punctures, `n − 3` finite negative ones and a random
/// rational scale `w`.
pub fn cover_config<R: Rng>(rng: &mut R, n: usize) -> CoverConfig<GaussRat> {
    let p = distinct(rng, n, &[]);
    let q = distinct(rng, n - 3, &p);
    CoverConfig::with_scale(p, q, nonzero_gauss(rng)).expect("sampled punctures are distinct")
}

pub fn asymptotic<R: Rng>(rng: &mut R, n: usize, m: usize) -> AsymptoticData<GaussRat> {
    AsymptoticData { alpha: (0..n).map(|_| (0..m).map(|_| gauss(rng)).collect()).collect(), d: None }
}

/// Distinct punctures and order-one coefficients on the `Z_1` locus: `α_i = a p_i + b`
/// with `a ≠ 0`, so `α_{n−1} ≠ α_n`. Entries are kept small since determinants of
/// size up to eight are expanded exactly.
pub fn z1_point<R: Rng>(rng: &mut R, n: usize) -> (Vec<GaussRat>, Vec<GaussRat>) {
    let p = distinct_bounded(rng, n, &[], 12);
    let a = distinct_bounded(rng, 1, &[GaussRat::zero()], 12).remove(0);
    let b = gauss_bounded(rng, 12);
    let alpha = p.iter().map(|pi| a.clone() * pi.clone() + b.clone()).collect();
    (p, alpha)
}

/// Admissible restriction with `n − 2` entries whose solved punctures are distinct.
pub fn restriction_problem<R: Rng>(rng: &mut R, n: usize, t: f64) -> RestrictionProblem {
    loop {
        let c = distinct(rng, n - 2, &[GaussRat::zero()]);
        let alpha1: Vec<GaussRat> = (0..n).map(|_| gauss_bounded(rng, 20)).collect();
        let p_last = (gauss_bounded(rng, 20), gauss_bounded(rng, 20));
        if alpha1[n - 2] == alpha1[n - 1] || p_last.0 == p_last.1 {
            continue;
        }
        if crate::gluing_model::solve_z1(&alpha1, (&p_last.0, &p_last.1)).is_ok() {
            return RestrictionProblem { c, alpha1, p_last, t };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let a: Vec<GaussRat> = (0..5).map(|_| gauss(&mut seeded(3))).collect();
        let mut r = seeded(3);
        let first = gauss(&mut r);
        assert!(a.iter().all(|z| *z == first));
        let pts = distinct(&mut seeded(9), 20, &[]);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                assert_ne!(pts[i], pts[j]);
            }
        }
    }
}
