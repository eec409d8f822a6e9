//! Small dimension counts, the auxiliary gluing problem, and index bookkeeping
//! for formal gluing of branched covers.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GluingError, OrbitError};
use crate::orbit_calculus::{
    deficit_total, ech_index, fredholm_index, glue, CurveData, EndSpec, ReebOrbitSpec, Sign,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxZeros {
    /// Both zeros in `[0, 4π)`, ascending.
    pub thetas: Vec<f64>,
    /// `|Re((α_2 − α_1) e^{iθ/2})| / |α_2 − α_1|` at each zero.
    pub residuals: Vec<f64>,
    /// Each glued curve is counted once per zero.
    pub overcount: u32,
}

/// Zeros of `θ ↦ Re((α_2 − α_1) e^{iθ/2})` on `ℝ/4πℤ`.
pub fn aux_gluing_zeros(alpha: (Complex64, Complex64)) -> Result<AuxZeros, GluingError> {
    let beta = alpha.1 - alpha.0;
    if beta.norm() == 0.0 {
        return Err(GluingError::InvalidInput("alpha_1 = alpha_2: the section vanishes identically".into()));
    }
    // arg β + θ/2 ≡ π/2 (mod π)
    let base = (PI - 2.0 * beta.arg()).rem_euclid(4.0 * PI);
    let mut thetas = vec![base, (base + 2.0 * PI).rem_euclid(4.0 * PI)];
    thetas.sort_by(f64::total_cmp);
    let residuals = thetas
        .iter()
        .map(|th| (beta * Complex64::from_polar(1.0, th / 2.0)).re.abs() / beta.norm())
        .collect();
    Ok(AuxZeros { thetas, residuals, overcount: 2 })
}

/// `zero_count + Σ k_pos + Σ k_neg ≤ n − 3`.
pub fn winding_budget_check(n: u32, zero_count: u32, k_pos: &[u32], k_neg: &[u32]) -> bool {
    assert!(n >= 3, "winding budget needs n >= 3");
    let used: u64 = zero_count as u64 + k_pos.iter().chain(k_neg).map(|&k| k as u64).sum::<u64>();
    used <= (n - 3) as u64
}

/// Cokernel dimension of the normal operator at a cover with `branch_count` simple branch points.
pub fn coker_rank(branch_count: u32) -> u32 {
    branch_count
}

/// Rank `2n − 4` of the obstruction bundle over `M_n`.
pub fn mn_rank(n: u32) -> u32 {
    2 * n - 4
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReplacementDims {
    pub complex_dim: i64,
    pub real_codim: i64,
}

/// Dimension of the space of replacement forms and the real codimension `k − ℓ` of the
/// image. Variant 1 allows simple poles at all `n` negative ends; variant 2 merges three
/// of them into one multiplicity-three end with a double pole, which lowers the
/// dimension by one.
pub fn replacement_space_dim(genus: u32, n: u32, k: u32, ell: u32, variant: u8) -> Result<ReplacementDims, GluingError> {
    if ell >= n {
        return Err(GluingError::InvalidInput(format!("need ell < n, got ell = {ell}, n = {n}")));
    }
    if !(n - ell).is_multiple_of(2) {
        return Err(GluingError::InvalidInput("n - ell must be even".into()));
    }
    if ell > k {
        return Err(GluingError::InvalidInput("more odd ends than ends".into()));
    }
    let base = ((n - ell) / 2 + k + genus) as i64 - 1;
    let complex_dim = match variant {
        1 => base,
        2 => base - 1,
        other => return Err(GluingError::InvalidInput(format!("unknown variant {other}"))),
    };
    Ok(ReplacementDims { complex_dim, real_codim: (k - ell) as i64 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrototypicalGluing {
    /// Index-one curve with `n` simple negative ends at a negative hyperbolic orbit.
    pub top: CurveData,
    /// Degree-`n` branched cover of the trivial cylinder in `M_n`.
    pub cover: CurveData,
    pub glued: CurveData,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GluingIndices {
    pub top_ind: i64,
    pub top_ech: i64,
    pub top_deficit: u64,
    pub top_slack: i64,
    pub cover_ind: i64,
    pub cover_ech: i64,
    pub glued_ind: i64,
    pub glued_ech: i64,
}

/// The configuration of an index-one curve `u_1` with `n` simple ends at `β` glued to a
/// cover in `M_n`, with `μ(β) = 1`. The positive end sits at a positive hyperbolic orbit
/// of rotation 2.
pub fn prototypical_gluing(n: u32) -> Result<PrototypicalGluing, OrbitError> {
    if n < 3 {
        return Err(OrbitError::GlueMismatch("need n >= 3".into()));
    }
    let top_orbit = ReebOrbitSpec::hyperbolic("alpha", 2, 10.0)?;
    let beta = ReebOrbitSpec::hyperbolic("beta", 1, 1.0)?;
    let ni = n as i64;
    let mut top_ends = vec![EndSpec::new(&top_orbit, 1, Sign::Positive)];
    top_ends.extend((0..n).map(|_| EndSpec::new(&beta, 1, Sign::Negative)));
    let top = CurveData::new(0, top_ends, 0, ni * ni - 1, 0)?;
    let mut cover_ends: Vec<EndSpec> = (0..n).map(|_| EndSpec::new(&beta, 1, Sign::Positive)).collect();
    cover_ends.push(EndSpec::new(&beta, 3, Sign::Negative));
    cover_ends.extend((0..n - 3).map(|_| EndSpec::new(&beta, 1, Sign::Negative)));
    let cover = CurveData::new(0, cover_ends, 0, 0, 0)?;
    let glued = glue(&top, &cover)?;
    Ok(PrototypicalGluing { top, cover, glued })
}

pub fn gluing_indices(config: &PrototypicalGluing) -> Result<GluingIndices, OrbitError> {
    let top_ind = fredholm_index(&config.top)?;
    let top_ech = ech_index(&config.top)?;
    let top_deficit = deficit_total(&config.top)?;
    Ok(GluingIndices {
        top_ind,
        top_ech,
        top_deficit,
        top_slack: top_ech - top_ind - 2 * config.top.delta as i64 - top_deficit as i64,
        cover_ind: fredholm_index(&config.cover)?,
        cover_ech: ech_index(&config.cover)?,
        glued_ind: fredholm_index(&config.glued)?,
        glued_ech: ech_index(&config.glued)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aux_example() {
        let z = aux_gluing_zeros((Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0))).unwrap();
        assert!((z.thetas[0] - 1.5 * PI).abs() < 1e-12);
        assert!((z.thetas[1] - 3.5 * PI).abs() < 1e-12);
        assert!(z.residuals.iter().all(|r| *r <= 1e-12));
        assert_eq!(z.overcount, 2);
        assert!(aux_gluing_zeros((Complex64::new(1.0, 2.0), Complex64::new(1.0, 2.0))).is_err());
    }

    #[test]
    fn small_counts() {
        assert!(winding_budget_check(3, 0, &[], &[]));
        assert!(winding_budget_check(5, 2, &[0], &[0]));
        assert!(!winding_budget_check(4, 2, &[], &[]));
        assert_eq!(coker_rank(0), 0);
        assert_eq!(mn_rank(3), 2);
        assert_eq!(coker_rank(1), 1);
    }

    #[test]
    fn replacement_dims() {
        assert_eq!(replacement_space_dim(0, 2, 1, 0, 1).unwrap().complex_dim, 1);
        assert_eq!(replacement_space_dim(1, 4, 2, 0, 1).unwrap().complex_dim, 4);
        assert_eq!(replacement_space_dim(0, 5, 3, 3, 1).unwrap().real_codim, 0);
        assert!(replacement_space_dim(0, 5, 3, 2, 1).is_err());
        assert!(replacement_space_dim(0, 4, 3, 4, 1).is_err());
    }

    #[test]
    fn prototypical_indices() {
        for n in 3..=8u32 {
            let idx = gluing_indices(&prototypical_gluing(n).unwrap()).unwrap();
            let c = (n * (n - 1) / 2) as i64;
            assert_eq!((idx.top_ind, idx.top_ech, idx.top_slack), (1, 1 + c, 0));
            assert_eq!(idx.cover_ind, mn_rank(n) as i64);
            assert_eq!((idx.glued_ind, idx.glued_ech), (2 * n as i64 - 3, 1 + c));
        }
    }
}
