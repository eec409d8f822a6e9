//! Exact verification of the determinant reductions and the row-reduction algorithm that
//! turns the model matrix into the derivative matrices `B_ℓ`.
//!
//! Everything here runs over [`GaussRat`]; these are polynomial identities and a
//! tolerance would hide sign errors.

use serde::Serialize;

use crate::error::IdentityError;
use crate::gluing_model::{derivative_matrix, linearized_section, r_coefficients, AsymptoticData, CoverConfig};
use crate::linalg::Matrix;
use crate::scalar::{GaussRat, Scalar};

/// `E_0..E_k` of the given points.
fn all_elementary<S: Scalar>(points: &[S]) -> Vec<S> {
    let mut e = vec![S::one()];
    for p in points {
        e.push(S::zero());
        for l in (1..e.len()).rev() {
            e[l] = e[l].clone() + p.clone() * e[l - 1].clone();
        }
    }
    e
}

/// `ℓ`-th elementary symmetric polynomial; `E_0 = 1`.
pub fn elementary_symmetric<S: Scalar>(points: &[S], ell: usize) -> Result<S, IdentityError> {
    if ell > points.len() {
        return Err(IdentityError::OutOfRange(ell));
    }
    Ok(all_elementary(points)[ell].clone())
}

fn omit<S: Clone>(points: &[S], skip: &[usize]) -> Vec<S> {
    points
        .iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, p)| p.clone())
        .collect()
}

/// Elementary symmetric polynomials of `p_1..p_n`, with one point omitted, and
/// the Vandermonde products `Δ = Π_{i<j}(p_i − p_j)` and `Δ_i` (omitting `p_i`).
#[derive(Clone, Debug)]
pub struct SymmetricFunctionContext<S> {
    pub points: Vec<S>,
    pub e: Vec<S>,
    pub e_without: Vec<Vec<S>>,
    pub delta: S,
    pub delta_without: Vec<S>,
}

fn vandermonde<S: Scalar>(points: &[S]) -> S {
    let mut acc = S::one();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            acc = acc * (points[i].clone() - points[j].clone());
        }
    }
    acc
}

impl<S: Scalar> SymmetricFunctionContext<S> {
    pub fn new(points: &[S]) -> Self {
        let n = points.len();
        let e_without = (0..n).map(|i| all_elementary(&omit(points, &[i]))).collect();
        SymmetricFunctionContext {
            points: points.to_vec(),
            e: all_elementary(points),
            e_without,
            delta: vandermonde(points),
            delta_without: (0..n).map(|i| vandermonde(&omit(points, &[i]))).collect(),
        }
    }

    /// `E_{ℓ,i}`, or zero when `ℓ` exceeds the number of remaining points.
    pub fn e_omit(&self, ell: usize, i: usize) -> S {
        self.e_without[i].get(ell).cloned().unwrap_or_else(S::zero)
    }

    /// `E_{ℓ,(i,j)}` with both `p_i` and `p_j` omitted.
    pub fn e_omit2(&self, ell: usize, i: usize, j: usize) -> S {
        all_elementary(&omit(&self.points, &[i, j])).get(ell).cloned().unwrap_or_else(S::zero)
    }
}

fn require_distinct<S: Scalar>(points: &[S]) -> Result<(), IdentityError> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(IdentityError::DegenerateInput(format!("p_{} = p_{}", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

fn powers<S: Scalar>(points: &[S], k: usize) -> Vec<S> {
    points.iter().map(|p| p.powu(k as u32)).collect()
}

/// Row order of the Vandermonde-type determinants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Rows `1, p, …, p^{n−2}`, then the symmetric-function row.
    Ascending,
    /// The symmetric-function row, then `p^{n−2}, …, p, 1`.
    Descending,
}

fn vandermonde_type<S: Scalar>(points: &[S], special: Vec<S>, orientation: Orientation) -> Matrix<S> {
    let n = points.len();
    let mut rows: Vec<Vec<S>> = (0..n - 1).map(|k| powers(points, k)).collect();
    match orientation {
        Orientation::Ascending => rows.push(special),
        Orientation::Descending => {
            rows.reverse();
            rows.insert(0, special);
        }
    }
    Matrix::from_rows(rows)
}

fn sign<S: Scalar>(k: usize) -> S {
    if k.is_multiple_of(2) { S::one() } else { -S::one() }
}

fn binom2(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeterminantReport {
    pub n: usize,
    pub ell: usize,
    pub closed_form: GaussRat,
    pub ascending: GaussRat,
    pub descending: GaussRat,
    pub ascending_matches: bool,
    pub descending_matches: bool,
    /// Orientation in which the closed form is asserted.
    pub asserted: Orientation,
}

impl DeterminantReport {
    pub fn holds(&self) -> bool {
        match self.asserted {
            Orientation::Ascending => self.ascending_matches,
            Orientation::Descending => self.descending_matches,
        }
    }
}

/// Determinant with Vandermonde rows and the row `(E_{ℓ,1}, …, E_{ℓ,n})`, against
/// `0` for `ℓ ≤ n−2` and `(−1)^{C(n−1,2)} Δ` for `ℓ = n−1`. The closed form is stated
/// for the ascending orientation; the descending one differs by `(−1)^{C(n,2)}`.
pub fn det_prep_check(points: &[GaussRat], ell: usize) -> Result<DeterminantReport, IdentityError> {
    let n = points.len();
    if n < 4 {
        return Err(IdentityError::PreconditionViolated(format!("need n >= 4, got {n}")));
    }
    if ell > n - 1 {
        return Err(IdentityError::OutOfRange(ell));
    }
    require_distinct(points)?;
    let ctx = SymmetricFunctionContext::new(points);
    let special: Vec<GaussRat> = (0..n).map(|i| ctx.e_omit(ell, i)).collect();
    let ascending = vandermonde_type(points, special.clone(), Orientation::Ascending).determinant();
    let descending = vandermonde_type(points, special, Orientation::Descending).determinant();
    let closed_form = if ell <= n - 2 { GaussRat::zero() } else { sign::<GaussRat>(binom2(n - 1)) * ctx.delta.clone() };
    Ok(DeterminantReport {
        n,
        ell,
        ascending_matches: ascending == closed_form,
        descending_matches: descending == closed_form,
        closed_form,
        ascending,
        descending,
        asserted: Orientation::Ascending,
    })
}

/// The `Z_1` relation `(p_{n−1} − p_n) α_k − (p_k − p_n) α_{n−1} + (p_k − p_{n−1}) α_n` for each `k`.
pub fn z1_relations<S: Scalar>(points: &[S], alphas: &[S]) -> Vec<S> {
    let n = points.len();
    let (pa, pb) = (points[n - 2].clone(), points[n - 1].clone());
    let (aa, ab) = (alphas[n - 2].clone(), alphas[n - 1].clone());
    (0..n)
        .map(|k| {
            (pa.clone() - pb.clone()) * alphas[k].clone() - (points[k].clone() - pb.clone()) * aa.clone()
                + (points[k].clone() - pa.clone()) * ab.clone()
        })
        .collect()
}

/// Coefficients on the `Z_1` locus through the given points: `α_k` is the affine function
/// of `p_k` fixed by `α_{n−1}` and `α_n`.
pub fn z1_alphas<S: Scalar>(points: &[S], last: (S, S)) -> Vec<S> {
    let n = points.len();
    let (pa, pb) = (points[n - 2].clone(), points[n - 1].clone());
    let slope = (last.0.clone() - last.1.clone()) / (pa.clone() - pb.clone());
    let offset = (pa.clone() * last.1.clone() - pb * last.0.clone()) / (pa.clone() - points[n - 1].clone());
    points.iter().map(|p| slope.clone() * p.clone() + offset.clone()).collect()
}

/// `M_ℓ` with the row `(E_{ℓ,i} α_i)`; compares `(−1)^n det M_ℓ / Δ` with
/// `(p_n α_{n−1} − p_{n−1} α_n)/(p_{n−1} − p_n)` (ℓ = n−1), `(α_{n−1} − α_n)/(p_{n−1} − p_n)`
/// (ℓ = n−2) and `0` otherwise. The closed form is asserted in the descending orientation.
pub fn det_reduction_check(points: &[GaussRat], alphas: &[GaussRat], ell: usize) -> Result<DeterminantReport, IdentityError> {
    let n = points.len();
    if n < 4 {
        return Err(IdentityError::PreconditionViolated(format!("need n >= 4, got {n}")));
    }
    if alphas.len() != n {
        return Err(IdentityError::PreconditionViolated("alphas and points differ in length".into()));
    }
    if ell > n - 1 {
        return Err(IdentityError::OutOfRange(ell));
    }
    require_distinct(points)?;
    if alphas[n - 2] == alphas[n - 1] {
        return Err(IdentityError::DegenerateInput("alpha_(n-1) = alpha_n".into()));
    }
    if z1_relations(points, alphas).iter().any(|v| !v.is_zero()) {
        return Err(IdentityError::PreconditionViolated("coefficients are not on the Z_1 locus".into()));
    }
    let ctx = SymmetricFunctionContext::new(points);
    let special: Vec<GaussRat> = (0..n).map(|i| ctx.e_omit(ell, i) * alphas[i].clone()).collect();
    let normalize = |d: GaussRat| sign::<GaussRat>(n) * d / ctx.delta.clone();
    let ascending = normalize(vandermonde_type(points, special.clone(), Orientation::Ascending).determinant());
    let descending = normalize(vandermonde_type(points, special, Orientation::Descending).determinant());
    let (pa, pb) = (points[n - 2].clone(), points[n - 1].clone());
    let (aa, ab) = (alphas[n - 2].clone(), alphas[n - 1].clone());
    let closed_form = if ell == n - 1 {
        (pb * aa - pa.clone() * ab) / (pa - points[n - 1].clone())
    } else if ell == n - 2 {
        (aa - ab) / (pa - pb)
    } else {
        GaussRat::zero()
    };
    Ok(DeterminantReport {
        n,
        ell,
        ascending_matches: ascending == closed_form,
        descending_matches: descending == closed_form,
        closed_form,
        ascending,
        descending,
        asserted: Orientation::Descending,
    })
}

/// The block matrix `(A_1 … A_m)`: block `ℓ` has first row `1` (ℓ = 1) or `0` (ℓ > 1) and
/// row `k` (for `q_k`, `k = 2..n−2`) equal to `((q_k − p_j)^{−ℓ})_j`.
pub fn model_matrix(cfg: &CoverConfig<GaussRat>, m: usize) -> Matrix<GaussRat> {
    let mut rows = Vec::with_capacity(cfg.rows());
    for r in 0..cfg.rows() {
        let mut row = Vec::with_capacity(cfg.n * m);
        for ell in 1..=m {
            for j in 0..cfg.n {
                row.push(if r == 0 {
                    if ell == 1 { GaussRat::one() } else { GaussRat::zero() }
                } else {
                    (cfg.q[r - 1].clone() - cfg.p[j].clone()).powu(ell as u32).inv()
                });
            }
        }
        rows.push(row);
    }
    Matrix::from_rows(rows)
}

fn combine(a: &GaussRat, x: &[GaussRat], b: &GaussRat, y: &[GaussRat]) -> Vec<GaussRat> {
    x.iter().zip(y).map(|(u, v)| a.clone() * u.clone() + b.clone() * v.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowReduction {
    pub final_matrix: Matrix<GaussRat>,
    /// Matrix after each step `j = 1..n−2`, before the final sign.
    pub trace: Vec<Matrix<GaussRat>>,
}

/// Runs the `n − 2` row-reduction steps on the model matrix and applies the final
/// `(−1)^{n−2}`. Step 1 replaces row `i > 1` by `(q_i − p_1)·row_i − row_1` and negates row 1;
/// step `j ≥ 2` uses `q_j` and `p_j` as pivots.
pub fn row_reduce_appendix(cfg: &CoverConfig<GaussRat>, m: usize) -> Result<RowReduction, IdentityError> {
    if m == 0 {
        return Err(IdentityError::PreconditionViolated("m must be at least 1".into()));
    }
    let rows_n = cfg.rows();
    let mut a = model_matrix(cfg, m).rows;
    let p = |j: usize| cfg.p[j - 1].clone();
    let q = |j: usize| cfg.q[j - 2].clone();
    let mut trace = Vec::with_capacity(rows_n);
    for j in 1..=rows_n {
        if j == 1 {
            for i in 2..=rows_n {
                a[i - 1] = combine(&(q(i) - p(1)), &a[i - 1], &-GaussRat::one(), &a[0]);
            }
        } else {
            let pivot = a[j - 1].clone();
            for i in 1..j {
                let den = q(j) - p(i);
                a[i - 1] = combine(&((p(j) - p(i)) / den.clone()), &a[i - 1], &((q(j) - p(j)) / den), &pivot);
            }
            for i in j + 1..=rows_n {
                let den = q(j) - q(i);
                a[i - 1] = combine(&((q(i) - p(j)) / den.clone()), &a[i - 1], &(-(q(j) - p(j)) / den), &pivot);
            }
        }
        for row in a.iter_mut().take(j) {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        trace.push(Matrix::from_rows(a.clone()));
    }
    let s: GaussRat = sign(rows_n);
    let final_rows = a.into_iter().map(|row| row.into_iter().map(|v| s.clone() * v).collect()).collect();
    Ok(RowReduction { final_matrix: Matrix::from_rows(final_rows), trace })
}

/// Matrix predicted after step `j`: with `I = {j+1, …, n−2}`, row `i ≤ j` is
/// `(−1)^j [A_1 − Σ_{k=2}^j 𝔸_{{i}∪I}(q_k)/B_{{k}∪I}(q_k) A_k]` and row `i > j` is
/// `(−1)^j [A_1 − 𝔸_I(q_i)/B_I(q_i) A_i − Σ_{k=2}^j 𝔸_I(q_k)/((q_k − q_i) B_{{k}∪I}(q_k)) A_k]`,
/// where `𝔸_S` and `B_S` omit the indices in `S`.
pub fn predicted_step(cfg: &CoverConfig<GaussRat>, m: usize, j: usize) -> Matrix<GaussRat> {
    let rows_n = cfg.rows();
    let orig = model_matrix(cfg, m).rows;
    let tail: Vec<usize> = (j + 1..=rows_n).collect();
    let a_omit = |skip: &[usize], z: &GaussRat| {
        (1..=rows_n)
            .filter(|i| !skip.contains(i))
            .fold(GaussRat::one(), |acc, i| acc * (z.clone() - cfg.p[i - 1].clone()))
    };
    let b_omit = |skip: &[usize], z: &GaussRat| {
        (2..=rows_n)
            .filter(|k| !skip.contains(k))
            .fold(GaussRat::one(), |acc, k| acc * (z.clone() - cfg.q[k - 2].clone()))
    };
    let with = |extra: usize| {
        let mut s = tail.clone();
        s.push(extra);
        s
    };
    let one = GaussRat::one();
    let s: GaussRat = sign(j);
    let rows = (1..=rows_n)
        .map(|i| {
            let mut row = orig[0].clone();
            if i <= j {
                for k in 2..=j {
                    let qk = cfg.q[k - 2].clone();
                    let coef = a_omit(&with(i), &qk) / b_omit(&with(k), &qk);
                    row = combine(&one, &row, &-coef, &orig[k - 1]);
                }
            } else {
                let qi = cfg.q[i - 2].clone();
                let coef = a_omit(&tail, &qi) / b_omit(&tail, &qi);
                row = combine(&one, &row, &-coef, &orig[i - 1]);
                for k in 2..=j {
                    let qk = cfg.q[k - 2].clone();
                    let coef = a_omit(&tail, &qk) / ((qk.clone() - qi.clone()) * b_omit(&with(k), &qk));
                    row = combine(&one, &row, &-coef, &orig[k - 1]);
                }
            }
            row.into_iter().map(|v| s.clone() * v).collect()
        })
        .collect();
    Matrix::from_rows(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowReductionReport {
    /// Blocks `ℓ` whose final form differs from `B_ℓ`.
    pub block_mismatches: Vec<usize>,
    /// Steps `j` whose matrix differs from the predicted form.
    pub step_mismatches: Vec<usize>,
}

impl RowReductionReport {
    pub fn holds(&self) -> bool {
        self.block_mismatches.is_empty() && self.step_mismatches.is_empty()
    }
}

/// Row-reduces and compares every final block with `derivative_matrix` and every step
/// with [`predicted_step`].
pub fn verify_row_reduction(cfg: &CoverConfig<GaussRat>, m: usize) -> Result<RowReductionReport, IdentityError> {
    let red = row_reduce_appendix(cfg, m)?;
    let block_mismatches = (1..=m)
        .filter(|&ell| red.final_matrix.column_block((ell - 1) * cfg.n, cfg.n) != derivative_matrix(cfg, ell))
        .collect();
    let step_mismatches = (1..=cfg.rows())
        .filter(|&j| red.trace[j - 1] != predicted_step(cfg, m, j))
        .collect();
    Ok(RowReductionReport { block_mismatches, step_mismatches })
}

/// Stacked `(w^ℓ r_i^ℓ α_{i,ℓ})`, block `ℓ` after block `ℓ − 1`, matching the columns of the model matrix.
pub fn stacked_coefficients(cfg: &CoverConfig<GaussRat>, asym: &AsymptoticData<GaussRat>, m: usize) -> Vec<GaussRat> {
    let r = r_coefficients(cfg).positive;
    let w = cfg.scale();
    (1..=m)
        .flat_map(|ell| {
            let (r, w) = (&r, &w);
            (0..cfg.n).map(move |i| w.powu(ell as u32) * r[i].powu(ell as u32) * asym.alpha[i][ell - 1].clone())
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NullspaceReport {
    pub in_nullspace: bool,
    pub section_vanishes: bool,
}

impl NullspaceReport {
    pub fn equivalent(&self) -> bool {
        self.in_nullspace == self.section_vanishes
    }
}

/// Compares `A·𝛂 = 0` (model matrix) with `Σ B_ℓ v_ℓ = 0` (derivative matrices).
pub fn nullspace_equivalence_check(cfg: &CoverConfig<GaussRat>, asym: &AsymptoticData<GaussRat>, m: usize) -> Result<NullspaceReport, IdentityError> {
    let stacked = stacked_coefficients(cfg, asym, m);
    let in_nullspace = model_matrix(cfg, m).mul_vec(&stacked).iter().all(Scalar::is_zero);
    let section_vanishes = linearized_section(cfg, asym, m)?.iter().all(Scalar::is_zero);
    Ok(NullspaceReport { in_nullspace, section_vanishes })
}

/// Whether the witness lies in the nullspace of every intermediate matrix exactly when it
/// lies in the nullspace of the model matrix.
pub fn nullspace_preserved(cfg: &CoverConfig<GaussRat>, m: usize, witness: &[GaussRat]) -> Result<bool, IdentityError> {
    let start = model_matrix(cfg, m).mul_vec(witness).iter().all(Scalar::is_zero);
    let red = row_reduce_appendix(cfg, m)?;
    Ok(red
        .trace
        .iter()
        .chain(std::iter::once(&red.final_matrix))
        .all(|mat| mat.mul_vec(witness).iter().all(Scalar::is_zero) == start))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> GaussRat {
        GaussRat::from_i64(v)
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_symmetric(&[g(4), g(5)], 0).unwrap(), g(1));
        assert_eq!(elementary_symmetric(&[g(1), g(2), g(3)], 2).unwrap(), g(11));
        assert!(elementary_symmetric(&[g(1)], 2).is_err());
    }

    #[test]
    fn det_prep_examples() {
        let pts = [g(0), g(1), g(2), g(3)];
        let r = det_prep_check(&pts, 3).unwrap();
        assert_eq!(r.ascending, g(-12));
        assert!(r.holds());
        for ell in 0..=2 {
            assert_eq!(det_prep_check(&pts, ell).unwrap().ascending, g(0));
        }
        assert!(det_prep_check(&[g(0), g(1), g(1), g(3)], 3).is_err());
    }

    #[test]
    fn det_reduction_worked_config() {
        let pts = [g(-2), g(-1), g(0), g(1)];
        let alphas = [g(1), g(2), g(3), g(4)];
        for ell in 0..=3 {
            let r = det_reduction_check(&pts, &alphas, ell).unwrap();
            assert!(r.holds(), "ell = {ell}: {r:?}");
        }
        let off = [g(1), g(2), g(3), g(5)];
        assert!(matches!(det_reduction_check(&pts, &off, 2), Err(IdentityError::PreconditionViolated(_))));
        let flat = [g(4), g(4), g(4), g(4)];
        assert!(matches!(det_reduction_check(&pts, &flat, 2), Err(IdentityError::DegenerateInput(_))));
    }

    #[test]
    fn z1_alpha_generation() {
        let pts = [g(3), g(-1), g(7), g(2), g(5)];
        let alphas = z1_alphas(&pts, (g(1), GaussRat::from_ints(0, 2)));
        assert!(z1_relations(&pts, &alphas).iter().all(Scalar::is_zero));
        assert_eq!(alphas[3], g(1));
    }

    #[test]
    fn step_one_shape() {
        let cfg = CoverConfig::exact(vec![g(0), g(1), g(3), g(-2), g(5)], vec![g(7), g(-4)], 0.0, 0.0).unwrap();
        let red = row_reduce_appendix(&cfg, 1).unwrap();
        let orig = model_matrix(&cfg, 1).rows;
        let first = &red.trace[0].rows;
        assert_eq!(first[0], orig[0].iter().map(|v| -v.clone()).collect::<Vec<_>>());
        for i in 1..3 {
            let expect: Vec<GaussRat> = orig[i]
                .iter()
                .zip(&orig[0])
                .map(|(a, b)| (cfg.q[i - 1].clone() - cfg.p[0].clone()) * a.clone() - b.clone())
                .collect();
            assert_eq!(first[i], expect);
        }
        assert!(verify_row_reduction(&cfg, 1).unwrap().holds());
    }
}
