//! Solving `mev = c` for an asymptotic restriction `c` and counting solutions mod 2.
//!
//! With `α` and `p_{n−1}, p_n` fixed, the `Z_1` equations determine `p_1..p_{n−2}` and the
//! multiplicity-one equations make every `q_k` affine in `x = e^{s+T}`:
//! `q_k = q_0 + x γ_k`. Substituting into the multiplicity-three equation leaves
//! `e^{−s/3} e^{iθ/3} e^{−T} S(x) = c_1`, where `S(x) = Σ p_i H_i` is a polynomial in `x`
//! with exact coefficients. The modulus equation is solved for `s` by a grid scan plus
//! bisection, and the phase then fixes `θ ∈ [0, 6π)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{mev_reduced_direct, mev_units, solve_z1, CoverConfig};
use crate::error::GluingError;
use crate::poly::Poly;
use crate::scalar::{GaussRat, Scalar};

/// Entries nonzero and pairwise distinct.
pub fn admissible_check<S: Scalar>(c: &[S]) -> bool {
    if c.iter().any(Scalar::is_zero) {
        return false;
    }
    (0..c.len()).all(|i| (i + 1..c.len()).all(|j| c[i] != c[j]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionProblem {
    /// `c_1` (the multiplicity-three end) first, then `c_2..c_{n−2}`.
    pub c: Vec<GaussRat>,
    pub alpha1: Vec<GaussRat>,
    pub p_last: (GaussRat, GaussRat),
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolveOptions {
    pub s_max: f64,
    pub grid: usize,
    pub bisection_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { s_max: 50.0, grid: 10_000, bisection_tol: 1e-12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestrictionRoot {
    pub q: Vec<Complex64>,
    pub s: f64,
    pub theta: f64,
    /// `max_k |mev_k − c_k| / |c_k|`, recomputed by direct differentiation.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestrictionSolution {
    pub p: Vec<Complex64>,
    pub roots: Vec<RestrictionRoot>,
    pub parity: u8,
}

struct Reduced {
    p: Vec<GaussRat>,
    q0: GaussRat,
    gamma: Vec<GaussRat>,
    s_poly: Vec<Complex64>,
}

fn reduce(problem: &RestrictionProblem) -> Result<Reduced, GluingError> {
    let n = problem.c.len() + 2;
    if problem.alpha1.len() != n {
        return Err(GluingError::InvalidInput(format!("expected {n} coefficients alpha, got {}", problem.alpha1.len())));
    }
    if !admissible_check(&problem.c) {
        return Err(GluingError::Inadmissible);
    }
    let (pa, pb) = (&problem.p_last.0, &problem.p_last.1);
    let mut p = solve_z1(&problem.alpha1, (pa, pb))?;
    p.push(pa.clone());
    p.push(pb.clone());
    let (aa, ab) = (problem.alpha1[n - 2].clone(), problem.alpha1[n - 1].clone());
    let den = aa.clone() - ab.clone();
    let q0 = (pb.clone() * aa - pa.clone() * ab) / den.clone();
    let gamma: Vec<GaussRat> = problem.c[1..]
        .iter()
        .map(|ck| (pa.clone() - pb.clone()) * ck.clone() / den.clone())
        .collect();
    // S(x) = Σ_i p_i α_i / A_i(p_i) · Π_k (p_i − q_0 − x γ_k)
    let mut s_poly = Poly::constant(GaussRat::zero());
    for i in 0..n {
        let a_i = p
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(GaussRat::one(), |acc, (_, pj)| acc * (p[i].clone() - pj.clone()));
        let mut term = Poly::constant(p[i].clone() * problem.alpha1[i].clone() / a_i);
        for g in &gamma {
            term = term.mul(&Poly { coeffs: vec![p[i].clone() - q0.clone(), -g.clone()] });
        }
        s_poly = s_poly.add(&term);
    }
    while s_poly.coeffs.len() > 1 && s_poly.coeffs.last().is_some_and(Scalar::is_zero) {
        s_poly.coeffs.pop();
    }
    let s_poly = s_poly.coeffs.iter().map(Scalar::to_c64).collect();
    Ok(Reduced { p, q0, gamma, s_poly })
}

/// `(ln|S(x)|, arg S(x))` for `x = e^{lx}`, evaluating in the reversed variable when
/// `x > 1` so that large `x` does not overflow.
fn log_eval(coeffs: &[Complex64], lx: f64) -> (f64, f64) {
    let d = coeffs.len() - 1;
    let v = if lx <= 0.0 {
        let x = lx.exp();
        coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    } else {
        let y = (-lx).exp();
        coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * y + c)
    };
    let shift = if lx > 0.0 { d as f64 * lx } else { 0.0 };
    (v.norm().ln() + shift, v.arg())
}

/// Finds every `(q, s, θ)` with `mev = c` on the slice fixed by `α` and `p_{n−1}, p_n`.
pub fn solve_restriction(problem: &RestrictionProblem, opts: &SolveOptions) -> Result<RestrictionSolution, GluingError> {
    let red = reduce(problem)?;
    let t = problem.t;
    let c1 = problem.c[0].to_c64();
    let f = |s: f64| -> f64 {
        let (ln_s, _) = log_eval(&red.s_poly, s + t);
        -s / 3.0 - t + ln_s - c1.norm().ln()
    };
    let step = 2.0 * opts.s_max / opts.grid as f64;
    let grid: Vec<(f64, f64)> = (0..=opts.grid)
        .map(|j| {
            let s = -opts.s_max + j as f64 * step;
            (s, f(s))
        })
        .collect();
    let mut brackets = Vec::new();
    for w in grid.windows(2) {
        let ((s0, f0), (s1, f1)) = (w[0], w[1]);
        if !(f0.is_finite() && f1.is_finite()) {
            continue;
        }
        if f0 == 0.0 {
            brackets.push((s0, s0));
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            brackets.push((s0, s1));
        }
    }
    if let Some(&(s_last, f_last)) = grid.last() {
        if f_last == 0.0 {
            brackets.push((s_last, s_last));
        }
    }
    if brackets.is_empty() {
        let (lo, hi) = (grid[0].1, grid[grid.len() - 1].1);
        return Err(GluingError::NumericRange(format!(
            "no sign change of log|LHS| - log|c_1| on [-{m}, {m}]: f(-{m}) = {lo:.6e}, f({m}) = {hi:.6e}",
            m = opts.s_max
        )));
    }
    let mut roots = Vec::new();
    for (mut a, mut b) in brackets {
        let fa_sign = f(a).signum();
        while b - a > opts.bisection_tol {
            let mid = 0.5 * (a + b);
            let fm = f(mid);
            if fm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if fm.signum() == fa_sign {
                a = mid;
            } else {
                b = mid;
            }
        }
        let s = 0.5 * (a + b);
        roots.push(finish_root(problem, &red, s)?);
    }
    let parity = (roots.len() % 2) as u8;
    Ok(RestrictionSolution { p: red.p.iter().map(Scalar::to_c64).collect(), roots, parity })
}

fn finish_root(problem: &RestrictionProblem, red: &Reduced, s: f64) -> Result<RestrictionRoot, GluingError> {
    let t = problem.t;
    let x_exact = GaussRat::from_c64(Complex64::new((s + t).exp(), 0.0));
    let q: Vec<GaussRat> = red.gamma.iter().map(|g| red.q0.clone() + x_exact.clone() * g.clone()).collect();
    let (_, arg_s) = log_eval(&red.s_poly, s + t);
    // e^{iθ/3} has the argument of c_1 / S(x); θ/3 is taken in [0, 2π).
    let phi = (problem.c[0].to_c64().arg() - arg_s).rem_euclid(2.0 * PI);
    let theta = (3.0 * phi).rem_euclid(6.0 * PI);
    let cfg = CoverConfig::exact(red.p.clone(), q.clone(), theta, t).map_err(|e| {
        GluingError::NumericRange(format!("root at s = {s} gives a degenerate configuration: {e}"))
    })?;
    let reduced: Vec<Complex64> = mev_reduced_direct(&cfg, &problem.alpha1).iter().map(Scalar::to_c64).collect();
    let (u1, uk) = mev_units(theta, t, s);
    let residual = reduced
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let value = if k == 0 { u1 * v } else { uk * v };
            let target = problem.c[k].to_c64();
            (value - target).norm() / target.norm()
        })
        .fold(0.0, f64::max);
    Ok(RestrictionRoot { q: q.iter().map(Scalar::to_c64).collect(), s, theta, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussRat {
        GaussRat::from_ints(re, im)
    }

    #[test]
    fn admissibility() {
        assert!(admissible_check(&[g(1, 0), g(2, 0), g(3, 0)]));
        assert!(!admissible_check(&[g(1, 0), g(1, 0), g(2, 0)]));
        assert!(!admissible_check(&[g(0, 0), g(1, 0)]));
    }

    #[test]
    fn n4_parity_one() {
        let problem = RestrictionProblem {
            c: vec![g(1, 0), g(2, 0)],
            alpha1: vec![g(1, 1), g(-2, 3), g(3, 0), g(4, -1)],
            p_last: (g(0, 0), g(1, 0)),
            t: 2.0,
        };
        let sol = solve_restriction(&problem, &SolveOptions::default()).unwrap();
        assert_eq!(sol.parity, 1);
        assert_eq!(sol.roots.len(), 1);
        let root = &sol.roots[0];
        assert!(root.residual <= 1e-9, "residual {}", root.residual);
        assert!((0.0..6.0 * PI).contains(&root.theta));
    }

    #[test]
    fn rejects_bad_inputs() {
        let base = RestrictionProblem {
            c: vec![g(1, 0), g(1, 0)],
            alpha1: vec![g(1, 1), g(-2, 3), g(3, 0), g(4, -1)],
            p_last: (g(0, 0), g(1, 0)),
            t: 2.0,
        };
        assert_eq!(solve_restriction(&base, &SolveOptions::default()), Err(GluingError::Inadmissible));
        let flat = RestrictionProblem { c: vec![g(1, 0), g(2, 0)], alpha1: vec![g(1, 1), g(-2, 3), g(3, 0), g(3, 0)], ..base };
        assert_eq!(solve_restriction(&flat, &SolveOptions::default()), Err(GluingError::NoUniqueSolution));
    }

    #[test]
    fn narrow_window_reports_range_error() {
        let problem = RestrictionProblem {
            c: vec![g(1, 0), g(2, 0)],
            alpha1: vec![g(1, 1), g(-2, 3), g(3, 0), g(4, -1)],
            p_last: (g(0, 0), g(1, 0)),
            t: 2.0,
        };
        let opts = SolveOptions { s_max: 0.01, grid: 10, ..SolveOptions::default() };
        assert!(matches!(solve_restriction(&problem, &opts), Err(GluingError::NumericRange(_))));
    }
}
