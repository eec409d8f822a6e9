//! Identities on `Z_1`, model evaluation maps and the full-model series.

use num_complex::Complex64;
use serde::Serialize;

use super::{in_z1, h_coefficients, r_coefficients, AsymptoticData, CoverConfig};
use crate::error::GluingError;
use crate::poly::{series_div, Poly};
use crate::scalar::{Scalar, Tolerance};

fn require_z1<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S], tol: &Tolerance) -> Result<(), GluingError> {
    if !in_z1(cfg, alpha1, tol)? {
        return Err(GluingError::PreconditionViolated("configuration is not in Z_1".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedIdentities {
    pub subsets: usize,
    /// 1-based puncture labels `k` of every failing subset `{q_k}`.
    pub failures: Vec<Vec<usize>>,
}

impl DerivedIdentities {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `Σ_i H_i / Π_{k∈S}(q_k − p_i) = 0` for every nonempty subset `S` of the finite `q`.
pub fn derived_identities_check<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S], tol: &Tolerance) -> Result<DerivedIdentities, GluingError> {
    require_z1(cfg, alpha1, tol)?;
    let h = h_coefficients(cfg, alpha1);
    let k = cfg.q.len();
    let mut failures = Vec::new();
    let subsets = (1usize << k) - 1;
    for mask in 1..=subsets {
        let chosen: Vec<usize> = (0..k).filter(|j| mask & (1 << j) != 0).collect();
        let terms: Vec<S> = (0..cfg.n)
            .map(|i| {
                let den = chosen
                    .iter()
                    .fold(S::one(), |acc, &j| acc * (cfg.q[j].clone() - cfg.p[i].clone()));
                h[i].clone() / den
            })
            .collect();
        let scale = terms.iter().map(Scalar::norm).fold(0.0, f64::max);
        let sum = terms.into_iter().fold(S::zero(), |a, b| a + b);
        if !tol.vanishes(&sum, scale) {
            failures.push(chosen.iter().map(|j| j + 2).collect());
        }
    }
    Ok(DerivedIdentities { subsets, failures })
}

/// Compares `g(z) = w Σ H_i/(z − p_i)` with `w B(z) Σ α_i/(A_i(p_i)(z − p_i))`.
pub fn model_rewrite_check<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S], z: &S, tol: &Tolerance) -> Result<bool, GluingError> {
    require_z1(cfg, alpha1, tol)?;
    if cfg.p.contains(z) {
        return Err(GluingError::Pole("z coincides with a positive puncture".into()));
    }
    let w = cfg.scale();
    let h = h_coefficients(cfg, alpha1);
    let lhs = (0..cfg.n).fold(S::zero(), |acc, i| acc + h[i].clone() / (z.clone() - cfg.p[i].clone()));
    let rhs = (0..cfg.n).fold(S::zero(), |acc, i| {
        acc + alpha1[i].clone() / (cfg.a_except(i, &cfg.p[i]) * (z.clone() - cfg.p[i].clone()))
    });
    let lhs = w.clone() * lhs;
    let rhs = w * cfg.b(z) * rhs;
    if S::EXACT {
        return Ok(lhs == rhs);
    }
    let scale = (0..cfg.n)
        .map(|i| (cfg.scale() * h[i].clone() / (z.clone() - cfg.p[i].clone())).norm())
        .fold(lhs.norm().max(rhs.norm()), f64::max);
    Ok(tol.vanishes(&(lhs - rhs), scale))
}

/// Closed form `[(α_{n−1}−α_n) q − (p_n α_{n−1} − p_{n−1} α_n)] / (p_{n−1} − p_n)` of the
/// reduced multiplicity-one coefficient at `q`.
pub fn mult1_closed<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S], q: &S) -> S {
    let n = cfg.n;
    let (aa, ab) = (alpha1[n - 2].clone(), alpha1[n - 1].clone());
    let (pa, pb) = (cfg.p[n - 2].clone(), cfg.p[n - 1].clone());
    ((aa.clone() - ab.clone()) * q.clone() - (pb * aa - pa.clone() * ab)) / (pa - cfg.p[n - 1].clone())
}

/// `[Σ p_i H_i, L(q_2), …, L(q_{n−2})]`: the model evaluation map with all unit factors
/// and `e^{−T}` removed, from the closed forms.
pub fn mev_reduced_closed<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S]) -> Vec<S> {
    let h = h_coefficients(cfg, alpha1);
    let first = (0..cfg.n).fold(S::zero(), |acc, i| acc + cfg.p[i].clone() * h[i].clone());
    let mut out = vec![first];
    out.extend(cfg.q.iter().map(|q| mult1_closed(cfg, alpha1, q)));
    out
}

/// The same quantities by direct computation: `h″(0)/(2w)` from the power series of
/// `h(ζ) = g(1/ζ)`, and `−r_{−k} Σ H_i/(q_k − p_i)^2 = r_{−k} g′(q_k)/w`.
pub fn mev_reduced_direct<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S]) -> Vec<S> {
    let h = h_coefficients(cfg, alpha1);
    let mut num = Poly::constant(S::zero());
    for i in 0..cfg.n {
        let others: Vec<S> = cfg.p.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
        num = num.add(&Poly::from_roots(&others).scale(&h[i]));
    }
    num.coeffs.resize(cfg.n, S::zero());
    let rev_num = num.reversed();
    let rev_den = Poly::from_roots(&cfg.p).reversed();
    let series = series_div(&rev_num.coeffs, &rev_den.coeffs, 2);
    let mut out = vec![series[1].clone()];
    let r_neg = r_coefficients(cfg).negative;
    for (j, q) in cfg.q.iter().enumerate() {
        let deriv = (0..cfg.n).fold(S::zero(), |acc, i| {
            acc - h[i].clone() / (q.clone() - cfg.p[i].clone()).powu(2)
        });
        out.push(r_neg[j + 1].clone() * deriv);
    }
    out
}

/// Unit factors `(e^{−s/3} e^{iθ/3} e^{−T}, e^{−s} e^{−T})` for entry 1 and entries `2..`.
pub fn mev_units(theta: f64, t: f64, s: f64) -> (Complex64, Complex64) {
    let first = Complex64::from_polar((-s / 3.0 - t).exp(), theta / 3.0);
    let rest = Complex64::new((-s - t).exp(), 0.0);
    (first, rest)
}

fn apply_units(reduced: &[Complex64], theta: f64, t: f64, s: f64) -> Vec<Complex64> {
    let (u1, uk) = mev_units(theta, t, s);
    reduced
        .iter()
        .enumerate()
        .map(|(k, v)| if k == 0 { u1 * v } else { uk * v })
        .collect()
}

/// Model evaluation map on `Z_1` from the closed forms. Entry 1 is normalized as
/// `e^{−s/3} e^{−2iθ/3} h″(0)/2`.
pub fn mev<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S], s: f64, tol: &Tolerance) -> Result<Vec<Complex64>, GluingError> {
    require_z1(cfg, alpha1, tol)?;
    let reduced: Vec<Complex64> = mev_reduced_closed(cfg, alpha1).iter().map(Scalar::to_c64).collect();
    Ok(apply_units(&reduced, cfg.theta, cfg.t, s))
}

/// Model evaluation map by direct differentiation of `g`.
pub fn mev_direct<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S], s: f64) -> Vec<Complex64> {
    let reduced: Vec<Complex64> = mev_reduced_direct(cfg, alpha1).iter().map(Scalar::to_c64).collect();
    apply_units(&reduced, cfg.theta, cfg.t, s)
}

/// `h″(0)/2 = e^{iθ} e^{−T} Σ p_i H_i`, from the true scale and the power series of `h`.
pub fn mult3_symbolic<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S]) -> Complex64 {
    let w = Complex64::from_polar((-cfg.t).exp(), cfg.theta);
    w * mev_reduced_direct(cfg, alpha1)[0].to_c64()
}

/// The literal closed form `e^{iθ/3} e^{−T} Σ p_i H_i` stated for `h″(0)/2`. It differs
/// from [`mult3_symbolic`] by the unit factor `e^{2iθ/3}`.
pub fn mult3_stated<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S]) -> Complex64 {
    let pref = Complex64::from_polar((-cfg.t).exp(), cfg.theta / 3.0);
    pref * mev_reduced_closed(cfg, alpha1)[0].to_c64()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FullModelEv {
    pub values: Vec<Complex64>,
    /// Largest modulus contributed by the last retained order `ℓ = M`.
    pub tail_estimate: f64,
    pub warnings: Vec<String>,
}

pub const DEFAULT_TRUNCATION: usize = 3;

/// Evaluation map of the full model truncated at order `big_m`, including `d` terms.
pub fn full_model_ev(cfg: &CoverConfig<Complex64>, asym: &AsymptoticData<Complex64>, big_m: usize, s: f64) -> Result<FullModelEv, GluingError> {
    if big_m == 0 {
        return Err(GluingError::InvalidInput("truncation order must be at least 1".into()));
    }
    if asym.alpha.len() != cfg.n || asym.orders() < big_m {
        return Err(GluingError::InvalidInput(format!("need {} rows with orders 1..{big_m}", cfg.n)));
    }
    let zero = vec![vec![Complex64::new(0.0, 0.0); big_m]; cfg.n];
    let d = asym.d.as_ref().unwrap_or(&zero);
    if d.len() != cfg.n || d.iter().any(|row| row.len() < big_m) {
        return Err(GluingError::InvalidInput("perturbation matrix has the wrong shape".into()));
    }
    let mut warnings = Vec::new();
    let coeff = |i: usize, l: usize| -> Complex64 {
        asym.alpha[i][l - 1] * (-(l as f64) * cfg.t).exp() + d[i][l - 1]
    };
    for i in 0..cfg.n {
        for l in 1..=big_m {
            let lead = asym.alpha[i][l - 1].norm() * (-(l as f64) * cfg.t).exp();
            if d[i][l - 1].norm() >= 0.1 * lead && d[i][l - 1].norm() > 0.0 {
                warnings.push(format!("|d[{}][{}]| is not small against |alpha| e^(-{l}T)", i + 1, l));
            }
        }
    }
    let r = r_coefficients(cfg).positive;
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let th = cfg.theta;
    let mut tail: f64 = 0.0;

    let mut first = Complex64::new(0.0, 0.0);
    for i in 0..cfg.n {
        first += e(th / 3.0) * cfg.p[i] * r[i] * coeff(i, 1);
    }
    if big_m == 1 {
        tail = tail.max(first.norm());
    }
    if big_m >= 2 {
        let second: Complex64 = (0..cfg.n).map(|i| e(4.0 * th / 3.0) * r[i] * r[i] * coeff(i, 2)).sum();
        if big_m == 2 {
            tail = tail.max(second.norm());
        }
        first += second;
    }
    let mut values = vec![first * (-s / 3.0).exp()];
    for (k, qk) in cfg.q.iter().enumerate() {
        let bk = cfg.b_except(k, qk);
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 1..=big_m {
            let mut part = Complex64::new(0.0, 0.0);
            for i in 0..cfg.n {
                let ratio = cfg.b_except(k, &cfg.p[i]) / cfg.a_except(i, &cfg.p[i]);
                let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
                part += sign * l as f64 * cfg.a_except(i, qk) * ratio.powu(l as u32) * coeff(i, l) * e((l as f64 - 1.0) * th);
            }
            part /= bk;
            if l == big_m {
                tail = tail.max(part.norm());
            }
            acc += part;
        }
        values.push(acc * (-s).exp());
    }
    Ok(FullModelEv { values, tail_estimate: tail, warnings })
}
