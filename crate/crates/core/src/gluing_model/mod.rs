//! Explicit model of the moduli space `M_n` of branched covers of a trivial cylinder.
//!
//! A cover is `u(z) = e^{iθ} B(z)/A(z)` with `A(z) = Π_{i=1}^n (z − p_i)` and
//! `B(z) = Π_{j=2}^{n−2} (z − q_j)`; the negative end `q_1` sits at infinity and is
//! never stored. Indices in this module are 1-based in names and docs and 0-based in
//! vectors: `p[i-1] = p_i`, `q[j-2] = q_j`.
//!
//! The scale `w = e^{iθ}e^{−T}` is stored as `phase · decay`. On the float backend these
//! are the true transcendental values; on the exact backend they are rational stand-ins,
//! which is harmless because every identity checked exactly is homogeneous in `w`.

mod counts;
mod evaluation;
mod restriction;

pub use counts::*;
pub use evaluation::*;
pub use restriction::*;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::GluingError;
use crate::linalg::Matrix;
use crate::poly::{series_div, Poly};
use crate::scalar::{Backend, ComplexDoc, GaussRat, Scalar, Tolerance};

#[derive(Clone, Debug, PartialEq)]
pub struct CoverConfig<S> {
    pub n: usize,
    pub p: Vec<S>,
    pub q: Vec<S>,
    pub theta: f64,
    pub t: f64,
    pub phase: S,
    pub decay: S,
}

pub(crate) fn product_except<S: Scalar>(points: &[S], skip: &[usize], z: &S) -> S {
    points
        .iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .fold(S::one(), |acc, (_, x)| acc * (z.clone() - x.clone()))
}

impl<S: Scalar> CoverConfig<S> {
    pub fn new(p: Vec<S>, q: Vec<S>, theta: f64, t: f64, phase: S, decay: S) -> Result<Self, GluingError> {
        let n = p.len();
        if n < 3 {
            return Err(GluingError::InvalidConfiguration(format!("n = {n} < 3")));
        }
        if q.len() != n - 3 {
            return Err(GluingError::InvalidConfiguration(format!(
                "expected {} finite negative punctures, got {}",
                n - 3,
                q.len()
            )));
        }
        let all: Vec<&S> = p.iter().chain(&q).collect();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if all[i] == all[j] {
                    return Err(GluingError::InvalidConfiguration("coincident punctures".into()));
                }
            }
        }
        if phase.is_zero() || decay.is_zero() {
            return Err(GluingError::InvalidConfiguration("vanishing scale".into()));
        }
        Ok(CoverConfig { n, p, q, theta, t, phase, decay })
    }

    /// `w = e^{iθ}e^{−T}`.
    pub fn scale(&self) -> S {
        self.phase.clone() * self.decay.clone()
    }

    /// Number of rows `n − 2` of the derivative matrices.
    pub fn rows(&self) -> usize {
        self.n - 2
    }

    pub fn a(&self, z: &S) -> S {
        product_except(&self.p, &[], z)
    }

    /// `A_i(z)`, omitting `p_i` (0-based `i`).
    pub fn a_except(&self, i: usize, z: &S) -> S {
        product_except(&self.p, &[i], z)
    }

    /// `𝔸_k(z) = Π_{i ≤ n−2, i ≠ k} (z − p_i)` (0-based `k`).
    pub fn a_trunc_except(&self, k: usize, z: &S) -> S {
        product_except(&self.p[..self.n - 2], &[k], z)
    }

    pub fn b(&self, z: &S) -> S {
        product_except(&self.q, &[], z)
    }

    /// `B_j(z)`, omitting `q_j` (0-based position `j` in `q`).
    pub fn b_except(&self, j: usize, z: &S) -> S {
        product_except(&self.q, &[j], z)
    }

    pub fn with_q(&self, q: Vec<S>) -> Result<Self, GluingError> {
        CoverConfig::new(self.p.clone(), q, self.theta, self.t, self.phase.clone(), self.decay.clone())
    }

    pub fn to_float(&self) -> CoverConfig<Complex64> {
        CoverConfig {
            n: self.n,
            p: self.p.iter().map(Scalar::to_c64).collect(),
            q: self.q.iter().map(Scalar::to_c64).collect(),
            theta: self.theta,
            t: self.t,
            phase: Complex64::from_polar(1.0, self.theta),
            decay: Complex64::new((-self.t).exp(), 0.0),
        }
    }
}

impl CoverConfig<Complex64> {
    /// Float configuration with the true scale `e^{iθ}e^{−T}`.
    pub fn from_angle(p: Vec<Complex64>, q: Vec<Complex64>, theta: f64, t: f64) -> Result<Self, GluingError> {
        CoverConfig::new(p, q, theta, t, Complex64::from_polar(1.0, theta), Complex64::new((-t).exp(), 0.0))
    }
}

impl CoverConfig<GaussRat> {
    /// Exact configuration whose scale factors are the dyadic rationals nearest to
    /// `e^{iθ}` and `e^{−T}`.
    pub fn exact(p: Vec<GaussRat>, q: Vec<GaussRat>, theta: f64, t: f64) -> Result<Self, GluingError> {
        let phase = GaussRat::from_c64(Complex64::from_polar(1.0, theta));
        let decay = GaussRat::from_c64(Complex64::new((-t).exp(), 0.0));
        CoverConfig::new(p, q, theta, t, phase, decay)
    }

    /// Exact configuration with an explicit rational stand-in for `w`.
    pub fn with_scale(p: Vec<GaussRat>, q: Vec<GaussRat>, w: GaussRat) -> Result<Self, GluingError> {
        CoverConfig::new(p, q, 0.0, 0.0, w, GaussRat::one())
    }
}

/// Leading coefficients `α_{i,ℓ}` (row `i`, column `ℓ − 1`) and optional perturbations `d_{i,ℓ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticData<S> {
    pub alpha: Vec<Vec<S>>,
    pub d: Option<Vec<Vec<S>>>,
}

impl<S: Scalar> AsymptoticData<S> {
    pub fn order_one(alpha1: Vec<S>) -> Self {
        AsymptoticData { alpha: alpha1.into_iter().map(|a| vec![a]).collect(), d: None }
    }

    pub fn orders(&self) -> usize {
        self.alpha.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn alpha1(&self) -> Vec<S> {
        self.alpha.iter().map(|row| row[0].clone()).collect()
    }

    fn require(&self, n: usize, m: usize) -> Result<(), GluingError> {
        if self.alpha.len() != n {
            return Err(GluingError::InvalidInput(format!("expected {n} rows of coefficients, got {}", self.alpha.len())));
        }
        if m == 0 || self.orders() < m {
            return Err(GluingError::InvalidInput(format!("need orders 1..{m}, have {}", self.orders())));
        }
        Ok(())
    }
}

/// JSON form of a configuration: `{n, p, q, theta, T, alpha, d, backend}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    #[serde(default)]
    pub n: Option<usize>,
    pub p: Vec<ComplexDoc>,
    #[serde(default)]
    pub q: Vec<ComplexDoc>,
    #[serde(default)]
    pub theta: f64,
    #[serde(rename = "T", default)]
    pub t: f64,
    #[serde(default)]
    pub alpha: Option<Vec<Vec<ComplexDoc>>>,
    #[serde(default)]
    pub d: Option<Vec<Vec<ComplexDoc>>>,
    #[serde(default)]
    pub backend: Backend,
}

fn exact_list(xs: &[ComplexDoc]) -> Result<Vec<GaussRat>, GluingError> {
    xs.iter()
        .map(|x| x.to_exact().map_err(|e| GluingError::InvalidInput(e.to_string())))
        .collect()
}

fn exact_matrix(rows: &Option<Vec<Vec<ComplexDoc>>>) -> Result<Option<Vec<Vec<GaussRat>>>, GluingError> {
    rows.as_ref().map(|r| r.iter().map(|row| exact_list(row)).collect()).transpose()
}

impl ConfigDoc {
    pub fn from_json(txt: &str) -> Result<Self, GluingError> {
        serde_json::from_str(txt).map_err(|e| GluingError::InvalidInput(e.to_string()))
    }

    /// Exact configuration and asymptotic data (if present).
    pub fn exact(&self) -> Result<(CoverConfig<GaussRat>, Option<AsymptoticData<GaussRat>>), GluingError> {
        let cfg = CoverConfig::exact(exact_list(&self.p)?, exact_list(&self.q)?, self.theta, self.t)?;
        if let Some(n) = self.n {
            if n != cfg.n {
                return Err(GluingError::InvalidConfiguration(format!("n = {n} but {} positive punctures given", cfg.n)));
            }
        }
        let d = exact_matrix(&self.d)?;
        let asym = exact_matrix(&self.alpha)?.map(|alpha| AsymptoticData { alpha, d });
        Ok((cfg, asym))
    }

    pub fn float(&self) -> Result<(CoverConfig<Complex64>, Option<AsymptoticData<Complex64>>), GluingError> {
        let (cfg, asym) = self.exact()?;
        let f = |m: &Vec<Vec<GaussRat>>| m.iter().map(|r| r.iter().map(Scalar::to_c64).collect()).collect();
        let fcfg = CoverConfig::from_angle(cfg.to_float().p, cfg.to_float().q, self.theta, self.t)?;
        Ok((fcfg, asym.map(|a| AsymptoticData { alpha: f(&a.alpha), d: a.d.as_ref().map(f) })))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Markers {
    pub positive: Vec<Complex64>,
    /// `τ_{−j}` for `j = 2..n−2`.
    pub negative: Vec<Complex64>,
    pub q1_cubed: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RCoefficients<S> {
    pub positive: Vec<S>,
    /// `r_{−1} = 1` first, then `r_{−2}, …, r_{−(n−2)}`.
    pub negative: Vec<S>,
}

fn pole_check<S: Scalar>(points: &[S], z: &S, what: &str) -> Result<(), GluingError> {
    if points.iter().any(|p| p == z) {
        return Err(GluingError::Pole(format!("z coincides with a {what} puncture")));
    }
    Ok(())
}

/// `u(z) = e^{iθ} B(z)/A(z)`.
pub fn cover_map_eval<S: Scalar>(cfg: &CoverConfig<S>, z: &S) -> Result<S, GluingError> {
    pole_check(&cfg.p, z, "positive")?;
    Ok(cfg.phase.clone() * cfg.b(z) / cfg.a(z))
}

pub fn r_coefficients<S: Scalar>(cfg: &CoverConfig<S>) -> RCoefficients<S> {
    let positive = (0..cfg.n).map(|i| cfg.b(&cfg.p[i]) / cfg.a_except(i, &cfg.p[i])).collect();
    let mut negative = vec![S::one()];
    negative.extend((0..cfg.q.len()).map(|j| cfg.a(&cfg.q[j]) / cfg.b_except(j, &cfg.q[j])));
    RCoefficients { positive, negative }
}

/// Asymptotic markers; uses the true phase `e^{iθ}` and principal arguments.
pub fn markers<S: Scalar>(cfg: &CoverConfig<S>) -> Markers {
    let r = r_coefficients(cfg);
    let e = Complex64::from_polar(1.0, cfg.theta);
    let unit = |z: Complex64| z / z.norm();
    Markers {
        positive: r.positive.iter().map(|v| e * unit(v.to_c64())).collect(),
        negative: r.negative[1..].iter().map(|v| e.conj() * unit(v.to_c64())).collect(),
        q1_cubed: e.conj(),
    }
}

/// `Q_k(z) = 𝔸_k(z)/B(z)` for `k ∈ 1..=n−2`.
pub fn replacement_form_eval<S: Scalar>(cfg: &CoverConfig<S>, k: usize, z: &S) -> Result<S, GluingError> {
    if k == 0 || k > cfg.rows() {
        return Err(GluingError::InvalidInput(format!("k = {k} outside 1..={}", cfg.rows())));
    }
    pole_check(&cfg.q, z, "negative")?;
    Ok(cfg.a_trunc_except(k - 1, z) / cfg.b(z))
}

/// Residues `𝔸_k(q_j)/B_j(q_j)` of `Q_k` (row `k`, column over finite `q`).
fn residues<S: Scalar>(cfg: &CoverConfig<S>) -> Vec<Vec<S>> {
    (0..cfg.rows())
        .map(|k| {
            (0..cfg.q.len())
                .map(|j| cfg.a_trunc_except(k, &cfg.q[j]) / cfg.b_except(j, &cfg.q[j]))
                .collect()
        })
        .collect()
}

/// `B_ℓ`, entry `(k, j) = Q_k^{(ℓ−1)}(p_j)/(ℓ−1)!`, from the partial-fraction form
/// `Q_k(z) = 1 − Σ_j res_{kj}/(q_j − z)`.
pub fn derivative_matrix<S: Scalar>(cfg: &CoverConfig<S>, ell: usize) -> Matrix<S> {
    assert!(ell >= 1, "derivative order starts at 1");
    let res = residues(cfg);
    let rows = (0..cfg.rows())
        .map(|k| {
            (0..cfg.n)
                .map(|j| {
                    let tail = (0..cfg.q.len()).fold(S::zero(), |acc, m| {
                        let d = cfg.q[m].clone() - cfg.p[j].clone();
                        acc + res[k][m].clone() / d.powu(ell as u32)
                    });
                    if ell == 1 { S::one() - tail } else { -tail }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows)
}

/// `B_ℓ` by Taylor-expanding `𝔸_k(p_j + t)/B(p_j + t)` as a power series in `t`.
pub fn derivative_matrix_taylor<S: Scalar>(cfg: &CoverConfig<S>, ell: usize) -> Matrix<S> {
    assert!(ell >= 1, "derivative order starts at 1");
    let b = Poly::from_roots(&cfg.q);
    let rows = (0..cfg.rows())
        .map(|k| {
            let roots: Vec<S> = cfg.p[..cfg.rows()]
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, x)| x.clone())
                .collect();
            let num = Poly::from_roots(&roots);
            (0..cfg.n)
                .map(|j| {
                    let ns = num.taylor_shift(&cfg.p[j]);
                    let ds = b.taylor_shift(&cfg.p[j]);
                    series_div(&ns.coeffs, &ds.coeffs, ell)[ell - 1].clone()
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows)
}

/// `v_ℓ = w^ℓ (r_1^ℓ α_{1,ℓ}, …, r_n^ℓ α_{n,ℓ})`.
fn v_vector<S: Scalar>(cfg: &CoverConfig<S>, r: &[S], asym: &AsymptoticData<S>, ell: usize) -> Vec<S> {
    let w = cfg.scale().powu(ell as u32);
    (0..cfg.n)
        .map(|i| w.clone() * r[i].powu(ell as u32) * asym.alpha[i][ell - 1].clone())
        .collect()
}

/// `Σ_{ℓ=1}^m B_ℓ v_ℓ`; the configuration lies in `Z_m` iff this vanishes.
pub fn linearized_section<S: Scalar>(cfg: &CoverConfig<S>, asym: &AsymptoticData<S>, m: usize) -> Result<Vec<S>, GluingError> {
    asym.require(cfg.n, m)?;
    let r = r_coefficients(cfg).positive;
    let mut acc = vec![S::zero(); cfg.rows()];
    for ell in 1..=m {
        let part = derivative_matrix(cfg, ell).mul_vec(&v_vector(cfg, &r, asym, ell));
        for (a, b) in acc.iter_mut().zip(part) {
            *a = a.clone() + b;
        }
    }
    Ok(acc)
}

/// Order-one section with the common factor `w` removed: `B_1 (r_i α_{i,1})`.
pub fn section_stripped<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S]) -> Result<Vec<S>, GluingError> {
    if alpha1.len() != cfg.n {
        return Err(GluingError::InvalidInput("alpha length must equal n".into()));
    }
    let h = h_coefficients(cfg, alpha1);
    Ok(derivative_matrix(cfg, 1).mul_vec(&h))
}

/// Scale of the terms entering `section_stripped`, for float vanishing tests.
pub(crate) fn stripped_scale<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S]) -> f64 {
    let b1 = derivative_matrix(cfg, 1);
    let h = h_coefficients(cfg, alpha1);
    b1.rows
        .iter()
        .flat_map(|row| row.iter().zip(&h).map(|(a, b)| a.norm() * b.norm()))
        .fold(0.0, f64::max)
}

/// Whether the order-one data places the configuration in `Z_1` (independent of `θ`, `T`).
pub fn in_z1<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S], tol: &Tolerance) -> Result<bool, GluingError> {
    let sec = section_stripped(cfg, alpha1)?;
    let scale = stripped_scale(cfg, alpha1);
    Ok(sec.iter().all(|v| tol.vanishes(v, scale)))
}

/// Positive punctures `p_1..p_{n−2}` solving the `Z_1` equations for fixed `p_{n−1}`, `p_n`.
pub fn solve_z1<S: Scalar>(alpha1: &[S], p_last: (&S, &S)) -> Result<Vec<S>, GluingError> {
    let n = alpha1.len();
    if n < 3 {
        return Err(GluingError::InvalidInput("need at least three coefficients".into()));
    }
    let (pa, pb) = p_last;
    if pa == pb {
        return Err(GluingError::InvalidConfiguration("p_(n-1) equals p_n".into()));
    }
    let (aa, ab) = (&alpha1[n - 2], &alpha1[n - 1]);
    let den = aa.clone() - ab.clone();
    if den.is_zero() {
        return Err(GluingError::NoUniqueSolution);
    }
    let offset = pb.clone() * aa.clone() - pa.clone() * ab.clone();
    let span = pa.clone() - pb.clone();
    let solved: Vec<S> = alpha1[..n - 2]
        .iter()
        .map(|ak| (ak.clone() * span.clone() + offset.clone()) / den.clone())
        .collect();
    let mut all = solved.clone();
    all.push(pa.clone());
    all.push(pb.clone());
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if all[i] == all[j] {
                return Err(GluingError::InvalidConfiguration(format!("solved punctures p_{} and p_{} coincide", i + 1, j + 1)));
            }
        }
    }
    Ok(solved)
}

/// Chooses `α_{k,1}` for `k ≤ n−2` so that `Σ_{ℓ ≤ m} B_ℓ v_ℓ = 0`, keeping every other
/// coefficient. Works because `B_1` restricted to the first `n − 2` columns is diagonal.
pub fn project_to_zero_set<S: Scalar>(cfg: &CoverConfig<S>, asym: &AsymptoticData<S>, m: usize) -> Result<AsymptoticData<S>, GluingError> {
    asym.require(cfg.n, m)?;
    let mut out = asym.clone();
    for k in 0..cfg.rows() {
        out.alpha[k][0] = S::zero();
    }
    let section = linearized_section(cfg, &out, m)?;
    let r = r_coefficients(cfg).positive;
    let w = cfg.scale();
    for k in 0..cfg.rows() {
        let diag = cfg.a_trunc_except(k, &cfg.p[k]) / cfg.b(&cfg.p[k]);
        out.alpha[k][0] = -section[k].clone() / (w.clone() * r[k].clone() * diag);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelOrder {
    Truncated(usize),
}

/// `g(z) = Σ_i Σ_ℓ w^ℓ c_{i,ℓ}/(z − p_i)^ℓ` with the scale `w` kept separate from the
/// stripped coefficients `c_{i,ℓ} = r_i^ℓ α_{i,ℓ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelFunction<S> {
    pub order: ModelOrder,
    pub poles: Vec<S>,
    pub scale: S,
    pub stripped: Vec<Vec<S>>,
}

impl<S: Scalar> ModelFunction<S> {
    fn coefficient(&self, i: usize, ell: usize) -> S {
        self.scale.powu(ell as u32) * self.stripped[i][ell - 1].clone()
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.poles.len()).flat_map(move |i| (1..=self.stripped[i].len()).map(move |l| (i, l)))
    }

    pub fn eval(&self, z: &S) -> S {
        self.terms().fold(S::zero(), |acc, (i, l)| {
            acc + self.coefficient(i, l) / (z.clone() - self.poles[i].clone()).powu(l as u32)
        })
    }

    pub fn derivative(&self, z: &S) -> S {
        self.terms().fold(S::zero(), |acc, (i, l)| {
            let d = z.clone() - self.poles[i].clone();
            acc - S::from_i64(l as i64) * self.coefficient(i, l) / d.powu(l as u32 + 1)
        })
    }

    /// Largest term modulus in `g(z)`, the natural scale for a float vanishing test.
    pub fn magnitude(&self, z: &S) -> f64 {
        self.terms()
            .map(|(i, l)| (self.coefficient(i, l) / (z.clone() - self.poles[i].clone()).powu(l as u32)).norm())
            .fold(0.0, f64::max)
    }

    /// Taylor coefficients of `h(ζ) = g(1/ζ)` at `ζ = 0`, through `ζ^{len−1}`.
    pub fn h_series(&self, len: usize) -> Vec<S> {
        let mut out = vec![S::zero(); len];
        for (i, l) in self.terms() {
            // ζ^ℓ (1 − pζ)^{−ℓ} = Σ_k C(k+ℓ−1, ℓ−1) p^k ζ^{k+ℓ}
            let mut binom = S::one();
            for k in 0..len.saturating_sub(l) {
                if k > 0 {
                    binom = binom * S::from_i64((k + l - 1) as i64) / S::from_i64(k as i64);
                }
                out[k + l] = out[k + l].clone() + self.coefficient(i, l) * binom.clone() * self.poles[i].powu(k as u32);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderMModel<S> {
    pub exists: bool,
    pub model: ModelFunction<S>,
    pub h_prime_zero: S,
    pub values_at_q: Vec<S>,
}

/// Builds the order-`m` model and decides whether it exists:
/// `h′(0) = 0` and `g(q_k) = 0` for every finite negative puncture.
pub fn order_m_model<S: Scalar>(cfg: &CoverConfig<S>, asym: &AsymptoticData<S>, m: usize, tol: &Tolerance) -> Result<OrderMModel<S>, GluingError> {
    asym.require(cfg.n, m)?;
    let r = r_coefficients(cfg).positive;
    let stripped = (0..cfg.n)
        .map(|i| (1..=m).map(|l| r[i].powu(l as u32) * asym.alpha[i][l - 1].clone()).collect())
        .collect();
    let model = ModelFunction { order: ModelOrder::Truncated(m), poles: cfg.p.clone(), scale: cfg.scale(), stripped };
    let h_prime_zero = model.h_series(2)[1].clone();
    let h_scale = (0..cfg.n).map(|i| model.coefficient(i, 1).norm()).fold(0.0, f64::max);
    let values_at_q: Vec<S> = cfg.q.iter().map(|q| model.eval(q)).collect();
    let exists = tol.vanishes(&h_prime_zero, h_scale)
        && cfg.q.iter().zip(&values_at_q).all(|(q, v)| tol.vanishes(v, model.magnitude(q)));
    Ok(OrderMModel { exists, model, h_prime_zero, values_at_q })
}

/// `H_i = r_i α_{i,1}`.
pub fn h_coefficients<S: Scalar>(cfg: &CoverConfig<S>, alpha1: &[S]) -> Vec<S> {
    let r = r_coefficients(cfg).positive;
    r.into_iter().zip(alpha1).map(|(ri, a)| ri * a.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> GaussRat {
        GaussRat::from_i64(v)
    }

    fn n4() -> CoverConfig<GaussRat> {
        CoverConfig::exact(vec![g(0), g(1), g(2), g(3)], vec![g(5)], 0.0, 0.0).unwrap()
    }

    #[test]
    fn cover_map_examples() {
        let cfg = CoverConfig::exact(vec![g(0), g(1), g(2)], vec![], 0.0, 0.0).unwrap();
        assert_eq!(cover_map_eval(&cfg, &g(3)).unwrap(), GaussRat::from_fracs(1, 6, 0, 1));
        assert!(cover_map_eval(&cfg, &g(1)).is_err());
        let f0 = CoverConfig::from_angle(cfg.to_float().p, vec![], 0.0, 0.0).unwrap();
        let fpi = CoverConfig::from_angle(cfg.to_float().p, vec![], std::f64::consts::PI, 0.0).unwrap();
        let z = Complex64::new(3.0, 0.5);
        let tol = Tolerance::with_rel(1e-12);
        assert!(tol.eq(&cover_map_eval(&fpi, &z).unwrap(), &-cover_map_eval(&f0, &z).unwrap()));
    }

    #[test]
    fn r_examples() {
        let cfg = CoverConfig::exact(vec![g(0), g(1), g(2)], vec![], 0.0, 0.0).unwrap();
        let r = r_coefficients(&cfg);
        assert_eq!(r.positive[0], GaussRat::from_fracs(1, 2, 0, 1));
        assert_eq!(r.negative, vec![g(1)]);
        assert_eq!(r_coefficients(&n4()).positive[1], g(-2));
    }

    #[test]
    fn markers_have_unit_modulus() {
        let cfg = CoverConfig::from_angle(
            vec![Complex64::new(0.0, 1.0), Complex64::new(2.0, -1.0), Complex64::new(-1.0, 0.5), Complex64::new(3.0, 3.0)],
            vec![Complex64::new(0.5, 0.5)],
            1.3,
            2.0,
        )
        .unwrap();
        let mk = markers(&cfg);
        let r = r_coefficients(&cfg);
        for (tau, ri) in mk.positive.iter().zip(&r.positive) {
            assert!((tau.norm() - 1.0).abs() < 1e-14);
            assert!((tau * ri.norm() - Complex64::from_polar(1.0, 1.3) * ri).norm() < 1e-12);
        }
        assert!((mk.q1_cubed - Complex64::from_polar(1.0, -1.3)).norm() < 1e-15);
    }

    #[test]
    fn replacement_forms_vanish_at_other_punctures() {
        let cfg = CoverConfig::exact(vec![g(0), g(1), g(2), g(3), g(7)], vec![g(5), g(-4)], 0.0, 0.0).unwrap();
        for k in 1..=3 {
            for i in 0..3 {
                let v = replacement_form_eval(&cfg, k, &cfg.p[i]).unwrap();
                assert_eq!(v.is_zero(), i != k - 1);
            }
        }
        assert!(replacement_form_eval(&cfg, 1, &g(5)).is_err());
        assert!(replacement_form_eval(&cfg, 4, &g(9)).is_err());
    }

    #[test]
    fn derivative_matrix_routes_agree() {
        let cfg = CoverConfig::exact(
            vec![g(0), g(1), GaussRat::from_fracs(1, 2, 3, 1), g(3), g(-7)],
            vec![g(5), GaussRat::from_ints(-4, 1)],
            0.0,
            0.0,
        )
        .unwrap();
        for ell in 1..=4 {
            assert_eq!(derivative_matrix(&cfg, ell), derivative_matrix_taylor(&cfg, ell));
        }
    }

    #[test]
    fn solve_z1_example() {
        let alpha = vec![g(1), g(2), g(3), g(4)];
        let p = solve_z1(&alpha, (&g(0), &g(1))).unwrap();
        assert_eq!(p, vec![g(-2), g(-1)]);
        let bad = vec![g(3), g(2), g(3), g(4)];
        assert!(matches!(solve_z1(&bad, (&g(0), &g(1))), Err(GluingError::InvalidConfiguration(_))));
        let flat = vec![g(1), g(2), g(3), g(3)];
        assert_eq!(solve_z1(&flat, (&g(0), &g(1))), Err(GluingError::NoUniqueSolution));
    }

    #[test]
    fn worked_z1_point_has_vanishing_section() {
        let alpha = vec![g(1), g(2), g(3), g(4)];
        let mut p = solve_z1(&alpha, (&g(0), &g(1))).unwrap();
        p.extend([g(0), g(1)]);
        let cfg = CoverConfig::exact(p, vec![g(5)], 0.7, 1.0).unwrap();
        let asym = AsymptoticData::order_one(alpha.clone());
        assert!(linearized_section(&cfg, &asym, 1).unwrap().iter().all(Scalar::is_zero));
        let h = h_coefficients(&cfg, &alpha);
        assert!(h.iter().cloned().fold(g(0), |a, b| a + b).is_zero());
        let model = order_m_model(&cfg, &asym, 1, &Tolerance::default()).unwrap();
        assert!(model.exists);
    }

    #[test]
    fn h_series_matches_direct_expansion() {
        let cfg = n4();
        let asym = AsymptoticData { alpha: vec![vec![g(1), g(2)], vec![g(-1), g(0)], vec![g(3), g(1)], vec![g(2), g(-5)]], d: None };
        let model = order_m_model(&cfg, &asym, 2, &Tolerance::default()).unwrap().model;
        // g(1/ζ) on a few rational ζ against the truncated series plus a bounded remainder
        let series = model.h_series(6);
        let zeta = GaussRat::from_fracs(1, 10000, 0, 1);
        let direct = model.eval(&zeta.inv());
        let approx = series.iter().enumerate().fold(g(0), |acc, (k, c)| acc + c.clone() * zeta.powu(k as u32));
        assert!((direct - approx).norm() < 1e-15);
    }
}
