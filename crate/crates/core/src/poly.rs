//! Dense univariate polynomials and truncated power series.

use crate::scalar::Scalar;

/// Coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn constant(c: S) -> Self {
        Poly { coeffs: vec![c] }
    }

    /// Monic polynomial `Π (z − r)`.
    pub fn from_roots(roots: &[S]) -> Self {
        let mut coeffs = vec![S::one()];
        for r in roots {
            let mut next = vec![S::zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] = next[k + 1].clone() + c.clone();
                next[k] = next[k].clone() - c.clone() * r.clone();
            }
            coeffs = next;
        }
        Poly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, k: &S) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_else(S::zero);
                let b = other.coeffs.get(k).cloned().unwrap_or_else(S::zero);
                a + b
            })
            .collect();
        Poly { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly { coeffs }
    }

    /// Coefficients of `p(z + a)`, i.e. the Taylor coefficients of `p` at `a`.
    pub fn taylor_shift(&self, a: &S) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] = c[j].clone() + a.clone() * c[j + 1].clone();
            }
        }
        Poly { coeffs: c }
    }

    /// `z^d p(1/z)` for `d = deg p`.
    pub fn reversed(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().rev().cloned().collect() }
    }
}

/// First `terms` coefficients of the power series `num / den`; requires `den[0] ≠ 0`.
pub fn series_div<S: Scalar>(num: &[S], den: &[S], terms: usize) -> Vec<S> {
    let d0 = den[0].clone();
    let mut out: Vec<S> = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = num.get(k).cloned().unwrap_or_else(S::zero);
        for j in 1..=k {
            if let Some(dj) = den.get(j) {
                acc = acc - dj.clone() * out[k - j].clone();
            }
        }
        out.push(acc / d0.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    fn g(v: i64) -> GaussRat {
        GaussRat::from_i64(v)
    }

    #[test]
    fn roots_and_eval() {
        let p = Poly::from_roots(&[g(1), g(2), g(-3)]);
        assert_eq!(p.degree(), 3);
        assert_eq!(p.eval(&g(2)), g(0));
        assert_eq!(p.eval(&g(0)), g(6));
    }

    #[test]
    fn taylor_shift_matches_direct_expansion() {
        // (z+2)^2 - 1 = z^2 + 4z + 3
        let p = Poly { coeffs: vec![g(-1), g(0), g(1)] };
        assert_eq!(p.taylor_shift(&g(2)).coeffs, vec![g(3), g(4), g(1)]);
    }

    #[test]
    fn geometric_series() {
        let s = series_div(&[g(1)], &[g(1), g(-1)], 5);
        assert!(s.iter().all(|c| *c == g(1)));
    }
}
