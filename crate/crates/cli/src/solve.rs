//! Single-configuration solvers: `Z_1` punctures, restriction roots, auxiliary zeros,
//! the degree count and order-`m` models.

use ech_calculus::gluing_model::{
    admissible_check, aux_gluing_zeros, in_z1, linearized_section, order_m_model, solve_restriction, solve_z1, ConfigDoc,
    RestrictionProblem, SolveOptions,
};
use ech_calculus::identity_verifier::z1_relations;
use ech_calculus::sample;
use ech_calculus::scalar::Backend;
use ech_calculus::{GaussRat, Scalar, Tolerance};
use serde_json::{json, Value};

use crate::{exit, CliError};

fn strs(v: &[GaussRat]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// `p_1..p_{n−2}` from `α` and the last two punctures.
pub fn z1(alpha: &[GaussRat], p_last: &[GaussRat]) -> Result<Value, CliError> {
    let [pa, pb] = p_last else {
        return Err(CliError::Usage("--p takes exactly two values".into()));
    };
    let mut p = solve_z1(alpha, (pa, pb))?;
    p.push(pa.clone());
    p.push(pb.clone());
    let residuals = z1_relations(&p, alpha);
    Ok(json!({"p": strs(&p), "verified": residuals.iter().all(Scalar::is_zero)}))
}

pub fn aux(alpha: &[GaussRat]) -> Result<Value, CliError> {
    let [a1, a2] = alpha else {
        return Err(CliError::Usage("--alpha takes exactly two values".into()));
    };
    let z = aux_gluing_zeros((a1.to_c64(), a2.to_c64()))?;
    Ok(json!(z))
}

/// Restriction problem from explicit or seeded data. Admissibility is checked first.
pub fn restriction_problem(
    c: Vec<GaussRat>,
    alpha: Option<Vec<GaussRat>>,
    p_last: Option<Vec<GaussRat>>,
    t: f64,
    seed: u64,
) -> Result<RestrictionProblem, CliError> {
    if c.is_empty() {
        return Err(CliError::Usage("--c needs at least one entry".into()));
    }
    if !admissible_check(&c) {
        return Err(CliError::Inadmissible("entries must be nonzero and pairwise distinct".into()));
    }
    let n = c.len() + 2;
    let mut rng = sample::seeded(seed);
    let alpha1 = match alpha {
        Some(a) if a.len() == n => a,
        Some(a) => return Err(CliError::Usage(format!("--alpha needs {n} entries, got {}", a.len()))),
        None => loop {
            let a: Vec<GaussRat> = (0..n).map(|_| sample::gauss_bounded(&mut rng, 20)).collect();
            if a[n - 2] != a[n - 1] {
                break a;
            }
        },
    };
    let p_last = match p_last {
        Some(p) => match <[GaussRat; 2]>::try_from(p) {
            Ok([a, b]) => (a, b),
            Err(_) => return Err(CliError::Usage("--p takes exactly two values".into())),
        },
        None => loop {
            let a = sample::gauss_bounded(&mut rng, 20);
            let b = sample::gauss_bounded(&mut rng, 20);
            if solve_z1(&alpha1, (&a, &b)).is_ok() {
                break (a, b);
            }
        },
    };
    Ok(RestrictionProblem { c, alpha1, p_last, t })
}

pub fn restriction(problem: &RestrictionProblem) -> Result<Value, CliError> {
    let sol = solve_restriction(problem, &SolveOptions::default())?;
    Ok(json!({
        "n": problem.c.len() + 2,
        "c": strs(&problem.c),
        "alpha": strs(&problem.alpha1),
        "p_last": strs(&[problem.p_last.0.clone(), problem.p_last.1.clone()]),
        "T": problem.t,
        "solution": sol,
    }))
}

/// Mod-2 solution count; exit code 0 iff the parity is one and every root re-verifies.
pub fn degree(problem: &RestrictionProblem, tol: f64) -> Result<(Value, i32), CliError> {
    let sol = solve_restriction(problem, &SolveOptions::default())?;
    let worst = sol.roots.iter().map(|r| r.residual).fold(0.0, f64::max);
    let ok = sol.parity == 1 && worst <= tol;
    let v = json!({
        "n": problem.c.len() + 2,
        "c": strs(&problem.c),
        "alpha": strs(&problem.alpha1),
        "p_last": strs(&[problem.p_last.0.clone(), problem.p_last.1.clone()]),
        "T": problem.t,
        "parity": sol.parity,
        "roots": sol.roots,
        "max_residual": worst,
        "tolerance": tol,
    });
    Ok((v, if ok { exit::OK } else { exit::FAILURES }))
}

/// Order-`m` model report for a JSON configuration.
pub fn model(text: &str, m: usize, backend: Option<Backend>, tol: f64) -> Result<Value, CliError> {
    let doc = ConfigDoc::from_json(text)?;
    let backend = backend.unwrap_or(doc.backend);
    let tol = Tolerance::with_rel(tol);
    match backend {
        Backend::Exact => {
            let (cfg, asym) = doc.exact()?;
            let asym = asym.ok_or_else(|| CliError::Usage("configuration has no alpha".into()))?;
            let model = order_m_model(&cfg, &asym, m, &tol)?;
            Ok(json!({
                "backend": backend,
                "m": m,
                "model_exists": model.exists,
                "in_z1": in_z1(&cfg, &asym.alpha1(), &tol)?,
                "h_prime_zero": model.h_prime_zero.to_string(),
                "values_at_q": strs(&model.values_at_q),
                "section": strs(&linearized_section(&cfg, &asym, m)?),
            }))
        }
        Backend::Float => {
            let (cfg, asym) = doc.float()?;
            let asym = asym.ok_or_else(|| CliError::Usage("configuration has no alpha".into()))?;
            let model = order_m_model(&cfg, &asym, m, &tol)?;
            Ok(json!({
                "backend": backend,
                "m": m,
                "tolerance": tol.rel,
                "model_exists": model.exists,
                "in_z1": in_z1(&cfg, &asym.alpha1(), &tol)?,
                "h_prime_zero": model.h_prime_zero,
                "values_at_q": model.values_at_q,
                "section": linearized_section(&cfg, &asym, m)?,
            }))
        }
    }
}
