//! The verification suites. Each trial draws from its own seeded stream so that a
//! trial can be replayed from the report alone.

use ech_calculus::chain_engine::{load_fixture, table_from_pairs, verify_complex, verify_fixture, ChainComplexData, Generator};
use ech_calculus::gluing_model::{
    gluing_indices, linearized_section, mev_reduced_closed, mev_reduced_direct, order_m_model, project_to_zero_set,
    prototypical_gluing, solve_restriction, AsymptoticData, CoverConfig, SolveOptions,
};
use ech_calculus::identity_verifier::{det_prep_check, det_reduction_check, nullspace_equivalence_check, verify_row_reduction};
use ech_calculus::orbit_calculus::{
    deficit_at_orbit, integer_partitions, odd_pair_excess, partition_check, retrivialize, writhe_identity_check,
    writhe_identity_sides, HyperbolicKind,
};
use ech_calculus::sample::{self, seeded};
use ech_calculus::scalar::Backend;
use ech_calculus::{GaussRat, Scalar, Tolerance};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{CliError, Report, Suite, SuiteConfig, TrialRecord};

/// Stream for trial `t`.
pub fn trial_rng(seed: u64, t: usize) -> ChaCha8Rng {
    seeded(seed ^ (t as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn record(trial: usize, pass: bool, inputs: Value, result: Value) -> TrialRecord {
    TrialRecord { trial, pass, inputs, result }
}

fn strs(v: &[GaussRat]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let records = match cfg.suite {
        Suite::Indices => indices(cfg)?,
        Suite::Deficit => deficit(cfg)?,
        Suite::Writhe => writhe(cfg)?,
        Suite::Gluing => gluing(cfg)?,
        Suite::Degree => degree(cfg)?,
        Suite::AppendixA => appendix_a(cfg)?,
        Suite::AppendixB => appendix_b(cfg)?,
        Suite::Chain => chain(cfg)?,
    };
    let passed = records.iter().filter(|r| r.pass).count();
    Ok(Report {
        suite: cfg.suite,
        seed: cfg.seed,
        trials: cfg.trials,
        n_range: cfg.range(),
        m: cfg.m,
        backend: cfg.backend,
        tolerance: cfg.tol,
        passed,
        failed: records.len() - passed,
        records,
    })
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

/// The prototypical gluing configuration, before and after a random change of trivialization.
fn indices(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>, CliError> {
    let range = cfg.range();
    (0..cfg.trials)
        .map(|t| {
            let n = range.cycle(t);
            let twist: i64 = trial_rng(cfg.seed, t).gen_range(-5..=5);
            let proto = prototypical_gluing(n as u32).map_err(usage)?;
            let idx = gluing_indices(&proto).map_err(usage)?;
            let c = (n * (n - 1) / 2) as i64;
            let n = n as i64;
            let mut pass = idx.top_ind == 1
                && idx.top_ech == 1 + c
                && idx.top_slack == 0
                && idx.cover_ind == 2 * n - 4
                && (idx.glued_ind, idx.glued_ech) == (2 * n - 3, 1 + c);
            let mut twisted = Vec::new();
            for curve in [&proto.top, &proto.cover, &proto.glued] {
                let moved = retrivialize(curve, "beta", twist).map_err(usage)?;
                let before = (ech_calculus::orbit_calculus::fredholm_index(curve), ech_calculus::orbit_calculus::ech_index(curve));
                let after = (ech_calculus::orbit_calculus::fredholm_index(&moved), ech_calculus::orbit_calculus::ech_index(&moved));
                pass &= before == after;
                twisted.push(json!({"ind": after.0.ok(), "ech": after.1.ok()}));
            }
            Ok(record(t, pass, json!({"n": n, "twist": twist}), json!({"indices": idx, "retrivialized": twisted})))
        })
        .collect()
}

fn kinds() -> [(HyperbolicKind, &'static str); 2] {
    [(HyperbolicKind::Positive, "positive"), (HyperbolicKind::Negative, "negative")]
}

/// Exhaustive over partitions of each `m` in the range: zero deficit iff the partition
/// conditions hold.
fn deficit(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>, CliError> {
    let mut out = Vec::new();
    for m in cfg.range().values() {
        let parts = integer_partitions(m as u32);
        for (kind, name) in kinds() {
            let mut mismatches = Vec::new();
            for q in &parts {
                let zero = deficit_at_orbit(kind, q).map_err(usage)? == 0;
                if zero != partition_check(kind, q).map_err(usage)? {
                    mismatches.push(q.clone());
                }
            }
            out.push(record(
                out.len(),
                mismatches.is_empty(),
                json!({"kind": name, "m": m}),
                json!({"partitions": parts.len(), "mismatches": mismatches}),
            ));
        }
    }
    Ok(out)
}

fn writhe(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>, CliError> {
    let mut out = Vec::new();
    for m in cfg.range().values() {
        let parts = integer_partitions(m as u32);
        let mut failures = Vec::new();
        let mut unexplained = Vec::new();
        for q in &parts {
            if !writhe_identity_check(m as u32, q).map_err(usage)? {
                let (lhs, rhs) = writhe_identity_sides(m as u32, q).map_err(usage)?;
                if lhs - rhs != odd_pair_excess(q) {
                    unexplained.push(q.clone());
                }
                failures.push(json!({"q": q, "lhs": lhs, "rhs": rhs}));
            }
        }
        out.push(record(
            out.len(),
            failures.is_empty(),
            json!({"m": m}),
            json!({"partitions": parts.len(), "failures": failures, "not_explained_by_odd_pair_excess": unexplained}),
        ));
    }
    Ok(out)
}

fn float_cfg(c: &CoverConfig<GaussRat>) -> Result<CoverConfig<Complex64>, CliError> {
    let f = |v: &[GaussRat]| v.iter().map(Scalar::to_c64).collect::<Vec<_>>();
    CoverConfig::new(f(&c.p), f(&c.q), 0.0, 0.0, c.scale().to_c64(), Complex64::new(1.0, 0.0)).map_err(usage)
}

/// Model existence, vanishing of the linearized section and nullspace membership agree.
/// Even trials are projected onto `Z_m`, odd ones are generic.
fn gluing(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>, CliError> {
    let range = cfg.range();
    let tol = Tolerance::with_rel(cfg.tol);
    (0..cfg.trials)
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let n = range.cycle(t);
            let m = cfg.m.unwrap_or(1 + t % 3);
            let cover = sample::cover_config(&mut rng, n);
            let mut asym = sample::asymptotic(&mut rng, n, m);
            let projected = t % 2 == 0;
            if projected {
                asym = project_to_zero_set(&cover, &asym, m)?;
            }
            let inputs = json!({
                "n": n, "m": m, "projected": projected,
                "p": strs(&cover.p), "q": strs(&cover.q), "w": cover.scale().to_string(),
                "alpha": asym.alpha.iter().map(|r| strs(r)).collect::<Vec<_>>(),
            });
            let (pass, result) = match cfg.backend {
                Backend::Exact => {
                    let exists = order_m_model(&cover, &asym, m, &tol)?.exists;
                    let ns = nullspace_equivalence_check(&cover, &asym, m).map_err(usage)?;
                    let mut pass = exists == ns.section_vanishes && ns.equivalent() && (!projected || exists);
                    let mut closed_forms = None;
                    if projected && m == 1 {
                        let alpha1 = asym.alpha1();
                        let agree = mev_reduced_closed(&cover, &alpha1) == mev_reduced_direct(&cover, &alpha1);
                        pass &= agree;
                        closed_forms = Some(agree);
                    }
                    (pass, json!({"model_exists": exists, "section_vanishes": ns.section_vanishes,
                                  "in_nullspace": ns.in_nullspace, "closed_forms_agree": closed_forms}))
                }
                Backend::Float => {
                    let fc = float_cfg(&cover)?;
                    let fa = AsymptoticData {
                        alpha: asym.alpha.iter().map(|r| r.iter().map(Scalar::to_c64).collect()).collect(),
                        d: None,
                    };
                    let exists = order_m_model(&fc, &fa, m, &tol)?.exists;
                    let section = linearized_section(&fc, &fa, m)?;
                    let size = section.iter().map(|v| v.norm()).fold(0.0, f64::max);
                    let scale = fa.alpha.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max) * fc.scale().norm();
                    let vanishes = size <= cfg.tol * scale.max(1.0);
                    (exists == vanishes && (!projected || exists), json!({"model_exists": exists, "section_max": size, "section_vanishes": vanishes}))
                }
            };
            Ok(record(t, pass, inputs, result))
        })
        .collect()
}

/// Random admissible restrictions: one solution mod 2, each re-verified.
fn degree(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>, CliError> {
    let range = cfg.range();
    (0..cfg.trials)
        .map(|t| {
            let n = range.cycle(t);
            let problem = sample::restriction_problem(&mut trial_rng(cfg.seed, t), n, 2.0);
            let sol = solve_restriction(&problem, &SolveOptions::default())?;
            let worst = sol.roots.iter().map(|r| r.residual).fold(0.0, f64::max);
            let pass = sol.parity == 1 && worst <= cfg.tol;
            let inputs = json!({
                "n": n, "c": strs(&problem.c), "alpha": strs(&problem.alpha1),
                "p_last": strs(&[problem.p_last.0.clone(), problem.p_last.1.clone()]), "T": problem.t,
            });
            Ok(record(t, pass, inputs, json!({"parity": sol.parity, "roots": sol.roots.len(), "max_residual": worst})))
        })
        .collect()
}

fn appendix_a(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>, CliError> {
    let range = cfg.range();
    (0..cfg.trials)
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let n = range.cycle(t);
            let m = cfg.m.unwrap_or(1 + t % 3);
            let cover = sample::cover_config(&mut rng, n);
            let rep = verify_row_reduction(&cover, m).map_err(usage)?;
            Ok(record(t, rep.holds(), json!({"n": n, "m": m, "p": strs(&cover.p), "q": strs(&cover.q)}), json!(rep)))
        })
        .collect()
}

fn appendix_b(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>, CliError> {
    let range = cfg.range();
    (0..cfg.trials)
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let n = range.cycle(t);
            let (p, alpha) = sample::z1_point(&mut rng, n);
            let mut failures = Vec::new();
            for ell in 0..n {
                if !det_prep_check(&p, ell).map_err(usage)?.holds() {
                    failures.push(json!({"check": "prep", "ell": ell}));
                }
                if !det_reduction_check(&p, &alpha, ell).map_err(usage)?.holds() {
                    failures.push(json!({"check": "reduction", "ell": ell}));
                }
            }
            Ok(record(t, failures.is_empty(), json!({"n": n, "p": strs(&p), "alpha": strs(&alpha)}), json!({"failures": failures})))
        })
        .collect()
}

/// With a fixture: verify it. Without one: random filtered complexes, comparing the sparse
/// `∂²` check with a dense matrix square.
fn chain(cfg: &SuiteConfig) -> Result<Vec<TrialRecord>, CliError> {
    if let Some(path) = &cfg.fixture {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let fixture = load_fixture(&text).map_err(usage)?;
        let rep = verify_fixture(&fixture);
        return Ok(vec![record(0, rep.holds(), json!({"fixture": path.display().to_string()}), json!(rep))]);
    }
    let range = cfg.range();
    (0..cfg.trials)
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let k = range.cycle(t);
            let mut pairs = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    if rng.gen_bool(0.4) {
                        pairs.push([i, j]);
                    }
                }
            }
            let generators = (0..k)
                .map(|i| Generator { orbits: ech_calculus::orbit_calculus::OrbitSet::empty(), action: (k - i) as f64 })
                .collect();
            let complex = ChainComplexData::new(generators, None, table_from_pairs(&pairs)).map_err(usage)?;
            let sparse = verify_complex(&complex).square_violations;
            let mut dense = vec![vec![0u8; k]; k];
            for &[i, j] in &pairs {
                dense[i][j] ^= 1;
            }
            let mut brute = Vec::new();
            for i in 0..k {
                for c in 0..k {
                    if (0..k).fold(0, |acc, j| acc ^ (dense[i][j] & dense[j][c])) == 1 {
                        brute.push((i, c));
                    }
                }
            }
            Ok(record(t, sparse == brute, json!({"generators": k, "diff": pairs}), json!({"square_violations": sparse})))
        })
        .collect()
}
