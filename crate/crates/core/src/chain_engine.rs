//! Filtered `Z/2` chain complexes built from supplied curve counts, cobordism maps,
//! and the combinatorial checks on two-level buildings.
//!
//! Counts are inputs. The engine checks their algebraic consequences: admissibility,
//! the action filtration, `∂² = 0` and the chain-map identity.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::ChainError;
use crate::gluing_model::{solve_restriction, RestrictionProblem, SolveOptions};
use crate::orbit_calculus::{OrbitKind, OrbitSet, ReebOrbitSpec};

pub const MAX_GENERATORS: usize = 1 << 16;

/// Mod-2 chain: the set of generators with coefficient one.
pub type Chain = BTreeSet<usize>;

/// Sparse mod-2 matrix: `(i, j)` present means `⟨∂ g_i, g_j⟩ = 1`.
pub type CountTable = BTreeSet<(usize, usize)>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Generator {
    pub orbits: OrbitSet,
    pub action: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainComplexData {
    pub generators: Vec<Generator>,
    pub action_bound: Option<f64>,
    pub diff: CountTable,
}

/// Reduces a list of pairs mod 2: pairs listed twice cancel.
pub fn table_from_pairs(pairs: &[[usize; 2]]) -> CountTable {
    let mut t = CountTable::new();
    for &[i, j] in pairs {
        if !t.remove(&(i, j)) {
            t.insert((i, j));
        }
    }
    t
}

fn rows(table: &CountTable, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for &(i, j) in table {
        out[i].push(j);
    }
    out
}

fn toggle(chain: &mut Chain, j: usize) {
    if !chain.remove(&j) {
        chain.insert(j);
    }
}

fn apply(rows: &[Vec<usize>], chain: &Chain) -> Chain {
    let mut out = Chain::new();
    for &i in chain {
        for &j in &rows[i] {
            toggle(&mut out, j);
        }
    }
    out
}

impl ChainComplexData {
    pub fn new(generators: Vec<Generator>, action_bound: Option<f64>, diff: CountTable) -> Result<Self, ChainError> {
        let n = generators.len();
        if n > MAX_GENERATORS {
            return Err(ChainError::TooManyGenerators(n));
        }
        if let Some(l) = action_bound {
            if !(l > 0.0 && l.is_finite()) {
                return Err(ChainError::Schema(format!("action bound must be positive, got {l}")));
            }
        }
        if let Some(&(i, j)) = diff.iter().find(|(i, j)| *i >= n || *j >= n) {
            return Err(ChainError::UnknownGenerator(i.max(j)));
        }
        Ok(ChainComplexData { generators, action_bound, diff })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn boundary(&self, chain: &Chain) -> Chain {
        apply(&rows(&self.diff, self.len()), chain)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComplexReport {
    pub inadmissible: Vec<usize>,
    pub above_bound: Vec<usize>,
    /// Generators whose stated action differs from the sum over their orbits.
    pub action_mismatch: Vec<usize>,
    /// Differential entries that do not decrease action.
    pub filtration_violations: Vec<(usize, usize)>,
    /// `(i, k)` with `⟨∂² g_i, g_k⟩ = 1`.
    pub square_violations: Vec<(usize, usize)>,
}

impl ComplexReport {
    pub fn holds(&self) -> bool {
        self.inadmissible.is_empty()
            && self.above_bound.is_empty()
            && self.action_mismatch.is_empty()
            && self.filtration_violations.is_empty()
            && self.square_violations.is_empty()
    }
}

fn action_matches(g: &Generator) -> bool {
    g.orbits.entries.is_empty() || (g.orbits.action() - g.action).abs() <= 1e-9 * g.action.abs().max(1.0)
}

pub fn verify_complex(c: &ChainComplexData) -> ComplexReport {
    let n = c.len();
    let mut report = ComplexReport::default();
    for (i, g) in c.generators.iter().enumerate() {
        if !g.orbits.is_ech_generator() {
            report.inadmissible.push(i);
        }
        if c.action_bound.is_some_and(|l| g.action >= l) {
            report.above_bound.push(i);
        }
        if !action_matches(g) {
            report.action_mismatch.push(i);
        }
    }
    report.filtration_violations = c
        .diff
        .iter()
        .filter(|(i, j)| c.generators[*j].action >= c.generators[*i].action)
        .copied()
        .collect();
    let r = rows(&c.diff, n);
    for i in 0..n {
        let sq = apply(&r, &apply(&r, &Chain::from([i])));
        report.square_violations.extend(sq.into_iter().map(|k| (i, k)));
    }
    report
}

/// Rank of a sparse mod-2 matrix given by rows.
fn z2_rank(mut rows: Vec<Chain>) -> usize {
    let mut pivots: BTreeMap<usize, Chain> = BTreeMap::new();
    let mut rank = 0;
    for row in rows.iter_mut() {
        while let Some(&lead) = row.iter().next() {
            match pivots.get(&lead) {
                Some(p) => {
                    for &j in p {
                        toggle(row, j);
                    }
                }
                None => {
                    pivots.insert(lead, std::mem::take(row));
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// `dim H_*(C; Z/2) = #generators − 2 rank ∂`; `None` unless `∂² = 0`.
pub fn z2_homology_rank(c: &ChainComplexData) -> Option<usize> {
    if !verify_complex(c).square_violations.is_empty() {
        return None;
    }
    let r = rows(&c.diff, c.len());
    let rank = z2_rank(r.into_iter().map(|v| v.into_iter().collect()).collect());
    Some(c.len() - 2 * rank)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CobordismData {
    pub source: ChainComplexData,
    pub target: ChainComplexData,
    pub direct: CountTable,
    pub building: CountTable,
}

impl CobordismData {
    pub fn new(source: ChainComplexData, target: ChainComplexData, direct: CountTable, building: CountTable) -> Result<Self, ChainError> {
        for &(i, j) in direct.iter().chain(&building) {
            if i >= source.len() {
                return Err(ChainError::UnknownGenerator(i));
            }
            if j >= target.len() {
                return Err(ChainError::UnknownGenerator(j));
            }
        }
        Ok(CobordismData { source, target, direct, building })
    }

    fn map_rows(&self) -> Vec<Vec<usize>> {
        let mut sum = self.direct.clone();
        for &e in &self.building {
            if !sum.remove(&e) {
                sum.insert(e);
            }
        }
        sum.retain(|&(i, j)| self.target.generators[j].action < self.source.generators[i].action);
        rows(&sum, self.source.len())
    }

    /// Count entries that do not decrease action; [`cobordism_apply`] drops them.
    pub fn filtration_violations(&self) -> Vec<(usize, usize)> {
        self.direct
            .iter()
            .chain(&self.building)
            .filter(|(i, j)| self.target.generators[*j].action >= self.source.generators[*i].action)
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

/// `Φ(g) = Σ [direct + building](g, h) · h` over targets of smaller action.
pub fn cobordism_apply(d: &CobordismData, generator: usize) -> Result<Chain, ChainError> {
    if generator >= d.source.len() {
        return Err(ChainError::UnknownGenerator(generator));
    }
    Ok(d.map_rows()[generator].iter().fold(Chain::new(), |mut acc, &j| {
        toggle(&mut acc, j);
        acc
    }))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChainMapReport {
    /// `(i, k)` with `⟨(∂Φ + Φ∂) g_i, h_k⟩ = 1`.
    pub violations: Vec<(usize, usize)>,
    pub filtration_violations: Vec<(usize, usize)>,
}

impl ChainMapReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.filtration_violations.is_empty()
    }
}

pub fn chain_map_check(d: &CobordismData) -> ChainMapReport {
    let phi = d.map_rows();
    let ds = rows(&d.source.diff, d.source.len());
    let dt = rows(&d.target.diff, d.target.len());
    let mut violations = Vec::new();
    for i in 0..d.source.len() {
        let g = Chain::from([i]);
        let left = apply(&dt, &apply(&phi, &g));
        let right = apply(&phi, &apply(&ds, &g));
        violations.extend(left.symmetric_difference(&right).map(|&k| (i, k)));
    }
    ChainMapReport { violations, filtration_violations: d.filtration_violations() }
}

/// Pairs on which two building tables give different maps. Agreement on data is a
/// consistency check on the supplied tables, not a proof of independence.
pub fn compare_building_tables(d: &CobordismData, alternative: &CountTable) -> Vec<(usize, usize)> {
    let other = CobordismData { building: alternative.clone(), ..d.clone() };
    let (a, b) = (d.map_rows(), other.map_rows());
    let mut out = Vec::new();
    for i in 0..d.source.len() {
        let sa: BTreeSet<_> = a[i].iter().collect();
        let sb: BTreeSet<_> = b[i].iter().collect();
        out.extend(sa.symmetric_difference(&sb).map(|&&k| (i, k)));
    }
    out
}

/// Ends and index data of one level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelData {
    /// Positive end multiplicities, per orbit.
    pub positive: BTreeMap<String, Vec<u32>>,
    /// Negative end multiplicities, per orbit.
    pub negative: BTreeMap<String, Vec<u32>>,
    pub ind: i64,
    pub ech: i64,
}

fn totals(partitions: &BTreeMap<String, Vec<u32>>) -> BTreeMap<String, u32> {
    partitions.iter().map(|(k, v)| (k.clone(), v.iter().sum())).filter(|(_, m)| *m > 0).collect()
}

fn sorted(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// A candidate `(u_0, [u])`: `u` in the symplectization on top, `u_0` in the cobordism.
#[derive(Clone, Debug, PartialEq)]
pub struct BuildingCandidate {
    pub orbits: BTreeMap<String, ReebOrbitSpec>,
    pub alpha: BTreeMap<String, u32>,
    pub beta: BTreeMap<String, u32>,
    pub intermediate: BTreeMap<String, u32>,
    pub top: LevelData,
    pub bottom: LevelData,
    /// `(γ_j, m_j)`.
    pub exceptional: Vec<(String, u32)>,
    /// Restriction data for the single-orbit model, used for the last condition.
    pub restriction: Option<RestrictionProblem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildingReport {
    pub orbit_sets: bool,
    pub intermediate: bool,
    pub partitions: bool,
    pub bottom_indices: bool,
    pub top_indices: bool,
    /// `None` when no model data applies.
    pub restriction: Option<bool>,
    /// No exceptional orbits: the candidate is an ordinary matched pair.
    pub degenerate: bool,
    /// Some `m_j = 2`, where there is no evaluation map.
    pub no_evaluation_map: bool,
    pub notes: Vec<String>,
}

impl BuildingReport {
    pub fn holds(&self) -> bool {
        self.orbit_sets
            && self.intermediate
            && self.partitions
            && self.bottom_indices
            && self.top_indices
            && self.restriction != Some(false)
    }
}

fn binom2(m: u32) -> i64 {
    let m = m as i64;
    m * (m - 1) / 2
}

pub fn ech_building_check(b: &BuildingCandidate) -> BuildingReport {
    let mut notes = Vec::new();
    let orbit_sets = totals(&b.top.positive) == b.alpha && totals(&b.bottom.negative) == b.beta;
    let intermediate = totals(&b.top.negative) == b.intermediate && totals(&b.bottom.positive) == b.intermediate;

    let exc: BTreeMap<&str, u32> = b.exceptional.iter().map(|(k, m)| (k.as_str(), *m)).collect();
    let mut partitions = exc.len() == b.exceptional.len();
    let keys: BTreeSet<&String> = b.top.negative.keys().chain(b.bottom.positive.keys()).collect();
    for key in keys {
        let top = sorted(b.top.negative.get(key).map_or(&[][..], Vec::as_slice));
        let bottom = sorted(b.bottom.positive.get(key).map_or(&[][..], Vec::as_slice));
        match exc.get(key.as_str()) {
            None => partitions &= top == bottom,
            Some(&m) => {
                let negative_hyperbolic = b
                    .orbits
                    .get(key)
                    .is_some_and(|o| o.kind == OrbitKind::NegativeHyperbolic);
                if !negative_hyperbolic {
                    notes.push(format!("{key} is not a known negative hyperbolic orbit"));
                }
                let mut pattern = vec![3];
                pattern.extend(std::iter::repeat_n(1, m.saturating_sub(3) as usize));
                let ok = negative_hyperbolic
                    && m >= 3
                    && b.intermediate.get(key) == Some(&m)
                    && top == pattern
                    && bottom == vec![1; m as usize];
                partitions &= ok;
            }
        }
    }
    for (key, _) in &b.exceptional {
        if !b.top.negative.contains_key(key) {
            notes.push(format!("exceptional orbit {key} has no ends"));
            partitions = false;
        }
    }

    let sum_binom: i64 = b.exceptional.iter().map(|(_, m)| binom2(*m)).sum();
    let sum_ind: i64 = b.exceptional.iter().map(|(_, m)| 2 * *m as i64 - 4).sum();
    let bottom_indices = b.bottom.ind == 0 && b.bottom.ech == -sum_binom;
    let top_indices = b.top.ind == sum_ind && b.top.ech == -b.bottom.ech;

    let no_evaluation_map = b.exceptional.iter().any(|(_, m)| *m == 2);
    let degenerate = b.exceptional.is_empty();
    let restriction = match (&b.restriction, b.exceptional.as_slice()) {
        (None, _) => None,
        (Some(_), _) if no_evaluation_map => {
            notes.push("multiplicity 2: no evaluation map, restriction not evaluated".into());
            None
        }
        (Some(p), [(_, m)]) if p.c.len() + 2 == *m as usize => match solve_restriction(p, &SolveOptions::default()) {
            Ok(sol) => Some(sol.parity == 1 && sol.roots.iter().all(|r| r.residual <= 1e-9)),
            Err(e) => {
                notes.push(format!("restriction: {e}"));
                Some(false)
            }
        },
        (Some(_), [_]) => {
            notes.push("restriction length does not match m - 2".into());
            Some(false)
        }
        (Some(_), _) => {
            notes.push("restriction model covers a single exceptional orbit".into());
            None
        }
    };
    BuildingReport {
        orbit_sets,
        intermediate,
        partitions,
        bottom_indices,
        top_indices,
        restriction,
        degenerate,
        no_evaluation_map,
        notes,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuildingShape {
    /// `u_0 ∪ [u_1]`: the symplectization level on top.
    Upper,
    /// `[u_{−1}] ∪ u_0`.
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub ind: i64,
    pub ech: i64,
    pub somewhere_injective: bool,
    /// Negative end multiplicities per orbit.
    #[serde(default)]
    pub negative_ends: BTreeMap<String, Vec<u32>>,
    /// Unbranched degenerate covers of planes: orbit of the positive end and degree.
    #[serde(default)]
    pub degenerate_covers: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelBuilding {
    pub shape: BuildingShape,
    pub intermediate: BTreeMap<String, u32>,
    pub kinds: BTreeMap<String, OrbitKind>,
    pub u0: LevelSummary,
    pub u1: LevelSummary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegenerationClass {
    CancelingPairClass,
    ExceptionalClass,
    EchGeneratorClass,
}

pub fn degeneration_classify(b: &TwoLevelBuilding) -> Result<DegenerationClass, ChainError> {
    if b.u0.ind != 0 || b.u1.ind != 1 {
        return Err(ChainError::InvalidBuilding(format!(
            "need ind(u_0) = 0 and ind(u_1) = 1, got {} and {}",
            b.u0.ind, b.u1.ind
        )));
    }
    for id in b.intermediate.keys() {
        if !b.kinds.contains_key(id) {
            return Err(ChainError::InvalidBuilding(format!("unknown orbit {id}")));
        }
    }
    let generator = b
        .intermediate
        .iter()
        .all(|(id, m)| *m == 1 || b.kinds[id] == OrbitKind::Elliptic);
    if generator {
        if b.u0.ech != 0 || b.u1.ech != 1 {
            return Err(ChainError::InvalidBuilding(format!(
                "intermediate set is a generator but I(u_0) = {}, I(u_1) = {}",
                b.u0.ech, b.u1.ech
            )));
        }
        return Ok(DegenerationClass::EchGeneratorClass);
    }
    let special: BTreeMap<&String, u32> = b.intermediate.iter().filter(|(_, m)| **m > 1).map(|(k, m)| (k, *m)).collect();
    let exceptional = b.shape == BuildingShape::Upper
        && b.u1.somewhere_injective
        && !b.u0.somewhere_injective
        && b.u1.ech > 1
        && b.u0.ech < 0
        && special.keys().all(|id| b.kinds[*id] == OrbitKind::NegativeHyperbolic)
        && special
            .iter()
            .all(|(id, m)| b.u1.negative_ends.get(*id).is_some_and(|v| v.len() == *m as usize && v.iter().all(|&q| q == 1)))
        && b.u0.degenerate_covers.len() == special.len()
        && special.iter().all(|(id, m)| b.u0.degenerate_covers.get(*id) == Some(m));
    Ok(if exceptional { DegenerationClass::ExceptionalClass } else { DegenerationClass::CancelingPairClass })
}

// JSON fixtures.

#[derive(Clone, Debug, Deserialize)]
struct GeneratorDoc {
    #[serde(default)]
    orbits: BTreeMap<String, u32>,
    action: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
struct ComplexDoc {
    generators: Vec<GeneratorDoc>,
    #[serde(default, rename = "L")]
    action_bound: Option<f64>,
    #[serde(default)]
    diff: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Deserialize)]
struct CobordismDoc {
    target: Option<ComplexDoc>,
    #[serde(default)]
    direct: Vec<[usize; 2]>,
    #[serde(default)]
    building: Vec<[usize; 2]>,
    building_alt: Option<Vec<[usize; 2]>>,
}

/// Expected verdicts stored alongside a fixture.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
pub struct Expectation {
    pub complex_ok: Option<bool>,
    pub target_ok: Option<bool>,
    pub chain_map_ok: Option<bool>,
    pub tables_agree: Option<bool>,
    #[serde(default)]
    pub square_violations: Vec<(usize, usize)>,
    #[serde(default)]
    pub chain_map_violations: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Deserialize)]
struct FixtureDoc {
    #[serde(default)]
    orbits: BTreeMap<String, ReebOrbitSpec>,
    #[serde(flatten)]
    complex: ComplexDoc,
    cobordism: Option<CobordismDoc>,
    #[serde(default)]
    expect: Expectation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub complex: ChainComplexData,
    pub cobordism: Option<CobordismData>,
    pub building_alt: Option<CountTable>,
    pub expect: Expectation,
}

fn build_complex(doc: ComplexDoc, table: &BTreeMap<String, ReebOrbitSpec>) -> Result<ChainComplexData, ChainError> {
    let generators = doc
        .generators
        .into_iter()
        .map(|g| {
            let entries = g
                .orbits
                .iter()
                .map(|(id, m)| {
                    let mut o = table
                        .get(id)
                        .cloned()
                        .ok_or_else(|| ChainError::Schema(format!("orbit {id} is not in the orbit table")))?;
                    o.id = id.clone();
                    Ok((o, *m))
                })
                .collect::<Result<Vec<_>, ChainError>>()?;
            let orbits = OrbitSet::new(entries)?;
            let action = match g.action {
                Some(a) => a,
                None if !orbits.entries.is_empty() => orbits.action(),
                None => return Err(ChainError::Schema("generator without orbits needs an action".into())),
            };
            Ok(Generator { orbits, action })
        })
        .collect::<Result<Vec<_>, ChainError>>()?;
    ChainComplexData::new(generators, doc.action_bound, table_from_pairs(&doc.diff))
}

/// Fixture layout: `{orbits?, generators: [{orbits: {id: mult}, action?}], L?, diff: [[i, j]],
/// cobordism?: {target?, direct, building, building_alt?}, expect?}`. Without a target the
/// cobordism maps the complex to itself.
pub fn load_fixture(text: &str) -> Result<Fixture, ChainError> {
    let doc: FixtureDoc = serde_json::from_str(text).map_err(|e| ChainError::Schema(e.to_string()))?;
    let complex = build_complex(doc.complex, &doc.orbits)?;
    let (cobordism, building_alt) = match doc.cobordism {
        None => (None, None),
        Some(c) => {
            let target = match c.target {
                Some(t) => build_complex(t, &doc.orbits)?,
                None => complex.clone(),
            };
            let alt = c.building_alt.as_deref().map(table_from_pairs);
            let d = CobordismData::new(complex.clone(), target, table_from_pairs(&c.direct), table_from_pairs(&c.building))?;
            if let Some(&(i, j)) = alt.iter().flatten().find(|(i, j)| *i >= d.source.len() || *j >= d.target.len()) {
                return Err(ChainError::UnknownGenerator(i.max(j)));
            }
            (Some(d), alt)
        }
    };
    Ok(Fixture { complex, cobordism, building_alt, expect: doc.expect })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureReport {
    pub complex: ComplexReport,
    pub homology_rank: Option<usize>,
    pub target: Option<ComplexReport>,
    pub chain_map: Option<ChainMapReport>,
    pub table_differences: Option<Vec<(usize, usize)>>,
}

impl FixtureReport {
    pub fn holds(&self) -> bool {
        self.complex.holds()
            && self.target.as_ref().is_none_or(ComplexReport::holds)
            && self.chain_map.as_ref().is_none_or(ChainMapReport::holds)
            && self.table_differences.as_ref().is_none_or(Vec::is_empty)
    }

    /// Whether every verdict recorded in the expectation is reproduced.
    pub fn matches(&self, e: &Expectation) -> bool {
        let flag = |want: Option<bool>, got: Option<bool>| want.is_none() || want == got;
        flag(e.complex_ok, Some(self.complex.holds()))
            && flag(e.target_ok, self.target.as_ref().map(ComplexReport::holds))
            && flag(e.chain_map_ok, self.chain_map.as_ref().map(ChainMapReport::holds))
            && flag(e.tables_agree, self.table_differences.as_ref().map(Vec::is_empty))
            && (e.square_violations.is_empty() || e.square_violations == self.complex.square_violations)
            && (e.chain_map_violations.is_empty()
                || self.chain_map.as_ref().is_some_and(|r| r.violations == e.chain_map_violations))
    }
}

pub fn verify_fixture(f: &Fixture) -> FixtureReport {
    let complex = verify_complex(&f.complex);
    FixtureReport {
        homology_rank: z2_homology_rank(&f.complex),
        complex,
        target: f.cobordism.as_ref().map(|d| verify_complex(&d.target)),
        chain_map: f.cobordism.as_ref().map(chain_map_check),
        table_differences: match (&f.cobordism, &f.building_alt) {
            (Some(d), Some(alt)) => Some(compare_building_tables(d, alt)),
            _ => None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    fn bare(actions: &[f64], diff: &[[usize; 2]]) -> ChainComplexData {
        let generators = actions.iter().map(|&a| Generator { orbits: OrbitSet::empty(), action: a }).collect();
        ChainComplexData::new(generators, None, table_from_pairs(diff)).unwrap()
    }

    #[test]
    fn square_examples() {
        assert!(verify_complex(&bare(&[3.0, 2.0, 1.0], &[])).holds());
        let line = verify_complex(&bare(&[3.0, 2.0, 1.0], &[[0, 1], [1, 2]]));
        assert_eq!(line.square_violations, vec![(0, 2)]);
        let square = bare(&[4.0, 3.0, 2.5, 1.0], &[[0, 1], [0, 2], [1, 3], [2, 3]]);
        assert!(verify_complex(&square).holds());
        assert_eq!(z2_homology_rank(&square), Some(0));
    }

    #[test]
    fn duplicates_cancel() {
        assert!(table_from_pairs(&[[0, 1], [0, 1]]).is_empty());
    }

    #[test]
    fn filtration_and_admissibility() {
        let c = bare(&[1.0, 2.0], &[[0, 1]]);
        assert_eq!(verify_complex(&c).filtration_violations, vec![(0, 1)]);
        let o = ReebOrbitSpec::hyperbolic("h", 2, 1.0).unwrap();
        let g = Generator { orbits: OrbitSet::new(vec![(o, 2)]).unwrap(), action: 2.0 };
        let c = ChainComplexData::new(vec![g], Some(1.5), CountTable::new()).unwrap();
        let r = verify_complex(&c);
        assert_eq!((r.inadmissible.clone(), r.above_bound.clone()), (vec![0], vec![0]));
    }

    #[test]
    fn cobordism_examples() {
        let src = bare(&[5.0, 4.0], &[]);
        let tgt = bare(&[3.0, 2.0, 6.0], &[]);
        let zero = CobordismData::new(src.clone(), tgt.clone(), CountTable::new(), CountTable::new()).unwrap();
        assert!(cobordism_apply(&zero, 0).unwrap().is_empty());
        let both = CobordismData::new(src.clone(), tgt.clone(), table_from_pairs(&[[0, 0]]), table_from_pairs(&[[0, 0]])).unwrap();
        assert!(cobordism_apply(&both, 0).unwrap().is_empty());
        let mixed = CobordismData::new(src, tgt, table_from_pairs(&[[0, 0], [0, 1], [1, 1]]), table_from_pairs(&[[0, 1], [1, 0], [0, 2]])).unwrap();
        assert_eq!(cobordism_apply(&mixed, 0).unwrap(), Chain::from([0]));
        assert_eq!(cobordism_apply(&mixed, 1).unwrap(), Chain::from([0, 1]));
        assert!(cobordism_apply(&mixed, 2).is_err());
        assert_eq!(mixed.filtration_violations(), vec![(0, 2)]);
    }

    #[test]
    fn chain_map_two_by_two() {
        let src = bare(&[10.0, 9.0], &[[0, 1]]);
        let tgt = bare(&[8.0, 7.0], &[[0, 1]]);
        let good = CobordismData::new(src.clone(), tgt.clone(), table_from_pairs(&[[0, 0]]), table_from_pairs(&[[1, 1]])).unwrap();
        assert!(chain_map_check(&good).holds());
        let bad = CobordismData::new(src, tgt, table_from_pairs(&[[0, 0]]), CountTable::new()).unwrap();
        assert_eq!(chain_map_check(&bad).violations, vec![(0, 1)]);
    }

    fn building(m: u32, top_partition: Vec<u32>) -> BuildingCandidate {
        let gamma = ReebOrbitSpec::hyperbolic("gamma", 1, 1.0).unwrap();
        let a = ReebOrbitSpec::hyperbolic("a", 2, 9.0).unwrap();
        let b = ReebOrbitSpec::hyperbolic("b", 2, 0.5).unwrap();
        let mb = binom2(m);
        BuildingCandidate {
            orbits: [gamma, a, b].into_iter().map(|o| (o.id.clone(), o)).collect(),
            alpha: BTreeMap::from([("a".into(), 1)]),
            beta: BTreeMap::from([("b".into(), 1)]),
            intermediate: BTreeMap::from([("gamma".into(), m)]),
            top: LevelData {
                positive: BTreeMap::from([("a".into(), vec![1])]),
                negative: BTreeMap::from([("gamma".into(), top_partition)]),
                ind: 2 * m as i64 - 4,
                ech: mb,
            },
            bottom: LevelData {
                positive: BTreeMap::from([("gamma".into(), vec![1; m as usize])]),
                negative: BTreeMap::from([("b".into(), vec![1])]),
                ind: 0,
                ech: -mb,
            },
            exceptional: vec![("gamma".into(), m)],
            restriction: None,
        }
    }

    #[test]
    fn building_examples() {
        let ok = building(3, vec![3]);
        assert_eq!((ok.bottom.ech, ok.top.ind, ok.top.ech), (-3, 2, 3));
        let r = ech_building_check(&ok);
        assert!(r.holds() && !r.degenerate && r.restriction.is_none(), "{r:?}");
        let bad = building(3, vec![2, 1]);
        assert!(!ech_building_check(&bad).partitions);
        let mut plain = building(3, vec![1, 1, 1]);
        plain.exceptional.clear();
        plain.top.ind = 0;
        plain.top.ech = 0;
        plain.bottom.ech = 0;
        let r = ech_building_check(&plain);
        assert!(r.holds() && r.degenerate);
    }

    #[test]
    fn building_with_restriction() {
        let g = |a: i64, b: i64| GaussRat::from_ints(a, b);
        let mut b = building(4, vec![3, 1]);
        b.restriction = Some(RestrictionProblem {
            c: vec![g(1, 0), g(2, 0)],
            alpha1: vec![g(1, 1), g(-2, 3), g(3, 0), g(4, -1)],
            p_last: (g(0, 0), g(1, 0)),
            t: 2.0,
        });
        assert_eq!(ech_building_check(&b).restriction, Some(true));
        let mut two = building(2, vec![2]);
        two.restriction = b.restriction.clone();
        let r = ech_building_check(&two);
        assert!(r.no_evaluation_map && r.restriction.is_none());
    }

    fn summary(ind: i64, ech: i64, si: bool) -> LevelSummary {
        LevelSummary { ind, ech, somewhere_injective: si, negative_ends: BTreeMap::new(), degenerate_covers: BTreeMap::new() }
    }

    #[test]
    fn classification_examples() {
        let kinds = BTreeMap::from([("g".to_string(), OrbitKind::NegativeHyperbolic), ("h".to_string(), OrbitKind::PositiveHyperbolic)]);
        let gen = TwoLevelBuilding {
            shape: BuildingShape::Upper,
            intermediate: BTreeMap::from([("g".into(), 1), ("h".into(), 1)]),
            kinds: kinds.clone(),
            u0: summary(0, 0, true),
            u1: summary(1, 1, true),
        };
        assert_eq!(degeneration_classify(&gen).unwrap(), DegenerationClass::EchGeneratorClass);

        let mut u0 = summary(0, -3, false);
        u0.degenerate_covers.insert("g".into(), 3);
        let mut u1 = summary(1, 4, true);
        u1.negative_ends.insert("g".into(), vec![1, 1, 1]);
        let exc = TwoLevelBuilding { intermediate: BTreeMap::from([("g".into(), 3)]), u0, u1, ..gen.clone() };
        assert_eq!(degeneration_classify(&exc).unwrap(), DegenerationClass::ExceptionalClass);
        let lower = TwoLevelBuilding { shape: BuildingShape::Lower, ..exc.clone() };
        assert_eq!(degeneration_classify(&lower).unwrap(), DegenerationClass::CancelingPairClass);

        let pos = TwoLevelBuilding {
            intermediate: BTreeMap::from([("h".into(), 2)]),
            u0: summary(0, -1, true),
            u1: summary(1, 2, true),
            ..gen.clone()
        };
        assert_eq!(degeneration_classify(&pos).unwrap(), DegenerationClass::CancelingPairClass);

        let broken = TwoLevelBuilding { u1: summary(2, 1, true), ..gen };
        assert!(degeneration_classify(&broken).is_err());
    }

    #[test]
    fn fixture_roundtrip() {
        let text = r#"{
            "orbits": {"x": {"kind": "positive_hyperbolic", "rotation": 0, "action": 2.0},
                       "y": {"kind": "negative_hyperbolic", "rotation": 1, "action": 1.0}},
            "generators": [{"orbits": {"x": 1, "y": 1}}, {"orbits": {"x": 1}}, {"orbits": {"y": 1}}, {"orbits": {}, "action": 0.5}],
            "L": 10,
            "diff": [[0, 1], [0, 2], [1, 3], [2, 3]],
            "cobordism": {"direct": [[0, 1], [1, 3], [2, 3]], "building": [[0, 2]]},
            "expect": {"complex_ok": true}
        }"#;
        let f = load_fixture(text).unwrap();
        assert_eq!(f.complex.generators[0].action, 3.0);
        let r = verify_fixture(&f);
        assert!(r.matches(&f.expect));
        assert!(load_fixture(r#"{"generators": [{"orbits": {"z": 1}}]}"#).is_err());
        assert!(matches!(load_fixture(r#"{"generators": [{"action": 1}], "diff": [[0, 4]]}"#), Err(ChainError::UnknownGenerator(4))));
    }
}
