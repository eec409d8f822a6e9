//! Index and partition calculus on combinatorial orbit and curve data.
//!
//! A trivialization is implicit in the stored rotation numbers. Changing it is
//! modelled by [`retrivialize`], which shifts the rotation together with the
//! relative Chern class and self-intersection so that both indices are unchanged.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::OrbitError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    PositiveHyperbolic,
    NegativeHyperbolic,
    Elliptic,
}

/// The two hyperbolic kinds; partition and deficit calculus only accept these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperbolicKind {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rotation {
    /// `n` with `μ(α^k) = kn`.
    Hyperbolic(i64),
    /// `θ ∈ (0,1)` with `μ(α^k) = 2⌊kθ⌋ + 1`.
    Elliptic(Ratio<i64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OrbitWire", into = "OrbitWire")]
pub struct ReebOrbitSpec {
    pub id: String,
    pub kind: OrbitKind,
    pub rotation: Rotation,
    pub action: f64,
}

impl ReebOrbitSpec {
    /// Hyperbolic orbit; the kind follows from the parity of `n`.
    pub fn hyperbolic(id: &str, n: i64, action: f64) -> Result<Self, OrbitError> {
        let kind = if n.rem_euclid(2) == 0 {
            OrbitKind::PositiveHyperbolic
        } else {
            OrbitKind::NegativeHyperbolic
        };
        ReebOrbitSpec::new(id, kind, Rotation::Hyperbolic(n), action)
    }

    pub fn elliptic(id: &str, theta: Ratio<i64>, action: f64) -> Result<Self, OrbitError> {
        ReebOrbitSpec::new(id, OrbitKind::Elliptic, Rotation::Elliptic(theta), action)
    }

    pub fn new(id: &str, kind: OrbitKind, rotation: Rotation, action: f64) -> Result<Self, OrbitError> {
        let invalid = |reason: &str| OrbitError::InvalidOrbit { id: id.to_string(), reason: reason.to_string() };
        if !(action.is_finite() && action > 0.0) {
            return Err(invalid("action must be positive"));
        }
        match (kind, rotation) {
            (OrbitKind::PositiveHyperbolic, Rotation::Hyperbolic(n)) if n.rem_euclid(2) == 0 => {}
            (OrbitKind::NegativeHyperbolic, Rotation::Hyperbolic(n)) if n.rem_euclid(2) == 1 => {}
            (OrbitKind::PositiveHyperbolic | OrbitKind::NegativeHyperbolic, Rotation::Hyperbolic(_)) => {
                return Err(invalid("rotation parity does not match hyperbolic kind"))
            }
            (OrbitKind::Elliptic, Rotation::Elliptic(t)) => {
                if *t.numer() <= 0 || t.numer() >= t.denom() {
                    return Err(invalid("elliptic rotation must lie in (0,1)"));
                }
            }
            _ => return Err(invalid("rotation type does not match kind")),
        }
        Ok(ReebOrbitSpec { id: id.to_string(), kind, rotation, action })
    }

    pub fn hyperbolic_kind(&self) -> Result<HyperbolicKind, OrbitError> {
        match self.kind {
            OrbitKind::PositiveHyperbolic => Ok(HyperbolicKind::Positive),
            OrbitKind::NegativeHyperbolic => Ok(HyperbolicKind::Negative),
            OrbitKind::Elliptic => Err(OrbitError::EllipticUnsupported(self.id.clone())),
        }
    }

    fn hyperbolic_rotation(&self) -> Result<i64, OrbitError> {
        match self.rotation {
            Rotation::Hyperbolic(n) => Ok(n),
            Rotation::Elliptic(_) => Err(OrbitError::EllipticUnsupported(self.id.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RotationWire {
    Int(i64),
    Ratio(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct OrbitWire {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    id: String,
    kind: OrbitKind,
    rotation: RotationWire,
    action: f64,
}

impl TryFrom<OrbitWire> for ReebOrbitSpec {
    type Error = OrbitError;
    fn try_from(w: OrbitWire) -> Result<Self, OrbitError> {
        let rotation = match w.rotation {
            RotationWire::Int(n) if w.kind != OrbitKind::Elliptic => Rotation::Hyperbolic(n),
            RotationWire::Int(n) => Rotation::Elliptic(Ratio::from_integer(n)),
            RotationWire::Ratio(txt) => {
                let bad = || OrbitError::InvalidOrbit { id: w.id.clone(), reason: format!("bad rotation `{txt}`") };
                match txt.split_once('/') {
                    Some((a, b)) => {
                        let a: i64 = a.trim().parse().map_err(|_| bad())?;
                        let b: i64 = b.trim().parse().map_err(|_| bad())?;
                        if b == 0 {
                            return Err(bad());
                        }
                        Rotation::Elliptic(Ratio::new(a, b))
                    }
                    None => Rotation::Hyperbolic(txt.trim().parse().map_err(|_| bad())?),
                }
            }
        };
        ReebOrbitSpec::new(&w.id, w.kind, rotation, w.action)
    }
}

impl From<ReebOrbitSpec> for OrbitWire {
    fn from(o: ReebOrbitSpec) -> Self {
        let rotation = match o.rotation {
            Rotation::Hyperbolic(n) => RotationWire::Int(n),
            Rotation::Elliptic(t) => RotationWire::Ratio(format!("{}/{}", t.numer(), t.denom())),
        };
        OrbitWire { id: o.id, kind: o.kind, rotation, action: o.action }
    }
}

/// Conley–Zehnder index of the `k`-fold cover; `k ≥ 1`.
pub fn cz_index(orbit: &ReebOrbitSpec, k: u32) -> i64 {
    debug_assert!(k >= 1);
    match orbit.rotation {
        Rotation::Hyperbolic(n) => n * k as i64,
        Rotation::Elliptic(theta) => 2 * (theta * k as i64).floor().to_integer() + 1,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSet {
    pub entries: Vec<(ReebOrbitSpec, u32)>,
}

impl OrbitSet {
    pub fn new(entries: Vec<(ReebOrbitSpec, u32)>) -> Result<Self, OrbitError> {
        let mut seen = std::collections::BTreeSet::new();
        for (o, m) in &entries {
            if *m == 0 {
                return Err(OrbitError::ZeroMultiplicity);
            }
            if !seen.insert(o.id.clone()) {
                return Err(OrbitError::DuplicateOrbit(o.id.clone()));
            }
        }
        Ok(OrbitSet { entries })
    }

    pub fn empty() -> Self {
        OrbitSet { entries: Vec::new() }
    }

    pub fn action(&self) -> f64 {
        self.entries.iter().map(|(o, m)| o.action * *m as f64).sum()
    }

    /// Multiplicity per orbit id, for order-free comparison.
    pub fn multiplicities(&self) -> BTreeMap<String, u32> {
        self.entries.iter().map(|(o, m)| (o.id.clone(), *m)).collect()
    }

    /// ECH generator condition: hyperbolic orbits appear with multiplicity one.
    pub fn is_ech_generator(&self) -> bool {
        self.entries
            .iter()
            .all(|(o, m)| o.kind == OrbitKind::Elliptic || *m == 1)
    }
}

/// `(μ, μ^I)` of an orbit set; elliptic entries are rejected.
pub fn cz_totals(set: &OrbitSet) -> Result<(i64, i64), OrbitError> {
    let mut mu = 0;
    let mut mu_i = 0;
    for (orbit, m) in &set.entries {
        orbit.hyperbolic_kind()?;
        mu += cz_index(orbit, *m);
        mu_i += (1..=*m).map(|j| cz_index(orbit, j)).sum::<i64>();
    }
    Ok((mu, mu_i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EndSpec {
    pub orbit: ReebOrbitSpec,
    pub multiplicity: u32,
    pub sign: Sign,
}

impl EndSpec {
    pub fn new(orbit: &ReebOrbitSpec, multiplicity: u32, sign: Sign) -> Self {
        EndSpec { orbit: orbit.clone(), multiplicity, sign }
    }
}

/// Combinatorial shadow of a punctured curve.
///
/// `components` counts connected components so that disjoint unions stay
/// representable: `χ = 2·components − 2·genus − #ends`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveWire", into = "CurveWire")]
pub struct CurveData {
    pub genus: u32,
    pub components: u32,
    pub ends: Vec<EndSpec>,
    pub rel_c1: i64,
    pub rel_q: i64,
    pub delta: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct EndWire {
    orbit: String,
    mult: u32,
    sign: Sign,
}

fn one() -> u32 {
    1
}

fn is_one(v: &u32) -> bool {
    *v == 1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CurveWire {
    orbits: BTreeMap<String, OrbitWire>,
    genus: u32,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    components: u32,
    ends: Vec<EndWire>,
    rel_c1: i64,
    #[serde(rename = "rel_Q")]
    rel_q: i64,
    delta: u32,
}

impl TryFrom<CurveWire> for CurveData {
    type Error = OrbitError;
    fn try_from(w: CurveWire) -> Result<Self, OrbitError> {
        let mut orbits = BTreeMap::new();
        for (id, mut o) in w.orbits {
            o.id = id.clone();
            orbits.insert(id, ReebOrbitSpec::try_from(o)?);
        }
        let ends = w
            .ends
            .into_iter()
            .map(|e| {
                let orbit = orbits.get(&e.orbit).ok_or_else(|| OrbitError::UnknownOrbit(e.orbit.clone()))?;
                Ok(EndSpec::new(orbit, e.mult, e.sign))
            })
            .collect::<Result<Vec<_>, OrbitError>>()?;
        CurveData::with_components(w.genus, w.components, ends, w.rel_c1, w.rel_q, w.delta)
    }
}

impl From<CurveData> for CurveWire {
    fn from(c: CurveData) -> Self {
        let mut orbits = BTreeMap::new();
        let mut ends = Vec::new();
        for e in c.ends {
            ends.push(EndWire { orbit: e.orbit.id.clone(), mult: e.multiplicity, sign: e.sign });
            let mut wire = OrbitWire::from(e.orbit);
            let id = std::mem::take(&mut wire.id);
            orbits.insert(id, wire);
        }
        CurveWire {
            orbits,
            genus: c.genus,
            components: c.components,
            ends,
            rel_c1: c.rel_c1,
            rel_q: c.rel_q,
            delta: c.delta,
        }
    }
}

impl CurveData {
    pub fn new(genus: u32, ends: Vec<EndSpec>, rel_c1: i64, rel_q: i64, delta: u32) -> Result<Self, OrbitError> {
        CurveData::with_components(genus, 1, ends, rel_c1, rel_q, delta)
    }

    pub fn with_components(
        genus: u32,
        components: u32,
        ends: Vec<EndSpec>,
        rel_c1: i64,
        rel_q: i64,
        delta: u32,
    ) -> Result<Self, OrbitError> {
        if ends.iter().any(|e| e.multiplicity == 0) {
            return Err(OrbitError::ZeroMultiplicity);
        }
        let mut by_id: BTreeMap<&str, &ReebOrbitSpec> = BTreeMap::new();
        for e in &ends {
            if let Some(prev) = by_id.insert(&e.orbit.id, &e.orbit) {
                if prev != &e.orbit {
                    return Err(OrbitError::InvalidOrbit {
                        id: e.orbit.id.clone(),
                        reason: "conflicting definitions".into(),
                    });
                }
            }
        }
        Ok(CurveData { genus, components: components.max(1), ends, rel_c1, rel_q, delta })
    }

    pub fn chi(&self) -> i64 {
        2 * self.components as i64 - 2 * self.genus as i64 - self.ends.len() as i64
    }

    /// Orbit set on the given side, merging ends at the same embedded orbit.
    pub fn orbit_set(&self, sign: Sign) -> OrbitSet {
        let mut acc: BTreeMap<String, (ReebOrbitSpec, u32)> = BTreeMap::new();
        for e in self.ends.iter().filter(|e| e.sign == sign) {
            acc.entry(e.orbit.id.clone())
                .or_insert_with(|| (e.orbit.clone(), 0))
                .1 += e.multiplicity;
        }
        OrbitSet { entries: acc.into_values().collect() }
    }

    /// Multiplicities of ends at each (orbit, sign), in input order.
    pub fn partitions(&self) -> BTreeMap<(String, Sign), (ReebOrbitSpec, Vec<u32>)> {
        let mut acc: BTreeMap<(String, Sign), (ReebOrbitSpec, Vec<u32>)> = BTreeMap::new();
        for e in &self.ends {
            acc.entry((e.orbit.id.clone(), e.sign))
                .or_insert_with(|| (e.orbit.clone(), Vec::new()))
                .1
                .push(e.multiplicity);
        }
        acc
    }

    fn reject_elliptic(&self) -> Result<(), OrbitError> {
        for e in &self.ends {
            e.orbit.hyperbolic_kind()?;
        }
        Ok(())
    }

    pub fn from_json(txt: &str) -> Result<Self, String> {
        serde_json::from_str(txt).map_err(|e| e.to_string())
    }
}

pub fn fredholm_index(curve: &CurveData) -> Result<i64, OrbitError> {
    curve.reject_elliptic()?;
    let mu: i64 = curve
        .ends
        .iter()
        .map(|e| {
            let v = cz_index(&e.orbit, e.multiplicity);
            if e.sign == Sign::Positive { v } else { -v }
        })
        .sum();
    Ok(-curve.chi() + 2 * curve.rel_c1 + mu)
}

pub fn ech_index(curve: &CurveData) -> Result<i64, OrbitError> {
    curve.reject_elliptic()?;
    let (_, plus) = cz_totals(&curve.orbit_set(Sign::Positive))?;
    let (_, minus) = cz_totals(&curve.orbit_set(Sign::Negative))?;
    Ok(curve.rel_c1 + curve.rel_q + plus - minus)
}

/// Fredholm index of a degree-`k` cover with `b` branch points over a curve of index `ind_v`.
pub fn cover_fredholm(ind_v: i64, k: u32, b: u32) -> i64 {
    k as i64 * ind_v + b as i64
}

fn binom2(d: i64) -> i64 {
    d * (d - 1) / 2
}

/// ECH index `−C(d,2)` of a `d`-fold cover of an embedded index-0 plane at a negative hyperbolic orbit.
pub fn degenerate_cover_index(d: u32) -> i64 {
    -binom2(d as i64)
}

/// Right-hand side of the multiple-cover inequality
/// `I(u) ≥ d·I(v) + C(d,2)(2g − 2 + ind(v) + h(v))`.
pub fn cover_index_lower_bound(ech_v: i64, d: u32, genus_v: u32, ind_v: i64, h_v: u32) -> i64 {
    d as i64 * ech_v + binom2(d as i64) * (2 * genus_v as i64 - 2 + ind_v + h_v as i64)
}

fn check_partition(mults: &[u32]) -> Result<(), OrbitError> {
    if mults.is_empty() {
        return Err(OrbitError::EmptyPartition);
    }
    if mults.contains(&0) {
        return Err(OrbitError::ZeroMultiplicity);
    }
    Ok(())
}

/// All partitions of `m`, each with parts in descending order.
pub fn integer_partitions(m: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=cap.min(rest)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        go(m, m, &mut Vec::new(), &mut out);
    }
    out
}

/// ECH partition conditions at a hyperbolic orbit.
pub fn partition_check(kind: HyperbolicKind, mults: &[u32]) -> Result<bool, OrbitError> {
    check_partition(mults)?;
    Ok(match kind {
        HyperbolicKind::Positive => mults.iter().all(|&q| q == 1),
        HyperbolicKind::Negative => {
            let total: u32 = mults.iter().sum();
            let ones = mults.iter().filter(|&&q| q == 1).count();
            let twos = mults.iter().filter(|&&q| q == 2).count();
            twos + ones == mults.len() && ones == (total % 2) as usize
        }
    })
}

/// Deficit at one orbit. Odd multiplicities are taken first, in descending order;
/// the result depends only on the multiset.
pub fn deficit_at_orbit(kind: HyperbolicKind, mults: &[u32]) -> Result<u64, OrbitError> {
    check_partition(mults)?;
    Ok(match kind {
        HyperbolicKind::Positive => mults.iter().map(|&q| q as u64 - 1).sum(),
        HyperbolicKind::Negative => {
            let mut odd: Vec<u64> = mults.iter().filter(|&&q| q % 2 == 1).map(|&q| q as u64).collect();
            odd.sort_unstable_by(|a, b| b.cmp(a));
            let odd_part: u64 = odd.iter().enumerate().map(|(i, q)| (q - 1) / 2 + i as u64).sum();
            let even_part: u64 = mults.iter().filter(|&&q| q % 2 == 0).map(|&q| q as u64 / 2 - 1).sum();
            odd_part + even_part
        }
    })
}

/// Sum of orbit deficits over both ends of the curve.
pub fn deficit_total(curve: &CurveData) -> Result<u64, OrbitError> {
    let mut total = 0;
    for (orbit, mults) in curve.partitions().values() {
        total += deficit_at_orbit(orbit.hyperbolic_kind()?, mults)?;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexInequality {
    pub holds: bool,
    pub slack: i64,
    pub ind: i64,
    pub ech: i64,
    pub deficit: u64,
}

/// Evaluates `I(u) − ind(u) − 2δ(u) − Δ(u)`; genericity of J has no combinatorial counterpart.
pub fn index_inequality_check(curve: &CurveData) -> Result<IndexInequality, OrbitError> {
    let ind = fredholm_index(curve)?;
    let ech = ech_index(curve)?;
    let deficit = deficit_total(curve)?;
    let slack = ech - ind - 2 * curve.delta as i64 - deficit as i64;
    Ok(IndexInequality { holds: slack >= 0, slack, ind, ech, deficit })
}

/// Relative adjunction formula `c1 = χ + Q + w − 2δ`.
pub fn adjunction_c1(chi: i64, q: i64, writhe: i64, delta: u32) -> i64 {
    chi + q + writhe - 2 * delta as i64
}

/// Both sides of the writhe identity at a negative hyperbolic orbit with `μ(β) = 1`.
pub fn writhe_identity_sides(m: u32, q: &[u32]) -> Result<(i64, i64), OrbitError> {
    check_partition(q)?;
    let total: u64 = q.iter().map(|&v| v as u64).sum();
    if total != m as u64 {
        return Err(OrbitError::PartitionSum { expected: m as u64, got: total });
    }
    let qs: Vec<i64> = q.iter().map(|&v| v as i64).collect();
    let rho: Vec<i64> = qs.iter().map(|v| (v + 1) / 2).collect();
    let mut lhs: i64 = qs.iter().zip(&rho).map(|(qi, ri)| ri * (qi - 1)).sum();
    for i in 0..qs.len() {
        for j in 0..qs.len() {
            if i != j {
                lhs += (qs[i] * rho[j]).min(qs[j] * rho[i]);
            }
        }
    }
    let m = m as i64;
    let mut odd: Vec<i64> = qs.iter().copied().filter(|v| v % 2 == 1).collect();
    odd.sort_unstable_by(|a, b| b.cmp(a));
    let odd_term: i64 = odd.iter().enumerate().map(|(i, v)| (v - 1) / 2 + i as i64).sum();
    let rhs = m * (m + 1) / 2 - qs.iter().sum::<i64>() + odd_term;
    Ok((lhs, rhs))
}

pub fn writhe_identity_check(m: u32, q: &[u32]) -> Result<bool, OrbitError> {
    let (lhs, rhs) = writhe_identity_sides(m, q)?;
    Ok(lhs == rhs)
}

/// `Σ_{i<j} (min(q_i, q_j) − 1)` over pairs of odd multiplicities. The left side of the
/// writhe identity exceeds the right side by exactly this amount, so equality holds iff
/// at most one odd multiplicity exceeds one.
pub fn odd_pair_excess(q: &[u32]) -> i64 {
    let odd: Vec<i64> = q.iter().filter(|&&v| v % 2 == 1).map(|&v| v as i64).collect();
    let mut excess = 0;
    for i in 0..odd.len() {
        for j in i + 1..odd.len() {
            excess += odd[i].min(odd[j]) - 1;
        }
    }
    excess
}

fn default_rotation() -> i64 {
    1
}

/// Winding, writhe and linking data of the braid at one embedded orbit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraidData {
    pub q: Vec<u32>,
    pub rho: Vec<i64>,
    #[serde(default)]
    pub linking: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub writhe: Option<Vec<i64>>,
    /// Rotation number `n` of the orbit, so `μ(β^k) = kn`.
    #[serde(default = "default_rotation")]
    pub rotation: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Holds,
    Fails,
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub strands: Vec<usize>,
    pub value: Option<i64>,
    pub bound: i64,
    pub status: BoundStatus,
}

impl BoundCheck {
    fn new(strands: Vec<usize>, value: Option<i64>, bound: i64) -> Self {
        let status = match value {
            None => BoundStatus::Unchecked,
            Some(v) if v >= bound => BoundStatus::Holds,
            Some(_) => BoundStatus::Fails,
        };
        BoundCheck { strands, value, bound, status }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidReport {
    pub winding: Vec<BoundCheck>,
    pub writhe: Vec<BoundCheck>,
    pub linking: Vec<BoundCheck>,
}

impl BraidReport {
    pub fn all_hold(&self) -> bool {
        self.winding
            .iter()
            .chain(&self.writhe)
            .chain(&self.linking)
            .all(|b| b.status != BoundStatus::Fails)
    }
}

fn ceil_half(x: i64) -> i64 {
    -((-x).div_euclid(2))
}

pub fn braid_bounds_check(braid: &BraidData) -> Result<BraidReport, OrbitError> {
    let k = braid.q.len();
    if braid.rho.len() != k {
        return Err(OrbitError::BraidShape("rho and q lengths differ".into()));
    }
    if braid.q.contains(&0) {
        return Err(OrbitError::ZeroMultiplicity);
    }
    if let Some(w) = &braid.writhe {
        if w.len() != k {
            return Err(OrbitError::BraidShape("writhe and q lengths differ".into()));
        }
    }
    if let Some(l) = &braid.linking {
        if l.len() != k || l.iter().any(|row| row.len() != k) {
            return Err(OrbitError::BraidShape("linking matrix must be k×k".into()));
        }
        for i in 0..k {
            for j in 0..k {
                if l[i][j] != l[j][i] {
                    return Err(OrbitError::BraidShape("linking matrix is not symmetric".into()));
                }
            }
        }
    }
    let q: Vec<i64> = braid.q.iter().map(|&v| v as i64).collect();
    let rho = &braid.rho;
    let winding = (0..k)
        .map(|i| BoundCheck::new(vec![i], Some(rho[i]), ceil_half(q[i] * braid.rotation)))
        .collect();
    let writhe = (0..k)
        .map(|i| {
            let bound = rho[i] * (q[i] - 1) + q[i].gcd(&rho[i]) - 1;
            BoundCheck::new(vec![i], braid.writhe.as_ref().map(|w| w[i]), bound)
        })
        .collect();
    let mut linking = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let bound = (q[i] * rho[j]).min(q[j] * rho[i]);
            linking.push(BoundCheck::new(vec![i, j], braid.linking.as_ref().map(|l| l[i][j]), bound));
        }
    }
    Ok(BraidReport { winding, writhe, linking })
}

/// Changes the trivialization over `orbit_id` by `twist` units: rotation `n ↦ n + 2·twist`,
/// with `c1` and `Q` compensated so that `ind` and `I` are unchanged.
pub fn retrivialize(curve: &CurveData, orbit_id: &str, twist: i64) -> Result<CurveData, OrbitError> {
    let mut out = curve.clone();
    let (mut m_plus, mut m_minus) = (0i64, 0i64);
    let mut found = false;
    for e in &mut out.ends {
        if e.orbit.id != orbit_id {
            continue;
        }
        found = true;
        let n = e.orbit.hyperbolic_rotation()?;
        e.orbit.rotation = Rotation::Hyperbolic(n + 2 * twist);
        match e.sign {
            Sign::Positive => m_plus += e.multiplicity as i64,
            Sign::Negative => m_minus += e.multiplicity as i64,
        }
    }
    if !found {
        return Err(OrbitError::UnknownOrbit(orbit_id.to_string()));
    }
    out.rel_c1 -= twist * (m_plus - m_minus);
    out.rel_q -= twist * (m_plus * m_plus - m_minus * m_minus);
    Ok(out)
}

/// Disjoint union: ends concatenate and `genus`, `components`, `c1`, `Q`, `δ` add.
pub fn disjoint_union(a: &CurveData, b: &CurveData) -> Result<CurveData, OrbitError> {
    let mut ends = a.ends.clone();
    ends.extend(b.ends.iter().cloned());
    CurveData::with_components(
        a.genus + b.genus,
        a.components + b.components,
        ends,
        a.rel_c1 + b.rel_c1,
        a.rel_q + b.rel_q,
        a.delta + b.delta,
    )
}

/// Glues the negative ends of a connected `top` to the positive ends of a connected
/// `bottom`. The multisets of glued ends must agree; `χ`, `c1`, `Q` and `δ` add and the
/// genus of the connected result follows from `χ`.
pub fn glue(top: &CurveData, bottom: &CurveData) -> Result<CurveData, OrbitError> {
    if top.components != 1 || bottom.components != 1 {
        return Err(OrbitError::GlueMismatch("only connected levels are supported".into()));
    }
    let key = |e: &EndSpec| (e.orbit.id.clone(), e.multiplicity);
    let mut lower: Vec<_> = top.ends.iter().filter(|e| e.sign == Sign::Negative).map(key).collect();
    let mut upper: Vec<_> = bottom.ends.iter().filter(|e| e.sign == Sign::Positive).map(key).collect();
    lower.sort();
    upper.sort();
    if lower != upper {
        return Err(OrbitError::GlueMismatch("negative ends of the top do not match positive ends of the bottom".into()));
    }
    if lower.is_empty() {
        return Err(OrbitError::GlueMismatch("no ends to glue along".into()));
    }
    let mut ends: Vec<EndSpec> = top.ends.iter().filter(|e| e.sign == Sign::Positive).cloned().collect();
    ends.extend(bottom.ends.iter().filter(|e| e.sign == Sign::Negative).cloned());
    let chi = top.chi() + bottom.chi();
    let twice_genus = 2 - chi - ends.len() as i64;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(OrbitError::GlueMismatch(format!("inconsistent Euler characteristic {chi}")));
    }
    CurveData::new(
        (twice_genus / 2) as u32,
        ends,
        top.rel_c1 + bottom.rel_c1,
        top.rel_q + bottom.rel_q,
        top.delta + bottom.delta,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg(n: i64) -> ReebOrbitSpec {
        ReebOrbitSpec::hyperbolic("b", n, 1.0).unwrap()
    }

    #[test]
    fn cz_examples() {
        assert_eq!(cz_index(&neg(1), 3), 3);
        let pos = ReebOrbitSpec::hyperbolic("a", 0, 1.0).unwrap();
        assert_eq!(cz_index(&pos, 5), 0);
        let ell = ReebOrbitSpec::elliptic("e", Ratio::new(2, 7), 1.0).unwrap();
        assert_eq!(cz_index(&ell, 3), 1);
        assert_eq!(cz_index(&ell, 4), 3);
    }

    #[test]
    fn orbit_validation() {
        assert!(ReebOrbitSpec::new("x", OrbitKind::PositiveHyperbolic, Rotation::Hyperbolic(1), 1.0).is_err());
        assert!(ReebOrbitSpec::new("x", OrbitKind::NegativeHyperbolic, Rotation::Hyperbolic(-3), 1.0).is_ok());
        assert!(ReebOrbitSpec::elliptic("x", Ratio::new(3, 2), 1.0).is_err());
        assert!(ReebOrbitSpec::hyperbolic("x", 1, 0.0).is_err());
    }

    #[test]
    fn totals() {
        let set = OrbitSet::new(vec![(neg(1), 3)]).unwrap();
        assert_eq!(cz_totals(&set).unwrap(), (3, 6));
        assert_eq!(cz_totals(&OrbitSet::empty()).unwrap(), (0, 0));
        let a = ReebOrbitSpec::hyperbolic("a", 0, 1.0).unwrap();
        let c = ReebOrbitSpec::hyperbolic("c", 0, 2.0).unwrap();
        assert_eq!(cz_totals(&OrbitSet::new(vec![(a.clone(), 1), (c, 1)]).unwrap()).unwrap(), (0, 0));
        assert!(OrbitSet::new(vec![(a.clone(), 1), (a, 2)]).is_err());
        let ell = ReebOrbitSpec::elliptic("e", Ratio::new(1, 3), 1.0).unwrap();
        assert!(matches!(
            cz_totals(&OrbitSet::new(vec![(ell, 1)]).unwrap()),
            Err(OrbitError::EllipticUnsupported(_))
        ));
    }

    #[test]
    fn fredholm_examples() {
        let b = neg(1);
        let a = ReebOrbitSpec::hyperbolic("a", 0, 0.5).unwrap();
        let curve = CurveData::new(
            0,
            vec![EndSpec::new(&b, 1, Sign::Positive), EndSpec::new(&a, 1, Sign::Negative), EndSpec::new(&a, 1, Sign::Negative)],
            0,
            0,
            0,
        )
        .unwrap();
        assert_eq!(fredholm_index(&curve).unwrap(), 2);
        let cyl = CurveData::new(0, vec![EndSpec::new(&b, 1, Sign::Positive), EndSpec::new(&b, 1, Sign::Negative)], 0, 0, 0).unwrap();
        assert_eq!(fredholm_index(&cyl).unwrap(), 0);
        assert_eq!(ech_index(&cyl).unwrap(), 0);
        assert_eq!(cover_fredholm(0, 3, 2), 2);
        assert_eq!(cover_fredholm(1, 1, 0), 1);
        assert_eq!(cover_fredholm(2, 4, 5), 13);
    }

    #[test]
    fn plane_and_its_double_cover() {
        let b = neg(1);
        let plane = CurveData::new(0, vec![EndSpec::new(&b, 1, Sign::Positive)], 0, -1, 0).unwrap();
        assert_eq!(ech_index(&plane).unwrap(), 0);
        let double = CurveData::new(0, vec![EndSpec::new(&b, 2, Sign::Positive)], 0, -4, 0).unwrap();
        assert_eq!(ech_index(&double).unwrap(), degenerate_cover_index(2));
        assert_eq!(degenerate_cover_index(1), 0);
        assert_eq!(degenerate_cover_index(5), -10);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(cover_index_lower_bound(0, 2, 0, 0, 1), -1);
        assert_eq!(cover_index_lower_bound(0, 1, 7, 3, 2), 0);
        assert_eq!(cover_index_lower_bound(1, 3, 1, 2, 2), 15);
    }

    #[test]
    fn partition_and_deficit_examples() {
        use HyperbolicKind::*;
        assert!(partition_check(Negative, &[2, 2, 1]).unwrap());
        assert!(partition_check(Positive, &[1]).unwrap());
        assert!(!partition_check(Negative, &[3, 1, 1]).unwrap());
        assert!(!partition_check(Negative, &[1, 1]).unwrap());
        assert_eq!(deficit_at_orbit(Negative, &[1, 1, 1]).unwrap(), 3);
        assert_eq!(deficit_at_orbit(Negative, &[2, 2, 1]).unwrap(), 0);
        assert_eq!(deficit_at_orbit(Positive, &[1, 1]).unwrap(), 0);
        assert_eq!(deficit_at_orbit(Negative, &[3, 1, 1]).unwrap(), 4);
        assert_eq!(deficit_at_orbit(Negative, &[1, 3, 1]).unwrap(), 4);
        assert!(deficit_at_orbit(Negative, &[]).is_err());
    }

    #[test]
    fn inequality_examples() {
        let b = neg(1);
        let cyl = CurveData::new(0, vec![EndSpec::new(&b, 1, Sign::Positive), EndSpec::new(&b, 1, Sign::Negative)], 0, 0, 0).unwrap();
        let r = index_inequality_check(&cyl).unwrap();
        assert!(r.holds && r.slack == 0);
        let mut bad = cyl.clone();
        bad.rel_q = -1;
        let r = index_inequality_check(&bad).unwrap();
        assert_eq!((r.holds, r.slack), (false, -1));
    }

    #[test]
    fn adjunction_examples() {
        assert_eq!(adjunction_c1(0, 0, 0, 0), 0);
        assert_eq!(adjunction_c1(-1, 2, 3, 1), 2);
    }

    #[test]
    fn writhe_examples() {
        assert_eq!(writhe_identity_sides(3, &[1, 1, 1]).unwrap(), (6, 6));
        assert!(writhe_identity_check(1, &[1]).unwrap());
        assert!(writhe_identity_check(5, &[3, 1, 1]).unwrap());
        assert!(writhe_identity_check(4, &[1, 2]).is_err());
    }

    #[test]
    fn writhe_identity_breaks_on_two_large_odd_parts() {
        // ρ = (2, 2): 2·2 + 2·2 + 2·min(6, 6) = 20, against 21 − 6 + 1 + 2 = 18.
        assert_eq!(writhe_identity_sides(6, &[3, 3]).unwrap(), (20, 18));
        assert_eq!(odd_pair_excess(&[3, 3]), 2);
        assert_eq!(odd_pair_excess(&[3, 1, 1]), 0);
    }

    #[test]
    fn braid_examples() {
        let r = braid_bounds_check(&BraidData { q: vec![2], rho: vec![1], linking: None, writhe: Some(vec![1]), rotation: 1 }).unwrap();
        assert_eq!(r.winding[0].value, Some(r.winding[0].bound));
        assert_eq!(r.writhe[0].value, Some(r.writhe[0].bound));
        assert!(r.all_hold());
        let r = braid_bounds_check(&BraidData { q: vec![1], rho: vec![1], linking: None, writhe: Some(vec![0]), rotation: 1 }).unwrap();
        assert!(r.all_hold());
        let r = braid_bounds_check(&BraidData {
            q: vec![1, 1],
            rho: vec![1, 1],
            linking: Some(vec![vec![0, 0], vec![0, 0]]),
            writhe: None,
            rotation: 1,
        })
        .unwrap();
        assert_eq!(r.linking[0].status, BoundStatus::Fails);
        assert_eq!(r.writhe[0].status, BoundStatus::Unchecked);
        let asym = BraidData { q: vec![1, 1], rho: vec![1, 1], linking: Some(vec![vec![0, 1], vec![2, 0]]), writhe: None, rotation: 1 };
        assert!(braid_bounds_check(&asym).is_err());
    }

    #[test]
    fn curve_json_round_trip() {
        let txt = r#"{
            "orbits": {"b": {"kind": "negative_hyperbolic", "rotation": 1, "action": 1.5},
                       "e": {"kind": "positive_hyperbolic", "rotation": 2, "action": 3.0}},
            "genus": 0,
            "ends": [{"orbit": "e", "mult": 1, "sign": "positive"},
                     {"orbit": "b", "mult": 1, "sign": "negative"}],
            "rel_c1": 0, "rel_Q": 1, "delta": 0
        }"#;
        let c = CurveData::from_json(txt).unwrap();
        assert_eq!(c.ends.len(), 2);
        assert_eq!(fredholm_index(&c).unwrap(), 1);
        let back: CurveData = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let bad = txt.replace("\"rotation\": 1,", "\"rotation\": 2,");
        assert!(CurveData::from_json(&bad).is_err());
    }
}
