//! Hermitian symmetric pairs: K-types, the Schmid decomposition of `S(p⁻)`
//! and the coordinate bridge to the tensor engine.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, LazyLock};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, SystemId, Weight};
use crate::weights::weyl_dimension;

pub const BUILTIN_PAIRS: &str = include_str!("../data/pairs.toml");
const SUPPORTED_VERSION: u32 = 1;

static BUILTIN: LazyLock<PairSet> =
    LazyLock::new(|| PairSet::parse(BUILTIN_PAIRS, "<builtin pairs.toml>").expect("shipped pair table is valid"));

/// Highest weight of a K-type: semisimple part plus central coordinate
/// (the coefficient of `ζ / zeta_scale`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KType {
    pub ss: Weight,
    pub central: i64,
}

impl KType {
    pub fn new(ss: impl Into<Weight>, central: i64) -> Self {
        KType { ss: ss.into(), central }
    }

    /// Parses the full tuple `[n1,...,nl,c]`.
    pub fn parse(s: &str) -> Result<KType> {
        let mut coords = Weight::parse(s)?.into_coords();
        let central = coords
            .pop()
            .ok_or_else(|| Error::Parse(format!("K-type `{s}` is empty")))?;
        Ok(KType { ss: Weight::new(coords), central })
    }

    pub fn tuple(&self) -> Vec<i64> {
        let mut v = self.ss.coords().to_vec();
        v.push(self.central);
        v
    }

    pub fn shift_central(&self, by: i64) -> KType {
        KType { ss: self.ss.clone(), central: self.central + by }
    }
}

impl Ord for KType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tuple().cmp(&other.tuple())
    }
}

impl PartialOrd for KType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &KType {
    type Output = KType;
    fn add(self, rhs: &KType) -> KType {
        KType { ss: &self.ss + &rhs.ss, central: self.central + rhs.central }
    }
}

impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tuple().iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl std::str::FromStr for KType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        KType::parse(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchmidGenerator {
    pub ktype: KType,
    pub degree: u32,
}

/// Coordinates of the pair's real form as inert text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalData {
    pub delta: String,
    pub delta_c: String,
    pub zeta: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HermitianPair {
    pub id: String,
    pub group: String,
    pub k_system: SystemId,
    pub zeta_scale: i64,
    /// Central coordinate of `δ_n`; its semisimple part is zero.
    pub delta_n: i64,
    pub dim_p_minus: u64,
    /// 0-based: branch coordinate `k` is K-type coordinate `branch_labels[k]`.
    pub branch_labels: Vec<usize>,
    pub schmid: Vec<SchmidGenerator>,
    /// Central coordinate drop per unit of level (`S^d(p⁻)` sits at `−step·d`).
    pub level_step: i64,
    pub orthogonal: OrthogonalData,
}

/// One component `E_σ` of `S(p⁻)`, with the exponents of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchmidComponent {
    pub exponents: Vec<u32>,
    pub level: u32,
    pub ktype: KType,
}

impl HermitianPair {
    pub fn k_root_system(&self) -> Result<Arc<RootSystem>> {
        RootSystem::shared(self.k_system)
    }

    pub fn delta_n_ktype(&self) -> KType {
        KType::new(Weight::zero(self.k_system.rank), self.delta_n)
    }

    pub fn check_ktype(&self, k: &KType) -> Result<()> {
        if k.ss.rank() != self.k_system.rank {
            return Err(Error::RankMismatch {
                weight: k.to_string(),
                got: k.ss.rank() + 1,
                expected: self.k_system.rank + 1,
            });
        }
        if !k.ss.is_dominant() {
            return Err(Error::NotDominant(k.to_string()));
        }
        Ok(())
    }

    /// Semisimple part in the labelling of the tensor engine's root system.
    pub fn to_branch_labels(&self, k: &KType) -> Weight {
        k.ss.permuted(&self.branch_labels)
    }

    pub fn from_branch_labels(&self, w: &Weight) -> Weight {
        let mut out = vec![0; w.rank()];
        for (k, &p) in self.branch_labels.iter().enumerate() {
            out[p] = w.get(k);
        }
        Weight::new(out)
    }

    /// Level of a central offset below a reference, if it is a whole level.
    pub fn level_of(&self, central_drop: i64) -> Option<i64> {
        (central_drop % self.level_step == 0).then_some(central_drop / self.level_step)
    }

    pub fn dimension(&self, k: &KType) -> Result<BigUint> {
        weyl_dimension(&*self.k_root_system()?, &self.to_branch_labels(k))
    }

    /// Every component of `S(p⁻)` up to `max_level`, ordered by level and
    /// then by K-type.
    pub fn schmid_components(&self, max_level: u32) -> Vec<SchmidComponent> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.schmid.len()];
        self.enumerate_schmid(0, 0, max_level, &mut exps, &mut out);
        out.sort_by(|a, b| (a.level, &a.ktype).cmp(&(b.level, &b.ktype)));
        out
    }

    fn enumerate_schmid(&self, idx: usize, level: u32, max: u32, exps: &mut Vec<u32>, out: &mut Vec<SchmidComponent>) {
        if idx == self.schmid.len() {
            let rank = self.k_system.rank;
            let mut k = KType::new(Weight::zero(rank), 0);
            for (g, &e) in self.schmid.iter().zip(exps.iter()) {
                k.ss += &(&g.ktype.ss * i64::from(e));
                k.central += g.ktype.central * i64::from(e);
            }
            out.push(SchmidComponent { exponents: exps.clone(), level, ktype: k });
            return;
        }
        let deg = self.schmid[idx].degree;
        let mut e = 0;
        while level + e * deg <= max {
            exps[idx] = e;
            self.enumerate_schmid(idx + 1, level + e * deg, max, exps, out);
            e += 1;
        }
        exps[idx] = 0;
    }

    /// Components of `S^d(p⁻)`.
    pub fn schmid_level(&self, d: u32) -> Vec<KType> {
        self.schmid_components(d)
            .into_iter()
            .filter(|c| c.level == d)
            .map(|c| c.ktype)
            .collect()
    }
}

#[derive(Deserialize)]
struct RawFile {
    version: u32,
    #[serde(default)]
    pair: Vec<RawPair>,
    #[serde(default)]
    module: Vec<RawModule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    id: String,
    group: String,
    k_system: String,
    zeta_scale: i64,
    delta_n: i64,
    dim_p_minus: u64,
    branch_labels: Vec<usize>,
    schmid: Vec<RawGenerator>,
    #[serde(default)]
    orthogonal: OrthogonalData,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    ktype: String,
    degree: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    id: String,
    #[serde(default)]
    aliases: Vec<String>,
    pair: String,
    plus: Vec<String>,
    minus: Vec<String>,
    spectrum: RawSpectrum,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrum {
    base: String,
    generators: Vec<String>,
}

/// A highest weight module on a pair: its Dirac cohomology and its
/// K-spectrum as a free family `base + Σ kᵢ·generatorᵢ`.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleRecord {
    pub id: String,
    pub aliases: Vec<String>,
    pub pair: String,
    pub plus: Vec<KType>,
    pub minus: Vec<KType>,
    pub spectrum_base: KType,
    pub spectrum_generators: Vec<KType>,
}

impl ModuleRecord {
    pub fn matches(&self, name: &str) -> bool {
        self.id.eq_ignore_ascii_case(name) || self.aliases.iter().any(|a| a.eq_ignore_ascii_case(name))
    }
}

#[derive(Clone, Debug)]
pub struct PairSet {
    pub source: String,
    pairs: Vec<HermitianPair>,
    modules: Vec<ModuleRecord>,
}

fn build_pair(r: RawPair) -> Result<HermitianPair> {
    let k_system: SystemId = r.k_system.parse()?;
    let k_system = k_system.validate()?;
    let rank = k_system.rank;
    let mut sorted = r.branch_labels.clone();
    sorted.sort_unstable();
    if sorted != (1..=rank).collect::<Vec<_>>() {
        return Err(Error::InvalidData(format!(
            "pair {}: branch_labels {:?} is not a permutation of 1..={rank}",
            r.id, r.branch_labels
        )));
    }
    let schmid = r
        .schmid
        .iter()
        .map(|g| Ok(SchmidGenerator { ktype: KType::parse(&g.ktype)?, degree: g.degree }))
        .collect::<Result<Vec<_>>>()?;
    let first = schmid
        .iter()
        .find(|g| g.degree == 1)
        .ok_or_else(|| Error::InvalidData(format!("pair {}: no degree-1 Schmid generator", r.id)))?;
    let level_step = -first.ktype.central;
    if level_step <= 0 {
        return Err(Error::InvalidData(format!("pair {}: p⁻ must have negative central charge", r.id)));
    }
    let pair = HermitianPair {
        id: r.id,
        group: r.group,
        k_system,
        zeta_scale: r.zeta_scale,
        delta_n: r.delta_n,
        dim_p_minus: r.dim_p_minus,
        branch_labels: r.branch_labels.iter().map(|k| k - 1).collect(),
        schmid,
        level_step,
        orthogonal: r.orthogonal,
    };
    for g in &pair.schmid {
        pair.check_ktype(&g.ktype)
            .map_err(|e| Error::InvalidData(format!("pair {}: {e}", pair.id)))?;
        if g.ktype.central != -level_step * i64::from(g.degree) {
            return Err(Error::InvalidData(format!(
                "pair {}: generator {} of degree {} has central coordinate off the level grid",
                pair.id, g.ktype, g.degree
            )));
        }
    }
    let first = pair.schmid.iter().find(|g| g.degree == 1).expect("checked above");
    let dim = pair.dimension(&first.ktype)?;
    if dim != BigUint::from(pair.dim_p_minus) {
        return Err(Error::InvalidData(format!(
            "pair {}: degree-1 Schmid module has dimension {dim}, expected dim p⁻ = {}",
            pair.id, pair.dim_p_minus
        )));
    }
    Ok(pair)
}

impl PairSet {
    pub fn builtin() -> &'static PairSet {
        &BUILTIN
    }

    pub fn load(path: &Path) -> Result<PairSet> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidData(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&src, &path.display().to_string())
    }

    pub fn parse(src: &str, source: &str) -> Result<PairSet> {
        let raw: RawFile = toml::from_str(src).map_err(|e| Error::Parse(format!("{source}: {e}")))?;
        if raw.version != SUPPORTED_VERSION {
            return Err(Error::InvalidData(format!(
                "{source}: pair table version {} is not supported",
                raw.version
            )));
        }
        let pairs = raw.pair.into_iter().map(build_pair).collect::<Result<Vec<_>>>()?;
        let mut set = PairSet { source: source.to_string(), pairs, modules: Vec::new() };
        for m in raw.module {
            let pair = set.pair(&m.pair)?;
            let parse_all = |xs: &[String]| -> Result<Vec<KType>> {
                xs.iter()
                    .map(|s| {
                        let k = KType::parse(s)?;
                        pair.check_ktype(&k)?;
                        Ok(k)
                    })
                    .collect()
            };
            let record = ModuleRecord {
                plus: parse_all(&m.plus)?,
                minus: parse_all(&m.minus)?,
                spectrum_base: parse_all(std::slice::from_ref(&m.spectrum.base))?.remove(0),
                spectrum_generators: parse_all(&m.spectrum.generators)?,
                pair: pair.id.clone(),
                id: m.id,
                aliases: m.aliases,
            };
            for g in &record.spectrum_generators {
                if g.central >= 0 || g.central % pair.level_step != 0 {
                    return Err(Error::InvalidData(format!(
                        "module {}: spectrum generator {g} is off the level grid",
                        record.id
                    )));
                }
            }
            set.modules.push(record);
        }
        Ok(set)
    }

    pub fn pairs(&self) -> &[HermitianPair] {
        &self.pairs
    }

    pub fn modules(&self) -> &[ModuleRecord] {
        &self.modules
    }

    /// Looks a pair up by id (`EIII`) or group name (`E6(-14)`).
    pub fn pair(&self, name: &str) -> Result<&HermitianPair> {
        self.pairs
            .iter()
            .find(|p| p.id.eq_ignore_ascii_case(name) || p.group.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Unknown { kind: "pair", name: name.to_string() })
    }

    pub fn module(&self, name: &str) -> Result<&ModuleRecord> {
        self.modules
            .iter()
            .find(|m| m.matches(name))
            .ok_or_else(|| Error::Unknown { kind: "module", name: name.to_string() })
    }
}

pub fn pair_data(name: &str) -> Result<&'static HermitianPair> {
    PairSet::builtin().pair(name)
}

/// Total dimension of each `S^d(p⁻)`, `d ≤ max_level`.
pub fn schmid_level_dimensions(pair: &HermitianPair, max_level: u32) -> Result<BTreeMap<u32, BigUint>> {
    let mut out: BTreeMap<u32, BigUint> = (0..=max_level).map(|d| (d, BigUint::default())).collect();
    for c in pair.schmid_components(max_level) {
        *out.get_mut(&c.level).expect("level in range") += pair.dimension(&c.ktype)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::binomial;

    fn k(s: &str) -> KType {
        KType::parse(s).unwrap()
    }

    #[test]
    fn eiii_data() {
        let p = pair_data("EIII").unwrap();
        assert_eq!(p.zeta_scale, 4);
        assert_eq!(p.delta_n, 24);
        assert_eq!(p.dim_p_minus, 16);
        assert_eq!(p.level_step, 3);
        assert_eq!(p.k_system.to_string(), "D5");
        let gens: Vec<String> = p.schmid.iter().map(|g| g.ktype.to_string()).collect();
        assert_eq!(gens, vec!["[0,1,0,0,0,-3]", "[0,0,0,0,1,-6]"]);
        assert!(std::ptr::eq(p, pair_data("e6(-14)").unwrap()));
    }

    #[test]
    fn evii_data() {
        let p = pair_data("EVII").unwrap();
        assert_eq!((p.zeta_scale, p.delta_n, p.dim_p_minus, p.level_step), (3, 27, 27, 2));
        assert_eq!(p.schmid.len(), 3);
        let x = k("[1,0,2,0,0,1,-7]");
        assert_eq!(p.to_branch_labels(&x), x.ss);
    }

    #[test]
    fn branch_label_reversal() {
        let p = pair_data("EIII").unwrap();
        assert_eq!(p.to_branch_labels(&k("[0,1,0,0,0,-3]")), Weight::from([0, 0, 0, 1, 0]));
        assert_eq!(p.to_branch_labels(&k("[7,0,0,0,0,2]")), Weight::from([0, 0, 0, 0, 7]));
        let w = Weight::from([1, 2, 3, 4, 5]);
        assert_eq!(p.from_branch_labels(&p.to_branch_labels(&KType::new(w.clone(), 0))), w);
        // The reversal is an involution.
        assert_eq!(p.from_branch_labels(&w), p.to_branch_labels(&KType::new(w.clone(), 0)));
    }

    #[test]
    fn schmid_enumeration() {
        let p = pair_data("EIII").unwrap();
        let got: Vec<String> = p.schmid_components(2).iter().map(|c| c.ktype.to_string()).collect();
        assert_eq!(got, vec!["[0,0,0,0,0,0]", "[0,1,0,0,0,-3]", "[0,0,0,0,1,-6]", "[0,2,0,0,0,-6]"]);
        let q = pair_data("EVII").unwrap();
        let got: Vec<String> = q.schmid_components(1).iter().map(|c| c.ktype.to_string()).collect();
        assert_eq!(got, vec!["[0,0,0,0,0,0,0]", "[0,0,0,0,0,1,-2]"]);
        for c in q.schmid_components(7) {
            assert_eq!(c.ktype.central, -2 * i64::from(c.level));
        }
    }

    #[test]
    fn symmetric_power_dimensions() {
        for (name, n) in [("EIII", 16u64), ("EVII", 27)] {
            let p = pair_data(name).unwrap();
            let dims = schmid_level_dimensions(p, 6).unwrap();
            for (d, dim) in dims {
                assert_eq!(dim, binomial(BigUint::from(n + u64::from(d) - 1), BigUint::from(d)), "{name} d={d}");
            }
        }
    }

    #[test]
    fn registry_modules() {
        let set = PairSet::builtin();
        assert_eq!(set.modules().len(), 4);
        let m = set.module("E6_L_mu").unwrap();
        assert_eq!((m.plus.len(), m.minus.len()), (3, 2));
        assert_eq!(set.module("e7_pi1").unwrap().plus.len(), 6);
        assert_eq!(set.module("E7_pi2").unwrap().id, "e7-wallach-2");
        assert!(set.module("E8").is_err());
    }

    #[test]
    fn rejects_inconsistent_pair() {
        let bad = BUILTIN_PAIRS.replacen("dim_p_minus = 16", "dim_p_minus = 15", 1);
        assert!(PairSet::parse(&bad, "x").unwrap_err().to_string().contains("dimension 16"));
        let bad = BUILTIN_PAIRS.replacen("branch_labels = [5, 4, 3, 2, 1]", "branch_labels = [5, 4, 3, 2, 2]", 1);
        assert!(PairSet::parse(&bad, "x").is_err());
    }

    #[test]
    fn ktype_parse_and_order() {
        let a = k("[0,1,0,0,0,-3]");
        assert_eq!(a.ss, Weight::from([0, 1, 0, 0, 0]));
        assert_eq!(a.central, -3);
        assert_eq!(&a + &k("[0,0,0,0,1,-6]"), k("[0,1,0,0,1,-9]"));
        assert!(k("[0,0,0,0,0,5]") < a);
        assert!(KType::parse("[]").is_err());
    }
}
