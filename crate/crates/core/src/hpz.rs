//! K-spectra of highest weight modules from their Dirac cohomology.
//!
//! `ch_K L = Σ_ξ ch_K N(ξ − δ_n) − Σ_η ch_K N(η − δ_n)` with ξ, η over
//! `H_D^±`, where `N(μ)|_K = S(p⁻) ⊗ E_μ`. Series are graded by level: a
//! K-type at level ℓ has central coordinate `base − step·ℓ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::{HermitianPair, KType, ModuleRecord, PairSet};
use crate::tensor::tensor_decompose;

/// Default truncation level.
pub const DEFAULT_MAX_LEVEL: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KCharacterSeries {
    pub pair: String,
    pub base_central: i64,
    pub level_step: i64,
    pub max_level: u32,
    /// Every level `0..=max_level` is present, possibly empty.
    pub levels: BTreeMap<u32, BTreeMap<KType, BigInt>>,
}

impl KCharacterSeries {
    fn empty(pair: &HermitianPair, base_central: i64, max_level: u32) -> Self {
        KCharacterSeries {
            pair: pair.id.clone(),
            base_central,
            level_step: pair.level_step,
            max_level,
            levels: (0..=max_level).map(|l| (l, BTreeMap::new())).collect(),
        }
    }

    pub fn central_at(&self, level: u32) -> i64 {
        self.base_central - self.level_step * i64::from(level)
    }

    pub fn level(&self, level: u32) -> Option<&BTreeMap<KType, BigInt>> {
        self.levels.get(&level)
    }

    pub fn mult(&self, k: &KType) -> BigInt {
        let drop = self.base_central - k.central;
        if drop < 0 || drop % self.level_step != 0 {
            return BigInt::zero();
        }
        u32::try_from(drop / self.level_step)
            .ok()
            .and_then(|l| self.levels.get(&l))
            .and_then(|m| m.get(k).cloned())
            .unwrap_or_default()
    }

    pub fn ktypes(&self) -> impl Iterator<Item = (&KType, &BigInt)> {
        self.levels.values().flat_map(|m| m.iter())
    }

    pub fn len(&self) -> usize {
        self.levels.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.ktypes().all(|(_, m)| m.is_one())
    }

    /// The levels `0..=max_level` only.
    pub fn truncated(&self, max_level: u32) -> KCharacterSeries {
        let mut out = self.clone();
        out.max_level = max_level.min(self.max_level);
        out.levels.retain(|l, _| *l <= max_level);
        out
    }

    /// `Σ mult · dim` at a level.
    pub fn level_dimension(&self, pair: &HermitianPair, level: u32) -> Result<BigInt> {
        let mut total = BigInt::zero();
        if let Some(m) = self.levels.get(&level) {
            for (k, mult) in m {
                total += BigInt::from(pair.dimension(k)?) * mult;
            }
        }
        Ok(total)
    }

    /// Adds `sign · other`, with `other`'s level 0 placed at this series' level `offset`.
    fn add_shifted(&mut self, other: &KCharacterSeries, offset: u32, sign: i32) {
        for (l, m) in &other.levels {
            let Some(target) = self.levels.get_mut(&(l + offset)) else {
                continue;
            };
            for (k, mult) in m {
                let e = target.entry(k.clone()).or_default();
                if sign >= 0 {
                    *e += mult;
                } else {
                    *e -= mult;
                }
            }
        }
        for m in self.levels.values_mut() {
            m.retain(|_, v| !v.is_zero());
        }
    }

    fn first_negative(&self) -> Option<(&KType, &BigInt)> {
        self.ktypes().find(|(_, m)| m.is_negative())
    }
}

impl fmt::Display for KCharacterSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, m) in &self.levels {
            write!(f, "level {l} (central {}):", self.central_at(*l))?;
            if m.is_empty() {
                write!(f, " -")?;
            }
            for (k, mult) in m {
                if mult.is_one() {
                    write!(f, " {k}")?;
                } else {
                    write!(f, " {k}^{mult}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `H_D^+` and `H_D^-` of a module, as recorded in the pair table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracCohomologyData {
    pub module_id: String,
    pub pair: String,
    pub plus: Vec<KType>,
    pub minus: Vec<KType>,
}

impl From<&ModuleRecord> for DiracCohomologyData {
    fn from(r: &ModuleRecord) -> Self {
        DiracCohomologyData {
            module_id: r.id.clone(),
            pair: r.pair.clone(),
            plus: r.plus.clone(),
            minus: r.minus.clone(),
        }
    }
}

/// Expected K-spectrum: `base + Σ kᵢ·generatorᵢ` over `kᵢ ∈ ℕ`, each once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormSpectrum {
    pub module_id: String,
    pub pair: String,
    pub base: KType,
    pub generators: Vec<KType>,
}

impl From<&ModuleRecord> for ClosedFormSpectrum {
    fn from(r: &ModuleRecord) -> Self {
        ClosedFormSpectrum {
            module_id: r.id.clone(),
            pair: r.pair.clone(),
            base: r.spectrum_base.clone(),
            generators: r.spectrum_generators.clone(),
        }
    }
}

impl ClosedFormSpectrum {
    pub fn series(&self, pair: &HermitianPair, max_level: u32) -> KCharacterSeries {
        let mut out = KCharacterSeries::empty(pair, self.base.central, max_level);
        let steps: Vec<u32> = self
            .generators
            .iter()
            .map(|g| u32::try_from(-g.central / pair.level_step).expect("generator on the level grid"))
            .collect();
        let mut stack = vec![(0usize, 0u32, self.base.clone())];
        while let Some((idx, level, k)) = stack.pop() {
            if idx == self.generators.len() {
                *out.levels.get_mut(&level).expect("level in range").entry(k).or_default() += 1;
                continue;
            }
            let (mut level, mut k) = (level, k);
            while level <= max_level {
                stack.push((idx + 1, level, k.clone()));
                if steps[idx] == 0 {
                    break;
                }
                level += steps[idx];
                k = &k + &self.generators[idx];
            }
        }
        out
    }
}

pub fn dirac_registry(module: &str) -> Result<DiracCohomologyData> {
    Ok(PairSet::builtin().module(module)?.into())
}

/// `S(p⁻) ⊗ E_ξ`, with central coordinates `ξ.central + σ.central`.
fn symmetric_algebra_times(pair: &HermitianPair, xi: &KType, max_level: u32) -> Result<KCharacterSeries> {
    pair.check_ktype(xi)?;
    let rs = pair.k_root_system()?;
    let small = pair.to_branch_labels(xi);
    let comps = pair.schmid_components(max_level);
    let pieces: Vec<(u32, Vec<(KType, BigInt)>)> = comps
        .par_iter()
        .map(|c| {
            let d = tensor_decompose(&rs, &pair.to_branch_labels(&c.ktype), &small)?;
            let central = c.ktype.central + xi.central;
            let out = d
                .components
                .into_iter()
                .map(|(w, m)| (KType::new(pair.from_branch_labels(&w), central), m))
                .collect();
            Ok((c.level, out))
        })
        .collect::<Result<_>>()?;
    let mut out = KCharacterSeries::empty(pair, xi.central, max_level);
    for (level, items) in pieces {
        let slot = out.levels.get_mut(&level).expect("level in range");
        for (k, m) in items {
            *slot.entry(k).or_default() += m;
        }
    }
    Ok(out)
}

/// K-character of the generalized Verma module `N(ξ − δ_n)`.
pub fn verma_k_character(pair: &HermitianPair, xi: &KType, max_level: u32) -> Result<KCharacterSeries> {
    symmetric_algebra_times(pair, &xi.shift_central(-pair.delta_n), max_level)
}

struct SignedTerm<'a> {
    ktype: &'a KType,
    sign: i32,
    offset: u32,
}

/// Aligns the terms by central coordinate: returns the common top and each
/// term's level offset below it. `shift` is added to every central value.
fn align<'a>(pair: &HermitianPair, data: &'a DiracCohomologyData, shift: i64) -> Result<(i64, Vec<SignedTerm<'a>>)> {
    let all: Vec<(&KType, i32)> = data
        .plus
        .iter()
        .map(|k| (k, 1))
        .chain(data.minus.iter().map(|k| (k, -1)))
        .collect();
    let base = all
        .iter()
        .map(|(k, _)| k.central + shift)
        .max()
        .ok_or_else(|| Error::InvalidData(format!("module {} has empty Dirac cohomology", data.module_id)))?;
    let terms = all
        .into_iter()
        .map(|(k, sign)| {
            let drop = base - (k.central + shift);
            let offset = pair.level_of(drop).ok_or_else(|| {
                Error::InvalidData(format!(
                    "module {}: {k} is not on the level grid of the other terms",
                    data.module_id
                ))
            })?;
            Ok(SignedTerm { ktype: k, sign, offset: offset as u32 })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((base, terms))
}

/// Per-term characters of `S(p⁻) ⊗ E_ξ` (central shifted by `shift`), each
/// truncated so that it stays within `max_level` of the common top.
fn term_characters<'a>(
    pair: &HermitianPair,
    terms: &'a [SignedTerm<'a>],
    shift: i64,
    max_level: u32,
) -> Result<Vec<(&'a SignedTerm<'a>, KCharacterSeries)>> {
    terms
        .par_iter()
        .filter(|t| t.offset <= max_level)
        .map(|t| {
            let s = symmetric_algebra_times(pair, &t.ktype.shift_central(shift), max_level - t.offset)?;
            Ok((t, s))
        })
        .collect()
}

/// The signed HPZ sum truncated at `max_level`; errors on a negative net
/// multiplicity.
pub fn hpz_k_spectrum(pair: &HermitianPair, data: &DiracCohomologyData, max_level: u32) -> Result<KCharacterSeries> {
    let shift = -pair.delta_n;
    let (base, terms) = align(pair, data, shift)?;
    let chars = term_characters(pair, &terms, shift, max_level)?;
    let mut out = KCharacterSeries::empty(pair, base, max_level);
    for (t, s) in &chars {
        out.add_shifted(s, t.offset, t.sign);
    }
    if let Some((k, m)) = out.first_negative() {
        return Err(Error::NegativeMultiplicity {
            context: format!("K-spectrum of {}", data.module_id),
            weight: k.to_string(),
            mult: m.to_string(),
        });
    }
    Ok(out)
}

pub fn closed_form_spectrum(module: &str, max_level: u32) -> Result<KCharacterSeries> {
    let set = PairSet::builtin();
    let record = set.module(module)?;
    Ok(ClosedFormSpectrum::from(record).series(set.pair(&record.pair)?, max_level))
}

#[derive(Clone, Debug)]
pub struct LevelCheck {
    pub level: u32,
    pub central: i64,
    pub expected: Vec<KType>,
    pub computed: BTreeMap<KType, BigInt>,
    pub expected_dimension: BigUint,
    pub computed_dimension: BigInt,
    /// `Σ ±dim S^ℓ(p⁻)·dim E_ξ` over the aligned terms, from binomials.
    pub verma_dimension: BigInt,
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub module_id: String,
    pub max_level: u32,
    pub levels: Vec<LevelCheck>,
    pub error: Option<String>,
}

impl SpectrumReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self
                .levels
                .iter()
                .all(|l| l.matches && l.computed_dimension == l.verma_dimension)
    }
}

impl fmt::Display for SpectrumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} up to level {}: {}",
            self.module_id,
            self.max_level,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        if let Some(e) = &self.error {
            writeln!(f, "  error: {e}")?;
        }
        for l in &self.levels {
            let status = if !l.matches {
                "MISMATCH"
            } else if l.computed_dimension != l.verma_dimension {
                "DIM MISMATCH"
            } else {
                "ok"
            };
            writeln!(
                f,
                "  level {} central {}: {} K-types, dim {} [{}]",
                l.level,
                l.central,
                l.computed.len(),
                l.computed_dimension,
                status
            )?;
            if !l.matches {
                let exp: Vec<String> = l.expected.iter().map(KType::to_string).collect();
                let got: Vec<String> = l.computed.iter().map(|(k, m)| format!("{k}^{m}")).collect();
                writeln!(f, "    expected: {}", exp.join(" "))?;
                writeln!(f, "    computed: {}", got.join(" "))?;
            }
        }
        Ok(())
    }
}

fn verma_slice_dimension(pair: &HermitianPair, xi: &KType, level: u32) -> Result<BigUint> {
    let n = BigUint::from(pair.dim_p_minus);
    let d = BigUint::from(level);
    let sym = if level == 0 { BigUint::one() } else { binomial(n + &d - 1u32, d) };
    Ok(sym * pair.dimension(xi)?)
}

pub fn verify_spectrum(module: &str, max_level: u32) -> Result<SpectrumReport> {
    verify_spectrum_in(PairSet::builtin(), module, max_level)
}

/// Compares the HPZ sum with the closed-form family level by level,
/// matching levels by central coordinate.
pub fn verify_spectrum_in(set: &PairSet, module: &str, max_level: u32) -> Result<SpectrumReport> {
    let record = set.module(module)?;
    let pair = set.pair(&record.pair)?;
    let data = DiracCohomologyData::from(record);
    let expected = ClosedFormSpectrum::from(record).series(pair, max_level);
    let mut report = SpectrumReport {
        module_id: record.id.clone(),
        max_level,
        levels: Vec::new(),
        error: None,
    };
    let computed = match hpz_k_spectrum(pair, &data, max_level) {
        Ok(s) => s,
        Err(e) if e.is_guard() => return Err(e),
        Err(e) => {
            report.error = Some(e.to_string());
            return Ok(report);
        }
    };
    if computed.base_central != expected.base_central {
        report.error = Some(format!(
            "top central coordinate {} differs from the expected {}",
            computed.base_central, expected.base_central
        ));
    }
    let (_, terms) = align(pair, &data, -pair.delta_n)?;
    for level in 0..=max_level {
        let central = expected.central_at(level);
        let exp_level = &expected.levels[&level];
        let got: BTreeMap<KType, BigInt> = computed
            .levels
            .values()
            .flat_map(|m| m.iter())
            .filter(|(k, _)| k.central == central)
            .map(|(k, m)| (k.clone(), m.clone()))
            .collect();
        let mut expected_dimension = BigUint::zero();
        for (k, m) in exp_level {
            expected_dimension += pair.dimension(k)? * m.magnitude();
        }
        let mut computed_dimension = BigInt::zero();
        for (k, m) in &got {
            computed_dimension += BigInt::from(pair.dimension(k)?) * m;
        }
        let abs_level = u32::try_from((computed.base_central - central) / pair.level_step).ok();
        let mut verma_dimension = BigInt::zero();
        for t in &terms {
            if let Some(l) = abs_level.and_then(|a| a.checked_sub(t.offset)) {
                let d = BigInt::from(verma_slice_dimension(pair, t.ktype, l)?);
                if t.sign > 0 {
                    verma_dimension += d;
                } else {
                    verma_dimension -= d;
                }
            }
        }
        report.levels.push(LevelCheck {
            level,
            central,
            expected: exp_level.keys().cloned().collect(),
            matches: &got == exp_level,
            computed: got,
            expected_dimension,
            computed_dimension,
            verma_dimension,
        });
    }
    Ok(report)
}

/// One K-type contributed by one term of the sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    /// The `H_D^±` entry it comes from.
    pub source: KType,
    pub ktype: KType,
    pub mult: BigInt,
}

#[derive(Clone, Debug, Default)]
pub struct Bucket {
    pub key: Vec<i64>,
    pub positive: Vec<Contribution>,
    pub negative: Vec<Contribution>,
    /// `min(positive, negative)` per K-type.
    pub matched: BTreeMap<KType, BigInt>,
    /// Net `positive − negative`, non-zero entries only.
    pub leftover: BTreeMap<KType, BigInt>,
}

impl Bucket {
    pub fn cancels(&self) -> bool {
        self.leftover.is_empty()
    }

    fn totals(list: &[Contribution]) -> BTreeMap<KType, BigInt> {
        let mut out: BTreeMap<KType, BigInt> = BTreeMap::new();
        for c in list {
            *out.entry(c.ktype.clone()).or_default() += &c.mult;
        }
        out
    }

    pub fn positive_totals(&self) -> BTreeMap<KType, BigInt> {
        Self::totals(&self.positive)
    }

    pub fn negative_totals(&self) -> BTreeMap<KType, BigInt> {
        Self::totals(&self.negative)
    }
}

#[derive(Clone, Debug)]
pub struct LedgerLevel {
    pub level: u32,
    pub central: i64,
    pub buckets: BTreeMap<Vec<i64>, Bucket>,
}

/// Side-by-side K-types of the `N(ξ)` and `N(η)`, before the `δ_n` shift,
/// bucketed by the semisimple coordinates at `grouping` (1-based).
#[derive(Clone, Debug)]
pub struct CancellationReport {
    pub module_id: String,
    pub pair: String,
    pub delta_n: i64,
    pub grouping: Vec<usize>,
    pub max_level: u32,
    pub levels: Vec<LedgerLevel>,
}

impl CancellationReport {
    pub fn buckets(&self) -> impl Iterator<Item = (&LedgerLevel, &Bucket)> {
        self.levels.iter().flat_map(|l| l.buckets.values().map(move |b| (l, b)))
    }

    /// Every leftover K-type before the `δ_n` shift.
    pub fn leftovers(&self) -> BTreeMap<KType, BigInt> {
        self.buckets()
            .flat_map(|(_, b)| b.leftover.iter().map(|(k, m)| (k.clone(), m.clone())))
            .collect()
    }

    /// Leftovers in a bucket, across levels.
    pub fn bucket_leftovers(&self, key: &[i64]) -> BTreeMap<KType, BigInt> {
        self.buckets()
            .filter(|(_, b)| b.key == key)
            .flat_map(|(_, b)| b.leftover.iter().map(|(k, m)| (k.clone(), m.clone())))
            .collect()
    }

    pub fn bucket_keys(&self) -> std::collections::BTreeSet<Vec<i64>> {
        self.buckets().map(|(_, b)| b.key.clone()).collect()
    }
}

impl fmt::Display for CancellationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} on {}: grouping {:?}, levels 0..={} (K-types before the δ_n shift of {})",
            self.module_id, self.pair, self.grouping, self.max_level, self.delta_n
        )?;
        for l in &self.levels {
            writeln!(f, "level {} (central {}):", l.level, l.central)?;
            for b in l.buckets.values() {
                let matched: BigInt = b.matched.values().sum();
                write!(f, "  bucket {:?}: +{} -{} matched {}", b.key, b.positive.len(), b.negative.len(), matched)?;
                if b.cancels() {
                    writeln!(f, ", cancels")?;
                } else {
                    let rest: Vec<String> = b.leftover.iter().map(|(k, m)| format!("{k}^{m}")).collect();
                    writeln!(f, ", leftover {}", rest.join(" "))?;
                }
            }
        }
        Ok(())
    }
}

pub fn cancellation_report(
    pair: &HermitianPair,
    data: &DiracCohomologyData,
    max_level: u32,
    grouping: &[usize],
) -> Result<CancellationReport> {
    let rank = pair.k_system.rank;
    if let Some(&bad) = grouping.iter().find(|&&g| g == 0 || g > rank) {
        return Err(Error::IndexOutOfRange { index: bad, rank });
    }
    let (base, terms) = align(pair, data, 0)?;
    let chars = term_characters(pair, &terms, 0, max_level)?;
    let mut levels: Vec<LedgerLevel> = (0..=max_level)
        .map(|l| LedgerLevel {
            level: l,
            central: base - pair.level_step * i64::from(l),
            buckets: BTreeMap::new(),
        })
        .collect();
    for (t, s) in &chars {
        for (l, m) in &s.levels {
            let level = &mut levels[(l + t.offset) as usize];
            for (k, mult) in m {
                let key: Vec<i64> = grouping.iter().map(|&g| k.ss.get(g - 1)).collect();
                let bucket = level.buckets.entry(key.clone()).or_insert_with(|| Bucket { key, ..Bucket::default() });
                let c = Contribution { source: t.ktype.clone(), ktype: k.clone(), mult: mult.clone() };
                if t.sign > 0 {
                    bucket.positive.push(c);
                } else {
                    bucket.negative.push(c);
                }
            }
        }
    }
    for level in &mut levels {
        for b in level.buckets.values_mut() {
            b.positive.sort_by(|x, y| (&x.source, &x.ktype).cmp(&(&y.source, &y.ktype)));
            b.negative.sort_by(|x, y| (&x.source, &x.ktype).cmp(&(&y.source, &y.ktype)));
            let pos = b.positive_totals();
            let neg = b.negative_totals();
            for (k, p) in &pos {
                if let Some(n) = neg.get(k) {
                    b.matched.insert(k.clone(), p.min(n).clone());
                }
            }
            let mut net = pos;
            for (k, n) in neg {
                *net.entry(k).or_default() -= n;
            }
            net.retain(|_, v| !v.is_zero());
            b.leftover = net;
        }
    }
    Ok(CancellationReport {
        module_id: data.module_id.clone(),
        pair: pair.id.clone(),
        delta_n: pair.delta_n,
        grouping: grouping.to_vec(),
        max_level,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::pair_data;

    fn k(s: &str) -> KType {
        KType::parse(s).unwrap()
    }

    #[test]
    fn verma_of_delta_n_is_symmetric_algebra() {
        let p = pair_data("EIII").unwrap();
        let s = verma_k_character(p, &k("[0,0,0,0,0,24]"), 1).unwrap();
        assert_eq!(s.levels[&0].keys().collect::<Vec<_>>(), vec![&k("[0,0,0,0,0,0]")]);
        assert_eq!(s.levels[&1].keys().collect::<Vec<_>>(), vec![&k("[0,1,0,0,0,-3]")]);
        let s = verma_k_character(p, &k("[0,0,0,0,0,12]"), 0).unwrap();
        assert_eq!(s.levels[&0].keys().collect::<Vec<_>>(), vec![&k("[0,0,0,0,0,-12]")]);
    }

    #[test]
    fn verma_level_one_matches_spin_rule() {
        // ξ = [1,0,0,0,0,3]: the level-1 slice is E_[0,1,0,0,0] ⊗ E_[1,0,0,0,0]
        // in K labels, i.e. half-spin ⊗ half-spin of D5.
        let p = pair_data("EIII").unwrap();
        let s = verma_k_character(p, &k("[1,0,0,0,0,3]"), 1).unwrap();
        let got: Vec<String> = s.levels[&1].keys().map(KType::to_string).collect();
        assert_eq!(got, vec!["[0,0,0,0,0,-24]", "[0,0,0,1,0,-24]", "[1,1,0,0,0,-24]"]);
        assert_eq!(s.level_dimension(p, 1).unwrap(), BigInt::from(256));
    }

    #[test]
    fn closed_form_families() {
        let s = closed_form_spectrum("E6_L_minus3zeta", 3).unwrap();
        let got: Vec<String> = s.ktypes().map(|(k, _)| k.to_string()).collect();
        assert_eq!(got, vec!["[0,0,0,0,0,-12]", "[0,1,0,0,0,-15]", "[0,2,0,0,0,-18]", "[0,3,0,0,0,-21]"]);
        let s = closed_form_spectrum("E6_L_mu", 6).unwrap();
        assert_eq!(s.levels[&0].keys().collect::<Vec<_>>(), vec![&k("[0,0,0,0,1,-18]")]);
        for l in 0..=6u32 {
            assert_eq!(s.levels[&l].len() as u32, l / 2 + 1);
        }
        let s = closed_form_spectrum("E7_pi2", 3).unwrap();
        assert_eq!(s.levels[&2].len(), 2);
        assert!(s.levels[&3].contains_key(&k("[1,0,0,0,0,1,-30]")));
    }

    #[test]
    fn registry_lookup() {
        let d = dirac_registry("E7_pi2").unwrap();
        assert_eq!(d.plus, vec![k("[0,0,0,0,0,0,3]")]);
        assert_eq!(d.minus, vec![k("[0,0,0,0,0,0,-3]")]);
        assert!(matches!(dirac_registry("nope"), Err(Error::Unknown { .. })));
    }

    #[test]
    fn e6_wallach_small() {
        let report = verify_spectrum("e6-wallach", 4).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn negative_net_is_an_error() {
        let p = pair_data("EIII").unwrap();
        let data = DiracCohomologyData {
            module_id: "bogus".into(),
            pair: "EIII".into(),
            plus: vec![],
            minus: vec![k("[0,0,0,0,0,12]")],
        };
        assert!(matches!(hpz_k_spectrum(p, &data, 1), Err(Error::NegativeMultiplicity { .. })));
    }

    #[test]
    fn minus_three_entry_goes_negative() {
        let p = pair_data("EIII").unwrap();
        let mut data = dirac_registry("e6-l-mu").unwrap();
        assert_eq!(data.minus[1], k("[1,0,0,0,0,3]"));
        data.minus[1] = k("[1,0,0,0,0,-3]");
        match hpz_k_spectrum(p, &data, 3) {
            Err(Error::NegativeMultiplicity { weight, .. }) => assert_eq!(weight, "[1,0,0,0,0,-27]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn off_grid_terms_are_rejected() {
        let p = pair_data("EIII").unwrap();
        let data = DiracCohomologyData {
            module_id: "bogus".into(),
            pair: "EIII".into(),
            plus: vec![k("[0,0,0,0,0,12]"), k("[0,0,0,0,0,11]")],
            minus: vec![],
        };
        assert!(matches!(hpz_k_spectrum(p, &data, 1), Err(Error::InvalidData(_))));
    }

    #[test]
    fn e6_wallach_ledger_leftover() {
        let p = pair_data("EIII").unwrap();
        let data = dirac_registry("e6-wallach").unwrap();
        let r = cancellation_report(p, &data, 4, &[1, 3, 4]).unwrap();
        let left: Vec<String> = r.leftovers().keys().map(KType::to_string).collect();
        assert_eq!(left, vec!["[0,0,0,0,0,12]", "[0,1,0,0,0,9]", "[0,2,0,0,0,6]", "[0,3,0,0,0,3]", "[0,4,0,0,0,0]"]);
        assert!(cancellation_report(p, &data, 1, &[6]).is_err());
    }
}
