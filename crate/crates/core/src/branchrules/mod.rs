//! Closed-form tensor product rules stored as data, and their verification
//! against the tensor engine.
//!
//! A rule predicts `E_factor ⊗ E_family` as `Ẽ_{family + ν}` over a list of
//! shifts `ν` (non-dominant results dropped), minus extra shifts whose
//! condition on the family parameters holds. The shipped table lives in
//! `data/rules.toml`; [`RuleSet::load`] reads a replacement.

pub mod expr;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, Series, SystemId, Weight};
use crate::tensor::{tensor_decompose, Decomposition};

pub use expr::{parse_shift_term, parse_weight_expr, ShiftTerm, WeightExpr};

pub const BUILTIN_RULES: &str = include_str!("../../data/rules.toml");
const SUPPORTED_VERSION: u32 = 1;

static BUILTIN: LazyLock<RuleSet> =
    LazyLock::new(|| RuleSet::parse(BUILTIN_RULES, "<builtin rules.toml>").expect("shipped rule table is valid"));

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    version: u32,
    #[serde(default)]
    rule: Vec<RawRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    id: Spanned<String>,
    series: String,
    min_rank: usize,
    max_rank: Option<usize>,
    factor: Spanned<String>,
    family: BTreeMap<String, String>,
    #[serde(default)]
    multiplicity_free: bool,
    #[serde(default)]
    trivial_at_zero: bool,
    shifts: Vec<Spanned<String>>,
    #[serde(default)]
    subtract: Vec<RawClause>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClause {
    when: Spanned<String>,
    shifts: Vec<Spanned<String>>,
}

/// A value together with the 1-based line of the data file it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located<T> {
    pub value: T,
    pub line: usize,
}

/// `p=k or q=l ...`: holds when any listed parameter takes its value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    alternatives: Vec<(String, i64)>,
}

impl Condition {
    pub fn holds(&self, params: &RuleParams) -> Result<bool> {
        for (name, value) in &self.alternatives {
            if params.get(name)? == *value {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let alternatives = s
            .split(" or ")
            .map(|part| {
                let (name, value) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("condition `{s}` needs the form p=k")))?;
                let value = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad value in condition `{s}`")))?;
                Ok((name.trim().to_string(), value))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Condition { alternatives })
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (name, value)) in self.alternatives.iter().enumerate() {
            if k > 0 {
                f.write_str(" or ")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CorrectionClause {
    pub when: Condition,
    pub shifts: Vec<Located<ShiftTerm>>,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct ClosedFormRule {
    pub id: String,
    pub series: Series,
    pub min_rank: usize,
    pub max_rank: Option<usize>,
    pub factor: Located<WeightExpr>,
    /// Parameter name → weight it multiplies, in name order.
    pub family: Vec<(String, WeightExpr)>,
    pub multiplicity_free: bool,
    /// With every family parameter zero the answer is `{factor: 1}`.
    pub trivial_at_zero: bool,
    pub shifts: Vec<Located<ShiftTerm>>,
    pub subtract: Vec<CorrectionClause>,
    pub line: usize,
}

/// Parameter assignment: optional rank `n` plus named family coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleParams {
    pub rank: Option<usize>,
    values: BTreeMap<String, i64>,
}

impl RuleParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_rank(mut self, n: usize) -> Self {
        self.rank = Some(n);
        self
    }

    pub fn with(mut self, name: &str, value: i64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn get(&self, name: &str) -> Result<i64> {
        self.values
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingParameter(name.to_string()))
    }

    pub fn values(&self) -> &BTreeMap<String, i64> {
        &self.values
    }
}

impl FromStr for RuleParams {
    type Err = Error;

    /// `n=5,a=1,d=0`.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = RuleParams::new();
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("parameter `{part}` needs the form name=value")))?;
            let v: i64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("parameter `{part}` is not an integer")))?;
            match k.trim() {
                "n" => {
                    p.rank = Some(usize::try_from(v).map_err(|_| Error::Parse(format!("bad rank {v}")))?);
                }
                name => {
                    p.values.insert(name.to_string(), v);
                }
            }
        }
        Ok(p)
    }
}

impl fmt::Display for RuleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(n) = self.rank {
            parts.push(format!("n={n}"));
        }
        parts.extend(self.values.iter().map(|(k, v)| format!("{k}={v}")));
        f.write_str(&parts.join(","))
    }
}

/// One surviving term of a closed form, with the data line that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictedTerm {
    pub weight: Weight,
    /// Negative for correction clauses.
    pub mult: i64,
    pub line: usize,
}

impl ClosedFormRule {
    pub fn system(&self, params: &RuleParams) -> Result<SystemId> {
        let rank = match (params.rank, self.max_rank) {
            (Some(n), _) => n,
            (None, Some(m)) if m == self.min_rank => m,
            _ => return Err(Error::MissingParameter("n".into())),
        };
        if rank < self.min_rank || self.max_rank.is_some_and(|m| rank > m) {
            return Err(Error::InvalidData(format!(
                "rule {} does not apply to {}{}",
                self.id, self.series, rank
            )));
        }
        SystemId::new(self.series, rank).validate()
    }

    pub fn parameter_names(&self) -> impl Iterator<Item = &str> {
        self.family.iter().map(|(k, _)| k.as_str())
    }

    pub fn factor_weight(&self, rank: usize) -> Result<Weight> {
        self.factor.value.eval(rank, 0)
    }

    pub fn family_weight(&self, rank: usize, params: &RuleParams) -> Result<Weight> {
        let mut w = Weight::zero(rank);
        for (name, base) in &self.family {
            let c = params.get(name)?;
            if c < 0 {
                return Err(Error::InvalidData(format!("parameter {name}={c} must be non-negative")));
            }
            w += &(&base.eval(rank, 0)? * c);
        }
        Ok(w)
    }

    fn at_zero(&self, params: &RuleParams) -> Result<bool> {
        for name in self.parameter_names() {
            if params.get(name)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every dominant term the rule contributes at `params`, corrections
    /// included with negative multiplicity.
    pub fn predicted_terms(&self, params: &RuleParams) -> Result<Vec<PredictedTerm>> {
        let rank = self.system(params)?.rank;
        let base = self.family_weight(rank, params)?;
        if self.trivial_at_zero && self.at_zero(params)? {
            return Ok(vec![PredictedTerm {
                weight: self.factor_weight(rank)?,
                mult: 1,
                line: self.factor.line,
            }]);
        }
        let mut out = Vec::new();
        let mut push = |entry: &Located<ShiftTerm>, sign: i64| -> Result<()> {
            for (nu, p) in entry.value.expand(rank)? {
                let w = &base + &nu;
                if w.is_dominant() {
                    out.push(PredictedTerm { weight: w, mult: sign * i64::from(p), line: entry.line });
                }
            }
            Ok(())
        };
        for entry in &self.shifts {
            push(entry, 1)?;
        }
        for clause in &self.subtract {
            if clause.when.holds(params)? {
                for entry in &clause.shifts {
                    push(entry, -1)?;
                }
            }
        }
        Ok(out)
    }

    pub fn closed_form(&self, params: &RuleParams) -> Result<Decomposition> {
        let system = self.system(params)?;
        let rank = system.rank;
        let mut acc: BTreeMap<Weight, BigInt> = BTreeMap::new();
        for t in self.predicted_terms(params)? {
            *acc.entry(t.weight).or_default() += t.mult;
        }
        let factors = (self.factor_weight(rank)?, self.family_weight(rank, params)?);
        let mut components = BTreeMap::new();
        for (w, m) in acc {
            if m.is_negative() {
                return Err(Error::NegativeMultiplicity {
                    context: format!("rule {} at {params}", self.id),
                    weight: w.to_string(),
                    mult: m.to_string(),
                });
            }
            if !m.is_zero() {
                components.insert(w, m);
            }
        }
        Ok(Decomposition { system, factors, components })
    }

    /// `{n?} × Π_{param} 0..=bound` over the given ranks (ignored for
    /// fixed-rank rules).
    pub fn grid(&self, ranks: &[usize], bound: i64) -> Vec<RuleParams> {
        let ranks: Vec<Option<usize>> = if self.max_rank == Some(self.min_rank) {
            vec![None]
        } else {
            ranks.iter().map(|&n| Some(n)).collect()
        };
        let mut points: Vec<RuleParams> = ranks
            .into_iter()
            .map(|n| RuleParams { rank: n, values: BTreeMap::new() })
            .collect();
        for name in self.parameter_names() {
            points = points
                .into_iter()
                .flat_map(|p| (0..=bound).map(move |v| p.clone().with(name, v)))
                .collect();
        }
        points
    }
}

#[derive(Clone, Debug)]
pub struct RuleSet {
    pub version: u32,
    pub source: String,
    rules: Vec<ClosedFormRule>,
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn located_shifts(src: &str, raw: Vec<Spanned<String>>) -> Result<Vec<Located<ShiftTerm>>> {
    raw.into_iter()
        .map(|s| {
            let line = line_of(src, s.span().start);
            let value = parse_shift_term(s.get_ref())
                .map_err(|e| Error::InvalidData(format!("line {line}: {e}")))?;
            Ok(Located { value, line })
        })
        .collect()
}

impl RuleSet {
    pub fn builtin() -> &'static RuleSet {
        &BUILTIN
    }

    pub fn load(path: &Path) -> Result<RuleSet> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidData(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&src, &path.display().to_string())
    }

    pub fn parse(src: &str, source: &str) -> Result<RuleSet> {
        let raw: RawFile = toml::from_str(src).map_err(|e| Error::Parse(format!("{source}: {e}")))?;
        if raw.version != SUPPORTED_VERSION {
            return Err(Error::InvalidData(format!(
                "{source}: rule table version {} is not supported",
                raw.version
            )));
        }
        let mut rules = Vec::with_capacity(raw.rule.len());
        for r in raw.rule {
            let line = line_of(src, r.id.span().start);
            let ctx = |e: Error| Error::InvalidData(format!("{source}:{line}: {e}"));
            let series: Series = r.series.parse().map_err(ctx)?;
            let factor = Located {
                line: line_of(src, r.factor.span().start),
                value: parse_weight_expr(r.factor.get_ref()).map_err(ctx)?,
            };
            let family = r
                .family
                .iter()
                .map(|(k, v)| Ok((k.clone(), parse_weight_expr(v)?)))
                .collect::<Result<Vec<_>>>()
                .map_err(ctx)?;
            let shifts = located_shifts(src, r.shifts)?;
            let subtract = r
                .subtract
                .into_iter()
                .map(|c| {
                    let line = line_of(src, c.when.span().start);
                    Ok(CorrectionClause {
                        when: c.when.get_ref().parse()?,
                        shifts: located_shifts(src, c.shifts)?,
                        line,
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map_err(ctx)?;
            let id = r.id.into_inner();
            if rules.iter().any(|x: &ClosedFormRule| x.id == id) {
                return Err(ctx(Error::InvalidData(format!("duplicate rule id {id}"))));
            }
            rules.push(ClosedFormRule {
                id,
                series,
                min_rank: r.min_rank,
                max_rank: r.max_rank,
                factor,
                family,
                multiplicity_free: r.multiplicity_free,
                trivial_at_zero: r.trivial_at_zero,
                shifts,
                subtract,
                line,
            });
        }
        Ok(RuleSet { version: raw.version, source: source.to_string(), rules })
    }

    pub fn rules(&self) -> &[ClosedFormRule] {
        &self.rules
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.rules.iter().map(|r| r.id.as_str())
    }

    pub fn get(&self, id: &str) -> Result<&ClosedFormRule> {
        self.rules
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::Unknown { kind: "rule", name: id.to_string() })
    }
}

/// Closed-form decomposition from the shipped table.
pub fn closed_form(rule_id: &str, params: &RuleParams) -> Result<Decomposition> {
    RuleSet::builtin().get(rule_id)?.closed_form(params)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub weight: Weight,
    pub predicted: BigInt,
    pub engine: BigInt,
    /// Data lines whose shifts produce `weight` at this point.
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PointReport {
    pub params: RuleParams,
    pub system: Option<SystemId>,
    pub predicted: Option<Decomposition>,
    pub engine: Option<Decomposition>,
    pub mismatches: Vec<Mismatch>,
    /// Problems other than component mismatches.
    pub errors: Vec<String>,
}

impl PointReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.errors.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct RuleReport {
    pub rule_id: String,
    pub source: String,
    pub rule_line: usize,
    pub points: Vec<PointReport>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(PointReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PointReport> {
        self.points.iter().filter(|p| !p.passed())
    }
}

fn fmt_components(d: &Option<Decomposition>) -> String {
    match d {
        None => "-".into(),
        Some(d) => d
            .components
            .iter()
            .map(|(w, m)| if m == &BigInt::from(1) { w.to_string() } else { format!("{w}^{m}") })
            .collect::<Vec<_>>()
            .join(" "),
    }
}

impl fmt::Display for RuleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bad = self.failures().count();
        writeln!(
            f,
            "rule {} ({}:{}): {} points, {} failed",
            self.rule_id,
            self.source,
            self.rule_line,
            self.points.len(),
            bad
        )?;
        for p in self.failures() {
            writeln!(f, "  at {}:", p.params)?;
            for e in &p.errors {
                writeln!(f, "    error: {e}")?;
            }
            for m in &p.mismatches {
                let lines: Vec<String> = m.lines.iter().map(|l| format!("{}:{l}", self.source)).collect();
                writeln!(
                    f,
                    "    {}: rule {} engine {}{}",
                    m.weight,
                    m.predicted,
                    m.engine,
                    if lines.is_empty() { String::new() } else { format!(" [{}]", lines.join(", ")) }
                )?;
            }
            if !p.mismatches.is_empty() {
                writeln!(f, "    rule:   {}", fmt_components(&p.predicted))?;
                writeln!(f, "    engine: {}", fmt_components(&p.engine))?;
            }
        }
        Ok(())
    }
}

fn verify_point(rule: &ClosedFormRule, params: RuleParams) -> PointReport {
    let mut report = PointReport {
        params,
        system: None,
        predicted: None,
        engine: None,
        mismatches: Vec::new(),
        errors: Vec::new(),
    };
    let system = match rule.system(&report.params) {
        Ok(s) => s,
        Err(e) => {
            report.errors.push(e.to_string());
            return report;
        }
    };
    report.system = Some(system);
    let rs = match RootSystem::shared(system) {
        Ok(rs) => rs,
        Err(e) => {
            report.errors.push(e.to_string());
            return report;
        }
    };
    let engine = rule.factor_weight(system.rank).and_then(|lam| {
        let fam = rule.family_weight(system.rank, &report.params)?;
        tensor_decompose(&rs, &lam, &fam)
    });
    let engine = match engine {
        Ok(d) => d,
        Err(e) => {
            report.errors.push(format!("engine: {e}"));
            return report;
        }
    };
    if rule.multiplicity_free && !engine.is_multiplicity_free() {
        report.errors.push("engine decomposition is not multiplicity-free".into());
    }
    let terms = rule.predicted_terms(&report.params).unwrap_or_default();
    match rule.closed_form(&report.params) {
        Ok(predicted) => {
            let keys: std::collections::BTreeSet<&Weight> =
                predicted.components.keys().chain(engine.components.keys()).collect();
            for w in keys {
                let (p, e) = (predicted.mult(w), engine.mult(w));
                if p != e {
                    let mut lines: Vec<usize> = terms.iter().filter(|t| &t.weight == w).map(|t| t.line).collect();
                    lines.dedup();
                    report.mismatches.push(Mismatch { weight: w.clone(), predicted: p, engine: e, lines });
                }
            }
            if !predicted.conserves_dimension(&rs) {
                report.errors.push(format!(
                    "closed form has total dimension {} but the product has {}",
                    predicted.total_dimension(&rs),
                    predicted.product_dimension(&rs)
                ));
            }
            report.predicted = Some(predicted);
        }
        Err(e) => report.errors.push(format!("closed form: {e}")),
    }
    report.engine = Some(engine);
    report
}

/// Compare the closed form with [`tensor_decompose`] at every grid point.
pub fn verify_rule(rules: &RuleSet, rule_id: &str, grid: &[RuleParams]) -> Result<RuleReport> {
    let rule = rules.get(rule_id)?;
    let points = grid.par_iter().map(|p| verify_point(rule, p.clone())).collect();
    Ok(RuleReport {
        rule_id: rule.id.clone(),
        source: rules.source.clone(),
        rule_line: rule.line,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec())
    }

    #[test]
    fn builtin_table_loads() {
        let rules = RuleSet::builtin();
        assert_eq!(rules.version, 1);
        assert_eq!(rules.rules().len(), 14);
        assert!(matches!(rules.get("nope"), Err(Error::Unknown { .. })));
        let r = rules.get("e6-100001").unwrap();
        assert_eq!(r.shifts.len(), 29);
        assert_eq!(r.subtract.len(), 2);
        assert!(r.shifts[1].line > r.shifts[0].line);
    }

    #[test]
    fn first_e6_rule_at_a2_f0() {
        let d = closed_form("e6-100000", &RuleParams::new().with("a", 2).with("f", 0)).unwrap();
        let got: Vec<Weight> = d.components.keys().cloned().collect();
        assert_eq!(got, vec![w(&[1, 0, 0, 0, 0, 1]), w(&[1, 0, 1, 0, 0, 0]), w(&[3, 0, 0, 0, 0, 0])]);
    }

    #[test]
    fn trivial_family_returns_the_factor() {
        let d = closed_form("e6-100001", &RuleParams::new().with("a", 0).with("f", 0)).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.mult(&w(&[1, 0, 0, 0, 0, 1])), BigInt::from(1));
        let d = closed_form("d5-spin-plus", &RuleParams::new().with("a", 0).with("d", 0)).unwrap();
        assert_eq!(d.components.keys().collect::<Vec<_>>(), vec![&w(&[0, 0, 0, 0, 1])]);
    }

    #[test]
    fn adjoint_rule_correction_at_f2() {
        // a=0 removes one copy of the zero shift.
        let p = RuleParams::new().with("a", 0).with("f", 2);
        let d = closed_form("e6-010000", &p).unwrap();
        assert_eq!(d.mult(&w(&[0, 0, 0, 0, 0, 2])), BigInt::from(1));
        assert_eq!(d, RuleSet::builtin().get("e6-010000").unwrap().closed_form(&p).unwrap());
    }

    #[test]
    fn missing_parameters() {
        assert!(matches!(
            closed_form("dn-vector", &RuleParams::new().with("a", 1).with("d", 1)),
            Err(Error::MissingParameter(_))
        ));
        assert!(matches!(
            closed_form("e6-100000", &RuleParams::new().with("a", 1)),
            Err(Error::MissingParameter(_))
        ));
    }

    #[test]
    fn params_round_trip() {
        let p: RuleParams = "n=5, a=1,d=2".parse().unwrap();
        assert_eq!(p.rank, Some(5));
        assert_eq!(p.get("d").unwrap(), 2);
        assert_eq!(p.to_string(), "n=5,a=1,d=2");
        assert!("a".parse::<RuleParams>().is_err());
    }

    #[test]
    fn every_rule_matches_on_a_small_grid() {
        let rules = RuleSet::builtin();
        for id in rules.ids() {
            let grid = rules.get(id).unwrap().grid(&[4, 5], 1);
            let report = verify_rule(rules, id, &grid).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn mismatch_report_cites_data_line() {
        let src = BUILTIN_RULES.replace("\"-w1+w2\",", "\"-w1+w2-w{n-1}\",");
        let rules = RuleSet::parse(&src, "variant.toml").unwrap();
        let line = rules.get("dn-vector").unwrap().shifts[3].line;
        let p = RuleParams::new().with_rank(5).with("a", 1).with("d", 1);
        let report = verify_rule(&rules, "dn-vector", &[p]).unwrap();
        assert!(!report.passed());
        let text = report.to_string();
        assert!(text.contains(&format!("variant.toml:{line}")), "{text}");
        assert!(text.contains("[0,1,0,1,0]"), "{text}");
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(RuleSet::parse("version = 2\n", "x").is_err());
        let bad = "version = 1\n[[rule]]\nid = \"x\"\nseries = \"E\"\nmin_rank = 6\nfactor = \"[1]\"\nfamily = {}\nshifts = [\"[1,2\"]\n";
        let err = RuleSet::parse(bad, "x").unwrap_err().to_string();
        assert!(err.contains("line 8"), "{err}");
    }

    #[test]
    fn spin_minus_survivors_match_orthogonal_model() {
        // Half-spin weights (±1/2)^n with an odd number of minus signs; a
        // weight survives iff λ + λ'' + δ is regular. Compare the dominant
        // survivors with the rule's shift list.
        for n in 4..=8usize {
            for (a, d) in [(0i64, 0i64), (1, 0), (0, 1), (2, 3)] {
                let mut expected = Vec::new();
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() % 2 == 0 {
                        continue;
                    }
                    // Doubled orthogonal coordinates of λ + λ'' + δ.
                    let lam: Vec<i64> = (0..n).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
                    let mu: Vec<i64> = (0..n)
                        .map(|k| {
                            let rho = 2 * (n - 1 - k) as i64;
                            let fam = if k == 0 { 2 * a } else { 0 } + if k + 1 < n { d } else { -d };
                            lam[k] + rho + fam
                        })
                        .collect();
                    let regular = (0..n - 1).all(|k| mu[k] > mu[k + 1]) && mu[n - 2] + mu[n - 1] != 0;
                    if regular {
                        // Orthogonal → fundamental coordinates.
                        let mut f: Vec<i64> = (0..n - 1).map(|k| (lam[k] - lam[k + 1]) / 2).collect();
                        f.push((lam[n - 2] + lam[n - 1]) / 2);
                        let mut fam = vec![0; n];
                        fam[0] = a;
                        fam[n - 2] = d;
                        let total: Vec<i64> = f.iter().zip(&fam).map(|(x, y)| x + y).collect();
                        if total.iter().all(|&x| x >= 0) {
                            expected.push(Weight::new(total));
                        }
                    }
                }
                expected.sort();
                let p = RuleParams::new().with_rank(n).with("a", a).with("d", d);
                let got: Vec<Weight> = closed_form("dn-spin-minus", &p).unwrap().components.into_keys().collect();
                assert_eq!(got, expected, "n={n} a={a} d={d}");
            }
        }
    }
}
