//! Command-line front end. [`run`] is the whole program minus process exit.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::branchrules::{verify_rule, RuleParams, RuleSet};
use crate::error::Error;
use crate::hermitian::{KType, PairSet};
use crate::hpz::{
    cancellation_report, hpz_k_spectrum, CancellationReport, Contribution, verify_spectrum_in, verma_k_character, ClosedFormSpectrum,
    DiracCohomologyData, KCharacterSeries, DEFAULT_MAX_LEVEL,
};
use crate::rootsys::{RootSystem, SystemId, Weight};
use crate::tensor::{tensor_decompose, tensor_oracle, Decomposition};
use crate::weights::{dominant_weight_multiplicities, full_weight_multiset, weyl_dimension};
use crate::weyl::to_dominant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult { status: EXIT_OK, stdout, stderr: String::new() }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "weylring", version, about = "Exact Weyl character ring and K-spectrum computations")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Rule table replacing the built-in one.
    #[arg(long, global = true, value_name = "PATH")]
    rules: Option<PathBuf>,
    /// Pair and module table replacing the built-in one.
    #[arg(long, global = true, value_name = "PATH")]
    pairs: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SystemArg {
    /// Root system, e.g. E6, D5, A3.
    #[arg(long = "type", value_name = "TYPE")]
    system: SystemId,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Positive roots and δ.
    Roots(SystemArg),
    /// Dominant representative and sign of a weight.
    Dominant {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Dimension of an irreducible module.
    Dim {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long)]
        weight: String,
    },
    /// Weights of an irreducible module with multiplicities.
    Weights {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long)]
        weight: String,
        /// Only the dominant weights.
        #[arg(long)]
        dominant: bool,
    },
    /// Decompose a tensor product of two irreducible modules.
    Tensor {
        #[command(flatten)]
        sys: SystemArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Use the brute-force convolution instead.
        #[arg(long)]
        oracle: bool,
    },
    /// Evaluate a closed-form rule, or list the rules.
    Rule {
        #[arg(long, required_unless_present = "list")]
        id: Option<String>,
        /// Parameters such as `n=5,a=1,d=0`.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        list: bool,
    },
    /// Components of S(p⁻) up to a level.
    Schmid {
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = 2)]
        max_level: u32,
    },
    /// K-spectrum of a module, or the K-character of a generalized Verma module.
    Kspectrum {
        #[arg(long, required_unless_present = "verma")]
        module: Option<String>,
        /// Print the expected family instead of running the signed sum.
        #[arg(long)]
        closed_form: bool,
        /// K-type ξ: print the K-character of N(ξ − δ_n).
        #[arg(long, requires = "pair", allow_hyphen_values = true)]
        verma: Option<String>,
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: u32,
    },
    /// Cancellation ledger of the signed sum, bucketed by coordinates.
    Report {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 4)]
        max_level: u32,
        /// 1-based semisimple coordinate positions, e.g. `2,3,4,5`.
        #[arg(long, value_delimiter = ',')]
        group: Vec<usize>,
    },
    /// Check closed forms against the engines.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Only this rule.
        #[arg(long)]
        rule: Option<String>,
        /// Only this module.
        #[arg(long)]
        module: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: u32,
        /// Parameter bound for rule grids (default 2 for rank families, 3 otherwise).
        #[arg(long)]
        bound: Option<i64>,
        /// Ranks for rank families.
        #[arg(long, value_delimiter = ',', default_value = "4,5,6,7")]
        ranks: Vec<usize>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Rules,
    Spectra,
    All,
}

struct Ctx {
    format: Format,
    rules: Option<PathBuf>,
    pairs: Option<PathBuf>,
}

impl Ctx {
    fn rules(&self) -> Result<RuleSet, Error> {
        match &self.rules {
            Some(p) => RuleSet::load(p),
            None => Ok(RuleSet::builtin().clone()),
        }
    }

    fn pairs(&self) -> Result<PairSet, Error> {
        match &self.pairs {
            Some(p) => PairSet::load(p),
            None => Ok(PairSet::builtin().clone()),
        }
    }

    fn emit(&self, text: String, value: Value) -> String {
        match self.format {
            Format::Text => text,
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
                s.push('\n');
                s
            }
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GuardExceeded { .. } => EXIT_GUARD,
        Error::NegativeMultiplicity { .. } | Error::InvalidData(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

fn big(n: impl ToString) -> Value {
    Value::Number(n.to_string().parse().expect("integers are valid JSON numbers"))
}

fn system_json(id: SystemId) -> Value {
    json!({ "series": id.series.to_string(), "rank": id.rank })
}

fn weight_arg(rs: &RootSystem, s: &str) -> Result<Weight, Error> {
    let w = Weight::parse(s)?;
    rs.check_weight(&w)?;
    Ok(w)
}

pub fn decomposition_json(d: &Decomposition) -> Value {
    json!({
        "system": system_json(d.system),
        "components": d.components.iter().map(|(w, m)| json!({ "weight": w, "mult": big(m) })).collect::<Vec<_>>(),
    })
}

pub fn series_json(s: &KCharacterSeries) -> Value {
    json!({
        "pair": s.pair,
        "levels": s.levels.iter().map(|(l, m)| json!({
            "level": l,
            "central": s.central_at(*l),
            "ktypes": m.iter().map(|(k, mult)| ktype_mult_json(k, mult)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn ktype_mult_json(k: &KType, m: &BigInt) -> Value {
    json!({ "ss": k.ss, "central": k.central, "mult": big(m) })
}

fn contributions_json(list: &[Contribution]) -> Value {
    list.iter()
        .map(|c| json!({ "source": c.source.tuple(), "ss": c.ktype.ss, "central": c.ktype.central, "mult": big(&c.mult) }))
        .collect()
}

pub fn report_json(r: &CancellationReport) -> Value {
    json!({
        "module": r.module_id,
        "pair": r.pair,
        "delta_n": r.delta_n,
        "grouping": r.grouping,
        "max_level": r.max_level,
        "levels": r.levels.iter().map(|l| json!({
            "level": l.level,
            "central": l.central,
            "buckets": l.buckets.values().map(|b| json!({
                "key": b.key,
                "cancels": b.cancels(),
                "positive": contributions_json(&b.positive),
                "negative": contributions_json(&b.negative),
                "leftover": b.leftover.iter().map(|(k, m)| ktype_mult_json(k, m)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn decomposition_text(d: &Decomposition) -> String {
    let mut out = String::new();
    for (w, m) in &d.components {
        let _ = writeln!(out, "{w} {m}");
    }
    out
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult { status: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                CommandResult::ok(text)
            };
        }
    };
    let ctx = Ctx { format: cli.format, rules: cli.rules, pairs: cli.pairs };
    match dispatch(&ctx, cli.command) {
        Ok(r) => r,
        Err(e) => CommandResult { status: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn dispatch(ctx: &Ctx, cmd: Command) -> Result<CommandResult, Error> {
    match cmd {
        Command::Roots(sys) => {
            let rs = RootSystem::shared(sys.system)?;
            let mut text = String::new();
            let mut roots = Vec::new();
            for (r, w) in rs.positive_roots().iter().zip(rs.positive_root_weights()) {
                let _ = writeln!(text, "{} {w}", Weight::new(r.clone()));
                roots.push(json!({ "root": r, "weight": w }));
            }
            let _ = writeln!(text, "{} positive roots, rho {}", roots.len(), rs.rho());
            let value = json!({ "system": system_json(rs.id()), "positive_roots": roots, "rho": rs.rho() });
            Ok(CommandResult::ok(ctx.emit(text, value)))
        }
        Command::Dominant { sys, weight } => {
            let rs = RootSystem::shared(sys.system)?;
            let w = weight_arg(&rs, &weight)?;
            let d = to_dominant(&rs, &w)?;
            let text = format!("{} sign {} reflections {}\n", d.dominant, d.sign, d.reflections);
            let value = json!({
                "system": system_json(rs.id()),
                "weight": w,
                "dominant": d.dominant,
                "sign": d.sign,
                "reflections": d.reflections,
            });
            Ok(CommandResult::ok(ctx.emit(text, value)))
        }
        Command::Dim { sys, weight } => {
            let rs = RootSystem::shared(sys.system)?;
            let w = weight_arg(&rs, &weight)?;
            let n = weyl_dimension(&rs, &w)?;
            let value = json!({ "system": system_json(rs.id()), "weight": w, "dimension": big(&n) });
            Ok(CommandResult::ok(ctx.emit(format!("{n}\n"), value)))
        }
        Command::Weights { sys, weight, dominant } => {
            let rs = RootSystem::shared(sys.system)?;
            let w = weight_arg(&rs, &weight)?;
            let entries: Vec<(Weight, BigInt)> = if dominant {
                dominant_weight_multiplicities(&rs, &w)?
                    .iter()
                    .map(|(a, b)| (a.clone(), b.clone()))
                    .collect()
            } else {
                full_weight_multiset(&rs, &w)?.iter().map(|(a, b)| (a.clone(), b.clone())).collect()
            };
            let mut text = String::new();
            for (u, m) in &entries {
                let _ = writeln!(text, "{u} {m}");
            }
            let value = json!({
                "system": system_json(rs.id()),
                "highest_weight": w,
                "weights": entries.iter().map(|(u, m)| json!({ "weight": u, "mult": big(m) })).collect::<Vec<_>>(),
            });
            Ok(CommandResult::ok(ctx.emit(text, value)))
        }
        Command::Tensor { sys, left, right, oracle } => {
            let rs = RootSystem::shared(sys.system)?;
            let (l, r) = (weight_arg(&rs, &left)?, weight_arg(&rs, &right)?);
            let d = if oracle { tensor_oracle(&rs, &l, &r)? } else { tensor_decompose(&rs, &l, &r)? };
            Ok(CommandResult::ok(ctx.emit(decomposition_text(&d), decomposition_json(&d))))
        }
        Command::Rule { id, params, list } => {
            let rules = ctx.rules()?;
            if list {
                let mut text = String::new();
                let mut items = Vec::new();
                for r in rules.rules() {
                    let names: Vec<&str> = r.parameter_names().collect();
                    let ranks = match r.max_rank {
                        Some(m) if m == r.min_rank => format!("{}{}", r.series, m),
                        Some(m) => format!("{}{}..{}{}", r.series, r.min_rank, r.series, m),
                        None => format!("{}n, n>={}", r.series, r.min_rank),
                    };
                    let _ = writeln!(text, "{} ({ranks}; {})", r.id, names.join(","));
                    items.push(json!({ "id": r.id, "systems": ranks, "parameters": names, "line": r.line }));
                }
                return Ok(CommandResult::ok(ctx.emit(text, json!({ "rules": items }))));
            }
            let id = id.expect("clap enforces --id without --list");
            let p: RuleParams = params.parse()?;
            let d = rules.get(&id)?.closed_form(&p)?;
            let mut value = decomposition_json(&d);
            value["rule"] = json!(id);
            Ok(CommandResult::ok(ctx.emit(decomposition_text(&d), value)))
        }
        Command::Schmid { pair, max_level } => {
            let set = ctx.pairs()?;
            let p = set.pair(&pair)?;
            let mut text = String::new();
            let mut levels: Vec<Value> = Vec::new();
            for level in 0..=max_level {
                let comps: Vec<KType> = p.schmid_level(level);
                let _ = write!(text, "level {level}:");
                for k in &comps {
                    let _ = write!(text, " {k}");
                }
                text.push('\n');
                levels.push(json!({
                    "level": level,
                    "central": -p.level_step * i64::from(level),
                    "ktypes": comps.iter().map(|k| json!({ "ss": k.ss, "central": k.central, "mult": 1 })).collect::<Vec<_>>(),
                }));
            }
            Ok(CommandResult::ok(ctx.emit(text, json!({ "pair": p.id, "levels": levels }))))
        }
        Command::Kspectrum { module, closed_form, verma, pair, max_level } => {
            let set = ctx.pairs()?;
            let series = if let Some(xi) = verma {
                let p = set.pair(pair.as_deref().expect("clap enforces --pair"))?;
                verma_k_character(p, &KType::parse(&xi)?, max_level)?
            } else {
                let record = set.module(module.as_deref().expect("clap enforces --module"))?;
                let p = set.pair(&record.pair)?;
                if closed_form {
                    ClosedFormSpectrum::from(record).series(p, max_level)
                } else {
                    hpz_k_spectrum(p, &DiracCohomologyData::from(record), max_level)?
                }
            };
            Ok(CommandResult::ok(ctx.emit(series.to_string(), series_json(&series))))
        }
        Command::Report { module, max_level, group } => {
            let set = ctx.pairs()?;
            let record = set.module(&module)?;
            let p = set.pair(&record.pair)?;
            let report = cancellation_report(p, &DiracCohomologyData::from(record), max_level, &group)?;
            let out = match ctx.format {
                Format::Text => report.to_string(),
                Format::Json => ctx.emit(String::new(), report_json(&report)),
            };
            Ok(CommandResult::ok(out))
        }
        Command::Verify { suite, rule, module, max_level, bound, ranks } => {
            let mut text = String::new();
            let mut results = Vec::new();
            let mut all_pass = true;
            let run_rules = matches!(suite, Suite::Rules | Suite::All) && (module.is_none() || rule.is_some());
            let run_spectra = matches!(suite, Suite::Spectra | Suite::All) && (rule.is_none() || module.is_some());
            if run_rules {
                let rules = ctx.rules()?;
                let ids: Vec<String> = match &rule {
                    Some(id) => vec![rules.get(id)?.id.clone()],
                    None => rules.ids().map(str::to_string).collect(),
                };
                for id in ids {
                    let r = rules.get(&id)?;
                    let b = bound.unwrap_or(if r.max_rank == Some(r.min_rank) { 3 } else { 2 });
                    let report = verify_rule(&rules, &id, &r.grid(&ranks, b))?;
                    all_pass &= report.passed();
                    let status = if report.passed() { "PASS" } else { "FAIL" };
                    let _ = writeln!(text, "{status} rule {id} ({} points)", report.points.len());
                    if !report.passed() {
                        text.push_str(&report.to_string());
                    }
                    results.push(json!({ "kind": "rule", "id": id, "points": report.points.len(), "passed": report.passed() }));
                }
            }
            if run_spectra {
                let set = ctx.pairs()?;
                let ids: Vec<String> = match &module {
                    Some(m) => vec![set.module(m)?.id.clone()],
                    None => set.modules().iter().map(|m| m.id.clone()).collect(),
                };
                for id in ids {
                    let report = verify_spectrum_in(&set, &id, max_level)?;
                    all_pass &= report.passed();
                    let status = if report.passed() { "PASS" } else { "FAIL" };
                    let _ = writeln!(text, "{status} spectrum {id} (levels 0..={max_level})");
                    if !report.passed() {
                        text.push_str(&report.to_string());
                    }
                    results.push(json!({ "kind": "spectrum", "id": id, "max_level": max_level, "passed": report.passed() }));
                }
            }
            let _ = writeln!(text, "{}", if all_pass { "PASS" } else { "FAIL" });
            let out = ctx.emit(text, json!({ "passed": all_pass, "checks": results }));
            Ok(CommandResult {
                status: if all_pass { EXIT_OK } else { EXIT_MISMATCH },
                stdout: out,
                stderr: String::new(),
            })
        }
    }
}
