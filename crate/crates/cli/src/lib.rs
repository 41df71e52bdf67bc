//! Commands behind the `twogen` binary. Each returns a [`RunReport`] that is
//! printed for humans and optionally written as JSON.

use std::fmt;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use twogen_core::bounds::{decide_checks, member_checks};
use twogen_core::{
    differential_check, g_is_trivial, membership, parse_cs_word, phi, wrap_delayed,
    wrap_instrumented, BoundCheck, BuiltinOracle, CsWord, DelayModel, HWord, OracleStats,
    WordFamily, WordGenerator, WordMeasure,
};

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input: String,
    /// Triviality for `decide`, membership for `member` and `extract`, overall
    /// success for `fuzz` and `bench`, absent for `embed`.
    pub verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    pub stats: OracleStats,
    pub bounds: Vec<BoundCheck>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzz: Option<FuzzSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bench: Option<BenchSummary>,
}

impl RunReport {
    fn new(command: &str, input: impl Into<String>) -> Self {
        Self {
            command: command.to_string(),
            input: input.into(),
            verdict: None,
            value: None,
            stats: OracleStats::default(),
            bounds: Vec::new(),
            elapsed_ms: 0.0,
            fuzz: None,
            bench: None,
        }
    }

    fn finish(mut self, started: Instant) -> Self {
        self.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
        self
    }

    /// False iff some assertion failed: a violated bound, a fuzz failure or a
    /// bench row over its limit.
    pub fn passed(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
            && self.fuzz.as_ref().is_none_or(|f| f.failures.is_empty())
            && self
                .bench
                .as_ref()
                .is_none_or(|b| b.rows.iter().all(|r| r.pass))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub count: u64,
    pub max_len: u64,
    pub oracle: String,
    pub family: String,
    pub agreements: u64,
    pub disagreements: u64,
    pub bound_violations: u64,
    pub trivial_words: u64,
    pub member_words: u64,
    pub failures: Vec<FuzzFailure>,
}

/// Replay with the same seed, family and `max_len`, then take word `index`.
#[derive(Debug, Clone, Serialize)]
pub struct FuzzFailure {
    pub index: u64,
    pub word: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchSummary {
    pub oracle: String,
    pub delay: String,
    pub max_n: u64,
    pub rows: Vec<BenchRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: u64,
    pub gamma0: u64,
    pub query_count: u64,
    pub query_bound: u64,
    pub member_query_count: u64,
    pub member_query_bound: u64,
    pub max_code_length: u64,
    pub code_length_bound: Option<u64>,
    pub simulated_cost: u128,
    pub pass: bool,
}

fn oracle_by_name(name: &str) -> Result<BuiltinOracle> {
    name.parse().with_context(|| format!("bad oracle `{name}`"))
}

fn cs_word(text: &str) -> Result<CsWord> {
    parse_cs_word(text).with_context(|| format!("cannot parse word `{text}`"))
}

fn h_word(text: &str) -> Result<HWord> {
    text.parse()
        .with_context(|| format!("cannot parse H-word `{text}`"))
}

pub fn cmd_decide(word: &str, oracle: &str) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new("decide", word);
    let w = cs_word(word)?;
    let mut instrumented = wrap_instrumented(oracle_by_name(oracle)?);
    report.verdict = Some(g_is_trivial(&w, &mut instrumented)?);
    report.stats = instrumented.stats();
    report.bounds = decide_checks(WordMeasure::of(&w), &report.stats);
    Ok(report.finish(started))
}

pub fn cmd_member(word: &str, oracle: &str) -> Result<RunReport> {
    member_report("member", word, oracle)
}

/// Like [`cmd_member`], but a non-member is an error.
pub fn cmd_extract(word: &str, oracle: &str) -> Result<RunReport> {
    let report = member_report("extract", word, oracle)?;
    if report.verdict != Some(true) {
        bail!("`{word}` is not in the image of H");
    }
    Ok(report)
}

fn member_report(command: &str, word: &str, oracle: &str) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new(command, word);
    let w = cs_word(word)?;
    let mut instrumented = wrap_instrumented(oracle_by_name(oracle)?);
    let result = membership(&w, &mut instrumented)?;
    report.verdict = Some(result.member);
    report.value = result.value.map(|v| v.to_string());
    report.stats = instrumented.stats();
    report.bounds = member_checks(WordMeasure::of(&w), &report.stats);
    Ok(report.finish(started))
}

pub fn cmd_embed(hword: &str) -> Result<RunReport> {
    let started = Instant::now();
    let mut report = RunReport::new("embed", hword);
    report.value = Some(phi(&h_word(hword)?).to_string());
    Ok(report.finish(started))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum FuzzFamily {
    /// Alternating c/s blocks only.
    Uniform,
    /// Uniform words mixed with structured near-trivial words.
    #[default]
    Mixed,
}

impl FuzzFamily {
    fn word_family(self) -> WordFamily {
        match self {
            FuzzFamily::Uniform => WordFamily::UniformBlocks,
            FuzzFamily::Mixed => WordFamily::Mixed,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FuzzFamily::Uniform => "uniform",
            FuzzFamily::Mixed => "mixed",
        }
    }
}

/// Keeps, per bound name, the check with the largest `observed / limit` seen so far.
fn tightest(acc: &mut Vec<BoundCheck>, check: &BoundCheck) {
    let tighter = |a: &BoundCheck, b: &BoundCheck| {
        u128::from(a.observed) * u128::from(b.limit.max(1))
            > u128::from(b.observed) * u128::from(a.limit.max(1))
    };
    match acc.iter_mut().find(|b| b.name == check.name) {
        Some(existing) if tighter(check, existing) => *existing = check.clone(),
        Some(_) => {}
        None => acc.push(check.clone()),
    }
}

pub fn cmd_fuzz(
    count: u64,
    max_len: u64,
    seed: u64,
    oracle: &str,
    family: FuzzFamily,
) -> Result<RunReport> {
    if count == 0 {
        bail!("count must be at least 1");
    }
    let started = Instant::now();
    let base = oracle_by_name(oracle)?;
    let generator = WordGenerator::new(seed, family.word_family());
    let mut report = RunReport::new(
        "fuzz",
        format!("seed={seed} count={count} max_len={max_len}"),
    );
    let mut summary = FuzzSummary {
        seed,
        count,
        max_len,
        oracle: base.to_string(),
        family: family.name().to_string(),
        agreements: 0,
        disagreements: 0,
        bound_violations: 0,
        trivial_words: 0,
        member_words: 0,
        failures: Vec::new(),
    };

    for index in 0..count {
        let word = generator.word(index, max_len);
        let check = differential_check(&word, base)
            .with_context(|| format!("seed {seed}, index {index}, word `{word}`"))?;
        if check.agrees() {
            summary.agreements += 1;
        } else {
            summary.disagreements += 1;
        }
        if !check.bounds_hold() {
            summary.bound_violations += 1;
        }
        summary.trivial_words += u64::from(check.trivial);
        summary.member_words += u64::from(check.member);
        report.stats.merge(&check.stats);
        for bound in &check.bounds {
            tightest(&mut report.bounds, bound);
        }
        if let Some(reason) = check.failure() {
            summary.failures.push(FuzzFailure {
                index,
                word: word.to_string(),
                reason,
            });
        }
    }

    report.verdict = Some(summary.failures.is_empty());
    report.fuzz = Some(summary);
    Ok(report.finish(started))
}

/// Words timed by `bench`: the empty word, then `φ(a_i)` of length `4·2^i`
/// for `i = 1, 2, ...` while that length is at most `max_n`.
pub fn bench_words(max_n: u64) -> Vec<CsWord> {
    let mut words = vec![CsWord::identity()];
    let mut index = 1u64;
    while index < 62 && 4u64 << index <= max_n {
        words.push(phi(&HWord::generator(index).expect("index is positive")));
        index += 1;
    }
    words
}

pub fn cmd_bench(max_n: u64, oracle: &str, delay: DelayModel) -> Result<RunReport> {
    let started = Instant::now();
    let base = oracle_by_name(oracle)?;
    let mut report = RunReport::new("bench", format!("max_n={max_n}"));
    let mut rows = Vec::new();

    for word in bench_words(max_n) {
        let measure = WordMeasure::of(&word);
        let mut decide_oracle = wrap_delayed(wrap_instrumented(base), delay);
        g_is_trivial(&word, &mut decide_oracle)?;
        let decide_stats = decide_oracle.inner().stats();
        let mut member_oracle = wrap_instrumented(base);
        membership(&word, &mut member_oracle)?;
        let member_stats = member_oracle.stats();

        let n = measure.letter_length;
        let mut checks = decide_checks(measure, &decide_stats);
        checks.extend(
            member_checks(measure, &member_stats)
                .into_iter()
                .map(|mut c| {
                    c.name = format!("member.{}", c.name);
                    c
                }),
        );
        let limit_of = |name: &str| checks.iter().find(|c| c.name == name).map(|c| c.limit);
        let row = BenchRow {
            n,
            gamma0: measure.gamma0,
            query_count: decide_stats.query_count,
            query_bound: limit_of("query_count").unwrap_or(0),
            member_query_count: member_stats.query_count,
            member_query_bound: limit_of("member.query_count").unwrap_or(0),
            max_code_length: decide_stats.max_code_length,
            code_length_bound: limit_of("query_code_length"),
            simulated_cost: decide_oracle.simulated_cost(),
            pass: checks.iter().all(|c| c.pass),
        };
        report.stats.merge(&decide_stats);
        report.bounds.extend(checks.into_iter().map(|mut c| {
            c.name = format!("n={n}.{}", c.name);
            c
        }));
        rows.push(row);
    }

    report.verdict = Some(rows.iter().all(|r| r.pass));
    report.bench = Some(BenchSummary {
        oracle: base.to_string(),
        delay: delay.to_string(),
        max_n,
        rows,
    });
    Ok(report.finish(started))
}

fn show_word(text: &str) -> &str {
    if text.is_empty() {
        "(empty)"
    } else {
        text
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.command.as_str() {
            "decide" => writeln!(f, "trivial: {}", self.verdict.unwrap_or(false))?,
            "member" | "extract" => {
                writeln!(f, "member: {}", self.verdict.unwrap_or(false))?;
                if let Some(value) = &self.value {
                    writeln!(f, "value: {}", show_word(value))?;
                }
            }
            "embed" => {
                return writeln!(f, "{}", self.value.as_deref().unwrap_or_default());
            }
            _ => {}
        }

        if let Some(fuzz) = &self.fuzz {
            writeln!(
                f,
                "fuzz: {} words (seed {}, max length {}, oracle {}, family {})",
                fuzz.count, fuzz.seed, fuzz.max_len, fuzz.oracle, fuzz.family
            )?;
            writeln!(
                f,
                "agreements: {}  disagreements: {}  bound violations: {}",
                fuzz.agreements, fuzz.disagreements, fuzz.bound_violations
            )?;
            writeln!(
                f,
                "trivial: {}  members: {}",
                fuzz.trivial_words, fuzz.member_words
            )?;
            for failure in &fuzz.failures {
                writeln!(
                    f,
                    "FAIL index {}: {} on `{}`",
                    failure.index, failure.reason, failure.word
                )?;
            }
        }

        if let Some(bench) = &self.bench {
            writeln!(f, "oracle {}, delay model {}", bench.oracle, bench.delay)?;
            writeln!(
                f,
                "{:>6} {:>6} {:>8} {:>10} {:>8} {:>10} {:>8} {:>8} {:>12} ok",
                "n", "gamma0", "queries", "bound", "member", "bound", "maxlen", "bound", "cost"
            )?;
            for row in &bench.rows {
                let len_bound = row
                    .code_length_bound
                    .map_or("-".to_string(), |b| b.to_string());
                writeln!(
                    f,
                    "{:>6} {:>6} {:>8} {:>10} {:>8} {:>10} {:>8} {:>8} {:>12} {}",
                    row.n,
                    row.gamma0,
                    row.query_count,
                    row.query_bound,
                    row.member_query_count,
                    row.member_query_bound,
                    row.max_code_length,
                    len_bound,
                    row.simulated_cost,
                    if row.pass { "yes" } else { "NO" }
                )?;
            }
            return writeln!(f, "elapsed: {:.1} ms", self.elapsed_ms);
        }

        writeln!(
            f,
            "queries: {}  max code length: {}  total code length: {}  max index: {}",
            self.stats.query_count,
            self.stats.max_code_length,
            self.stats.total_code_length,
            self.stats.max_generator_index
        )?;
        for bound in &self.bounds {
            writeln!(
                f,
                "  {:<28} {:>8} <= {:<8} {}",
                bound.name,
                bound.observed,
                bound.limit,
                if bound.pass { "ok" } else { "VIOLATED" }
            )?;
        }
        writeln!(f, "elapsed: {:.1} ms", self.elapsed_ms)
    }
}
