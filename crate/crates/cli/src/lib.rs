//! Command-line front end: `construct`, `analyze`, `certify` and `scan`.
//!
//! Exit status: 0 when every requested check passes, 1 when a certificate
//! fails, 2 on configuration errors, 3 when a budget ran out and only lower
//! bounds were produced.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use senslab::analyzers::{
    block_sensitivity_at, effective_variables, global_block_sensitivity, global_sensitivity, sensitivity_at,
    simon_bound_check, BlockLimits, Budget, MeasureReport, Method, SimonCheck, DEFAULT_BLOCK_SEARCH_LIMIT,
    DEFAULT_NODE_CAP,
};
use senslab::certificates::{
    lemma42_witness, lemma44_procedure, scaling_scan, scan_csv, verify_claim33, verify_theorem41, ClaimCertificate,
    Lemma44Trace, Relation, ScanRelation, ScanRow,
};
use senslab::constructions::{
    auxiliary_g, new_function, random_minterm_transitive, rubinstein_cyclic, theorem31_function, theorem32_function,
    witness_one, witness_zero,
};
use senslab::doc::{Construction, FunctionDoc};
use senslab::{BooleanFunction, TruthTable, Word, DEFAULT_DENSE_LIMIT};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_PARTIAL: u8 = 3;

/// Hard ceiling for `--dense-limit` (a 2^32-entry table is 512 MiB).
const MAX_DENSE_LIMIT: usize = 32;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Lib(#[from] senslab::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Parser, Debug)]
#[command(name = "senslab", version, about = "Sensitivity laboratory for cyclically invariant Boolean functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum CommandKind {
    Construct,
    Analyze,
    Certify,
    Scan,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a function and write its JSON description.
    Construct(Opts),
    /// Compute sensitivity measures.
    Analyze(Opts),
    /// Run the witness and lower-bound certificates.
    Certify(Opts),
    /// Tabulate witness sensitivities over a range of block sizes.
    Scan(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Theorem31,
    Theorem32,
    NewFunction,
    Rubinstein,
    AuxiliaryG,
    Closure,
    Random,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Theorem31 => "theorem31",
            Family::Theorem32 => "theorem32",
            Family::NewFunction => "new-function",
            Family::Rubinstein => "rubinstein",
            Family::AuxiliaryG => "auxiliary-g",
            Family::Closure => "closure",
            Family::Random => "random",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RelationArg {
    Cube,
    Square,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Named construction.
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    /// Block size, or an inclusive range `a..b` for `scan`.
    #[arg(long)]
    k: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated: s, s0, s1, bs, eff, simon.
    #[arg(long, default_value = "s")]
    measures: String,
    /// Maximum block size for block sensitivity (ℓ-block sensitivity).
    #[arg(long)]
    block_cap: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_DENSE_LIMIT)]
    dense_limit: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: u64,
    #[arg(long, value_enum)]
    relation: Option<RelationArg>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    table_file: Option<PathBuf>,
    #[arg(long)]
    pattern_file: Option<PathBuf>,
    /// `construct` only: also write the truth-table file.
    #[arg(long)]
    table_out: Option<PathBuf>,
}

/// Where the function under study comes from.
#[derive(Debug, Clone)]
pub enum FunctionSource {
    Family(Family),
    TableFile(PathBuf),
    PatternFile(PathBuf),
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    command: CommandKind,
    source: Option<FunctionSource>,
    n: Option<usize>,
    k: Option<String>,
    seed: u64,
    measures: Vec<String>,
    budget: Budget,
    relation: Option<ScanRelation>,
    format: Format,
    out: Option<PathBuf>,
    table_out: Option<PathBuf>,
}

impl RunConfig {
    fn from_opts(command: CommandKind, o: Opts) -> Result<RunConfig, CliError> {
        let mut sources = vec![];
        if let Some(f) = o.family {
            sources.push(FunctionSource::Family(f));
        }
        if let Some(p) = o.table_file {
            sources.push(FunctionSource::TableFile(p));
        }
        if let Some(p) = o.pattern_file {
            if o.family == Some(Family::Closure) {
                sources.pop();
            }
            sources.push(FunctionSource::PatternFile(p));
        }
        if sources.len() > 1 {
            return Err(config("give exactly one of --family, --table-file, --pattern-file"));
        }
        let source = sources.pop();
        if source.is_none() && command != CommandKind::Scan {
            return Err(config("one of --family, --table-file, --pattern-file is required"));
        }
        if o.family == Some(Family::Closure) && !matches!(source, Some(FunctionSource::PatternFile(_))) {
            return Err(config("--family closure reads its minterm and group from --pattern-file"));
        }
        if o.dense_limit == 0 || o.dense_limit > MAX_DENSE_LIMIT {
            return Err(config(format!("--dense-limit must be in 1..={MAX_DENSE_LIMIT}")));
        }
        if o.node_cap == 0 {
            return Err(config("--node-cap must be positive"));
        }
        if o.block_cap == Some(0) {
            return Err(config("--block-cap must be positive"));
        }
        let measures: Vec<String> =
            o.measures.split(',').map(|m| m.trim().to_string()).filter(|m| !m.is_empty()).collect();
        if let Some(bad) = measures.iter().find(|m| !["s", "s0", "s1", "bs", "eff", "simon"].contains(&m.as_str())) {
            return Err(config(format!("unknown measure {bad:?}")));
        }
        let default_format = if command == CommandKind::Scan { Format::Csv } else { Format::Json };
        Ok(RunConfig {
            command,
            source,
            n: o.n,
            k: o.k,
            seed: o.seed,
            measures,
            budget: Budget { dense_limit: o.dense_limit, block_cap: o.block_cap, node_cap: o.node_cap },
            relation: o.relation.map(|r| match r {
                RelationArg::Cube => ScanRelation::Cube,
                RelationArg::Square => ScanRelation::Square,
            }),
            format: o.format.unwrap_or(default_format),
            out: o.out,
            table_out: o.table_out,
        })
    }

    fn need_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| config("--n is required for this family"))
    }

    fn need_k(&self) -> Result<usize, CliError> {
        let raw = self.k.as_deref().ok_or_else(|| config("--k is required for this family"))?;
        raw.trim().parse().map_err(|_| config(format!("--k expects an integer here, got {raw:?}")))
    }

    fn k_range(&self) -> Result<RangeInclusive<usize>, CliError> {
        let raw = self.k.as_deref().ok_or_else(|| config("--k a..b is required"))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| config(format!("bad --k range {raw:?}")));
        match raw.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
                if a > b {
                    return Err(config(format!("empty --k range {raw:?}")));
                }
                Ok(a..=b)
            }
            None => {
                let k = parse(raw)?;
                Ok(k..=k)
            }
        }
    }
}

/// The function under study plus how to name it in reports.
enum Subject {
    Built { family: String, f: Construction },
    Table(TruthTable),
}

impl Subject {
    fn arity(&self) -> usize {
        match self {
            Subject::Built { f, .. } => f.arity(),
            Subject::Table(t) => t.arity(),
        }
    }

    fn family(&self) -> String {
        match self {
            Subject::Built { family, .. } => family.clone(),
            Subject::Table(_) => "table".into(),
        }
    }

    fn function(&self) -> &dyn BooleanFunction {
        match self {
            Subject::Built { f, .. } => f,
            Subject::Table(t) => t,
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn load_subject(cfg: &RunConfig) -> Result<Subject, CliError> {
    let source = cfg.source.as_ref().ok_or_else(|| config("no function source"))?;
    let built = |family: Family, f: Construction| Subject::Built { family: family.name().into(), f };
    Ok(match source {
        FunctionSource::TableFile(path) => Subject::Table(read_file(path)?.parse()?),
        FunctionSource::PatternFile(path) => {
            let doc: FunctionDoc = serde_json::from_str(&read_file(path)?)
                .map_err(|source| CliError::Json { path: path.clone(), source })?;
            let family = doc.family.clone().unwrap_or_else(|| "closure".into());
            Subject::Built { family, f: doc.load()? }
        }
        FunctionSource::Family(fam) => match fam {
            Family::Theorem31 => built(*fam, Construction::Pattern(theorem31_function(cfg.need_n()?)?)),
            Family::Theorem32 => built(*fam, Construction::Pattern(theorem32_function(cfg.need_n()?)?)),
            Family::NewFunction => built(*fam, Construction::Pattern(new_function(cfg.need_n()?, cfg.need_k()?)?)),
            Family::Rubinstein => built(*fam, Construction::Rubinstein(rubinstein_cyclic(cfg.need_k()?)?)),
            Family::AuxiliaryG => built(*fam, Construction::AuxiliaryG(auxiliary_g(cfg.need_k()?)?.0)),
            Family::Random => {
                built(*fam, Construction::Pattern(random_minterm_transitive(cfg.need_n()?, cfg.need_k()?, cfg.seed)?))
            }
            Family::Closure => unreachable!("closure is loaded from --pattern-file"),
        },
    })
}

/// Text produced by one run, and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and executes the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let (kind, opts) = match cli.command {
        Command::Construct(o) => (CommandKind::Construct, o),
        Command::Analyze(o) => (CommandKind::Analyze, o),
        Command::Certify(o) => (CommandKind::Certify, o),
        Command::Scan(o) => (CommandKind::Scan, o),
    };
    let result = RunConfig::from_opts(kind, opts).and_then(|cfg| {
        let produced = match cfg.command {
            CommandKind::Construct => cmd_construct(&cfg),
            CommandKind::Analyze => cmd_analyze(&cfg),
            CommandKind::Certify => cmd_certify(&cfg),
            CommandKind::Scan => cmd_scan(&cfg),
        }?;
        emit(&cfg, produced)
    });
    match result {
        Ok(o) => o,
        Err(e) => {
            let code = match e {
                CliError::Io { .. } | CliError::Json { .. } | CliError::Config(_) | CliError::Lib(_) => EXIT_CONFIG,
            };
            Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

/// Main output of a subcommand before it is routed to stdout or `--out`.
struct Produced {
    body: String,
    code: u8,
    note: String,
}

fn emit(cfg: &RunConfig, p: Produced) -> Result<Outcome, CliError> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &p.body).map_err(|source| CliError::Io { path: path.clone(), source })?;
            Ok(Outcome { code: p.code, stdout: String::new(), stderr: p.note })
        }
        None => Ok(Outcome { code: p.code, stdout: p.body, stderr: p.note }),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn cmd_construct(cfg: &RunConfig) -> Result<Produced, CliError> {
    let subject = load_subject(cfg)?;
    let Subject::Built { family, f } = &subject else {
        return Err(config("construct needs --family or --pattern-file"));
    };
    let doc = match f {
        Construction::Pattern(p) => FunctionDoc::from_pattern(family, p),
        Construction::Rubinstein(r) => FunctionDoc::from_rubinstein(r),
        Construction::AuxiliaryG(g) => FunctionDoc::from_auxiliary_g(g),
    };
    if let Some(path) = &cfg.table_out {
        let table = TruthTable::build(f, cfg.budget.dense_limit)?;
        std::fs::write(path, table.to_string()).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    let body = match cfg.format {
        Format::Json => to_json(&doc),
        Format::Plain | Format::Csv => {
            let support = doc.support.as_ref().map_or(0, Vec::len);
            format!("family = {family}\nn = {}\nk = {}\nfixed positions = {support}\n", doc.n, doc.k)
        }
    };
    Ok(Produced { body, code: EXIT_OK, note: String::new() })
}

#[derive(Serialize)]
struct AnalyzeOutput {
    family: String,
    n: usize,
    reports: Vec<MeasureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    effective_variables: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    simon: Option<SimonCheck>,
}

fn wants(cfg: &RunConfig, m: &str) -> bool {
    cfg.measures.iter().any(|x| x == m)
}

fn pointwise_report(measure: &str, value: usize, witness: Word, budget: Budget) -> MeasureReport {
    MeasureReport {
        measure: measure.into(),
        value,
        witness: Some(witness),
        method: Method::Pointwise,
        budget,
        exhausted: true,
    }
}

/// Witness words giving lower bounds on `s¹` and `s⁰` when no table can be built.
fn witness_bounds(subject: &Subject, budget: Budget) -> Result<(MeasureReport, MeasureReport), CliError> {
    let Subject::Built { f, .. } = subject else {
        return Err(config("truth tables are always within reach of an exhaustive scan"));
    };
    let (one, zero) = match f {
        Construction::Pattern(p) => match p.block_size() {
            Some(k) => (witness_one(p.arity(), k)?, witness_zero(p.arity(), k)?.word),
            None => (lemma42_witness(p)?.word, lemma44_procedure(p)?.final_word),
        },
        Construction::AuxiliaryG(g) => {
            let one = g.spec().embed(g.arity())?.pad(false);
            let zero = one.flip_bit(1)?;
            (one, zero)
        }
        Construction::Rubinstein(_) => {
            return Err(config(format!("arity {} exceeds --dense-limit {}", f.arity(), budget.dense_limit)))
        }
    };
    Ok((
        pointwise_report("s1", sensitivity_at(f, &one)?, one, budget),
        pointwise_report("s0", sensitivity_at(f, &zero)?, zero, budget),
    ))
}

fn cmd_analyze(cfg: &RunConfig) -> Result<Produced, CliError> {
    let subject = load_subject(cfg)?;
    let n = subject.arity();
    let budget = cfg.budget;
    let dense = n <= budget.dense_limit;
    let table = match &subject {
        Subject::Table(t) => Some(t.clone()),
        Subject::Built { f, .. } if dense => Some(TruthTable::build(f, budget.dense_limit)?),
        Subject::Built { .. } => None,
    };
    let mut reports = vec![];
    let mut s_witness = None;
    let needs_s = ["s", "s0", "s1"].iter().any(|m| wants(cfg, m));
    if needs_s || wants(cfg, "bs") {
        let (s, s0, s1) = match &table {
            Some(t) => {
                let p = global_sensitivity(t);
                let with_budget = |mut r: MeasureReport| {
                    r.budget = budget;
                    r
                };
                (with_budget(p.s), with_budget(p.s0), with_budget(p.s1))
            }
            None => {
                let (s1, s0) = witness_bounds(&subject, budget)?;
                let s = if s1.value >= s0.value { s1.clone() } else { s0.clone() };
                (MeasureReport { measure: "s".into(), ..s }, s0, s1)
            }
        };
        s_witness = s.witness.clone();
        for (name, r) in [("s", s), ("s0", s0), ("s1", s1)] {
            if wants(cfg, name) {
                reports.push(r);
            }
        }
    }
    if wants(cfg, "bs") {
        let limits = BlockLimits { block_cap: budget.block_cap, node_cap: budget.node_cap };
        let search_limit = DEFAULT_BLOCK_SEARCH_LIMIT.min(budget.dense_limit);
        match &table {
            Some(t) if n <= search_limit => reports.push(global_block_sensitivity(t, &limits, search_limit)?),
            _ if n <= 64 => {
                let x = s_witness.clone().expect("sensitivity ran first");
                let r = block_sensitivity_at(subject.function(), &x, &limits)?;
                let measure = match budget.block_cap {
                    Some(l) if l < n => format!("bs_{l}"),
                    _ => "bs".into(),
                };
                reports.push(MeasureReport {
                    measure,
                    value: r.value,
                    witness: Some(x),
                    method: Method::BlockSearch,
                    budget,
                    exhausted: true,
                });
            }
            _ => {
                let x = s_witness.clone().expect("sensitivity ran first");
                let s = sensitivity_at(subject.function(), &x)?;
                reports.push(pointwise_report("bs", s, x, budget));
            }
        }
    }
    let mut effective = None;
    let mut simon = None;
    if wants(cfg, "eff") || wants(cfg, "simon") {
        let t = table.as_ref().ok_or_else(|| {
            config(format!("eff/simon need an exhaustive scan; arity {n} exceeds --dense-limit {}", budget.dense_limit))
        })?;
        if wants(cfg, "eff") {
            let eff: Vec<usize> = effective_variables(t).into_iter().collect();
            reports.push(MeasureReport {
                measure: "effective_variables".into(),
                value: eff.len(),
                witness: None,
                method: Method::Exhaustive,
                budget,
                exhausted: false,
            });
            effective = Some(eff);
        }
        if wants(cfg, "simon") {
            simon = Some(simon_bound_check(t)?);
        }
    }
    let partial = reports.iter().any(|r| r.exhausted);
    let simon_failed = simon.as_ref().is_some_and(|c| !c.holds);
    let code = if simon_failed {
        EXIT_CHECK_FAILED
    } else if partial {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    };
    let out = AnalyzeOutput { family: subject.family(), n, reports, effective_variables: effective, simon };
    let body = match cfg.format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let mut s = String::from("measure,value,witness,method,exhausted\n");
            for r in &out.reports {
                let witness = r.witness.as_ref().map(Word::to_string).unwrap_or_default();
                let method = serde_json::to_value(r.method).expect("enum serializes");
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.measure,
                    r.value,
                    witness,
                    method.as_str().unwrap_or(""),
                    r.exhausted
                );
            }
            s
        }
        Format::Plain => {
            let mut s = String::new();
            for r in &out.reports {
                let qualifier = if r.exhausted { " (lower bound)" } else { "" };
                match &r.witness {
                    Some(w) => {
                        let _ = writeln!(s, "{} = {}{qualifier} ({})", r.measure, r.value, abbreviate(w));
                    }
                    None => {
                        let _ = writeln!(s, "{} = {}{qualifier}", r.measure, r.value);
                    }
                }
            }
            if let Some(c) = &out.simon {
                let _ = writeln!(
                    s,
                    "simon = {} (s {} vs {:.6} over {} effective variables)",
                    if c.holds { "holds" } else { "VIOLATED" },
                    c.lhs,
                    c.rhs,
                    c.effective
                );
            }
            s
        }
    };
    Ok(Produced { body, code, note: String::new() })
}

/// Long witnesses are cut down to a prefix in plain output.
fn abbreviate(w: &Word) -> String {
    const SHOWN: usize = 64;
    let bits = w.to_string();
    if bits.len() <= SHOWN {
        bits
    } else {
        format!("{}... {} bits", &bits[..SHOWN], bits.len())
    }
}

#[derive(Serialize)]
struct CertifyOutput {
    family: String,
    n: usize,
    k: usize,
    certificates: Vec<ClaimCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemma44_trace: Option<Lemma44Trace>,
    pass: bool,
}

fn rubinstein_certificates(k: usize, f: &Construction, budget: Budget) -> Result<Vec<ClaimCertificate>, CliError> {
    let n = f.arity();
    if n > budget.dense_limit {
        return Err(config(format!("arity {n} exceeds --dense-limit {}", budget.dense_limit)));
    }
    let table = TruthTable::build(f, budget.dense_limit)?;
    let profile = global_sensitivity(&table);
    let mut certs = vec![exact_certificate("rubinstein.s", n, k, (2 * k) as f64, &profile.s)];
    if n <= DEFAULT_BLOCK_SEARCH_LIMIT {
        let limits = BlockLimits { block_cap: None, node_cap: budget.node_cap };
        let bs = global_block_sensitivity(&table, &limits, DEFAULT_BLOCK_SEARCH_LIMIT)?;
        let mut c = exact_certificate("rubinstein.bs", n, k, (k * k / 2) as f64, &bs);
        if bs.exhausted {
            c.pass = false;
            c.detail = Some("node budget exhausted; value is a lower bound".into());
        }
        certs.push(c);
    }
    Ok(certs)
}

fn exact_certificate(claim: &str, n: usize, k: usize, asserted: f64, r: &MeasureReport) -> ClaimCertificate {
    ClaimCertificate {
        claim: claim.into(),
        n,
        k,
        relation: Relation::Eq,
        asserted,
        measured: r.value as f64,
        witnesses: r.witness.iter().cloned().collect(),
        pass: r.value as f64 == asserted,
        detail: None,
    }
}

fn cmd_certify(cfg: &RunConfig) -> Result<Produced, CliError> {
    let subject = load_subject(cfg)?;
    let Subject::Built { family, f } = &subject else {
        return Err(config("no certificates apply to a bare truth table"));
    };
    let n = f.arity();
    let mut certificates = vec![];
    let mut trace = None;
    let k = match f {
        Construction::Pattern(p) => {
            if let Some(k) = p.block_size() {
                let c = verify_claim33(n, k)?;
                certificates.push(c.one);
                certificates.push(c.zero);
            }
            let t = verify_theorem41(p)?;
            certificates.extend(t.certificates().into_iter().cloned());
            trace = Some(t.trace);
            p.block_size().unwrap_or(p.k())
        }
        Construction::Rubinstein(r) => {
            certificates.extend(rubinstein_certificates(r.k(), f, cfg.budget)?);
            r.k()
        }
        Construction::AuxiliaryG(_) => return Err(config("no certificates apply to auxiliary-g")),
    };
    let pass = certificates.iter().all(|c| c.pass);
    let out = CertifyOutput { family: family.clone(), n, k, certificates, lemma44_trace: trace, pass };
    let body = match cfg.format {
        Format::Json => to_json(&out),
        Format::Plain => out.certificates.iter().map(|c| format!("{c}\n")).collect(),
        Format::Csv => {
            let mut s = String::from("claim,n,k,measured,relation,asserted,pass\n");
            for c in &out.certificates {
                let _ =
                    writeln!(s, "{},{},{},{},{},{},{}", c.claim, c.n, c.k, c.measured, c.relation, c.asserted, c.pass);
            }
            s
        }
    };
    Ok(Produced { body, code: if pass { EXIT_OK } else { EXIT_CHECK_FAILED }, note: String::new() })
}

fn scan_summary(rows: &[ScanRow]) -> String {
    let passed = rows.iter().filter(|r| r.pass).count();
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    let deviation = rows.iter().filter_map(ScanRow::deviation).max();
    format!(
        "# rows={} pass={passed} errors={errors} max_deviation={}\n",
        rows.len(),
        deviation.map_or_else(|| "n/a".to_string(), |d| d.to_string())
    )
}

fn cmd_scan(cfg: &RunConfig) -> Result<Produced, CliError> {
    let relation = cfg.relation.ok_or_else(|| config("--relation cube|square is required"))?;
    if cfg.source.is_some() {
        return Err(config("scan builds its own functions; drop the function source"));
    }
    let rows = scaling_scan(cfg.k_range()?, relation);
    let summary = scan_summary(&rows);
    let code = if rows.iter().all(|r| r.pass) { EXIT_OK } else { EXIT_CHECK_FAILED };
    let body = match cfg.format {
        Format::Csv => scan_csv(&rows),
        Format::Json => to_json(&rows),
        Format::Plain => {
            let mut s = String::new();
            for r in &rows {
                match &r.error {
                    Some(e) => {
                        let _ = writeln!(s, "k={} n={}: error: {e}", r.k, r.n);
                    }
                    None => {
                        let _ = writeln!(
                            s,
                            "k={} n={}: s1 = {} (expected {}), s0 = {} (expected {}) {}",
                            r.k,
                            r.n,
                            r.s1_witness.unwrap_or(0),
                            r.expected_s1,
                            r.s0_witness.unwrap_or(0),
                            r.expected_s0,
                            if r.pass { "pass" } else { "FAIL" }
                        );
                    }
                }
            }
            s.push_str(&summary);
            s
        }
    };
    Ok(Produced { body, code, note: if cfg.format == Format::Plain { String::new() } else { summary } })
}
