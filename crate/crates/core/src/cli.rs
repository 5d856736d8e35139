//! Command-line front end. [`run`] parses arguments, executes one command and
//! returns the rendered output together with the process exit code.
//!
//! Exit codes: 0 ok, 2 parse error, 3 violated precondition, 4 internal
//! consistency failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::pow;
use crate::algebra::{parse_rational, parse_rational_list, DensePolynomial, Rational};
use crate::appendix::{self, AppendixContext};
use crate::error::{Error, Result};
use crate::product::{derive_product_recurrence, hankel_check, minimal_relation, DerivationReport};
use crate::relation::RecurrenceRelation;
use crate::second_order::{
    discriminant_identity_residuals, factor_extremal_quadratic, galois_polynomial, jarden_recurrence,
    product_char_poly, verify_psi_recursion,
};
use crate::sequences::{IndexedValues, RecurrenceSpec, SecondOrderSpec, SequenceInstance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_CONSISTENCY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "prodrec", version, about = "Exact recurrences for products of linear recurrence sequences")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derive a recurrence for products of n solutions.
    Derive {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
    },
    /// Closed-form order n+1 relation for second-order products, cross-checked against `derive`.
    Jarden {
        #[command(flatten)]
        pq: PqArgs,
        #[arg(long)]
        n: usize,
    },
    /// u-binomial polynomial of degree v, its reversal and the matching characteristic polynomials.
    Charpoly {
        #[command(flatten)]
        pq: PqArgs,
        #[arg(long)]
        v: usize,
    },
    /// Discriminant identity, product polynomial recursion and extremal factorization up to max-n.
    Identities {
        #[command(flatten)]
        pq: PqArgs,
        #[arg(long)]
        max_n: usize,
    },
    /// Check a relation against a (power of a) sequence over an index range.
    Verify {
        /// Recurrence coefficients A_1,...,A_s.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// s initial values starting at --base.
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        /// Relation coefficients c_0,...,c_t multiplying X(m),...,X(m-t).
        #[arg(long, allow_hyphen_values = true)]
        relation: String,
        /// Inclusive range `a..b` of m values.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        base: i64,
        /// Check X = x^power instead of x.
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Determinant and similarity identities of the auxiliary matrices.
    Oracle {
        #[command(flatten)]
        pq: PqArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = AppendixSel::All)]
        appendix: AppendixSel,
        /// W_0 of the sequence used in matrix C.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a: String,
        /// W_1 of the sequence used in matrix C.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        r: i64,
    },
}

#[derive(Args, Debug)]
pub struct SpecArgs {
    /// Comma-separated A_1,...,A_s.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["p", "q"])]
    pub coeffs: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "q")]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "p")]
    pub q: Option<String>,
}

#[derive(Args, Debug)]
pub struct PqArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AppendixSel {
    All,
    #[value(name = "A3")]
    A3,
    #[value(name = "A7")]
    A7,
    #[value(name = "B")]
    B,
    #[value(name = "C")]
    C,
    #[value(name = "D3")]
    D3,
    #[value(name = "cor36")]
    Cor36,
    #[value(name = "shift")]
    Shift,
}

impl AppendixSel {
    fn names(self) -> Vec<&'static str> {
        match self {
            AppendixSel::All => appendix::CHECK_NAMES.to_vec(),
            AppendixSel::A3 => vec!["A3"],
            AppendixSel::A7 => vec!["A7"],
            AppendixSel::B => vec!["B"],
            AppendixSel::C => vec!["C"],
            AppendixSel::D3 => vec!["D3"],
            AppendixSel::Cor36 => vec!["cor36"],
            AppendixSel::Shift => vec!["shift"],
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RelationOut {
    pub order: usize,
    pub coefficients: Vec<String>,
    pub equation: String,
}

impl From<&RecurrenceRelation> for RelationOut {
    fn from(r: &RecurrenceRelation) -> Self {
        Self { order: r.order(), coefficients: strings(r.coeffs()), equation: r.equation() }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PolyOut {
    /// Ascending coefficients.
    pub coefficients: Vec<String>,
    pub display: String,
}

impl From<&DensePolynomial> for PolyOut {
    fn from(p: &DensePolynomial) -> Self {
        Self { coefficients: strings(p.coeffs()), display: p.to_string() }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct IndexedOut {
    pub index: i64,
    pub value: String,
}

/// Structured output of one command. Maps are ordered so the JSON rendering
/// is byte-stable; rationals are decimal strings.
#[derive(Serialize, Deserialize, Clone, Debug, Default, PartialEq, Eq)]
pub struct CommandResult {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<RelationOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nullity: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub polynomials: BTreeMap<String, PolyOut>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub residuals: BTreeMap<String, Vec<IndexedOut>>,
    #[serde(default)]
    pub checks: BTreeMap<String, bool>,
    pub status: String,
}

impl CommandResult {
    fn new(command: &str) -> Self {
        Self { command: command.to_string(), status: "ok".to_string(), ..Self::default() }
    }

    fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    fn check(&mut self, key: &str, ok: bool) {
        self.checks.insert(key.to_string(), ok);
    }

    fn poly(&mut self, key: &str, p: &DensePolynomial) {
        self.polynomials.insert(key.to_string(), p.into());
    }

    fn all_checks_pass(&self) -> bool {
        self.checks.values().all(|&b| b)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "input {k}: {v}");
        }
        if let Some(r) = &self.relation {
            let _ = writeln!(out, "relation: {}", r.equation);
            let _ = writeln!(out, "coefficients: [{}]", r.coefficients.join(", "));
            let _ = writeln!(out, "order: {}", r.order);
        }
        for (key, v) in [("k", self.k), ("rank", self.rank), ("nullity", self.nullity)] {
            if let Some(v) = v {
                let _ = writeln!(out, "{key}: {v}");
            }
        }
        for (k, v) in &self.values {
            let _ = writeln!(out, "{k}: {v}");
        }
        for (k, p) in &self.polynomials {
            let _ = writeln!(out, "polynomial {k}: {}", p.display);
        }
        for (k, rows) in &self.residuals {
            let list: Vec<String> = rows.iter().map(|r| format!("{}:{}", r.index, r.value)).collect();
            let _ = writeln!(out, "{k}: {}", list.join(" "));
        }
        for (k, v) in &self.checks {
            let _ = writeln!(out, "check {k}: {v}");
        }
        let _ = writeln!(out, "status: {}", self.status);
        out
    }
}

/// Rendered output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::Consistency(_) | Error::InexactDivision | Error::ContextMismatch => EXIT_CONSISTENCY,
        _ => EXIT_PRECONDITION,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_PARSE, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: EXIT_OK, stdout: rendered, stderr: String::new() }
            };
        }
    };
    match execute(&cli.command) {
        Ok(result) => {
            let code = match result.status.as_str() {
                "inconsistent" => EXIT_CONSISTENCY,
                _ => EXIT_OK,
            };
            let stdout = match cli.format {
                Format::Json => result.to_json(),
                Format::Text => result.to_text(),
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

pub fn execute(command: &Command) -> Result<CommandResult> {
    match command {
        Command::Derive { spec, n } => cmd_derive(spec, *n),
        Command::Jarden { pq, n } => cmd_jarden(&pq.parse()?, *n),
        Command::Charpoly { pq, v } => cmd_charpoly(&pq.parse()?, *v),
        Command::Identities { pq, max_n } => cmd_identities(&pq.parse()?, *max_n),
        Command::Verify { coeffs, init, relation, range, base, power } => {
            cmd_verify(coeffs, init, relation, range, *base, *power)
        }
        Command::Oracle { pq, n, appendix, a, b, r } => {
            cmd_oracle(&pq.parse()?, *n, *appendix, &parse_rational(a)?, &parse_rational(b)?, *r)
        }
    }
}

impl SpecArgs {
    fn parse(&self) -> Result<(RecurrenceSpec, BTreeMap<String, String>)> {
        let mut inputs = BTreeMap::new();
        let spec = match (&self.coeffs, &self.p, &self.q) {
            (Some(c), _, _) => {
                let spec = RecurrenceSpec::new(parse_rational_list(c)?)?;
                inputs.insert("coeffs".into(), spec.to_string());
                spec
            }
            (None, Some(p), Some(q)) => {
                let so = SecondOrderSpec::new(parse_rational(p)?, parse_rational(q)?)?;
                inputs.insert("p".into(), so.p.to_string());
                inputs.insert("q".into(), so.q.to_string());
                so.to_spec()
            }
            _ => return Err(Error::Parse("give either --coeffs or both --p and --q".into())),
        };
        Ok((spec, inputs))
    }
}

impl PqArgs {
    fn parse(&self) -> Result<SecondOrderSpec> {
        SecondOrderSpec::new(parse_rational(&self.p)?, parse_rational(&self.q)?)
    }
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn pq_inputs(res: &mut CommandResult, so: &SecondOrderSpec) {
    res.input("p", &so.p);
    res.input("q", &so.q);
}

fn finish(mut res: CommandResult) -> CommandResult {
    if !res.all_checks_pass() {
        res.status = "inconsistent".into();
    }
    res
}

/// Number of extra indices used when checking a derived relation on `u^n`.
const SELF_CHECK_SPAN: i64 = 30;

/// Does `rel` annihilate the n-th power of the fundamental solution?
fn annihilates_fundamental_power(spec: &RecurrenceSpec, rel: &RecurrenceRelation, n: usize) -> Result<bool> {
    let u = spec.fundamental();
    let lo = u.lowest_index().unwrap_or(2 - spec.order() as i64);
    let hi = lo + rel.order() as i64 + SELF_CHECK_SPAN;
    let values = u.values(lo..=hi)?.map(|x| pow(x, n as u32));
    rel.verify(&values, lo + rel.order() as i64..=hi)
}

fn report_derivation(res: &mut CommandResult, report: &DerivationReport) {
    res.relation = Some((&report.relation).into());
    res.k = Some(report.k);
    res.rank = Some(report.rank);
    res.nullity = Some(report.nullity);
}

pub fn cmd_derive(args: &SpecArgs, n: usize) -> Result<CommandResult> {
    let (spec, inputs) = args.parse()?;
    let mut res = CommandResult::new("derive");
    res.inputs = inputs;
    res.input("n", n);
    let report = derive_product_recurrence(&spec, n)?;
    report_derivation(&mut res, &report);
    res.values.insert("tau".into(), format!("[{}]", strings(&report.tau).join(", ")));
    res.check("annihilates_u_power", annihilates_fundamental_power(&spec, &report.relation, n)?);
    Ok(finish(res))
}

pub fn cmd_jarden(so: &SecondOrderSpec, n: usize) -> Result<CommandResult> {
    let mut res = CommandResult::new("jarden");
    pq_inputs(&mut res, so);
    res.input("n", n);
    let rel = jarden_recurrence(so, n)?;
    res.relation = Some((&rel).into());
    let derived = derive_product_recurrence(&so.to_spec(), n)?;
    res.k = Some(derived.k);
    res.rank = Some(derived.rank);
    res.nullity = Some(derived.nullity);
    res.values.insert("derived".into(), derived.relation.to_string());
    res.check("agrees_with_derive", rel.is_proportional(&derived.relation));
    res.check("annihilates_u_power", annihilates_fundamental_power(&so.to_spec(), &rel, n)?);
    Ok(finish(res))
}

pub fn cmd_charpoly(so: &SecondOrderSpec, v: usize) -> Result<CommandResult> {
    if v == 0 {
        return Err(Error::InvalidSpec("v must be at least 1".into()));
    }
    let mut res = CommandResult::new("charpoly");
    pq_inputs(&mut res, so);
    res.input("v", v);
    let galois = galois_polynomial(so, v)?;
    let reversed = galois.reciprocal(v)?;
    let product = product_char_poly(so, v - 1)?.poly;
    let q_char = appendix::build_q(v, so).char_poly()?;
    res.poly("galois", &galois);
    res.poly("galois_reversed", &reversed);
    res.poly("product", &product);
    res.poly("q_matrix", &q_char);
    res.check("reversal_matches_product", reversed == product);
    res.check("q_matrix_matches_reversal", q_char == reversed);
    Ok(finish(res))
}

pub fn cmd_identities(so: &SecondOrderSpec, max_n: usize) -> Result<CommandResult> {
    let mut res = CommandResult::new("identities");
    pq_inputs(&mut res, so);
    res.input("max_n", max_n);
    let rows = discriminant_identity_residuals(so, 0..=max_n as i64)?;
    res.residuals.insert(
        "discriminant".into(),
        rows.iter().map(|r| IndexedOut { index: r.n, value: r.residual.to_string() }).collect(),
    );
    res.residuals.insert(
        "discriminant_witness".into(),
        rows.iter()
            .map(|r| IndexedOut {
                index: r.n,
                value: r.witness.as_ref().map_or_else(|| "none".to_string(), ToString::to_string),
            })
            .collect(),
    );
    res.check("discriminant_identity", rows.iter().all(|r| r.residual == Rational::default()));
    if rows.iter().any(|r| r.witness.is_some()) {
        res.check("witness_is_u", rows.iter().all(|r| r.witness_is_u));
    }
    for n in 0..=max_n {
        res.poly(&format!("psi_{n:02}"), &product_char_poly(so, n)?.poly);
    }
    if max_n >= 1 {
        let mut ok = true;
        for n in 1..=max_n {
            match factor_extremal_quadratic(so, n) {
                Ok(_) => {}
                Err(Error::InexactDivision) => ok = false,
                Err(e) => return Err(e),
            }
        }
        res.check("extremal_factor_divides", ok);
    }
    if max_n >= 2 {
        let ok = (2..=max_n).map(|n| verify_psi_recursion(so, n)).collect::<Result<Vec<_>>>()?;
        res.check("psi_recursion", ok.into_iter().all(|b| b));
    }
    Ok(finish(res))
}

/// Parses `a..b` or `a..=b` (both inclusive).
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("expected a range a..b, got {s:?}")))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad range endpoint {t:?}")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return Err(Error::Parse(format!("empty range {s:?}")));
    }
    Ok(a..=b)
}

pub fn cmd_verify(
    coeffs: &str,
    init: &str,
    relation: &str,
    range: &str,
    base: i64,
    power: u32,
) -> Result<CommandResult> {
    let spec = RecurrenceSpec::new(parse_rational_list(coeffs)?)?;
    let initial = parse_rational_list(init)?;
    if initial.len() != spec.order() {
        return Err(Error::Parse(format!(
            "need {} initial values, got {}",
            spec.order(),
            initial.len()
        )));
    }
    let rel = RecurrenceRelation::raw(parse_rational_list(relation)?)?;
    let range = parse_range(range)?;
    if power == 0 {
        return Err(Error::InvalidSpec("power must be at least 1".into()));
    }
    let mut res = CommandResult::new("verify");
    res.input("coeffs", &spec);
    res.input("init", strings(&initial).join(","));
    res.input("base", base);
    res.input("power", power);
    res.input("range", format!("{}..{}", range.start(), range.end()));
    res.relation = Some((&rel).into());

    let seq = SequenceInstance::new(spec, base, initial)?;
    let d = rel.order() as i64;
    let t = rel.order() + 1;
    let lo = range.start() - d;
    let hi = (*range.end()).max(range.start() - 1 + (t * t) as i64);
    let values: IndexedValues = seq.values(lo..=hi)?.map(|x| pow(x, power));

    match rel.first_failure(&values, range.clone())? {
        None => res.check("relation_holds", true),
        Some((m, r)) => {
            res.check("relation_holds", false);
            res.values.insert("first_failure_m".into(), m.to_string());
            res.values.insert("first_failure_residual".into(), r.to_string());
        }
    }
    let residuals = range
        .clone()
        .map(|m| IndexedOut { index: m, value: rel.residual(&values, m).expect("covered").to_string() })
        .collect();
    res.residuals.insert("relation".into(), residuals);
    let hankel = hankel_check(&values, t, range.start() - 1)?;
    res.values.insert(format!("hankel_det_t{t}"), hankel.to_string());

    // Minimal relation over the same window, when it is long enough.
    let window = lo..=*range.end();
    let max_order = rel.order();
    if range.end() - lo + 1 >= 2 * max_order as i64 + 2 {
        let found = minimal_relation(&values, max_order, window)?;
        res.values.insert(
            "minimal_relation".into(),
            found.map_or_else(|| "none".to_string(), |r| r.to_string()),
        );
    }
    if !res.all_checks_pass() {
        res.status = "mismatch".into();
    }
    Ok(res)
}

pub fn cmd_oracle(
    so: &SecondOrderSpec,
    n: usize,
    sel: AppendixSel,
    a: &Rational,
    b: &Rational,
    r: i64,
) -> Result<CommandResult> {
    let mut res = CommandResult::new("oracle");
    pq_inputs(&mut res, so);
    res.input("n", n);
    res.input("a", a);
    res.input("b", b);
    res.input("r", r);
    let ctx = AppendixContext::new(n, so)?.with_w(a.clone(), b.clone(), r);
    res.checks = appendix::run_checks(&ctx, &sel.names())?;
    if sel == AppendixSel::All {
        res.check("q_det", appendix::check_q_det(n, so)?);
    }
    res.values.insert("det_A1".into(), appendix::build_a1(&ctx).det()?.to_string());
    res.values.insert("sigma_n".into(), ctx.sigma(n).to_string());
    res.values.insert("tau_n".into(), ctx.tau(n).to_string());
    Ok(finish(res))
}
