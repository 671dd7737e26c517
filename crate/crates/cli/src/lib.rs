//! The `nilgcs` command line: subcommands over `.cdga` files with text or
//! JSON output.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use nilgcs::cdga::{Presentation, ALPHA};
use nilgcs::exterior::Blade;
use nilgcs::frontend::{format_form, parse, Diagnostic, Document};
use nilgcs::gcs::{catalog, verify, AlphaMode, GcsData};
use nilgcs::invariants::fingerprint_of;
use nilgcs::iso::{compare_presentations, family_parameter, AlphaSpec, CompareOutcome, FieldMode, IsoOutcome};
use nilgcs::scalars::{Assignment, CScalar, Rational};
use serde_json::{json, Value};

/// Environment variable holding default parameter samples.
pub const SAMPLES_VAR: &str = "NILGCS_SAMPLES";

/// Used when the environment variable is unset.
pub const DEFAULT_SAMPLES: &str = "1/2,1,2,5,22/7";

#[derive(Parser, Debug)]
#[command(name = "nilgcs", version, about = "Exact computations on nilpotent Lie algebras given by structure equations")]
struct Cli {
    /// Structured JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check d^2 = 0.
    Check { file: PathBuf },
    /// Betti numbers.
    Betti {
        file: PathBuf,
        /// Fix a parameter, e.g. `alpha=1/2`.
        #[arg(long = "param", value_name = "NAME=Q")]
        params: Vec<String>,
    },
    /// Classical invariants.
    Invariants {
        file: PathBuf,
        #[arg(long = "param", value_name = "NAME=Q")]
        params: Vec<String>,
    },
    /// A basis of the closed k-forms.
    Closed {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long = "param", value_name = "NAME=Q")]
        params: Vec<String>,
    },
    /// Verify generalized complex structures.
    VerifyGcs {
        file: PathBuf,
        /// Only structures of this type.
        #[arg(long = "type", value_name = "K")]
        kind: Option<usize>,
        /// Use the built-in catalog for g_alpha-shaped files.
        #[arg(long)]
        catalog: bool,
        #[arg(long = "param", value_name = "NAME=Q")]
        params: Vec<String>,
    },
    /// Invariants, then the isomorphism proof when both are family members.
    Compare {
        left: PathBuf,
        right: PathBuf,
        /// Run the proof over C instead of R.
        #[arg(long)]
        complex: bool,
    },
}

/// Exit code and captured streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs with the samples from [`SAMPLES_VAR`].
pub fn run_cli<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_samples(argv, std::env::var(SAMPLES_VAR).ok().as_deref())
}

/// Runs with an explicit sample list (comma-separated rationals).
pub fn run_with_samples<I, T>(argv: I, samples: Option<&str>) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut ctx = Ctx { json: cli.json, stderr: String::new(), diagnostics: Vec::new() };
    let samples = match parse_samples(samples.unwrap_or(DEFAULT_SAMPLES)) {
        Ok(s) => s,
        Err(msg) => return ctx.usage(format!("{SAMPLES_VAR}: {msg}")),
    };
    match run(&mut ctx, cli.command, &samples) {
        Ok(report) => {
            let stdout = if ctx.json {
                let mut v = report.json;
                v["diagnostics"] = json!(ctx.diagnostics);
                format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
            } else {
                report.text
            };
            Output { code: report.code, stdout, stderr: ctx.stderr }
        }
        Err(out) => out,
    }
}

struct Ctx {
    json: bool,
    stderr: String,
    diagnostics: Vec<Diagnostic>,
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Ctx {
    fn usage(&mut self, msg: String) -> Output {
        let _ = writeln!(self.stderr, "error: {msg}");
        let stdout = if self.json {
            let v = json!({"algebra": null, "parameters": {}, "result": null, "diagnostics": self.diagnostics, "error": msg});
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        } else {
            String::new()
        };
        Output { code: 2, stdout, stderr: std::mem::take(&mut self.stderr) }
    }

    fn load(&mut self, path: &PathBuf) -> Result<Document, Output> {
        let text = std::fs::read_to_string(path).map_err(|e| self.usage(format!("{}: {e}", path.display())))?;
        let parsed = parse(&text);
        for d in &parsed.diagnostics {
            let _ = writeln!(self.stderr, "{}:{d}", path.display());
        }
        self.diagnostics.extend(parsed.diagnostics.iter().cloned());
        match parsed.document {
            Some(doc) => Ok(doc),
            None => Err(self.usage(format!("{}: parse failed", path.display()))),
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|_| format!("'{s}' is not a rational number"))
}

fn parse_samples(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_rational).collect()
}

fn parse_params(p: &Presentation<CScalar>, raw: &[String]) -> Result<Assignment, String> {
    let mut a = Assignment::new();
    for item in raw {
        let (name, value) = item.split_once('=').ok_or_else(|| format!("--param expects NAME=Q, got '{item}'"))?;
        let name = name.trim();
        if !p.parameters().iter().any(|q| q == name) {
            return Err(format!("'{}' has no parameter '{name}'", p.name()));
        }
        a.set(name, parse_rational(value)?);
    }
    Ok(a)
}

fn params_json(a: &Assignment) -> Value {
    let m: BTreeMap<String, String> = a.iter().map(|(k, v)| (k.name().to_string(), v.to_string())).collect();
    json!(m)
}

fn assignment_text(a: &Assignment) -> String {
    a.iter().map(|(k, v)| format!("{}={v}", k.name())).collect::<Vec<_>>().join(",")
}

/// Every parameter set to the same sample value.
fn uniform(p: &Presentation<CScalar>, q: &Rational) -> Assignment {
    let mut a = Assignment::new();
    for name in p.parameters() {
        a.set(name, q.clone());
    }
    a
}

fn blade_text(b: &Blade) -> String {
    b.indices().map(|i| format!("e{i}")).collect::<Vec<_>>().join("^")
}

fn join(v: &[usize], sep: &str) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(sep)
}

fn envelope(p: &Presentation<CScalar>, a: &Assignment, result: Value) -> Value {
    json!({"algebra": p.name(), "parameters": params_json(a), "result": result})
}

fn run(ctx: &mut Ctx, cmd: Command, samples: &[Rational]) -> Result<Report, Output> {
    match cmd {
        Command::Check { file } => {
            let p = ctx.load(&file)?.presentation;
            check(&p, samples)
        }
        Command::Betti { file, params } => {
            let p = ctx.load(&file)?.presentation;
            let a = parse_params(&p, &params).map_err(|m| ctx.usage(m))?;
            betti(ctx, &p, &a, samples)
        }
        Command::Invariants { file, params } => {
            let p = ctx.load(&file)?.presentation;
            let a = parse_params(&p, &params).map_err(|m| ctx.usage(m))?;
            let sp = p.specialize(&a).map_err(|e| ctx.usage(e.to_string()))?;
            let fp = match sp.to_rational() {
                Some(q) => fingerprint_of(&q),
                None => fingerprint_of(&sp),
            }
            .map_err(|e| ctx.usage(e.to_string()))?;
            Ok(Report {
                code: 0,
                text: format!("{fp}\n"),
                json: envelope(&p, &a, json!(fp)),
            })
        }
        Command::Closed { file, degree, params } => {
            let p = ctx.load(&file)?.presentation;
            let a = parse_params(&p, &params).map_err(|m| ctx.usage(m))?;
            if degree > p.dim() {
                return Err(ctx.usage(format!("degree {degree} exceeds the dimension {}", p.dim())));
            }
            let sp = p.specialize(&a).map_err(|e| ctx.usage(e.to_string()))?;
            let basis: Vec<String> = sp.closed_basis(degree).iter().map(format_form).collect();
            let mut text = format!("dim Z^{degree} = {}\n", basis.len());
            for b in &basis {
                let _ = writeln!(text, "{b}");
            }
            Ok(Report {
                code: 0,
                text,
                json: envelope(&p, &a, json!({"degree": degree, "dimension": basis.len(), "basis": basis})),
            })
        }
        Command::VerifyGcs { file, kind, catalog: use_catalog, params } => {
            let doc = ctx.load(&file)?;
            let a = parse_params(&doc.presentation, &params).map_err(|m| ctx.usage(m))?;
            verify_gcs(ctx, &doc, &a, kind, use_catalog)
        }
        Command::Compare { left, right, complex } => {
            let a = ctx.load(&left)?.presentation;
            let b = ctx.load(&right)?.presentation;
            compare_cmd(ctx, &a, &b, complex, samples)
        }
    }
}

fn check(p: &Presentation<CScalar>, samples: &[Rational]) -> Result<Report, Output> {
    let report = p.check_d_squared();
    let mut text = String::new();
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|(j, f)| json!({"generator": j, "d_squared": format_form(f)}))
        .collect();
    let mut passed = report.passed();
    if passed {
        text.push_str("PASS d^2 = 0\n");
    } else {
        for (j, f) in &report.failures {
            let _ = writeln!(text, "FAIL d(d e{j}) = {}", format_form(f));
        }
    }
    let mut sample_json = Vec::new();
    if !p.parameters().is_empty() {
        for q in samples {
            let a = uniform(p, q);
            let ok = match p.specialize(&a) {
                Ok(sp) => sp.check_d_squared().passed(),
                Err(_) => false,
            };
            passed &= ok;
            let _ = writeln!(text, "{} d^2 = 0 at {}", if ok { "PASS" } else { "FAIL" }, assignment_text(&a));
            sample_json.push(json!({"assignment": params_json(&a), "passed": ok}));
        }
    }
    Ok(Report {
        code: if passed { 0 } else { 1 },
        text,
        json: envelope(
            p,
            &Assignment::new(),
            json!({"passed": passed, "failures": failures, "samples": sample_json}),
        ),
    })
}

fn betti(ctx: &mut Ctx, p: &Presentation<CScalar>, a: &Assignment, samples: &[Rational]) -> Result<Report, Output> {
    let sp = p.specialize(a).map_err(|e| ctx.usage(e.to_string()))?;
    let sample_list: Vec<Assignment> = if sp.parameters().is_empty() {
        Vec::new()
    } else {
        samples.iter().map(|q| uniform(&sp, q)).collect()
    };
    let report = match sp.to_rational() {
        Some(q) => q.betti_generic(),
        None => sp.betti(&sample_list),
    }
    .map_err(|e| ctx.usage(e.to_string()))?;
    let mut text = format!("{}\n", join(&report.betti, " "));
    for s in &report.samples {
        let note = if s.rank_drops.is_empty() { String::new() } else { format!(" (rank drops in degrees {})", join(&s.rank_drops, ",")) };
        let _ = writeln!(text, "{}: {}{note}", assignment_text(&s.assignment), join(&s.betti, " "));
    }
    let samples_json: Vec<Value> = report
        .samples
        .iter()
        .map(|s| json!({"assignment": params_json(&s.assignment), "betti": s.betti, "rank_drops": s.rank_drops}))
        .collect();
    let result = json!({
        "betti": report.betti,
        "euler_characteristic": report.euler_characteristic,
        "ranks": report.ranks,
        "exceptional_candidates": report.exceptional_candidates.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "samples": samples_json,
    });
    Ok(Report { code: 0, text, json: envelope(p, a, result) })
}

fn verify_gcs(
    ctx: &mut Ctx,
    doc: &Document,
    a: &Assignment,
    kind: Option<usize>,
    use_catalog: bool,
) -> Result<Report, Output> {
    let p = &doc.presentation;
    let sp = p.specialize(a).map_err(|e| ctx.usage(e.to_string()))?;
    let structures: Vec<GcsData<CScalar>> = if use_catalog {
        let mode = match family_parameter(p) {
            Some(AlphaSpec::Symbolic) => match a.get(ALPHA) {
                Some(q) => AlphaMode::Value(q.clone()),
                None => AlphaMode::Symbolic,
            },
            Some(AlphaSpec::Value(q)) => AlphaMode::Value(q),
            None => return Err(ctx.usage(format!("'{}' is not a member of the g_alpha family; --catalog does not apply", p.name()))),
        };
        catalog(&mode).map_err(|e| ctx.usage(e.to_string()))?
    } else {
        doc.structures
            .iter()
            .map(|g| g.specialize(a))
            .collect::<Result<_, _>>()
            .map_err(|e| ctx.usage(e.to_string()))?
    };
    let selected: Vec<&GcsData<CScalar>> = structures.iter().filter(|g| kind.is_none_or(|k| g.k == k)).collect();
    if selected.is_empty() {
        return Err(ctx.usage("no generalized complex structures to verify".into()));
    }
    let mut text = String::new();
    let mut all = true;
    let mut verdicts = Vec::new();
    for g in selected {
        let v = verify(&sp, g).map_err(|e| ctx.usage(e.to_string()))?;
        let passed = v.passed();
        all &= passed;
        let mut line = format!(
            "{} type {} ({}): top coefficient {}",
            if passed { "PASS" } else { "FAIL" },
            v.k,
            v.label,
            v.top_coefficient
        );
        if !v.nondegenerate {
            line.push_str("; degenerate");
        }
        if let Some((b, c)) = &v.first_failure {
            let _ = write!(line, "; d(rho) has {} on {}", c, blade_text(b));
        }
        if !v.exceptional_roots.is_empty() {
            let roots: Vec<String> = v.exceptional_roots.iter().map(|q| q.to_string()).collect();
            let _ = write!(line, "; degenerate at alpha = {}", roots.join(", "));
        }
        let _ = writeln!(text, "{line}");
        verdicts.push(json!({
            "label": v.label,
            "type": v.k,
            "passed": passed,
            "nondegenerate": v.nondegenerate,
            "integrable": v.integrable,
            "top_coefficient": v.top_coefficient.to_string(),
            "exceptional_roots": v.exceptional_roots.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "first_failure": v.first_failure.as_ref().map(|(b, c)| json!({"blade": blade_text(b), "coefficient": c.to_string()})),
        }));
    }
    Ok(Report {
        code: if all { 0 } else { 1 },
        text,
        json: envelope(p, a, json!({"passed": all, "verdicts": verdicts})),
    })
}

fn compare_cmd(
    ctx: &mut Ctx,
    a: &Presentation<CScalar>,
    b: &Presentation<CScalar>,
    complex: bool,
    samples: &[Rational],
) -> Result<Report, Output> {
    let q = samples.first().cloned().unwrap_or_else(|| Rational::from_integer(1.into()));
    let mut sample = uniform(a, &q);
    for name in b.parameters() {
        sample.set(name, q.clone());
    }
    let mode = if complex { FieldMode::Complex } else { FieldMode::Real };
    let report = compare_presentations(a, b, &sample, mode).map_err(|e| ctx.usage(e.to_string()))?;
    let mut text = String::new();
    let (verdict, certified, hypothesis) = match &report.outcome {
        CompareOutcome::DistinctInvariants(d) => {
            text.push_str("NON-ISOMORPHIC (certified)\n");
            let _ = writeln!(text, "invariants differ: {}", d.join(", "));
            ("non-isomorphic", true, None)
        }
        CompareOutcome::Proof(v) => {
            let (verdict, certified) = match v.outcome {
                IsoOutcome::NonIsomorphicCertified => ("non-isomorphic", true),
                IsoOutcome::IsomorphicWitness => ("isomorphic", true),
                IsoOutcome::Inconclusive => ("inconclusive", false),
            };
            let head = match (v.outcome, &v.hypothesis) {
                (IsoOutcome::NonIsomorphicCertified, None) => "NON-ISOMORPHIC (certified)".to_string(),
                (IsoOutcome::NonIsomorphicCertified, Some(h)) => format!("NON-ISOMORPHIC (certified, assuming {h})"),
                (IsoOutcome::IsomorphicWitness, _) => "ISOMORPHIC (witness)".to_string(),
                (IsoOutcome::Inconclusive, _) => "INCONCLUSIVE".to_string(),
            };
            let _ = writeln!(text, "{head}");
            let _ = writeln!(text, "invariants agree: {}", report.left);
            for step in &v.trace {
                let _ = writeln!(text, "[{}] {} {}: {} => {}", step.branch, step.rule, step.label, step.identity, step.conclusion);
            }
            for br in &v.branches {
                let _ = writeln!(text, "branch {}: {:?}", br.name, br.status);
            }
            (verdict, certified, v.hypothesis.clone())
        }
        CompareOutcome::Inconclusive => {
            text.push_str("INCONCLUSIVE\n");
            let _ = writeln!(text, "invariants agree: {}", report.left);
            ("inconclusive", false, None)
        }
    };
    let result = json!({
        "verdict": verdict,
        "certified": certified,
        "hypothesis": hypothesis,
        "left": report.left,
        "right": report.right,
        "outcome": report.outcome,
    });
    let params = if a.parameters().is_empty() && b.parameters().is_empty() {
        json!({})
    } else {
        params_json(&sample)
    };
    Ok(Report {
        code: if certified { 0 } else { 1 },
        text,
        json: json!({"algebra": [a.name(), b.name()], "parameters": params, "result": result}),
    })
}
