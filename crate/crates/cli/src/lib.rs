//! Argument handling and report rendering for the `kolmo` binary.
//!
//! [`execute`] never touches the process streams, so tests drive it directly.
//! Exit codes: 0 on success, 1 on domain errors (a structured JSON error is
//! written to stdout), 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kolmo::certlab::{self, BoundedLowerBoundCertificate, CertError, RejectReason};
use kolmo::complexity::{
    self, build_table_with_max, histogram, ComplexityError, ComplexityEstimate,
    DEFAULT_TABLE_MAX_N,
};
use kolmo::dovetail::{discoveries_csv, find_descriptions, DovetailError};
use kolmo::generators::{GeneratorError, SourceSpec};
use kolmo::parallel::with_workers;
use kolmo::randomness::{delta0, Classifier, RandomnessError, DEFAULT_MAX_STAGE};
use kolmo::space::MAX_ENUMERATION_LENGTH;
use kolmo::tbvm::{self, ResolutionStatus, DEFAULT_STEP_BUDGET};
use kolmo::{BitSequence, RunLimits, VerdictKind};

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "kolmo", version, about = "Description search and randomness deficiency on a toy machine")]
struct Cli {
    /// Report format (each command has its own default).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for table and search commands; results do not depend on it.
    #[arg(long, global = true, env = "KOLMO_WORKERS",
          value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,

    #[command(flatten)]
    limits: LimitArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct LimitArgs {
    /// Steps a single program may execute.
    #[arg(long, global = true, default_value_t = DEFAULT_STEP_BUDGET)]
    step_budget: u64,
    #[arg(long, global = true, default_value_t = RunLimits::default().output_cap)]
    output_cap: usize,
    #[arg(long, global = true, default_value_t = RunLimits::default().reg_cap)]
    reg_cap: u64,
    /// Distinct machine states remembered for cycle detection.
    #[arg(long, global = true, default_value_t = RunLimits::default().tracked_state_cap)]
    tracked_state_cap: usize,
}

impl LimitArgs {
    fn run_limits(self) -> RunLimits {
        RunLimits {
            step_budget: self.step_budget,
            output_cap: self.output_cap,
            reg_cap: self.reg_cap,
            tracked_state_cap: self.tracked_state_cap,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one program on input n.
    VmRun {
        #[arg(long)]
        program: BitSequence,
        #[arg(long, default_value_t = 0)]
        n: u64,
        /// Also classify the run as halting, diverging or unresolved.
        #[arg(long)]
        resolve: bool,
    },
    /// Search for short descriptions of x.
    Search {
        #[arg(long)]
        x: BitSequence,
        #[arg(long, default_value_t = DEFAULT_MAX_STAGE)]
        stages: usize,
        /// Exhaustive search for the exact value instead of dovetailing.
        #[arg(long, conflicts_with = "all")]
        exact: bool,
        /// List every description the stages discover.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = MAX_ENUMERATION_LENGTH)]
        max_program_length: usize,
    },
    /// Exact complexity of every sequence of length n.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_TABLE_MAX_N)]
        max_n: usize,
    },
    /// Classify consecutive blocks of a bit source.
    Analyze {
        #[arg(long)]
        source: String,
        #[arg(long)]
        bits: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        block: u64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true,
              value_parser = clap::value_parser!(i64).range(-2..))]
        c: i64,
        #[arg(long, default_value_t = DEFAULT_MAX_STAGE)]
        stages: usize,
        #[arg(long, default_value_t = MAX_ENUMERATION_LENGTH)]
        max_program_length: usize,
        /// Precompute the full table for the block length.
        #[arg(long)]
        table: bool,
    },
    /// Emit bits from a source.
    Gen {
        #[arg(long)]
        source: String,
        #[arg(long)]
        bits: usize,
    },
    /// Issue a certificate that no program shorter than m outputs x within s steps.
    CertIssue {
        #[arg(long)]
        x: BitSequence,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
        s: u64,
    },
    /// Re-run the enumeration behind a certificate file.
    CertVerify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Largest N with N <= log2(N) + c.
    Bound {
        #[arg(long)]
        c: u32,
    },
}

struct Failure {
    kind: &'static str,
    message: String,
    details: Value,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Self {
            kind,
            message: message.to_string(),
            details: Value::Null,
        }
    }

    fn with(mut self, details: Value) -> Self {
        self.details = details;
        self
    }
}

enum Outcome {
    Done(String),
    Domain(Failure),
    Usage(String),
}

/// Runs the command line `args` (without the program name).
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("kolmo")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ok(text),
                _ => usage(text),
            };
        }
    };
    let limits = cli.limits.run_limits();
    if let Err(e) = limits.validate() {
        return usage(format!("error: {e}\n"));
    }
    let workers = cli.workers.map(usize::from).unwrap_or_else(default_workers);
    match with_workers(workers, || dispatch(&cli.command, cli.format, &limits)) {
        Outcome::Done(text) => ok(text),
        Outcome::Usage(message) => usage(format!("error: {message}\n")),
        Outcome::Domain(f) => {
            let mut body = json!({ "error": f.kind, "message": f.message });
            if let Value::Object(extra) = f.details {
                body.as_object_mut().expect("object").extend(extra);
            }
            Execution {
                code: 1,
                stdout: format!("{}\n", pretty(&body)),
                stderr: format!("error: {}\n", f.message),
            }
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn ok(stdout: String) -> Execution {
    Execution {
        code: 0,
        stdout,
        stderr: String::new(),
    }
}

fn usage(stderr: String) -> Execution {
    Execution {
        code: 2,
        stdout: String::new(),
        stderr,
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn dispatch(command: &Command, format: Option<Format>, limits: &RunLimits) -> Outcome {
    let result = match command {
        Command::VmRun { program, n, resolve } => {
            vm_run(program, *n, *resolve, format.unwrap_or(Format::Json), limits)
        }
        Command::Search { x, stages, exact, all, max_program_length } => search(
            x,
            *stages,
            *exact,
            *all,
            *max_program_length,
            format.unwrap_or(Format::Json),
            limits,
        ),
        Command::Table { n, max_n } => table(*n, *max_n, format.unwrap_or(Format::Csv), limits),
        Command::Analyze { source, bits, block, c, stages, max_program_length, table } => {
            let spec = match SourceSpec::parse(source) {
                Ok(spec) => spec,
                Err(e) => return Outcome::Usage(e.to_string()),
            };
            let request = AnalyzeRequest {
                source,
                spec,
                bits: *bits,
                block_n: *block as usize,
                c: *c,
                stages: *stages,
                max_program_length: *max_program_length,
                use_table: *table,
            };
            analyze(&request, format.unwrap_or(Format::Json), limits)
        }
        Command::Gen { source, bits } => {
            let spec = match SourceSpec::parse(source) {
                Ok(spec) => spec,
                Err(e) => return Outcome::Usage(e.to_string()),
            };
            generate(source, &spec, *bits, format.unwrap_or(Format::Text))
        }
        Command::CertIssue { x, m, s } => cert_issue(x, *m, *s, limits),
        Command::CertVerify { cert } => cert_verify(cert, format.unwrap_or(Format::Json)),
        Command::Bound { c } => Ok(bound(*c, format.unwrap_or(Format::Text))),
    };
    match result {
        Ok(text) => Outcome::Done(text),
        Err(f) => Outcome::Domain(f),
    }
}

fn limits_json(limits: &RunLimits) -> Value {
    serde_json::to_value(limits).expect("limits serialize")
}

fn vm_run(
    program: &BitSequence,
    n: u64,
    resolve: bool,
    format: Format,
    limits: &RunLimits,
) -> Result<String, Failure> {
    let outcome = tbvm::run_code(program, n, limits);
    let parsed = tbvm::parse(program);
    let resolution = match (&parsed, resolve) {
        (Ok(p), true) => Some(tbvm::resolve(p, n, limits)),
        _ => None,
    };
    let status = outcome.status.as_str();
    Ok(match format {
        Format::Json => {
            let mut body = json!({
                "program": program.to_string(),
                "n": n,
                "status": status,
                "output": outcome.output.to_string(),
                "steps": outcome.steps_used,
                "limits": limits_json(limits),
            });
            match &parsed {
                Ok(p) => body["disassembly"] = json!(p.disassemble()),
                Err(e) => body["parse_error"] = json!(e.to_string()),
            }
            if let Some(r) = &resolution {
                body["resolution"] = resolution_json(r);
            }
            format!("{}\n", pretty(&body))
        }
        Format::Csv => format!(
            "program,n,status,output,steps\n{program},{n},{status},{},{}\n",
            outcome.output, outcome.steps_used
        ),
        Format::Text => {
            let mut out = format!(
                "status {status}\noutput {}\nsteps {}\n",
                outcome.output, outcome.steps_used
            );
            if let Some(r) = &resolution {
                let _ = writeln!(out, "resolution {}", resolution_json(r)["kind"].as_str().unwrap_or(""));
            }
            out
        }
    })
}

fn resolution_json(r: &ResolutionStatus) -> Value {
    match r {
        ResolutionStatus::Halts(o) => json!({
            "kind": "halts",
            "output": o.output.to_string(),
            "steps_used": o.steps_used,
        }),
        ResolutionStatus::Diverges { reason, steps_used } => json!({
            "kind": "diverges",
            "reason": reason,
            "steps_used": steps_used,
        }),
        ResolutionStatus::Unresolved { reason, steps_used } => json!({
            "kind": "unresolved",
            "reason": reason,
            "steps_used": steps_used,
        }),
    }
}

fn estimate_json(x: &BitSequence, e: &ComplexityEstimate) -> Value {
    json!({
        "x_bits": x.to_string(),
        "n": x.len(),
        "c_value": e.value,
        "certified": e.certified,
        "witness_bits": e.witness.code().to_string(),
        "witness_disassembly": e.witness.disassemble(),
        "delta0_lower_bound": delta0(x.len(), e.value),
        "budget": {
            "stages": e.budget.stages,
            "max_program_length": e.budget.max_program_length,
            "limits": limits_json(&e.budget.limits),
        },
    })
}

fn dovetail_failure(e: DovetailError) -> Failure {
    let kind = match e {
        DovetailError::ZeroStage => "zero-stage",
        DovetailError::SpaceTooLarge { .. } => "space-too-large",
    };
    Failure::new(kind, e)
}

fn complexity_failure(e: ComplexityError) -> Failure {
    match e {
        ComplexityError::UncertifiableAtBudget { ref best } => {
            let details = json!({
                "best_value": best.value,
                "best_witness_bits": best.witness.code().to_string(),
            });
            Failure::new("uncertifiable-at-budget", &e).with(details)
        }
        ComplexityError::TableTooLarge { n, max } => {
            Failure::new("table-too-large", &e).with(json!({ "n": n, "max": max }))
        }
        ComplexityError::Dovetail(d) => dovetail_failure(d),
    }
}

fn search(
    x: &BitSequence,
    stages: usize,
    exact: bool,
    all: bool,
    max_program_length: usize,
    format: Format,
    limits: &RunLimits,
) -> Result<String, Failure> {
    if all {
        let found = find_descriptions(x, stages, limits).map_err(dovetail_failure)?;
        return Ok(match format {
            Format::Csv => discoveries_csv(&found),
            Format::Json => {
                let rows: Vec<Value> = found
                    .iter()
                    .map(|d| {
                        json!({
                            "stage": d.stage_found,
                            "program_bits": d.program.code().to_string(),
                            "program_length": d.program.len(),
                            "steps_used": d.steps_used,
                        })
                    })
                    .collect();
                let body = json!({
                    "x_bits": x.to_string(),
                    "stages": stages,
                    "limits": limits_json(limits),
                    "discoveries": rows,
                });
                format!("{}\n", pretty(&body))
            }
            Format::Text => {
                let mut out = String::new();
                for d in &found {
                    let _ = writeln!(
                        out,
                        "stage {} length {} {} ({})",
                        d.stage_found,
                        d.program.len(),
                        d.program.code(),
                        d.program.disassemble()
                    );
                }
                let _ = writeln!(out, "{} descriptions within {stages} stages", found.len());
                out
            }
        });
    }
    let estimate = if exact {
        complexity::exact_with_max_length(x, limits, max_program_length)
            .map_err(complexity_failure)?
    } else {
        complexity::upper_bound(x, stages, limits).map_err(dovetail_failure)?
    };
    Ok(match format {
        Format::Json => {
            let mut body = estimate_json(x, &estimate);
            body["mode"] = json!(if exact { "exact" } else { "upper-bound" });
            format!("{}\n", pretty(&body))
        }
        Format::Csv => format!(
            "x_bits,n,c_value,certified,witness_bits\n{x},{},{},{},{}\n",
            x.len(),
            estimate.value,
            estimate.certified,
            estimate.witness.code()
        ),
        Format::Text => {
            let relation = if estimate.certified { "=" } else { "<=" };
            format!(
                "C(x|{}) {relation} {}\nwitness {} ({})\n",
                x.len(),
                estimate.value,
                estimate.witness.code(),
                estimate.witness.disassemble()
            )
        }
    })
}

fn table(n: usize, max_n: usize, format: Format, limits: &RunLimits) -> Result<String, Failure> {
    let table = build_table_with_max(n, limits, max_n).map_err(complexity_failure)?;
    Ok(match format {
        Format::Csv => table.to_csv(),
        Format::Json => format!("{}\n", pretty(&table.to_json())),
        Format::Text => {
            let mut out = format!("n {n}\nentries {}\n", table.len());
            for (value, count) in histogram(&table) {
                let _ = writeln!(out, "C = {value}: {count}");
            }
            out
        }
    })
}

struct AnalyzeRequest<'a> {
    source: &'a str,
    spec: SourceSpec,
    bits: usize,
    block_n: usize,
    c: i64,
    stages: usize,
    max_program_length: usize,
    use_table: bool,
}

fn generator_failure(e: GeneratorError) -> Failure {
    match e {
        GeneratorError::InsufficientBits { requested, available } => {
            Failure::new("insufficient-bits", &e)
                .with(json!({ "requested": requested, "available": available }))
        }
        GeneratorError::Unreadable { .. } => Failure::new("unreadable-source", e),
        GeneratorError::InvalidChar { .. } => Failure::new("invalid-source-data", e),
        other => Failure::new("invalid-source", other),
    }
}

fn analyze(req: &AnalyzeRequest, format: Format, limits: &RunLimits) -> Result<String, Failure> {
    let bits = req.spec.generate(req.bits).map_err(generator_failure)?;
    let table = if req.use_table {
        Some(build_table_with_max(req.block_n, limits, DEFAULT_TABLE_MAX_N).map_err(complexity_failure)?)
    } else {
        None
    };
    let mut classifier =
        Classifier::new(req.stages, *limits).with_max_program_length(req.max_program_length);
    if let Some(t) = &table {
        classifier = classifier.with_table(t);
    }
    let report = classifier
        .analyze_stream(&bits, req.block_n, req.c)
        .map_err(|e| match e {
            RandomnessError::EmptyInput { available, block_n } => Failure::new("empty-input", &e)
                .with(json!({ "available": available, "block_n": block_n })),
            RandomnessError::Dovetail(d) => dovetail_failure(d),
            other => Failure::new("invalid-request", other),
        })?;
    Ok(match format {
        Format::Csv => report.to_csv(),
        Format::Json => {
            let mut body = serde_json::to_value(&report).expect("report serializes");
            body["source"] = json!(req.source);
            body["bits"] = json!(req.bits);
            format!("{}\n", pretty(&body))
        }
        Format::Text => {
            let mut out = format!(
                "source {} bits {} block {} c {}\n",
                req.source, req.bits, req.block_n, req.c
            );
            for b in &report.blocks {
                let _ = write!(out, "block {} {} deficiency {}", b.index, b.verdict.as_str(), b.deficiency);
                if let Some(w) = &b.witness_bits {
                    let _ = write!(out, " witness {w}");
                }
                out.push('\n');
            }
            for kind in [
                VerdictKind::CertifiedNonRandom,
                VerdictKind::CertifiedRandom,
                VerdictKind::NoEvidenceAtBudget,
            ] {
                let count = report.blocks.iter().filter(|b| b.verdict == kind).count();
                let _ = writeln!(out, "{} {count}", kind.as_str());
            }
            let _ = writeln!(out, "flagged fraction {}", report.flagged_fraction);
            let _ = writeln!(
                out,
                "stages {} max program length {} step budget {} output cap {} reg cap {} tracked states {}",
                report.max_stage,
                report.max_program_length,
                limits.step_budget,
                limits.output_cap,
                limits.reg_cap,
                limits.tracked_state_cap
            );
            out
        }
    })
}

fn generate(source: &str, spec: &SourceSpec, count: usize, format: Format) -> Result<String, Failure> {
    let bits = spec.generate(count).map_err(generator_failure)?;
    Ok(match format {
        Format::Text => format!("{bits}\n"),
        Format::Csv => format!("source,count,bits\n{source},{count},{bits}\n"),
        Format::Json => format!(
            "{}\n",
            pretty(&json!({ "source": source, "count": count, "bits": bits.to_string() }))
        ),
    })
}

fn cert_issue(x: &BitSequence, m: usize, s: u64, limits: &RunLimits) -> Result<String, Failure> {
    match certlab::issue_with_limits(x, m, s, limits) {
        Ok(cert) => Ok(format!("{}\n", cert.to_json())),
        Err(e) => Err(match &e {
            CertError::WitnessExists(p) => Failure::new("witness-exists", &e).with(json!({
                "witness_bits": p.code().to_string(),
                "witness_length": p.len(),
            })),
            CertError::InvalidStatement(_) => Failure::new("invalid-statement", &e),
            CertError::SpaceTooLarge { .. } => Failure::new("space-too-large", &e),
            CertError::NotFoundWithinBudget { .. } => Failure::new("not-found-within-budget", &e),
        }),
    }
}

fn cert_verify(path: &PathBuf, format: Format) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new("unreadable-certificate", format!("{}: {e}", path.display())))?;
    let cert = BoundedLowerBoundCertificate::from_json(&text)
        .map_err(|e| Failure::new("malformed-certificate", e))?;
    let report = certlab::verify(&cert);
    if let Some(reason) = &report.rejection {
        let message = match reason {
            RejectReason::WitnessFound { witness_bits } => {
                format!("certificate rejected: {witness_bits} outputs x")
            }
            RejectReason::TallyMismatch { length } => {
                format!("certificate rejected: tally differs at length {length}")
            }
            RejectReason::Malformed { detail } => format!("certificate rejected: {detail}"),
        };
        let details = serde_json::to_value(&report).expect("report serializes");
        return Err(Failure::new("certificate-rejected", message).with(details));
    }
    Ok(match format {
        Format::Text => format!("accepted ({} programs checked)\n", report.programs_checked),
        Format::Csv => format!("accepted,programs_checked\ntrue,{}\n", report.programs_checked),
        Format::Json => format!(
            "{}\n",
            pretty(&serde_json::to_value(&report).expect("report serializes"))
        ),
    })
}

fn bound(c: u32, format: Format) -> String {
    let gap = certlab::chaitin_gap(c);
    match format {
        Format::Text => format!("{gap}\n"),
        Format::Csv => format!("c,chaitin_gap\n{c},{gap}\n"),
        Format::Json => format!("{}\n", pretty(&json!({ "c": c, "chaitin_gap": gap }))),
    }
}
