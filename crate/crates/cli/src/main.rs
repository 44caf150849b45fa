use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qutrit_ct::normalform::{normalize, GateString, NfReport, NormalForm};
use qutrit_ct::oracle::{bfs_enumerate_with, check_generator_relations, AtlasChecker};
use qutrit_ct::synth::{diagnose, exact_synthesize, Diagnosis, NotInGroup, SynthResult};
use qutrit_ct::{clifford, projective_eq, PhasedOp, UnitPhase};

/// Exact compiler for single-qutrit Clifford+T circuits.
#[derive(Parser, Debug)]
#[command(name = "qutrit", version, about)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Inline input; omit to read `--input` or stdin.
    text: Option<String>,
    /// Read input from a file (`-` for stdin).
    #[arg(short, long, conflicts_with = "text")]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rewrite a gate string into normal form.
    Normalize {
        #[command(flatten)]
        input: Input,
        /// Print the form over H, S, T only.
        #[arg(long)]
        expand: bool,
    },
    /// Synthesise a JSON matrix into a gate string.
    Synth {
        /// Matrix file; omit to read `--input` or stdin.
        file: Option<PathBuf>,
        #[arg(short, long, conflicts_with = "file")]
        input: Option<PathBuf>,
        #[arg(long)]
        expand: bool,
    },
    /// Print the exact matrix of a gate string as JSON.
    Matrix {
        #[command(flatten)]
        input: Input,
    },
    /// Minimal T-count of a gate string.
    Tcount {
        #[command(flatten)]
        input: Input,
    },
    /// Test two gate strings or matrix files for equality up to phase.
    Equal { a: String, b: String },
    /// Enumerate the group up to a T-count and check the normal form against it.
    Selftest {
        #[arg(long, default_value_t = 2)]
        max_t: usize,
        /// Print the Clifford rewrite tables as JSON and exit.
        #[arg(long)]
        dump_tables: bool,
        /// Write the enumerated atlas as JSON lines.
        #[arg(long)]
        atlas: Option<PathBuf>,
    },
}

/// Usage or input problems; exit code 2.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

struct Outcome {
    text: String,
    ok: bool,
}

fn read_source(text: Option<&str>, path: Option<&Path>) -> Result<String, InputError> {
    if let Some(t) = text {
        return Ok(t.to_string());
    }
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| InputError(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn parse_gates(text: &str) -> Result<GateString, InputError> {
    GateString::parse(text).map_err(|e| InputError(format!("parse error: {e}")))
}

/// A file holding a JSON matrix or a gate string, else an inline gate string.
fn operand(arg: &str) -> Result<PhasedOp, InputError> {
    let path = Path::new(arg);
    if path.is_file() {
        let content = fs::read_to_string(path)?;
        if content.trim_start().starts_with('{') {
            return Ok(PhasedOp::from_json(&content)?);
        }
        return Ok(parse_gates(&content)?.matrix());
    }
    Ok(parse_gates(arg)?.matrix())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialisable")
}

fn form_text(nf: &NormalForm, expand: bool) -> String {
    if expand {
        nf.expanded()
    } else {
        nf.to_string()
    }
}

fn counts(nf: &NormalForm) -> String {
    format!(
        "t-count: {}\nh-count: {}\nphase: {}\n",
        nf.t_count(),
        nf.h_count(),
        nf.phase
    )
}

fn cmd_normalize(text: &str, expand: bool, json: bool) -> Result<Outcome, InputError> {
    let nf = normalize(&parse_gates(text)?);
    let text = if json {
        to_json(&nf.report())
    } else {
        format!("normal form: {}\n{}", form_text(&nf, expand), counts(&nf))
    };
    Ok(Outcome { text, ok: true })
}

#[derive(Serialize)]
struct SynthJson {
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<NfReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<NotInGroup>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnosis: Option<Diagnosis>,
}

fn cmd_synth(source: &str, expand: bool, json: bool) -> Result<Outcome, InputError> {
    let op = PhasedOp::from_json(source)?;
    let result = exact_synthesize(&op.mat).map_err(|e| InputError(format!("internal error: {e}")))?;
    match result {
        SynthResult::Member { mut nf, .. } => {
            if op.i_pow == 1 {
                nf.phase = nf.phase * UnitPhase::I;
            }
            let text = if json {
                to_json(&SynthJson {
                    member: true,
                    report: Some(nf.report()),
                    failure: None,
                    diagnosis: None,
                })
            } else {
                format!("{}\n{}", form_text(&nf, expand), counts(&nf))
            };
            Ok(Outcome { text, ok: true })
        }
        SynthResult::NotInGroup(reason) => {
            let diag = diagnose(&op.mat);
            let text = if json {
                to_json(&SynthJson {
                    member: false,
                    report: None,
                    failure: Some(reason),
                    diagnosis: Some(diag),
                })
            } else {
                let mut s = format!(
                    "not in group: {reason}\ndenominator exponent: {}\nunitary: {}\nparity prefilter: {}\nleading parity: {}\n",
                    diag.denom_exp,
                    diag.unitary,
                    if diag.prefilter { "pass" } else { "fail" },
                    diag.leading_parity
                );
                for c in &diag.candidates {
                    s.push_str(&format!("  ({})^-1: k={}\n", c.syllable, c.denom_exp));
                }
                s
            };
            Ok(Outcome { text, ok: false })
        }
    }
}

fn cmd_matrix(text: &str) -> Result<Outcome, InputError> {
    let m = parse_gates(text)?.matrix();
    Ok(Outcome {
        text: m.to_json(),
        ok: true,
    })
}

fn cmd_tcount(text: &str, json: bool) -> Result<Outcome, InputError> {
    let g = parse_gates(text)?;
    let t = normalize(&g).t_count();
    let text = if json {
        to_json(&serde_json::json!({ "t_count": t, "t_runs": g.t_runs() }))
    } else {
        t.to_string()
    };
    Ok(Outcome { text, ok: true })
}

fn cmd_equal(a: &str, b: &str, json: bool) -> Result<Outcome, InputError> {
    let (ma, mb) = (operand(a)?, operand(b)?);
    if !ma.is_unitary() || !mb.is_unitary() {
        return Err(InputError("operands must be unitary".into()));
    }
    let res = projective_eq(&ma, &mb).ok();
    let text = match (json, res) {
        (true, r) => to_json(&serde_json::json!({
            "equal": r.is_some(),
            "phase": r.map(|u| u.to_string()),
        })),
        (false, Some(u)) => format!("equal, phase {u}"),
        (false, None) => "not equal".to_string(),
    };
    Ok(Outcome {
        text,
        ok: res.is_some(),
    })
}

#[derive(Serialize)]
struct SelftestJson<'a> {
    passed: bool,
    layer_sizes: &'a [usize],
    relation_problems: &'a [String],
    uniqueness: &'a qutrit_ct::oracle::UniquenessReport,
    exponents: &'a qutrit_ct::oracle::ExponentReport,
}

fn cmd_selftest(max_t: usize, dump_tables: bool, atlas_path: Option<&Path>, json: bool) -> Result<Outcome, InputError> {
    if dump_tables {
        return Ok(Outcome {
            text: to_json(&clifford::tables().dump()),
            ok: true,
        });
    }
    let relations = check_generator_relations();
    let mut checker = AtlasChecker::new();
    let atlas = bfs_enumerate_with(max_t, usize::MAX, |e, m| checker.check(e, m));
    if let Some(p) = atlas_path {
        let f = fs::File::create(p)?;
        atlas.write_jsonl(io::BufWriter::new(f))?;
    }
    let (u, t) = (&checker.uniqueness, &checker.exponents);
    let passed = relations.is_empty() && u.passed() && t.passed() && atlas.layer_sizes[0] == 216;
    let text = if json {
        to_json(&SelftestJson {
            passed,
            layer_sizes: &atlas.layer_sizes,
            relation_problems: &relations,
            uniqueness: u,
            exponents: t,
        })
    } else {
        let mut s = String::new();
        for (t_count, n) in atlas.layer_sizes.iter().enumerate() {
            s.push_str(&format!("layer {t_count}: {n} elements\n"));
        }
        s.push_str(&format!("{} elements verified\n", atlas.len()));
        let problems = relations
            .iter()
            .chain(&u.mismatches)
            .chain(&u.collisions)
            .chain(&u.t_count_violations)
            .chain(&t.exponent_violations)
            .chain(&t.parity_violations);
        for p in problems.take(20) {
            s.push_str(&format!("violation: {p}\n"));
        }
        s.push_str(if passed { "selftest passed\n" } else { "selftest FAILED\n" });
        s
    };
    Ok(Outcome { text, ok: passed })
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let json = cli.json;
    match &cli.command {
        Command::Normalize { input, expand } => {
            let text = read_source(input.text.as_deref(), input.input.as_deref())?;
            cmd_normalize(&text, *expand, json)
        }
        Command::Synth { file, input, expand } => {
            let source = read_source(None, file.as_deref().or(input.as_deref()))?;
            cmd_synth(&source, *expand, json)
        }
        Command::Matrix { input } => {
            cmd_matrix(&read_source(input.text.as_deref(), input.input.as_deref())?)
        }
        Command::Tcount { input } => {
            let text = read_source(input.text.as_deref(), input.input.as_deref())?;
            cmd_tcount(&text, json)
        }
        Command::Equal { a, b } => cmd_equal(a, b, json),
        Command::Selftest {
            max_t,
            dump_tables,
            atlas,
        } => cmd_selftest(*max_t, *dump_tables, atlas.as_deref(), json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut text = outcome.text;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    let written = match &cli.output {
        Some(p) => fs::write(p, &text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
