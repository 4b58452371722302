//! `kinv`: classify states, print class tables, emit representatives and run
//! verification suites.
//!
//! Exit codes: 0 success, 1 usage or input error (and failed non-gap
//! verification checks), 2 classification gap.

use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};

use kinv::explain::explain_three_qubits;
use kinv::suites::{derive_seed, run_suite, Suite, SuiteConfig};
use kinv::{
    classify, random_invertible, representative, table_for, with_field, ClassLabel, Error, Family, FieldDescriptor,
    Shape, TensorDocument,
};

#[derive(Parser, Debug)]
#[command(name = "kinv", version, about = "Flattening-kernel entanglement invariants and class tables")]
struct Cli {
    /// Field: rational, gaussian-rational or gf:P. Overrides a document's own field.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<FieldDescriptor>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Root seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the invariant signature of a tensor document and find its class.
    Classify {
        /// Tensor document, or `-` for standard input.
        path: String,
    },
    /// Print the class table of a family.
    Table {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        d1: Option<usize>,
        #[arg(long)]
        d2: Option<usize>,
    },
    /// Emit the representative of a class as a tensor document.
    Representative {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        d1: Option<usize>,
        #[arg(long)]
        d2: Option<usize>,
        #[arg(long, value_parser = parse_label)]
        label: ClassLabel,
        /// Express the representative in random invertible local bases.
        #[arg(long)]
        generic_seed: Option<u64>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        d_max: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Walk through every kernel constraint system of a three-qubit state.
    Explain3 { path: String },
}

fn parse_field(s: &str) -> Result<FieldDescriptor, String> {
    FieldDescriptor::parse(s).map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_label(s: &str) -> Result<ClassLabel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a command wants to report besides its standard output.
enum Outcome {
    Ok,
    Gap,
    Failed,
}

fn read_input(path: &str) -> Result<String, Error> {
    let mut buf = String::new();
    let res = if path == "-" {
        io::stdin().read_to_string(&mut buf).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|s| buf = s)
    };
    res.map_err(|e| Error::Document(format!("{path}: {e}")))?;
    Ok(buf)
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn command_echo() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn emit(format: Format, text: String, value: serde_json::Value) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json")),
    }
}

fn family_shape(family: Family, d: Option<usize>, d1: Option<usize>, d2: Option<usize>) -> Result<Shape, Error> {
    match family {
        Family::Bipartite => {
            let (a, b) = match (d1.or(d), d2.or(d)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Precondition("bipartite family needs --d1 and --d2 (or --d)".into())),
            };
            if a < 1 || b < 1 {
                return Err(Error::Precondition("--d1 and --d2 must be at least 1".into()));
            }
            Shape::new(&[a, b])
        }
        _ => match d {
            Some(d) if d >= 2 => family.shape(d),
            Some(d) => Err(Error::Precondition(format!("--d must be at least 2, got {d}"))),
            None => Err(Error::Precondition(format!("family {} needs --d", family.tag()))),
        },
    }
}

fn cmd_classify(cli: &Cli, path: &str) -> Result<Outcome, Error> {
    let input = read_input(path)?;
    let doc = TensorDocument::parse(&input)?;
    let field = cli.field.unwrap_or(doc.field);
    with_field!(field, |ctx: F| {
        let v = doc.to_tensor::<F>(&ctx)?;
        let mut report = json!({
            "command": command_echo(),
            "input_digest": digest(input.as_bytes()),
            "field": field.to_string(),
            "field_dependent": field.is_field_dependent(),
            "shape": v.shape().to_string(),
        });
        match classify(&v) {
            Ok(c) => {
                report["signature"] = serde_json::to_value(&c.signature).expect("json");
                report["label"] = json!(c.label.to_string());
                report["summary"] = json!({ "status": "classified", "label": c.label.to_string() });
                let mut text = format!("shape {}\nsignature {}\nclass {}\n", v.shape(), c.signature, c.label);
                if field.is_field_dependent() {
                    text += &format!("note: classification over {field} is field-dependent\n");
                }
                emit(cli.format, text, report);
                Ok(Outcome::Ok)
            }
            Err(Error::ClassificationGap(g)) => {
                eprintln!("classification gap: signature {} matches no class of {}", g.signature, g.family);
                report["signature"] = serde_json::to_value(&g.signature).expect("json");
                report["gap"] = json!({ "family": g.family, "document": g.document });
                report["summary"] = json!({ "status": "gap" });
                let text =
                    format!("shape {}\nsignature {}\nclass GAP\ntensor {}\n", v.shape(), g.signature, g.document);
                emit(cli.format, text, report);
                Ok(Outcome::Gap)
            }
            Err(e) => Err(e),
        }
    })
}

fn cmd_table(
    cli: &Cli,
    family: Family,
    d: Option<usize>,
    d1: Option<usize>,
    d2: Option<usize>,
) -> Result<Outcome, Error> {
    let shape = family_shape(family, d, d1, d2)?;
    let table = table_for(&shape)?;
    let names = family.formula_names();
    let mut text = format!("{} classes for shape {}\n", table.entries.len(), shape);
    text += &format!("{:<5} {} v\n", "", names.iter().map(|n| format!("{n:>5}")).collect::<Vec<_>>().join(" "));
    let mut rows = Vec::new();
    for e in &table.entries {
        let values = e.expected_key(&shape);
        text += &format!(
            "{:<5} {} {}\n",
            e.label.to_string(),
            values.iter().map(|x| format!("{x:>5}")).collect::<Vec<_>>().join(" "),
            e.representative
        );
        let invariants: serde_json::Map<String, serde_json::Value> =
            names.iter().zip(&values).map(|(n, x)| (n.to_string(), json!(x))).collect();
        rows.push(json!({
            "label": e.label.to_string(),
            "invariants": invariants,
            "formulas": e.formulas.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "representative": e.representative.to_string(),
        }));
    }
    emit(cli.format, text, json!({ "family": family.tag(), "shape": shape.to_string(), "entries": rows }));
    Ok(Outcome::Ok)
}

fn cmd_representative(cli: &Cli, shape: Shape, label: ClassLabel, generic_seed: Option<u64>) -> Result<Outcome, Error> {
    let field = cli.field.unwrap_or(FieldDescriptor::Rational);
    with_field!(field, |ctx: F| {
        let bases = generic_seed
            .map(|seed| {
                shape
                    .dims()
                    .iter()
                    .enumerate()
                    .map(|(f, &d)| random_invertible::<F>(d, 3, derive_seed(seed, 0xBA5E, f as u64), &ctx))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let v = representative::<F>(label, &shape, bases.as_deref(), &ctx)?;
        println!("{}", TensorDocument::from_tensor(&v).to_json_pretty());
        Ok(Outcome::Ok)
    })
}

fn cmd_verify(cli: &Cli, suite: Suite, d_max: Option<usize>, samples: Option<usize>) -> Result<Outcome, Error> {
    let config = SuiteConfig {
        suite,
        field: cli.field.unwrap_or(FieldDescriptor::Rational),
        d_max,
        samples,
        seed: cli.seed,
        bound: 3,
    };
    let report = run_suite(&config)?;
    for failure in report.failures() {
        eprintln!("FAIL {}: {}", failure.name, failure.detail);
    }
    let outcome = match (report.pass, report.gaps) {
        (true, _) => Outcome::Ok,
        (false, 0) => Outcome::Failed,
        (false, _) => Outcome::Gap,
    };
    let value = serde_json::to_value(&report).expect("json");
    emit(cli.format, report.to_string(), value);
    Ok(outcome)
}

fn cmd_explain3(cli: &Cli, path: &str) -> Result<Outcome, Error> {
    let doc = TensorDocument::parse(&read_input(path)?)?;
    let field = cli.field.unwrap_or(doc.field);
    with_field!(field, |ctx: F| {
        let report = explain_three_qubits(&doc.to_tensor::<F>(&ctx)?)?;
        emit(cli.format, report.to_string(), serde_json::to_value(&report).expect("json"));
        Ok(Outcome::Ok)
    })
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Classify { path } => cmd_classify(cli, path),
        Command::Table { family, d, d1, d2 } => cmd_table(cli, *family, *d, *d1, *d2),
        Command::Representative { family, d, d1, d2, label, generic_seed } => {
            let shape = family_shape(*family, *d, *d1, *d2)?;
            cmd_representative(cli, shape, *label, *generic_seed)
        }
        Command::Verify { suite, d_max, samples } => cmd_verify(cli, *suite, *d_max, *samples),
        Command::Explain3 { path } => cmd_explain3(cli, path),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Ok(Outcome::Gap) => ExitCode::from(2),
        Err(e @ Error::ClassificationGap(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
