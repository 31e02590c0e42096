//! `hypal` — exact computations on finite hypergroups.
//!
//! Exit codes: 0 when the command succeeds and the decided property holds
//! (valid table, ppt holds, mean exists, consistent report); 1 when a
//! property fails or a table is invalid, with the certificate or witness
//! in the output; 2 on input errors (malformed files, bad flags).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::Signed;

use hypal::algebra::FunctionOnH;
use hypal::amenability::{invariant_mean, verify_mean, MeanOutcome};
use hypal::corpus::{gen_conjugacy, gen_group, order2_table};
use hypal::document::{parse_document, serialize_table, GroupDocument, RationalText};
use hypal::haar::{
    equivalence_report, fixed_point_haar, gamma_well_defined, ppt_check, CesaroOptions, HaarMethod,
};
use hypal::hypergroup::{validate_table, ConvolutionTable};
use hypal::rational::parse_rational;
use hypal_cli::reports::{EquivalenceDoc, GammaDoc, GenDoc, HaarDoc, MeanDoc, PptDoc, ValidateDoc};

#[derive(Parser)]
#[command(
    name = "hypal",
    version,
    about = "Validate finite hypergroup tables, decide the positivity property of translations, and construct Haar measures and invariant means exactly"
)]
struct Cli {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every hypergroup axiom of a table, with minimal witnesses.
    Validate { file: PathBuf },
    /// Compute a left Haar measure.
    Haar {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Residual tolerance for the Cesàro iteration.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Iteration budget for the Cesàro iteration.
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
    },
    /// Decide the positivity property of translations for a test function.
    Ppt {
        file: PathBuf,
        #[command(flatten)]
        f: TestFunctionArg,
        /// Accept tables that violate hypergroup axioms.
        #[arg(long)]
        relaxed: bool,
    },
    /// Check well-definedness of the functional Γ_f on translates of f.
    Gamma {
        file: PathBuf,
        /// Test function: the indicator of this element.
        #[arg(long, value_name = "SYM")]
        f_indicator: String,
        /// Accept tables that violate hypergroup axioms.
        #[arg(long)]
        relaxed: bool,
    },
    /// Solve for a left invariant mean and verify it.
    Mean { file: PathBuf },
    /// Run the Haar/ppt equivalence suite on a file, or on every table
    /// in a directory with --all.
    Report {
        file: Option<PathBuf>,
        /// Process every .json table under this directory, writing a
        /// .report.json next to each.
        #[arg(long, value_name = "DIR", conflicts_with = "file")]
        all: Option<PathBuf>,
    },
    /// Generate a fixture table and write it as a document.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Structure parameter for the order-2 family, e.g. 1/2.
        #[arg(long)]
        alpha: Option<String>,
        /// Group document for the group and conjugacy families.
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
        /// Write the table even when it fails validation (negative fixtures).
        #[arg(long)]
        relaxed: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Nullspace,
    Cesaro,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Group,
    Conjugacy,
    Order2,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TestFunctionArg {
    /// Test function: the indicator of this element.
    #[arg(long, value_name = "SYM")]
    f_indicator: Option<String>,
    /// Test function: a JSON file mapping element symbols to rationals.
    #[arg(long, value_name = "FILE")]
    f_file: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn seed_from_env() -> Result<u64> {
    match std::env::var("HYPAL_SEED") {
        Err(_) => Ok(0),
        Ok(text) => text
            .parse()
            .map_err(|_| anyhow!("HYPAL_SEED must be an unsigned integer, got `{text}`")),
    }
}

fn load_table(path: &Path) -> Result<ConvolutionTable> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_document(&text).with_context(|| format!("cannot parse {}", path.display()))
}

/// Validates unless relaxed; a failed validation prints the report and
/// short-circuits with exit code 1.
fn require_valid(table: &ConvolutionTable, relaxed: bool, json: bool) -> Result<Option<u8>> {
    if relaxed {
        return Ok(None);
    }
    let report = validate_table(table);
    if report.is_valid() {
        Ok(None)
    } else {
        if json {
            println!(
                "{}",
                serde_json::to_string_pretty(&ValidateDoc::of(&report))?
            );
        } else {
            print!("{report}");
        }
        Ok(Some(1))
    }
}

fn resolve_test_function(
    table: &ConvolutionTable,
    arg: &TestFunctionArg,
) -> Result<(String, FunctionOnH)> {
    if let Some(symbol) = &arg.f_indicator {
        let x = table.element_index(symbol)?;
        return Ok((
            format!("indicator{{{symbol}}}"),
            FunctionOnH::indicator(table.len(), x),
        ));
    }
    let path = arg.f_file.as_ref().expect("clap enforces the group");
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let entries: BTreeMap<String, RationalText> =
        serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))?;
    let mut values = vec![hypal::Rational::from_integer(0.into()); table.len()];
    for (symbol, value) in &entries {
        let x = table.element_index(symbol)?;
        let text = match value {
            RationalText::Text(s) => s.clone(),
            RationalText::Int(i) => i.to_string(),
        };
        values[x] = parse_rational(&text)?;
    }
    Ok((
        format!("file{{{}}}", path.display()),
        FunctionOnH::new(values),
    ))
}

fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    use std::io::Write;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .map_err(|e| anyhow!("cannot write {}: {}", path.display(), e.error))?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    let json = cli.json;
    match cli.command {
        Command::Validate { file } => {
            let table = load_table(&file)?;
            let report = validate_table(&table);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&ValidateDoc::of(&report))?
                );
            } else {
                print!("{report}");
            }
            Ok(if report.is_valid() { 0 } else { 1 })
        }

        Command::Haar {
            file,
            method,
            tol,
            max_iter,
        } => {
            let table = load_table(&file)?;
            if let Some(code) = require_valid(&table, false, json)? {
                return Ok(code);
            }
            let method = match method {
                MethodArg::Direct => HaarMethod::Direct,
                MethodArg::Nullspace => HaarMethod::Nullspace,
                MethodArg::Cesaro => HaarMethod::Cesaro,
            };
            // the identity indicator pins the K normalization; by the
            // support axiom its K is a singleton, so every method starts
            // from the same exact data
            let f = FunctionOnH::indicator(table.len(), ConvolutionTable::IDENTITY);
            let result = fixed_point_haar(&table, &f, method, CesaroOptions { tol, max_iter })?;
            let doc = HaarDoc::of(&table, &result);
            if json {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                print!("{}", doc.human());
            }
            Ok(0)
        }

        Command::Ppt { file, f, relaxed } => {
            let table = load_table(&file)?;
            if let Some(code) = require_valid(&table, relaxed, json)? {
                return Ok(code);
            }
            let (tag, function) = resolve_test_function(&table, &f)?;
            let verdict = ppt_check(&table, &function)?;
            let doc = PptDoc::of(&table, &tag, &verdict);
            if json {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                print!("{}", doc.human());
            }
            Ok(if verdict.holds() { 0 } else { 1 })
        }

        Command::Gamma {
            file,
            f_indicator,
            relaxed,
        } => {
            let table = load_table(&file)?;
            if let Some(code) = require_valid(&table, relaxed, json)? {
                return Ok(code);
            }
            let x = table.element_index(&f_indicator)?;
            let function = FunctionOnH::indicator(table.len(), x);
            let report = gamma_well_defined(&table, &function)?;
            let doc = GammaDoc::of(&table, &format!("indicator{{{f_indicator}}}"), &report);
            if json {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                print!("{}", doc.human());
            }
            Ok(if report.well_defined { 0 } else { 1 })
        }

        Command::Mean { file } => {
            let table = load_table(&file)?;
            if let Some(code) = require_valid(&table, false, json)? {
                return Ok(code);
            }
            let seed = seed_from_env()?;
            let doc = match invariant_mean(&table)? {
                MeanOutcome::Mean(mean) => {
                    let verification = verify_mean(&table, &mean, seed, 20);
                    MeanDoc::exists(&table, mean.weights(), &verification)
                }
                MeanOutcome::NonExistent { farkas } => MeanDoc::nonexistent(&table, &farkas),
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                print!("{}", doc.human());
            }
            Ok(if doc.exists { 0 } else { 1 })
        }

        Command::Report { file, all } => match (file, all) {
            (Some(file), None) => {
                let table = load_table(&file)?;
                if let Some(code) = require_valid(&table, false, json)? {
                    return Ok(code);
                }
                let seed = seed_from_env()?;
                let report = equivalence_report(&table, seed, 20);
                let doc = EquivalenceDoc::of(&table, seed, &report);
                if json {
                    println!("{}", serde_json::to_string_pretty(&doc)?);
                } else {
                    print!("{}", doc.human());
                }
                Ok(if report.consistent && report.haar_exists {
                    0
                } else {
                    1
                })
            }
            (None, Some(dir)) => report_all(&dir, json),
            _ => bail!("report needs a table file or --all <dir>"),
        },

        Command::Gen {
            family,
            alpha,
            group,
            output,
            relaxed,
        } => {
            let (family_name, table) = match family {
                FamilyArg::Order2 => {
                    let alpha_text =
                        alpha.ok_or_else(|| anyhow!("--family order2 needs --alpha p/q"))?;
                    let alpha = parse_rational(&alpha_text)?;
                    // the document schema carries probability rows only,
                    // so α outside [0,1] cannot even be serialized; α = 0
                    // builds a table and fails validation below
                    if alpha.is_negative() || alpha > hypal::Rational::from_integer(1.into()) {
                        bail!("--alpha must lie in [0, 1] to be expressible as a document");
                    }
                    ("order2", order2_table(alpha)?)
                }
                FamilyArg::Group | FamilyArg::Conjugacy => {
                    let path = group.ok_or_else(|| anyhow!("this family needs --group <file>"))?;
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("cannot read {}", path.display()))?;
                    let group_table = GroupDocument::from_json(&text)?.to_group()?;
                    match family {
                        FamilyArg::Group => ("group", gen_group(&group_table).into_table()),
                        FamilyArg::Conjugacy => {
                            ("conjugacy", gen_conjugacy(&group_table).into_table())
                        }
                        FamilyArg::Order2 => unreachable!(),
                    }
                }
            };
            let report = validate_table(&table);
            if !report.is_valid() && !relaxed {
                if json {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&ValidateDoc::of(&report))?
                    );
                } else {
                    print!("{report}");
                }
                return Ok(1);
            }
            atomic_write(&output, &serialize_table(&table))?;
            let doc = GenDoc {
                command: "gen".into(),
                family: family_name.into(),
                table: table.name().to_owned(),
                wrote: output.display().to_string(),
                valid: report.is_valid(),
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                print!("{}", doc.human());
            }
            Ok(0)
        }
    }
}

/// Per-file equivalence reports for a directory, written atomically next
/// to each input. Files are processed in parallel when built with the
/// `parallel` feature.
fn report_all(dir: &Path, json: bool) -> Result<u8> {
    let seed = seed_from_env()?;
    let mut inputs: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|ext| ext == "json")
                && !p
                    .file_name()
                    .is_some_and(|n| n.to_string_lossy().ends_with(".report.json"))
        })
        .collect();
    inputs.sort();
    if inputs.is_empty() {
        bail!("no .json tables under {}", dir.display());
    }

    enum FileOutcome {
        Report(PathBuf, EquivalenceDoc, bool),
        InvalidTable(String),
    }

    let process = |path: &PathBuf| -> Result<FileOutcome> {
        let table = load_table(path)?;
        if !validate_table(&table).is_valid() {
            return Ok(FileOutcome::InvalidTable(table.name().to_owned()));
        }
        let report = equivalence_report(&table, seed, 20);
        let doc = EquivalenceDoc::of(&table, seed, &report);
        let out_path = path.with_extension("report.json");
        atomic_write(&out_path, &serde_json::to_string_pretty(&doc)?)?;
        let ok = report.consistent && report.haar_exists;
        Ok(FileOutcome::Report(out_path, doc, ok))
    };

    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        inputs.par_iter().map(process).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = inputs.iter().map(process).collect();

    let mut all_ok = true;
    let mut docs = Vec::new();
    for result in results {
        match result? {
            FileOutcome::InvalidTable(name) => {
                all_ok = false;
                if !json {
                    println!("{name} -> invalid table, no report written");
                }
            }
            FileOutcome::Report(out_path, doc, ok) => {
                all_ok &= ok;
                if !json {
                    println!(
                        "{} -> {} ({})",
                        doc.table,
                        out_path.display(),
                        if ok { "consistent" } else { "INCONSISTENT" }
                    );
                }
                docs.push(doc);
            }
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&docs)?);
    }
    Ok(if all_ok { 0 } else { 1 })
}
