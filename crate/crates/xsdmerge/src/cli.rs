//! Command-line front end: `match`, `integrate`, `neighborhood` (debug) and
//! `eval`. Exit codes: 0 success, 1 I/O or parse failure, 2 invalid severity
//! level (or an empty gold standard for `eval`).

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::dictionaries::{self, DictPairDoc};
use crate::eval::{evaluate, EvalError, GoldStandard};
use crate::graph::XsGraph;
use crate::instance::{resolve_idrefs, RefTargetMap};
use crate::integrate::{integrate, IntegrateOptions};
use crate::interscheme::{self, PropertySetDoc};
use crate::model::SchemaModel;
use crate::parse::parse_schema;
use crate::serialize::serialize_schema;
use crate::thesaurus::Thesaurus;

/// Environment variable consulted when --thesaurus is not given.
pub const THESAURUS_ENV: &str = "XSDMERGE_THESAURUS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "xsdmerge",
    version,
    about = "Match and integrate referenced-style XML Schemas at a chosen severity level"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract interscheme properties (synonymies/homonymies) between two schemas
    #[command(name = "match")]
    Match(MatchArgs),
    /// Integrate two schemas into a global schema
    Integrate(IntegrateArgs),
    /// Print the j-neighborhood of a component (debugging aid)
    Neighborhood(NeighborhoodArgs),
    /// Score extracted properties against a gold standard
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// First schema (XSD, referenced style)
    pub schema1: PathBuf,
    /// Second schema
    pub schema2: PathBuf,
    /// Severity level u (0 = loosest)
    #[arg(long, short = 'u', default_value_t = 0)]
    pub severity: u32,
    /// Thesaurus TSV; defaults to $XSDMERGE_THESAURUS, else empty
    #[arg(long)]
    pub thesaurus: Option<PathBuf>,
    /// Instance documents of the first schema (repeatable)
    #[arg(long = "instances1", value_name = "XML")]
    pub instances1: Vec<PathBuf>,
    /// Instance documents of the second schema (repeatable)
    #[arg(long = "instances2", value_name = "XML")]
    pub instances2: Vec<PathBuf>,
    /// Also emit the merge/rename dictionaries
    #[arg(long)]
    pub dictionaries: bool,
    /// Output file (stdout when omitted)
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    pub schema1: PathBuf,
    pub schema2: PathBuf,
    #[arg(long, short = 'u', default_value_t = 0)]
    pub severity: u32,
    #[arg(long)]
    pub thesaurus: Option<PathBuf>,
    #[arg(long = "instances1", value_name = "XML")]
    pub instances1: Vec<PathBuf>,
    #[arg(long = "instances2", value_name = "XML")]
    pub instances2: Vec<PathBuf>,
    /// Name of the synthetic root created when the two roots do not merge
    #[arg(long, default_value = "root")]
    pub root_name: String,
    /// Write the component audit mapping (JSON) to this file
    #[arg(long)]
    pub audit: Option<PathBuf>,
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NeighborhoodArgs {
    pub schema: PathBuf,
    /// Component name (complex elements take precedence on name clashes)
    pub component: String,
    /// Neighborhood radius j
    #[arg(long, short = 'j', default_value_t = 0)]
    pub radius: u32,
    #[arg(long = "instances", value_name = "XML")]
    pub instances: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// PropertySet JSON as written by `match`
    pub properties: PathBuf,
    /// Gold standard JSON
    pub gold: PathBuf,
}

/// Outcome carrying the process exit code.
enum CommandError {
    /// I/O, parse or internal failure: exit 1.
    Failure(anyhow::Error),
    /// Invalid request (severity out of range, empty gold): exit 2.
    Usage(String),
}

impl From<anyhow::Error> for CommandError {
    fn from(e: anyhow::Error) -> Self {
        CommandError::Failure(e)
    }
}

type CommandResult = std::result::Result<(), CommandError>;

pub fn run() -> i32 {
    let cli = Cli::parse();
    run_command(cli.command)
}

pub fn run_command(command: Command) -> i32 {
    let outcome = match command {
        Command::Match(args) => cmd_match(args),
        Command::Integrate(args) => cmd_integrate(args),
        Command::Neighborhood(args) => cmd_neighborhood(args),
        Command::Eval(args) => cmd_eval(args),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(CommandError::Failure(e)) => {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }
        Err(CommandError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn schema_id_from(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "schema".to_string())
}

fn load_schema(path: &Path) -> Result<SchemaModel> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    parse_schema(&text, &schema_id_from(path))
        .with_context(|| format!("cannot parse {}", path.display()))
}

fn load_thesaurus(flag: Option<&Path>) -> Result<Thesaurus> {
    let path = match flag {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(THESAURUS_ENV).map(PathBuf::from),
    };
    match path {
        Some(p) => Thesaurus::load(&p).with_context(|| format!("cannot load {}", p.display())),
        None => Ok(Thesaurus::empty()),
    }
}

fn scan_instances(model: &SchemaModel, paths: &[PathBuf]) -> Result<RefTargetMap> {
    let mut docs = Vec::new();
    for p in paths {
        docs.push(
            std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?,
        );
    }
    let borrowed: Vec<&str> = docs.iter().map(String::as_str).collect();
    let map = resolve_idrefs(model, &borrowed);
    for failure in &map.failed_documents {
        eprintln!(
            "warning: skipping instance {}: {}",
            paths[failure.doc_index].display(),
            failure.message
        );
    }
    Ok(map)
}

fn check_severity(u: u32, s1: &SchemaModel, s2: &SchemaModel) -> CommandResult {
    let max = interscheme::max_severity(s1, s2);
    if u > max {
        Err(CommandError::Usage(format!(
            "severity {u} out of range; the maximum severity level for these schemas is {max}"
        )))
    } else {
        Ok(())
    }
}

fn write_output(out: Option<&Path>, payload: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, payload)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).context("cannot encode JSON")?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
struct MatchReport {
    #[serde(flatten)]
    properties: PropertySetDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    merge_dictionary: Option<Vec<DictPairDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rename_dictionary: Option<Vec<DictPairDoc>>,
}

struct Pipeline {
    s1: SchemaModel,
    s2: SchemaModel,
    g1: XsGraph,
    g2: XsGraph,
    thesaurus: Thesaurus,
}

fn prepare(
    schema1: &Path,
    schema2: &Path,
    thesaurus: Option<&Path>,
    instances1: &[PathBuf],
    instances2: &[PathBuf],
    severity: u32,
) -> std::result::Result<Pipeline, CommandError> {
    let s1 = load_schema(schema1)?;
    let s2 = load_schema(schema2)?;
    check_severity(severity, &s1, &s2)?;
    let thesaurus = load_thesaurus(thesaurus)?;
    let m1 = scan_instances(&s1, instances1)?;
    let m2 = scan_instances(&s2, instances2)?;
    let g1 = XsGraph::build(&s1, &m1);
    let g2 = XsGraph::build(&s2, &m2);
    Ok(Pipeline {
        s1,
        s2,
        g1,
        g2,
        thesaurus,
    })
}

fn internal(e: impl std::error::Error + Send + Sync + 'static) -> CommandError {
    CommandError::Failure(anyhow::Error::new(e))
}

fn cmd_match(args: MatchArgs) -> CommandResult {
    let p = prepare(
        &args.schema1,
        &args.schema2,
        args.thesaurus.as_deref(),
        &args.instances1,
        &args.instances2,
        args.severity,
    )?;
    let props = interscheme::extract_properties(
        &p.s1,
        &p.s2,
        args.severity,
        &p.g1,
        &p.g2,
        &p.thesaurus,
    )
    .map_err(internal)?;
    let mut report = MatchReport {
        properties: props.to_doc(),
        merge_dictionary: None,
        rename_dictionary: None,
    };
    if args.dictionaries {
        let md = dictionaries::build_md(&p.s1, &p.s2, args.severity, &p.g1, &p.g2, &p.thesaurus)
            .map_err(internal)?;
        let rd = dictionaries::build_rd(&p.s1, &p.s2, &md);
        let (md_doc, rd_doc) = dictionaries::dictionary_docs(&p.s1, &p.s2, &md, &rd);
        report.merge_dictionary = Some(md_doc);
        report.rename_dictionary = Some(rd_doc);
    }
    write_output(args.out.as_deref(), &to_json(&report)?)?;
    Ok(())
}

fn cmd_integrate(args: IntegrateArgs) -> CommandResult {
    let p = prepare(
        &args.schema1,
        &args.schema2,
        args.thesaurus.as_deref(),
        &args.instances1,
        &args.instances2,
        args.severity,
    )?;
    let md = dictionaries::build_md(&p.s1, &p.s2, args.severity, &p.g1, &p.g2, &p.thesaurus)
        .map_err(internal)?;
    let rd = dictionaries::build_rd(&p.s1, &p.s2, &md);
    let options = IntegrateOptions {
        root_name: args.root_name.clone(),
        schema_id: None,
    };
    let outcome = integrate(&p.s1, &p.s2, &md, &rd, &options).map_err(internal)?;
    let text = serialize_schema(&outcome.schema).map_err(internal)?;
    write_output(args.out.as_deref(), &text)?;
    if let Some(audit_path) = &args.audit {
        std::fs::write(audit_path, to_json(&outcome.audit)?)
            .with_context(|| format!("cannot write {}", audit_path.display()))
            .map_err(CommandError::Failure)?;
    }
    Ok(())
}

fn cmd_neighborhood(args: NeighborhoodArgs) -> CommandResult {
    let model = load_schema(&args.schema)?;
    let refmap = scan_instances(&model, &args.instances)?;
    let component = model
        .component_by_name(&args.component)
        .ok_or_else(|| {
            CommandError::Failure(anyhow::anyhow!(
                "no component named \"{}\" in {}",
                args.component,
                model.schema_id()
            ))
        })?
        .clone();
    let graph = XsGraph::build(&model, &refmap);
    let neighborhood = graph.neighborhood(&component, args.radius).map_err(internal)?;
    let mut lines: Vec<String> = neighborhood.iter().map(|c| c.to_string()).collect();
    lines.sort();
    for line in lines {
        println!("{line}");
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> CommandResult {
    let props_text = std::fs::read_to_string(&args.properties)
        .with_context(|| format!("cannot read {}", args.properties.display()))?;
    let props: PropertySetDoc = serde_json::from_str(&props_text)
        .with_context(|| format!("cannot parse {}", args.properties.display()))?;
    let gold_text = std::fs::read_to_string(&args.gold)
        .with_context(|| format!("cannot read {}", args.gold.display()))?;
    let gold: GoldStandard = serde_json::from_str(&gold_text)
        .with_context(|| format!("cannot parse {}", args.gold.display()))?;
    let metrics = match evaluate(&props, &gold) {
        Ok(m) => m,
        Err(EvalError::EmptyGold) => {
            return Err(CommandError::Usage(
                "gold standard contains no properties".to_string(),
            ));
        }
    };
    if metrics.empty_returned {
        eprintln!("warning: returned property set is empty; correctness defaults to 1.00");
    }
    println!("correctness {:.2}", metrics.correctness);
    println!("completeness {:.2}", metrics.completeness);
    Ok(())
}
