//! `nc`: schemas, instances, monad laws, narrative programs and wiring
//! diagrams from the command line.
//!
//! Failures print one line `error[<kind>]: <message>` on stderr and exit 1;
//! usage errors exit 2.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nc_core::diagram::{build_trajectory, evaluate, OpenHypergraph, TrajectoryPlan};
use nc_core::fable;
use nc_core::instance::{check_functoriality, load_instance_dir, CsvSource};
use nc_core::kleisli::{check_monad_laws, mutants, FinSet, MonadSpec};
use nc_core::narrative::{load_actants, parse_np_table, FormulaStyle, NpCorpus};
use nc_core::render::{render_diagram, Format, RankDir, RenderOptions};
use nc_core::schema::{builtin, validate_schema, Schema};

#[derive(Parser)]
#[command(name = "nc", version, about = "Narrative categories: schemas, Kleisli laws and wiring diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate or emit schemas.
    #[command(subcommand)]
    Schema(SchemaCmd),
    /// Check instances against their schema.
    #[command(subcommand)]
    Instance(InstanceCmd),
    /// Exhaustively check the monad and Kleisli laws.
    Laws(LawsArgs),
    /// Parse NP tables and emit formulas.
    #[command(subcommand)]
    Np(NpCmd),
    /// Assemble narrative trajectories.
    #[command(subcommand)]
    Trajectory(TrajectoryCmd),
    /// Render a hypergraph document.
    Render(RenderArgs),
}

#[derive(Subcommand)]
enum SchemaCmd {
    /// Check a schema document: references, path equations, monadic arrows.
    Validate {
        file: PathBuf,
    },
    /// Print or write one of the built-in schemas (A, A_refined, A_prime, N).
    Builtin {
        name: String,
        /// Write to this file instead of stdout.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum InstanceCmd {
    /// Load `<vertex>.csv` tables and check every path equation pointwise.
    Check {
        /// Schema file, or `builtin:<name>`.
        #[arg(long)]
        schema: String,
        /// Directory holding one CSV per vertex.
        #[arg(long)]
        tables: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MonadArg {
    List,
    Maybe,
}

#[derive(Args)]
struct LawsArgs {
    #[arg(long, value_enum)]
    monad: MonadArg,
    /// Largest carrier size; carriers of 0..=N atoms are checked.
    #[arg(long, default_value_t = 4)]
    max_carrier: usize,
    /// Enumeration bound for List values.
    #[arg(long, default_value_t = 3)]
    max_list_len: usize,
    /// Check a deliberately broken join instead (e.g. `drop-last`).
    #[arg(long)]
    mutant: Option<String>,
}

/// Where the NP corpus comes from; defaults to the shipped fable.
#[derive(Args)]
struct CorpusArgs {
    /// NP table CSV.
    #[arg(long, requires = "actants")]
    corpus: Option<PathBuf>,
    /// Actant table CSV.
    #[arg(long, requires = "corpus")]
    actants: Option<PathBuf>,
}

#[derive(Subcommand)]
enum NpCmd {
    /// Parse an NP table and list its programs.
    Parse {
        csv: PathBuf,
        #[arg(long)]
        actants: PathBuf,
    },
    /// Emit the formula of one program, or of all with `--all`.
    Formula {
        #[arg(required_unless_present = "all")]
        id: Option<String>,
        #[arg(long)]
        all: bool,
        /// Expand cited dependencies.
        #[arg(long)]
        inline: bool,
        /// ASCII symbols.
        #[arg(long)]
        ascii: bool,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Programs in dependency order.
    Order {
        #[command(flatten)]
        corpus: CorpusArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Svg,
    Text,
    /// Hypergraph document, readable by `nc render`.
    Json,
}

#[derive(Args)]
struct Output {
    /// Output format; defaults to the extension of `-o`, else dot.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Label wires with role subscripts.
    #[arg(long)]
    show_roles: bool,
    /// `cap`/`cup` instead of `∩`/`∪`.
    #[arg(long)]
    ascii: bool,
    /// Rank direction: LR or TB.
    #[arg(long, default_value = "LR")]
    rankdir: RankDir,
    /// Write here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TrajectoryCmd {
    /// Build the trajectory of a plan and render it.
    Build {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        actants: PathBuf,
        /// Substitute every registered definition first.
        #[arg(long)]
        expand: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct RenderArgs {
    /// Hypergraph document (JSON).
    file: PathBuf,
    #[command(flatten)]
    out: Output,
}

/// A failure with a short machine-readable kind.
struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl fmt::Display) -> Self {
        Failure {
            kind,
            message: message.to_string(),
        }
    }

    fn at(kind: &'static str, path: &Path, message: impl fmt::Display) -> Self {
        Failure::new(kind, format!("{}: {message}", path.display()))
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::at("io", path, e))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::at("io", p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv_source(path: &Path) -> Result<CsvSource, Failure> {
    Ok(CsvSource::new(path.display().to_string(), read(path)?))
}

fn load_corpus(np: &Path, actants: &Path) -> Result<NpCorpus, Failure> {
    let actants = load_actants(&csv_source(actants)?).map_err(|e| Failure::new("narrative", e))?;
    parse_np_table(&csv_source(np)?, &actants).map_err(|e| Failure::new("narrative", e))
}

fn corpus_from(args: &CorpusArgs) -> Result<NpCorpus, Failure> {
    match (&args.corpus, &args.actants) {
        (Some(np), Some(a)) => load_corpus(np, a),
        _ => Ok(fable::corpus()),
    }
}

fn load_schema(spec: &str) -> Result<Schema, Failure> {
    match spec.strip_prefix("builtin:") {
        Some(name) => builtin(name).map_err(|e| Failure::new("schema", e)),
        None => {
            let path = Path::new(spec);
            Schema::from_json(&read(path)?).map_err(|e| Failure::at("schema", path, e))
        }
    }
}

fn render(h: &OpenHypergraph, out: &Output) -> Outcome {
    let from_ext = out
        .output
        .as_ref()
        .and_then(|p| p.extension())
        .and_then(|e| match e.to_str()? {
            "svg" => Some(FormatArg::Svg),
            "txt" => Some(FormatArg::Text),
            "json" => Some(FormatArg::Json),
            "dot" | "gv" => Some(FormatArg::Dot),
            _ => None,
        });
    let format = match out.format.or(from_ext).unwrap_or(FormatArg::Dot) {
        FormatArg::Json => {
            write_out(out.output.as_deref(), &h.to_json())?;
            return Ok(ExitCode::SUCCESS);
        }
        FormatArg::Dot => Format::Dot,
        FormatArg::Svg => Format::Svg,
        FormatArg::Text => Format::Text,
    };
    let opts = RenderOptions {
        format,
        show_roles: out.show_roles,
        rank_dir: out.rankdir,
        ascii: out.ascii,
    };
    write_out(out.output.as_deref(), &render_diagram(h, &opts))?;
    Ok(ExitCode::SUCCESS)
}

fn validation_exit(has_errors: bool) -> ExitCode {
    if has_errors {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Schema(SchemaCmd::Validate { file }) => {
            let schema = Schema::from_json(&read(&file)?).map_err(|e| Failure::at("schema", &file, e))?;
            let report = validate_schema(&schema);
            print!("{report}");
            Ok(validation_exit(report.has_errors()))
        }
        Command::Schema(SchemaCmd::Builtin { name, emit }) => {
            let schema = builtin(&name).map_err(|e| Failure::new("schema", e))?;
            write_out(emit.as_deref(), &schema.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Instance(InstanceCmd::Check { schema, tables }) => {
            let schema = load_schema(&schema)?;
            let inst = load_instance_dir(&schema, &tables).map_err(|e| Failure::new("instance", e))?;
            let report = check_functoriality(&inst);
            print!("{report}");
            Ok(validation_exit(report.has_errors()))
        }
        Command::Laws(args) => {
            let base = match args.monad {
                MonadArg::List => MonadSpec::list(),
                MonadArg::Maybe => MonadSpec::maybe(),
            };
            let monad = match &args.mutant {
                None => base,
                Some(name) => mutants::all()
                    .into_iter()
                    .filter(|m| m.kind == base.kind)
                    .find(|m| m.name == *name || m.name.rsplit('/').next() == Some(name.as_str()))
                    .ok_or_else(|| {
                        let known: Vec<String> = mutants::all()
                            .iter()
                            .filter(|m| m.kind == base.kind)
                            .map(|m| m.name.clone())
                            .collect();
                        Failure::new(
                            "laws",
                            format!("no {} mutant `{name}` (known: {})", base.kind, known.join(", ")),
                        )
                    })?,
            };
            let carriers: Vec<FinSet> = (0..=args.max_carrier).map(FinSet::standard).collect();
            let report = check_monad_laws(&monad, &carriers, args.max_list_len);
            print!("{report}");
            Ok(validation_exit(!report.is_empty()))
        }
        Command::Np(NpCmd::Parse { csv, actants }) => {
            let corpus = load_corpus(&csv, &actants)?;
            for p in corpus.programs() {
                let dep = p.depends_on.as_deref().unwrap_or("*");
                let acts: Vec<String> = p.actorializes.iter().map(ToString::to_string).collect();
                println!("{} {} depends on {dep}: {}", p.id, p.junction.symbol(), acts.join(" ⊗ "));
            }
            println!("{} program(s), {} actant(s)", corpus.programs().len(), corpus.actants().len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Np(NpCmd::Formula {
            id,
            all,
            inline,
            ascii,
            corpus,
        }) => {
            let corpus = corpus_from(&corpus)?;
            let style = FormulaStyle { inline, ascii };
            let ids: Vec<String> = match (all, id) {
                (true, _) => corpus.programs().iter().map(|p| p.id.clone()).collect(),
                (false, Some(id)) => vec![id],
                (false, None) => unreachable!("clap requires an id without --all"),
            };
            for id in ids {
                let f = corpus
                    .emit_formula(&id, style)
                    .map_err(|e| Failure::new("narrative", e))?;
                println!("{id} := {f}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Np(NpCmd::Order { corpus }) => {
            println!("{}", corpus_from(&corpus)?.dependency_order().join(" "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Trajectory(TrajectoryCmd::Build {
            plan,
            corpus,
            actants,
            expand,
            out,
        }) => {
            let corpus = load_corpus(&corpus, &actants)?;
            let plan_doc = TrajectoryPlan::from_json(&read(&plan)?).map_err(|e| Failure::at("plan", &plan, e))?;
            let t = build_trajectory(&corpus, &plan_doc).map_err(|e| Failure::at("diagram", &plan, e))?;
            let term = if expand {
                t.expanded().map_err(|e| Failure::new("diagram", e))?
            } else {
                t.term
            };
            render(&evaluate(&term), &out)
        }
        Command::Render(args) => {
            let h = OpenHypergraph::from_json(&read(&args.file)?)
                .map_err(|e| Failure::at("diagram", &args.file, e))?;
            h.validate().map_err(|e| Failure::at("diagram", &args.file, e))?;
            render(&h, &args.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            let one_line = f.message.replace('\n', " ");
            eprintln!("error[{}]: {one_line}", f.kind);
            ExitCode::from(1)
        }
    }
}
