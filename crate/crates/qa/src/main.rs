use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use qa_core::evaluation::{load_track, run_track, AnswerMode};
use qa_core::{AskResponse, Engine};

#[derive(Parser)]
#[command(
    name = "qa",
    version,
    about = "Ontology-backed question answering over a document collection"
)]
struct Cli {
    /// Engine config file (TOML). Defaults to ./qa.config when present.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Precise,
    Sentence,
}

impl From<Mode> for AnswerMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Precise => AnswerMode::Precise,
            Mode::Sentence => AnswerMode::Sentence,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze, index and populate the ontology from every .txt file in DIR.
    Ingest { dir: PathBuf },
    /// Answer one question against the ingested collection.
    Ask {
        question: String,
        /// Maximum number of answers.
        #[arg(short)]
        k: Option<usize>,
        /// Print the full response as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a JSON Lines question track and report recall.
    Eval {
        track: PathBuf,
        /// Judge every question in this mode instead of its own.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Print the JSON report instead of the table.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
    /// Write the populated ontology (or the base ontology before ingestion).
    ExportOntology { out: PathBuf },
}

fn print_answers(r: &AskResponse) {
    println!("focus: {}", r.focus);
    for p in &r.frame {
        println!("frame: {p}");
    }
    if r.answers.is_empty() {
        println!("no answer found");
    }
    for a in &r.answers {
        let source = if a.ontology_derived {
            "ontology".to_string()
        } else {
            format!("{}#{}", a.doc_id, a.sentence_ordinal)
        };
        println!(
            "{}. {}  (score {:.3}, {source})",
            a.rank,
            a.precise_answer.as_deref().unwrap_or("-"),
            a.score
        );
        println!("   {}", a.sentence);
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let config = qa::load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Ingest { dir } => {
            let (_, report) = Engine::ingest(config, &dir)?;
            println!(
                "ingested {} documents, {} sentences; {} triples added ({} duplicate, {} rejected)",
                report.documents,
                report.sentences,
                report.population.asserted,
                report.population.duplicates,
                report.population.skipped
            );
            for (path, reason) in &report.failures {
                eprintln!("error: cannot read {}: {reason}", path.display());
            }
            if !report.failures.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Ask { question, k, json } => {
            let engine = Engine::load(config)?;
            let k = k.unwrap_or(engine.config().answer_count);
            anyhow::ensure!(k > 0, "-k must be positive");
            let response = engine.ask_top(&question, k)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&response)?);
            } else {
                print_answers(&response);
            }
        }
        Command::Eval { track, mode, json, out } => {
            let engine = Engine::load(config)?;
            let records = load_track(&track)?;
            let report = run_track(&records, &engine, mode.map(Into::into))?;
            let report_json = serde_json::to_string_pretty(&report)?;
            if let Some(out) = out {
                std::fs::write(&out, &report_json)
                    .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", out.display()))?;
            }
            if json {
                println!("{report_json}");
            } else {
                print!("{}", report.to_table());
            }
        }
        Command::Serve { port, host } => {
            let engine = Arc::new(Engine::load(config)?);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async {
                let listener = qa::server::bind(SocketAddr::new(host, port)).await?;
                println!("listening on http://{}", listener.local_addr()?);
                qa::server::serve(engine, listener).await?;
                anyhow::Ok(())
            })?;
        }
        Command::ExportOntology { out } => {
            let triples = qa_core::export_ontology(&config, &out)?;
            println!("wrote {} ({triples} triples)", out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
