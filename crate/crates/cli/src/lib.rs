//! The `hats` command line.
//!
//! Exit codes: 0 success or winning confirmed, 1 counterexample or losing,
//! 2 unknown, 64 usage error, 65 malformed input, 66 unreadable input,
//! 73 unwritable output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use hats_core::document;
use hats_core::dsl;
use hats_core::embedding::{face_trace, is_outerplanar_embedding, is_planar_embedding};
use hats_core::solver::{solve_exact, SearchBudget};
use hats_core::verify::{verify_exhaustive, verify_sampled, VerifyError};
use hats_core::{hg_lower_bound, ComposedGame, Status, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_CANT_CREATE: i32 = 73;

#[derive(Parser, Debug)]
#[command(name = "hats", version, about = "Build, verify and solve hat guessing games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Elaborate an expression file into a game document.
    Build {
        expr: PathBuf,
        /// Write the game JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a DOT rendering of the graph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check the strategy of an expression, exhaustively or by sampling.
    Verify {
        expr: PathBuf,
        /// Number of uniformly drawn assignments instead of a full sweep.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0, requires = "sample")]
        seed: u64,
        /// Worker threads (0 = available parallelism, 1 = sequential).
        #[arg(long, env = "HATS_JOBS", default_value_t = 0)]
        jobs: usize,
    },
    /// Decide a small game document exactly.
    Solve {
        game: PathBuf,
        /// Maximum number of search nodes.
        #[arg(long, default_value_t = SearchBudget::default().max_nodes)]
        budget: u64,
    },
    /// Check the rotation system stored in a game document.
    EmbedCheck { game: PathBuf },
    /// Summarize an expression: sizes, value list and verdict provenance.
    Info { expr: PathBuf },
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_NO_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| fail(EXIT_CANT_CREATE, format!("cannot write {}: {e}", path.display())))
}

fn load_expr(path: &Path) -> Result<ComposedGame, Failure> {
    let src = read(path)?;
    dsl::build(&src).map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<document::GameDocument, Failure> {
    let text = read(path)?;
    document::from_json(&text).map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Winning => EXIT_OK,
        Status::Losing => EXIT_FAIL,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn pretty(value: serde_json::Result<String>) -> String {
    value.expect("reports serialize")
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let emit = |out: &mut dyn Write, text: &str| {
        writeln!(out, "{text}").map_err(|e| fail(EXIT_CANT_CREATE, format!("cannot write output: {e}")))
    };
    match cli.command {
        Command::Build { expr, out: target, dot } => {
            let g = load_expr(&expr)?;
            let json = document::to_json(&g.game, g.rotation.as_ref());
            match target {
                Some(path) => write_file(&path, &format!("{json}\n"))?,
                None => emit(out, &json)?,
            }
            if let Some(path) = dot {
                write_file(&path, &dsl::export_dot(&g.game))?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            expr,
            sample,
            seed,
            jobs,
        } => {
            let g = load_expr(&expr)?;
            let Some(strategy) = &g.strategy else {
                let code = status_code(g.verdict.status);
                return Err(fail(
                    code,
                    format!("no strategy to verify: the game is {:?}", g.verdict.status).to_lowercase(),
                ));
            };
            let opts = VerifyOptions {
                jobs,
                ..Default::default()
            };
            let report = match sample {
                Some(n) => verify_sampled(&g.game, strategy, n, seed, &opts),
                None => verify_exhaustive(&g.game, strategy, &opts),
            }
            .map_err(|e| match e {
                VerifyError::TooLarge { .. } => fail(EXIT_UNKNOWN, format!("{e}; use --sample")),
                VerifyError::NoSamples => fail(EXIT_USAGE, e.to_string()),
                _ => fail(EXIT_FAIL, e.to_string()),
            })?;
            emit(out, &pretty(serde_json::to_string_pretty(&report)))?;
            Ok(if report.wins() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Solve { game, budget } => {
            let doc = load_game(&game)?;
            let budget = SearchBudget::nodes(budget);
            let result = solve_exact(&doc.game, &budget).map_err(|e| fail(EXIT_UNKNOWN, e.to_string()))?;
            emit(out, &pretty(serde_json::to_string_pretty(&result.to_json())))?;
            Ok(if result.is_winning() {
                EXIT_OK
            } else if result.is_losing() {
                EXIT_FAIL
            } else {
                EXIT_UNKNOWN
            })
        }
        Command::EmbedCheck { game } => {
            let doc = load_game(&game)?;
            let Some(rotation) = &doc.rotation else {
                return Err(fail(EXIT_DATA, format!("{}: document has no rotation", game.display())));
            };
            let graph = doc.game.graph();
            let check = || -> Result<_, hats_core::embedding::EmbeddingError> {
                Ok((
                    face_trace(graph, rotation)?,
                    is_planar_embedding(graph, rotation)?,
                    is_outerplanar_embedding(graph, rotation)?,
                ))
            };
            let (faces, planar, outerplanar) = check().map_err(|e| fail(EXIT_DATA, e.to_string()))?;
            let report = serde_json::json!({
                "vertices": graph.len(),
                "edges": graph.edge_count(),
                "faces": faces,
                "planar": planar,
                "outerplanar": outerplanar,
            });
            emit(out, &pretty(serde_json::to_string_pretty(&report)))?;
            Ok(if planar { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Info { expr } => {
            let g = load_expr(&expr)?;
            let graph = g.game.graph();
            let values = g.game.value_list();
            let mut text = format!(
                "vertices: {}\nedges: {}\nvalue list: {:?}\nmin hatness: {}\nverdict: {}\n",
                graph.len(),
                graph.edge_count(),
                values,
                values.first().copied().unwrap_or(0),
                format!("{:?}", g.verdict.status).to_lowercase(),
            );
            if let Some(bound) = hg_lower_bound(&g.verdict, &g.game) {
                text.push_str(&format!("hat guessing number at least: {bound}\n"));
            }
            if let Some(r) = &g.rotation {
                let planar = is_planar_embedding(graph, r).unwrap_or(false);
                let outer = planar && is_outerplanar_embedding(graph, r).unwrap_or(false);
                text.push_str(&format!("embedding: planar={planar} outerplanar={outer}\n"));
            }
            text.push_str("provenance:\n");
            text.push_str(&g.verdict.provenance.to_string());
            emit(out, text.trim_end())?;
            Ok(status_code(g.verdict.status))
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "hats: {}", f.message);
            f.code
        }
    }
}
