//! Command-line interface for the design toolkit.
//!
//! Exit codes: 0 success / verification PASS, 1 verification FAIL,
//! 2 parse or usage error, 3 unknown catalog entry or unresolved
//! registry ingredient, 4 search exhausted.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gdd5_core::catalog;
use gdd5_core::design::BlockSizeSet;
use gdd5_core::error::{CatalogError, ScriptError};
use gdd5_core::format::{parse_design, write_design, DesignFile};
use gdd5_core::orbit::{parse_catalog, write_catalog, BaseBlockSystem, GroupRule, Region};
use gdd5_core::registry::DesignRegistry;
use gdd5_core::script::{parse_script, run_script};
use gdd5_core::search::{search, SearchProblem, SearchStatus};
use gdd5_core::signature::GroupSignature;
use gdd5_core::spectrum::{improvements, spectrum_status, Theorem};
use gdd5_core::verify::{verify_dgdd_with, verify_gdd_with, ReportOptions};

/// Environment variable naming a catalog file that replaces the embedded one.
const CATALOG_ENV: &str = "GDD5_CATALOG";

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_EXHAUSTED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "gdd5",
    about = "Construct, verify and search group divisible designs with block size five",
    version
)]
struct Cli {
    /// Cap worker threads for internal parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Suppress progress output on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a catalog entry or a catalog file into a full design.
    Expand(ExpandArgs),
    /// Verify a design file and print the report.
    Verify(VerifyArgs),
    /// Run a construction script.
    Build(BuildArgs),
    /// Query the existence spectrum: `spectrum <g> <u>` or `spectrum diff`.
    Spectrum(SpectrumArgs),
    /// Search for a base block system by hill climbing.
    Search(SearchArgs),
    /// List or show embedded catalog entries.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct ExpandArgs {
    /// Embedded entry name (e.g. "6^15") or path to a catalog file.
    source: String,
    /// Entry name to pick when the file holds several.
    #[arg(long)]
    entry: Option<String>,
    /// Output path; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Canonical design file.
    file: PathBuf,
    /// Permitted block sizes, comma-separated.
    #[arg(long = "K", value_name = "LIST", default_value = "5")]
    sizes: String,
    /// Verify the double-design conditions (file must carry hole lines).
    #[arg(long)]
    dgdd: bool,
    /// Per-category cap on listed violations.
    #[arg(long, default_value_t = 100)]
    cap: usize,
}

#[derive(Args)]
struct BuildArgs {
    /// Construction script.
    script: PathBuf,
    /// Directory of canonical design files to preload as ingredients.
    #[arg(long)]
    registry: Option<PathBuf>,
    /// Where emitted designs are written.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Group size g, or the word `diff`.
    g: String,
    /// Group count u.
    u: Option<u32>,
    /// Which spectrum snapshot to consult.
    #[arg(long, default_value = "new")]
    theorem: String,
}

#[derive(Args)]
struct SearchArgs {
    /// Target type, e.g. "4^5".
    signature: String,
    /// Block size.
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Orbit count under a cyclic action (uniform types only); absent
    /// means every block is its own orbit.
    #[arg(long)]
    orbits: Option<u32>,
    /// Total move budget.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    restarts: u32,
}

#[derive(Args)]
struct CatalogArgs {
    #[command(subcommand)]
    action: CatalogAction,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// One line per entry: name, points, base blocks, expanded blocks.
    List,
    /// Print an entry in the catalog grammar.
    Show { name: String },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    let _ = writeln!(std::io::stderr(), "gdd5: {msg}");
    ExitCode::from(code)
}

/// Write to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

/// Entries from `GDD5_CATALOG` when set, else the embedded asset.
fn catalog_systems() -> Result<Vec<BaseBlockSystem>, (u8, String)> {
    match std::env::var_os(CATALOG_ENV) {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| (EXIT_USAGE, format!("{}: {e}", Path::new(&path).display())))?;
            parse_catalog(&text).map_err(|e| (EXIT_USAGE, e.to_string()))
        }
        None => Ok(catalog::entries().iter().map(|e| e.system.clone()).collect()),
    }
}

fn cmd_expand(args: &ExpandArgs) -> Result<(), (u8, String)> {
    let path = Path::new(&args.source);
    let mut systems = if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| (EXIT_USAGE, format!("{}: {e}", path.display())))?;
        parse_catalog(&text).map_err(|e| (EXIT_USAGE, e.to_string()))?
    } else {
        catalog_systems()?
    };
    let system = if path.is_file() && systems.len() == 1 && args.entry.is_none() {
        systems.remove(0)
    } else {
        let name = args.entry.as_deref().unwrap_or(&args.source);
        systems
            .iter()
            .find(|s| s.name == name)
            .cloned()
            .ok_or_else(|| (EXIT_UNKNOWN, CatalogError::UnknownEntry(name.into()).to_string()))?
    };
    let design = system.expand().map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let text = write_design(&design);
    match &args.output {
        Some(out) => std::fs::write(out, text)
            .map_err(|e| (EXIT_USAGE, format!("{}: {e}", out.display())))?,
        None => emit(&text),
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, (u8, String)> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| (EXIT_USAGE, format!("{}: {e}", args.file.display())))?;
    let file = parse_design(&text).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let sizes = args
        .sizes
        .split(',')
        .map(|f| f.trim().parse::<usize>().map_err(|_| ()))
        .collect::<Result<Vec<_>, _>>()
        .ok()
        .and_then(BlockSizeSet::new)
        .ok_or((EXIT_USAGE, format!("bad size set `{}`", args.sizes)))?;
    let opts = ReportOptions { cap: args.cap };
    let report = match &file {
        DesignFile::Double(dd) => verify_dgdd_with(dd, &sizes, &opts),
        DesignFile::Plain(_) if args.dgdd => {
            return Err((EXIT_USAGE, "--dgdd needs a file with hole lines".into()))
        }
        DesignFile::Plain(d) => verify_gdd_with(d, &sizes, &opts),
    };
    emit(&report.to_text());
    Ok(report.verdict)
}

fn script_exit(err: &ScriptError) -> u8 {
    match err {
        ScriptError::UnresolvedIngredient { .. } => EXIT_UNKNOWN,
        ScriptError::Catalog(CatalogError::UnknownEntry(_)) => EXIT_UNKNOWN,
        ScriptError::VerifyFailed { .. } => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

fn cmd_build(args: &BuildArgs, quiet: bool) -> Result<(), (u8, String)> {
    let text = std::fs::read_to_string(&args.script)
        .map_err(|e| (EXIT_USAGE, format!("{}: {e}", args.script.display())))?;
    let script = parse_script(&text).map_err(|e| (script_exit(&e), e.to_string()))?;
    let mut registry = DesignRegistry::new();
    if let Some(dir) = &args.registry {
        let loaded = registry.load_dir(dir).map_err(|e| (EXIT_USAGE, e))?;
        if !quiet {
            eprintln!("loaded {loaded} registry design(s) from {}", dir.display());
        }
    }
    let outcome =
        run_script(&script, &mut registry).map_err(|e| (script_exit(&e), e.to_string()))?;
    for (id, contents) in &outcome.emitted {
        let path = args.out_dir.join(format!("{id}.gdd"));
        std::fs::write(&path, contents)
            .map_err(|e| (EXIT_USAGE, format!("{}: {e}", path.display())))?;
        if !quiet {
            eprintln!("emitted {id} -> {}", path.display());
        }
    }
    Ok(())
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), (u8, String)> {
    let theorem = match args.theorem.as_str() {
        "prior" => Theorem::Prior,
        "new" => Theorem::New,
        other => return Err((EXIT_USAGE, format!("unknown theorem `{other}`"))),
    };
    if args.g == "diff" {
        let mut out = String::new();
        for (g, u) in improvements() {
            out.push_str(&format!("{g} {u}\n"));
        }
        emit(&out);
        return Ok(());
    }
    let g: u32 = args
        .g
        .parse()
        .map_err(|_| (EXIT_USAGE, format!("bad group size `{}`", args.g)))?;
    let u = args
        .u
        .ok_or((EXIT_USAGE, "usage: spectrum <g> <u>".to_string()))?;
    emit(&format!("{}\n", spectrum_status(g, u, theorem)));
    Ok(())
}

fn cmd_search(args: &SearchArgs, quiet: bool) -> Result<bool, (u8, String)> {
    let signature: GroupSignature = args
        .signature
        .parse()
        .map_err(|e| (EXIT_USAGE, format!("{e}")))?;
    let problem = match args.orbits {
        None => SearchProblem::plain(signature, args.k, args.budget, args.seed, args.restarts),
        Some(j_max) => {
            let parts = signature.parts();
            if parts.len() != 1 {
                return Err((EXIT_USAGE, "--orbits supports uniform types g^u only".into()));
            }
            let (g, u) = parts[0];
            let n = g * u;
            if j_max == 0 || n % j_max != 0 {
                return Err((
                    EXIT_USAGE,
                    format!("orbit count must divide the point count {n}"),
                ));
            }
            SearchProblem {
                signature,
                k: args.k,
                regions: Some(vec![Region {
                    offset: 0,
                    length: n,
                    step: n / j_max,
                    rule: GroupRule::Mod(u),
                }]),
                j_max,
                budget: args.budget,
                seed: args.seed,
                restarts: args.restarts,
            }
        }
    };
    let outcome = search(&problem).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    if !quiet {
        eprintln!(
            "search: {:?} after {} moves (restart {}, best cost {})",
            outcome.status,
            outcome.trace.moves_used,
            outcome.trace.restart_index,
            outcome.trace.final_cost
        );
    }
    match outcome.status {
        SearchStatus::Found => {
            emit(&write_catalog(&[outcome.system.expect("found")]));
            Ok(true)
        }
        SearchStatus::Exhausted => Ok(false),
    }
}

fn cmd_catalog(args: &CatalogArgs) -> Result<(), (u8, String)> {
    let systems = catalog_systems()?;
    match &args.action {
        CatalogAction::List => {
            let mut out = String::new();
            for sys in &systems {
                out.push_str(&format!(
                    "{}\tpoints {}\tbase blocks {}\tblocks {}\n",
                    sys.name,
                    sys.n_points(),
                    sys.base_blocks.len(),
                    sys.signature.cross_pairs() / 10
                ));
            }
            emit(&out);
            Ok(())
        }
        CatalogAction::Show { name } => {
            let sys = systems
                .iter()
                .find(|s| &s.name == name)
                .ok_or_else(|| {
                    (EXIT_UNKNOWN, CatalogError::UnknownEntry(name.clone()).to_string())
                })?;
            emit(&write_catalog(std::slice::from_ref(sys)));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = gdd5_core::configure_threads(threads) {
            return fail(EXIT_USAGE, e);
        }
    }
    let result = match &cli.command {
        Command::Expand(args) => cmd_expand(args).map(|()| true),
        Command::Verify(args) => cmd_verify(args),
        Command::Build(args) => cmd_build(args, cli.quiet).map(|()| true),
        Command::Spectrum(args) => cmd_spectrum(args).map(|()| true),
        Command::Search(args) => cmd_search(args, cli.quiet),
        Command::Catalog(args) => cmd_catalog(args).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => match &cli.command {
            Command::Search(_) => fail(EXIT_EXHAUSTED, "search exhausted"),
            _ => ExitCode::from(EXIT_FAIL),
        },
        Err((code, msg)) => fail(code, msg),
    }
}
