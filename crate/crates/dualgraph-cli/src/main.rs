//! Command-line front end: germ analysis, catalog generation, continued
//! fractions and DOT emission.
//!
//! Exit status: 0 when every evaluated condition holds, 1 when the
//! analysis succeeded but the germ fails its class, 2 on input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dualgraph::enumerate::{enumerate_normal_nss, enumerate_semistable};
use dualgraph::exact::hj::{hj_expand, hj_recognize, HjChain};
use dualgraph::exact::pell::DEFAULT_BOUND;
use dualgraph::io::{
    analyze_document, normal_catalog, semistable_catalog, ClassHint, GraphDocument,
};

#[derive(Parser)]
#[command(
    name = "dualgraph",
    version,
    about = "Exact intersection theory on weighted dual graphs of rational curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a germ document and check its classification conditions
    Analyze {
        /// Path to a graph document (JSON)
        path: PathBuf,
        /// Which classifier to run; `auto` detects from the shape
        #[arg(long, value_enum, default_value_t)]
        class: ClassArg,
        /// Emit the machine-readable report instead of text
        #[arg(long)]
        json: bool,
    },
    /// Generate catalogs of germs
    Enumerate {
        #[command(subcommand)]
        kind: EnumerateKind,
    },
    /// Continued fractions: expand `N A`, or recognize `--chain B1,B2,...`
    Hj {
        /// Order and weight, as in `dualgraph hj 12 5`
        values: Vec<u64>,
        /// Comma-separated chain entries to recognize
        #[arg(long)]
        chain: Option<String>,
    },
    /// Emit a graph document in DOT format
    Dot {
        path: PathBuf,
    },
}

#[derive(Subcommand)]
enum EnumerateKind {
    /// All semistable data over a target of type A_{k-1}
    Semistable {
        #[arg(long)]
        k: u64,
        /// Scan bound for the Pell solutions
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        /// Write the catalog here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded search for normal germs over smoothable singularities
    Normal {
        #[arg(long)]
        max_n: u64,
        #[arg(long)]
        max_d: u64,
        /// Longest DuVal tail to attach to the central curve
        #[arg(long, default_value_t = 0)]
        max_chain: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum ClassArg {
    #[default]
    Auto,
    Normal,
    Nonnormal,
    Semistable,
}

impl From<ClassArg> for ClassHint {
    fn from(value: ClassArg) -> Self {
        match value {
            ClassArg::Auto => ClassHint::Auto,
            ClassArg::Normal => ClassHint::Normal,
            ClassArg::Nonnormal => ClassHint::Nonnormal,
            ClassArg::Semistable => ClassHint::Semistable,
        }
    }
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<dualgraph::Error> for Failure {
    fn from(e: dualgraph::Error) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Analyze { path, class, json } => analyze(&path, class.into(), json),
        Command::Enumerate { kind } => enumerate(kind),
        Command::Hj { values, chain } => hj(&values, chain.as_deref()),
        Command::Dot { path } => dot(&path),
    }
}

fn read_document(path: &Path) -> Result<GraphDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(GraphDocument::from_json(&text)?)
}

fn analyze(path: &Path, hint: ClassHint, json: bool) -> Result<ExitCode, Failure> {
    let document = read_document(path)?;
    let report = analyze_document(&document, hint)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report serializes"));
    } else {
        print!("{}", report.render_text());
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn write_catalog(value: &serde_json::Value, out: Option<&Path>) -> Result<ExitCode, Failure> {
    let text = serde_json::to_string_pretty(value).expect("catalog serializes");
    match out {
        Some(path) => {
            std::fs::write(path, text.as_bytes())
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            println!("catalog written to {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn enumerate(kind: EnumerateKind) -> Result<ExitCode, Failure> {
    match kind {
        EnumerateKind::Semistable { k, bound, out } => {
            if k < 2 {
                return Err(Failure::input("k must be at least 2"));
            }
            let data = enumerate_semistable(k, bound);
            let catalog = semistable_catalog(k, bound, &data);
            write_catalog(&catalog, out.as_deref())
        }
        EnumerateKind::Normal {
            max_n,
            max_d,
            max_chain,
            out,
        } => {
            let records = enumerate_normal_nss(max_n, max_d, max_chain);
            let catalog = normal_catalog(max_n, max_d, max_chain, &records);
            write_catalog(&catalog, out.as_deref())
        }
    }
}

fn hj(values: &[u64], chain: Option<&str>) -> Result<ExitCode, Failure> {
    match (values, chain) {
        ([], Some(text)) => {
            let entries: Result<Vec<u64>, _> = text
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect();
            let entries =
                entries.map_err(|e| Failure::input(format!("chain entry: {e}")))?;
            let chain = HjChain::new(entries)?;
            let (n, a) = hj_recognize(&chain)?;
            println!("{n}/{a} \u{21d2} 1/{n}(1,{a})");
            Ok(ExitCode::SUCCESS)
        }
        ([n, a], None) => {
            let chain = hj_expand(*n, *a)?;
            println!("{chain}");
            Ok(ExitCode::SUCCESS)
        }
        _ => Err(Failure::input(
            "expected either two positional values N A or --chain B1,B2,...",
        )),
    }
}

fn dot(path: &Path) -> Result<ExitCode, Failure> {
    let document = read_document(path)?;
    document.to_graph()?;
    print!("{}", document.to_dot());
    Ok(ExitCode::SUCCESS)
}
