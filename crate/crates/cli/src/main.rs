//! `erlab`: run effective-resistance query algorithms against a hidden graph
//! and print a one-line JSON report. Vertex ids on the command line and in
//! reports are 1-indexed, as in the graph files.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "erlab", version)]
#[command(about = "Graph inference from effective-resistance queries")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Hidden graph file, read only by the oracle.
    #[arg(long, global = true)]
    hidden: Option<PathBuf>,

    /// Known graph file (verify-equal).
    #[arg(long, global = true)]
    known: Option<PathBuf>,

    /// Tree decomposition in PACE .td format (reconstruct-td).
    #[arg(long, global = true)]
    td: Option<PathBuf>,

    /// Partial graph with unknown entries (complete).
    #[arg(long, global = true)]
    instance: Option<PathBuf>,

    /// Distance parameter of the property testers.
    #[arg(long, global = true, default_value_t = 0.5)]
    eps: f64,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Tolerance for resistance comparisons.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    /// Answer queries in rational arithmetic (at most 100 vertices).
    #[arg(long, global = true)]
    exact: bool,

    /// Let the oracle answer sorted-ball requests.
    #[arg(long, global = true)]
    ball_oracle: bool,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Dump the query transcript here.
    #[arg(long, global = true)]
    transcript: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Path,
    Cycle,
    Star,
    Clique,
    RandomTree,
    RandomConnected,
    RandomWeighted,
    Caterpillar,
    PartialKTree,
    BoundedDegree,
    RandomBiconnected,
    Windmill,
    TriangleChain,
    SpErPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompleteMode {
    Quadratic,
    Exhaustive,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Treewidth of partial k-trees.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Fraction of k-tree edges kept.
    #[arg(long, default_value_t = 0.7)]
    keep: f64,
    /// Extra-edge probability of random connected graphs.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[arg(long, default_value_t = 0.5)]
    lo: f64,
    #[arg(long, default_value_t = 2.0)]
    hi: f64,
    /// Spine length of caterpillars.
    #[arg(long)]
    spine: Option<usize>,
    /// Degree bound.
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Extra edges of bounded-degree graphs.
    #[arg(long, default_value_t = 0)]
    extra: usize,
    #[arg(long, default_value_t = 0)]
    chords: usize,
    /// Triangle count of windmills and triangle chains.
    #[arg(long, default_value_t = 3)]
    count: usize,
    #[arg(long, default_value_t = 3)]
    i: usize,
    #[arg(long, default_value_t = 4)]
    j: usize,
    /// Graph output file.
    #[arg(long)]
    write: PathBuf,
    /// Tree decomposition output file, for families that come with one.
    #[arg(long)]
    write_td: Option<PathBuf>,
    /// Second graph of the sp-er-pair family.
    #[arg(long)]
    write_partner: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph file. No oracle.
    Gen(GenArgs),
    /// Query one resistance, or all of them. Oracle: ER.
    Er {
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        pair: Option<Vec<usize>>,
    },
    /// Recover the hidden graph from all C(n,2) resistances. Oracle: ER.
    ReconstructFull {
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Recover the hidden graph from a tree decomposition of it. Oracle: ER.
    ReconstructTd {
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Schur complement onto a vertex set. Oracle: ER.
    ReconstructSchur {
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Fill the unknown entries of a partial graph. Oracle: ER.
    Complete {
        #[arg(long, value_enum, default_value_t = CompleteMode::Exhaustive)]
        mode: CompleteMode,
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Is the hidden graph a tree? n − 1 queries. Oracle: ER (exact optional).
    VerifyTree,
    /// Does the hidden graph equal --known, given monotone weights? Oracle: ER.
    VerifyEqual,
    /// Is --vertex a cut vertex? 2n − 3 queries. Oracle: ER (exact optional).
    VerifyCutVertex {
        #[arg(long)]
        vertex: usize,
    },
    /// Is --pair a cut edge? 2n − 3 queries. Oracle: ER (exact optional).
    VerifyCutEdge {
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        pair: Vec<usize>,
    },
    /// Do both vertices of --pair share a biconnected component? Oracle: ER.
    VerifyBicomp {
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        pair: Vec<usize>,
    },
    /// Test vertex biconnectivity. Oracle: ER (exact optional).
    PtestVbc,
    /// Test edge biconnectivity. Oracle: ER, sorted-ball optional.
    PtestEbc,
    /// ER density of a graph file, computed offline. No oracle.
    Density,
    /// Triangle-freeness through the bounded-degree adapter. Oracle: ER,
    /// sorted-ball optional.
    AdaptTest {
        #[arg(long, default_value_t = 4)]
        degree_bound: usize,
    },
    /// Is the hidden graph complete? n − 1 queries. Oracle: ER (exact optional).
    SepClique,
    /// Compare the graph pair G, H_{i,j}. Oracle: SP and ER over generated
    /// graphs; no hidden file.
    SepAdjacency {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Include both resistance matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// Compare the log-det derivative along a pair with its resistance.
    /// Oracle: ER.
    GradientCheck {
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        pair: Vec<usize>,
        #[arg(long, default_value_t = 1e-5)]
        h: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, &cli.common) {
        Ok(report) => {
            let line = report.to_json();
            if let Some(path) = &cli.common.out {
                if let Err(e) = std::fs::write(path, format!("{line}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                println!("{line}");
            }
            match report.verdict {
                Some(false) => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
