use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use etgraph::generators::Grasp;
use etgraph::{BridgeAlgorithm, LcaAlgorithm};

#[derive(Debug, Parser)]
#[command(name = "etbench", version, about = "Generators and timing harness for the etgraph engines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated tree or graph to a file.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Time LCA preprocessing and queries.
    Lca(LcaArgs),
    /// Time bridge finding, phase by phase.
    Bridges(BridgesArgs),
    /// Run one of the predefined experiment grids.
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Parent-array tree file.
    Tree {
        #[command(flatten)]
        tree: TreeParams,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connected random graph as an edge list.
    Graph {
        #[arg(long, value_parser = positive)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeModel {
    Grasp,
    Barabasi,
}

#[derive(Clone, Debug, PartialEq, Args)]
pub struct TreeParams {
    #[arg(long, value_parser = positive)]
    pub n: usize,
    /// Grasp parameter: a positive integer or `inf`.
    #[arg(long, default_value = "inf")]
    pub gamma: Grasp,
    #[arg(long, value_enum, default_value_t = TreeModel::Grasp)]
    pub model: TreeModel,
    /// Relabel nodes through a random permutation.
    #[arg(long)]
    pub permute: bool,
}

#[derive(Clone, Debug, Args)]
pub struct RunOpts {
    /// Repetitions per data point.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// Worker threads; defaults to the hardware parallelism.
    #[arg(long, env = "ETBENCH_WORKERS", value_parser = positive)]
    pub workers: Option<usize>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Cross-check results after the timed runs.
    #[arg(long)]
    pub verify: bool,
}

impl RunOpts {
    pub fn worker_count(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }
}

#[derive(Clone, Debug, Args)]
pub struct LcaArgs {
    /// Parent-array tree file. Without it the tree is generated.
    #[arg(long, conflicts_with_all = ["n", "gamma", "model", "permute"])]
    pub input: Option<PathBuf>,
    #[arg(long, value_parser = positive, required_unless_present = "input")]
    pub n: Option<usize>,
    #[arg(long, default_value = "inf")]
    pub gamma: Grasp,
    #[arg(long, value_enum, default_value_t = TreeModel::Grasp)]
    pub model: TreeModel,
    #[arg(long)]
    pub permute: bool,
    /// Engines to run, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "inlabel,naive,rmq")]
    pub engine: Vec<LcaAlgorithm>,
    /// Query count; defaults to the node count.
    #[arg(long)]
    pub q: Option<usize>,
    /// Queries per parallel batch; defaults to all of them.
    #[arg(long, value_parser = positive)]
    pub batch: Option<usize>,
    /// Number of seeds, starting at `--seed`; each seed draws a fresh tree
    /// and query set.
    #[arg(long, default_value_t = 1, value_parser = positive)]
    pub seeds: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub run: RunOpts,
}

#[derive(Clone, Debug, Args)]
pub struct BridgesArgs {
    /// Graph file: `.gr` (DIMACS), `.mtx` (MatrixMarket) or an edge list.
    #[arg(long, required_unless_present = "n", conflicts_with_all = ["n", "m"])]
    pub input: Option<PathBuf>,
    /// Generate a random connected graph with this many nodes instead.
    #[arg(long, value_parser = positive, requires = "m")]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "tv,ck,hybrid,dfs")]
    pub engine: Vec<BridgeAlgorithm>,
    #[command(flatten)]
    pub run: RunOpts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// Node count sweep on grasp(inf) trees, q = n.
    General,
    /// Query-to-node ratio sweep from 1/8 to 16.
    Qratio,
    /// Grasp sweep from a path to a shallow random tree.
    Depth,
    /// Batch size sweep in powers of ten.
    Batch,
    /// Node count sweep on Barabasi-Albert trees.
    Scalefree,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// Multiplier on the base size of 8M nodes and 8M queries.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, value_delimiter = ',', default_value = "inlabel,naive,rmq")]
    pub engine: Vec<LcaAlgorithm>,
    #[arg(long, default_value_t = 1, value_parser = positive)]
    pub seeds: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Refuse grids whose largest point is estimated to need more memory.
    #[arg(long, default_value_t = 4096)]
    pub memory_budget_mib: u64,
    #[command(flatten)]
    pub run: RunOpts,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn zero_nodes_is_a_usage_error() {
        let err = Cli::try_parse_from(["etbench", "gen", "tree", "--n", "0"]).unwrap_err();
        assert_eq!(err.kind(), clap::error::ErrorKind::ValueValidation);
    }

    #[test]
    fn engine_lists_parse() {
        let cli = Cli::try_parse_from(["etbench", "lca", "--n", "10", "--engine", "rmq,naive"]).unwrap();
        let Command::Lca(args) = cli.command else { panic!() };
        assert_eq!(args.engine, vec![LcaAlgorithm::Rmq, LcaAlgorithm::Naive]);
        assert!(Cli::try_parse_from(["etbench", "bridges", "--engine", "bogus", "--n", "3", "--m", "2"]).is_err());
    }
}
