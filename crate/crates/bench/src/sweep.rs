use anyhow::{bail, Result};
use etgraph::generators::Grasp;

use crate::cli::{Experiment, SweepArgs, TreeModel, TreeParams};
use crate::record::RecordSink;
use crate::run::{generate_tree, queries_for, run_lca_point, tree_labels, Exec, LcaPoint};

/// Node and query count of a full-scale run.
pub const BASE_SIZE: usize = 8_000_000;

/// Peak bytes per tree node, rounded up from the heaviest engine build
/// (rmq, about 210 measured) plus a retained verification reference.
const BYTES_PER_NODE: u64 = 256;
/// Query pair, answers and the verification reference (12 to 16 measured).
const BYTES_PER_QUERY: u64 = 16;
const BASELINE_BYTES: u64 = 64 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub tree: TreeParams,
    pub q: usize,
    pub batch: usize,
}

fn scaled(base: usize, scale: f64) -> usize {
    ((base as f64 * scale).round() as usize).max(1)
}

pub fn grid(experiment: Experiment, scale: f64) -> Vec<GridPoint> {
    let size = scaled(BASE_SIZE, scale);
    let tree = |n: usize, gamma: Grasp, model: TreeModel| TreeParams { n, gamma, model, permute: true };
    let point = |tree: TreeParams, q: usize, batch: usize| GridPoint { tree, q, batch: batch.max(1) };
    match experiment {
        Experiment::General | Experiment::Scalefree => {
            let model = if experiment == Experiment::General { TreeModel::Grasp } else { TreeModel::Barabasi };
            [8, 4, 2, 1]
                .into_iter()
                .map(|div| {
                    let n = (size / div).max(1);
                    point(tree(n, Grasp::Infinite, model), n, n)
                })
                .collect()
        }
        Experiment::Qratio => (-3i32..=4)
            .map(|k| {
                let q = if k < 0 { size >> -k } else { size << k }.max(1);
                point(tree(size, Grasp::Infinite, TreeModel::Grasp), q, q)
            })
            .collect(),
        Experiment::Depth => {
            let mut gammas: Vec<Grasp> =
                (0..=7u32).map(|k| 10u64.pow(k)).take_while(|&g| (g as usize) < size).map(Grasp::Finite).collect();
            gammas.push(Grasp::Infinite);
            gammas.into_iter().map(|g| point(tree(size, g, TreeModel::Grasp), size, size)).collect()
        }
        Experiment::Batch => {
            let mut batches: Vec<usize> = (0..=7u32).map(|k| 10usize.pow(k)).take_while(|&b| b < size).collect();
            batches.push(size);
            batches.into_iter().map(|b| point(tree(size, Grasp::Infinite, TreeModel::Grasp), size, b)).collect()
        }
    }
}

pub fn estimate_bytes(points: &[GridPoint]) -> u64 {
    points
        .iter()
        .map(|p| BASELINE_BYTES + BYTES_PER_NODE * p.tree.n as u64 + BYTES_PER_QUERY * p.q as u64)
        .max()
        .unwrap_or(BASELINE_BYTES)
}

pub fn experiment_name(e: Experiment) -> &'static str {
    match e {
        Experiment::General => "general",
        Experiment::Qratio => "qratio",
        Experiment::Depth => "depth",
        Experiment::Batch => "batch",
        Experiment::Scalefree => "scalefree",
    }
}

pub fn run_sweep(args: &SweepArgs, exec: &mut Exec, sink: &mut RecordSink) -> Result<()> {
    if !(args.scale > 0.0 && args.scale.is_finite()) {
        bail!("--scale must be a positive number");
    }
    let points = grid(args.experiment, args.scale);
    let need = estimate_bytes(&points);
    let budget = args.memory_budget_mib << 20;
    if need > budget {
        bail!(
            "{} sweep at scale {} needs about {} MiB, above the {} MiB budget; lower --scale or raise --memory-budget-mib",
            experiment_name(args.experiment),
            args.scale,
            need >> 20,
            args.memory_budget_mib
        );
    }
    let name = experiment_name(args.experiment);
    for p in &points {
        for s in 0..args.seeds as u64 {
            let seed = args.seed.wrapping_add(s);
            let tree = generate_tree(&p.tree, seed)?;
            let queries = queries_for(tree.len(), p.q, seed);
            let (gamma, dataset) = tree_labels(&p.tree);
            eprintln!("{name}: n={} q={} gamma={} batch={} seed={seed}", p.tree.n, p.q, gamma.as_deref().unwrap_or("-"), p.batch);
            let point = LcaPoint { experiment: name, tree: &tree, gamma, dataset, queries: &queries, batch: p.batch, seed };
            run_lca_point(&point, &args.engine, exec, sink)?;
        }
    }
    Ok(())
}
