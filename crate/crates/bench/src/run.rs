use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use etgraph::generators::{self, GraspParams};
use etgraph::graph::{largest_component, read_graph_file};
use etgraph::lca::answer_batch;
use etgraph::{BridgeAlgorithm, BridgeMask, Graph, LcaAlgorithm, NodeId, RootedTree};
use rayon::ThreadPool;

use crate::cli::{RunOpts, TreeModel, TreeParams};
use crate::record::{RecordSink, RunRecord};

/// Seed offsets so one user seed yields independent tree, label and query
/// streams.
const PERMUTE_STREAM: u64 = 0x7065_726d;
const QUERY_STREAM: u64 = 0x7175_6572;

pub struct Exec {
    pool: ThreadPool,
    pub workers: usize,
    pub reps: usize,
    pub verify: bool,
    failures: Vec<String>,
}

impl Exec {
    pub fn new(opts: &RunOpts) -> Result<Self> {
        let workers = opts.worker_count();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .context("cannot start worker pool")?;
        Ok(Self { pool, workers, reps: opts.reps, verify: opts.verify, failures: Vec::new() })
    }

    pub fn fail(&mut self, msg: String) {
        eprintln!("verification failed: {msg}");
        self.failures.push(msg);
    }

    pub fn all_verified(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn generate_tree(p: &TreeParams, seed: u64) -> Result<RootedTree> {
    let tree = match p.model {
        TreeModel::Grasp => generators::grasp_tree(GraspParams { n: p.n, gamma: p.gamma, seed })?,
        TreeModel::Barabasi => generators::barabasi_tree(p.n, seed)?,
    };
    Ok(if p.permute { generators::permute_labels(&tree, seed.wrapping_add(PERMUTE_STREAM)).0 } else { tree })
}

pub fn tree_labels(p: &TreeParams) -> (Option<String>, String) {
    match p.model {
        TreeModel::Grasp => (Some(p.gamma.to_string()), "grasp".into()),
        TreeModel::Barabasi => (None, "barabasi".into()),
    }
}

pub fn queries_for(n: usize, q: usize, seed: u64) -> Vec<(NodeId, NodeId)> {
    generators::sample_queries(n, q, seed.wrapping_add(QUERY_STREAM))
}

pub fn read_tree(path: &Path) -> Result<RootedTree> {
    let file = std::fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    RootedTree::read_from(std::io::BufReader::new(file)).with_context(|| format!("cannot read tree {}", path.display()))
}

pub fn dataset_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// One LCA data point: a tree and a query set, timed for every engine.
pub struct LcaPoint<'a> {
    pub experiment: &'a str,
    pub tree: &'a RootedTree,
    pub gamma: Option<String>,
    pub dataset: String,
    pub queries: &'a [(NodeId, NodeId)],
    pub batch: usize,
    pub seed: u64,
}

pub fn run_lca_point(point: &LcaPoint, engines: &[LcaAlgorithm], exec: &mut Exec, sink: &mut RecordSink) -> Result<()> {
    let base = RunRecord {
        experiment: point.experiment.to_string(),
        n: point.tree.len(),
        q: Some(point.queries.len()),
        gamma: point.gamma.clone(),
        dataset: point.dataset.clone(),
        batch: Some(point.batch),
        workers: exec.workers,
        seed: point.seed,
        ..RunRecord::default()
    };
    let mut reference: Option<(LcaAlgorithm, Vec<NodeId>)> = None;
    for &algo in engines {
        let mut last = Vec::new();
        for rep in 0..exec.reps {
            let (build, query, answers) = exec.pool.install(|| -> Result<_> {
                let start = Instant::now();
                let engine = algo.build(point.tree)?;
                let build = start.elapsed();
                let start = Instant::now();
                let answers = answer_batch(engine.as_ref(), point.queries, point.batch);
                Ok((build, start.elapsed(), answers))
            })?;
            let record = RunRecord { algo: algo.name().into(), rep, ..base.clone() };
            sink.push(&record.with_phase("build", build))?;
            sink.push(&record.with_phase("query", query))?;
            sink.push(&record.with_phase("total", build + query))?;
            last = answers;
        }
        if !exec.verify || exec.reps == 0 {
            continue;
        }
        let against = if algo == LcaAlgorithm::Rmq { LcaAlgorithm::Inlabel } else { LcaAlgorithm::Rmq };
        if reference.as_ref().map(|r| r.0) != Some(against) {
            let engine = exec.pool.install(|| against.build(point.tree))?;
            reference = Some((against, exec.pool.install(|| answer_batch(engine.as_ref(), point.queries, point.queries.len().max(1)))));
        }
        let want = &reference.as_ref().unwrap().1;
        if let Some(i) = (0..want.len()).find(|&i| want[i] != last[i]) {
            let (x, y) = point.queries[i];
            exec.fail(format!(
                "{algo} query {i} ({x}, {y}) on {} n={} seed={}: got {}, {against} gives {}",
                point.dataset,
                point.tree.len(),
                point.seed,
                last[i],
                want[i]
            ));
        }
    }
    Ok(())
}

/// Loads a graph file and keeps its largest connected component.
pub fn load_graph(path: &Path) -> Result<Graph> {
    let parsed = read_graph_file(path).with_context(|| format!("cannot load {}", path.display()))?;
    let (component, _) = largest_component(&parsed.graph);
    eprintln!(
        "{}: {} nodes, {} edges ({} duplicate or self-loop lines dropped); largest component {} nodes, {} edges",
        path.display(),
        parsed.graph.num_nodes(),
        parsed.graph.num_edges(),
        parsed.removed,
        component.num_nodes(),
        component.num_edges()
    );
    if component.num_nodes() == 0 {
        bail!("{} contains no edges", path.display());
    }
    Ok(Graph::new(component))
}

pub struct BridgePoint<'a> {
    pub experiment: &'a str,
    pub graph: &'a Graph,
    pub dataset: String,
    pub seed: u64,
}

pub fn run_bridge_point(point: &BridgePoint, engines: &[BridgeAlgorithm], exec: &mut Exec, sink: &mut RecordSink) -> Result<()> {
    let g = point.graph;
    let base = RunRecord {
        experiment: point.experiment.to_string(),
        n: g.num_nodes(),
        m: Some(g.num_edges()),
        dataset: point.dataset.clone(),
        workers: exec.workers,
        seed: point.seed,
        ..RunRecord::default()
    };
    let mut reference: Option<BridgeMask> = None;
    for &algo in engines {
        let mut last = None;
        for rep in 0..exec.reps {
            let (run, total) = exec.pool.install(|| -> Result<_> {
                let start = Instant::now();
                let run = algo.run_profiled(g)?;
                Ok((run, start.elapsed()))
            })?;
            let record = RunRecord { algo: algo.name().into(), rep, ..base.clone() };
            for (phase, elapsed) in &run.phases {
                sink.push(&record.with_phase(phase, *elapsed))?;
            }
            sink.push(&record.with_phase("total", total))?;
            last = Some(run.mask);
        }
        let Some(mask) = last else { continue };
        eprintln!("{algo}: {} bridges on {} (n={}, m={})", mask.count(), point.dataset, g.num_nodes(), g.num_edges());
        if !exec.verify || algo == BridgeAlgorithm::Dfs {
            continue;
        }
        if reference.is_none() {
            reference = Some(exec.pool.install(|| BridgeAlgorithm::Dfs.run(g))?);
        }
        if let Some(e) = mask.first_difference(reference.as_ref().unwrap()) {
            let (u, v) = g.edge(e);
            exec.fail(format!(
                "{algo} on {}: edge {e} {{{u}, {v}}} marked {}, dfs says {}",
                point.dataset,
                if mask.is_bridge[e as usize] { "bridge" } else { "non-bridge" },
                if mask.is_bridge[e as usize] { "non-bridge" } else { "bridge" },
            ));
        }
    }
    Ok(())
}
