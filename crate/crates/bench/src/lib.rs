//! Command-line harness around `etgraph`: instance generation, LCA and
//! bridge timing, and the predefined sweep grids. Every timed phase becomes
//! one CSV row; loading, generation and verification are never timed.

pub mod cli;
pub mod record;
pub mod run;
pub mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use etgraph::generators;
use etgraph::Graph;

use cli::{Cli, Command, GenCommand, LcaArgs, TreeParams};
use record::RecordSink;
use run::{Exec, LcaPoint};

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Runs one command. `Ok(false)` means a verification failed.
pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen { what } => {
            gen(what)?;
            Ok(true)
        }
        Command::Lca(args) => {
            let mut exec = Exec::new(&args.run)?;
            let mut sink = RecordSink::open(args.run.csv.as_deref())?;
            lca(&args, &mut exec, &mut sink)?;
            sink.finish()?;
            Ok(exec.all_verified())
        }
        Command::Bridges(args) => {
            let mut exec = Exec::new(&args.run)?;
            let mut sink = RecordSink::open(args.run.csv.as_deref())?;
            let (graph, dataset) = match (&args.input, args.n, args.m) {
                (Some(path), _, _) => (run::load_graph(path)?, run::dataset_name(path)),
                (None, Some(n), Some(m)) => {
                    (Graph::new(generators::random_connected_graph(n, m, args.seed)?), format!("random-{n}-{m}"))
                }
                _ => bail!("either --input or both --n and --m are required"),
            };
            let point = run::BridgePoint { experiment: "bridges", graph: &graph, dataset, seed: args.seed };
            run::run_bridge_point(&point, &args.engine, &mut exec, &mut sink)?;
            sink.finish()?;
            Ok(exec.all_verified())
        }
        Command::Sweep(args) => {
            let mut exec = Exec::new(&args.run)?;
            let mut sink = RecordSink::open(args.run.csv.as_deref())?;
            sweep::run_sweep(&args, &mut exec, &mut sink)?;
            sink.finish()?;
            Ok(exec.all_verified())
        }
    }
}

fn gen(what: GenCommand) -> Result<()> {
    match what {
        GenCommand::Tree { tree, seed, out } => {
            let t = run::generate_tree(&tree, seed)?;
            let mut w = output(out.as_deref())?;
            t.write_to(&mut w)?;
            w.flush()?;
        }
        GenCommand::Graph { n, m, seed, out } => {
            let g = generators::random_connected_graph(n, m, seed)?;
            let mut w = output(out.as_deref())?;
            g.write_to(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn lca(args: &LcaArgs, exec: &mut Exec, sink: &mut RecordSink) -> Result<()> {
    let loaded = args.input.as_deref().map(run::read_tree).transpose()?;
    for s in 0..args.seeds as u64 {
        let seed = args.seed.wrapping_add(s);
        let (tree, gamma, dataset) = match (&loaded, &args.input) {
            (Some(t), Some(path)) => (t.clone(), None, run::dataset_name(path)),
            _ => {
                let params = TreeParams {
                    n: args.n.expect("clap requires --n without --input"),
                    gamma: args.gamma,
                    model: args.model,
                    permute: args.permute,
                };
                let (gamma, dataset) = run::tree_labels(&params);
                (run::generate_tree(&params, seed)?, gamma, dataset)
            }
        };
        let q = args.q.unwrap_or(tree.len());
        let queries = run::queries_for(tree.len(), q, seed);
        let batch = args.batch.unwrap_or(q.max(1));
        let point = LcaPoint { experiment: "lca", tree: &tree, gamma, dataset, queries: &queries, batch, seed };
        run::run_lca_point(&point, &args.engine, exec, sink)?;
    }
    Ok(())
}
