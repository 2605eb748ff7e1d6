use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use tgraph_core::generate::uniform;
use tgraph_core::ingest::{self, parse_tsv, read_path, write_tsv};
use tgraph_core::report::run_bench;
use tgraph_core::{
    AnyIndex, BenchOptions, BuildOptions, Container, ContactLog, Error, GenParams, GraphStats, PsiEncoding, Query,
    QueryInterval, QueryKind, Semantics, StructureKind, TemporalIndex, Time,
};

#[derive(Parser)]
#[command(name = "tgraph", version, about = "Build and query compact temporal graph indexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a contact log or read one back from a container.
    Ingest {
        input: PathBuf,
        /// Write the normalized log here instead of printing its statistics.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build an index and save it as a container.
    Build {
        #[arg(short, long)]
        structure: StructureKind,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        layout: Layout,
    },
    /// Answer one query against a container or a contact log.
    Query {
        index: PathBuf,
        op: QueryKind,
        /// Vertex arguments, by name or id.
        vertices: Vec<String>,
        #[arg(long)]
        from: Time,
        /// Defaults to `--from`.
        #[arg(long)]
        to: Option<Time>,
        /// Defaults to point for a single timestamp and weak otherwise.
        #[arg(long)]
        semantics: Option<Semantics>,
        /// Structure built in memory when the input is a contact log.
        #[arg(long, default_value = "oracle")]
        structure: StructureKind,
    },
    /// Measure space and query latency over a seeded workload.
    Bench {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Comma-separated structure names; defaults to the six indexes.
        #[arg(long, value_delimiter = ',')]
        structures: Vec<StructureKind>,
        /// Queries per query class.
        #[arg(long, default_value_t = 100)]
        queries: usize,
        #[arg(long, env = "TG_SEED", default_value_t = 42)]
        seed: u64,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Leave out wall-clock measurements so the report depends only on
        /// the inputs and the seed.
        #[arg(long)]
        no_timing: bool,
        /// Count answers that differ from the oracle.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        layout: Layout,
    },
    /// Generate a random contact log.
    Gen {
        vertices: u32,
        lifetime: u32,
        contacts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "uniform")]
        model: DegreeModel,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print graph statistics and the space of each structure.
    Stats {
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        structures: Vec<StructureKind>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        layout: Layout,
    },
}

#[derive(Args, Clone, Copy)]
struct Layout {
    /// Also store the transposed graph, for faster reverse neighbors.
    #[arg(long)]
    reverse: bool,
    /// Compress the TGCSA successor array.
    #[arg(long)]
    compressed_psi: bool,
}

impl Layout {
    fn options(self) -> BuildOptions {
        BuildOptions {
            reverse: self.reverse,
            psi: if self.compressed_psi { PsiEncoding::Compressed } else { PsiEncoding::Plain },
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum DegreeModel {
    Uniform,
}

fn structures_or_default(list: Vec<StructureKind>) -> Vec<StructureKind> {
    if list.is_empty() {
        StructureKind::INDEXES.to_vec()
    } else {
        list
    }
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn stats_line(s: &GraphStats) -> String {
    format!("n = {}  m = {}  c = {}  τ = {}", s.vertices, s.edges, s.contacts, s.lifetime)
}

fn load_log(path: &Path) -> anyhow::Result<ContactLog> {
    read_path(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Ingest { input, output } => {
            let log = load_log(&input)?;
            match output {
                Some(path) => write_output(Some(&path), &write_tsv(&log))?,
                None => println!("{}", stats_line(&GraphStats::of(&log.graph))),
            }
        }
        Command::Build { structure, input, output, layout } => {
            let log = load_log(&input)?;
            let index = AnyIndex::build_with(structure, &log.graph, layout.options())?;
            let bits = index.space_bits();
            Container::new(index, log.names).save(&output)?;
            println!("{structure}: {bits} bits, written to {}", output.display());
        }
        Command::Query { index, op, vertices, from, to, semantics, structure } => {
            let to = to.unwrap_or(from);
            let semantics = semantics.unwrap_or(if from == to { Semantics::Point } else { Semantics::Weak });
            let q = QueryInterval::new(from, to, semantics)?;
            let bytes = fs::read(&index).with_context(|| format!("reading {}", index.display()))?;
            let (index, names) = if tgraph_core::container::is_container(&bytes) {
                let c = Container::from_bytes(&bytes)?;
                (c.index, c.names)
            } else {
                let log = parse_tsv(std::str::from_utf8(&bytes).context("contact log is not UTF-8")?)?;
                (AnyIndex::build(structure, &log.graph)?, log.names)
            };
            let names = names.as_deref();
            let ids = vertices.iter().map(|t| ingest::resolve(names, t)).collect::<Result<Vec<_>, _>>()?;
            let answer = Query::new(op, &ids, q)?.evaluate(&index)?;
            println!("{}", answer.render(|v| ingest::label(names, v)));
        }
        Command::Bench { inputs, structures, queries, seed, json, no_timing, verify, layout } => {
            let kinds = structures_or_default(structures);
            let opts = BenchOptions { per_class: queries, seed, timing: !no_timing, verify, build: layout.options() };
            let mut reports = Vec::with_capacity(inputs.len());
            for input in &inputs {
                reports.push(run_bench(&load_log(input)?.graph, &kinds, opts)?);
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                for (input, r) in inputs.iter().zip(&reports) {
                    println!("# {}\n{}", input.display(), r.to_text());
                }
            }
        }
        Command::Gen { vertices, lifetime, contacts, seed, model: DegreeModel::Uniform, output } => {
            let graph = uniform(GenParams { vertices, lifetime, contacts, seed })?;
            write_output(output.as_deref(), &write_tsv(&ContactLog::new(graph, None)))?;
        }
        Command::Stats { input, structures, json, layout } => {
            let bytes = fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let (graph, stored) = if tgraph_core::container::is_container(&bytes) {
                let c = Container::from_bytes(&bytes)?;
                (c.index.to_graph()?, Some(c.index))
            } else {
                (parse_tsv(std::str::from_utf8(&bytes).context("contact log is not UTF-8")?)?.graph, None)
            };
            let mut rows: Vec<(String, u64)> = Vec::new();
            if let Some(index) = &stored {
                rows.push((format!("{} (stored)", index.kind()), index.space_bits()));
            }
            if stored.is_none() || !structures.is_empty() {
                for kind in structures_or_default(structures) {
                    rows.push((kind.to_string(), AnyIndex::build_with(kind, &graph, layout.options())?.space_bits()));
                }
            }
            let stats = GraphStats::of(&graph);
            let per_contact = |bits: u64| if stats.contacts == 0 { 0.0 } else { bits as f64 / stats.contacts as f64 };
            if json {
                let structures: Vec<_> = rows
                    .iter()
                    .map(|(name, bits)| {
                        serde_json::json!({ "structure": name, "space_bits": bits, "bits_per_contact": per_contact(*bits) })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&serde_json::json!({ "graph": stats, "structures": structures }))?);
            } else {
                println!("{}", stats_line(&stats));
                for (name, bits) in rows {
                    println!("{name:<16} {bits:>14} bits  {:>8.2} bits/contact", per_contact(bits));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(Error::Semantics(_)) = e.downcast_ref::<Error>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bench_defaults() {
        let cli = Cli::try_parse_from(["tgraph", "bench", "g.tsv"]).unwrap();
        match cli.command {
            Command::Bench { structures, queries, .. } => {
                assert_eq!(structures_or_default(structures).len(), 6);
                assert_eq!(queries, 100);
            }
            _ => unreachable!(),
        }
    }
}
