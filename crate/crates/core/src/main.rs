use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wmhn_core::golden;
use wmhn_core::harness::{run_sweep, ExperimentConfig};
use wmhn_core::net::generate_topology;
use wmhn_core::optimizers::{cdp_run, eqpo_run, run_algorithm, Algorithm, OptimizerReport};
use wmhn_core::route::{decode, enumerate, RouteId};
use wmhn_core::{Error, RadioConstants, Result, Topology};

#[derive(Parser)]
#[command(
    name = "wmhn",
    version,
    about = "Pareto-optimal routing in wireless multihop networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random topology and write it as JSON.
    GenTopology {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// List every route of an n-node network with its index.
    Enumerate {
        #[arg(long)]
        nodes: usize,
    },
    /// Print the exact optimal front of a topology.
    BruteOpf {
        #[arg(long)]
        topology: PathBuf,
    },
    /// Run one optimizer on a topology and print its report as JSON.
    Run {
        #[arg(long)]
        algo: String,
        #[arg(long)]
        topology: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a Monte-Carlo sweep described by a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Walk both trellis optimizers through the five-node reference network.
    Table1Demo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) | Error::Parse(_) | Error::Json(_) => ExitCode::from(2),
                Error::Io { .. } => ExitCode::from(1),
            }
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::GenTopology { nodes, seed, out } => {
            generate_topology(nodes, seed, RadioConstants::default())?.save(&out)
        }
        Command::Enumerate { nodes } => {
            for (i, route) in enumerate(nodes)?.iter().enumerate() {
                println!("{i}\t{route}");
            }
            Ok(())
        }
        Command::BruteOpf { topology } => {
            let topo = Topology::load(&topology)?;
            let report = run_algorithm(Algorithm::Bf, &topo, 0)?;
            print_front(&report, &topo);
            Ok(())
        }
        Command::Run { algo, topology, seed } => {
            let algorithm: Algorithm = algo.parse()?;
            let topo = Topology::load(&topology)?;
            let report = run_algorithm(algorithm, &topo, seed)?;
            println!("{}", report.to_json());
            Ok(())
        }
        Command::Sweep { config } => {
            let config = ExperimentConfig::load(&config)?;
            let result = run_sweep(&config)?;
            for a in &result.aggregates {
                println!(
                    "n={:<3} {:<6} parallel={:.1}±{:.1} sequential={:.1}±{:.1}",
                    a.node_count,
                    a.algorithm,
                    a.parallel_cfes.mean,
                    a.parallel_cfes.stderr,
                    a.sequential_cfes.mean,
                    a.sequential_cfes.stderr
                );
            }
            println!("wrote {}", config.output_dir.display());
            Ok(())
        }
        Command::Table1Demo { seed } => table1_demo(seed),
    }
}

fn print_front(report: &OptimizerReport, topo: &Topology) {
    for route in report.opf_routes() {
        let uv = topo.route_uv(&route);
        println!(
            "{route}\tber={:.4e}\tpower={:.4e}\tdelay={}",
            uv.ber, uv.power, uv.delay
        );
    }
}

fn names(ids: &[RouteId]) -> String {
    ids.iter()
        .map(|&id| {
            decode(id, golden::N_NODES)
                .expect("reference ids are valid")
                .to_string()
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn print_trellis(report: &OptimizerReport) {
    for (i, stage) in report.stages.iter().enumerate() {
        println!("  stage {}:", i + 1);
        println!("    generated: {}", names(&stage.generated));
        println!("    front:     {}", names(&stage.opf));
        println!("    survivors: {}", names(&stage.survivors));
    }
    println!("  final front: {}", names(&report.opf.ids().collect::<Vec<_>>()));
    println!(
        "  cost: {} parallel, {} sequential",
        report.ledger.parallel(),
        report.ledger.sequential()
    );
}

fn table1_demo(seed: u64) -> Result<()> {
    use rand::SeedableRng;

    let table = golden::reference_table();
    println!("exact trellis (cdp):");
    print_trellis(&cdp_run(&table)?);
    println!("quantum trellis (eqpo, seed {seed}):");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    print_trellis(&eqpo_run(&table, &mut rng)?);
    println!("optimal front: {}", golden::OPTIMAL_FRONT.join(" "));
    Ok(())
}
