mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ililpa::harness::{self, COLLAPSE_NMI};
use ililpa::{
    compute_tsi_table, generate, load_edge_list, load_ground_truth, mixing_fraction, modularity, mu_sweep, nmi, open_input,
    run_experiment, run_on, Algorithm, Beta, Dataset, ExperimentConfig, Graph, Input, Partition,
    PlantedPartitionSpec, Result, Timing, DEFAULT_MAX_ITER,
};

#[derive(Parser)]
#[command(name = "ililpa", version, about = "Label propagation community detection with identical label initialization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run once and print `node community` per line.
    Detect {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run every seed and report per-trial results.
    Experiment {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        run: RunArgs,
        /// A seed, an inclusive range `a..b`, or a comma list.
        #[arg(long, default_value = "0..99", value_parser = args::parse_seeds)]
        seeds: SeedList,
        /// Include final partitions in JSON output.
        #[arg(long)]
        partitions: bool,
        /// Leave wall_time_ms empty so output is byte-reproducible.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep the mixing parameter over generated graphs, both algorithms.
    Sweep {
        #[command(flatten)]
        generator: GeneratorArgs,
        /// Comma list or `start..end:step`.
        #[arg(long, default_value = "0.1..0.8:0.05", value_parser = args::parse_mus)]
        mus: MuList,
        #[arg(long, default_value_t = Beta::DEFAULT, value_parser = args::parse_beta)]
        beta: Beta,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long, default_value = "0..99", value_parser = args::parse_seeds)]
        seeds: SeedList,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write a planted-partition graph to PREFIX.edges and PREFIX.truth.
    Generate {
        #[command(flatten)]
        generator: GeneratorArgs,
        #[arg(long)]
        prefix: PathBuf,
    },
    /// Dump `i j tsi_ij tsi_ji` for every edge.
    Tsi {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Score a partition file (`node community` per line).
    Metrics {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

// clap treats a bare Vec<T> as a repeated flag; wrap to keep one token.
type SeedList = Vec<u64>;
type MuList = Vec<f64>;

#[derive(Args)]
struct GraphArgs {
    /// Edge list; without it a planted-partition graph is generated.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, requires = "input")]
    truth: Option<PathBuf>,
    #[command(flatten)]
    generator: GeneratorArgs,
}

#[derive(Args)]
struct GeneratorArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Number of planted communities.
    #[arg(long, default_value_t = 20)]
    k: usize,
    #[arg(long, default_value_t = 10.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 0.3)]
    mu: f64,
    #[arg(long, default_value_t = 1)]
    graph_seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = AlgorithmArg::IliLpa)]
    algorithm: AlgorithmArg,
    #[arg(long, default_value_t = Beta::DEFAULT, value_parser = args::parse_beta)]
    beta: Beta,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Args)]
struct OutputArgs {
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Lpa,
    IliLpa,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Lpa => Algorithm::Lpa,
            AlgorithmArg::IliLpa => Algorithm::IliLpa,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl GeneratorArgs {
    fn spec(&self) -> PlantedPartitionSpec {
        PlantedPartitionSpec {
            n: self.n,
            communities: self.k,
            avg_degree: self.avg_degree,
            mu: self.mu,
            seed: self.graph_seed,
        }
    }
}

impl GraphArgs {
    fn input(&self) -> Input {
        match &self.input {
            Some(edges) => Input::EdgeList {
                edges: edges.clone(),
                truth: self.truth.clone(),
            },
            None => Input::Generated(self.generator.spec()),
        }
    }
}

impl RunArgs {
    fn config(&self, input: Input) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(input);
        cfg.algorithm = self.algorithm.into();
        cfg.beta = self.beta;
        cfg.max_iter = self.max_iter;
        cfg
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_graph(path: &Path) -> Result<Graph> {
    let (g, stats) = load_edge_list(open_input(path)?)?;
    log::info!(
        "{}: {} nodes, {} edges ({} self-loops, {} duplicates dropped)",
        path.display(),
        g.node_count(),
        g.edge_count(),
        stats.self_loops,
        stats.duplicates
    );
    Ok(g)
}

fn detect(graph: &GraphArgs, run: &RunArgs, seed: u64, out: &OutputArgs) -> Result<()> {
    let mut cfg = run.config(graph.input());
    cfg.seeds = vec![seed];
    cfg.timing = Timing::Omitted;
    cfg.keep_partitions = true;
    let data = Dataset::load(&cfg.input)?;
    let outcome = run_on(&data, &cfg)?;
    let trial = &outcome.trials[0];
    log::info!(
        "{} communities, modularity {:.6}, {} iterations, converged {}",
        trial.communities,
        trial.modularity,
        trial.iterations,
        trial.converged
    );
    let mut w = open_output(out.output.as_deref())?;
    match out.format {
        Format::Csv => {
            let labels = trial.partition.as_deref().expect("partition kept");
            Partition::from_labels(labels).write(&data.graph, &mut w)?;
        }
        Format::Json => harness::write_json(trial, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn experiment(cfg: &ExperimentConfig, out: &OutputArgs) -> Result<()> {
    let outcome = run_experiment(cfg)?;
    let s = &outcome.stability;
    log::info!(
        "{} trials, {} converged, modularity {:.4} ± {:.4}{}",
        s.trials,
        s.converged,
        s.modularity.mean,
        s.modularity.std,
        s.nmi.map(|n| format!(", nmi {:.4} ± {:.4}", n.mean, n.std)).unwrap_or_default()
    );
    let mut w = open_output(out.output.as_deref())?;
    match out.format {
        Format::Csv => harness::write_trials_csv(&outcome.trials, &mut w)?,
        Format::Json => harness::write_json(&outcome, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn sweep(cfg: &ExperimentConfig, mus: &[f64], out: &OutputArgs) -> Result<()> {
    let rows = mu_sweep(cfg, mus)?;
    for alg in Algorithm::ALL {
        match harness::collapse_point(&rows, alg, COLLAPSE_NMI) {
            Some(mu) => log::info!("{alg}: mean NMI below {COLLAPSE_NMI} from mu = {mu}"),
            None => log::info!("{alg}: no collapse in swept range"),
        }
    }
    let mut w = open_output(out.output.as_deref())?;
    match out.format {
        Format::Csv => harness::write_sweep_csv(&rows, &mut w)?,
        Format::Json => harness::write_json(&rows, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn generate_files(spec: &PlantedPartitionSpec, prefix: &Path) -> Result<()> {
    let (g, truth) = generate(spec)?;
    let with_ext = |ext: &str| {
        let mut p = prefix.as_os_str().to_owned();
        p.push(ext);
        PathBuf::from(p)
    };
    let mut edges = BufWriter::new(File::create(with_ext(".edges"))?);
    g.write_edge_list(&mut edges)?;
    edges.flush()?;
    let mut comms = BufWriter::new(File::create(with_ext(".truth"))?);
    truth.write(&g, &mut comms)?;
    comms.flush()?;
    log::info!(
        "{} nodes, {} edges, measured mixing {:.4}",
        g.node_count(),
        g.edge_count(),
        mixing_fraction(&g, &truth)
    );
    Ok(())
}

fn dump_tsi(input: &Path, output: Option<&Path>) -> Result<()> {
    let g = load_graph(input)?;
    let table = compute_tsi_table(&g);
    let mut w = open_output(output)?;
    table.write(&g, &mut w)?;
    w.flush()?;
    Ok(())
}

fn score(input: &Path, partition: &Path, truth: Option<&Path>, out: &OutputArgs) -> Result<()> {
    let g = load_graph(input)?;
    let read_partition = |path: &Path| -> Result<Partition> {
        let gt = load_ground_truth(open_input(path)?, &g)?;
        Ok(Partition::from_ground_truth(&gt))
    };
    let p = read_partition(partition)?;
    let q = modularity(&g, &p)?;
    let score = match truth {
        Some(t) => Some(nmi(&p, &read_partition(t)?)?),
        None => None,
    };
    let mut w = open_output(out.output.as_deref())?;
    match out.format {
        Format::Csv => {
            writeln!(w, "modularity,nmi,communities")?;
            let nmi = score.map(|v| v.to_string()).unwrap_or_default();
            writeln!(w, "{q},{nmi},{}", p.community_count())?;
        }
        Format::Json => {
            let nmi = score.map_or("null".to_string(), |v| v.to_string());
            writeln!(
                w,
                "{{\n  \"modularity\": {q},\n  \"nmi\": {nmi},\n  \"communities\": {}\n}}",
                p.community_count()
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Detect { graph, run, seed, out } => detect(&graph, &run, seed, &out),
        Command::Experiment {
            graph,
            run,
            seeds,
            partitions,
            no_timing,
            out,
        } => {
            let mut cfg = run.config(graph.input());
            cfg.seeds = seeds;
            cfg.keep_partitions = partitions;
            if no_timing {
                cfg.timing = Timing::Omitted;
            }
            experiment(&cfg, &out)
        }
        Command::Sweep {
            generator,
            mus,
            beta,
            max_iter,
            seeds,
            out,
        } => {
            let mut cfg = ExperimentConfig::new(Input::Generated(generator.spec()));
            cfg.beta = beta;
            cfg.max_iter = max_iter;
            cfg.seeds = seeds;
            sweep(&cfg, &mus, &out)
        }
        Command::Generate { generator, prefix } => generate_files(&generator.spec(), &prefix),
        Command::Tsi { input, output } => dump_tsi(&input, output.as_deref()),
        Command::Metrics {
            input,
            partition,
            truth,
            out,
        } => score(&input, &partition, truth.as_deref(), &out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_parameter_error() { 2 } else { 1 })
        }
    }
}
