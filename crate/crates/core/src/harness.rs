//! Multi-seed experiments, stability statistics and mixing-parameter sweeps.
//!
//! Trials run on a rayon pool. Results are always ordered by position in the
//! seed list, and every aggregate is computed sequentially after the join,
//! so output depends only on the configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{generate, PlantedPartitionSpec};
use crate::graph::{load_edge_list, open_input, load_ground_truth, Graph, GroundTruth};
use crate::lpa::{init_identical, init_unique, propagate, Labeling, DEFAULT_MAX_ITER};
use crate::metrics::{modularity, nmi, Partition};
use crate::similarity::{compute_tsi_table, Beta};

/// Collapse threshold on mean NMI used by [`collapse_point`].
pub const COLLAPSE_NMI: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Lpa,
    IliLpa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Lpa, Algorithm::IliLpa];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Lpa => "lpa",
            Algorithm::IliLpa => "ili-lpa",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "lpa" => Ok(Algorithm::Lpa),
            "ili-lpa" | "ili" => Ok(Algorithm::IliLpa),
            other => Err(format!("unknown algorithm `{other}` (expected lpa or ili-lpa)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Input {
    EdgeList {
        edges: PathBuf,
        truth: Option<PathBuf>,
    },
    Generated(PlantedPartitionSpec),
}

/// Whether per-trial wall time is recorded. Omitting it makes outputs
/// byte-reproducible.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Timing {
    #[default]
    Measured,
    Omitted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub beta: Beta,
    pub seeds: Vec<u64>,
    pub max_iter: usize,
    pub input: Input,
    pub timing: Timing,
    /// Keep each trial's final partition in the results.
    pub keep_partitions: bool,
}

impl ExperimentConfig {
    /// Defaults: ILI-LPA, beta 0.35, seeds 0..=99, 100 passes.
    pub fn new(input: Input) -> Self {
        ExperimentConfig {
            algorithm: Algorithm::IliLpa,
            beta: Beta::DEFAULT,
            seeds: (0..100).collect(),
            max_iter: DEFAULT_MAX_ITER,
            input,
            timing: Timing::Measured,
            keep_partitions: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::NoSeeds);
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidMaxIter);
        }
        Ok(())
    }
}

/// A graph with optional ground truth, ready for trials.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub graph: Graph,
    pub truth: Option<GroundTruth>,
}

impl Dataset {
    pub fn new(graph: Graph, truth: Option<GroundTruth>) -> Self {
        Dataset { graph, truth }
    }

    pub fn load(input: &Input) -> Result<Self> {
        match input {
            Input::EdgeList { edges, truth } => {
                let (graph, _) = load_edge_list(open_input(edges)?)?;
                let truth = match truth {
                    Some(path) => Some(load_ground_truth(open_input(path)?, &graph)?),
                    None => None,
                };
                Ok(Dataset { graph, truth })
            }
            Input::Generated(spec) => {
                let (graph, truth) = generate(spec)?;
                Ok(Dataset {
                    graph,
                    truth: Some(truth),
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub seed: u64,
    pub modularity: f64,
    pub nmi: Option<f64>,
    pub communities: usize,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    /// Population statistics; `None` for an empty sample.
    pub fn of<I: IntoIterator<Item = f64>>(values: I) -> Option<Self> {
        let values: Vec<f64> = values.into_iter().collect();
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(Summary {
            mean,
            std: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub trials: usize,
    pub converged: usize,
    pub modularity: Summary,
    pub nmi: Option<Summary>,
    pub communities: Summary,
    pub iterations: Summary,
    /// NMI over all unordered pairs of trial partitions; `None` with one trial.
    pub pairwise_nmi: Option<Summary>,
    pub community_histogram: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub trials: Vec<TrialResult>,
    pub stability: StabilityReport,
}

/// Loads the configured input and runs one trial per seed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let data = Dataset::load(&cfg.input)?;
    run_on(&data, cfg)
}

/// Runs the trials of `cfg` on an already loaded dataset; `cfg.input` is ignored.
pub fn run_on(data: &Dataset, cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let g = &data.graph;
    let truth = data.truth.as_ref().map(Partition::from_ground_truth);
    let start = initial_labels(g, cfg.algorithm, cfg.beta);

    let runs: Vec<(TrialResult, Partition)> = cfg
        .seeds
        .par_iter()
        .map(|&seed| {
            let clock = Instant::now();
            let report = propagate(g, start.clone(), seed, cfg.max_iter)?;
            let elapsed = clock.elapsed();
            let partition = report.partition();
            let trial = TrialResult {
                seed,
                modularity: modularity(g, &partition)?,
                nmi: truth.as_ref().map(|t| nmi(&partition, t)).transpose()?,
                communities: partition.community_count(),
                iterations: report.iterations,
                converged: report.converged,
                wall_time_ms: match cfg.timing {
                    Timing::Measured => Some(elapsed.as_secs_f64() * 1e3),
                    Timing::Omitted => None,
                },
                partition: cfg.keep_partitions.then(|| partition.membership().to_vec()),
            };
            Ok((trial, partition))
        })
        .collect::<Result<_>>()?;

    let partitions: Vec<&Partition> = runs.iter().map(|(_, p)| p).collect();
    let pairwise = pairwise_nmi(&partitions)?;
    let trials: Vec<TrialResult> = runs.iter().map(|(t, _)| t.clone()).collect();
    let stability = summarize(&trials, pairwise);
    Ok(ExperimentOutcome { trials, stability })
}

/// Initial labeling for `algorithm`; seed-independent.
pub fn initial_labels(g: &Graph, algorithm: Algorithm, beta: Beta) -> Labeling {
    match algorithm {
        Algorithm::Lpa => init_unique(g),
        Algorithm::IliLpa => init_identical(g, &compute_tsi_table(g), beta),
    }
}

/// NMI for every unordered pair, in `(i, j)` lexicographic order.
pub fn pairwise_nmi(partitions: &[&Partition]) -> Result<Vec<f64>> {
    let pairs: Vec<(usize, usize)> = (0..partitions.len())
        .flat_map(|i| (i + 1..partitions.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| nmi(partitions[i], partitions[j]))
        .collect()
}

fn summarize(trials: &[TrialResult], pairwise: Vec<f64>) -> StabilityReport {
    let mut histogram = BTreeMap::new();
    for t in trials {
        *histogram.entry(t.communities).or_insert(0) += 1;
    }
    let nmi = if trials.iter().all(|t| t.nmi.is_some()) {
        Summary::of(trials.iter().filter_map(|t| t.nmi))
    } else {
        None
    };
    StabilityReport {
        trials: trials.len(),
        converged: trials.iter().filter(|t| t.converged).count(),
        modularity: Summary::of(trials.iter().map(|t| t.modularity)).expect("at least one trial"),
        nmi,
        communities: Summary::of(trials.iter().map(|t| t.communities as f64)).expect("at least one trial"),
        iterations: Summary::of(trials.iter().map(|t| t.iterations as f64)).expect("at least one trial"),
        pairwise_nmi: Summary::of(pairwise),
        community_histogram: histogram,
    }
}

pub const TRIAL_CSV_HEADER: [&str; 7] = [
    "seed",
    "modularity",
    "nmi",
    "communities",
    "iterations",
    "converged",
    "wall_time_ms",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per trial under [`TRIAL_CSV_HEADER`]; absent values are empty.
pub fn write_trials_csv<W: Write>(trials: &[TrialResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIAL_CSV_HEADER)?;
    for t in trials {
        w.write_record([
            t.seed.to_string(),
            t.modularity.to_string(),
            opt(t.nmi),
            t.communities.to_string(),
            t.iterations.to_string(),
            t.converged.to_string(),
            opt(t.wall_time_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub mu: f64,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub mean_nmi: f64,
    pub std_nmi: f64,
    pub mean_modularity: f64,
    pub std_modularity: f64,
    pub mean_communities: f64,
    pub converged_fraction: f64,
}

/// For each `mu`, generates the base spec's graph at that mixing level and
/// runs both algorithms over the configured seeds. Two rows per `mu`, LPA first.
pub fn mu_sweep(base: &ExperimentConfig, mus: &[f64]) -> Result<Vec<SweepRow>> {
    let Input::Generated(spec) = &base.input else {
        return Err(Error::SweepNeedsGenerator);
    };
    base.validate()?;
    let mut rows = Vec::with_capacity(mus.len() * 2);
    for &mu in mus {
        let spec = PlantedPartitionSpec { mu, ..*spec };
        let (graph, truth) = generate(&spec)?;
        let data = Dataset::new(graph, Some(truth));
        for algorithm in Algorithm::ALL {
            let cfg = ExperimentConfig {
                algorithm,
                timing: Timing::Omitted,
                keep_partitions: false,
                ..base.clone()
            };
            let outcome = run_on(&data, &cfg)?;
            let s = &outcome.stability;
            let nmi = s.nmi.expect("generated input has ground truth");
            rows.push(SweepRow {
                mu,
                algorithm,
                trials: s.trials,
                mean_nmi: nmi.mean,
                std_nmi: nmi.std,
                mean_modularity: s.modularity.mean,
                std_modularity: s.modularity.std,
                mean_communities: s.communities.mean,
                converged_fraction: s.converged as f64 / s.trials as f64,
            });
        }
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record([
            "mu",
            "algorithm",
            "trials",
            "mean_nmi",
            "std_nmi",
            "mean_modularity",
            "std_modularity",
            "mean_communities",
            "converged_fraction",
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Smallest swept `mu` at which `algorithm`'s mean NMI falls below
/// `threshold`; `None` if it never does.
pub fn collapse_point(rows: &[SweepRow], algorithm: Algorithm, threshold: f64) -> Option<f64> {
    rows.iter()
        .filter(|r| r.algorithm == algorithm && r.mean_nmi < threshold)
        .map(|r| r.mu)
        .min_by(f64::total_cmp)
}
