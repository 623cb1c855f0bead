use std::path::PathBuf;

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;
use wlnet::bench::{log_log_slope, peak_rss_bytes, time_feature_matmul};
use wlnet::graph::graph_to_tensor;
use wlnet::net::{handcrafted_triangle_model_for, model_forward, Head, Pooling};
use wlnet::train::{history_to_csv, Architecture, Experiment, Optimizer, TrainConfig, TrainError};
use wlnet::wl::corpus::{build_corpus, check_properties, run_corpus, Algorithm, CorpusRow, CorpusSpec, MAX_EXHAUSTIVE};
use wlnet::wl::{compare_graphs, Variant, WlError};

use crate::input::{read_graph, write_file, GraphFormat};
use crate::{Failure, EXIT_DISTINGUISHED};

type Outcome = Result<u8, Failure>;

/// Largest order accepted by `corpus`; 3-WL cost grows as `n^4`.
const CORPUS_MAX_N: usize = 8;

fn report_config(command: &str, seed: u64, threads: usize, args: &impl Serialize) {
    let cfg = json!({ "command": command, "seed": seed, "threads": threads, "args": args });
    eprintln!("config: {cfg}");
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    pub graph_a: PathBuf,
    pub graph_b: PathBuf,
    /// Tuple order; defaults to 1 for cr1 and 2 otherwise.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value = "cr1")]
    pub variant: Variant,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: GraphFormat,
    /// Include the per-round color histograms.
    #[arg(long)]
    pub histograms: bool,
}

pub fn compare(a: &CompareArgs, seed: u64, threads: usize) -> Outcome {
    let k = a.k.unwrap_or(if a.variant == Variant::Cr1 { 1 } else { 2 });
    report_config("compare", seed, threads, &json!({ "resolved_k": k, "options": a }));
    let g = read_graph(&a.graph_a, a.format).map_err(Failure::usage)?;
    let h = read_graph(&a.graph_b, a.format).map_err(Failure::usage)?;
    let c = compare_graphs(&g, &h, k, a.variant).map_err(|e| match e {
        WlError::RoundLimit(_) => Failure::numeric(e),
        e => Failure::usage(e),
    })?;
    let mut out = json!({
        "variant": c.variant,
        "k": c.k,
        "rounds": c.rounds,
        "verdict": c.verdict,
    });
    if a.histograms {
        out["histograms"] = json!(c.histograms);
    }
    print_json(&out);
    Ok(if c.verdict.is_distinguished() { EXIT_DISTINGUISHED } else { 0 })
}

#[derive(Debug, Args, Serialize)]
pub struct CorpusArgs {
    /// Largest graph order; pairs are exhaustive up to 6 and random above.
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    /// Keep at most this many pairs (exhaustive pairs first).
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Number of seeded random pairs.
    #[arg(long, default_value_t = 500)]
    pub random_pairs: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub k_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "cr1,wl,fwl")]
    pub variant_list: Vec<Variant>,
    /// Verify cr1 = wl2, fwl2 = wl3 and wl2 ⇒ wl3; exit 1 on a violation.
    #[arg(long)]
    pub check: bool,
    /// Append the 4×4 rook graph against the Shrikhande graph.
    #[arg(long)]
    pub include_srg: bool,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn rows_to_csv(rows: &[CorpusRow]) -> String {
    let mut s = String::from(CorpusRow::CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

pub fn corpus(a: &CorpusArgs, seed: u64, threads: usize) -> Outcome {
    report_config("corpus", seed, threads, a);
    if !(2..=CORPUS_MAX_N).contains(&a.n_max) {
        return Err(Failure::usage(anyhow!("--n-max must lie in 2..={CORPUS_MAX_N}")));
    }
    let algorithms = Algorithm::product(&a.k_list, &a.variant_list);
    if algorithms.is_empty() {
        return Err(Failure::usage(anyhow!("no valid (k, variant) combination")));
    }
    let spec = CorpusSpec {
        exhaustive_max: a.n_max.min(MAX_EXHAUSTIVE),
        random_pairs: a.random_pairs,
        random_n_min: a.n_max.min(4),
        random_n_max: a.n_max,
        seed,
        limit: a.pairs,
        include_srg: a.include_srg,
    };
    let pairs = build_corpus(&spec);
    let rows = run_corpus(&pairs, &algorithms, |_, _| true).map_err(Failure::numeric)?;
    let csv = rows_to_csv(&rows);
    let mut summary = json!({
        "pairs": pairs.len(),
        "rows": rows.len(),
        "algorithms": algorithms.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "distinguished": rows.iter().filter(|r| r.distinguished).count(),
    });
    let mut code = 0;
    if a.check {
        let report = check_properties(&rows);
        if !report.holds() {
            code = EXIT_DISTINGUISHED;
        }
        summary["check"] = json!(report);
        summary["check_holds"] = json!(report.holds());
    }
    match &a.out {
        Some(path) => {
            write_file(path, csv).map_err(Failure::usage)?;
            print_json(&summary);
        }
        None => {
            print!("{csv}");
            eprintln!("summary: {summary}");
        }
    }
    Ok(code)
}

#[derive(Debug, Args, Serialize)]
pub struct TrianglesArgs {
    pub graph_a: PathBuf,
    pub graph_b: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: GraphFormat,
}

pub fn triangles(a: &TrianglesArgs, seed: u64, threads: usize) -> Outcome {
    report_config("triangles", seed, threads, a);
    let mut values = Vec::new();
    for path in [&a.graph_a, &a.graph_b] {
        let g = read_graph(path, a.format).map_err(Failure::usage)?;
        let direct = g.trace_of_adjacency_cube();
        let (spec, params) = handcrafted_triangle_model_for(g.color_width());
        let out = model_forward(&graph_to_tensor::<f64>(&g), &spec, &params).map_err(Failure::numeric)?[0];
        if out != direct as f64 {
            return Err(Failure::numeric(anyhow!(
                "{}: network gives {out}, adjacency cube gives {direct}",
                path.display()
            )));
        }
        values.push((direct, out));
    }
    print_json(&json!({
        "a": values[0].0,
        "b": values[1].0,
        "model_output_a": values[0].1,
        "model_output_b": values[1].1,
    }));
    Ok(0)
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dataset {
    CycleUnion,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    MlpOnly,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeadKind {
    #[value(name = "suffix-i")]
    SuffixI,
    #[value(name = "suffix-ii")]
    SuffixII,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PoolingKind {
    Max,
    Sum,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Sgd,
    Momentum,
    Adam,
}

#[derive(Debug, Args, Serialize)]
pub struct TrainArgs {
    #[arg(long, value_enum, default_value = "cycle-union")]
    pub dataset: Dataset,
    #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
    pub m_list: Vec<usize>,
    /// Train the feature-wise baseline instead of the matrix-product model.
    #[arg(long, value_enum)]
    pub baseline: Option<Baseline>,
    #[arg(long, default_value_t = 2)]
    pub blocks: usize,
    /// Hidden and output width `b` of the block MLPs.
    #[arg(long, default_value_t = 16)]
    pub width: usize,
    /// Weight matrices per block MLP.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, value_enum, default_value = "suffix-i")]
    pub head: HeadKind,
    /// Hidden widths of the suffix-i head.
    #[arg(long, value_delimiter = ',')]
    pub head_hidden: Vec<usize>,
    #[arg(long, value_enum, default_value = "max")]
    pub pooling: PoolingKind,
    /// Add the mixing MLP after each block.
    #[arg(long)]
    pub mix: bool,
    #[arg(long, default_value_t = 500)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.005)]
    pub lr: f64,
    /// Learning-rate factor applied every `--decay-every` epochs, in [0.5, 1].
    #[arg(long, default_value_t = 0.9)]
    pub decay: f64,
    #[arg(long, default_value_t = 20)]
    pub decay_every: usize,
    #[arg(long, value_enum, default_value = "adam")]
    pub optimizer: OptimizerKind,
    /// Directory for history.csv, params.bin and model.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl TrainArgs {
    fn experiment(&self, seed: u64) -> Experiment {
        let defaults = Experiment::default();
        let optimizer = match self.optimizer {
            OptimizerKind::Sgd => Optimizer::Sgd,
            OptimizerKind::Momentum => Optimizer::Momentum { beta: 0.9 },
            OptimizerKind::Adam => defaults.train.optimizer,
        };
        Experiment {
            m_values: self.m_list.clone(),
            seed,
            architecture: match self.baseline {
                Some(Baseline::MlpOnly) => Architecture::MlpOnly,
                None => Architecture::Matmul,
            },
            blocks: self.blocks,
            width: self.width,
            depth: self.depth,
            head: match self.head {
                HeadKind::SuffixI => Head::SuffixI {
                    hidden_widths: self.head_hidden.clone(),
                },
                HeadKind::SuffixII => Head::SuffixII,
            },
            pooling: match self.pooling {
                PoolingKind::Max => Pooling::Max,
                PoolingKind::Sum => Pooling::Sum,
            },
            mix: self.mix,
            train: TrainConfig {
                epochs: self.epochs,
                learning_rate: self.lr,
                decay: self.decay,
                decay_every: self.decay_every,
                optimizer,
            },
        }
    }
}

pub fn train(a: &TrainArgs, seed: u64, threads: usize) -> Outcome {
    let experiment = a.experiment(seed);
    report_config("train", seed, threads, &experiment);
    let outcome = experiment.run().map_err(|e| match e {
        TrainError::Diverged { .. } | TrainError::NonFinite(_) => Failure::numeric(e),
        e => Failure::usage(e),
    })?;
    if let Some(dir) = &a.out {
        write_file(&dir.join("history.csv"), history_to_csv(&outcome.history)).map_err(Failure::usage)?;
        write_file(&dir.join("params.bin"), outcome.params.to_bytes()).map_err(Failure::usage)?;
        write_file(&dir.join("model.json"), outcome.spec.to_json()).map_err(Failure::usage)?;
    }
    print_json(&json!({
        "epochs": experiment.train.epochs,
        "parameters": outcome.params.len(),
        "final_accuracy": outcome.final_accuracy(),
        "final_loss": outcome.final_loss(),
        "first_perfect_epoch": outcome.first_perfect_epoch(),
    }));
    Ok(0)
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchOp {
    FeatureMatmul,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "feature-matmul")]
    pub op: BenchOp,
    /// Strictly increasing matrix sides.
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub channels: usize,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub const BENCH_HEADER: &str = "op,n,channels,reps,median_seconds,min_seconds,working_set_bytes";

pub fn bench(a: &BenchArgs, seed: u64, threads: usize) -> Outcome {
    report_config("bench", seed, threads, a);
    if a.sizes.is_empty() || a.sizes[0] == 0 || a.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::usage(anyhow!("--sizes must be positive and strictly increasing")));
    }
    if a.reps == 0 || a.channels == 0 {
        return Err(Failure::usage(anyhow!("--reps and --channels must be positive")));
    }
    let mut csv = format!("{BENCH_HEADER}\n");
    let mut points = Vec::new();
    for &n in &a.sizes {
        let t = time_feature_matmul(n, a.channels, a.reps, seed);
        let med = t.median().as_secs_f64();
        let min = t.samples.iter().min().copied().unwrap_or_default().as_secs_f64();
        csv.push_str(&format!(
            "feature-matmul,{n},{},{},{med:e},{min:e},{}\n",
            a.channels, a.reps, t.working_set
        ));
        points.push((n as f64, med));
    }
    let summary = json!({
        "op": a.op,
        "slope": log_log_slope(&points),
        "peak_rss_bytes": peak_rss_bytes(),
    });
    match &a.out {
        Some(path) => {
            write_file(path, csv).map_err(Failure::usage)?;
            print_json(&summary);
        }
        None => {
            print!("{csv}");
            eprintln!("summary: {summary}");
        }
    }
    Ok(0)
}
