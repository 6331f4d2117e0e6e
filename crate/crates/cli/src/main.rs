//! `leaftrack` command line: simulate, track, eval, triplets, sweep.
//!
//! Exit status is 0 on success, 1 on runtime or data errors and 2 on usage
//! errors (bad flags, missing input files, empty sweep grids).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use leaftrack::io;
use leaftrack::metrics::{leaf_accuracy_matrix, DEFAULT_IOU_THRESHOLD, DEFAULT_LEAF_IOU};
use leaftrack::tracker::to_predictions;
use leaftrack::{
    evaluate, generate, match_frames, run_sequence, sample_triplets, Detection, GtAnnotation, LabeledBox, MetricReport,
    PrototypeMode, SamplingStrategy, SequenceRecord, TrackerParams,
};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "leaftrack", version, about = "Leaf tracking with appearance prototypes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic sequence: det.txt, gt.txt and truth_map.txt.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Run the tracker over a detection file.
    Track {
        #[arg(long)]
        detections: PathBuf,
        /// Tracker parameters; defaults apply when omitted.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a results file against ground truth.
    Eval {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value_t = DEFAULT_IOU_THRESHOLD)]
        iou: f64,
        /// Write the per-leaf, per-frame correctness matrix as CSV.
        #[arg(long)]
        leaf_matrix: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_LEAF_IOU)]
        leaf_iou: f64,
        /// Print key=value lines instead of the table.
        #[arg(long)]
        machine: bool,
    },
    /// Sample training triplets from ground-truth files, one file per plant.
    Triplets {
        #[arg(long, num_args = 1.., required = true)]
        gt_corpus: Vec<PathBuf>,
        #[arg(long, value_enum)]
        strategy: Strategy,
        /// Temporal window for `--strategy window`.
        #[arg(long)]
        delta_t: Option<u32>,
        #[arg(long)]
        count: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Track and evaluate over a grid of tau_s, alpha and prototype modes.
    Sweep {
        #[arg(long)]
        detections: PathBuf,
        #[arg(long)]
        gt: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        tau_s: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "ema")]
        ema_mode: Vec<Mode>,
        /// Base parameters for the keys not swept.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_IOU_THRESHOLD)]
        iou: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Cross,
    Full,
    Window,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ema,
    Mean,
}

impl From<Mode> for PrototypeMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Ema => PrototypeMode::Ema,
            Mode::Mean => PrototypeMode::Mean,
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<leaftrack::Error> for Failure {
    fn from(e: leaftrack::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn require_file(path: &Path) -> Result<(), Failure> {
    if !path.is_file() {
        return Err(Failure::Usage(format!("input file not found: {}", path.display())));
    }
    Ok(())
}

fn load_params(path: Option<&Path>) -> Result<TrackerParams, Failure> {
    match path {
        Some(p) => {
            require_file(p)?;
            Ok(io::read_params(p)?)
        }
        None => Ok(TrackerParams::default()),
    }
}

fn report(
    gt: &SequenceRecord<GtAnnotation>,
    pred: &SequenceRecord<LabeledBox>,
    iou: f64,
) -> Result<(leaftrack::MatchTable, MetricReport)> {
    let table = match_frames(gt, pred, iou)?;
    let r = evaluate(&table)?;
    Ok((table, r))
}

fn simulate(config: &Path, out_dir: &Path) -> Result<(), Failure> {
    require_file(config)?;
    let cfg = io::read_scenario(config)?;
    let sim = generate(&cfg)?;
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    io::write_detections(&sim.detections, cfg.dim, &out_dir.join("det.txt"))?;
    io::write_gt(&sim.gt, &out_dir.join("gt.txt"))?;
    io::write_truth_map(&sim.truth_map, &out_dir.join("truth_map.txt"))?;
    println!(
        "frames: {}\nleaves: {}\ndetections: {}\nannotations: {}",
        cfg.n_frames,
        cfg.n_leaves,
        sim.detections.len(),
        sim.gt.len()
    );
    Ok(())
}

fn read_detections(path: &Path) -> Result<SequenceRecord<Detection>, Failure> {
    require_file(path)?;
    let (det, _) = io::read_detections(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(det)
}

fn track(detections: &Path, params: Option<&Path>, out: &Path) -> Result<(), Failure> {
    let det = read_detections(detections)?;
    let params = load_params(params)?;
    let results = run_sequence(&det, params)?;
    io::write_results(&results, out)?;
    let created: usize = results.iter().map(|r| r.new_tracks.len()).sum();
    let pruned: usize = results.iter().map(|r| r.pruned_track_ids.len()).sum();
    println!("frames: {}\ntracks created: {created}\ntracks pruned: {pruned}", results.len());
    Ok(())
}

fn eval(
    gt: &Path,
    results: &Path,
    iou: f64,
    leaf_matrix: Option<&Path>,
    leaf_iou: f64,
    machine: bool,
) -> Result<(), Failure> {
    require_file(gt)?;
    require_file(results)?;
    let gt = io::read_gt(gt).with_context(|| format!("reading {}", gt.display()))?;
    let pred = io::read_results(results).with_context(|| format!("reading {}", results.display()))?;
    let (table, r) = report(&gt, &pred, iou)?;
    if machine {
        print!("{}", io::format_report_machine(&r));
    } else {
        print!("{}", io::format_report_human(&r));
    }
    if let Some(path) = leaf_matrix {
        let matrix = leaf_accuracy_matrix(&table, leaf_iou);
        io::write_text(path, &io::format_leaf_matrix(&matrix))?;
    }
    Ok(())
}

fn triplets(
    corpus: &[PathBuf],
    strategy: Strategy,
    delta_t: Option<u32>,
    count: u32,
    seed: u64,
    out: &Path,
) -> Result<(), Failure> {
    let strategy = match (strategy, delta_t) {
        (Strategy::Cross, _) => SamplingStrategy::CrossPlantFlexible,
        (Strategy::Full, _) => SamplingStrategy::IntraPlantFullCycle,
        (Strategy::Window, Some(delta_t)) => SamplingStrategy::IntraPlantTemporalWindow { delta_t },
        (Strategy::Window, None) => return Err(Failure::Usage("--strategy window requires --delta-t".into())),
    };
    let mut records = Vec::with_capacity(corpus.len());
    for (i, path) in corpus.iter().enumerate() {
        require_file(path)?;
        let mut rec = io::read_gt(path).with_context(|| format!("reading {}", path.display()))?;
        rec.plant_id = i as u64 + 1;
        records.push(rec);
    }
    let list = sample_triplets(&records, strategy, count, seed)?;
    io::write_triplets(&list, out)?;
    println!("triplets: {}", list.len());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    detections: &Path,
    gt: &Path,
    tau_s: &[f64],
    alpha: &[f64],
    modes: &[Mode],
    params: Option<&Path>,
    iou: f64,
    out: &Path,
) -> Result<(), Failure> {
    if tau_s.is_empty() || alpha.is_empty() || modes.is_empty() {
        return Err(Failure::Usage("sweep grid is empty".into()));
    }
    let det = read_detections(detections)?;
    require_file(gt)?;
    let gt = io::read_gt(gt).with_context(|| format!("reading {}", gt.display()))?;
    let base = load_params(params)?;
    let mut grid = Vec::new();
    for &t in tau_s {
        for &a in alpha {
            for &m in modes {
                let p = TrackerParams { tau_s: t, alpha: a, mode: m.into(), ..base };
                p.validate().map_err(|e| Failure::Usage(e.to_string()))?;
                grid.push(p);
            }
        }
    }
    let rows: Vec<Result<(TrackerParams, MetricReport)>> = grid
        .par_iter()
        .map(|p| {
            let results = run_sequence(&det, *p)?;
            let (_, r) = report(&gt, &to_predictions(&results), iou)?;
            Ok((*p, r))
        })
        .collect();
    let mut csv = String::from("tau_s,alpha,mode,hota,deta,assa,mota,idf1\n");
    for row in rows {
        let (p, r) = row?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            p.tau_s,
            p.alpha,
            p.mode.as_str(),
            r.hota,
            r.deta,
            r.assa,
            r.mota,
            r.idf1
        );
    }
    io::write_text(out, &csv)?;
    println!("grid points: {}", grid.len());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { config, out_dir } => simulate(&config, &out_dir),
        Command::Track { detections, params, out } => track(&detections, params.as_deref(), &out),
        Command::Eval { gt, results, iou, leaf_matrix, leaf_iou, machine } => {
            eval(&gt, &results, iou, leaf_matrix.as_deref(), leaf_iou, machine)
        }
        Command::Triplets { gt_corpus, strategy, delta_t, count, seed, out } => {
            triplets(&gt_corpus, strategy, delta_t, count, seed, &out)
        }
        Command::Sweep { detections, gt, tau_s, alpha, ema_mode, params, iou, out } => {
            sweep(&detections, &gt, &tau_s, &alpha, &ema_mode, params.as_deref(), iou, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
