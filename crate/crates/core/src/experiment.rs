//! End-to-end experiment pipelines behind the command-line runner.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::{ExperimentConfig, Precision};
use crate::data::{load_dataset, PatternSet, SplitDataset};
use crate::error::{Error, Result};
use crate::growth::{run_growth, Termination};
use crate::metrics::{evaluate, overall_efficiency, EvalResult};
use crate::model_io::{load_model, save_model};
use crate::network::Network;
use crate::report::{emit_reports, errors_csv, summary_from_trace_csv};
use crate::scalar::Scalar;
use crate::training::train_phase;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitName {
    Train,
    Valid,
    Test,
}

impl std::str::FromStr for SplitName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Self::Train),
            "valid" | "validation" => Ok(Self::Valid),
            "test" => Ok(Self::Test),
            other => Err(Error::Config(format!("unknown split `{other}` (train, valid, test)"))),
        }
    }
}

impl SplitName {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitName::Train => "train",
            SplitName::Valid => "valid",
            SplitName::Test => "test",
        }
    }

    fn pick<T>(self, data: &SplitDataset<T>) -> &PatternSet<T> {
        match self {
            SplitName::Train => &data.train,
            SplitName::Valid => &data.valid,
            SplitName::Test => &data.test,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowReport {
    pub termination: Termination,
    pub phases: usize,
    pub best_hidden_units: usize,
    pub best_overall_efficiency: f64,
    pub out_dir: PathBuf,
}

pub fn load_data<T: Scalar>(cfg: &ExperimentConfig) -> Result<SplitDataset<T>> {
    load_dataset(&cfg.data_path, &cfg.schema, cfg.order)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn eval_to_f64<T: Scalar>(r: EvalResult<T>) -> EvalResult<f64> {
    EvalResult {
        split_name: r.split_name,
        classified: r.classified,
        total: r.total,
        efficiency_percent: r.efficiency_percent,
        ms_error: r.ms_error.as_f64(),
    }
}

pub const EVAL_HEADER: &str = "split,classified,total,efficiency,ms_error";

pub fn eval_csv(results: &[EvalResult<f64>]) -> String {
    let mut s = format!("{EVAL_HEADER}\n");
    for r in results {
        writeln!(
            s,
            "{},{},{},{:.2},{}",
            r.split_name, r.classified, r.total, r.efficiency_percent, r.ms_error
        )
        .unwrap();
    }
    s
}

/// Runs constructive growth and writes every artifact into `cfg.out_dir`:
/// `model.txt` (selected phase), `checkpoints/model_h<k>.txt`, `trace.csv`,
/// `errors_h<k>.csv`, `summary.txt` and `run.log`.
pub fn run_grow(cfg: &ExperimentConfig) -> Result<GrowReport> {
    match cfg.precision {
        Precision::F64 => grow_typed::<f64>(cfg),
        Precision::F32 => grow_typed::<f32>(cfg),
    }
}

fn grow_typed<T: Scalar>(cfg: &ExperimentConfig) -> Result<GrowReport> {
    let data = load_data::<T>(cfg)?;
    let run = run_growth(&data, cfg.schema.encoding, &cfg.growth())?;

    let out = &cfg.out_dir;
    let checkpoints = out.join("checkpoints");
    create_dir(&checkpoints)?;
    for net in &run.checkpoints {
        save_model(net, &checkpoints.join(format!("model_h{}.txt", net.hidden_units())))?;
    }
    save_model(&run.best, &out.join("model.txt"))?;
    emit_reports(&run.trace, &run.histories, out)?;

    let best = &run.trace.phases[run.trace.best_phase_index];
    let mut log = cfg.to_key_values();
    writeln!(log, "# dataset = {}", cfg.schema.name).unwrap();
    writeln!(log, "# split_order = {}", cfg.order).unwrap();
    writeln!(log, "# weight_seed = {}", cfg.net.seed).unwrap();
    writeln!(log, "# shuffle_seed = {}", cfg.train.seed).unwrap();
    writeln!(log, "# phases = {}", run.trace.phases.len()).unwrap();
    writeln!(log, "# termination = {}", run.trace.termination).unwrap();
    writeln!(log, "# best_hidden_units = {}", best.hidden_units).unwrap();
    write_file(&out.join("run.log"), &log)?;

    Ok(GrowReport {
        termination: run.trace.termination,
        phases: run.trace.phases.len(),
        best_hidden_units: best.hidden_units,
        best_overall_efficiency: best.overall_efficiency,
        out_dir: out.clone(),
    })
}

/// Fixed-topology baseline: trains a `net.hidden_units` network for
/// `train.epochs_per_phase` epochs and writes `model.txt`,
/// `errors_h<k>.csv`, `eval.csv` and `run.log`.
pub fn run_train(cfg: &ExperimentConfig) -> Result<Vec<EvalResult<f64>>> {
    match cfg.precision {
        Precision::F64 => train_typed::<f64>(cfg),
        Precision::F32 => train_typed::<f32>(cfg),
    }
}

fn train_typed<T: Scalar>(cfg: &ExperimentConfig) -> Result<Vec<EvalResult<f64>>> {
    let data = load_data::<T>(cfg)?;
    if data.input_dim() != cfg.net.input_dim || data.output_dim() != cfg.net.output_dim {
        return Err(Error::Schema("dataset dimensions disagree with the network".into()));
    }
    let net: Network<T> = Network::init(&cfg.net)?;
    let (trained, history) = train_phase(&net, &data.train, &data.valid, &cfg.train)?;
    let enc = cfg.schema.encoding;
    let results: Vec<EvalResult<f64>> = [
        evaluate(&trained, &data.train, enc, "train")?,
        evaluate(&trained, &data.valid, enc, "valid")?,
        evaluate(&trained, &data.test, enc, "test")?,
    ]
    .into_iter()
    .map(eval_to_f64)
    .collect();

    let out = &cfg.out_dir;
    create_dir(out)?;
    save_model(&trained, &out.join("model.txt"))?;
    write_file(
        &out.join(format!("errors_h{}.csv", trained.hidden_units())),
        &errors_csv(&history),
    )?;
    let mut eval = eval_csv(&results);
    writeln!(eval, "overall,,,{:.5},", overall_efficiency(&results)?).unwrap();
    write_file(&out.join("eval.csv"), &eval)?;
    let mut log = cfg.to_key_values();
    writeln!(log, "# dataset = {}", cfg.schema.name).unwrap();
    writeln!(log, "# split_order = {}", cfg.order).unwrap();
    write_file(&out.join("run.log"), &log)?;
    Ok(results)
}

/// Evaluates a saved model on one split of the configured dataset.
pub fn run_eval(model_path: &Path, cfg: &ExperimentConfig, split: SplitName) -> Result<EvalResult<f64>> {
    match cfg.precision {
        Precision::F64 => eval_typed::<f64>(model_path, cfg, split),
        Precision::F32 => eval_typed::<f32>(model_path, cfg, split),
    }
}

fn eval_typed<T: Scalar>(model_path: &Path, cfg: &ExperimentConfig, split: SplitName) -> Result<EvalResult<f64>> {
    let net: Network<T> = load_model(model_path)?;
    let data = load_data::<T>(cfg)?;
    if net.input_dim() != data.input_dim() || net.output_dim() != data.output_dim() {
        return Err(Error::Schema(format!(
            "model {} is {}-{}-{} but dataset `{}` has {} inputs and {} outputs",
            model_path.display(),
            net.input_dim(),
            net.hidden_units(),
            net.output_dim(),
            cfg.schema.name,
            data.input_dim(),
            data.output_dim()
        )));
    }
    evaluate(&net, split.pick(&data), cfg.schema.encoding, split.as_str()).map(eval_to_f64)
}

pub const SWEEP_HEADER: &str = "seed,termination,phases,best_hidden_units,best_overall_efficiency";

/// Runs growth once per seed (both weight and shuffle seeds set to it) on
/// up to `threads` worker threads. Each run writes into `<out.dir>/seed_<s>`;
/// `<out.dir>/sweep.csv` lists the outcomes in seed order.
pub fn run_sweep(cfg: &ExperimentConfig, seeds: &[u64], threads: usize) -> Result<Vec<(u64, GrowReport)>> {
    let configs: Vec<(u64, ExperimentConfig)> = seeds
        .iter()
        .map(|&seed| {
            let mut c = cfg.clone();
            c.net.seed = seed;
            c.train.seed = seed;
            c.out_dir = cfg.out_dir.join(format!("seed_{seed}"));
            (seed, c)
        })
        .collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<GrowReport>>> = configs.iter().map(|_| None).collect();
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..threads.max(1).min(configs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some((_, c)) = configs.get(i) else { break };
                let r = run_grow(c);
                results.lock().expect("no poisoned workers")[i] = Some(r);
            });
        }
    });

    let mut reports = Vec::with_capacity(seeds.len());
    for ((seed, _), slot) in configs.iter().zip(slots) {
        reports.push((*seed, slot.expect("every seed ran")?));
    }
    let mut csv = format!("{SWEEP_HEADER}\n");
    for (seed, r) in &reports {
        writeln!(
            csv,
            "{seed},{},{},{},{:.5}",
            r.termination, r.phases, r.best_hidden_units, r.best_overall_efficiency
        )
        .unwrap();
    }
    create_dir(&cfg.out_dir)?;
    write_file(&cfg.out_dir.join("sweep.csv"), &csv)?;
    Ok(reports)
}

/// Rebuilds `summary.txt` in `run_dir` from its `trace.csv` and returns it.
pub fn rebuild_summary(run_dir: &Path) -> Result<String> {
    let trace_path = run_dir.join("trace.csv");
    let text = std::fs::read_to_string(&trace_path).map_err(|e| Error::io(&trace_path, e))?;
    let summary = summary_from_trace_csv(&text)?;
    write_file(&run_dir.join("summary.txt"), &summary)?;
    Ok(summary)
}
