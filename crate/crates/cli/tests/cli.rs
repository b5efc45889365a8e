use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mfnnca"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../configs/{name}.cfg"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn grow(out: &Path, extra: &[&str]) -> Output {
    let cfg = config("cancer");
    let out_arg = format!("--out.dir={}", out.display());
    let mut args = vec!["grow", cfg.to_str().unwrap(), out_arg.as_str()];
    args.extend_from_slice(extra);
    run(&args)
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn trivial_criteria_exit_zero_after_one_phase() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let res = grow(
        &out,
        &["--stop.max_validation_error", "1e9", "--stop.min_efficiency", "0"],
    );
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(String::from_utf8_lossy(&res.stdout).contains("criteria_met"));

    let trace = read(&out.join("trace.csv"));
    assert_eq!(trace.lines().count(), 2, "header plus one phase");
    for f in ["model.txt", "checkpoints/model_h1.txt", "summary.txt", "run.log"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let errors = read(&out.join("errors_h1.csv"));
    assert_eq!(errors.lines().next(), Some("epoch,train_mse,valid_mse"));
    assert_eq!(errors.lines().count(), 1 + 100);
    assert!(read(&out.join("run.log")).contains("# termination = criteria_met"));
}

#[test]
fn unreachable_criteria_exit_two_with_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let res = grow(
        &out,
        &[
            "--stop.max_validation_error=0",
            "--stop.min_efficiency=100",
            "--stop.max_hidden_units=3",
            "--train.epochs_per_phase=20",
        ],
    );
    assert_eq!(res.status.code(), Some(2), "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(read(&out.join("trace.csv")).lines().count(), 4);
    for h in 1..=3 {
        assert!(out.join(format!("checkpoints/model_h{h}.txt")).is_file());
        assert_eq!(read(&out.join(format!("errors_h{h}.csv"))).lines().count(), 21);
    }
    assert!(read(&out.join("summary.txt")).contains("best:"));
}

#[test]
fn unreadable_data_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let res = grow(&tmp.path().join("run"), &["--data.path", "/nonexistent/cancer.data"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).starts_with("error:"));
}

#[test]
fn bad_arguments_exit_nonzero() {
    let cfg = config("cancer");
    let res = run(&["grow", cfg.to_str().unwrap(), "--no.such_key", "1"]);
    assert_eq!(res.status.code(), Some(1));
    let res = run(&["grow", "/nonexistent.cfg"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn grow_is_byte_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let extra = ["--stop.max_hidden_units=3", "--stop.min_efficiency=100"];
    assert_eq!(grow(&a, &extra).status.code(), Some(2));
    assert_eq!(grow(&b, &extra).status.code(), Some(2));
    for f in [
        "trace.csv",
        "model.txt",
        "summary.txt",
        "errors_h2.csv",
        "checkpoints/model_h3.txt",
    ] {
        assert_eq!(read(&a.join(f)), read(&b.join(f)), "{f}");
    }
}

#[test]
fn report_regenerates_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    grow(&out, &["--stop.max_hidden_units=2", "--stop.min_efficiency=100"]);
    let original = read(&out.join("summary.txt"));
    std::fs::remove_file(out.join("summary.txt")).unwrap();
    let res = run(&["report", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&res.stdout), original);
    assert_eq!(read(&out.join("summary.txt")), original);

    let res = run(&["report", tmp.path().join("missing").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
}

/// Writes a two-input OR dataset, its schema and a config into `dir`.
fn or_fixture(dir: &Path) -> PathBuf {
    let rows = ["0,0,0", "0,1,1", "1,0,1", "1,1,1"];
    std::fs::write(dir.join("or.data"), rows.repeat(3).join("\n")).unwrap();
    std::fs::write(
        dir.join("or.schema"),
        "name = or\nfile = or.data\ncolumns = 3\nlabel_column = 2\ninput_attributes = 2\n\
         output_units = 1\noutput_classes = 2\nencoding = single_unit\nclasses = 0;1\nsplit = 4,4,4\n",
    )
    .unwrap();
    let cfg = dir.join("or.cfg");
    std::fs::write(
        &cfg,
        "data.schema = or.schema\nnet.hidden_units = 2\nnet.init_range = 1\n\
         train.learning_rate = 0.5\ntrain.epochs_per_phase = 2000\nout.dir = out\n",
    )
    .unwrap();
    cfg
}

#[test]
fn train_then_eval_or() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = or_fixture(tmp.path());
    let res = run(&["train", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let out = tmp.path().join("out");
    let eval = read(&out.join("eval.csv"));
    assert!(eval.contains("test,4,4,100.00,"), "{eval}");
    assert_eq!(read(&out.join("errors_h2.csv")).lines().count(), 2001);

    let model = out.join("model.txt");
    let res = run(&[
        "eval",
        model.to_str().unwrap(),
        cfg.to_str().unwrap(),
        "--split",
        "valid",
    ]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(String::from_utf8_lossy(&res.stdout).starts_with("valid: 4/4 classified"));
    assert!(read(&out.join("eval_valid.csv")).starts_with("split,classified,total,efficiency,ms_error\n"));

    let res = run(&[
        "eval",
        model.to_str().unwrap(),
        cfg.to_str().unwrap(),
        "--split",
        "nope",
    ]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn eval_rejects_mismatched_model() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = or_fixture(tmp.path());
    let model = tmp.path().join("wide.txt");
    std::fs::write(&model, "mfnnca-model 1\n3 1 1\n0 0 0\n0\n0\n0\n").unwrap();
    let res = run(&["eval", model.to_str().unwrap(), cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("is 3-1-1"));

    std::fs::write(&model, "not a model\n").unwrap();
    let res = run(&["eval", model.to_str().unwrap(), cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn sweep_writes_one_directory_per_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config("cancer");
    let out_arg = format!("--out.dir={}", tmp.path().display());
    let res = run(&[
        "sweep",
        cfg.to_str().unwrap(),
        "--seeds",
        "1..3",
        "--threads",
        "2",
        out_arg.as_str(),
        "--stop.max_validation_error=1e9",
        "--stop.min_efficiency=0",
    ]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let sweep = read(&tmp.path().join("sweep.csv"));
    assert_eq!(sweep.lines().count(), 4);
    for s in 1..=3 {
        assert!(tmp.path().join(format!("seed_{s}/trace.csv")).is_file());
        assert!(read(&tmp.path().join(format!("seed_{s}/run.log"))).contains(&format!("net.seed = {s}")));
    }
}
