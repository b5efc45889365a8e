//! Experiment configuration files.
//!
//! Flat `key = value` text with section prefixes. Relative paths resolve
//! against the directory of the config file. Recognized keys and defaults:
//!
//! | key | default |
//! |-----|---------|
//! | `data.schema` | required, path to a dataset schema |
//! | `data.path` | the schema's `file`, next to the schema |
//! | `data.order` | `file` (or `shuffle`) |
//! | `data.shuffle_seed` | `0` |
//! | `net.hidden_units` | `1` (fixed-topology training only) |
//! | `net.init_range` | `0.5` |
//! | `net.new_unit` | `random` (or `zero`) |
//! | `net.new_unit_range` | `net.init_range` |
//! | `net.seed` | `1` |
//! | `net.precision` | `f64` (or `f32`) |
//! | `train.learning_rate` | `0.01` |
//! | `train.momentum` | `0.9` |
//! | `train.epochs_per_phase` | `100` |
//! | `train.shuffle` | `true` |
//! | `train.seed` | `1` |
//! | `stop.max_validation_error` | `0.02` |
//! | `stop.min_efficiency` | `96` |
//! | `stop.max_hidden_units` | `8` |
//! | `stop.strict` | `false` |
//! | `out.dir` | `runs/<dataset name>` |

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::data::{DatasetSchema, SplitOrder};
use crate::error::{Error, Result};
use crate::growth::{GrowthConfig, StoppingCriteria};
use crate::kv::KeyValues;
use crate::network::{NetworkConfig, NewUnitInit, DEFAULT_INIT_RANGE};
use crate::training::TrainConfig;

pub const KNOWN_KEYS: [&str; 20] = [
    "data.schema",
    "data.path",
    "data.order",
    "data.shuffle_seed",
    "net.hidden_units",
    "net.init_range",
    "net.new_unit",
    "net.new_unit_range",
    "net.seed",
    "net.precision",
    "train.learning_rate",
    "train.momentum",
    "train.epochs_per_phase",
    "train.shuffle",
    "train.seed",
    "stop.max_validation_error",
    "stop.min_efficiency",
    "stop.max_hidden_units",
    "stop.strict",
    "out.dir",
];

const PATH_KEYS: [&str; 3] = ["data.schema", "data.path", "out.dir"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    F32,
    F64,
}

impl std::str::FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f32" => Ok(Self::F32),
            "f64" => Ok(Self::F64),
            other => Err(Error::Config(format!("unknown precision `{other}`"))),
        }
    }
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Precision::F32 => "f32",
            Precision::F64 => "f64",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub schema_path: PathBuf,
    pub schema: DatasetSchema,
    pub data_path: PathBuf,
    pub order: SplitOrder,
    pub net: NetworkConfig,
    pub new_unit: NewUnitInit,
    pub precision: Precision,
    pub train: TrainConfig,
    pub stop: StoppingCriteria,
    pub out_dir: PathBuf,
}

fn parse_bool(kv: &KeyValues, key: &str, default: bool) -> Result<bool> {
    match kv.get_str(key) {
        None => Ok(default),
        Some("true" | "yes" | "on" | "1") => Ok(true),
        Some("false" | "no" | "off" | "0") => Ok(false),
        Some(v) => Err(Error::Config(format!("`{key}`: expected a boolean, got `{v}`"))),
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Self::load_with_overrides(path, &[])
    }

    /// Loads a config and applies `key=value` overrides on top. Relative
    /// paths in overrides resolve against the current directory.
    pub fn load_with_overrides(path: &Path, overrides: &[(String, String)]) -> Result<Self> {
        let mut kv = KeyValues::load(path)?;
        let cwd = std::env::current_dir().map_err(|e| Error::io(".", e))?;
        for (key, value) in overrides {
            if PATH_KEYS.contains(&key.as_str()) {
                kv.set(key, &cwd.join(value).to_string_lossy());
            } else {
                kv.set(key, value);
            }
        }
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_key_values(&kv, &base)
    }

    pub fn from_key_values(kv: &KeyValues, base: &Path) -> Result<Self> {
        if let Some(unknown) = kv.keys().find(|k| !KNOWN_KEYS.contains(k)) {
            return Err(Error::Config(format!(
                "{}: unknown key `{unknown}`",
                kv.source().display()
            )));
        }
        let schema_path = base.join(kv.require_str("data.schema")?);
        let schema = DatasetSchema::load(&schema_path)?;
        let data_path = match kv.get_str("data.path") {
            Some(p) => base.join(p),
            None => {
                let file = schema.file.as_deref().ok_or_else(|| {
                    Error::Config(format!(
                        "schema {} names no data file and `data.path` is unset",
                        schema_path.display()
                    ))
                })?;
                schema_path.parent().unwrap_or(Path::new("")).join(file)
            }
        };
        let order = match kv.get_str("data.order").unwrap_or("file") {
            "file" => SplitOrder::FileOrder,
            "shuffle" => SplitOrder::SeededShuffle(kv.get_or("data.shuffle_seed", 0)?),
            other => return Err(Error::Config(format!("unknown data.order `{other}`"))),
        };

        let init_range = kv.get_or("net.init_range", DEFAULT_INIT_RANGE)?;
        let net = NetworkConfig {
            input_dim: schema.input_attributes,
            hidden_units: kv.get_or("net.hidden_units", 1)?,
            output_dim: schema.output_units,
            init_range,
            seed: kv.get_or("net.seed", 1)?,
        };
        net.validate()?;
        let new_unit = match kv.get_str("net.new_unit").unwrap_or("random") {
            "random" => {
                let r: f64 = kv.get_or("net.new_unit_range", init_range)?;
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Error::Config(format!("net.new_unit_range must be positive, got {r}")));
                }
                NewUnitInit::RandomInRange(r)
            }
            "zero" => NewUnitInit::Zero,
            other => return Err(Error::Config(format!("unknown net.new_unit `{other}`"))),
        };
        let precision = kv.get_str("net.precision").unwrap_or("f64").parse()?;

        let defaults = TrainConfig::default();
        let train = TrainConfig {
            learning_rate: kv.get_or("train.learning_rate", defaults.learning_rate)?,
            momentum: kv.get_or("train.momentum", defaults.momentum)?,
            epochs_per_phase: kv.get_or("train.epochs_per_phase", defaults.epochs_per_phase)?,
            shuffle: parse_bool(kv, "train.shuffle", defaults.shuffle)?,
            seed: kv.get_or("train.seed", 1)?,
        };
        train.validate()?;

        let defaults = StoppingCriteria::default();
        let stop = StoppingCriteria {
            max_validation_error: kv.get_or("stop.max_validation_error", defaults.max_validation_error)?,
            min_efficiency: kv.get_or("stop.min_efficiency", defaults.min_efficiency)?,
            max_hidden_units: kv.get_or("stop.max_hidden_units", defaults.max_hidden_units)?,
            strict: parse_bool(kv, "stop.strict", defaults.strict)?,
        };
        stop.validate()?;

        let out_dir = match kv.get_str("out.dir") {
            Some(d) => base.join(d),
            None => base.join("runs").join(&schema.name),
        };

        Ok(Self {
            schema_path,
            schema,
            data_path,
            order,
            net,
            new_unit,
            precision,
            train,
            stop,
            out_dir,
        })
    }

    pub fn growth(&self) -> GrowthConfig {
        GrowthConfig {
            net: self.net.clone(),
            train: self.train.clone(),
            stop: self.stop.clone(),
            new_unit: Some(self.new_unit),
        }
    }

    /// Fully resolved configuration in the same `key = value` syntax.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| writeln!(s, "{k} = {v}").expect("write to String");
        put("data.schema", self.schema_path.display().to_string());
        put("data.path", self.data_path.display().to_string());
        match self.order {
            SplitOrder::FileOrder => put("data.order", "file".into()),
            SplitOrder::SeededShuffle(seed) => {
                put("data.order", "shuffle".into());
                put("data.shuffle_seed", seed.to_string());
            }
        }
        put("net.hidden_units", self.net.hidden_units.to_string());
        put("net.init_range", self.net.init_range.to_string());
        match self.new_unit {
            NewUnitInit::Zero => put("net.new_unit", "zero".into()),
            NewUnitInit::RandomInRange(r) => {
                put("net.new_unit", "random".into());
                put("net.new_unit_range", r.to_string());
            }
        }
        put("net.seed", self.net.seed.to_string());
        put("net.precision", self.precision.to_string());
        put("train.learning_rate", self.train.learning_rate.to_string());
        put("train.momentum", self.train.momentum.to_string());
        put("train.epochs_per_phase", self.train.epochs_per_phase.to_string());
        put("train.shuffle", self.train.shuffle.to_string());
        put("train.seed", self.train.seed.to_string());
        put("stop.max_validation_error", self.stop.max_validation_error.to_string());
        put("stop.min_efficiency", self.stop.min_efficiency.to_string());
        put("stop.max_hidden_units", self.stop.max_hidden_units.to_string());
        put("stop.strict", self.stop.strict.to_string());
        put("out.dir", self.out_dir.display().to_string());
        s
    }
}
