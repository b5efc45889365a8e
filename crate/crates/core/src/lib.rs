//! Constructive training of single-hidden-layer feedforward classifiers.
//!
//! A network starts with one hidden unit and is trained by online
//! backpropagation with momentum. After each training phase it is scored
//! on the train, validation and test splits; when the validation error and
//! the classification efficiency are both acceptable growth stops,
//! otherwise one hidden unit is added (all trained weights are kept) and
//! training resumes.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common double-precision instantiations.
//!
//! ```
//! use mfnnca::{Network64, NetworkConfig};
//!
//! let net = Network64::init(&NetworkConfig::new(9, 1, 1)).unwrap();
//! let y = net.forward(&[0.5; 9]).unwrap().output;
//! assert!(y[0] > 0.0 && y[0] < 1.0);
//! ```

pub mod config;
pub mod data;
pub mod error;
pub mod experiment;
pub mod growth;
pub mod kv;
pub mod matrix;
pub mod metrics;
pub mod model_io;
pub mod network;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod training;

pub use config::{ExperimentConfig, Precision};
pub use data::{
    encode, load_dataset, load_raw, split, DatasetSchema, MissingPolicy, PatternSet, RawRecord, SplitDataset,
    SplitOrder, SplitSpec, TargetEncoding,
};
pub use error::{Error, Result};
pub use growth::{
    run_growth, select_best_phase, GrowthConfig, GrowthRun, GrowthTrace, PhaseRecord, SplitScore, StoppingCriteria,
    Termination,
};
pub use matrix::Matrix;
pub use metrics::{classify, evaluate, overall_efficiency, EvalResult};
pub use model_io::{load_model, model_from_str, model_to_string, save_model};
pub use network::{sigmoid, Activations, Network, NetworkConfig, NewUnitInit};
pub use rng::XorShift64Star;
pub use scalar::Scalar;
pub use training::{
    backprop_gradients, mean_squared_error, sample_error, train_epoch, train_phase, EpochOutcome, ErrorHistory,
    Gradients, TrainConfig,
};

pub type Network64 = Network<f64>;
pub type Network32 = Network<f32>;
pub type PatternSet64 = PatternSet<f64>;
pub type SplitDataset64 = SplitDataset<f64>;
pub type Gradients64 = Gradients<f64>;
pub type GrowthRun64 = GrowthRun<f64>;
