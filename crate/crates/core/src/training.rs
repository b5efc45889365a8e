//! Squared-error objective, backpropagation and per-pattern gradient descent.
//!
//! The per-pattern error is `xi(n) = 1/2 * sum_k (d_k - y_k)^2` and the
//! set error `xi_av` is its mean over the patterns.

use crate::data::PatternSet;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::network::Network;
use crate::rng::XorShift64Star;
use crate::scalar::Scalar;

pub const DEFAULT_LEARNING_RATE: f64 = 0.01;
pub const DEFAULT_MOMENTUM: f64 = 0.9;
pub const DEFAULT_EPOCHS_PER_PHASE: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    pub epochs_per_phase: usize,
    /// Visit patterns in a freshly shuffled order every epoch.
    pub shuffle: bool,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: DEFAULT_LEARNING_RATE,
            momentum: DEFAULT_MOMENTUM,
            epochs_per_phase: DEFAULT_EPOCHS_PER_PHASE,
            shuffle: true,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning_rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config(format!(
                "momentum must lie in [0, 1), got {}",
                self.momentum
            )));
        }
        if self.epochs_per_phase == 0 {
            return Err(Error::Config("epochs_per_phase must be at least 1".into()));
        }
        Ok(())
    }
}

/// Partial derivatives of the per-pattern error, shaped like a [`Network`].
/// Also used as the momentum velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T> {
    pub g_w_in: Matrix<T>,
    pub g_b_hidden: Vec<T>,
    pub g_w_out: Matrix<T>,
    pub g_b_out: Vec<T>,
}

impl<T: Scalar> Gradients<T> {
    pub fn zeros_like(net: &Network<T>) -> Self {
        Self {
            g_w_in: Matrix::zeros(net.hidden_units(), net.input_dim()),
            g_b_hidden: vec![T::zero(); net.hidden_units()],
            g_w_out: Matrix::zeros(net.output_dim(), net.hidden_units()),
            g_b_out: vec![T::zero(); net.output_dim()],
        }
    }

    pub fn matches(&self, net: &Network<T>) -> bool {
        self.g_w_in.rows() == net.hidden_units()
            && self.g_w_in.cols() == net.input_dim()
            && self.g_w_out.rows() == net.output_dim()
            && self.g_w_out.cols() == net.hidden_units()
            && self.g_b_hidden.len() == net.hidden_units()
            && self.g_b_out.len() == net.output_dim()
    }

    /// Values in the same canonical order as [`Network::params`].
    pub fn values(&self) -> impl Iterator<Item = T> + '_ {
        self.g_w_in
            .as_slice()
            .iter()
            .chain(&self.g_b_hidden)
            .chain(self.g_w_out.as_slice())
            .chain(&self.g_b_out)
            .copied()
    }

    fn values_mut(&mut self) -> impl Iterator<Item = &mut T> + '_ {
        self.g_w_in
            .as_mut_slice()
            .iter_mut()
            .chain(self.g_b_hidden.iter_mut())
            .chain(self.g_w_out.as_mut_slice().iter_mut())
            .chain(self.g_b_out.iter_mut())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochError<T> {
    /// 1-based epoch within the phase.
    pub epoch: usize,
    pub train: T,
    pub valid: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorHistory<T> {
    pub per_epoch: Vec<EpochError<T>>,
}

/// `1/2 * sum_k (d_k - y_k)^2`.
pub fn sample_error<T: Scalar>(desired: &[T], actual: &[T]) -> Result<T> {
    if desired.len() != actual.len() {
        return Err(Error::Input(format!(
            "desired has {} values, actual has {}",
            desired.len(),
            actual.len()
        )));
    }
    Ok(half_sq(desired, actual))
}

fn half_sq<T: Scalar>(desired: &[T], actual: &[T]) -> T {
    let sum = desired
        .iter()
        .zip(actual)
        .fold(T::zero(), |acc, (&d, &y)| acc + (d - y) * (d - y));
    sum / T::of(2.0)
}

fn check_dims<T: Scalar>(net: &Network<T>, patterns: &PatternSet<T>) -> Result<()> {
    if patterns.input_dim() != net.input_dim() || patterns.output_dim() != net.output_dim() {
        return Err(Error::Input(format!(
            "patterns are {}->{}, network is {}-{}-{}",
            patterns.input_dim(),
            patterns.output_dim(),
            net.input_dim(),
            net.hidden_units(),
            net.output_dim()
        )));
    }
    Ok(())
}

/// Mean of [`sample_error`] over every pattern (`xi_av`).
pub fn mean_squared_error<T: Scalar>(net: &Network<T>, patterns: &PatternSet<T>) -> Result<T> {
    check_dims(net, patterns)?;
    if patterns.is_empty() {
        return Err(Error::Input("mean squared error of an empty pattern set".into()));
    }
    Ok(mse_unchecked(net, patterns))
}

fn mse_unchecked<T: Scalar>(net: &Network<T>, patterns: &PatternSet<T>) -> T {
    let mut hidden = vec![T::zero(); net.hidden_units()];
    let mut output = vec![T::zero(); net.output_dim()];
    let total = patterns.iter().fold(T::zero(), |acc, (x, d)| {
        net.forward_into(x, &mut hidden, &mut output);
        acc + half_sq(d, &output)
    });
    total / T::count(patterns.len())
}

/// Analytic gradient of [`sample_error`] for one pattern.
pub fn backprop_gradients<T: Scalar>(net: &Network<T>, input: &[T], desired: &[T]) -> Result<Gradients<T>> {
    if input.len() != net.input_dim() || desired.len() != net.output_dim() {
        return Err(Error::Input(format!(
            "pattern is {}->{}, network is {}-{}-{}",
            input.len(),
            desired.len(),
            net.input_dim(),
            net.hidden_units(),
            net.output_dim()
        )));
    }
    let mut scratch = Scratch::new(net);
    backprop_into(net, input, desired, &mut scratch);
    Ok(scratch.grads)
}

struct Scratch<T> {
    hidden: Vec<T>,
    output: Vec<T>,
    delta_out: Vec<T>,
    grads: Gradients<T>,
}

impl<T: Scalar> Scratch<T> {
    fn new(net: &Network<T>) -> Self {
        Self {
            hidden: vec![T::zero(); net.hidden_units()],
            output: vec![T::zero(); net.output_dim()],
            delta_out: vec![T::zero(); net.output_dim()],
            grads: Gradients::zeros_like(net),
        }
    }
}

fn backprop_into<T: Scalar>(net: &Network<T>, input: &[T], desired: &[T], s: &mut Scratch<T>) {
    net.forward_into(input, &mut s.hidden, &mut s.output);
    for (k, &d) in desired.iter().enumerate() {
        let y = s.output[k];
        // d xi / d z_k = -(d_k - y_k) * y_k * (1 - y_k)
        let delta = -(d - y) * y * (T::one() - y);
        s.delta_out[k] = delta;
        s.grads.g_b_out[k] = delta;
        for (g, &h) in s.grads.g_w_out.row_mut(k).iter_mut().zip(&s.hidden) {
            *g = delta * h;
        }
    }
    for j in 0..net.hidden_units() {
        let back = (0..net.output_dim()).fold(T::zero(), |acc, k| acc + s.delta_out[k] * net.w_out.get(k, j));
        let h = s.hidden[j];
        let delta = back * h * (T::one() - h);
        s.grads.g_b_hidden[j] = delta;
        for (g, &x) in s.grads.g_w_in.row_mut(j).iter_mut().zip(input) {
            *g = delta * x;
        }
    }
}

/// One epoch of online descent with momentum, mutating in place.
fn epoch_in_place<T: Scalar>(
    net: &mut Network<T>,
    train: &PatternSet<T>,
    cfg: &TrainConfig,
    velocity: &mut Gradients<T>,
    rng: &mut XorShift64Star,
    scratch: &mut Scratch<T>,
) {
    let eta = T::of(cfg.learning_rate);
    let alpha = T::of(cfg.momentum);
    let mut order: Vec<usize> = (0..train.len()).collect();
    if cfg.shuffle {
        rng.shuffle(&mut order);
    }
    for n in order {
        backprop_into(net, train.input(n), train.target(n), scratch);
        for ((w, v), g) in net.params_mut().zip(velocity.values_mut()).zip(scratch.grads.values()) {
            *v = alpha * *v - eta * g;
            *w = *w + *v;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochOutcome<T> {
    pub network: Network<T>,
    pub velocity: Gradients<T>,
    /// Training-set `xi_av` measured after the epoch's updates.
    pub error: T,
}

/// One pass over `train`: for every pattern `v <- alpha*v - eta*g; w <- w + v`.
pub fn train_epoch<T: Scalar>(
    net: &Network<T>,
    train: &PatternSet<T>,
    cfg: &TrainConfig,
    velocity: &Gradients<T>,
    rng: &mut XorShift64Star,
) -> Result<EpochOutcome<T>> {
    cfg.validate()?;
    check_dims(net, train)?;
    if !velocity.matches(net) {
        return Err(Error::Input("velocity shape does not match the network".into()));
    }
    let mut network = net.clone();
    let mut velocity = velocity.clone();
    let mut scratch = Scratch::new(net);
    epoch_in_place(&mut network, train, cfg, &mut velocity, rng, &mut scratch);
    let error = mse_unchecked(&network, train);
    Ok(EpochOutcome {
        network,
        velocity,
        error,
    })
}

/// Runs `cfg.epochs_per_phase` epochs from zero velocity, recording
/// training and validation `xi_av` after every epoch. The shuffling stream
/// is seeded from `cfg.seed`.
pub fn train_phase<T: Scalar>(
    net: &Network<T>,
    train: &PatternSet<T>,
    valid: &PatternSet<T>,
    cfg: &TrainConfig,
) -> Result<(Network<T>, ErrorHistory<T>)> {
    cfg.validate()?;
    check_dims(net, train)?;
    check_dims(net, valid)?;
    let mut rng = XorShift64Star::new(cfg.seed);
    let mut network = net.clone();
    let mut velocity = Gradients::zeros_like(net);
    let mut scratch = Scratch::new(net);
    let mut history = ErrorHistory {
        per_epoch: Vec::with_capacity(cfg.epochs_per_phase),
    };
    for epoch in 1..=cfg.epochs_per_phase {
        epoch_in_place(&mut network, train, cfg, &mut velocity, &mut rng, &mut scratch);
        if !network.is_finite() {
            return Err(Error::Input(format!("training diverged at epoch {epoch}")));
        }
        history.per_epoch.push(EpochError {
            epoch,
            train: mse_unchecked(&network, train),
            valid: Some(mse_unchecked(&network, valid)),
        });
    }
    Ok((network, history))
}
