//! Single-hidden-layer feedforward networks with logistic units.
//!
//! Topology is fixed at one hidden layer; capacity grows only through
//! [`Network::add_hidden_unit`], which keeps every existing weight and adds
//! one fresh hidden unit wired to all inputs and all outputs.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::XorShift64Star;
use crate::scalar::Scalar;

pub const DEFAULT_INIT_RANGE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub input_dim: usize,
    pub hidden_units: usize,
    pub output_dim: usize,
    /// Half-width `r` of the uniform initialization interval `[-r, r]`.
    pub init_range: f64,
    pub seed: u64,
}

impl NetworkConfig {
    pub fn new(input_dim: usize, hidden_units: usize, output_dim: usize) -> Self {
        Self {
            input_dim,
            hidden_units,
            output_dim,
            init_range: DEFAULT_INIT_RANGE,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.hidden_units == 0 || self.output_dim == 0 {
            return Err(Error::Config(format!(
                "network dimensions must be positive, got {}-{}-{}",
                self.input_dim, self.hidden_units, self.output_dim
            )));
        }
        if !(self.init_range > 0.0 && self.init_range.is_finite()) {
            return Err(Error::Config(format!(
                "init_range must be positive and finite, got {}",
                self.init_range
            )));
        }
        Ok(())
    }
}

/// How the weights of a newly added hidden unit are initialized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NewUnitInit {
    /// Uniform in `[-r, r]`.
    RandomInRange(f64),
    /// All zero: the grown network computes exactly the same function.
    Zero,
}

/// Post-activation values of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Activations<T> {
    pub hidden: Vec<T>,
    pub output: Vec<T>,
}

/// Logistic sigmoid `1 / (1 + e^-x)`.
///
/// Saturates to exactly 0 or 1 once `|x|` exceeds the float's resolution.
pub fn sigmoid<T: Scalar>(x: T) -> T {
    T::one() / (T::one() + (-x).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    /// Input to hidden weights, `hidden_units x input_dim`.
    pub(crate) w_in: Matrix<T>,
    pub(crate) b_hidden: Vec<T>,
    /// Hidden to output weights, `output_dim x hidden_units`.
    pub(crate) w_out: Matrix<T>,
    pub(crate) b_out: Vec<T>,
}

impl<T: Scalar> Network<T> {
    /// Assembles a network from its parts, checking shapes and finiteness.
    pub fn from_parts(w_in: Matrix<T>, b_hidden: Vec<T>, w_out: Matrix<T>, b_out: Vec<T>) -> Result<Self> {
        let hidden = w_in.rows();
        if hidden == 0 || w_in.cols() == 0 || w_out.rows() == 0 {
            return Err(Error::Config("network dimensions must be positive".into()));
        }
        if b_hidden.len() != hidden || w_out.cols() != hidden || b_out.len() != w_out.rows() {
            return Err(Error::Config(format!(
                "inconsistent shapes: w_in {}x{}, b_hidden {}, w_out {}x{}, b_out {}",
                w_in.rows(),
                w_in.cols(),
                b_hidden.len(),
                w_out.rows(),
                w_out.cols(),
                b_out.len()
            )));
        }
        let net = Self {
            w_in,
            b_hidden,
            w_out,
            b_out,
        };
        if !net.is_finite() {
            return Err(Error::Config("network contains non-finite weights".into()));
        }
        Ok(net)
    }

    pub fn zeros(input_dim: usize, hidden_units: usize, output_dim: usize) -> Self {
        Self {
            w_in: Matrix::zeros(hidden_units, input_dim),
            b_hidden: vec![T::zero(); hidden_units],
            w_out: Matrix::zeros(output_dim, hidden_units),
            b_out: vec![T::zero(); output_dim],
        }
    }

    /// Draws every parameter uniformly from `[-config.init_range, config.init_range]`
    /// with a generator seeded from `config.seed`.
    pub fn init(config: &NetworkConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = XorShift64Star::new(config.seed);
        Ok(Self::init_with_rng(config, &mut rng))
    }

    /// Like [`Network::init`] but continues an existing stream. Draw order is
    /// `w_in` row-major, `b_hidden`, `w_out` row-major, `b_out`.
    pub fn init_with_rng(config: &NetworkConfig, rng: &mut XorShift64Star) -> Self {
        let r = config.init_range;
        let mut net = Self::zeros(config.input_dim, config.hidden_units, config.output_dim);
        for p in net.w_in.as_mut_slice() {
            *p = T::of(rng.next_symmetric(r));
        }
        for p in &mut net.b_hidden {
            *p = T::of(rng.next_symmetric(r));
        }
        for p in net.w_out.as_mut_slice() {
            *p = T::of(rng.next_symmetric(r));
        }
        for p in &mut net.b_out {
            *p = T::of(rng.next_symmetric(r));
        }
        net
    }

    pub fn input_dim(&self) -> usize {
        self.w_in.cols()
    }

    pub fn hidden_units(&self) -> usize {
        self.w_in.rows()
    }

    pub fn output_dim(&self) -> usize {
        self.w_out.rows()
    }

    pub fn w_in(&self) -> &Matrix<T> {
        &self.w_in
    }

    pub fn b_hidden(&self) -> &[T] {
        &self.b_hidden
    }

    pub fn w_out(&self) -> &Matrix<T> {
        &self.w_out
    }

    pub fn b_out(&self) -> &[T] {
        &self.b_out
    }

    /// All parameters in the canonical order `w_in`, `b_hidden`, `w_out`, `b_out`.
    pub fn params(&self) -> impl Iterator<Item = T> + '_ {
        self.w_in
            .as_slice()
            .iter()
            .chain(&self.b_hidden)
            .chain(self.w_out.as_slice())
            .chain(&self.b_out)
            .copied()
    }

    pub(crate) fn params_mut(&mut self) -> impl Iterator<Item = &mut T> + '_ {
        self.w_in
            .as_mut_slice()
            .iter_mut()
            .chain(self.b_hidden.iter_mut())
            .chain(self.w_out.as_mut_slice().iter_mut())
            .chain(self.b_out.iter_mut())
    }

    pub fn param_count(&self) -> usize {
        let (i, h, o) = (self.input_dim(), self.hidden_units(), self.output_dim());
        h * i + h + o * h + o
    }

    pub fn is_finite(&self) -> bool {
        self.params().all(|p| p.is_finite())
    }

    fn check_input(&self, input: &[T]) -> Result<()> {
        if input.len() != self.input_dim() {
            return Err(Error::Input(format!(
                "input has {} values, network expects {}",
                input.len(),
                self.input_dim()
            )));
        }
        Ok(())
    }

    pub fn forward(&self, input: &[T]) -> Result<Activations<T>> {
        self.check_input(input)?;
        let mut act = Activations {
            hidden: vec![T::zero(); self.hidden_units()],
            output: vec![T::zero(); self.output_dim()],
        };
        self.forward_into(input, &mut act.hidden, &mut act.output);
        Ok(act)
    }

    /// Forward pass into caller-provided buffers; lengths must already match.
    pub(crate) fn forward_into(&self, input: &[T], hidden: &mut [T], output: &mut [T]) {
        for (j, h) in hidden.iter_mut().enumerate() {
            let z = self
                .w_in
                .row(j)
                .iter()
                .zip(input)
                .fold(self.b_hidden[j], |acc, (&w, &x)| acc + w * x);
            *h = sigmoid(z);
        }
        for (k, y) in output.iter_mut().enumerate() {
            let z = self
                .w_out
                .row(k)
                .iter()
                .zip(hidden.iter())
                .fold(self.b_out[k], |acc, (&v, &h)| acc + v * h);
            *y = sigmoid(z);
        }
    }

    /// Returns a copy with one more hidden unit. Existing parameters are
    /// copied unchanged; the new unit draws, in order, its input weights,
    /// its bias, then one outgoing weight per output.
    pub fn add_hidden_unit(&self, mode: NewUnitInit, rng: &mut XorShift64Star) -> Self {
        let h = self.hidden_units();
        let mut draw = || match mode {
            NewUnitInit::Zero => T::zero(),
            NewUnitInit::RandomInRange(r) => T::of(rng.next_symmetric(r)),
        };
        let mut w_in = self.w_in.with_extra_row();
        for w in w_in.row_mut(h) {
            *w = draw();
        }
        let mut b_hidden = self.b_hidden.clone();
        b_hidden.push(draw());
        let mut w_out = self.w_out.with_extra_col();
        for k in 0..w_out.rows() {
            w_out.set(k, h, draw());
        }
        Self {
            w_in,
            b_hidden,
            w_out,
            b_out: self.b_out.clone(),
        }
    }

    /// Converts every parameter to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Network<U> {
        let conv = |m: &Matrix<T>| {
            Matrix::from_vec(
                m.rows(),
                m.cols(),
                m.as_slice().iter().map(|v| U::of(v.as_f64())).collect(),
            )
            .expect("same shape")
        };
        Network {
            w_in: conv(&self.w_in),
            b_hidden: self.b_hidden.iter().map(|v| U::of(v.as_f64())).collect(),
            w_out: conv(&self.w_out),
            b_out: self.b_out.iter().map(|v| U::of(v.as_f64())).collect(),
        }
    }
}
