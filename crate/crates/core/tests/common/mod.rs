//! Test-only oracles, written independently of the library's vectorized paths.
#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use mfnnca::{Matrix, Network64, XorShift64Star};
use twofloat::TwoFloat;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn config_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Network parameters as plain nested vectors.
#[derive(Clone, Debug)]
pub struct Plain {
    pub w_in: Vec<Vec<f64>>,
    pub b_hidden: Vec<f64>,
    pub w_out: Vec<Vec<f64>>,
    pub b_out: Vec<f64>,
}

impl Plain {
    pub fn of(net: &Network64) -> Self {
        let rows = |m: &Matrix<f64>| (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
        Self {
            w_in: rows(net.w_in()),
            b_hidden: net.b_hidden().to_vec(),
            w_out: rows(net.w_out()),
            b_out: net.b_out().to_vec(),
        }
    }

    /// Parameter count in the canonical order w_in, b_hidden, w_out, b_out.
    pub fn len(&self) -> usize {
        self.w_in.iter().map(Vec::len).sum::<usize>()
            + self.b_hidden.len()
            + self.w_out.iter().map(Vec::len).sum::<usize>()
            + self.b_out.len()
    }

    pub fn param_mut(&mut self, mut idx: usize) -> &mut f64 {
        for row in &mut self.w_in {
            if idx < row.len() {
                return &mut row[idx];
            }
            idx -= row.len();
        }
        if idx < self.b_hidden.len() {
            return &mut self.b_hidden[idx];
        }
        idx -= self.b_hidden.len();
        for row in &mut self.w_out {
            if idx < row.len() {
                return &mut row[idx];
            }
            idx -= row.len();
        }
        &mut self.b_out[idx]
    }

    /// Triple-loop forward pass.
    pub fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut hidden = vec![0.0; self.b_hidden.len()];
        for j in 0..hidden.len() {
            let mut z = self.b_hidden[j];
            for i in 0..x.len() {
                z += self.w_in[j][i] * x[i];
            }
            hidden[j] = 1.0 / (1.0 + (-z).exp());
        }
        let mut out = vec![0.0; self.b_out.len()];
        for k in 0..out.len() {
            let mut z = self.b_out[k];
            for j in 0..hidden.len() {
                z += self.w_out[k][j] * hidden[j];
            }
            out[k] = 1.0 / (1.0 + (-z).exp());
        }
        (hidden, out)
    }

    /// Hand-derived backprop gradient, in parameter order.
    pub fn gradient(&self, x: &[f64], d: &[f64]) -> Vec<f64> {
        let (hidden, y) = self.forward(x);
        let delta_out: Vec<f64> = (0..y.len()).map(|k| -(d[k] - y[k]) * y[k] * (1.0 - y[k])).collect();
        let mut delta_hidden = vec![0.0; hidden.len()];
        for j in 0..hidden.len() {
            let mut back = 0.0;
            for k in 0..y.len() {
                back += delta_out[k] * self.w_out[k][j];
            }
            delta_hidden[j] = back * hidden[j] * (1.0 - hidden[j]);
        }
        let mut g = Vec::with_capacity(self.len());
        for j in 0..hidden.len() {
            for i in 0..x.len() {
                g.push(delta_hidden[j] * x[i]);
            }
        }
        g.extend(&delta_hidden);
        for k in 0..y.len() {
            for j in 0..hidden.len() {
                g.push(delta_out[k] * hidden[j]);
            }
        }
        g.extend(&delta_out);
        g
    }

    pub fn params(&self) -> Vec<f64> {
        let mut copy = self.clone();
        (0..self.len()).map(|p| *copy.param_mut(p)).collect()
    }

    pub fn sample_error(&self, x: &[f64], d: &[f64]) -> f64 {
        let (_, y) = self.forward(x);
        let mut s = 0.0;
        for k in 0..y.len() {
            s += (d[k] - y[k]) * (d[k] - y[k]);
        }
        0.5 * s
    }
}

/// Double-double exponential: reduce by ln 2 and 2^-10, sum the Taylor
/// series, then square back up.
pub fn exp_dd(z: TwoFloat) -> TwoFloat {
    let k = (z.hi() / twofloat::consts::LN_2.hi()).round();
    let r = (z - twofloat::consts::LN_2 * k) * (1.0 / 1024.0);
    let mut term = TwoFloat::from(1.0);
    let mut sum = TwoFloat::from(1.0);
    for n in 1..16 {
        term = term * r / n as f64;
        sum += term;
    }
    for _ in 0..10 {
        sum = sum * sum;
    }
    sum * 2f64.powi(k as i32)
}

/// Double-double reciprocal by Newton refinement.
pub fn recip_dd(b: TwoFloat) -> TwoFloat {
    let one = TwoFloat::from(1.0);
    let mut q = TwoFloat::from(1.0 / b.hi());
    for _ in 0..2 {
        q += q * (one - b * q);
    }
    q
}

/// Per-pattern error evaluated in double-double arithmetic, with parameter
/// `perturb` shifted by `delta`.
fn sample_error_dd(p: &Plain, perturb: usize, delta: f64, x: &[f64], d: &[f64]) -> TwoFloat {
    let sigmoid = |z: TwoFloat| recip_dd(TwoFloat::from(1.0) + exp_dd(-z));
    let mut idx = 0usize;
    let mut param = |v: f64| {
        let t = if idx == perturb {
            TwoFloat::from(v) + delta
        } else {
            TwoFloat::from(v)
        };
        idx += 1;
        t
    };
    let h = p.b_hidden.len();
    let mut w_in = Vec::with_capacity(h);
    for row in &p.w_in {
        w_in.push(row.iter().map(|&v| param(v)).collect::<Vec<_>>());
    }
    let b_hidden: Vec<TwoFloat> = p.b_hidden.iter().map(|&v| param(v)).collect();
    let mut w_out = Vec::with_capacity(p.b_out.len());
    for row in &p.w_out {
        w_out.push(row.iter().map(|&v| param(v)).collect::<Vec<_>>());
    }
    let b_out: Vec<TwoFloat> = p.b_out.iter().map(|&v| param(v)).collect();

    let mut hidden = Vec::with_capacity(h);
    for j in 0..h {
        let mut z = b_hidden[j];
        for i in 0..x.len() {
            z += w_in[j][i] * x[i];
        }
        hidden.push(sigmoid(z));
    }
    let mut err = TwoFloat::from(0.0);
    for k in 0..b_out.len() {
        let mut z = b_out[k];
        for j in 0..h {
            z += w_out[k][j] * hidden[j];
        }
        let e = TwoFloat::from(d[k]) - sigmoid(z);
        err += e * e;
    }
    err * 0.5
}

/// Central finite-difference gradient of the per-pattern error. The two
/// error evaluations run in double-double so cancellation does not swamp
/// small components.
pub fn finite_difference_gradient(net: &Network64, x: &[f64], d: &[f64], step: f64) -> Vec<f64> {
    let base = Plain::of(net);
    (0..base.len())
        .map(|p| {
            let plus = sample_error_dd(&base, p, step, x, d);
            let minus = sample_error_dd(&base, p, -step, x, d);
            ((plus - minus) * (0.5 / step)).hi()
        })
        .collect()
}

pub fn random_vec(rng: &mut XorShift64Star, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| lo + (hi - lo) * rng.next_unit()).collect()
}
