//! Classification efficiency as counted in the benchmark tables.

use crate::data::{PatternSet, TargetEncoding};
use crate::error::{Error, Result};
use crate::network::Network;
use crate::scalar::Scalar;
use crate::training::mean_squared_error;

/// Decision rule: threshold 0.5 (inclusive, toward class 1) for a single
/// unit, otherwise argmax with ties to the lowest index.
pub fn classify<T: Scalar>(output: &[T], encoding: TargetEncoding) -> usize {
    match encoding {
        TargetEncoding::SingleUnit => usize::from(output[0] >= T::of(0.5)),
        TargetEncoding::OnePerClass => {
            let mut best = 0;
            for (k, &v) in output.iter().enumerate().skip(1) {
                if v > output[best] {
                    best = k;
                }
            }
            best
        }
    }
}

pub fn efficiency_percent(classified: usize, total: usize) -> f64 {
    100.0 * classified as f64 / total as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult<T> {
    pub split_name: String,
    pub classified: usize,
    pub total: usize,
    pub efficiency_percent: f64,
    pub ms_error: T,
}

pub fn evaluate<T: Scalar>(
    net: &Network<T>,
    split: &PatternSet<T>,
    encoding: TargetEncoding,
    split_name: &str,
) -> Result<EvalResult<T>> {
    let ms_error = mean_squared_error(net, split)?;
    let mut classified = 0;
    for (x, d) in split.iter() {
        let y = net.forward(x)?.output;
        if classify(&y, encoding) == classify(d, encoding) {
            classified += 1;
        }
    }
    Ok(EvalResult {
        split_name: split_name.to_string(),
        classified,
        total: split.len(),
        efficiency_percent: efficiency_percent(classified, split.len()),
        ms_error,
    })
}

/// Pooled accuracy: total correct over total patterns across the splits.
pub fn overall_efficiency<T>(results: &[EvalResult<T>]) -> Result<f64> {
    let (hit, total) = results.iter().fold((0, 0), |(h, t), r| (h + r.classified, t + r.total));
    if total == 0 {
        return Err(Error::Input("overall efficiency over zero patterns".into()));
    }
    Ok(efficiency_percent(hit, total))
}
