//! Plain-text model files.
//!
//! ```text
//! mfnnca-model 1
//! <input_dim> <hidden_units> <output_dim>
//! <w_in row 0>            one line per hidden unit, input_dim values
//! ...
//! <b_hidden>              hidden_units values
//! <w_out row 0>           one line per output unit, hidden_units values
//! ...
//! <b_out>                 output_dim values
//! ```
//!
//! Values are single-space separated, printed as the shortest decimal that
//! parses back to the identical float, so a reload is bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::network::Network;
use crate::scalar::Scalar;

pub const MODEL_MAGIC: &str = "mfnnca-model";
pub const MODEL_VERSION: u32 = 1;

fn write_row<T: Scalar>(out: &mut String, values: &[T]) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(' ');
        }
        first = false;
        write!(out, "{v}").expect("write to String");
    }
    out.push('\n');
}

pub fn model_to_string<T: Scalar>(net: &Network<T>) -> String {
    let mut out = format!(
        "{MODEL_MAGIC} {MODEL_VERSION}\n{} {} {}\n",
        net.input_dim(),
        net.hidden_units(),
        net.output_dim()
    );
    for row in net.w_in().iter_rows() {
        write_row(&mut out, row);
    }
    write_row(&mut out, net.b_hidden());
    for row in net.w_out().iter_rows() {
        write_row(&mut out, row);
    }
    write_row(&mut out, net.b_out());
    out
}

pub fn model_from_str<T: Scalar>(text: &str) -> Result<Network<T>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::Load(format!("file truncated: missing {what}")))
    };

    let (_, header) = next("header")?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(MODEL_MAGIC) {
        return Err(Error::Load(format!("not a model file (header `{header}`)")));
    }
    match parts.next().map(str::parse::<u32>) {
        Some(Ok(MODEL_VERSION)) => {}
        Some(Ok(v)) => return Err(Error::Load(format!("unsupported format version {v}"))),
        _ => return Err(Error::Load(format!("bad header `{header}`"))),
    }

    let (line, dims) = next("dimensions")?;
    let dims: Vec<usize> = dims
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Load(format!("line {line}: bad dimensions `{dims}`")))?;
    let [input, hidden, output] = dims[..] else {
        return Err(Error::Load(format!("line {line}: expected three dimensions")));
    };
    if input == 0 || hidden == 0 || output == 0 {
        return Err(Error::Load(format!(
            "line {line}: dimensions must be positive, got {input} {hidden} {output}"
        )));
    }

    let mut row = |what: &str, len: usize| -> Result<Vec<T>> {
        let (line, text) = next(what)?;
        let values: Vec<T> = text
            .split_whitespace()
            .map(|t| t.parse::<T>().ok().filter(|v| v.is_finite()))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Load(format!("line {line}: invalid or non-finite value in {what}")))?;
        if values.len() != len {
            return Err(Error::Load(format!(
                "line {line}: {what} has {} values, expected {len}",
                values.len()
            )));
        }
        Ok(values)
    };

    let mut w_in = Vec::with_capacity(hidden * input);
    for _ in 0..hidden {
        w_in.extend(row("w_in row", input)?);
    }
    let b_hidden = row("b_hidden", hidden)?;
    let mut w_out = Vec::with_capacity(output * hidden);
    for _ in 0..output {
        w_out.extend(row("w_out row", hidden)?);
    }
    let b_out = row("b_out", output)?;
    if let Some((line, extra)) = lines.find(|(_, l)| !l.is_empty()) {
        return Err(Error::Load(format!(
            "line {line}: unexpected trailing content `{extra}`"
        )));
    }

    Network::from_parts(
        Matrix::from_vec(hidden, input, w_in).expect("sized"),
        b_hidden,
        Matrix::from_vec(output, hidden, w_out).expect("sized"),
        b_out,
    )
    .map_err(|e| Error::Load(e.to_string()))
}

pub fn save_model<T: Scalar>(net: &Network<T>, path: &Path) -> Result<()> {
    std::fs::write(path, model_to_string(net)).map_err(|e| Error::io(path, e))
}

pub fn load_model<T: Scalar>(path: &Path) -> Result<Network<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text).map_err(|e| match e {
        Error::Load(m) => Error::Load(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkConfig;
    use crate::rng::XorShift64Star;
    use proptest::prelude::*;

    #[test]
    fn hand_written_zero_model() {
        let net: Network<f64> = model_from_str("mfnnca-model 1\n1 1 1\n0\n0\n0\n0\n").unwrap();
        assert_eq!(net.forward(&[3.0]).unwrap().output, vec![0.5]);
    }

    #[test]
    fn rejects_bad_files() {
        let cases = [
            ("", "truncated"),
            ("other 1\n1 1 1\n0\n0\n0\n0\n", "not a model"),
            ("mfnnca-model 2\n1 1 1\n0\n0\n0\n0\n", "version"),
            ("mfnnca-model 1\n1 0 1\n\n\n0\n", "positive"),
            ("mfnnca-model 1\n1 1 1\n0\n0\n0\n", "truncated"),
            ("mfnnca-model 1\n1 1 1\n0\n0\nNaN\n0\n", "non-finite"),
            ("mfnnca-model 1\n1 1 1\n0\n0\ninf\n0\n", "non-finite"),
            ("mfnnca-model 1\n1 1 1\n0 1\n0\n0\n0\n", "expected 1"),
            ("mfnnca-model 1\n1 1 1\n0\n0\n0\n0\n7\n", "trailing"),
        ];
        for (text, needle) in cases {
            let err = model_from_str::<f64>(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn layout_is_line_per_row() {
        let net: Network<f64> = Network::init(&NetworkConfig::new(3, 2, 2)).unwrap();
        let text = model_to_string(&net);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2 + 2 + 1 + 2 + 1);
        assert_eq!(lines[1], "3 2 2");
        assert_eq!(lines[2].split(' ').count(), 3);
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(seed in any::<u64>(), i in 1usize..6, h in 1usize..6, o in 1usize..4) {
            let cfg = NetworkConfig { input_dim: i, hidden_units: h, output_dim: o, init_range: 3.0, seed };
            let net: Network<f64> = Network::init(&cfg).unwrap();
            let back: Network<f64> = model_from_str(&model_to_string(&net)).unwrap();
            prop_assert_eq!(&back, &net);
            let mut rng = XorShift64Star::new(seed ^ 1);
            for _ in 0..100 {
                let x: Vec<f64> = (0..i).map(|_| rng.next_symmetric(2.0)).collect();
                prop_assert_eq!(net.forward(&x).unwrap(), back.forward(&x).unwrap());
            }
            let net32: Network<f32> = net.cast();
            let back32: Network<f32> = model_from_str(&model_to_string(&net32)).unwrap();
            prop_assert_eq!(back32, net32);
        }
    }
}
