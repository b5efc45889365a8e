//! Benchmark dataset ingestion: raw comma-separated records, min-max
//! encoding and the fixed train/validation/test partition.

use std::path::{Path, PathBuf};

use log::warn;

use crate::error::{Error, Result};
use crate::kv::KeyValues;
use crate::matrix::Matrix;
use crate::rng::XorShift64Star;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetEncoding {
    /// One output unit, target 0 or 1.
    SingleUnit,
    /// One output unit per class, one-hot targets.
    OnePerClass,
}

impl std::str::FromStr for TargetEncoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single_unit" => Ok(Self::SingleUnit),
            "one_per_class" => Ok(Self::OnePerClass),
            other => Err(Error::Schema(format!("unknown encoding `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissingPolicy {
    /// Replace a missing attribute by the mean of that column's present values.
    AttributeMean,
    Reject,
}

impl std::str::FromStr for MissingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "attribute_mean" => Ok(Self::AttributeMean),
            "reject" => Ok(Self::Reject),
            other => Err(Error::Schema(format!("unknown missing-value policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train: usize,
    pub valid: usize,
    pub test: usize,
}

impl SplitSpec {
    pub fn total(&self) -> usize {
        self.train + self.valid + self.test
    }
}

impl std::str::FromStr for SplitSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| Error::Schema(format!("bad split `{s}`")))?;
        match parts[..] {
            [train, valid, test] => Ok(Self { train, valid, test }),
            _ => Err(Error::Schema(format!("split needs three counts, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitOrder {
    FileOrder,
    SeededShuffle(u64),
}

impl std::fmt::Display for SplitOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SplitOrder::FileOrder => write!(f, "file"),
            SplitOrder::SeededShuffle(seed) => write!(f, "shuffle({seed})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSchema {
    pub name: String,
    /// Data file name, relative to the schema file.
    pub file: Option<String>,
    /// Total columns per record, including id and label.
    pub columns: usize,
    pub id_column: Option<usize>,
    pub label_column: usize,
    pub input_attributes: usize,
    pub output_units: usize,
    pub output_classes: usize,
    pub encoding: TargetEncoding,
    /// Raw label tokens per class, in class-index order.
    pub classes: Vec<Vec<String>>,
    pub missing: MissingPolicy,
    pub missing_marker: String,
    pub split: SplitSpec,
}

const BUILTIN_SCHEMAS: [(&str, &str); 4] = [
    ("cancer", include_str!("../../../data/cancer.schema")),
    ("cancer1", include_str!("../../../data/cancer1.schema")),
    ("heart", include_str!("../../../data/heart.schema")),
    ("diabetes", include_str!("../../../data/diabetes.schema")),
];

impl DatasetSchema {
    pub fn parse(text: &str, source: impl Into<PathBuf>) -> Result<Self> {
        let kv = KeyValues::parse(text, source)?;
        let classes = kv
            .require_str("classes")?
            .split(';')
            .map(|c| c.split('|').map(|t| t.trim().to_string()).collect())
            .collect();
        let schema = Self {
            name: kv.require_str("name")?.to_string(),
            file: kv.get_str("file").map(str::to_string),
            columns: kv.require("columns")?,
            id_column: kv.get("id_column")?,
            label_column: kv.require("label_column")?,
            input_attributes: kv.require("input_attributes")?,
            output_units: kv.require("output_units")?,
            output_classes: kv.require("output_classes")?,
            encoding: kv.require_str("encoding")?.parse()?,
            classes,
            missing: kv.get_str("missing").unwrap_or("attribute_mean").parse()?,
            missing_marker: kv.get_str("missing_marker").unwrap_or("?").to_string(),
            split: kv.require_str("split")?.parse()?,
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// One of the bundled schemas: `cancer`, `cancer1`, `heart`, `diabetes`.
    pub fn builtin(name: &str) -> Option<Self> {
        BUILTIN_SCHEMAS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(n, text)| Self::parse(text, format!("<builtin {n}>")).expect("bundled schema is valid"))
    }

    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTIN_SCHEMAS.iter().map(|(n, _)| *n)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Schema(format!("{}: {m}", self.name)));
        let reserved = 1 + usize::from(self.id_column.is_some());
        if self.columns < reserved + 1 || self.input_attributes != self.columns - reserved {
            return fail(format!(
                "{} columns with label{} leave {} attributes, schema declares {}",
                self.columns,
                if self.id_column.is_some() { " and id" } else { "" },
                self.columns.saturating_sub(reserved),
                self.input_attributes
            ));
        }
        if self.label_column >= self.columns
            || self
                .id_column
                .is_some_and(|c| c >= self.columns || c == self.label_column)
        {
            return fail("label/id column out of range".into());
        }
        if self.classes.len() != self.output_classes || self.output_classes < 2 {
            return fail(format!(
                "{} class label groups for {} output classes",
                self.classes.len(),
                self.output_classes
            ));
        }
        match self.encoding {
            TargetEncoding::SingleUnit if self.output_units != 1 || self.output_classes != 2 => {
                fail("single_unit encoding needs 1 output unit and 2 classes".into())
            }
            TargetEncoding::OnePerClass if self.output_units != self.output_classes => {
                fail("one_per_class encoding needs one output unit per class".into())
            }
            _ => Ok(()),
        }
    }

    fn class_of(&self, token: &str) -> Option<usize> {
        let numeric = token.parse::<f64>().ok();
        self.classes.iter().position(|group| {
            group
                .iter()
                .any(|t| t == token || matches!((numeric, t.parse::<f64>()), (Some(a), Ok(b)) if a == b))
        })
    }

    fn attribute_columns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.columns).filter(move |&c| c != self.label_column && Some(c) != self.id_column)
    }
}

/// One parsed record after missing-value handling.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    /// 1-based line number in the source file.
    pub line: usize,
    pub attributes: Vec<f64>,
    pub class: usize,
}

pub fn load_raw(path: &Path, schema: &DatasetSchema) -> Result<Vec<RawRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_raw(&text, path, schema)
}

/// Parses comma-separated records; `source` only labels error messages.
pub fn parse_raw(text: &str, source: &Path, schema: &DatasetSchema) -> Result<Vec<RawRecord>> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: source.to_path_buf(),
        line,
        message,
    };
    let mut rows: Vec<(usize, Vec<Option<f64>>, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() != schema.columns {
            return Err(Error::Schema(format!(
                "{}:{line}: expected {} columns, found {}",
                source.display(),
                schema.columns,
                fields.len()
            )));
        }
        let label = fields[schema.label_column];
        let class = schema
            .class_of(label)
            .ok_or_else(|| parse_err(line, format!("unknown class label `{label}`")))?;
        let mut attributes = Vec::with_capacity(schema.input_attributes);
        for c in schema.attribute_columns() {
            let field = fields[c];
            if field == schema.missing_marker {
                if schema.missing == MissingPolicy::Reject {
                    return Err(parse_err(line, format!("missing value in column {c}")));
                }
                attributes.push(None);
                continue;
            }
            let value: f64 = field
                .parse()
                .map_err(|_| parse_err(line, format!("column {c}: `{field}` is not a number")))?;
            if !value.is_finite() {
                return Err(parse_err(line, format!("column {c}: non-finite value")));
            }
            attributes.push(Some(value));
        }
        rows.push((line, attributes, class));
    }
    if rows.is_empty() {
        return Err(Error::Input(format!("{}: no records", source.display())));
    }

    let means: Vec<f64> = (0..schema.input_attributes)
        .map(|a| {
            let present: Vec<f64> = rows.iter().filter_map(|r| r.1[a]).collect();
            if present.is_empty() {
                0.0
            } else {
                present.iter().sum::<f64>() / present.len() as f64
            }
        })
        .collect();
    Ok(rows
        .into_iter()
        .map(|(line, attrs, class)| RawRecord {
            line,
            attributes: attrs.iter().zip(&means).map(|(v, m)| v.unwrap_or(*m)).collect(),
            class,
        })
        .collect())
}

/// Encoded patterns: inputs in `[0, 1]`, targets 0/1 or one-hot.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSet<T> {
    inputs: Matrix<T>,
    targets: Matrix<T>,
}

impl<T: Scalar> PatternSet<T> {
    pub fn new(inputs: Matrix<T>, targets: Matrix<T>) -> Result<Self> {
        if inputs.rows() == 0 {
            return Err(Error::Input("pattern set is empty".into()));
        }
        if inputs.rows() != targets.rows() {
            return Err(Error::Input(format!(
                "{} input rows but {} target rows",
                inputs.rows(),
                targets.rows()
            )));
        }
        Ok(Self { inputs, targets })
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows(inputs: &[Vec<T>], targets: &[Vec<T>]) -> Result<Self> {
        let inputs = Matrix::from_rows(inputs).ok_or_else(|| Error::Input("ragged input rows".into()))?;
        let targets = Matrix::from_rows(targets).ok_or_else(|| Error::Input("ragged target rows".into()))?;
        Self::new(inputs, targets)
    }

    pub fn len(&self) -> usize {
        self.inputs.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.targets.cols()
    }

    pub fn input(&self, n: usize) -> &[T] {
        self.inputs.row(n)
    }

    pub fn target(&self, n: usize) -> &[T] {
        self.targets.row(n)
    }

    pub fn inputs(&self) -> &Matrix<T> {
        &self.inputs
    }

    pub fn targets(&self) -> &Matrix<T> {
        &self.targets
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[T], &[T])> + '_ {
        self.inputs.iter_rows().zip(self.targets.iter_rows())
    }

    fn select(&self, indices: &[usize]) -> Result<Self> {
        let gather = |m: &Matrix<T>| {
            let data = indices.iter().flat_map(|&i| m.row(i).iter().copied()).collect();
            Matrix::from_vec(indices.len(), m.cols(), data).expect("gathered rows")
        };
        Self::new(gather(&self.inputs), gather(&self.targets))
    }
}

/// Min-max normalizes every attribute over all records and encodes labels.
///
/// A constant attribute encodes to 0.0 (with a warning).
pub fn encode<T: Scalar>(records: &[RawRecord], schema: &DatasetSchema) -> Result<PatternSet<T>> {
    let dim = schema.input_attributes;
    if records.is_empty() {
        return Err(Error::Input("no records to encode".into()));
    }
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for r in records {
        if r.attributes.len() != dim {
            return Err(Error::Schema(format!(
                "record at line {} has {} attributes, schema declares {dim}",
                r.line,
                r.attributes.len()
            )));
        }
        for (a, &v) in r.attributes.iter().enumerate() {
            lo[a] = lo[a].min(v);
            hi[a] = hi[a].max(v);
        }
    }
    for a in 0..dim {
        if lo[a] == hi[a] {
            warn!("{}: attribute {a} is constant ({}); encoded as 0", schema.name, lo[a]);
        }
    }
    let mut inputs = Matrix::zeros(records.len(), dim);
    let mut targets = Matrix::zeros(records.len(), schema.output_units);
    for (n, r) in records.iter().enumerate() {
        for (a, &v) in r.attributes.iter().enumerate() {
            let scaled = if hi[a] > lo[a] {
                (v - lo[a]) / (hi[a] - lo[a])
            } else {
                0.0
            };
            inputs.set(n, a, T::of(scaled));
        }
        if r.class >= schema.output_classes {
            return Err(Error::Schema(format!(
                "record at line {} has class {}",
                r.line, r.class
            )));
        }
        match schema.encoding {
            TargetEncoding::SingleUnit => targets.set(n, 0, T::count(r.class)),
            TargetEncoding::OnePerClass => targets.set(n, r.class, T::one()),
        }
    }
    PatternSet::new(inputs, targets)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitDataset<T> {
    pub train: PatternSet<T>,
    pub valid: PatternSet<T>,
    pub test: PatternSet<T>,
}

impl<T: Scalar> SplitDataset<T> {
    pub fn input_dim(&self) -> usize {
        self.train.input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.train.output_dim()
    }
}

/// Takes the first `train`, next `valid` and last `test` patterns of the
/// (optionally shuffled) sequence.
pub fn split<T: Scalar>(patterns: &PatternSet<T>, spec: SplitSpec, order: SplitOrder) -> Result<SplitDataset<T>> {
    if spec.total() != patterns.len() {
        return Err(Error::Config(format!(
            "split {}/{}/{} sums to {}, dataset has {} patterns",
            spec.train,
            spec.valid,
            spec.test,
            spec.total(),
            patterns.len()
        )));
    }
    if spec.train == 0 || spec.valid == 0 || spec.test == 0 {
        return Err(Error::Config("every split needs at least one pattern".into()));
    }
    let mut idx: Vec<usize> = (0..patterns.len()).collect();
    if let SplitOrder::SeededShuffle(seed) = order {
        XorShift64Star::new(seed).shuffle(&mut idx);
    }
    let (train, rest) = idx.split_at(spec.train);
    let (valid, test) = rest.split_at(spec.valid);
    Ok(SplitDataset {
        train: patterns.select(train)?,
        valid: patterns.select(valid)?,
        test: patterns.select(test)?,
    })
}

/// Loads, encodes and splits a dataset in one go.
pub fn load_dataset<T: Scalar>(path: &Path, schema: &DatasetSchema, order: SplitOrder) -> Result<SplitDataset<T>> {
    let records = load_raw(path, schema)?;
    let patterns = encode(&records, schema)?;
    split(&patterns, schema.split, order)
}
