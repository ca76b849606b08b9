//! Reading one numeric column of a delimited text file into a sample.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use crate::ustat::SortedSample;

/// Which column holds the observations: a 1-based position or a header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl Default for ColumnSelector {
    fn default() -> Self {
        ColumnSelector::Index(1)
    }
}

impl FromStr for ColumnSelector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.parse::<usize>() {
            Ok(0) => Err("column positions start at 1".into()),
            Ok(i) => Ok(ColumnSelector::Index(i)),
            Err(_) if s.is_empty() => Err("empty column selector".into()),
            Err(_) => Ok(ColumnSelector::Name(s.to_string())),
        }
    }
}

impl fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSelector::Index(i) => write!(f, "{i}"),
            ColumnSelector::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum HeaderMode {
    /// Treat the first row as a header when its selected field is not a number.
    #[default]
    Auto,
    Yes,
    No,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestSpec {
    pub column: ColumnSelector,
    pub delimiter: u8,
    pub header: HeaderMode,
    /// Keep only values `≥ min` (applied before rescaling).
    pub min: Option<f64>,
    /// Divide every kept value by this.
    pub divisor: f64,
}

impl Default for IngestSpec {
    fn default() -> Self {
        IngestSpec {
            column: ColumnSelector::default(),
            delimiter: b',',
            header: HeaderMode::Auto,
            min: None,
            divisor: 1.0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("read: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Csv(#[from] csv::Error),
    #[error("column: no column named `{0}` in the header")]
    UnknownColumn(String),
    #[error("column: a column name needs a header row")]
    NameWithoutHeader,
    #[error("column: line {line} has no field {column}")]
    MissingField { line: u64, column: usize },
    #[error("parse: line {line}: `{value}` is not a number")]
    NotNumeric { line: u64, value: String },
    #[error("filter: no observations left (read {read}, kept {kept})")]
    Empty { read: usize, kept: usize },
    #[error("rescale: divisor must be positive and finite, got {0}")]
    BadDivisor(f64),
    #[error("sample: {0}")]
    Sample(#[from] crate::error::Error),
}

/// Parses the delimiter argument: a single byte, or `tab`.
pub fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        "space" => Ok(b' '),
        _ if s.len() == 1 => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter must be a single character or `tab`, got `{s}`")),
    }
}

/// Reads the selected column, skipping empty fields, then filters and rescales.
pub fn read_sample<R: Read>(reader: R, spec: &IngestSpec) -> Result<SortedSample, IngestError> {
    if !(spec.divisor.is_finite() && spec.divisor > 0.0) {
        return Err(IngestError::BadDivisor(spec.divisor));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let mut values = Vec::new();
    let mut index = match &spec.column {
        ColumnSelector::Index(i) => Some(i - 1),
        ColumnSelector::Name(_) => None,
    };
    let mut first = true;
    while let Some(record) = records.next() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if first {
            first = false;
            let is_header = match (&spec.column, spec.header) {
                (ColumnSelector::Name(name), HeaderMode::Yes | HeaderMode::Auto) => {
                    index = Some(
                        record
                            .iter()
                            .position(|f| f == name)
                            .ok_or_else(|| IngestError::UnknownColumn(name.clone()))?,
                    );
                    true
                }
                (ColumnSelector::Name(_), HeaderMode::No) => return Err(IngestError::NameWithoutHeader),
                (ColumnSelector::Index(_), HeaderMode::Yes) => true,
                (ColumnSelector::Index(_), HeaderMode::No) => false,
                (ColumnSelector::Index(i), HeaderMode::Auto) => record
                    .get(i - 1)
                    .is_some_and(|f| !f.is_empty() && f.parse::<f64>().is_err()),
            };
            if is_header {
                continue;
            }
        }
        let col = index.expect("resolved on the first row");
        if record.len() == 1 && record.get(0) == Some("") {
            continue; // blank line
        }
        let field = record.get(col).ok_or(IngestError::MissingField {
            line,
            column: col + 1,
        })?;
        if field.is_empty() {
            continue;
        }
        let value: f64 = field.parse().map_err(|_| IngestError::NotNumeric {
            line,
            value: field.to_string(),
        })?;
        values.push(value);
    }
    let read = values.len();
    if let Some(c) = spec.min {
        values.retain(|&x| x >= c);
    }
    if values.len() < 2 {
        return Err(IngestError::Empty {
            read,
            kept: values.len(),
        });
    }
    for x in &mut values {
        *x /= spec.divisor;
    }
    Ok(SortedSample::new(values)?)
}
