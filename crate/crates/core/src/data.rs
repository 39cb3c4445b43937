//! Price series ingestion, lagged instance construction and a seeded
//! regime-switching generator for synthetic test data.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::{Days, NaiveDate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Number of lagged closes in every instance.
pub const LAGS: usize = 3;

/// Closes needed for one 30-instance training set plus one prediction.
pub const MIN_RUN_LENGTH: usize = 34;

/// Largest per-step volatility accepted by [`synth_regime_series`].
pub const MAX_VOLATILITY: f64 = 0.3;

const INITIAL_PRICE: f64 = 100.0;

/// A dated sequence of strictly positive closing prices.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    symbol: String,
    dates: Vec<NaiveDate>,
    closes: Vec<f64>,
}

impl TimeSeries {
    pub fn new(symbol: impl Into<String>, dates: Vec<NaiveDate>, closes: Vec<f64>) -> Result<Self> {
        if dates.len() != closes.len() {
            return Err(Error::InvalidSeries(format!(
                "{} dates but {} closes",
                dates.len(),
                closes.len()
            )));
        }
        if let Some(i) = closes.iter().position(|c| !c.is_finite() || *c <= 0.0) {
            return Err(Error::InvalidSeries(format!(
                "close at index {i} is not a positive number: {}",
                closes[i]
            )));
        }
        if let Some(i) = dates.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSeries(format!(
                "dates not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self {
            symbol: symbol.into(),
            dates,
            closes,
        })
    }

    /// Builds a series on consecutive calendar days starting at 2000-01-01.
    pub fn from_closes(symbol: impl Into<String>, closes: Vec<f64>) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid date");
        let dates = (0..closes.len())
            .map(|i| start + Days::new(i as u64))
            .collect();
        Self::new(symbol, dates, closes)
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn closes(&self) -> &[f64] {
        &self.closes
    }

    pub fn len(&self) -> usize {
        self.closes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closes.is_empty()
    }

    /// Writes the series as a two-column `Date,Close` CSV file.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
            writeln!(out, "Date,Close")?;
            for (d, c) in self.dates.iter().zip(&self.closes) {
                writeln!(out, "{},{}", d.format("%Y-%m-%d"), c)?;
            }
            out.flush()
        };
        write(&mut out).map_err(|e| Error::io(path, e))
    }
}

/// Result of [`load_csv`]: the series plus the file rows skipped for a
/// missing price.
#[derive(Debug, Clone)]
pub struct CsvLoad {
    pub series: TimeSeries,
    pub skipped_rows: Vec<usize>,
}

impl CsvLoad {
    pub fn warning_count(&self) -> usize {
        self.skipped_rows.len()
    }
}

/// Loads a finance-portal style CSV (`Date,Open,High,Low,Close,...`).
///
/// Rows whose price cell is empty or `null` are skipped and reported in
/// [`CsvLoad::skipped_rows`] by file line number. A non-positive or
/// unparsable price is an error naming the offending line.
pub fn load_csv(path: impl AsRef<Path>, column: &str) -> Result<CsvLoad> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = reader.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let date_idx = find("Date").ok_or_else(|| Error::MissingColumn("Date".into()))?;
    let price_idx = find(column).ok_or_else(|| Error::MissingColumn(column.into()))?;

    let mut dates = Vec::new();
    let mut closes = Vec::new();
    let mut skipped_rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let price = record.get(price_idx).unwrap_or("");
        if price.is_empty() || price.eq_ignore_ascii_case("null") {
            skipped_rows.push(row);
            continue;
        }
        let price: f64 = price.parse().map_err(|_| Error::BadRow {
            row,
            reason: format!("unparsable price {price:?}"),
        })?;
        if !price.is_finite() || price <= 0.0 {
            return Err(Error::BadRow {
                row,
                reason: format!("non-positive price {price}"),
            });
        }
        let raw_date = record.get(date_idx).unwrap_or("");
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d").map_err(|_| Error::BadRow {
            row,
            reason: format!("bad date {raw_date:?}"),
        })?;
        if dates.last().is_some_and(|last| *last >= date) {
            return Err(Error::BadRow {
                row,
                reason: format!("date {date} not after previous row"),
            });
        }
        dates.push(date);
        closes.push(price);
    }
    if closes.len() < MIN_RUN_LENGTH {
        return Err(Error::TooFewRows {
            found: closes.len(),
            required: MIN_RUN_LENGTH,
        });
    }
    let symbol = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(CsvLoad {
        series: TimeSeries::new(symbol, dates, closes)?,
        skipped_rows,
    })
}

/// Three lagged closes predicting the close at index `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instance {
    pub features: [f64; LAGS],
    pub target: f64,
    pub t: usize,
}

/// Unrolls the series into `len - 3` lagged instances; instance `i` has
/// `t = i + 3`.
pub fn make_instances(ts: &TimeSeries) -> Vec<Instance> {
    ts.closes()
        .windows(LAGS + 1)
        .enumerate()
        .map(|(i, w)| Instance {
            features: [w[0], w[1], w[2]],
            target: w[LAGS],
            t: i + LAGS,
        })
        .collect()
}

/// One regime of the synthetic generator: per-step drift and volatility
/// held for `length` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub length: usize,
    pub drift: f64,
    pub volatility: f64,
}

impl Segment {
    pub fn new(length: usize, drift: f64, volatility: f64) -> Self {
        Self {
            length,
            drift,
            volatility,
        }
    }
}

/// A generated series with its ground-truth regime labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSeries {
    pub series: TimeSeries,
    /// Segment id of every point.
    pub segment_ids: Vec<usize>,
    /// First index of every segment after the first.
    pub change_points: Vec<usize>,
}

impl SyntheticSeries {
    /// Writes the `index,segment` sidecar table.
    pub fn write_segments(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
            writeln!(out, "index,segment")?;
            for (i, s) in self.segment_ids.iter().enumerate() {
                writeln!(out, "{i},{s}")?;
            }
            out.flush()
        };
        write(&mut out).map_err(|e| Error::io(path, e))
    }
}

/// Geometric random walk starting at 100 where segment `k` applies
/// `close[t+1] = close[t] * (1 + drift_k + volatility_k * z_t)`.
pub fn synth_regime_series(seed: u64, segments: &[Segment]) -> Result<SyntheticSeries> {
    if segments.is_empty() {
        return Err(Error::InvalidParameter("no segments".into()));
    }
    for (k, s) in segments.iter().enumerate() {
        if s.length == 0 {
            return Err(Error::InvalidParameter(format!(
                "segment {k} has zero length"
            )));
        }
        if !(s.volatility >= 0.0 && s.volatility <= MAX_VOLATILITY) {
            return Err(Error::InvalidParameter(format!(
                "segment {k} volatility {} outside [0, {MAX_VOLATILITY}]",
                s.volatility
            )));
        }
        if !s.drift.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "segment {k} drift is not finite"
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = segments.iter().map(|s| s.length).sum();
    let mut closes = Vec::with_capacity(total);
    let mut segment_ids = Vec::with_capacity(total);
    let mut change_points = Vec::new();
    let mut price = INITIAL_PRICE;
    for (k, s) in segments.iter().enumerate() {
        if k > 0 {
            change_points.push(closes.len());
        }
        for _ in 0..s.length {
            if !closes.is_empty() {
                let z: f64 = StandardNormal.sample(&mut rng);
                let step = 1.0 + s.drift + s.volatility * z;
                price *= step;
                if !(price > 0.0 && price.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "segment {k} produced a non-positive price at index {}",
                        closes.len()
                    )));
                }
            }
            closes.push(price);
            segment_ids.push(k);
        }
    }
    Ok(SyntheticSeries {
        series: TimeSeries::from_closes(format!("SYNTH{seed}"), closes)?,
        segment_ids,
        change_points,
    })
}

/// Parses `length:drift:volatility` triples separated by commas.
pub fn parse_segments(text: &str) -> Result<Vec<Segment>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|part| {
            let fields: Vec<&str> = part.split(':').map(str::trim).collect();
            let bad = || {
                Error::InvalidParameter(format!(
                    "bad segment {part:?}, want length:drift:volatility"
                ))
            };
            if fields.len() != 3 {
                return Err(bad());
            }
            Ok(Segment {
                length: fields[0].parse().map_err(|_| bad())?,
                drift: fields[1].parse().map_err(|_| bad())?,
                volatility: fields[2].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}
