//! Least-squares estimate of the hash power exponent from observed shares.
//!
//! Each sample fixes the competitors' demands, varies one miner's demand and
//! records the share of blocks it mined. The exponent minimizing the squared
//! error between observed and predicted shares is located by a uniform grid
//! scan followed by golden-section refinement around the best grid point.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Default search interval for the exponent.
pub const DEFAULT_INTERVAL: (f64, f64) = (0.1, 5.0);

/// Column names a sample file must start with; every further column is a
/// competitor demand.
pub const SAMPLE_COLUMNS: [&str; 2] = ["varied_demand", "observed_gamma"];

const GRID_POINTS: usize = 257;
const ALPHA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashPowerSample<T> {
    pub varied_demand: T,
    pub fixed_demands: Vec<T>,
    pub observed_gamma: T,
}

impl<T: Scalar> HashPowerSample<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |d: T| d.is_finite() && d > T::zero();
        if !positive(self.varied_demand) {
            return Err(invalid(
                "varied_demand",
                self.varied_demand,
                "must be positive",
            ));
        }
        if self.fixed_demands.is_empty() {
            return Err(invalid(
                "fixed_demands",
                "[]",
                "needs at least one competitor",
            ));
        }
        if let Some(&d) = self.fixed_demands.iter().find(|&&d| !positive(d)) {
            return Err(invalid("fixed_demands", d, "must be positive"));
        }
        if !(self.observed_gamma > T::zero() && self.observed_gamma < T::one()) {
            return Err(invalid(
                "observed_gamma",
                self.observed_gamma,
                "must lie in (0, 1)",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaFit<T> {
    pub alpha: T,
    /// Sum of squared share errors at `alpha`.
    pub sse: T,
    /// Set when the objective is flat over the whole interval; `alpha` is then `lo`.
    pub degenerate: bool,
}

/// Share of the varied miner: `d^a / (d^a + sum f_k^a)`.
pub fn predict_gamma<T: Scalar>(sample: &HashPowerSample<T>, alpha: T) -> T {
    let own = sample.varied_demand.powf(alpha);
    let rest = sample
        .fixed_demands
        .iter()
        .fold(T::zero(), |acc, &f| acc + f.powf(alpha));
    own / (own + rest)
}

pub fn squared_error<T: Scalar>(samples: &[HashPowerSample<T>], alpha: T) -> T {
    samples.iter().fold(T::zero(), |acc, s| {
        let e = predict_gamma(s, alpha) - s.observed_gamma;
        acc + e * e
    })
}

pub fn fit_alpha<T: Scalar>(
    samples: &[HashPowerSample<T>],
    interval: (T, T),
) -> Result<AlphaFit<T>> {
    let (lo, hi) = interval;
    if !(lo.is_finite() && lo > T::zero()) {
        return Err(invalid("lo", lo, "must be positive"));
    }
    if !(hi.is_finite() && hi > lo) {
        return Err(invalid("hi", hi, "must exceed lo"));
    }
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    for s in samples {
        s.validate()?;
    }

    let objective = |a: T| squared_error(samples, a);
    let step = (hi - lo) / T::from_count(GRID_POINTS - 1);
    let grid: Vec<(T, T)> = (0..GRID_POINTS)
        .map(|i| {
            let a = if i == GRID_POINTS - 1 {
                hi
            } else {
                lo + step * T::from_count(i)
            };
            (a, objective(a))
        })
        .collect();

    let (min_value, max_value) = grid
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(mn, mx), &(_, v)| {
            (mn.min(v), mx.max(v))
        });
    if max_value - min_value <= T::epsilon() * (T::one() + max_value) {
        return Ok(AlphaFit {
            alpha: lo,
            sse: objective(lo),
            degenerate: true,
        });
    }

    let best = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let left = grid[best.saturating_sub(1)].0;
    let right = grid[(best + 1).min(GRID_POINTS - 1)].0;
    let refined = golden_section(&objective, left, right, T::lit(ALPHA_TOLERANCE));
    let refined_value = objective(refined);

    let (alpha, sse) = if refined_value <= grid[best].1 {
        (refined, refined_value)
    } else {
        grid[best]
    };
    Ok(AlphaFit {
        alpha,
        sse,
        degenerate: false,
    })
}

/// Minimizes a unimodal `f` on `[a, b]` until the bracket is narrower than `tol`.
fn golden_section<T: Scalar>(f: &impl Fn(T) -> T, mut a: T, mut b: T, tol: T) -> T {
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    (a + b) / T::lit(2.0)
}

/// Reads samples from delimited text with a header row.
///
/// The header must begin with `varied_demand,observed_gamma`; the remaining
/// columns (any names) hold competitor demands. Rows may leave trailing
/// competitor cells empty, but each row needs at least one competitor.
pub fn read_samples<T: Scalar, R: Read>(input: R) -> Result<Vec<HashPowerSample<T>>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let header = reader.headers().map_err(|e| format_error(1, e))?.clone();
    if header.len() < 3 || header.iter().take(2).ne(SAMPLE_COLUMNS) {
        return Err(Error::SampleFormat {
            line: 1,
            reason: format!(
                "header must start with {} followed by competitor columns",
                SAMPLE_COLUMNS.join(",")
            ),
        });
    }

    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| format_error(0, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let parse = |field: &str| -> Result<T> {
            field
                .parse::<f64>()
                .map(T::lit)
                .map_err(|e| Error::SampleFormat {
                    line,
                    reason: format!("{field:?}: {e}"),
                })
        };
        let fields: Vec<&str> = record.iter().collect();
        if fields.len() < 3 {
            return Err(Error::SampleFormat {
                line,
                reason: "expected varied_demand, observed_gamma and at least one competitor".into(),
            });
        }
        let sample = HashPowerSample {
            varied_demand: parse(fields[0])?,
            observed_gamma: parse(fields[1])?,
            fixed_demands: fields[2..]
                .iter()
                .filter(|f| !f.is_empty())
                .map(|f| parse(f))
                .collect::<Result<_>>()?,
        };
        sample.validate().map_err(|e| Error::SampleFormat {
            line,
            reason: e.to_string(),
        })?;
        samples.push(sample);
    }
    Ok(samples)
}

fn format_error(line: u64, e: csv::Error) -> Error {
    let line = e.position().map_or(line, |p| p.line());
    Error::SampleFormat {
        line,
        reason: e.to_string(),
    }
}
