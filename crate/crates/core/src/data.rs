//! Quarterly observations, time encoding and scale transforms.
//!
//! The canonical input is a CSV with header
//! `date,loss,total_pop,ratio,aplir,ffr,av_claims` (columns in any order,
//! ISO-8601 dates, empty string for a missing value). Rows with any missing
//! field are dropped; everything else that is malformed is an error naming the
//! offending line.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use chrono::{Datelike, NaiveDate};
use serde::Serialize;

use crate::error::{Error, Result};

pub const POP_SCALE: f64 = 1e8;
pub const CLAIMS_SCALE: f64 = 1e6;

const COLUMNS: [&str; 7] = ["date", "loss", "total_pop", "ratio", "aplir", "ffr", "av_claims"];

/// One quarterly row of raw measurements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub date: NaiveDate,
    /// Net loan losses to total average loans, percent.
    pub loss: f64,
    pub total_pop: f64,
    /// Male-to-female ratio.
    pub ratio: f64,
    pub aplir: f64,
    pub ffr: f64,
    /// Average continued claims over the prior month, persons.
    pub av_claims: f64,
}

fn is_quarter_start(d: NaiveDate) -> bool {
    d.day() == 1 && matches!(d.month(), 1 | 4 | 7 | 10)
}

fn parse_date(s: &str, line: usize) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d").map_err(|e| Error::Parse {
        line,
        message: format!("malformed date `{s}`: {e}"),
    })
}

fn parse_number(s: &str, column: &str, line: usize) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("non-numeric value `{s}` in column `{column}`"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("non-finite value `{s}` in column `{column}`"),
        });
    }
    Ok(v)
}

/// Parse the quarterly CSV into date-ordered observations.
pub fn parse_csv<R: Read>(input: R) -> Result<Vec<Observation>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let mut index = [0usize; 7];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("header is missing column `{name}`"),
        })?;
    }

    let mut by_date: BTreeMap<NaiveDate, Observation> = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let fields: Vec<&str> = index.iter().map(|&i| record.get(i).unwrap_or("")).collect();
        if fields.iter().any(|f| f.is_empty()) {
            continue;
        }
        let date = parse_date(fields[0], line)?;
        if !is_quarter_start(date) {
            return Err(Error::Parse {
                line,
                message: format!("{date} is not the first day of a quarter"),
            });
        }
        let mut vals = [0.0; 6];
        for (k, v) in vals.iter_mut().enumerate() {
            *v = parse_number(fields[k + 1], COLUMNS[k + 1], line)?;
        }
        let obs = Observation {
            date,
            loss: vals[0],
            total_pop: vals[1],
            ratio: vals[2],
            aplir: vals[3],
            ffr: vals[4],
            av_claims: vals[5],
        };
        if !(obs.total_pop > 0.0 && obs.ratio > 0.0 && obs.av_claims >= 0.0) {
            return Err(Error::Parse {
                line,
                message: "total_pop and ratio must be positive and av_claims nonnegative".into(),
            });
        }
        if by_date.insert(date, obs).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("duplicate date {date}"),
            });
        }
    }
    Ok(by_date.into_values().collect())
}

/// Mean of the non-missing values dated in the calendar month before
/// `quarter_start`.
pub fn aggregate_prior_month(daily: &[(NaiveDate, Option<f64>)], quarter_start: NaiveDate) -> Result<f64> {
    let (y, m) = prior_month(quarter_start);
    let (sum, count) = daily
        .iter()
        .filter(|(d, _)| d.year() == y && d.month() == m)
        .filter_map(|(_, v)| *v)
        .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        return Err(Error::Aggregation(format!(
            "no values in {y}-{m:02} preceding {quarter_start}"
        )));
    }
    Ok(sum / count as f64)
}

fn prior_month(d: NaiveDate) -> (i32, u32) {
    if d.month() == 1 {
        (d.year() - 1, 12)
    } else {
        (d.year(), d.month() - 1)
    }
}

/// Parse a `date,value` daily series; empty values are kept as `None`.
pub fn parse_daily_csv<R: Read>(input: R) -> Result<Vec<(NaiveDate, Option<f64>)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let find = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("header is missing column `{name}`"),
        })
    };
    let (di, vi) = (find("date")?, find("value")?);
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let date = parse_date(record.get(di).unwrap_or(""), line)?;
        let raw = record.get(vi).unwrap_or("");
        let value = if raw.is_empty() || raw == "." {
            None
        } else {
            Some(parse_number(raw, "value", line)?)
        };
        out.push((date, value));
    }
    Ok(out)
}

/// Discrete time codes: quarters since `origin` plus one, and calendar years
/// since `origin` plus one.
pub fn encode_time(date: NaiveDate, origin: NaiveDate) -> Result<(i64, i64)> {
    if date < origin {
        return Err(Error::Encoding(format!("{date} precedes origin {origin}")));
    }
    if !is_quarter_start(date) || !is_quarter_start(origin) {
        return Err(Error::Encoding(format!(
            "{date} and {origin} must both be quarter starts"
        )));
    }
    let months = (date.year() - origin.year()) as i64 * 12 + date.month() as i64 - origin.month() as i64;
    Ok((months / 3 + 1, (date.year() - origin.year()) as i64 + 1))
}

/// One transformed row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameRow {
    pub date: NaiveDate,
    pub month_index: i64,
    pub year_index: i64,
    pub adj_pop: f64,
    pub ratio: f64,
    pub aplir: f64,
    pub ffr: f64,
    pub adj_claims: f64,
    pub exp_claims: f64,
    pub loss: f64,
}

impl FrameRow {
    /// Month-of-year of the quarter start (1, 4, 7 or 10).
    pub fn calendar_month(&self) -> u32 {
        self.date.month()
    }

    pub fn calendar_year(&self) -> i32 {
        self.date.year()
    }
}

/// Regressor labels in design order (intercept excluded).
pub const REGRESSORS: [&str; 7] = ["Month", "Year", "AdjPop", "Ratio", "APLIR", "FFR", "ExpClaims"];

/// Transformed design data shared by both regression engines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelFrame {
    pub rows: Vec<FrameRow>,
    pub names: Vec<String>,
}

impl ModelFrame {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn loss(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.loss).collect()
    }

    /// Regressor column by its label in [`REGRESSORS`] (plus `AdjClaims` and `Loss`).
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let pick: fn(&FrameRow) -> f64 = match name {
            "Month" => |r| r.month_index as f64,
            "Year" => |r| r.year_index as f64,
            "AdjPop" => |r| r.adj_pop,
            "Ratio" => |r| r.ratio,
            "APLIR" => |r| r.aplir,
            "FFR" => |r| r.ffr,
            "AdjClaims" => |r| r.adj_claims,
            "ExpClaims" => |r| r.exp_claims,
            "Loss" => |r| r.loss,
            _ => return None,
        };
        Some(self.rows.iter().map(pick).collect())
    }

    /// Write the frame as CSV. Floats use the shortest representation that
    /// parses back to the same bits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(FRAME_HEADER).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.date.to_string(),
                r.month_index.to_string(),
                r.year_index.to_string(),
                r.adj_pop.to_string(),
                r.ratio.to_string(),
                r.aplir.to_string(),
                r.ffr.to_string(),
                r.adj_claims.to_string(),
                r.exp_claims.to_string(),
                r.loss.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Read a frame previously written by [`ModelFrame::write_csv`].
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Parse {
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        if headers.iter().ne(FRAME_HEADER) {
            return Err(Error::Parse {
                line: 1,
                message: "unexpected frame header".into(),
            });
        }
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Parse {
                line: 0,
                message: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let int = |i: usize| -> Result<i64> {
                record[i].parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad integer in column `{}`", FRAME_HEADER[i]),
                })
            };
            let num = |i: usize| parse_number(&record[i], FRAME_HEADER[i], line);
            rows.push(FrameRow {
                date: parse_date(&record[0], line)?,
                month_index: int(1)?,
                year_index: int(2)?,
                adj_pop: num(3)?,
                ratio: num(4)?,
                aplir: num(5)?,
                ffr: num(6)?,
                adj_claims: num(7)?,
                exp_claims: num(8)?,
                loss: num(9)?,
            });
        }
        Ok(ModelFrame {
            rows,
            names: REGRESSORS.iter().map(|s| s.to_string()).collect(),
        })
    }
}

const FRAME_HEADER: [&str; 10] = [
    "date",
    "month_index",
    "year_index",
    "adj_pop",
    "ratio",
    "aplir",
    "ffr",
    "adj_claims",
    "exp_claims",
    "loss",
];

/// Apply time encodings (origin = first date) and scale transforms.
pub fn apply_transforms(obs: &[Observation]) -> Result<ModelFrame> {
    let origin = obs
        .first()
        .ok_or_else(|| Error::domain("cannot transform an empty set of observations"))?
        .date;
    let rows = obs
        .iter()
        .map(|o| {
            let (month_index, year_index) = encode_time(o.date, origin)?;
            let adj_claims = o.av_claims / CLAIMS_SCALE;
            Ok(FrameRow {
                date: o.date,
                month_index,
                year_index,
                adj_pop: o.total_pop / POP_SCALE,
                ratio: o.ratio,
                aplir: o.aplir,
                ffr: o.ffr,
                adj_claims,
                exp_claims: adj_claims.exp(),
                loss: o.loss,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelFrame {
        rows,
        names: REGRESSORS.iter().map(|s| s.to_string()).collect(),
    })
}

/// Parse and transform in one step.
pub fn load_frame<R: Read>(input: R) -> Result<ModelFrame> {
    apply_transforms(&parse_csv(input)?)
}
