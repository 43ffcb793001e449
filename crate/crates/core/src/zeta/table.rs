//! Zero records, zero sets and the plain-text zero table format.
//!
//! ```text
//! # comment lines start with '#'
//! 14.134725142
//! 21.022039639 0.5
//! # complete_to 100
//! ```
//!
//! One ordinate per data line, optionally followed by the real part.
//! Ordinates must be strictly ascending.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroSource {
    Computed,
    Imported,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRecord {
    pub ordinate: f64,
    pub real_part: f64,
    pub multiplicity: u32,
    /// Radius of the interval known to contain the ordinate.
    pub precision: f64,
    pub source: ZeroSource,
}

impl ZeroRecord {
    pub fn on_line(ordinate: f64, precision: f64, source: ZeroSource) -> Self {
        ZeroRecord {
            ordinate,
            real_part: 0.5,
            multiplicity: 1,
            precision,
            source,
        }
    }

    pub fn rho(&self) -> Complex64 {
        Complex64::new(self.real_part, self.ordinate)
    }
}

/// A zero together with its multiplicity, as seen by the formula code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPoint {
    pub rho: Complex64,
    pub multiplicity: u32,
}

/// Ordered zeros with positive ordinates, complete on
/// `[complete_from, complete_to]`.
///
/// Only `γ > 0` is stored. [`ZeroSet::points`] adds the conjugates (and,
/// for zeros off the critical line, the reflections `1 − ρ̄`).
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    records: Vec<ZeroRecord>,
    complete_from: f64,
    complete_to: f64,
}

/// Below this height there are no zeros, so completeness from here means
/// completeness from 0.
pub const FIRST_ZERO_FLOOR: f64 = 14.0;

impl ZeroSet {
    pub fn new(records: Vec<ZeroRecord>, complete_from: f64, complete_to: f64) -> Result<Self> {
        for (k, w) in records.windows(2).enumerate() {
            if !(w[1].ordinate > w[0].ordinate) {
                return Err(Error::Monotonicity {
                    line: k + 2,
                    value: w[1].ordinate.to_string(),
                });
            }
        }
        for r in &records {
            if !(r.ordinate > 0.0) || r.multiplicity == 0 || !(r.precision > 0.0) {
                return Err(Error::domain("zero record", format!("{r:?}")));
            }
        }
        let complete_from = if complete_from <= FIRST_ZERO_FLOOR {
            0.0
        } else {
            complete_from
        };
        Ok(ZeroSet {
            records,
            complete_from,
            complete_to,
        })
    }

    pub fn empty(complete_from: f64, complete_to: f64) -> Self {
        ZeroSet {
            records: Vec::new(),
            complete_from,
            complete_to,
        }
    }

    pub fn records(&self) -> &[ZeroRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn complete_from(&self) -> f64 {
        self.complete_from
    }

    pub fn complete_to(&self) -> f64 {
        self.complete_to
    }

    pub fn ordinates(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.ordinate).collect()
    }

    /// Records with `lo < γ < hi`.
    pub fn between(&self, lo: f64, hi: f64) -> &[ZeroRecord] {
        let a = self.records.partition_point(|r| r.ordinate <= lo);
        let b = self.records.partition_point(|r| r.ordinate < hi);
        &self.records[a..b.max(a)]
    }

    /// Records with `γ <= t`.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.records.partition_point(|r| r.ordinate <= t)
    }

    /// Checks the set is complete over ordinates in `[lo, hi]`; negative
    /// ordinates are covered through conjugation.
    pub fn require_coverage(&self, lo: f64, hi: f64) -> Result<()> {
        let need_to = hi.max(-lo);
        let need_from = if lo <= 0.0 { 0.0 } else { lo };
        if self.complete_to < need_to {
            return Err(Error::Coverage {
                needed: need_to,
                have: self.complete_to,
            });
        }
        if self.complete_from > need_from {
            return Err(Error::Coverage {
                needed: need_from,
                have: self.complete_from,
            });
        }
        Ok(())
    }

    /// Every zero in the set as a point of the complex plane, sorted by
    /// imaginary part: conjugates first, then the stored zeros.
    pub fn points(&self) -> Vec<ZeroPoint> {
        let mut upper = Vec::with_capacity(self.records.len() + 4);
        for r in &self.records {
            upper.push(ZeroPoint {
                rho: r.rho(),
                multiplicity: r.multiplicity,
            });
            if r.real_part != 0.5 {
                upper.push(ZeroPoint {
                    rho: Complex64::new(1.0 - r.real_part, r.ordinate),
                    multiplicity: r.multiplicity,
                });
            }
        }
        let mut all: Vec<ZeroPoint> = upper
            .iter()
            .rev()
            .map(|p| ZeroPoint {
                rho: p.rho.conj(),
                multiplicity: p.multiplicity,
            })
            .collect();
        all.extend(upper);
        all
    }

    /// Union with a set covering a disjoint range above this one.
    pub fn extended_with(&self, upper: &ZeroSet) -> Result<ZeroSet> {
        let mut records = self.records.clone();
        records.extend(upper.records.iter().filter(|r| r.ordinate > self.complete_to).copied());
        let to = if upper.complete_from <= self.complete_to {
            upper.complete_to.max(self.complete_to)
        } else {
            self.complete_to
        };
        ZeroSet::new(records, self.complete_from, to)
    }

    /// Returns a copy with the multiplicity of record `index` replaced.
    pub fn with_multiplicity(&self, index: usize, multiplicity: u32) -> ZeroSet {
        let mut out = self.clone();
        out.records[index].multiplicity = multiplicity;
        out
    }
}

fn decimals(token: &str) -> i32 {
    let mantissa = token.split(['e', 'E']).next().unwrap_or(token);
    let exp: i32 = token
        .split_once(['e', 'E'])
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let frac = mantissa.split_once('.').map_or(0, |(_, f)| f.len() as i32);
    frac - exp
}

/// Parses the zero-table format.
pub fn parse_zeros(text: &str) -> Result<ZeroSet> {
    let mut records = Vec::new();
    let mut complete_to = None;
    let mut complete_from = 0.0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            match (words.next(), words.next()) {
                (Some("complete_to"), Some(v)) => {
                    complete_to = Some(v.parse::<f64>().map_err(|e| Error::Parse {
                        line: line_no,
                        message: format!("bad complete_to value {v:?}: {e}"),
                    })?);
                }
                (Some("complete_from"), Some(v)) => {
                    complete_from = v.parse::<f64>().map_err(|e| Error::Parse {
                        line: line_no,
                        message: format!("bad complete_from value {v:?}: {e}"),
                    })?;
                }
                _ => {}
            }
            continue;
        }
        let mut fields = line.split_whitespace();
        let ord_tok = fields.next().unwrap_or_default();
        let ordinate: f64 = ord_tok.parse().map_err(|e| Error::Parse {
            line: line_no,
            message: format!("bad ordinate {ord_tok:?}: {e}"),
        })?;
        let real_part = match fields.next() {
            Some(tok) => tok.parse::<f64>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("bad real part {tok:?}: {e}"),
            })?,
            None => 0.5,
        };
        if let Some(extra) = fields.next() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unexpected field {extra:?}"),
            });
        }
        if !(ordinate > 0.0) || !ordinate.is_finite() || !real_part.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("ordinate must be positive and finite, got {ord_tok}"),
            });
        }
        if let Some(prev) = records.last().map(|r: &ZeroRecord| r.ordinate) {
            if ordinate <= prev {
                return Err(Error::Monotonicity {
                    line: line_no,
                    value: ord_tok.to_string(),
                });
            }
        }
        let precision = 0.5 * 10f64.powi(-decimals(ord_tok));
        records.push(ZeroRecord {
            ordinate,
            real_part,
            multiplicity: 1,
            precision,
            source: ZeroSource::Imported,
        });
    }
    let complete_to = complete_to.unwrap_or_else(|| records.last().map_or(0.0, |r| r.ordinate));
    ZeroSet::new(records, complete_from, complete_to)
}

/// Serialises a zero set in the zero-table format. Ordinates use the
/// shortest decimal that round-trips.
pub fn format_zeros(set: &ZeroSet) -> String {
    let mut out = String::new();
    out.push_str("# zeta zero ordinates, one per line: <ordinate> [<real part>]\n");
    if set.complete_from > 0.0 {
        let _ = writeln!(out, "# complete_from {}", set.complete_from);
    }
    for r in &set.records {
        if r.real_part == 0.5 {
            let _ = writeln!(out, "{}", r.ordinate);
        } else {
            let _ = writeln!(out, "{} {}", r.ordinate, r.real_part);
        }
    }
    let _ = writeln!(out, "# complete_to {}", set.complete_to);
    out
}

pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroSet> {
    parse_zeros(&fs::read_to_string(path)?)
}

pub fn store_zeros(set: &ZeroSet, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_zeros(set))?;
    Ok(())
}
