use std::io::Write;

use serde::Serialize;

use crate::error::Result;

/// CSV header of every quotient table.
pub const QUOTIENT_CSV_HEADER: [&str; 6] = ["kind", "member_id", "t", "quotient", "numerator", "denominator"];

/// One `(member, t)` sample. `quotient` is `None` when numerator and
/// denominator both vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientRow {
    pub member_id: usize,
    pub t: Option<f64>,
    pub quotient: Option<f64>,
    pub numerator: f64,
    pub denominator: f64,
}

impl QuotientRow {
    pub fn new(member_id: usize, t: Option<f64>, numerator: f64, denominator: f64) -> Self {
        let quotient = if numerator == 0.0 && denominator == 0.0 {
            None
        } else {
            Some(numerator / denominator)
        };
        Self {
            member_id,
            t,
            quotient,
            numerator,
            denominator,
        }
    }
}

/// Measured constant of one inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientReport {
    pub kind: String,
    pub rows: Vec<QuotientRow>,
    pub sup_quotient: f64,
    /// Relative change of `sup_quotient` when the grid is refined `N → 2N`.
    pub refinement_drift: f64,
    /// Relative change of `sup_quotient` when the time window is doubled.
    pub window_drift: Option<f64>,
    /// Whether the time-outside mixed norm stayed below the blocks-outside
    /// one on every trajectory, where checked.
    pub nesting_holds: Option<bool>,
}

/// Table summary without the rows, for JSON output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientSummary {
    pub kind: String,
    pub samples: usize,
    pub skipped: usize,
    pub sup_quotient: f64,
    pub refinement_drift: f64,
    pub window_drift: Option<f64>,
    pub nesting_holds: Option<bool>,
}

pub(crate) fn sup_of(rows: &[QuotientRow]) -> f64 {
    rows.iter().filter_map(|r| r.quotient).fold(0.0, f64::max)
}

pub(crate) fn relative_drift(base: f64, other: f64) -> f64 {
    if base == other {
        0.0
    } else {
        (other - base).abs() / base.abs().max(other.abs())
    }
}

impl QuotientReport {
    /// Sorts the rows by `(member, t)` and fills in `sup_quotient`.
    pub fn new(kind: impl Into<String>, mut rows: Vec<QuotientRow>) -> Self {
        rows.sort_by(|a, b| {
            a.member_id.cmp(&b.member_id).then(
                a.t.unwrap_or(f64::NEG_INFINITY)
                    .total_cmp(&b.t.unwrap_or(f64::NEG_INFINITY)),
            )
        });
        let sup_quotient = sup_of(&rows);
        Self {
            kind: kind.into(),
            rows,
            sup_quotient,
            refinement_drift: 0.0,
            window_drift: None,
            nesting_holds: None,
        }
    }

    /// Largest quotient over the family at each sample time, ascending in `t`.
    pub fn sup_per_time(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        let mut rows: Vec<&QuotientRow> = self.rows.iter().filter(|r| r.t.is_some()).collect();
        rows.sort_by(|a, b| a.t.unwrap().total_cmp(&b.t.unwrap()));
        for r in rows {
            let t = r.t.unwrap();
            let q = r.quotient.unwrap_or(0.0);
            match out.last_mut() {
                Some(last) if last.0 == t => last.1 = last.1.max(q),
                _ => out.push((t, q)),
            }
        }
        out
    }

    pub fn skipped(&self) -> usize {
        self.rows.iter().filter(|r| r.quotient.is_none()).count()
    }

    pub fn summary(&self) -> QuotientSummary {
        QuotientSummary {
            kind: self.kind.clone(),
            samples: self.rows.len(),
            skipped: self.skipped(),
            sup_quotient: self.sup_quotient,
            refinement_drift: self.refinement_drift,
            window_drift: self.window_drift,
            nesting_holds: self.nesting_holds,
        }
    }

    /// Sup finite and both drifts below `limit`.
    pub fn is_stable(&self, limit: f64) -> bool {
        self.sup_quotient.is_finite()
            && self.refinement_drift < limit
            && self.window_drift.is_none_or(|d| d < limit)
            && self.nesting_holds != Some(false)
    }

    /// Writes the table with [`QUOTIENT_CSV_HEADER`]; absent values are empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(QUOTIENT_CSV_HEADER)?;
        for r in &self.rows {
            let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
            w.write_record([
                self.kind.clone(),
                r.member_id.to_string(),
                opt(r.t),
                opt(r.quotient),
                format!("{:e}", r.numerator),
                format!("{:e}", r.denominator),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_over_zero_is_absent() {
        let r = QuotientReport::new(
            "k",
            vec![QuotientRow::new(1, None, 0.0, 0.0), QuotientRow::new(0, None, 1.0, 4.0)],
        );
        assert_eq!(r.rows[0].member_id, 0);
        assert_eq!(r.sup_quotient, 0.25);
        assert_eq!(r.skipped(), 1);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "kind,member_id,t,quotient,numerator,denominator");
        assert_eq!(lines[2], "k,1,,,0e0,0e0");
    }

    #[test]
    fn sup_per_time_takes_family_max() {
        let rows = vec![
            QuotientRow::new(0, Some(2.0), 1.0, 1.0),
            QuotientRow::new(1, Some(2.0), 3.0, 1.0),
            QuotientRow::new(1, Some(1.0), 0.5, 1.0),
        ];
        let r = QuotientReport::new("k", rows);
        assert_eq!(r.sup_per_time(), vec![(1.0, 0.5), (2.0, 3.0)]);
        assert_eq!(relative_drift(2.0, 2.0), 0.0);
        assert!((relative_drift(1.0, 1.02) - 0.02 / 1.02).abs() < 1e-15);
    }
}
