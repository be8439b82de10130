//! Per-curve JSON lines and the aggregate table of category percentages.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::classify::{Category, ClassificationResult};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub total: usize,
    pub counts: BTreeMap<Category, usize>,
    pub violations: usize,
}

impl Aggregate {
    pub fn from_results(results: &[ClassificationResult]) -> Self {
        let mut a = Aggregate::default();
        for c in Category::ALL {
            a.counts.insert(c, 0);
        }
        for r in results {
            a.total += 1;
            *a.counts.get_mut(&r.category).unwrap() += 1;
            a.violations += r.consistency_violation as usize;
        }
        a
    }

    /// Percentage of curves in a category; zero for an empty batch.
    pub fn percent(&self, c: Category) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * self.counts[&c] as f64 / self.total as f64
        }
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        s.push_str("category                 count  percent\n");
        for c in Category::ALL {
            s.push_str(&format!("{:<24} {:>5}  {:>6.1}%\n", format!("{c:?}"), self.counts[&c], self.percent(c)));
        }
        s.push_str(&format!("{:<24} {:>5}\n", "total", self.total));
        s
    }
}

/// Writes one JSON object per line.
pub fn write_json_lines<W: Write>(out: &mut W, results: &[ClassificationResult]) -> std::io::Result<()> {
    for r in results {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes the JSON lines and returns the aggregate.
pub fn emit_report<W: Write>(out: &mut W, results: &[ClassificationResult]) -> std::io::Result<Aggregate> {
    write_json_lines(out, results)?;
    Ok(Aggregate::from_results(results))
}
