use std::io::Write;

use serde::Serialize;

use super::{search, Decomposition, SearchConfig, SearchReport};
use crate::error::{Error, Result};
use crate::field::odd_primes_in;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoDecomposition,
    Found,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NoDecomposition => "no-decomposition",
            Verdict::Found => "FOUND",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RangeRow {
    pub p: u32,
    pub verdict: Verdict,
    pub nodes: u64,
    pub seconds: f64,
    /// Present only for `Found`.
    pub witness: Option<Decomposition>,
    pub report: SearchReport,
}

/// Runs [`search`] for every odd prime in `[p_min, p_max]`, taking every
/// field except the modulus from `template`.
pub fn verify_conjecture_range(
    p_min: u64,
    p_max: u64,
    template: &SearchConfig,
) -> Result<Vec<RangeRow>> {
    if p_min > p_max {
        return Err(Error::InvalidArgument(format!(
            "empty range {p_min}..{p_max}"
        )));
    }
    odd_primes_in(p_min, p_max)
        .into_iter()
        .map(|p| {
            let cfg = SearchConfig {
                modulus: p,
                ..template.clone()
            };
            let report = search(&cfg)?;
            let verdict = if report.found() {
                Verdict::Found
            } else if report.exhaustive {
                Verdict::NoDecomposition
            } else {
                Verdict::Inconclusive
            };
            Ok(RangeRow {
                p: p.get(),
                verdict,
                nodes: report.nodes_explored,
                seconds: report.seconds,
                witness: report.decompositions_found.first().cloned(),
                report,
            })
        })
        .collect()
}

/// CSV summary `p,verdict,nodes,seconds`. Timings are machine dependent,
/// so the column is left empty unless `timing` is set.
pub fn write_range_csv<W: Write>(rows: &[RangeRow], timing: bool, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "verdict", "nodes", "seconds"])?;
    for r in rows {
        let secs = if timing {
            format!("{:.6}", r.seconds)
        } else {
            String::new()
        };
        w.write_record([
            r.p.to_string(),
            r.verdict.as_str().to_string(),
            r.nodes.to_string(),
            secs,
        ])?;
    }
    w.flush()?;
    Ok(())
}
