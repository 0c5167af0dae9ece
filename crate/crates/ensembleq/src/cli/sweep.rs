//! N-sweeps: one CSV row per lattice resolution.
//!
//! Rows may run in parallel; row `i` of the sweep uses the seed
//! `derive_seed(master_seed, i)` (a SplitMix64 step), and output is ordered
//! by `N` regardless of completion order. A failing row aborts the sweep
//! after flushing the rows before it.

use clap::{Args, ValueEnum};
use rayon::prelude::*;

use super::{output, Format};
use crate::error::{Error, Result};
use crate::experiments::{chsh_run, si_census, CensusMode, ChshConfig, SiCensusConfig, VertexPool};
use crate::rng::derive_seed;
use crate::{parse_ratio, Rat};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepTarget {
    Chsh,
    #[value(name = "si-census")]
    SiCensus,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Which harness to sweep.
    #[arg(value_enum)]
    pub target: SweepTarget,

    /// N values: comma list `8,16,32` or geometric range `8..4096x2`.
    #[arg(long)]
    pub ns: String,

    /// Master seed; row i runs with a SplitMix64-derived child seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Candidate cap per census row.
    #[arg(long, default_value_t = 10_000)]
    pub max_candidates: usize,
}

/// Parses `8,16,32` or `8..4096x2` into a positive, strictly increasing
/// list.
pub fn parse_ns(text: &str) -> Result<Vec<u32>> {
    let text = text.trim();
    let bad = |what: &str| Error::Parse(format!("bad N range ({what}): `{text}`"));
    let values: Vec<u32> = if let Some((range, factor)) = text.split_once('x') {
        let (start, end) = range
            .split_once("..")
            .ok_or_else(|| bad("expected start..endxfactor"))?;
        let start: u32 = start.trim().parse().map_err(|_| bad("start"))?;
        let end: u32 = end.trim().parse().map_err(|_| bad("end"))?;
        let factor: u32 = factor.trim().parse().map_err(|_| bad("factor"))?;
        if factor < 2 {
            return Err(bad("factor must be at least 2"));
        }
        let mut out = Vec::new();
        let mut n = start;
        while n <= end {
            out.push(n);
            match n.checked_mul(factor) {
                Some(next) => n = next,
                None => break,
            }
        }
        out
    } else {
        text.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse().map_err(|_| bad("value")))
            .collect::<Result<_>>()?
    };
    if values.is_empty() {
        return Err(Error::Config("empty N range".into()));
    }
    if values.iter().any(|&n| n == 0) {
        return Err(Error::Config("N values must be positive".into()));
    }
    if !values.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Config("N values must be strictly increasing".into()));
    }
    Ok(values)
}

struct RowSpec {
    header: &'static [&'static str],
    run: Box<dyn Fn(u32, u64) -> Result<Vec<String>> + Sync + Send>,
}

fn row_spec(args: &SweepArgs) -> RowSpec {
    match args.target {
        SweepTarget::Chsh => RowSpec {
            header: &["n", "seed", "s", "s_continuum", "s_discretization_error"],
            run: Box::new(|n, seed| {
                let record = chsh_run(&ChshConfig::optimal(n, seed)?)?;
                Ok(vec![
                    n.to_string(),
                    seed.to_string(),
                    record.stat_as_f64("s").unwrap_or(f64::NAN).to_string(),
                    record
                        .stat_as_f64("s_continuum")
                        .unwrap_or(f64::NAN)
                        .to_string(),
                    record
                        .stat_as_f64("s_discretization_error")
                        .unwrap_or(f64::NAN)
                        .to_string(),
                ])
            }),
        },
        SweepTarget::SiCensus => {
            let cap = args.max_candidates;
            RowSpec {
                header: &[
                    "n",
                    "seed",
                    "count_x0y0",
                    "count_x0y1",
                    "count_x1y0",
                    "count_x1y1_admissible",
                ],
                run: Box::new(move |n, seed| {
                    let record = si_census(&SiCensusConfig {
                        params: crate::bits::EnsembleParams::new(n, 0)?,
                        mode: CensusMode::Chsh4,
                        alice: [Rat::new(0, 1), parse_ratio("1/8")?],
                        bob: [parse_ratio("1/16")?, parse_ratio("3/16")?],
                        epsilon: parse_ratio("1/64")?,
                        pool: VertexPool {
                            max_denominator: 13,
                            exceptions_only: false,
                        },
                        max_candidates: cap,
                        seed,
                    })?;
                    let grab = |k: &str| {
                        record
                            .statistics
                            .get(k)
                            .and_then(serde_json::Value::as_i64)
                            .unwrap_or(-1)
                            .to_string()
                    };
                    Ok(vec![
                        n.to_string(),
                        seed.to_string(),
                        grab("count_x0y0"),
                        grab("count_x0y1"),
                        grab("count_x1y0"),
                        grab("count_x1y1_admissible"),
                    ])
                }),
            }
        }
    }
}

pub fn run_sweep(args: &SweepArgs, format: Format, out: Option<&std::path::Path>) -> Result<()> {
    if format == Format::Text {
        return Err(Error::Config(
            "sweep emits CSV; use --format csv or json".into(),
        ));
    }
    let ns = parse_ns(&args.ns)?;
    let spec = row_spec(args);

    let mut results: Vec<(u32, Result<Vec<String>>)> = ns
        .par_iter()
        .enumerate()
        .map(|(i, &n)| (n, (spec.run)(n, derive_seed(args.seed, i as u64))))
        .collect();
    results.sort_by_key(|(n, _)| *n);

    let mut table = String::new();
    table.push_str(&spec.header.join(","));
    table.push('\n');
    let mut failure: Option<Error> = None;
    for (n, row) in results {
        match row {
            Ok(cells) => {
                table.push_str(&cells.join(","));
                table.push('\n');
            }
            Err(err) => {
                failure = Some(match err {
                    Error::NoCandidate(m) => Error::NoCandidate(format!("row N = {n}: {m}")),
                    Error::Config(m) => Error::Config(format!("row N = {n}: {m}")),
                    other => other,
                });
                break;
            }
        }
    }
    // Flush whatever completed before a failure, then report it.
    output::write_rendered(&table, out)?;
    match failure {
        Some(err) => Err(err),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ns_parsing() {
        assert_eq!(parse_ns("8,16,32").unwrap(), vec![8, 16, 32]);
        assert_eq!(parse_ns("8..64x2").unwrap(), vec![8, 16, 32, 64]);
        assert_eq!(parse_ns("8..100x3").unwrap(), vec![8, 24, 72]);
        assert!(parse_ns("").is_err());
        assert!(parse_ns("16,8").is_err());
        assert!(parse_ns("0,8").is_err());
        assert!(parse_ns("8..64x1").is_err());
    }
}
