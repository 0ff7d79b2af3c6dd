//! Parallel drivers for the Monte-Carlo estimators and the optimizer's
//! pre-scan.
//!
//! Walks are split into fixed-size blocks; each block's tally is exact
//! integer counts, so the merged result does not depend on the thread count
//! or on the order blocks finish in.

use bloch_core::mapping::{self, BoundResult};
use bloch_core::optimize::{self, OptimizationReport};
use bloch_core::symcheck::{CirclePartition, HarmonicEstimate, SlitFamily, Tally, TwoSided, Walker, MIN_WALKS};
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Environment variable capping the worker count; `0` means one per core.
pub const THREADS_ENV: &str = "BLOCH_THREADS";

const BLOCK: u64 = 4096;

/// Worker count requested through [`THREADS_ENV`]; `0` when unset.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("{THREADS_ENV} must be a non-negative integer, got {s:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::Invalid(format!("{THREADS_ENV}: {e}"))),
    }
}

/// Run `f` on a pool of `threads` workers (`0` = one per core).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Tally walks `0..walks` in parallel blocks.
pub fn tally(walker: &Walker<'_>, walks: u64) -> Result<Tally> {
    let blocks = walks.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| walker.tally_range(b * BLOCK..((b + 1) * BLOCK).min(walks)))
        .try_reduce(
            || walker.empty_tally(),
            |mut a, b| {
                a.merge(&b);
                Ok(a)
            },
        )
        .map_err(CliError::from)
}

fn check_walks(walks: u64) -> Result<()> {
    if walks < MIN_WALKS {
        return Err(CliError::Invalid(format!("walks must be at least {MIN_WALKS}, got {walks}")));
    }
    Ok(())
}

/// Parallel counterpart of [`bloch_core::symcheck::hm_estimate`]; identical results.
pub fn hm_estimate(
    family: &SlitFamily,
    partition: &CirclePartition,
    walks: u64,
    seed: u64,
) -> Result<Vec<HarmonicEstimate>> {
    check_walks(walks)?;
    let walker = Walker::new(family, partition.clone(), seed);
    Ok(tally(&walker, walks)?.estimates(seed))
}

/// Whole-circle and per-arc estimates plus both sides of every arc, from one run.
pub fn full_run(family: &SlitFamily, walks: u64, seed: u64) -> Result<(Vec<HarmonicEstimate>, Vec<TwoSided>)> {
    check_walks(walks)?;
    let walker = Walker::new(family, CirclePartition::whole(), seed);
    let t = tally(&walker, walks)?;
    let sides = (0..family.len()).map(|i| t.two_sided(i, seed)).collect();
    Ok((t.estimates(seed), sides))
}

pub fn bound_scan(rs: &[f64]) -> bloch_core::Result<Vec<BoundResult>> {
    rs.par_iter().map(|&r| mapping::bound(r)).collect()
}

/// [`optimize::minimize_bound`] with the pre-scan evaluated in parallel.
pub fn minimize_bound(r_min: f64, r_max: f64, tol: f64) -> Result<OptimizationReport> {
    Ok(optimize::minimize_bound_with(r_min, r_max, tol, bound_scan)?)
}
