//! One-dimensional minimization of `bound(R)`.
//!
//! A uniform pre-scan brackets the minimum (no global unimodality is
//! assumed), then golden-section search shrinks the bracket to `tol`.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // only needed where core lacks inherent float math
use num_traits::Float;

use crate::mapping::{self, BoundResult};
use crate::{Error, Result};

pub const PRESCAN_SAMPLES: usize = 50;
/// Default search window.
pub const DEFAULT_WINDOW: (f64, f64) = (3.7, 4.4);
pub const MIN_TOL: f64 = 1e-9;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// One evaluation of the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub r: f64,
    pub bound: f64,
    pub alpha: f64,
    pub c: f64,
    pub capacity: f64,
}

impl From<&BoundResult> for Sample {
    fn from(b: &BoundResult) -> Self {
        Sample {
            r: b.r,
            bound: b.bound,
            alpha: b.alpha,
            c: b.c,
            capacity: b.capacity,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationReport {
    pub r_star: f64,
    pub bound_star: f64,
    pub evaluations: usize,
    /// Final golden-section bracket.
    pub bracket: (f64, f64),
    /// Every evaluation in the order performed: pre-scan first.
    pub history: Vec<Sample>,
}

fn validate(r_min: f64, r_max: f64, tol: f64) -> Result<()> {
    if !(r_min > 3.0 && r_min <= r_max && r_max <= 4.5) {
        return Err(Error::InvalidConfiguration(format!(
            "need 3 < r_min <= r_max <= 4.5, got [{r_min}, {r_max}]"
        )));
    }
    if !(tol >= MIN_TOL) {
        return Err(Error::domain("tol", tol, ">= 1e-9"));
    }
    Ok(())
}

/// Pre-scan abscissae for `[r_min, r_max]`.
pub fn prescan_points(r_min: f64, r_max: f64) -> Vec<f64> {
    let n = PRESCAN_SAMPLES;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                r_max
            } else {
                r_min + (r_max - r_min) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

pub fn minimize_bound(r_min: f64, r_max: f64, tol: f64) -> Result<OptimizationReport> {
    minimize_bound_with(r_min, r_max, tol, |rs| {
        rs.iter().map(|&r| mapping::bound(r)).collect()
    })
}

/// As [`minimize_bound`], with the pre-scan evaluations delegated to `scan`
/// (which must return one result per abscissa, in order).
pub fn minimize_bound_with<S>(r_min: f64, r_max: f64, tol: f64, scan: S) -> Result<OptimizationReport>
where
    S: FnOnce(&[f64]) -> Result<Vec<BoundResult>>,
{
    validate(r_min, r_max, tol)?;
    if r_min == r_max {
        let b = mapping::bound(r_min)?;
        return Ok(OptimizationReport {
            r_star: r_min,
            bound_star: b.bound,
            evaluations: 1,
            bracket: (r_min, r_max),
            history: alloc::vec![Sample::from(&b)],
        });
    }

    let xs = prescan_points(r_min, r_max);
    let scanned = scan(&xs)?;
    if scanned.len() != xs.len() {
        return Err(Error::InvalidConfiguration(format!(
            "pre-scan returned {} results for {} points",
            scanned.len(),
            xs.len()
        )));
    }
    let mut history: Vec<Sample> = scanned.iter().map(Sample::from).collect();
    let imin = argmin(&history);
    if imin == 0 || imin == history.len() - 1 {
        return Err(Error::NonConvergence(format!(
            "pre-scan minimum at bracket edge R = {}",
            history[imin].r
        )));
    }

    let eval = |r: f64, history: &mut Vec<Sample>| -> Result<f64> {
        let b = mapping::bound(r)?;
        history.push(Sample::from(&b));
        Ok(b.bound)
    };

    let (mut a, mut b) = (xs[imin - 1], xs[imin + 1]);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1, &mut history)?;
    let mut f2 = eval(x2, &mut history)?;
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1, &mut history)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2, &mut history)?;
        }
    }

    let best = history[argmin(&history)];
    Ok(OptimizationReport {
        r_star: best.r,
        bound_star: best.bound,
        evaluations: history.len(),
        bracket: (a.min(best.r), b.max(best.r)),
        history,
    })
}

fn argmin(samples: &[Sample]) -> usize {
    let mut best = 0;
    for (i, s) in samples.iter().enumerate() {
        if s.bound < samples[best].bound {
            best = i;
        }
    }
    best
}
