//! Harmonic measure at the origin by walk-on-spheres, for admissible slit
//! families in the unit disk, and the radial-slit base configuration.
//!
//! Every walk draws from its own ChaCha8 stream, selected by the walk index,
//! so a [`Tally`] over any set of walks is independent of how the walks are
//! scheduled. Tallies are integer counts and merge exactly.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_2_PI, TAU};
use core::ops::Range;

use num_complex::Complex64;
#[allow(unused_imports)] // only needed where core lacks inherent float math
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};

use crate::geometry::DomainModel;
use crate::polyline::{segment_distance, IndexedPolyline, Polyline};
use crate::{Error, Result};

/// Walks stop once this close to the boundary.
pub const ABSORPTION_SHELL: f64 = 1e-5;
/// Per-walk step budget.
pub const MAX_STEPS: u32 = 100_000;
/// Minimum number of walks accepted by the estimators.
pub const MIN_WALKS: u64 = 10_000;
/// Two-sided estimates are only trusted below this discard fraction.
pub const MAX_DISCARD_FRACTION: f64 = 0.01;

const ON_CIRCLE_TOL: f64 = 1e-9;

/// Admissible arcs in the closed unit disk. Each arc is stored starting at
/// its endpoint on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct SlitFamily {
    arcs: Vec<IndexedPolyline>,
}

impl SlitFamily {
    /// Validates admissibility: every arc lies in the closed disk, has
    /// exactly one endpoint on the circle, avoids the origin, and no two arcs
    /// meet. Arcs given tip-first are reversed.
    pub fn new(arcs: Vec<Polyline>) -> Result<Self> {
        let mut out = Vec::with_capacity(arcs.len());
        for (i, mut arc) in arcs.into_iter().enumerate() {
            if arc.len() < 2 || arc.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Inadmissible(format!("arc {i} is degenerate")));
            }
            let on = |z: &Complex64| (z.norm() - 1.0).abs() <= ON_CIRCLE_TOL;
            let (first, last) = (on(&arc[0]), on(&arc[arc.len() - 1]));
            if first == last {
                return Err(Error::Inadmissible(format!(
                    "arc {i} must have exactly one endpoint on the unit circle"
                )));
            }
            if last {
                arc.reverse();
            }
            if arc[1..].iter().any(|z| z.norm() >= 1.0 - ON_CIRCLE_TOL) {
                return Err(Error::Inadmissible(format!("arc {i} leaves the open disk")));
            }
            let arc = IndexedPolyline::new(arc);
            if arc.distance(Complex64::new(0.0, 0.0)) <= ABSORPTION_SHELL {
                return Err(Error::Inadmissible(format!("arc {i} passes through the origin")));
            }
            out.push(arc);
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                if polylines_meet(out[i].points(), out[j].points()) {
                    return Err(Error::Inadmissible(format!("arcs {i} and {j} intersect")));
                }
            }
        }
        Ok(SlitFamily { arcs: out })
    }

    pub fn empty() -> Self {
        SlitFamily { arcs: Vec::new() }
    }

    /// `n` copies of the radial slit `[r, 1]` rotated by multiples of `2π/n`.
    pub fn radial(n: u32, r: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n", 0.0, ">= 1"));
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::domain("r", r, "(0, 1)"));
        }
        let arcs = (0..n)
            .map(|k| {
                let dir = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
                vec![dir, dir * r]
            })
            .collect();
        SlitFamily::new(arcs)
    }

    /// The domain scaled into the unit disk: the curved arcs first (in the
    /// model's order), then the radial slits.
    pub fn from_domain(model: &DomainModel) -> Result<Self> {
        let s = 1.0 / model.outer_circle_radius;
        let mut arcs: Vec<Polyline> = model
            .arcs
            .iter()
            .map(|a| a.points().iter().map(|z| z * s).collect())
            .collect();
        arcs.extend(model.slits.iter().map(|sl| vec![sl.outer * s, sl.inner * s]));
        SlitFamily::new(arcs)
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[IndexedPolyline] {
        &self.arcs
    }
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn segments_meet(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    // Touching or collinear overlap.
    segment_distance(c, a, b).0 == 0.0
        || segment_distance(d, a, b).0 == 0.0
        || segment_distance(a, c, d).0 == 0.0
        || segment_distance(b, c, d).0 == 0.0
}

struct Boxed {
    lo: Complex64,
    hi: Complex64,
    first: usize,
    last: usize,
}

fn boxes(points: &[Complex64]) -> Vec<Boxed> {
    const CHUNK: usize = 32;
    let mut out = Vec::new();
    let mut first = 0;
    while first + 1 < points.len() {
        let last = (first + CHUNK).min(points.len() - 1);
        let mut lo = points[first];
        let mut hi = points[first];
        for p in &points[first..=last] {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        out.push(Boxed { lo, hi, first, last });
        first = last;
    }
    out
}

fn polylines_meet(p: &[Complex64], q: &[Complex64]) -> bool {
    let (bp, bq) = (boxes(p), boxes(q));
    for a in &bp {
        for b in &bq {
            if a.hi.re < b.lo.re || b.hi.re < a.lo.re || a.hi.im < b.lo.im || b.hi.im < a.lo.im {
                continue;
            }
            for i in a.first..a.last {
                for j in b.first..b.last {
                    if segments_meet(p[i], p[i + 1], q[j], q[j + 1]) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Angular sectors of the unit circle, `[breaks[j], breaks[j+1])` with the
/// last sector wrapping round to `breaks[0] + 2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePartition {
    breaks: Vec<f64>,
}

impl CirclePartition {
    /// The whole circle as one piece.
    pub fn whole() -> Self {
        CirclePartition { breaks: vec![0.0] }
    }

    /// Breakpoints are angles in `[0, 2π)`, strictly increasing.
    pub fn new(breaks: Vec<f64>) -> Result<Self> {
        if breaks.is_empty()
            || breaks.iter().any(|b| !(0.0..TAU).contains(b))
            || breaks.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidConfiguration(
                "circle breakpoints must be increasing angles in [0, 2π)".into(),
            ));
        }
        Ok(CirclePartition { breaks })
    }

    pub fn len(&self) -> usize {
        self.breaks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sector(&self, angle: f64) -> usize {
        let a = angle.rem_euclid(TAU);
        match self.breaks.iter().rposition(|&b| b <= a) {
            Some(j) => j,
            None => self.breaks.len() - 1,
        }
    }
}

/// The side of an arc a walk was absorbed on, seen along the arc from its
/// circle endpoint towards its free end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Where one walk ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Absorption {
    Circle { angle: f64 },
    /// `side` is `None` when the foot point is an endpoint of the arc, where
    /// the side cannot be told apart.
    Arc { index: usize, side: Option<Side> },
}

/// Integer absorption counts over a set of walks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub walks: u64,
    pub circle: Vec<u64>,
    /// Per arc: `[left, right, unclassified]`.
    pub arcs: Vec<[u64; 3]>,
}

impl Tally {
    pub fn new(circle_pieces: usize, arcs: usize) -> Self {
        Tally {
            walks: 0,
            circle: vec![0; circle_pieces],
            arcs: vec![[0; 3]; arcs],
        }
    }

    pub fn record(&mut self, a: Absorption, partition: &CirclePartition) {
        self.walks += 1;
        match a {
            Absorption::Circle { angle } => self.circle[partition.sector(angle)] += 1,
            Absorption::Arc { index, side } => {
                let slot = match side {
                    Some(Side::Left) => 0,
                    Some(Side::Right) => 1,
                    None => 2,
                };
                self.arcs[index][slot] += 1;
            }
        }
    }

    /// Exact merge; the result does not depend on merge order.
    pub fn merge(&mut self, other: &Tally) {
        self.walks += other.walks;
        for (a, b) in self.circle.iter_mut().zip(&other.circle) {
            *a += b;
        }
        for (a, b) in self.arcs.iter_mut().zip(&other.arcs) {
            for k in 0..3 {
                a[k] += b[k];
            }
        }
    }

    /// One estimate per circle sector, then one per arc.
    pub fn estimates(&self, seed: u64) -> Vec<HarmonicEstimate> {
        let mut out: Vec<HarmonicEstimate> = self
            .circle
            .iter()
            .map(|&n| HarmonicEstimate::from_count(n, self.walks, seed))
            .collect();
        out.extend(
            self.arcs
                .iter()
                .map(|a| HarmonicEstimate::from_count(a[0] + a[1] + a[2], self.walks, seed)),
        );
        out
    }

    pub fn two_sided(&self, arc_index: usize, seed: u64) -> TwoSided {
        let [l, r, u] = self.arcs[arc_index];
        TwoSided {
            left: HarmonicEstimate::from_count(l, self.walks, seed),
            right: HarmonicEstimate::from_count(r, self.walks, seed),
            discarded: u,
            discard_fraction: u as f64 / self.walks as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicEstimate {
    pub value: f64,
    pub std_error: f64,
    pub walks: u64,
    pub seed: u64,
}

impl HarmonicEstimate {
    pub fn from_count(hits: u64, walks: u64, seed: u64) -> Self {
        let value = hits as f64 / walks as f64;
        HarmonicEstimate {
            value,
            std_error: (value * (1.0 - value) / walks as f64).sqrt(),
            walks,
            seed,
        }
    }
}

/// Per-side estimates for one arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSided {
    pub left: HarmonicEstimate,
    pub right: HarmonicEstimate,
    /// Walks absorbed at an arc endpoint, excluded from both sides.
    pub discarded: u64,
    /// `discarded` over all walks.
    pub discard_fraction: f64,
}

impl TwoSided {
    pub fn difference(&self) -> f64 {
        self.left.value - self.right.value
    }

    /// Standard error of `left − right` under the multinomial model.
    pub fn difference_std_error(&self) -> f64 {
        let (l, r) = (self.left.value, self.right.value);
        ((l + r - (l - r) * (l - r)) / self.left.walks as f64).sqrt()
    }

    pub fn is_valid(&self) -> bool {
        self.discard_fraction < MAX_DISCARD_FRACTION
    }
}

/// Walk-on-spheres from the origin in the unit disk minus a slit family.
#[derive(Debug, Clone)]
pub struct Walker<'a> {
    family: &'a SlitFamily,
    partition: CirclePartition,
    base: ChaCha8Rng,
    seed: u64,
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl<'a> Walker<'a> {
    pub fn new(family: &'a SlitFamily, partition: CirclePartition, seed: u64) -> Self {
        Walker {
            family,
            partition,
            base: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn partition(&self) -> &CirclePartition {
        &self.partition
    }

    pub fn empty_tally(&self) -> Tally {
        Tally::new(self.partition.len(), self.family.len())
    }

    fn nearest(&self, p: Complex64) -> (f64, Option<usize>) {
        let mut best = (1.0 - p.norm(), None);
        for (i, arc) in self.family.arcs.iter().enumerate() {
            if let Some(n) = arc.nearest_within(p, best.0) {
                best = (n.distance, Some(i));
            }
        }
        best
    }

    fn classify(&self, index: usize, p: Complex64) -> Option<Side> {
        let arc = &self.family.arcs[index];
        let near = arc.nearest(p);
        let nseg = arc.points().len() - 1;
        let at_start = near.segment == 0 && near.t == 0.0;
        let at_end = near.segment == nseg - 1 && near.t == 1.0;
        if at_start || at_end {
            return None;
        }
        let pts = arc.points();
        let a = pts[near.segment];
        let foot = a + (pts[near.segment + 1] - a) * near.t;
        let mut tangent = arc.tangent(near.segment);
        // At an interior vertex use the mean of the adjacent directions.
        if near.t == 0.0 {
            tangent += arc.tangent(near.segment - 1);
        } else if near.t == 1.0 {
            tangent += arc.tangent(near.segment + 1);
        }
        let c = cross(tangent, p - foot);
        if c > 0.0 {
            Some(Side::Left)
        } else if c < 0.0 {
            Some(Side::Right)
        } else {
            None
        }
    }

    /// Run walk number `index`.
    pub fn walk(&self, index: u64) -> Result<Absorption> {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        let mut p = Complex64::new(0.0, 0.0);
        for _ in 0..MAX_STEPS {
            let (d, piece) = self.nearest(p);
            if d < ABSORPTION_SHELL {
                return Ok(match piece {
                    None => Absorption::Circle { angle: p.arg() },
                    Some(i) => Absorption::Arc {
                        index: i,
                        side: self.classify(i, p),
                    },
                });
            }
            p += Complex64::from_polar(d, TAU * unit(&mut rng));
        }
        Err(Error::NonConvergence(format!(
            "walk {index} exceeded {MAX_STEPS} steps"
        )))
    }

    pub fn tally_range(&self, walks: Range<u64>) -> Result<Tally> {
        let mut t = self.empty_tally();
        for i in walks {
            t.record(self.walk(i)?, &self.partition);
        }
        Ok(t)
    }
}

fn check_walks(walks: u64) -> Result<()> {
    if walks < MIN_WALKS {
        return Err(Error::domain("walks", walks as f64, ">= 10000"));
    }
    Ok(())
}

/// Harmonic measure at 0 of each circle sector of `partition` followed by each
/// arc of `family`.
pub fn hm_estimate(
    family: &SlitFamily,
    partition: &CirclePartition,
    walks: u64,
    seed: u64,
) -> Result<Vec<HarmonicEstimate>> {
    check_walks(walks)?;
    let walker = Walker::new(family, partition.clone(), seed);
    Ok(walker.tally_range(0..walks)?.estimates(seed))
}

/// Harmonic measure at 0 of the two sides of one arc.
pub fn two_sided_measure(family: &SlitFamily, arc_index: usize, walks: u64, seed: u64) -> Result<TwoSided> {
    check_walks(walks)?;
    if arc_index >= family.len() {
        return Err(Error::InvalidConfiguration(format!(
            "arc index {arc_index} out of range for {} arcs",
            family.len()
        )));
    }
    let walker = Walker::new(family, CirclePartition::whole(), seed);
    Ok(walker.tally_range(0..walks)?.two_sided(arc_index, seed))
}

/// `ω(0, [s, 1]; D ∖ [s, 1])`.
///
/// The Koebe map sends the slit disk onto the plane minus the two rays
/// `(−∞, −1/4]` and `[k(s), ∞)`, fixing 0; a Möbius map and a square root
/// then open this onto a half-plane, giving `(2/π)·atan((1 − s)/(2√s))`.
pub fn radial_slit_measure(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain("s", s, "(0, 1)"));
    }
    Ok(FRAC_2_PI * ((1.0 - s) / (2.0 * s.sqrt())).atan())
}

/// Residual reached by [`solve_base_config`].
pub const BASE_CONFIG_TOL: f64 = 1e-10;

/// Start `r` of `n` rotated radial slits `[r, 1]` each carrying harmonic
/// measure `a` at the origin, by bisection on
/// `radial_slit_measure(rⁿ)/n = a`.
pub fn solve_base_config(n: u32, a: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, ">= 1"));
    }
    let nf = n as f64;
    if !(a > 0.0 && a < 1.0 / nf) {
        return Err(Error::InvalidConfiguration(format!(
            "no configuration: need 0 < a < 1/n, got a = {a}, n = {n}"
        )));
    }
    let g = |r: f64| radial_slit_measure(r.powf(nf)).map(|m| m / nf - a);
    // g decreases from 1/n − a > 0 at r = 0 to −a < 0 at r = 1.
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = g(mid)?;
        if v.abs() <= 0.1 * BASE_CONFIG_TOL || hi - lo < 4.0 * f64::EPSILON {
            return Ok(mid);
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    if g(mid)?.abs() <= BASE_CONFIG_TOL {
        Ok(mid)
    } else {
        Err(Error::NonConvergence("base configuration bisection".into()))
    }
}

/// Angles of the sector breakpoints halfway between `n` equally spaced slits.
pub fn interleaved_breaks(n: u32) -> Vec<f64> {
    (0..n).map(|k| (k as f64 + 0.5) * TAU / n as f64).collect()
}
