//! Polylines and nearest-point queries against them.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // only needed where core lacks inherent float math
use num_traits::Float;

pub type Polyline = Vec<Complex64>;

/// Distance from `p` to the segment `[a, b]` and the clamped parameter of the foot point.
pub fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> (f64, f64) {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((p - a) * ab.conj()).re / len2
    }
    .clamp(0.0, 1.0);
    ((p - (a + ab * t)).norm(), t)
}

/// Total length of a polyline.
pub fn length(points: &[Complex64]) -> f64 {
    points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}

/// Largest distance between consecutive vertices.
pub fn max_spacing(points: &[Complex64]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1] - w[0]).norm())
        .fold(0.0, f64::max)
}

/// Nearest point on an [`IndexedPolyline`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nearest {
    pub distance: f64,
    /// Index of the segment `[points[segment], points[segment + 1]]`.
    pub segment: usize,
    /// Parameter of the foot point on that segment, in `[0, 1]`.
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Chunk {
    first: usize,
    last: usize,
    lo: Complex64,
    hi: Complex64,
}

impl Chunk {
    fn box_distance(&self, p: Complex64) -> f64 {
        let dx = (self.lo.re - p.re).max(p.re - self.hi.re).max(0.0);
        let dy = (self.lo.im - p.im).max(p.im - self.hi.im).max(0.0);
        dx.hypot(dy)
    }
}

const CHUNK: usize = 32;

/// A polyline with per-chunk bounding boxes for fast distance queries.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedPolyline {
    points: Polyline,
    chunks: Vec<Chunk>,
    lo: Complex64,
    hi: Complex64,
}

impl IndexedPolyline {
    /// Needs at least two points.
    pub fn new(points: Polyline) -> Self {
        assert!(points.len() >= 2, "polyline needs at least two points");
        let nseg = points.len() - 1;
        let mut chunks = Vec::with_capacity(nseg / CHUNK + 1);
        let mut first = 0;
        while first < nseg {
            let last = (first + CHUNK).min(nseg);
            let (lo, hi) = bounds(&points[first..=last]);
            chunks.push(Chunk { first, last, lo, hi });
            first = last;
        }
        let (lo, hi) = bounds(&points);
        IndexedPolyline {
            points,
            chunks,
            lo,
            hi,
        }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn into_points(self) -> Polyline {
        self.points
    }

    /// Lower bound on the distance from `p` to any point of the polyline.
    pub fn box_distance(&self, p: Complex64) -> f64 {
        Chunk {
            first: 0,
            last: 0,
            lo: self.lo,
            hi: self.hi,
        }
        .box_distance(p)
    }

    /// Nearest point, considering only candidates closer than `cutoff`.
    pub fn nearest_within(&self, p: Complex64, cutoff: f64) -> Option<Nearest> {
        if self.box_distance(p) >= cutoff {
            return None;
        }
        let mut best: Option<Nearest> = None;
        let mut bound = cutoff;
        // Scan the closest box first so the cutoff tightens early.
        let mut first = 0;
        let mut first_dist = f64::INFINITY;
        for (i, chunk) in self.chunks.iter().enumerate() {
            let d = chunk.box_distance(p);
            if d < first_dist {
                first_dist = d;
                first = i;
            }
        }
        let order = core::iter::once(first).chain((0..self.chunks.len()).filter(move |&i| i != first));
        for ci in order {
            let chunk = &self.chunks[ci];
            if chunk.box_distance(p) >= bound {
                continue;
            }
            for s in chunk.first..chunk.last {
                let (d, t) = segment_distance(p, self.points[s], self.points[s + 1]);
                if d < bound {
                    bound = d;
                    best = Some(Nearest {
                        distance: d,
                        segment: s,
                        t,
                    });
                }
            }
        }
        best
    }

    pub fn nearest(&self, p: Complex64) -> Nearest {
        self.nearest_within(p, f64::INFINITY)
            .expect("non-empty polyline always has a nearest point")
    }

    pub fn distance(&self, p: Complex64) -> f64 {
        self.nearest(p).distance
    }

    /// Unit tangent of a segment, oriented along the vertex order.
    pub fn tangent(&self, segment: usize) -> Complex64 {
        let d = self.points[segment + 1] - self.points[segment];
        d / d.norm()
    }
}

fn bounds(points: &[Complex64]) -> (Complex64, Complex64) {
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.re = lo.re.min(p.re);
        lo.im = lo.im.min(p.im);
        hi.re = hi.re.max(p.re);
        hi.im = hi.im.max(p.im);
    }
    (lo, hi)
}
