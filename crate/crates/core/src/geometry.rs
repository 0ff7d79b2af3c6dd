//! The tangent-circle choice of `w`, assembly of the domain `U_{w,R}` and a
//! numerical inradius check.
//!
//! `U_{w,R}` is the disk `|z| < R` minus six radial slits (`[1, R]` at the cube
//! roots of unity and `[2, R]` at the cube roots of `−1`) and six curved arcs,
//! one per sector, running from the outer circle to an image of `w`.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{FRAC_PI_3, FRAC_PI_6};

use num_complex::Complex64;
#[allow(unused_imports)] // only needed where core lacks inherent float math
use num_traits::Float;

use crate::fedorov::{self, ArcSide, TraceOptions};
use crate::mapping::{self, check_window};
use crate::polyline::{segment_distance, IndexedPolyline, Polyline};
use crate::{Error, Result};

/// Centre of Goodman's circle `C₁`: `(1 + √(2√3 − 3), 1)`.
pub fn p1() -> Complex64 {
    Complex64::new(1.0 + (2.0 * 3f64.sqrt() - 3.0).sqrt(), 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySolution {
    pub r: f64,
    pub p1: Complex64,
    /// Centre of `C₂`, tangent to `|z| = R` and to the ray of argument `π/3`.
    pub p2: Complex64,
    pub d: f64,
    pub theta: f64,
    /// Intersection of `C₁` and `C₂`.
    pub w: Complex64,
}

/// Solve for `w` as the intersection of the unit circles about `P₁` and `P₂`.
pub fn solve_w(r: f64) -> Result<GeometrySolution> {
    check_window(r)?;
    let p1 = p1();
    let p2 = Complex64::from_polar(r - 1.0, FRAC_PI_3 - (1.0 / (r - 1.0)).asin());
    let d = (p2 - p1).norm();
    if !(d < 2.0) {
        return Err(Error::InvalidConfiguration(alloc::format!(
            "|P2 - P1| = {d} >= 2, the circles do not meet"
        )));
    }
    let theta = (d / 2.0).acos();
    let w = p1 + Complex64::from_polar(1.0 / d, -theta) * (p2 - p1);
    Ok(GeometrySolution {
        r,
        p1,
        p2,
        d,
        theta,
        w,
    })
}

/// Which tangency construction a centre comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiskKind {
    /// `C₁`: tangent to `[1, R]`, through the tip `2e^{iπ/3}` and through `w`.
    Goodman,
    /// `C₂`: tangent to `|z| = R` and the ray `arg z = π/3`, through `w`.
    OuterRay,
    /// `C₃`: tangent to `|z| = R` and `[1, R]`. It contains `w`, so the arc
    /// through `w` cuts it; it certifies the inradius but is not itself
    /// contained in the domain.
    OuterSegment,
}

impl DiskKind {
    /// Whether the unit disk of this kind lies in the domain and touches its boundary.
    pub fn is_extremal(self) -> bool {
        !matches!(self, DiskKind::OuterSegment)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalCenter {
    pub kind: DiskKind,
    pub center: Complex64,
}

/// The six symmetries of the domain: rotations by multiples of `2π/3`,
/// with and without conjugation.
pub fn symmetry_images(z: Complex64) -> [Complex64; 6] {
    let rot = Complex64::from_polar(1.0, 2.0 * FRAC_PI_3);
    let rot2 = rot * rot;
    let zc = z.conj();
    [z, z * rot, z * rot2, zc, zc * rot, zc * rot2]
}

/// `P₁, P₂, P₃` and their images under the symmetry group (18 centres).
pub fn extremal_disk_centers(r: f64) -> Result<Vec<ExtremalCenter>> {
    let geo = solve_w(r)?;
    let p3 = Complex64::new(((r - 1.0) * (r - 1.0) - 1.0).sqrt(), 1.0);
    let mut out = Vec::with_capacity(18);
    for (kind, base) in [
        (DiskKind::Goodman, geo.p1),
        (DiskKind::OuterRay, geo.p2),
        (DiskKind::OuterSegment, p3),
    ] {
        out.extend(
            symmetry_images(base)
                .into_iter()
                .map(|center| ExtremalCenter { kind, center }),
        );
    }
    Ok(out)
}

/// A radial slit from `inner` to `outer` (on the outer circle).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slit {
    pub inner: Complex64,
    pub outer: Complex64,
}

/// The boundary of `U_{w,R}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainModel {
    pub r: f64,
    pub w: Complex64,
    pub slits: Vec<Slit>,
    /// Each arc runs from the outer circle to an image of `w`.
    pub arcs: Vec<IndexedPolyline>,
    pub outer_circle_radius: f64,
    pub extremal_centers: Vec<ExtremalCenter>,
}

/// Which part of the boundary is nearest to a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPiece {
    Circle,
    Slit(usize),
    Arc(usize),
}

/// Radial slits of the six-slit plane, truncated at radius `r`.
pub fn radial_slits(r: f64) -> Vec<Slit> {
    (0..6)
        .map(|j| {
            let dir = Complex64::from_polar(1.0, j as f64 * FRAC_PI_3);
            let start = if j % 2 == 0 { 1.0 } else { 2.0 };
            Slit {
                inner: dir * start,
                outer: dir * r,
            }
        })
        .collect()
}

impl DomainModel {
    /// Distance from `p` to the boundary and the piece attaining it.
    pub fn nearest_piece(&self, p: Complex64) -> (f64, BoundaryPiece) {
        let mut best = ((self.outer_circle_radius - p.norm()).abs(), BoundaryPiece::Circle);
        for (i, s) in self.slits.iter().enumerate() {
            let (d, _) = segment_distance(p, s.inner, s.outer);
            if d < best.0 {
                best = (d, BoundaryPiece::Slit(i));
            }
        }
        for (i, arc) in self.arcs.iter().enumerate() {
            if let Some(n) = arc.nearest_within(p, best.0) {
                best = (n.distance, BoundaryPiece::Arc(i));
            }
        }
        best
    }

    pub fn distance_to_boundary(&self, p: Complex64) -> f64 {
        self.nearest_piece(p).0
    }

    /// Open domain membership: inside the outer circle and off the slits and arcs.
    pub fn contains(&self, p: Complex64) -> bool {
        p.norm() < self.outer_circle_radius && self.distance_to_boundary(p) > MEMBERSHIP_TUBE
    }

    /// The same domain without the six curved arcs.
    pub fn without_arcs(&self) -> DomainModel {
        DomainModel {
            arcs: Vec::new(),
            ..self.clone()
        }
    }

    /// Clearance of every extremal centre, in the order of `extremal_centers`.
    pub fn clearances(&self) -> Vec<f64> {
        self.extremal_centers
            .iter()
            .map(|c| self.distance_to_boundary(c.center))
            .collect()
    }
}

/// Slits and arcs are thickened by this much for membership tests.
pub const MEMBERSHIP_TUBE: f64 = 1e-9;

/// Assemble `U_{w,R}`: slits, the six pulled-back arcs and the extremal centres.
pub fn build_domain(r: f64) -> Result<DomainModel> {
    let (br, sol) = mapping::bound_with_solution(r)?;
    let opts = TraceOptions::default();
    let upper = fedorov::trace_arc_with(&sol, ArcSide::Upper, &opts)?;
    let lower = fedorov::trace_arc_with(&sol, ArcSide::Lower, &opts)?;
    let upper = mapping::pull_back_arc(&upper, &br)?;
    let lower = mapping::pull_back_arc(&lower, &br)?;

    let rot = Complex64::from_polar(1.0, 2.0 * FRAC_PI_3);
    let mut arcs = Vec::with_capacity(6);
    for base in [&upper, &lower] {
        for k in 0..3 {
            let factor = rot.powu(k);
            let arc: Polyline = base.iter().map(|z| z * factor).collect();
            arcs.push(IndexedPolyline::new(arc));
        }
    }
    Ok(DomainModel {
        r,
        w: br.w,
        slits: radial_slits(r),
        arcs,
        outer_circle_radius: r,
        extremal_centers: extremal_disk_centers(r)?,
    })
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    center: Complex64,
    half: f64,
    value: f64,
    upper: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.upper == other.upper
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper)
    }
}

fn in_domain_value(model: &DomainModel, p: Complex64) -> f64 {
    if p.norm() < model.outer_circle_radius {
        model.distance_to_boundary(p)
    } else {
        f64::NEG_INFINITY
    }
}

/// Maximize the distance to the boundary with Nelder-Mead from `start`.
fn nelder_mead(model: &DomainModel, start: Complex64, size: f64) -> (Complex64, f64) {
    let f = |p: Complex64| -in_domain_value(model, p);
    let mut simplex = [
        start,
        start + Complex64::new(size, 0.0),
        start + Complex64::new(0.0, size),
    ];
    let mut values = simplex.map(f);
    for _ in 0..400 {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        let spread = (simplex[1] - simplex[0]).norm().max((simplex[2] - simplex[0]).norm());
        if spread < 1e-12 {
            break;
        }
        let centroid = 0.5 * (simplex[0] + simplex[1]);
        let reflect = centroid + (centroid - simplex[2]);
        let fr = f(reflect);
        if fr < values[0] {
            let expand = centroid + 2.0 * (centroid - simplex[2]);
            let fe = f(expand);
            if fe < fr {
                simplex[2] = expand;
                values[2] = fe;
            } else {
                simplex[2] = reflect;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflect;
            values[2] = fr;
        } else {
            let contract = centroid + 0.5 * (simplex[2] - centroid);
            let fc = f(contract);
            if fc < values[2] {
                simplex[2] = contract;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("three vertices");
    (simplex[best], -values[best])
}

/// Numerical inradius: branch-and-bound over square cells down to
/// `grid_step`, then Nelder-Mead ascent from the ten best cells.
///
/// The distance to the boundary is 1-Lipschitz, so a cell whose centre value
/// plus half-diagonal cannot beat the incumbent is discarded.
pub fn inradius_estimate(model: &DomainModel, grid_step: f64) -> f64 {
    inradius_search(model, grid_step).1
}

/// As [`inradius_estimate`], also returning the maximizing point.
pub fn inradius_search(model: &DomainModel, grid_step: f64) -> (Complex64, f64) {
    let r = model.outer_circle_radius;
    let grid_step = grid_step.max(1e-6);
    let mut heap = BinaryHeap::new();
    let mut best = (Complex64::new(0.0, 0.0), f64::NEG_INFINITY);
    let mut leaves: Vec<Cell> = Vec::new();

    let push = |heap: &mut BinaryHeap<Cell>, best: &mut (Complex64, f64), center, half: f64| {
        let diag = half * core::f64::consts::SQRT_2;
        let c: Complex64 = center;
        if c.norm() - diag >= r {
            return;
        }
        let dist = model.distance_to_boundary(c);
        let value = if c.norm() < r { dist } else { f64::NEG_INFINITY };
        if value > best.1 {
            *best = (c, value);
        }
        heap.push(Cell {
            center: c,
            half,
            value,
            upper: dist + diag,
        });
    };

    let initial = 0.25f64.max(grid_step);
    let n = (2.0 * r / initial).ceil() as i64;
    let half = r / n as f64;
    for i in 0..n {
        for j in 0..n {
            let c = Complex64::new(
                -r + (2 * i + 1) as f64 * half,
                -r + (2 * j + 1) as f64 * half,
            );
            push(&mut heap, &mut best, c, half);
        }
    }

    while let Some(cell) = heap.pop() {
        if cell.upper <= best.1 {
            break;
        }
        if cell.half <= 0.5 * grid_step {
            leaves.push(cell);
            continue;
        }
        let q = 0.5 * cell.half;
        for (dx, dy) in [(-q, -q), (q, -q), (-q, q), (q, q)] {
            push(
                &mut heap,
                &mut best,
                cell.center + Complex64::new(dx, dy),
                q,
            );
        }
    }

    leaves.sort_by(|a, b| b.value.total_cmp(&a.value));
    let mut starts: Vec<Complex64> = leaves.iter().take(10).map(|c| c.center).collect();
    starts.push(best.0);
    for s in starts {
        let (p, v) = nelder_mead(model, s, grid_step);
        if v > best.1 {
            best = (p, v);
        }
    }
    best
}

/// Points `P` on a unit circle about each extremal centre that sit closest
/// to the boundary; handy for plotting tangency.
pub fn touch_points(model: &DomainModel, center: Complex64, samples: usize) -> Vec<Complex64> {
    let mut out = vec![];
    for i in 0..samples {
        let p = center + Complex64::from_polar(1.0, i as f64 / samples as f64 * 2.0 * core::f64::consts::PI);
        if model.distance_to_boundary(p) < 1e-3 {
            out.push(p);
        }
    }
    out
}

/// `arg w < π/6`, the condition that puts `w` inside `C₃`.
pub fn w_inside_c3(geo: &GeometrySolution) -> bool {
    geo.w.arg() < FRAC_PI_6
}
