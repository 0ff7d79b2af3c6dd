//! The conformal chain from the slit disk `Ω_{z₀,R}` (in the cubed plane) to
//! the complement of Fedorov's continuum, and the bound it yields.
//!
//! `ψ(z) = −1/k(z/R³)` with the Koebe function `k(z) = z/(1 − z)²` sends the
//! disk `|z| < R³` onto the plane minus `[0, 4]`, the slit `[1, R³]` onto
//! `[ψ(1), 0]` and `[−R³, −8]` onto `[4, ψ(−8)]`. The affine normalization
//! `φ = (ψ − ψ(1))/N`, `N = |ψ(z₀) − ψ(1)|`, then lines everything up with
//! the stem `[0, c]` and puts `φ(z₀)` at `e^{iα}`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)] // only needed where core lacks inherent float math
use num_traits::Float;

use crate::fedorov::{self, ArcSide, FedorovInput, FedorovSolution, TrajectoryArc};
use crate::geometry;
use crate::polyline::Polyline;
use crate::{Error, Result};

/// Target vertex spacing of pulled-back arcs.
pub const PULL_BACK_SPACING: f64 = 1e-3;

/// Koebe function `z/(1 − z)²`.
pub fn koebe(z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { re: 1.0, im: 0.0 });
    }
    let d = Complex64::new(1.0, 0.0) - z;
    Ok(z / (d * d))
}

fn on_koebe_slit(y: Complex64) -> bool {
    y.im == 0.0 && y.re <= -0.25
}

/// Inverse of the Koebe function on the plane slit along `(−∞, −1/4]`,
/// returning the preimage in the unit disk.
pub fn koebe_inv(y: Complex64) -> Result<Complex64> {
    if on_koebe_slit(y) {
        return Err(Error::BranchCut(format!("koebe_inv({y}) on (-inf, -1/4]")));
    }
    if y.norm() < 1e-8 {
        // u = y − 2y² + 5y³ − 14y⁴ + ...
        return Ok(y * (1.0 + y * (-2.0 + y * (5.0 - 14.0 * y))));
    }
    let s = (4.0 * y + 1.0).sqrt();
    // (2y + 1 − s)/(2y) rewritten without cancellation.
    Ok(2.0 * y / (2.0 * y + 1.0 + s))
}

/// `ψ(z) = −1/k(z/R³) = −(R³ − z)²/(R³ z)`. `ψ(0) = ∞` is rejected.
pub fn psi(z: Complex64, r: f64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole { re: 0.0, im: 0.0 });
    }
    let r3 = r * r * r;
    let d = r3 - z;
    Ok(-(d * d) / (r3 * z))
}

/// Inverse of [`psi`] off the cut `[0, 4]`, with values in `|z| < R³`.
pub fn psi_inv(v: Complex64, r: f64) -> Result<Complex64> {
    if v.im == 0.0 && (0.0..=4.0).contains(&v.re) {
        return Err(Error::BranchCut(format!("psi_inv({v}) on [0, 4]")));
    }
    let r3 = r * r * r;
    Ok(r3 * koebe_inv(-v.inv())?)
}

/// Boundary value of [`psi_inv`] on the cut: the point `R³ e^{±iθ}` with
/// `4 sin²(θ/2) = v`, taken from the upper (`+`) or lower (`−`) side.
pub fn psi_inv_on_cut(v: f64, r: f64, side: ArcSide) -> Result<Complex64> {
    if !(0.0..=4.0).contains(&v) {
        return Err(Error::domain("v", v, "[0, 4]"));
    }
    let theta = 2.0 * (0.5 * v.sqrt()).min(1.0).asin();
    Ok(Complex64::from_polar(r * r * r, side.sign() * theta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FedorovParams {
    pub alpha: f64,
    pub c: f64,
    /// `N = |ψ(z₀) − ψ(1)|`.
    pub n: f64,
}

/// Fedorov's `(α, c)` and the scale `N` for the slit disk with tip `z₀`.
pub fn fedorov_params(r: f64, z0: Complex64) -> Result<FedorovParams> {
    if !(z0.im > 0.0) {
        return Err(Error::domain("Im z0", z0.im, "(0, ∞)"));
    }
    if !(z0.norm() < r * r * r) {
        return Err(Error::domain("|z0|", z0.norm(), "[0, R³)"));
    }
    let psi_1 = psi(Complex64::new(1.0, 0.0), r)?;
    let delta = psi(z0, r)? - psi_1;
    let n = delta.norm();
    let alpha = delta.arg();
    let c = ((psi(Complex64::new(-8.0, 0.0), r)? - psi_1) / n).re;
    if !(alpha > 0.0 && alpha <= FRAC_PI_2) || !(c > 0.0 && c < 2.0 * alpha.cos()) {
        return Err(Error::InvalidConfiguration(format!(
            "alpha = {alpha}, c = {c} is not an admissible Fedorov configuration"
        )));
    }
    Ok(FedorovParams { alpha, c, n })
}

/// Everything computed on the way from `R` to the bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub r: f64,
    pub w: Complex64,
    /// `z₀ = w³`.
    pub z0: Complex64,
    pub psi_1: f64,
    pub psi_m8: f64,
    pub n: f64,
    pub alpha: f64,
    pub c: f64,
    pub b: f64,
    pub capacity: f64,
    /// `|g'(0)| = N · cap / R³` for the map `g` of `Ω_{z₀,R}` onto the disk.
    pub g_prime_abs: f64,
    /// `(N · cap)^{1/3} / R`, an upper bound for the univalent Bloch-Landau constant.
    pub bound: f64,
}

impl BoundResult {
    pub fn fedorov_input(&self) -> FedorovInput {
        FedorovInput {
            alpha: self.alpha,
            c: self.c,
        }
    }
}

/// Validity window of the tangent-circle construction.
pub fn check_window(r: f64) -> Result<()> {
    if !(r > 3.0 && r <= 4.5) {
        return Err(Error::domain("R", r, "(3, 4.5]"));
    }
    Ok(())
}

/// The bound for the six-slit, six-arc domain with outer radius `r`.
pub fn bound(r: f64) -> Result<BoundResult> {
    Ok(bound_with_solution(r)?.0)
}

/// [`bound`] together with the Fedorov solution it used.
pub fn bound_with_solution(r: f64) -> Result<(BoundResult, FedorovSolution)> {
    check_window(r)?;
    let geo = geometry::solve_w(r)?;
    let z0 = geo.w * geo.w * geo.w;
    let params = fedorov_params(r, z0)?;
    let sol = fedorov::solve(FedorovInput::new(params.alpha, params.c)?)?;
    let r3 = r * r * r;
    let g_prime_abs = params.n * sol.capacity / r3;
    let result = BoundResult {
        r,
        w: geo.w,
        z0,
        psi_1: psi(Complex64::new(1.0, 0.0), r)?.re,
        psi_m8: psi(Complex64::new(-8.0, 0.0), r)?.re,
        n: params.n,
        alpha: params.alpha,
        c: params.c,
        b: sol.b,
        capacity: sol.capacity,
        g_prime_abs,
        bound: (params.n * sol.capacity).cbrt() / r,
    };
    if !(g_prime_abs > 0.0 && g_prime_abs < 1.0) {
        return Err(Error::InvalidConfiguration(format!(
            "|g'(0)| = {g_prime_abs} is not in (0, 1)"
        )));
    }
    Ok((result, sol))
}

/// Cube roots along a polyline, continuing the argument from `seed_arg`.
fn continuous_cbrt(points: &[Complex64], seed_arg: f64) -> Vec<Complex64> {
    let mut prev = seed_arg;
    points
        .iter()
        .map(|p| {
            let mut a = p.arg();
            while a - prev > PI {
                a -= 2.0 * PI;
            }
            while prev - a > PI {
                a += 2.0 * PI;
            }
            prev = a;
            Complex64::from_polar(p.norm().cbrt(), a / 3.0)
        })
        .collect()
}

/// Cubic Hermite interpolation between `a` and `b` with unit tangents.
fn hermite(a: Complex64, ta: Complex64, b: Complex64, tb: Complex64, s: f64) -> Complex64 {
    let h = (b - a).norm();
    let s2 = s * s;
    let s3 = s2 * s;
    a * (2.0 * s3 - 3.0 * s2 + 1.0)
        + ta * (h * (s3 - 2.0 * s2 + s))
        + b * (-2.0 * s3 + 3.0 * s2)
        + tb * (h * (s3 - s2))
}

/// Transport a traced arc into `U_{w,R}`: `ζ ↦ Nζ + ψ(1) ↦ ψ⁻¹ ↦ ∛`.
///
/// The result runs from the outer circle `|z| = R` (image of `b`) to `w`
/// (image of `e^{iα}`). Segments are refined with Hermite interpolation in
/// the `ζ`-plane until consecutive image points are at most
/// [`PULL_BACK_SPACING`] apart.
pub fn pull_back_arc(arc: &TrajectoryArc, br: &BoundResult) -> Result<Polyline> {
    pull_back_arc_with_spacing(arc, br, PULL_BACK_SPACING)
}

pub fn pull_back_arc_with_spacing(
    arc: &TrajectoryArc,
    br: &BoundResult,
    spacing: f64,
) -> Result<Polyline> {
    let r = br.r;
    let to_cubed = |zeta: Complex64| psi_inv(zeta * br.n + br.psi_1, r);

    // ζ-plane nodes with tangents, starting at the double zero.
    let mut nodes = Vec::with_capacity(arc.points.len() + 1);
    nodes.push((arc.start, arc.seed_direction));
    nodes.extend(arc.points.iter().copied().zip(arc.tangents.iter().copied()));

    let start_cubed = psi_inv_on_cut(arc.start.re * br.n + br.psi_1, r, arc.side)?;
    let mut cubed = Vec::with_capacity(nodes.len() * 4);
    cubed.push(start_cubed);
    for pair in nodes.windows(2) {
        let (a, ta) = pair[0];
        let (b, tb) = pair[1];
        let end = to_cubed(b)?;
        let prev = *cubed.last().expect("non-empty");
        // Image spacing in the final plane is about |Δ(z³)| / (3|z|²).
        let scale = 3.0 * end.norm().powf(2.0 / 3.0);
        let pieces = ((end - prev).norm() / scale / spacing).ceil().max(1.0) as usize;
        for i in 1..pieces {
            let s = i as f64 / pieces as f64;
            cubed.push(to_cubed(hermite(a, ta, b, tb, s))?);
        }
        cubed.push(end);
    }
    let seed_arg = start_cubed.arg();
    Ok(continuous_cbrt(&cubed, seed_arg))
}
