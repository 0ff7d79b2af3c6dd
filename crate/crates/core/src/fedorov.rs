//! Fedorov's continuum of minimal capacity through `0`, `c` and `e^{±iα}`.
//!
//! The continuum is the stem `[0, c]` together with two analytic arcs that
//! leave the stem at the branch point `b` and end at `e^{±iα}`. The arcs are
//! critical trajectories of
//!
//! ```text
//! Q(z) = (z − b)² / (z (z − c) (z² − 2z cos α + 1))
//! ```
//!
//! along which `Q(z) dz² < 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)] // only needed where core lacks inherent float math
use num_traits::Float;

use crate::polyline::Polyline;
use crate::special_fn::{incomplete_f, EllipticModulus};
use crate::{Error, Result};

/// The four marked points are `0`, `c`, `e^{iα}` and `e^{−iα}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FedorovInput {
    pub alpha: f64,
    pub c: f64,
}

impl FedorovInput {
    /// Requires `0 < α ≤ π/2` and `0 < c < 2 cos α`.
    pub fn new(alpha: f64, c: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= FRAC_PI_2) {
            return Err(Error::domain("alpha", alpha, "(0, π/2]"));
        }
        if !(c > 0.0 && c < 2.0 * alpha.cos()) {
            return Err(Error::domain("c", c, "(0, 2 cos α)"));
        }
        Ok(FedorovInput { alpha, c })
    }

    /// `e^{iα}`.
    pub fn tip(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.alpha)
    }

    /// The four marked points `0, c, e^{iα}, e^{−iα}`.
    pub fn marked_points(&self) -> [Complex64; 4] {
        let t = self.tip();
        [Complex64::new(0.0, 0.0), Complex64::new(self.c, 0.0), t, t.conj()]
    }

    /// Largest pairwise distance between the marked points.
    pub fn diameter(&self) -> f64 {
        let pts = self.marked_points();
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                d = d.max((pts[i] - pts[j]).norm());
            }
        }
        d
    }
}

/// How the angle `arccos((1−p)/(1+p))` is fed to the elliptic integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FConvention {
    /// `F(φ, k) = ∫₀^φ dθ/√(1 − k² sin²θ)`, the angle is the amplitude.
    #[default]
    Amplitude,
    /// The angle is used as the upper limit `x` of `∫₀^x dt/√((1−t²)(1−k²t²))`.
    /// Kept only to show that it does not reproduce `BOUND_AT_R_OPTIMAL`.
    AlgebraicLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FedorovSolution {
    pub input: FedorovInput,
    pub p: f64,
    pub modulus: EllipticModulus,
    /// `arccos((1 − p)/(1 + p))`.
    pub phi_amp: f64,
    /// Elliptic argument `w = F(φ, k)`.
    pub w_ell: f64,
    /// Branch point on the real stem.
    pub b: f64,
    pub capacity: f64,
}

/// Capacity, modulus, elliptic argument and branch point for `input`.
pub fn solve(input: FedorovInput) -> Result<FedorovSolution> {
    solve_with(input, FConvention::Amplitude)
}

pub fn solve_with(input: FedorovInput, convention: FConvention) -> Result<FedorovSolution> {
    let FedorovInput { alpha, c } = FedorovInput::new(input.alpha, input.c)?;
    let cos_a = alpha.cos();
    let p = (1.0 - 2.0 * c * cos_a + c * c).sqrt();
    let k = ((p + 1.0 - c * cos_a) / (2.0 * p)).sqrt();
    let modulus = EllipticModulus::new(k)?;
    let phi_amp = ((1.0 - p) / (1.0 + p)).acos();
    let w_ell = match convention {
        FConvention::Amplitude => incomplete_f(phi_amp, k)?,
        FConvention::AlgebraicLimit => {
            if phi_amp > 1.0 {
                return Err(Error::domain("upper limit", phi_amp, "[0, 1]"));
            }
            incomplete_f(phi_amp.asin(), k)?
        }
    };
    let theta_0 = modulus.theta(0.0);
    let theta_w = modulus.theta(w_ell);
    let capacity = (1.0 + p).powi(2) * theta_0 * theta_0 / (4.0 * c * theta_w * theta_w);
    let b = p.sqrt() * modulus.zeta(w_ell) + c / (p + 1.0);
    // For small c the formula puts the double zero to the right of c, where
    // Q > 0 on (c, b) and the stem [0, c] is no longer part of the critical
    // graph; the continuum described here does not exist there.
    if !(b > 0.0 && b < c) {
        return Err(Error::InvalidConfiguration(format!(
            "double zero b = {b} lies outside the stem (0, {c})"
        )));
    }
    Ok(FedorovSolution {
        input: FedorovInput { alpha, c },
        p,
        modulus,
        phi_amp,
        w_ell,
        b,
        capacity,
    })
}

/// The quadratic differential `Q(z)`.
pub fn q_diff(z: Complex64, input: &FedorovInput, b: f64) -> Result<Complex64> {
    let denom = z * (z - input.c) * (z * z - 2.0 * z * input.alpha.cos() + 1.0);
    if denom == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    let num = (z - b) * (z - b);
    let q = num / denom;
    if !(q.re.is_finite() && q.im.is_finite()) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcSide {
    Upper,
    Lower,
}

impl ArcSide {
    pub fn sign(self) -> f64 {
        match self {
            ArcSide::Upper => 1.0,
            ArcSide::Lower => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Largest step (unit-speed arclength) of the integrator.
    pub step: f64,
    /// Local error per unit step of the integrator.
    pub tol: f64,
    /// Integrate `Q dz² > 0` as printed in the literature instead of `Q dz² < 0`.
    pub printed_sign: bool,
    pub max_steps: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: 1e-3,
            tol: 1e-10,
            printed_sign: false,
            max_steps: 1_000_000,
        }
    }
}

/// One curved arc of the continuum, from near `b` to `e^{±iα}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryArc {
    pub side: ArcSide,
    /// Starts at the seed `b + δ e^{iβ}` and ends exactly at `end_target`.
    pub points: Vec<Complex64>,
    /// Unit tangent of the trajectory at each point.
    pub tangents: Vec<Complex64>,
    /// The double zero `b`.
    pub start: Complex64,
    /// Direction `e^{iβ}` in which the arc leaves `b`.
    pub seed_direction: Complex64,
    pub end_target: Complex64,
    /// Closest approach to `end_target` of the exact trajectory through the
    /// last integrated point, from the local expansion of `Q` at the pole.
    pub endpoint_residual: f64,
    /// Largest per-step value of `|Re ∫ √Q dz| / ∫ |√Q| |dz|`.
    pub max_orthogonality_residual: f64,
}

impl TrajectoryArc {
    /// `b` followed by the traced points.
    pub fn with_start(&self) -> Polyline {
        let mut out = Vec::with_capacity(self.points.len() + 1);
        out.push(self.start);
        out.extend_from_slice(&self.points);
        out
    }
}

/// Integration stops this close to the pole and finishes radially.
pub const SNAP_RADIUS: f64 = 1e-4;

/// Seed offset from the double zero.
pub fn seed_offset(c: f64) -> f64 {
    1e-4 * c.min(1.0)
}

/// Leading coefficient `A` of `Q(z) ≈ A (z − b)²` at the double zero.
fn double_zero_coefficient(input: &FedorovInput, b: f64) -> Complex64 {
    let bb = Complex64::new(b, 0.0);
    (bb * (bb - input.c) * (bb * bb - 2.0 * bb * input.alpha.cos() + 1.0)).inv()
}

/// Departure direction `e^{iβ}` of the arc on `side`.
pub fn seed_direction(input: &FedorovInput, b: f64, side: ArcSide, printed_sign: bool) -> Complex64 {
    let a = double_zero_coefficient(input, b);
    let target_phase = if printed_sign { 0.0 } else { PI };
    let base = (target_phase - a.arg()) / 4.0;
    (0..4)
        .map(|j| Complex64::from_polar(1.0, base + j as f64 * FRAC_PI_2))
        .max_by(|x, y| (side.sign() * x.im).total_cmp(&(side.sign() * y.im)))
        .expect("four candidates")
}

struct Field<'a> {
    input: &'a FedorovInput,
    b: f64,
    rotate: Complex64,
}

impl Field<'_> {
    fn sqrt_q(&self, z: Complex64) -> Result<Complex64> {
        Ok(q_diff(z, self.input, self.b)?.sqrt())
    }

    /// Unit direction with `v² Q` on the negative (or positive) real axis,
    /// on the branch closest to `prev`.
    fn direction(&self, z: Complex64, prev: Complex64) -> Result<Complex64> {
        let s = self.sqrt_q(z)?;
        if s == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole { re: z.re, im: z.im });
        }
        let v = self.rotate * s.conj();
        let v = v / v.norm();
        Ok(if (v * prev.conj()).re >= 0.0 { v } else { -v })
    }

    /// Closest approach to the simple pole `pole` of the exact trajectory
    /// through `z`. Near the pole `Φ = ∫_pole √Q dz ≈ 2√(B t)` with
    /// `t = z − pole` and residue `B`; the trajectory keeps the transverse
    /// part `H` of `Φ` fixed, so its closest approach is `H²/(4|B|)`.
    fn pole_miss(&self, z: Complex64, pole: Complex64) -> Result<f64> {
        const NODES: [f64; 8] = [
            0.019_855_071_751_231_856,
            0.101_666_761_293_186_6,
            0.237_233_795_041_835_5,
            0.408_282_678_752_175_1,
            0.591_717_321_247_824_9,
            0.762_766_204_958_164_5,
            0.898_333_238_706_813_4,
            0.980_144_928_248_768_1,
        ];
        const WEIGHTS: [f64; 8] = [
            0.050_614_268_145_188_13,
            0.111_190_517_226_687_2,
            0.156_853_322_938_943_6,
            0.181_341_891_689_181,
            0.181_341_891_689_181,
            0.156_853_322_938_943_6,
            0.111_190_517_226_687_2,
            0.050_614_268_145_188_13,
        ];
        // z(s) = pole + t0 (1 − s)² removes the inverse square root.
        let t0 = z - pole;
        let mut previous: Option<Complex64> = None;
        let mut phi = Complex64::new(0.0, 0.0);
        for (s, w) in NODES.iter().zip(WEIGHTS) {
            let u = 1.0 - s;
            let mut g = self.sqrt_q(pole + t0 * (u * u))? * u;
            if let Some(prev) = previous {
                if (g * prev.conj()).re < 0.0 {
                    g = -g;
                }
            }
            previous = Some(g);
            phi += g * (2.0 * t0 * w);
        }
        let height = (phi * self.rotate.conj()).im;
        let residue = (pole - self.b) * (pole - self.b)
            / (pole * (pole - self.input.c) * (pole - pole.conj()));
        Ok(height * height / (4.0 * residue.norm()))
    }

    /// `|Re ∫ √Q dz| / ∫ |√Q| |dz|` along the chord `[a, b]` (for the printed
    /// sign, the imaginary part). By Cauchy the chord integral equals the one
    /// along the true trajectory, so this only sees integration error.
    fn chord_residual(&self, a: Complex64, b: Complex64) -> Result<f64> {
        const NODES: [f64; 4] = [
            -0.861_136_311_594_052_6,
            -0.339_981_043_584_856_3,
            0.339_981_043_584_856_3,
            0.861_136_311_594_052_6,
        ];
        const WEIGHTS: [f64; 4] = [
            0.347_854_845_137_453_9,
            0.652_145_154_862_546_1,
            0.652_145_154_862_546_1,
            0.347_854_845_137_453_9,
        ];
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut reference: Option<Complex64> = None;
        let mut integral = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (x, wgt) in NODES.iter().zip(WEIGHTS) {
            let mut s = self.sqrt_q(mid + half * *x)?;
            match reference {
                None => reference = Some(s),
                Some(r) => {
                    if (s * r.conj()).re < 0.0 {
                        s = -s;
                    }
                }
            }
            integral += s * half * wgt;
            magnitude += s.norm() * half.norm() * wgt;
        }
        // On a trajectory √Q dz is parallel to `rotate`.
        let invariant = (integral * self.rotate.conj()).im;
        Ok(if magnitude > 0.0 {
            invariant.abs() / magnitude
        } else {
            0.0
        })
    }
}

// Dormand-Prince 5(4) tableau; the field is autonomous so the nodes are not needed.
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand-Prince step; returns the new point, the end tangent and the error estimate.
fn dp_step(
    field: &Field<'_>,
    z: Complex64,
    tangent: Complex64,
    h: f64,
) -> Result<(Complex64, Complex64, f64)> {
    let mut k = [Complex64::new(0.0, 0.0); 7];
    k[0] = tangent;
    for s in 1..7 {
        let mut zs = z;
        for (j, kj) in k.iter().enumerate().take(s) {
            zs += *kj * (h * DP_A[s][j]);
        }
        k[s] = field.direction(zs, tangent)?;
    }
    let mut z5 = z;
    let mut err = Complex64::new(0.0, 0.0);
    for s in 0..7 {
        z5 += k[s] * (h * DP_B5[s]);
        err += k[s] * (h * (DP_B5[s] - DP_B4[s]));
    }
    Ok((z5, k[6], err.norm()))
}

/// Trace the arc of the continuum from `b` to `e^{±iα}`.
pub fn trace_arc(sol: &FedorovSolution, side: ArcSide, step: f64, tol: f64) -> Result<TrajectoryArc> {
    trace_arc_with(
        sol,
        side,
        &TraceOptions {
            step,
            tol,
            ..TraceOptions::default()
        },
    )
}

pub fn trace_arc_with(
    sol: &FedorovSolution,
    side: ArcSide,
    opts: &TraceOptions,
) -> Result<TrajectoryArc> {
    if !(opts.step > 1e-6 && opts.step < 1e-2) {
        return Err(Error::domain("step", opts.step, "(1e-6, 1e-2)"));
    }
    if !(opts.tol >= 1e-10) {
        return Err(Error::domain("tol", opts.tol, "[1e-10, ∞)"));
    }
    let input = &sol.input;
    let b = sol.b;
    let target = Complex64::from_polar(1.0, side.sign() * input.alpha);
    let field = Field {
        input,
        b,
        rotate: if opts.printed_sign {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0)
        },
    };

    let start = Complex64::new(b, 0.0);
    let seed_dir = seed_direction(input, b, side, opts.printed_sign);
    let mut z = start + seed_dir * seed_offset(input.c);
    let mut tangent = field.direction(z, seed_dir)?;
    let mut points = vec![z];
    let mut tangents = vec![tangent];
    let mut max_orth: f64 = 0.0;

    let escape_radius = input.c + 2.0;
    let mut closest = (z - target).norm();
    let mut h = opts.step.min(seed_offset(input.c));
    let mut steps = 0usize;

    loop {
        let dist = (z - target).norm();
        if dist <= SNAP_RADIUS {
            break;
        }
        // Past the closest approach: the trajectory missed the pole.
        if dist > 2.0 * closest && closest < 0.5 {
            return Err(Error::NonConvergence(format!(
                "trajectory passed the pole at distance {closest:e}"
            )));
        }
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::NonConvergence(format!(
                "step budget of {} exhausted",
                opts.max_steps
            )));
        }
        h = h.min(opts.step).min(0.25 * dist).min(0.5 * (z - start).norm());
        let (next, next_tangent, err) = dp_step(&field, z, tangent, h)?;
        let allowed = (opts.tol * h).max(4.0 * f64::EPSILON * (1.0 + z.norm()));
        if err > allowed && h > 1e-14 {
            h *= (0.9 * (allowed / err).powf(0.2)).clamp(0.1, 0.5);
            continue;
        }
        max_orth = max_orth.max(field.chord_residual(z, next)?);
        z = next;
        tangent = next_tangent;
        points.push(z);
        tangents.push(tangent);
        if z.norm() > escape_radius {
            return Err(Error::NonConvergence(format!(
                "trajectory left the disk |z| <= {escape_radius}"
            )));
        }
        closest = closest.min((z - target).norm());
        let growth = if err > 0.0 {
            0.9 * (allowed / err).powf(0.2)
        } else {
            5.0
        };
        h *= growth.clamp(1.0, 5.0);
    }

    let endpoint_residual = field.pole_miss(z, target)?;
    if !(endpoint_residual <= SNAP_RADIUS) {
        return Err(Error::NonConvergence(format!(
            "trajectory misses the pole by {endpoint_residual:e}"
        )));
    }
    // Radial finish into the pole.
    let radial = (target - z) / (target - z).norm();
    let n_radial = ((target - z).norm() / opts.step).ceil().max(1.0) as usize;
    for i in 1..=n_radial {
        points.push(z + (target - z) * (i as f64 / n_radial as f64));
        tangents.push(radial);
    }
    *points.last_mut().expect("non-empty") = target;

    Ok(TrajectoryArc {
        side,
        points,
        tangents,
        start,
        seed_direction: seed_dir,
        end_target: target,
        endpoint_residual,
        max_orthogonality_residual: max_orth,
    })
}

/// The continuum as four polylines leaving `b`:
/// `[b, 0]`, `[b, c]`, the upper arc and the lower arc.
pub fn continuum(sol: &FedorovSolution) -> Result<[Polyline; 4]> {
    let opts = TraceOptions::default();
    let upper = trace_arc_with(sol, ArcSide::Upper, &opts)?;
    let lower = trace_arc_with(sol, ArcSide::Lower, &opts)?;
    let b = Complex64::new(sol.b, 0.0);
    Ok([
        vec![b, Complex64::new(0.0, 0.0)],
        vec![b, Complex64::new(sol.input.c, 0.0)],
        upper.with_start(),
        lower.with_start(),
    ])
}
