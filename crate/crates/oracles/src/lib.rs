//! Independent reference computations for the test suites.
//!
//! Nothing here shares code with `bloch-core`: the elliptic integrals are
//! integrated directly, theta functions come from the product formula, and
//! capacities come from a boundary-element equilibrium-charge solve.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS_K: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const GK_WEIGHTS_G: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * GK_WEIGHTS_K[7];
    let mut gauss = fc * GK_WEIGHTS_G[3];
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        kronrod += GK_WEIGHTS_K[i] * s;
        if i % 2 == 1 {
            gauss += GK_WEIGHTS_G[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (7, 15) quadrature to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(f, a, b);
        // Below the roundoff floor further splitting cannot help.
        let floor = 64.0 * f64::EPSILON * value.abs();
        if err <= tol.max(floor) || depth >= 50 || (b - a).abs() < 1e-15 {
            return value;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, depth + 1) + recurse(f, m, b, 0.5 * tol, depth + 1)
    }
    recurse(&f, a, b, tol, 0)
}

/// `∫₀^φ dθ / √(1 − k² sin²θ)` by direct quadrature.
pub fn elliptic_f(phi: f64, k: f64) -> f64 {
    integrate(
        |t| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(),
        0.0,
        phi,
        1e-15,
    )
}

/// `K(k)` by direct quadrature.
pub fn elliptic_k(k: f64) -> f64 {
    elliptic_f(std::f64::consts::FRAC_PI_2, k)
}

/// `∫₀^φ √(1 − k² sin²θ) dθ` by direct quadrature.
pub fn elliptic_e(phi: f64, k: f64) -> f64 {
    integrate(
        |t| (1.0 - k * k * t.sin().powi(2)).sqrt(),
        0.0,
        phi,
        1e-15,
    )
}

/// Partial sums of `θ₄(v, q) = 1 + 2 Σ (−1)ⁿ q^{n²} cos 2nv` with `terms` terms.
pub fn theta4_partial(v: f64, q: f64, terms: usize) -> f64 {
    1.0 + 2.0
        * (1..=terms)
            .map(|n| {
                let n = n as f64;
                (-1f64).powf(n) * q.powf(n * n) * (2.0 * n * v).cos()
            })
            .sum::<f64>()
}

/// `θ₄(v, q) = Π (1 − q^{2n})(1 − 2 q^{2n−1} cos 2v + q^{4n−2})`.
pub fn theta4_product(v: f64, q: f64) -> f64 {
    let c = (2.0 * v).cos();
    let mut prod = 1.0;
    let mut n = 1;
    loop {
        let q2n = q.powi(2 * n);
        let q2n1 = q.powi(2 * n - 1);
        let factor = (1.0 - q2n) * (1.0 - 2.0 * q2n1 * c + q2n1 * q2n1);
        prod *= factor;
        if q2n1 < 1e-18 || n > 100_000 {
            break;
        }
        n += 1;
    }
    prod
}

/// Nome `exp(−πK'/K)` from quadrature values of `K`.
pub fn nome(k: f64) -> f64 {
    let kc = ((1.0 - k) * (1.0 + k)).sqrt();
    (-std::f64::consts::PI * elliptic_k(kc) / elliptic_k(k)).exp()
}

/// Redistribute the vertices of an open polyline so that the nodes cluster at
/// both ends like `(1 − cos πs)/2`; `panels` straight panels are produced.
pub fn graded_resample(points: &[Complex64], panels: usize) -> Vec<Complex64> {
    let mut cumulative = Vec::with_capacity(points.len());
    let mut total = 0.0;
    cumulative.push(0.0);
    for w in points.windows(2) {
        total += (w[1] - w[0]).norm();
        cumulative.push(total);
    }
    let mut out = Vec::with_capacity(panels + 1);
    let mut seg = 0;
    for i in 0..=panels {
        let s = i as f64 / panels as f64;
        let target = total * 0.5 * (1.0 - (std::f64::consts::PI * s).cos());
        while seg + 2 < cumulative.len() && cumulative[seg + 1] < target {
            seg += 1;
        }
        let span = cumulative[seg + 1] - cumulative[seg];
        let t = if span > 0.0 {
            ((target - cumulative[seg]) / span).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(points[seg] + (points[seg + 1] - points[seg]) * t);
    }
    out
}

/// `∫ log|z − ζ| ds` over the straight segment `[a, b]`.
pub fn segment_log_integral(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let len = (b - a).norm();
    let dir = (b - a) / len;
    let rel = (z - a) * dir.conj();
    // In the local frame the segment is [0, len] and z = (x0, y0).
    let (x0, y0) = (rel.re, rel.im.abs());
    let prim = |x: f64| {
        let r2 = x * x + y0 * y0;
        let log_term = if r2 > 0.0 { 0.5 * x * r2.ln() } else { 0.0 };
        let atan_term = if y0 > 0.0 { y0 * (x / y0).atan() } else { 0.0 };
        log_term - x + atan_term
    };
    prim(len - x0) - prim(-x0)
}

/// Logarithmic capacity of a union of open arcs by piecewise-constant
/// equilibrium charge with collocation at panel midpoints.
///
/// Each arc is resampled to `panels_per_arc` panels graded towards both ends.
pub fn capacity_of_arcs(arcs: &[Vec<Complex64>], panels_per_arc: usize) -> f64 {
    let mut panels: Vec<(Complex64, Complex64)> = Vec::new();
    for arc in arcs {
        let nodes = graded_resample(arc, panels_per_arc);
        for w in nodes.windows(2) {
            if (w[1] - w[0]).norm() > 0.0 {
                panels.push((w[0], w[1]));
            }
        }
    }
    let n = panels.len();
    // Unknowns: charge density on each panel, then the Robin constant V.
    let mut a = DMatrix::<f64>::zeros(n + 1, n + 1);
    let mut rhs = DVector::<f64>::zeros(n + 1);
    for (i, (pa, pb)) in panels.iter().enumerate() {
        let mid = 0.5 * (pa + pb);
        for (j, (qa, qb)) in panels.iter().enumerate() {
            a[(i, j)] = segment_log_integral(mid, *qa, *qb);
        }
        a[(i, n)] = -1.0;
        a[(n, i)] = (pb - pa).norm();
    }
    rhs[n] = 1.0;
    let sol = a.lu().solve(&rhs).expect("equilibrium system is non-singular");
    sol[n].exp()
}

/// Closed-form slit start for `n` rotated radial slits `[r, 1]` each carrying
/// harmonic measure `a` at the origin.
pub fn base_config_radius(n: u32, a: f64) -> f64 {
    let t = (std::f64::consts::FRAC_PI_2 * n as f64 * a).tan();
    let s = (t * t + 1.0).sqrt() - t;
    (s * s).powf(1.0 / n as f64)
}

/// Radius of the smallest disk containing `points` (Welzl's incremental
/// algorithm, in input order; shuffle for adversarial inputs).
pub fn min_enclosing_radius(points: &[Complex64]) -> f64 {
    fn circle2(a: Complex64, b: Complex64) -> (Complex64, f64) {
        let c = 0.5 * (a + b);
        (c, (a - c).norm())
    }
    fn circle3(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, f64) {
        let (bx, by) = ((b - a).re, (b - a).im);
        let (cx, cy) = ((c - a).re, (c - a).im);
        let d = 2.0 * (bx * cy - by * cx);
        if d.abs() < 1e-300 {
            // Collinear: the widest pair.
            let cands = [circle2(a, b), circle2(a, c), circle2(b, c)];
            return cands.into_iter().fold(cands[0], |m, x| if x.1 > m.1 { x } else { m });
        }
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let ux = (cy * b2 - by * c2) / d;
        let uy = (bx * c2 - cx * b2) / d;
        let centre = a + Complex64::new(ux, uy);
        (centre, (a - centre).norm())
    }
    let inside = |(c, r): (Complex64, f64), p: Complex64| (p - c).norm() <= r * (1.0 + 1e-12);
    let mut disk = (points[0], 0.0);
    for i in 1..points.len() {
        if inside(disk, points[i]) {
            continue;
        }
        disk = (points[i], 0.0);
        for j in 0..i {
            if inside(disk, points[j]) {
                continue;
            }
            disk = circle2(points[i], points[j]);
            for k in 0..j {
                if !inside(disk, points[k]) {
                    disk = circle3(points[i], points[j], points[k]);
                }
            }
        }
    }
    disk.1
}
