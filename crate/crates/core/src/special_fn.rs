//! Real elliptic integrals of the first kind, the nome, `θ₄`, `Θ` and the
//! Jacobi Zeta function.
//!
//! Conventions:
//!
//! * `F(φ, k) = ∫₀^φ dθ / √(1 − k² sin²θ)` (amplitude form, modulus `k`).
//! * `q = exp(−π K'/K)`.
//! * `θ₄(v, q) = 1 + 2 Σ_{n≥1} (−1)ⁿ q^{n²} cos(2nv)`.
//! * `Θ(u) = θ₄(π u / (2K), q)` and `Z(u) = Θ'(u)/Θ(u)`.

use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)] // only needed where core lacks inherent float math
use num_traits::Float;

use crate::{Error, Result};

/// Hard cap on the number of theta-series terms.
pub const THETA_MAX_TERMS: usize = 64;
/// Series terms below this magnitude end the summation.
pub const THETA_TERM_TOL: f64 = 1e-16;

const AGM_MAX_ITER: usize = 40;

fn check_modulus(k: f64) -> Result<()> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain("k", k, "[0, 1)"));
    }
    Ok(())
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// `√(1 − k²)` without cancellation near `k = 1`.
fn complement(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).sqrt()
}

/// Complete elliptic integral of the first kind `K(k)`, via the AGM.
pub fn complete_k(k: f64) -> Result<f64> {
    check_modulus(k)?;
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(PI / (2.0 * agm(1.0, complement(k))))
}

/// Carlson's symmetric integral `R_F(x, y, z)` for non-negative arguments,
/// at most one of which is zero.
pub(crate) fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 1e-3;
    const C1: f64 = 1.0 / 24.0;
    const C2: f64 = 0.1;
    const C3: f64 = 3.0 / 44.0;
    const C4: f64 = 1.0 / 14.0;

    let (mut x, mut y, mut z) = (x, y, z);
    let (mut mean, mut dx, mut dy, mut dz);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        mean = (x + y + z) / 3.0;
        dx = (mean - x) / mean;
        dy = (mean - y) / mean;
        dz = (mean - z) / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            break;
        }
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 + (C1 * e2 - C2 - C3 * e3) * e2 + C4 * e3) / mean.sqrt()
}

/// Incomplete elliptic integral of the first kind in amplitude form,
/// `F(φ, k) = ∫₀^φ dθ / √(1 − k² sin²θ)` for `0 ≤ φ ≤ π/2`.
pub fn incomplete_f(phi: f64, k: f64) -> Result<f64> {
    check_modulus(k)?;
    if !(0.0..=FRAC_PI_2).contains(&phi) {
        return Err(Error::domain("phi", phi, "[0, π/2]"));
    }
    if phi == 0.0 {
        return Ok(0.0);
    }
    if k == 0.0 {
        return Ok(phi);
    }
    let (s, c) = phi.sin_cos();
    Ok(s * carlson_rf(c * c, (1.0 - k * s) * (1.0 + k * s), 1.0))
}

/// `θ₄(v, q)` summed until the term magnitude drops below [`THETA_TERM_TOL`].
pub fn theta4(v: f64, q: f64) -> Result<f64> {
    let (value, _) = theta4_with_derivative(v, q)?;
    Ok(value)
}

/// `θ₄(v, q)` and `∂θ₄/∂v`.
pub fn theta4_with_derivative(v: f64, q: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::domain("q", q, "[0, 1)"));
    }
    let mut value = 1.0;
    let mut slope = 0.0;
    if q == 0.0 {
        return Ok((value, slope));
    }
    let mut sign = -1.0;
    for n in 1..=THETA_MAX_TERMS {
        let nf = n as f64;
        let weight = q.powf(nf * nf);
        if weight < THETA_TERM_TOL {
            break;
        }
        let (s, c) = (2.0 * nf * v).sin_cos();
        value += 2.0 * sign * weight * c;
        slope -= 4.0 * nf * sign * weight * s;
        sign = -sign;
    }
    Ok((value, slope))
}

/// The modulus `k` together with the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    pub k: f64,
    pub k_complement: f64,
    /// `K(k)`.
    pub big_k: f64,
    /// `K(k')`; infinite at `k = 0`.
    pub big_k_complement: f64,
    /// The nome `exp(−π K'/K)`.
    pub q: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        check_modulus(k)?;
        let k_complement = complement(k);
        let big_k = complete_k(k)?;
        let (big_k_complement, q) = if k == 0.0 {
            (f64::INFINITY, 0.0)
        } else {
            let kc = PI / (2.0 * agm(1.0, k));
            (kc, (-PI * kc / big_k).exp())
        };
        Ok(EllipticModulus {
            k,
            k_complement,
            big_k,
            big_k_complement,
            q,
        })
    }

    fn theta_arg(&self, u: f64) -> f64 {
        PI * u / (2.0 * self.big_k)
    }

    /// `Θ(u)`.
    pub fn theta(&self, u: f64) -> f64 {
        // q < 1 is guaranteed by construction.
        theta4_with_derivative(self.theta_arg(u), self.q)
            .map(|(v, _)| v)
            .unwrap_or(f64::NAN)
    }

    /// `Z(u) = Θ'(u)/Θ(u)`, from the logarithmic derivative of the series.
    pub fn zeta(&self, u: f64) -> f64 {
        let (value, slope) =
            theta4_with_derivative(self.theta_arg(u), self.q).unwrap_or((f64::NAN, f64::NAN));
        PI / (2.0 * self.big_k) * slope / value
    }
}

/// `Θ(u) = θ₄(πu/(2K(k)), q(k))`.
pub fn big_theta(u: f64, k: f64) -> Result<f64> {
    Ok(EllipticModulus::new(k)?.theta(u))
}

/// Jacobi Zeta function `Z(u, k)`.
pub fn jacobi_zeta(u: f64, k: f64) -> Result<f64> {
    Ok(EllipticModulus::new(k)?.zeta(u))
}

/// Nome `q(k) = exp(−πK'/K)`.
pub fn nome(k: f64) -> Result<f64> {
    Ok(EllipticModulus::new(k)?.q)
}
