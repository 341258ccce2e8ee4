//! Complex error function.
//!
//! Two regimes after folding the argument into the first quadrant:
//!
//! * Maclaurin series wherever the real part is moderate (|Re z| ≤ 2) or the
//!   modulus is small (|z| < 3). The cancellation in the series grows like
//!   exp(2 Re(z)²), so this keeps the relative error near 1e-13.
//! * Laplace continued fraction for erfc(z) = exp(-z²)/√π · K(z) otherwise,
//!   evaluated bottom-up. With Re z > 2 and |z| ≥ 3 it converges quickly.

use crate::C64;

const FRAC_2_SQRT_PI: f64 = core::f64::consts::FRAC_2_SQRT_PI;
const SERIES_MAX_TERMS: usize = 20_000;
const CONTINUED_FRACTION_DEPTH: usize = 160;

/// Error function of a complex argument.
pub fn erf(z: C64) -> C64 {
    if z.re == 0.0 && z.im == 0.0 {
        return C64::new(0.0, 0.0);
    }
    // erf(-z) = -erf(z), erf(z*) = erf(z)*
    let flip_sign = z.re < 0.0;
    let w0 = if flip_sign { -z } else { z };
    let conjugate = w0.im < 0.0;
    let w = if conjugate { w0.conj() } else { w0 };

    let mut value = if w.re <= 2.0 || w.norm() < 3.0 {
        erf_series(w)
    } else {
        C64::new(1.0, 0.0) - erfc_continued_fraction(w)
    };
    if conjugate {
        value = value.conj();
    }
    if flip_sign {
        value = -value;
    }
    value
}

fn erf_series(z: C64) -> C64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let floor = (z.norm_sqr() as usize).max(4);
    for n in 1..SERIES_MAX_TERMS {
        term = term * (-z2) / n as f64;
        let contribution = term / (2 * n + 1) as f64;
        sum += contribution;
        if n > floor && contribution.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * FRAC_2_SQRT_PI
}

/// erfc(z) for Re z > 0 via the Laplace continued fraction
/// K(z) = 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))).
fn erfc_continued_fraction(z: C64) -> C64 {
    let mut tail = z;
    for k in (1..=CONTINUED_FRACTION_DEPTH).rev() {
        tail = z + (k as f64 * 0.5) / tail;
    }
    let k = C64::new(1.0, 0.0) / tail;
    (-z * z).exp() * k * (FRAC_2_SQRT_PI * 0.5)
}
