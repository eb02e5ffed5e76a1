//! Integer-order expansion of the fractional phase factor:
//! e^{iαφ} = Σ_n c_n e^{inφ} with c_n = (sin(πα)/π) · e^{iπα} / (α − n).

use super::FractionalCharge;
use crate::util::{cis, cis_pi, sin_pi};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub(crate) fn coefficient_unchecked(alpha: f64, n: i64) -> Complex64 {
    cis_pi(alpha) * (sin_pi(alpha) / PI) / (alpha - n as f64)
}

/// Fourier coefficient c_n of e^{iαφ} on [0, 2π).
///
/// Errors when α is an integer: the closed form has a pole at α = n and the
/// coefficients degenerate to the Kronecker delta c_n = δ_{n,α}, which the
/// caller must use instead.
pub fn fourier_coefficient(alpha: FractionalCharge, n: i64) -> Result<Complex64> {
    if alpha.is_integer() {
        return Err(Error::Domain(format!(
            "fourier_coefficient is singular at integer alpha = {}; use the delta limit c_n = δ(n, alpha)",
            alpha.value()
        )));
    }
    Ok(coefficient_unchecked(alpha.value(), n))
}

/// Symmetric partial sum Σ_{n=−N}^{N} c_n e^{inφ}.
///
/// Converges pointwise to e^{iαφ} away from the branch points φ ∈ {0, 2π}.
/// For integer α the delta limit is taken: the sum is exactly e^{iαφ} once
/// N reaches |α| and zero before that.
pub fn reconstruct_phase_series(alpha: FractionalCharge, phi: f64, n_terms: usize) -> Complex64 {
    let n = n_terms as i64;
    if alpha.is_integer() {
        let m = alpha.rounded();
        return if m.abs() <= n {
            cis(m as f64 * phi)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let a = alpha.value();
    let prefactor = cis_pi(a) * (sin_pi(a) / PI);
    // e^{inφ} marched by incremental rotation from n = −N
    let step = cis(phi);
    let mut phase = cis(-(n as f64) * phi);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in -n..=n {
        acc += phase / (a - j as f64);
        phase *= step;
    }
    prefactor * acc
}
