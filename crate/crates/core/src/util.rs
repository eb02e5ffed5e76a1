use num_complex::Complex64;
use std::f64::consts::PI;

/// sin(πx) with exact argument reduction, so that sin_pi(m + ε) for integer
/// m is accurate to machine precision even when ε ~ 1e-9.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let m = x.round();
    let f = x - m;
    let s = (PI * f).sin();
    if (m as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// cos(πx) with the same reduction as [`sin_pi`].
pub(crate) fn cos_pi(x: f64) -> f64 {
    let m = x.round();
    let f = x - m;
    let c = (PI * f).cos();
    if (m as i64) % 2 == 0 {
        c
    } else {
        -c
    }
}

/// e^{iπx}.
pub(crate) fn cis_pi(x: f64) -> Complex64 {
    Complex64::new(cos_pi(x), sin_pi(x))
}

/// e^{iθ}.
pub(crate) fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}
