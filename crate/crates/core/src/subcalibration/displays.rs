//! Specialized closed forms for the certified exponents, transcribed term by
//! term in the `(h, k)` orientation where `h = 2` (the `(2, k)` family) or
//! `(h, k) = (3, 5)`. They are kept separate from the general-`d` evaluator so
//! the two can be checked against each other.

/// `|∇f|^2` for `(h, k) = (2, k)`, `d = 3/2`, `u > v`.
pub fn grad_norm_sq_2k_upper(u: f64, v: f64, k: f64) -> f64 {
    u * u * (25.0 * u * u + 2.0 * (2.0 * k - 17.0) * u * v + 9.0 * v * v) / 16.0
}

/// `div g` for `(h, k) = (2, k)`, `d = 3/2`, `u > v`.
pub fn div_g_2k_upper(u: f64, v: f64, k: f64) -> f64 {
    let num = (k - 1.0) * u.powf(2.5) * (u - v) * (25.0 * u * u + 12.0 * (k - 11.0) * u * v + 27.0 * v * v) / 64.0;
    num / grad_norm_sq_2k_upper(u, v, k).powf(1.5)
}

/// `|∇f|^2` for `(h, k) = (2, k)`, `d = 1`, `u < v`.
pub fn grad_norm_sq_2k_lower(u: f64, v: f64, k: f64) -> f64 {
    v * ((k - 1.0) * (u - 2.0 * v).powi(2) + u * v) / 4.0
}

/// `div g` for `(h, k) = (2, k)`, `d = 1`, `u < v`.
pub fn div_g_2k_lower(u: f64, v: f64, k: f64) -> f64 {
    let num = (k - 1.0) * (u - v) * v * ((k - 1.0) * u * u + (3.0 - 4.0 * k) * u * v + 4.0 * (k - 2.0) * v * v) / 8.0;
    num / grad_norm_sq_2k_lower(u, v, k).powf(1.5)
}

/// `|∇f|^2` for `(h, k) = (3, 5)`, `d = 3/4`, `u > v`.
pub fn grad_norm_sq_35_upper(u: f64, v: f64) -> f64 {
    u.sqrt() * (49.0 * u * u - 10.0 * u * v + 9.0 * v * v) / 32.0
}

/// `div g` for `(h, k) = (3, 5)`, `d = 3/4`, `u > v`.
pub fn div_g_35_upper(u: f64, v: f64) -> f64 {
    let num = u.powf(0.25) * (u - v) * (49.0 * u * u - 72.0 * u * v + 27.0 * v * v) / 32.0;
    num / grad_norm_sq_35_upper(u, v).powf(1.5)
}

/// `|∇f|^2` for `(h, k) = (3, 5)`, `d = 3/4`, `u < v`.
pub fn grad_norm_sq_35_lower(u: f64, v: f64) -> f64 {
    v.sqrt() * (9.0 * u * u - 34.0 * u * v + 49.0 * v * v) / 16.0
}

/// `div g` for `(h, k) = (3, 5)`, `d = 3/4`, `u < v`.
pub fn div_g_35_lower(u: f64, v: f64) -> f64 {
    let num = (u - v) * v.powf(0.25) * (27.0 * u * u - 123.0 * u * v + 98.0 * v * v) / 16.0;
    num / grad_norm_sq_35_lower(u, v).powf(1.5)
}

/// The displayed `div g` for the branch selected by `u` vs `v`, for a cone
/// given in the display orientation `(k, h)` with `h = 2` or `(k, h) = (5, 3)`.
/// Returns `None` for other orientations.
pub fn displayed_div_g(k: usize, h: usize, u: f64, v: f64) -> Option<f64> {
    match (k, h) {
        (5, 3) => Some(if u >= v { div_g_35_upper(u, v) } else { div_g_35_lower(u, v) }),
        (7..=11, 2) => {
            let kf = k as f64;
            Some(if u >= v { div_g_2k_upper(u, v, kf) } else { div_g_2k_lower(u, v, kf) })
        }
        _ => None,
    }
}
