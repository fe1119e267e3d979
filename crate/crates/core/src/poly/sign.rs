//! The odd polynomials `p_k(x) = Σ_{i=0}^k x(1−x²)^i Π_{j=1}^i (2j−1)/(2j)`
//! that approach `sgn(x)` on `[−1, 1]`.

use crate::error::{Error, Result};

fn check_unit_interval(x: f64) -> Result<()> {
    if x.is_nan() || x.abs() > 1.0 {
        return Err(Error::Domain(format!("x must lie in [-1, 1], got {x}")));
    }
    Ok(())
}

/// Evaluates `p_k(x)` with the term recurrence
/// `t_{i+1} = t_i·(1−x²)·(2i+1)/(2i+2)`, `t_0 = x`.
///
/// `x` enters only as the leading factor and through `x²`, so
/// `p_k(−x) == −p_k(x)` holds bit for bit.
pub fn p_k_eval(x: f64, k: usize) -> Result<f64> {
    check_unit_interval(x)?;
    let c = 1.0 - x * x;
    let mut t = x;
    let mut sum = x;
    for i in 0..k {
        t *= c * (2 * i + 1) as f64 / (2 * i + 2) as f64;
        sum += t;
    }
    Ok(sum)
}

/// Degree of `p_k` as a polynomial in `x`.
pub fn p_k_degree(k: usize) -> usize {
    2 * k + 1
}

/// The soft step `½(1 + p_q(2σ−1))` on `σ ∈ [0, 1]`.
pub fn soft_step_eval(sigma: f64, q: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::Domain(format!(
            "sigma must lie in [0, 1], got {sigma}"
        )));
    }
    Ok(0.5 * (1.0 + p_k_eval(2.0 * sigma - 1.0, q)?))
}

/// A term count `k` for which `|sgn(x) − p_k(x)| ≤ eps` on `|x| ∈ [alpha, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignPolyDegree {
    pub k: usize,
    pub alpha: f64,
    pub eps: f64,
}

/// `⌈x⌉` that forgives a few ulps of overshoot, so `4·ln(e⁴)` rounds to 16.
pub(crate) fn ceil_tolerant(x: f64) -> usize {
    (x * (1.0 - 1e-12)).ceil().max(0.0) as usize
}

/// `k = ⌈alpha⁻²·ln(1/eps)⌉`, at least 1.
pub fn sign_poly_degree(alpha: f64, eps: f64) -> Result<SignPolyDegree> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let k = ceil_tolerant((1.0 / eps).ln() / (alpha * alpha)).max(1);
    Ok(SignPolyDegree { k, alpha, eps })
}

/// Upper bound `(x√k)⁻¹·e^{−kx²}` on `sgn(x) − p_k(x)` for `x ∈ (0, 1]`.
pub fn sign_error_bound(x: f64, k: usize) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain(format!("x must lie in (0, 1], got {x}")));
    }
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let kf = k as f64;
    Ok((-kf * x * x).exp() / (x * kf.sqrt()))
}
