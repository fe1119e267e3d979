//! Chebyshev-basis polynomials: truncated expansions of `x^s` and the
//! lower-degree sign approximation obtained by substituting them into `p_k`.

use crate::error::{Error, Result};
use crate::poly::sign::ceil_tolerant;

/// Highest degree for which monomial coefficients are accepted.
pub const MAX_MONOMIAL_DEGREE: usize = 30;

/// Points used when a sup-norm claim is checked numerically.
pub const GRID_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Monomial,
    Chebyshev,
}

/// A polynomial stored by its coefficients in a tagged basis,
/// lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedPoly {
    basis: Basis,
    coefficients: Vec<f64>,
}

impl CompressedPoly {
    pub fn new(basis: Basis, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Domain(
                "polynomial needs at least one coefficient".into(),
            ));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        if basis == Basis::Monomial && coefficients.len() > MAX_MONOMIAL_DEGREE + 1 {
            return Err(Error::Domain(format!(
                "monomial basis is limited to degree {MAX_MONOMIAL_DEGREE}; use Chebyshev"
            )));
        }
        Ok(CompressedPoly {
            basis,
            coefficients,
        })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.basis {
            Basis::Monomial => self
                .coefficients
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * x + c),
            Basis::Chebyshev => clenshaw(&self.coefficients, x),
        }
    }
}

/// `Σ c_j T_j(x)` by the backward recurrence.
pub fn clenshaw(coefficients: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coefficients.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coefficients[0] + x * b1 - b2
}

/// `C(n, k)` as a float: exact integer arithmetic while it fits, log-space
/// accumulation beyond that.
fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    if n <= 120 {
        let mut c: u128 = 1;
        for i in 1..=k {
            c = c * (n - k + i) as u128 / i as u128;
        }
        return c as f64;
    }
    (1..=k)
        .map(|i| ((n - k + i) as f64 / i as f64).ln())
        .sum::<f64>()
        .exp()
}

/// `2^{-s} C(s, (s−j)/2)` (doubled for `j > 0`): the coefficient of `T_j` in
/// `x^s`.
fn power_coefficient(s: usize, j: usize) -> f64 {
    let c = binomial(s, (s - j) / 2);
    let scale = if j == 0 { -(s as i32) } else { 1 - s as i32 };
    if s <= 120 {
        c * 2f64.powi(scale)
    } else {
        // C(s, ·) overflows long before 2^{-s} underflows; combine in logs
        (c.ln() + scale as f64 * std::f64::consts::LN_2).exp()
    }
}

/// Chebyshev expansion of `x^s` truncated at degree `d`.
///
/// The sup error on `[−1, 1]` is at most `2·exp(−d²/(2s))`, and zero once
/// `d ≥ s`.
pub fn chebyshev_monomial_approx(s: usize, d: usize) -> Result<CompressedPoly> {
    if s == 0 || d == 0 {
        return Err(Error::Domain(format!(
            "monomial approximation needs s, d >= 1, got s = {s}, d = {d}"
        )));
    }
    let top = d.min(s);
    let mut coefficients = vec![0.0; top + 1];
    for j in (s % 2..=top).step_by(2) {
        coefficients[j] = power_coefficient(s, j);
    }
    CompressedPoly::new(Basis::Chebyshev, coefficients)
}

/// Chebyshev coefficients of the degree-`degree` interpolant of `f` at the
/// Chebyshev points of the first kind. Exact for polynomials of that degree.
fn interpolate(f: impl Fn(f64) -> f64, degree: usize) -> Vec<f64> {
    let m = degree + 1;
    let nodes: Vec<f64> = (0..m)
        .map(|i| std::f64::consts::PI * (i as f64 + 0.5) / m as f64)
        .collect();
    let values: Vec<f64> = nodes.iter().map(|t| f(t.cos())).collect();
    (0..m)
        .map(|j| {
            let s: f64 = nodes
                .iter()
                .zip(&values)
                .map(|(t, v)| v * (j as f64 * t).cos())
                .sum();
            let c = 2.0 * s / m as f64;
            if j == 0 {
                0.5 * c
            } else {
                c
            }
        })
        .collect()
}

/// Degree parameters of [`compressed_sign_poly`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionPlan {
    /// Terms of the uncompressed `p_k`, `⌈α⁻²ln(2/ε)⌉`.
    pub k: usize,
    /// Chebyshev truncation degree for each `(1−x²)^i`.
    pub d: usize,
}

impl CompressionPlan {
    /// `d = ⌈√(2k·ln((k+1)/(ε/2)))⌉`, taking the coefficient mass `A = k+1`
    /// from `|f_i| ≤ 1` over the `k+1` terms.
    pub fn new(alpha: f64, eps: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Domain(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if !(eps > 0.0 && eps < 0.5) {
            return Err(Error::Domain(format!(
                "eps must lie in (0, 0.5), got {eps}"
            )));
        }
        let k = ceil_tolerant((2.0 / eps).ln() / (alpha * alpha)).max(1);
        let mass = (k + 1) as f64;
        let d = ((2.0 * k as f64 * (mass / (0.5 * eps)).ln()).sqrt()).ceil() as usize;
        Ok(CompressionPlan { k, d: d.max(1) })
    }
}

/// Odd polynomial `q` with `|sgn(x) − q(x)| ≤ eps` on `|x| ∈ [alpha, 1]`,
/// built as `x·Q(1−x²)` where `Q` replaces each `(1−x²)^i` term of `p_k` with
/// its truncated Chebyshev expansion. Returned in the Chebyshev basis in `x`.
///
/// The bound is certified on a uniform grid of [`GRID_POINTS`] points only.
/// If the grid check fails the truncation degree is doubled once before
/// giving up.
pub fn compressed_sign_poly(alpha: f64, eps: f64) -> Result<CompressedPoly> {
    let plan = CompressionPlan::new(alpha, eps)?;
    let first = compress_with(plan.k, plan.d)?;
    let err = sign_grid_error(&first, alpha);
    if err <= eps {
        return Ok(first);
    }
    let second = compress_with(plan.k, 2 * plan.d)?;
    let err = sign_grid_error(&second, alpha);
    if err <= eps {
        return Ok(second);
    }
    Err(Error::GridCheck {
        max_error: err,
        tolerance: eps,
    })
}

fn compress_with(k: usize, d: usize) -> Result<CompressedPoly> {
    // Q(u) = Σ_i c_i·p_{i,d}(u) in the Chebyshev basis in u
    let mut inner = vec![0.0; d.min(k) + 1];
    inner[0] = 1.0; // i = 0 term, c_0 = 1
    let mut c = 1.0;
    for i in 1..=k {
        c *= (2 * i - 1) as f64 / (2 * i) as f64;
        let term = chebyshev_monomial_approx(i, d)?;
        for (acc, t) in inner.iter_mut().zip(term.coefficients()) {
            *acc += c * t;
        }
    }
    let degree = 2 * (inner.len() - 1) + 1;
    let mut coefficients = interpolate(|x| x * clenshaw(&inner, 1.0 - x * x), degree);
    for c in coefficients.iter_mut().step_by(2) {
        *c = 0.0;
    }
    CompressedPoly::new(Basis::Chebyshev, coefficients)
}

/// `max |1 − q(x)|` over a uniform grid of `[alpha, 1]`.
pub fn sign_grid_error(q: &CompressedPoly, alpha: f64) -> f64 {
    (0..GRID_POINTS)
        .map(|i| alpha + (1.0 - alpha) * i as f64 / (GRID_POINTS - 1) as f64)
        .map(|x| (1.0 - q.eval(x)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_error(p: &CompressedPoly, s: usize) -> f64 {
        (0..GRID_POINTS)
            .map(|i| -1.0 + 2.0 * i as f64 / (GRID_POINTS - 1) as f64)
            .map(|x| (p.eval(x) - x.powi(s as i32)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn clenshaw_matches_definition() {
        // T_3(x) = 4x³ − 3x
        let x = 0.3;
        assert!((clenshaw(&[0.0, 0.0, 0.0, 1.0], x) - (4.0 * x * x * x - 3.0 * x)).abs() < 1e-15);
        assert_eq!(clenshaw(&[2.5], x), 2.5);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(
            binomial(120, 60),
            96614908840363322603893139521372656u128 as f64
        );
        let big = binomial(200, 100);
        assert!((big / 9.054851465610328e58 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn monomial_examples() {
        let p = chebyshev_monomial_approx(1, 1).unwrap();
        assert_eq!(p.coefficients(), &[0.0, 1.0]);
        for s in 1..=20 {
            let p = chebyshev_monomial_approx(s, s + 3).unwrap();
            assert!(grid_error(&p, s) < 1e-13);
        }
        let p = chebyshev_monomial_approx(16, 8).unwrap();
        assert!(grid_error(&p, 16) <= 2.0 * (-2.0f64).exp());
        assert!(chebyshev_monomial_approx(0, 3).is_err());
    }

    #[test]
    fn large_powers_stay_finite() {
        let p = chebyshev_monomial_approx(400, 60).unwrap();
        assert!(p.coefficients().iter().all(|c| c.is_finite()));
        assert!(grid_error(&p, 400) <= 2.0 * (-3600.0f64 / 800.0).exp());
    }

    #[test]
    fn monomial_basis_limit() {
        assert!(CompressedPoly::new(Basis::Monomial, vec![1.0; 31]).is_ok());
        assert!(CompressedPoly::new(Basis::Monomial, vec![1.0; 32]).is_err());
        let p = CompressedPoly::new(Basis::Monomial, vec![1.0, 0.0, 2.0]).unwrap();
        assert_eq!(p.eval(2.0), 9.0);
    }

    #[test]
    fn compression_plan_example() {
        let plan = CompressionPlan::new(0.25, 0.1).unwrap();
        assert_eq!(plan.k, 48);
        assert_eq!(plan.d, 26);
    }

    #[test]
    fn compressed_is_odd_and_accurate() {
        let q = compressed_sign_poly(0.25, 0.1).unwrap();
        assert!(q.degree() < crate::poly::sign::p_k_degree(48));
        assert!(sign_grid_error(&q, 0.25) <= 0.1);
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            assert!((q.eval(x) + q.eval(-x)).abs() <= 1e-10);
        }
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let c = interpolate(|x| 4.0 * x * x * x - 3.0 * x, 3);
        let expect = [0.0, 0.0, 0.0, 1.0];
        for (a, b) in c.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
