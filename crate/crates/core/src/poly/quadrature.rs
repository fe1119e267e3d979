//! Adaptive Gauss–Kronrod quadrature, used as an oracle for `p_k` through
//! `p_k(x) = ∫₀ˣ (1−y²)^k dy / ∫₀¹ (1−y²)^k dy`.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule
// (QUADPACK qk15 constants). The Gauss nodes are XGK[1], XGK[3], XGK[5], XGK[7].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 50;

/// One G7/K15 panel: (Kronrod estimate, |Kronrod − Gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol` by recursive
/// bisection, splitting the tolerance between halves.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    adapt(f, lo, hi, tol, 0).ok_or(Error::Quadrature { lo, hi, tol })
}

fn adapt<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64, depth: usize) -> Option<f64> {
    let (val, err) = gk15(f, lo, hi);
    if !val.is_finite() {
        return None;
    }
    if err <= tol {
        return Some(val);
    }
    if depth >= MAX_DEPTH {
        return None;
    }
    let mid = 0.5 * (lo + hi);
    Some(adapt(f, lo, mid, 0.5 * tol, depth + 1)? + adapt(f, mid, hi, 0.5 * tol, depth + 1)?)
}

/// `∫₀ˣ (1−y²)^k dy / ∫₀¹ (1−y²)^k dy` to absolute accuracy `quad_tol`.
pub fn integral_step_oracle(x: f64, k: usize, quad_tol: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 {
        return Err(Error::Domain(format!("x must lie in [-1, 1], got {x}")));
    }
    if !(quad_tol > 0.0 && quad_tol <= 1e-6) {
        return Err(Error::Domain(format!(
            "quad_tol must lie in (0, 1e-6], got {quad_tol}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.abs() == 1.0 {
        return Ok(x);
    }
    let kernel = |y: f64| (1.0 - y * y).powi(k as i32);
    // The denominator shrinks like √(π/4k); size its tolerance to it so the
    // ratio error stays under quad_tol/4 + quad_tol/4.
    let rough = integrate(&kernel, 0.0, 1.0, quad_tol)?;
    let den_tol = 0.25 * quad_tol * rough.min(1.0);
    let den = integrate(&kernel, 0.0, 1.0, den_tol)?;
    let num = integrate(&kernel, 0.0, x.abs(), 0.25 * quad_tol * den)?;
    Ok(x.signum() * num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::sign::p_k_eval;

    #[test]
    fn panel_is_exact_for_low_degree() {
        // a 15-point Kronrod rule integrates degree ≤ 22 exactly
        for deg in 0..=22 {
            let f = |x: f64| x.powi(deg);
            let (v, _) = gk15(&f, 0.0, 1.0);
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((v - exact).abs() < 1e-14, "degree {deg}: {v} vs {exact}");
        }
    }

    #[test]
    fn adaptive_handles_peaks() {
        let f = |x: f64| 1.0 / (1e-4 + x * x);
        let v = integrate(&f, -1.0, 1.0, 1e-10).unwrap();
        let exact = 2.0 * 100.0 * (100.0f64).atan();
        assert!((v - exact).abs() < 1e-8);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(integral_step_oracle(1.0, 5, 1e-10).unwrap(), 1.0);
        assert_eq!(integral_step_oracle(0.0, 5, 1e-10).unwrap(), 0.0);
        let tol = 1e-12;
        let v = integral_step_oracle(0.5, 3, tol).unwrap();
        assert!((v - p_k_eval(0.5, 3).unwrap()).abs() <= tol + 1e-12);
        let v = integral_step_oracle(-0.5, 3, tol).unwrap();
        assert!((v + p_k_eval(0.5, 3).unwrap()).abs() <= tol + 1e-12);
    }

    #[test]
    fn oracle_rejects_bad_input() {
        assert!(integral_step_oracle(1.5, 3, 1e-8).is_err());
        assert!(integral_step_oracle(0.5, 3, 1e-3).is_err());
        assert!(integral_step_oracle(0.5, 3, 0.0).is_err());
    }
}
