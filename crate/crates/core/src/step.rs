//! Applying the sign and step polynomials to an operator known only through
//! approximate applications.
//!
//! With `B = 2S − I`, the step iterate after `q` rounds is
//! `s_q = ½(y + p_q(B)y)`, which tends to the projection onto the eigenvectors
//! of `S` with eigenvalue above ½. Only products with `S` are used, and the
//! recurrence grows operator errors linearly in `q`.

use crate::error::{check_finite, check_len, Error, Result};
use crate::operator::Operator;
use crate::poly::sign::ceil_tolerant;
use crate::vecops::{axpy, sub};

/// Largest `k` for which the linear error growth `7kε` stays below 1.
pub fn iteration_budget(err_bound: f64) -> usize {
    if err_bound <= 0.0 {
        usize::MAX
    } else {
        (1.0 / (7.0 * err_bound)).floor() as usize
    }
}

pub fn check_budget(requested: usize, err_bound: f64) -> Result<()> {
    let allowed = iteration_budget(err_bound);
    if requested > allowed {
        return Err(Error::BudgetExhausted {
            requested,
            allowed,
            err_bound,
        });
    }
    Ok(())
}

/// Iterations needed for `‖s_q − s(S)y‖ ≤ ε‖y‖` when every eigenvalue of `S`
/// is at least `gamma` away from ½.
///
/// The eigenvalues of `2S − I` are then at least `2γ` from zero, giving
/// `q = ⌈(2γ)⁻²·ln(2/ε)⌉`. `strict` uses margin `γ` instead, four times the
/// iterations.
pub fn default_step_iterations(gamma: f64, eps: f64, strict: bool) -> Result<usize> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let margin = if strict { gamma } else { 2.0 * gamma };
    Ok(ceil_tolerant((2.0 / eps).ln() / (margin * margin)).max(1))
}

/// Operator accuracy `ε²γ²/8` under which the step iteration meets `ε`.
pub fn step_noise_budget(gamma: f64, eps: f64) -> f64 {
    eps * eps * gamma * gamma / 8.0
}

/// Vectors carried across rounds of the step recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    /// Running approximation of `s(S)y`.
    pub s: Vec<f64>,
    /// Latest increment, half the current sign-polynomial term.
    pub w: Vec<f64>,
    /// Rounds completed.
    pub k: usize,
}

impl IterateState {
    /// `s₀ = S(y)`, `w₀ = s₀ − ½y`.
    pub fn start<O: Operator>(op: &O, y: &[f64]) -> Result<Self> {
        check_len("step input", op.dim(), y.len())?;
        check_finite("step input", y)?;
        let s = op.apply(y).map_err(|e| e.at_iteration(0))?;
        let mut w = s.clone();
        axpy(-0.5, y, &mut w);
        Ok(IterateState { s, w, k: 0 })
    }

    /// `w ← 4·(2k+1)/(2k+2)·S(w − S(w))`, `s ← s + w`.
    pub fn advance<O: Operator>(&mut self, op: &O) -> Result<()> {
        let k = self.k;
        let label = |e: Error| e.at_iteration(k + 1);
        let sw = op.apply(&self.w).map_err(label)?;
        let t = sub(&self.w, &sw);
        let mut w = op.apply(&t).map_err(label)?;
        let scale = 4.0 * (2 * k + 1) as f64 / (2 * k + 2) as f64;
        w.iter_mut().for_each(|v| *v *= scale);
        axpy(1.0, &w, &mut self.s);
        self.w = w;
        self.k += 1;
        Ok(())
    }
}

/// `q` rounds of the step recurrence, returning `s_q ≈ ½(y + p_q(2S−I)y)`.
pub fn apply_step<O: Operator>(op: &O, y: &[f64], q: usize) -> Result<Vec<f64>> {
    if q == 0 {
        return Err(Error::Domain(
            "step iteration count must be at least 1".into(),
        ));
    }
    check_budget(q, op.err_bound())?;
    let mut state = IterateState::start(op, y)?;
    for _ in 0..q {
        state.advance(op)?;
    }
    Ok(state.s)
}

/// Runs `t_{j+1} = ((2j+1)/(2j+2))·C(t_j)`, `p_{j+1} = p_j + t_{j+1}` for `k`
/// rounds, where `C` approximates `I − B²`. Starting from `t₀ = p₀ = By`
/// this yields `t_k(B)y` and `p_k(B)y` with error at most `7kε‖y‖` for a
/// `C` accurate to `ε`.
pub fn apply_sign_stable<O: Operator>(
    c: &O,
    t0: &[f64],
    p0: &[f64],
    k: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_len("sign recurrence t0", c.dim(), t0.len())?;
    check_len("sign recurrence p0", c.dim(), p0.len())?;
    check_budget(k, c.err_bound())?;
    let mut t = t0.to_vec();
    let mut p = p0.to_vec();
    for j in 0..k {
        let mut next = c.apply(&t).map_err(|e| e.at_iteration(j + 1))?;
        let scale = (2 * j + 1) as f64 / (2 * j + 2) as f64;
        next.iter_mut().for_each(|v| *v *= scale);
        axpy(1.0, &next, &mut p);
        t = next;
    }
    Ok((t, p))
}
