//! Per-iteration error records for convergence experiments.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceAlgorithm {
    Projection,
    Regression,
}

impl fmt::Display for TraceAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceAlgorithm::Projection => "projection",
            TraceAlgorithm::Regression => "regression",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub rel_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceMetadata {
    pub gamma: f64,
    pub lambda: f64,
    pub eps: f64,
    pub seed: Option<u64>,
}

/// Relative errors indexed by iteration, starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub algorithm: TraceAlgorithm,
    pub records: Vec<TraceRecord>,
    pub metadata: TraceMetadata,
}

/// Least-squares line through `(iteration, ln rel_error)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl ConvergenceTrace {
    pub fn new(algorithm: TraceAlgorithm, metadata: TraceMetadata) -> Self {
        ConvergenceTrace {
            algorithm,
            records: Vec::new(),
            metadata,
        }
    }

    /// Appends the next iteration's error.
    pub fn push(&mut self, rel_error: f64) {
        let iteration = self.records.len();
        self.records.push(TraceRecord {
            iteration,
            rel_error,
        });
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.rel_error).collect()
    }

    pub fn final_error(&self) -> Option<f64> {
        self.records.last().map(|r| r.rel_error)
    }

    /// First iteration whose error is at most `threshold`.
    pub fn first_below(&self, threshold: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.rel_error <= threshold)
            .map(|r| r.iteration)
    }

    /// True when no error after `burn_in` exceeds its predecessor by more
    /// than a relative `slack`.
    pub fn is_monotone_after(&self, burn_in: usize, slack: f64) -> bool {
        self.records
            .iter()
            .skip(burn_in)
            .zip(self.records.iter().skip(burn_in + 1))
            .all(|(a, b)| b.rel_error <= a.rel_error * (1.0 + slack))
    }

    /// Fit of the log-error against iteration, skipping `burn_in` records.
    /// Zero errors are clamped to the smallest positive float. `None` when
    /// fewer than two records remain.
    pub fn log_linear_fit(&self, burn_in: usize) -> Option<LinearFit> {
        let pts: Vec<(f64, f64)> = self
            .records
            .iter()
            .skip(burn_in)
            .map(|r| (r.iteration as f64, r.rel_error.max(f64::MIN_POSITIVE).ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
        let slope = sxy / sxx;
        let r_squared = if syy == 0.0 {
            1.0
        } else {
            sxy * sxy / (sxx * syy)
        };
        Some(LinearFit {
            slope,
            intercept: my - slope * mx,
            r_squared,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_of(errors: &[f64]) -> ConvergenceTrace {
        let mut t = ConvergenceTrace::new(TraceAlgorithm::Projection, TraceMetadata::default());
        errors.iter().for_each(|&e| t.push(e));
        t
    }

    #[test]
    fn iterations_count_from_zero() {
        let t = trace_of(&[1.0, 0.5, 0.25]);
        let its: Vec<usize> = t.records.iter().map(|r| r.iteration).collect();
        assert_eq!(its, vec![0, 1, 2]);
        assert_eq!(t.final_error(), Some(0.25));
        assert_eq!(t.first_below(0.5), Some(1));
        assert_eq!(t.first_below(0.1), None);
    }

    #[test]
    fn geometric_fit_is_exact() {
        let errors: Vec<f64> = (0..20).map(|i| 3.0 * 0.5f64.powi(i)).collect();
        let fit = trace_of(&errors).log_linear_fit(3).unwrap();
        assert!((fit.slope - 0.5f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(trace_of(&[1.0]).log_linear_fit(0).is_none());
    }

    #[test]
    fn monotonicity() {
        let t = trace_of(&[1.0, 2.0, 0.5, 0.4, 0.41]);
        assert!(!t.is_monotone_after(0, 0.05));
        assert!(!t.is_monotone_after(1, 0.0));
        assert!(t.is_monotone_after(1, 0.05));
    }
}
