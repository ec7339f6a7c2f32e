//! Running trajectory average S(t) = (1/(t+1))·Σ_{τ=0}^{t} X(τ).
//!
//! States are piecewise constant between their own updates, so the average
//! is maintained lazily: each entry accumulates value·duration only when the
//! agent is touched (or read), one fused multiply per segment instead of one
//! addition per tick. That keeps per-tick cost O(touched) and accumulates
//! far less rounding than term-by-term summation.

use crate::dynamics::{Observer, TickEvent};

#[derive(Debug, Clone)]
pub struct RunningAverage {
    /// Finalized Σ_{τ=0}^{pend[i]−1} X_i(τ).
    sums: Vec<f64>,
    /// Current value X_i(pend[i]) (constant from pend[i] through now).
    current: Vec<f64>,
    pend: Vec<u64>,
    t: u64,
}

impl RunningAverage {
    /// Starts at t = 0 with S(0) = X(0).
    pub fn new(x0: &[f64]) -> Self {
        Self {
            sums: vec![0.0; x0.len()],
            current: x0.to_vec(),
            pend: vec![0; x0.len()],
            t: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    /// Ticks observed so far (the average covers t+1 samples).
    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn count(&self) -> u64 {
        self.t + 1
    }

    /// Advances to tick `t` with the entries that changed.
    #[inline]
    pub fn record(&mut self, t: u64, touched: &[(usize, f64)]) {
        for &(i, value) in touched {
            let dt = (t - self.pend[i]) as f64;
            self.sums[i] += self.current[i] * dt;
            self.pend[i] = t;
            self.current[i] = value;
        }
        self.t = t;
    }

    /// Advances to tick `t` with a full state snapshot (offline streams).
    pub fn record_dense(&mut self, t: u64, states: &[f64]) {
        assert_eq!(states.len(), self.len());
        for (i, &value) in states.iter().enumerate() {
            if value != self.current[i] {
                let dt = (t - self.pend[i]) as f64;
                self.sums[i] += self.current[i] * dt;
                self.pend[i] = t;
                self.current[i] = value;
            }
        }
        self.t = t;
    }

    /// Scaled average T_i = (t+1)·S_i — division-free, for comparisons.
    #[inline]
    pub fn total(&self, i: usize) -> f64 {
        self.sums[i] + self.current[i] * ((self.t - self.pend[i]) as f64 + 1.0)
    }

    /// Writes all scaled averages into `out`.
    pub fn totals_into(&self, out: &mut [f64]) {
        assert_eq!(out.len(), self.len());
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.total(i);
        }
    }

    /// S_i(t).
    pub fn mean(&self, i: usize) -> f64 {
        self.total(i) / self.count() as f64
    }

    pub fn means(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.mean(i)).collect()
    }
}

impl Observer for RunningAverage {
    fn on_tick(&mut self, event: &TickEvent<'_>) {
        self.record(event.t, event.touched);
    }
}
