//! Bracketed scalar root finding: bisection with secant acceleration.
//!
//! Bisection maintains the bracket and guarantees convergence; secant steps
//! are attempted whenever they stay inside the bracket, which restores
//! superlinear convergence near the root.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("RootNotBracketed: f({lo}) = {flo:e}, f({hi}) = {fhi:e}")]
    RootNotBracketed {
        lo: f64,
        hi: f64,
        flo: f64,
        fhi: f64,
    },
    #[error("MaxIterations: best |f| = {0:e}")]
    MaxIterations(f64),
}

pub struct BracketConfig {
    /// Stop when |f| drops below this.
    pub f_tol: f64,
    /// Stop when the bracket width drops below `x_tol * max(1, |x|)`.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for BracketConfig {
    fn default() -> Self {
        BracketConfig {
            f_tol: 1e-14,
            x_tol: 1e-15,
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in `[lo, hi]`; the endpoints must bracket a sign
/// change.
pub fn solve_bracketed<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    cfg: &BracketConfig,
) -> Result<f64, RootError> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !fa.is_finite() || !fb.is_finite() || fa.signum() == fb.signum() {
        return Err(RootError::RootNotBracketed {
            lo,
            hi,
            flo: fa,
            fhi: fb,
        });
    }
    let mut best = if fa.abs() < fb.abs() {
        (a, fa)
    } else {
        (b, fb)
    };
    for _ in 0..cfg.max_iter {
        // Secant candidate; fall back to the midpoint when it leaves the
        // bracket or makes no progress.
        let secant = b - fb * (b - a) / (fb - fa);
        let mid = 0.5 * (a + b);
        let x = if secant.is_finite() && secant > a.min(b) && secant < a.max(b) {
            secant
        } else {
            mid
        };
        let fx = f(x);
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 || fx.abs() < cfg.f_tol {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a).abs() < cfg.x_tol * mid.abs().max(1.0) {
            return Ok(best.0);
        }
    }
    if best.1.abs() < cfg.f_tol.max(1e-10) {
        Ok(best.0)
    } else {
        Err(RootError::MaxIterations(best.1.abs()))
    }
}

/// Expands `hi` geometrically from `lo` until `f` changes sign, then solves.
/// `hi_cap` bounds the search.
pub fn solve_expanding<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi_start: f64,
    hi_cap: f64,
    cfg: &BracketConfig,
) -> Result<f64, RootError> {
    let flo = f(lo);
    if flo == 0.0 {
        return Ok(lo);
    }
    let mut hi = hi_start;
    let mut fhi = f(hi);
    let mut guard = 0;
    while fhi.signum() == flo.signum() {
        if hi >= hi_cap || guard > 200 {
            return Err(RootError::RootNotBracketed { lo, hi, flo, fhi });
        }
        hi = (hi * 2.0).min(hi_cap);
        fhi = f(hi);
        guard += 1;
    }
    solve_bracketed(f, lo, hi, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_root() {
        let r = solve_bracketed(|x| x * x - 2.0, 0.0, 2.0, &BracketConfig::default()).unwrap();
        assert!((r - 2.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn transcendental_root() {
        let r = solve_bracketed(|x| x.cos() - x, 0.0, 1.0, &BracketConfig::default()).unwrap();
        assert!((r.cos() - r).abs() < 1e-14);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(matches!(
            solve_bracketed(|x| x * x + 1.0, -1.0, 1.0, &BracketConfig::default()),
            Err(RootError::RootNotBracketed { .. })
        ));
    }

    #[test]
    fn expanding_bracket() {
        let r = solve_expanding(|x| x - 37.5, 0.0, 1.0, 1e6, &BracketConfig::default()).unwrap();
        assert!((r - 37.5).abs() < 1e-12);
    }
}
