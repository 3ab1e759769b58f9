//! The smooth low-pass cutoff `h` used by the localized kernels.

/// `h(t) = 1` on `[0, 1/2]`, `0` on `[1, ∞)`, and a C^∞ monotone transition
/// `φ(1-t) / (φ(1-t) + φ(t-1/2))` with `φ(s) = exp(-1/s)` in between.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CutoffFunction;

impl CutoffFunction {
    pub fn eval(&self, t: f64) -> f64 {
        cutoff_eval(t)
    }
}

fn bump(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Evaluate the cutoff at `t ≥ 0`. Negative arguments are treated as `0`.
pub fn cutoff_eval(t: f64) -> f64 {
    if t <= 0.5 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let a = bump(1.0 - t);
        let b = bump(t - 0.5);
        a / (a + b)
    }
}
