//! Log-gamma by the Stirling series, shifted up to `x >= 10`.

use std::f64::consts::PI;

const SHIFT_TO: f64 = 10.0;

/// Natural log of `|Γ(x)|`.
///
/// Non-positive integers are poles and map to `+∞`.
pub fn ln_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    if x < SHIFT_TO {
        let mut prod = 1.0;
        let mut y = x;
        while y < SHIFT_TO {
            prod *= y;
            y += 1.0;
        }
        return stirling(y) - prod.ln();
    }
    stirling(x)
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2
                * (1.0 / 360.0
                    - inv2
                        * (1.0 / 1260.0
                            - inv2
                                * (1.0 / 1680.0
                                    - inv2
                                        * (1.0 / 1188.0
                                            - inv2 * (691.0 / 360_360.0 - inv2 / 156.0))))));
    (x - 0.5).mul_add(x.ln(), -x) + 0.5 * (2.0 * PI).ln() + series
}

/// `Γ(x)` for moderate positive arguments.
pub fn gamma(x: f64) -> f64 {
    let g = ln_gamma(x).exp();
    if x < 0.0 && (x.floor() as i64) % 2 != 0 {
        -g
    } else {
        g
    }
}
