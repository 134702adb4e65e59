//! Taylor coefficients of the critical curve
//! λ₊(k) = ic₁k − c₂k² + ic₃k³ − c₄k⁴ + O(k⁵).

use crate::{eval_dispersion, sideband_threshold, CglParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// c₃ at σ = σ_s; `None` when 1 + αβ ≤ 0.
    pub c3s: Option<f64>,
    /// c₄ at σ = σ_s; `None` when 1 + αβ ≤ 0.
    pub c4s: Option<f64>,
    /// J = 1 + 5β² + α²(1 − 3β²) + 4αβ(β² − 1), the sign-carrying factor of c₄,ₛ.
    pub j: f64,
}

/// Closed-form coefficients at the σ stored in `p`.
pub fn expansion_coeffs(p: &CglParams) -> ExpansionCoefficients {
    let (a, b, s) = (p.alpha, p.beta, p.sigma);
    let b2 = 1.0 + b * b;
    let j = 1.0 + 5.0 * b * b + a * a * (1.0 - 3.0 * b * b) + 4.0 * a * b * (b * b - 1.0);
    let threshold = sideband_threshold(a, b).ok();
    ExpansionCoefficients {
        c1: p.c - 2.0 * (a - b),
        c2: 1.0 + a * b - 2.0 * b2 / s,
        c3: 2.0 * b2 * (a * s - 2.0 * b) / (s * s),
        c4: b2 * (0.5 * a * a * s * s - 6.0 * a * b * s + 2.0 * (1.0 + 5.0 * b * b)) / (s * s * s),
        c3s: threshold.map(|(ss, _)| 2.0 * (a - b) / ss),
        c4s: threshold.map(|_| (1.0 + a * b) * j / (4.0 * b2 * b2)),
        j,
    }
}

/// Same coefficients from central differences of λ₊ at k = 0 with step `h`.
///
/// Seven-point stencils: sixth order for the first two derivatives and
/// fourth order for the third and fourth.
pub fn expansion_coeffs_fd(p: &CglParams, h: f64) -> ExpansionCoefficients {
    let derivs = |p: &CglParams| {
        let f: [_; 7] = core::array::from_fn(|i| {
            eval_dispersion(p, (i as f64 - 3.0) * h).lambda_plus
        });
        let (re, im) = (f.map(|z| z.re), f.map(|z| z.im));
        let d1 = (-im[0] + 9.0 * im[1] - 45.0 * im[2] + 45.0 * im[4] - 9.0 * im[5] + im[6])
            / (60.0 * h);
        let d2 = (2.0 * re[0] - 27.0 * re[1] + 270.0 * re[2] - 490.0 * re[3] + 270.0 * re[4]
            - 27.0 * re[5]
            + 2.0 * re[6])
            / (180.0 * h * h);
        let d3 = (im[0] - 8.0 * im[1] + 13.0 * im[2] - 13.0 * im[4] + 8.0 * im[5] - im[6])
            / (8.0 * h * h * h);
        let d4 = (-re[0] + 12.0 * re[1] - 39.0 * re[2] + 56.0 * re[3] - 39.0 * re[4]
            + 12.0 * re[5]
            - re[6])
            / (6.0 * h * h * h * h);
        (d1, -d2 / 2.0, d3 / 6.0, -d4 / 24.0)
    };
    let (c1, c2, c3, c4) = derivs(p);
    let at_threshold = sideband_threshold(p.alpha, p.beta).ok().map(|(ss, _)| {
        let mut q = *p;
        q.sigma = ss;
        derivs(&q)
    });
    ExpansionCoefficients {
        c1,
        c2,
        c3,
        c4,
        c3s: at_threshold.map(|t| t.2),
        c4s: at_threshold.map(|t| t.3),
        j: expansion_coeffs(p).j,
    }
}
