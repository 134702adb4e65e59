//! Grid verification of the spectral estimates
//! Re λ₋(k) ≤ −σ_s/2 − k² and Re λ₊(k) ≤ Cε³|k| in the marginal regime.

use crate::{classify_region, eval_dispersion, CglParams, Error, Region, Result};

/// Slack allowed for rounding when a bound is tested without a free constant.
const ROUND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    LambdaMinus,
    LambdaPlus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundViolation {
    pub kind: BoundKind,
    pub k: f64,
    /// Amount by which the real part exceeds its bound.
    pub excess: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBoundsReport {
    /// min over the grid of (−σ_s/2 − k²) − Re λ₋(k).
    pub minus_margin: f64,
    pub minus_margin_k: f64,
    /// Smallest C with Re λ₊(k) ≤ Cε³|k| on the grid; `None` for ε = 0,
    /// where the bound reads Re λ₊ ≤ 0.
    pub plus_constant: Option<f64>,
    pub plus_constant_k: f64,
    pub max_re_plus: f64,
    pub max_re_plus_k: f64,
    /// First violation found, if any.
    pub violation: Option<BoundViolation>,
}

impl SpectralBoundsReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Largest Re λ₊ on `n` equispaced points of [−kmax, kmax], with its location.
pub fn scan_max_re_plus(p: &CglParams, kmax: f64, n: usize) -> (f64, f64) {
    grid(kmax, n)
        .map(|k| (k, eval_dispersion(p, k).lambda_plus.re))
        .fold((0.0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}

fn grid(kmax: f64, n: usize) -> impl Iterator<Item = f64> {
    let dk = 2.0 * kmax / (n - 1) as f64;
    (0..n).map(move |i| -kmax + dk * i as f64)
}

/// Checks both estimates on `n` equispaced wavenumbers in [−kmax, kmax].
///
/// Requires σ = σ_s − ε², (α, β) ∈ A_s and α ≠ β.
pub fn check_spectral_bounds(p: &CglParams, kmax: f64, n: usize) -> Result<SpectralBoundsReport> {
    if !(kmax > 0.0) || n < 2 {
        return Err(Error::Domain { value: kmax, domain: "kmax > 0 with at least two points" });
    }
    if p.alpha == p.beta {
        return Err(Error::Degenerate(p.alpha));
    }
    if classify_region(p.alpha, p.beta).region != Region::SidebandAs {
        return Err(Error::OutsideSideband { alpha: p.alpha, beta: p.beta });
    }
    let sigma_s = p.sigma_s()?;
    let eps = p.epsilon;
    if (sigma_s - eps * eps - p.sigma).abs() > 1e-12 * sigma_s {
        return Err(Error::NotMarginal("σ differs from σ_s − ε²"));
    }

    let eps3 = eps * eps * eps;
    let mut report = SpectralBoundsReport {
        minus_margin: f64::INFINITY,
        minus_margin_k: 0.0,
        plus_constant: (eps > 0.0).then_some(f64::NEG_INFINITY),
        plus_constant_k: 0.0,
        max_re_plus: f64::NEG_INFINITY,
        max_re_plus_k: 0.0,
        violation: None,
    };
    let flag = |v: BoundViolation, r: &mut SpectralBoundsReport| {
        if r.violation.is_none() {
            r.violation = Some(v);
        }
    };

    for k in grid(kmax, n) {
        let d = eval_dispersion(p, k);
        let margin = -0.5 * sigma_s - k * k - d.lambda_minus.re;
        if margin < report.minus_margin {
            report.minus_margin = margin;
            report.minus_margin_k = k;
        }
        if margin < -ROUND_TOL * (1.0 + k * k) {
            flag(BoundViolation { kind: BoundKind::LambdaMinus, k, excess: -margin }, &mut report);
        }

        let re = d.lambda_plus.re;
        if re > report.max_re_plus {
            report.max_re_plus = re;
            report.max_re_plus_k = k;
        }
        if k == 0.0 {
            if re.abs() > ROUND_TOL {
                flag(BoundViolation { kind: BoundKind::LambdaPlus, k, excess: re }, &mut report);
            }
            continue;
        }
        match report.plus_constant.as_mut() {
            Some(c) => {
                let ratio = re / (eps3 * k.abs());
                if ratio > *c {
                    *c = ratio;
                    report.plus_constant_k = k;
                }
            }
            None if re > ROUND_TOL => {
                flag(BoundViolation { kind: BoundKind::LambdaPlus, k, excess: re }, &mut report);
            }
            None => {}
        }
    }

    if let Some(c) = report.plus_constant {
        if !c.is_finite() {
            let k = report.plus_constant_k;
            flag(BoundViolation { kind: BoundKind::LambdaPlus, k, excess: c }, &mut report);
        }
    }
    Ok(report)
}
