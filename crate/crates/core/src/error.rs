use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sideband analysis needs 1 + αβ > 0, got 1 + αβ = {0}")]
    UnstableHalfPlane(f64),
    #[error("wave number ζ = {0} must lie in (-1, 1) without 0")]
    WaveNumber(f64),
    #[error("σ = σ_s − ε² = {0} is not positive")]
    NonPositiveSigma(f64),
    #[error("argument {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },
    #[error("α = β = {0}: the KdV coefficients degenerate (Cahn-Hilliard regime)")]
    Degenerate(f64),
    #[error("parameters are not in the marginal sideband regime: {0}")]
    NotMarginal(&'static str),
    #[error("(α, β) = ({alpha}, {beta}) is not in the sideband region A_s")]
    OutsideSideband { alpha: f64, beta: f64 },
    #[error("υ(k) nearly vanishes at k = {k} (|υ| = {modulus:e})")]
    NearSingular { k: f64, modulus: f64 },
}
