//! Sideband threshold and the classification of the (α, β) plane.

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Absolute tolerance below which a defining inequality counts as undecided.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// σ_s = 2(1 + β²)/(1 + αβ) and ζ_s = √((1 + αβ)/(2(1 + β²) + 1 + αβ)).
///
/// Wave trains with |ζ| ≤ ζ_s (equivalently σ ≥ σ_s) are free of the
/// long-wave instability.
pub fn sideband_threshold(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    let q = 1.0 + alpha * beta;
    if !(q > 0.0) {
        return Err(Error::UnstableHalfPlane(q));
    }
    let num = 2.0 * (1.0 + beta * beta);
    Ok((num / q, (q / (num + q)).sqrt()))
}

/// The branch r(z) bounding |α| in the third clause of A_s, with z = β/α.
///
/// On (1/3, 3/4) this is the positive root of
/// r⁴z²(4z − 3) + r²(5z² − 4z + 1) + 1 = 0.
pub fn r_of_z(z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain { value: z, domain: "0 < z < 1" });
    }
    if z <= 1.0 / 3.0 {
        return Ok(1.0 / z.sqrt());
    }
    if z >= 0.75 {
        return Ok(f64::INFINITY);
    }
    let a = z * z * (4.0 * z - 3.0);
    let b = 5.0 * z * z - 4.0 * z + 1.0;
    // a < 0 < b, so the roots in r² have opposite signs; rationalised form
    // of (−b − √(b² − 4a))/(2a)
    let y = 2.0 / (-b + (b * b - 4.0 * a).sqrt());
    Ok(y.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    SidebandAs,
    HopfTuringAh,
    /// 1 + αβ ≤ 0: the wave trains are unstable for every ζ.
    UnstableHalfPlane,
    BoundaryIndeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionVerdict {
    pub region: Region,
    /// r(β/α), present when α and β share a sign and |β| < |α|.
    pub r_of_z: Option<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum Truth {
    Holds,
    Fails,
    Undecided,
}

fn decide(margin: f64) -> Truth {
    if margin > BOUNDARY_TOL {
        Truth::Holds
    } else if margin < -BOUNDARY_TOL {
        Truth::Fails
    } else {
        Truth::Undecided
    }
}

fn all(ts: &[Truth]) -> Truth {
    if ts.iter().any(|&t| t == Truth::Fails) {
        Truth::Fails
    } else if ts.iter().all(|&t| t == Truth::Holds) {
        Truth::Holds
    } else {
        Truth::Undecided
    }
}

/// Which region of the (α, β) plane a parameter pair lies in.
///
/// A_s is the union of −1 < αβ < β², of the line β = 0 with α ≠ 0 and of
/// 0 < |β| ≤ |α| < r(β/α). Since A_s and A_h are open, any pair lying
/// within [`BOUNDARY_TOL`] of a defining inequality without lying decisively
/// inside another clause is reported as `BoundaryIndeterminate`; this
/// includes the diagonal |β| = |α|.
pub fn classify_region(alpha: f64, beta: f64) -> RegionVerdict {
    let ab = alpha * beta;
    let q = 1.0 + ab;
    let z = beta / alpha;
    let r = if z > 0.0 && z < 1.0 { r_of_z(z).ok() } else { None };
    let verdict = |region| RegionVerdict { region, r_of_z: r };
    if !(q > 0.0) {
        return verdict(Region::UnstableHalfPlane);
    }
    if q <= BOUNDARY_TOL {
        return verdict(Region::BoundaryIndeterminate);
    }

    let first = all(&[decide(q), decide(beta * beta - ab)]);
    let second = if beta.abs() > BOUNDARY_TOL {
        Truth::Fails
    } else if alpha.abs() > BOUNDARY_TOL && ab < 1.0 - BOUNDARY_TOL {
        Truth::Holds
    } else {
        Truth::Undecided
    };
    let third = if z < 0.0 {
        Truth::Fails
    } else {
        let reach = match r {
            Some(r) => r - alpha.abs(),
            None if z >= 1.0 => f64::INFINITY,
            None => 0.0,
        };
        all(&[decide(beta.abs()), decide(alpha.abs() - beta.abs()), decide(reach)])
    };

    let clauses = [first, second, third];
    let region = if clauses.contains(&Truth::Holds) {
        Region::SidebandAs
    } else if clauses.iter().all(|&t| t == Truth::Fails) {
        Region::HopfTuringAh
    } else {
        Region::BoundaryIndeterminate
    };
    verdict(region)
}
