//! Spherical trigonometry of a single building block's vertex link.
//!
//! A block with relator index `m ≥ 2` and metric parameter `δ ∈ (0, π/2)`
//! has link distances
//!
//! * `θ = (m − 2)π / m` — the length of each of the two geodesic segments,
//! * `α = 2δ` — the distance between same-sign generator directions,
//! * `β = arccos(sin²δ · cos θ − cos²δ)` — between opposite-sign directions,
//!
//! tied together by `2·cos β + (1 + cos θ)·cos α + (1 − cos θ) = 0`.
//! Setting α = β gives the symmetric solution
//! `cos α = (cos θ − 1)/(cos θ + 3)`.

use crate::{Angle, Error, Result};

/// Residual below which an (α, β) pair is accepted as consistent for an index.
pub const RESIDUAL_TOL: f64 = 1e-12;

fn check_index(m: u32, min: u32) -> Result<()> {
    if m < min {
        return Err(Error::RelatorIndexTooSmall { got: m, min });
    }
    Ok(())
}

fn check_delta(delta: Angle) -> Result<()> {
    let d = delta.rad();
    if !(d.is_finite() && d > 0.0 && d < std::f64::consts::FRAC_PI_2) {
        return Err(Error::DeltaOutOfRange { got: d });
    }
    Ok(())
}

/// Segment length `θ = (m − 2)π / m` for a relator index `m ≥ 2`.
pub fn theta_of(m: u32) -> Result<Angle> {
    check_index(m, 2)?;
    Ok(Angle::from_radians((m as f64 - 2.0) * std::f64::consts::PI / m as f64))
}

/// Opposite-sign distance `β` for index `m ≥ 2` and `δ ∈ (0, π/2)`.
///
/// Computed as `arccos(sin²δ · cos θ − cos²δ)`; the cosine argument is clamped
/// into `[-1, 1]` since it lies in range analytically. For `m ≥ 3` the result
/// lies in `(θ, π)` for every admissible δ.
pub fn beta_of(m: u32, delta: Angle) -> Result<Angle> {
    check_index(m, 2)?;
    check_delta(delta)?;
    let (s, c) = (delta.sin(), delta.cos());
    let cos_theta = theta_of(m)?.cos();
    Ok(Angle::acos_clamped(s * s * cos_theta - c * c))
}

/// The unique `α ∈ (π/2, π)` with `α = β`, i.e. `cos α = (cos θ − 1)/(cos θ + 3)`.
///
/// Requires `m ≥ 3`: at `m = 2` the solution degenerates to the right angle,
/// which falls outside the open range.
pub fn symmetric_alpha(m: u32) -> Result<Angle> {
    check_index(m, 3)?;
    let cos_theta = theta_of(m)?.cos();
    Ok(Angle::acos_clamped((cos_theta - 1.0) / (cos_theta + 3.0)))
}

/// The δ realizing the symmetric solution: `δ = symmetric_alpha(m) / 2`.
pub fn symmetric_delta(m: u32) -> Result<Angle> {
    Ok(Angle::from_radians(symmetric_alpha(m)?.rad() / 2.0))
}

/// Left-hand side of the block relation,
/// `2·cos β + (1 + cos θ)·cos α + (1 − cos θ)`.
///
/// Zero (within tolerance) exactly when (α, β) is a consistent pair for `m`.
pub fn alpha_beta_residual(m: u32, alpha: Angle, beta: Angle) -> Result<f64> {
    let cos_theta = theta_of(m)?.cos();
    Ok(2.0 * beta.cos() + (1.0 + cos_theta) * alpha.cos() + (1.0 - cos_theta))
}

/// One building block: relator index, metric parameter and derived link angles.
#[derive(Clone, Copy, Debug)]
pub struct DihedralBlock {
    m: u32,
    delta: Angle,
    theta: Angle,
    alpha: Angle,
    beta: Angle,
}

impl DihedralBlock {
    /// Build a block from `m ≥ 2` and `δ ∈ (0, π/2)`.
    pub fn new(m: u32, delta: Angle) -> Result<DihedralBlock> {
        check_index(m, 2)?;
        check_delta(delta)?;
        let theta = theta_of(m)?;
        let alpha = Angle::from_radians(2.0 * delta.rad());
        let beta = beta_of(m, delta)?;
        debug_assert!(
            alpha_beta_residual(m, alpha, beta).unwrap().abs() < RESIDUAL_TOL,
            "derived angles must satisfy the block relation"
        );
        debug_assert!(m < 3 || beta > theta, "beta exceeds theta for m >= 3");
        Ok(DihedralBlock { m, delta, theta, alpha, beta })
    }

    /// The symmetric model block: `δ` from [`symmetric_delta`] for `m ≥ 3`,
    /// and the fixed `δ = π/4` (so the generator angle is `π/2`) for `m = 2`.
    pub fn symmetric(m: u32) -> Result<DihedralBlock> {
        check_index(m, 2)?;
        let delta = if m == 2 { Angle::QUARTER_PI } else { symmetric_delta(m)? };
        DihedralBlock::new(m, delta)
    }

    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn delta(&self) -> Angle {
        self.delta
    }
    pub fn theta(&self) -> Angle {
        self.theta
    }
    pub fn alpha(&self) -> Angle {
        self.alpha
    }
    pub fn beta(&self) -> Angle {
        self.beta
    }
}

/// One row of the symmetric-solution table.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SymmetricAngleRow {
    pub m: u32,
    pub theta_deg: f64,
    pub cos_theta: f64,
    pub cos_alpha: f64,
    pub alpha_deg: f64,
}

/// Tabulate the symmetric α = β solution for each listed index (all `m ≥ 3`).
pub fn symmetric_angle_table(m_values: &[u32]) -> Result<Vec<SymmetricAngleRow>> {
    m_values
        .iter()
        .map(|&m| {
            let theta = theta_of(m)?;
            let alpha = symmetric_alpha(m)?;
            Ok(SymmetricAngleRow {
                m,
                theta_deg: theta.deg(),
                cos_theta: theta.cos(),
                cos_alpha: alpha.cos(),
                alpha_deg: alpha.deg(),
            })
        })
        .collect()
}
