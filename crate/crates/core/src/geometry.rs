//! Radially symmetric computational domains.
//!
//! The domain is an interval `[r0, r1]` for N=1 and an annulus for N=2,3,
//! reduced to a 1-D mesh in the radius. Node 0 carries the homogeneous
//! Dirichlet condition (Γ0) and node M the dynamic/Wentzell condition (Γ1).
//! All interior integrals are trapezoid sums against the radial density
//! `ω_N r^{N-1}` with ω_1 = 1, ω_2 = 2π, ω_3 = 4π.

use crate::error::{Result, SimError};

/// Boundary piece of the domain. `Gamma0` is the inner (Dirichlet) end,
/// `Gamma1` the outer (dynamic) end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryEnd {
    Gamma0,
    Gamma1,
}

/// Uniform 1-D radial mesh with precomputed quadrature weights.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    /// Spatial dimension (1, 2, or 3).
    pub dim: u32,
    /// Inner radius (location of Γ0).
    pub r0: f64,
    /// Outer radius (location of Γ1).
    pub r1: f64,
    /// Cell count; the grid has `m + 1` nodes.
    pub m: usize,
    /// Uniform spacing `(r1 - r0) / m`.
    pub h: f64,
    /// Node radii `r_j = r0 + j h`.
    pub nodes: Vec<f64>,
    /// Trapezoid weights for `∫_Ω · dx` in radial symmetry.
    pub volume_weights: Vec<f64>,
    /// Measure of Γ1: `ω_N r1^{N-1}`.
    pub surface_measure_g1: f64,
}

/// Solid-angle factor `ω_N` of the radial volume element.
pub fn omega(dim: u32) -> f64 {
    match dim {
        1 => 1.0,
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        _ => unreachable!("dimension validated at grid construction"),
    }
}

impl RadialGrid {
    /// Builds the uniform grid, validating the domain constraints.
    pub fn build(dim: u32, r0: f64, r1: f64, m: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(SimError::InvalidDimension(dim));
        }
        if !(r0.is_finite() && r1.is_finite()) || r1 <= r0 || r0 < 0.0 {
            return Err(SimError::InvalidRadii {
                r0,
                r1,
                reason: "need 0 <= r0 < r1".into(),
            });
        }
        if dim >= 2 && r0 == 0.0 {
            return Err(SimError::InvalidRadii {
                r0,
                r1,
                reason: "annulus requires r0 > 0 for N >= 2".into(),
            });
        }
        if m < 4 {
            return Err(SimError::TooCoarse(m));
        }
        let h = (r1 - r0) / m as f64;
        let nodes: Vec<f64> = (0..=m).map(|j| r0 + j as f64 * h).collect();
        let om = omega(dim);
        let mut volume_weights: Vec<f64> = nodes
            .iter()
            .map(|&r| om * r.powi(dim as i32 - 1) * h)
            .collect();
        volume_weights[0] *= 0.5;
        volume_weights[m] *= 0.5;
        let surface_measure_g1 = om * r1.powi(dim as i32 - 1);
        Ok(Self {
            dim,
            r0,
            r1,
            m,
            h,
            nodes,
            volume_weights,
            surface_measure_g1,
        })
    }

    /// Number of nodes, `m + 1`.
    pub fn num_nodes(&self) -> usize {
        self.m + 1
    }

    /// Midpoint radius `r_{j+1/2}` of cell `j` (0-based, `j < m`).
    pub fn r_mid(&self, j: usize) -> f64 {
        self.r0 + (j as f64 + 0.5) * self.h
    }

    /// Radial density `ω_N r^{N-1}` at radius `r`.
    pub fn density(&self, r: f64) -> f64 {
        omega(self.dim) * r.powi(self.dim as i32 - 1)
    }

    /// Checks the geometric multiplier condition for boundary stabilization:
    /// `(x - x0)·ν <= 0` on Γ0 and `(x - x0)·ν > 0` on Γ1, with `x0` an offset
    /// along the radial axis from the domain center.
    pub fn geometric_condition_check(&self, x0_offset: f64) -> GeometricReport {
        // Outward normal is -r̂ at Γ0 and +r̂ at Γ1.
        let gamma0_ok = -(self.r0 - x0_offset) <= 0.0;
        let gamma1_ok = self.r1 - x0_offset > 0.0;
        GeometricReport {
            gamma0_ok,
            gamma1_ok,
            satisfied: gamma0_ok && gamma1_ok,
        }
    }
}

/// Outcome of [`RadialGrid::geometric_condition_check`].
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct GeometricReport {
    pub gamma0_ok: bool,
    pub gamma1_ok: bool,
    pub satisfied: bool,
}
