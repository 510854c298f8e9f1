//! Initial-data families.
//!
//! The default datum is a C^∞ bump with compact support strictly inside the
//! domain: it vanishes identically near both boundary pieces, so the
//! compatibility condition holds to round-off and strong-solution claims
//! apply.

use crate::discrete_ops::ComplexField;
use crate::geometry::RadialGrid;
use num_complex::Complex64 as C64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Smooth compactly supported profile `exp(1 - 1/(1-s²))` on |s| < 1,
/// zero outside, normalized to peak 1.
pub fn mollifier(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// Radial bump `a·ψ((r - rc)/w)` with `rc`, `w` given as fractions of the
/// domain span; the support is clipped so the field vanishes identically at
/// both boundaries regardless of the fractions chosen.
pub fn bump_field(grid: &RadialGrid, amplitude: f64, center_frac: f64, width_frac: f64) -> ComplexField {
    let span = grid.r1 - grid.r0;
    let rc = grid.r0 + center_frac * span;
    let w = width_frac * span;
    // Keep support inside (r0, r1) with a margin.
    let w = w.min(0.95 * (rc - grid.r0)).min(0.95 * (grid.r1 - rc));
    ComplexField::from_fn(grid, |r| C64::new(amplitude * mollifier((r - rc) / w), 0.0))
}

/// Sine mode `a·sin(kπ(r - r0)/(r1 - r0))`: vanishes at both ends but has a
/// slope at Γ1, so it is deliberately incompatible.
pub fn mode_field(grid: &RadialGrid, amplitude: f64, k: u32) -> ComplexField {
    let span = grid.r1 - grid.r0;
    ComplexField::from_fn(grid, |r| {
        C64::new(
            amplitude * (k as f64 * std::f64::consts::PI * (r - grid.r0) / span).sin(),
            0.0,
        )
    })
}

/// Seeded random combination of the first few modes with complex
/// coefficients; used by sampled studies so reruns are reproducible.
pub fn random_field(grid: &RadialGrid, amplitude: f64, seed: u64) -> ComplexField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = grid.r1 - grid.r0;
    let coeffs: Vec<C64> = (0..4)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm: f64 = coeffs.iter().map(|c| c.norm()).sum();
    ComplexField::from_fn(grid, |r| {
        let s = (r - grid.r0) / span;
        let z: C64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * ((k + 1) as f64 * std::f64::consts::PI * s).sin())
            .sum();
        amplitude / norm * z
    })
}
