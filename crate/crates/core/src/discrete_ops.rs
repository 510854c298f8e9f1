//! Spatial discretization on the radial grid.
//!
//! The Laplacian is differenced in flux form,
//! `Δ_h u_j = (r_{j+1/2}^{N-1}(u_{j+1}-u_j) - r_{j-1/2}^{N-1}(u_j-u_{j-1})) / (r_j^{N-1} h²)`,
//! paired with a midpoint V-inner product so that discrete summation by
//! parts holds as an algebraic identity (see `tests::summation_by_parts`).
//! That identity is what makes the operator's dissipativity visible at the
//! discrete level instead of being buried under O(h) noise.

use crate::error::Result;
use crate::geometry::{BoundaryEnd, RadialGrid};
use crate::linsolve::{bordered_solve, TridiagonalSystem};
use crate::model::ModelParams;
use num_complex::Complex64 as C64;

/// Complex amplitude sampled at the grid nodes. `values[0]` must be zero
/// whenever the field represents a solution state (Dirichlet on Γ0).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub values: Vec<C64>,
}

impl ComplexField {
    pub fn zeros(grid: &RadialGrid) -> Self {
        Self {
            values: vec![C64::default(); grid.num_nodes()],
        }
    }

    pub fn from_fn(grid: &RadialGrid, mut f: impl FnMut(f64) -> C64) -> Self {
        Self {
            values: grid.nodes.iter().map(|&r| f(r)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest nodal modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Keeps every `factor`-th node; restriction onto a coarser grid whose
    /// cell count divides this one's.
    pub fn subsample(&self, factor: usize) -> Self {
        Self {
            values: self.values.iter().step_by(factor).copied().collect(),
        }
    }
}

impl std::ops::Sub<&ComplexField> for &ComplexField {
    type Output = ComplexField;
    fn sub(self, rhs: &ComplexField) -> ComplexField {
        ComplexField {
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Flux-form radial Laplacian. Interior nodes use the conservative stencil;
/// the two boundary nodes carry second-order one-sided values for diagnostic
/// use only (they never enter interior updates).
pub fn laplacian_apply(u: &ComplexField, grid: &RadialGrid) -> ComplexField {
    let m = grid.m;
    let h = grid.h;
    let nm1 = grid.dim as i32 - 1;
    let mut out = vec![C64::default(); m + 1];
    for j in 1..m {
        let rj = grid.nodes[j].powi(nm1);
        let rp = grid.r_mid(j).powi(nm1);
        let rm = grid.r_mid(j - 1).powi(nm1);
        out[j] = (rp * (u.values[j + 1] - u.values[j]) - rm * (u.values[j] - u.values[j - 1]))
            / (rj * h * h);
    }
    out[0] = laplacian_one_sided(u, grid, BoundaryEnd::Gamma0);
    out[m] = laplacian_one_sided(u, grid, BoundaryEnd::Gamma1);
    ComplexField { values: out }
}

/// Second-order one-sided value of `u_rr + (N-1)/r · u_r` at a boundary node.
pub fn laplacian_one_sided(u: &ComplexField, grid: &RadialGrid, end: BoundaryEnd) -> C64 {
    let h = grid.h;
    let v = &u.values;
    let m = grid.m;
    let nm1 = (grid.dim - 1) as f64;
    match end {
        BoundaryEnd::Gamma1 => {
            let urr = (2.0 * v[m] - 5.0 * v[m - 1] + 4.0 * v[m - 2] - v[m - 3]) / (h * h);
            let ur = (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * h);
            urr + nm1 / grid.r1 * ur
        }
        BoundaryEnd::Gamma0 => {
            let urr = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h);
            let ur = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
            if nm1 == 0.0 {
                urr
            } else {
                urr + nm1 / grid.r0 * ur
            }
        }
    }
}

/// One-sided outward normal derivative at a boundary node. The outward
/// normal points toward increasing r at Γ1 and decreasing r at Γ0.
pub fn normal_derivative(u: &ComplexField, grid: &RadialGrid, end: BoundaryEnd, order: u8) -> C64 {
    let h = grid.h;
    let v = &u.values;
    let m = grid.m;
    match (end, order) {
        (BoundaryEnd::Gamma1, 1) => (v[m] - v[m - 1]) / h,
        (BoundaryEnd::Gamma1, _) => (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * h),
        (BoundaryEnd::Gamma0, 1) => (v[0] - v[1]) / h,
        (BoundaryEnd::Gamma0, _) => (3.0 * v[0] - 4.0 * v[1] + v[2]) / (2.0 * h),
    }
}

/// Midpoint V-inner product `(u, v)_V = Σ_j ω_N r_{j+1/2}^{N-1} h δu_j δv̄_j / h²`,
/// the discrete counterpart of `∫ ∇u·∇v̄`.
pub fn inner_v(u: &ComplexField, v: &ComplexField, grid: &RadialGrid) -> C64 {
    let h = grid.h;
    let nm1 = grid.dim as i32 - 1;
    let om = crate::geometry::omega(grid.dim);
    let mut acc = C64::default();
    for j in 0..grid.m {
        let w = om * grid.r_mid(j).powi(nm1) / h;
        let du = u.values[j + 1] - u.values[j];
        let dv = v.values[j + 1] - v.values[j];
        acc += w * du * dv.conj();
    }
    acc
}

/// `‖u‖_V = ‖∇u‖_{L²(Ω)}` via the midpoint rule.
pub fn norm_v(u: &ComplexField, grid: &RadialGrid) -> f64 {
    inner_v(u, u, grid).re.max(0.0).sqrt()
}

/// `Σ_j w_j |u_j|^p` with trapezoid volume weights (the p-th power of the
/// interior L^p norm).
pub fn lp_pow_interior(u: &ComplexField, grid: &RadialGrid, p_exp: f64) -> f64 {
    u.values
        .iter()
        .zip(&grid.volume_weights)
        .map(|(z, &w)| w * z.norm().powf(p_exp))
        .sum()
}

/// Interior `L^p` norm.
pub fn norm_lp_interior(u: &ComplexField, grid: &RadialGrid, p_exp: f64) -> f64 {
    lp_pow_interior(u, grid, p_exp).powf(1.0 / p_exp)
}

/// `Σ_j w_j |u_j|²` restricted L² helper used by the energy ledger.
pub fn l2_sq_interior(u: &ComplexField, grid: &RadialGrid) -> f64 {
    lp_pow_interior(u, grid, 2.0)
}

/// Boundary `L^p(Γ1)` norm of a trace value. Under radial symmetry the
/// boundary integral is the single point `u_M` times the Γ1 measure.
pub fn norm_lp_boundary(trace: C64, grid: &RadialGrid, p_exp: f64) -> f64 {
    grid.surface_measure_g1.powf(1.0 / p_exp) * trace.norm()
}

/// `p`-th power of the boundary norm: `ω_N r1^{N-1} |trace|^p`.
pub fn lp_pow_boundary(trace: C64, grid: &RadialGrid, p_exp: f64) -> f64 {
    grid.surface_measure_g1 * trace.norm().powf(p_exp)
}

/// Discrete boundary flux `ω_N r_{M-1/2}^{N-1} (u_M - u_{M-1})/h`, the exact
/// boundary term of the discrete summation-by-parts identity.
pub fn boundary_flux(u: &ComplexField, grid: &RadialGrid) -> C64 {
    let om = crate::geometry::omega(grid.dim);
    om * grid.r_mid(grid.m - 1).powi(grid.dim as i32 - 1) * (u.values[grid.m] - u.values[grid.m - 1])
        / grid.h
}

/// `Σ_{j=1}^{M-1} ω r_j^{N-1} h |v_j|²` of an already-applied Laplacian:
/// the quadrature of `‖Δu‖²` that the discrete summation-by-parts pairing
/// produces. Boundary nodes are excluded; their effect enters through the
/// flux term of the identity instead.
pub fn lap_sq_interior(lap: &ComplexField, grid: &RadialGrid) -> f64 {
    let om = crate::geometry::omega(grid.dim);
    (1..grid.m)
        .map(|j| om * grid.nodes[j].powi(grid.dim as i32 - 1) * grid.h * lap.values[j].norm_sqr())
        .sum()
}

/// Outcome of the dissipativity-identity probe.
#[derive(Debug, Clone, Copy)]
pub struct DissipativityCheck {
    /// `|Re(A_h u, u)_V + λ‖Δ_h u‖² + ‖∂ν u‖²_{Γ1}|`.
    pub residual: f64,
    /// The inner-product term itself, for sign checks.
    pub re_au_u: f64,
}

/// Evaluates the defect of the identity
/// `Re(Au, u)_V = -λ‖Δu‖²_{L²} - ‖∂u/∂ν‖²_{L²(Γ1)}`
/// on a field constrained to the discrete Wentzell domain.
pub fn dissipativity_residual(
    grid: &RadialGrid,
    params: &ModelParams,
    u: &ComplexField,
) -> DissipativityCheck {
    let lap = laplacian_apply(u, grid);
    let mut au = ComplexField {
        values: lap.values.iter().map(|&z| params.diffusion() * z).collect(),
    };
    // Au lives in V: it vanishes on Γ0 for u in the operator domain.
    au.values[0] = C64::default();
    let re_au_u = inner_v(&au, u, grid).re;
    let lap_sq = lap_sq_interior(&lap, grid);
    let dnu = normal_derivative(u, grid, BoundaryEnd::Gamma1, 2);
    let flux_sq = grid.surface_measure_g1 * dnu.norm_sqr();
    DissipativityCheck {
        residual: (re_au_u + params.lambda * lap_sq + flux_sq).abs(),
        re_au_u,
    }
}

/// Produces a smooth field in the discrete Wentzell domain by applying one
/// implicit resolvent step `(I - τ(λ+iα)Δ_h)u = w` with the Dirichlet row at
/// Γ0 and the Wentzell row `∂ν u + (λ+iα)Δ_h^os u = 0` at Γ1. The output
/// satisfies the discrete boundary rows exactly and converges, under
/// refinement, to a continuum element of the operator domain.
pub fn resolvent_lift(
    w: &ComplexField,
    grid: &RadialGrid,
    params: &ModelParams,
    tau: f64,
) -> Result<ComplexField> {
    let m = grid.m;
    let h = grid.h;
    let nm1 = grid.dim as i32 - 1;
    let mu = params.diffusion();
    let n = m + 1;
    let mut lower = vec![C64::default(); n - 1];
    let mut diag = vec![C64::default(); n];
    let mut upper = vec![C64::default(); n - 1];
    let mut rhs = vec![C64::default(); n];
    diag[0] = C64::new(1.0, 0.0);
    for j in 1..m {
        let rj = grid.nodes[j].powi(nm1);
        let rp = grid.r_mid(j).powi(nm1);
        let rm = grid.r_mid(j - 1).powi(nm1);
        let a = rm / (rj * h * h);
        let c = rp / (rj * h * h);
        lower[j - 1] = -tau * mu * a;
        diag[j] = C64::new(1.0, 0.0) + tau * mu * (a + c);
        upper[j] = -tau * mu * c;
        rhs[j] = w.values[j];
    }
    // Wentzell row at node M: D_ν u + (λ+iα)(u_rr + (N-1)/r1 u_r) = 0, both
    // stencils second order so the lifted field approximates a continuum
    // domain element to O(h²) at the boundary. The 4-point u_rr reaches
    // column M-3; that entry is peeled off by a Sherman-Morrison step on top
    // of the bordered solve.
    let dnu = [3.0 / (2.0 * h), -4.0 / (2.0 * h), 1.0 / (2.0 * h), 0.0];
    let urr = [
        2.0 / (h * h),
        -5.0 / (h * h),
        4.0 / (h * h),
        -1.0 / (h * h),
    ];
    let rad = nm1 as f64 / grid.r1;
    let coef = |k: usize| C64::new(dnu[k], 0.0) + mu * (urr[k] + rad * dnu[k]);
    diag[m] = coef(0);
    lower[m - 1] = coef(1);
    let extra = coef(2);
    let far = coef(3);
    let sys = TridiagonalSystem::new(lower, diag, upper);
    let x = bordered_solve(&sys, extra, &rhs)?;
    // A = B + far·e_M e_{M-3}^T; correct x = B⁻¹rhs by one rank-1 update.
    let mut em = vec![C64::default(); n];
    em[m] = C64::new(1.0, 0.0);
    let y = bordered_solve(&sys, extra, &em)?;
    let denom = C64::new(1.0, 0.0) + far * y[m - 3];
    if denom.norm() <= 1e-14 {
        return Err(crate::error::SimError::ZeroPivot(m));
    }
    let factor = far * x[m - 3] / denom;
    let x = x
        .iter()
        .zip(&y)
        .map(|(&xi, &yi)| xi - factor * yi)
        .collect();
    Ok(ComplexField { values: x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn model(lambda: f64, alpha: f64, dim: u32) -> ModelParams {
        ModelParams {
            lambda,
            alpha,
            kappa: 0.0,
            beta: 0.0,
            gamma: 0.0,
            p: 3.0,
            dim,
        }
    }

    #[test]
    fn laplacian_exact_on_quadratic_1d() {
        let g = RadialGrid::build(1, 0.0, 1.0, 20).unwrap();
        let u = ComplexField::from_fn(&g, |r| C64::new(r * r, 0.0));
        let lap = laplacian_apply(&u, &g);
        for j in 0..=g.m {
            assert_relative_eq!(lap.values[j].re, 2.0, max_relative = 1e-11);
            assert_relative_eq!(lap.values[j].im, 0.0);
        }
    }

    #[test]
    fn laplacian_3d_quadratic_refines_at_second_order() {
        // u = r² has Δu = u_rr + (2/r)u_r = 6 in three dimensions.
        let err = |m: usize| {
            let g = RadialGrid::build(3, 0.5, 1.5, m).unwrap();
            let u = ComplexField::from_fn(&g, |r| C64::new(r * r, 0.0));
            let lap = laplacian_apply(&u, &g);
            (1..g.m)
                .map(|j| (lap.values[j].re - 6.0).abs())
                .fold(0.0f64, f64::max)
        };
        let (e1, e2) = (err(32), err(64));
        assert!(e1 / e2 > 3.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn laplacian_2d_log_is_harmonic() {
        let err = |m: usize| {
            let g = RadialGrid::build(2, 0.5, 1.5, m).unwrap();
            let u = ComplexField::from_fn(&g, |r| C64::new(r.ln(), 0.0));
            let lap = laplacian_apply(&u, &g);
            (1..g.m)
                .map(|j| lap.values[j].norm())
                .fold(0.0f64, f64::max)
        };
        let (e1, e2) = (err(32), err(64));
        assert!(e1 < 1e-2);
        assert!(e1 / e2 > 3.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn normal_derivative_linear_and_quadratic() {
        let g = RadialGrid::build(1, 0.0, 1.0, 16).unwrap();
        let lin = ComplexField::from_fn(&g, |r| C64::new(r, 0.0));
        for order in [1u8, 2] {
            assert_relative_eq!(
                normal_derivative(&lin, &g, BoundaryEnd::Gamma1, order).re,
                1.0,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                normal_derivative(&lin, &g, BoundaryEnd::Gamma0, order).re,
                -1.0,
                max_relative = 1e-12
            );
        }
        let quad = ComplexField::from_fn(&g, |r| C64::new(r * r, 0.0));
        assert_relative_eq!(
            normal_derivative(&quad, &g, BoundaryEnd::Gamma1, 2).re,
            2.0,
            max_relative = 1e-11
        );
    }

    #[test]
    fn v_norm_values() {
        let g = RadialGrid::build(1, 0.0, 1.0, 64).unwrap();
        let lin = ComplexField::from_fn(&g, |r| C64::new(r, 0.0));
        assert_relative_eq!(norm_v(&lin, &g), 1.0, max_relative = 1e-12);
        assert_eq!(norm_v(&ComplexField::zeros(&g), &g), 0.0);
        // ∫ π² cos²(πr) dr = π²/2 on [0,1].
        let s = ComplexField::from_fn(&g, |r| {
            C64::new((std::f64::consts::PI * r).sin(), 0.0)
        });
        let exact = std::f64::consts::PI / std::f64::consts::SQRT_2;
        assert_relative_eq!(norm_v(&s, &g), exact, max_relative = 1e-3);
    }

    #[test]
    fn lp_norms() {
        let g = RadialGrid::build(1, 0.0, 1.0, 128).unwrap();
        let one = ComplexField::from_fn(&g, |_| C64::new(1.0, 0.0));
        assert_relative_eq!(norm_lp_interior(&one, &g, 2.0), 1.0, max_relative = 1e-12);
        let c = C64::new(0.6, -0.8);
        let cf = ComplexField::from_fn(&g, |_| c);
        assert_relative_eq!(
            norm_lp_interior(&cf, &g, 4.0),
            c.norm(),
            max_relative = 1e-12
        );
        // ∫ r⁴ dr = 1/5.
        let lin = ComplexField::from_fn(&g, |r| C64::new(r, 0.0));
        assert_relative_eq!(
            norm_lp_interior(&lin, &g, 4.0),
            0.2f64.powf(0.25),
            max_relative = 1e-4
        );
    }

    #[test]
    fn boundary_norm_values() {
        let g = RadialGrid::build(1, 0.0, 1.0, 8).unwrap();
        assert_eq!(norm_lp_boundary(C64::default(), &g, 2.0), 0.0);
        assert_relative_eq!(
            norm_lp_boundary(C64::new(2.0, 0.0), &g, 2.0),
            2.0,
            max_relative = 1e-14
        );
        let g2 = RadialGrid::build(2, 0.5, 2.0, 8).unwrap();
        assert_relative_eq!(
            norm_lp_boundary(C64::new(1.0, 0.0), &g2, 2.0),
            (4.0 * std::f64::consts::PI).sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn summation_by_parts_is_exact() {
        // For u, v with v[0] = 0:
        //   Σ_{j=1}^{M-1} ω r_j^{N-1} h (Δ_h u)_j v̄_j
        //     = -(u, v)_V + boundary_flux(u) v̄_M
        // to round-off, whatever the fields are.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for dim in [1u32, 2, 3] {
            let g = RadialGrid::build(dim, 0.5, 1.5, 37).unwrap();
            for _ in 0..20 {
                let mut u = ComplexField::zeros(&g);
                let mut v = ComplexField::zeros(&g);
                for j in 0..=g.m {
                    u.values[j] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    v.values[j] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
                v.values[0] = C64::default();
                let lap = laplacian_apply(&u, &g);
                let om = crate::geometry::omega(dim);
                let mut lhs = C64::default();
                for j in 1..g.m {
                    lhs += om * g.nodes[j].powi(dim as i32 - 1) * g.h
                        * lap.values[j]
                        * v.values[j].conj();
                }
                let rhs = -inner_v(&u, &v, &g) + boundary_flux(&u, &g) * v.values[g.m].conj();
                let scale = u.max_abs() * v.max_abs() / (g.h * g.h);
                assert!(
                    (lhs - rhs).norm() <= 1e-12 * scale.max(1.0),
                    "dim {dim}: {} vs {}",
                    lhs,
                    rhs
                );
            }
        }
    }

    #[test]
    fn norms_absolutely_homogeneous() {
        let g = RadialGrid::build(2, 0.5, 1.5, 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let u = ComplexField::from_fn(&g, |r| {
            C64::new(r.sin() + rng.gen_range(-0.1..0.1), r.cos())
        });
        let c = C64::new(1.3, -0.4);
        let cu = ComplexField {
            values: u.values.iter().map(|&z| c * z).collect(),
        };
        assert_relative_eq!(norm_v(&cu, &g), c.norm() * norm_v(&u, &g), max_relative = 1e-12);
        assert_relative_eq!(
            norm_lp_interior(&cu, &g, 4.0),
            c.norm() * norm_lp_interior(&u, &g, 4.0),
            max_relative = 1e-12
        );
    }

    #[test]
    fn discrete_poincare_positivity() {
        // norm_v(u) = 0 with u[0] = 0 forces u ≡ 0: differences all vanish.
        let g = RadialGrid::build(1, 0.0, 1.0, 16).unwrap();
        let mut u = ComplexField::zeros(&g);
        u.values[5] = C64::new(1e-8, 0.0);
        assert!(norm_v(&u, &g) > 0.0);
    }

    #[test]
    fn dissipativity_zero_field() {
        let g = RadialGrid::build(1, 0.0, 1.0, 32).unwrap();
        let p = model(1.0, 1.0, 1);
        let chk = dissipativity_residual(&g, &p, &ComplexField::zeros(&g));
        assert_eq!(chk.residual, 0.0);
    }

    fn smooth_random_field(grid: &RadialGrid, rng: &mut ChaCha8Rng) -> ComplexField {
        let span = grid.r1 - grid.r0;
        let coeffs: Vec<C64> = (0..4)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexField::from_fn(grid, |r| {
            let s = (r - grid.r0) / span;
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c * ((k + 1) as f64 * std::f64::consts::PI * s).sin())
                .sum()
        })
    }

    #[test]
    fn dissipativity_residual_refines() {
        let p = model(1.0, 1.0, 1);
        let mean_res = |m: usize| {
            let g = RadialGrid::build(1, 0.0, 1.0, m).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            let mut acc = 0.0;
            for _ in 0..20 {
                let w = smooth_random_field(&g, &mut rng);
                let u = resolvent_lift(&w, &g, &p, 0.5).unwrap();
                acc += dissipativity_residual(&g, &p, &u).residual;
            }
            acc / 20.0
        };
        let (r1, r2) = (mean_res(64), mean_res(128));
        assert!(r1 / r2 > 1.8, "ratio {} ({} vs {})", r1 / r2, r1, r2);
    }

    #[test]
    fn pure_heat_dissipative_sign() {
        let p = model(1.0, 0.0, 1);
        let g = RadialGrid::build(1, 0.0, 1.0, 64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let w = smooth_random_field(&g, &mut rng);
            let u = resolvent_lift(&w, &g, &p, 0.1).unwrap();
            let chk = dissipativity_residual(&g, &p, &u);
            assert!(chk.re_au_u <= 1e-10, "Re(Au,u) = {}", chk.re_au_u);
        }
    }
}
