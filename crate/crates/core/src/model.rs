//! Physical model: equation parameters, the interior nonlinearity and its
//! time-differentiated form, the monotone boundary feedback family, and the
//! strong-solution compatibility residual.
//!
//! The equation is
//! `u_t - (λ + iα)Δu + (κ + iβ)|u|^{p-1}u - γu = 0`
//! with `u = 0` on Γ0 and `∂u/∂ν = -g(u_t)` on Γ1.

use crate::discrete_ops::{laplacian_one_sided, normal_derivative, ComplexField};
use crate::error::{Result, SimError};
use crate::geometry::{BoundaryEnd, RadialGrid};
use num_complex::Complex64 as C64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Physical constants of the equation.
#[derive(Debug, Clone, Copy)]
pub struct ModelParams {
    /// Diffusion coefficient, `λ >= 0` (0 in the Schrödinger limit).
    pub lambda: f64,
    /// Dispersion coefficient, `α > 0`.
    pub alpha: f64,
    /// Nonlinear dissipation, `κ >= 0`.
    pub kappa: f64,
    /// Nonlinear frequency (defocusing when positive).
    pub beta: f64,
    /// Linear gain/loss.
    pub gamma: f64,
    /// Source power index, `p >= 2`.
    pub p: f64,
    /// Spatial dimension, mirrors the grid.
    pub dim: u32,
}

impl ModelParams {
    /// Complex diffusion/dispersion coefficient `λ + iα`.
    pub fn diffusion(&self) -> C64 {
        C64::new(self.lambda, self.alpha)
    }

    /// Complex nonlinearity coefficient `κ + iβ`.
    pub fn nl_coeff(&self) -> C64 {
        C64::new(self.kappa, self.beta)
    }

    /// Whether `(p, N)` lies inside the global well-posedness table:
    /// `p >= 2` for N=1, `p ∈ [2,5]` for N=2, `p ∈ [2, 11/3]` for N=3.
    pub fn global_range_ok(&self) -> bool {
        match self.dim {
            1 => self.p >= 2.0,
            2 => (2.0..=5.0).contains(&self.p),
            3 => (2.0..=11.0 / 3.0).contains(&self.p),
            _ => false,
        }
    }
}

type Phi = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Boundary feedback `g(z) = φ(|z|) z` with a real radial profile `φ`.
/// Real `φ` makes `Im(g(z) z̄) = 0` automatic; `φ(s) ∈ [m, M]` gives the
/// growth bound, and monotonicity of `s ↦ φ(s)s` gives invertibility.
#[derive(Clone)]
pub struct FeedbackSpec {
    family: FeedbackFamily,
    /// Lower monotonicity constant.
    pub m: f64,
    /// Upper growth constant.
    pub big_m: f64,
}

#[derive(Clone)]
enum FeedbackFamily {
    Identity,
    Saturating,
    Custom(Phi),
}

impl std::fmt::Debug for FeedbackSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self.family {
            FeedbackFamily::Identity => "identity",
            FeedbackFamily::Saturating => "saturating",
            FeedbackFamily::Custom(_) => "custom",
        };
        write!(f, "FeedbackSpec({name}, m={}, M={})", self.m, self.big_m)
    }
}

impl FeedbackSpec {
    pub fn identity() -> Self {
        Self {
            family: FeedbackFamily::Identity,
            m: 1.0,
            big_m: 1.0,
        }
    }

    /// `φ(s) = m + (M - m)/(1 + s)`: interpolates from M at small amplitude
    /// down to m at large amplitude.
    pub fn saturating(m: f64, big_m: f64) -> Self {
        assert!(m > 0.0 && big_m >= m);
        Self {
            family: FeedbackFamily::Saturating,
            m,
            big_m,
        }
    }

    /// Arbitrary radial profile; callers declare the constants they claim,
    /// and `assumption_check` audits them.
    pub fn custom(phi: Phi, m: f64, big_m: f64) -> Self {
        Self {
            family: FeedbackFamily::Custom(phi),
            m,
            big_m,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.family, FeedbackFamily::Identity)
    }

    /// Profile value `φ(s)`.
    pub fn phi(&self, s: f64) -> f64 {
        match &self.family {
            FeedbackFamily::Identity => 1.0,
            FeedbackFamily::Saturating => self.m + (self.big_m - self.m) / (1.0 + s),
            FeedbackFamily::Custom(f) => f(s),
        }
    }

    /// `g(z) = φ(|z|) z`.
    pub fn eval(&self, z: C64) -> C64 {
        self.phi(z.norm()) * z
    }

    /// Inverts `g` by a safeguarded Newton solve of the modulus equation
    /// `φ(s) s = |y|`, then restores the phase of `y`.
    pub fn invert(&self, y: C64) -> Result<C64> {
        if self.is_identity() {
            return Ok(y);
        }
        let target = y.norm();
        if target == 0.0 {
            return Ok(C64::default());
        }
        // φ ∈ [m, M] brackets the root in [|y|/M, |y|/m].
        let mut lo = target / self.big_m;
        let mut hi = target / self.m;
        let f = |s: f64| self.phi(s) * s - target;
        if f(lo) > 0.0 {
            lo = 0.0;
        }
        let mut s = 0.5 * (lo + hi);
        for it in 0..100 {
            let fs = f(s);
            if fs.abs() <= 1e-12 * target {
                return Ok(s / target * y);
            }
            if fs > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            // Newton step with a central-difference slope, clipped to the bracket.
            let ds = (s.abs() * 1e-7).max(1e-12);
            let slope = (f(s + ds) - f(s - ds)) / (2.0 * ds);
            let mut next = if slope != 0.0 { s - fs / slope } else { s };
            if !(lo..=hi).contains(&next) {
                next = 0.5 * (lo + hi);
            }
            s = next;
            if it == 99 {
                break;
            }
        }
        Err(SimError::NonConvergence {
            context: "feedback_invert modulus solve".into(),
            iterations: 100,
            residual: f(s).abs() / target,
        })
    }
}

/// Interior nonlinearity `F(u) = -(κ + iβ)|u|^{p-1} u + γ u`.
pub fn nonlinearity(u: C64, params: &ModelParams) -> C64 {
    let a = u.norm();
    -params.nl_coeff() * a.powf(params.p - 1.0) * u + params.gamma * u
}

/// Directional derivative of `F` at `u` in direction `w` (conjugate-linear
/// in the second slot):
/// `F_t(u,w) = -(κ+iβ){ (p+1)/2 |u|^{p-1} w + (p-1)/2 |u|^{p-3} u² w̄ } + γ w`.
/// The `|u|^{p-3} u²` factor is taken as 0 at `u = 0` (its limit for p > 1).
pub fn nonlinearity_tangent(u: C64, w: C64, params: &ModelParams) -> C64 {
    let p = params.p;
    let a = u.norm();
    let mixed = if a == 0.0 {
        C64::default()
    } else {
        a.powf(p - 3.0) * u * u * w.conj()
    };
    -params.nl_coeff() * (0.5 * (p + 1.0) * a.powf(p - 1.0) * w + 0.5 * (p - 1.0) * mixed)
        + params.gamma * w
}

/// Report of the monotonicity/growth audit of a feedback law and its
/// numerical inverse.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AssumptionReport {
    pub m_est: f64,
    pub big_m_est: f64,
    pub m_inv_est: f64,
    pub big_m_inv_est: f64,
    pub im_max: f64,
    pub pass: bool,
}

/// Samples random pairs to estimate the monotonicity constant
/// `inf Re[(g(z)-g(v))(z̄-v̄)]/|z-v|²` and the growth constant
/// `sup |g(z)|/|z|`, for both `g` and the numerically inverted `g⁻¹`.
/// Never errors; failures show up in the report.
pub fn assumption_check(spec: &FeedbackSpec, samples: usize, seed: u64) -> AssumptionReport {
    assert!(samples >= 100);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rc = |scale: f64| {
        C64::new(
            rng.gen_range(-scale..scale),
            rng.gen_range(-scale..scale),
        )
    };
    let mut m_est = f64::INFINITY;
    let mut big_m_est = 0.0f64;
    let mut m_inv = f64::INFINITY;
    let mut big_m_inv = 0.0f64;
    let mut im_max = 0.0f64;
    let mut inverse_ok = true;
    for _ in 0..samples {
        let z = rc(10.0);
        let v = rc(10.0);
        let gz = spec.eval(z);
        let gv = spec.eval(v);
        if z != v {
            let q = ((gz - gv) * (z - v).conj()).re / (z - v).norm_sqr();
            m_est = m_est.min(q);
        }
        if z != C64::default() {
            big_m_est = big_m_est.max(gz.norm() / z.norm());
            im_max = im_max.max((gz * z.conj()).im.abs() / z.norm_sqr());
        }
        match (spec.invert(gz), spec.invert(gv)) {
            (Ok(iz), Ok(iv)) => {
                if gz != gv {
                    let q = ((iz - iv) * (gz - gv).conj()).re / (gz - gv).norm_sqr();
                    m_inv = m_inv.min(q);
                }
                if gz != C64::default() {
                    big_m_inv = big_m_inv.max(iz.norm() / gz.norm());
                    im_max = im_max.max((iz * gz.conj()).im.abs() / gz.norm_sqr());
                }
            }
            _ => inverse_ok = false,
        }
    }
    let pass = m_est > 0.0
        && big_m_est.is_finite()
        && m_inv > 0.0
        && big_m_inv.is_finite()
        && im_max <= 1e-14
        && inverse_ok;
    AssumptionReport {
        m_est,
        big_m_est,
        m_inv_est: m_inv,
        big_m_inv_est: big_m_inv,
        im_max,
        pass,
    }
}

/// Modulus of the compatibility defect
/// `∂u0/∂ν + (λ+iα)Δu0 - F(u0)` at Γ1, via second-order one-sided stencils.
/// Strong solutions need this to vanish; for weak solutions it is only a
/// diagnostic.
pub fn compatibility_residual(u0: &ComplexField, grid: &RadialGrid, params: &ModelParams) -> f64 {
    let dnu = normal_derivative(u0, grid, BoundaryEnd::Gamma1, 2);
    let lap = laplacian_one_sided(u0, grid, BoundaryEnd::Gamma1);
    let trace = u0.values[grid.m];
    (dnu + params.diffusion() * lap - nonlinearity(trace, params)).norm()
}
