//! JSON run configuration: parsing, defaulting, and exhaustive validation.
//!
//! Validation reports every violation it finds, each tagged with the path of
//! the offending key, instead of stopping at the first.

use glsim_core::{
    bump_field, mode_field, BcVariant, ComplexField, FeedbackSpec, ModelParams,
    NonlinearTreatment, RadialGrid, SchemeConfig,
};
use num_complex::Complex64 as C64;
use serde::Deserialize;
use std::sync::Arc;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub domain: Domain,
    pub params: Params,
    pub scheme: Scheme,
    #[serde(default)]
    pub feedback: Feedback,
    #[serde(default)]
    pub initial: Initial,
    #[serde(default)]
    pub output: Output,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    #[serde(rename = "N")]
    pub dim: u32,
    pub r0: f64,
    pub r1: f64,
    #[serde(rename = "M")]
    pub m: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub lambda: f64,
    pub alpha: f64,
    pub kappa: f64,
    pub beta: f64,
    pub gamma: f64,
    pub p: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scheme {
    pub bc_variant: BcName,
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    #[serde(default = "default_boundary_order")]
    pub boundary_order: u8,
    #[serde(default)]
    pub nonlinear_treatment: TreatmentName,
}

fn default_boundary_order() -> u8 {
    2
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BcName {
    Dynamic,
    Wentzell,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum TreatmentName {
    #[default]
    ExplicitAb2,
    Picard1,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Feedback {
    pub family: FeedbackName,
    #[serde(default = "one")]
    pub m: f64,
    #[serde(rename = "M", default = "one")]
    pub big_m: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for Feedback {
    fn default() -> Self {
        Self {
            family: FeedbackName::Identity,
            m: 1.0,
            big_m: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackName {
    Identity,
    Saturating,
    /// Decaying profile `φ(s) = m + (M-m)e^{-s}`; for M sufficiently larger
    /// than m the product `φ(s)s` is non-monotone, which `check` flags.
    Decreasing,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    pub family: InitialName,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "default_center")]
    pub center_frac: f64,
    #[serde(default = "default_width")]
    pub width_frac: f64,
    #[serde(default = "default_mode")]
    pub k: u32,
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

fn default_center() -> f64 {
    0.45
}
fn default_width() -> f64 {
    0.25
}
fn default_mode() -> u32 {
    1
}

impl Default for Initial {
    fn default() -> Self {
        Self {
            family: InitialName::Bump,
            amplitude: 1.0,
            center_frac: default_center(),
            width_frac: default_width(),
            k: 1,
            path: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum InitialName {
    Bump,
    Mode,
    File,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default)]
    pub csv_path: Option<String>,
    #[serde(default)]
    pub json_path: Option<String>,
    #[serde(default = "default_stride")]
    pub sample_stride: usize,
}

fn default_stride() -> usize {
    1
}

impl Default for Output {
    fn default() -> Self {
        Self {
            csv_path: None,
            json_path: None,
            sample_stride: 1,
        }
    }
}

/// Nodal field stored on disk as `{"re": [...], "im": [...]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl RunConfig {
    /// Parses and validates; the error lists every violation found.
    pub fn from_str(text: &str) -> Result<Self, Vec<String>> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| vec![format!("parse: {e}")])?;
        let violations = cfg.validate();
        if violations.is_empty() {
            Ok(cfg)
        } else {
            Err(violations)
        }
    }

    fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut bad = |key: &str, why: &str| v.push(format!("{key}: {why}"));

        if !(1..=3).contains(&self.domain.dim) {
            bad("domain.N", "dimension must be 1, 2, or 3");
        }
        if !self.domain.r0.is_finite() || self.domain.r0 < 0.0 {
            bad("domain.r0", "must be finite and >= 0");
        }
        if self.domain.dim >= 2 && self.domain.r0 == 0.0 {
            bad("domain.r0", "annulus needs an inner radius > 0 for N >= 2");
        }
        if !self.domain.r1.is_finite() || self.domain.r1 <= self.domain.r0 {
            bad("domain.r1", "must be finite and > domain.r0");
        }
        if self.domain.m < 4 {
            bad("domain.M", "grid needs at least 4 cells");
        }

        let p = &self.params;
        for (key, val) in [
            ("params.lambda", p.lambda),
            ("params.alpha", p.alpha),
            ("params.kappa", p.kappa),
            ("params.beta", p.beta),
            ("params.gamma", p.gamma),
            ("params.p", p.p),
        ] {
            if !val.is_finite() {
                bad(key, "must be finite");
            }
        }
        if p.alpha <= 0.0 {
            bad("params.alpha", "dispersion parameter must be > 0");
        }
        if p.lambda < 0.0 {
            bad("params.lambda", "diffusion must be >= 0");
        }
        if p.kappa < 0.0 {
            bad("params.kappa", "nonlinear dissipation must be >= 0");
        }
        if p.p < 2.0 {
            bad("params.p", "source power index must be >= 2");
        }

        if !(self.scheme.dt.is_finite() && self.scheme.dt > 0.0) {
            bad("scheme.dt", "must be finite and > 0");
        } else if !(self.scheme.t_final.is_finite() && self.scheme.t_final >= self.scheme.dt) {
            bad("scheme.T", "must be finite and >= scheme.dt");
        }
        if !(self.scheme.boundary_order == 1 || self.scheme.boundary_order == 2) {
            bad("scheme.boundary_order", "must be 1 or 2");
        }
        if self.feedback.family != FeedbackName::Identity {
            if !(self.feedback.m.is_finite() && self.feedback.m > 0.0) {
                bad("feedback.m", "lower constant must be finite and > 0");
            }
            if !(self.feedback.big_m.is_finite() && self.feedback.big_m >= self.feedback.m) {
                bad("feedback.M", "upper constant must be finite and >= feedback.m");
            }
            if self.scheme.bc_variant == BcName::Wentzell {
                bad(
                    "feedback.family",
                    "non-identity feedback requires the dynamic variant",
                );
            }
        }

        match self.initial.family {
            InitialName::Bump => {
                if !(self.initial.amplitude.is_finite()) {
                    bad("initial.amplitude", "must be finite");
                }
                if !(0.0 < self.initial.center_frac && self.initial.center_frac < 1.0) {
                    bad("initial.center_frac", "must lie in (0, 1)");
                }
                if !(self.initial.width_frac.is_finite() && self.initial.width_frac > 0.0) {
                    bad("initial.width_frac", "must be finite and > 0");
                }
            }
            InitialName::Mode => {
                if self.initial.k < 1 {
                    bad("initial.k", "mode index must be >= 1");
                }
            }
            InitialName::File => {
                if self.initial.path.as_deref().unwrap_or("").is_empty() {
                    bad("initial.path", "file family needs a path");
                }
            }
        }

        if self.output.sample_stride < 1 {
            bad("output.sample_stride", "must be >= 1");
        }
        v
    }

    pub fn grid(&self) -> glsim_core::Result<RadialGrid> {
        RadialGrid::build(self.domain.dim, self.domain.r0, self.domain.r1, self.domain.m)
    }

    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            lambda: self.params.lambda,
            alpha: self.params.alpha,
            kappa: self.params.kappa,
            beta: self.params.beta,
            gamma: self.params.gamma,
            p: self.params.p,
            dim: self.domain.dim,
        }
    }

    pub fn feedback_spec(&self) -> FeedbackSpec {
        match self.feedback.family {
            FeedbackName::Identity => FeedbackSpec::identity(),
            FeedbackName::Saturating => {
                FeedbackSpec::saturating(self.feedback.m, self.feedback.big_m)
            }
            FeedbackName::Decreasing => {
                let (m, big_m) = (self.feedback.m, self.feedback.big_m);
                FeedbackSpec::custom(
                    Arc::new(move |s: f64| m + (big_m - m) * (-s).exp()),
                    m,
                    big_m,
                )
            }
        }
    }

    pub fn scheme_config(&self) -> SchemeConfig {
        let variant = match self.scheme.bc_variant {
            BcName::Dynamic => BcVariant::Dynamic,
            BcName::Wentzell => BcVariant::Wentzell,
        };
        let treatment = match self.scheme.nonlinear_treatment {
            TreatmentName::ExplicitAb2 => NonlinearTreatment::ExplicitAb2,
            TreatmentName::Picard1 => NonlinearTreatment::Picard1,
        };
        SchemeConfig::new(variant, self.scheme.dt, self.scheme.t_final)
            .with_boundary_order(self.scheme.boundary_order)
            .with_treatment(treatment)
            .with_feedback(self.feedback_spec())
    }

    /// Builds the initial field; file-backed data must match the grid size.
    pub fn initial_field(&self, grid: &RadialGrid) -> Result<ComplexField, String> {
        match self.initial.family {
            InitialName::Bump => Ok(bump_field(
                grid,
                self.initial.amplitude,
                self.initial.center_frac,
                self.initial.width_frac,
            )),
            InitialName::Mode => Ok(mode_field(grid, self.initial.amplitude, self.initial.k)),
            InitialName::File => {
                let path = self.initial.path.as_deref().unwrap();
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("initial.path: cannot read {path}: {e}"))?;
                let field: FieldFile = serde_json::from_str(&text)
                    .map_err(|e| format!("initial.path: bad field file: {e}"))?;
                let n = grid.num_nodes();
                if field.re.len() != n || field.im.len() != n {
                    return Err(format!(
                        "initial.path: field has {} nodes, grid has {n}",
                        field.re.len()
                    ));
                }
                Ok(ComplexField {
                    values: field
                        .re
                        .iter()
                        .zip(&field.im)
                        .map(|(&re, &im)| C64::new(re, im))
                        .collect(),
                })
            }
        }
    }
}
