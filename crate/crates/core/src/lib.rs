//! Finite-difference solver for a complex Ginzburg-Landau equation on radial
//! domains (interval and annulus) with dynamic or Wentzell boundary
//! conditions at the outer boundary, plus the energy diagnostics and
//! verification studies built on top of it.
//!
//! The crates in this workspace share types through this root: grids and
//! quadrature live in [`geometry`], the discrete operators and norms in
//! [`discrete_ops`], the Crank-Nicolson IMEX stepper in [`stepper`], and the
//! pass/fail studies in [`experiments`].

pub mod diagnostics;
pub mod discrete_ops;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod initial;
pub mod linsolve;
pub mod model;
pub mod stepper;

pub use diagnostics::{
    bound_check, convergence_order, decay_e0, decay_rate_fit, energy_f, BoundCheck, DecayFit,
    EnergyLedger, LedgerSample, StepIncrements,
};
pub use discrete_ops::{
    dissipativity_residual, inner_v, lap_sq_interior, laplacian_apply, laplacian_one_sided,
    lp_pow_interior, norm_lp_boundary, norm_lp_interior, norm_v, normal_derivative,
    resolvent_lift, ComplexField, DissipativityCheck,
};
pub use error::{Result, SimError};
pub use linsolve::{bordered_solve, dense_solve, thomas_solve, to_dense, TridiagonalSystem};
pub use experiments::{
    equivalence_study, inviscid_study, linear_suite, manufactured_solution_study,
    stabilization_study, CaseReport, ExperimentReport,
};
pub use geometry::{BoundaryEnd, GeometricReport, RadialGrid};
pub use initial::{bump_field, mode_field, random_field};
pub use model::{
    assumption_check, compatibility_residual, nonlinearity, nonlinearity_tangent,
    AssumptionReport, FeedbackSpec, ModelParams,
};
pub use stepper::{
    neumann_map, run, BcVariant, Forcing, NonlinearTreatment, SchemeConfig, Stepper, Trajectory,
    BLOWUP_GUARD,
};
