//! Dynamical systems of the quantum bicrossproduct Cayley-Klein algebras
//! `U_z(iso_ω(N))`.
//!
//! The rotation algebra `so_ω(N)` acts on the deformed translation group
//! `T_{z,N}` through vector fields that are linear for `J_{ij}` (`j < N`)
//! and nonlinear for the boosts `J_{iN}`. This crate evaluates those fields,
//! their invariants and closed-form flows, the reduced planar Hamiltonian
//! system, and checks everything against an independent Runge-Kutta oracle.

pub mod batch;
pub mod error;
pub mod fields;
pub mod flows;
pub mod group;
pub mod invariants;
pub mod oracle;
pub mod orbit;
pub mod reduced;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
pub use fields::{eval_field, field_jacobian, lie_bracket, FieldSpec, VelocityVector, BRACKET_SIGN};
pub use flows::{
    f_first_bracket, f_function, flow_boost, flow_boost_limit, flow_full, flow_reduced, flow_rotation,
    gamma_curve, FlowResult, ZERO_Z_THRESHOLD,
};
pub use group::{compose, inverse, semidirect_split, GroupPoint};
pub use invariants::{
    aux_invariant, casimir, casimir_gradient, reduced_gradient, reduced_hessian, reduced_invariant,
};
pub use oracle::{conserve_check, integrate, IntegrationSpec, IntegrationStatus, Trajectory};
pub use reduced::{
    classify_level_set, fixed_points, hamiltonian_check, reduce, rhs, second_order_residuals,
    FixedPointKind, FixedPointReport, ReducedParams, ReducedState, Reduction,
};
pub use structure::{
    c_omega, cs_omega, jacobi_residual, s_omega, structure_constants, GeneratorId, OmegaParams,
    StructureTable,
};
