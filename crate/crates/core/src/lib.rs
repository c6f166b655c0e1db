//! Pseudo-spectral solvers for time-periodic solutions of the Kelvin-Voigt
//! damped wave equation and the Kuznetsov equation
//!
//! ```text
//! u_tt - Lap u - lambda d_t Lap u - d_t(gamma u_t^2 + |grad u|^2) = f
//! ```
//!
//! on a periodic box or a half-space (realized by reflection), with the
//! solution split into a steady part and a purely periodic part.

pub mod config;
pub mod damping;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod halfspace;
pub mod io;
pub mod kuznetsov;
pub mod linear;
pub mod manufactured;
pub mod model;
pub mod norms;
pub mod ops;
pub mod random;
pub mod sweep;
pub mod symbols;
pub mod verify;

pub use config::RunConfig;
pub use damping::{mode_damping_report, ModeDampingTable};
pub use error::{Error, Result};
pub use field::{
    forward_transform, inverse_transform, project_periodic, project_steady, Field, Mode, Spectrum,
};
pub use grid::GridSpec;
pub use halfspace::{
    solve_halfspace, solve_linear, BcKind, BoundaryField, Domain, HalfField, ProblemSpec,
};
pub use kuznetsov::{
    solve_kuznetsov, FixedPointConfig, IterationRecord, IterationStatus, IterationTrace,
};
pub use manufactured::{manufactured_kuznetsov, manufactured_linear, ClosedForm};
pub use linear::{solve_box, LinearOptions, LinearSolveResult, SolutionDecomposition};
pub use model::ModelParams;
pub use norms::{EmbeddingSpec, NormSpec, RatioReport};
pub use ops::{Dealias, Derivative};
pub use symbols::{
    lattice_multiplier, marcinkiewicz_check, smooth_multiplier, CutoffSpec, MarcinkiewiczReport,
    SampleSpec, SymbolParams,
};
