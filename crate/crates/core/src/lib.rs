//! Numerical library for logarithmic support functions of compact convex
//! sets in the nonnegative orthant, their regularizations, and continuity
//! diagnostics.
//!
//! The building blocks are:
//!
//! * [`polytope`]: convex hulls given by generator lists, support functions,
//!   membership, faces, and the lower-hull construction;
//! * [`cpoint`]: points of complex space kept in log-polar form so that
//!   coordinates of any magnitude, including exact zeros, stay representable;
//! * [`logsupport`]: the logarithmic support function `hs`, its restricted
//!   and smoothed variants, and growth-envelope sampling;
//! * [`evaluable`]: the function interface shared by every operator, with
//!   tropical polynomials, polynomial log-moduli, and log-support functions
//!   as ready-made implementations;
//! * [`quad`]: the radial-by-angular product quadrature built for the
//!   smoothing kernel's weighted measure;
//! * [`distance`]: the homogeneous distance weights used by the infimal
//!   convolution;
//! * [`search`]: deterministic coarse-to-fine minimization on product grids;
//! * [`regularize`]: the four regularization operators, standard smoothing,
//!   monotonicity checking, the decrease-index finder, and gluing;
//! * [`diagnostics`]: Lipschitz sampling, continuity profiles with certified
//!   lower bounds, discontinuity witnesses, the slow-regularization and
//!   formula-gap tables, vertex-count non-monotonicity, and a
//!   finite-difference subharmonicity check;
//! * [`report`]: the table type every diagnostic emits, with deterministic
//!   17-significant-digit CSV round-tripping.

pub mod cpoint;
pub mod diagnostics;
pub mod distance;
pub mod error;
pub mod evaluable;
pub mod fixtures;
pub mod logsupport;
pub mod polytope;
pub mod quad;
pub mod regularize;
pub mod report;
pub mod search;

pub use cpoint::CPoint;
pub use diagnostics::{
    example12_report, fd_tolerance, hs_nonmonotone_report, lipschitz_estimate, log_sh_check,
    modulus_profile, nonuniform_witness, perera_example_report, ContinuityReport, StencilSpec,
};
pub use distance::{DistanceFn, DistanceSpec};
pub use error::{
    CoreError, DiagnosticsError, FunctionError, LogSupportError, PolytopeError, RegularizeError,
};
pub use evaluable::{
    verify_growth, Evaluable, EvaluableHandle, FnEvaluable, FunctionSpec, Growth, LogSupportFn,
    PolyLog, Scaled, Tropical, TropicalPiece,
};
pub use logsupport::{
    growth_constants, hs, hs_descent, hs_lower_formula, hs_poly, hs_smooth_proxy,
};
pub use polytope::{Polytope, FACE_ZERO_TOL, LOWER_SET_MARGIN, MEMBERSHIP_TOL};
pub use quad::Kernel;
pub use regularize::{
    apply, dini_index, glue, inf_conv_a, int_conv_c, log_int_conv_d, monotone_check, std_smooth,
    sup_conv_b, GluedFn, MonotoneSpec, OpKind, OpOutcome, Regularized,
};
pub use report::{Cell, Report};
pub use search::SearchConfig;
