//! Penalized polynomial regression on marker matrices.
//!
//! The crate fits polynomial models of marker data by ordinary least
//! squares, weighted ridge with unpenalized slots (the mixed-model
//! convention where the intercept carries no penalty), and weighted L1, and
//! provides the machinery to study how those fits react when a constant
//! vector is subtracted from the marker columns:
//!
//! * [`poly`] — monomials, polynomial models, completeness and closure,
//!   symbolic translation of the variables.
//! * [`coding`] — marker matrices, column translations, design matrices.
//! * [`solver`] — OLS / ridge / L1 fits plus an exhaustive small-instance
//!   L1 oracle.
//! * [`invariance`] — paired fits under two codings with machine-readable
//!   difference reports.
//! * [`suite`] — seeded randomized scenarios separating the penalties that
//!   keep predictions unchanged under translations from those that do not.
//!
//! All numeric code is generic over the [`Scalar`] floating-point type;
//! the `*64` aliases at the crate root fix `f64`, which is what the CLI and
//! the test suites use.

pub mod coding;
mod error;
pub mod invariance;
mod linalg;
pub mod poly;
pub mod solver;
pub mod suite;

use std::fmt;
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

pub use error::{Error, Result};

/// Floating-point scalar the numeric code is generic over.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum
        + fmt::Debug
        + fmt::Display
        + fmt::LowerExp
        + 'static
{
}

/// Converts an `f64` constant into the working scalar type.
pub(crate) fn constant<F: Scalar>(value: f64) -> F {
    F::from_f64(value).expect("constant representable in scalar type")
}

pub use coding::{build_design_matrix, DesignMatrix, MarkerMatrix, TranslationVector};
pub use invariance::{
    check_proposition1, run_invariance_experiment, InvarianceReport, Prop1Report, Verdict,
};
pub use poly::{Completeness, Monomial, PolynomialCoefficients, PolynomialModel};
pub use solver::{
    check_method_penalty, condition_estimate, fit_lasso_weighted, fit_ols, fit_ridge_weighted,
    fit_with_method, lasso_kkt_violation, lasso_oracle_small, predict, FitResult, Method,
    PenaltyNorm, PenaltySpec,
};
pub use suite::{corollary_suite, Expectation, ScenarioId, ScenarioResult, SuiteSummary};

pub type PolynomialCoefficients64 = PolynomialCoefficients<f64>;
pub type MarkerMatrix64 = MarkerMatrix<f64>;
pub type TranslationVector64 = TranslationVector<f64>;
pub type DesignMatrix64 = DesignMatrix<f64>;
pub type PenaltySpec64 = PenaltySpec<f64>;
pub type FitResult64 = FitResult<f64>;
pub type InvarianceReport64 = InvarianceReport<f64>;
pub type Prop1Report64 = Prop1Report<f64>;
pub type SuiteSummary64 = SuiteSummary<f64>;
