//! Exact coefficient arithmetic: the base field and the graded Laurent rings
//! `K[x^t, x^-t]`, plus Smith normal form over the latter.

mod field;
pub(crate) mod laurent;
mod smith;

pub use field::{Field, FieldElement};
pub use laurent::{LaurentElement, LaurentRing};
pub use smith::{smith_normal_form, SmithForm};

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("laurent step mismatch: {0} vs {1}")]
    StepMismatch(u32, u32),
    #[error("laurent step must be positive")]
    ZeroStep,
    #[error("exponent {exponent} is not a multiple of the step {step}")]
    OffStep { exponent: i64, step: u32 },
    #[error("not a unit: {0}")]
    NotUnit(String),
    #[error("cannot parse `{0}` as a field element")]
    Parse(String),
    #[error("{0} is not invertible modulo {1}")]
    NotInvertibleMod(String, u64),
}

/// A commutative ring whose constants are built from a runtime context
/// (the field, and for Laurent rings also the step).
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Clone + Debug + PartialEq;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn ctx(&self) -> Self::Ctx;
    fn is_zero(&self) -> bool;
}

/// A Euclidean domain with a computable unit test.
pub trait Euclidean: Ring {
    /// Size used by the division algorithm; zero only for units.
    fn norm(&self) -> u64;
    /// `(q, r)` with `self = q·d + r` and `r = 0` or `norm(r) < norm(d)`.
    fn div_rem(&self, d: &Self) -> (Self, Self);
    fn is_unit(&self) -> bool;
    fn unit_inverse(&self) -> Option<Self>;
}
