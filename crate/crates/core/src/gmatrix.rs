//! Shifted graded matrix algebras `M_n(R)(δ₁, …, δ_n)` with `R = K` or
//! `R = K[x^t, x^-t]`.
//!
//! The matrix unit `e_ij(x)` with homogeneous `x` has degree
//! `deg x + δ_i − δ_j`, so a matrix is homogeneous of degree `λ` exactly when
//! each nonzero entry `(i, j)` lies in `R_{λ + δ_j − δ_i}`. Indices are 0-based.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{Field, FieldElement, LaurentElement, LaurentRing, Ring, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GmError {
    #[error("graded matrix algebras need at least one shift")]
    NoShifts,
    #[error("matrices belong to different algebras")]
    AlgebraMismatch,
    #[error("coefficient {0} is not homogeneous")]
    Inhomogeneous(String),
    #[error("index ({0}, {1}) out of range for size {2}")]
    IndexOutOfRange(usize, usize, usize),
    #[error("entry {0} does not belong to the base ring")]
    NotInBase(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed matrix json: {0}")]
    Json(String),
}

/// The coefficient ring of a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseRing {
    /// The field `K`, trivially graded.
    Field,
    /// `K[x^t, x^-t]` with `deg x = 1`.
    Laurent { step: u32 },
}

impl BaseRing {
    /// Step of the Laurent ring used to store entries; constants use step 1.
    fn storage_step(self) -> u32 {
        match self {
            BaseRing::Field => 1,
            BaseRing::Laurent { step } => step,
        }
    }

    fn to_json(self) -> Value {
        match self {
            BaseRing::Field => json!("K"),
            BaseRing::Laurent { step } => json!({ "laurent_t": step }),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Field => f.write_str("K"),
            BaseRing::Laurent { step: 1 } => f.write_str("K[x,x^-1]"),
            BaseRing::Laurent { step } => write!(f, "K[x^{step},x^-{step}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedMatrixAlgebra {
    base: BaseRing,
    field: Field,
    shifts: Vec<i64>,
}

impl GradedMatrixAlgebra {
    pub fn new(base: BaseRing, field: Field, shifts: Vec<i64>) -> Result<Self, GmError> {
        if shifts.is_empty() {
            return Err(GmError::NoShifts);
        }
        if let BaseRing::Laurent { step: 0 } = base {
            return Err(ScalarError::ZeroStep.into());
        }
        Ok(GradedMatrixAlgebra {
            base,
            field,
            shifts,
        })
    }

    pub fn base(&self) -> BaseRing {
        self.base
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn size(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn entry_ring(&self) -> LaurentRing {
        LaurentRing {
            field: self.field,
            step: self.base.storage_step(),
        }
    }

    pub fn zero(&self) -> GradedMatrix {
        GradedMatrix {
            algebra: self.clone(),
            entries: Matrix::zeros(&self.entry_ring(), self.size(), self.size()),
        }
    }

    pub fn identity(&self) -> GradedMatrix {
        GradedMatrix {
            algebra: self.clone(),
            entries: Matrix::identity(&self.entry_ring(), self.size()),
        }
    }

    /// A base-ring scalar in this algebra's entry representation.
    pub fn base_element(&self, coeff: FieldElement, exponent: i64) -> Result<LaurentElement, GmError> {
        if self.base == BaseRing::Field && exponent != 0 {
            return Err(GmError::NotInBase(format!("x^{exponent}")));
        }
        Ok(LaurentElement::monomial(self.entry_ring(), coeff, exponent)?)
    }

    /// `e_ij(x)`.
    pub fn unit(&self, i: usize, j: usize, x: LaurentElement) -> Result<GradedMatrix, GmError> {
        let n = self.size();
        if i >= n || j >= n {
            return Err(GmError::IndexOutOfRange(i, j, n));
        }
        let mut m = self.zero();
        m.set(i, j, x)?;
        Ok(m)
    }

    /// `x^exponent · e_ij` with coefficient one.
    pub fn unit_power(&self, i: usize, j: usize, exponent: i64) -> Result<GradedMatrix, GmError> {
        let x = self.base_element(self.field.one(), exponent)?;
        self.unit(i, j, x)
    }

    pub fn from_entries(&self, entries: Matrix<LaurentElement>) -> Result<GradedMatrix, GmError> {
        let n = self.size();
        if entries.rows() != n || entries.cols() != n || *entries.ctx() != self.entry_ring() {
            return Err(GmError::AlgebraMismatch);
        }
        for (_, x) in entries.entries() {
            self.check_entry(x)?;
        }
        Ok(GradedMatrix {
            algebra: self.clone(),
            entries,
        })
    }

    fn check_entry(&self, x: &LaurentElement) -> Result<(), GmError> {
        if x.ring() != self.entry_ring() {
            return Err(GmError::NotInBase(x.to_string()));
        }
        if self.base == BaseRing::Field && !x.is_constant() {
            return Err(GmError::NotInBase(x.to_string()));
        }
        Ok(())
    }

    /// Degree of the base element `x`: zero on the field, the exponent of a
    /// Laurent monomial.
    pub fn base_degree(&self, x: &LaurentElement) -> Result<i64, GmError> {
        self.check_entry(x)?;
        match self.base {
            BaseRing::Field => {
                if x.is_zero() {
                    Err(GmError::Inhomogeneous("0".into()))
                } else {
                    Ok(0)
                }
            }
            BaseRing::Laurent { .. } => x
                .degree()
                .ok_or_else(|| GmError::Inhomogeneous(x.to_string())),
        }
    }

    /// `deg e_ij(x) = deg x + δ_i − δ_j`.
    pub fn unit_degree(&self, i: usize, j: usize, x: &LaurentElement) -> Result<i64, GmError> {
        let n = self.size();
        if i >= n || j >= n {
            return Err(GmError::IndexOutOfRange(i, j, n));
        }
        Ok(self.base_degree(x)? + self.shifts[i] - self.shifts[j])
    }

    /// Degree `λ` in which entry `(i, j)` must lie for a matrix homogeneous
    /// of degree `lambda`.
    pub fn entry_degree(&self, lambda: i64, i: usize, j: usize) -> i64 {
        lambda + self.shifts[j] - self.shifts[i]
    }

    /// Whether the base ring has a nonzero component in degree `d`.
    pub fn base_has_degree(&self, d: i64) -> bool {
        match self.base {
            BaseRing::Field => d == 0,
            BaseRing::Laurent { step } => d.rem_euclid(step as i64) == 0,
        }
    }

    /// `dim_K` of the degree-`λ` component: the number of positions `(i, j)`
    /// whose required entry degree occurs in the base ring, each contributing
    /// a one-dimensional base component.
    pub fn hom_component_dim(&self, lambda: i64) -> usize {
        let n = self.size();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.base_has_degree(self.entry_degree(lambda, i, j)))
            .count()
    }

    pub fn to_json(&self) -> Value {
        json!({ "shifts": self.shifts, "base": self.base.to_json() })
    }
}

/// An element of a [`GradedMatrixAlgebra`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMatrix {
    algebra: GradedMatrixAlgebra,
    entries: Matrix<LaurentElement>,
}

impl GradedMatrix {
    pub fn algebra(&self) -> &GradedMatrixAlgebra {
        &self.algebra
    }

    pub fn entries(&self) -> &Matrix<LaurentElement> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentElement {
        &self.entries[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, x: LaurentElement) -> Result<(), GmError> {
        let n = self.algebra.size();
        if i >= n || j >= n {
            return Err(GmError::IndexOutOfRange(i, j, n));
        }
        self.algebra.check_entry(&x)?;
        self.entries[(i, j)] = x;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    fn same(&self, other: &GradedMatrix) -> Result<(), GmError> {
        if self.algebra != other.algebra {
            return Err(GmError::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMatrix) -> Result<GradedMatrix, GmError> {
        self.same(other)?;
        Ok(GradedMatrix {
            algebra: self.algebra.clone(),
            entries: self.entries.add(&other.entries),
        })
    }

    pub fn sub(&self, other: &GradedMatrix) -> Result<GradedMatrix, GmError> {
        self.same(other)?;
        Ok(GradedMatrix {
            algebra: self.algebra.clone(),
            entries: self.entries.sub(&other.entries),
        })
    }

    pub fn mul(&self, other: &GradedMatrix) -> Result<GradedMatrix, GmError> {
        self.same(other)?;
        Ok(GradedMatrix {
            algebra: self.algebra.clone(),
            entries: self.entries.mul(&other.entries),
        })
    }

    pub fn scale(&self, c: &FieldElement) -> GradedMatrix {
        let ring = self.algebra.entry_ring();
        GradedMatrix {
            algebra: self.algebra.clone(),
            entries: self.entries.map(&ring, |x| x.scale(c)),
        }
    }

    /// Transpose with `x^k ↦ x^-k` on entries; mirrors the involution of
    /// the path algebra.
    pub fn star(&self) -> GradedMatrix {
        let ring = self.algebra.entry_ring();
        GradedMatrix {
            algebra: self.algebra.clone(),
            entries: self.entries.transpose().map(&ring, LaurentElement::star),
        }
    }

    /// Every nonzero entry `(i, j)` lies in the base component of degree
    /// `λ + δ_j − δ_i`.
    pub fn is_homogeneous(&self, lambda: i64) -> bool {
        self.entries.entries().all(|((i, j), x)| {
            if x.is_zero() {
                return true;
            }
            let d = self.algebra.entry_degree(lambda, i, j);
            match self.algebra.base {
                BaseRing::Field => d == 0,
                BaseRing::Laurent { .. } => x.degree() == Some(d),
            }
        })
    }

    /// The degree of a nonzero homogeneous matrix.
    pub fn degree(&self) -> Option<i64> {
        let ((i, j), x) = self.entries.entries().find(|(_, x)| !x.is_zero())?;
        let lambda = self.algebra.base_degree(x).ok()? + self.algebra.shifts[i]
            - self.algebra.shifts[j];
        self.is_homogeneous(lambda).then_some(lambda)
    }

    /// The degree-`λ` component.
    pub fn component(&self, lambda: i64) -> GradedMatrix {
        let ring = self.algebra.entry_ring();
        let entries = Matrix::from_fn(&ring, self.algebra.size(), self.algebra.size(), |i, j| {
            self.entries[(i, j)].component(self.algebra.entry_degree(lambda, i, j))
        });
        GradedMatrix {
            algebra: self.algebra.clone(),
            entries,
        }
    }

    /// Entries as field elements; only meaningful over `K`.
    pub fn to_field_matrix(&self) -> Matrix<FieldElement> {
        let f = self.algebra.field;
        self.entries.map(&f, |x| x.coeff(0))
    }

    pub fn to_json(&self) -> Value {
        let n = self.algebra.size();
        let rows: Vec<Value> = (0..n)
            .map(|i| {
                Value::Array(
                    (0..n)
                        .map(|j| {
                            let x = &self.entries[(i, j)];
                            match self.algebra.base {
                                BaseRing::Field => Value::String(x.coeff(0).to_string()),
                                BaseRing::Laurent { .. } => x.to_json(),
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "shifts": self.algebra.shifts,
            "base": self.algebra.base.to_json(),
            "entries": rows,
        })
    }

    pub fn from_json(field: Field, value: &Value) -> Result<GradedMatrix, GmError> {
        let bad = |what: &str| GmError::Json(format!("{what}: {value}"));
        let shifts: Vec<i64> = serde_json::from_value(value.get("shifts").cloned().ok_or_else(|| bad("shifts"))?)
            .map_err(|_| bad("shifts"))?;
        let base = match value.get("base") {
            Some(Value::String(s)) if s == "K" => BaseRing::Field,
            Some(b) => BaseRing::Laurent {
                step: b
                    .get("laurent_t")
                    .and_then(Value::as_u64)
                    .and_then(|t| u32::try_from(t).ok())
                    .ok_or_else(|| bad("base"))?,
            },
            None => return Err(bad("base")),
        };
        let alg = GradedMatrixAlgebra::new(base, field, shifts)?;
        let rows = value.get("entries").and_then(Value::as_array).ok_or_else(|| bad("entries"))?;
        let n = alg.size();
        if rows.len() != n {
            return Err(bad("entries"));
        }
        let mut m = alg.zero();
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == n).ok_or_else(|| bad("row"))?;
            for (j, x) in row.iter().enumerate() {
                let entry = match base {
                    BaseRing::Field => {
                        let s = x.as_str().ok_or_else(|| bad("entry"))?;
                        LaurentElement::constant(alg.entry_ring(), field.parse(s)?)
                    }
                    BaseRing::Laurent { .. } => LaurentElement::from_json(field, x)?,
                };
                m.set(i, j, entry)?;
            }
        }
        Ok(m)
    }
}

impl fmt::Display for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.algebra.size();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| self.entries[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
