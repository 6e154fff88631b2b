//! Standard-form problems `min cᵀx  s.t.  Ax = b, x ≥ 0`.

use alloc::format;
use alloc::string::String;

use num_traits::Signed;

use crate::error::{LinalgError, ModelError};
use crate::linalg::{dot, full_row_rank_reduce, RMatrix, RVector};
use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPInstance {
    pub a: RMatrix,
    pub b: RVector,
    pub c: RVector,
    pub name: String,
}

impl LPInstance {
    pub fn new(a: RMatrix, b: RVector, c: RVector, name: impl Into<String>) -> Result<Self, ModelError> {
        if b.len() != a.rows() {
            return Err(ModelError::DimensionMismatch(format!(
                "b has {} entries but A has {} rows",
                b.len(),
                a.rows()
            )));
        }
        if c.len() != a.cols() {
            return Err(ModelError::DimensionMismatch(format!(
                "c has {} entries but A has {} columns",
                c.len(),
                a.cols()
            )));
        }
        Ok(Self {
            a,
            b,
            c,
            name: name.into(),
        })
    }

    /// Number of equality constraints.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn objective(&self, x: &[Rational]) -> Rational {
        dot(&self.c, x)
    }

    /// `Ax = b` and `x ≥ 0`, exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.n() && x.iter().all(|v| !v.is_negative()) && self.a.mul_vec(x) == self.b
    }

    /// Whether every entry of `A` lies in {−1, 0, 1}.
    pub fn has_unit_entries(&self) -> bool {
        self.a.entries().iter().all(|x| x.is_integer() && x.abs() <= Rational::from_integer(1.into()))
    }

    /// Removes redundant equations; `Inconsistent` means the problem is infeasible.
    pub fn rank_reduced(&self) -> Result<Self, LinalgError> {
        let (a, b) = full_row_rank_reduce(&self.a, &self.b)?;
        Ok(Self {
            a,
            b,
            c: self.c.clone(),
            name: self.name.clone(),
        })
    }
}
