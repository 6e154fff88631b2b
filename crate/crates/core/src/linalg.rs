//! Dense linear algebra over [`Rational`].
//!
//! Everything here is exact: elimination picks the first nonzero pivot in a
//! column (no magnitude-based pivoting is needed without rounding error).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::error::LinalgError;
use crate::numeric::{int, Rational};

pub type RVector = Vec<Rational>;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; panics if they are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            assert_eq!(row.len(), n_cols, "ragged rows");
            entries.extend(row);
        }
        Self {
            rows: n_rows,
            cols: n_cols,
            entries,
        }
    }

    /// Convenience constructor for integer data.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    /// An `rows × cols` matrix whose entries are given row-major.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if !other[(k, j)].is_zero() {
                        out[(i, j)] += a * &other[(k, j)];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RVector {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `selfᵀ · v`.
    pub fn tr_mul_vec(&self, v: &[Rational]) -> RVector {
        assert_eq!(self.rows, v.len(), "vector length differs from row count");
        let mut out = vec![Rational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend_from_slice(self.row(i));
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &RMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "row counts differ");
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        Self {
            rows: self.rows,
            cols,
            entries,
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

impl Index<(usize, usize)> for RMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Solves `m · x = rhs` for square nonsingular `m`.
pub fn solve_square(m: &RMatrix, rhs: &[Rational]) -> Result<RVector, LinalgError> {
    let n = m.rows;
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows,
            found: m.cols,
        });
    }
    if rhs.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    forward_eliminate(&mut a, n)?;
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = a[i][n].clone();
        for j in i + 1..n {
            if !a[i][j].is_zero() {
                acc -= &a[i][j] * &x[j];
            }
        }
        x[i] = acc / &a[i][i];
    }
    Ok(x)
}

/// Upper-triangularizes the leading `n` columns of an augmented system.
fn forward_eliminate(a: &mut [Vec<Rational>], n: usize) -> Result<(), LinalgError> {
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(LinalgError::SingularMatrix)?;
        a.swap(col, pivot);
        let (top, bottom) = a.split_at_mut(col + 1);
        let prow = &top[col];
        for row in bottom.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &prow[col];
            for (x, p) in row.iter_mut().zip(prow.iter()).skip(col) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
    }
    Ok(())
}

/// Inverse of a square nonsingular matrix by Gauss–Jordan elimination.
pub fn inverse(m: &RMatrix) -> Result<RMatrix, LinalgError> {
    let n = m.rows;
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows,
            found: m.cols,
        });
    }
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(LinalgError::SingularMatrix)?;
        a.swap(col, pivot);
        let inv_p = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv_p;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(prow.iter()) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
    }
    let entries = a.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
    Ok(RMatrix {
        rows: n,
        cols: n,
        entries,
    })
}

/// Determinant of a square matrix (zero when singular).
pub fn determinant(m: &RMatrix) -> Rational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows;
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= &a[col][col];
        let (top, bottom) = a.split_at_mut(col + 1);
        let prow = &top[col];
        for row in bottom.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &prow[col];
            for (x, p) in row.iter_mut().zip(prow.iter()).skip(col) {
                *x -= &factor * p;
            }
        }
    }
    det
}

/// Echelon span of vectors inserted one at a time.
///
/// Pivots are restricted to the first `pivot_width` coordinates; anything
/// past that rides along (used to carry a right-hand side).
#[derive(Debug, Clone)]
pub struct IncrementalSpan {
    pivot_width: usize,
    basis: Vec<(usize, Vec<Rational>)>,
}

/// Result of reducing a vector against an [`IncrementalSpan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    /// The vector was independent and has been added.
    Added,
    /// The leading part reduced to zero; holds the reduced trailing entries.
    Dependent(Vec<Rational>),
}

impl IncrementalSpan {
    pub fn new(pivot_width: usize) -> Self {
        Self {
            pivot_width,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (p, r) in &self.basis {
            if v[*p].is_zero() {
                continue;
            }
            let factor = &v[*p] / &r[*p];
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        v
    }

    /// Would `v` increase the rank?
    pub fn is_independent(&self, v: &[Rational]) -> bool {
        let r = self.reduce(v.to_vec());
        r[..self.pivot_width].iter().any(|x| !x.is_zero())
    }

    pub fn insert(&mut self, v: Vec<Rational>) -> Reduction {
        let r = self.reduce(v);
        match r[..self.pivot_width].iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.basis.push((p, r));
                Reduction::Added
            }
            None => Reduction::Dependent(r[self.pivot_width..].to_vec()),
        }
    }
}

pub fn rank(m: &RMatrix) -> usize {
    let mut span = IncrementalSpan::new(m.cols);
    for i in 0..m.rows {
        span.insert(m.row(i).to_vec());
    }
    span.rank()
}

/// Minimum Euclidean-norm solution of `a · x = g`, i.e. `aᵀ(aaᵀ)⁻¹g`.
pub fn min_norm_point(a: &RMatrix, g: &[Rational]) -> Result<RVector, LinalgError> {
    if g.len() != a.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows,
            found: g.len(),
        });
    }
    let gram = a.mul(&a.transpose());
    let y = solve_square(&gram, g)?;
    Ok(a.tr_mul_vec(&y))
}

/// Extends the independent columns `fixed` to a column basis of `a`, adding
/// the smallest-index columns that raise the rank. `fixed` comes first in the
/// returned order.
pub fn extend_to_basis(a: &RMatrix, fixed: &[usize]) -> Result<Vec<usize>, LinalgError> {
    let m = a.rows;
    let mut span = IncrementalSpan::new(m);
    let mut chosen = Vec::with_capacity(m);
    let mut used = vec![false; a.cols];
    for &j in fixed {
        if used[j] || span.insert(a.column(j)) != Reduction::Added {
            return Err(LinalgError::DependentFixedColumns);
        }
        used[j] = true;
        chosen.push(j);
    }
    for (j, _) in used.iter().enumerate().filter(|(_, &u)| !u) {
        if chosen.len() == m {
            break;
        }
        if span.insert(a.column(j)) == Reduction::Added {
            chosen.push(j);
        }
    }
    if chosen.len() < m {
        return Err(LinalgError::RankDeficient);
    }
    Ok(chosen)
}

/// Drops redundant equations of `a · x = b`, keeping the first of each
/// dependent group. Reports [`LinalgError::Inconsistent`] if a dropped row
/// contradicts the kept ones.
pub fn full_row_rank_reduce(a: &RMatrix, b: &[Rational]) -> Result<(RMatrix, RVector), LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let mut span = IncrementalSpan::new(a.cols);
    let mut keep = Vec::new();
    for (i, bi) in b.iter().enumerate() {
        let mut v = a.row(i).to_vec();
        v.push(bi.clone());
        match span.insert(v) {
            Reduction::Added => keep.push(i),
            Reduction::Dependent(rest) => {
                if !rest[0].is_zero() {
                    return Err(LinalgError::Inconsistent);
                }
            }
        }
    }
    let kept_b = keep.iter().map(|&i| b[i].clone()).collect();
    Ok((a.select_rows(&keep), kept_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{norm2_squared, ratio};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> RVector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_square(&RMatrix::identity(2), &v(&[3, -1])).unwrap(), v(&[3, -1]));
        let m = RMatrix::from_i64(&[&[1, 1], &[1, 0]]);
        assert_eq!(solve_square(&m, &v(&[2, 1])).unwrap(), v(&[1, 1]));
        let s = RMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve_square(&s, &v(&[1, 1])), Err(LinalgError::SingularMatrix));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = RMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), RMatrix::identity(2));
        assert_eq!(determinant(&m), int(1));
        assert_eq!(determinant(&RMatrix::from_i64(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(&RMatrix::from_i64(&[&[1, 1], &[2, 2]])), int(0));
        assert_eq!(inverse(&RMatrix::from_i64(&[&[1, 1], &[2, 2]])), Err(LinalgError::SingularMatrix));
    }

    #[test]
    fn min_norm_examples() {
        let a = RMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(min_norm_point(&a, &v(&[2])).unwrap(), v(&[1, 1]));
        assert_eq!(min_norm_point(&RMatrix::identity(2), &v(&[5, 7])).unwrap(), v(&[5, 7]));
        let a = RMatrix::from_i64(&[&[1, 0, 1]]);
        let x = min_norm_point(&a, &v(&[2])).unwrap();
        assert_eq!(x, v(&[1, 0, 1]));
        // orthogonal to the null space basis {(0,1,0), (1,0,-1)}
        assert_eq!(dot(&x, &v(&[0, 1, 0])), int(0));
        assert_eq!(dot(&x, &v(&[1, 0, -1])), int(0));
    }

    #[test]
    fn extend_examples() {
        assert_eq!(extend_to_basis(&RMatrix::identity(3), &[]).unwrap(), vec![0, 1, 2]);
        let a = RMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 1]]);
        let cols = extend_to_basis(&a, &[2]).unwrap();
        assert_eq!(cols, vec![2, 0]);
        assert_eq!(determinant(&a.select_columns(&cols)), int(-1));
        let r = RMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        assert_eq!(extend_to_basis(&r, &[]), Err(LinalgError::RankDeficient));
        assert_eq!(extend_to_basis(&r, &[0, 1]), Err(LinalgError::DependentFixedColumns));
        assert_eq!(extend_to_basis(&a, &[1, 1]), Err(LinalgError::DependentFixedColumns));
    }

    #[test]
    fn rank_reduce_examples() {
        let a = RMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        let (ra, rb) = full_row_rank_reduce(&a, &v(&[1, 2])).unwrap();
        assert_eq!(ra, RMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(rb, v(&[1]));
        assert_eq!(full_row_rank_reduce(&a, &v(&[1, 3])), Err(LinalgError::Inconsistent));
        let (ra, rb) = full_row_rank_reduce(&RMatrix::identity(2), &v(&[4, 5])).unwrap();
        assert_eq!(ra, RMatrix::identity(2));
        assert_eq!(rb, v(&[4, 5]));
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RMatrix> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |xs| {
            RMatrix::from_entries(rows, cols, xs.into_iter().map(int).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn solve_substitutes_back(m in small_matrix(4, 4), rhs in proptest::collection::vec(-9i64..=9, 4)) {
            let rhs: RVector = rhs.into_iter().map(int).collect();
            match solve_square(&m, &rhs) {
                Ok(x) => prop_assert_eq!(m.mul_vec(&x), rhs),
                Err(e) => {
                    prop_assert_eq!(e, LinalgError::SingularMatrix);
                    prop_assert_eq!(determinant(&m), int(0));
                }
            }
        }

        #[test]
        fn min_norm_is_minimal(a in small_matrix(2, 4), g in proptest::collection::vec(-9i64..=9, 2),
                               t in proptest::collection::vec(-5i64..=5, 4)) {
            prop_assume!(rank(&a) == 2);
            let g: RVector = g.into_iter().map(int).collect();
            let x = min_norm_point(&a, &g).unwrap();
            prop_assert_eq!(a.mul_vec(&x), g.clone());
            // project an arbitrary vector onto null(a): t - aᵀ(aaᵀ)⁻¹ a t
            let t: RVector = t.into_iter().map(|x| ratio(x, 3)).collect();
            let at = a.mul_vec(&t);
            let back = min_norm_point(&a, &at).unwrap();
            let null: RVector = t.iter().zip(&back).map(|(p, q)| p - q).collect();
            prop_assert!(a.mul_vec(&null).iter().all(|z| z.is_zero()));
            let shifted: RVector = x.iter().zip(&null).map(|(p, q)| p + q).collect();
            prop_assert!(norm2_squared(&x) <= norm2_squared(&shifted));
        }

        #[test]
        fn extension_is_nonsingular(a in small_matrix(3, 5)) {
            match extend_to_basis(&a, &[]) {
                Ok(cols) => {
                    prop_assert_eq!(cols.len(), 3);
                    prop_assert!(!determinant(&a.select_columns(&cols)).is_zero());
                }
                Err(e) => {
                    prop_assert_eq!(e, LinalgError::RankDeficient);
                    prop_assert!(rank(&a) < 3);
                }
            }
        }

        #[test]
        fn rank_reduce_preserves_rank(a in small_matrix(4, 3), x in proptest::collection::vec(-4i64..=4, 3)) {
            // consistent by construction
            let x: RVector = x.into_iter().map(int).collect();
            let b = a.mul_vec(&x);
            let (ra, rb) = full_row_rank_reduce(&a, &b).unwrap();
            prop_assert_eq!(ra.rows(), rank(&a));
            prop_assert_eq!(rank(&ra), ra.rows());
            prop_assert_eq!(ra.mul_vec(&x), rb);
        }
    }
}
