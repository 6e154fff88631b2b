//! Brute-force total-unimodularity certification.

use alloc::vec::Vec;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ModelError;
use crate::linalg::{determinant, RMatrix};
use crate::numeric::Rational;
use crate::subsets::{binomial, Combinations};

pub const DEFAULT_DETERMINANT_BUDGET: u64 = 10_000_000;

/// A square submatrix whose determinant is outside {−1, 0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TUReport {
    pub is_tu: bool,
    pub witness: Option<TuWitness>,
    pub max_order_checked: usize,
}

/// Enumerates every square submatrix up to `max_order` (clamped to
/// `min(m, n)`) with the default budget of 10⁷ determinants.
pub fn is_totally_unimodular(a: &RMatrix, max_order: usize) -> Result<TUReport, ModelError> {
    is_totally_unimodular_with_budget(a, max_order, DEFAULT_DETERMINANT_BUDGET)
}

pub fn is_totally_unimodular_with_budget(
    a: &RMatrix,
    max_order: usize,
    budget: u64,
) -> Result<TUReport, ModelError> {
    let order = max_order.min(a.rows()).min(a.cols());
    let total: u128 = (1..=order)
        .map(|k| binomial(a.rows(), k).saturating_mul(binomial(a.cols(), k)))
        .fold(0u128, u128::saturating_add);
    if total > budget as u128 {
        return Err(ModelError::SizeLimitExceeded { budget });
    }

    let is_unit = |x: &Rational| x.is_zero() || x.abs().is_one();

    // 1×1 minors; also decides whether the integer fast path applies.
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if order >= 1 && !is_unit(&a[(i, j)]) {
                return Ok(TUReport {
                    is_tu: false,
                    witness: Some(TuWitness {
                        rows: alloc::vec![i],
                        cols: alloc::vec![j],
                        det: a[(i, j)].clone(),
                    }),
                    max_order_checked: order,
                });
            }
        }
    }
    let unit: Vec<i128> = a
        .entries()
        .iter()
        .map(|x| x.to_integer().to_i128().unwrap_or(0))
        .collect();

    for k in 2..=order {
        for rows in Combinations::new(a.rows(), k) {
            for cols in Combinations::new(a.cols(), k) {
                let mut sub: Vec<i128> = Vec::with_capacity(k * k);
                for &i in &rows {
                    for &j in &cols {
                        sub.push(unit[i * a.cols() + j]);
                    }
                }
                let det = bareiss_det(&mut sub, k);
                if det.abs() > 1 {
                    return Ok(TUReport {
                        is_tu: false,
                        witness: Some(TuWitness {
                            rows,
                            cols,
                            det: Rational::from_integer(det.into()),
                        }),
                        max_order_checked: order,
                    });
                }
            }
        }
    }
    Ok(TUReport {
        is_tu: true,
        witness: None,
        max_order_checked: order,
    })
}

/// Fraction-free determinant of a `k × k` row-major integer matrix.
fn bareiss_det(m: &mut [i128], k: usize) -> i128 {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for p in 0..k {
        if m[p * k + p] == 0 {
            let Some(swap) = (p + 1..k).find(|&r| m[r * k + p] != 0) else {
                return 0;
            };
            for c in 0..k {
                m.swap(p * k + c, swap * k + c);
            }
            sign = -sign;
        }
        let pivot = m[p * k + p];
        for i in p + 1..k {
            for j in p + 1..k {
                m[i * k + j] = (m[i * k + j] * pivot - m[i * k + p] * m[p * k + j]) / prev;
            }
            m[i * k + p] = 0;
        }
        prev = pivot;
    }
    sign * m[(k - 1) * k + (k - 1)]
}

/// Exact rational determinant of the witness submatrix, for callers that
/// want to re-derive it independently of the integer fast path.
pub fn witness_determinant(a: &RMatrix, w: &TuWitness) -> Rational {
    determinant(&a.select_rows(&w.rows).select_columns(&w.cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    #[test]
    fn identity_is_tu() {
        let r = is_totally_unimodular(&RMatrix::identity(3), 3).unwrap();
        assert!(r.is_tu);
        assert_eq!(r.max_order_checked, 3);
    }

    #[test]
    fn two_by_two_witness() {
        let a = RMatrix::from_i64(&[&[1, 1], &[-1, 1]]);
        let r = is_totally_unimodular(&a, 2).unwrap();
        assert!(!r.is_tu);
        let w = r.witness.unwrap();
        assert_eq!((w.rows.as_slice(), w.cols.as_slice()), (&[0, 1][..], &[0, 1][..]));
        assert_eq!(w.det, int(2));
        assert_eq!(witness_determinant(&a, &w), int(2));
    }

    #[test]
    fn large_entry_is_its_own_witness() {
        let a = RMatrix::from_i64(&[&[1, 0], &[0, 3]]);
        let r = is_totally_unimodular(&a, 2).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.det, int(3));
    }

    #[test]
    fn bounded_order_misses_deeper_witness() {
        // odd cycle incidence: every 2×2 minor is fine, the 3×3 determinant is 2
        let a = RMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert!(is_totally_unimodular(&a, 2).unwrap().is_tu);
        let full = is_totally_unimodular(&a, 3).unwrap();
        assert!(!full.is_tu);
        assert_eq!(full.witness.unwrap().det.abs(), int(2));
    }

    #[test]
    fn budget_is_enforced() {
        let a = RMatrix::identity(4);
        assert_eq!(
            is_totally_unimodular_with_budget(&a, 4, 10),
            Err(ModelError::SizeLimitExceeded { budget: 10 })
        );
    }

    #[test]
    fn bareiss_agrees_with_rational_elimination() {
        let rows: [&[i64]; 4] = [&[1, -1, 0, 1], &[0, 1, 1, -1], &[1, 0, -1, 1], &[-1, 1, 1, 0]];
        let a = RMatrix::from_i64(&rows);
        let mut flat: Vec<i128> = rows.iter().flat_map(|r| r.iter().map(|&x| x as i128)).collect();
        let det = bareiss_det(&mut flat, 4);
        assert_eq!(int(det as i64), determinant(&a));
    }
}
