//! Ground truth by exhaustive basis enumeration.
//!
//! Shares nothing with the simplex code beyond dense linear solves, so it can
//! serve as an independent reference on small instances.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::OracleError;
use crate::linalg::{dot, inverse, rank, RMatrix, RVector};
use crate::model::LPInstance;
use crate::numeric::{compare_affine_sqrt, int, Rational};
use crate::simplex::Basis;
use crate::subsets::{binomial, Combinations};
use crate::tardos::ScaleFactor;

/// Maximum number of candidate bases enumerated per problem.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub status: OracleStatus,
    /// Every feasible basis attaining the optimum (as sorted index sets).
    pub optimal_bases: Vec<Basis>,
    /// Exactly one optimal vertex.
    pub unique: bool,
    pub solution: Option<RVector>,
    pub objective: Option<Rational>,
    /// Every distinct feasible vertex.
    pub vertices: Vec<RVector>,
}

struct Vertex {
    basis: Vec<usize>,
    x: RVector,
    objective: Rational,
    has_ray: bool,
}

fn feasible_vertices(a: &RMatrix, b: &[Rational], c: &[Rational]) -> Vec<Vertex> {
    let (m, n) = (a.rows(), a.cols());
    let mut out = Vec::new();
    for cols in Combinations::new(n, m) {
        let Ok(binv) = inverse(&a.select_columns(&cols)) else {
            continue;
        };
        let xb = binv.mul_vec(b);
        if xb.iter().any(|v| v.is_negative()) {
            continue;
        }
        let mut x = vec![Rational::zero(); n];
        for (&j, v) in cols.iter().zip(&xb) {
            x[j] = v.clone();
        }
        let cb: RVector = cols.iter().map(|&j| c[j].clone()).collect();
        let y = binv.tr_mul_vec(&cb);
        // an improving column with no positive entry in B⁻¹A_j is a ray
        let has_ray = (0..n).filter(|j| !cols.contains(j)).any(|j| {
            let aj = a.column(j);
            (&c[j] - dot(&y, &aj)).is_negative() && binv.mul_vec(&aj).iter().all(|u| !u.is_positive())
        });
        out.push(Vertex {
            objective: dot(c, &x),
            basis: cols,
            x,
            has_ray,
        });
    }
    out
}

/// Positive minimum of the phase-one problem `min 1ᵀa, ±Ax + a = |b|`,
/// taken over all of its vertices.
fn phase_one_optimum_positive(p: &LPInstance) -> bool {
    let (m, n) = (p.m(), p.n());
    let mut aux = RMatrix::zeros(m, n + m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if p.b[i].is_negative() { int(-1) } else { int(1) };
        for j in 0..n {
            aux[(i, j)] = &p.a[(i, j)] * &sign;
        }
        aux[(i, n + i)] = Rational::one();
        rhs.push(&p.b[i] * &sign);
    }
    let cost: RVector = (0..n + m).map(|j| if j < n { int(0) } else { int(1) }).collect();
    feasible_vertices(&aux, &rhs, &cost)
        .iter()
        .map(|v| &v.objective)
        .min()
        .is_some_and(|v| v.is_positive())
}

/// Solves `p` by enumerating every `m`-subset of columns.
pub fn enumerate_solve(p: &LPInstance) -> Result<OracleResult, OracleError> {
    let (m, n) = (p.m(), p.n());
    let count = binomial(n, m);
    let aux_count = binomial(n + m, m);
    if count > ENUMERATION_GUARD || aux_count > ENUMERATION_GUARD {
        return Err(OracleError::TooLarge { count: count.max(aux_count) });
    }
    if rank(&p.a) < m {
        return Err(OracleError::RankDeficient);
    }

    let vertices = feasible_vertices(&p.a, &p.b, &p.c);
    let mut distinct: Vec<RVector> = Vec::new();
    for v in &vertices {
        if !distinct.contains(&v.x) {
            distinct.push(v.x.clone());
        }
    }

    if vertices.is_empty() {
        debug_assert!(m == 0 || phase_one_optimum_positive(p));
        return Ok(OracleResult {
            status: OracleStatus::Infeasible,
            optimal_bases: Vec::new(),
            unique: false,
            solution: None,
            objective: None,
            vertices: distinct,
        });
    }
    if vertices.iter().any(|v| v.has_ray) {
        return Ok(OracleResult {
            status: OracleStatus::Unbounded,
            optimal_bases: Vec::new(),
            unique: false,
            solution: None,
            objective: None,
            vertices: distinct,
        });
    }

    let best = vertices
        .iter()
        .map(|v| &v.objective)
        .min()
        .expect("nonempty")
        .clone();
    let optimal: Vec<&Vertex> = vertices.iter().filter(|v| v.objective == best).collect();
    let mut optimal_points: Vec<&RVector> = Vec::new();
    for v in &optimal {
        if !optimal_points.contains(&&v.x) {
            optimal_points.push(&v.x);
        }
    }
    Ok(OracleResult {
        status: OracleStatus::Optimal,
        optimal_bases: optimal.iter().map(|v| Basis(v.basis.clone())).collect(),
        unique: optimal_points.len() == 1,
        solution: Some(optimal[0].x.clone()),
        objective: Some(best),
        vertices: distinct,
    })
}

/// Confirms infeasibility independently through the phase-one problem's
/// vertices.
pub fn confirm_infeasible(p: &LPInstance) -> Result<bool, OracleError> {
    let aux_count = binomial(p.n() + p.m(), p.m());
    if aux_count > ENUMERATION_GUARD {
        return Err(OracleError::TooLarge { count: aux_count });
    }
    Ok(phase_one_optimum_positive(p))
}

/// Checks `|x''_i − x*_i / k| < n'` for every coordinate, exactly.
pub fn proximity_check(
    x_rounded: &[Rational],
    x_star_reduced: &[Rational],
    k: &ScaleFactor,
    n_prime: usize,
) -> Result<bool, OracleError> {
    if x_rounded.len() != x_star_reduced.len() {
        return Err(OracleError::DimensionMismatch {
            expected: x_rounded.len(),
            found: x_star_reduced.len(),
        });
    }
    let s = k.k_squared();
    let bound = int(n_prime as i64);
    Ok(x_rounded.iter().zip(x_star_reduced).all(|(xr, xs)| {
        // x''·k − x* < n'·k  and  x* − x''·k < n'·k
        let upper = compare_affine_sqrt(xs, &(&bound - xr), s);
        let lower = compare_affine_sqrt(&-xs, &(&bound + xr), s);
        upper == Ok(Ordering::Greater) && lower == Ok(Ordering::Greater)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    fn lp(a: &[&[i64]], b: &[i64], c: &[i64]) -> LPInstance {
        LPInstance::new(
            RMatrix::from_i64(a),
            b.iter().map(|&x| int(x)).collect(),
            c.iter().map(|&x| int(x)).collect(),
            "t",
        )
        .unwrap()
    }

    fn ints(xs: &[i64]) -> RVector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn unique_optimum() {
        let r = enumerate_solve(&lp(&[&[1, 1]], &[2], &[1, 2])).unwrap();
        assert_eq!(r.status, OracleStatus::Optimal);
        assert_eq!(r.solution, Some(ints(&[2, 0])));
        assert_eq!(r.objective, Some(int(2)));
        assert!(r.unique);
        assert_eq!(r.optimal_bases, vec![Basis(vec![0])]);
        assert_eq!(r.vertices.len(), 2);
    }

    #[test]
    fn tied_optimum() {
        let r = enumerate_solve(&lp(&[&[1, 1]], &[2], &[1, 1])).unwrap();
        assert_eq!(r.status, OracleStatus::Optimal);
        assert_eq!(r.objective, Some(int(2)));
        assert!(!r.unique);
        assert_eq!(r.optimal_bases.len(), 2);
    }

    #[test]
    fn degenerate_vertex_is_one_point() {
        // both bases {0} and {1} give x = 0
        let r = enumerate_solve(&lp(&[&[1, -1]], &[0], &[1, 1])).unwrap();
        assert_eq!(r.status, OracleStatus::Optimal);
        assert!(r.unique);
        assert_eq!(r.optimal_bases.len(), 2);
    }

    #[test]
    fn unbounded_and_infeasible() {
        let r = enumerate_solve(&lp(&[&[1, -1]], &[0], &[-1, -1])).unwrap();
        assert_eq!(r.status, OracleStatus::Unbounded);
        let p = lp(&[&[1, 1]], &[-1], &[0, 0]);
        let r = enumerate_solve(&p).unwrap();
        assert_eq!(r.status, OracleStatus::Infeasible);
        assert!(confirm_infeasible(&p).unwrap());
        assert!(!confirm_infeasible(&lp(&[&[1, 1]], &[1], &[0, 0])).unwrap());
    }

    #[test]
    fn guards() {
        let p = lp(&[&[1, 1], &[1, 1]], &[1, 1], &[0, 0]);
        assert_eq!(enumerate_solve(&p), Err(OracleError::RankDeficient));
        let big = LPInstance::new(RMatrix::zeros(10, 40), vec![int(0); 10], vec![int(0); 40], "big").unwrap();
        assert!(matches!(enumerate_solve(&big), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn proximity_examples() {
        let k = ScaleFactor::from_squared(ratio(2, 25)).unwrap();
        // |8 − 5√2| ≈ 0.929 < 2
        assert!(proximity_check(&ints(&[8, 0]), &ints(&[2, 0]), &k, 2).unwrap());
        // x'' = x*/k exactly: k = 1/2, x* = (1, 2), x'' = (2, 4)
        let half = ScaleFactor::from_squared(ratio(1, 4)).unwrap();
        assert!(proximity_check(&ints(&[2, 4]), &ints(&[1, 2]), &half, 1).unwrap());
        // deviation exactly n' is rejected: x*/k = 2, x'' = 4, n' = 2
        assert!(!proximity_check(&ints(&[4]), &ints(&[1]), &half, 2).unwrap());
        assert!(!proximity_check(&ints(&[0]), &ints(&[1]), &half, 2).unwrap());
        assert!(proximity_check(&ints(&[3]), &ints(&[1]), &half, 2).unwrap());
        assert!(matches!(
            proximity_check(&ints(&[1]), &ints(&[1, 2]), &half, 2),
            Err(OracleError::DimensionMismatch { .. })
        ));
    }
}
