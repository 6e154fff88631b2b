//! Two-phase primal simplex over exact rationals.
//!
//! Entering variable: Dantzig's rule (most negative reduced cost), ties to the
//! smallest column index. Leaving variable: lexicographic ratio test relative
//! to the starting basis, so no basis is ever repeated. The tableau is rebuilt
//! from the basis inverse at every pivot.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::{LinalgError, SimplexError};
use crate::linalg::{dot, inverse, RMatrix, RVector};
use crate::model::LPInstance;
use crate::numeric::Rational;

/// Ordered basic column indices; position `i` is basic in row `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Basis(pub Vec<usize>);

impl Basis {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut s = self.0.clone();
        s.sort_unstable();
        s
    }
}

/// Pivot statistics of one or more simplex runs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplexStats {
    pub pivots: usize,
    /// Number of distinct basic feasible points visited.
    pub distinct_bfs: usize,
    pub degenerate_pivots: usize,
    /// Largest positive entry of any visited BFS.
    pub max_positive_entry: Option<Rational>,
    /// Smallest positive entry of any visited BFS.
    pub min_positive_entry: Option<Rational>,
    /// Visited BFS with a non-integer entry.
    pub non_integral_bfs: usize,
}

impl SimplexStats {
    fn observe_point(&mut self, x: &[Rational]) {
        for v in x.iter().filter(|v| v.is_positive()) {
            if self.max_positive_entry.as_ref().is_none_or(|m| v > m) {
                self.max_positive_entry = Some(v.clone());
            }
            if self.min_positive_entry.as_ref().is_none_or(|m| v < m) {
                self.min_positive_entry = Some(v.clone());
            }
        }
        if x.iter().any(|v| !v.is_integer()) {
            self.non_integral_bfs += 1;
        }
    }

    /// Accumulates a later run. When `continues` is set, the later run
    /// started from the point this one ended on, so that point is not
    /// counted twice.
    pub fn absorb(&mut self, later: &SimplexStats, continues: bool) {
        let shared = continues && self.distinct_bfs > 0 && later.distinct_bfs > 0;
        self.pivots += later.pivots;
        self.degenerate_pivots += later.degenerate_pivots;
        self.distinct_bfs += later.distinct_bfs - usize::from(shared);
        self.non_integral_bfs += later.non_integral_bfs;
        if let Some(v) = &later.max_positive_entry {
            if self.max_positive_entry.as_ref().is_none_or(|m| v > m) {
                self.max_positive_entry = Some(v.clone());
            }
        }
        if let Some(v) = &later.min_positive_entry {
            if self.min_positive_entry.as_ref().is_none_or(|m| v < m) {
                self.min_positive_entry = Some(v.clone());
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexOutcome {
    pub status: SimplexStatus,
    pub solution: Option<RVector>,
    pub basis: Option<Basis>,
    /// `r ≥ 0` with `Ar = 0` and `cᵀr < 0` when unbounded.
    pub ray: Option<RVector>,
    pub stats: SimplexStats,
    /// Auxiliary problems solved (one per phase run).
    pub auxiliary_problems: usize,
}

/// Called with the full point and the basis at every visited BFS.
pub type BfsObserver<'a> = &'a mut dyn FnMut(&[Rational], &[usize]);

/// Primal and dual data of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisEval {
    /// Full-length basic solution (nonbasic entries zero); may be infeasible.
    pub x: RVector,
    pub duals: RVector,
    /// `c_j − yᵀA_j` for every column (zero on basic columns).
    pub reduced_costs: RVector,
}

impl BasisEval {
    pub fn is_primal_feasible(&self) -> bool {
        self.x.iter().all(|v| !v.is_negative())
    }

    pub fn is_dual_feasible(&self) -> bool {
        self.reduced_costs.iter().all(|v| !v.is_negative())
    }
}

/// Basic solution, duals and reduced costs for `basis`.
pub fn evaluate_basis(p: &LPInstance, basis: &[usize]) -> Result<BasisEval, LinalgError> {
    eval_parts(&p.a, &p.b, &p.c, basis).map(|(eval, _)| eval)
}

fn eval_parts(
    a: &RMatrix,
    b: &[Rational],
    c: &[Rational],
    basis: &[usize],
) -> Result<(BasisEval, RMatrix), LinalgError> {
    if basis.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: basis.len(),
        });
    }
    let binv = inverse(&a.select_columns(basis))?;
    let xb = binv.mul_vec(b);
    let cb: RVector = basis.iter().map(|&j| c[j].clone()).collect();
    let duals = binv.tr_mul_vec(&cb);
    let mut x = vec![Rational::zero(); a.cols()];
    for (&j, v) in basis.iter().zip(xb) {
        x[j] = v;
    }
    let at = a.transpose();
    let reduced_costs = (0..a.cols())
        .map(|j| {
            if basis.contains(&j) {
                Rational::zero()
            } else {
                &c[j] - dot(&duals, at.row(j))
            }
        })
        .collect();
    Ok((
        BasisEval {
            x,
            duals,
            reduced_costs,
        },
        binv,
    ))
}

enum RunEnd {
    Optimal(Vec<usize>, RVector),
    Unbounded(Vec<usize>, RVector),
}

/// Core pivoting loop from a feasible `basis`. The rows of `B⁻¹·A_start`
/// break ratio-test ties lexicographically.
fn run(
    a: &RMatrix,
    b: &[Rational],
    c: &[Rational],
    mut basis: Vec<usize>,
    stats: &mut SimplexStats,
    observer: &mut dyn FnMut(&[Rational], &[usize]),
) -> Result<RunEnd, SimplexError> {
    let start = basis.clone();
    let a_start = a.select_columns(&start);
    let mut last_point: Option<RVector> = None;
    let mut local_pivots = 0usize;
    let mut moves = 0usize;

    loop {
        let (eval, binv) = eval_parts(a, b, c, &basis)?;
        if !eval.is_primal_feasible() {
            return Err(SimplexError::InfeasibleStart);
        }
        match &last_point {
            Some(prev) if *prev == eval.x => {}
            Some(_) => {
                moves += 1;
                stats.observe_point(&eval.x);
            }
            None => stats.observe_point(&eval.x),
        }
        observer(&eval.x, &basis);

        let entering = eval
            .reduced_costs
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_negative())
            .fold(None::<(usize, &Rational)>, |best, (j, d)| match best {
                Some((_, bd)) if bd <= d => best,
                _ => Some((j, d)),
            })
            .map(|(j, _)| j);

        let finish = |stats: &mut SimplexStats| {
            stats.pivots += local_pivots;
            stats.distinct_bfs += moves + 1;
            stats.degenerate_pivots += local_pivots - moves;
        };

        let Some(j) = entering else {
            finish(stats);
            return Ok(RunEnd::Optimal(basis, eval.x));
        };

        let column = binv.mul_vec(&a.column(j));
        if column.iter().all(|u| !u.is_positive()) {
            let mut ray = vec![Rational::zero(); a.cols()];
            ray[j] = Rational::one();
            for (&bj, u) in basis.iter().zip(&column) {
                ray[bj] = -u;
            }
            finish(stats);
            return Ok(RunEnd::Unbounded(basis, ray));
        }

        let tab_start = binv.mul(&a_start);
        let xb: RVector = basis.iter().map(|&k| eval.x[k].clone()).collect();
        let leave = lex_min_ratio(&xb, &column, &tab_start);
        basis[leave] = j;
        local_pivots += 1;
        last_point = Some(eval.x);
    }
}

/// Row minimizing `(x_i, T_i·) / u_i` lexicographically over `u_i > 0`.
fn lex_min_ratio(xb: &[Rational], u: &[Rational], t: &RMatrix) -> usize {
    let mut best: Option<usize> = None;
    for i in (0..u.len()).filter(|&i| u[i].is_positive()) {
        let Some(r) = best else {
            best = Some(i);
            continue;
        };
        // compare key_i / u_i with key_r / u_r via cross multiplication (both u > 0)
        let mut ord = (&xb[i] * &u[r]).cmp(&(&xb[r] * &u[i]));
        let mut k = 0;
        while ord == Ordering::Equal && k < t.cols() {
            ord = (&t[(i, k)] * &u[r]).cmp(&(&t[(r, k)] * &u[i]));
            k += 1;
        }
        if ord == Ordering::Less {
            best = Some(i);
        }
    }
    best.expect("ratio test called with no positive entry")
}

fn no_op(_: &[Rational], _: &[usize]) {}

/// Phase one: minimizes the sum of artificials on `±A x + a = |b|`.
///
/// On success the status is `Optimal` and `basis` is a feasible basis of `p`
/// with all artificials driven out.
pub fn phase_one(p: &LPInstance) -> Result<SimplexOutcome, SimplexError> {
    phase_one_observed(p, &mut no_op)
}

pub fn phase_one_observed(p: &LPInstance, observer: BfsObserver<'_>) -> Result<SimplexOutcome, SimplexError> {
    let (m, n) = (p.m(), p.n());
    let mut aux = RMatrix::zeros(m, n + m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let flip = p.b[i].is_negative();
        for j in 0..n {
            aux[(i, j)] = if flip { -&p.a[(i, j)] } else { p.a[(i, j)].clone() };
        }
        aux[(i, n + i)] = Rational::one();
        rhs.push(p.b[i].abs());
    }
    let cost: RVector = (0..n + m)
        .map(|j| if j < n { Rational::zero() } else { Rational::one() })
        .collect();

    let mut stats = SimplexStats::default();
    let start: Vec<usize> = (n..n + m).collect();
    let end = run(&aux, &rhs, &cost, start, &mut stats, observer)?;
    let RunEnd::Optimal(mut basis, point) = end else {
        unreachable!("phase one objective is bounded below by zero");
    };

    if point[n..].iter().any(|v| v.is_positive()) {
        return Ok(SimplexOutcome {
            status: SimplexStatus::Infeasible,
            solution: None,
            basis: None,
            ray: None,
            stats,
            auxiliary_problems: 1,
        });
    }

    // Degenerate pivots replacing zero-valued artificials by original columns.
    for r in 0..m {
        if basis[r] < n {
            continue;
        }
        let binv = inverse(&aux.select_columns(&basis))?;
        let row = binv.row(r);
        let replacement = (0..n)
            .filter(|j| !basis.contains(j))
            .find(|&j| !dot(row, &aux.column(j)).is_zero())
            .ok_or(SimplexError::RedundantRows)?;
        basis[r] = replacement;
        stats.pivots += 1;
        stats.degenerate_pivots += 1;
        observer(&point, &basis);
    }

    Ok(SimplexOutcome {
        status: SimplexStatus::Optimal,
        solution: Some(point[..n].to_vec()),
        basis: Some(Basis(basis)),
        ray: None,
        stats,
        auxiliary_problems: 1,
    })
}

/// Phase two from a primal feasible basis.
pub fn optimize(p: &LPInstance, start: &Basis) -> Result<SimplexOutcome, SimplexError> {
    optimize_observed(p, start, &mut no_op)
}

pub fn optimize_observed(
    p: &LPInstance,
    start: &Basis,
    observer: BfsObserver<'_>,
) -> Result<SimplexOutcome, SimplexError> {
    let eval = evaluate_basis(p, start.indices()).map_err(|e| match e {
        LinalgError::SingularMatrix => SimplexError::InfeasibleStart,
        other => SimplexError::Linalg(other),
    })?;
    if !eval.is_primal_feasible() {
        return Err(SimplexError::InfeasibleStart);
    }
    let mut stats = SimplexStats::default();
    let end = run(&p.a, &p.b, &p.c, start.0.clone(), &mut stats, observer)?;
    Ok(match end {
        RunEnd::Optimal(basis, x) => SimplexOutcome {
            status: SimplexStatus::Optimal,
            solution: Some(x),
            basis: Some(Basis(basis)),
            ray: None,
            stats,
            auxiliary_problems: 1,
        },
        RunEnd::Unbounded(basis, ray) => SimplexOutcome {
            status: SimplexStatus::Unbounded,
            solution: None,
            basis: Some(Basis(basis)),
            ray: Some(ray),
            stats,
            auxiliary_problems: 1,
        },
    })
}

/// Phase one followed by phase two. Statistics are summed over both phases.
pub fn solve_two_phase(p: &LPInstance) -> Result<SimplexOutcome, SimplexError> {
    solve_two_phase_observed(p, &mut no_op)
}

pub fn solve_two_phase_observed(p: &LPInstance, observer: BfsObserver<'_>) -> Result<SimplexOutcome, SimplexError> {
    let first = phase_one_observed(p, observer)?;
    if first.status == SimplexStatus::Infeasible {
        return Ok(first);
    }
    let start = first.basis.clone().expect("feasible phase one yields a basis");
    let mut second = optimize_observed(p, &start, observer)?;
    let mut stats = first.stats;
    stats.absorb(&second.stats, true);
    second.stats = stats;
    second.auxiliary_problems = 2;
    Ok(second)
}
