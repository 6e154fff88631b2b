//! The outer algorithm: reduce, scale, round, solve, fix.
//!
//! Each iteration eliminates the fixed columns `K̄` through a nonsingular
//! column basis `G` of `A` (first columns `A_K̄`), rewrites the reduced
//! problem against a basis `L`, scales the right-hand side by
//! `k = ‖A'ᵀ(A'A'ᵀ)⁻¹b'‖₂ / (m' + n'²)`, rounds it up, and solves the
//! rounded problem with the two-phase simplex method. Every coordinate of
//! the rounded optimum that reaches `n'` is positive in the true optimum and
//! joins `K̄`. The loop runs at most `m` times.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{LinalgError, TardosError};
use crate::linalg::{extend_to_basis, inverse, min_norm_point, RMatrix, RVector};
use crate::model::LPInstance;
use crate::numeric::{ceil_div_by_sqrt, int, norm2_squared, Rational};
use crate::simplex::{evaluate_basis, solve_two_phase, Basis, SimplexStats, SimplexStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    /// Reuse `L'' \ J` as the next basis `L` when it is still a basis.
    pub warm_start: bool,
    /// Keep a per-iteration [`IterationReport`].
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// Unbounded or infeasible; in either case no optimum exists.
    NoOptimalSolution,
}

/// Partition of the columns into fixed (`k_bar`) and free (`k_set`) indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgState {
    pub k_bar: Vec<usize>,
    pub k_set: Vec<usize>,
    pub iteration: usize,
}

impl AlgState {
    pub fn new(n: usize) -> Self {
        Self {
            k_bar: Vec::new(),
            k_set: (0..n).collect(),
            iteration: 0,
        }
    }

    /// Moves `j` (original indices) from `k_set` to `k_bar`.
    pub fn fix(&mut self, j: &[usize]) {
        self.k_bar.extend_from_slice(j);
        self.k_set.retain(|i| !j.contains(i));
    }
}

/// The problem after eliminating the fixed columns, plus lifting data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedProblem {
    /// `(A', b', c')` over the free columns.
    pub problem: LPInstance,
    /// First `|K̄|` rows of `G⁻¹`.
    pub h1: RMatrix,
    /// `H₁·b`.
    pub h1_b: RVector,
    /// `H₁·A_K`.
    pub h1_a_k: RMatrix,
    /// Reduced column → original column.
    pub col_map: Vec<usize>,
    pub k_bar: Vec<usize>,
    /// Column count of the original problem.
    pub n_original: usize,
}

impl ReducedProblem {
    pub fn m_prime(&self) -> usize {
        self.problem.m()
    }

    pub fn n_prime(&self) -> usize {
        self.problem.n()
    }

    /// Full-length point with `x_K = x'` and `x_K̄ = H₁b − H₁A_K x'`.
    pub fn lift(&self, x_reduced: &[Rational]) -> RVector {
        let mut x = alloc::vec![Rational::zero(); self.n_original];
        for (&j, v) in self.col_map.iter().zip(x_reduced) {
            x[j] = v.clone();
        }
        let shift = self.h1_a_k.mul_vec(x_reduced);
        for (i, &j) in self.k_bar.iter().enumerate() {
            x[j] = &self.h1_b[i] - &shift[i];
        }
        x
    }

    /// Reduced position of original column `j`, if free.
    pub fn position(&self, j: usize) -> Option<usize> {
        self.col_map.iter().position(|&c| c == j)
    }
}

/// The scaling constant, held as `k²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleFactor {
    k_squared: Rational,
}

impl ScaleFactor {
    pub fn from_squared(k_squared: Rational) -> Option<Self> {
        k_squared.is_positive().then_some(Self { k_squared })
    }

    pub fn k_squared(&self) -> &Rational {
        &self.k_squared
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scaling {
    Scale(ScaleFactor),
    /// `b' = 0`, so `(A'_L)⁻¹b' = 0` for every basis `L`.
    ZeroRhs,
}

/// The rounded problem in `[I, (A'_L)⁻¹A'_L̄]` form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedProblem {
    pub problem: LPInstance,
    /// Rounded column → reduced column (`L` first, then `L̄` ascending).
    pub col_order: Vec<usize>,
    /// `(A'_L)⁻¹b'` before scaling.
    pub unscaled_rhs: RVector,
    /// `⌈(A'_L)⁻¹b' / k⌉`.
    pub rhs: Vec<BigInt>,
}

impl RoundedProblem {
    /// Permutes a rounded-order vector back to reduced order.
    pub fn to_reduced_order(&self, x: &[Rational]) -> RVector {
        let mut out = alloc::vec![Rational::zero(); x.len()];
        for (pos, &r) in self.col_order.iter().enumerate() {
            out[r] = x[pos].clone();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationEnd {
    Continue,
    Optimal,
    Infeasible,
    NoOptimalSolution,
}

/// Everything one outer iteration produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationReport {
    pub iteration: usize,
    /// `K̄` at the start of the iteration.
    pub k_bar: Vec<usize>,
    pub reduced: ReducedProblem,
    /// `L` in original column indices.
    pub basis_l: Basis,
    pub warm_started: bool,
    pub scale: Option<ScaleFactor>,
    pub rounded: Option<RoundedProblem>,
    /// Optimal point of the auxiliary solve, in reduced column order.
    pub x_double_prime: Option<RVector>,
    /// `L''` in original column indices.
    pub basis_l_double_prime: Option<Basis>,
    pub j_set: Vec<usize>,
    pub stats: SimplexStats,
    pub auxiliary_problems: usize,
    pub degenerate_pivots_seen: usize,
    pub end: IterationEnd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub solution: Option<RVector>,
    pub basis: Option<Basis>,
    pub trace: Vec<IterationReport>,
    pub outer_iterations: usize,
    pub auxiliary_problems: usize,
    /// Pivot statistics summed over every auxiliary problem.
    pub stats: SimplexStats,
    /// The rank-reduced instance the algorithm ran on.
    pub instance: LPInstance,
}

/// Eliminates the columns `k_bar` (original indices).
pub fn reduce_problem(p: &LPInstance, k_bar: &[usize]) -> Result<ReducedProblem, TardosError> {
    let n = p.n();
    if k_bar.is_empty() {
        return Ok(ReducedProblem {
            problem: p.clone(),
            h1: RMatrix::zeros(0, p.m()),
            h1_b: Vec::new(),
            h1_a_k: RMatrix::zeros(0, n),
            col_map: (0..n).collect(),
            k_bar: Vec::new(),
            n_original: n,
        });
    }
    let g_cols = extend_to_basis(&p.a, k_bar)?;
    let h = inverse(&p.a.select_columns(&g_cols))?;
    let fixed = k_bar.len();
    let h1 = h.select_rows(&(0..fixed).collect::<Vec<_>>());
    let h2 = h.select_rows(&(fixed..p.m()).collect::<Vec<_>>());
    let k_set: Vec<usize> = (0..n).filter(|j| !k_bar.contains(j)).collect();
    let a_k = p.a.select_columns(&k_set);
    let a_prime = h2.mul(&a_k);
    let b_prime = h2.mul_vec(&p.b);
    let h1_a_k = h1.mul(&a_k);
    let c_kbar: RVector = k_bar.iter().map(|&j| p.c[j].clone()).collect();
    let shift = h1_a_k.tr_mul_vec(&c_kbar);
    let c_prime = k_set
        .iter()
        .zip(shift)
        .map(|(&j, s)| &p.c[j] - s)
        .collect();
    let h1_b = h1.mul_vec(&p.b);
    Ok(ReducedProblem {
        problem: LPInstance::new(a_prime, b_prime, c_prime, format!("{}/reduced", p.name))
            .expect("reduced dimensions are consistent"),
        h1,
        h1_b,
        h1_a_k,
        col_map: k_set,
        k_bar: k_bar.to_vec(),
        n_original: n,
    })
}

/// `k² = ‖A'ᵀ(A'A'ᵀ)⁻¹b'‖₂² / (m' + n'²)²`, or `ZeroRhs`.
pub fn compute_scaling_factor(r: &ReducedProblem) -> Result<Scaling, LinalgError> {
    let y = min_norm_point(&r.problem.a, &r.problem.b)?;
    if y.iter().all(Zero::is_zero) {
        return Ok(Scaling::ZeroRhs);
    }
    let (m, n) = (r.m_prime() as i64, r.n_prime() as i64);
    let denom = int(m + n * n);
    let k_squared = norm2_squared(&y) / (&denom * &denom);
    Ok(Scaling::Scale(ScaleFactor { k_squared }))
}

/// Builds `x'_L + (A'_L)⁻¹A'_L̄ x'_L̄ = ⌈(A'_L)⁻¹b'/k⌉` for `L` given in
/// reduced column indices.
pub fn build_rounded_problem(
    r: &ReducedProblem,
    basis_l: &[usize],
    k: &ScaleFactor,
) -> Result<RoundedProblem, TardosError> {
    let a = &r.problem.a;
    let l_inv = inverse(&a.select_columns(basis_l))?;
    let unscaled_rhs = l_inv.mul_vec(&r.problem.b);
    let rhs = unscaled_rhs
        .iter()
        .map(|v| ceil_div_by_sqrt(v, k.k_squared()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut col_order = basis_l.to_vec();
    col_order.extend((0..r.n_prime()).filter(|j| !basis_l.contains(j)));
    let tableau = l_inv.mul(&a.select_columns(&col_order));
    let c = col_order.iter().map(|&j| r.problem.c[j].clone()).collect();
    let problem = LPInstance::new(
        tableau,
        rhs.iter().map(|z| Rational::from_integer(z.clone())).collect(),
        c,
        format!("{}/rounded", r.problem.name),
    )
    .expect("rounded dimensions are consistent");
    Ok(RoundedProblem {
        problem,
        col_order,
        unscaled_rhs,
        rhs,
    })
}

/// `J = { i | x''_i ≥ n' }` mapped to original indices through `col_map`.
pub fn select_large_indices(
    x: &[Rational],
    col_map: &[usize],
    n_prime: usize,
    iteration: usize,
) -> Result<Vec<usize>, TardosError> {
    let threshold = int(n_prime as i64);
    let mut j: Vec<usize> = x
        .iter()
        .zip(col_map)
        .filter(|(v, _)| **v >= threshold)
        .map(|(_, &c)| c)
        .collect();
    if j.is_empty() {
        return Err(TardosError::EmptyJ {
            iteration,
            threshold: n_prime,
            x: x.iter().map(|v| v.to_string()).collect(),
        });
    }
    j.sort_unstable();
    Ok(j)
}

/// Primal solution and duals of an optimal basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalityCertificate {
    pub x: RVector,
    pub duals: RVector,
}

/// Whether `basis` is primal and dual feasible for `p`.
pub fn check_optimal_basis(p: &LPInstance, basis: &[usize]) -> Option<OptimalityCertificate> {
    let eval = evaluate_basis(p, basis).ok()?;
    (eval.is_primal_feasible() && eval.is_dual_feasible()).then_some(OptimalityCertificate {
        x: eval.x,
        duals: eval.duals,
    })
}

fn choose_basis_l(
    reduced: &ReducedProblem,
    warm: Option<&[usize]>,
) -> Result<(Vec<usize>, bool), TardosError> {
    if let Some(cands) = warm {
        let positions: Option<Vec<usize>> = cands.iter().map(|&j| reduced.position(j)).collect();
        if let Some(pos) = positions {
            if pos.len() == reduced.m_prime() && inverse(&reduced.problem.a.select_columns(&pos)).is_ok() {
                return Ok((pos, true));
            }
        }
    }
    Ok((extend_to_basis(&reduced.problem.a, &[])?, false))
}

/// Runs the algorithm on `p`.
pub fn solve(p: &LPInstance, options: SolveOptions) -> Result<SolveOutcome, TardosError> {
    let p = match p.rank_reduced() {
        Ok(p) => p,
        Err(LinalgError::Inconsistent) => {
            return Ok(SolveOutcome {
                status: SolveStatus::Infeasible,
                solution: None,
                basis: None,
                trace: Vec::new(),
                outer_iterations: 0,
                auxiliary_problems: 0,
                stats: SimplexStats::default(),
                instance: p.clone(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let (m, n) = (p.m(), p.n());
    let mut total = SimplexStats::default();
    let mut trace = Vec::new();
    let mut aux_count = 0;

    let finish = |status, solution, basis, trace, iterations, aux, stats, p: LPInstance| SolveOutcome {
        status,
        solution,
        basis,
        trace,
        outer_iterations: iterations,
        auxiliary_problems: aux,
        stats,
        instance: p,
    };

    if m == 0 {
        // No constraints: x = 0 is optimal iff c ≥ 0.
        let (status, solution) = if p.c.iter().all(|v| !v.is_negative()) {
            (SolveStatus::Optimal, Some(alloc::vec![Rational::zero(); n]))
        } else {
            (SolveStatus::NoOptimalSolution, None)
        };
        let basis = solution.as_ref().map(|_| Basis(Vec::new()));
        return Ok(finish(status, solution, basis, trace, 0, 0, total, p));
    }

    let mut state = AlgState::new(n);
    let mut warm: Option<Vec<usize>> = None;

    loop {
        if state.k_bar.len() >= m {
            return Err(TardosError::FixedSetOverflow {
                size: state.k_bar.len(),
                rows: m,
            });
        }
        state.iteration += 1;
        let reduced = reduce_problem(&p, &state.k_bar)?;
        let n_prime = reduced.n_prime();
        let warm_cands = if options.warm_start { warm.as_deref() } else { None };
        let (l_reduced, warm_started) = choose_basis_l(&reduced, warm_cands)?;
        let basis_l = Basis(l_reduced.iter().map(|&r| reduced.col_map[r]).collect());
        let scaling = compute_scaling_factor(&reduced)?;

        let mut report = IterationReport {
            iteration: state.iteration,
            k_bar: state.k_bar.clone(),
            reduced: reduced.clone(),
            basis_l,
            warm_started,
            scale: None,
            rounded: None,
            x_double_prime: None,
            basis_l_double_prime: None,
            j_set: Vec::new(),
            stats: SimplexStats::default(),
            auxiliary_problems: 0,
            degenerate_pivots_seen: 0,
            end: IterationEnd::Continue,
        };

        let k = match scaling {
            Scaling::ZeroRhs => {
                // x' = 0 is feasible; the reduced problem is either solved
                // there or unbounded.
                let out = solve_two_phase(&reduced.problem)?;
                aux_count += out.auxiliary_problems;
                total.absorb(&out.stats, false);
                report.stats = out.stats.clone();
                report.auxiliary_problems = out.auxiliary_problems;
                report.degenerate_pivots_seen = out.stats.degenerate_pivots;
                let result = match out.status {
                    SimplexStatus::Optimal => {
                        let l2: Vec<usize> = out.basis.as_ref().expect("optimal has basis").0.iter().map(|&r| reduced.col_map[r]).collect();
                        report.x_double_prime = out.solution.clone();
                        report.basis_l_double_prime = Some(Basis(l2.clone()));
                        let mut full = state.k_bar.clone();
                        full.extend(&l2);
                        match check_optimal_basis(&p, &full) {
                            Some(cert) => {
                                report.end = IterationEnd::Optimal;
                                Ok((SolveStatus::Optimal, Some(cert.x), Some(Basis(full))))
                            }
                            None => Err(TardosError::Unexpected(format!(
                                "zero right-hand side at iteration {}: basis {:?} is optimal for the reduced problem but not for the original",
                                state.iteration, full
                            ))),
                        }
                    }
                    SimplexStatus::Unbounded => {
                        report.end = IterationEnd::NoOptimalSolution;
                        Ok((SolveStatus::NoOptimalSolution, None, None))
                    }
                    SimplexStatus::Infeasible => Err(TardosError::Unexpected(format!(
                        "zero right-hand side at iteration {} but the reduced problem is infeasible",
                        state.iteration
                    ))),
                };
                let (status, solution, basis) = result?;
                if options.trace {
                    trace.push(report);
                }
                return Ok(finish(status, solution, basis, trace, state.iteration, aux_count, total, p));
            }
            Scaling::Scale(k) => k,
        };

        let rounded = build_rounded_problem(&reduced, &l_reduced, &k)?;
        let out = solve_two_phase(&rounded.problem)?;
        aux_count += out.auxiliary_problems;
        total.absorb(&out.stats, false);
        report.scale = Some(k);
        report.stats = out.stats.clone();
        report.auxiliary_problems = out.auxiliary_problems;
        report.degenerate_pivots_seen = out.stats.degenerate_pivots;

        let terminal = match out.status {
            SimplexStatus::Infeasible => Some(SolveStatus::Infeasible),
            SimplexStatus::Unbounded => Some(SolveStatus::NoOptimalSolution),
            SimplexStatus::Optimal => None,
        };
        if let Some(status) = terminal {
            report.end = match status {
                SolveStatus::Infeasible => IterationEnd::Infeasible,
                _ => IterationEnd::NoOptimalSolution,
            };
            report.rounded = Some(rounded);
            if options.trace {
                trace.push(report);
            }
            return Ok(finish(status, None, None, trace, state.iteration, aux_count, total, p));
        }

        let x_rounded = out.solution.expect("optimal has solution");
        let x_reduced = rounded.to_reduced_order(&x_rounded);
        let l2: Vec<usize> = out
            .basis
            .expect("optimal has basis")
            .0
            .iter()
            .map(|&pos| reduced.col_map[rounded.col_order[pos]])
            .collect();
        report.x_double_prime = Some(x_reduced.clone());
        report.basis_l_double_prime = Some(Basis(l2.clone()));
        report.rounded = Some(rounded);

        let mut full = state.k_bar.clone();
        full.extend(&l2);
        if let Some(cert) = check_optimal_basis(&p, &full) {
            report.end = IterationEnd::Optimal;
            if options.trace {
                trace.push(report);
            }
            return Ok(finish(
                SolveStatus::Optimal,
                Some(cert.x),
                Some(Basis(full)),
                trace,
                state.iteration,
                aux_count,
                total,
                p,
            ));
        }

        let j = select_large_indices(&x_reduced, &reduced.col_map, n_prime, state.iteration)?;
        report.j_set = j.clone();
        state.fix(&j);
        warm = Some(l2.into_iter().filter(|c| !j.contains(c)).collect());

        if state.k_set.len() == n - m {
            report.end = IterationEnd::Infeasible;
            if options.trace {
                trace.push(report);
            }
            return Ok(finish(SolveStatus::Infeasible, None, None, trace, state.iteration, aux_count, total, p));
        }
        if options.trace {
            trace.push(report);
        }
    }
}
