//! Verification campaigns: run the solver and the enumeration oracle side by
//! side and record which bounds and lemmas held on each instance.

use std::fmt;
use std::fs::OpenOptions;
use std::io;
use std::path::Path;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tardos_core::generate::{gen_interval_matrix_lp, gen_mincost_flow, gen_mixed_scale, FlowParams, IntervalParams};
use tardos_core::numeric::{int, max_abs};
use tardos_core::oracle::{confirm_infeasible, enumerate_solve, proximity_check, OracleResult, OracleStatus};
use tardos_core::tardos::IterationReport;
use tardos_core::tu::is_totally_unimodular;
use tardos_core::{solve, LPInstance, ModelError, Rational, SolveOptions, SolveOutcome, SolveStatus};

pub const CSV_HEADER: [&str; 18] = [
    "name",
    "m",
    "n",
    "status",
    "outer_iterations",
    "auxiliary_problems",
    "total_pivots",
    "distinct_bfs",
    "degenerate_pivots",
    "gamma_observed",
    "gamma_star_bound",
    "delta_observed",
    "km_bound_log2",
    "km_bound_ln",
    "lemma1",
    "corollary1",
    "lemma3",
    "proximity",
];

/// Largest `min(m, n)` for which subdeterminants are enumerated.
pub const TU_CHECK_LIMIT: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    Pass,
    Fail,
    Skipped,
}

impl Check {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }

    /// Combines per-iteration results: any failure wins, and the result is
    /// skipped only if nothing was checked.
    fn all(items: impl IntoIterator<Item = bool>) -> Self {
        let mut out = Check::Skipped;
        for ok in items {
            if !ok {
                return Check::Fail;
            }
            out = Check::Pass;
        }
        out
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Pass => "pass",
            Check::Fail => "fail",
            Check::Skipped => "skipped",
        })
    }
}

/// The pivot-count bound assumes a nondegenerate problem; exceeding it on a
/// degenerate run is reported separately from a genuine failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundCheck {
    Pass,
    Fail,
    AssumptionViolated,
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundCheck::Pass => "pass",
            BoundCheck::Fail => "fail",
            BoundCheck::AssumptionViolated => "assumption violated",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub name: String,
    pub m: usize,
    pub n: usize,
    pub status: String,
    pub outer_iterations: usize,
    pub auxiliary_problems: usize,
    pub total_pivots: usize,
    pub distinct_bfs: usize,
    pub degenerate_pivots: usize,
    pub gamma_observed: Option<Rational>,
    pub gamma_star_bound: u128,
    pub delta_observed: Option<Rational>,
    pub km_bound_log2: u128,
    pub km_bound_ln: u128,
    pub lemma1: Check,
    pub corollary1: Check,
    pub lemma3: Check,
    pub proximity: Check,
    // summary-only columns
    /// The oracle found exactly one optimal vertex.
    pub unique_optimum: bool,
    pub oracle_match: Check,
    pub integrality: Check,
    pub iteration_bounds: Check,
    pub km_bound: BoundCheck,
    pub tu_preserved: Check,
    pub notes: Vec<String>,
}

impl RunRecord {
    pub fn csv_fields(&self) -> Vec<String> {
        let opt = |r: &Option<Rational>| r.as_ref().map_or_else(String::new, |v| v.to_string());
        vec![
            self.name.clone(),
            self.m.to_string(),
            self.n.to_string(),
            self.status.clone(),
            self.outer_iterations.to_string(),
            self.auxiliary_problems.to_string(),
            self.total_pivots.to_string(),
            self.distinct_bfs.to_string(),
            self.degenerate_pivots.to_string(),
            opt(&self.gamma_observed),
            self.gamma_star_bound.to_string(),
            opt(&self.delta_observed),
            self.km_bound_log2.to_string(),
            self.km_bound_ln.to_string(),
            self.lemma1.to_string(),
            self.corollary1.to_string(),
            self.lemma3.to_string(),
            self.proximity.to_string(),
        ]
    }

    pub fn checks(&self) -> [(&'static str, Check); 8] {
        [
            ("oracle", self.oracle_match),
            ("lemma1", self.lemma1),
            ("corollary1", self.corollary1),
            ("lemma3", self.lemma3),
            ("integrality", self.integrality),
            ("proximity", self.proximity),
            ("iterations", self.iteration_bounds),
            ("tu", self.tu_preserved),
        ]
    }

    pub fn has_failure(&self) -> bool {
        self.checks().iter().any(|(_, c)| *c == Check::Fail) || self.km_bound == BoundCheck::Fail
    }
}

/// `m(mn(m + n²) + 1)`.
pub fn gamma_star_bound(m: usize, n: usize) -> u128 {
    m as u128 * rhs_bound(m, n)
}

/// `mn(m + n²) + 1`, the largest possible rounded right-hand side entry.
pub fn rhs_bound(m: usize, n: usize) -> u128 {
    let (m, n) = (m as u128, n as u128);
    m * n * (m + n * n) + 1
}

/// `2mn⌈X log X⌉` with `X = m⁴n + m³n³ + m²`, as `(base 2, natural)`.
///
/// The ceiling is taken in `f64`; `X log X` stays far below 2⁵³ at the sizes
/// this is used for.
pub fn km_bound(m: usize, n: usize) -> (u128, u128) {
    let (mu, nu) = (m as u128, n as u128);
    let x = mu.pow(4) * nu + mu.pow(3) * nu.pow(3) + mu * mu;
    if x <= 1 {
        return (0, 0);
    }
    let xf = x as f64;
    let with = |log: f64| 2 * mu * nu * (xf * log).ceil() as u128;
    (with(xf.log2()), with(xf.ln()))
}

/// Compares a distinct-BFS count with both bound values. Exceeding them is
/// only a failure when no pivot was degenerate.
pub fn classify_pivot_bound(distinct_bfs: usize, degenerate_pivots: usize, bounds: (u128, u128)) -> BoundCheck {
    let d = distinct_bfs as u128;
    if d <= bounds.0 && d <= bounds.1 {
        BoundCheck::Pass
    } else if degenerate_pivots > 0 {
        BoundCheck::AssumptionViolated
    } else {
        BoundCheck::Fail
    }
}

fn status_label(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::NoOptimalSolution => "no_optimal_solution",
    }
}

fn rounded_iterations(trace: &[IterationReport]) -> impl Iterator<Item = &IterationReport> {
    trace.iter().filter(|it| it.rounded.is_some())
}

fn tu_ok(a: &tardos_core::RMatrix) -> Option<bool> {
    let order = a.rows().min(a.cols());
    if order > TU_CHECK_LIMIT {
        return None;
    }
    is_totally_unimodular(a, order).ok().map(|r| r.is_tu)
}

/// Whether the solver's answer agrees with the oracle. Infeasible inputs may
/// also end with the rounded problem unbounded, which the solver reports as
/// "no optimal solution".
pub fn status_matches(p: &LPInstance, out: &SolveOutcome, oracle: &OracleResult) -> bool {
    match (out.status, oracle.status) {
        (SolveStatus::Optimal, OracleStatus::Optimal) => {
            let Some(x) = &out.solution else { return false };
            let objective_ok = Some(p.objective(x)) == oracle.objective && p.is_feasible(x);
            objective_ok && (!oracle.unique || out.solution == oracle.solution)
        }
        (SolveStatus::Infeasible, OracleStatus::Infeasible) => true,
        (SolveStatus::NoOptimalSolution, OracleStatus::Unbounded | OracleStatus::Infeasible) => true,
        _ => false,
    }
}

/// Builds the record for a finished run. Oracle-dependent columns are
/// skipped when `oracle` is `None`.
pub fn build_record(out: &SolveOutcome, oracle: Option<&OracleResult>, check_tu: bool) -> RunRecord {
    let p = &out.instance;
    let (m, n) = (p.m(), p.n());
    let (km_log2, km_ln) = km_bound(m, n);
    let mut notes = Vec::new();
    let rounded: Vec<&IterationReport> = rounded_iterations(&out.trace).collect();

    let lemma1 = Check::all(rounded.iter().filter_map(|it| {
        let x = it.x_double_prime.as_ref()?;
        let n_prime = it.reduced.n_prime();
        let large = max_abs(x) >= int(n_prime as i64);
        let fixed = it.end != tardos_core::tardos::IterationEnd::Continue || !it.j_set.is_empty();
        if !(large && fixed) {
            notes.push(format!("iteration {}: ‖x''‖∞ < n' = {n_prime}", it.iteration));
        }
        Some(large && fixed)
    }));

    let lemma3 = Check::all(rounded.iter().map(|it| {
        let (mp, np) = (it.reduced.m_prime(), it.reduced.n_prime());
        let bound = rhs_bound(mp, np);
        let rhs = it.rounded.as_ref().expect("filtered");
        let rhs_ok = rhs.rhs.iter().all(|v| v.abs() <= bound.into());
        let gamma_bound = Rational::from_integer((mp as u128 * bound).into());
        let gamma_ok = it.stats.max_positive_entry.as_ref().is_none_or(|g| *g <= gamma_bound);
        rhs_ok && gamma_ok
    }));

    let integrality = Check::all(rounded.iter().map(|it| {
        it.stats.non_integral_bfs == 0 && it.stats.min_positive_entry.as_ref().is_none_or(|d| *d >= Rational::one())
    }));

    let gamma_observed = rounded.iter().filter_map(|it| it.stats.max_positive_entry.clone()).max();
    let delta_observed = rounded.iter().filter_map(|it| it.stats.min_positive_entry.clone()).min();

    let iteration_bounds = Check::from_bool(out.outer_iterations <= m && out.auxiliary_problems <= 2 * m);
    let km_bound = classify_pivot_bound(out.stats.distinct_bfs, out.stats.degenerate_pivots, (km_log2, km_ln));

    let tu_preserved = if !check_tu || tu_ok(&p.a) != Some(true) {
        Check::Skipped
    } else {
        let mut results = Vec::new();
        for it in &out.trace {
            results.extend(tu_ok(&it.reduced.problem.a));
            if let Some(r) = &it.rounded {
                results.extend(tu_ok(&r.problem.a));
            }
        }
        Check::all(results)
    };

    let oracle_match = match oracle {
        None => Check::Skipped,
        Some(o) => {
            let ok = status_matches(p, out, o)
                && (o.status != OracleStatus::Infeasible || confirm_infeasible(p).unwrap_or(false));
            if !ok {
                notes.push(format!("solver {:?} vs oracle {:?}", out.status, o.status));
            }
            Check::from_bool(ok)
        }
    };

    let unique_optimum = oracle
        .filter(|o| o.status == OracleStatus::Optimal && o.unique)
        .and_then(|o| o.solution.as_ref().map(|x| (o, x)));

    let fixed: Vec<usize> = out.trace.iter().flat_map(|it| it.j_set.iter().copied()).collect();
    let corollary1 = match unique_optimum {
        Some((o, x_star)) if !fixed.is_empty() => {
            let positive = fixed.iter().all(|&i| x_star[i].is_positive());
            let extends = o.optimal_bases.iter().any(|b| fixed.iter().all(|i| b.0.contains(i)));
            Check::from_bool(positive && extends)
        }
        _ => Check::Skipped,
    };

    let proximity = match unique_optimum {
        Some((_, x_star)) => Check::all(rounded.iter().filter_map(|it| {
            let x2 = it.x_double_prime.as_ref()?;
            let k = it.scale.as_ref()?;
            let red = &it.reduced;
            let expected: Vec<Rational> = red.col_map.iter().map(|&j| x_star[j].clone()).collect();
            // the reduced problem's own optimum must be the restriction of x*
            let ok = match enumerate_solve(&red.problem) {
                Ok(r) if r.status == OracleStatus::Optimal && r.unique => {
                    r.solution.as_deref() == Some(&expected[..])
                        && proximity_check(x2, &expected, k, red.n_prime()).unwrap_or(false)
                }
                Ok(_) => false,
                // too large to enumerate: fall back to the restriction
                Err(_) => proximity_check(x2, &expected, k, red.n_prime()).unwrap_or(false),
            };
            if !ok {
                notes.push(format!("iteration {}: proximity violated", it.iteration));
            }
            Some(ok)
        })),
        None => Check::Skipped,
    };

    RunRecord {
        name: p.name.clone(),
        m,
        n,
        status: status_label(out.status).to_string(),
        outer_iterations: out.outer_iterations,
        auxiliary_problems: out.auxiliary_problems,
        total_pivots: out.stats.pivots,
        distinct_bfs: out.stats.distinct_bfs,
        degenerate_pivots: out.stats.degenerate_pivots,
        gamma_observed,
        gamma_star_bound: gamma_star_bound(m, n),
        delta_observed,
        km_bound_log2: km_log2,
        km_bound_ln: km_ln,
        lemma1,
        corollary1,
        lemma3,
        proximity,
        unique_optimum: unique_optimum.is_some(),
        oracle_match,
        integrality,
        iteration_bounds,
        km_bound,
        tu_preserved,
        notes,
    }
}

fn error_record(p: &LPInstance, message: String) -> RunRecord {
    let (m, n) = (p.m(), p.n());
    let (km_log2, km_ln) = km_bound(m, n);
    RunRecord {
        name: p.name.clone(),
        m,
        n,
        status: "error".into(),
        outer_iterations: 0,
        auxiliary_problems: 0,
        total_pivots: 0,
        distinct_bfs: 0,
        degenerate_pivots: 0,
        gamma_observed: None,
        gamma_star_bound: gamma_star_bound(m, n),
        delta_observed: None,
        km_bound_log2: km_log2,
        km_bound_ln: km_ln,
        lemma1: Check::Fail,
        corollary1: Check::Fail,
        lemma3: Check::Fail,
        proximity: Check::Fail,
        unique_optimum: false,
        oracle_match: Check::Fail,
        integrality: Check::Fail,
        iteration_bounds: Check::Fail,
        km_bound: BoundCheck::Fail,
        tu_preserved: Check::Fail,
        notes: vec![message],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub warm_start: bool,
    pub check_tu: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            warm_start: true,
            check_tu: true,
        }
    }
}

/// Solves `p`, consults the oracle, and fills every check column.
pub fn verify_instance(p: &LPInstance, cfg: VerifyConfig) -> RunRecord {
    let out = match solve(
        p,
        SolveOptions {
            warm_start: cfg.warm_start,
            trace: true,
        },
    ) {
        Ok(out) => out,
        Err(e) => return error_record(p, format!("solver error: {e}")),
    };
    let oracle = enumerate_solve(&out.instance).ok();
    let mut record = build_record(&out, oracle.as_ref(), cfg.check_tu);
    if oracle.is_none() && out.outer_iterations == 0 && out.status == SolveStatus::Infeasible {
        // inconsistent equations leave no full-rank system to enumerate
        record.oracle_match = Check::from_bool(confirm_infeasible(p).unwrap_or(false));
    }
    record
}

/// Which generator a campaign draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Suite {
    /// Flow and interval instances with data in `[−5, 5]`.
    #[default]
    Standard,
    /// Feasible instances with mixed-magnitude right-hand sides, which
    /// exercise multi-iteration runs.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignParams {
    pub count: usize,
    pub seed: u64,
    pub max_nodes: usize,
    pub suite: Suite,
}

/// Instance `index` of a campaign: even indices are flow networks (at most
/// `max_nodes` nodes and 12 arcs, data in `[−5, 5]`), odd ones interval LPs
/// (`m ≤ 5`, `n ≤ 8`, costs in `[−5, 5]`, right-hand sides in `[0, 5]`).
pub fn campaign_instance(params: &CampaignParams, index: usize) -> Result<LPInstance, ModelError> {
    let seed = params.seed.wrapping_mul(1_000_003).wrapping_add(index as u64);
    if params.suite == Suite::Mixed {
        return gen_mixed_scale(seed, params.max_nodes);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if index.is_multiple_of(2) {
        let max_nodes = params.max_nodes.max(2);
        let nodes = rng.gen_range(2..=max_nodes);
        let max_arcs = (nodes * (nodes - 1)).min(12).max(nodes - 1);
        let arcs = rng.gen_range(nodes - 1..=max_arcs);
        gen_mincost_flow(&FlowParams {
            nodes,
            arcs,
            seed,
            cost_range: -5..=5,
            supply_range: -5..=5,
        })
    } else {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(rows..=8);
        gen_interval_matrix_lp(&IntervalParams {
            rows,
            cols,
            seed,
            cost_range: -5..=5,
            rhs_range: 0..=5,
        })
    }
}

/// Runs a campaign in parallel; records come back in instance order.
pub fn run_campaign(params: &CampaignParams, cfg: VerifyConfig) -> Result<Vec<RunRecord>, ModelError> {
    let instances = (0..params.count)
        .map(|i| campaign_instance(params, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(verify_all(&instances, cfg))
}

pub fn verify_all(instances: &[LPInstance], cfg: VerifyConfig) -> Vec<RunRecord> {
    instances.par_iter().map(|p| verify_instance(p, cfg)).collect()
}

/// Pass/fail/skip totals for one column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Tally {
    fn add(&mut self, c: Check) {
        match c {
            Check::Pass => self.pass += 1,
            Check::Fail => self.fail += 1,
            Check::Skipped => self.skipped += 1,
        }
    }
}

/// Column name with its totals, plus the pivot-bound column.
pub fn summarize(records: &[RunRecord]) -> (Vec<(&'static str, Tally)>, [usize; 3]) {
    let mut out: Vec<(&'static str, Tally)> = Vec::new();
    let mut km = [0usize; 3];
    for r in records {
        for (name, c) in r.checks() {
            match out.iter_mut().find(|(n, _)| *n == name) {
                Some((_, t)) => t.add(c),
                None => {
                    let mut t = Tally::default();
                    t.add(c);
                    out.push((name, t));
                }
            }
        }
        km[match r.km_bound {
            BoundCheck::Pass => 0,
            BoundCheck::Fail => 1,
            BoundCheck::AssumptionViolated => 2,
        }] += 1;
    }
    (out, km)
}

pub fn format_summary(records: &[RunRecord]) -> String {
    let (tallies, km) = summarize(records);
    let mut s = format!("{} instances\n", records.len());
    for (name, t) in tallies {
        s.push_str(&format!(
            "{name:<12} pass {:>4}  fail {:>4}  skipped {:>4}\n",
            t.pass, t.fail, t.skipped
        ));
    }
    s.push_str(&format!(
        "{:<12} pass {:>4}  fail {:>4}  assumption violated {:>4}\n",
        "km_bound", km[0], km[1], km[2]
    ));
    let degenerate = records.iter().filter(|r| r.degenerate_pivots > 0).count();
    s.push_str(&format!("runs with degenerate pivots: {degenerate}\n"));
    s
}

/// Appends records to a CSV file, writing the header only into an empty
/// file.
pub fn append_csv(path: &Path, records: &[RunRecord]) -> io::Result<()> {
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let empty = file.metadata()?.len() == 0;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if empty {
        w.write_record(CSV_HEADER)?;
    }
    for r in records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()
}
