//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tardos_cli::harness::{run_campaign, verify_all, BoundCheck, CampaignParams, Check, RunRecord, Suite, VerifyConfig};
use tardos_core::generate::{
    crafted_infeasible, crafted_unbounded, gen_interval_matrix_lp, gen_mincost_flow, gen_mixed_scale, FlowParams,
    IntervalParams,
};
use tardos_core::numeric::{ceil_div_by_sqrt, compare_affine_sqrt, ratio};
use tardos_core::oracle::{confirm_infeasible, enumerate_solve, OracleStatus};
use tardos_core::tu::is_totally_unimodular;
use tardos_core::{solve, LPInstance, Rational, SolveOptions, SolveStatus};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

fn tally(records: &[&RunRecord], pick: impl Fn(&RunRecord) -> Check) -> (usize, usize, usize) {
    let mut t = (0, 0, 0);
    for r in records {
        match pick(r) {
            Check::Pass => t.0 += 1,
            Check::Fail => t.1 += 1,
            Check::Skipped => t.2 += 1,
        }
    }
    t
}

/// A lemma column must never fail and must have been exercised at least once.
fn column(records: &[&RunRecord], pick: impl Fn(&RunRecord) -> Check, what: &str) -> Verdict {
    let (pass, fail, skipped) = tally(records, pick);
    verdict(
        fail == 0 && pass > 0,
        format!("{what}: {pass} runs checked, {fail} failed, {skipped} not applicable"),
    )
}

// ---- criterion 9 oracle: 256-bit fixed point --------------------------------

const FRAC_BITS: usize = 256;

/// `floor(√x · 2^256)` for a nonnegative integer `x`.
fn fixed_sqrt(x: &BigInt) -> BigInt {
    (x << (2 * FRAC_BITS)).sqrt()
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, b)
}

/// `⌈v/√s⌉` from 256-bit fixed-point arithmetic, or `None` when the quotient
/// lies within 2⁻¹⁰⁰ of an integer (there the exact path decides).
fn ceil_by_fixed_point(v: &Rational, s: &Rational) -> Option<BigInt> {
    // v/√s = p·√(tr) / (q·r) for v = p/q, s = r/t
    let (p, q) = (v.numer(), v.denom());
    let (r, t) = (s.numer(), s.denom());
    let root = fixed_sqrt(&(t * r));
    let num = p * root;
    let den = (q * r) << FRAC_BITS;
    let floor = floor_div(&num, &den);
    // distance of the approximation to the integers below and above, scaled by den
    let rem = &num - &floor * &den;
    let margin = &den >> 100usize;
    let slack = (p.abs() << 1usize) + 1u32;
    let near = rem <= &margin + &slack || (&den - &rem) <= &margin + &slack;
    if near {
        return None;
    }
    Some(floor + 1)
}

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64, positive: bool) -> Rational {
    let p = if positive { rng.gen_range(1..=num) } else { rng.gen_range(-num..=num) };
    ratio(p, rng.gen_range(1..=den))
}

fn criterion9() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut agreed, mut near_integer, mut mismatched) = (0usize, 0usize, 0usize);
    for i in 0..100_000 {
        let v = random_rational(&mut rng, 1_000_000, 1_000, false);
        let s = if i % 10 == 0 {
            // perfect squares hit the exact-integer paths
            let w = random_rational(&mut rng, 1_000, 100, true);
            &w * &w
        } else {
            random_rational(&mut rng, 1_000_000, 1_000, true)
        };
        let exact = ceil_div_by_sqrt(&v, &s).expect("positive radicand");
        match ceil_by_fixed_point(&v, &s) {
            Some(z) if z == exact => agreed += 1,
            Some(_) => mismatched += 1,
            None => near_integer += 1,
        }
    }

    // compare_affine_sqrt against a bracket [lo, hi] ∋ √s
    let (mut bracketed, mut bracket_errors) = (0usize, 0usize);
    for _ in 0..20_000 {
        let a = random_rational(&mut rng, 10_000, 100, false);
        let b = random_rational(&mut rng, 10_000, 100, false);
        let s = random_rational(&mut rng, 10_000, 100, true);
        let got = compare_affine_sqrt(&a, &b, &s).expect("nonnegative radicand");
        let (r, t) = (s.numer(), s.denom());
        let root = fixed_sqrt(&(r * t));
        let scale = t << FRAC_BITS;
        let lo = Rational::new(root.clone(), scale.clone());
        let hi = Rational::new(root + 1u32, scale);
        let at = |x: &Rational| (&a + &b * x).cmp(&Rational::zero());
        let (l, h) = (at(&lo), at(&hi));
        if l == h && l != Ordering::Equal {
            bracketed += 1;
            if got != l {
                bracket_errors += 1;
            }
        } else {
            // straddling: only an exact cancellation a² = b²s may give Equal
            let cancels = &a * &a == &b * &b * &s && a.signum() != b.signum();
            if (got == Ordering::Equal) != cancels {
                bracket_errors += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        mismatched == 0 && bracket_errors == 0 && elapsed < Duration::from_secs(10),
        format!(
            "numeric kernel: ceil_div_by_sqrt {agreed} agree, {mismatched} disagree, {near_integer} within 2^-100 of an integer (exact path); \
             compare_affine_sqrt {bracketed} bracketed, {bracket_errors} errors; {}",
            secs(elapsed)
        ),
    )
}

// ---- criterion 8 -------------------------------------------------------------

fn criterion8() -> Verdict {
    const SUITE: u64 = 24;
    let mut infeasible_ok = 0;
    let mut infeasible_as_no_optimum = 0;
    let mut unbounded_ok = 0;
    let mut problems = Vec::new();
    for seed in 0..SUITE {
        let p = crafted_infeasible(seed).unwrap();
        let oracle = enumerate_solve(&p).unwrap();
        let confirmed = oracle.status == OracleStatus::Infeasible && confirm_infeasible(&p).unwrap();
        match solve(&p, SolveOptions::default()).map(|o| o.status) {
            Ok(SolveStatus::Infeasible) if confirmed => infeasible_ok += 1,
            Ok(SolveStatus::NoOptimalSolution) if confirmed => infeasible_as_no_optimum += 1,
            other => problems.push(format!("{}: {other:?}", p.name)),
        }
        let p = crafted_unbounded(seed).unwrap();
        let oracle = enumerate_solve(&p).unwrap();
        match solve(&p, SolveOptions::default()).map(|o| o.status) {
            Ok(SolveStatus::NoOptimalSolution) if oracle.status == OracleStatus::Unbounded => unbounded_ok += 1,
            other => problems.push(format!("{}: {other:?}", p.name)),
        }
    }
    verdict(
        problems.is_empty(),
        format!(
            "status classification: infeasible suite {infeasible_ok}/{SUITE} infeasible ({infeasible_as_no_optimum} as no optimal solution), \
             unbounded suite {unbounded_ok}/{SUITE} no optimal solution{}",
            if problems.is_empty() { String::new() } else { format!("; mismatches {problems:?}") }
        ),
    )
}

// ---- criterion 10 ------------------------------------------------------------

fn small_generator_outputs() -> Vec<LPInstance> {
    let mut out = Vec::new();
    for seed in 0..8 {
        for nodes in 2..=7 {
            for arcs in nodes - 1..=(nodes * (nodes - 1)).min(6) {
                out.push(
                    gen_mincost_flow(&FlowParams {
                        nodes,
                        arcs,
                        seed,
                        cost_range: -5..=5,
                        supply_range: -5..=5,
                    })
                    .unwrap(),
                );
            }
        }
        for rows in 1..=6 {
            for cols in rows..=6 {
                out.push(
                    gen_interval_matrix_lp(&IntervalParams {
                        rows,
                        cols,
                        seed,
                        cost_range: -5..=5,
                        rhs_range: -5..=5,
                    })
                    .unwrap(),
                );
            }
        }
    }
    for seed in 0..40 {
        out.extend(crafted_infeasible(seed));
        out.extend(crafted_unbounded(seed));
        out.extend(gen_mixed_scale(seed, 6));
    }
    out.retain(|p| p.m() <= 6 && p.n() <= 6);
    out
}

fn criterion10(records: &[&RunRecord]) -> Verdict {
    let outputs = small_generator_outputs();
    let failing: Vec<&str> = outputs
        .iter()
        .filter(|p| !is_totally_unimodular(&p.a, p.m().min(p.n())).unwrap().is_tu)
        .map(|p| p.name.as_str())
        .collect();
    let (pass, fail, _) = tally(records, |r| r.tu_preserved);
    verdict(
        failing.is_empty() && fail == 0 && pass > 0,
        format!(
            "TU machinery: {} generator outputs up to 6x6 certified ({} not TU); reduced and rounded matrices TU in {pass} runs, {fail} failed",
            outputs.len(),
            failing.len()
        ),
    )
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();

    let start = Instant::now();
    let standard = run_campaign(
        &CampaignParams {
            count: 300,
            seed: 1,
            max_nodes: 6,
            suite: Suite::Standard,
        },
        cfg,
    )
    .expect("campaign parameters are valid");
    let standard_time = start.elapsed();

    let mixed_instances: Vec<LPInstance> = (0..1000).map(|s| gen_mixed_scale(10_000 + s, 6).unwrap()).collect();
    let mixed = verify_all(&mixed_instances, cfg);
    let all: Vec<&RunRecord> = standard.iter().chain(&mixed).collect();

    let mut verdicts: Vec<(usize, Verdict)> = Vec::new();

    let standard_refs: Vec<&RunRecord> = standard.iter().collect();
    let (matched, mismatched, _) = tally(&standard_refs, |r| r.oracle_match);
    let mixed_refs: Vec<&RunRecord> = mixed.iter().collect();
    let (mixed_matched, mixed_mismatched, _) = tally(&mixed_refs, |r| r.oracle_match);
    let unique = standard.iter().filter(|r| r.unique_optimum).count();
    let count = |s: &str| standard.iter().filter(|r| r.status == s).count();
    verdicts.push((
        1,
        verdict(
            mismatched == 0 && mixed_mismatched == 0 && standard.len() >= 200 && standard_time < Duration::from_secs(60),
            format!(
                "oracle equivalence: {matched}/{} standard instances match ({} optimal, {} infeasible, {} no optimal solution; \
                 {unique} with a unique optimum compared coordinate-wise) in {}; mixed suite {mixed_matched}/{} match",
                standard.len(),
                count("optimal"),
                count("infeasible"),
                count("no_optimal_solution"),
                secs(standard_time),
                mixed.len(),
            ),
        ),
    ));
    verdicts.push((2, column(&all, |r| r.lemma1, "lemma 1 (large entry in x'', J nonempty)")));
    verdicts.push((3, column(&all, |r| r.corollary1, "corollary 1 (fixed indices positive in x*)")));
    verdicts.push((4, column(&all, |r| r.lemma3, "lemma 3 (rounded rhs and BFS entries bounded)")));
    verdicts.push((5, column(&all, |r| r.integrality, "integrality and delta = 1")));

    let iteration_fail = all.iter().filter(|r| r.iteration_bounds != Check::Pass).count();
    let km_fail = all.iter().filter(|r| r.km_bound != BoundCheck::Pass).count();
    let max_ratio = all
        .iter()
        .filter(|r| r.km_bound_ln > 0)
        .map(|r| r.distinct_bfs as f64 / r.km_bound_ln as f64)
        .fold(0.0, f64::max);
    verdicts.push((
        6,
        verdict(
            iteration_fail == 0 && km_fail == 0,
            format!(
                "iteration accounting: {} runs, {iteration_fail} exceed m outer / 2m auxiliary, {km_fail} exceed the pivot bound \
                 (base 2 and natural log); largest distinct_bfs/bound {max_ratio:.2e}",
                all.len()
            ),
        ),
    ));
    verdicts.push((7, column(&all, |r| r.proximity, "proximity |x'' - x*/k| < n'")));
    verdicts.push((8, criterion8()));
    verdicts.push((9, criterion9()));
    verdicts.push((10, criterion10(&all)));

    let mut failed = 0;
    for (n, v) in &verdicts {
        println!("criterion {n:>2} {}  {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.ok);
    }
    let noted: Vec<String> = all
        .iter()
        .filter(|r| r.has_failure())
        .map(|r| format!("{}: {}", r.name, r.notes.join("; ")))
        .collect();
    for line in &noted {
        println!("  {line}");
    }
    println!("{} of {} criteria passed", verdicts.len() - failed, verdicts.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
