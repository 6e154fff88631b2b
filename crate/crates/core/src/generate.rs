//! Seeded generators for totally unimodular instance families.
//!
//! Both families are TU by construction: node-arc incidence matrices of
//! directed graphs, and consecutive-ones (interval) matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ModelError;
use crate::linalg::{IncrementalSpan, RMatrix, Reduction};
use crate::model::LPInstance;
use crate::numeric::int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowParams {
    pub nodes: usize,
    pub arcs: usize,
    pub seed: u64,
    pub cost_range: RangeInclusive<i64>,
    pub supply_range: RangeInclusive<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalParams {
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    pub cost_range: RangeInclusive<i64>,
    pub rhs_range: RangeInclusive<i64>,
}

/// A directed arc `tail → head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

fn check_range(name: &str, r: &RangeInclusive<i64>) -> Result<(), ModelError> {
    if r.start() > r.end() {
        return Err(ModelError::InvalidParameters(format!("empty {name} range")));
    }
    Ok(())
}

/// Connected random digraph: a random spanning tree oriented away from
/// node 0 plus distinct extra arcs, in shuffled order.
pub fn random_connected_digraph(nodes: usize, arcs: usize, rng: &mut impl Rng) -> Result<Vec<Arc>, ModelError> {
    if nodes < 2 {
        return Err(ModelError::InvalidParameters(format!("need at least 2 nodes, got {nodes}")));
    }
    if arcs < nodes - 1 {
        return Err(ModelError::InvalidParameters(format!(
            "{arcs} arcs cannot connect {nodes} nodes (disconnected)"
        )));
    }
    if arcs > nodes * (nodes - 1) {
        return Err(ModelError::InvalidParameters(format!(
            "{arcs} arcs exceed the {} distinct directed arcs on {nodes} nodes",
            nodes * (nodes - 1)
        )));
    }
    let mut used = vec![false; nodes * nodes];
    let mut out = Vec::with_capacity(arcs);
    for v in 1..nodes {
        let parent = rng.gen_range(0..v);
        used[parent * nodes + v] = true;
        out.push(Arc { tail: parent, head: v });
    }
    let mut free: Vec<Arc> = (0..nodes)
        .flat_map(|t| (0..nodes).map(move |h| Arc { tail: t, head: h }))
        .filter(|a| a.tail != a.head && !used[a.tail * nodes + a.head])
        .collect();
    free.shuffle(rng);
    out.extend(free.into_iter().take(arcs - (nodes - 1)));
    out.shuffle(rng);
    Ok(out)
}

/// Minimum-cost flow: `A` is the node-arc incidence matrix (+1 at the tail,
/// −1 at the head) with the last node's row dropped, `b` the supplies of the
/// remaining nodes.
pub fn gen_mincost_flow(p: &FlowParams) -> Result<LPInstance, ModelError> {
    check_range("cost", &p.cost_range)?;
    check_range("supply", &p.supply_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let arcs = random_connected_digraph(p.nodes, p.arcs, &mut rng)?;
    let costs: Vec<i64> = arcs.iter().map(|_| rng.gen_range(p.cost_range.clone())).collect();
    let mut supplies: Vec<i64> = (0..p.nodes - 1).map(|_| rng.gen_range(p.supply_range.clone())).collect();
    supplies.push(-supplies.iter().sum::<i64>());
    debug_assert_eq!(supplies.iter().sum::<i64>(), 0);

    let rows = p.nodes - 1;
    let mut a = RMatrix::zeros(rows, arcs.len());
    for (e, arc) in arcs.iter().enumerate() {
        if arc.tail < rows {
            a[(arc.tail, e)] = int(1);
        }
        if arc.head < rows {
            a[(arc.head, e)] = int(-1);
        }
    }
    LPInstance::new(
        a,
        supplies[..rows].iter().map(|&s| int(s)).collect(),
        costs.into_iter().map(int).collect(),
        format!("flow-n{}-a{}-s{}", p.nodes, p.arcs, p.seed),
    )
}

fn interval_row(cols: usize, lo: usize, hi: usize) -> Vec<crate::numeric::Rational> {
    (0..cols).map(|j| int((lo <= j && j <= hi) as i64)).collect()
}

/// Consecutive-ones constraint rows, drawn until they are linearly
/// independent, with random integer `b` and `c`.
pub fn gen_interval_matrix_lp(p: &IntervalParams) -> Result<LPInstance, ModelError> {
    check_range("cost", &p.cost_range)?;
    check_range("rhs", &p.rhs_range)?;
    if p.rows == 0 || p.cols == 0 {
        return Err(ModelError::InvalidParameters("rows and cols must be positive".into()));
    }
    if p.rows > p.cols {
        return Err(ModelError::InvalidParameters(format!(
            "{} rows cannot be independent in {} columns",
            p.rows, p.cols
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut span = IncrementalSpan::new(p.cols);
    let mut rows = Vec::with_capacity(p.rows);
    while rows.len() < p.rows {
        let mut placed = false;
        for _ in 0..64 {
            let lo = rng.gen_range(0..p.cols);
            let hi = rng.gen_range(lo..p.cols);
            let row = interval_row(p.cols, lo, hi);
            if span.insert(row.clone()) == Reduction::Added {
                rows.push(row);
                placed = true;
                break;
            }
        }
        if !placed {
            // Unlucky draws: take the first independent interval in order.
            'scan: for lo in 0..p.cols {
                for hi in lo..p.cols {
                    let row = interval_row(p.cols, lo, hi);
                    if span.insert(row.clone()) == Reduction::Added {
                        rows.push(row);
                        break 'scan;
                    }
                }
            }
        }
    }
    let b = (0..p.rows).map(|_| int(rng.gen_range(p.rhs_range.clone()))).collect();
    let c = (0..p.cols).map(|_| int(rng.gen_range(p.cost_range.clone()))).collect();
    LPInstance::new(
        RMatrix::from_rows(rows),
        b,
        c,
        format!("interval-m{}-n{}-s{}", p.rows, p.cols, p.seed),
    )
}

/// A feasible right-hand side `b = A·x₀` for a random `x₀ ∈ {0..=3}ⁿ`.
fn feasible_rhs(a: &RMatrix, rng: &mut impl Rng) -> Vec<crate::numeric::Rational> {
    let x0: Vec<_> = (0..a.cols()).map(|_| int(rng.gen_range(0..=3))).collect();
    a.mul_vec(&x0)
}

/// Feasible instance whose right-hand side mixes small and large
/// magnitudes: `b = A·x₀` where each entry of `x₀` is 0, in `1..=3`, or in
/// `100..=1000`. Costs are in `1..=20`, so the problem is bounded.
///
/// Optimal solutions with coordinates of very different sizes are where
/// rounding changes the optimal basis and several outer iterations are
/// needed. Even seeds give flow networks on at most `max_nodes` nodes and 12
/// arcs, odd seeds interval LPs with `m ≤ 5`, `n ≤ 8`.
pub fn gen_mixed_scale(seed: u64, max_nodes: usize) -> Result<LPInstance, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3d3d_3d3d);
    let mut lp = if seed.is_multiple_of(2) {
        let nodes = rng.gen_range(2..=max_nodes.max(2));
        let arcs = rng.gen_range(nodes - 1..=(nodes * (nodes - 1)).min(12).max(nodes - 1));
        gen_mincost_flow(&FlowParams {
            nodes,
            arcs,
            seed,
            cost_range: 1..=20,
            supply_range: 0..=0,
        })?
    } else {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(rows..=8);
        gen_interval_matrix_lp(&IntervalParams {
            rows,
            cols,
            seed,
            cost_range: 1..=20,
            rhs_range: 0..=0,
        })?
    };
    let x0: Vec<_> = (0..lp.n())
        .map(|_| match rng.gen_range(0..3) {
            0 => int(0),
            1 => int(rng.gen_range(1..=3)),
            _ => int(rng.gen_range(100..=1000)),
        })
        .collect();
    lp.b = lp.a.mul_vec(&x0);
    lp.name = format!("mixed-m{}-n{}-s{seed}", lp.m(), lp.n());
    Ok(lp)
}

/// Provably infeasible TU instance number `seed`.
///
/// Even seeds: a spanning-tree flow network with a sink node (no outgoing
/// arc) given a positive supply. Odd seeds: an interval LP with one row
/// forced to a negative right-hand side.
pub fn crafted_infeasible(seed: u64) -> Result<LPInstance, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1f1f_1f1f);
    let mut lp = if seed.is_multiple_of(2) {
        let nodes = rng.gen_range(3..=6);
        let mut lp = gen_mincost_flow(&FlowParams {
            nodes,
            arcs: nodes - 1,
            seed,
            cost_range: -5..=5,
            supply_range: -5..=5,
        })?;
        // a tree oriented away from node 0 always has a leaf (no outgoing arc)
        let sink = (0..lp.m()).find(|&i| lp.a.row(i).iter().all(|v| *v <= int(0)));
        match sink {
            Some(i) => lp.b[i] = int(rng.gen_range(1..=5)),
            // only the dropped last node is a sink; its implied supply is −Σb
            None => lp.b.iter_mut().for_each(|v| *v = int(-1)),
        }
        lp
    } else {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(rows..=8);
        let mut lp = gen_interval_matrix_lp(&IntervalParams {
            rows,
            cols,
            seed,
            cost_range: -5..=5,
            rhs_range: 0..=5,
        })?;
        let i = rng.gen_range(0..rows);
        lp.b[i] = int(-rng.gen_range(1..=5));
        lp
    };
    lp.name = format!("infeasible-s{seed}");
    Ok(lp)
}

/// Provably unbounded TU instance number `seed`: feasible by construction
/// (`b = A·x₀`) with an improving ray.
///
/// Even seeds: a flow network with an added negative-cost 2-cycle. Odd
/// seeds: an interval LP with an extra uncovered column of negative cost.
pub fn crafted_unbounded(seed: u64) -> Result<LPInstance, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2e2e_2e2e);
    let (a, c) = if seed.is_multiple_of(2) {
        let nodes = rng.gen_range(3..=5);
        let arcs = rng.gen_range(nodes - 1..=nodes + 2);
        let base = gen_mincost_flow(&FlowParams {
            nodes,
            arcs,
            seed,
            cost_range: -5..=5,
            supply_range: -5..=5,
        })?;
        let (u, v) = (0, rng.gen_range(1..nodes - 1));
        let mut cycle = RMatrix::zeros(base.m(), 2);
        cycle[(u, 0)] = int(1);
        cycle[(v, 0)] = int(-1);
        cycle[(v, 1)] = int(1);
        cycle[(u, 1)] = int(-1);
        let forward = rng.gen_range(-5..=-1);
        let back = rng.gen_range(0..-forward);
        let mut c = base.c.clone();
        c.push(int(forward));
        c.push(int(back));
        (base.a.hstack(&cycle), c)
    } else {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(rows..=7);
        let base = gen_interval_matrix_lp(&IntervalParams {
            rows,
            cols,
            seed,
            cost_range: -5..=5,
            rhs_range: 0..=5,
        })?;
        let mut c = base.c.clone();
        c.push(int(-rng.gen_range(1..=5)));
        (base.a.hstack(&RMatrix::zeros(rows, 1)), c)
    };
    let b = feasible_rhs(&a, &mut rng);
    LPInstance::new(a, b, c, format!("unbounded-s{seed}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;
    use crate::tu::is_totally_unimodular;
    use num_traits::{One, Zero};

    fn flow(nodes: usize, arcs: usize, seed: u64) -> FlowParams {
        FlowParams {
            nodes,
            arcs,
            seed,
            cost_range: -5..=5,
            supply_range: -5..=5,
        }
    }

    #[test]
    fn single_arc_keeps_tail_row() {
        let p = FlowParams {
            nodes: 2,
            arcs: 1,
            seed: 99,
            cost_range: 1..=1,
            supply_range: 1..=1,
        };
        let lp = gen_mincost_flow(&p).unwrap();
        assert_eq!(lp.a, RMatrix::from_i64(&[&[1]]));
        assert_eq!(lp.b, vec![int(1)]);
        assert_eq!(lp.c, vec![int(1)]);
    }

    #[test]
    fn flow_4_6_seed_7_is_tu() {
        let lp = gen_mincost_flow(&flow(4, 6, 7)).unwrap();
        assert_eq!((lp.m(), lp.n()), (3, 6));
        assert!(is_totally_unimodular(&lp.a, 3).unwrap().is_tu);
        assert_eq!(rank(&lp.a), 3);
    }

    #[test]
    fn flow_rejects_disconnected() {
        assert!(matches!(
            gen_mincost_flow(&flow(5, 1, 0)),
            Err(ModelError::InvalidParameters(_))
        ));
    }

    #[test]
    fn flow_is_deterministic() {
        assert_eq!(gen_mincost_flow(&flow(5, 8, 3)).unwrap(), gen_mincost_flow(&flow(5, 8, 3)).unwrap());
        assert_ne!(gen_mincost_flow(&flow(5, 8, 3)).unwrap(), gen_mincost_flow(&flow(5, 8, 4)).unwrap());
    }

    #[test]
    fn dropped_row_restores_zero_supply() {
        for seed in 0..20 {
            let lp = gen_mincost_flow(&flow(5, 7, seed)).unwrap();
            // each column has at most one +1 and one −1; full incidence columns sum to 0
            for j in 0..lp.n() {
                let col = lp.a.column(j);
                let plus = col.iter().filter(|x| x.is_one()).count();
                let minus = col.iter().filter(|x| **x == int(-1)).count();
                assert!(plus <= 1 && minus <= 1);
                assert!(col.iter().all(|x| x.is_zero() || x.is_one() || *x == int(-1)));
            }
            assert_eq!(rank(&lp.a), 4);
        }
    }

    #[test]
    fn interval_rows_are_consecutive_ones() {
        for seed in 0..30 {
            let lp = gen_interval_matrix_lp(&IntervalParams {
                rows: 3,
                cols: 5,
                seed,
                cost_range: -5..=5,
                rhs_range: 0..=5,
            })
            .unwrap();
            for i in 0..lp.m() {
                let row = lp.a.row(i);
                let ones: Vec<usize> = (0..lp.n()).filter(|&j| row[j].is_one()).collect();
                assert!(!ones.is_empty());
                assert_eq!(ones.last().unwrap() - ones[0] + 1, ones.len());
                assert!(row.iter().all(|x| x.is_zero() || x.is_one()));
            }
            assert_eq!(rank(&lp.a), 3);
        }
    }

    #[test]
    fn interval_3_4_seed_1_is_tu() {
        let lp = gen_interval_matrix_lp(&IntervalParams {
            rows: 3,
            cols: 4,
            seed: 1,
            cost_range: -5..=5,
            rhs_range: -5..=5,
        })
        .unwrap();
        assert!(is_totally_unimodular(&lp.a, 3).unwrap().is_tu);
    }

    #[test]
    fn interval_square_case_terminates() {
        let lp = gen_interval_matrix_lp(&IntervalParams {
            rows: 6,
            cols: 6,
            seed: 5,
            cost_range: -5..=5,
            rhs_range: -5..=5,
        })
        .unwrap();
        assert_eq!(rank(&lp.a), 6);
    }

    #[test]
    fn crafted_suites_have_their_status() {
        use crate::oracle::{enumerate_solve, OracleStatus};
        for seed in 0..24 {
            let p = crafted_infeasible(seed).unwrap();
            assert!(is_totally_unimodular(&p.a, 6).unwrap().is_tu, "{}", p.name);
            assert_eq!(enumerate_solve(&p).unwrap().status, OracleStatus::Infeasible, "{}", p.name);
            let p = crafted_unbounded(seed).unwrap();
            assert!(is_totally_unimodular(&p.a, 6).unwrap().is_tu, "{}", p.name);
            assert_eq!(enumerate_solve(&p).unwrap().status, OracleStatus::Unbounded, "{}", p.name);
        }
    }
}
