//! Transportation and travelling-salesman problems with Monge costs.
//!
//! With a Monge cost matrix the northwest corner rule is optimal for the
//! transportation problem, and the TSP always has an optimal pyramidal tour
//! (ascending from city 1 to city n, then descending back). For symmetric
//! Monge costs a single fixed tour is optimal. Brute-force oracles certify
//! each claim on small instances.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Default bound on the total supply for [`tp_bruteforce`].
pub const DEFAULT_TP_BOUND: u64 = 10;
/// Largest city count accepted by [`tsp_bruteforce`].
pub const MAX_TSP_BRUTEFORCE: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportInstance {
    pub cost: Matrix,
    pub supplies: Vec<u64>,
    pub demands: Vec<u64>,
}

impl TransportInstance {
    /// Checks shapes and balance; the Monge property is checked by the solver.
    pub fn new(cost: Matrix, supplies: Vec<u64>, demands: Vec<u64>) -> Result<Self> {
        if supplies.len() != cost.rows() || demands.len() != cost.cols() {
            return Err(Error::Shape(format!(
                "{} supplies and {} demands for a {}x{} cost matrix",
                supplies.len(),
                demands.len(),
                cost.rows(),
                cost.cols()
            )));
        }
        let (supply, demand) = (supplies.iter().sum::<u64>(), demands.iter().sum::<u64>());
        if supply != demand {
            return Err(Error::Unbalanced { supply, demand });
        }
        Ok(TransportInstance { cost, supplies, demands })
    }

    /// `{"cost": matrix, "supplies": [...], "demands": [...]}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let cost = Matrix::from_json(value.get("cost").ok_or_else(|| Error::Parse("missing \"cost\"".into()))?)?;
        let margin = |key: &str| -> Result<Vec<u64>> {
            value
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing array \"{key}\"")))?
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| Error::Parse(format!("\"{key}\" must hold nonnegative integers"))))
                .collect()
        };
        TransportInstance::new(cost, margin("supplies")?, margin("demands")?)
    }

    pub fn total(&self) -> u64 {
        self.supplies.iter().sum()
    }
}

/// Integer transportation plan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowMatrix {
    pub flows: Vec<Vec<u64>>,
}

impl FlowMatrix {
    pub fn row_sums(&self) -> Vec<u64> {
        self.flows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let cols = self.flows.first().map_or(0, Vec::len);
        (0..cols).map(|j| self.flows.iter().map(|r| r[j]).sum()).collect()
    }

    pub fn is_feasible(&self, inst: &TransportInstance) -> bool {
        self.row_sums() == inst.supplies && self.col_sums() == inst.demands
    }
}

/// `Σ c_ij t_ij`.
pub fn objective(cost: &Matrix, flow: &FlowMatrix) -> Scalar {
    let mut total = Scalar::zero();
    for (i, row) in flow.flows.iter().enumerate() {
        for (j, &t) in row.iter().enumerate() {
            if t > 0 {
                total += cost.get(i + 1, j + 1) * Scalar::from_integer(t.into());
            }
        }
    }
    total
}

/// Greedy staircase flow from the top-left cell. When supply and demand run
/// out together both indices advance.
pub fn northwest_corner(inst: &TransportInstance) -> Result<FlowMatrix> {
    inst.cost.ensure_monge()?;
    let (p, q) = (inst.supplies.len(), inst.demands.len());
    let mut flows = vec![vec![0u64; q]; p];
    let mut supply = inst.supplies.clone();
    let mut demand = inst.demands.clone();
    let (mut i, mut j) = (0, 0);
    while i < p && j < q {
        let amount = supply[i].min(demand[j]);
        flows[i][j] = amount;
        supply[i] -= amount;
        demand[j] -= amount;
        match (supply[i] == 0, demand[j] == 0) {
            (true, true) => {
                i += 1;
                j += 1;
            }
            (true, false) => i += 1,
            _ => j += 1,
        }
    }
    Ok(FlowMatrix { flows })
}

/// Exact optimum over all integer flows with the given margins.
pub fn tp_bruteforce(inst: &TransportInstance) -> Result<(Scalar, FlowMatrix)> {
    tp_bruteforce_with(inst, DEFAULT_TP_BOUND)
}

pub fn tp_bruteforce_with(inst: &TransportInstance, bound: u64) -> Result<(Scalar, FlowMatrix)> {
    if inst.total() > bound {
        return Err(Error::ResourceLimit(format!("brute-force transportation is limited to total supply {bound}")));
    }
    let (p, q) = (inst.supplies.len(), inst.demands.len());
    let mut best: Option<(Scalar, FlowMatrix)> = None;
    let mut flows = vec![vec![0u64; q]; p];
    let mut demand = inst.demands.clone();
    search_flows(inst, 0, 0, inst.supplies.first().copied().unwrap_or(0), &mut flows, &mut demand, &mut best);
    best.ok_or_else(|| Error::Internal("balanced instance without a feasible flow".into()))
}

/// Fill row `i` from column `j` on, with `left` units of row `i` still to place.
fn search_flows(
    inst: &TransportInstance,
    i: usize,
    j: usize,
    left: u64,
    flows: &mut Vec<Vec<u64>>,
    demand: &mut Vec<u64>,
    best: &mut Option<(Scalar, FlowMatrix)>,
) {
    let (p, q) = (inst.supplies.len(), inst.demands.len());
    if i == p {
        let flow = FlowMatrix { flows: flows.clone() };
        let value = objective(&inst.cost, &flow);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            *best = Some((value, flow));
        }
        return;
    }
    if j == q {
        if left == 0 {
            let next = inst.supplies.get(i + 1).copied().unwrap_or(0);
            search_flows(inst, i + 1, 0, next, flows, demand, best);
        }
        return;
    }
    let lo = if j == q - 1 { left } else { 0 };
    let hi = left.min(demand[j]);
    for amount in lo..=hi {
        flows[i][j] = amount;
        demand[j] -= amount;
        search_flows(inst, i, j + 1, left - amount, flows, demand, best);
        demand[j] += amount;
    }
    flows[i][j] = 0;
}

/// A cyclic tour through cities `1..=n`, listed from city 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Tour(pub Vec<usize>);

impl Tour {
    pub fn new(cities: Vec<usize>) -> Result<Self> {
        let n = cities.len();
        let mut seen = vec![false; n + 1];
        for &c in &cities {
            if c == 0 || c > n || seen[c] {
                return Err(Error::Domain(format!("{cities:?} is not a permutation of 1..={n}")));
            }
            seen[c] = true;
        }
        if cities.first() != Some(&1) {
            return Err(Error::Domain("a tour starts at city 1".into()));
        }
        Ok(Tour(cities))
    }

    pub fn cities(&self) -> &[usize] {
        &self.0
    }

    /// Length of the closed tour under `cost` (1-based cities).
    pub fn cost(&self, cost: &Matrix) -> Scalar {
        let n = self.0.len();
        (0..n).map(|k| cost.get(self.0[k], self.0[(k + 1) % n]).clone()).sum()
    }

    pub fn is_pyramidal(&self) -> bool {
        let n = self.0.len();
        let Some(top) = self.0.iter().position(|&c| c == n) else {
            return false;
        };
        self.0[..=top].windows(2).all(|w| w[0] < w[1]) && self.0[top..].windows(2).all(|w| w[0] > w[1])
    }
}

fn check_square(cost: &Matrix) -> Result<usize> {
    if !cost.is_square() {
        return Err(Error::Shape(format!("TSP needs a square cost matrix, got {}x{}", cost.rows(), cost.cols())));
    }
    Ok(cost.rows())
}

/// `(up, down)`: current ends of the ascending and descending paths.
type Endpoints = (usize, usize);

/// Optimal pyramidal tour by dynamic programming.
///
/// State `(up, down)`: cities `1..=max(up, down)` are placed, the ascending
/// path from city 1 currently ends at `up`, and the descending path back to
/// city 1 currently starts at `down`. City `k = max + 1` either extends the
/// ascending path (cost `c[up][k]`) or is prepended to the descending path
/// (cost `c[k][down]`). City `n` closes both: `c[up][n] + c[n][down]`.
pub fn pyramidal_tsp(cost: &Matrix) -> Result<(Tour, Scalar)> {
    let n = check_square(cost)?;
    if n < 3 {
        return Err(Error::InvalidSize(format!("TSP needs at least 3 cities, got {n}")));
    }
    cost.ensure_monge()?;
    // value[up][down] for the current frontier; parent pointers per city.
    let mut layer: Vec<(Endpoints, Scalar)> = vec![((1, 1), Scalar::zero())];
    // history[k] maps the state after placing a city to the state before it.
    let mut history: Vec<Vec<(Endpoints, Endpoints)>> = Vec::new();
    for k in 2..n {
        let mut next: Vec<((usize, usize), Scalar)> = Vec::new();
        let mut links = Vec::new();
        let mut relax = |state: (usize, usize), value: Scalar, from: (usize, usize), next: &mut Vec<((usize, usize), Scalar)>| {
            match next.iter().position(|(s, _)| *s == state) {
                Some(idx) if next[idx].1 <= value => {}
                Some(idx) => {
                    next[idx].1 = value;
                    links.retain(|(s, _)| *s != state);
                    links.push((state, from));
                }
                None => {
                    next.push((state, value));
                    links.push((state, from));
                }
            }
        };
        for ((up, down), value) in &layer {
            relax((k, *down), value + cost.get(*up, k), (*up, *down), &mut next);
            relax((*up, k), value + cost.get(k, *down), (*up, *down), &mut next);
        }
        history.push(links);
        layer = next;
    }
    let (state, value) = layer
        .iter()
        .map(|((up, down), v)| ((*up, *down), v + cost.get(*up, n) + cost.get(n, *down)))
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("nonempty frontier");
    // Walk back to recover which cities went up and which went down.
    let mut ascending = vec![false; n + 1];
    let mut cur = state;
    for k in (2..n).rev() {
        let links = &history[k - 2];
        let (_, prev) = *links.iter().find(|(s, _)| *s == cur).expect("recorded link");
        ascending[k] = cur.0 == k;
        cur = prev;
    }
    let mut cities = vec![1];
    cities.extend((2..n).filter(|&k| ascending[k]));
    cities.push(n);
    cities.extend((2..n).rev().filter(|&k| !ascending[k]));
    let tour = Tour::new(cities)?;
    debug_assert_eq!(tour.cost(cost), value);
    Ok((tour, value))
}

/// Fixed tour `1, 3, 5, ..., 6, 4, 2`: odd cities ascending, then even cities
/// descending. Optimal for every symmetric Monge cost.
pub fn supnick_tour(n: usize) -> Result<Tour> {
    if n < 3 {
        return Err(Error::InvalidSize(format!("TSP needs at least 3 cities, got {n}")));
    }
    let mut cities: Vec<usize> = (1..=n).step_by(2).collect();
    cities.extend((2..=n).rev().filter(|c| c % 2 == 0));
    Tour::new(cities)
}

/// Exact optimum over all tours starting at city 1. Symmetric costs skip
/// mirror-image tours.
pub fn tsp_bruteforce(cost: &Matrix) -> Result<(Tour, Scalar)> {
    let n = check_square(cost)?;
    if n > MAX_TSP_BRUTEFORCE {
        return Err(Error::ResourceLimit(format!("brute-force TSP is limited to {MAX_TSP_BRUTEFORCE} cities, got {n}")));
    }
    if n < 2 {
        return Err(Error::InvalidSize(format!("TSP needs at least 2 cities, got {n}")));
    }
    let symmetric = cost.is_symmetric();
    let best = (2..=n)
        .into_par_iter()
        .filter_map(|second| {
            let mut rest: Vec<usize> = (2..=n).filter(|&c| c != second).collect();
            let mut best: Option<(Vec<usize>, Scalar)> = None;
            permute(&mut rest, 0, &mut |perm| {
                if symmetric && perm.last().is_some_and(|&last| last < second) {
                    return;
                }
                let mut cities = vec![1, second];
                cities.extend_from_slice(perm);
                let value = Tour(cities.clone()).cost(cost);
                if best.as_ref().is_none_or(|(_, b)| value < *b) {
                    best = Some((cities, value));
                }
            });
            best
        })
        .min_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)))
        .expect("at least one tour");
    Ok((Tour(best.0), best.1))
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
