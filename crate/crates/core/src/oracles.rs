//! Reference solvers used for verification and as baselines. None of this is on
//! the fast path.

use crate::geometry::{PointId, PointSet};
use crate::residual::{Node, ResidualNetwork};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("brute force supports at most {max} points, got {n}")]
    TooLarge { n: usize, max: usize },
}

pub const BRUTE_FORCE_MAX: usize = 16;

/// The split DAG with explicit edges. Node `0` is `s`, `2i − 1` and `2i` are
/// `i⁻` and `i⁺`, `2n + 1` is `t`.
#[derive(Debug, Clone)]
pub struct ExplicitDag {
    pub n: usize,
    pub adj: Vec<Vec<(usize, i64)>>,
}

impl ExplicitDag {
    pub fn minus(i: PointId) -> usize {
        2 * i as usize - 1
    }

    pub fn plus(i: PointId) -> usize {
        2 * i as usize
    }

    pub fn t(&self) -> usize {
        2 * self.n + 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Regular point behind a split node, if any.
    pub fn point_of(&self, node: usize) -> Option<PointId> {
        (node != 0 && node != self.t()).then(|| node.div_ceil(2) as PointId)
    }
}

pub fn build_explicit_dag(points: &PointSet) -> ExplicitDag {
    let n = points.n();
    let t = 2 * n + 1;
    let mut adj = vec![Vec::new(); 2 * n + 2];
    adj[0].push((t, 0));
    for i in 1..=n as PointId {
        adj[0].push((ExplicitDag::minus(i), 0));
        adj[ExplicitDag::minus(i)].push((ExplicitDag::plus(i), -points.weight(i)));
        adj[ExplicitDag::plus(i)].push((t, 0));
        for j in 1..=n as PointId {
            if points.dominates(i, j) {
                adj[ExplicitDag::plus(i)].push((ExplicitDag::minus(j), 0));
            }
        }
    }
    ExplicitDag { n, adj }
}

/// Maximum collected weight for one robot and the visited points.
pub fn dag_longest_path(points: &PointSet, dag: &ExplicitDag) -> (i64, Vec<PointId>) {
    let n = dag.n;
    let t = dag.t();
    let mut order = vec![0usize];
    for a in 1..=n as u32 {
        let id = points.at_alpha(a);
        order.push(ExplicitDag::minus(id));
        order.push(ExplicitDag::plus(id));
    }
    order.push(t);
    let mut dist = vec![i64::MAX; 2 * n + 2];
    let mut pred = vec![usize::MAX; 2 * n + 2];
    dist[0] = 0;
    for &u in &order {
        if dist[u] == i64::MAX {
            continue;
        }
        for &(v, w) in &dag.adj[u] {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                pred[v] = u;
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = t;
    while cur != 0 {
        if cur.is_multiple_of(2) && cur != t {
            path.push((cur / 2) as PointId);
        }
        cur = pred[cur];
    }
    path.reverse();
    (-dist[t], path)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SspResult {
    /// Collected weight with 1..=k robots.
    pub weights: Vec<i64>,
    /// Interior points of every non-idle robot path after the last round.
    pub paths: Vec<Vec<PointId>>,
}

struct FlowEdge {
    to: usize,
    cap: i32,
    cost: i64,
}

/// Successive shortest paths on the explicit residual graph with a label-correcting
/// search. The edge `(s, t)` has capacity `k` so that robots may stay idle.
pub fn successive_shortest_paths(dag: &ExplicitDag, k: usize) -> SspResult {
    let nodes = dag.adj.len();
    let t = dag.t();
    let mut edges: Vec<FlowEdge> = Vec::with_capacity(2 * dag.edge_count());
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (u, list) in dag.adj.iter().enumerate() {
        for &(v, w) in list {
            let cap = if u == 0 && v == t { k as i32 } else { 1 };
            out[u].push(edges.len());
            edges.push(FlowEdge {
                to: v,
                cap,
                cost: w,
            });
            out[v].push(edges.len());
            edges.push(FlowEdge {
                to: u,
                cap: 0,
                cost: -w,
            });
        }
    }
    let mut weights = Vec::with_capacity(k);
    let mut total = 0i64;
    let mut dist = vec![i64::MAX; nodes];
    let mut via = vec![usize::MAX; nodes];
    let mut queued = vec![false; nodes];
    for _ in 0..k {
        dist.fill(i64::MAX);
        via.fill(usize::MAX);
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        queued[0] = true;
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            for &e in &out[u] {
                let FlowEdge { to, cap, cost } = edges[e];
                if cap > 0 && dist[u] + cost < dist[to] {
                    dist[to] = dist[u] + cost;
                    via[to] = e;
                    if !queued[to] {
                        queued[to] = true;
                        queue.push_back(to);
                    }
                }
            }
        }
        let mut v = t;
        while v != 0 {
            let e = via[v];
            edges[e].cap -= 1;
            edges[e ^ 1].cap += 1;
            v = edges[e ^ 1].to;
        }
        total -= dist[t];
        weights.push(total);
    }
    // Decompose the flow: follow saturated forward edges from s.
    let mut paths = Vec::new();
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for u in 0..nodes {
        for &e in &out[u] {
            if e % 2 == 0 && edges[e ^ 1].cap > 0 && !(u == 0 && edges[e].to == t) {
                used[u].push(edges[e].to);
            }
        }
    }
    while let Some(mut cur) = used[0].pop() {
        let mut path = Vec::new();
        while cur != t {
            if cur % 2 == 0 {
                path.push((cur / 2) as PointId);
            }
            cur = used[cur].pop().expect("flow conservation");
        }
        paths.push(path);
    }
    SspResult { weights, paths }
}

/// Successive shortest paths with potentials and Dijkstra on the implicit residual
/// graph, O(k n²) time and O(n) memory. A performance baseline for large n.
pub fn ssp_dense(points: &PointSet, k: usize) -> Vec<i64> {
    let n = points.n();
    let nodes = 2 * n + 2;
    let t = nodes - 1;
    let s_id = points.s();
    let t_id = points.t();
    const FREE: PointId = PointId::MAX;
    // Flow state: succ/pred over points, with s and t as ids 0 and n + 1.
    let mut succ = vec![FREE; n + 2];
    let mut pred = vec![FREE; n + 2];
    let mut pot = vec![0i64; nodes];
    let mut dist = vec![i64::MAX; nodes];
    let mut parent = vec![usize::MAX; nodes];
    let mut done = vec![false; nodes];
    let alpha_order: Vec<PointId> = (1..=n as u32).map(|a| points.at_alpha(a)).collect();
    let minus = |i: PointId| 2 * i as usize - 1;
    let plus = |i: PointId| 2 * i as usize;
    let point = |v: usize| v.div_ceil(2) as PointId;

    // Initial potentials: DAG shortest paths in topological order.
    pot.fill(i64::MAX);
    pot[0] = 0;
    for (idx, &j) in alpha_order.iter().enumerate() {
        let mut best = 0;
        for &i in &alpha_order[..idx] {
            if pot[plus(i)] < best && points.dominates(i, j) {
                best = pot[plus(i)];
            }
        }
        pot[minus(j)] = best;
        pot[plus(j)] = best - points.weight(j);
    }
    pot[t] = alpha_order
        .iter()
        .map(|&i| pot[plus(i)])
        .min()
        .unwrap_or(0)
        .min(0);

    let mut weights = Vec::with_capacity(k);
    let mut total = 0;
    for _ in 0..k {
        dist.fill(i64::MAX);
        parent.fill(usize::MAX);
        done.fill(false);
        dist[0] = 0;
        let mut heap = BinaryHeap::from([Reverse((0i64, 0usize))]);
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] || d > dist[u] {
                continue;
            }
            done[u] = true;
            let mut push = |v: usize, cost: i64, heap: &mut BinaryHeap<Reverse<(i64, usize)>>| {
                if done[v] {
                    return;
                }
                let nd = d + cost + pot[u] - pot[v];
                if nd < dist[v] {
                    dist[v] = nd;
                    parent[v] = u;
                    heap.push(Reverse((nd, v)));
                }
            };
            if u == 0 {
                push(t, 0, &mut heap);
                for &j in &alpha_order {
                    if pred[j as usize] != s_id {
                        push(minus(j), 0, &mut heap);
                    }
                }
            } else if u == t {
                for &j in &alpha_order {
                    if succ[j as usize] == t_id {
                        push(plus(j), 0, &mut heap);
                    }
                }
            } else if u % 2 == 1 {
                let x = point(u);
                if pred[x as usize] == FREE {
                    push(plus(x), -points.weight(x), &mut heap);
                } else if pred[x as usize] != s_id {
                    push(plus(pred[x as usize]), 0, &mut heap);
                }
            } else {
                let x = point(u);
                if pred[x as usize] != FREE {
                    push(minus(x), points.weight(x), &mut heap);
                }
                if succ[x as usize] != t_id {
                    push(t, 0, &mut heap);
                }
                let gx = *points.point(x);
                for &j in &alpha_order {
                    let gj = points.point(j);
                    if gj.alpha > gx.alpha && gj.beta > gx.beta && succ[x as usize] != j {
                        push(minus(j), 0, &mut heap);
                    }
                }
            }
        }
        let path_cost = dist[t] - pot[0] + pot[t];
        if path_cost >= 0 {
            weights.push(total);
            for v in 0..nodes {
                if dist[v] != i64::MAX {
                    pot[v] += dist[v];
                }
            }
            continue;
        }
        // Walk back from t and apply the augmentation.
        let mut v = t;
        while v != 0 {
            let u = parent[v];
            match (u, v) {
                (0, _) if v != t => pred[point(v) as usize] = s_id,
                (_, _) if u == t => succ[point(v) as usize] = FREE,
                (_, _) if v == t => succ[point(u) as usize] = t_id,
                _ if u % 2 == 0 && v % 2 == 1 && point(u) != point(v) => {
                    succ[point(u) as usize] = point(v);
                    pred[point(v) as usize] = point(u);
                }
                _ if u % 2 == 1 && v.is_multiple_of(2) && point(u) != point(v) => {
                    if pred[point(u) as usize] == point(v) {
                        pred[point(u) as usize] = FREE;
                    }
                    if succ[point(v) as usize] == point(u) {
                        succ[point(v) as usize] = FREE;
                    }
                }
                _ if u % 2 == 0 && v % 2 == 1 => {
                    // Reversed short edge: the point leaves the flow.
                    pred[point(u) as usize] = FREE;
                    succ[point(u) as usize] = FREE;
                }
                _ => {}
            }
            v = u;
        }
        total -= path_cost;
        weights.push(total);
        for v in 0..nodes {
            if dist[v] != i64::MAX {
                pot[v] += dist[v];
            }
        }
    }
    weights
}

/// Exact optimum by dynamic programming over subsets: a set is one robot's load iff it is a chain.
pub fn brute_force(points: &PointSet, k: usize) -> Result<i64, OracleError> {
    let n = points.n();
    if n > BRUTE_FORCE_MAX {
        return Err(OracleError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX,
        });
    }
    let full = 1usize << n;
    let mut comparable = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (i as PointId + 1, j as PointId + 1);
            if i != j && (points.dominates(a, b) || points.dominates(b, a)) {
                comparable[i] |= 1 << j;
            }
        }
    }
    let mut chain = vec![false; full];
    let mut weight = vec![0i64; full];
    chain[0] = true;
    for m in 1..full {
        let hi = usize::BITS as usize - 1 - m.leading_zeros() as usize;
        let rest = m & !(1 << hi);
        chain[m] = chain[rest] && (rest & !comparable[hi]) == 0;
        weight[m] = weight[rest] + points.weight(hi as PointId + 1);
    }
    let mut dp = vec![0i64; full];
    for _ in 0..k {
        let prev = dp.clone();
        for m in 1..full {
            let low = m & m.wrapping_neg();
            let without = m & !low;
            let mut best = dp[without];
            // Chains through the lowest point.
            let mut sub = without;
            loop {
                let c = sub | low;
                if chain[c] {
                    best = best.max(weight[c] + prev[m & !c]);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & without;
            }
            dp[m] = best;
        }
    }
    Ok(dp[full - 1])
}

/// Shortest distances from `s` in the explicit residual graph by Bellman-Ford.
/// Returns `None` if a negative cycle is reachable.
pub fn residual_bellman_ford(net: &ResidualNetwork<'_>) -> Option<Vec<(Node, i64)>> {
    let edges = net.edges();
    let n = net.n() as PointId;
    let mut nodes = vec![Node::S, Node::T];
    for i in 1..=n {
        nodes.push(Node::Minus(i));
        nodes.push(Node::Plus(i));
    }
    let idx = |v: Node| match v {
        Node::S => 0,
        Node::T => 1,
        Node::Minus(i) => 2 * i as usize,
        Node::Plus(i) => 2 * i as usize + 1,
    };
    let mut dist = vec![i64::MAX; nodes.len()];
    dist[0] = 0;
    for round in 0..=nodes.len() {
        let mut changed = false;
        for &(a, b, w) in &edges {
            let (ia, ib) = (idx(a), idx(b));
            if dist[ia] != i64::MAX && dist[ia] + w < dist[ib] {
                dist[ib] = dist[ia] + w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        if round == nodes.len() {
            return None;
        }
    }
    Some(nodes.iter().map(|&v| (v, dist[idx(v)])).collect())
}

/// Shortest residual s–t distance, or `None` on a negative cycle.
pub fn residual_shortest(net: &ResidualNetwork<'_>) -> Option<i64> {
    residual_bellman_ford(net).map(|d| d[1].1)
}
