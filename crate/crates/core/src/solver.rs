//! The recursive shortest-path algorithms A_1, Δ, C_2, A_2, Â, Z_k, C_k, A_k and the
//! driver that alternates them with uncrossing.
//!
//! The set of active red paths of a sub-call is a bitmask; a call on a network with
//! `m` active paths runs A_{m+1}. Excluding a path removes its red edges and the
//! black edges between its consecutive points, so its points act as dead ends.

use crate::geometry::{PointId, PointSet};
use crate::instance_io::NormalizedInstance;
use crate::residual::{
    augment, extract_path, path_weight, Node, Relaxer, ResidualError, ResidualNetwork,
    SubNetworkView, TraceEvent,
};
use crate::uncross::{algorithm_utilde_counted, UncrossError};
use std::collections::HashMap;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error(transparent)]
    Residual(#[from] ResidualError),
    #[error(transparent)]
    Uncross(#[from] UncrossError),
    #[error("extracted path weight {path} differs from h(t) = {h}")]
    WeightMismatch { path: i64, h: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub base_case_threshold: usize,
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            base_case_threshold: 32,
            trace: false,
        }
    }
}

/// Invocation counters, indexed by the `k` of the call where relevant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub a_calls: Vec<u64>,
    pub c_calls: Vec<u64>,
    pub z_calls: Vec<u64>,
    pub ahat_calls: Vec<u64>,
    pub delta_calls: u64,
    pub base_calls: u64,
    pub relax_ops: u64,
}

impl Stats {
    fn bump(v: &mut Vec<u64>, k: usize) {
        if v.len() <= k {
            v.resize(k + 1, 0);
        }
        v[k] += 1;
    }
}

/// Runs the recursive algorithms over one residual network.
pub struct Engine<'n, 'a> {
    pub rx: Relaxer<'n, 'a>,
    pub stats: Stats,
    cfg: SolverConfig,
    order_cache: HashMap<(u32, u32), Rc<Vec<PointId>>>,
}

impl<'n, 'a> Engine<'n, 'a> {
    pub fn new(net: &'n ResidualNetwork<'a>, cfg: SolverConfig) -> Self {
        Engine {
            rx: Relaxer::new(net, cfg.trace),
            stats: Stats::default(),
            cfg,
            order_cache: HashMap::new(),
        }
    }

    fn points(&self) -> &'a PointSet {
        self.rx.net.points()
    }

    /// Points of the view other than `s`, in α order (a topological order).
    fn alpha_order(&mut self, view: SubNetworkView) -> Rc<Vec<PointId>> {
        let pts = self.points();
        self.order_cache
            .entry((view.lo, view.hi))
            .or_insert_with(|| {
                let mut ids: Vec<PointId> =
                    (view.lo + 1..=view.hi).map(|b| pts.at_beta(b)).collect();
                ids.sort_unstable_by_key(|&id| pts.point(id).alpha);
                Rc::new(ids)
            })
            .clone()
    }

    /// Relax every point of the view in topological order.
    pub fn algorithm_a1(&mut self, view: SubNetworkView, mask: u32) {
        Stats::bump(&mut self.stats.a_calls, 1);
        let order = self.alpha_order(view);
        for &x in order.iter() {
            self.rx.big_relax(x, view, mask);
        }
    }

    /// Back-to-front traversal of the in-view part of every active red path.
    pub fn algorithm_delta(&mut self, view: SubNetworkView, mask: u32) {
        self.stats.delta_calls += 1;
        let net = self.rx.net;
        let pts = self.points();
        let t = pts.t();
        for (c, path) in net.red_paths().iter().enumerate() {
            if mask & (1 << c) == 0 {
                continue;
            }
            let lo = path.partition_point(|&p| pts.point(p).beta <= view.lo);
            let hi = path.partition_point(|&p| pts.point(p).beta <= view.hi);
            if lo == hi {
                continue;
            }
            let seg = &path[lo..hi];
            let last = seg[seg.len() - 1];
            if view.hi == t && hi == path.len() {
                self.rx.relax(Node::T, Node::Plus(last), 0);
            }
            for j in (1..seg.len()).rev() {
                let y = seg[j];
                self.rx.relax(Node::Plus(y), Node::Minus(y), pts.weight(y));
                self.rx.relax(Node::Minus(y), Node::Plus(seg[j - 1]), 0);
            }
            self.rx
                .relax(Node::Plus(seg[0]), Node::Minus(seg[0]), pts.weight(seg[0]));
        }
    }

    /// Bellman-Ford style sweeps; follows every path inside a small view. Stops
    /// early once a sweep changes nothing.
    fn base_case(&mut self, view: SubNetworkView, mask: u32) {
        self.stats.base_calls += 1;
        let order = self.alpha_order(view);
        let passes = 2 * view.size() + 2;
        for _ in 0..passes {
            let before = self.rx.improvements;
            for &x in order.iter() {
                self.rx.big_relax(x, view, mask);
            }
            if mask != 0 {
                self.algorithm_delta(view, mask);
            }
            if self.rx.improvements == before {
                break;
            }
        }
    }

    fn is_small(&self, view: SubNetworkView) -> bool {
        view.size() <= self.cfg.base_case_threshold || view.hi - view.lo <= 1
    }

    /// A_k with `k = popcount(mask) + 1`.
    pub fn algorithm_ak(&mut self, view: SubNetworkView, mask: u32) {
        let k = mask.count_ones() as usize + 1;
        if k == 1 {
            self.algorithm_a1(view, mask);
            return;
        }
        Stats::bump(&mut self.stats.a_calls, k);
        if self.is_small(view) {
            self.base_case(view, mask);
            return;
        }
        let (n1, n2) = view.split();
        self.algorithm_ak(n1, mask);
        self.algorithm_ck(view, mask);
        self.algorithm_ak(n2, mask);
    }

    pub fn algorithm_a2(&mut self, view: SubNetworkView, mask: u32) {
        debug_assert_eq!(mask.count_ones(), 1);
        self.algorithm_ak(view, mask);
    }

    pub fn algorithm_c2(&mut self, view: SubNetworkView, mask: u32) {
        Stats::bump(&mut self.stats.c_calls, 2);
        self.algorithm_a1(view, 0);
        self.algorithm_delta(view, mask);
        self.algorithm_a1(view, 0);
    }

    pub fn algorithm_ck(&mut self, view: SubNetworkView, mask: u32) {
        let k = mask.count_ones() as usize + 1;
        if k == 2 {
            self.algorithm_c2(view, mask);
            return;
        }
        Stats::bump(&mut self.stats.c_calls, k);
        for _ in 0..k - 1 {
            self.algorithm_ahat(view, mask);
            self.algorithm_zk(view, mask);
            self.algorithm_ahat(view, mask);
        }
    }

    /// A_{k−1} once per active path, each time with that path excluded.
    pub fn algorithm_ahat(&mut self, view: SubNetworkView, mask: u32) {
        let k = mask.count_ones() as usize + 1;
        Stats::bump(&mut self.stats.ahat_calls, k);
        let mut rest = mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= !bit;
            self.algorithm_ak(view, mask & !bit);
        }
    }

    pub fn algorithm_zk(&mut self, view: SubNetworkView, mask: u32) {
        let k = mask.count_ones() as usize + 1;
        Stats::bump(&mut self.stats.z_calls, k);
        if self.is_small(view) {
            self.base_case(view, mask);
            return;
        }
        let (n1, n2) = view.split();
        self.algorithm_zk(n2, mask);
        self.algorithm_delta(view, mask);
        for _ in 0..k.saturating_sub(2) {
            self.algorithm_ahat(view, mask);
            self.algorithm_ahat(view, mask);
        }
        self.algorithm_zk(n1, mask);
    }

    /// Runs A_k on the full network.
    pub fn run(&mut self) {
        let view = SubNetworkView::full(self.points());
        let mask = self.rx.net.full_mask();
        self.algorithm_ak(view, mask);
        self.stats.relax_ops = self.rx.relax_count;
    }
}

/// Result of one shortest-path computation.
#[derive(Debug, Clone)]
pub struct ShortestPath {
    pub weight: i64,
    pub path: Vec<Node>,
    pub stats: Stats,
    pub trace: Option<Vec<TraceEvent>>,
}

/// Shortest s–t path in the residual network via A_{m+1}.
pub fn shortest_path(
    net: &ResidualNetwork<'_>,
    cfg: SolverConfig,
) -> Result<ShortestPath, SolveError> {
    let mut engine = Engine::new(net, cfg);
    engine.run();
    let h = engine.rx.state.value(Node::T);
    let path = extract_path(&engine.rx.state, net)?;
    let w = path_weight(net, &path).ok_or(ResidualError::NotAPath(0))?;
    if w != h {
        return Err(SolveError::WeightMismatch { path: w, h });
    }
    Ok(ShortestPath {
        weight: h,
        path,
        stats: engine.stats,
        trace: engine.rx.trace.take(),
    })
}

#[derive(Debug, Clone)]
pub struct Round {
    /// Collected weight with this many robots.
    pub weight: i64,
    /// Covered points right after augmentation, before uncrossing.
    pub covered: Vec<PointId>,
    /// Non-idle paths after uncrossing, left to right.
    pub paths: Vec<Vec<PointId>>,
    /// Repair steps taken after the selection-based construction.
    pub repairs: usize,
    pub stats: Stats,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub weight: i64,
    /// Non-idle robot paths, interior points only, left to right.
    pub paths: Vec<Vec<PointId>>,
    pub rounds: Vec<Round>,
    pub k: usize,
    pub points: PointSet,
    pub traces: Vec<Vec<TraceEvent>>,
}

impl Solution {
    pub fn round_weights(&self) -> Vec<i64> {
        self.rounds.iter().map(|r| r.weight).collect()
    }
}

pub fn solve(inst: &NormalizedInstance, cfg: SolverConfig) -> Result<Solution, SolveError> {
    let points = PointSet::from_instance(inst)?;
    solve_points(points, inst.k, cfg)
}

pub fn solve_points(points: PointSet, k: usize, cfg: SolverConfig) -> Result<Solution, SolveError> {
    let mut paths: Vec<Vec<PointId>> = Vec::new();
    let mut rounds: Vec<Round> = Vec::new();
    let mut traces = Vec::new();
    let mut weight = 0;
    for _ in 0..k {
        let net = ResidualNetwork::new(&points, paths.clone())?;
        let sp = shortest_path(&net, cfg)?;
        if let Some(tr) = sp.trace {
            traces.push(tr);
        }
        if sp.weight >= 0 {
            rounds.push(Round {
                weight,
                covered: paths.concat(),
                paths: paths.clone(),
                repairs: 0,
                stats: sp.stats,
            });
            continue;
        }
        let flow = augment(&net, &sp.path)?;
        let covered: Vec<PointId> = flow.concat();
        weight -= sp.weight;
        let count = flow.len();
        let (uncrossed, repairs) = algorithm_utilde_counted(&points, &covered, count)?;
        paths = uncrossed
            .paths
            .into_iter()
            .filter(|p| !p.is_empty())
            .collect();
        rounds.push(Round {
            weight,
            covered,
            paths: paths.clone(),
            repairs,
            stats: sp.stats,
        });
    }
    Ok(Solution {
        weight,
        paths,
        rounds,
        k,
        points,
        traces,
    })
}

/// Whether a trace contains the consecutive edges of `path` as an ordered subsequence.
pub fn follows(trace: &[TraceEvent], points: &PointSet, path: &[Node]) -> bool {
    let covers = |ev: &TraceEvent, from: Node, to: Node| match ev {
        TraceEvent::Edge(a, b) => *a == from && *b == to,
        TraceEvent::Group {
            target,
            alpha_hi,
            beta_lo,
            beta_hi,
            excluded,
        } => {
            let hit = match to {
                Node::Minus(x) => x == *target,
                Node::T => *target == points.t(),
                _ => false,
            };
            let y = match from {
                Node::S => points.s(),
                Node::Plus(y) => y,
                _ => return false,
            };
            let p = points.point(y);
            hit && p.alpha <= *alpha_hi
                && p.beta >= *beta_lo
                && p.beta <= *beta_hi
                && !excluded.contains(&y)
        }
    };
    let mut pos = 0;
    for w in path.windows(2) {
        match trace[pos..].iter().position(|ev| covers(ev, w[0], w[1])) {
            Some(i) => pos += i + 1,
            None => return false,
        }
    }
    true
}
