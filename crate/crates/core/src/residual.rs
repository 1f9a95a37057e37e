//! The implicit residual network: red paths, relax state, `relax` / `Relax`,
//! views, path extraction and augmentation.

use crate::geometry::{PointId, PointSet};
use crate::rangemin::{Entry, RangeMinIndex, INF};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidualError {
    #[error("red path {0} is not a dominance chain")]
    NotAChain(usize),
    #[error("point {0} appears on more than one red path")]
    SharedPoint(PointId),
    #[error("red paths {0} and {1} cross or are out of left-to-right order")]
    Crossing(usize, usize),
    #[error("predecessor cycle at {0:?}")]
    CyclicPred(Node),
    #[error("not a residual s-t path at step {0}")]
    NotAPath(usize),
    #[error("invalid view ({0}, {1}]")]
    InvalidInterval(u32, u32),
    #[error("too many red paths: {0}")]
    TooManyPaths(usize),
}

/// A node of the split graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    S,
    T,
    Minus(PointId),
    Plus(PointId),
}

const NO_PATH: u16 = u16::MAX;

/// Maximum number of red paths; views carry the active set as a bitmask.
pub const MAX_RED_PATHS: usize = 31;

#[derive(Debug, Clone)]
pub struct ResidualNetwork<'a> {
    points: &'a PointSet,
    paths: Vec<Vec<PointId>>,
    color: Vec<u16>,
    red_pred: Vec<PointId>,
    red_succ: Vec<PointId>,
}

impl<'a> ResidualNetwork<'a> {
    /// `paths` hold the interior points of each red path, left to right. Empty paths are dropped.
    pub fn new(points: &'a PointSet, paths: Vec<Vec<PointId>>) -> Result<Self, ResidualError> {
        let paths: Vec<Vec<PointId>> = paths.into_iter().filter(|p| !p.is_empty()).collect();
        if paths.len() > MAX_RED_PATHS {
            return Err(ResidualError::TooManyPaths(paths.len()));
        }
        let size = points.n() + 2;
        let mut color = vec![NO_PATH; size];
        let mut red_pred = vec![0; size];
        let mut red_succ = vec![0; size];
        let (s, t) = (points.s(), points.t());
        for (i, path) in paths.iter().enumerate() {
            let mut prev = s;
            for &p in path {
                if p == s || p == t || p as usize >= size || !points.dominates(prev, p) {
                    return Err(ResidualError::NotAChain(i));
                }
                if color[p as usize] != NO_PATH {
                    return Err(ResidualError::SharedPoint(p));
                }
                color[p as usize] = i as u16;
                red_pred[p as usize] = prev;
                if prev != s {
                    red_succ[prev as usize] = p;
                }
                prev = p;
            }
            red_succ[prev as usize] = t;
        }
        for i in 1..paths.len() {
            if !strictly_left_of(points, &paths[i - 1], &paths[i]) {
                return Err(ResidualError::Crossing(i - 1, i));
            }
        }
        Ok(ResidualNetwork {
            points,
            paths,
            color,
            red_pred,
            red_succ,
        })
    }

    pub fn points(&self) -> &'a PointSet {
        self.points
    }

    pub fn red_paths(&self) -> &[Vec<PointId>] {
        &self.paths
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// Bitmask with every red path active.
    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.paths.len()) - 1) as u32
    }

    pub fn path_of(&self, id: PointId) -> Option<usize> {
        match self.color.get(id as usize) {
            Some(&c) if c != NO_PATH => Some(c as usize),
            _ => None,
        }
    }

    pub fn is_red(&self, id: PointId) -> bool {
        self.path_of(id).is_some()
    }

    /// Predecessor of a red point on its path (possibly `s`).
    pub fn red_pred(&self, id: PointId) -> PointId {
        self.red_pred[id as usize]
    }

    /// Successor of a red point on its path (possibly `t`).
    pub fn red_succ(&self, id: PointId) -> PointId {
        self.red_succ[id as usize]
    }

    pub fn n(&self) -> usize {
        self.points.n()
    }

    /// Weight of the residual edge `from → to`, or `None` if it is not an edge.
    pub fn edge_weight(&self, from: Node, to: Node) -> Option<i64> {
        let pts = self.points;
        let red_pred_is = |x: PointId, y: PointId| self.is_red(x) && self.red_pred(x) == y;
        match (from, to) {
            (Node::S, Node::T) => Some(0),
            (Node::S, Node::Minus(x)) => (!red_pred_is(x, pts.s())).then_some(0),
            (Node::Plus(x), Node::Minus(y)) if x == y => self.is_red(x).then(|| pts.weight(x)),
            (Node::Plus(y), Node::Minus(x)) => {
                (pts.dominates(y, x) && !red_pred_is(x, y)).then_some(0)
            }
            (Node::Plus(y), Node::T) => {
                (!(self.is_red(y) && self.red_succ(y) == pts.t())).then_some(0)
            }
            (Node::Minus(x), Node::Plus(y)) if x == y => (!self.is_red(x)).then(|| -pts.weight(x)),
            (Node::Minus(x), Node::Plus(y)) => red_pred_is(x, y).then_some(0),
            (Node::Minus(x), Node::S) => red_pred_is(x, pts.s()).then_some(0),
            (Node::T, Node::Plus(y)) => {
                (self.is_red(y) && self.red_succ(y) == pts.t()).then_some(0)
            }
            _ => None,
        }
    }

    /// All residual edges, for oracles and tests.
    pub fn edges(&self) -> Vec<(Node, Node, i64)> {
        let n = self.n() as PointId;
        let mut nodes = vec![Node::S, Node::T];
        for i in 1..=n {
            nodes.push(Node::Minus(i));
            nodes.push(Node::Plus(i));
        }
        let mut out = Vec::new();
        for &a in &nodes {
            for &b in &nodes {
                if a != b {
                    if let Some(w) = self.edge_weight(a, b) {
                        out.push((a, b, w));
                    }
                }
            }
        }
        out
    }
}

/// Polylines `s → left → t` and `s → right → t` touch only at `s` and `t`, with
/// `left` above-left. Both are monotone in u = α + β, so comparing v = β − α at
/// every breakpoint suffices.
pub fn strictly_left_of(points: &PointSet, left: &[PointId], right: &[PointId]) -> bool {
    let uv = |id: PointId| {
        let p = points.point(id).xy;
        (p.a + p.b, p.b - p.a)
    };
    let chain = |path: &[PointId]| {
        let mut c = Vec::with_capacity(path.len() + 2);
        c.push(uv(points.s()));
        c.extend(path.iter().map(|&p| uv(p)));
        c.push(uv(points.t()));
        c
    };
    let (l, r) = (chain(left), chain(right));
    let end = l[l.len() - 1].0;
    // Sign of v_a(u) − v_b(u) where `u` is a breakpoint of `a`.
    let compare_at = |a: &[(i128, i128)], ia: usize, b: &[(i128, i128)]| -> Ordering {
        let (u, va) = a[ia];
        let j = b.partition_point(|&(ub, _)| ub < u);
        let (u1, v1) = b[j];
        if u1 == u {
            return va.cmp(&v1);
        }
        let (u0, v0) = b[j - 1];
        // v_b = v0 + (v1 − v0)(u − u0)/(u1 − u0), with u1 > u0.
        let lhs = (va - v0) * (u1 - u0);
        let rhs = (v1 - v0) * (u - u0);
        lhs.cmp(&rhs)
    };
    for i in 0..l.len() {
        if l[i].0 > 0 && l[i].0 < end && compare_at(&l, i, &r) != Ordering::Greater {
            return false;
        }
    }
    for i in 0..r.len() {
        if r[i].0 > 0 && r[i].0 < end && compare_at(&r, i, &l) != Ordering::Less {
            return false;
        }
    }
    true
}

/// Values `h` (plus nodes and `t`) and `h⁻` (minus nodes) with their predecessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelaxState {
    pub h: Vec<i64>,
    pub h_minus: Vec<i64>,
    pub pred: Vec<Node>,
    pub pred_minus: Vec<Node>,
}

impl RelaxState {
    pub fn value(&self, node: Node) -> i64 {
        match node {
            Node::S => 0,
            Node::T => self.h[self.h.len() - 1],
            Node::Plus(i) => self.h[i as usize],
            Node::Minus(i) => self.h_minus[i as usize],
        }
    }

    pub fn pred_of(&self, node: Node) -> Option<Node> {
        match node {
            Node::S => None,
            Node::T => Some(self.pred[self.pred.len() - 1]),
            Node::Plus(i) => Some(self.pred[i as usize]),
            Node::Minus(i) => Some(self.pred_minus[i as usize]),
        }
    }

    fn set(&mut self, node: Node, value: i64, pred: Node) {
        let last = self.h.len() - 1;
        match node {
            Node::S => {}
            Node::T => {
                self.h[last] = value;
                self.pred[last] = pred;
            }
            Node::Plus(i) => {
                self.h[i as usize] = value;
                self.pred[i as usize] = pred;
            }
            Node::Minus(i) => {
                self.h_minus[i as usize] = value;
                self.pred_minus[i as usize] = pred;
            }
        }
    }
}

pub fn init_arrays(net: &ResidualNetwork<'_>) -> RelaxState {
    let pts = net.points();
    let size = pts.n() + 2;
    let (s, t) = (pts.s(), pts.t());
    let mut st = RelaxState {
        h: vec![INF; size],
        h_minus: vec![INF; size],
        pred: vec![Node::S; size],
        pred_minus: vec![Node::S; size],
    };
    st.h[0] = 0;
    st.h_minus[0] = 0;
    for x in 1..=pts.n() as PointId {
        if !net.is_red(x) {
            st.set(Node::Minus(x), 0, Node::S);
            st.set(Node::Plus(x), -pts.weight(x), Node::Minus(x));
        }
    }
    for path in net.red_paths() {
        for &x in path {
            let y = net.red_pred(x);
            if y != s {
                st.set(Node::Minus(x), 0, Node::S);
                st.set(Node::Plus(y), 0, Node::Minus(x));
            }
        }
    }
    st.set(Node::T, 0, Node::S);
    for path in net.red_paths() {
        let last = path[path.len() - 1];
        st.set(Node::Plus(last), 0, Node::T);
        let first = path[0];
        st.set(Node::Minus(first), pts.weight(first), Node::Plus(first));
    }
    debug_assert!(net
        .red_paths()
        .iter()
        .all(|p| net.red_succ(p[p.len() - 1]) == t));
    st
}

/// `h(to) ← min(h(to), h(from) + w)`. Returns whether `to` improved.
pub fn relax(state: &mut RelaxState, from: Node, to: Node, weight: i64) -> bool {
    let base = state.value(from);
    if base == INF {
        return false;
    }
    let cand = base + weight;
    if cand < state.value(to) {
        state.set(to, cand, from);
        true
    } else {
        false
    }
}

/// The sub-network of points with β-rank in `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubNetworkView {
    pub lo: u32,
    pub hi: u32,
}

impl SubNetworkView {
    pub fn full(points: &PointSet) -> Self {
        SubNetworkView {
            lo: 0,
            hi: points.n() as u32 + 1,
        }
    }

    pub fn contains_beta(&self, beta: u32) -> bool {
        beta > self.lo && beta <= self.hi
    }

    pub fn contains(&self, points: &PointSet, id: PointId) -> bool {
        id == points.s() && self.lo == 0 || self.contains_beta(points.point(id).beta)
    }

    /// Points in the view, counting `s` when `lo = 0`.
    pub fn size(&self) -> usize {
        (self.hi - self.lo) as usize + usize::from(self.lo == 0)
    }

    pub fn mid(&self) -> u32 {
        (self.lo + self.hi) / 2
    }

    pub fn split(&self) -> (SubNetworkView, SubNetworkView) {
        let m = self.mid();
        (
            SubNetworkView { lo: self.lo, hi: m },
            SubNetworkView { lo: m, hi: self.hi },
        )
    }

    /// Lowest β-rank a Relax query may reach, so that `s` is found when it is in view.
    pub fn query_beta_lo(&self) -> u32 {
        if self.lo == 0 {
            0
        } else {
            self.lo + 1
        }
    }
}

pub fn subnetwork(points: &PointSet, lo: u32, hi: u32) -> Result<SubNetworkView, ResidualError> {
    if lo > hi || hi as usize > points.n() + 1 {
        return Err(ResidualError::InvalidInterval(lo, hi));
    }
    Ok(SubNetworkView { lo, hi })
}

/// Relax trace entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    /// A single `relax(from, to)`.
    Edge(Node, Node),
    /// One `Relax(target)`: every `relax(y⁺, target⁻)` with y in the rectangle
    /// `[0, alpha_hi] × [beta_lo, beta_hi]`, except the deactivated points.
    Group {
        target: PointId,
        alpha_hi: u32,
        beta_lo: u32,
        beta_hi: u32,
        excluded: Vec<PointId>,
    },
}

/// Range-min index over `s` and every regular point, keyed by `h`.
pub fn build_index(net: &ResidualNetwork<'_>, state: &RelaxState) -> RangeMinIndex {
    let pts = net.points();
    let entries: Vec<Entry> = (0..=pts.n() as PointId)
        .map(|id| {
            let p = pts.point(id);
            Entry {
                id,
                alpha: p.alpha,
                beta: p.beta,
                value: state.h[id as usize],
            }
        })
        .collect();
    RangeMinIndex::build(&entries).expect("point set ranks are a permutation")
}

/// Shared mutable context for relax operations over one network.
pub struct Relaxer<'n, 'a> {
    pub net: &'n ResidualNetwork<'a>,
    pub state: RelaxState,
    pub index: RangeMinIndex,
    pub trace: Option<Vec<TraceEvent>>,
    pub relax_count: u64,
    /// Number of relaxations that lowered a value.
    pub improvements: u64,
    excluded: Vec<PointId>,
}

impl<'n, 'a> Relaxer<'n, 'a> {
    pub fn new(net: &'n ResidualNetwork<'a>, trace: bool) -> Self {
        let state = init_arrays(net);
        let index = build_index(net, &state);
        Relaxer {
            net,
            state,
            index,
            trace: trace.then(Vec::new),
            relax_count: 0,
            improvements: 0,
            excluded: Vec::new(),
        }
    }

    /// `relax` that keeps the index in sync and records the trace.
    pub fn relax(&mut self, from: Node, to: Node, weight: i64) -> bool {
        debug_assert_eq!(
            self.net.edge_weight(from, to),
            Some(weight),
            "{from:?} -> {to:?}"
        );
        self.relax_count += 1;
        if let Some(tr) = self.trace.as_mut() {
            tr.push(TraceEvent::Edge(from, to));
        }
        let changed = relax(&mut self.state, from, to, weight);
        if changed {
            self.improvements += 1;
            if let Node::Plus(y) = to {
                self.index
                    .update(y, self.state.h[y as usize])
                    .expect("plus node indexed");
            }
        }
        changed
    }

    /// `Relax(x)` inside `view` with the red paths of `mask` active.
    pub fn big_relax(&mut self, x: PointId, view: SubNetworkView, mask: u32) {
        let net = self.net;
        let pts = net.points();
        let t = pts.t();
        self.excluded.clear();
        if x == t {
            for path in net.red_paths() {
                self.excluded.push(path[path.len() - 1]);
            }
        } else if net.is_red(x) {
            self.excluded.push(net.red_pred(x));
        }
        for &e in &self.excluded {
            self.index.deactivate(e).expect("excluded point indexed");
        }
        let p = pts.point(x);
        let beta_lo = view.query_beta_lo();
        let hit = if p.beta == 0 || p.alpha == 0 || beta_lo > p.beta - 1 {
            None
        } else {
            self.index.query_min(0, p.alpha - 1, beta_lo, p.beta - 1)
        };
        for &e in &self.excluded {
            self.index.reactivate(e).expect("excluded point indexed");
        }
        self.relax_count += 1;
        if let Some(tr) = self.trace.as_mut() {
            tr.push(TraceEvent::Group {
                target: x,
                alpha_hi: p.alpha.saturating_sub(1),
                beta_lo,
                beta_hi: p.beta.saturating_sub(1),
                excluded: self.excluded.clone(),
            });
        }
        let target = if x == t { Node::T } else { Node::Minus(x) };
        if let Some((y, hy)) = hit {
            if hy != INF && hy < self.state.value(target) {
                let from = if y == pts.s() { Node::S } else { Node::Plus(y) };
                self.state.set(target, hy, from);
                self.improvements += 1;
            }
        }
        if x == t {
            return;
        }
        match net.path_of(x) {
            None => {
                self.relax(Node::Minus(x), Node::Plus(x), -pts.weight(x));
            }
            Some(c) if mask & (1 << c) != 0 => {
                let y = net.red_pred(x);
                if y != pts.s() && view.contains_beta(pts.point(y).beta) {
                    self.relax(Node::Minus(x), Node::Plus(y), 0);
                }
            }
            Some(_) => {}
        }
    }
}

/// The pred-tree path from `s` to `t`, in forward order.
pub fn extract_path(
    state: &RelaxState,
    net: &ResidualNetwork<'_>,
) -> Result<Vec<Node>, ResidualError> {
    let limit = 2 * net.n() + 3;
    let mut path = vec![Node::T];
    let mut cur = Node::T;
    while cur != Node::S {
        cur = state.pred_of(cur).ok_or(ResidualError::CyclicPred(cur))?;
        path.push(cur);
        if path.len() > limit {
            return Err(ResidualError::CyclicPred(cur));
        }
    }
    path.reverse();
    Ok(path)
}

/// Residual weight of a node path; `None` if some step is not an edge.
pub fn path_weight(net: &ResidualNetwork<'_>, path: &[Node]) -> Option<i64> {
    path.windows(2).map(|w| net.edge_weight(w[0], w[1])).sum()
}

/// Applies an augmenting path: returns the interior points of every s–t path of
/// the new flow (idle robots excluded), not necessarily non-crossing.
pub fn augment(
    net: &ResidualNetwork<'_>,
    path: &[Node],
) -> Result<Vec<Vec<PointId>>, ResidualError> {
    let pts = net.points();
    let t = pts.t();
    let size = pts.n() + 2;
    const NONE: PointId = PointId::MAX;
    let mut succ = vec![NONE; size];
    let mut starts: Vec<PointId> = Vec::new();
    for p in net.red_paths() {
        starts.push(p[0]);
        for w in p.windows(2) {
            succ[w[0] as usize] = w[1];
        }
        succ[p[p.len() - 1] as usize] = t;
    }
    if path.first() != Some(&Node::S) || path.last() != Some(&Node::T) {
        return Err(ResidualError::NotAPath(0));
    }
    for (i, w) in path.windows(2).enumerate() {
        if net.edge_weight(w[0], w[1]).is_none() {
            return Err(ResidualError::NotAPath(i));
        }
        match (w[0], w[1]) {
            (Node::S, Node::Minus(x)) => starts.push(x),
            (Node::Plus(y), Node::Minus(x)) => succ[y as usize] = x,
            (Node::Plus(y), Node::T) => succ[y as usize] = t,
            (Node::Minus(x), Node::Plus(y)) if x != y => {
                if succ[y as usize] == x {
                    succ[y as usize] = NONE;
                }
            }
            (Node::T, Node::Plus(y)) => {
                if succ[y as usize] == t {
                    succ[y as usize] = NONE;
                }
            }
            (Node::Minus(x), Node::S) => starts.retain(|&f| f != x),
            _ => {}
        }
    }
    // Points whose red short edge was reversed leave the flow.
    let mut dropped = vec![false; size];
    for w in path.windows(2) {
        if let (Node::Plus(x), Node::Minus(y)) = (w[0], w[1]) {
            if x == y {
                dropped[x as usize] = true;
            }
        }
    }
    let mut seen = vec![false; size];
    let mut out = Vec::new();
    for &f in &starts {
        if dropped[f as usize] {
            continue;
        }
        let mut cur = f;
        let mut p = Vec::new();
        while cur != t {
            if cur == NONE || seen[cur as usize] || dropped[cur as usize] {
                return Err(ResidualError::NotAPath(path.len()));
            }
            seen[cur as usize] = true;
            p.push(cur);
            cur = succ[cur as usize];
        }
        out.push(p);
    }
    Ok(out)
}
