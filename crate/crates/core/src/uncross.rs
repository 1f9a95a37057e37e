//! Turning a covered point set into non-crossing s–t paths: the greedy selection S,
//! the per-path extraction U_j with operations A/B, and Ũ_k = U_k, …, U_1.

use crate::geometry::{
    facing_chain, in_closed_triangle, on_segment, orientation, segments_cross,
    xy_segments_intersect, GridPoint, PointId, PointSet, Xy,
};
use crate::residual::strictly_left_of;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UncrossError {
    #[error("{0} points remain after extracting all paths")]
    Uncoverable(usize),
    #[error("edges do not cross")]
    NotCrossing,
    #[error("swapping suffixes breaks dominance")]
    InvalidSwap,
    #[error("hull chain between {0} and {1} is not a dominance chain")]
    BadChain(PointId, PointId),
    #[error("untangling did not converge after {0} steps")]
    Unresolved(usize),
}

/// Paths as interior point sequences, left to right.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathCollection {
    pub paths: Vec<Vec<PointId>>,
}

impl PathCollection {
    /// Every path with `s` and `t` attached.
    pub fn full_paths(&self, points: &PointSet) -> Vec<Vec<PointId>> {
        self.paths
            .iter()
            .map(|p| {
                let mut f = Vec::with_capacity(p.len() + 2);
                f.push(points.s());
                f.extend_from_slice(p);
                f.push(points.t());
                f
            })
            .collect()
    }

    pub fn covered(&self) -> Vec<PointId> {
        let mut c = self.paths.concat();
        c.sort_unstable();
        c
    }

    /// First pair of edges from different paths sharing a point other than the
    /// positions of `s` and `t`, as (path, edge, path, edge) with edges indexed along
    /// the full paths. Idle paths are ignored.
    pub fn find_crossing(&self, points: &PointSet) -> Option<(usize, usize, usize, usize)> {
        let full = self.full_paths(points);
        for i in 0..full.len() {
            for j in i + 1..full.len() {
                if full[i].len() <= 2 || full[j].len() <= 2 {
                    continue;
                }
                if let Some((a, b)) = find_contact(points, &full[i], &full[j]) {
                    return Some((i, a, j, b));
                }
            }
        }
        None
    }
}

/// Max segment tree over α-ranks holding the β-rank of each uncovered point (0 if none).
struct Sweep {
    size: usize,
    tree: Vec<u32>,
}

impl Sweep {
    fn new(points: &PointSet, subset: &[PointId]) -> Self {
        let size = (points.n() + 2).next_power_of_two();
        let mut tree = vec![0; 2 * size];
        for &p in subset {
            let g = points.point(p);
            tree[size + g.alpha as usize] = g.beta;
        }
        for v in (1..size).rev() {
            tree[v] = tree[2 * v].max(tree[2 * v + 1]);
        }
        Sweep { size, tree }
    }

    fn remove(&mut self, alpha: u32) {
        let mut v = self.size + alpha as usize;
        self.tree[v] = 0;
        while v > 1 {
            v /= 2;
            self.tree[v] = self.tree[2 * v].max(self.tree[2 * v + 1]);
        }
    }

    /// Smallest α-rank greater than `alpha` whose β-rank exceeds `beta`.
    fn first_above(&self, alpha: u32, beta: u32) -> Option<u32> {
        self.descend(1, 0, self.size, alpha as usize + 1, beta)
    }

    fn descend(&self, v: usize, lo: usize, hi: usize, from: usize, beta: u32) -> Option<u32> {
        if hi <= from || self.tree[v] <= beta {
            return None;
        }
        if hi - lo == 1 {
            return Some(lo as u32);
        }
        let mid = (lo + hi) / 2;
        self.descend(2 * v, lo, mid, from, beta)
            .or_else(|| self.descend(2 * v + 1, mid, hi, from, beta))
    }
}

/// Greedy extraction of `j` paths, leftmost first: from `s`, repeatedly step to the
/// uncovered dominating point of least α.
pub fn selection_s(
    points: &PointSet,
    subset: &[PointId],
    j: usize,
) -> Result<Vec<Vec<PointId>>, UncrossError> {
    let mut sweep = Sweep::new(points, subset);
    let mut left = subset.len();
    let mut paths = Vec::with_capacity(j);
    for _ in 0..j {
        let mut path = Vec::new();
        let (mut a, mut b) = (0, 0);
        while let Some(next) = sweep.first_above(a, b) {
            let id = points.at_alpha(next);
            let g = points.point(id);
            sweep.remove(next);
            path.push(id);
            (a, b) = (g.alpha, g.beta);
        }
        left -= path.len();
        paths.push(path);
    }
    if left > 0 {
        return Err(UncrossError::Uncoverable(left));
    }
    Ok(paths)
}

/// U_j: the rightmost output path 𝒴_j and the points left for U_{j−1}.
pub fn algorithm_uj(
    points: &PointSet,
    subset: &[PointId],
    j: usize,
) -> Result<(Vec<PointId>, Vec<PointId>), UncrossError> {
    if j == 0 {
        return if subset.is_empty() {
            Ok((Vec::new(), Vec::new()))
        } else {
            Err(UncrossError::Uncoverable(subset.len()))
        };
    }
    let mut paths = selection_s(points, subset, j)?;
    let y = paths.pop().unwrap_or_default();
    let mut others: Vec<PointId> = paths.concat();
    others.sort_unstable_by_key(|&p| points.point(p).beta);
    let mut taken = vec![false; others.len()];

    let mut full = Vec::with_capacity(y.len() + 2);
    full.push(points.s());
    full.extend_from_slice(&y);
    full.push(points.t());

    let mut out = Vec::with_capacity(y.len());
    let mut cursor = 0;
    for w in full.windows(2) {
        let (x, x2) = (points.point(w[0]), points.point(w[1]));
        while cursor < others.len() && points.point(others[cursor]).beta < x.beta {
            cursor += 1;
        }
        let pi = Xy::new(x.xy.a, x2.xy.b);
        let mut inside: Vec<GridPoint> = Vec::new();
        let mut slots: Vec<usize> = Vec::new();
        let mut k = cursor;
        while k < others.len() && points.point(others[k]).beta < x2.beta {
            let p = points.point(others[k]);
            if !taken[k] && in_closed_triangle(x.xy, x2.xy, pi, p.xy) {
                inside.push(*p);
                slots.push(k);
            }
            k += 1;
        }
        if !inside.is_empty() {
            let chain = facing_chain(x, x2, &inside).expect("non-empty input");
            let mut prev = x;
            for c in &chain {
                if !points.dominates(prev.id, c.id) {
                    return Err(UncrossError::BadChain(x.id, x2.id));
                }
                prev = c;
                out.push(c.id);
                let at = inside
                    .iter()
                    .position(|p| p.id == c.id)
                    .expect("chain vertex from input");
                taken[slots[at]] = true;
            }
            if !points.dominates(prev.id, x2.id) {
                return Err(UncrossError::BadChain(x.id, x2.id));
            }
        }
        if w[1] != points.t() {
            out.push(w[1]);
        }
    }
    let rest = others
        .iter()
        .zip(&taken)
        .filter(|(_, &t)| !t)
        .map(|(&p, _)| p)
        .collect();
    Ok((out, rest))
}

/// Ũ_k: k node-disjoint pairwise non-crossing paths covering exactly `subset`,
/// left to right, idle (empty) paths last.
pub fn algorithm_utilde(
    points: &PointSet,
    subset: &[PointId],
    k: usize,
) -> Result<PathCollection, UncrossError> {
    algorithm_utilde_counted(points, subset, k).map(|(c, _)| c)
}

/// Ũ_k together with the number of repair steps [`untangle`] needed afterwards.
pub fn algorithm_utilde_counted(
    points: &PointSet,
    subset: &[PointId],
    k: usize,
) -> Result<(PathCollection, usize), UncrossError> {
    let mut cur = subset.to_vec();
    let mut out = Vec::with_capacity(k);
    for j in (1..=k).rev() {
        if cur.is_empty() {
            out.push(Vec::new());
            continue;
        }
        let (y, rest) = algorithm_uj(points, &cur, j)?;
        out.push(y);
        cur = rest;
    }
    if !cur.is_empty() {
        return Err(UncrossError::Uncoverable(cur.len()));
    }
    out.reverse();
    untangle(points, PathCollection { paths: out })
}

/// Removes every remaining contact between paths other than at the positions of `s`
/// and `t`, then orders the paths left to right. Each step is an uncross, a vertex
/// move or a collinear merge, and each strictly shortens the summed length of the
/// non-empty s–t paths, so the loop terminates. Returns the step count.
pub fn untangle(
    points: &PointSet,
    coll: PathCollection,
) -> Result<(PathCollection, usize), UncrossError> {
    let mut full = coll.full_paths(points);
    let limit = 64 * (points.n() + 1) * (full.len() + 1) + 1024;
    let mut steps = 0;
    'outer: loop {
        for i in 0..full.len() {
            for j in i + 1..full.len() {
                if full[i].len() <= 2 || full[j].len() <= 2 {
                    continue;
                }
                if let Some((ei, ej)) = find_contact(points, &full[i], &full[j]) {
                    if steps == limit {
                        return Err(UncrossError::Unresolved(steps));
                    }
                    steps += 1;
                    let (a, b) = resolve(points, &full[i], ei, &full[j], ej)?;
                    full[i] = a;
                    full[j] = b;
                    continue 'outer;
                }
            }
        }
        break;
    }
    let mut paths: Vec<Vec<PointId>> = full
        .into_iter()
        .map(|p| p[1..p.len() - 1].to_vec())
        .collect();
    let idle = paths.iter().filter(|p| p.is_empty()).count();
    paths.retain(|p| !p.is_empty());
    paths.sort_by(|a, b| {
        if strictly_left_of(points, a, b) {
            Ordering::Less
        } else if strictly_left_of(points, b, a) {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    });
    paths.extend(std::iter::repeat_with(Vec::new).take(idle));
    Ok((PathCollection { paths }, steps))
}

fn u_of(points: &PointSet, id: PointId) -> i128 {
    let p = points.point(id).xy;
    p.a + p.b
}

/// Whether two closed segments share a point other than the positions of `s` and `t`.
fn segments_touch(points: &PointSet, p: (PointId, PointId), q: (PointId, PointId)) -> bool {
    let xy = |id: PointId| points.point(id).xy;
    let (p1, p2, q1, q2) = (xy(p.0), xy(p.1), xy(q.0), xy(q.1));
    if !xy_segments_intersect(p1, p2, q1, q2) {
        return false;
    }
    let ends = [xy(points.s()), xy(points.t())];
    let collinear =
        orientation(p1, p2, q1) == Ordering::Equal && orientation(p1, p2, q2) == Ordering::Equal;
    if collinear && p1 != p2 && q1 != q2 {
        let lo = (p1.a + p1.b).max(q1.a + q1.b);
        let hi = (p2.a + p2.b).min(q2.a + q2.b);
        if lo < hi {
            return true;
        }
        let at = if p1.a + p1.b == lo { p1 } else { p2 };
        return !ends.contains(&at);
    }
    // A single common point; it is a shared end exactly when that end lies on both.
    !ends.iter().any(|&e| {
        orientation(p1, p2, e) == Ordering::Equal
            && on_segment(p1, p2, e)
            && orientation(q1, q2, e) == Ordering::Equal
            && on_segment(q1, q2, e)
    })
}

/// First pair of touching edges, by edge index into the full paths.
fn find_contact(points: &PointSet, a: &[PointId], b: &[PointId]) -> Option<(usize, usize)> {
    let (mut i, mut j) = (0, 0);
    while i + 1 < a.len() && j + 1 < b.len() {
        let (ai0, ai1) = (u_of(points, a[i]), u_of(points, a[i + 1]));
        let (bj0, bj1) = (u_of(points, b[j]), u_of(points, b[j + 1]));
        if ai0 <= bj1 && bj0 <= ai1 && segments_touch(points, (a[i], a[i + 1]), (b[j], b[j + 1])) {
            return Some((i, j));
        }
        if ai1 <= bj1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    None
}

fn collinear(points: &PointSet, a: PointId, b: PointId, c: PointId) -> bool {
    orientation(points.point(a).xy, points.point(b).xy, points.point(c).xy) == Ordering::Equal
}

/// Regular vertex of one edge lying on the other edge, as (vertex owner is `a`, index).
fn vertex_on_edge(
    points: &PointSet,
    a: &[PointId],
    ei: usize,
    b: &[PointId],
    ej: usize,
) -> Option<(bool, usize)> {
    let xy = |id: PointId| points.point(id).xy;
    let ends = [xy(points.s()), xy(points.t())];
    let on = |v: PointId, e0: PointId, e1: PointId| {
        let (p, q, r) = (xy(e0), xy(e1), xy(v));
        !ends.contains(&r) && orientation(p, q, r) == Ordering::Equal && on_segment(p, q, r)
    };
    for idx in [ei, ei + 1] {
        if on(a[idx], b[ej], b[ej + 1]) {
            return Some((true, idx));
        }
    }
    for idx in [ej, ej + 1] {
        if on(b[idx], a[ei], a[ei + 1]) {
            return Some((false, idx));
        }
    }
    None
}

fn join(parts: &[&[PointId]]) -> Vec<PointId> {
    parts.concat()
}

fn check_chain(points: &PointSet, path: &[PointId]) -> Result<(), UncrossError> {
    for w in path.windows(2) {
        if !points.dominates(w[0], w[1]) {
            return Err(UncrossError::InvalidSwap);
        }
    }
    Ok(())
}

/// One repair step on touching edges `a[ei..=ei+1]` and `b[ej..=ej+1]`.
fn resolve(
    points: &PointSet,
    a: &[PointId],
    ei: usize,
    b: &[PointId],
    ej: usize,
) -> Result<(Vec<PointId>, Vec<PointId>), UncrossError> {
    let (na, nb) = match vertex_on_edge(points, a, ei, b, ej) {
        None => (
            join(&[&a[..=ei], &b[ej + 1..]]),
            join(&[&b[..=ej], &a[ei + 1..]]),
        ),
        Some((owner_is_a, m)) => {
            let (pp, qq, e) = if owner_is_a { (a, b, ej) } else { (b, a, ei) };
            let (np, nq) = resolve_vertex(points, pp, m, qq, e);
            if owner_is_a {
                (np, nq)
            } else {
                (nq, np)
            }
        }
    };
    check_chain(points, &na)?;
    check_chain(points, &nb)?;
    Ok((na, nb))
}

/// Vertex `p[m]` lies inside edge `q[e..=e+1]`.
fn resolve_vertex(
    points: &PointSet,
    p: &[PointId],
    m: usize,
    q: &[PointId],
    e: usize,
) -> (Vec<PointId>, Vec<PointId>) {
    let (pred, v, succ) = (p[m - 1], p[m], p[m + 1]);
    let (u, u2) = (q[e], q[e + 1]);
    if !collinear(points, pred, v, succ) {
        return (
            join(&[&p[..m], &p[m + 1..]]),
            join(&[&q[..=e], &[v], &q[e + 1..]]),
        );
    }
    if !collinear(points, pred, v, u2) {
        return (join(&[&p[..m], &q[e + 1..]]), join(&[&q[..=e], &p[m..]]));
    }
    if !collinear(points, u, v, succ) {
        return (
            join(&[&q[..=e], &p[m + 1..]]),
            join(&[&p[..=m], &q[e + 1..]]),
        );
    }
    merge_runs(points, p, m, q, e)
}

/// Everything involved lies on one line: one path takes the union of both collinear
/// runs and the other bypasses it.
fn merge_runs(
    points: &PointSet,
    p: &[PointId],
    m: usize,
    q: &[PointId],
    e: usize,
) -> (Vec<PointId>, Vec<PointId>) {
    let (l0, l1) = (points.point(q[e]).xy, points.point(q[e + 1]).xy);
    let on_line = |id: PointId| orientation(l0, l1, points.point(id).xy) == Ordering::Equal;
    let run = |path: &[PointId], at: usize| {
        let (mut lo, mut hi) = (at, at);
        while lo > 0 && on_line(path[lo - 1]) {
            lo -= 1;
        }
        while hi + 1 < path.len() && on_line(path[hi + 1]) {
            hi += 1;
        }
        (lo, hi)
    };
    let (plo, phi) = run(p, m);
    let (qlo, qhi) = run(q, e);
    let (s, t) = (points.s(), points.t());
    let mut merged: Vec<PointId> = p[plo..=phi].iter().chain(&q[qlo..=qhi]).copied().collect();
    merged.sort_by_key(|&id| (u_of(points, id), id != s));
    merged.dedup();
    let first = merged[0];
    let last = *merged.last().expect("runs are non-empty");
    let entry_q = if first == s {
        qlo == 0
    } else {
        q[qlo..=qhi].contains(&first)
    };
    let exit_q = if last == t {
        qhi + 1 == q.len()
    } else {
        q[qlo..=qhi].contains(&last)
    };
    let (entry, entry_lo, other_entry, other_lo) = if entry_q {
        (q, qlo, p, plo)
    } else {
        (p, plo, q, qlo)
    };
    let (exit, exit_hi, other_exit, other_hi) = if exit_q {
        (q, qhi, p, phi)
    } else {
        (p, phi, q, qhi)
    };
    let taker = join(&[&entry[..entry_lo], &merged, &exit[exit_hi + 1..]]);
    let head: &[PointId] = if other_lo == 0 {
        &[s]
    } else {
        &other_entry[..other_lo]
    };
    let tail: &[PointId] = if other_hi + 1 == other_exit.len() {
        &[t]
    } else {
        &other_exit[other_hi + 1..]
    };
    (taker, join(&[head, tail]))
}

/// Swaps the suffixes of paths `i` and `j` after their crossing edges. Edge indices
/// refer to the full paths including `s` and `t`.
pub fn uncross_edges(
    points: &PointSet,
    collection: &PathCollection,
    i: usize,
    j: usize,
    edge_a: usize,
    edge_b: usize,
) -> Result<PathCollection, UncrossError> {
    let full = collection.full_paths(points);
    let (pa, pb) = (&full[i], &full[j]);
    if edge_a + 1 >= pa.len() || edge_b + 1 >= pb.len() {
        return Err(UncrossError::NotCrossing);
    }
    let (u, u2, x, x2) = (pa[edge_a], pa[edge_a + 1], pb[edge_b], pb[edge_b + 1]);
    let crossed = segments_cross(&points.segment(u, u2), &points.segment(x, x2)).unwrap_or(false);
    if !crossed {
        return Err(UncrossError::NotCrossing);
    }
    if !points.dominates(u, x2) || !points.dominates(x, u2) {
        return Err(UncrossError::InvalidSwap);
    }
    let mut na: Vec<PointId> = pa[..=edge_a].to_vec();
    na.extend_from_slice(&pb[edge_b + 1..]);
    let mut nb: Vec<PointId> = pb[..=edge_b].to_vec();
    nb.extend_from_slice(&pa[edge_a + 1..]);
    let strip = |p: Vec<PointId>| p[1..p.len() - 1].to_vec();
    let mut paths = collection.paths.clone();
    paths[i] = strip(na);
    paths[j] = strip(nb);
    Ok(PathCollection { paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Q;

    fn pointset(reqs: &[(i64, i64)]) -> PointSet {
        let r: Vec<(Q, Q, i64)> = reqs
            .iter()
            .map(|&(x, t)| (Q::from_integer(x), Q::from_integer(t), 1))
            .collect();
        PointSet::from_requests(&r).unwrap()
    }

    #[test]
    fn selection_chain_and_antichain() {
        let chain = pointset(&[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(
            selection_s(&chain, &[1, 2, 3], 1).unwrap(),
            vec![vec![1, 2, 3]]
        );
        let anti = pointset(&[(-1, 1), (1, 1)]);
        let paths = selection_s(&anti, &[1, 2], 2).unwrap();
        assert_eq!(paths, vec![vec![1], vec![2]]);
        assert_eq!(
            selection_s(&anti, &[1, 2], 1),
            Err(UncrossError::Uncoverable(1))
        );
    }

    #[test]
    fn uj_with_one_path_covers_all() {
        let chain = pointset(&[(0, 1), (1, 2), (0, 3)]);
        let (y, rest) = algorithm_uj(&chain, &[1, 2, 3], 1).unwrap();
        assert_eq!(y, vec![1, 2, 3]);
        assert!(rest.is_empty());
    }

    #[test]
    fn x_pattern_uncross() {
        let pts = pointset(&[(-1, 1), (1, 1), (-1, 3), (1, 3)]);
        let crossing = PathCollection {
            paths: vec![vec![1, 4], vec![2, 3]],
        };
        let (i, a, j, b) = crossing.find_crossing(&pts).unwrap();
        let fixed = uncross_edges(&pts, &crossing, i, j, a, b).unwrap();
        assert_eq!(fixed.find_crossing(&pts), None);
        assert_eq!(fixed.covered(), crossing.covered());
        let out = algorithm_utilde(&pts, &[1, 2, 3, 4], 2).unwrap();
        assert_eq!(out.find_crossing(&pts), None);
        assert_eq!(out.covered(), vec![1, 2, 3, 4]);
    }
}
