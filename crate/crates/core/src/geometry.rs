//! Coordinate transforms, rank normalization, dominance and exact planar predicates.
//!
//! Points live in two coordinate systems at once. Ranks (`alpha`, `beta`) are
//! distinct integers used for dominance and range queries. The plane position
//! (`xy`) is the exact α–β position scaled to a common integer grid and is used
//! for every crossing and hull predicate, so that non-crossing paths correspond
//! to collision-free robot motions.

use num_integer::Integer;
use num_rational::Ratio;
use std::cmp::Ordering;
use thiserror::Error;

/// Exact rational used for raw coordinates.
pub type Q = Ratio<i64>;

/// Point identifier. `0` is `s`, `1..=n` are requests, `n + 1` is `t`.
pub type PointId = u32;

/// Largest absolute plane coordinate accepted. Keeps degree-three products inside i128.
pub const PLANE_LIMIT: i128 = 1 << 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("segments share endpoint {0}")]
    SharedEndpoint(PointId),
    #[error("empty input")]
    EmptyInput,
    #[error("coordinates exceed the exact arithmetic range")]
    CoordinateOverflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawPoint {
    pub alpha: Q,
    pub beta: Q,
    pub source_request: usize,
}

/// Exact scaled α–β position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Xy {
    pub a: i128,
    pub b: i128,
}

impl Xy {
    pub const fn new(a: i128, b: i128) -> Self {
        Xy { a, b }
    }

    fn sub(self, o: Xy) -> Xy {
        Xy::new(self.a - o.a, self.b - o.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridPoint {
    pub alpha: u32,
    pub beta: u32,
    pub id: PointId,
    pub xy: Xy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub from: GridPoint,
    pub to: GridPoint,
}

impl Segment {
    pub fn new(from: GridPoint, to: GridPoint) -> Self {
        Segment { from, to }
    }
}

/// Maps a speed-normalized request location and time to (α, β) = (t + x, t − x).
pub fn alpha_beta_transform(x: Q, t: Q) -> (Q, Q) {
    (t + x, t - x)
}

/// Inverse of [`alpha_beta_transform`], returning (x, t).
pub fn alpha_beta_inverse(alpha: Q, beta: Q) -> (Q, Q) {
    let two = Q::from_integer(2);
    ((alpha - beta) / two, (alpha + beta) / two)
}

/// Ranks points 1..=n per axis. Ties on one axis are broken by the other axis,
/// so shared-coordinate pairs keep their dominance edge. Output order follows input order.
pub fn rank_normalize(points: &[RawPoint]) -> Result<Vec<GridPoint>, GeometryError> {
    let n = points.len();
    let mut by_alpha: Vec<usize> = (0..n).collect();
    by_alpha.sort_by(|&i, &j| {
        (points[i].alpha, points[i].beta)
            .cmp(&(points[j].alpha, points[j].beta))
            .then(i.cmp(&j))
    });
    for w in by_alpha.windows(2) {
        let (p, q) = (&points[w[0]], &points[w[1]]);
        if p.alpha == q.alpha && p.beta == q.beta {
            return Err(GeometryError::DuplicatePoint(
                w[0].min(w[1]),
                w[0].max(w[1]),
            ));
        }
    }
    let mut by_beta: Vec<usize> = (0..n).collect();
    by_beta.sort_by(|&i, &j| {
        (points[i].beta, points[i].alpha).cmp(&(points[j].beta, points[j].alpha))
    });

    let scale = common_scale(points.iter().flat_map(|p| [p.alpha, p.beta]))?;
    let mut out: Vec<GridPoint> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            Ok(GridPoint {
                alpha: 0,
                beta: 0,
                id: i as PointId + 1,
                xy: Xy::new(scaled(p.alpha, scale)?, scaled(p.beta, scale)?),
            })
        })
        .collect::<Result<_, GeometryError>>()?;
    for (r, &i) in by_alpha.iter().enumerate() {
        out[i].alpha = r as u32 + 1;
    }
    for (r, &i) in by_beta.iter().enumerate() {
        out[i].beta = r as u32 + 1;
    }
    Ok(out)
}

fn common_scale(values: impl Iterator<Item = Q>) -> Result<i128, GeometryError> {
    let mut l: i128 = 1;
    for v in values {
        l = l.lcm(&(*v.denom() as i128));
        if l > PLANE_LIMIT {
            return Err(GeometryError::CoordinateOverflow);
        }
    }
    Ok(l)
}

fn scaled(v: Q, scale: i128) -> Result<i128, GeometryError> {
    let r = (*v.numer() as i128)
        .checked_mul(scale / *v.denom() as i128)
        .ok_or(GeometryError::CoordinateOverflow)?;
    if r.abs() > PLANE_LIMIT {
        return Err(GeometryError::CoordinateOverflow);
    }
    Ok(r)
}

/// `p ≺ q`: q is reachable after p.
pub fn dominates(p: &GridPoint, q: &GridPoint) -> bool {
    p.id != q.id && p.alpha <= q.alpha && p.beta <= q.beta
}

/// Sign of the cross product (b − a) × (c − a).
pub fn orientation(a: Xy, b: Xy, c: Xy) -> Ordering {
    let u = b.sub(a);
    let v = c.sub(a);
    (u.a * v.b).cmp(&(u.b * v.a))
}

pub(crate) fn on_segment(p: Xy, q: Xy, r: Xy) -> bool {
    r.a >= p.a.min(q.a) && r.a <= p.a.max(q.a) && r.b >= p.b.min(q.b) && r.b <= p.b.max(q.b)
}

/// Closed-segment intersection of the plane positions. Collinear overlap counts.
pub fn xy_segments_intersect(p1: Xy, p2: Xy, q1: Xy, q2: Xy) -> bool {
    let d1 = orientation(q1, q2, p1);
    let d2 = orientation(q1, q2, p2);
    let d3 = orientation(p1, p2, q1);
    let d4 = orientation(p1, p2, q2);
    use Ordering::Equal;
    if d1 != Equal && d2 != Equal && d3 != Equal && d4 != Equal {
        return d1 != d2 && d3 != d4;
    }
    (d1 == Equal && on_segment(q1, q2, p1))
        || (d2 == Equal && on_segment(q1, q2, p2))
        || (d3 == Equal && on_segment(p1, p2, q1))
        || (d4 == Equal && on_segment(p1, p2, q2))
}

pub fn segments_cross(a: &Segment, b: &Segment) -> Result<bool, GeometryError> {
    for id in [a.from.id, a.to.id] {
        if id == b.from.id || id == b.to.id {
            return Err(GeometryError::SharedEndpoint(id));
        }
    }
    Ok(xy_segments_intersect(
        a.from.xy, a.to.xy, b.from.xy, b.to.xy,
    ))
}

/// Convex hull in counter-clockwise order starting at the lowest-α (then lowest-β) vertex.
/// Collinear boundary points are dropped.
pub fn convex_hull(points: &[GridPoint]) -> Result<Vec<GridPoint>, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let mut pts = points.to_vec();
    pts.sort_by_key(|p| (p.xy.a, p.xy.b));
    pts.dedup_by(|p, q| p.xy == q.xy);
    if pts.len() < 3 {
        return Ok(pts);
    }
    let mut hull: Vec<GridPoint> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &GridPoint>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2
                && orientation(hull[hull.len() - 2].xy, hull[hull.len() - 1].xy, p.xy)
                    != Ordering::Greater
            {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    Ok(hull)
}

/// The chain spliced in by operation B. From `x`, the ray through the point of
/// least angle to `x → x_prime` supports all of `pts`; the chain is every point of
/// `pts` on that ray, nearest first, preceded by points coinciding with `x`. Every
/// point of `pts` then lies on or to the left of `x → chain → x_prime`.
/// Returned without `x` and `x_prime`.
pub fn facing_chain(
    x: &GridPoint,
    x_prime: &GridPoint,
    pts: &[GridPoint],
) -> Result<Vec<GridPoint>, GeometryError> {
    if pts.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let d = x_prime.xy.sub(x.xy);
    let (mut at_x, away): (Vec<GridPoint>, Vec<GridPoint>) = pts.iter().partition(|p| p.xy == x.xy);
    at_x.sort_by_key(|p| (p.alpha, p.beta));
    let Some(mut tangent) = away.first().copied() else {
        return Ok(at_x);
    };
    for p in &away[1..] {
        let o = orientation(x.xy, tangent.xy, p.xy);
        let nearer = {
            let (r, q) = (p.xy.sub(x.xy), tangent.xy.sub(x.xy));
            r.a * d.a + r.b * d.b < q.a * d.a + q.b * d.b
        };
        if o == Ordering::Less || (o == Ordering::Equal && nearer) {
            tangent = *p;
        }
    }
    let ray = tangent.xy.sub(x.xy);
    let mut on_ray: Vec<GridPoint> = away
        .into_iter()
        .filter(|p| orientation(x.xy, tangent.xy, p.xy) == Ordering::Equal)
        .collect();
    on_ray.sort_by_key(|p| {
        let r = p.xy.sub(x.xy);
        r.a * ray.a + r.b * ray.b
    });
    at_x.extend(on_ray);
    Ok(at_x)
}

/// Closed triangle membership; degenerate triangles reduce to their longest side.
pub fn in_closed_triangle(a: Xy, b: Xy, c: Xy, p: Xy) -> bool {
    let o = orientation(a, b, c);
    if o == Ordering::Equal {
        return [(a, b), (b, c), (a, c)]
            .iter()
            .any(|&(u, v)| orientation(u, v, p) == Ordering::Equal && on_segment(u, v, p));
    }
    let s1 = orientation(a, b, p);
    let s2 = orientation(b, c, p);
    let s3 = orientation(c, a, p);
    let bad = o.reverse();
    s1 != bad && s2 != bad && s3 != bad
}

/// Rank-normalized requests plus the special points `s` and `t`, indexed by [`PointId`].
#[derive(Debug, Clone)]
pub struct PointSet {
    n: usize,
    pts: Vec<GridPoint>,
    weight: Vec<i64>,
    by_alpha: Vec<PointId>,
    by_beta: Vec<PointId>,
    source: Vec<usize>,
}

impl PointSet {
    /// Builds from unit-speed requests `(x, t, w)`, which must have distinct (x, t).
    pub fn from_requests(requests: &[(Q, Q, i64)]) -> Result<Self, GeometryError> {
        let raw: Vec<RawPoint> = requests
            .iter()
            .enumerate()
            .map(|(i, &(x, t, _))| {
                let (alpha, beta) = alpha_beta_transform(x, t);
                RawPoint {
                    alpha,
                    beta,
                    source_request: i,
                }
            })
            .collect();
        let grid = rank_normalize(&raw)?;
        let weights: Vec<i64> = requests.iter().map(|r| r.2).collect();
        Ok(Self::from_grid(
            grid,
            &weights,
            (0..requests.len()).collect(),
        ))
    }

    pub fn from_instance(
        inst: &crate::instance_io::NormalizedInstance,
    ) -> Result<Self, GeometryError> {
        let reqs: Vec<(Q, Q, i64)> = inst.requests.iter().map(|r| (r.x, r.t, r.w)).collect();
        Self::from_requests(&reqs)
    }

    /// Builds directly from grid points with ids `1..=n` in order. Ranks must be a permutation.
    pub fn from_grid(grid: Vec<GridPoint>, weights: &[i64], source: Vec<usize>) -> Self {
        let n = grid.len();
        let max = grid.iter().fold(Xy::default(), |m, p| {
            Xy::new(m.a.max(p.xy.a), m.b.max(p.xy.b))
        });
        let mut pts = Vec::with_capacity(n + 2);
        pts.push(GridPoint {
            alpha: 0,
            beta: 0,
            id: 0,
            xy: Xy::default(),
        });
        pts.extend(grid);
        pts.push(GridPoint {
            alpha: n as u32 + 1,
            beta: n as u32 + 1,
            id: n as PointId + 1,
            xy: Xy::new(max.a + 1, max.b + 1),
        });
        let mut weight = vec![0; n + 2];
        weight[1..=n].copy_from_slice(weights);
        let mut by_alpha = vec![0; n + 2];
        let mut by_beta = vec![0; n + 2];
        for p in &pts {
            by_alpha[p.alpha as usize] = p.id;
            by_beta[p.beta as usize] = p.id;
        }
        PointSet {
            n,
            pts,
            weight,
            by_alpha,
            by_beta,
            source,
        }
    }

    /// Number of regular points.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> PointId {
        0
    }

    pub fn t(&self) -> PointId {
        self.n as PointId + 1
    }

    pub fn point(&self, id: PointId) -> &GridPoint {
        &self.pts[id as usize]
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.pts
    }

    pub fn weight(&self, id: PointId) -> i64 {
        self.weight[id as usize]
    }

    /// Index of the normalized request behind a regular point.
    pub fn source(&self, id: PointId) -> usize {
        self.source[id as usize - 1]
    }

    pub fn at_alpha(&self, rank: u32) -> PointId {
        self.by_alpha[rank as usize]
    }

    pub fn at_beta(&self, rank: u32) -> PointId {
        self.by_beta[rank as usize]
    }

    pub fn dominates(&self, p: PointId, q: PointId) -> bool {
        dominates(self.point(p), self.point(q))
    }

    pub fn segment(&self, from: PointId, to: PointId) -> Segment {
        Segment::new(*self.point(from), *self.point(to))
    }
}
