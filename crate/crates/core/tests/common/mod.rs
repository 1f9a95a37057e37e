#![allow(dead_code)]

pub mod fixtures;

use linecollect::geometry::{rank_normalize, segments_cross, GridPoint, RawPoint, Segment, Xy};
use linecollect::uncross::selection_s;
use linecollect::{PointId, PointSet, Q};
use num_rational::Ratio;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random points with distinct ranks on both axes, plane position equal to the ranks.
pub fn permutation_points(rng: &mut ChaCha8Rng, n: usize) -> PointSet {
    let mut beta: Vec<u32> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        beta.swap(i, rng.gen_range(0..=i));
    }
    let grid = (0..n)
        .map(|i| GridPoint {
            alpha: i as u32 + 1,
            beta: beta[i],
            id: i as PointId + 1,
            xy: Xy::new(i as i128 + 1, beta[i] as i128),
        })
        .collect();
    PointSet::from_grid(grid, &vec![1; n], (0..n).collect())
}

/// Physical reachability between random request pairs against rank dominance.
pub fn dominance_reachability(seed: u64, pairs: usize) -> usize {
    let mut rng = rng(seed);
    let mut failures = 0;
    let mut done = 0;
    while done < pairs {
        let n = 50;
        let mut reqs: Vec<(i64, i64)> = Vec::new();
        while reqs.len() < n {
            let t = rng.gen_range(0..=12);
            let x = rng.gen_range(-t..=t);
            if !reqs.contains(&(x, t)) {
                reqs.push((x, t));
            }
        }
        let qs: Vec<(Q, Q, i64)> = reqs
            .iter()
            .map(|&(x, t)| (Q::from_integer(x), Q::from_integer(t), 1))
            .collect();
        let pts = PointSet::from_requests(&qs).unwrap();
        for _ in 0..200 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let (xi, ti) = reqs[i];
            let (xj, tj) = reqs[j];
            let reach = (xj - xi).abs() <= tj - ti;
            if reach != pts.dominates(i as PointId + 1, j as PointId + 1) {
                failures += 1;
            }
            done += 1;
        }
    }
    failures
}

/// Every raw weak-dominance pair survives rank normalization and no new pair appears.
pub fn rank_preserves_dominance(seed: u64, n: usize) -> usize {
    let mut rng = rng(seed);
    let mut raw: Vec<RawPoint> = Vec::new();
    while raw.len() < n {
        let a = Q::new(rng.gen_range(0..20), rng.gen_range(1..4));
        let b = Q::new(rng.gen_range(0..20), rng.gen_range(1..4));
        if !raw.iter().any(|p| p.alpha == a && p.beta == b) {
            raw.push(RawPoint {
                alpha: a,
                beta: b,
                source_request: raw.len(),
            });
        }
    }
    let grid = rank_normalize(&raw).unwrap();
    let mut failures = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let want = raw[i].alpha <= raw[j].alpha && raw[i].beta <= raw[j].beta;
            let got = grid[i].alpha < grid[j].alpha && grid[i].beta < grid[j].beta;
            if want != got {
                failures += 1;
            }
        }
    }
    failures
}

type R = Ratio<i128>;

/// Closed-segment intersection through explicit rational line intersection.
pub fn rational_intersect(p1: Xy, p2: Xy, q1: Xy, q2: Xy) -> bool {
    let (dx, dy) = (p2.a - p1.a, p2.b - p1.b);
    let (ex, ey) = (q2.a - q1.a, q2.b - q1.b);
    let den = dx * ey - dy * ex;
    let (fx, fy) = (q1.a - p1.a, q1.b - p1.b);
    if den != 0 {
        let s = R::new(fx * ey - fy * ex, den);
        let u = R::new(fx * dy - fy * dx, den);
        let unit = |r: R| r >= R::from_integer(0) && r <= R::from_integer(1);
        return unit(s) && unit(u);
    }
    if fx * dy - fy * dx != 0 {
        return false;
    }
    let key = |p: Xy| if dx != 0 { p.a } else { p.b };
    let (a0, a1) = (key(p1).min(key(p2)), key(p1).max(key(p2)));
    let (b0, b1) = (key(q1).min(key(q2)), key(q1).max(key(q2)));
    a0 <= b1 && b0 <= a1
}

pub fn segment_oracle(seed: u64, pairs: usize) -> usize {
    let mut rng = rng(seed);
    let mut failures = 0;
    let gp = |id: PointId, rng: &mut ChaCha8Rng| GridPoint {
        alpha: id,
        beta: id,
        id,
        xy: Xy::new(rng.gen_range(-6..=6), rng.gen_range(-6..=6)),
    };
    let mut done = 0;
    while done < pairs {
        let seg = [
            gp(1, &mut rng),
            gp(2, &mut rng),
            gp(3, &mut rng),
            gp(4, &mut rng),
        ];
        if seg[0].xy == seg[1].xy || seg[2].xy == seg[3].xy {
            continue;
        }
        let got =
            segments_cross(&Segment::new(seg[0], seg[1]), &Segment::new(seg[2], seg[3])).unwrap();
        if got != rational_intersect(seg[0].xy, seg[1].xy, seg[2].xy, seg[3].xy) {
            failures += 1;
        }
        done += 1;
    }
    failures
}

fn full(points: &PointSet, path: &[PointId]) -> Vec<PointId> {
    let mut f = vec![points.s()];
    f.extend_from_slice(path);
    f.push(points.t());
    f
}

/// α-rank where the horizontal through β-rank `beta` meets the path.
fn crossing_alpha(points: &PointSet, path: &[PointId], beta: u32) -> R {
    for w in path.windows(2) {
        let (u, v) = (points.point(w[0]), points.point(w[1]));
        if u.beta <= beta && beta <= v.beta {
            let (ua, va) = (u.alpha as i128, v.alpha as i128);
            let (ub, vb) = (u.beta as i128, v.beta as i128);
            return R::from_integer(ua) + R::new((beta as i128 - ub) * (va - ua), vb - ub);
        }
    }
    unreachable!("paths span every β-rank")
}

/// Violations of the structural properties of selection S on a coverable point set:
/// empty boxes, later paths right of earlier ones, bounded right-side points of
/// earlier paths, and first-points-above lying left of the vertical.
pub fn selection_properties(points: &PointSet) -> usize {
    let all: Vec<PointId> = (1..=points.n() as PointId).collect();
    let paths = selection_s(points, &all, points.n().max(1)).unwrap();
    let paths: Vec<Vec<PointId>> = paths.into_iter().filter(|p| !p.is_empty()).collect();
    let full: Vec<Vec<PointId>> = paths.iter().map(|p| full(points, p)).collect();
    let pt = |id: PointId| points.point(id);
    let mut failures = 0;
    for i in 0..full.len() {
        for w in full[i].windows(2) {
            let (u, v) = (pt(w[0]), pt(w[1]));
            for later in &paths[i + 1..] {
                for &p in later {
                    let p = pt(p);
                    if u.alpha < p.alpha && p.alpha < v.alpha && u.beta < p.beta && p.beta < v.beta
                    {
                        failures += 1;
                    }
                }
            }
        }
        for later in &paths[i + 1..] {
            for &p in later {
                if R::from_integer(pt(p).alpha as i128)
                    < crossing_alpha(points, &full[i], pt(p).beta)
                {
                    failures += 1;
                }
            }
        }
    }
    for i2 in 0..full.len() {
        for w in full[i2].windows(2) {
            let (x, x2) = (pt(w[0]), pt(w[1]));
            for i in 0..i2 {
                for &v in &paths[i] {
                    let v = pt(v);
                    if v.beta < x.beta || v.beta > x2.beta {
                        continue;
                    }
                    if R::from_integer(v.alpha as i128) >= crossing_alpha(points, &full[i2], v.beta)
                        && !(x.alpha < v.alpha && v.alpha < x2.alpha)
                    {
                        failures += 1;
                    }
                }
                for y in [x, x2] {
                    if y.id == points.s() || y.id == points.t() {
                        continue;
                    }
                    if let Some(&f) = paths[i].iter().find(|&&f| pt(f).beta > y.beta) {
                        if pt(f).alpha >= y.alpha {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    failures
}

/// Ũ_k on `subset` with every postcondition checked against the validator. Returns
/// the number of untangle repair steps or a description of the first failure.
pub fn certified_utilde(
    inst: &linecollect::NormalizedInstance,
    points: &PointSet,
    subset: &[PointId],
    k: usize,
) -> Result<usize, String> {
    use linecollect::uncross::algorithm_utilde_counted;
    use linecollect::validate::{check_noncrossing, check_schedule, paths_schedule};
    let (coll, repairs) = algorithm_utilde_counted(points, subset, k).map_err(|e| e.to_string())?;
    if coll.paths.len() != k {
        return Err(format!("{} paths for k = {k}", coll.paths.len()));
    }
    let mut want = subset.to_vec();
    want.sort_unstable();
    if coll.covered() != want {
        return Err("covered set changed".into());
    }
    for path in coll.full_paths(points) {
        if path.windows(2).any(|w| !points.dominates(w[0], w[1])) {
            return Err("path is not a dominance chain".into());
        }
    }
    if let Some(c) = coll.find_crossing(points) {
        return Err(format!("paths touch at {c:?}"));
    }
    let (schedule, claims) = paths_schedule(inst, points, &coll.paths, k);
    let mut report = check_schedule(inst, &schedule, &claims);
    report.merge(check_noncrossing(&schedule));
    if !report.is_ok() {
        return Err(format!("{:?}", report.violations));
    }
    Ok(repairs)
}
