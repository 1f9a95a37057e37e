//! Independent certification of schedules: speed feasibility, claims, collisions and weight.
//! Works in (x, t) with exact rationals and does not use the solver's path logic.

use crate::geometry::{PointId, PointSet};
use crate::instance_io::{NormalizedInstance, RobotPlan, Schedule};
use crate::solver::Solution;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::collections::HashMap;
use std::fmt;

type Exact = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyPlan {
        robot: usize,
    },
    MissingOrigin {
        robot: usize,
    },
    TimeNotIncreasing {
        robot: usize,
        index: usize,
    },
    SpeedViolation {
        robot: usize,
        from: (Exact, Exact),
        to: (Exact, Exact),
    },
    UnknownRequest {
        robot: usize,
        request: usize,
    },
    NotVisited {
        robot: usize,
        request: usize,
    },
    ClaimedTwice {
        request: usize,
        robots: (usize, usize),
    },
    Collision {
        robots: (usize, usize),
        time: Exact,
        x: Exact,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyPlan { robot } => write!(f, "robot {robot}: empty plan"),
            Violation::MissingOrigin { robot } => {
                write!(f, "robot {robot}: does not start at (0,0)")
            }
            Violation::TimeNotIncreasing { robot, index } => {
                write!(
                    f,
                    "robot {robot}: time does not increase at waypoint {index}"
                )
            }
            Violation::SpeedViolation { robot, from, to } => {
                write!(
                    f,
                    "robot {robot}: hop ({},{}) -> ({},{}) exceeds unit speed",
                    from.0, from.1, to.0, to.1
                )
            }
            Violation::UnknownRequest { robot, request } => {
                write!(f, "robot {robot}: unknown request {request}")
            }
            Violation::NotVisited { robot, request } => {
                write!(
                    f,
                    "robot {robot}: claims request {request} but never reaches it"
                )
            }
            Violation::ClaimedTwice { request, robots } => {
                write!(
                    f,
                    "request {request} claimed by robots {} and {}",
                    robots.0, robots.1
                )
            }
            Violation::Collision { robots, time, x } => {
                write!(
                    f,
                    "robots {} and {} collide at x={x}, t={time}",
                    robots.0, robots.1
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }
}

fn exact(q: &crate::geometry::Q) -> Exact {
    Exact::new(*q.numer() as i128, *q.denom() as i128)
}

fn plan_exact(plan: &RobotPlan) -> Vec<(Exact, Exact)> {
    plan.iter().map(|(x, t)| (exact(x), exact(t))).collect()
}

/// A robot that never leaves the origin takes no part in collisions.
fn is_idle(plan: &[(Exact, Exact)]) -> bool {
    plan.iter().all(|(x, t)| x.is_zero() && t.is_zero())
}

/// Whether the robot is at `(x, t)` at some moment of its trajectory.
fn visits(plan: &[(Exact, Exact)], x: Exact, t: Exact) -> bool {
    if plan.len() == 1 {
        return plan[0] == (x, t);
    }
    plan.windows(2).any(|w| {
        let ((x0, t0), (x1, t1)) = (w[0], w[1]);
        if t < t0 || t > t1 {
            return false;
        }
        if t1 == t0 {
            return x == x0 || x == x1;
        }
        x0 + (x1 - x0) * (t - t0) / (t1 - t0) == x
    })
}

/// Checks speed feasibility, the origin start and the claimed requests of every robot.
/// `claims[r]` lists the request indices robot `r` says it collects.
pub fn check_schedule(
    inst: &NormalizedInstance,
    schedule: &Schedule,
    claims: &[Vec<usize>],
) -> Report {
    let mut violations = Vec::new();
    let plans: Vec<Vec<(Exact, Exact)>> = schedule.robots.iter().map(plan_exact).collect();
    for (r, plan) in plans.iter().enumerate() {
        let Some(&first) = plan.first() else {
            violations.push(Violation::EmptyPlan { robot: r });
            continue;
        };
        if !(first.0.is_zero() && first.1.is_zero()) {
            violations.push(Violation::MissingOrigin { robot: r });
        }
        for (i, w) in plan.windows(2).enumerate() {
            let ((x0, t0), (x1, t1)) = (w[0], w[1]);
            let stationary = x0 == x1 && t0 == t1;
            if t1 < t0 || (t1 == t0 && !stationary) {
                if t1 < t0 {
                    violations.push(Violation::TimeNotIncreasing {
                        robot: r,
                        index: i + 1,
                    });
                } else {
                    violations.push(Violation::SpeedViolation {
                        robot: r,
                        from: w[0],
                        to: w[1],
                    });
                }
                continue;
            }
            if (x1 - x0).abs() > t1 - t0 {
                violations.push(Violation::SpeedViolation {
                    robot: r,
                    from: w[0],
                    to: w[1],
                });
            }
        }
    }
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (r, list) in claims.iter().enumerate() {
        for &q in list {
            let Some(req) = inst.requests.get(q) else {
                violations.push(Violation::UnknownRequest {
                    robot: r,
                    request: q,
                });
                continue;
            };
            if let Some(&other) = owner.get(&q) {
                violations.push(Violation::ClaimedTwice {
                    request: q,
                    robots: (other, r),
                });
                continue;
            }
            owner.insert(q, r);
            let visited = plans
                .get(r)
                .is_some_and(|p| visits(p, exact(&req.x), exact(&req.t)));
            if !visited {
                violations.push(Violation::NotVisited {
                    robot: r,
                    request: q,
                });
            }
        }
    }
    Report { violations }
}

/// Earliest positive time at which two trajectories share a position.
fn earliest_meeting(a: &[(Exact, Exact)], b: &[(Exact, Exact)]) -> Option<(Exact, Exact)> {
    let mut best: Option<(Exact, Exact)> = None;
    for wa in a.windows(2) {
        for wb in b.windows(2) {
            let ((ax0, at0), (ax1, at1)) = (wa[0], wa[1]);
            let ((bx0, bt0), (bx1, bt1)) = (wb[0], wb[1]);
            if at1 == at0 || bt1 == bt0 {
                continue;
            }
            let lo = at0.max(bt0);
            let hi = at1.min(bt1);
            if lo > hi || hi.is_zero() {
                continue;
            }
            let pos_a = |t: Exact| ax0 + (ax1 - ax0) * (t - at0) / (at1 - at0);
            let pos_b = |t: Exact| bx0 + (bx1 - bx0) * (t - bt0) / (bt1 - bt0);
            let d_lo = pos_a(lo) - pos_b(lo);
            let d_hi = pos_a(hi) - pos_b(hi);
            let hit = if d_lo.is_zero() && d_hi.is_zero() {
                // Moving together; any positive time in the overlap is a meeting.
                Some(lo)
            } else if d_lo.is_zero() {
                (!lo.is_zero()).then_some(lo)
            } else if d_hi.is_zero() || d_lo.signum() != d_hi.signum() {
                Some(lo + (hi - lo) * d_lo / (d_lo - d_hi))
            } else {
                None
            };
            if let Some(t) = hit {
                if best.is_none_or(|(bt, _)| t < bt) {
                    best = Some((t, pos_a(t)));
                }
            }
        }
    }
    best
}

/// Pairwise collision check. Robots meet only at the origin at time 0; idle robots are
/// ignored and a robot leaves the line after its last waypoint.
pub fn check_noncrossing(schedule: &Schedule) -> Report {
    let plans: Vec<Vec<(Exact, Exact)>> = schedule.robots.iter().map(plan_exact).collect();
    let mut violations = Vec::new();
    for i in 0..plans.len() {
        if is_idle(&plans[i]) {
            continue;
        }
        for j in i + 1..plans.len() {
            if is_idle(&plans[j]) {
                continue;
            }
            if let Some((time, x)) = earliest_meeting(&plans[i], &plans[j]) {
                violations.push(Violation::Collision {
                    robots: (i, j),
                    time,
                    x,
                });
            }
        }
    }
    Report { violations }
}

/// Sum of weights of the distinct requests some robot passes through.
pub fn total_weight(inst: &NormalizedInstance, schedule: &Schedule) -> i64 {
    let plans: Vec<Vec<(Exact, Exact)>> = schedule.robots.iter().map(plan_exact).collect();
    inst.requests
        .iter()
        .filter(|r| {
            plans
                .iter()
                .any(|p| !p.is_empty() && visits(p, exact(&r.x), exact(&r.t)))
        })
        .map(|r| r.w)
        .sum()
}

/// Waypoints and claimed request indices for every robot of a solution, idle robots included.
pub fn solution_schedule(
    inst: &NormalizedInstance,
    solution: &Solution,
) -> (Schedule, Vec<Vec<usize>>) {
    paths_schedule(inst, &solution.points, &solution.paths, solution.k)
}

/// Schedule for point paths over `inst`, padded with idle robots up to `k`.
pub fn paths_schedule(
    inst: &NormalizedInstance,
    points: &PointSet,
    paths: &[Vec<PointId>],
    k: usize,
) -> (Schedule, Vec<Vec<usize>>) {
    let origin = (crate::geometry::Q::zero(), crate::geometry::Q::zero());
    let mut robots = Vec::with_capacity(k);
    let mut claims = Vec::with_capacity(k);
    for path in paths {
        let mut plan = vec![origin];
        let mut claim = Vec::with_capacity(path.len());
        for &id in path {
            let q = points.source(id);
            let r = &inst.requests[q];
            plan.push((r.x, r.t));
            claim.push(q);
        }
        robots.push(plan);
        claims.push(claim);
    }
    while robots.len() < k {
        robots.push(vec![origin]);
        claims.push(Vec::new());
    }
    (Schedule { robots }, claims)
}

/// All checks for a solver output, including the weight accounting identity.
pub fn certify(inst: &NormalizedInstance, solution: &Solution) -> Result<(), Vec<String>> {
    let (schedule, claims) = solution_schedule(inst, solution);
    let mut report = check_schedule(inst, &schedule, &claims);
    report.merge(check_noncrossing(&schedule));
    let mut errors: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    let collected = total_weight(inst, &schedule);
    if collected != solution.weight {
        errors.push(format!(
            "schedule collects {collected}, solver reports {}",
            solution.weight
        ));
    }
    let claimed: i64 = claims.iter().flatten().map(|&q| inst.requests[q].w).sum();
    if claimed != solution.weight {
        errors.push(format!(
            "claims sum to {claimed}, solver reports {}",
            solution.weight
        ));
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}
