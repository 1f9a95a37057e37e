//! Instance and schedule files, normalization and random generation.

use crate::geometry::Q;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: negative time")]
    NegativeTime { line: usize },
    #[error("line {line}: negative weight")]
    NegativeWeight { line: usize },
    #[error("line {line}: speed must be positive")]
    NonPositiveSpeed { line: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Request {
    pub x: Q,
    pub t: Q,
    pub w: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub requests: Vec<Request>,
    pub k: usize,
    pub v: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedInstance {
    /// Requests with unit speed, distinct (x, t), all reachable from the origin.
    pub requests: Vec<Request>,
    pub k: usize,
    /// Original request indices merged into each normalized request.
    pub merge_log: Vec<Vec<usize>>,
    /// Original indices of unreachable requests and of zero-weight requests at the origin.
    pub dropped: Vec<usize>,
}

impl NormalizedInstance {
    pub fn total_weight(&self) -> i64 {
        self.requests.iter().map(|r| r.w).sum()
    }

    /// The normalized instance viewed as a raw instance with unit speed.
    pub fn as_instance(&self) -> Instance {
        Instance {
            requests: self.requests.clone(),
            k: self.k,
            v: Q::from_integer(1),
        }
    }
}

/// Parses an integer, `p/q` or terminating decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Q::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" || int == "+" {
            0
        } else {
            int.parse().ok()?
        };
        let den = 10i64.checked_pow(frac.len() as u32)?;
        let f: i64 = frac.parse().ok()?;
        let mag = int_part.abs().checked_mul(den)?.checked_add(f)?;
        return Some(Q::new(if neg { -mag } else { mag }, den));
    }
    s.parse::<i64>().ok().map(Q::from_integer)
}

pub fn format_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, Q)> = None;
    let mut requests = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let syntax = |column: usize, message: &str| ParseError::SyntaxError {
            line: line_no,
            column,
            message: message.to_string(),
        };
        let col_of = |tok: &str| tok.as_ptr() as usize - raw.as_ptr() as usize + 1;
        if header.is_none() {
            let mut k = None;
            let mut v = None;
            for tok in line.split_whitespace() {
                match tok.split_once('=') {
                    Some(("k", val)) => {
                        k = Some(
                            val.parse::<usize>()
                                .map_err(|_| syntax(col_of(tok), "bad robot count"))?,
                        )
                    }
                    Some(("v", val)) => {
                        v = Some(
                            parse_rational(val).ok_or_else(|| syntax(col_of(tok), "bad speed"))?,
                        )
                    }
                    _ => return Err(syntax(col_of(tok), "expected k=<int> v=<rational>")),
                }
            }
            let (Some(k), Some(v)) = (k, v) else {
                return Err(syntax(1, "header needs both k and v"));
            };
            if k == 0 {
                return Err(syntax(1, "k must be at least 1"));
            }
            if v <= Q::zero() {
                return Err(ParseError::NonPositiveSpeed { line: line_no });
            }
            header = Some((k, v));
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(syntax(1, "expected three fields: x t w"));
        }
        let x = parse_rational(toks[0]).ok_or_else(|| syntax(col_of(toks[0]), "bad location"))?;
        let t = parse_rational(toks[1]).ok_or_else(|| syntax(col_of(toks[1]), "bad time"))?;
        let w: i64 = toks[2]
            .parse()
            .map_err(|_| syntax(col_of(toks[2]), "weight must be an integer"))?;
        if t < Q::zero() {
            return Err(ParseError::NegativeTime { line: line_no });
        }
        if w < 0 {
            return Err(ParseError::NegativeWeight { line: line_no });
        }
        requests.push(Request { x, t, w });
    }
    let (k, v) = header.ok_or(ParseError::SyntaxError {
        line: 1,
        column: 1,
        message: "missing header".into(),
    })?;
    Ok(Instance { requests, k, v })
}

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = format!("k={} v={}\n", inst.k, format_rational(&inst.v));
    for r in &inst.requests {
        let _ = writeln!(
            out,
            "{} {} {}",
            format_rational(&r.x),
            format_rational(&r.t),
            r.w
        );
    }
    out
}

pub fn normalize_instance(inst: &Instance) -> NormalizedInstance {
    let mut requests: Vec<Request> = Vec::new();
    let mut merge_log: Vec<Vec<usize>> = Vec::new();
    let mut dropped = Vec::new();
    let mut slot: HashMap<(Q, Q), usize> = HashMap::new();
    for (i, r) in inst.requests.iter().enumerate() {
        let x = r.x / inst.v;
        if x.abs() > r.t || (x.is_zero() && r.t.is_zero() && r.w == 0) {
            dropped.push(i);
            continue;
        }
        match slot.get(&(x, r.t)) {
            Some(&j) => {
                requests[j].w += r.w;
                merge_log[j].push(i);
            }
            None => {
                slot.insert((x, r.t), requests.len());
                requests.push(Request { x, t: r.t, w: r.w });
                merge_log.push(vec![i]);
            }
        }
    }
    NormalizedInstance {
        requests,
        k: inst.k,
        merge_log,
        dropped,
    }
}

/// Deterministic random instance: distinct integer (x, t) pairs with |x| ≤ t ≤ time_horizon.
pub fn generate_random(
    seed: u64,
    n: usize,
    time_horizon: i64,
    weight_max: i64,
    k: usize,
) -> Instance {
    let horizon = time_horizon.max(1);
    let capacity = (horizon + 1) * (horizon + 1);
    assert!(
        (n as i64) <= capacity,
        "time horizon too small for {n} distinct requests"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut requests = Vec::with_capacity(n);
    while requests.len() < n {
        let t = rng.gen_range(0..=horizon);
        let x = rng.gen_range(-t..=t);
        if seen.insert((x, t)) {
            let w = if weight_max <= 0 {
                0
            } else {
                rng.gen_range(1..=weight_max)
            };
            requests.push(Request {
                x: Q::from_integer(x),
                t: Q::from_integer(t),
                w,
            });
        }
    }
    Instance {
        requests,
        k: k.max(1),
        v: Q::from_integer(1),
    }
}

/// One robot's waypoints (x, t), starting at the origin. Coordinates use unit speed.
pub type RobotPlan = Vec<(Q, Q)>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    pub robots: Vec<RobotPlan>,
}

/// Schedule file in the instance's original units (locations multiplied back by `v`).
pub fn serialize_schedule(schedule: &Schedule, v: Q, weight: i64) -> String {
    let mut out = String::new();
    for (i, robot) in schedule.robots.iter().enumerate() {
        let pts: Vec<String> = robot
            .iter()
            .map(|(x, t)| format!("({},{})", format_rational(&(*x * v)), format_rational(t)))
            .collect();
        let _ = writeln!(out, "robot {}: {}", i + 1, pts.join(" -> "));
    }
    let _ = writeln!(out, "weight={weight}");
    out
}

/// Parses a schedule file back into unit-speed coordinates. Returns the schedule and the declared weight.
pub fn parse_schedule(text: &str, v: Q) -> Result<(Schedule, Option<i64>), ParseError> {
    let mut robots = Vec::new();
    let mut weight = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: &str| ParseError::SyntaxError {
            line: line_no,
            column: 1,
            message: message.into(),
        };
        if let Some(w) = line.strip_prefix("weight=") {
            weight = Some(w.trim().parse().map_err(|_| syntax("bad weight"))?);
            continue;
        }
        let rest = line
            .strip_prefix("robot ")
            .ok_or_else(|| syntax("expected 'robot <i>:'"))?;
        let (_, body) = rest.split_once(':').ok_or_else(|| syntax("missing ':'"))?;
        let mut plan = Vec::new();
        for part in body.split("->") {
            let p = part.trim();
            let inner = p
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| syntax("waypoint must be (x,t)"))?;
            let (x, t) = inner
                .split_once(',')
                .ok_or_else(|| syntax("waypoint must be (x,t)"))?;
            let x = parse_rational(x.trim()).ok_or_else(|| syntax("bad location"))?;
            let t = parse_rational(t.trim()).ok_or_else(|| syntax("bad time"))?;
            plan.push((x / v, t));
        }
        robots.push(plan);
    }
    Ok((Schedule { robots }, weight))
}
