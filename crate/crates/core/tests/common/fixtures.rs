use linecollect::oracles::brute_force;
use linecollect::residual::ResidualNetwork;
use linecollect::solver::{follows, shortest_path};
use linecollect::{Node, PointId, PointSet, SolverConfig, Q};

/// A residual network together with its unique shortest path.
pub struct TraceFixture {
    pub name: &'static str,
    pub alpha: &'static [i64],
    pub beta: &'static [i64],
    pub weight: &'static [i64],
    pub red: &'static [&'static [PointId]],
    /// (kind, point): 0 = s, 1 = t, 2 = minus node, 3 = plus node.
    pub path: &'static [(u8, PointId)],
    pub cost: i64,
}

/// Worked k = 2 example. Ids 1..=9 are y2, y3, y4, y5, b3, b4, b2, b5, b6.
pub const WORKED: TraceFixture = TraceFixture {
    name: "worked k=2",
    alpha: &[3, 4, 5, 6, 1, 2, 7, 8, 9],
    beta: &[1, 5, 8, 9, 6, 7, 2, 3, 4],
    weight: &[1; 9],
    red: &[&[1, 2, 3, 4]],
    // s, b3, b4, y4, y3, y2, b2, b5, b6, t
    path: &[
        (0, 0),
        (2, 5),
        (3, 5),
        (2, 6),
        (3, 6),
        (2, 3),
        (3, 2),
        (2, 2),
        (3, 1),
        (2, 7),
        (3, 7),
        (2, 8),
        (3, 8),
        (2, 9),
        (3, 9),
        (1, 0),
    ],
    cost: -4,
};

pub const WORKED_NAMES: [&str; 9] = ["y2", "y3", "y4", "y5", "b3", "b4", "b2", "b5", "b6"];

pub const ZIGZAG3: TraceFixture = TraceFixture {
    name: "zigzag k=3",
    alpha: &[14, 6, 11, 10, 13, 12, 1, 9, 5, 4, 7, 8, 2, 3],
    beta: &[6, 2, 11, 8, 12, 7, 4, 1, 10, 3, 14, 5, 13, 9],
    weight: &[13, 16, 19, 6, 4, 6, 20, 12, 18, 12, 19, 2, 16, 8],
    red: &[&[7, 14, 9, 11], &[2, 12, 4, 3, 5]],
    path: &[
        (0, 0),
        (2, 10),
        (3, 10),
        (2, 9),
        (3, 14),
        (2, 14),
        (3, 7),
        (2, 13),
        (3, 13),
        (2, 11),
        (3, 9),
        (2, 3),
        (3, 4),
        (2, 4),
        (3, 12),
        (2, 1),
        (3, 1),
        (1, 0),
    ],
    cost: -27,
};

pub const ZIGZAG4: TraceFixture = TraceFixture {
    name: "zigzag k=4",
    alpha: &[6, 2, 3, 14, 5, 11, 1, 7, 13, 10, 9, 8, 12, 4],
    beta: &[8, 12, 6, 7, 4, 1, 5, 9, 2, 10, 3, 13, 11, 14],
    weight: &[15, 8, 13, 5, 20, 2, 8, 5, 10, 6, 17, 9, 1, 3],
    red: &[&[7, 3, 1, 12], &[5, 8, 10, 13], &[11, 4]],
    path: &[
        (0, 0),
        (2, 6),
        (3, 6),
        (2, 9),
        (3, 9),
        (2, 4),
        (3, 11),
        (2, 10),
        (3, 8),
        (2, 12),
        (3, 1),
        (2, 8),
        (3, 5),
        (2, 1),
        (3, 3),
        (2, 14),
        (3, 14),
        (1, 0),
    ],
    cost: -15,
};

pub const ALL: [&TraceFixture; 3] = [&WORKED, &ZIGZAG3, &ZIGZAG4];

impl TraceFixture {
    pub fn points(&self) -> PointSet {
        let reqs: Vec<(Q, Q, i64)> = self
            .alpha
            .iter()
            .zip(self.beta)
            .zip(self.weight)
            .map(|((&a, &b), &w)| (Q::new(a - b, 2), Q::new(a + b, 2), w))
            .collect();
        PointSet::from_requests(&reqs).unwrap()
    }

    pub fn red_paths(&self) -> Vec<Vec<PointId>> {
        self.red.iter().map(|p| p.to_vec()).collect()
    }

    pub fn nodes(&self) -> Vec<Node> {
        self.path
            .iter()
            .map(|&(kind, p)| match kind {
                0 => Node::S,
                1 => Node::T,
                2 => Node::Minus(p),
                _ => Node::Plus(p),
            })
            .collect()
    }

    /// Checks that the red paths are optimal, and that A_k at several base-case
    /// thresholds returns the expected path with a trace that follows it.
    pub fn check(&self) -> Result<(), String> {
        let pts = self.points();
        let red = self.red_paths();
        let k = red.len() + 1;
        let red_weight: i64 = red.concat().iter().map(|&p| pts.weight(p)).sum();
        if red_weight != brute_force(&pts, k - 1).unwrap() {
            return Err(format!("{}: red paths are not optimal", self.name));
        }
        if red_weight - self.cost != brute_force(&pts, k).unwrap() {
            return Err(format!("{}: expected cost is not optimal", self.name));
        }
        let want = self.nodes();
        let net = ResidualNetwork::new(&pts, red).map_err(|e| e.to_string())?;
        for threshold in [1, 2, 3, 4, 8, 32] {
            let cfg = SolverConfig {
                base_case_threshold: threshold,
                trace: true,
            };
            let sp = shortest_path(&net, cfg).map_err(|e| e.to_string())?;
            if sp.weight != self.cost || sp.path != want {
                return Err(format!(
                    "{}: threshold {threshold} found {:?} ({})",
                    self.name, sp.path, sp.weight
                ));
            }
            if !follows(&sp.trace.unwrap_or_default(), &pts, &want) {
                return Err(format!(
                    "{}: threshold {threshold} trace does not follow",
                    self.name
                ));
            }
        }
        Ok(())
    }
}
