use crate::{fail, read_instance, Failure, INPUT_ERROR};
use anyhow::Context;
use linecollect::instance_io::parse_schedule;
use linecollect::Q;
use num_traits::ToPrimitive;
use std::fmt::Write as _;
use std::path::Path;

const PANEL: f64 = 400.0;
const MARGIN: f64 = 30.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

fn f(q: Q) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

struct Frame {
    lo: (f64, f64),
    hi: (f64, f64),
    left: f64,
}

impl Frame {
    fn new(pts: &[(f64, f64)], left: f64) -> Self {
        let mut lo = (0.0f64, 0.0f64);
        let mut hi = (1.0f64, 1.0f64);
        for &(a, b) in pts {
            lo = (lo.0.min(a), lo.1.min(b));
            hi = (hi.0.max(a), hi.1.max(b));
        }
        Frame { lo, hi, left }
    }

    /// Screen position; the vertical axis points up.
    fn map(&self, (a, b): (f64, f64)) -> (f64, f64) {
        let sx = PANEL / (self.hi.0 - self.lo.0).max(1e-9);
        let sy = PANEL / (self.hi.1 - self.lo.1).max(1e-9);
        (
            self.left + MARGIN + (a - self.lo.0) * sx,
            MARGIN + PANEL - (b - self.lo.1) * sy,
        )
    }
}

fn panel(
    out: &mut String,
    id: &str,
    title: &str,
    frame: &Frame,
    dots: &[(f64, f64, i64)],
    lines: &[Vec<(f64, f64)>],
) {
    let _ = writeln!(out, "<g id=\"{id}\">");
    let (x0, y0) = (frame.left + MARGIN, MARGIN);
    let _ = writeln!(
        out,
        "<rect x=\"{x0:.2}\" y=\"{y0:.2}\" width=\"{PANEL:.2}\" height=\"{PANEL:.2}\" fill=\"none\" stroke=\"#999\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{x0:.2}\" y=\"{:.2}\" font-size=\"14\">{title}</text>",
        MARGIN - 8.0
    );
    for (i, line) in lines.iter().enumerate() {
        let pts: Vec<String> = line
            .iter()
            .map(|&p| {
                let (x, y) = frame.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline class=\"robot\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            pts.join(" "),
            COLORS[i % COLORS.len()]
        );
    }
    for &(a, b, w) in dots {
        let (x, y) = frame.map((a, b));
        let r = 2.0 + (w.max(0) as f64).sqrt().min(6.0);
        let _ = writeln!(
            out,
            "<circle class=\"request\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r:.2}\" fill=\"#333\"/>"
        );
    }
    let _ = writeln!(out, "</g>");
}

/// Two panels: requests and robot trajectories in (x, t), then the same in (α, β).
pub fn render(requests: &[(Q, Q, i64)], robots: &[Vec<(Q, Q)>]) -> String {
    let xt_dots: Vec<(f64, f64, i64)> = requests.iter().map(|&(x, t, w)| (f(x), f(t), w)).collect();
    let xt_lines: Vec<Vec<(f64, f64)>> = robots
        .iter()
        .map(|plan| plan.iter().map(|&(x, t)| (f(x), f(t))).collect())
        .collect();
    let ab = |(x, t): (f64, f64)| (t + x, t - x);
    let ab_dots: Vec<(f64, f64, i64)> = xt_dots
        .iter()
        .map(|&(x, t, w)| {
            let (a, b) = ab((x, t));
            (a, b, w)
        })
        .collect();
    let ab_lines: Vec<Vec<(f64, f64)>> = xt_lines
        .iter()
        .map(|l| l.iter().map(|&p| ab(p)).collect())
        .collect();

    let collect = |dots: &[(f64, f64, i64)], lines: &[Vec<(f64, f64)>]| -> Vec<(f64, f64)> {
        dots.iter()
            .map(|&(a, b, _)| (a, b))
            .chain(lines.iter().flatten().copied())
            .collect()
    };
    let xt_frame = Frame::new(&collect(&xt_dots, &xt_lines), 0.0);
    let ab_frame = Frame::new(&collect(&ab_dots, &ab_lines), PANEL + 2.0 * MARGIN);
    let width = 2.0 * (PANEL + 2.0 * MARGIN);
    let height = PANEL + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    panel(&mut out, "xt", "x-t", &xt_frame, &xt_dots, &xt_lines);
    panel(&mut out, "ab", "alpha-beta", &ab_frame, &ab_dots, &ab_lines);
    let _ = writeln!(out, "</svg>");
    out
}

pub fn run(instance: &Path, schedule: &Path, out: &Path) -> Result<(), Failure> {
    let (v, inst) = read_instance(instance)?;
    let text = std::fs::read_to_string(schedule)
        .with_context(|| format!("reading {}", schedule.display()))
        .map_err(fail(INPUT_ERROR))?;
    let (sched, _) = parse_schedule(&text, v).map_err(|e| fail(INPUT_ERROR)(e.into()))?;
    let requests: Vec<(Q, Q, i64)> = inst.requests.iter().map(|r| (r.x, r.t, r.w)).collect();
    std::fs::write(out, render(&requests, &sched.robots))
        .with_context(|| format!("writing {}", out.display()))
        .map_err(fail(INPUT_ERROR))
}
