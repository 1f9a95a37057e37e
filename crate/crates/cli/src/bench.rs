use crate::{fail, Failure, INPUT_ERROR, ORACLE_MISMATCH};
use anyhow::anyhow;
use linecollect::instance_io::{generate_random, normalize_instance};
use linecollect::oracles::ssp_dense;
use linecollect::{solve, SolverConfig};
use std::time::Instant;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

/// One row per (n, seed), then the doubling ratios of the median solver time.
pub fn run(sizes: &[usize], k: usize, seeds: &[u64], baseline: bool) -> Result<(), Failure> {
    if sizes.is_empty() || seeds.is_empty() || k == 0 || sizes.contains(&0) {
        return Err(fail(INPUT_ERROR)(anyhow!(
            "bench needs non-empty --sizes and --seeds, and k >= 1"
        )));
    }
    println!("n,seed,k,solver_ms,ssp_ms,ratio,weight,ssp_weight");
    let mut medians = Vec::new();
    for &n in sizes {
        let mut times = Vec::new();
        for &seed in seeds {
            let horizon = (n as i64 / 4).max(2);
            let horizon = if (n as i64) > (horizon + 1) * (horizon + 1) {
                n as i64
            } else {
                horizon
            };
            let inst = normalize_instance(&generate_random(seed, n, horizon, 20, k));
            let start = Instant::now();
            let sol = solve(&inst, SolverConfig::default())
                .map_err(|e| fail(crate::INVARIANT_BREACH)(e.into()))?;
            let solver_ms = start.elapsed().as_secs_f64() * 1e3;
            times.push(solver_ms);
            if baseline {
                let start = Instant::now();
                let ssp = ssp_dense(&sol.points, k).last().copied().unwrap_or(0);
                let ssp_ms = start.elapsed().as_secs_f64() * 1e3;
                println!(
                    "{n},{seed},{k},{solver_ms:.3},{ssp_ms:.3},{:.3},{},{ssp}",
                    ssp_ms / solver_ms.max(1e-9),
                    sol.weight
                );
                if ssp != sol.weight {
                    return Err(fail(ORACLE_MISMATCH)(anyhow!(
                        "n={n} seed={seed}: solver {} vs ssp {ssp}",
                        sol.weight
                    )));
                }
            } else {
                println!("{n},{seed},{k},{solver_ms:.3},,,{},", sol.weight);
            }
        }
        medians.push((n, median(times)));
    }
    for w in medians.windows(2) {
        let ((n0, t0), (n1, t1)) = (w[0], w[1]);
        println!("# doubling n={n0}->{n1} ratio={:.3}", t1 / t0.max(1e-9));
    }
    Ok(())
}
