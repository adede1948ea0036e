//! Strategy comparison on dense random systems over `[-1, 1]^m`.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::generate::{random_system, GenerateError};
use crate::interval::{IBox, Interval};
use crate::solver::{solve_adaptive, SolveError, SolverConfig, Status};
use crate::strategy::Strategy;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub m: usize,
    pub d: u32,
    pub strategy: Strategy,
    pub seed: u64,
    /// Boxes explored by the solve.
    pub n: u64,
    /// Wall time in seconds.
    pub t: f64,
    pub status: Status,
    pub solutions: usize,
    pub hessian_evals: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub m: usize,
    pub d: u32,
    pub coeff_bits: u32,
    pub strategies: Vec<Strategy>,
    pub seeds: Vec<u64>,
}

pub fn unit_domain(m: usize, cfg: &SolverConfig) -> IBox {
    let one = Interval::from_f64(-1.0, 1.0).with_precision(cfg.p0);
    IBox::new(vec![one; m]).expect("non-empty domain")
}

/// Solves every (seed, strategy) cell. Rows are sorted by seed, then
/// strategy. Only the strategy of `cfg` is overridden.
pub fn run_bench(spec: &BenchSpec, cfg: &SolverConfig) -> Result<Vec<BenchRow>, BenchError> {
    let domain = unit_domain(spec.m, cfg);
    let mut rows = Vec::new();
    for &seed in &spec.seeds {
        let system = random_system(spec.m, spec.d, spec.coeff_bits, seed)?;
        for &strategy in &spec.strategies {
            let cfg = SolverConfig {
                strategy,
                ..cfg.clone()
            };
            let report = solve_adaptive(&system, &domain, &cfg)?;
            rows.push(BenchRow {
                m: spec.m,
                d: spec.d,
                strategy,
                seed,
                n: report.stats.boxes_explored,
                t: report.stats.wall_ms / 1000.0,
                status: report.status,
                solutions: report.solutions.len(),
                hessian_evals: report.stats.evals.h,
            });
        }
    }
    rows.sort_by_key(|r| (r.seed, r.strategy));
    Ok(rows)
}

/// Median of boxes explored for one strategy, averaging the two central
/// values for an even count.
pub fn median_boxes(rows: &[BenchRow], strategy: Strategy) -> Option<f64> {
    let mut n: Vec<u64> = rows.iter().filter(|r| r.strategy == strategy).map(|r| r.n).collect();
    if n.is_empty() {
        return None;
    }
    n.sort_unstable();
    let k = n.len();
    Some(if k % 2 == 1 {
        n[k / 2] as f64
    } else {
        (n[k / 2 - 1] + n[k / 2]) as f64 / 2.0
    })
}

/// One line per seed with `n` and `t` for each strategy, then a median line.
pub fn format_table(spec: &BenchSpec, rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "m={} d={} coefficient bits={} domain=[-1,1]^{}",
        spec.m, spec.d, spec.coeff_bits, spec.m
    );
    let _ = write!(out, "{:>20}", "seed");
    for s in &spec.strategies {
        let _ = write!(out, " | {:>9} {:>8}", format!("n{s}"), format!("t{s}"));
    }
    out.push('\n');
    for &seed in &spec.seeds {
        let _ = write!(out, "{seed:>20}");
        for &s in &spec.strategies {
            match rows.iter().find(|r| r.seed == seed && r.strategy == s) {
                Some(r) => {
                    let _ = write!(out, " | {:>9} {:>8.3}", r.n, r.t);
                }
                None => {
                    let _ = write!(out, " | {:>9} {:>8}", "-", "-");
                }
            }
        }
        out.push('\n');
    }
    let _ = write!(out, "{:>20}", "median");
    for &s in &spec.strategies {
        let med = median_boxes(rows, s).map_or("-".to_string(), |v| format!("{v}"));
        let _ = write!(out, " | {:>9} {:>8}", med, "");
    }
    out.push('\n');
    out
}
