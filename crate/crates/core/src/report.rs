//! JSON and plain-text renderings of a [`SolveReport`].
//!
//! Every bound is written twice: as a decimal approximation in `box` and as
//! an exact hexadecimal-significand literal in `hex`.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::enclosure::EvalCounts;
use crate::interval::IBox;
use crate::solver::{NodeCounts, SolveReport, SolveStats, Status, TriggerCounts, UndeterminedReason};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonSolution {
    #[serde(rename = "box")]
    pub bounds: Vec<[String; 2]>,
    pub precision: u32,
    pub hex: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonUndetermined {
    #[serde(rename = "box")]
    pub bounds: Vec<[String; 2]>,
    pub hex: Vec<[String; 2]>,
    pub reason: UndeterminedReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonStats {
    pub boxes_explored: u64,
    pub node_counts: NodeCounts,
    pub deferred: u64,
    pub precision_triggers: TriggerCounts,
    pub evals: EvalCounts,
    pub max_precision_used: u32,
    pub precision_passes: Vec<u32>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub status: Status,
    pub solutions: Vec<JsonSolution>,
    pub undetermined: Vec<JsonUndetermined>,
    pub stats: JsonStats,
}

fn decimal_bounds(b: &IBox) -> Vec<[String; 2]> {
    b.iter()
        .map(|x| {
            let s = x.to_strings();
            [s.lo_dec, s.hi_dec]
        })
        .collect()
}

fn hex_bounds(b: &IBox) -> Vec<[String; 2]> {
    b.iter()
        .map(|x| {
            let s = x.to_strings();
            [s.lo_hex, s.hi_hex]
        })
        .collect()
}

impl From<&SolveStats> for JsonStats {
    fn from(s: &SolveStats) -> Self {
        JsonStats {
            boxes_explored: s.boxes_explored,
            node_counts: s.node_counts,
            deferred: s.deferred,
            precision_triggers: s.precision_triggers,
            evals: s.evals,
            max_precision_used: s.max_precision_used,
            precision_passes: s.precision_passes.clone(),
            wall_ms: s.wall_ms,
        }
    }
}

impl From<&SolveReport> for JsonReport {
    fn from(r: &SolveReport) -> Self {
        JsonReport {
            status: r.status,
            solutions: r
                .solutions
                .iter()
                .map(|s| JsonSolution {
                    bounds: decimal_bounds(&s.bounds),
                    precision: s.precision.bits(),
                    hex: hex_bounds(&s.bounds),
                })
                .collect(),
            undetermined: r
                .undetermined
                .iter()
                .map(|u| JsonUndetermined {
                    bounds: decimal_bounds(&u.bounds),
                    hex: hex_bounds(&u.bounds),
                    reason: u.reason,
                })
                .collect(),
            stats: JsonStats::from(&r.stats),
        }
    }
}

pub fn to_json(report: &SolveReport) -> String {
    serde_json::to_string_pretty(&JsonReport::from(report)).expect("report serializes")
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Complete => "complete",
        Status::PrecisionExhausted => "precision exhausted",
        Status::MinWidthReached => "minimal width reached",
    }
}

fn write_box(out: &mut String, vars: &[String], b: &IBox) {
    for (name, x) in vars.iter().zip(b.iter()) {
        let _ = writeln!(out, "    {name} = {x}");
    }
}

/// Plain-text report; `vars` names the box components.
pub fn to_text(report: &SolveReport, vars: &[String], with_stats: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "status: {} ({})", report.status.code(), status_text(report.status));
    let _ = writeln!(out, "solutions: {}", report.solutions.len());
    for (k, s) in report.solutions.iter().enumerate() {
        let _ = writeln!(out, "  #{} at {} bits", k + 1, s.precision.bits());
        write_box(&mut out, vars, &s.bounds);
    }
    let _ = writeln!(out, "undetermined: {}", report.undetermined.len());
    for (k, u) in report.undetermined.iter().enumerate() {
        let reason = match u.reason {
            UndeterminedReason::MinWidth => "minimal width",
            UndeterminedReason::Precision => "precision",
        };
        let _ = writeln!(out, "  #{} ({reason})", k + 1);
        write_box(&mut out, vars, &u.bounds);
    }
    if with_stats {
        let s = &report.stats;
        let n = &s.node_counts;
        let t = &s.precision_triggers;
        let e = &s.evals;
        let passes: Vec<String> = s.precision_passes.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "stats:");
        let _ = writeln!(out, "  boxes explored: {}", s.boxes_explored);
        let _ = writeln!(
            out,
            "  nodes: n1={} n2={} n3={} n4={} n5={} deferred={}",
            n.n1, n.n2, n.n3, n.n4, n.n5, s.deferred
        );
        let _ = writeln!(out, "  precision triggers: c1={} c2={} c3={}", t.c1, t.c2, t.c3);
        let _ = writeln!(
            out,
            "  evaluations: f={} j={} h={} h_krawczyk={} h_reused={}",
            e.f, e.j, e.h, e.h_krawczyk, e.h_reused
        );
        let _ = writeln!(out, "  precision passes: {}", passes.join(", "));
        let _ = writeln!(out, "  max precision used: {}", s.max_precision_used);
        let _ = writeln!(out, "  wall time: {:.3} ms", s.wall_ms);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::BigFloat;
    use crate::interval::parse_box;
    use crate::poly::parse_system;
    use crate::solver::{solve_adaptive, SolverConfig};

    fn report() -> SolveReport {
        let sys = parse_system("vars x\np: x^2 - 2").unwrap();
        let cfg = SolverConfig::default();
        solve_adaptive(&sys, &parse_box("[0,2]", cfg.p0).unwrap(), &cfg).unwrap()
    }

    #[test]
    fn json_layout() {
        let r = report();
        let v: serde_json::Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(v["status"], 0);
        let sol = &v["solutions"][0];
        assert_eq!(sol["precision"], 53);
        assert_eq!(sol["box"].as_array().unwrap().len(), 1);
        assert!(sol["hex"][0][0].as_str().unwrap().starts_with("0x1."));
        for key in ["n1", "n2", "n3", "n4", "n5"] {
            assert!(v["stats"]["node_counts"][key].is_u64());
        }
        for key in ["c1", "c2", "c3"] {
            assert!(v["stats"]["precision_triggers"][key].is_u64());
        }
        for key in ["f", "j", "h"] {
            assert!(v["stats"]["evals"][key].is_u64());
        }
        assert_eq!(v["stats"]["max_precision_used"], 53);
        assert!(v["stats"]["wall_ms"].is_number());
        assert!(v["undetermined"].as_array().unwrap().is_empty());
    }

    #[test]
    fn hex_bounds_are_exact() {
        let r = report();
        let back: JsonReport = serde_json::from_str(&to_json(&r)).unwrap();
        let [lo, hi] = &back.solutions[0].hex[0];
        let b = &r.solutions[0].bounds[0];
        assert_eq!(BigFloat::parse_hex(lo).unwrap(), b.lo());
        assert_eq!(BigFloat::parse_hex(hi).unwrap(), b.hi());
        assert_eq!(back, JsonReport::from(&r));
    }

    #[test]
    fn text_layout() {
        let r = report();
        let text = to_text(&r, &["x".to_string()], true);
        assert!(text.starts_with("status: 0 (complete)\nsolutions: 1\n"));
        assert!(text.contains("    x = ["));
        assert!(text.contains("precision passes: 53"));
        assert!(!to_text(&r, &["x".to_string()], false).contains("stats:"));
    }
}
